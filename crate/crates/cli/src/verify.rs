//! Built-in oracle suites behind the `verify` command. Random instances come
//! from a seeded ChaCha generator, so every run with the same seed checks
//! the same matrices.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use nilentropy_core::intpoly::{
    cyclotomic_polynomial, is_cyclotomic_product, mahler_measure, roots, smyth_constant,
    voutier_bound, DEFAULT_ROOT_TOL,
};
use nilentropy_core::spectral::{
    entropy_lower_bound_with_tol, exterior_power_matrix, spectral_radius,
};
use nilentropy_core::{IntMatrix, IntPolynomial};

use crate::report::{fmt_sig, sig};

pub const DEFAULT_SEED: u64 = 20_240_917;
/// Decimal digits of Smyth's constant quoted in the literature.
pub const SMYTH_DIGITS: &str = "1.32471795";
pub const LEHMER_MEASURE: f64 = 1.176_280_82;

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub tol: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            tol: DEFAULT_ROOT_TOL,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub instances: usize,
    /// Largest observed deviation from the oracle, where one is measured.
    pub max_discrepancy: Option<f64>,
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

impl VerifySummary {
    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verify (seed {})", self.seed);
        for s in &self.suites {
            let disc = s.max_discrepancy.map_or("-".to_string(), fmt_sig);
            let _ = writeln!(
                out,
                "  {:<4} {:<24} n={:<4} max_dev={:<16} {:>8.3}s  {}",
                if s.passed { "PASS" } else { "FAIL" },
                s.name,
                s.instances,
                disc,
                s.seconds,
                s.detail
            );
        }
        let _ = writeln!(
            out,
            "{}",
            if self.passed {
                "all suites passed"
            } else {
                "some suites FAILED"
            }
        );
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            name: &'a str,
            passed: bool,
            instances: usize,
            max_discrepancy: Option<f64>,
            detail: &'a str,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            seed: u64,
            passed: bool,
            suites: Vec<Row<'a>>,
        }
        let doc = Doc {
            seed: self.seed,
            passed: self.passed,
            suites: self
                .suites
                .iter()
                .map(|s| Row {
                    name: s.name,
                    passed: s.passed,
                    instances: s.instances,
                    max_discrepancy: s.max_discrepancy.map(sig),
                    detail: &s.detail,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("summary serializes");
        s.push('\n');
        s
    }
}

type Outcome = Result<(usize, Option<f64>, String), String>;

fn run(name: &'static str, f: impl FnOnce() -> Outcome) -> SuiteResult {
    let start = Instant::now();
    let outcome = f();
    let seconds = start.elapsed().as_secs_f64();
    match outcome {
        Ok((instances, max_discrepancy, detail)) => SuiteResult {
            name,
            passed: true,
            instances,
            max_discrepancy,
            detail,
            seconds,
        },
        Err(detail) => SuiteResult {
            name,
            passed: false,
            instances: 0,
            max_discrepancy: None,
            detail,
            seconds,
        },
    }
}

pub fn cmd_verify(opts: &VerifyOptions) -> VerifySummary {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tol = opts.tol;
    let suites = vec![
        run("smyth_constant", || smyth_suite(tol)),
        run("voutier", voutier_suite),
        run("exterior_oracle", || exterior_suite(&mut rng, tol)),
        run("mahler", || mahler_suite(&mut rng, tol)),
        run("iterate_scaling", || iterate_suite(&mut rng, tol)),
        run("direct_sum", || direct_sum_suite(&mut rng, tol)),
        run("unimodular_conjugation", || {
            conjugation_suite(&mut rng, tol)
        }),
        run("expanding_determinant", || expanding_suite(&mut rng, tol)),
    ];
    let passed = suites.iter().all(|s| s.passed);
    VerifySummary {
        seed: opts.seed,
        suites,
        passed,
    }
}

/// Truncates (does not round) `x` to `places` decimals.
pub fn truncated(x: f64, places: usize) -> String {
    let s = format!("{:.*}", places + 6, x);
    let cut = s.find('.').map_or(s.len(), |p| p + 1 + places);
    s[..cut].to_string()
}

fn smyth_suite(tol: f64) -> Outcome {
    let tau = smyth_constant(1e-15);
    let digits = truncated(tau, 8);
    if digits != SMYTH_DIGITS {
        return Err(format!("tau0 = {digits}..., expected {SMYTH_DIGITS}"));
    }
    let p = IntPolynomial::from_i64_descending(&[1, 0, -1, -1]);
    let rs = roots(&p, tol).map_err(|e| e.to_string())?;
    let real = rs
        .roots
        .iter()
        .filter(|r| r.value.im.abs() <= r.radius)
        .map(|r| r.value.re)
        .next()
        .ok_or("x^3 - x - 1 has no certified real root")?;
    let dev = (real - tau).abs();
    if dev > 2.0 * tol.max(1e-15) {
        return Err(format!(
            "root of x^3 - x - 1 is {real}, bisection gives {tau}"
        ));
    }
    Ok((1, Some(dev), format!("tau0 = {}", fmt_sig(tau))))
}

fn voutier_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    for d in 2..=64u64 {
        let x = d as f64;
        let oracle = 1.0 + 0.25 * (x.ln().ln() / x.ln()).powi(3);
        let v = voutier_bound(d).map_err(|e| e.to_string())?;
        worst = worst.max((v - oracle).abs());
    }
    if worst > 1e-15 {
        return Err(format!("formula mismatch {worst}"));
    }
    let t2 = voutier_bound(2).map_err(|e| e.to_string())?;
    Ok((
        63,
        Some(worst),
        format!(
            "tau(2) = {} < 1, tau(3) = {}",
            fmt_sig(t2),
            fmt_sig(voutier_bound(3).unwrap())
        ),
    ))
}

pub fn random_matrix(rng: &mut impl Rng, d: usize, bound: i64) -> IntMatrix {
    IntMatrix::from_fn(d, d, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}

/// Product of random elementary integer matrices, with its inverse.
pub fn random_unimodular(rng: &mut impl Rng, d: usize) -> (IntMatrix, IntMatrix) {
    let mut u = IntMatrix::identity(d);
    let mut inv = IntMatrix::identity(d);
    for _ in 0..3 * d {
        let (i, j) = (rng.gen_range(0..d), rng.gen_range(0..d));
        let mut e = IntMatrix::identity(d);
        let mut e_inv = IntMatrix::identity(d);
        if i != j {
            let c = rng.gen_range(-2i64..=2);
            e[(i, j)] = BigInt::from(c);
            e_inv[(i, j)] = BigInt::from(-c);
        } else {
            e[(i, i)] = -BigInt::one();
            e_inv[(i, i)] = -BigInt::one();
        }
        u = u.mul(&e);
        inv = e_inv.mul(&inv);
    }
    (u, inv)
}

fn bound_of(a: &IntMatrix, tol: f64) -> Result<f64, String> {
    entropy_lower_bound_with_tol(a, tol)
        .map(|r| r.entropy_bound)
        .map_err(|e| format!("{e} for {a:?}"))
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

fn exterior_suite(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut n = 0;
    for idx in 0..400 {
        let d = if idx < 200 { 3 } else { rng.gen_range(1..=4) };
        let a = random_matrix(rng, d, 3);
        let sp = entropy_lower_bound_with_tol(&a, tol)
            .map_err(|e| e.to_string())?
            .sp_exterior;
        let mut oracle: f64 = 1.0;
        for k in 1..=d {
            let ext = exterior_power_matrix(&a, k).map_err(|e| e.to_string())?;
            oracle = oracle.max(spectral_radius(&ext).map_err(|e| e.to_string())?);
        }
        let dev = (sp - oracle).abs();
        worst = worst.max(dev);
        if dev >= 1e-6 {
            return Err(format!("sp {sp} vs minor oracle {oracle} for {a:?}"));
        }
        n += 1;
    }
    Ok((
        n,
        Some(worst),
        "200 of size 3, 200 of size 1..4, entries in [-3, 3]".into(),
    ))
}

fn random_polynomial(rng: &mut impl Rng) -> IntPolynomial {
    let deg = rng.gen_range(1..=6);
    let mut c: Vec<BigInt> = (0..=deg)
        .map(|_| BigInt::from(rng.gen_range(-5i64..=5)))
        .collect();
    if c[deg].is_zero() {
        c[deg] = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -2 });
    }
    IntPolynomial::from_ascending(c)
}

fn mahler_suite(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let lehmer = IntPolynomial::from_i64_descending(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let m = mahler_measure(&lehmer, tol).map_err(|e| e.to_string())?;
    if (m - LEHMER_MEASURE).abs() > 1e-6 {
        return Err(format!("M(Lehmer) = {m}"));
    }
    let phi5 = cyclotomic_polynomial(5);
    if !is_cyclotomic_product(&phi5)
        || mahler_measure(&phi5, tol).map_err(|e| e.to_string())? != 1.0
    {
        return Err("M(Phi_5) is not exactly 1".into());
    }
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (p, q) = (random_polynomial(rng), random_polynomial(rng));
        let mp = mahler_measure(&p, tol).map_err(|e| e.to_string())?;
        let mq = mahler_measure(&q, tol).map_err(|e| e.to_string())?;
        let mpq = mahler_measure(&p.mul(&q), tol).map_err(|e| e.to_string())?;
        let rel = (mpq - mp * mq).abs() / mpq.abs();
        worst = worst.max(rel);
        if rel > 1e-6 {
            return Err(format!(
                "M(pq) = {mpq}, M(p)M(q) = {} for p = {p}, q = {q}",
                mp * mq
            ));
        }
    }
    Ok((
        52,
        Some(worst),
        format!("M(Lehmer) = {}, M(Phi_5) = 1, 50 random pairs", fmt_sig(m)),
    ))
}

fn iterate_suite(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=4);
        let a = random_matrix(rng, d, 3);
        let (b1, b2) = (bound_of(&a, tol)?, bound_of(&a.mul(&a), tol)?);
        worst = worst.max((b2 - 2.0 * b1).abs());
        if !close(b2, 2.0 * b1, 1e-8) {
            return Err(format!(
                "bound(A^2) = {b2}, 2 bound(A) = {} for {a:?}",
                2.0 * b1
            ));
        }
    }
    Ok((100, Some(worst), "bound(A^2) = 2 bound(A)".into()))
}

fn direct_sum_suite(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let (da, db) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let a = random_matrix(rng, da, 3);
        let b = random_matrix(rng, db, 3);
        let sum = IntMatrix::direct_sum(&[a.clone(), b.clone()]);
        let (ba, bb, bs) = (bound_of(&a, tol)?, bound_of(&b, tol)?, bound_of(&sum, tol)?);
        worst = worst.max((bs - ba - bb).abs());
        if !close(bs, ba + bb, 1e-8) {
            return Err(format!(
                "bound(A + B) = {bs}, bound(A) + bound(B) = {}",
                ba + bb
            ));
        }
    }
    Ok((
        100,
        Some(worst),
        "bound(A (+) B) = bound(A) + bound(B)".into(),
    ))
}

fn conjugation_suite(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=4);
        let a = random_matrix(rng, d, 3);
        let (u, u_inv) = random_unimodular(rng, d);
        let c = u.mul(&a).mul(&u_inv);
        let (ba, bc) = (bound_of(&a, tol)?, bound_of(&c, tol)?);
        worst = worst.max((ba - bc).abs());
        if !close(ba, bc, 1e-8) {
            return Err(format!("bound(A) = {ba}, bound(U A U^-1) = {bc} for {a:?}"));
        }
    }
    Ok((100, Some(worst), "bound(U A U^-1) = bound(A)".into()))
}

/// `U T U⁻¹` with `T` upper triangular and diagonal entries of modulus at
/// least 2.
pub fn random_expanding(rng: &mut impl Rng, d: usize) -> IntMatrix {
    let t = IntMatrix::from_fn(d, d, |r, c| {
        if r == c {
            BigInt::from([-3i64, -2, 2, 3][rng.gen_range(0..4)])
        } else if c > r {
            BigInt::from(rng.gen_range(-2i64..=2))
        } else {
            BigInt::zero()
        }
    });
    let (u, u_inv) = random_unimodular(rng, d);
    u.mul(&t).mul(&u_inv)
}

fn expanding_suite(rng: &mut ChaCha8Rng, tol: f64) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let d = rng.gen_range(1..=4);
        let a = random_expanding(rng, d);
        let report = entropy_lower_bound_with_tol(&a, tol).map_err(|e| e.to_string())?;
        let det = a.determinant().abs();
        if !report.flags.expanding || det < BigInt::from(2) {
            return Err(format!("expanding flag or |det| >= 2 fails for {a:?}"));
        }
        let p = report.char_poly.clone();
        let product: f64 = roots(&p, tol)
            .map_err(|e| e.to_string())?
            .roots
            .iter()
            .map(|r| r.modulus().powi(r.multiplicity as i32))
            .product();
        let det_f = det.to_f64().unwrap_or(f64::INFINITY);
        let dev = (product - det_f).abs() / det_f;
        worst = worst.max(dev);
        if dev > 1e-8 || report.sp_exterior != det_f {
            return Err(format!("sp = {product} vs |det| = {det} for {a:?}"));
        }
    }
    Ok((
        100,
        Some(worst),
        "sp = |det A| >= 2, eigenvalue product vs determinant".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_does_not_round() {
        assert_eq!(truncated(1.324_717_957, 8), "1.32471795");
        assert_eq!(truncated(0.999_999_999, 3), "0.999");
    }

    #[test]
    fn unimodular_pairs_are_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 1..=4 {
            let (u, inv) = random_unimodular(&mut rng, d);
            assert_eq!(u.mul(&inv), IntMatrix::identity(d));
            assert!(u.determinant().abs().is_one());
        }
    }

    #[test]
    fn default_run_passes() {
        let summary = cmd_verify(&VerifyOptions::default());
        assert!(summary.passed, "{}", summary.to_text());
        let smyth = summary.suite("smyth_constant").unwrap();
        assert!(smyth.detail.starts_with("tau0 = 1.32471795"));
        assert!(
            summary
                .suite("exterior_oracle")
                .unwrap()
                .max_discrepancy
                .unwrap()
                < 1e-6
        );
    }
}
