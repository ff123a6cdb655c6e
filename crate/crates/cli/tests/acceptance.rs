//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nilentropy_cli::verify::{random_matrix, random_unimodular, truncated};
use nilentropy_cli::{
    cmd_bound, cmd_simulate, cmd_verify, parse_document, BoundOptions, SimulateOptions,
    VerifyOptions,
};
use nilentropy_core::intpoly::{
    cyclotomic_polynomial, is_cyclotomic_product, mahler_measure, smyth_constant, DEFAULT_ROOT_TOL,
};
use nilentropy_core::spectral::{entropy_lower_bound, exterior_power_matrix, spectral_radius};
use nilentropy_core::{IntMatrix, IntPolynomial};

const CAT_BOUND: f64 = 0.962_423_650_1;
const SEED: u64 = 0x5eed_acce;

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let summary = cmd_verify(&VerifyOptions::default());
    let secs = start.elapsed().as_secs_f64();
    let suite = summary.suite("smyth_constant").expect("suite exists");
    let digits = truncated(smyth_constant(1e-15), 8);
    outcome(
        suite.passed && digits == "1.32471795" && secs < 1.0,
        format!("tau0 = {digits}..., verify ran in {secs:.3}s (limit 1s)"),
    )
}

const CAT_TORUS: &str = r#"{
  "kind": "torus_map",
  "rows": [[2, 1], [1, 1]],
  "translation": [0, 0],
  "cover": [[2, 0], [0, 2]]
}"#;

fn criterion_2() -> Outcome {
    let doc = parse_document(CAT_TORUS).expect("document parses");
    let start = Instant::now();
    let report = match cmd_simulate(&doc, &SimulateOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let secs = start.elapsed().as_secs_f64();
    let est = report
        .simulation
        .expect("simulation record")
        .estimate
        .estimate;
    let diff = (est - CAT_BOUND).abs();
    outcome(
        diff < 0.15 && secs < 60.0,
        format!("estimate {est:.6}, |diff| {diff:.6} (tol 0.15), {secs:.2}s (limit 60s)"),
    )
}

fn criterion_3() -> Outcome {
    let doc = parse_document(CAT_TORUS).expect("document parses");
    let opts = SimulateOptions {
        cover: true,
        ..SimulateOptions::default()
    };
    let start = Instant::now();
    let report = match cmd_simulate(&doc, &opts) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let secs = start.elapsed().as_secs_f64();
    let sim = report.simulation.expect("simulation record");
    let cover = sim.cover.expect("cover record");
    let diff = (cover.estimate.estimate - sim.estimate.estimate).abs();
    outcome(
        diff < 0.1 && secs < 120.0,
        format!(
            "base {:.6}, lift {:.6}, |diff| {diff:.6} (tol 0.1), {secs:.2}s (limit 120s)",
            sim.estimate.estimate, cover.estimate.estimate
        ),
    )
}

const HEISENBERG: &str = r#"{
  "kind": "algebra_endo",
  "dimension": 3,
  "brackets": [[1, 2, 3, 1, 1]],
  "endomorphism": [[2, 0, 0], [0, 3, 0], [0, 0, 6]]
}"#;

fn criterion_4() -> Outcome {
    let doc = parse_document(HEISENBERG).expect("document parses");
    let report = match cmd_bound(&doc, &BoundOptions::default()) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let lin = report.linearization.expect("linearization record");
    let diff = (report.bound.entropy_bound - 36f64.ln()).abs();
    outcome(
        lin.block_sizes == [2, 1] && lin.spectral_consistency && diff < 1e-9,
        format!(
            "blocks {:?}, consistency {}, |bound - log 36| {diff:.2e} (tol 1e-9)",
            lin.block_sizes, lin.spectral_consistency
        ),
    )
}

/// `max_k rho(wedge^k A)`, with the empty power contributing 1.
fn minor_oracle(a: &IntMatrix) -> f64 {
    let d = a.rows();
    (1..=d)
        .map(|k| spectral_radius(&exterior_power_matrix(a, k).unwrap()).unwrap())
        .fold(1.0, f64::max)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let count = 250;
    for _ in 0..count {
        let d = rng.gen_range(1..=4);
        let a = random_matrix(&mut rng, d, 3);
        let sp = match entropy_lower_bound(&a) {
            Ok(r) => r.sp_exterior,
            Err(e) => return outcome(false, format!("{e} for {a:?}")),
        };
        let oracle = minor_oracle(&a);
        worst = worst.max((sp - oracle).abs() / oracle.max(1.0));
    }
    outcome(
        worst < 1e-6,
        format!("{count} matrices, d <= 4, max discrepancy {worst:.2e} (tol 1e-6)"),
    )
}

fn random_poly(rng: &mut impl Rng) -> IntPolynomial {
    let deg = rng.gen_range(1..=5);
    let mut c: Vec<BigInt> = (0..deg)
        .map(|_| BigInt::from(rng.gen_range(-3..=3)))
        .collect();
    c.push(BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 }));
    IntPolynomial::from_ascending(c)
}

fn criterion_6() -> Outcome {
    let tol = DEFAULT_ROOT_TOL;
    let lehmer = IntPolynomial::from_i64_descending(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1]);
    let m_lehmer = mahler_measure(&lehmer, tol).unwrap();
    let phi5 = cyclotomic_polynomial(5);
    let m_phi5 = mahler_measure(&phi5, tol).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (p, q) = (random_poly(&mut rng), random_poly(&mut rng));
        let mp = mahler_measure(&p, tol).unwrap();
        let mq = mahler_measure(&q, tol).unwrap();
        let mpq = mahler_measure(&p.mul(&q), tol).unwrap();
        worst = worst.max((mpq - mp * mq).abs() / mpq);
    }
    let lehmer_ok = (m_lehmer - 1.176_280_82).abs() < 1e-6;
    outcome(
        lehmer_ok && m_phi5 == 1.0 && is_cyclotomic_product(&phi5) && worst < 1e-6,
        format!(
            "M(Lehmer) {m_lehmer:.10}, M(Phi_5) {m_phi5}, 50 pairs max rel {worst:.2e} (tol 1e-6)"
        ),
    )
}

fn criterion_7() -> Outcome {
    let c = IntMatrix::from_i64_rows(&[[0, 0, 1], [1, 0, 1], [0, 1, 0]]);
    let r = entropy_lower_bound(&c).unwrap();
    let smyth = r.absolute_bounds.iter().any(|b| b.name == "smyth");
    let non_reciprocal = !r.flags.reciprocal_charpoly;
    let diff = (r.entropy_bound - smyth_constant(1e-15).ln()).abs();
    outcome(
        smyth && non_reciprocal && diff < 1e-8,
        format!(
            "smyth attached {smyth}, non-reciprocal {non_reciprocal}, |bound - log tau0| {diff:.2e} (tol 1e-8)"
        ),
    )
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-8 * a.abs().max(b.abs()).max(1.0)
}

fn bound(a: &IntMatrix) -> Result<f64, String> {
    entropy_lower_bound(a)
        .map(|r| r.entropy_bound)
        .map_err(|e| format!("{e} for {a:?}"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let n = 100;
    let start = Instant::now();
    let mut fails = Vec::new();
    let run = |rng: &mut ChaCha8Rng| -> Result<[usize; 4], String> {
        let mut bad = [0; 4];
        for _ in 0..n {
            let d = rng.gen_range(1..=4);
            let a = random_matrix(rng, d, 3);
            if !close(bound(&a.mul(&a))?, 2.0 * bound(&a)?) {
                bad[0] += 1;
            }
        }
        for _ in 0..n {
            let (da, db) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let a = random_matrix(rng, da, 3);
            let b = random_matrix(rng, db, 3);
            let sum = IntMatrix::direct_sum(&[a.clone(), b.clone()]);
            if !close(bound(&sum)?, bound(&a)? + bound(&b)?) {
                bad[1] += 1;
            }
        }
        for _ in 0..n {
            let d = rng.gen_range(1..=4);
            let a = random_matrix(rng, d, 3);
            let (u, u_inv) = random_unimodular(rng, d);
            if !close(bound(&u.mul(&a).mul(&u_inv))?, bound(&a)?) {
                bad[2] += 1;
            }
        }
        for _ in 0..n {
            let d = rng.gen_range(1..=4);
            let diag: Vec<i64> = (0..d)
                .map(|_| rng.gen_range(2..=4) * if rng.gen_bool(0.5) { 1 } else { -1 })
                .collect();
            let mut t = IntMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    BigInt::from(diag[i])
                } else if j > i {
                    BigInt::from(rng.gen_range(-2..=2))
                } else {
                    BigInt::from(0)
                }
            });
            let (u, u_inv) = random_unimodular(rng, d);
            t = u.mul(&t).mul(&u_inv);
            let r = entropy_lower_bound(&t).map_err(|e| e.to_string())?;
            let det: f64 = diag.iter().map(|x| x.abs() as f64).product();
            if !(r.flags.expanding && close(r.sp_exterior, det) && r.sp_exterior >= 2.0) {
                bad[3] += 1;
            }
        }
        Ok(bad)
    };
    let bad = match run(&mut rng) {
        Ok(b) => b,
        Err(e) => return outcome(false, e),
    };
    let secs = start.elapsed().as_secs_f64();
    for (name, b) in ["iterate", "direct_sum", "conjugation", "expanding"]
        .iter()
        .zip(bad)
    {
        if b > 0 {
            fails.push(format!("{name}: {b} failures"));
        }
    }
    outcome(
        fails.is_empty() && secs < 60.0,
        format!(
            "4 x {n} instances at tol 1e-8, {secs:.2}s (limit 60s){}",
            if fails.is_empty() {
                String::new()
            } else {
                format!("; {}", fails.join(", "))
            }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("Smyth constant digits", criterion_1),
        ("cat map equality", criterion_2),
        ("cover invariance", criterion_3),
        ("Heisenberg pipeline", criterion_4),
        ("exterior-power oracle", criterion_5),
        ("Mahler suite", criterion_6),
        ("Smyth tightness", criterion_7),
        ("property suites", criterion_8),
    ];
    let mut all = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        all &= o.passed;
        println!(
            "{} criterion {}: {name}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
