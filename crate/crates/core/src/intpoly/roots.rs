//! Certified complex roots by simultaneous (Aberth–Ehrlich) iteration.
//!
//! Multiplicities are taken exactly from the squarefree decomposition, so the
//! numerical iteration only ever sees simple roots. Each approximation gets
//! an inclusion radius from its Weierstrass correction: for distinct
//! approximations `z_i` of the roots of a degree-`n` polynomial, the disks
//! `|z - z_i| <= n |W_i|` cover all roots and every connected component of
//! `m` disks holds exactly `m` roots. The residual `p(z_i)` is evaluated
//! exactly in dyadic arithmetic, so only the final roundings are padded.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Float, Signed, ToPrimitive, Zero};

use super::{IntPolynomial, PolyError};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;

const MAX_ITERATIONS: usize = 2000;

/// A disk known to contain exactly `multiplicity` roots counted with
/// multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifiedRoot {
    pub value: Complex64,
    pub radius: f64,
    pub multiplicity: usize,
}

impl CertifiedRoot {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RootSet {
    pub roots: Vec<CertifiedRoot>,
}

impl RootSet {
    /// Roots counted with multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn max_radius(&self) -> f64 {
        self.roots.iter().map(|r| r.radius).fold(0.0, f64::max)
    }
}

/// All complex roots of `p`, clustered into certified disks.
pub fn roots(p: &IntPolynomial, tol: f64) -> Result<RootSet, PolyError> {
    check_tol(tol)?;
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let (zeros, q) = p.strip_x_power();
    let mut disks = Vec::new();
    if zeros > 0 {
        disks.push(CertifiedRoot {
            value: Complex64::new(0.0, 0.0),
            radius: 0.0,
            multiplicity: zeros,
        });
    }
    for (mult, factor) in q.squarefree_decomposition() {
        for r in simple_roots(&factor, tol)? {
            disks.push(CertifiedRoot {
                multiplicity: mult,
                ..r
            });
        }
    }
    Ok(RootSet {
        roots: cluster(disks),
    })
}

pub(crate) fn check_tol(tol: f64) -> Result<(), PolyError> {
    if (1e-14..=1e-6).contains(&tol) {
        Ok(())
    } else {
        Err(PolyError::BadTolerance(tol))
    }
}

/// Certified approximations to the roots of a squarefree polynomial. The
/// returned disks may overlap; they are not clustered.
///
/// A disk is accepted when its radius is below `tol * max(1, |z|)`, so roots
/// on or inside the unit circle are held to the absolute tolerance.
pub(crate) fn simple_roots(p: &IntPolynomial, tol: f64) -> Result<Vec<CertifiedRoot>, PolyError> {
    let c = p.to_f64_ascending();
    let n = c.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(PolyError::NoConvergence {
            tol,
            best_radius: f64::INFINITY,
        });
    }
    let mut z = initial_guesses(&c);
    if n > 1 {
        aberth(&c, &mut z);
    } else {
        z[0] = Complex64::new(-c[0] / c[1], 0.0);
    }
    let exact = p.ascending();
    let mut radii = inclusion_radii(exact, &c, &z);
    let mut best = relative_max(&radii, &z);
    for _ in 0..2 {
        if best < tol {
            break;
        }
        let polished = newton_polish(exact, &c, &z);
        let r = inclusion_radii(exact, &c, &polished);
        let b = relative_max(&r, &polished);
        if b.is_nan() || b >= best {
            break;
        }
        (z, radii, best) = (polished, r, b);
    }
    if best.is_nan() || best >= tol {
        return Err(PolyError::NoConvergence {
            tol,
            best_radius: best,
        });
    }
    Ok(z.into_iter()
        .zip(radii)
        .map(|(value, radius)| CertifiedRoot {
            value,
            radius,
            multiplicity: 1,
        })
        .collect())
}

/// Points on the Cauchy-bound circle, rotated off the real axis so that
/// real polynomials do not start from a conjugation-symmetric guess.
fn initial_guesses(c: &[f64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let lead = c[n].abs();
    let radius = 1.0 + c[..n].iter().map(|a| a.abs() / lead).fold(0.0, f64::max);
    // Starting on the bound itself wastes iterations when the roots are
    // much smaller; the geometric mean of the root moduli is exact via the
    // constant term whenever it is nonzero.
    let radius = if c[0] != 0.0 {
        (c[0].abs() / lead).powf(1.0 / n as f64).min(radius)
    } else {
        radius
    };
    (0..n)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect()
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth(c: &[f64], z: &mut [Complex64]) {
    let n = z.len();
    for _ in 0..MAX_ITERATIONS {
        let mut converged = true;
        for i in 0..n {
            let (p, dp) = horner(c, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    repulsion += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() > 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                converged = false;
            }
        }
        if converged {
            break;
        }
    }
}

fn relative_max(radii: &[f64], z: &[Complex64]) -> f64 {
    radii
        .iter()
        .zip(z)
        .map(|(r, zi)| r / zi.norm().max(1.0))
        .fold(0.0, f64::max)
}

/// A complex number `(re + i im) 2^exp` with integer parts.
struct Dyadic {
    re: BigInt,
    im: BigInt,
    exp: i64,
}

fn decode(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let (m, e, sign) = x.integer_decode();
    (BigInt::from(sign) * BigInt::from(m), e as i64)
}

fn big_to_f64(x: &BigInt, exp: i64) -> f64 {
    let shift = x.bits().saturating_sub(60) as i64;
    let head = (x >> shift as usize).to_f64().unwrap_or(0.0);
    let e = exp + shift;
    // Two factors keep intermediate powers of two representable.
    let half = (e / 2).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    let rest = (e - half as i64).clamp(i32::MIN as i64, i32::MAX as i64) as i32;
    head * 2f64.powi(half) * 2f64.powi(rest)
}

/// `p(z)` computed without rounding.
fn exact_eval(coeffs: &[BigInt], z: Complex64) -> Dyadic {
    let (mut a, ea) = decode(z.re);
    let (mut b, eb) = decode(z.im);
    let ez = ea.min(eb);
    a <<= (ea - ez) as usize;
    b <<= (eb - ez) as usize;
    let mut acc = Dyadic {
        re: BigInt::zero(),
        im: BigInt::zero(),
        exp: 0,
    };
    for c in coeffs.iter().rev() {
        let re = &acc.re * &a - &acc.im * &b;
        let im = &acc.re * &b + &acc.im * &a;
        acc = Dyadic {
            re,
            im,
            exp: acc.exp + ez,
        };
        if acc.exp > 0 {
            acc.re <<= acc.exp as usize;
            acc.im <<= acc.exp as usize;
            acc.exp = 0;
        }
        acc.re += c << (-acc.exp) as usize;
    }
    acc
}

fn dyadic_to_complex(d: &Dyadic) -> Complex64 {
    Complex64::new(big_to_f64(&d.re, d.exp), big_to_f64(&d.im, d.exp))
}

/// One Newton step per approximation with an exact residual.
fn newton_polish(coeffs: &[BigInt], c: &[f64], z: &[Complex64]) -> Vec<Complex64> {
    z.iter()
        .map(|&zi| {
            let p = dyadic_to_complex(&exact_eval(coeffs, zi));
            let (_, dp) = horner(c, zi);
            let next = zi - p / dp;
            if next.is_finite() {
                next
            } else {
                zi
            }
        })
        .collect()
}

/// `n |W_i|` for each approximation, padded for the final roundings.
fn inclusion_radii(coeffs: &[BigInt], c: &[f64], z: &[Complex64]) -> Vec<f64> {
    let n = z.len();
    let lead = coeffs[n].abs().to_f64().unwrap_or(f64::INFINITY);
    let u = f64::EPSILON / 2.0;
    (0..n)
        .map(|i| {
            let p = dyadic_to_complex(&exact_eval(coeffs, z[i])).norm() * (1.0 + 8.0 * u);
            if !p.is_finite() || c[n] == 0.0 {
                return f64::INFINITY;
            }
            let mut denom = lead;
            for j in 0..n {
                if j != i {
                    denom *= (z[i] - z[j]).norm();
                }
            }
            if denom == 0.0 || !denom.is_finite() {
                return f64::INFINITY;
            }
            let w = p / denom;
            // Slack for the rounding in the product above.
            n as f64 * w * (1.0 + 4.0 * n as f64 * u)
        })
        .collect()
}

/// Merges overlapping disks. A merged disk is centered at the mean of its
/// members and encloses all of them, so it still holds exactly the summed
/// multiplicity.
fn cluster(disks: Vec<CertifiedRoot>) -> Vec<CertifiedRoot> {
    let n = disks.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            let d = (disks[i].value - disks[j].value).norm();
            if d <= disks[i].radius + disks[j].radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut group_of = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if group_of[r] == usize::MAX {
            group_of[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[group_of[r]].push(i);
    }
    groups
        .into_iter()
        .map(|g| {
            if g.len() == 1 {
                return disks[g[0]];
            }
            let center = g.iter().map(|&i| disks[i].value).sum::<Complex64>() / g.len() as f64;
            let radius = g
                .iter()
                .map(|&i| (disks[i].value - center).norm() + disks[i].radius)
                .fold(0.0, f64::max);
            CertifiedRoot {
                value: center,
                radius,
                multiplicity: g.iter().map(|&i| disks[i].multiplicity).sum(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64_descending(c)
    }

    fn sorted_moduli(rs: &RootSet) -> Vec<f64> {
        let mut m: Vec<f64> = rs
            .roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.modulus(), r.multiplicity))
            .collect();
        m.sort_by(|a, b| b.partial_cmp(a).unwrap());
        m
    }

    #[test]
    fn golden_quadratic() {
        let rs = roots(&p(&[1, -3, 1]), 1e-12).unwrap();
        assert_eq!(rs.count(), 2);
        let m = sorted_moduli(&rs);
        let s5 = 5f64.sqrt();
        assert!((m[0] - (3.0 + s5) / 2.0).abs() < 1e-12);
        assert!((m[1] - (3.0 - s5) / 2.0).abs() < 1e-12);
        for r in &rs.roots {
            assert!(r.radius < 1e-12);
            assert!(r.value.im.abs() <= r.radius + 1e-15);
        }
    }

    #[test]
    fn plastic_cubic() {
        // real root by bisection, independent of the iteration
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid - mid - 1.0 > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let rs = roots(&p(&[1, 0, -1, -1]), 1e-12).unwrap();
        let m = sorted_moduli(&rs);
        assert!((m[0] - lo).abs() < 1e-12);
        assert!((m[0] - 1.324_717_957_2).abs() < 1e-10);
        assert!((m[1] - 1.0 / lo.sqrt()).abs() < 1e-12);
        assert!((m[1] - 0.8688).abs() < 1e-4);
        assert!((m[1] - m[2]).abs() < 1e-12);
    }

    #[test]
    fn imaginary_unit() {
        let rs = roots(&p(&[1, 0, 1]), 1e-12).unwrap();
        let mut ims: Vec<f64> = rs.roots.iter().map(|r| r.value.im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-12 && (ims[1] - 1.0).abs() < 1e-12);
        assert!(rs.roots.iter().all(|r| r.value.re.abs() < 1e-12));
    }

    #[test]
    fn multiplicities_are_exact() {
        // x^2 (x - 1)^3 (x + 2)
        let f = IntPolynomial::x_power(2)
            .mul(&p(&[1, -1]).pow(3))
            .mul(&p(&[1, 2]));
        let rs = roots(&f, 1e-12).unwrap();
        assert_eq!(rs.count(), 6);
        let mut mults: Vec<usize> = rs.roots.iter().map(|r| r.multiplicity).collect();
        mults.sort();
        assert_eq!(mults, vec![1, 2, 3]);
    }

    #[test]
    fn tolerance_range_and_zero() {
        assert_eq!(roots(&p(&[1, 1]), 1e-3), Err(PolyError::BadTolerance(1e-3)));
        assert_eq!(
            roots(&IntPolynomial::zero(), 1e-10),
            Err(PolyError::ZeroPolynomial)
        );
        assert_eq!(roots(&p(&[7]), 1e-10).unwrap().count(), 0);
    }

    #[test]
    fn well_separated_integer_roots() {
        let f = (1..=8).fold(IntPolynomial::one(), |acc, k| {
            acc.mul(&IntPolynomial::linear(k))
        });
        let rs = roots(&f, 1e-6).unwrap();
        assert_eq!(rs.count(), 8);
        let mut re: Vec<f64> = rs.roots.iter().map(|r| r.value.re).collect();
        re.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (k, x) in re.iter().enumerate() {
            assert!((x - (k + 1) as f64).abs() < 1e-6);
        }
    }
}
