//! Exact integer polynomials: characteristic polynomials, certified complex
//! roots, Mahler measure, cyclotomic and reciprocity tests, and the
//! Lehmer-problem constants used for absolute entropy bounds.

mod constants;
mod cyclotomic;
mod measure;
pub(crate) mod ratpoly;
mod roots;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::matrix::IntMatrix;
use ratpoly::RatPoly;

pub use constants::{smyth_constant, voutier_bound};
pub use cyclotomic::{
    cyclotomic_polynomial, euler_phi, is_cyclotomic_product, strip_cyclotomic_factors,
    unit_circle_root_count, CyclotomicSplit,
};
pub use measure::{analyze_roots, mahler_measure, LocatedRoot, RootAnalysis, RootLocation};
pub use roots::{roots, CertifiedRoot, RootSet, DEFAULT_ROOT_TOL};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("the zero polynomial has no roots or measure")]
    ZeroPolynomial,
    #[error(
        "root finder did not reach tolerance {tol:e}; best relative error radius {best_radius:e}"
    )]
    NoConvergence { tol: f64, best_radius: f64 },
    #[error("root tolerance {0:e} outside [1e-14, 1e-6]")]
    BadTolerance(f64),
    #[error("constant term is zero")]
    ZeroConstantTerm,
    #[error("division leaves a nonzero remainder")]
    InexactDivision,
    #[error("degree {0} is below 2")]
    DegreeTooSmall(u64),
}

/// Polynomial with arbitrary-precision integer coefficients.
///
/// Stored constant term first; the zero polynomial has no coefficients.
/// Constructors that take a coefficient list in the conventional
/// leading-first order are named `*_descending`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn from_ascending(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    /// From `a_0, ..., a_d` with `a_0` the leading coefficient.
    pub fn from_descending(mut coeffs: Vec<BigInt>) -> Self {
        coeffs.reverse();
        Self::from_ascending(coeffs)
    }

    pub fn from_i64_descending(coeffs: &[i64]) -> Self {
        Self::from_descending(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_ascending(vec![c])
    }

    /// `x^k`.
    pub fn x_power(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPolynomial { coeffs: c }
    }

    /// `x - r`.
    pub fn linear(r: i64) -> Self {
        Self::from_i64_descending(&[1, -r])
    }

    pub fn ascending(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Leading coefficient first.
    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    pub fn is_monic_up_to_sign(&self) -> bool {
        self.leading().is_some_and(|l| l.abs().is_one())
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigInt::zero();
        Self::from_ascending(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_ascending(c)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        Self::from_ascending(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// `x^d p(1/x)` with `d = deg p`.
    pub fn reversal(&self) -> Self {
        Self::from_descending(self.coeffs.clone())
    }

    /// `p(x^k)`.
    pub fn compose_x_power(&self, k: usize) -> Self {
        assert!(k >= 1);
        let mut c = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * k + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * k] = a.clone();
        }
        Self::from_ascending(c)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(|l| l.is_negative()) {
            g = -g;
        }
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| c / &g).collect(),
        }
    }

    /// Splits off the largest power of `x`: returns `(k, q)` with
    /// `self = x^k q` and `q(0) != 0` (or `q = 0`).
    pub fn strip_x_power(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if self.is_zero() {
            return (0, Self::zero());
        }
        (
            k,
            IntPolynomial {
                coeffs: self.coeffs[k..].to_vec(),
            },
        )
    }

    /// Exact quotient over ℤ; fails unless `divisor` divides `self` in ℤ[x].
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let dlead = divisor.leading().ok_or(PolyError::InexactDivision)?;
        let dd = divisor.coeffs.len() - 1;
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.coeffs.len() <= dd {
            return Err(PolyError::InexactDivision);
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let (q, r) = rem[i + dd].div_rem(dlead);
            if !r.is_zero() {
                return Err(PolyError::InexactDivision);
            }
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(PolyError::InexactDivision);
        }
        Ok(Self::from_ascending(quot))
    }

    /// Whether `divisor` divides `self` in ℤ[x].
    pub fn divisible_by(&self, divisor: &Self) -> bool {
        self.div_exact(divisor).is_ok()
    }

    /// Primitive gcd with positive leading coefficient; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        RatPoly::from_int(self)
            .gcd(&RatPoly::from_int(other))
            .to_primitive_int()
    }

    /// Product of the distinct irreducible factors, as a primitive
    /// polynomial with positive leading coefficient.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return Self::one();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd with derivative divides a primitive polynomial")
            .primitive_part()
    }

    /// Yun's decomposition: `self = c · ∏ f_m^m` with the `f_m` primitive,
    /// squarefree and pairwise coprime. Returns the nonconstant `(m, f_m)`.
    pub fn squarefree_decomposition(&self) -> Vec<(usize, Self)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = RatPoly::from_int(self);
        let df = f.derivative();
        let b = f.gcd(&df);
        let mut c = f.div_rem(&b).0;
        let mut d = df.div_rem(&b).0.sub(&c.derivative());
        let mut m = 1;
        while c.degree().unwrap_or(0) > 0 {
            let a = c.gcd(&d);
            c = c.div_rem(&a).0;
            d = d.div_rem(&a).0.sub(&c.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((m, a.to_primitive_int()));
            }
            m += 1;
        }
        out
    }

    pub fn eval_i64(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    /// Coefficients as `f64`, constant term first.
    pub fn to_f64_ascending(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::INFINITY))
            .collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = !mag.is_one() || i == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// Exact characteristic polynomial `det(xI - A)`.
pub fn char_poly(a: &IntMatrix) -> Result<IntPolynomial, PolyError> {
    if !a.is_square() {
        return Err(PolyError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(IntPolynomial::from_ascending(a.faddeev_leverrier()))
}

/// Whether `x^d p(1/x) = ±p(x)`, the algebraic form of the zero set being
/// closed under `λ ↦ 1/λ`.
pub fn is_reciprocal(p: &IntPolynomial) -> Result<bool, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.constant_term().is_zero() {
        return Err(PolyError::ZeroConstantTerm);
    }
    let r = p.reversal();
    Ok(r == *p || r == p.neg())
}

pub fn poly_mul(p: &IntPolynomial, q: &IntPolynomial) -> IntPolynomial {
    p.mul(q)
}

pub fn poly_divexact(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntPolynomial, PolyError> {
    p.div_exact(q)
}

pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    p.squarefree_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64_descending(c)
    }

    #[test]
    fn char_poly_examples() {
        let cat = IntMatrix::from_i64_rows(&[[2, 1], [1, 1]]);
        assert_eq!(char_poly(&cat).unwrap(), p(&[1, -3, 1]));
        let id = IntMatrix::identity(3);
        assert_eq!(char_poly(&id).unwrap(), p(&[1, -3, 3, -1]));
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(char_poly(&z).unwrap(), p(&[1, 0, 0]));
        let rect = IntMatrix::zeros(2, 3);
        assert_eq!(
            char_poly(&rect),
            Err(PolyError::NonSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(poly_mul(&p(&[1, -1]), &p(&[1, 1])), p(&[1, 0, -1]));
        assert_eq!(
            poly_divexact(&p(&[1, 0, -1]), &p(&[1, 1])).unwrap(),
            p(&[1, -1])
        );
        assert_eq!(
            poly_divexact(&p(&[1, 0, 1]), &p(&[1, 1])),
            Err(PolyError::InexactDivision)
        );
        // (x-1)^2 (x+2)
        let f = p(&[1, -1]).pow(2).mul(&p(&[1, 2]));
        assert_eq!(squarefree_part(&f), p(&[1, -1]).mul(&p(&[1, 2])));
        // non-monic content is irrelevant
        assert_eq!(
            squarefree_part(&f.mul(&p(&[-6]))),
            p(&[1, -1]).mul(&p(&[1, 2]))
        );
    }

    #[test]
    fn div_exact_needs_integral_quotient() {
        // 2x^2 - 2 = (2x + 2)(x - 1), but x^2 + x is not divisible by 2x over Z
        assert!(p(&[2, 0, -2]).divisible_by(&p(&[2, 2])));
        assert!(!p(&[1, 1, 0]).divisible_by(&p(&[2, 0])));
    }

    #[test]
    fn yun_recovers_multiplicities() {
        let a = p(&[1, -1]);
        let b = p(&[1, 0, 1]);
        let c = p(&[1, 3]);
        let f = a.mul(&b.pow(2)).mul(&c.pow(3)).mul(&p(&[5]));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec, vec![(1, a), (2, b), (3, c)]);
    }

    #[test]
    fn reciprocity() {
        assert!(is_reciprocal(&p(&[1, -3, 1, -3, 1])).unwrap());
        assert!(!is_reciprocal(&p(&[1, 0, -1, -1])).unwrap());
        assert!(is_reciprocal(&p(&[1, -3, 1])).unwrap());
        // anti-palindromic counts: x - 1
        assert!(is_reciprocal(&p(&[1, -1])).unwrap());
        assert_eq!(
            is_reciprocal(&p(&[1, 1, 0])),
            Err(PolyError::ZeroConstantTerm)
        );
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 1]).to_string(), "x^2 - 3x + 1");
        assert_eq!(p(&[-2, 0, 0, 1]).to_string(), "-2x^3 + 1");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }
}
