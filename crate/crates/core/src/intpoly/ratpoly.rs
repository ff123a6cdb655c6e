//! Polynomials over ℚ, used internally for gcds and Sturm sequences.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::IntPolynomial;

/// Ascending coefficients, trimmed (no trailing zeros).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RatPoly(pub(crate) Vec<BigRational>);

impl RatPoly {
    pub(crate) fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        RatPoly(c)
    }

    pub(crate) fn from_int(p: &IntPolynomial) -> Self {
        RatPoly::new(
            p.ascending()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub(crate) fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    pub(crate) fn derivative(&self) -> Self {
        RatPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub(crate) fn sub(&self, other: &RatPoly) -> RatPoly {
        let n = self.0.len().max(other.0.len());
        let zero = BigRational::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub(crate) fn add(&self, other: &RatPoly) -> RatPoly {
        self.sub(&other.neg())
    }

    pub(crate) fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly(Vec::new());
        }
        let mut c = vec![BigRational::zero(); self.0.len() + other.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in other.0.iter().enumerate() {
                c[i + j] = &c[i + j] + x * y;
            }
        }
        RatPoly::new(c)
    }

    pub(crate) fn neg(&self) -> Self {
        RatPoly(self.0.iter().map(|c| -c).collect())
    }

    pub(crate) fn div_rem(&self, d: &RatPoly) -> (RatPoly, RatPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.0.len() - 1;
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (RatPoly(Vec::new()), self.clone());
        }
        let mut quot = vec![BigRational::zero(); rem.len() - dd];
        let inv = d.lead().recip();
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] * &inv;
            if !q.is_zero() {
                for (j, c) in d.0.iter().enumerate() {
                    rem[i + j] = &rem[i + j] - &q * c;
                }
            }
            quot[i] = q;
        }
        (RatPoly::new(quot), RatPoly::new(rem))
    }

    pub(crate) fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lead().recip();
        RatPoly(self.0.iter().map(|c| c * &inv).collect())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub(crate) fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Sign of the value at a rational point (-1, 0, 1).
    pub(crate) fn sign_at(&self, x: &BigRational) -> i8 {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        if acc.is_zero() {
            0
        } else if acc.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Primitive integer polynomial with positive leading coefficient,
    /// proportional to `self`.
    pub(crate) fn to_primitive_int(&self) -> IntPolynomial {
        let v = crate::matrix::primitive_integer_vector(&self.0);
        let p = IntPolynomial::from_ascending(v);
        if p.leading().is_some_and(|l| l.is_negative()) {
            p.neg()
        } else {
            p
        }
    }
}

/// Number of distinct real roots in the half-open interval `(lo, hi]`, by
/// Sturm's theorem.
pub(crate) fn sturm_count(p: &RatPoly, lo: &BigRational, hi: &BigRational) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            break;
        }
        chain.push(r.neg());
    }
    let variations = |x: &BigRational| {
        let signs: Vec<i8> = chain
            .iter()
            .map(|q| q.sign_at(x))
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    // Counts distinct roots; neither endpoint may be a root of p.
    variations(lo).saturating_sub(variations(hi))
}
