//! Exact cyclotomic factor extraction and unit-circle root counting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use super::ratpoly::{sturm_count, RatPoly};
use super::IntPolynomial;

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The `n`-th cyclotomic polynomial `Φ_n`, `n >= 1`.
///
/// Built from `Φ_{mp}(x) = Φ_m(x^p) / Φ_m(x)` over the distinct primes of
/// `n`, then `Φ_n(x) = Φ_{rad n}(x^{n / rad n})`, which keeps intermediate
/// degrees within a factor two of `φ(n)`.
pub fn cyclotomic_polynomial(n: u64) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut phi = IntPolynomial::linear(1);
    let mut radical = 1u64;
    for p in distinct_prime_factors(n) {
        let lifted = phi.compose_x_power(p as usize);
        phi = lifted.div_exact(&phi).expect("Φ_m(x) divides Φ_m(x^p)");
        radical *= p;
    }
    phi.compose_x_power((n / radical) as usize)
}

/// Result of peeling `x^k` and every cyclotomic factor off a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicSplit {
    pub x_power: usize,
    /// `(n, multiplicity)` of each `Φ_n` dividing the input, by increasing `n`.
    pub factors: Vec<(u64, usize)>,
    /// What is left: no root at 0 and no root of unity.
    pub remainder: IntPolynomial,
}

impl CyclotomicSplit {
    pub fn cyclotomic_degree(&self) -> usize {
        self.factors
            .iter()
            .map(|&(n, m)| euler_phi(n) as usize * m)
            .sum()
    }
}

/// Divides out `x^k` and all cyclotomic factors exactly.
///
/// Only `n` with `φ(n) <= deg` can occur; since `φ(n) >= sqrt(n/2)` the scan
/// stops at `n = 2 deg^2`.
pub fn strip_cyclotomic_factors(p: &IntPolynomial) -> CyclotomicSplit {
    let (x_power, mut rem) = p.strip_x_power();
    let mut factors = Vec::new();
    let deg0 = rem.degree().unwrap_or(0) as u64;
    let mut n = 1u64;
    while n <= 2 * deg0 * deg0 + 2 {
        let deg = rem.degree().unwrap_or(0) as u64;
        if deg == 0 {
            break;
        }
        if euler_phi(n) <= deg {
            let phi_n = cyclotomic_polynomial(n);
            let mut mult = 0;
            while let Ok(q) = rem.div_exact(&phi_n) {
                rem = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((n, mult));
            }
        }
        n += 1;
    }
    CyclotomicSplit {
        x_power,
        factors,
        remainder: rem,
    }
}

/// Whether `p` is `±x^k` times a product of cyclotomic polynomials, i.e. all
/// its nonzero roots are roots of unity and it is monic up to sign.
pub fn is_cyclotomic_product(p: &IntPolynomial) -> bool {
    if p.is_zero() {
        return false;
    }
    let split = strip_cyclotomic_factors(p);
    split.remainder.degree() == Some(0) && split.remainder.constant_term().abs().is_one()
}

/// Exact number of distinct roots of `p` on the unit circle.
pub fn unit_circle_root_count(p: &IntPolynomial) -> usize {
    if p.is_zero() {
        return 0;
    }
    let split = strip_cyclotomic_factors(p);
    let cyclo: usize = split
        .factors
        .iter()
        .map(|&(n, _)| euler_phi(n) as usize)
        .sum();
    cyclo + noncyclotomic_unit_circle_count(&split.remainder)
}

/// Distinct unit-circle roots of a polynomial with no root at 0 and no root
/// of unity.
///
/// A root `λ` on the circle has `1/λ = conj(λ)` as a root too, so all such
/// roots are roots of `g = gcd(q, q*)`. With `±1` excluded, `g` is
/// palindromic of even degree `2m` and `g(x) = x^m h(x + 1/x)`; circle roots
/// of `g` pair up over the real roots of `h` in `(-2, 2)`.
pub(crate) fn noncyclotomic_unit_circle_count(q: &IntPolynomial) -> usize {
    if q.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let sq = q.squarefree_part();
    let g = sq.gcd(&sq.reversal());
    let Some(deg) = g.degree().filter(|&d| d > 0) else {
        return 0;
    };
    debug_assert!(
        deg % 2 == 0,
        "self-inversive factor without ±1 has even degree"
    );
    let gc = g.ascending();
    let m = deg / 2;
    debug_assert!(
        (0..=deg).all(|k| gc[k] == gc[deg - k]),
        "expected palindromic gcd"
    );

    let r = |x: &BigInt| BigRational::from_integer(x.clone());
    // Chebyshev-like basis: x^j + x^-j = T_j(y), T_0 = 2, T_1 = y.
    let y = RatPoly::new(vec![
        BigRational::from_integer(0.into()),
        BigRational::one(),
    ]);
    let mut t_prev = RatPoly::new(vec![BigRational::from_integer(2.into())]);
    let mut t_cur = y.clone();
    let mut h = RatPoly::new(vec![r(&gc[m])]);
    for j in 1..=m {
        let term = RatPoly::new(t_cur.0.iter().map(|c| c * r(&gc[m + j])).collect());
        h = h.add(&term);
        let next = y.mul(&t_cur).sub(&t_prev);
        t_prev = t_cur;
        t_cur = next;
    }
    let two = BigRational::from_integer(2.into());
    2 * sturm_count(&h, &(-two.clone()), &two)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64_descending(c)
    }

    fn lehmer() -> IntPolynomial {
        p(&[1, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1])
    }

    #[test]
    fn phi_values() {
        let phis: Vec<u64> = (1..=12).map(euler_phi).collect();
        assert_eq!(phis, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn cyclotomic_polynomials_match_known_forms() {
        assert_eq!(cyclotomic_polynomial(1), p(&[1, -1]));
        assert_eq!(cyclotomic_polynomial(2), p(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(5), p(&[1, 1, 1, 1, 1]));
        assert_eq!(cyclotomic_polynomial(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), p(&[1, 0, -1, 0, 1]));
        // x^n - 1 is the product of Φ_d over d | n
        for n in 1..=30u64 {
            let prod = (1..=n)
                .filter(|d| n % d == 0)
                .fold(IntPolynomial::one(), |acc, d| {
                    acc.mul(&cyclotomic_polynomial(d))
                });
            let mut xn = IntPolynomial::x_power(n as usize);
            xn = xn.sub(&IntPolynomial::one());
            assert_eq!(prod, xn, "n = {n}");
            assert_eq!(
                cyclotomic_polynomial(n).degree(),
                Some(euler_phi(n) as usize)
            );
        }
    }

    #[test]
    fn cyclotomic_product_examples() {
        assert!(is_cyclotomic_product(&p(&[1, 1, 1, 1, 1])));
        assert!(!is_cyclotomic_product(&p(&[1, -3, 1])));
        // x^3 (x^2 + x + 1)
        assert!(is_cyclotomic_product(&p(&[1, 1, 1, 0, 0, 0])));
        assert!(is_cyclotomic_product(&p(&[-1, 0, 0, 1])));
        assert!(!is_cyclotomic_product(&p(&[2, 0, 2])));
        assert!(!is_cyclotomic_product(&lehmer()));
        assert!(!is_cyclotomic_product(&IntPolynomial::zero()));
        let split =
            strip_cyclotomic_factors(&p(&[1, -1]).pow(3).mul(&p(&[1, 0, 1])).mul(&lehmer()));
        assert_eq!(split.factors, vec![(1, 3), (4, 1)]);
        assert_eq!(split.remainder, lehmer());
    }

    #[test]
    fn unit_circle_counts() {
        assert_eq!(unit_circle_root_count(&p(&[1, -3, 1])), 0);
        assert_eq!(unit_circle_root_count(&p(&[1, 1, 1, 1, 1])), 4);
        // Lehmer: Salem number, its inverse, eight conjugates on the circle
        assert_eq!(unit_circle_root_count(&lehmer()), 8);
        assert_eq!(unit_circle_root_count(&p(&[1, 0, -1, -1])), 0);
        // x^4 - 3x^3 + x^2 - 3x + 1: y^2 - 3y - 1 has one root in (-2, 2)
        assert_eq!(unit_circle_root_count(&p(&[1, -3, 1, -3, 1])), 2);
        // repeated factors counted once
        assert_eq!(unit_circle_root_count(&lehmer().pow(2).mul(&p(&[1, 1]))), 9);
    }
}
