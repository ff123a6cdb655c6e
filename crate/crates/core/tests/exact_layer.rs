use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

use nilentropy_core::intpoly::char_poly;
use nilentropy_core::lattice::{saturate, saturation_index};
use nilentropy_core::{IntMatrix, RatMatrix};

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim).prop_flat_map(move |d| {
        prop::collection::vec(-bound..=bound, d * d)
            .prop_map(move |e| IntMatrix::from_fn(d, d, |i, j| BigInt::from(e[i * d + j])))
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn sign(p: &[usize]) -> i64 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

fn leibniz(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    permutations(n)
        .iter()
        .map(|p| {
            let prod = (0..n).fold(BigInt::one(), |acc, i| acc * &a[(i, p[i])]);
            prod * sign(p)
        })
        .sum()
}

proptest! {
    #[test]
    fn bareiss_matches_leibniz(a in matrix(5, 4)) {
        prop_assert_eq!(a.determinant(), leibniz(&a));
    }

    #[test]
    fn char_poly_matches_det_of_shifted_matrix(a in matrix(5, 3), x in -4i64..=4) {
        let d = a.rows();
        let shifted = IntMatrix::from_fn(d, d, |i, j| {
            let diag = if i == j { BigInt::from(x) } else { BigInt::zero() };
            diag - &a[(i, j)]
        });
        let p = char_poly(&a).unwrap();
        prop_assert_eq!(p.eval_i64(x), leibniz(&shifted));
        prop_assert_eq!(p.degree(), Some(d));
        prop_assert!(p.leading().unwrap().is_one());
    }

    #[test]
    fn char_poly_is_conjugation_invariant(a in matrix(4, 3), b in matrix(4, 3)) {
        prop_assume!(a.rows() == b.rows());
        prop_assert_eq!(char_poly(&a.mul(&b)).unwrap(), char_poly(&b.mul(&a)).unwrap());
    }
}

fn vectors(d: usize, r: usize) -> impl Strategy<Value = Vec<Vec<BigInt>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, d), r).prop_map(|vs| {
        vs.into_iter()
            .map(|v| v.into_iter().map(BigInt::from).collect())
            .collect()
    })
}

fn rank(vs: &[Vec<BigInt>]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    IntMatrix::from_rows(vs).to_rational().rank()
}

/// Coefficients of `w` in the basis `vs`, if it lies in the rational span.
fn coordinates(vs: &[Vec<BigInt>], w: &[BigInt]) -> Option<RatMatrix> {
    let d = w.len();
    let basis = IntMatrix::from_columns(d, vs).to_rational();
    let gram = basis.transpose().mul(&basis);
    let rhs = basis
        .transpose()
        .mul(&IntMatrix::from_columns(d, &[w.to_vec()]).to_rational());
    let c = gram.solve(&rhs)?;
    (basis.mul(&c) == IntMatrix::from_columns(d, &[w.to_vec()]).to_rational()).then_some(c)
}

proptest! {
    #[test]
    fn saturation_against_brute_force(vs in (1usize..=2).prop_flat_map(|r| vectors(3, r))) {
        prop_assume!(rank(&vs) == vs.len());
        let sat = saturate(&vs).unwrap();
        prop_assert_eq!(sat.len(), vs.len());
        prop_assert_eq!(saturate(&sat).unwrap(), sat.clone());
        prop_assert!(saturation_index(&sat).unwrap().is_one());
        for v in &vs {
            prop_assert!(coordinates(&sat, v).unwrap().is_integral());
        }
        // Every small lattice point in the rational span is an integer
        // combination of the saturated basis.
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                for z in -3i64..=3 {
                    let w: Vec<BigInt> = [x, y, z].iter().map(|&t| BigInt::from(t)).collect();
                    if coordinates(&vs, &w).is_some() {
                        prop_assert!(coordinates(&sat, &w).unwrap().is_integral());
                    }
                }
            }
        }
    }

    #[test]
    fn saturation_index_is_the_gcd_of_maximal_minors(vs in vectors(3, 2)) {
        prop_assume!(rank(&vs) == 2);
        let m = IntMatrix::from_columns(3, &vs);
        let mut g = BigInt::zero();
        for (r0, r1) in [(0, 1), (0, 2), (1, 2)] {
            let minor = m.select(&[r0, r1], &[0, 1]).determinant();
            g = num_integer::Integer::gcd(&g, &minor);
        }
        prop_assert_eq!(saturation_index(&vs).unwrap(), g);
    }
}
