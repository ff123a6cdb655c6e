//! Integer lattice normal forms: saturation of sublattices and extension of
//! primitive bases to unimodular ones.
//!
//! Everything goes through one fraction-free row reduction that also keeps
//! the inverse of the accumulated unimodular transform: for an integer
//! `d × r` matrix `C` of full column rank it produces `W ∈ GL_d(ℤ)` and an
//! upper-triangular `H` with `C = W [H; 0]`. The first `r` columns of `W`
//! then form a basis of the saturation of the column lattice of `C`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

/// Row reduction with its inverse transform.
#[derive(Clone, Debug)]
pub struct Hermite {
    /// Upper-triangular `r × r` block; its determinant is the index of the
    /// column lattice in its saturation (up to sign).
    pub triangular: IntMatrix,
    /// Unimodular `d × d` matrix with `C = W [H; 0]`.
    pub unimodular: IntMatrix,
}

/// Reduces `c` (`d × r`) by unimodular row operations. Returns `None` when
/// the columns are linearly dependent.
pub fn hermite_with_inverse(c: &IntMatrix) -> Option<Hermite> {
    let (d, r) = (c.rows(), c.cols());
    let mut a = c.clone();
    let mut w = IntMatrix::identity(d);
    for col in 0..r {
        let p = col;
        if p >= d {
            return None;
        }
        for q in p + 1..d {
            if a[(q, col)].is_zero() {
                continue;
            }
            let (x, y) = (a[(p, col)].clone(), a[(q, col)].clone());
            let eg = x.extended_gcd(&y);
            let (g, s, t) = (eg.gcd, eg.x, eg.y);
            let (xg, yg) = (&x / &g, &y / &g);
            // rows (p, q) <- [[s, t], [-y/g, x/g]] (p, q); determinant 1
            for k in 0..r {
                let (ap, aq) = (a[(p, k)].clone(), a[(q, k)].clone());
                a[(p, k)] = &s * &ap + &t * &aq;
                a[(q, k)] = &xg * &aq - &yg * &ap;
            }
            // W <- W E^{-1}, E^{-1} = [[x/g, -t], [y/g, s]]
            for k in 0..d {
                let (wp, wq) = (w[(k, p)].clone(), w[(k, q)].clone());
                w[(k, p)] = &wp * &xg + &wq * &yg;
                w[(k, q)] = &wq * &s - &wp * &t;
            }
        }
        if a[(p, col)].is_zero() {
            return None;
        }
    }
    Some(Hermite {
        triangular: IntMatrix::from_fn(r, r, |i, j| a[(i, j)].clone()),
        unimodular: w,
    })
}

/// Canonical row echelon form of the lattice spanned by `rows`: pivots move
/// right, are positive, and entries above a pivot lie in `[0, pivot)`.
/// Zero rows are dropped.
pub fn row_echelon_basis(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut m = IntMatrix::from_rows(rows);
    let (nr, nc) = (m.rows(), m.cols());
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..nc {
        if pivot_row == nr {
            break;
        }
        // Euclid down the column until a single nonzero entry is left.
        loop {
            let nz: Vec<usize> = (pivot_row..nr)
                .filter(|&i| !m[(i, col)].is_zero())
                .collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz
                .iter()
                .min_by(|&&i, &&j| m[(i, col)].abs().cmp(&m[(j, col)].abs()).then(i.cmp(&j)))
                .unwrap();
            m.swap_rows(pivot_row, best);
            let mut done = true;
            for i in pivot_row + 1..nr {
                if m[(i, col)].is_zero() {
                    continue;
                }
                let q = m[(i, col)].div_floor(&m[(pivot_row, col)]);
                for k in 0..nc {
                    let v = &q * &m[(pivot_row, k)];
                    m[(i, k)] -= v;
                }
                if !m[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[(pivot_row, col)].is_zero() {
            continue;
        }
        if m[(pivot_row, col)].is_negative() {
            for k in 0..nc {
                m[(pivot_row, k)] = -m[(pivot_row, k)].clone();
            }
        }
        for i in 0..pivot_row {
            let q = m[(i, col)].div_floor(&m[(pivot_row, col)]);
            if !q.is_zero() {
                for k in 0..nc {
                    let v = &q * &m[(pivot_row, k)];
                    m[(i, k)] -= v;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    m.to_rows().into_iter().take(pivot_row).collect()
}

/// Basis of `{v ∈ ℤ^d : m v ∈ span_ℚ(vectors) for some m > 0}`, in
/// canonical row echelon form. `None` if the input is dependent.
pub fn saturate(vectors: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    let Some(first) = vectors.first() else {
        return Some(Vec::new());
    };
    let d = first.len();
    let c = IntMatrix::from_columns(d, vectors);
    let h = hermite_with_inverse(&c)?;
    let basis: Vec<Vec<BigInt>> = (0..vectors.len()).map(|j| h.unimodular.column(j)).collect();
    Some(row_echelon_basis(&basis))
}

/// Given a primitive basis `inner` (as columns in coordinates of some
/// lattice of rank `dim`), returns `dim - inner.len()` vectors completing it
/// to a basis of `ℤ^dim`.
pub fn complete_basis(dim: usize, inner: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
    if inner.is_empty() {
        return Some((0..dim).map(|i| unit_vector(dim, i)).collect());
    }
    let c = IntMatrix::from_columns(dim, inner);
    let h = hermite_with_inverse(&c)?;
    if !determinant_of_triangular(&h.triangular).abs().is_one() {
        return None;
    }
    let comp: Vec<Vec<BigInt>> = (inner.len()..dim).map(|j| h.unimodular.column(j)).collect();
    Some(comp)
}

fn determinant_of_triangular(t: &IntMatrix) -> BigInt {
    (0..t.rows()).fold(BigInt::one(), |acc, i| acc * &t[(i, i)])
}

pub fn unit_vector(dim: usize, i: usize) -> Vec<BigInt> {
    (0..dim)
        .map(|k| {
            if k == i {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        })
        .collect()
}

/// Index of the lattice spanned by `vectors` inside its saturation.
pub fn saturation_index(vectors: &[Vec<BigInt>]) -> Option<BigInt> {
    let Some(first) = vectors.first() else {
        return Some(BigInt::one());
    };
    let c = IntMatrix::from_columns(first.len(), vectors);
    let h = hermite_with_inverse(&c)?;
    Some(determinant_of_triangular(&h.triangular).abs())
}
