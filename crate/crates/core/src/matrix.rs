//! Dense exact matrices over `BigInt` and `BigRational`.
//!
//! Sizes in this crate are tiny (dimension of a nilmanifold, binomial
//! coefficients of it for exterior powers), so everything is row-major
//! `Vec` storage with schoolbook algorithms. What matters is that nothing
//! here ever rounds.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type RatMatrix = Matrix<BigRational>;

impl<T> Matrix<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[T]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn map<U, F: FnMut(&T) -> U>(&self, f: F) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Clone> Matrix<T> {
    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend_from_slice(r);
        }
        Matrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.iter_rows().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows[r], cols[c])].clone()
        })
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, columns: &[Vec<T>]) -> Self {
        Matrix::from_fn(dim, columns.len(), |r, c| columns[c][r].clone())
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(blocks: &[Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

impl<T: Clone + Num> Matrix<T> {
    pub fn mul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        Matrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                acc = acc + self[(r, k)].clone() * other[(k, c)].clone();
            }
            acc
        })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for (k, x) in v.iter().enumerate() {
                    acc = acc + self[(r, k)].clone() * x.clone();
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> T {
        let mut acc = T::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc + self[(i, i)].clone();
        }
        acc
    }

    pub fn scale(&self, s: &T) -> Matrix<T> {
        self.map(|x| x.clone() * s.clone())
    }
}

impl<T: Clone + Num + FromPrimitive> Matrix<T> {
    /// Coefficients of det(xI - A), constant term first, by the
    /// Faddeev–LeVerrier recurrence. Every division is by an integer `k`
    /// that divides exactly whenever the entries are integers.
    pub fn faddeev_leverrier(&self) -> Vec<T> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        let ident = Matrix::<T>::identity(n);
        let mut m = Matrix::<T>::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let am = self.mul(&m);
            m = Matrix::from_fn(n, n, |r, c| {
                am[(r, c)].clone() + ident[(r, c)].clone() * coeffs[n - k + 1].clone()
            });
            let t = self.mul(&m).trace();
            let kk = T::from_usize(k).expect("dimension fits");
            coeffs[n - k] = T::zero() - t / kk;
        }
        coeffs
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[r * self.cols + c])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Matrix::from_rows(&rows)
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&r| !a[(r, k)].is_zero()) {
                    Some(r) => {
                        a.swap_rows(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|x| BigRational::from_integer(x.clone()))
    }

    /// Entries as `i64`, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.iter_rows()
            .map(|r| r.iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl<T> Matrix<T> {
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl RatMatrix {
    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].recip();
            for c in 0..self.cols {
                self[(row, c)] = &self[(row, c)] * &inv;
            }
            for r in 0..self.rows {
                if r != row && !self[(r, col)].is_zero() {
                    let f = self[(r, col)].clone();
                    for c in 0..self.cols {
                        let v = &self[(row, c)] * &f;
                        self[(r, c)] = &self[(r, c)] - v;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    pub fn inverse(&self) -> Option<RatMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else if c - n == r {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        });
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Matrix::from_fn(n, n, |r, c| aug[(r, c + n)].clone()))
    }

    /// Solves `self * X = rhs` for a matrix `X`, if a solution exists.
    /// `self` must have full column rank.
    pub fn solve(&self, rhs: &RatMatrix) -> Option<RatMatrix> {
        assert_eq!(self.rows, rhs.rows);
        let (n, k) = (self.cols, rhs.cols);
        let mut aug = Matrix::from_fn(self.rows, n + k, |r, c| {
            if c < n {
                self[(r, c)].clone()
            } else {
                rhs[(r, c - n)].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.iter().take_while(|&&p| p < n).count() < n {
            return None;
        }
        // Inconsistent if a pivot lands in the right-hand block.
        if pivots.iter().any(|&p| p >= n) {
            return None;
        }
        Some(Matrix::from_fn(n, k, |r, c| aug[(r, c + n)].clone()))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    /// Integer matrix, if every entry is an integer.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| self.map(|x| x.to_integer()))
    }
}

/// Scales a rational vector by the lcm of its denominators and divides out
/// the content, giving a primitive integer vector with the same direction.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bareiss_matches_small_cases() {
        let a = IntMatrix::from_i64_rows(&[[2, 1], [1, 1]]);
        assert_eq!(a.determinant(), BigInt::from(1));
        let b = IntMatrix::from_i64_rows(&[[0, 1, 2], [3, 0, 5], [6, 7, 0]]);
        // 0*(0-35) - 1*(0-30) + 2*(21-0)
        assert_eq!(b.determinant(), BigInt::from(72));
        let s = IntMatrix::from_i64_rows(&[[1, 2], [2, 4]]);
        assert!(s.determinant().is_zero());
        assert_eq!(IntMatrix::zeros(0, 0).determinant(), BigInt::one());
    }

    #[test]
    fn faddeev_on_cat_map() {
        let a = IntMatrix::from_i64_rows(&[[2, 1], [1, 1]]);
        let c = a.faddeev_leverrier();
        let want: Vec<BigInt> = [1, -3, 1].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(c, want);
    }

    #[test]
    fn rational_inverse_and_solve() {
        let a = IntMatrix::from_i64_rows(&[[2, 1], [1, 1]]).to_rational();
        let inv = a.inverse().unwrap();
        assert_eq!(
            inv.to_integer().unwrap(),
            IntMatrix::from_i64_rows(&[[1, -1], [-1, 2]])
        );
        let sing = IntMatrix::from_i64_rows(&[[1, 2], [2, 4]]).to_rational();
        assert!(sing.inverse().is_none());

        let b = IntMatrix::from_i64_rows(&[[1, 0], [0, 1], [1, 1]]).to_rational();
        let rhs = IntMatrix::from_i64_rows(&[[3], [4], [7]]).to_rational();
        let x = b.solve(&rhs).unwrap();
        assert_eq!(
            x.to_integer().unwrap(),
            IntMatrix::from_i64_rows(&[[3], [4]])
        );
        let bad = IntMatrix::from_i64_rows(&[[3], [4], [8]]).to_rational();
        assert!(b.solve(&bad).is_none());
    }

    #[test]
    fn primitive_vector_clears_denominators() {
        let v = vec![
            BigRational::new(1.into(), 2.into()),
            BigRational::new(3.into(), 4.into()),
        ];
        assert_eq!(
            primitive_integer_vector(&v),
            vec![BigInt::from(2), BigInt::from(3)]
        );
    }
}
