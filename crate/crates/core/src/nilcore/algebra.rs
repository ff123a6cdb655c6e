use num_rational::BigRational;
use num_traits::{One, Zero};

use super::NilError;
use crate::matrix::{IntMatrix, RatMatrix};

/// Lie algebra given by rational structure constants over a basis
/// `e_1..e_d`. The integer span of the basis is the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilpotentAlgebra {
    dim: usize,
    /// `c[(i * d + j) * d + k]` is the `e_k` component of `[e_i, e_j]`.
    structure: Vec<BigRational>,
}

impl NilpotentAlgebra {
    /// The abelian algebra; also the blank table to fill in.
    pub fn abelian(dim: usize) -> Self {
        assert!(dim > 0, "algebra dimension must be positive");
        NilpotentAlgebra {
            dim,
            structure: vec![BigRational::zero(); dim * dim * dim],
        }
    }

    /// Three-dimensional Heisenberg algebra, `[e1, e2] = e3`.
    pub fn heisenberg() -> Self {
        let mut a = Self::abelian(3);
        let e3 = a.basis_vector(2);
        a.set_bracket(0, 1, &e3);
        a
    }

    /// Four-dimensional filiform algebra, `[e1, e2] = e3`, `[e1, e3] = e4`.
    pub fn filiform4() -> Self {
        let mut a = Self::abelian(4);
        let (e3, e4) = (a.basis_vector(2), a.basis_vector(3));
        a.set_bracket(0, 1, &e3);
        a.set_bracket(0, 2, &e4);
        a
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dim + j) * self.dim + k
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &BigRational {
        &self.structure[self.idx(i, j, k)]
    }

    /// Sets one raw entry; no antisymmetric partner is written.
    pub fn set_structure_constant(&mut self, i: usize, j: usize, k: usize, value: BigRational) {
        let at = self.idx(i, j, k);
        self.structure[at] = value;
    }

    /// Sets `[e_i, e_j] = image` and `[e_j, e_i] = -image`.
    pub fn set_bracket(&mut self, i: usize, j: usize, image: &[BigRational]) {
        assert_eq!(image.len(), self.dim);
        for (k, c) in image.iter().enumerate() {
            self.set_structure_constant(i, j, k, c.clone());
            self.set_structure_constant(j, i, k, -c.clone());
        }
    }

    pub fn basis_vector(&self, i: usize) -> Vec<BigRational> {
        (0..self.dim)
            .map(|k| {
                if k == i {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect()
    }

    pub fn bracket(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let d = self.dim;
        let mut out = vec![BigRational::zero(); d];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let s = xi * yj;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = &self.structure[self.idx(i, j, k)];
                    if !c.is_zero() {
                        *o += &s * c;
                    }
                }
            }
        }
        out
    }

    pub(crate) fn check_antisymmetry(&self) -> Result<(), NilError> {
        let d = self.dim;
        for i in 0..d {
            for j in i..d {
                for k in 0..d {
                    let a = self.structure_constant(i, j, k);
                    let b = self.structure_constant(j, i, k);
                    if !(a + b).is_zero() {
                        return Err(NilError::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_jacobi(&self) -> Result<(), NilError> {
        let d = self.dim;
        let e: Vec<Vec<BigRational>> = (0..d).map(|i| self.basis_vector(i)).collect();
        for i in 0..d {
            for j in i + 1..d {
                for l in j + 1..d {
                    let a = self.bracket(&e[i], &self.bracket(&e[j], &e[l]));
                    let b = self.bracket(&e[j], &self.bracket(&e[l], &e[i]));
                    let c = self.bracket(&e[l], &self.bracket(&e[i], &e[j]));
                    if (0..d).any(|k| !(&a[k] + &b[k] + &c[k]).is_zero()) {
                        return Err(NilError::JacobiFails { i, j, l });
                    }
                }
            }
        }
        Ok(())
    }

    pub(crate) fn check_endomorphism(&self, endo: &AlgebraEndomorphism) -> Result<(), NilError> {
        let d = self.dim;
        let images: Vec<Vec<BigRational>> = (0..d).map(|i| endo.image(i)).collect();
        for i in 0..d {
            for j in i + 1..d {
                let lhs = endo.apply(&self.bracket(&self.basis_vector(i), &self.basis_vector(j)));
                let rhs = self.bracket(&images[i], &images[j]);
                if lhs != rhs {
                    return Err(NilError::BracketIncompatible { i, j });
                }
            }
        }
        Ok(())
    }
}

/// Linear map on the algebra; column `i` is the image of `e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraEndomorphism {
    matrix: RatMatrix,
}

impl AlgebraEndomorphism {
    /// Panics if `matrix` is not square.
    pub fn new(matrix: RatMatrix) -> Self {
        assert!(matrix.is_square(), "endomorphism matrix must be square");
        AlgebraEndomorphism { matrix }
    }

    pub fn from_integer(matrix: &IntMatrix) -> Self {
        Self::new(matrix.to_rational())
    }

    pub fn diagonal(entries: &[BigRational]) -> Self {
        let n = entries.len();
        Self::new(RatMatrix::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                BigRational::zero()
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn image(&self, i: usize) -> Vec<BigRational> {
        self.matrix.column(i)
    }

    pub fn apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.matrix.mul_vec(v)
    }

    pub fn compose(&self, other: &AlgebraEndomorphism) -> AlgebraEndomorphism {
        Self::new(self.matrix.mul(&other.matrix))
    }

    /// Integer matrix, if every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.matrix.to_integer()
    }
}
