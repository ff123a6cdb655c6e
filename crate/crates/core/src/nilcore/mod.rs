//! Nilpotent Lie algebras with a distinguished lattice, their lower central
//! series, and the integer linearization matrix of an endomorphism.
//!
//! The linearization is assembled from the actions induced on the
//! successive quotients `𝒢_i / 𝒢_{i+1}` of the lower central series, each
//! written in a lattice basis of `(𝒢_i ∩ ℤ^d) / (𝒢_{i+1} ∩ ℤ^d)`. Those
//! bases are only defined up to unimodular change, so the contractual output
//! is conjugacy-invariant data (characteristic polynomials); the concrete
//! matrices are nevertheless deterministic.

mod algebra;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::lattice;
use crate::matrix::{primitive_integer_vector, IntMatrix, Matrix, RatMatrix};

pub use algebra::{AlgebraEndomorphism, NilpotentAlgebra};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NilError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("structure constants are not antisymmetric at [e{}, e{}] component e{}", .i + 1, .j + 1, .k + 1)]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("Jacobi identity fails for (e{}, e{}, e{})", .i + 1, .j + 1, .l + 1)]
    JacobiFails { i: usize, j: usize, l: usize },
    #[error(
        "lower central series stabilizes at dimension {stalled_dim} > 0; algebra is not nilpotent"
    )]
    NotNilpotent { stalled_dim: usize },
    #[error("input vectors are linearly dependent")]
    DependentInput,
    #[error("endomorphism does not preserve the bracket on (e{}, e{})", .i + 1, .j + 1)]
    BracketIncompatible { i: usize, j: usize },
    #[error("quotient {block} has non-integer entry {value} at ({row}, {col}); the lattice filtration is not preserved")]
    LatticeNotPreserved {
        block: usize,
        row: usize,
        col: usize,
        value: String,
    },
}

/// Lattice points of the lower central series `𝒢_0 ⊃ 𝒢_1 ⊃ ... ⊃ 𝒢_k = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralSeries {
    dim: usize,
    /// Canonical echelon basis of each saturated `𝒢_i ∩ ℤ^d`; the last term
    /// is empty.
    terms: Vec<Vec<Vec<BigInt>>>,
    /// `d_i = dim 𝒢_i/𝒢_{i+1}` for `i < k`.
    degrees: Vec<usize>,
    /// Unimodular basis, columns grouped by quotient: the columns from the
    /// `i`-th group onward are a basis of `𝒢_i ∩ ℤ^d`.
    adapted: IntMatrix,
}

impl CentralSeries {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Vec<Vec<BigInt>>] {
        &self.terms
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Nilpotency class: number of nonzero terms.
    pub fn class(&self) -> usize {
        self.degrees.len()
    }

    pub fn adapted_basis(&self) -> &IntMatrix {
        &self.adapted
    }

    /// Column offset of quotient `i` inside [`Self::adapted_basis`].
    pub fn offset(&self, i: usize) -> usize {
        self.degrees[..i].iter().sum()
    }
}

/// Integer matrices of the induced quotient maps and their direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizationBlocks {
    pub blocks: Vec<IntMatrix>,
    pub direct_sum: IntMatrix,
}

impl LinearizationBlocks {
    pub fn new(blocks: Vec<IntMatrix>) -> Self {
        let direct_sum = Matrix::direct_sum(&blocks);
        LinearizationBlocks { blocks, direct_sum }
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.rows()).collect()
    }
}

/// Checks antisymmetry, the Jacobi identity and nilpotency; returns the
/// nilpotency class (smallest `k` with `𝒢_k = 0`).
pub fn validate_algebra(alg: &NilpotentAlgebra) -> Result<usize, NilError> {
    alg.check_antisymmetry()?;
    alg.check_jacobi()?;
    Ok(rational_series(alg)?.len() - 1)
}

/// Rational bases of `𝒢_0, 𝒢_1, ...` ending with the zero subspace.
fn rational_series(alg: &NilpotentAlgebra) -> Result<Vec<Vec<Vec<BigRational>>>, NilError> {
    let d = alg.dim();
    let full: Vec<Vec<BigRational>> = (0..d).map(|i| alg.basis_vector(i)).collect();
    let mut series = vec![full];
    loop {
        let current = series.last().unwrap();
        if current.is_empty() {
            return Ok(series);
        }
        let mut gens = Vec::new();
        for j in 0..d {
            let ej = alg.basis_vector(j);
            for v in current {
                let b = alg.bracket(&ej, v);
                if b.iter().any(|x| !x.is_zero()) {
                    gens.push(b);
                }
            }
        }
        let next = if gens.is_empty() {
            Vec::new()
        } else {
            let mut m = RatMatrix::from_rows(&gens);
            let rank = m.rref().len();
            m.to_rows().into_iter().take(rank).collect()
        };
        if next.len() == current.len() {
            return Err(NilError::NotNilpotent {
                stalled_dim: next.len(),
            });
        }
        series.push(next);
    }
}

/// Lower central series with lattice-saturated terms and an adapted basis.
pub fn lower_central_series(alg: &NilpotentAlgebra) -> Result<CentralSeries, NilError> {
    validate_algebra(alg)?;
    let d = alg.dim();
    let rational = rational_series(alg)?;
    let mut terms = Vec::with_capacity(rational.len());
    for basis in &rational {
        let ints: Vec<Vec<BigInt>> = basis.iter().map(|v| primitive_integer_vector(v)).collect();
        terms.push(saturate(&ints)?);
    }
    let degrees: Vec<usize> = terms.windows(2).map(|w| w[0].len() - w[1].len()).collect();

    let mut columns: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for i in 0..degrees.len() {
        columns.extend(complement(d, &terms[i], &terms[i + 1])?);
    }
    let adapted = IntMatrix::from_columns(d, &columns);
    debug_assert!(num_traits::Signed::abs(&adapted.determinant()) == BigInt::from(1));
    Ok(CentralSeries {
        dim: d,
        terms,
        degrees,
        adapted,
    })
}

/// Vectors of `outer` completing a basis of the saturated sublattice
/// `inner` to a basis of `outer`, in echelon form.
fn complement(
    d: usize,
    outer: &[Vec<BigInt>],
    inner: &[Vec<BigInt>],
) -> Result<Vec<Vec<BigInt>>, NilError> {
    let outer_m = IntMatrix::from_columns(d, outer).to_rational();
    let coords: Vec<Vec<BigInt>> = if inner.is_empty() {
        Vec::new()
    } else {
        let inner_m = IntMatrix::from_columns(d, inner).to_rational();
        let x = outer_m
            .solve(&inner_m)
            .and_then(|x| x.to_integer())
            .expect("saturated inner term has integral coordinates in the outer term");
        (0..x.cols()).map(|c| x.column(c)).collect()
    };
    let comp = lattice::complete_basis(outer.len(), &coords)
        .expect("saturated sublattice extends to a basis");
    let outer_int = IntMatrix::from_columns(d, outer);
    let in_ambient: Vec<Vec<BigInt>> = comp.iter().map(|c| outer_int.mul_vec(c)).collect();
    Ok(lattice::row_echelon_basis(&in_ambient))
}

/// Saturation of the lattice spanned by independent integer vectors.
pub fn saturate(vectors: &[Vec<BigInt>]) -> Result<Vec<Vec<BigInt>>, NilError> {
    if let Some(first) = vectors.first() {
        if let Some(bad) = vectors.iter().find(|v| v.len() != first.len()) {
            return Err(NilError::DimensionMismatch {
                expected: first.len(),
                found: bad.len(),
            });
        }
    }
    lattice::saturate(vectors).ok_or(NilError::DependentInput)
}

/// Integer matrices of the maps induced by `endo` on the quotients of the
/// lower central series, and their block-diagonal sum.
pub fn induced_blocks(
    alg: &NilpotentAlgebra,
    endo: &AlgebraEndomorphism,
) -> Result<LinearizationBlocks, NilError> {
    let d = alg.dim();
    if endo.dim() != d {
        return Err(NilError::DimensionMismatch {
            expected: d,
            found: endo.dim(),
        });
    }
    let series = lower_central_series(alg)?;
    alg.check_endomorphism(endo)?;

    let p = series.adapted_basis().to_rational();
    let p_inv = p.inverse().expect("adapted basis is unimodular");
    let m = p_inv.mul(endo.matrix()).mul(&p);
    let mut blocks = Vec::with_capacity(series.class());
    for (i, &di) in series.degrees().iter().enumerate() {
        let o = series.offset(i);
        let block = Matrix::from_fn(di, di, |r, c| m[(o + r, o + c)].clone());
        for r in 0..di {
            for c in 0..di {
                if !block[(r, c)].is_integer() {
                    return Err(NilError::LatticeNotPreserved {
                        block: i,
                        row: r,
                        col: c,
                        value: block[(r, c)].to_string(),
                    });
                }
            }
        }
        blocks.push(block.to_integer().unwrap());
    }
    Ok(LinearizationBlocks::new(blocks))
}

/// Whether the characteristic polynomial of the endomorphism equals that
/// of the assembled linearization matrix, exactly over ℚ.
pub fn spectral_consistency(
    _alg: &NilpotentAlgebra,
    endo: &AlgebraEndomorphism,
    blocks: &LinearizationBlocks,
) -> bool {
    if blocks.direct_sum.rows() != endo.dim() || !blocks.direct_sum.is_square() {
        return false;
    }
    let from_endo = endo.matrix().faddeev_leverrier();
    let from_blocks = blocks.direct_sum.to_rational().faddeev_leverrier();
    from_endo == from_blocks
}
