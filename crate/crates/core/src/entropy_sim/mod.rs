//! Numerical entropy of affine torus maps `x ↦ Ax + b (mod 1)` by counting
//! `(ε, n)`-separated sets, and lifts of such maps to finite covers.
//!
//! Orbits are computed in double precision. The metric is the max-metric on
//! the torus: circular distance per coordinate, maximum over coordinates.

mod estimate;
mod separated;

pub use estimate::{
    compare_cover, entropy_estimate, equality_report, CoverComparison, EntropyEstimate, EpsilonFit,
    EqualityReport, SimParams, SATURATION_RATIO,
};
pub use separated::{
    candidate_grid, grid_size, is_separated_pair, separated_count, separated_counts,
    separated_sets, torus_distance, DEFAULT_CANDIDATE_CAP, SEPARATION_SLACK,
};

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::matrix::IntMatrix;
use crate::spectral::SpectralError;

/// Largest supported torus dimension.
pub const MAX_DIM: usize = 3;
/// Largest supported orbit length.
pub const MAX_STEPS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("torus dimension {0} is outside 1..=3")]
    UnsupportedDimension(usize),
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("expected {expected} coordinates, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("translation entry {index} = {value} is outside [0, 1)")]
    TranslationOutOfRange { index: usize, value: f64 },
    #[error("matrix entry ({row}, {col}) is too large for double precision orbits")]
    EntryTooLarge { row: usize, col: usize },
    #[error("grid spacing {delta} exceeds epsilon/4 = {}", epsilon / 4.0)]
    GridTooCoarse { epsilon: f64, delta: f64 },
    #[error("{candidates} grid candidates exceed the cap of {cap}")]
    BudgetExceeded { candidates: usize, cap: usize },
    #[error("epsilon {epsilon} has only {points} pre-saturation points, need 3")]
    InsufficientWindow { epsilon: f64, points: usize },
    #[error("epsilon {0} must be positive and below 1")]
    BadEpsilon(f64),
    #[error("epsilon list must be nonempty and strictly decreasing")]
    EpsilonOrder,
    #[error("orbit length {0} exceeds 20")]
    TooManySteps(usize),
    #[error("cover lattice is singular")]
    SingularCover,
    #[error("map does not lift: entry ({row}, {col}) of L^-1 A L is {value}")]
    NotLiftable {
        row: usize,
        col: usize,
        value: String,
    },
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

/// `x ↦ A x + b (mod 1)` on `ℝ^d / ℤ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineTorusMap {
    matrix: IntMatrix,
    translation: Vec<f64>,
    entries: Vec<f64>,
}

impl AffineTorusMap {
    pub fn new(matrix: IntMatrix, translation: Vec<f64>) -> Result<Self, SimError> {
        if !matrix.is_square() {
            return Err(SimError::NonSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let d = matrix.rows();
        if d == 0 || d > MAX_DIM {
            return Err(SimError::UnsupportedDimension(d));
        }
        if translation.len() != d {
            return Err(SimError::DimensionMismatch {
                expected: d,
                found: translation.len(),
            });
        }
        if let Some((index, &value)) = translation
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..1.0).contains(*v))
        {
            return Err(SimError::TranslationOutOfRange { index, value });
        }
        let mut entries = Vec::with_capacity(d * d);
        for row in 0..d {
            for col in 0..d {
                match matrix[(row, col)].to_i64() {
                    Some(v) if v.unsigned_abs() < 1 << 40 => entries.push(v as f64),
                    _ => return Err(SimError::EntryTooLarge { row, col }),
                }
            }
        }
        Ok(AffineTorusMap {
            matrix,
            translation,
            entries,
        })
    }

    /// Linear map with zero translation.
    pub fn linear(matrix: IntMatrix) -> Result<Self, SimError> {
        let d = matrix.rows();
        Self::new(matrix, vec![0.0; d])
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn translation(&self) -> &[f64] {
        &self.translation
    }

    /// One step, written into `out`.
    pub(crate) fn step(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim();
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.entries[r * d..(r + 1) * d];
            let s: f64 = row.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>() + self.translation[r];
            *o = reduce_mod_one(s);
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.step(x, &mut out);
        out
    }

    /// `x, f(x), ..., f^n(x)`.
    pub fn orbit(&self, x: &[f64], n: usize) -> Result<Vec<Vec<f64>>, SimError> {
        if x.len() != self.dim() {
            return Err(SimError::DimensionMismatch {
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(x.iter().map(|&v| reduce_mod_one(v)).collect::<Vec<_>>());
        for _ in 0..n {
            let next = self.apply(out.last().unwrap());
            out.push(next);
        }
        Ok(out)
    }
}

/// Representative of `v` modulo 1 in `[0, 1)`.
pub fn reduce_mod_one(v: f64) -> f64 {
    let r = v - v.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Finite cover `ℝ^d / Lℤ^d → ℝ^d / ℤ^d`; the columns of `L` generate the
/// sublattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverSpec {
    lattice: IntMatrix,
}

impl CoverSpec {
    pub fn new(lattice: IntMatrix) -> Result<Self, SimError> {
        if !lattice.is_square() {
            return Err(SimError::NonSquare {
                rows: lattice.rows(),
                cols: lattice.cols(),
            });
        }
        if lattice.determinant().is_zero() {
            return Err(SimError::SingularCover);
        }
        Ok(CoverSpec { lattice })
    }

    pub fn scalar(dim: usize, k: i64) -> Result<Self, SimError> {
        Self::new(IntMatrix::identity(dim).scale(&k.into()))
    }

    pub fn lattice(&self) -> &IntMatrix {
        &self.lattice
    }

    /// `|det L|`, the number of sheets.
    pub fn degree(&self) -> u64 {
        self.lattice
            .determinant()
            .magnitude()
            .to_u64()
            .unwrap_or(u64::MAX)
    }
}

/// The lift of `map` to the cover, in the coordinates `y` with `x = L y`:
/// `y ↦ L⁻¹AL y + L⁻¹b (mod 1)`.
pub fn lift_to_cover(map: &AffineTorusMap, cover: &CoverSpec) -> Result<AffineTorusMap, SimError> {
    let l = cover.lattice();
    let d = map.dim();
    if l.rows() != d {
        return Err(SimError::DimensionMismatch {
            expected: d,
            found: l.rows(),
        });
    }
    let lr = l.to_rational();
    let linv = lr.inverse().ok_or(SimError::SingularCover)?;
    let conj = linv.mul(&map.matrix.to_rational()).mul(&lr);
    for row in 0..d {
        for col in 0..d {
            let v: &BigRational = &conj[(row, col)];
            if !v.is_integer() {
                return Err(SimError::NotLiftable {
                    row,
                    col,
                    value: v.to_string(),
                });
            }
        }
    }
    let lifted = conj.to_integer().expect("checked integral");
    let translation = (0..d)
        .map(|r| {
            let s: f64 = (0..d)
                .map(|c| linv[(r, c)].to_f64().unwrap_or(0.0) * map.translation[c])
                .sum();
            reduce_mod_one(s)
        })
        .collect();
    AffineTorusMap::new(lifted, translation)
}
