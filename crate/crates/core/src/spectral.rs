//! Entropy lower bound `log sp(∧*A)` of an integer linearization matrix,
//! eigenvalue classification, and the absolute bounds that follow from
//! Mahler-measure estimates.
//!
//! `sp(∧*A)` is the spectral radius of the full exterior power, which equals
//! the product of the eigenvalue moduli exceeding 1 (or 1 if there are
//! none). For a monic integer characteristic polynomial this is its Mahler
//! measure, and it is computed that way; [`exterior_power_matrix`] gives the
//! explicit minor matrices for an independent check. Logarithms are natural.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive};
use thiserror::Error;

use crate::intpoly::{
    self, analyze_roots, char_poly, is_reciprocal, smyth_constant, voutier_bound, IntPolynomial,
    PolyError, RootAnalysis, RootLocation, DEFAULT_ROOT_TOL,
};
use crate::matrix::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("exterior power {k} of a {dim}-dimensional matrix")]
    BadPower { k: usize, dim: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub radius: f64,
    pub multiplicity: usize,
    pub location: RootLocation,
}

impl Eigenvalue {
    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    /// No eigenvalue outside the unit circle, so `sp(∧*A) = 1`.
    pub quasi_unipotent: bool,
    /// No eigenvalue on the unit circle.
    pub hyperbolic: bool,
    /// Every eigenvalue outside the unit circle.
    pub expanding: bool,
    pub unimodular: bool,
    /// Characteristic polynomial, with its `x^k` factor removed, equals its
    /// reversal up to sign.
    pub reciprocal_charpoly: bool,
    pub cyclotomic_charpoly: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbsoluteBound {
    pub name: &'static str,
    /// Lower bound on the entropy, in nats.
    pub value: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub dimension: usize,
    pub char_poly: IntPolynomial,
    pub determinant: BigInt,
    pub eigenvalues: Vec<Eigenvalue>,
    /// `sp(∧*A) >= 1`.
    pub sp_exterior: f64,
    /// `log sp(∧*A) >= 0`.
    pub entropy_bound: f64,
    /// Error bound on `entropy_bound` from the certified root radii.
    pub entropy_bound_error: f64,
    pub flags: Flags,
    pub absolute_bounds: Vec<AbsoluteBound>,
    pub escalations: usize,
    pub notes: Vec<String>,
}

fn square_char_poly(a: &IntMatrix) -> Result<IntPolynomial, SpectralError> {
    Ok(char_poly(a)?)
}

/// `sp(∧*A)`: product of the eigenvalue moduli greater than one.
pub fn full_exterior_spectral_radius(a: &IntMatrix) -> Result<f64, SpectralError> {
    Ok(entropy_lower_bound(a)?.sp_exterior)
}

/// Largest eigenvalue modulus of `a` (0 for the empty matrix).
pub fn spectral_radius(a: &IntMatrix) -> Result<f64, SpectralError> {
    let p = square_char_poly(a)?;
    let rs = intpoly::roots(&p, DEFAULT_ROOT_TOL)?;
    Ok(rs.roots.iter().map(|r| r.modulus()).fold(0.0, f64::max))
}

/// The `k`-th exterior power `∧^k A`: entry `(I, J)` is the minor of `A` on
/// rows `I` and columns `J`, with `k`-subsets in lexicographic order.
pub fn exterior_power_matrix(a: &IntMatrix, k: usize) -> Result<IntMatrix, SpectralError> {
    if !a.is_square() {
        return Err(PolyError::NonSquare {
            rows: a.rows(),
            cols: a.cols(),
        }
        .into());
    }
    let d = a.rows();
    if k > d {
        return Err(SpectralError::BadPower { k, dim: d });
    }
    let subsets = k_subsets(d, k);
    Ok(IntMatrix::from_fn(subsets.len(), subsets.len(), |r, c| {
        a.select(&subsets[r], &subsets[c]).determinant()
    }))
}

/// Sorted `k`-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

pub fn entropy_lower_bound(a: &IntMatrix) -> Result<BoundReport, SpectralError> {
    entropy_lower_bound_with_tol(a, DEFAULT_ROOT_TOL)
}

/// Full report for `a`, with absolute bounds attached.
pub fn entropy_lower_bound_with_tol(a: &IntMatrix, tol: f64) -> Result<BoundReport, SpectralError> {
    let p = square_char_poly(a)?;
    let d = a.rows();
    let analysis = analyze_roots(&p, tol)?;
    let determinant = a.determinant();

    let resolved = analysis.is_resolved();
    let outside = analysis.count(RootLocation::Outside);
    let cyclotomic_charpoly = analysis.split.remainder.degree() == Some(0);
    let quasi_unipotent = cyclotomic_charpoly || (resolved && outside == 0);
    let hyperbolic = resolved && analysis.count(RootLocation::OnCircle) == 0;
    let expanding = resolved && outside == d && d > 0;
    let (_, stripped) = p.strip_x_power();
    let reciprocal_charpoly = match stripped.degree() {
        Some(0) | None => true,
        _ => is_reciprocal(&stripped)?,
    };
    let flags = Flags {
        quasi_unipotent,
        hyperbolic,
        expanding,
        unimodular: determinant.abs().is_one(),
        reciprocal_charpoly,
        cyclotomic_charpoly,
    };

    let (sp_exterior, entropy_bound, entropy_bound_error) = if quasi_unipotent {
        (1.0, 0.0, 0.0)
    } else if expanding {
        // All moduli exceed one: the product is |det A| exactly.
        let det = determinant.abs();
        let sp = det.to_f64().unwrap_or(f64::INFINITY);
        (sp, big_ln(&det), 0.0)
    } else {
        let log = analysis.log_outer_product();
        (log.exp(), log, analysis.log_outer_product_error())
    };

    let mut notes = Vec::new();
    if !resolved {
        notes.push(format!(
            "an eigenvalue disk still meets the unit circle after {} precision escalations; \
             hyperbolic and expanding are reported false",
            analysis.escalations
        ));
    }
    let mut report = BoundReport {
        dimension: d,
        char_poly: p,
        determinant,
        eigenvalues: eigenvalues(&analysis),
        sp_exterior,
        entropy_bound,
        entropy_bound_error,
        flags,
        absolute_bounds: Vec::new(),
        escalations: analysis.escalations,
        notes,
    };
    report.absolute_bounds = absolute_bounds(&report);
    Ok(report)
}

fn big_ln(x: &BigInt) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            let shift = x.bits().saturating_sub(60);
            (x >> shift).to_f64().unwrap_or(f64::MAX).ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

fn eigenvalues(analysis: &RootAnalysis) -> Vec<Eigenvalue> {
    let mut ev: Vec<Eigenvalue> = analysis
        .roots
        .iter()
        .map(|r| Eigenvalue {
            value: r.root.value,
            radius: r.root.radius,
            multiplicity: r.root.multiplicity,
            location: r.location,
        })
        .collect();
    // Deterministic order: by modulus descending, then argument.
    ev.sort_by(|a, b| {
        b.modulus()
            .total_cmp(&a.modulus())
            .then(a.value.arg().total_cmp(&b.value.arg()))
    });
    ev
}

/// Smallest value of the Voutier expression over degrees `2..=d`.
pub fn conservative_voutier(d: usize) -> Option<f64> {
    (2..=d as u64)
        .map(|k| voutier_bound(k).expect("degree at least 2"))
        .reduce(f64::min)
}

/// Absolute (matrix-independent) entropy bounds applicable to the report.
///
/// * `voutier`: when the bound is positive. The degree of the relevant
///   irreducible factor is unknown, so the minimum over all degrees up to
///   the dimension is used; below 1 it is clamped to 0.
/// * `smyth`: positive bound and non-reciprocal characteristic polynomial.
/// * `expanding` and `degree`: every eigenvalue outside the circle.
pub fn absolute_bounds(report: &BoundReport) -> Vec<AbsoluteBound> {
    let mut out = Vec::new();
    if report.flags.quasi_unipotent {
        return out;
    }
    let d = report.dimension;
    out.push(match conservative_voutier(d) {
        Some(v) if v > 1.0 => AbsoluteBound {
            name: "voutier",
            value: v.ln(),
            note: format!("min of tau(k) over 2 <= k <= {d}"),
        },
        Some(v) => AbsoluteBound {
            name: "voutier",
            value: 0.0,
            note: format!(
                "vacuous at this dimension: min tau(k) over 2 <= k <= {d} is {v:.10} < 1"
            ),
        },
        None => AbsoluteBound {
            name: "voutier",
            value: 0.0,
            note: "vacuous: dimension below 2".to_string(),
        },
    });
    if !report.flags.reciprocal_charpoly {
        out.push(AbsoluteBound {
            name: "smyth",
            value: smyth_constant(1e-15).ln(),
            note: "non-reciprocal characteristic polynomial".to_string(),
        });
    }
    if report.flags.expanding {
        out.push(AbsoluteBound {
            name: "expanding",
            value: 2f64.ln(),
            note: "all eigenvalues outside the unit circle".to_string(),
        });
        out.push(AbsoluteBound {
            name: "degree",
            value: big_ln(&report.determinant.abs()),
            note: "log |det A|, the absolute degree of an expanding map".to_string(),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    const GOLDEN: f64 = 2.618_033_988_749_895;

    #[test]
    fn spectral_radius_examples() {
        assert_eq!(
            full_exterior_spectral_radius(&IntMatrix::identity(4)).unwrap(),
            1.0
        );
        let cat = m(&[&[2, 1], &[1, 1]]);
        assert!((full_exterior_spectral_radius(&cat).unwrap() - GOLDEN).abs() < 1e-12);
        let heis = m(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 6]]);
        assert_eq!(full_exterior_spectral_radius(&heis).unwrap(), 36.0);
    }

    #[test]
    fn exterior_power_examples() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(exterior_power_matrix(&a, 0).unwrap(), m(&[&[1]]));
        assert_eq!(exterior_power_matrix(&a, 1).unwrap(), a);
        assert_eq!(exterior_power_matrix(&a, 2).unwrap(), m(&[&[1]]));
        assert_eq!(
            exterior_power_matrix(&a, 3),
            Err(SpectralError::BadPower { k: 3, dim: 2 })
        );
        let b = m(&[&[1, 2, 0], &[0, 1, 3], &[4, 0, 1]]);
        let top = exterior_power_matrix(&b, 3).unwrap();
        assert_eq!(top, IntMatrix::from_fn(1, 1, |_, _| b.determinant()));
        assert_eq!(exterior_power_matrix(&b, 2).unwrap().rows(), 3);
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(
            k_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(k_subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn report_examples() {
        let r = entropy_lower_bound(&m(&[&[2, 1], &[1, 1]])).unwrap();
        assert!((r.entropy_bound - 0.962_423_650_1).abs() < 1e-10);
        assert!(r.flags.hyperbolic && r.flags.unimodular && r.flags.reciprocal_charpoly);
        assert!(!r.flags.expanding && !r.flags.quasi_unipotent);

        let r = entropy_lower_bound(&IntMatrix::identity(3)).unwrap();
        assert_eq!(r.entropy_bound, 0.0);
        assert!(r.flags.quasi_unipotent && r.flags.cyclotomic_charpoly);
        assert!(r.absolute_bounds.is_empty());

        let r = entropy_lower_bound(&m(&[&[2, 0], &[0, 2]])).unwrap();
        assert!((r.entropy_bound - 4f64.ln()).abs() < 1e-15);
        assert!(r.flags.expanding);
    }

    #[test]
    fn smyth_is_tight_for_plastic_companion() {
        // companion matrix of x^3 - x - 1
        let c = m(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        let r = entropy_lower_bound(&c).unwrap();
        assert_eq!(
            r.char_poly,
            IntPolynomial::from_i64_descending(&[1, 0, -1, -1])
        );
        assert!(!r.flags.reciprocal_charpoly);
        let smyth = r
            .absolute_bounds
            .iter()
            .find(|b| b.name == "smyth")
            .unwrap();
        assert!((smyth.value - r.entropy_bound).abs() < 1e-8);
        assert!((smyth.value - 1.324_717_957f64.ln()).abs() < 1e-9);
        assert!(smyth.value <= r.entropy_bound + 1e-9);
    }

    #[test]
    fn expanding_bounds() {
        let r = entropy_lower_bound(&m(&[&[2, 0], &[0, 3]])).unwrap();
        assert!((r.entropy_bound - 6f64.ln()).abs() < 1e-15);
        let names: Vec<&str> = r.absolute_bounds.iter().map(|b| b.name).collect();
        assert_eq!(names, vec!["voutier", "smyth", "expanding", "degree"]);
        let degree = r
            .absolute_bounds
            .iter()
            .find(|b| b.name == "degree")
            .unwrap();
        assert!((degree.value - 6f64.ln()).abs() < 1e-15);
        let voutier = &r.absolute_bounds[0];
        assert_eq!(voutier.value, 0.0);
        assert!(voutier.note.contains("vacuous"));
    }

    #[test]
    fn conservative_voutier_is_below_one_from_degree_two() {
        assert_eq!(conservative_voutier(1), None);
        for d in 2..30 {
            assert!(conservative_voutier(d).unwrap() < 1.0);
        }
    }

    #[test]
    fn zero_eigenvalues_do_not_break_reciprocity() {
        // x (x^2 - 3x + 1): stripped polynomial is palindromic
        let a = m(&[&[0, 0, 0], &[0, 2, 1], &[0, 1, 1]]);
        let r = entropy_lower_bound(&a).unwrap();
        assert!(r.flags.reciprocal_charpoly);
        assert!(r.absolute_bounds.iter().all(|b| b.name != "smyth"));
        assert!((r.entropy_bound - GOLDEN.ln()).abs() < 1e-12);
    }

    #[test]
    fn salem_companion_is_not_hyperbolic() {
        // companion of Lehmer's polynomial
        let coeffs = [1i64, 1, 0, -1, -1, -1, -1, -1, 0, 1, 1];
        let n = 10;
        let c = IntMatrix::from_fn(n, n, |r, col| {
            if col == n - 1 {
                BigInt::from(-coeffs[n - r])
            } else if r == col + 1 {
                BigInt::one()
            } else {
                BigInt::from(0)
            }
        });
        let r = entropy_lower_bound(&c).unwrap();
        assert!(r.notes.is_empty());
        assert!(!r.flags.hyperbolic && !r.flags.quasi_unipotent);
        assert!(r.flags.reciprocal_charpoly);
        assert!((r.sp_exterior - 1.176_280_818_3).abs() < 1e-9);
    }
}
