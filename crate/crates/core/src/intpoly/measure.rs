//! Root location relative to the unit circle, and the Mahler measure.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::cyclotomic::{
    noncyclotomic_unit_circle_count, strip_cyclotomic_factors, CyclotomicSplit,
};
use super::roots::{check_tol, simple_roots, CertifiedRoot};
use super::{IntPolynomial, PolyError};

/// Precision escalations tried before a root is left unresolved.
pub const MAX_ESCALATIONS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootLocation {
    Inside,
    OnCircle,
    Outside,
    /// The certified disk meets the unit circle and the exact circle count
    /// could not be matched to individual disks.
    Unresolved,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocatedRoot {
    pub root: CertifiedRoot,
    pub location: RootLocation,
    /// Known exactly (root of unity or zero) rather than by iteration.
    pub exact: bool,
}

/// Every root of a polynomial, each placed inside, on, or outside the unit
/// circle.
///
/// Zero roots and roots of unity are split off exactly first; the remaining
/// factor is iterated numerically and its circle roots are matched against
/// an exact count, so `OnCircle` is a certified statement.
#[derive(Clone, Debug)]
pub struct RootAnalysis {
    pub leading: BigInt,
    pub split: CyclotomicSplit,
    pub roots: Vec<LocatedRoot>,
    pub escalations: usize,
    pub tol: f64,
    /// Straddling disks matched the exact circle count.
    consistent: bool,
}

impl RootAnalysis {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.root.multiplicity).sum()
    }

    pub fn is_resolved(&self) -> bool {
        self.consistent
            && self
                .roots
                .iter()
                .all(|r| r.location != RootLocation::Unresolved)
    }

    /// Roots with the given location, counted with multiplicity.
    pub fn count(&self, location: RootLocation) -> usize {
        self.roots
            .iter()
            .filter(|r| r.location == location)
            .map(|r| r.root.multiplicity)
            .sum()
    }

    /// `ln ∏ max(1, |λ|)` with multiplicity. Circle roots contribute
    /// exactly zero; unresolved ones contribute their approximate modulus.
    pub fn log_outer_product(&self) -> f64 {
        self.roots
            .iter()
            .filter(|r| matches!(r.location, RootLocation::Outside | RootLocation::Unresolved))
            .map(|r| r.root.multiplicity as f64 * r.root.modulus().max(1.0).ln())
            .sum()
    }

    /// Bound on the error of [`Self::log_outer_product`] coming from the
    /// certified radii.
    pub fn log_outer_product_error(&self) -> f64 {
        self.roots
            .iter()
            .filter(|r| matches!(r.location, RootLocation::Outside | RootLocation::Unresolved))
            .map(|r| {
                let m = r.root.modulus().max(1.0);
                r.root.multiplicity as f64 * (r.root.radius / (m - r.root.radius).max(1e-300))
            })
            .sum()
    }

    pub fn log_mahler_measure(&self) -> f64 {
        bigint_ln(&self.leading.abs()) + self.log_outer_product()
    }

    pub fn mahler_measure(&self) -> f64 {
        let outer: f64 = self
            .roots
            .iter()
            .filter(|r| matches!(r.location, RootLocation::Outside | RootLocation::Unresolved))
            .map(|r| r.root.modulus().max(1.0).powi(r.root.multiplicity as i32))
            .product();
        self.leading.abs().to_f64().unwrap_or(f64::INFINITY) * outer
    }
}

fn bigint_ln(x: &BigInt) -> f64 {
    match x.to_f64() {
        Some(v) if v.is_finite() => v.ln(),
        _ => {
            // Beyond f64 range: shift down by whole bits first.
            let bits = x.bits();
            let shift = bits.saturating_sub(60);
            let top = (x >> shift).to_f64().unwrap_or(f64::MAX);
            top.ln() + shift as f64 * std::f64::consts::LN_2
        }
    }
}

fn classify(r: &CertifiedRoot) -> RootLocation {
    let m = r.modulus();
    if m - r.radius > 1.0 {
        RootLocation::Outside
    } else if m + r.radius < 1.0 {
        RootLocation::Inside
    } else {
        RootLocation::Unresolved
    }
}

/// Locates the roots of one squarefree factor with no cyclotomic part.
/// The flag is false when the straddling disks cannot be matched to the
/// exact circle count.
fn locate_factor(disks: &[CertifiedRoot], circle_count: usize) -> (Vec<RootLocation>, bool) {
    let mut locs: Vec<RootLocation> = disks.iter().map(classify).collect();
    let straddling: Vec<usize> = (0..disks.len())
        .filter(|&i| locs[i] == RootLocation::Unresolved)
        .collect();
    let isolated = straddling.iter().all(|&i| {
        (0..disks.len()).all(|j| {
            j == i || (disks[i].value - disks[j].value).norm() > disks[i].radius + disks[j].radius
        })
    });
    // Every circle root sits in a straddling disk. If each of those disks is
    // isolated it holds exactly one root, so matching counts pins them all.
    if straddling.len() == circle_count && isolated {
        for i in straddling {
            locs[i] = RootLocation::OnCircle;
        }
        (locs, true)
    } else {
        (locs, false)
    }
}

/// Certified root locations for `p`.
pub fn analyze_roots(p: &IntPolynomial, tol: f64) -> Result<RootAnalysis, PolyError> {
    check_tol(tol)?;
    let leading = p.leading().cloned().ok_or(PolyError::ZeroPolynomial)?;
    let split = strip_cyclotomic_factors(p);
    let mut roots = Vec::new();
    if split.x_power > 0 {
        roots.push(LocatedRoot {
            root: CertifiedRoot {
                value: Complex64::new(0.0, 0.0),
                radius: 0.0,
                multiplicity: split.x_power,
            },
            location: RootLocation::Inside,
            exact: true,
        });
    }
    for &(n, mult) in &split.factors {
        for k in (1..=n).filter(|k| k.gcd(&n) == 1) {
            let theta = 2.0 * PI * k as f64 / n as f64;
            roots.push(LocatedRoot {
                root: CertifiedRoot {
                    value: Complex64::from_polar(1.0, theta),
                    radius: 0.0,
                    multiplicity: mult,
                },
                location: RootLocation::OnCircle,
                exact: true,
            });
        }
    }

    let factors = split.remainder.squarefree_decomposition();
    let counts: Vec<usize> = factors
        .iter()
        .map(|(_, f)| noncyclotomic_unit_circle_count(f))
        .collect();
    let mut escalations = 0;
    let mut current_tol = tol;
    let mut located = try_locate(&factors, &counts, current_tol)?;
    while !located.1 && escalations < MAX_ESCALATIONS {
        let next = (current_tol / 2.0).max(1e-14);
        escalations += 1;
        match try_locate(&factors, &counts, next) {
            Ok(l) => {
                current_tol = next;
                located = l;
            }
            // A tighter tolerance the iteration cannot certify leaves the
            // earlier (already certified) result standing.
            Err(PolyError::NoConvergence { .. }) => break,
            Err(e) => return Err(e),
        }
    }
    let consistent = located.1;
    roots.extend(located.0);
    Ok(RootAnalysis {
        consistent,
        leading,
        split,
        roots,
        escalations,
        tol: current_tol,
    })
}

fn try_locate(
    factors: &[(usize, IntPolynomial)],
    counts: &[usize],
    tol: f64,
) -> Result<(Vec<LocatedRoot>, bool), PolyError> {
    let mut out = Vec::new();
    let mut all_resolved = true;
    for ((mult, f), &circle) in factors.iter().zip(counts) {
        let disks = simple_roots(f, tol)?;
        let (locs, resolved) = locate_factor(&disks, circle);
        all_resolved &= resolved;
        for (d, location) in disks.into_iter().zip(locs) {
            out.push(LocatedRoot {
                root: CertifiedRoot {
                    multiplicity: *mult,
                    ..d
                },
                location,
                exact: false,
            });
        }
    }
    Ok((out, all_resolved))
}

/// Mahler measure `|a_0| ∏ max(1, |λ_i|)`.
///
/// Cyclotomic factors are divided out exactly first and contribute exactly
/// 1; a product of cyclotomics and `x^k` therefore measures exactly `1.0`.
pub fn mahler_measure(p: &IntPolynomial, tol: f64) -> Result<f64, PolyError> {
    Ok(analyze_roots(p, tol)?.mahler_measure())
}
