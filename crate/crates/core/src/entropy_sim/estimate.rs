//! Growth-rate fits of separated-set counts.

use super::separated::{check_parameters, grid_size, separated_counts, DEFAULT_CANDIDATE_CAP};
use super::{lift_to_cover, AffineTorusMap, CoverSpec, SimError};
use crate::spectral::{entropy_lower_bound, BoundReport};

/// Counts growing by at most this factor in one step mark grid saturation.
pub const SATURATION_RATIO: f64 = 1.05;

/// Simulation parameters; the grid spacing for each `ε` is
/// `delta_fraction * ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimParams {
    pub n_max: usize,
    pub epsilons: Vec<f64>,
    pub delta_fraction: f64,
    pub candidate_cap: usize,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            n_max: 14,
            epsilons: vec![0.2, 0.1, 0.05],
            delta_fraction: 0.125,
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

impl SimParams {
    /// Same parameters with every `ε` multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> SimParams {
        SimParams {
            epsilons: self.epsilons.iter().map(|e| e * factor).collect(),
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<(), SimError> {
        if self.epsilons.is_empty() || self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(SimError::EpsilonOrder);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonFit {
    pub epsilon: f64,
    pub delta: f64,
    pub candidates: usize,
    /// `N(ε, n)` for `n = 0..=n_max`.
    pub counts: Vec<usize>,
    /// Inclusive range of `n` used for the fit.
    pub window: Option<(usize, usize)>,
    pub slope: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyEstimate {
    pub fits: Vec<EpsilonFit>,
    /// Largest fitted slope, in nats per step.
    pub estimate: f64,
    pub best_epsilon: f64,
    pub monotone_in_n: bool,
    /// Counts for smaller `ε` dominate those for larger `ε` at every `n`.
    pub monotone_in_epsilon: bool,
}

/// Least-squares slope of `ys` against `0, 1, 2, ...`.
fn slope(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    let mx = (n - 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (num, den) = ys.iter().enumerate().fold((0.0, 0.0), |(a, b), (i, y)| {
        let dx = i as f64 - mx;
        (a + dx * (y - my), b + dx * dx)
    });
    num / den
}

/// Index where the counts first stop growing by more than
/// [`SATURATION_RATIO`]; this first plateau value is already clipped by the
/// grid and is left out of the fit.
fn plateau_start(counts: &[usize]) -> Option<usize> {
    counts
        .windows(2)
        .position(|w| (w[1] as f64) <= SATURATION_RATIO * w[0] as f64)
}

/// Fit window: every point before the plateau. Counts that never grow at
/// all have zero growth rather than a saturated grid, and are fitted over
/// the whole range.
fn fit_window(counts: &[usize]) -> (usize, usize) {
    let last = counts.len() - 1;
    let (first, final_count) = (counts[0] as f64, counts[last] as f64);
    if final_count <= SATURATION_RATIO * first {
        return (0, last);
    }
    match plateau_start(counts) {
        Some(s) => (0, s.saturating_sub(1)),
        None => (0, last),
    }
}

fn fit_counts(epsilon: f64, delta: f64, candidates: usize, counts: Vec<usize>) -> EpsilonFit {
    let (start, end) = fit_window(&counts);
    let points = end - start + 1;
    let (window, slope_value, note) = if points < 3 {
        (
            None,
            None,
            Some(format!("only {points} pre-saturation points")),
        )
    } else {
        let logs: Vec<f64> = counts[start..=end]
            .iter()
            .map(|&c| (c as f64).ln())
            .collect();
        (Some((start, end)), Some(slope(&logs)), None)
    };
    EpsilonFit {
        epsilon,
        delta,
        candidates,
        counts,
        window,
        slope: slope_value,
        note,
    }
}

/// Entropy estimate: for each `ε`, the slope of `log N(ε, n)` over the
/// pre-saturation window, maximised over `ε`.
pub fn entropy_estimate(
    map: &AffineTorusMap,
    params: &SimParams,
) -> Result<EntropyEstimate, SimError> {
    params.validate()?;
    let mut fits = Vec::with_capacity(params.epsilons.len());
    for &eps in &params.epsilons {
        let delta = eps * params.delta_fraction;
        let candidates = check_parameters(map, params.n_max, eps, delta, params.candidate_cap)?;
        let counts = separated_counts(map, params.n_max, eps, delta, params.candidate_cap)?;
        debug_assert_eq!(candidates, grid_size(delta).pow(map.dim() as u32));
        fits.push(fit_counts(eps, delta, candidates, counts));
    }
    let best = fits
        .iter()
        .filter_map(|f| f.slope.map(|s| (s, f.epsilon)))
        .fold(None, |acc: Option<(f64, f64)>, (s, e)| match acc {
            Some((bs, _)) if bs >= s => acc,
            _ => Some((s, e)),
        });
    let Some((estimate, best_epsilon)) = best else {
        let f = fits.last().expect("nonempty epsilon list");
        return Err(SimError::InsufficientWindow {
            epsilon: f.epsilon,
            points: {
                let (a, b) = fit_window(&f.counts);
                b - a + 1
            },
        });
    };
    let monotone_in_n = fits
        .iter()
        .all(|f| f.counts.windows(2).all(|w| w[0] <= w[1]));
    let monotone_in_epsilon = fits
        .windows(2)
        .all(|w| w[0].counts.iter().zip(&w[1].counts).all(|(a, b)| a <= b));
    Ok(EntropyEstimate {
        fits,
        estimate,
        best_epsilon,
        monotone_in_n,
        monotone_in_epsilon,
    })
}

/// Simulated entropy next to the spectral bound of the linear part.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualityReport {
    pub estimate: EntropyEstimate,
    pub bound: BoundReport,
    /// `|estimate - entropy_bound|`.
    pub difference: f64,
}

impl EqualityReport {
    /// Estimate and bound agree within `tol`, as they should for affine maps.
    pub fn agrees_within(&self, tol: f64) -> bool {
        self.difference <= tol
    }

    /// Estimate does not exceed the bound by more than `margin`; the
    /// estimator undercounts, so a larger excess points at the harness.
    pub fn below_bound(&self, margin: f64) -> bool {
        self.estimate.estimate <= self.bound.entropy_bound + margin
    }
}

pub fn equality_report(
    map: &AffineTorusMap,
    params: &SimParams,
) -> Result<EqualityReport, SimError> {
    let estimate = entropy_estimate(map, params)?;
    let bound = entropy_lower_bound(map.matrix())?;
    let difference = (estimate.estimate - bound.entropy_bound).abs();
    Ok(EqualityReport {
        estimate,
        bound,
        difference,
    })
}

/// Estimates for a map and its lift to a finite cover.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverComparison {
    pub lift: AffineTorusMap,
    pub base: EntropyEstimate,
    pub cover: EntropyEstimate,
    /// Factor applied to every `ε` on the cover.
    pub epsilon_scale: f64,
    pub difference: f64,
}

/// Runs the base map with `params` and its lift with matched parameters.
///
/// The lift lives on `ℝ^d / Lℤ^d`, which has `|det L|` times the volume of
/// the base. In the `y`-coordinates (`x = L y`) every `ε` is scaled by
/// `|det L|^(-1/d)`, so a cell of the cover grid has the volume of a cell
/// of the base grid.
pub fn compare_cover(
    map: &AffineTorusMap,
    cover: &CoverSpec,
    params: &SimParams,
) -> Result<CoverComparison, SimError> {
    let lift = lift_to_cover(map, cover)?;
    let epsilon_scale = (cover.degree() as f64).powf(-1.0 / map.dim() as f64);
    let base = entropy_estimate(map, params)?;
    let cover_est = entropy_estimate(&lift, &params.scaled(epsilon_scale))?;
    let difference = (base.estimate - cover_est.estimate).abs();
    Ok(CoverComparison {
        lift,
        base,
        cover: cover_est,
        epsilon_scale,
        difference,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::IntMatrix;

    fn map(rows: &[&[i64]]) -> AffineTorusMap {
        AffineTorusMap::linear(IntMatrix::from_i64_rows(rows)).unwrap()
    }

    #[test]
    fn slope_of_a_line() {
        assert!((slope(&[1.0, 3.0, 5.0, 7.0]) - 2.0).abs() < 1e-15);
        assert!(slope(&[4.0, 4.0, 4.0]).abs() < 1e-15);
    }

    #[test]
    fn window_rule() {
        assert_eq!(plateau_start(&[10, 20, 40, 41, 41]), Some(2));
        assert_eq!(fit_window(&[10, 20, 40, 41, 41]), (0, 1));
        assert_eq!(fit_window(&[10, 20, 40, 80, 160, 160]), (0, 3));
        assert_eq!(fit_window(&[10, 20, 40, 80]), (0, 3));
        assert_eq!(fit_window(&[10, 10, 10, 10]), (0, 3));
        assert_eq!(fit_window(&[10, 20, 20, 20]), (0, 0));
    }

    #[test]
    fn zero_entropy_for_identity() {
        let e = entropy_estimate(&map(&[&[1, 0], &[0, 1]]), &SimParams::default()).unwrap();
        assert!(e.estimate.abs() < 0.05);
        assert!(e
            .fits
            .iter()
            .all(|f| f.counts.windows(2).all(|w| w[0] == w[1])));
    }

    #[test]
    fn doubling_map_estimate() {
        let e = entropy_estimate(&map(&[&[2]]), &SimParams::default()).unwrap();
        assert!((e.estimate - 2f64.ln()).abs() < 0.1);
        assert!(e.monotone_in_n && e.monotone_in_epsilon);
    }

    #[test]
    fn expanding_product_map() {
        let r = equality_report(&map(&[&[2, 0], &[0, 3]]), &SimParams::default()).unwrap();
        assert!((r.bound.entropy_bound - 6f64.ln()).abs() < 1e-12);
        assert!(r.agrees_within(0.25), "difference {}", r.difference);
        assert!(r.below_bound(0.05));
    }

    #[test]
    fn parameter_validation() {
        let m = map(&[&[2]]);
        let short = SimParams {
            n_max: 1,
            ..SimParams::default()
        };
        assert!(matches!(
            entropy_estimate(&m, &short),
            Err(SimError::InsufficientWindow { points: 2, .. })
        ));
        let unordered = SimParams {
            epsilons: vec![0.1, 0.2],
            ..SimParams::default()
        };
        assert_eq!(
            entropy_estimate(&m, &unordered),
            Err(SimError::EpsilonOrder)
        );
        let coarse = SimParams {
            delta_fraction: 0.5,
            ..SimParams::default()
        };
        assert!(matches!(
            entropy_estimate(&m, &coarse),
            Err(SimError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn short_window_leaves_epsilon_unfitted() {
        let f = fit_counts(0.3, 0.05, 400, vec![3, 9, 9, 9]);
        assert_eq!((f.window, f.slope), (None, None));
        assert!(f.note.unwrap().contains("1 pre-saturation"));
        let f = fit_counts(0.1, 0.01, 10_000, vec![10, 30, 90, 270, 270]);
        assert_eq!(f.window, Some((0, 2)));
        assert!((f.slope.unwrap() - 3f64.ln()).abs() < 1e-12);
    }
}
