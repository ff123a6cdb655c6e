//! Greedy `(ε, n)`-separated subsets of a uniform grid.
//!
//! For each `n` the set found for `n - 1` is kept (it is still
//! `(ε, n)`-separated) and the grid is scanned again in lexicographic order,
//! adding every candidate separated from all points kept so far. The result
//! is a maximal separated subset of the grid, and counts never decrease in
//! `n`. Candidates are looked up through a hash on the cells they occupy at
//! times `0` and `n`: two orbits within `ε` at every step lie in adjacent
//! cells at both of those times.

use std::collections::HashMap;

use super::{AffineTorusMap, SimError, MAX_STEPS};

/// Distances within this much of `ε` count as separated, so that grid
/// spacings like `0.1` are not lost to rounding.
pub const SEPARATION_SLACK: f64 = 1e-9;
pub const DEFAULT_CANDIDATE_CAP: usize = 1 << 20;

/// Circular max-metric on `ℝ^d / ℤ^d`.
pub fn torus_distance(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let t = (a - b).abs();
            t.min(1.0 - t)
        })
        .fold(0.0, f64::max)
}

/// Whether two orbits of equal length are `ε`-apart at some step.
pub fn is_separated_pair(x: &[Vec<f64>], y: &[Vec<f64>], epsilon: f64) -> bool {
    x.iter()
        .zip(y)
        .any(|(a, b)| torus_distance(a, b) >= epsilon - SEPARATION_SLACK)
}

/// Points per axis of the grid with spacing at most `delta`.
pub fn grid_size(delta: f64) -> usize {
    ((1.0 / delta) - 1e-9).ceil().max(1.0) as usize
}

/// The grid `{k / m}^d` in lexicographic order (first coordinate slowest).
pub fn candidate_grid(dim: usize, delta: f64) -> Vec<Vec<f64>> {
    let m = grid_size(delta);
    let total = m.pow(dim as u32);
    (0..total)
        .map(|mut idx| {
            let mut p = vec![0.0; dim];
            for k in (0..dim).rev() {
                p[k] = (idx % m) as f64 / m as f64;
                idx /= m;
            }
            p
        })
        .collect()
}

pub(crate) fn check_parameters(
    map: &AffineTorusMap,
    n: usize,
    epsilon: f64,
    delta: f64,
    cap: usize,
) -> Result<usize, SimError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(SimError::BadEpsilon(epsilon));
    }
    if n > MAX_STEPS {
        return Err(SimError::TooManySteps(n));
    }
    if delta.is_nan() || delta <= 0.0 || delta > epsilon / 4.0 * (1.0 + 1e-12) {
        return Err(SimError::GridTooCoarse { epsilon, delta });
    }
    let m = grid_size(delta);
    let candidates = m
        .checked_pow(map.dim() as u32)
        .filter(|&c| c <= cap)
        .ok_or(SimError::BudgetExceeded {
            candidates: m.saturating_pow(map.dim() as u32),
            cap,
        })?;
    Ok(candidates)
}

/// Size of the greedy `(ε, n)`-separated subset of the `δ`-grid.
pub fn separated_count(
    map: &AffineTorusMap,
    n: usize,
    epsilon: f64,
    delta: f64,
) -> Result<usize, SimError> {
    Ok(
        *separated_counts(map, n, epsilon, delta, DEFAULT_CANDIDATE_CAP)?
            .last()
            .expect("at least one stage"),
    )
}

/// Counts for `n = 0..=n_max`.
pub fn separated_counts(
    map: &AffineTorusMap,
    n_max: usize,
    epsilon: f64,
    delta: f64,
    cap: usize,
) -> Result<Vec<usize>, SimError> {
    Ok(separated_sets(map, n_max, epsilon, delta, cap)?
        .iter()
        .map(Vec::len)
        .collect())
}

/// Separated subsets for `n = 0..=n_max`, as indices into
/// [`candidate_grid`]; each set is nested in the next.
pub fn separated_sets(
    map: &AffineTorusMap,
    n_max: usize,
    epsilon: f64,
    delta: f64,
    cap: usize,
) -> Result<Vec<Vec<usize>>, SimError> {
    let total = check_parameters(map, n_max, epsilon, delta, cap)?;
    let d = map.dim();
    let grid = Orbits::new(map, total, n_max, delta);
    let cells = CellIndex::new(d, epsilon);

    let mut in_set = vec![false; total];
    let mut accepted: Vec<usize> = Vec::new();
    let mut stages = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut buckets: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
        for &c in &accepted {
            buckets.entry(cells.key(&grid, c, n)).or_default().push(c);
        }
        #[allow(clippy::needless_range_loop)]
        for c in 0..total {
            if in_set[c] {
                continue;
            }
            let (near0, near_n) = (
                cells.neighbours(grid.point(c, 0)),
                cells.neighbours(grid.point(c, n)),
            );
            let blocked = near0.iter().any(|&a| {
                near_n.iter().any(|&b| {
                    buckets
                        .get(&(a, b))
                        .is_some_and(|ys| ys.iter().any(|&y| !grid.separated(c, y, n, epsilon)))
                })
            });
            if !blocked {
                in_set[c] = true;
                accepted.push(c);
                buckets.entry(cells.key(&grid, c, n)).or_default().push(c);
            }
        }
        let mut stage = accepted.clone();
        stage.sort_unstable();
        stages.push(stage);
    }
    Ok(stages)
}

/// Orbits of all grid points, flattened as `[candidate][step][coordinate]`.
struct Orbits {
    dim: usize,
    steps: usize,
    data: Vec<f64>,
}

impl Orbits {
    fn new(map: &AffineTorusMap, total: usize, n_max: usize, delta: f64) -> Self {
        let d = map.dim();
        let m = grid_size(delta);
        let steps = n_max + 1;
        let mut data = vec![0.0; total * steps * d];
        for (c, chunk) in data.chunks_mut(steps * d).enumerate() {
            let mut idx = c;
            for k in (0..d).rev() {
                chunk[k] = (idx % m) as f64 / m as f64;
                idx /= m;
            }
            for j in 1..steps {
                let (prev, next) = chunk.split_at_mut(j * d);
                map.step(&prev[(j - 1) * d..], &mut next[..d]);
            }
        }
        Orbits {
            dim: d,
            steps,
            data,
        }
    }

    fn point(&self, c: usize, j: usize) -> &[f64] {
        let at = (c * self.steps + j) * self.dim;
        &self.data[at..at + self.dim]
    }

    fn separated(&self, x: usize, y: usize, n: usize, epsilon: f64) -> bool {
        let threshold = epsilon - SEPARATION_SLACK;
        (0..=n).any(|j| torus_distance(self.point(x, j), self.point(y, j)) >= threshold)
    }
}

/// Cells of side at least `ε` on the torus.
struct CellIndex {
    dim: usize,
    per_axis: u32,
}

impl CellIndex {
    fn new(dim: usize, epsilon: f64) -> Self {
        CellIndex {
            dim,
            per_axis: ((1.0 / epsilon).floor() as u32).max(1),
        }
    }

    fn axis_cell(&self, v: f64) -> u32 {
        ((v * self.per_axis as f64) as u32).min(self.per_axis - 1)
    }

    fn cell(&self, p: &[f64]) -> u32 {
        p.iter()
            .fold(0u32, |acc, &v| acc * self.per_axis + self.axis_cell(v))
    }

    fn key(&self, orbits: &Orbits, c: usize, n: usize) -> (u32, u32) {
        (self.cell(orbits.point(c, 0)), self.cell(orbits.point(c, n)))
    }

    /// Cells within one step of the cell of `p` along every axis.
    fn neighbours(&self, p: &[f64]) -> Vec<u32> {
        let m = self.per_axis;
        let mut out = vec![0u32];
        for &v in p.iter().take(self.dim) {
            let c = self.axis_cell(v);
            let mut axis = vec![c, (c + 1) % m, (c + m - 1) % m];
            axis.sort_unstable();
            axis.dedup();
            out = out
                .iter()
                .flat_map(|&acc| axis.iter().map(move |&a| acc * m + a))
                .collect();
        }
        out
    }
}
