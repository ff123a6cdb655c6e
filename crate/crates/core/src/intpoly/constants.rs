use super::PolyError;

/// Voutier's degree-dependent lower bound for the Mahler measure of a
/// non-cyclotomic irreducible integer polynomial of degree `d`:
/// `1 + (1/4) (ln ln d / ln d)^3`.
///
/// Evaluated exactly as written. Note the expression dips below 1 at
/// `d = 2` and is not monotone for small `d`; callers that need a bound valid
/// for every factor degree up to `d` must take the minimum themselves.
pub fn voutier_bound(d: u64) -> Result<f64, PolyError> {
    if d < 2 {
        return Err(PolyError::DegreeTooSmall(d));
    }
    let ln = (d as f64).ln();
    Ok(1.0 + 0.25 * (ln.ln() / ln).powi(3))
}

/// Smyth's constant: the real root of `t^3 - t - 1`, by bisection on [1, 2].
pub fn smyth_constant(tol: f64) -> f64 {
    let f = |t: f64| t * t * t - t - 1.0;
    let (mut lo, mut hi) = (1.0_f64, 2.0_f64);
    let tol = tol.max(f64::EPSILON);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}
