//! Binomial proportion intervals and threshold-crossing interpolation.

use serde::{Deserialize, Serialize};

use crate::lab::sweep::SweepResult;

pub const Z_95: f64 = 1.96;

/// Wilson score interval for `successes` out of `n`. Returns `(phat, lo, hi)`;
/// with `n = 0` the estimate is 0 and the interval is all of [0, 1].
pub fn wilson(successes: u64, n: u64, z: f64) -> (f64, f64, f64) {
    if n == 0 {
        return (0.0, 0.0, 1.0);
    }
    let nf = n as f64;
    let phat = successes as f64 / nf;
    let z2 = z * z;
    let denom = 1.0 + z2 / nf;
    let center = (phat + z2 / (2.0 * nf)) / denom;
    let half = z / denom * (phat * (1.0 - phat) / nf + z2 / (4.0 * nf * nf)).sqrt();
    let lo = (center - half).clamp(0.0, phat);
    let hi = (center + half).clamp(phat, 1.0);
    (phat, lo, hi)
}

/// Standard error of the difference of two proportions under the pooled estimate.
pub fn pooled_se(s1: u64, n1: u64, s2: u64, n2: u64) -> f64 {
    if n1 == 0 || n2 == 0 {
        return f64::INFINITY;
    }
    let pooled = (s1 + s2) as f64 / (n1 + n2) as f64;
    (pooled * (1.0 - pooled) * (1.0 / n1 as f64 + 1.0 / n2 as f64)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoBracket;

impl std::fmt::Display for NoBracket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "success rate never crosses the requested level")
    }
}

/// Linear interpolation of `p` where `phat` first crosses `level`, on rows
/// sorted by `p`.
pub fn estimate_crossing(rows: &[SweepResult], level: f64) -> Result<f64, NoBracket> {
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.p, r.phat)).collect();
    crossing(&points, level)
}

pub fn crossing(points: &[(f64, f64)], level: f64) -> Result<f64, NoBracket> {
    for w in points.windows(2) {
        let ((p0, y0), (p1, y1)) = (w[0], w[1]);
        if y0 == level {
            return Ok(p0);
        }
        if (y0 < level && y1 >= level) || (y0 > level && y1 <= level) {
            return Ok(p0 + (level - y0) * (p1 - p0) / (y1 - y0));
        }
    }
    match points.last() {
        Some(&(p, y)) if y == level => Ok(p),
        _ => Err(NoBracket),
    }
}
