//! First-moment formulas, their Stirling asymptotics, threshold functions
//! and the extremal claim used to bound the second moment.
//!
//! Large-n evaluation happens in natural-log space; exact rationals are only
//! for cross-checks at small n.

use std::f64::consts::{E, PI};

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::cycle::CycleSpec;
use crate::error::{invalid, Result};
use crate::exact::{distinct_draws, factorial, integer, pow, Rational};

/// Inputs of the moment formulas. `c = r / n` is the color density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentParams {
    pub spec: CycleSpec,
    pub p: f64,
    pub r: u64,
}

impl MomentParams {
    pub fn new(spec: CycleSpec, p: f64, r: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return invalid(format!("p = {p} outside [0, 1]"));
        }
        Ok(Self { spec, p, r })
    }

    /// `r = floor(c n)` for a rational density `c`.
    pub fn with_density(spec: CycleSpec, p: f64, c: Ratio<u64>) -> Result<Self> {
        let r = (c * spec.n() as u64).to_integer();
        Self::new(spec, p, r)
    }

    pub fn m(&self) -> u64 {
        self.spec.m() as u64
    }

    pub fn c(&self) -> f64 {
        self.r as f64 / self.spec.n() as f64
    }

    /// Whether `r = m`, i.e. `c = 1/(k - ell)` exactly.
    pub fn minimal_colors(&self) -> bool {
        self.r == self.m()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdSide {
    Below,
    Above,
}

impl ThresholdSide {
    /// `1 - eps` below the threshold, `1 + eps` above.
    pub fn factor(self, eps: f64) -> f64 {
        match self {
            ThresholdSide::Below => 1.0 - eps,
            ThresholdSide::Above => 1.0 + eps,
        }
    }
}

/// `ln n!`: direct summation up to 256, Stirling series beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 256 {
        return (2..=n).map(|i| (i as f64).ln()).sum();
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)))
}

/// `ln (x)_t`.
pub fn ln_falling(x: u64, t: u64) -> f64 {
    if t > x {
        return f64::NEG_INFINITY;
    }
    ln_factorial(x) - ln_factorial(x - t)
}

/// `E(Y) = n! p^m (r)_m / r^m`, exactly.
pub fn exact_expected_y(spec: CycleSpec, p: &Rational, r: u64) -> Rational {
    let m = spec.m() as u64;
    integer(factorial(spec.n() as u64)) * pow(p, m) * distinct_draws(r, m)
}

/// `ln E(Y)`; negative infinity when `p = 0` or `r < m`.
pub fn log_expected_y(params: &MomentParams) -> f64 {
    let m = params.m();
    if params.p == 0.0 || params.r < m {
        return f64::NEG_INFINITY;
    }
    let r = params.r as f64;
    ln_factorial(params.spec.n() as u64) + m as f64 * params.p.ln() + ln_falling(params.r, m)
        - m as f64 * r.ln()
}

fn log_bracket(params: &MomentParams) -> f64 {
    let n = params.spec.n() as f64;
    let d = 1.0 / params.spec.step() as f64;
    n.ln() + d * params.p.ln() - (1.0 + d)
}

/// Stirling form for `c > 1/(k - ell)`:
/// `sqrt(2 pi n r / (r - m)) * (n p^{1/(k-ell)} / e^{1 + 1/(k-ell)} * (c / (c - 1/(k-ell)))^{c - 1/(k-ell)})^n`.
pub fn asymptotic_log_expected_y_above(params: &MomentParams) -> Result<f64> {
    let m = params.m();
    if params.r <= m {
        return invalid(format!(
            "needs r > m (c > 1/(k-ell)), got r = {}, m = {m}",
            params.r
        ));
    }
    if params.p <= 0.0 {
        return invalid("needs p > 0");
    }
    let (n, r, c) = (params.spec.n() as f64, params.r as f64, params.c());
    let d = 1.0 / params.spec.step() as f64;
    let prefactor = 0.5 * (2.0 * PI * n * r / (r - m as f64)).ln();
    Ok(prefactor + n * (log_bracket(params) + (c - d) * (c / (c - d)).ln()))
}

/// Stirling form for `c = 1/(k - ell)`:
/// `2 pi n sqrt(1/(k-ell)) * (n p^{1/(k-ell)} / e^{1 + 1/(k-ell)})^n`.
pub fn asymptotic_log_expected_y_minimal(params: &MomentParams) -> Result<f64> {
    if !params.minimal_colors() {
        return invalid(format!(
            "needs r = m, got r = {}, m = {}",
            params.r,
            params.m()
        ));
    }
    if params.p <= 0.0 {
        return invalid("needs p > 0");
    }
    let n = params.spec.n() as f64;
    let prefactor = (2.0 * PI * n).ln() - 0.5 * (params.spec.step() as f64).ln();
    Ok(prefactor + n * log_bracket(params))
}

/// Stirling approximation of `ln E(Y)`, picking the branch by whether `r = m`.
pub fn asymptotic_log_expected_y(params: &MomentParams) -> Result<f64> {
    match params.r.cmp(&params.m()) {
        std::cmp::Ordering::Less => invalid(format!(
            "c < 1/(k-ell): r = {} < m = {}",
            params.r,
            params.m()
        )),
        std::cmp::Ordering::Equal => asymptotic_log_expected_y_minimal(params),
        std::cmp::Ordering::Greater => asymptotic_log_expected_y_above(params),
    }
}

const DENSITY_TOL: f64 = 1e-12;

/// First-moment threshold for rainbow `ell`-Hamiltonicity, `k > ell >= 2`:
/// `e^{k-ell+1} / n^{k-ell}` at `c = 1/(k-ell)`, otherwise
/// `((c - 1/(k-ell))/c)^{(k-ell)c - 1} e^{k-ell+1} / n^{k-ell}`.
/// No `(1 +- eps)` factor is applied.
pub fn threshold_general(k: u32, ell: u32, c: f64, n: u32) -> Result<f64> {
    if ell < 2 || k <= ell {
        return invalid(format!("needs k > ell >= 2, got k = {k}, ell = {ell}"));
    }
    if n == 0 {
        return invalid("n must be positive");
    }
    let s = (k - ell) as f64;
    let d = 1.0 / s;
    if !(c.is_finite()) || c < d - DENSITY_TOL {
        return invalid(format!("needs c >= 1/(k-ell) = {d}, got {c}"));
    }
    let base = (s + 1.0) - s * (n as f64).ln();
    if (c - d).abs() <= DENSITY_TOL {
        return Ok(base.exp());
    }
    Ok((base + (s * c - 1.0) * ((c - d) / c).ln()).exp())
}

/// Sharp threshold for a rainbow tight cycle (`k >= 4`): `e^2/n` at `c = 1`,
/// `((c-1)/c)^{c-1} e^2/n` for `c > 1`.
pub fn threshold_tight(k: u32, c: f64, n: u32) -> Result<f64> {
    if k < 4 {
        return invalid(format!("needs k >= 4, got {k}"));
    }
    if !(c.is_finite()) || c < 1.0 {
        return invalid(format!("needs c >= 1, got {c}"));
    }
    if n == 0 {
        return invalid("n must be positive");
    }
    Ok(tight_prefactor(c) * E * E / n as f64)
}

/// `((c-1)/c)^{c-1}`, equal to 1 at `c = 1`.
pub fn tight_prefactor(c: f64) -> f64 {
    if c == 1.0 {
        return 1.0;
    }
    ((c - 1.0) * (-1.0 / c).ln_1p()).exp()
}

/// `K = 4 k! k e^{k+1}`.
pub fn k_constant(k: u32) -> f64 {
    let k_fact: f64 = (1..=k).map(f64::from).product();
    4.0 * k_fact * k as f64 * (k as f64 + 1.0).exp()
}

fn check_claim_domain(c: f64, x: f64) -> Result<()> {
    if !(x > 0.0 && c > x && c.is_finite()) {
        return invalid(format!("needs c > x > 0, got c = {c}, x = {x}"));
    }
    Ok(())
}

/// `((c - x)/c)^{(c - x)/x}`, evaluated as `exp(((c-x)/x) ln(1 - x/c))`.
pub fn claim_f(c: f64, x: f64) -> Result<f64> {
    check_claim_domain(c, x)?;
    Ok((((c - x) / x) * (-x / c).ln_1p()).exp())
}

/// Sign of the x-derivative of [`claim_f`], `-sign(ln((c - x)/c) + x/c)`.
pub fn claim_derivative_sign(c: f64, x: f64) -> Result<i8> {
    check_claim_domain(c, x)?;
    let inner = (-x / c).ln_1p() + x / c;
    Ok(if inner < 0.0 {
        1
    } else if inner > 0.0 {
        -1
    } else {
        0
    })
}

/// Scans `((r-b)/r)^{(r-b)/b}` over `b = 1..=n` with `r = c n`, returning the
/// maximizing `b` and the maximum.
pub fn claim_max(c: f64, n: u64) -> Result<(u64, f64)> {
    if !(c > 1.0 && c.is_finite()) {
        return invalid(format!("needs c > 1, got {c}"));
    }
    if n == 0 {
        return invalid("n must be positive");
    }
    let r = c * n as f64;
    let mut best = (0u64, f64::NEG_INFINITY);
    for b in 1..=n {
        let bf = b as f64;
        let log_value = ((r - bf) / bf) * (-bf / r).ln_1p();
        if log_value > best.1 {
            best = (b, log_value);
        }
    }
    Ok((best.0, best.1.exp()))
}

/// Growth regimes stated with an unspecified `omega(n) -> infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OmegaRegime {
    /// `p >= omega / n^{k-2}` (2-overlapping cycles).
    TwoOverlap,
    /// `p >= omega log n / n^{k-1}` (loose cycles).
    Loose,
}

/// The `omega`-scaled lower bound on `p` for a regime; `omega` is the
/// caller's choice.
pub fn omega_bound(regime: OmegaRegime, n: u32, k: u32, omega: f64) -> f64 {
    let n = n as f64;
    match regime {
        OmegaRegime::TwoOverlap => omega / n.powi(k as i32 - 2),
        OmegaRegime::Loose => omega * n.ln() / n.powi(k as i32 - 1),
    }
}

pub fn meets_omega_condition(p: f64, regime: OmegaRegime, n: u32, k: u32, omega: f64) -> bool {
    p >= omega_bound(regime, n, k, omega)
}

/// Reference thresholds for uncolored and previously known cases, exposed
/// for comparison tables.
pub mod reference {
    use std::f64::consts::E;

    /// Lower threshold `e^{k-ell} / n^{k-ell}` for `ell`-Hamiltonicity, `k > ell >= 2`.
    pub fn uncolored_lower(k: u32, ell: u32, n: u32) -> f64 {
        let s = (k - ell) as i32;
        E.powi(s) / (n as f64).powi(s)
    }

    /// Sharp threshold `e/n` for a tight cycle, `k >= 4`.
    pub fn uncolored_tight(n: u32) -> f64 {
        E / n as f64
    }

    /// `(k-1)! ln n / n^{k-1}`, below which isolated vertices persist.
    pub fn loose_isolated_vertices(k: u32, n: u32) -> f64 {
        let fact: f64 = (1..k).map(f64::from).product();
        fact * (n as f64).ln() / (n as f64).powi(k as i32 - 1)
    }

    /// Edge probability `q = r p / (eps m + 1)` with `r = (1 + eps) m` colors.
    pub fn rainbow_transfer(p: f64, eps: f64, m: u32) -> (f64, f64) {
        let m = m as f64;
        let r = (1.0 + eps) * m;
        (r, r * p / (eps * m + 1.0))
    }

    /// `(ln n + ln ln n + omega) / n` for rainbow Hamilton cycles in graphs.
    pub fn graph_rainbow(n: u32, omega: f64) -> f64 {
        let n = n as f64;
        (n.ln() + n.ln().ln() + omega) / n
    }
}

/// Ratio helper: `c` as an exact rational from `r / n`.
pub fn density(r: u64, n: u64) -> Ratio<u64> {
    Ratio::new(r, n)
}

/// Whether the exact `E(Y)` is zero.
pub fn expected_y_vanishes(spec: CycleSpec, p: &Rational, r: u64) -> bool {
    exact_expected_y(spec, p, r).is_zero()
}
