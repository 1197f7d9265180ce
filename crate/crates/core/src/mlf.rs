//! Two-parameter Mittag-Leffler function `E_{α,β}(z) = Σ z^k / Γ(αk + β)` on
//! the real axis.
//!
//! Small arguments use the power series with compensated accumulation. On the
//! negative axis the series cancels catastrophically once its largest term
//! grows, and there we switch to the Laplace-inversion integral along the
//! branch cut,
//!
//! ```text
//! E_{α,β}(-x) = 1/(απ) ∫_0^∞ exp(-(xv)^{1/α}) (xv)^{(1-β)/α}
//!                 (v sin πβ + sin π(β-α)) / (v² + 2v cos πα + 1) dv,
//! ```
//!
//! valid for `0 < α < 1`, `0 < β ≤ 1`. Larger `β` are reduced with
//! `E_{α,β}(z) = (E_{α,β-α}(z) - 1/Γ(β-α)) / z`, which is stable for `|z| > 1`.

use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad;
use crate::special::{gamma, ln_gamma};
use crate::sum::CompensatedSum;

/// Parameters of `E_{α,β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MLParams {
    alpha: f64,
    beta: f64,
}

impl MLParams {
    /// `0 < α ≤ 1`, `β > 0`.
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::arg("Mittag-Leffler alpha must lie in (0, 1]"));
        }
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::arg("Mittag-Leffler beta must be positive"));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Largest admitted `|z|`.
pub const MAX_ARGUMENT: f64 = 1e4;

/// Evaluation settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlConfig {
    /// Negative arguments beyond `-z_switch` never use the series.
    pub z_switch: f64,
    /// Largest series term tolerated on the negative axis; bigger terms mean
    /// the compensated sum would lose more digits than the accuracy target allows.
    pub max_series_term: f64,
    /// Absolute accuracy target.
    pub tolerance: f64,
}

impl Default for MlConfig {
    fn default() -> Self {
        Self { z_switch: 5.0, max_series_term: 1e4, tolerance: 1e-10 }
    }
}

/// `E_{α,β}(z)` with the default configuration.
pub fn mittag_leffler(params: MLParams, z: f64) -> Result<f64> {
    mittag_leffler_with(params, z, &MlConfig::default())
}

pub fn mittag_leffler_with(params: MLParams, z: f64, cfg: &MlConfig) -> Result<f64> {
    if !z.is_finite() || libm::fabs(z) > MAX_ARGUMENT {
        return Err(Error::arg("Mittag-Leffler argument must satisfy |z| <= 1e4"));
    }
    let MLParams { alpha, beta } = params;
    if z == 0.0 {
        return Ok(1.0 / gamma(beta));
    }
    if z > 0.0 {
        return series(alpha, beta, z);
    }
    let x = -z;
    if x <= cfg.z_switch && largest_term(alpha, beta, x) <= cfg.max_series_term {
        return series(alpha, beta, z);
    }
    negative_axis(alpha, beta, x, cfg.tolerance)
}

/// Term `z^k / Γ(αk + β)`; `power` is `z^k` when it is still representable.
#[inline]
fn term(alpha: f64, beta: f64, z: f64, k: usize, power: f64) -> f64 {
    let arg = alpha * k as f64 + beta;
    if arg < 170.0 && power.is_finite() {
        power / gamma(arg)
    } else {
        let mag = libm::exp(k as f64 * libm::log(libm::fabs(z)) - ln_gamma(arg));
        if z < 0.0 && k % 2 == 1 {
            -mag
        } else {
            mag
        }
    }
}

fn largest_term(alpha: f64, beta: f64, x: f64) -> f64 {
    let mut best = 0.0f64;
    let mut power = 1.0;
    for k in 0..4000 {
        let t = libm::fabs(term(alpha, beta, x, k, power));
        if t > best {
            best = t;
        } else if t < best * 1e-3 && alpha * k as f64 + beta > 2.0 {
            break;
        }
        power *= x;
    }
    best
}

fn series(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    let mut acc = CompensatedSum::new();
    let mut power = 1.0;
    let mut peak = 0.0f64;
    for k in 0..20_000 {
        let t = term(alpha, beta, z, k, power);
        acc.add(t);
        let mag = libm::fabs(t);
        peak = peak.max(mag);
        let total = libm::fabs(acc.value());
        // past the peak and below round-off of the running sum
        if mag < peak && mag <= 1e-17 * total.max(1e-300) && alpha * k as f64 + beta > 2.0 {
            return finite(acc.value());
        }
        if mag == 0.0 && k > 0 {
            return finite(acc.value());
        }
        power *= z;
    }
    Err(Error::AccuracyFailure("Mittag-Leffler series did not converge".into()))
}

fn finite(v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::AccuracyFailure("Mittag-Leffler value overflows".into()))
    }
}

/// `E_{α,β}(-x)` for `x > 0` away from the origin.
fn negative_axis(alpha: f64, beta: f64, x: f64, tol: f64) -> Result<f64> {
    if beta > 1.0 {
        let lower = negative_axis(alpha, beta - alpha, x, tol)?;
        return Ok((lower - 1.0 / gamma(beta - alpha)) / -x);
    }
    if alpha == 1.0 {
        if beta == 1.0 {
            return Ok(libm::exp(-x));
        }
        return Err(Error::AccuracyFailure(
            "E_{1,beta}(z) for large negative z is only available for integer beta".into(),
        ));
    }
    let (s_beta, s_shift, c_alpha) = (libm::sin(PI * beta), libm::sin(PI * (beta - alpha)), libm::cos(PI * alpha));
    let inv_alpha = 1.0 / alpha;
    let power = (1.0 - beta) * inv_alpha;
    let integrand = |v: f64| {
        let r = x * v;
        let e = libm::exp(-libm::pow(r, inv_alpha));
        let p = if power == 0.0 { 1.0 } else { libm::pow(r, power) };
        e * p * (v * s_beta + s_shift) / (v * v + 2.0 * v * c_alpha + 1.0)
    };
    // exp(-60) is far below the target
    let v_max = libm::pow(60.0, alpha) / x;
    let mut breaks = [1.0 / x, v_max];
    if c_alpha < 0.0 {
        breaks[1] = -c_alpha;
    }
    let scale = 1.0 / (alpha * PI);
    let value = quad::adaptive(integrand, 0.0, v_max, &breaks, 1e-3 * tol / scale)?;
    Ok(scale * value)
}

/// `g0 E_{α,1}(-λ t^α) + c t^α E_{α,α+1}(-λ t^α)`: solution of
/// `cD^α g + λ g = c`, `g(0) = g0`.
pub fn exact_modal_solution(alpha: f64, lambda: f64, g0: f64, c: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::arg("order must lie in (0, 1)"));
    }
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::arg("eigenvalue must be nonnegative"));
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::arg("time must be nonnegative"));
    }
    if t == 0.0 {
        return Ok(g0);
    }
    let ta = libm::pow(t, alpha);
    let z = -lambda * ta;
    let mut v = 0.0;
    if g0 != 0.0 {
        v += g0 * mittag_leffler(MLParams::new(alpha, 1.0)?, z)?;
    }
    if c != 0.0 {
        v += c * ta * mittag_leffler(MLParams::new(alpha, alpha + 1.0)?, z)?;
    }
    Ok(v)
}
