//! Discrete norms in time and space, the Sobolev-Slobodeckij seminorm, and
//! numeric reports for the boundedness and equivalence results on `J^α`.

use crate::error::{Error, Result};
use crate::fracops::rl_integral;
use crate::galerkin::SpectralBasis;
use crate::grid::{sample, ModalPath, Order, ScalarPath, TimeGrid};
use crate::special::{gamma, lag_weights};
use crate::sum::CompensatedSum;

/// Outcome of checking `lhs ≤ rhs` (and `lower ≤ lhs` when a lower bound is
/// present). `satisfied` holds exactly when `slack ≥ -report_tol`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    pub satisfied: bool,
    /// `rhs - lhs`, or the smaller of the two margins for a two-sided check.
    pub slack: f64,
    pub report_tol: f64,
    #[cfg_attr(feature = "serde", serde(default, skip_serializing_if = "Option::is_none"))]
    pub lower: Option<f64>,
}

impl BoundReport {
    pub fn upper(lhs: f64, rhs: f64, constant_used: f64, report_tol: f64) -> Self {
        let slack = rhs - lhs;
        Self { lhs, rhs, constant_used, satisfied: slack >= -report_tol, slack, report_tol, lower: None }
    }

    pub fn two_sided(lhs: f64, lower: f64, upper: f64, constant_used: f64, report_tol: f64) -> Self {
        let slack = (upper - lhs).min(lhs - lower);
        Self { lhs, rhs: upper, constant_used, satisfied: slack >= -report_tol, slack, report_tol, lower: Some(lower) }
    }
}

/// Trapezoid approximation of `(∫_0^T |f|^p)^{1/p}`; `p = ∞` gives the
/// largest nodal magnitude.
pub fn lp_time_norm(f: &ScalarPath, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::arg("Lebesgue exponent must be at least 1"));
    }
    let v = f.values();
    if p == f64::INFINITY {
        return Ok(v.iter().fold(0.0, |m, x| m.max(x.abs())));
    }
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    let h = f.grid().step();
    let n = v.len();
    let mut acc = CompensatedSum::new();
    for (i, x) in v.iter().enumerate() {
        let w = if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
        acc.add(w * libm::pow(x.abs() / scale, p));
    }
    Ok(scale * libm::pow(h * acc.value(), 1.0 / p))
}

/// `L²(Ω)` norm of a function from its orthonormal coefficients.
pub fn l2_omega_norm(row: &[f64]) -> f64 {
    let scale = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = row.iter().map(|x| (x / scale) * (x / scale)).collect::<CompensatedSum>().value();
    scale * libm::sqrt(s)
}

/// `H¹₀(Ω)` norm `√(Σ λ_k g_k²)` of a coefficient row.
pub fn h10_norm(row: &[f64], basis: &SpectralBasis) -> Result<f64> {
    if row.len() != basis.modes() {
        return Err(Error::arg("coefficient row and basis differ in mode count"));
    }
    let s: f64 = row.iter().zip(basis.eigenvalues()).map(|(g, l)| l * g * g).collect::<CompensatedSum>().value();
    Ok(libm::sqrt(s))
}

/// Borrowed scalar or vector-valued path.
#[derive(Debug, Clone, Copy)]
pub enum PathRef<'a> {
    Scalar(&'a ScalarPath),
    Modal(&'a ModalPath),
}

impl<'a> From<&'a ScalarPath> for PathRef<'a> {
    fn from(p: &'a ScalarPath) -> Self {
        PathRef::Scalar(p)
    }
}

impl<'a> From<&'a ModalPath> for PathRef<'a> {
    fn from(p: &'a ModalPath) -> Self {
        PathRef::Modal(p)
    }
}

impl PathRef<'_> {
    fn grid(&self) -> &TimeGrid {
        match self {
            PathRef::Scalar(p) => p.grid(),
            PathRef::Modal(p) => p.grid(),
        }
    }

    /// `‖f(t_i) - f(t_j)‖²`.
    #[inline]
    fn dist2(&self, i: usize, j: usize) -> f64 {
        match self {
            PathRef::Scalar(p) => {
                let d = p.values()[i] - p.values()[j];
                d * d
            }
            PathRef::Modal(p) => p.row(i).iter().zip(p.row(j)).map(|(a, b)| (a - b) * (a - b)).sum(),
        }
    }
}

/// Slobodeckij seminorm with diagnostics about the near-diagonal band.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SeminormReport {
    /// `[f]_{W^{γ,2}}`.
    pub value: f64,
    /// Share of `[f]²` coming from the band `|t - s| < h`.
    pub band_share: f64,
    /// The band carries more than half of the total; the value is then
    /// dominated by the local model rather than by data.
    pub band_dominated: bool,
}

/// `[f]_{W^{γ,2}(0,T)} = (∫∫ ‖f(t) - f(s)‖² / |t - s|^{2γ+1} ds dt)^{1/2}`.
pub fn slobodeckij_seminorm<'a>(f: impl Into<PathRef<'a>>, gamma: f64) -> Result<f64> {
    Ok(slobodeckij_report(f, gamma)?.value)
}

/// Seminorm by lag: with `d = t - s`,
/// `[f]² = 2 ∫_0^T d^{1-2γ} H(d) dd` and `H(d) = d^{-2} ∫_0^{T-d} ‖f(s+d) - f(s)‖² ds`.
/// `H` is sampled at `d = kh` by the trapezoid rule in `s`, interpolated linearly
/// in `d`, and integrated against the power exactly. On the band `d < h` the
/// value `H(0)` comes from linear extrapolation, which is the model
/// `f(t) - f(s) ≈ f'·(t - s)`.
pub fn slobodeckij_report<'a>(f: impl Into<PathRef<'a>>, gamma: f64) -> Result<SeminormReport> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::arg("Slobodeckij order must lie in (0, 1)"));
    }
    let f = f.into();
    let grid = *f.grid();
    let n = grid.len();
    let h = grid.step();
    let mut hk = alloc::vec![0.0; n];
    for (k, slot) in hk.iter_mut().enumerate().skip(1) {
        let count = n - k;
        if count < 2 {
            continue;
        }
        let mut acc = CompensatedSum::new();
        for j in 0..count {
            let w = if j == 0 || j + 1 == count { 0.5 } else { 1.0 };
            acc.add(w * f.dist2(j + k, j));
        }
        let d = k as f64 * h;
        *slot = h * acc.value() / (d * d);
    }
    hk[0] = if n > 3 { (2.0 * hk[1] - hk[2]).max(0.0) } else { hk[1] };

    let q = 1.0 - 2.0 * gamma;
    let scale = libm::pow(h, q + 1.0);
    let (n0, f0) = lag_weights(q, 0.0);
    let band = scale * (n0 * hk[0] + f0 * hk[1]);
    let mut rest = CompensatedSum::new();
    for k in 1..n - 1 {
        let (a, b) = lag_weights(q, k as f64);
        rest.add(a * hk[k] + b * hk[k + 1]);
    }
    let total = 2.0 * (band + scale * rest.value());
    let band_share = if total > 0.0 { 2.0 * band / total } else { 0.0 };
    Ok(SeminormReport { value: libm::sqrt(total.max(0.0)), band_share, band_dominated: band_share > 0.5 })
}

/// `‖f‖_{W^{γ,2}} = √(‖f‖²_{L²} + [f]²)`.
pub fn sobolev_norm(f: &ScalarPath, gamma: f64) -> Result<f64> {
    let l2 = lp_time_norm(f, 2.0)?;
    let semi = slobodeckij_seminorm(f, gamma)?;
    Ok(libm::sqrt(l2 * l2 + semi * semi))
}

/// Bracket `[m, M]` of `‖f‖_{L²} / ‖J^γ f‖_{W^{γ,2}}` measured on
/// `sin(kπt/T)`, `k = 1..10`, `γ = 0.4`, `T = 1`, `n = 4097`. Regression values;
/// they are not sharp constants.
pub const GLY_BRACKET: (f64, f64) = (0.404_891_539_278, 0.662_808_344_794);

/// Relative tolerance applied to [`GLY_BRACKET`].
pub const GLY_TOLERANCE: f64 = 0.01;

/// `‖f‖_{L²} / ‖J^γ f‖_{W^{γ,2}}`.
pub fn gly_ratio(f: &ScalarPath, gamma: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::arg("order must lie in (0, 1)"));
    }
    let j = rl_integral(f, Order::integral(gamma)?)?;
    let den = sobolev_norm(&j, gamma)?;
    if den == 0.0 {
        return Err(Error::DegenerateInput("J^γ f vanishes; the ratio is undefined".into()));
    }
    Ok(lp_time_norm(f, 2.0)? / den)
}

/// Checks the ratio against the frozen bracket widened by [`GLY_TOLERANCE`].
pub fn gly_equivalence_report(f: &ScalarPath, gamma: f64) -> Result<BoundReport> {
    gly_equivalence_report_with(f, gamma, GLY_BRACKET)
}

pub fn gly_equivalence_report_with(f: &ScalarPath, gamma: f64, bracket: (f64, f64)) -> Result<BoundReport> {
    let r = gly_ratio(f, gamma)?;
    let (m, big_m) = bracket;
    Ok(BoundReport::two_sided(r, m, big_m, big_m, GLY_TOLERANCE * m))
}

/// Which mapping property of `J^α` on `L^p` is checked.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "kind"))]
pub enum Regime {
    /// `‖J^α f‖_p ≤ T^α/Γ(α+1) ‖f‖_p`, any `α`, `p ≥ 1`.
    PToP,
    /// `sup |J^α f| ≤ K ‖f‖_p` for `α > 1/p`.
    SupNorm,
    /// `‖J^α f‖_{p/(1-pα)} ≤ K ‖f‖_p` for `α < 1/p`.
    Lift,
    /// `‖J^{1/p} f‖_q ≤ K ‖f‖_p`, `1 ≤ q < ∞`.
    Critical { q: f64 },
}

impl Regime {
    /// The non-trivial regime implied by `(α, p)`; `q` is used only in the
    /// critical case.
    pub fn classify(alpha: f64, p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::arg("only the p-to-p regime is available for p = 1 or p = ∞"));
        }
        let r = if libm::fabs(alpha * p - 1.0) <= 1e-12 {
            Regime::Critical { q }
        } else if alpha * p > 1.0 {
            Regime::SupNorm
        } else {
            Regime::Lift
        };
        r.validate(alpha, p)?;
        Ok(r)
    }

    fn validate(self, alpha: f64, p: f64) -> Result<()> {
        if let Regime::PToP = self {
            return if p >= 1.0 { Ok(()) } else { Err(Error::arg("p must be at least 1")) };
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::arg("this regime needs 1 < p < ∞"));
        }
        let ap = alpha * p;
        let ok = match self {
            Regime::SupNorm => ap > 1.0 + 1e-12,
            Regime::Lift => ap < 1.0 - 1e-12,
            Regime::Critical { q } => libm::fabs(ap - 1.0) <= 1e-12 && q >= 1.0 && q.is_finite(),
            Regime::PToP => unreachable!(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::arg("the order and exponent do not fit the requested regime"))
        }
    }

    /// Exponent of the norm taken on `J^α f`.
    fn target(self, alpha: f64, p: f64) -> f64 {
        match self {
            Regime::PToP => p,
            Regime::SupNorm => f64::INFINITY,
            Regime::Lift => p / (1.0 - p * alpha),
            Regime::Critical { q } => q,
        }
    }
}

fn regime_ratio(f: &ScalarPath, alpha: Order, p: f64, regime: Regime) -> Result<(f64, f64)> {
    let j = rl_integral(f, alpha)?;
    let lhs = lp_time_norm(&j, regime.target(alpha.value(), p))?;
    Ok((lhs, lp_time_norm(f, p)?))
}

/// A named function on `[0, 1]`.
pub type Reference = (&'static str, fn(f64) -> f64);

/// Fixed functions on `[0, 1]` used for calibration and bound checks; sample
/// them at `t / T` on longer horizons.
pub static REFERENCE_FUNCTIONS: [Reference; 20] = [
    ("one", |_| 1.0),
    ("t", |t| t),
    ("t^2", |t| t * t),
    ("1-t", |t| 1.0 - t),
    ("sqrt", libm::sqrt),
    ("sin(pi t)", |t| libm::sin(core::f64::consts::PI * t)),
    ("sin(2 pi t)", |t| libm::sin(2.0 * core::f64::consts::PI * t)),
    ("sin(5 pi t)", |t| libm::sin(5.0 * core::f64::consts::PI * t)),
    ("cos(pi t)", |t| libm::cos(core::f64::consts::PI * t)),
    ("cos(3 pi t)", |t| libm::cos(3.0 * core::f64::consts::PI * t)),
    ("exp(-t)", |t| libm::exp(-t)),
    ("exp(2t)", |t| libm::exp(2.0 * t)),
    ("exp(-20t)", |t| libm::exp(-20.0 * t)),
    ("|t-1/2|", |t| libm::fabs(t - 0.5)),
    ("t^3-t", |t| t * t * t - t),
    ("tanh(10(t-1/2))", |t| libm::tanh(10.0 * (t - 0.5))),
    ("1/(1+25t^2)", |t| 1.0 / (1.0 + 25.0 * t * t)),
    ("log(1+t)", libm::log1p),
    ("t sin(8t)", |t| t * libm::sin(8.0 * t)),
    ("(1-t)^4", |t| libm::pow(1.0 - t, 4.0)),
];

/// Node count used when calibrating the empirical constants.
pub const CALIBRATION_NODES: usize = 4097;

/// Largest ratio `lhs / ‖f‖_p` over [`REFERENCE_FUNCTIONS`] on `[0, T]`. This is
/// a regression constant, not a proven bound.
pub fn calibrate_jalpha_constant(alpha: Order, p: f64, regime: Regime, horizon: f64) -> Result<f64> {
    regime.validate(alpha.value(), p)?;
    let grid = TimeGrid::uniform(horizon, CALIBRATION_NODES)?;
    let mut best = 0.0f64;
    for (_, g) in REFERENCE_FUNCTIONS.iter() {
        let f = sample(|t| g(t / horizon), &grid)?;
        let (lhs, norm) = regime_ratio(&f, alpha, p, regime)?;
        if norm > 0.0 {
            best = best.max(lhs / norm);
        }
    }
    Ok(best)
}

/// Bound report for `J^α` in the given regime. The p-to-p regime uses the
/// constant `T^α/Γ(α+1)`; the others use [`calibrate_jalpha_constant`].
/// Quadrature slack is `10h`.
pub fn jalpha_bound_report(f: &ScalarPath, alpha: Order, p: f64, regime: Regime) -> Result<BoundReport> {
    regime.validate(alpha.value(), p)?;
    let constant = match regime {
        Regime::PToP => libm::pow(f.grid().horizon(), alpha.value()) / gamma(alpha.value() + 1.0),
        _ => calibrate_jalpha_constant(alpha, p, regime, f.grid().horizon())?,
    };
    jalpha_bound_report_with(f, alpha, p, regime, constant)
}

/// As [`jalpha_bound_report`] with a caller-supplied constant.
pub fn jalpha_bound_report_with(
    f: &ScalarPath,
    alpha: Order,
    p: f64,
    regime: Regime,
    constant: f64,
) -> Result<BoundReport> {
    regime.validate(alpha.value(), p)?;
    let (lhs, norm) = regime_ratio(f, alpha, p, regime)?;
    Ok(BoundReport::upper(lhs, constant * norm, constant, 10.0 * f.grid().step()))
}
