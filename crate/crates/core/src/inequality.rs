//! Discrete checks of the fractional energy inequalities, the integration by
//! parts identity behind them, the product rule for inner products, and the
//! forcing-regularity functional.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fracops::{modal_map, rl_derivative, FracOp, KernelWeights};
use crate::grid::{check_same_shape, pointwise_inner, ModalPath, Order, ScalarPath, TimeGrid};
use crate::special::gamma;

/// Whether a gap path should stay nonnegative or vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum GapKind {
    /// `gap ≥ 0`; violations are nodes with `gap < -check_tol`.
    Inequality,
    /// `gap = 0`; violations are nodes with `|gap| > check_tol`.
    Identity,
}

/// Nodal values of a gap together with its verdict on the interior nodes.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapPath {
    pub grid: TimeGrid,
    pub gap: Vec<f64>,
    pub kind: GapKind,
    /// First node included in the verdict.
    pub first_interior: usize,
    pub check_tol: f64,
    pub min_gap: f64,
    pub max_abs_gap: f64,
    pub violation_nodes: Vec<usize>,
}

impl GapPath {
    pub fn new(grid: TimeGrid, gap: Vec<f64>, kind: GapKind, first_interior: usize, check_tol: f64) -> Self {
        let mut p = Self {
            grid,
            gap,
            kind,
            first_interior,
            check_tol,
            min_gap: 0.0,
            max_abs_gap: 0.0,
            violation_nodes: Vec::new(),
        };
        p.evaluate();
        p
    }

    fn evaluate(&mut self) {
        let interior = self.gap.iter().enumerate().skip(self.first_interior);
        self.min_gap = interior.clone().map(|(_, g)| *g).fold(f64::INFINITY, f64::min);
        if !self.min_gap.is_finite() {
            self.min_gap = 0.0;
        }
        self.max_abs_gap = interior.clone().map(|(_, g)| g.abs()).fold(0.0, f64::max);
        let tol = self.check_tol;
        self.violation_nodes = interior
            .filter(|(_, g)| match self.kind {
                GapKind::Inequality => **g < -tol,
                GapKind::Identity => g.abs() > tol,
            })
            .map(|(i, _)| i)
            .collect();
    }

    /// Same gap judged with another tolerance.
    pub fn with_tol(mut self, check_tol: f64) -> Self {
        self.check_tol = check_tol;
        self.evaluate();
        self
    }

    pub fn holds(&self) -> bool {
        self.violation_nodes.is_empty()
    }

    /// Gap at an arbitrary time by linear interpolation between nodes.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let horizon = self.grid.horizon();
        if !(t >= 0.0 && t <= horizon) {
            return Err(Error::arg("time lies outside the grid"));
        }
        let x = t / self.grid.step();
        let i = (x as usize).min(self.gap.len() - 2);
        let w = x - i as f64;
        Ok((1.0 - w) * self.gap[i] + w * self.gap[i + 1])
    }

    pub fn as_path(&self) -> ScalarPath {
        ScalarPath::from_raw(self.grid, self.gap.clone())
    }
}

/// Constants `C` in the default tolerance `C·h^{1-α}`, one per checker. Each is
/// twice the largest interior discretization error per `h^{1-α}` and per data
/// scale over `α ∈ {0.3, 0.5, 0.7}`, `n ∈ {513, 2049}`. The energy gaps use the
/// scale `max(1, s(u)²)` with `s(u) = sup‖u‖ + sup‖u'‖`. Exact energy gaps of
/// the trigonometric references come from quadrature of `∫ (t-s)^{-α} u'(s) ds`
/// after the substitution `r = (t-s)^{1-α}`.
pub mod calibrated {
    /// References `t + t²`, `sin kπt`, `1 - cos kπt`, `cos kπt`, `k ≤ 5`.
    pub const CAPUTO_GAP: f64 = 0.00223;
    /// References `t + t²`, `sin kπt`, `1 - cos kπt`, `k ≤ 5`, nodes from `t_2`.
    pub const RL_GAP: f64 = 0.0235;
    /// References `t + t²`, `sin kπt`, `cos kπt`, `k ≤ 5`.
    pub const LEMMA32: f64 = 1.09;
    /// References `(t + t², 1 + t)` and `(sin kπt, 1 - cos kπt)`, `k ≤ 5`, nodes
    /// from `t_2`.
    pub const PRODUCT_RULE: f64 = 0.0208;
}

/// `C·h^{1-α}`.
pub fn default_tol(constant: f64, grid: &TimeGrid, alpha: Order) -> f64 {
    constant * libm::pow(grid.step(), 1.0 - alpha.value())
}

/// `max(1, s(u)²)` with `s` from [`w1_scale`].
fn energy_scale(u: &ModalPath) -> f64 {
    let s = w1_scale(u);
    (s * s).max(1.0)
}

fn energy_gap(u: &ModalPath, alpha: Order, op: FracOp) -> Result<Vec<f64>> {
    let du = modal_map(op, u, alpha)?;
    let q = u.squared_norms();
    let dq = op.apply(&q, alpha)?;
    let n = u.grid().len();
    Ok((0..n)
        .map(|i| {
            let cross: f64 = du.row(i).iter().zip(u.row(i)).map(|(d, v)| d * v).sum();
            2.0 * cross - dq.values()[i]
        })
        .collect())
}

/// `2 (cD^α u, u) - cD^α ‖u‖²` with L1 derivatives.
pub fn caputo_energy_gap(u: &ModalPath, alpha: Order) -> Result<GapPath> {
    let alpha = Order::derivative(alpha.value())?;
    let gap = energy_gap(u, alpha, FracOp::Caputo)?;
    let tol = default_tol(calibrated::CAPUTO_GAP, u.grid(), alpha) * energy_scale(u);
    Ok(GapPath::new(*u.grid(), gap, GapKind::Inequality, 1, tol))
}

/// `2 (D^α u, u) - D^α ‖u‖²` with Riemann-Liouville derivatives; `t_0` and
/// `t_1` are left out of the verdict.
pub fn rl_energy_gap(u: &ModalPath, alpha: Order) -> Result<GapPath> {
    let alpha = Order::derivative(alpha.value())?;
    let gap = energy_gap(u, alpha, FracOp::RlDerivative)?;
    let tol = default_tol(calibrated::RL_GAP, u.grid(), alpha) * energy_scale(u);
    Ok(GapPath::new(*u.grid(), gap, GapKind::Inequality, 2, tol))
}

/// Time derivative of every column: centered differences inside, second
/// order one-sided differences at the ends.
fn time_derivative(f: &ModalPath) -> ModalPath {
    let grid = *f.grid();
    let (n, m) = (grid.len(), f.modes());
    let h = grid.step();
    let mut out = alloc::vec![0.0; n * m];
    for j in 0..m {
        let v = |i: usize| f.get(i, j);
        for i in 0..n {
            out[i * m + j] = if n == 2 {
                (v(1) - v(0)) / h
            } else if i == 0 {
                (-3.0 * v(0) + 4.0 * v(1) - v(2)) / (2.0 * h)
            } else if i + 1 == n {
                (3.0 * v(i) - 4.0 * v(i - 1) + v(i - 2)) / (2.0 * h)
            } else {
                (v(i + 1) - v(i - 1)) / (2.0 * h)
            };
        }
    }
    ModalPath::from_raw(grid, m, out)
}

/// Both sides of the integration by parts identity at every node:
///
/// ```text
/// LHS(t) = 2/Γ(1-α) Σ_x ∫_0^t (t-s)^{-α} f'(s) [f(t) - f(s)] ds
/// RHS(t) = α/Γ(1-α) Σ_x ∫_0^t (t-w)^{α-1} (∫_0^w (t-s)^{-α} f'(s) ds)² dw
/// ```
///
/// Inner integrals use product-linear weights and are accumulated cell by
/// cell, so each node costs `O(n·m)`. Every RHS value is a sum of squares
/// times nonnegative weights.
pub fn lemma32_sides(f: &ModalPath, alpha: Order) -> Result<(Vec<f64>, Vec<f64>)> {
    let alpha = Order::derivative(alpha.value())?.value();
    let grid = *f.grid();
    let (n, m) = (grid.len(), f.modes());
    let df = time_derivative(f);
    let inner = KernelWeights::new(&grid, 1.0 - alpha);
    let outer = KernelWeights::new(&grid, alpha);
    let g = 1.0 / gamma(1.0 - alpha);
    let mut lhs = alloc::vec![0.0; n];
    let mut rhs = alloc::vec![0.0; n];
    let mut prod = alloc::vec![0.0; n];
    let mut q = alloc::vec![0.0; n];
    let mut col = alloc::vec![0.0; n];
    let mut cum = alloc::vec![0.0; n];
    for i in 1..n {
        let mut l = 0.0;
        q[..=i].iter_mut().for_each(|x| *x = 0.0);
        for j in 0..m {
            let fi = f.get(i, j);
            for s in 0..=i {
                col[s] = df.get(s, j);
                prod[s] = col[s] * (fi - f.get(s, j));
            }
            l += inner.apply_at(&prod[..=i], i);
            cum[0] = 0.0;
            for w in 1..=i {
                cum[w] = cum[w - 1] + inner.cell(&col, i, w);
            }
            for w in 0..=i {
                q[w] += cum[w] * cum[w];
            }
        }
        lhs[i] = 2.0 * g * l;
        rhs[i] = alpha * g * outer.apply_at(&q[..=i], i);
    }
    Ok((lhs, rhs))
}

/// `LHS - RHS` of [`lemma32_sides`], judged as an identity. The tolerance is
/// `C·h^{1-α}` times `max(1, max_i max(|LHS_i|, |RHS_i|))`.
pub fn lemma32_residual(f: &ModalPath, alpha: Order) -> Result<GapPath> {
    let (lhs, rhs) = lemma32_sides(f, alpha)?;
    let gap = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    let scale = lhs.iter().chain(&rhs).fold(1.0f64, |m, v| m.max(libm::fabs(*v)));
    let tol = default_tol(calibrated::LEMMA32, f.grid(), alpha) * scale;
    Ok(GapPath::new(*f.grid(), gap, GapKind::Identity, 1, tol))
}

/// Residual of the product rule
///
/// ```text
/// D^α (f₁, f₂) = (D^α f₁, f₂) + (f₁, D^α f₂)
///              - α/Γ(1-α) ∫_0^t (f₁(s)-f₁(t), f₂(s)-f₂(t)) (t-s)^{-α-1} ds
///              - (f₁(t), f₂(t)) / (Γ(1-α) t^α)
/// ```
///
/// The singular integral is rewritten as `∫ (t-s)^{1-α} M(s) ds` with
/// `M(s) = N(s)/(t-s)²`, which is smooth for smooth data. `M` is integrated
/// with product-linear weights; `M(t)` comes from linear extrapolation (the
/// local linear model `f(s) - f(t) ≈ f'(t)(s - t)`).
///
/// The tolerance is `C·h^{1-α}` times `max(1, s(f₁) s(f₂))` with
/// `s(f) = sup‖f‖ + sup‖f'‖` (difference quotients). Inputs with
/// `f(0) ≠ 0` carry a `t^{-α}` layer that the first nodes cannot resolve.
pub fn product_rule_residual(f1: &ModalPath, f2: &ModalPath, alpha: Order) -> Result<GapPath> {
    let alpha = Order::derivative(alpha.value())?;
    check_same_shape(f1, f2)?;
    let a = alpha.value();
    let grid = *f1.grid();
    let (n, m) = (grid.len(), f1.modes());
    let p = pointwise_inner(f1, f2)?;
    let dp = rl_derivative(&p, alpha)?;
    let d1 = modal_map(FracOp::RlDerivative, f1, alpha)?;
    let d2 = modal_map(FracOp::RlDerivative, f2, alpha)?;
    let kw = KernelWeights::new(&grid, 2.0 - a);
    let g = 1.0 / gamma(1.0 - a);
    let mut gap = alloc::vec![0.0; n];
    let mut mm = alloc::vec![0.0; n];
    for i in 1..n {
        let ti = grid.node(i);
        for (l, slot) in mm.iter_mut().enumerate().take(i) {
            let num: f64 = (0..m).map(|j| (f1.get(l, j) - f1.get(i, j)) * (f2.get(l, j) - f2.get(i, j))).sum();
            let d = ti - grid.node(l);
            *slot = num / (d * d);
        }
        mm[i] = if i >= 2 { 2.0 * mm[i - 1] - mm[i - 2] } else { mm[0] };
        let singular = kw.apply_at(&mm[..=i], i);
        let cross: f64 = (0..m).map(|j| d1.get(i, j) * f2.get(i, j) + f1.get(i, j) * d2.get(i, j)).sum();
        let rhs = cross - a * g * singular - p.values()[i] * g / libm::pow(ti, a);
        gap[i] = dp.values()[i] - rhs;
    }
    let tol = default_tol(calibrated::PRODUCT_RULE, &grid, alpha) * (w1_scale(f1) * w1_scale(f2)).max(1.0);
    Ok(GapPath::new(grid, gap, GapKind::Identity, 2, tol))
}

/// `sup_i ‖f(t_i)‖ + sup_i ‖f(t_{i+1}) - f(t_i)‖ / h`.
fn w1_scale(f: &ModalPath) -> f64 {
    let h = f.grid().step();
    let mut value = 0.0f64;
    let mut slope = 0.0f64;
    for i in 0..f.grid().len() {
        let row = f.row(i);
        value = value.max(row.iter().map(|v| v * v).sum());
        if i > 0 {
            let prev = f.row(i - 1);
            slope = slope.max(row.iter().zip(prev).map(|(a, b)| (a - b) * (a - b)).sum());
        }
    }
    libm::sqrt(value) + libm::sqrt(slope) / h
}

/// `max_i ∫_0^{t_i} (t_i - s)^{α-1} ‖f(s)‖² ds` with the kernel integrated
/// exactly against piecewise-linear `‖f‖²`.
pub fn forcing_regularity(f: &ModalPath, alpha: Order) -> Result<f64> {
    Ok(forcing_regularity_path(f, alpha)?.into_iter().fold(0.0, f64::max))
}

/// The values behind [`forcing_regularity`] at every node.
pub fn forcing_regularity_path(f: &ModalPath, alpha: Order) -> Result<Vec<f64>> {
    let alpha = Order::derivative(alpha.value())?.value();
    let q = f.squared_norms().into_values();
    if q.iter().any(|x| !x.is_finite()) {
        return Err(Error::input("forcing has non-finite samples"));
    }
    Ok(KernelWeights::new(f.grid(), alpha).apply(&q))
}
