//! Discrete Riemann-Liouville integral, Riemann-Liouville derivative and
//! Caputo derivative on uniform grids.
//!
//! All three are history convolutions with weights that depend only on the
//! lag `i - j`, so each operator is one `O(n²)` pass over the path.

use alloc::vec::Vec;

use crate::error::Result;
use crate::grid::{ModalPath, Order, ScalarPath, TimeGrid};
use crate::special::{gamma, lag_weights, pow_forward_diff};

/// Interpolation assumed by the product quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum QuadratureKind {
    /// Piecewise-linear data, kernel integrated exactly on each cell.
    #[default]
    ProductLinear,
}

/// Product-linear weights of `∫_0^{t_i} (t_i - s)^{β-1} f(s) ds`.
///
/// `near[k]` multiplies `f(t_{i-k})` and `far[k]` multiplies `f(t_{i-k-1})`
/// for the cell at lag `k`. The `1/Γ(β)` factor is *not* included in `scale`.
#[derive(Debug, Clone)]
pub(crate) struct KernelWeights {
    near: Vec<f64>,
    far: Vec<f64>,
    scale: f64,
}

impl KernelWeights {
    /// Weights for the kernel `(t - s)^{beta - 1}`, `beta > 0`.
    pub(crate) fn new(grid: &TimeGrid, beta: f64) -> Self {
        let n = grid.len();
        let mut near = Vec::with_capacity(n - 1);
        let mut far = Vec::with_capacity(n - 1);
        for k in 0..n - 1 {
            let (a, b) = lag_weights(beta - 1.0, k as f64);
            near.push(a);
            far.push(b);
        }
        Self { near, far, scale: libm::pow(grid.step(), beta) }
    }

    /// `∫_0^{t_i} (t_i - s)^{β-1} f̃(s) ds` where `f̃` interpolates `f` linearly.
    #[inline]
    pub(crate) fn apply_at(&self, f: &[f64], i: usize) -> f64 {
        let mut acc = 0.0;
        for j in 1..=i {
            let k = i - j;
            acc += self.near[k] * f[j] + self.far[k] * f[j - 1];
        }
        self.scale * acc
    }

    /// Integral over the cells `[t_{j-1}, t_j]` with `j ≤ upto`, evaluated at `t_i`
    /// (used for partial history integrals).
    #[inline]
    pub(crate) fn cell(&self, f: &[f64], i: usize, j: usize) -> f64 {
        let k = i - j;
        self.scale * (self.near[k] * f[j] + self.far[k] * f[j - 1])
    }

    pub(crate) fn apply(&self, f: &[f64]) -> Vec<f64> {
        (0..f.len()).map(|i| self.apply_at(f, i)).collect()
    }
}

/// L1 weights: `cD^α f(t_i) ≈ c Σ_{k=1..i} b[i-k] (f_k - f_{k-1})`.
#[derive(Debug, Clone)]
pub(crate) struct L1Weights {
    pub(crate) b: Vec<f64>,
    pub(crate) c: f64,
}

impl L1Weights {
    pub(crate) fn new(grid: &TimeGrid, alpha: f64) -> Self {
        let p = 1.0 - alpha;
        let b = (0..grid.len()).map(|j| pow_forward_diff(j as f64, p)).collect();
        let c = libm::pow(grid.step(), -alpha) / gamma(2.0 - alpha);
        Self { b, c }
    }

    /// `Σ_{k=1}^{upto} w_{i,k} d_k` where `d_k = f_k - f_{k-1}` are given.
    #[inline]
    pub(crate) fn history(&self, increments: &[f64], i: usize, upto: usize) -> f64 {
        let acc: f64 = increments[1..=upto].iter().enumerate().map(|(j, d)| self.b[i - 1 - j] * d).sum();
        self.c * acc
    }

    pub(crate) fn apply(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let mut d = alloc::vec![0.0; n];
        for k in 1..n {
            d[k] = f[k] - f[k - 1];
        }
        (0..n).map(|i| self.history(&d, i, i)).collect()
    }
}

/// Riemann-Liouville integral `J^β f` by product-linear quadrature.
///
/// The value at `t_0` is exactly 0.
pub fn rl_integral(f: &ScalarPath, beta: Order) -> Result<ScalarPath> {
    let beta = Order::integral(beta.value())?.value();
    let w = KernelWeights::new(f.grid(), beta);
    let g = 1.0 / gamma(beta);
    let v = w.apply(f.values()).into_iter().map(|x| g * x).collect();
    Ok(ScalarPath::from_raw(*f.grid(), v))
}

/// Riemann-Liouville derivative `D^α f = d/dt J^{1-α} f`, as a backward
/// difference of the discrete integral. The value at `t_0` is copied from
/// `t_1` and the path is flagged as extrapolated at the origin.
pub fn rl_derivative(f: &ScalarPath, alpha: Order) -> Result<ScalarPath> {
    let alpha = Order::derivative(alpha.value())?;
    let j = rl_integral(f, alpha.complement()?)?;
    let h = f.grid().step();
    let jv = j.values();
    let n = jv.len();
    let mut d = alloc::vec![0.0; n];
    for i in 1..n {
        d[i] = (jv[i] - jv[i - 1]) / h;
    }
    d[0] = d[1];
    Ok(ScalarPath::from_raw(*f.grid(), d).with_extrapolated_origin())
}

/// Caputo derivative by the L1 scheme; the value at `t_0` is 0.
pub fn caputo_derivative(f: &ScalarPath, alpha: Order) -> Result<ScalarPath> {
    let alpha = Order::derivative(alpha.value())?.value();
    let w = L1Weights::new(f.grid(), alpha);
    Ok(ScalarPath::from_raw(*f.grid(), w.apply(f.values())))
}

/// Caputo derivative through the Riemann-Liouville route, `D^α (f - f(0))`.
pub fn caputo_vs_rl_shift(f: &ScalarPath, alpha: Order) -> Result<ScalarPath> {
    rl_derivative(&f.shifted_to_zero(), alpha)
}

/// Selects one of the scalar operators for [`modal_map`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FracOp {
    Integral,
    RlDerivative,
    Caputo,
    CaputoViaRl,
}

impl FracOp {
    pub fn apply(self, f: &ScalarPath, order: Order) -> Result<ScalarPath> {
        match self {
            FracOp::Integral => rl_integral(f, order),
            FracOp::RlDerivative => rl_derivative(f, order),
            FracOp::Caputo => caputo_derivative(f, order),
            FracOp::CaputoViaRl => caputo_vs_rl_shift(f, order),
        }
    }
}

/// Apply a scalar operator to every modal column.
pub fn modal_map(op: FracOp, u: &ModalPath, order: Order) -> Result<ModalPath> {
    let cols = u.columns().iter().map(|c| op.apply(c, order)).collect::<Result<Vec<_>>>()?;
    ModalPath::from_columns(&cols)
}
