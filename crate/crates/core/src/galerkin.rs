//! Spectral Faedo-Galerkin solver for `cD^α u - u_xx = f` on `(0, L)` with
//! homogeneous Dirichlet data.
//!
//! In the sine eigenbasis the stiffness matrix is diagonal, so the Galerkin
//! system splits into scalar equations `cD^α g_k + λ_k g_k = F_k`, each solved
//! by implicit L1 stepping.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fracops::{modal_map, FracOp, L1Weights};
use crate::grid::{check_same_shape, ModalPath, Order, ScalarPath, TimeGrid};
use crate::inequality::{caputo_energy_gap, forcing_regularity, rl_energy_gap, GapPath};
use crate::mlf::exact_modal_solution;
use crate::norms::{h10_norm, l2_omega_norm};
use crate::quad::CompositeRule;
use crate::special::gamma;
use crate::sum::CompensatedSum;

/// Sine eigenpairs of `-d²/dx²` on `(0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectralBasis {
    length: f64,
    modes: usize,
}

impl SpectralBasis {
    pub fn new(length: f64, modes: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::arg("domain length must be positive and finite"));
        }
        if modes == 0 {
            return Err(Error::arg("at least one mode is required"));
        }
        Ok(Self { length, modes })
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.length
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.modes
    }

    /// `λ_k = (kπ/L)²` for `k = 1..=m` (one-based).
    #[inline]
    pub fn eigenvalue(&self, k: usize) -> f64 {
        let w = k as f64 * PI / self.length;
        w * w
    }

    pub fn eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        (1..=self.modes).map(move |k| self.eigenvalue(k))
    }

    /// `w_k(x) = √(2/L) sin(kπx/L)`; exactly zero at both ends.
    #[inline]
    pub fn eigenfunction(&self, k: usize, x: f64) -> f64 {
        if x == 0.0 || x == self.length {
            return 0.0;
        }
        libm::sqrt(2.0 / self.length) * libm::sin(k as f64 * PI * x / self.length)
    }

    /// Spatial rule used for projections: `8m + 1` panels of 8-point
    /// Gauss-Legendre.
    pub fn default_rule(&self) -> CompositeRule {
        CompositeRule::new(0.0, self.length, 8 * self.modes + 1, 8)
    }
}

fn project_with(u: impl Fn(f64) -> f64, basis: &SpectralBasis, rule: &CompositeRule) -> Result<Vec<f64>> {
    let samples: Vec<f64> = rule.nodes().iter().map(|&x| u(x)).collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("function has non-finite samples on the domain"));
    }
    Ok((1..=basis.modes())
        .map(|k| {
            rule.nodes()
                .iter()
                .zip(rule.weights())
                .zip(&samples)
                .map(|((&x, &w), &v)| w * v * basis.eigenfunction(k, x))
                .collect::<CompensatedSum>()
                .value()
        })
        .collect())
}

/// Coefficients `(u₀, w_k)` of the orthogonal projection onto the first `m` modes.
pub fn project_initial(u0: impl Fn(f64) -> f64, basis: &SpectralBasis) -> Result<Vec<f64>> {
    project_with(u0, basis, &basis.default_rule())
}

/// As [`project_initial`] with a caller-chosen spatial rule.
pub fn project_initial_with(u0: impl Fn(f64) -> f64, basis: &SpectralBasis, rule: &CompositeRule) -> Result<Vec<f64>> {
    project_with(u0, basis, rule)
}

/// `F[i, k] = (f(·, t_i), w_k)`.
pub fn project_forcing(f: impl Fn(f64, f64) -> f64, basis: &SpectralBasis, grid: &TimeGrid) -> Result<ModalPath> {
    let rule = basis.default_rule();
    let mut values = Vec::with_capacity(grid.len() * basis.modes());
    for t in grid.nodes() {
        values.extend(project_with(|x| f(x, t), basis, &rule)?);
    }
    ModalPath::new(*grid, basis.modes(), values)
}

/// Implicit L1 solution of `cD^α g + λ g = F`, `g(0) = g0`:
/// `c Σ_{k≤i} b_{i-k} (g_k - g_{k-1}) + λ g_i = F_i` for `i ≥ 1`.
pub fn solve_modal(lambda: f64, forcing: &ScalarPath, alpha: Order, g0: f64) -> Result<ScalarPath> {
    let alpha = Order::derivative(alpha.value())?.value();
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::arg("eigenvalue must be nonnegative"));
    }
    if !g0.is_finite() {
        return Err(Error::input("initial value must be finite"));
    }
    let grid = *forcing.grid();
    let n = grid.len();
    let w = L1Weights::new(&grid, alpha);
    let f = forcing.values();
    let diag = w.c * w.b[0];
    let mut g = alloc::vec![0.0; n];
    let mut d = alloc::vec![0.0; n];
    g[0] = g0;
    for i in 1..n {
        let hist = w.history(&d, i, i - 1);
        g[i] = (f[i] + diag * g[i - 1] - hist) / (diag + lambda);
        d[i] = g[i] - g[i - 1];
    }
    Ok(ScalarPath::from_raw(grid, g))
}

/// Problem data after projection onto the basis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HeatProblem {
    basis: SpectralBasis,
    grid: TimeGrid,
    alpha: Order,
    u0: Vec<f64>,
    forcing: ModalPath,
}

impl HeatProblem {
    /// `α` must lie in `(1/2, 1)`.
    pub fn new(basis: SpectralBasis, grid: TimeGrid, alpha: Order, u0: Vec<f64>, forcing: ModalPath) -> Result<Self> {
        let alpha = Order::solver(alpha.value())?;
        if u0.len() != basis.modes() {
            return Err(Error::arg("initial coefficients do not match the mode count"));
        }
        if u0.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("initial coefficients must be finite"));
        }
        if *forcing.grid() != grid || forcing.modes() != basis.modes() {
            return Err(Error::arg("forcing does not match the grid or mode count"));
        }
        Ok(Self { basis, grid, alpha, u0, forcing })
    }

    /// Unforced problem.
    pub fn unforced(basis: SpectralBasis, grid: TimeGrid, alpha: Order, u0: Vec<f64>) -> Result<Self> {
        let forcing = ModalPath::zeros(grid, basis.modes())?;
        Self::new(basis, grid, alpha, u0, forcing)
    }

    pub fn basis(&self) -> &SpectralBasis {
        &self.basis
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn alpha(&self) -> Order {
        self.alpha
    }

    pub fn u0(&self) -> &[f64] {
        &self.u0
    }

    pub fn forcing(&self) -> &ModalPath {
        &self.forcing
    }

    /// Scalar problem of mode `k` (zero-based).
    pub fn solve_mode(&self, k: usize) -> Result<ScalarPath> {
        solve_modal(self.basis.eigenvalue(k + 1), &self.forcing.column(k), self.alpha, self.u0[k])
    }
}

/// Discrete counterparts of the a priori estimates.
///
/// With the Poincaré split `2(f, u) ≤ ‖f‖²/λ₁ + ‖∇u‖²` (so `c₁ = 1`,
/// `c₂ = 1/λ₁`):
///
/// * `‖u‖²_{L²H¹₀} ≤ C₁ (‖u₀‖² + ‖f‖²_{L²L²})`, `C₁ = max(c₂, T^{1-α}/Γ(2-α))`;
/// * `‖u‖²_{L^∞L²} ≤ C₃ (‖u₀‖² + sup_t ∫(t-s)^{α-1}‖f‖²)`, `C₃ = max(1, c₂/Γ(α))`;
/// * `‖cD^α u‖²_{L²L²} ≤ ‖f‖²_{L²L²} + T^{1-α}/Γ(2-α) ‖u₀‖²_{H¹₀}`.
///
/// The last term of the third line is absent from the constant-free form;
/// it is zero for `u₀ = 0` and reported separately.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[allow(non_snake_case)]
pub struct EnergyReport {
    pub l2H1_sq: f64,
    pub linfL2_sq: f64,
    pub caputo_l2_sq: f64,
    pub rhs_4159: f64,
    pub rhs_271006: f64,
    pub rhs_271027: f64,
    /// Initial-data term added to `rhs_271027` when judging the third estimate.
    pub rhs_271027_initial: f64,
    pub c1_const: f64,
    pub c3_const: f64,
    pub gap_min: f64,
    pub gap_tol: f64,
    pub rel_tol: f64,
    pub all_satisfied: bool,
}

/// Default relative tolerance of [`EnergyReport`] verdicts.
pub const ENERGY_REL_TOL: f64 = 0.05;

impl EnergyReport {
    /// Each estimate, as `(lhs, rhs)`.
    pub fn estimates(&self) -> [(f64, f64); 3] {
        [
            (self.l2H1_sq, self.rhs_4159),
            (self.linfL2_sq, self.rhs_271006),
            (self.caputo_l2_sq, self.rhs_271027 + self.rhs_271027_initial),
        ]
    }

    fn judge(&mut self) {
        let rel = self.rel_tol;
        let ok = |(l, r): (f64, f64)| l <= r * (1.0 + rel) + 1e-14;
        self.all_satisfied = self.estimates().into_iter().all(ok) && self.gap_min >= -self.gap_tol;
    }
}

/// Galerkin solution: modal coefficients at every node.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Solution {
    pub path: ModalPath,
    pub energy: EnergyReport,
    forcing: ModalPath,
}

/// Solves every mode in turn.
pub fn solve(problem: &HeatProblem) -> Result<Solution> {
    let cols = (0..problem.basis.modes()).map(|k| problem.solve_mode(k)).collect::<Result<Vec<_>>>()?;
    assemble(problem, &cols)
}

/// Builds a [`Solution`] from per-mode paths, e.g. solved concurrently with
/// [`HeatProblem::solve_mode`].
pub fn assemble(problem: &HeatProblem, columns: &[ScalarPath]) -> Result<Solution> {
    if columns.len() != problem.basis.modes() {
        return Err(Error::arg("one column per mode is required"));
    }
    let path = ModalPath::from_columns(columns)?;
    if *path.grid() != problem.grid || path.row(0) != problem.u0.as_slice() {
        return Err(Error::arg("columns do not belong to this problem"));
    }
    let energy = energy_report_for(&path, problem, ENERGY_REL_TOL)?;
    Ok(Solution { path, energy, forcing: problem.forcing.clone() })
}

/// `u_m(x, t_i) = Σ_k g_k(t_i) w_k(x)`.
pub fn evaluate_field(sol: &Solution, basis: &SpectralBasis, x: f64, i: usize) -> Result<f64> {
    if !(x >= 0.0 && x <= basis.length()) {
        return Err(Error::arg("x lies outside the domain"));
    }
    if i >= sol.path.grid().len() {
        return Err(Error::arg("node index out of range"));
    }
    if sol.path.modes() != basis.modes() {
        return Err(Error::arg("basis and solution differ in mode count"));
    }
    Ok(sol
        .path
        .row(i)
        .iter()
        .enumerate()
        .map(|(k, g)| g * basis.eigenfunction(k + 1, x))
        .collect::<CompensatedSum>()
        .value())
}

fn trapezoid(values: impl ExactSizeIterator<Item = f64>, h: f64) -> f64 {
    let n = values.len();
    let mut acc = CompensatedSum::new();
    for (i, v) in values.enumerate() {
        acc.add(if i == 0 || i + 1 == n { 0.5 * v } else { v });
    }
    h * acc.value()
}

/// Energy report of `sol` with the default relative tolerance.
pub fn energy_report(sol: &Solution, problem: &HeatProblem) -> Result<EnergyReport> {
    energy_report_for(&sol.path, problem, ENERGY_REL_TOL)
}

/// Energy report with an explicit relative tolerance.
pub fn energy_report_with(sol: &Solution, problem: &HeatProblem, rel_tol: f64) -> Result<EnergyReport> {
    energy_report_for(&sol.path, problem, rel_tol)
}

fn energy_report_for(path: &ModalPath, problem: &HeatProblem, rel_tol: f64) -> Result<EnergyReport> {
    check_same_shape(path, &problem.forcing)?;
    let basis = &problem.basis;
    let grid = problem.grid;
    let alpha = problem.alpha.value();
    let h = grid.step();
    let n = grid.len();
    let horizon = grid.horizon();

    let l2h1 = trapezoid((0..n).map(|i| h10_norm(path.row(i), basis).map(|v| v * v).unwrap_or(0.0)), h);
    let sq = |x: f64| x * x;
    let linf = (0..n).map(|i| sq(l2_omega_norm(path.row(i)))).fold(0.0, f64::max);
    let du = modal_map(FracOp::Caputo, path, problem.alpha)?;
    let cd = trapezoid((0..n).map(|i| sq(l2_omega_norm(du.row(i)))), h);
    let f_sq = trapezoid((0..n).map(|i| sq(l2_omega_norm(problem.forcing.row(i)))), h);
    let u0_sq = sq(l2_omega_norm(&problem.u0));
    let u0_h1_sq = sq(h10_norm(&problem.u0, basis)?);
    let fr = forcing_regularity(&problem.forcing, problem.alpha)?;

    let c2 = 1.0 / basis.eigenvalue(1);
    let memory = libm::pow(horizon, 1.0 - alpha) / gamma(2.0 - alpha);
    let c1_const = c2.max(memory);
    let c3_const = 1.0f64.max(c2 / gamma(alpha));
    let gap = caputo_energy_gap(path, problem.alpha)?;

    let mut r = EnergyReport {
        l2H1_sq: l2h1,
        linfL2_sq: linf,
        caputo_l2_sq: cd,
        rhs_4159: c1_const * (u0_sq + f_sq),
        rhs_271006: c3_const * (u0_sq + fr),
        rhs_271027: f_sq,
        rhs_271027_initial: memory * u0_h1_sq,
        c1_const,
        c3_const,
        gap_min: gap.min_gap,
        gap_tol: gap.check_tol,
        rel_tol,
        all_satisfied: false,
    };
    r.judge();
    Ok(r)
}

/// Unforced single-mode problem with a Mittag-Leffler solution.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceCase {
    pub alpha: f64,
    pub lambda: f64,
    pub g0: f64,
    pub horizon: f64,
}

/// Observed order between two consecutive levels.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case", tag = "kind", content = "value"))]
pub enum ObservedOrder {
    /// First level, nothing to compare against.
    None,
    /// Both errors are exactly zero.
    Exact,
    Value(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvergenceRow {
    pub nodes: usize,
    pub h: f64,
    /// `|g(T) - g_exact(T)|`; the order is measured on this column.
    pub error_at_t: f64,
    /// `max_i |g(t_i) - g_exact(t_i)|`.
    pub max_error: f64,
    pub order: ObservedOrder,
}

/// Solves `case` on each node count in `levels` (in order) and measures the
/// error against the Mittag-Leffler solution.
pub fn convergence_study(case: &ConvergenceCase, levels: &[usize]) -> Result<Vec<ConvergenceRow>> {
    if levels.len() < 2 {
        return Err(Error::arg("a convergence study needs at least two levels"));
    }
    let alpha = Order::derivative(case.alpha)?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels.len());
    for &n in levels {
        let grid = TimeGrid::uniform(case.horizon, n)?;
        let g = solve_modal(case.lambda, &ScalarPath::zeros(grid), alpha, case.g0)?;
        let mut max_error = 0.0f64;
        for (i, t) in grid.nodes().enumerate() {
            let exact = exact_modal_solution(case.alpha, case.lambda, case.g0, 0.0, t)?;
            max_error = max_error.max(libm::fabs(g.values()[i] - exact));
        }
        let exact_t = exact_modal_solution(case.alpha, case.lambda, case.g0, 0.0, case.horizon)?;
        let error_at_t = libm::fabs(g.values()[n - 1] - exact_t);
        let order = match rows.last() {
            None => ObservedOrder::None,
            Some(prev) if prev.error_at_t == 0.0 && error_at_t == 0.0 => ObservedOrder::Exact,
            Some(prev) => {
                ObservedOrder::Value(libm::log(prev.error_at_t / error_at_t) / libm::log(prev.h / grid.step()))
            }
        };
        rows.push(ConvergenceRow { nodes: n, h: grid.step(), error_at_t, max_error, order });
    }
    Ok(rows)
}

/// Result of comparing two solutions of the same forced problem.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UniquenessReport {
    /// Riemann-Liouville energy gap of `σ = a - b`.
    pub gap: GapPath,
    /// `sup_t ‖σ(t)‖² / ‖σ(0)‖²`; `None` when `σ(0) = 0`.
    pub sup_ratio_sq: Option<f64>,
    pub sup_norm: f64,
    /// `σ(0) = 0` but `σ` does not vanish.
    pub anomaly: bool,
}

impl UniquenessReport {
    pub fn sup_ratio(&self) -> Option<f64> {
        self.sup_ratio_sq.map(libm::sqrt)
    }
}

/// Compares two solutions that share forcing, grid and basis size.
pub fn uniqueness_gap(a: &Solution, b: &Solution, alpha: Order) -> Result<UniquenessReport> {
    check_same_shape(&a.path, &b.path)?;
    if a.forcing != b.forcing {
        return Err(Error::arg("solutions were computed with different forcing"));
    }
    let sigma = a.path.difference(&b.path)?;
    let gap = rl_energy_gap(&sigma, alpha)?;
    let norms = sigma.squared_norms();
    let s0 = norms.values()[0];
    let sup = norms.values().iter().copied().fold(0.0, f64::max);
    let (sup_ratio_sq, anomaly) = if s0 > 0.0 { (Some(sup / s0), false) } else { (None, sup > 0.0) };
    Ok(UniquenessReport { gap, sup_ratio_sq, sup_norm: libm::sqrt(sup), anomaly })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::sample;
    use crate::mlf::{mittag_leffler, MLParams};
    use proptest::prelude::*;

    fn pi_basis(m: usize) -> SpectralBasis {
        SpectralBasis::new(PI, m).unwrap()
    }

    #[test]
    fn basis_properties() {
        let b = SpectralBasis::new(2.0, 6).unwrap();
        let l: Vec<f64> = b.eigenvalues().collect();
        assert!(l.windows(2).all(|w| w[0] < w[1] && w[0] > 0.0));
        let rule = CompositeRule::new(0.0, 2.0, 64, 8);
        for j in 1..=6 {
            for k in 1..=6 {
                let ip = rule.integrate(|x| b.eigenfunction(j, x) * b.eigenfunction(k, x));
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((ip - want).abs() < 1e-13);
            }
        }
        assert!(SpectralBasis::new(0.0, 1).is_err());
        assert!(SpectralBasis::new(1.0, 0).is_err());
    }

    #[test]
    fn projection_examples() {
        let b = pi_basis(6);
        let c = project_initial(|x| b.eigenfunction(1, x), &b).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-8 && c[1..].iter().all(|v| v.abs() < 1e-8));
        assert!(project_initial(|_| 0.0, &b).unwrap().iter().all(|&v| v == 0.0));
        let c = project_initial(|x| x * (PI - x), &b).unwrap();
        for (k, v) in c.iter().enumerate() {
            let k = (k + 1) as f64;
            // ∫ x(π-x) √(2/π) sin(kx) dx = √(2/π) · 2(1-(-1)^k)/k³
            let exact = libm::sqrt(2.0 / PI) * 2.0 * (1.0 - libm::pow(-1.0, k)) / (k * k * k);
            assert!((v - exact).abs() < 1e-8, "k={k}");
        }
        assert!(matches!(project_initial(|_| f64::NAN, &b), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn forcing_projection_examples() {
        let b = pi_basis(4);
        let g = TimeGrid::uniform(1.0, 11).unwrap();
        let z = project_forcing(|_, _| 0.0, &b, &g).unwrap();
        assert!(z.values().iter().all(|&v| v == 0.0));
        let f = project_forcing(|x, t| b.eigenfunction(2, x) * t, &b, &g).unwrap();
        for (i, t) in g.nodes().enumerate() {
            for k in 0..4 {
                let want = if k == 1 { t } else { 0.0 };
                assert!((f.get(i, k) - want).abs() < 1e-8);
            }
        }
        let f = project_forcing(|x, t| libm::sin(x) * libm::exp(-t), &b, &g).unwrap();
        for (i, t) in g.nodes().enumerate() {
            assert!((f.get(i, 0) - libm::sqrt(PI / 2.0) * libm::exp(-t)).abs() < 1e-8);
        }
    }

    fn ord(a: f64) -> Order {
        Order::derivative(a).unwrap()
    }

    #[test]
    fn modal_examples() {
        let g = TimeGrid::uniform(1.0, 2049).unwrap();
        let flat = solve_modal(0.0, &ScalarPath::zeros(g), ord(0.5), 0.7).unwrap();
        assert!(flat.values().iter().all(|&v| v == 0.7));
        let relax = solve_modal(1.0, &ScalarPath::zeros(g), ord(0.5), 1.0).unwrap();
        assert!((relax.values()[2048] - 0.427_584).abs() < 1e-3);
        let one = sample(|_| 1.0, &g).unwrap();
        let forced = solve_modal(1.0, &one, ord(0.5), 0.0).unwrap();
        let p = MLParams::new(0.5, 1.5).unwrap();
        for i in [256usize, 1024, 2048] {
            let t = g.node(i);
            let exact = libm::sqrt(t) * mittag_leffler(p, -libm::sqrt(t)).unwrap();
            assert!((forced.values()[i] - exact).abs() < 1e-3, "t={t}");
        }
        assert!(solve_modal(-1.0, &one, ord(0.5), 0.0).is_err());
    }

    /// The L1 scheme is exact for `g` linear in time: the residual of the
    /// discrete equation reproduces the forcing built from the closed form.
    #[test]
    fn modal_solver_defect() {
        let g = TimeGrid::uniform(2.0, 300).unwrap();
        let a = 0.7;
        let lam = 3.0;
        let f = sample(|t| libm::pow(t, 1.0 - a) / gamma(2.0 - a) + lam * (1.0 + t), &g).unwrap();
        let sol = solve_modal(lam, &f, ord(a), 1.0).unwrap();
        for (i, t) in g.nodes().enumerate() {
            assert!((sol.values()[i] - (1.0 + t)).abs() < 1e-12, "t={t}");
        }
    }

    fn problem(u0: Vec<f64>, f: Option<ModalPath>, a: f64, n: usize) -> HeatProblem {
        let b = pi_basis(u0.len());
        let g = TimeGrid::uniform(1.0, n).unwrap();
        let f = f.unwrap_or_else(|| ModalPath::zeros(g, b.modes()).unwrap());
        HeatProblem::new(b, g, Order::solver(a).unwrap(), u0, f).unwrap()
    }

    #[test]
    fn solve_examples() {
        let p = problem(alloc::vec![1.0, 0.0, 0.0], None, 0.5, 2049);
        let s = solve(&p).unwrap();
        assert_eq!(s.path.row(0), p.u0());
        let e = MLParams::new(0.5, 1.0).unwrap();
        for i in [512usize, 1024, 2048] {
            let t = p.grid().node(i);
            let exact = mittag_leffler(e, -libm::sqrt(t)).unwrap();
            assert!((s.path.get(i, 0) - exact).abs() < 1e-3);
            assert_eq!((s.path.get(i, 1), s.path.get(i, 2)), (0.0, 0.0));
        }
        let z = solve(&problem(alloc::vec![0.0; 3], None, 0.7, 100)).unwrap();
        assert!(z.path.values().iter().all(|&v| v == 0.0));
        assert!(z.energy.all_satisfied);
        assert_eq!(z.energy.caputo_l2_sq, 0.0);
    }

    #[test]
    fn problem_validation() {
        let b = pi_basis(2);
        let g = TimeGrid::uniform(1.0, 10).unwrap();
        assert!(HeatProblem::unforced(b, g, Order::integral(0.4).unwrap(), alloc::vec![1.0, 0.0]).is_err());
        assert!(HeatProblem::unforced(b, g, Order::solver(0.6).unwrap(), alloc::vec![1.0]).is_err());
        let other = TimeGrid::uniform(2.0, 10).unwrap();
        let f = ModalPath::zeros(other, 2).unwrap();
        assert!(HeatProblem::new(b, g, Order::solver(0.6).unwrap(), alloc::vec![1.0, 0.0], f).is_err());
    }

    #[test]
    fn field_evaluation() {
        let p = problem(alloc::vec![0.3, -0.2, 0.9, 0.1], None, 0.75, 33);
        let s = solve(&p).unwrap();
        let b = p.basis();
        for i in 0..33 {
            assert_eq!(evaluate_field(&s, b, 0.0, i).unwrap(), 0.0);
            assert_eq!(evaluate_field(&s, b, PI, i).unwrap(), 0.0);
        }
        let single = solve(&problem(alloc::vec![2.0], None, 0.75, 9)).unwrap();
        let v = evaluate_field(&single, &pi_basis(1), PI / 2.0, 4).unwrap();
        assert!((v - single.path.get(4, 0) * libm::sqrt(2.0 / PI)).abs() < 1e-15);
        assert!(evaluate_field(&s, b, -0.1, 0).is_err());
        assert!(evaluate_field(&s, b, 1.0, 33).is_err());
    }

    proptest! {
        #[test]
        fn field_matches_direct_sum(c in prop::collection::vec(-3.0f64..3.0, 5), x in 0.0f64..PI) {
            let p = problem(c.clone(), None, 0.6, 5);
            let s = solve(&p).unwrap();
            let direct: f64 = c.iter().enumerate().map(|(k, g)| g * libm::sqrt(2.0 / PI) * libm::sin((k + 1) as f64 * x)).sum();
            prop_assert!((evaluate_field(&s, p.basis(), x, 0).unwrap() - direct).abs() < 1e-13);
        }

        #[test]
        fn unforced_decay_is_monotone(c in prop::collection::vec(0.0f64..2.0, 4), a in 0.55f64..0.95) {
            let s = solve(&problem(c, None, a, 300)).unwrap();
            for i in 1..300 {
                for k in 0..4 {
                    prop_assert!(s.path.get(i, k).abs() <= s.path.get(i - 1, k).abs() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn modes_are_decoupled() {
        let g = TimeGrid::uniform(1.0, 50).unwrap();
        let f = project_forcing(|x, t| libm::sin(x) * t + libm::sin(3.0 * x), &pi_basis(3), &g).unwrap();
        let base = solve(&problem(alloc::vec![0.1, 0.2, 0.3], Some(f.clone()), 0.8, 50)).unwrap();
        let mut v = f.values().to_vec();
        for i in 0..50 {
            v[i * 3 + 1] += 1.0;
        }
        let bumped = ModalPath::new(g, 3, v).unwrap();
        let other = solve(&problem(alloc::vec![0.1, 0.2, 0.3], Some(bumped), 0.8, 50)).unwrap();
        for i in 0..50 {
            assert_eq!(base.path.get(i, 0), other.path.get(i, 0));
            assert_eq!(base.path.get(i, 2), other.path.get(i, 2));
        }
        assert_ne!(base.path.get(49, 1), other.path.get(49, 1));
    }

    #[test]
    fn energy_report_examples() {
        // u₀ = w₁, f = 0: ‖cD u‖² is positive, so only the initial-data term
        // keeps the third estimate true
        let s = solve(&problem(alloc::vec![1.0, 0.0], None, 0.6, 1025)).unwrap();
        let e = &s.energy;
        assert!(e.caputo_l2_sq > 0.0 && e.rhs_271027 == 0.0);
        assert!(e.caputo_l2_sq <= e.rhs_271027_initial);
        assert!(e.all_satisfied, "{e:?}");

        let n = 4097;
        let g = TimeGrid::uniform(1.0, n).unwrap();
        let b = pi_basis(1);
        let f = project_forcing(|x, _| b.eigenfunction(1, x), &b, &g).unwrap();
        let p = problem(alloc::vec![0.0], Some(f), 0.6, n);
        let e = solve(&p).unwrap().energy;
        assert!(e.caputo_l2_sq / e.rhs_271027 <= 1.0 + 0.05, "{e:?}");
        assert!(e.all_satisfied);
    }

    #[test]
    fn solve_is_deterministic() {
        let g = TimeGrid::uniform(1.0, 200).unwrap();
        let f = project_forcing(|x, t| libm::cos(x * t), &pi_basis(3), &g).unwrap();
        let p = problem(alloc::vec![0.5, -0.1, 0.2], Some(f), 0.7, 200);
        assert_eq!(solve(&p).unwrap(), solve(&p).unwrap());
    }

    #[test]
    fn convergence_tables() {
        let zero = ConvergenceCase { alpha: 0.5, lambda: 1.0, g0: 0.0, horizon: 1.0 };
        let rows = convergence_study(&zero, &[33, 65, 129]).unwrap();
        assert!(rows.iter().all(|r| r.error_at_t == 0.0 && r.max_error == 0.0));
        assert_eq!(rows[0].order, ObservedOrder::None);
        assert_eq!(rows[2].order, ObservedOrder::Exact);
        let case = ConvergenceCase { alpha: 0.5, lambda: 1.0, g0: 1.0, horizon: 1.0 };
        let rows = convergence_study(&case, &[129, 257, 513]).unwrap();
        assert!(rows.windows(2).all(|w| w[1].error_at_t < w[0].error_at_t));
        assert!(convergence_study(&case, &[129]).is_err());
    }

    #[test]
    fn uniqueness_examples() {
        let g = TimeGrid::uniform(1.0, 257).unwrap();
        let b = pi_basis(2);
        let f = project_forcing(|x, t| libm::sin(2.0 * x) * (1.0 + t), &b, &g).unwrap();
        let pa = problem(alloc::vec![1.0, 0.5], Some(f.clone()), 0.7, 257);
        let pb = problem(alloc::vec![1.0 + 1e-3, 0.5], Some(f.clone()), 0.7, 257);
        let (sa, sb) = (solve(&pa).unwrap(), solve(&pb).unwrap());
        let same = uniqueness_gap(&sa, &solve(&pa).unwrap(), pa.alpha()).unwrap();
        assert!(same.gap.gap.iter().all(|&x| x == 0.0));
        assert!(!same.anomaly && same.sup_ratio_sq.is_none());
        let r = uniqueness_gap(&sa, &sb, pa.alpha()).unwrap();
        assert!(r.sup_ratio().unwrap() <= 1.0 + 1e-6);
        let f2 = project_forcing(|x, _| libm::sin(x), &b, &g).unwrap();
        let pc = problem(alloc::vec![1.0, 0.5], Some(f2), 0.7, 257);
        assert!(matches!(uniqueness_gap(&sa, &solve(&pc).unwrap(), pa.alpha()), Err(Error::InvalidArgument(_))));
    }
}
