//! Subcommand bodies. Each returns a [`Status`]; errors map to exit code 1
//! (or 2 for accuracy failures) through [`AppError::exit_code`].

use std::path::{Path, PathBuf};

use fracgalerkin_core::galerkin::{assemble, convergence_study, energy_report_with, ConvergenceCase, ObservedOrder};
use fracgalerkin_core::inequality::{
    caputo_energy_gap, lemma32_residual, product_rule_residual, rl_energy_gap, GapPath,
};
use fracgalerkin_core::mlf::{mittag_leffler, MLParams};
use fracgalerkin_core::norms::{jalpha_bound_report, BoundReport, Regime, REFERENCE_FUNCTIONS};
use fracgalerkin_core::{grid::sample, ModalPath, Order, TimeGrid};
use serde::Serialize;

use crate::config::{
    self, BoundsConfig, CheckConfig, ConvergeConfig, FieldSpec, MlfConfig, ProblemConfig, RegimeName, Suite,
};
use crate::corpus;
use crate::error::{AppError, AppResult};
use crate::io::{csv, ensure_dir, json, modal_csv, write_atomic};
use crate::parallel;

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// A mathematical check did not hold.
    CheckFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::CheckFailed => 2,
        }
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Success
        } else {
            Status::CheckFailed
        }
    }
}

/// Flags shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    /// Relative tolerance of energy verdicts (`solve`), absolute gap
    /// tolerance (`check`) or order floor (`converge`).
    pub tol: Option<f64>,
    pub suite: Option<String>,
    pub levels: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Self { config: None, out: None, seed: config::DEFAULT_SEED, tol: None, suite: None, levels: None }
    }
}

/// Output directory used when `--out` is absent.
pub const DEFAULT_OUT: &str = "fracgalerkin-out";

impl Options {
    fn out_dir(&self) -> AppResult<PathBuf> {
        let dir = self.out.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
        ensure_dir(&dir)?;
        Ok(dir)
    }

    fn tol(&self) -> AppResult<Option<f64>> {
        match self.tol {
            Some(t) if !(t.is_finite() && t >= 0.0) => Err(AppError::usage("--tol must be finite and nonnegative")),
            t => Ok(t),
        }
    }
}

fn write_text(dir: &Path, name: &str, text: &str) -> AppResult<()> {
    write_atomic(&dir.join(name), text.as_bytes())
}

/// Solves the problem in `--config`; writes `solution.csv` and `energy.json`.
pub fn run_solve(opts: &Options) -> AppResult<Status> {
    let path = opts.config.as_deref().ok_or_else(|| AppError::usage("solve needs --config <problem.json>"))?;
    let cfg: ProblemConfig = config::load(Some(path))?;
    let rel_tol = opts.tol()?;
    let problem = cfg.build()?;
    let pool = parallel::pool()?;
    let modes: Vec<usize> = (0..problem.basis().modes()).collect();
    let columns = parallel::map(&pool, &modes, |&k| Ok(problem.solve_mode(k)?))?;
    let solution = assemble(&problem, &columns)?;
    let energy = match rel_tol {
        Some(t) => energy_report_with(&solution, &problem, t)?,
        None => solution.energy.clone(),
    };
    let dir = opts.out_dir()?;
    write_text(&dir, "solution.csv", &modal_csv(&solution.path))?;
    let report = json(&energy)?;
    write_text(&dir, "energy.json", &report)?;
    print!("{report}");
    Ok(Status::from_pass(energy.all_satisfied))
}

/// Verdict of one case of a check suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseSummary {
    pub case: usize,
    pub alpha: f64,
    pub modes: usize,
    pub min_gap: f64,
    pub max_abs_gap: f64,
    pub check_tol: f64,
    pub violations: usize,
    pub first_violation: Option<usize>,
}

impl CaseSummary {
    fn new(case: usize, alpha: f64, modes: usize, gap: &GapPath) -> Self {
        Self {
            case,
            alpha,
            modes,
            min_gap: gap.min_gap,
            max_abs_gap: gap.max_abs_gap,
            check_tol: gap.check_tol,
            violations: gap.violation_nodes.len(),
            first_violation: gap.violation_nodes.first().copied(),
        }
    }
}

/// Contents of `check_<suite>.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckSummary {
    pub suite: Suite,
    pub seed: u64,
    pub n: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub field: FieldSpec,
    pub total_violations: usize,
    pub passed: bool,
    pub cases: Vec<CaseSummary>,
}

/// Runs one suite over a seeded corpus for every configured order.
pub fn check_suite(suite: Suite, cfg: &CheckConfig, seed: u64, tol: Option<f64>) -> AppResult<CheckSummary> {
    let grid = TimeGrid::uniform(cfg.horizon, cfg.n)?;
    let alphas = cfg.alphas.iter().map(|&a| Order::derivative(a)).collect::<Result<Vec<_>, _>>()?;
    if alphas.is_empty() {
        return Err(AppError::usage("check needs at least one order in `alphas`"));
    }
    let inputs: Vec<(ModalPath, Option<ModalPath>)> = match suite {
        Suite::ProductRule => corpus::pair_corpus(seed, &grid, cfg.field, cfg.cases)?
            .into_iter()
            .map(|(a, b)| (a.shifted_to_zero(), Some(b.shifted_to_zero())))
            .collect(),
        Suite::RlEnergy => corpus::modal_corpus(seed, &grid, cfg.field, cfg.cases)?
            .into_iter()
            .map(|p| (p.shifted_to_zero(), None))
            .collect(),
        _ => corpus::modal_corpus(seed, &grid, cfg.field, cfg.cases)?.into_iter().map(|p| (p, None)).collect(),
    };
    let jobs: Vec<(usize, Order)> = alphas.iter().flat_map(|&a| (0..inputs.len()).map(move |c| (c, a))).collect();
    let pool = parallel::pool()?;
    let cases = parallel::map(&pool, &jobs, |&(c, alpha)| {
        let (f, g) = &inputs[c];
        let gap = match suite {
            Suite::CaputoEnergy => caputo_energy_gap(f, alpha)?,
            Suite::RlEnergy => rl_energy_gap(f, alpha)?,
            Suite::Lemma32 => lemma32_residual(f, alpha)?,
            Suite::ProductRule => product_rule_residual(f, g.as_ref().expect("pair corpus"), alpha)?,
        };
        let gap = match tol {
            Some(t) => gap.with_tol(t),
            None => gap,
        };
        Ok(CaseSummary::new(c, alpha.value(), f.modes(), &gap))
    })?;
    let total_violations = cases.iter().map(|c| c.violations).sum();
    Ok(CheckSummary {
        suite,
        seed,
        n: cfg.n,
        horizon: cfg.horizon,
        field: cfg.field,
        total_violations,
        passed: total_violations == 0,
        cases,
    })
}

/// Runs the suite named by `--suite` (or the config); writes `check_<suite>.json`.
pub fn run_check(opts: &Options) -> AppResult<Status> {
    let cfg: CheckConfig = config::load(opts.config.as_deref())?;
    let suite = match (&opts.suite, cfg.suite) {
        (Some(name), _) => Suite::parse(name)?,
        (None, Some(s)) => s,
        (None, None) => return Err(AppError::usage("check needs --suite <name>")),
    };
    let summary = check_suite(suite, &cfg, opts.seed, opts.tol()?)?;
    let dir = opts.out_dir()?;
    write_text(&dir, &format!("check_{}.json", suite.name()), &json(&summary)?)?;
    println!("{}: {} cases, {} violations", suite.name(), summary.cases.len(), summary.total_violations);
    Ok(Status::from_pass(summary.passed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct ConvergeReport {
    case: ConvergenceCase,
    floor: f64,
    min_order: Option<f64>,
    passed: bool,
    rows: Vec<fracgalerkin_core::galerkin::ConvergenceRow>,
}

/// Convergence study on the relaxation problem; writes `convergence.csv` and
/// `convergence.json`. Fails when an observed order is below the floor.
pub fn run_converge(opts: &Options) -> AppResult<Status> {
    let mut cfg: ConvergeConfig = config::load(opts.config.as_deref())?;
    if let Some(l) = opts.levels {
        cfg.levels = l;
    }
    if let Some(t) = opts.tol()? {
        cfg.floor = t;
    }
    if cfg.levels < 2 {
        return Err(AppError::usage("a convergence study needs at least two levels"));
    }
    if cfg.base_nodes < 2 {
        return Err(AppError::usage("base_nodes must be at least 2"));
    }
    let case = ConvergenceCase { alpha: cfg.alpha, lambda: cfg.lambda, g0: cfg.g0, horizon: cfg.horizon };
    let rows = convergence_study(&case, &cfg.node_counts())?;
    let orders: Vec<f64> = rows
        .iter()
        .filter_map(|r| match r.order {
            ObservedOrder::Value(v) => Some(v),
            _ => None,
        })
        .collect();
    let min_order = orders.iter().copied().reduce(f64::min);
    let passed = orders.iter().all(|&o| o >= cfg.floor);
    let table: Vec<[f64; 5]> = rows
        .iter()
        .map(|r| {
            let order = match r.order {
                ObservedOrder::None => f64::NAN,
                ObservedOrder::Exact => f64::INFINITY,
                ObservedOrder::Value(v) => v,
            };
            [r.nodes as f64, r.h, r.error_at_t, r.max_error, order]
        })
        .collect();
    let dir = opts.out_dir()?;
    write_text(
        &dir,
        "convergence.csv",
        &csv(&["nodes", "h", "error_at_t", "max_error", "order"], table.iter().map(|r| &r[..])),
    )?;
    let report = ConvergeReport { case, floor: cfg.floor, min_order, passed, rows };
    let text = json(&report)?;
    write_text(&dir, "convergence.json", &text)?;
    print!("{text}");
    Ok(Status::from_pass(passed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct MlfValue {
    alpha: f64,
    beta: f64,
    z: f64,
    value: f64,
}

/// Evaluates `E_{α,β}` at each requested argument and prints JSON.
pub fn run_mlf(opts: &Options, cfg: &MlfConfig) -> AppResult<Status> {
    let params = MLParams::new(cfg.alpha, cfg.beta)?;
    if cfg.z.is_empty() {
        return Err(AppError::usage("mlf needs at least one argument z"));
    }
    let values = cfg
        .z
        .iter()
        .map(|&z| Ok(MlfValue { alpha: cfg.alpha, beta: cfg.beta, z, value: mittag_leffler(params, z)? }))
        .collect::<AppResult<Vec<_>>>()?;
    let text = json(&values)?;
    if opts.out.is_some() {
        write_text(&opts.out_dir()?, "mlf.json", &text)?;
    }
    print!("{text}");
    Ok(Status::Success)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct BoundsOutput {
    alpha: f64,
    p: f64,
    regime: Regime,
    function: String,
    #[serde(rename = "T")]
    horizon: f64,
    n: usize,
    report: BoundReport,
}

/// Bound report for `J^α` on a reference function; fails when unsatisfied.
pub fn run_bounds(opts: &Options, cfg: &BoundsConfig) -> AppResult<Status> {
    let alpha = Order::derivative(cfg.alpha)?;
    let regime = match cfg.regime {
        RegimeName::PToP => Regime::PToP,
        RegimeName::SupNorm => Regime::SupNorm,
        RegimeName::Lift => Regime::Lift,
        RegimeName::Critical => Regime::Critical { q: cfg.q },
    };
    let (_, f) = REFERENCE_FUNCTIONS.iter().find(|(name, _)| *name == cfg.function).ok_or_else(|| {
        let known: Vec<_> = REFERENCE_FUNCTIONS.iter().map(|(n, _)| format!("`{n}`")).collect();
        AppError::usage(format!("unknown function `{}`; known: {}", cfg.function, known.join(", ")))
    })?;
    let grid = TimeGrid::uniform(cfg.horizon, cfg.n)?;
    let horizon = cfg.horizon;
    let path = sample(|t| f(t / horizon), &grid)?;
    let report = jalpha_bound_report(&path, alpha, cfg.p, regime)?;
    let satisfied = report.satisfied;
    let out =
        BoundsOutput { alpha: cfg.alpha, p: cfg.p, regime, function: cfg.function.clone(), horizon, n: cfg.n, report };
    let text = json(&out)?;
    if opts.out.is_some() {
        write_text(&opts.out_dir()?, "bounds.json", &text)?;
    }
    print!("{text}");
    Ok(Status::from_pass(satisfied))
}
