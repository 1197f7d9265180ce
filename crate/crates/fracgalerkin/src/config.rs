//! JSON configuration documents for every subcommand.
//!
//! A problem document looks like
//!
//! ```json
//! { "L": 3.141592653589793, "m": 4, "alpha": 0.75, "T": 1.0, "n": 1025,
//!   "u0": { "kind": "sine_mode", "k": 1 },
//!   "forcing": { "kind": "sine_mode_decay", "k": 2, "rate": 1.5 } }
//! ```
//!
//! Initial data and forcing are named presets plus parameters.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use fracgalerkin_core::galerkin::{project_forcing, project_initial, HeatProblem, SpectralBasis};
use fracgalerkin_core::{ModalPath, Order, TimeGrid};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{AppError, AppResult};

/// Default seed of every randomized corpus.
pub const DEFAULT_SEED: u64 = 20250527;

fn pi() -> f64 {
    PI
}

fn one() -> f64 {
    1.0
}

/// Reads and parses `path`, or returns `T::default()` when no path is given.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> AppResult<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path).map_err(|e| AppError::Config { path: path.into(), msg: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| AppError::Config { path: path.into(), msg: e.to_string() })
}

/// Initial condition `u₀(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialSpec {
    #[default]
    Zero,
    /// `amplitude · w_k`.
    SineMode {
        k: usize,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `amplitude · x (L - x)`.
    Parabola {
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `value` on the whole domain (projected; it does not vanish at the ends).
    Constant { value: f64 },
}

impl InitialSpec {
    /// Coefficients `(u₀, w_k)`, `k = 1..=m`.
    pub fn coefficients(&self, basis: &SpectralBasis) -> AppResult<Vec<f64>> {
        let m = basis.modes();
        let l = basis.length();
        Ok(match *self {
            InitialSpec::Zero => vec![0.0; m],
            InitialSpec::SineMode { k, amplitude } => {
                check_mode(k)?;
                let mut c = vec![0.0; m];
                if k <= m {
                    c[k - 1] = amplitude;
                }
                c
            }
            InitialSpec::Parabola { amplitude } => project_initial(|x| amplitude * x * (l - x), basis)?,
            InitialSpec::Constant { value } => project_initial(|_| value, basis)?,
        })
    }
}

/// Forcing `f(x, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ForcingSpec {
    #[default]
    Zero,
    /// `amplitude · w_k(x)`.
    SineMode {
        k: usize,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `amplitude · e^{-rate t} w_k(x)`.
    SineModeDecay {
        k: usize,
        rate: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    /// `value` everywhere.
    Constant { value: f64 },
}

impl ForcingSpec {
    /// Modal forcing `F[i, k] = (f(·, t_i), w_k)`.
    pub fn project(&self, basis: &SpectralBasis, grid: &TimeGrid) -> AppResult<ModalPath> {
        let m = basis.modes();
        let single = |k: usize, amp: &dyn Fn(f64) -> f64| -> AppResult<ModalPath> {
            check_mode(k)?;
            let mut values = vec![0.0; grid.len() * m];
            if k <= m {
                for (i, t) in grid.nodes().enumerate() {
                    values[i * m + k - 1] = amp(t);
                }
            }
            Ok(ModalPath::new(*grid, m, values)?)
        };
        match *self {
            ForcingSpec::Zero => Ok(ModalPath::zeros(*grid, m)?),
            ForcingSpec::SineMode { k, amplitude } => single(k, &|_| amplitude),
            ForcingSpec::SineModeDecay { k, rate, amplitude } => single(k, &|t| amplitude * (-rate * t).exp()),
            ForcingSpec::Constant { value } => Ok(project_forcing(|_, _| value, basis, grid)?),
        }
    }
}

fn check_mode(k: usize) -> AppResult<()> {
    if k == 0 {
        return Err(AppError::usage("mode numbers start at 1"));
    }
    Ok(())
}

/// Problem document of `solve`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    #[serde(rename = "L", default = "pi")]
    pub length: f64,
    pub m: usize,
    pub alpha: f64,
    #[serde(rename = "T", default = "one")]
    pub horizon: f64,
    pub n: usize,
    #[serde(default)]
    pub u0: InitialSpec,
    #[serde(default)]
    pub forcing: ForcingSpec,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            length: PI,
            m: 1,
            alpha: 0.75,
            horizon: 1.0,
            n: 1025,
            u0: InitialSpec::SineMode { k: 1, amplitude: 1.0 },
            forcing: ForcingSpec::Zero,
        }
    }
}

impl ProblemConfig {
    pub fn build(&self) -> AppResult<HeatProblem> {
        let basis = SpectralBasis::new(self.length, self.m)?;
        let grid = TimeGrid::uniform(self.horizon, self.n)?;
        let alpha = Order::solver(self.alpha)?;
        let u0 = self.u0.coefficients(&basis)?;
        let forcing = self.forcing.project(&basis, &grid)?;
        Ok(HeatProblem::new(basis, grid, alpha, u0, forcing)?)
    }
}

/// Inequality suites run by `check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    CaputoEnergy,
    RlEnergy,
    Lemma32,
    ProductRule,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::CaputoEnergy, Suite::RlEnergy, Suite::Lemma32, Suite::ProductRule];

    pub fn name(self) -> &'static str {
        match self {
            Suite::CaputoEnergy => "caputo_energy",
            Suite::RlEnergy => "rl_energy",
            Suite::Lemma32 => "lemma32",
            Suite::ProductRule => "product_rule",
        }
    }

    pub fn parse(name: &str) -> AppResult<Self> {
        Suite::ALL.into_iter().find(|s| s.name() == name).ok_or_else(|| {
            let known: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
            AppError::usage(format!("unknown suite `{name}` (expected one of {})", known.join(", ")))
        })
    }
}

/// Shape of the sampled inputs of a check run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FieldSpec {
    /// Seeded trigonometric polynomials, see [`crate::corpus`].
    Trig {
        #[serde(default = "default_max_modes")]
        max_modes: usize,
        #[serde(default = "default_max_degree")]
        max_degree: usize,
    },
    /// Each mode constant in time, with seeded values.
    Constant {
        #[serde(default = "default_max_modes")]
        max_modes: usize,
    },
}

fn default_max_modes() -> usize {
    4
}

fn default_max_degree() -> usize {
    5
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Trig { max_modes: default_max_modes(), max_degree: default_max_degree() }
    }
}

/// Configuration of `check`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub suite: Option<Suite>,
    pub alphas: Vec<f64>,
    pub n: usize,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub cases: usize,
    pub field: FieldSpec,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            suite: None,
            alphas: vec![0.3, 0.5, 0.7],
            n: 2049,
            horizon: 1.0,
            cases: 100,
            field: FieldSpec::default(),
        }
    }
}

/// Configuration of `converge`: the relaxation problem `cD^α g + λ g = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergeConfig {
    pub alpha: f64,
    pub lambda: f64,
    pub g0: f64,
    #[serde(rename = "T")]
    pub horizon: f64,
    /// Node count of the coarsest level; each further level doubles the step count.
    pub base_nodes: usize,
    pub levels: usize,
    /// Smallest acceptable observed order.
    pub floor: f64,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        Self { alpha: 0.5, lambda: 1.0, g0: 1.0, horizon: 1.0, base_nodes: 257, levels: 4, floor: 0.9 }
    }
}

impl ConvergeConfig {
    pub fn node_counts(&self) -> Vec<usize> {
        let mut n = self.base_nodes;
        (0..self.levels)
            .map(|_| {
                let cur = n;
                n = 2 * n - 1;
                cur
            })
            .collect()
    }
}

/// Configuration of `mlf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlfConfig {
    pub alpha: f64,
    pub beta: f64,
    pub z: Vec<f64>,
}

impl Default for MlfConfig {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 1.0, z: vec![1.0] }
    }
}

/// Regime names accepted by `bounds`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeName {
    PToP,
    SupNorm,
    Lift,
    Critical,
}

/// Configuration of `bounds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    pub alpha: f64,
    pub p: f64,
    /// Target exponent of the critical regime.
    pub q: f64,
    pub regime: RegimeName,
    /// Name from the reference corpus, e.g. `"sin(pi t)"`.
    pub function: String,
    #[serde(rename = "T")]
    pub horizon: f64,
    pub n: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            p: 2.0,
            q: 2.0,
            regime: RegimeName::PToP,
            function: "sin(pi t)".into(),
            horizon: 1.0,
            n: 4097,
        }
    }
}
