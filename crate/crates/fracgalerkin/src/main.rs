use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracgalerkin::commands::{run_bounds, run_check, run_converge, run_mlf, run_solve};
use fracgalerkin::config::{self, BoundsConfig, MlfConfig, RegimeName, DEFAULT_SEED};
use fracgalerkin::{AppError, AppResult, Options, Status};

/// Fractional calculus checks and a spectral Galerkin solver for the
/// time-fractional heat equation.
///
/// Exit codes: 0 success, 1 usage or configuration error, 2 a mathematical
/// check failed.
#[derive(Parser, Debug)]
#[command(name = "fracgalerkin", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON configuration document.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed of the randomized corpora.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// solve: relative tolerance of the energy verdicts; check: absolute gap
    /// tolerance; converge: smallest acceptable order.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Check suite: caputo_energy, rl_energy, lemma32 or product_rule.
    #[arg(long, global = true)]
    suite: Option<String>,
    /// Number of refinement levels for converge.
    #[arg(long, global = true)]
    levels: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the problem in --config and write solution.csv and energy.json.
    Solve,
    /// Run an inequality suite over a seeded corpus.
    Check,
    /// Measure the convergence order on the relaxation problem.
    Converge,
    /// Evaluate the Mittag-Leffler function.
    Mlf(MlfArgs),
    /// Report a fractional-integral bound on a reference function.
    Bounds(BoundsArgs),
}

#[derive(Args, Debug)]
struct MlfArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Arguments; repeat or separate with commas.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    z: Vec<f64>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_parser = parse_regime)]
    regime: Option<RegimeName>,
    /// Reference function name, e.g. "sin(pi t)".
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    n: Option<usize>,
}

fn parse_regime(s: &str) -> Result<RegimeName, String> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| "expected p-to-p, sup-norm, lift or critical".to_string())
}

fn run(cli: Cli) -> AppResult<Status> {
    let opts = Options {
        config: cli.config,
        out: cli.out,
        seed: cli.seed,
        tol: cli.tol,
        suite: cli.suite,
        levels: cli.levels,
    };
    match cli.command {
        Command::Solve => run_solve(&opts),
        Command::Check => run_check(&opts),
        Command::Converge => run_converge(&opts),
        Command::Mlf(a) => {
            let mut cfg: MlfConfig = config::load(opts.config.as_deref())?;
            cfg.alpha = a.alpha.unwrap_or(cfg.alpha);
            cfg.beta = a.beta.unwrap_or(cfg.beta);
            if !a.z.is_empty() {
                cfg.z = a.z;
            }
            run_mlf(&opts, &cfg)
        }
        Command::Bounds(a) => {
            let mut cfg: BoundsConfig = config::load(opts.config.as_deref())?;
            cfg.alpha = a.alpha.unwrap_or(cfg.alpha);
            cfg.p = a.p.unwrap_or(cfg.p);
            cfg.q = a.q.unwrap_or(cfg.q);
            cfg.regime = a.regime.unwrap_or(cfg.regime);
            cfg.n = a.n.unwrap_or(cfg.n);
            if let Some(f) = a.function {
                cfg.function = f;
            }
            run_bounds(&opts, &cfg)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("fracgalerkin: {e}");
            ExitCode::from(AppError::exit_code(&e) as u8)
        }
    }
}
