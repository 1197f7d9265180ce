//! Seeded random inputs for the property runs.
//!
//! All generators draw from a `ChaCha8Rng`, so a seed fixes the corpus on
//! every platform.

use std::f64::consts::PI;

use fracgalerkin_core::galerkin::{HeatProblem, SpectralBasis};
use fracgalerkin_core::{ModalPath, Order, TimeGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::FieldSpec;
use crate::error::AppResult;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Coefficients of `a₀ + Σ_{k=1}^{d} a_k cos(kπt/T) + b_k sin(kπt/T)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigPoly {
    pub fn random(rng: &mut impl Rng, max_degree: usize) -> Self {
        let d = rng.random_range(0..=max_degree);
        let cos = (0..=d).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let sin = (0..=d).map(|k| if k == 0 { 0.0 } else { rng.random_range(-1.0..=1.0) }).collect();
        Self { cos, sin }
    }

    pub fn eval(&self, t: f64, horizon: f64) -> f64 {
        let w = PI * t / horizon;
        self.cos
            .iter()
            .zip(&self.sin)
            .enumerate()
            .map(|(k, (a, b))| {
                let (s, c) = (k as f64 * w).sin_cos();
                a * c + b * s
            })
            .sum()
    }
}

fn trig_path(rng: &mut impl Rng, grid: &TimeGrid, modes: usize, max_degree: usize) -> AppResult<ModalPath> {
    let polys: Vec<TrigPoly> = (0..modes).map(|_| TrigPoly::random(rng, max_degree)).collect();
    let horizon = grid.horizon();
    let values = grid.nodes().flat_map(|t| polys.iter().map(move |p| p.eval(t, horizon))).collect();
    Ok(ModalPath::new(*grid, modes, values)?)
}

fn constant_path(rng: &mut impl Rng, grid: &TimeGrid, modes: usize) -> AppResult<ModalPath> {
    let c: Vec<f64> = (0..modes).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let values = grid.nodes().flat_map(|_| c.iter().copied()).collect();
    Ok(ModalPath::new(*grid, modes, values)?)
}

fn max_modes(field: FieldSpec) -> usize {
    match field {
        FieldSpec::Trig { max_modes, .. } | FieldSpec::Constant { max_modes } => max_modes.max(1),
    }
}

fn draw(rng: &mut impl Rng, grid: &TimeGrid, field: FieldSpec, modes: usize) -> AppResult<ModalPath> {
    match field {
        FieldSpec::Trig { max_degree, .. } => trig_path(rng, grid, modes, max_degree),
        FieldSpec::Constant { .. } => constant_path(rng, grid, modes),
    }
}

/// `count` modal paths with a random mode count in `1..=max_modes`.
pub fn modal_corpus(seed: u64, grid: &TimeGrid, field: FieldSpec, count: usize) -> AppResult<Vec<ModalPath>> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=max_modes(field));
            draw(&mut rng, grid, field, m)
        })
        .collect()
}

/// `count` pairs of paths sharing a random mode count.
pub fn pair_corpus(
    seed: u64,
    grid: &TimeGrid,
    field: FieldSpec,
    count: usize,
) -> AppResult<Vec<(ModalPath, ModalPath)>> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=max_modes(field));
            Ok((draw(&mut rng, grid, field, m)?, draw(&mut rng, grid, field, m)?))
        })
        .collect()
}

/// Node count of the problem corpora.
pub const PROBLEM_NODES: usize = 1025;

/// Problems on `(0, π)`, `T = 1`, with `u₀ = 0`, up to four modes, `α` uniform in
/// `[0.55, 0.95]` and trigonometric-polynomial modal forcing of degree ≤ 3.
pub fn forced_problems(seed: u64, count: usize) -> AppResult<Vec<HeatProblem>> {
    let mut rng = rng(seed);
    let grid = TimeGrid::uniform(1.0, PROBLEM_NODES)?;
    (0..count)
        .map(|_| {
            let m = rng.random_range(1..=4);
            let alpha = Order::solver(rng.random_range(0.55..=0.95))?;
            let basis = SpectralBasis::new(PI, m)?;
            let forcing = trig_path(&mut rng, &grid, m, 3)?;
            Ok(HeatProblem::new(basis, grid, alpha, vec![0.0; m], forcing)?)
        })
        .collect()
}

/// Unforced problems on `(0, π)`, `T = 1`, up to six modes, cycling through
/// `alphas`. Each initial coefficient has magnitude in `[0.1, 1]` and a random sign.
pub fn unforced_problems(seed: u64, count: usize, alphas: &[f64]) -> AppResult<Vec<HeatProblem>> {
    let mut rng = rng(seed);
    let grid = TimeGrid::uniform(1.0, PROBLEM_NODES)?;
    (0..count)
        .map(|i| {
            let m = rng.random_range(1..=6);
            let alpha = Order::solver(alphas[i % alphas.len()])?;
            let u0 = (0..m)
                .map(|_| {
                    let mag = rng.random_range(0.1..=1.0);
                    if rng.random_bool(0.5) {
                        mag
                    } else {
                        -mag
                    }
                })
                .collect();
            Ok(HeatProblem::unforced(SpectralBasis::new(PI, m)?, grid, alpha, u0)?)
        })
        .collect()
}
