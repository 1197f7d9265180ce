use std::f64::consts::PI;

use fracgalerkin_core::fracops::{caputo_derivative, rl_derivative, rl_integral};
use fracgalerkin_core::galerkin::{energy_report, project_initial, solve, solve_modal, HeatProblem, SpectralBasis};
use fracgalerkin_core::grid::sample;
use fracgalerkin_core::mlf::exact_modal_solution;
use fracgalerkin_core::{Order, ScalarPath, TimeGrid};
use proptest::prelude::*;

fn max_abs_diff(a: &ScalarPath, b: &ScalarPath) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[test]
fn caputo_of_constant_vanishes_and_rl_does_not() {
    let grid = TimeGrid::uniform(1.0, 65).unwrap();
    let c = sample(|_| 2.5, &grid).unwrap();
    let alpha = Order::derivative(0.4).unwrap();
    let cap = caputo_derivative(&c, alpha).unwrap();
    assert!(cap.values().iter().all(|v| v.abs() < 1e-13));
    let rl = rl_derivative(&c, alpha).unwrap();
    assert!(rl.values()[1..].iter().all(|&v| v > 0.0));
}

#[test]
fn modal_solver_converges_to_mittag_leffler() {
    let alpha = Order::solver(0.8).unwrap();
    let err = |n: usize| {
        let grid = TimeGrid::uniform(1.0, n).unwrap();
        let g = solve_modal(2.0, &ScalarPath::zeros(grid), alpha, 1.0).unwrap();
        (exact_modal_solution(0.8, 2.0, 1.0, 0.0, 1.0).unwrap() - g.values()[n - 1]).abs()
    };
    let (coarse, fine) = (err(257), err(1025));
    assert!(fine < 1e-3, "{fine}");
    assert!(coarse / fine > 3.0, "{coarse} / {fine}");
}

#[test]
fn unforced_solve_satisfies_energy_report() {
    let basis = SpectralBasis::new(PI, 3).unwrap();
    let u0 = project_initial(|x| x * (PI - x), &basis).unwrap();
    let grid = TimeGrid::uniform(1.0, 257).unwrap();
    let problem = HeatProblem::unforced(basis, grid, Order::solver(0.7).unwrap(), u0).unwrap();
    let sol = solve(&problem).unwrap();
    assert_eq!(sol.path.modes(), 3);
    assert!(energy_report(&sol, &problem).unwrap().all_satisfied);
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(TimeGrid::uniform(1.0, 1).is_err());
    assert!(TimeGrid::uniform(-1.0, 9).is_err());
    assert!(Order::derivative(1.0).is_err());
    assert!(Order::solver(0.3).is_err());
    assert!(SpectralBasis::new(PI, 0).is_err());
    assert!(exact_modal_solution(1.2, 1.0, 1.0, 0.0, 1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rl_integral_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, beta in 0.1f64..1.9) {
        let grid = TimeGrid::uniform(1.0, 129).unwrap();
        let order = Order::integral(beta).unwrap();
        let f = sample(|t| t.sin(), &grid).unwrap();
        let g = sample(|t| t * t, &grid).unwrap();
        let combo = sample(|t| a * t.sin() + b * t * t, &grid).unwrap();
        let (jf, jg) = (rl_integral(&f, order).unwrap(), rl_integral(&g, order).unwrap());
        let expected = ScalarPath::new(
            grid,
            jf.values().iter().zip(jg.values()).map(|(x, y)| a * x + b * y).collect(),
        )
        .unwrap();
        prop_assert!(max_abs_diff(&rl_integral(&combo, order).unwrap(), &expected) < 1e-12);
    }

    #[test]
    fn rl_integral_preserves_sign(beta in 0.1f64..1.9, k in 1u32..6) {
        let grid = TimeGrid::uniform(2.0, 129).unwrap();
        let f = sample(|t| (f64::from(k) * t).sin().powi(2), &grid).unwrap();
        let j = rl_integral(&f, Order::integral(beta).unwrap()).unwrap();
        prop_assert!(j.values().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn unforced_modes_never_grow(alpha in 0.55f64..0.95, lambda in 0.1f64..50.0, g0 in -2.0f64..2.0) {
        let grid = TimeGrid::uniform(1.0, 129).unwrap();
        let g = solve_modal(lambda, &ScalarPath::zeros(grid), Order::solver(alpha).unwrap(), g0).unwrap();
        prop_assert!(g.values().windows(2).all(|w| w[1].abs() <= w[0].abs() + 1e-14));
    }
}
