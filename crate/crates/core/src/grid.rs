//! Time grids, fractional orders and sampled paths.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Uniform partition `t_i = i h` of `[0, T]` with `n` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeGrid {
    horizon: f64,
    nodes: usize,
}

impl TimeGrid {
    /// Uniform grid on `[0, horizon]` with `nodes` points.
    pub fn uniform(horizon: f64, nodes: usize) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::arg("time horizon must be positive and finite"));
        }
        if nodes < 2 {
            return Err(Error::arg("a time grid needs at least two nodes"));
        }
        Ok(Self { horizon, nodes })
    }

    #[inline]
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes
    }

    /// Always false; a grid has at least two nodes.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn step(&self) -> f64 {
        self.horizon / (self.nodes - 1) as f64
    }

    /// Node `t_i`; the last node is exactly `T`.
    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i + 1 == self.nodes {
            self.horizon
        } else {
            i as f64 * self.step()
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.nodes).map(move |i| self.node(i))
    }

    /// Grid with `2(n-1)+1` nodes on the same horizon.
    pub fn refined(&self) -> Self {
        Self { horizon: self.horizon, nodes: 2 * (self.nodes - 1) + 1 }
    }
}

/// A fractional order. Constructors check the range required by the caller.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Order(f64);

impl Order {
    /// Order of a fractional derivative, `0 < α < 1`.
    pub fn derivative(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 1.0 {
            Ok(Self(alpha))
        } else {
            Err(Error::arg("derivative order must lie in (0, 1)"))
        }
    }

    /// Order of a fractional integral, `0 < β ≤ 2`.
    pub fn integral(beta: f64) -> Result<Self> {
        if beta > 0.0 && beta <= 2.0 {
            Ok(Self(beta))
        } else {
            Err(Error::arg("integral order must lie in (0, 2]"))
        }
    }

    /// Order admitted by the heat solver, `1/2 ≤ α < 1`. The estimates behind
    /// the solver need `α > 1/2`; the endpoint is kept for the standard
    /// `α = 1/2` benchmark, where the Mittag-Leffler oracle is an `erfc`.
    pub fn solver(alpha: f64) -> Result<Self> {
        if (0.5..1.0).contains(&alpha) {
            Ok(Self(alpha))
        } else {
            Err(Error::arg("solver order must lie in [1/2, 1)"))
        }
    }

    /// Unvalidated order; operators re-check the range they need.
    #[cfg(test)]
    pub(crate) const fn raw(v: f64) -> Self {
        Self(v)
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `1 - α`, the order of the integral inside a derivative of order `α`.
    pub fn complement(self) -> Result<Self> {
        Order::integral(1.0 - self.0)
    }
}

/// Sampled real function of time.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalarPath {
    grid: TimeGrid,
    values: Vec<f64>,
    /// Set when `values[0]` is a copy of `values[1]` rather than a computed value.
    origin_extrapolated: bool,
}

impl ScalarPath {
    pub fn new(grid: TimeGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::arg("path length differs from grid node count"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("path contains non-finite values"));
        }
        Ok(Self { grid, values, origin_extrapolated: false })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self { grid, values: alloc::vec![0.0; grid.len()], origin_extrapolated: false }
    }

    pub(crate) fn from_raw(grid: TimeGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values, origin_extrapolated: false }
    }

    pub(crate) fn with_extrapolated_origin(mut self) -> Self {
        self.origin_extrapolated = true;
        self
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn origin_extrapolated(&self) -> bool {
        self.origin_extrapolated
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        ScalarPath::new(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    /// `self - self[0]`.
    pub fn shifted_to_zero(&self) -> Self {
        let v0 = self.values[0];
        Self::from_raw(self.grid, self.values.iter().map(|v| v - v0).collect())
    }
}

/// Sample `f` at every node of `grid`.
pub fn sample(f: impl Fn(f64) -> f64, grid: &TimeGrid) -> Result<ScalarPath> {
    let values: Vec<f64> = grid.nodes().map(&f).collect();
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::input(alloc::format!("non-finite sample at node {i}")));
    }
    Ok(ScalarPath::from_raw(*grid, values))
}

/// Trajectory of `m` modal coefficients, stored row-major (`n × m`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModalPath {
    grid: TimeGrid,
    modes: usize,
    values: Vec<f64>,
}

impl ModalPath {
    pub fn new(grid: TimeGrid, modes: usize, values: Vec<f64>) -> Result<Self> {
        if modes == 0 {
            return Err(Error::arg("a modal path needs at least one mode"));
        }
        if values.len() != grid.len() * modes {
            return Err(Error::arg("modal values do not match grid × modes"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("modal path contains non-finite values"));
        }
        Ok(Self { grid, modes, values })
    }

    pub fn zeros(grid: TimeGrid, modes: usize) -> Result<Self> {
        Self::new(grid, modes, alloc::vec![0.0; grid.len() * modes])
    }

    /// Build from per-mode columns.
    pub fn from_columns(columns: &[ScalarPath]) -> Result<Self> {
        let first = columns.first().ok_or_else(|| Error::arg("no columns given"))?;
        let grid = *first.grid();
        if columns.iter().any(|c| *c.grid() != grid) {
            return Err(Error::arg("columns live on different grids"));
        }
        let m = columns.len();
        let mut values = alloc::vec![0.0; grid.len() * m];
        for (j, c) in columns.iter().enumerate() {
            for (i, &v) in c.values().iter().enumerate() {
                values[i * m + j] = v;
            }
        }
        Ok(Self { grid, modes: m, values })
    }

    pub(crate) fn from_raw(grid: TimeGrid, modes: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len() * modes);
        Self { grid, modes, values }
    }

    /// Single-mode path.
    pub fn from_scalar(path: &ScalarPath) -> Self {
        Self { grid: *path.grid(), modes: 1, values: path.values().to_vec() }
    }

    #[inline]
    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    #[inline]
    pub fn modes(&self) -> usize {
        self.modes
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.modes..(i + 1) * self.modes]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.modes + j]
    }

    pub fn column(&self, j: usize) -> ScalarPath {
        let v = (0..self.grid.len()).map(|i| self.get(i, j)).collect();
        ScalarPath::from_raw(self.grid, v)
    }

    pub fn columns(&self) -> Vec<ScalarPath> {
        (0..self.modes).map(|j| self.column(j)).collect()
    }

    /// `self - other`, shapes must agree.
    pub fn difference(&self, other: &ModalPath) -> Result<ModalPath> {
        check_same_shape(self, other)?;
        let v = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid, modes: self.modes, values: v })
    }

    /// Path minus its initial row.
    pub fn shifted_to_zero(&self) -> ModalPath {
        let m = self.modes;
        let v = self.values.iter().enumerate().map(|(k, x)| x - self.values[k % m]).collect();
        Self { grid: self.grid, modes: m, values: v }
    }

    /// `Σ_j u_j(t_i)²` at every node.
    pub fn squared_norms(&self) -> ScalarPath {
        let v = (0..self.grid.len()).map(|i| crate::sum::sum(self.row(i).iter().map(|x| x * x))).collect();
        ScalarPath::from_raw(self.grid, v)
    }
}

pub(crate) fn check_same_shape(a: &ModalPath, b: &ModalPath) -> Result<()> {
    if a.grid != b.grid || a.modes != b.modes {
        return Err(Error::arg("modal paths differ in grid or mode count"));
    }
    Ok(())
}

/// `Σ_j a[i,j] b[i,j]` at every node: the `L²(Ω)` inner product in an
/// orthonormal basis.
pub fn pointwise_inner(a: &ModalPath, b: &ModalPath) -> Result<ScalarPath> {
    check_same_shape(a, b)?;
    let v = (0..a.grid.len()).map(|i| crate::sum::sum(a.row(i).iter().zip(b.row(i)).map(|(x, y)| x * y))).collect();
    Ok(ScalarPath::from_raw(a.grid, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use proptest::prelude::*;

    #[test]
    fn grid_examples() {
        let g = TimeGrid::uniform(1.0, 2).unwrap();
        assert_eq!(g.nodes().collect::<Vec<_>>(), [0.0, 1.0]);
        let g = TimeGrid::uniform(2.0, 5).unwrap();
        assert_eq!(g.nodes().collect::<Vec<_>>(), [0.0, 0.5, 1.0, 1.5, 2.0]);
        let g = TimeGrid::uniform(1.0, 1025).unwrap();
        assert_eq!(g.step(), 1.0 / 1024.0);
    }

    #[test]
    fn grid_rejects_bad_arguments() {
        assert!(matches!(TimeGrid::uniform(0.0, 5), Err(Error::InvalidArgument(_))));
        assert!(matches!(TimeGrid::uniform(-1.0, 5), Err(Error::InvalidArgument(_))));
        assert!(matches!(TimeGrid::uniform(1.0, 1), Err(Error::InvalidArgument(_))));
        assert!(matches!(TimeGrid::uniform(f64::NAN, 3), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn grid_uniformity_within_ulps() {
        for &(t, n) in &[(1.0, 4097usize), (PI, 1000), (7.3, 333), (1e-3, 77)] {
            let g = TimeGrid::uniform(t, n).unwrap();
            let h = g.step();
            let ulp = f64::EPSILON * t;
            for i in 0..n - 1 {
                assert!(((g.node(i + 1) - g.node(i)) - h).abs() <= 4.0 * ulp);
            }
            assert_eq!(g.node(0), 0.0);
            assert_eq!(g.node(n - 1), t);
        }
    }

    #[test]
    fn sample_examples() {
        let g = TimeGrid::uniform(1.0, 5).unwrap();
        assert!(sample(|_| 0.0, &g).unwrap().values().iter().all(|&v| v == 0.0));
        let g = TimeGrid::uniform(1.0, 3).unwrap();
        assert_eq!(sample(|t| t, &g).unwrap().values(), [0.0, 0.5, 1.0]);
        let g = TimeGrid::uniform(PI, 3).unwrap();
        let s = sample(libm::sin, &g).unwrap();
        assert_eq!(s.values()[0], 0.0);
        assert!((s.values()[1] - 1.0).abs() < 1e-15);
        assert!(s.values()[2].abs() < 1e-15);
        assert!(matches!(sample(|t| 1.0 / t, &g), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn orders_check_ranges() {
        assert!(Order::derivative(0.5).is_ok());
        assert!(Order::derivative(1.0).is_err());
        assert!(Order::integral(2.0).is_ok());
        assert!(Order::integral(2.1).is_err());
        assert!(Order::solver(0.49).is_err());
        assert!(Order::solver(0.5).is_ok());
        assert!(Order::solver(0.75).is_ok());
    }

    #[test]
    fn pointwise_inner_examples() {
        let g = TimeGrid::uniform(1.0, 4).unwrap();
        let e1 = ModalPath::new(g, 2, [1.0, 0.0].repeat(4)).unwrap();
        let e2 = ModalPath::new(g, 2, [0.0, 1.0].repeat(4)).unwrap();
        assert!(pointwise_inner(&e1, &e2).unwrap().values().iter().all(|&v| v == 0.0));
        let a = ModalPath::new(g, 2, [3.0, 4.0].repeat(4)).unwrap();
        assert!(pointwise_inner(&a, &a).unwrap().values().iter().all(|&v| v == 25.0));
        let b = ModalPath::zeros(g, 3).unwrap();
        assert!(matches!(pointwise_inner(&a, &b), Err(Error::InvalidArgument(_))));
    }

    /// Double-double accumulation, independent of the compensated summation used above.
    fn dd_dot(a: &[f64], b: &[f64]) -> f64 {
        let (mut hi, mut lo) = (0.0f64, 0.0f64);
        for (x, y) in a.iter().zip(b) {
            let p = x * y;
            let pe = x.mul_add(*y, -p);
            let s = hi + p;
            let bb = s - hi;
            let se = (hi - (s - bb)) + (p - bb);
            lo += se + pe;
            hi = s;
        }
        hi + lo
    }

    proptest! {
        #[test]
        fn pointwise_inner_matches_extended_oracle(
            a in proptest::collection::vec(-1e3f64..1e3, 15),
            b in proptest::collection::vec(-1e3f64..1e3, 15),
        ) {
            let g = TimeGrid::uniform(1.0, 5).unwrap();
            let pa = ModalPath::new(g, 3, a.clone()).unwrap();
            let pb = ModalPath::new(g, 3, b.clone()).unwrap();
            let ip = pointwise_inner(&pa, &pb).unwrap();
            for i in 0..5 {
                let oracle = dd_dot(&a[3 * i..3 * i + 3], &b[3 * i..3 * i + 3]);
                let scale: f64 = a[3*i..3*i+3].iter().zip(&b[3*i..3*i+3]).map(|(x, y)| (x * y).abs()).sum();
                prop_assert!((ip.values()[i] - oracle).abs() <= 1e-14 * scale.max(1.0));
            }
        }

        #[test]
        fn pointwise_inner_symmetric_bilinear(
            a in proptest::collection::vec(-10f64..10.0, 8),
            b in proptest::collection::vec(-10f64..10.0, 8),
            c in proptest::collection::vec(-10f64..10.0, 8),
            s in -5f64..5.0,
        ) {
            let g = TimeGrid::uniform(2.0, 4).unwrap();
            let pa = ModalPath::new(g, 2, a.clone()).unwrap();
            let pb = ModalPath::new(g, 2, b.clone()).unwrap();
            let pc = ModalPath::new(g, 2, c.clone()).unwrap();
            let comb: Vec<f64> = a.iter().zip(&c).map(|(x, z)| s * x + z).collect();
            let pcomb = ModalPath::new(g, 2, comb).unwrap();
            let ab = pointwise_inner(&pa, &pb).unwrap();
            let ba = pointwise_inner(&pb, &pa).unwrap();
            let lhs = pointwise_inner(&pcomb, &pb).unwrap();
            let cb = pointwise_inner(&pc, &pb).unwrap();
            for i in 0..4 {
                prop_assert_eq!(ab.values()[i], ba.values()[i]);
                let rhs = s * ab.values()[i] + cb.values()[i];
                prop_assert!((lhs.values()[i] - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
            }
        }
    }
}
