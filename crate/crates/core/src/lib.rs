//! Fractional calculus on uniform time grids.
//!
//! The crate is `no_std` (it needs `alloc`) and contains every numerical
//! piece of the toolkit:
//!
//! * [`grid`]: time grids, fractional orders and sampled paths,
//! * [`fracops`]: Riemann-Liouville integral and derivative, Caputo derivative (L1),
//! * [`mlf`]: two-parameter Mittag-Leffler function on the real axis,
//! * [`norms`]: discrete Lebesgue, Sobolev-Slobodeckij and bound reports,
//! * [`inequality`]: discrete checks of the fractional energy inequalities,
//! * [`galerkin`]: spectral Faedo-Galerkin solver for the fractional heat problem.
//!
//! IO, configuration and the command line live in the `fracgalerkin` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod fracops;
pub mod galerkin;
pub mod grid;
pub mod inequality;
pub mod mlf;
pub mod norms;
pub mod quad;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
pub use grid::{ModalPath, Order, ScalarPath, TimeGrid};
