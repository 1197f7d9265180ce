//! Configuration, seeded corpora, file formats and subcommands of the
//! `fracgalerkin` command-line tool. The numerics live in `fracgalerkin-core`.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod error;
pub mod io;
pub mod parallel;

pub use commands::{Options, Status};
pub use error::{AppError, AppResult};
