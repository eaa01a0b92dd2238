//! Evolution and verification toolkit for the radially symmetric Einstein-wave-Klein-Gordon
//! system in 2+1 dimensions: a constrained Cauchy evolver, a double-null characteristic
//! evolver, cone diagnostics and a flat-space kernel oracle.

pub mod cauchy;
pub mod cli;
pub mod config;
pub mod convergence;
pub mod crosscheck;
pub mod diagnostics;
pub mod error;
pub mod flat_oracle;
pub mod grid;
pub mod initial_data;
pub mod null;
pub mod quadrature;
pub mod state;

pub use config::{DataKind, InitialDataFamily, Mode, SimConfig};
pub use error::{Error, Result};
pub use grid::RadialGrid;
pub use state::{CauchyState, NullSlice};
