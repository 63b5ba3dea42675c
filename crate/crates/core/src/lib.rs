//! Combinatorial Laplacians of finite simplicial complexes.
//!
//! Builds complexes (explicit, flag, neighborhood), assembles boundary and
//! Laplacian matrices, computes spectra and exact Betti numbers, evaluates
//! eigenvalue lower bounds driven by the graph spectrum, and runs randomized
//! property suites and Monte Carlo experiments on `G(n, p)`.

pub mod bounds;
pub mod cli;
pub mod complex;
pub mod error;
pub mod io;
pub mod laplacian;
pub mod linalg;
pub mod par;
pub mod random;
pub mod verify;

pub use error::{Error, Result};
