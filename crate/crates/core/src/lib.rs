//! Numerical laboratory for unitary-invariant random matrix ensembles with
//! polynomial potentials.
//!
//! The crate covers equilibrium measures, orthogonal polynomials and their
//! recurrence coefficients, finite-N and universal correlation kernels,
//! the Hastings–McLeod Painlevé II solution and Tracy–Widom distribution,
//! partition functions and free energies, the Gaussian model with an external
//! source near its cusp, and a Metropolis sampler for the eigenvalue gas.
//!
//! ```
//! use rmtlab::{equilibrium::EquilibriumMeasure, potential::Potential};
//!
//! let v = Potential::gaussian();
//! let m = EquilibriumMeasure::solve(&v, 1).unwrap();
//! assert!((m.support.right() - 2f64.sqrt()).abs() < 1e-10);
//! ```

pub mod error;
pub mod poly;
pub mod potential;
pub mod quad;
pub mod band;
pub mod equilibrium;
pub mod orthopoly;
pub mod kernels;
pub mod extsource;
pub mod painleve;
pub mod partition;
pub mod sampler;
pub mod cli;

pub use error::{Error, Result};
