//! Certified spectral computations for the Laplacian on the Sierpinski gasket.
//!
//! Eigenvalues of the level-`m` graph Laplacians are generated by spectral
//! decimation from a handful of seeds; eigenvalues of the limit Laplacian
//! are renormalized limits of those. All quantities are carried as
//! midpoint-radius balls so every comparison is either certified or
//! reported as inconclusive.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod gaps;
pub mod limits;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod spectra;

pub use config::Config;
pub use dynamics::{Branch, BranchWord};
pub use error::{Error, Result};
pub use report::{GapReport, Status};
pub use scalar::{Ball, Certified, Dyadic};
pub use spectra::{BoundaryCondition, EigenDescriptor, FiniteSpectrum, Seed};
