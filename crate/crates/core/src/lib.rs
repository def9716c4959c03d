//! Finite-dimensional quantum entropy numerics.
//!
//! Dense complex matrices and Hermitian spectral calculus ([`matcore`]), the
//! left/right multiplication superoperators and their resolvent
//! ([`superop`]), von Neumann and relative entropy by several independent
//! routes ([`entropy`]), Kraus-form channels ([`channels`]), margin-reporting
//! inequality checks with a seeded suite runner ([`inequalities`]), Holevo
//! quantities ([`holevo`]) and the reproducible random generators behind the
//! suites ([`randgen`]).

pub mod channels;
pub mod entropy;
pub mod error;
pub mod holevo;
pub mod inequalities;
pub mod matcore;
pub mod randgen;
pub mod superop;

pub use channels::{KrausMap, LinearMap, Povm};
pub use entropy::{EntropyValue, QuadratureConfig};
pub use error::{Error, Result};
pub use holevo::Ensemble;
pub use inequalities::{CheckReport, SuiteConfig};
pub use matcore::{ComplexMatrix, DensityMatrix, HermitianMatrix, KernelPolicy, Spectrum};
pub use num_complex::Complex64;
pub use randgen::RngState;
pub use superop::SuperOpSpec;
