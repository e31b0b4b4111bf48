//! Second-order operator solution of the two-mode BEC Hamiltonian, its
//! closed-form nonclassicality witnesses, and an exact truncated Fock-space
//! propagator used to cross-check them.

pub mod coeffs;
pub mod error;
pub mod oracle;
pub mod params;
pub mod witnesses;

pub use coeffs::{coefficients, stable_g, CoefficientSet};
pub use error::{OracleError, ParamError, WitnessError};
pub use params::{perturbation_validity, validate, InitialState, ModelParams, TimeGrid, Validity};
pub use witnesses::{CoupledForm, Method, Mode, WitnessKind, WitnessResult};
