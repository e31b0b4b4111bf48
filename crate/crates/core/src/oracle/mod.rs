//! Exact reference dynamics on a truncated two-mode Fock space.
//!
//! The Hamiltonian conserves `a†a + b†b`, so the state splits into blocks of
//! fixed total number `N`, each evolved with its own tridiagonal
//! eigendecomposition.

mod moments;
mod propagate;
mod state;
pub mod tridiag;

pub use moments::{moment, witnesses_exact, Exact};
pub use propagate::{build_block_hamiltonian, energy, evolve, Propagator};
pub use state::{
    coherent_product, poisson_tail, prepare_initial, truncation_cutoff, FockBlock, OracleConfig,
    TruncatedState,
};

use crate::error::OracleError;
use crate::params::{InitialState, ModelParams};
use crate::witnesses::{WitnessKind, WitnessResult};

/// A prepared initial state together with the propagator for its blocks.
#[derive(Debug, Clone)]
pub struct Oracle {
    initial: TruncatedState,
    propagator: Propagator,
}

impl Oracle {
    pub fn new(
        params: &ModelParams,
        state: &InitialState,
        config: &OracleConfig,
    ) -> Result<Self, OracleError> {
        let initial = prepare_initial(state, config)?;
        let propagator = Propagator::new(params, initial.n_max())?;
        Ok(Self {
            initial,
            propagator,
        })
    }

    pub fn n_max(&self) -> usize {
        self.initial.n_max()
    }

    pub fn initial(&self) -> &TruncatedState {
        &self.initial
    }

    pub fn propagator(&self) -> &Propagator {
        &self.propagator
    }

    pub fn state_at(&self, t: f64) -> Result<TruncatedState, OracleError> {
        self.propagator.propagate(&self.initial, t)
    }

    pub fn witnesses_at(
        &self,
        t: f64,
        kinds: &[WitnessKind],
    ) -> Result<Vec<WitnessResult>, OracleError> {
        let state = self.state_at(t)?;
        Ok(witnesses_exact(&state, t, kinds)?)
    }
}
