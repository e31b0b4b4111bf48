use num_complex::Complex64;
use rayon::prelude::*;

use super::state::{FockBlock, TruncatedState};
use super::tridiag::{SymTridiagonal, TridiagEigen};
use crate::error::OracleError;
use crate::params::ModelParams;

/// Hamiltonian restricted to total number `n`, in the basis `|k, n - k>`.
pub fn build_block_hamiltonian(n: usize, params: &ModelParams) -> SymTridiagonal {
    let ModelParams {
        kappa,
        epsilon,
        delta_mu,
    } = *params;
    let nf = n as f64;
    let diag = (0..=n)
        .map(|k| {
            let k = k as f64;
            let l = nf - k;
            kappa / 4.0 * (k * (k - 1.0) + l * (l - 1.0)) - delta_mu / 2.0 * (k - l)
        })
        .collect();
    let off = (0..n)
        .map(|k| {
            let k = k as f64;
            -epsilon / 2.0 * ((k + 1.0) * (nf - k)).sqrt()
        })
        .collect();
    SymTridiagonal::new(diag, off)
}

/// Cached per-block eigendecompositions for one parameter set.
#[derive(Debug, Clone)]
pub struct Propagator {
    params: ModelParams,
    blocks: Vec<TridiagEigen>,
}

impl Propagator {
    pub fn new(params: &ModelParams, n_max: usize) -> Result<Self, OracleError> {
        params.validate()?;
        let blocks = (0..=n_max)
            .into_par_iter()
            .map(|n| {
                build_block_hamiltonian(n, params)
                    .eigen()
                    .map_err(|_| OracleError::Eigen { block: n })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            params: *params,
            blocks,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n_max(&self) -> usize {
        self.blocks.len() - 1
    }

    /// `exp(-i H t) |psi>`, block by block.
    pub fn propagate(&self, state: &TruncatedState, t: f64) -> Result<TruncatedState, OracleError> {
        if state.n_max() > self.n_max() {
            return Err(OracleError::BlockMismatch {
                state: state.n_max(),
                propagator: self.n_max(),
            });
        }
        let blocks = state
            .blocks
            .iter()
            .zip(&self.blocks)
            .map(|(b, eig)| FockBlock::new(b.total, evolve_block(eig, &b.amps, t)))
            .collect();
        Ok(TruncatedState {
            blocks,
            norm_deficit: state.norm_deficit,
        })
    }

    /// `<psi| H |psi>`.
    pub fn energy(&self, state: &TruncatedState) -> f64 {
        energy(state, &self.params)
    }
}

fn evolve_block(eig: &TridiagEigen, amps: &[Complex64], t: f64) -> Vec<Complex64> {
    let n = amps.len();
    let v = &eig.vectors;
    // coordinates in the eigenbasis, each picking up its phase
    let coords: Vec<Complex64> = (0..n)
        .map(|j| {
            let proj: Complex64 = (0..n).map(|k| amps[k] * v[k * n + j]).sum();
            proj * Complex64::from_polar(1.0, -eig.values[j] * t)
        })
        .collect();
    (0..n)
        .map(|k| (0..n).map(|j| coords[j] * v[k * n + j]).sum())
        .collect()
}

/// One-shot evolution of a prepared state.
pub fn evolve(
    state: &TruncatedState,
    params: &ModelParams,
    t: f64,
) -> Result<TruncatedState, OracleError> {
    Propagator::new(params, state.n_max())?.propagate(state, t)
}

pub fn energy(state: &TruncatedState, params: &ModelParams) -> f64 {
    state
        .blocks
        .iter()
        .map(|b| {
            let h = build_block_hamiltonian(b.total, params);
            let hc = h.apply(&b.amps);
            b.amps
                .iter()
                .zip(&hc)
                .map(|(c, y)| (c.conj() * y).re)
                .sum::<f64>()
        })
        .sum()
}
