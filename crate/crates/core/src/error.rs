use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("kappa must be non-negative (repulsive interaction), got {0}")]
    NegativeKappa(f64),
    #[error("{field} must be finite, got {value}")]
    NonFinite { field: &'static str, value: f64 },
    #[error("{field} must be a finite complex amplitude with finite |{field}|^2")]
    NonFiniteAmplitude { field: &'static str },
    #[error("time grid is empty")]
    EmptyGrid,
    #[error("time grid contains a negative or non-finite time {0}")]
    NegativeTime(f64),
    #[error("time grid is not strictly increasing at index {index}")]
    NotIncreasing { index: usize },
    #[error("a rescaled-time grid needs kappa > 0")]
    RescaledTimeNeedsKappa,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("higher-order antibunching needs n >= 2, got {0}")]
    HoaOrder(u32),
    #[error("higher-order entanglement needs n >= 1, got {0}")]
    HoeOrder(u32),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("tail tolerance must lie in (0, 1e-3), got {0}")]
    TailTolerance(f64),
    #[error("truncation N_max = {estimate} exceeds the ceiling {ceiling}")]
    Infeasible { estimate: usize, ceiling: usize },
    #[error("eigendecomposition of block N = {block} did not converge")]
    Eigen { block: usize },
    #[error("state has N_max = {state} but the propagator covers only N_max = {propagator}")]
    BlockMismatch { state: usize, propagator: usize },
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
}
