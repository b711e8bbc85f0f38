use thiserror::Error;

/// Errors produced by space construction, flow solvers and verification ops.
#[derive(Debug, Error)]
pub enum Error {
    #[error("disconnected graph")]
    Disconnected,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("outside exp_p domain: t = {t}, p = {p}")]
    OutsideExpDomain { t: f64, p: f64 },

    #[error("nonpositive argument: ln_p requires s > 0, got {0}")]
    NonpositiveArgument(f64),

    #[error("exponent p = {0} outside (1, 3)")]
    InvalidExponent(f64),

    #[error("p = 2: use log entropy, the Renyi functional is undefined here")]
    UseLogEntropy,

    #[error("log of zero: golden-case Fisher information needs strictly positive density")]
    LogOfZero,

    #[error("density not bounded below: slope bound needs a strictly positive density")]
    DensityNotBoundedBelow,

    #[error("bruteforce limit: space has {n} vertices, oracle handles at most {max}")]
    BruteforceLimit { n: usize, max: usize },

    #[error("not probability vectors: {0}")]
    NotProbabilityVectors(String),

    #[error("weight condition violated: integral of exp_p(-V^p) is {integral} > 1")]
    WeightConditionViolated { integral: f64 },

    #[error("prox not converged: residual {residual} > tol {tol} after {iterations} iterations")]
    ProxNotConverged {
        residual: f64,
        tol: f64,
        iterations: usize,
    },

    #[error("jko inner solver not converged: error estimate {estimate} > tol {tol} after {sweeps} sweeps")]
    JkoNotConverged {
        estimate: f64,
        tol: f64,
        sweeps: usize,
    },

    #[error("fields live on different spaces")]
    SpaceMismatch,

    #[error("transport solver stalled: {0}")]
    TransportStalled(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
