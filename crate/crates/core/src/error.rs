use thiserror::Error;

use crate::model::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {}", join(.0))]
    InvalidParams(Vec<Violation>),

    #[error("analytic path unavailable: {}", .0.join("; "))]
    NotAnalytic(Vec<String>),

    #[error("resonant formula requires zero detuning, got {0:e}")]
    NotResonant(f64),

    #[error("SWAP(θ) indices must be positive, got n={n}, m={m}")]
    InvalidSwapTheta { n: i64, m: i64 },

    #[error("matrix is not Hermitian (max |H - H†| = {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("negative duration {0}")]
    NegativeDuration(f64),

    #[error("detuning ratio Δ/S = {0} outside [0, 1)")]
    DetuningRatio(f64),

    #[error("eigendecomposition did not converge")]
    Eigen,
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
