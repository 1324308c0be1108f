use thiserror::Error;

/// Failure modes across the engine.
///
/// `Inconsistent` is a signal from [`crate::tensorspace::solve_exact`] rather
/// than a fault; callers that probe for factorizations match on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("pole at equal arguments x = y = {0}")]
    PoleAtEqualArguments(String),
    #[error("vanishing factor in psi: {0}")]
    PoleInPsi(String),
    #[error("pole in structure function: {0}")]
    PoleDetected(String),
    #[error("invalid deformation parameter: {0}")]
    InvalidQ(String),
    #[error("duplicate space `{0}` in tensor product")]
    DuplicateSpace(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("evaluation point mismatch on space `{0}`")]
    EvaluationPointMismatch(String),
    #[error("linear system has no solution")]
    Inconsistent,
    #[error("matrix is singular")]
    Singular,
    #[error("p^2 is not proportional to p for k = {k}, M = {m}")]
    NonProjector { k: usize, m: usize },
    #[error("restriction leaks out of the fused image: {0}")]
    ProjectorLeak(String),
    #[error("degeneracy detected: {0}")]
    DegeneracyDetected(String),
    #[error("resonant evaluation point: {0}")]
    ResonanceDetected(String),
    #[error("Y(x) is singular at x = {0}")]
    SingularY(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: String },
    #[error("degenerate joint spectrum after retries")]
    DegenerateSpectrum,
    #[error("ill-conditioned Y at root {0}")]
    IllConditioned(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
