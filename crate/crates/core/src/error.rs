use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative defect {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (defect {0:.3e})")]
    NotUnitary(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("time {t} outside segment [0, {duration}]")]
    TimeOutOfRange { t: f64, duration: f64 },

    #[error("segment is not cyclic: {0}")]
    NotCyclic(String),

    #[error("eigenvalue crossing between samples {sample} and {next} (overlap {overlap:.3}); refine the grid")]
    EigenvalueCrossing { sample: usize, next: usize, overlap: f64 },

    #[error("invariant spectrum is degenerate (gap {gap:.3e}); non-Abelian holonomy is not supported")]
    DegenerateSpectrum { gap: f64 },

    #[error("grid of {given} samples is below the resolution floor of {required}")]
    GridTooCoarse { given: usize, required: usize },

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
