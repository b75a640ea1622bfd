use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    /// A matrix row that must carry information is identically zero.
    #[error("singular structure: {0}")]
    SingularStructure(String),

    #[error("linear algebra failure in {stage}: {detail}")]
    LinearAlgebra { stage: LinAlgStage, detail: String },

    #[error("mesh construction error: {0}")]
    Mesh(String),

    #[error("mesh bookkeeping error: {0}")]
    Bookkeeping(String),

    #[error("global system is singular ({0}); suspect redundant constraints or an all-Neumann problem")]
    GlobalSingularity(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("mesh file format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("time stepping became unstable at step {step} (CFL estimate {cfl:.3e})")]
    Instability { step: usize, cfl: f64 },
}

/// Which factorization failed inside a linear solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinAlgStage {
    BandedPart,
    Capacitance,
    Dense,
}

impl std::fmt::Display for LinAlgStage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            LinAlgStage::BandedPart => "banded part",
            LinAlgStage::Capacitance => "capacitance matrix",
            LinAlgStage::Dense => "dense factorization",
        };
        f.write_str(s)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
