use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix or vector entry is not finite")]
    NonFinite,

    #[error("unsupported ket dimension {0}")]
    KetDimension(usize),

    #[error("{routine} did not converge after {iterations} iterations")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("matrix is singular to working precision")]
    Singular,

    #[error("theta = {theta} outside the supported range |theta| <= {cap}")]
    ThetaOutOfRange { theta: f64, cap: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("states are identical up to phase; no finite theta exists")]
    IdenticalStates,

    #[error("post-selected branch has vanishing probability {probability:.3e}")]
    ZeroBranch { probability: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by caller input rather than numerical failure.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::ThetaOutOfRange { .. }
                | Error::InvalidArgument(_)
                | Error::KetDimension(_)
                | Error::NotNormalized { .. }
                | Error::IdenticalStates
                | Error::NotUnitary { .. }
        )
    }
}
