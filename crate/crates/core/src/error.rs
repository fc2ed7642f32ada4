use thiserror::Error;

use crate::state::Phase;

/// Sign of an acoustic eigenvalue `u_k ± c_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Plus => write!(f, "+"),
            Branch::Minus => write!(f, "-"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid state{}: {detail}", .cell.map(|c| format!(" in cell {c}")).unwrap_or_default())]
    InvalidState { cell: Option<usize>, detail: String },

    #[error("resonance in phase {phase} ({branch}): margin {margin:e} below threshold {threshold:e}")]
    Resonance {
        phase: Phase,
        branch: Branch,
        margin: f64,
        threshold: f64,
    },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("solver aborted at step {step}, t = {time}: {reason}")]
    SolverAbort {
        step: usize,
        time: f64,
        reason: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(detail: impl Into<String>) -> Self {
        Error::InvalidState {
            cell: None,
            detail: detail.into(),
        }
    }

    /// Attaches a cell index to an invalid-state error.
    pub fn in_cell(self, idx: usize) -> Self {
        match self {
            Error::InvalidState { detail, .. } | Error::Domain(detail) => Error::InvalidState {
                cell: Some(idx),
                detail,
            },
            other => other,
        }
    }
}
