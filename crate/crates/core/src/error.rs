use thiserror::Error;

/// Errors produced by the depth, distribution and approximation routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument or parameter violates the operation's domain.
    #[error("domain error in {op}: {reason}")]
    Domain { op: &'static str, reason: String },

    /// A result over- or underflows the representable range.
    #[error("range error in {op}: {reason}")]
    Range { op: &'static str, reason: String },

    /// The law has no finite mean, so expectile-based quantities are undefined.
    #[error("expectile undefined: {law} has no finite mean")]
    InfiniteMean { law: String },

    /// An iterative routine exhausted its budget without meeting its tolerance.
    #[error("{op} did not converge after {evals} evaluations (last change {last_change:.3e})")]
    NonConvergence {
        op: &'static str,
        evals: usize,
        last_change: f64,
    },

    /// The requested depth set is empty because alpha exceeds the maximum depth.
    #[error("depth set is empty: alpha {alpha} exceeds the maximum depth {max_depth}")]
    EmptyDepthSet { alpha: f64, max_depth: f64 },
}

impl Error {
    pub(crate) fn domain(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn range(op: &'static str, reason: impl Into<String>) -> Self {
        Error::Range {
            op,
            reason: reason.into(),
        }
    }

    pub(crate) fn infinite_mean(law: impl Into<String>) -> Self {
        Error::InfiniteMean { law: law.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
