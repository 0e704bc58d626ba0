use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("no guided mode between the light lines")]
    NoGuidedMode,
    #[error("frequency equation has {roots} roots; frequency lies above the single-mode cutoff")]
    AmbiguousMode { roots: usize },
    #[error("no trap minimum within 500 nm of the surface")]
    NoTrap,
    #[error("eigensolver did not converge in window [{lo:e}, {hi:e}] rad/s")]
    NonConvergence { lo: f64, hi: f64 },
    #[error("states and potential were sampled on different meshes")]
    MeshMismatch,
    #[error("degenerate bath: upward plus downward rate vanishes")]
    DegenerateBath,
}

impl Error {
    pub fn config(field: &str, reason: &str) -> Self {
        Error::Config { field: field.into(), reason: reason.into() }
    }

    /// True for failures of a numerical method rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoGuidedMode
                | Error::AmbiguousMode { .. }
                | Error::NoTrap
                | Error::NonConvergence { .. }
                | Error::MeshMismatch
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
