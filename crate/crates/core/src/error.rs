use thiserror::Error;

/// Errors produced by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid value for `{field}`: {value} ({reason})")]
    Domain {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("coefficients are singular at coincident positions (z = {z}, r_perp = {r_perp})")]
    Singularity { z: f64, r_perp: f64 },

    #[error("detuning is too close to a pole of the spectral coefficients (|denominator| = {magnitude:e})")]
    PoleProximity { magnitude: f64 },

    #[error("step size underflow at z = {z} (h = {step:e}); the system is too stiff for the requested tolerance")]
    Stiffness { z: f64, step: f64 },

    #[error("{what} did not converge: reached {achieved:e}, requested {requested:e}")]
    Convergence {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("transfer matrix is singular (|m22| = {magnitude:e})")]
    SingularTransfer { magnitude: f64 },

    #[error("internal consistency check `{what}` failed: discrepancy {discrepancy:e}")]
    InternalConsistency {
        what: &'static str,
        discrepancy: f64,
    },

    #[error("no interior maximum found in [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("invalid configuration: {0}")]
    Configuration(String),
}

impl Error {
    /// True for failures of a numerical method (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::PoleProximity { .. }
                | Error::Stiffness { .. }
                | Error::Convergence { .. }
                | Error::SingularTransfer { .. }
                | Error::InternalConsistency { .. }
                | Error::Bracket { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            field,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn ensure_nonnegative(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::Domain {
            field,
            value,
            reason: "must be non-negative and finite",
        })
    }
}
