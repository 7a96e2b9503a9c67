//! Crate-wide error type.

use alloc::string::String;

/// Errors reported by model construction, linear algebra and analysis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A raw parameter failed range validation.
    #[error("invalid config: {field} {reason}")]
    InvalidConfig {
        /// Name of the offending field.
        field: &'static str,
        /// Human-readable constraint, e.g. `out of (0, 1]`.
        reason: String,
    },

    /// The QR eigenvalue iteration failed to converge.
    #[error("eigenvalue iteration did not converge after {iterations} steps")]
    EigenNonConvergence {
        /// Total QR steps spent before giving up.
        iterations: usize,
    },

    /// The resolvent `iωI − A` is singular or numerically unusable.
    #[error("singular resolvent at omega = {omega} rad/s (1-norm condition estimate {cond:e})")]
    SingularResolvent {
        /// Frequency at which the solve was attempted.
        omega: f64,
        /// 1-norm condition estimate of the resolvent.
        cond: f64,
    },

    /// An operation requiring closed-loop stability was invoked on an
    /// unstable configuration.
    #[error("configuration is unstable (stability margin {margin})")]
    Unstable {
        /// Right-hand side of the stability inequality minus `x·y`.
        margin: f64,
    },

    /// No value of the channel phase half-difference yields entanglement:
    /// the spectra exceed the threshold even with optimal compensation.
    #[error("no EPR entanglement for any m: V_im(0) = {v_at_zero} >= 2")]
    NoEntanglement {
        /// Compensated spectra value at `m = 0`, the global minimum.
        v_at_zero: f64,
    },

    /// A sweep axis specification is unusable.
    #[error("invalid sweep axis: {0}")]
    InvalidAxis(String),
}
