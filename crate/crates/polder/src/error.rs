use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by model construction, tensor evaluation, integration,
/// and the shift engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Model or argument validation failed.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A level label does not exist in the atom model.
    #[error("unknown level label `{label}`")]
    UnknownLevel { label: String },

    /// A coupled level has exactly the reference energy, so the transition
    /// frequency vanishes and every response function is ill-defined.
    #[error("level `{label}` is exactly degenerate with the reference state")]
    DegenerateWithReference { label: String },

    /// A response-function denominator vanished exactly at the requested
    /// frequency. Off-pole evaluation is exact and needs no regulator, so a
    /// hit is reported instead of being smoothed over.
    #[error("polarizability pole hit at omega = {omega} (transition `{label}`)")]
    PoleHit { label: String, omega: Complex64 },

    /// A scalar reduction was requested for a reference state whose response
    /// tensor is not a multiple of the identity.
    #[error(
        "reference response is anisotropic (deviation {magnitude:.3e}); scalar reduction undefined"
    )]
    AnisotropicReference { magnitude: f64 },

    /// A pole-term denominator coincides with a transition of the partner
    /// atom (resonant energy transfer): the closed form diverges.
    #[error("resonant denominator: lower state `{lower}` against transition `{other}`")]
    Resonance { lower: String, other: String },

    /// A mixing-channel quantity was requested for a pair whose atoms are
    /// not exchange-degenerate.
    #[error("mixing terms are defined only for identical atom pairs")]
    NotIdentical,

    /// Adaptive integration stopped at the subdivision cap before reaching
    /// the requested tolerance. The best estimate is attached.
    #[error(
        "quadrature did not converge: estimate {value}, error {error:.3e} after {subdivisions} subdivisions"
    )]
    Convergence {
        value: Complex64,
        error: f64,
        subdivisions: u32,
    },

    /// The requested term/channel/range combination has no defined
    /// asymptotic form.
    #[error("no asymptotic form for selector: {0}")]
    InvalidSelector(String),
}

pub type Result<T> = std::result::Result<T, Error>;
