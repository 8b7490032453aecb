//! Adiabatic population transfer in a driven three-level lambda atom,
//! including the photon recoil and the Doppler shift of a moving atom.
//!
//! A lambda atom (lower levels |1>, |3>, excited level |2>) crosses two
//! counterpropagating, spatially delayed laser beams. In the frame where the
//! field phases have been gauged away, the atom's momentum projection onto
//! the beams enters as a real parameter and the Hamiltonian becomes a 3x3
//! matrix. Everything here is dimensionless: energies in units of the recoil
//! frequency `w_r = hbar k^2 / 2M`, time in `1/w_r`, momentum in `hbar k`:
//!
//! ```text
//!         [ 2q           Omega_P/2          0         ]
//!     H = [ Omega_P/2   -(1 + Delta)    Omega_S/2     ]
//!         [ 0            Omega_S/2        -2q         ]
//! ```
//!
//! with `q` the momentum, `Delta` the single-photon detuning and Gaussian
//! pump/Stokes envelopes centered at `+tau` and `-tau` (positive delay means
//! Stokes before pump, the counterintuitive STIRAP ordering).
//!
//! The crate provides
//! - validated dimensionless parameters and a flat key/value config format
//!   ([`config`]),
//! - pulse envelopes, the mixing angle and its rate ([`pulses`]),
//! - the bare, dark/bright and two-level Landau-Zener Hamiltonians
//!   ([`hamiltonian`]),
//! - an adaptive Runge-Kutta propagator for the time-dependent Schroedinger
//!   equation plus an independent matrix-exponential oracle ([`propagator`]),
//! - observables and adiabaticity diagnostics ([`analysis`]),
//! - parameter sweeps over delay, pulse area and momentum ([`sweeps`]),
//! - a CSV-emitting command line interface ([`cli`]).
//!
//! All core math is generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the aliases at the crate root fix `f64` for ordinary
//! use.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod hamiltonian;
pub mod linalg;
pub mod ode;
pub mod output;
pub mod propagator;
pub mod pulses;
pub mod scalar;
pub mod sweeps;

pub use config::{momentum_from_geometry, SimulationConfig, Tolerances};
pub use hamiltonian::BasisTag;
pub use propagator::{QuantumState, SampleOptions, Trajectory};
pub use scalar::Real;

use hamiltonian::HermitianMatrix;

/// Errors shared by all modules.
///
/// Scalar payloads are stored as `f64` regardless of the working precision so
/// the type stays non-generic.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A parameter record violated one of its invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A config file or override could not be parsed.
    #[error("config error: {0}")]
    Config(String),
    /// A config file or `--set` override used a key that does not exist.
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    /// A state or trajectory was given in the wrong basis.
    #[error("basis mismatch: expected {expected:?}, got {found:?}")]
    BasisMismatch { expected: BasisTag, found: BasisTag },
    /// The bright/intermediate crossing does not exist for these parameters
    /// (the momentum must exceed half the detuning-shifted recoil).
    #[error("no bright/intermediate crossing: requires 2q > 1 + detuning")]
    NoCrossing,
    /// The adaptive integrator was forced below the representable step size.
    #[error("step size underflow at t = {t:.6e} (h = {h:.3e})")]
    StepSizeUnderflow { t: f64, h: f64 },
    /// The integrator exceeded its step budget before reaching the end.
    #[error("step budget of {max_steps} exhausted at t = {t:.6e}")]
    StepBudget { t: f64, max_steps: usize },
    /// The state norm drifted beyond the configured bound. Norm drift is
    /// measured, never corrected, so this indicates an integration fault.
    #[error("norm drift {drift:.3e} exceeds tolerance {tol:.3e} at t = {t:.6e}")]
    NormDrift { t: f64, drift: f64, tol: f64 },
    /// An observable was requested from an empty trajectory.
    #[error("empty trajectory")]
    EmptyTrajectory,
    /// Populations that should sum to one do not.
    #[error("populations not normalized (sum = {0:.9e})")]
    NotNormalized(f64),
    /// A sweep aborted because one grid point failed.
    #[error("sweep failed at {parameter} = {value:.9e}: {source}")]
    SweepPoint {
        parameter: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to: 1 for validation
    /// problems, 2 for runtime (integration or output) failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter(_)
            | Error::Config(_)
            | Error::UnknownKey(_)
            | Error::BasisMismatch { .. }
            | Error::NotNormalized(_)
            | Error::NoCrossing
            | Error::EmptyTrajectory => 1,
            Error::StepSizeUnderflow { .. }
            | Error::StepBudget { .. }
            | Error::NormDrift { .. }
            | Error::Io(_) => 2,
            Error::SweepPoint { source, .. } => source.exit_code(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Complex double, the default amplitude type.
pub type C64 = num_complex::Complex<f64>;

/// `f64` simulation parameters.
pub type Config64 = SimulationConfig<f64>;
/// `f64` pulse pair.
pub type PulsePair64 = pulses::PulsePair<f64>;
/// `f64` three-level state.
pub type State64 = QuantumState<f64, 3>;
/// `f64` two-level state for the reduced bright/intermediate model.
pub type LzState64 = QuantumState<f64, 2>;
/// `f64` three-level trajectory.
pub type Trajectory64 = Trajectory<f64, 3>;
/// `f64` 3x3 Hermitian matrix.
pub type HermitianMatrix3 = HermitianMatrix<f64, 3>;
/// `f64` 2x2 Hermitian matrix.
pub type HermitianMatrix2 = HermitianMatrix<f64, 2>;
/// `f64` diagnostics report.
pub type DiagnosticsReport64 = analysis::DiagnosticsReport<f64>;
/// `f64` sweep result.
pub type SweepResult64 = sweeps::SweepResult<f64>;
