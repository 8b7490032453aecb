//! Propagation of the time-dependent Schroedinger equation for any
//! Hamiltonian source, plus an independent matrix-exponential oracle used to
//! cross-validate the adaptive integrator.

use num_complex::Complex;

use crate::config::{SimulationConfig, Tolerances};
use crate::hamiltonian::{bare_hamiltonian, BasisTag, HermitianMatrix};
use crate::linalg::{expm, vec_norm, CVec, C};
use crate::ode::{self, OdeOptions};
use crate::pulses::PulsePair;
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// Fewest uniform samples a trajectory may carry.
pub const MIN_SAMPLES: usize = 512;
/// Default uniform sample count; 1024 intervals keep the sample times exact
/// binary fractions of the span.
pub const DEFAULT_SAMPLES: usize = 1025;

/// Trajectory sampling controls.
#[derive(Clone, Copy, Debug)]
pub struct SampleOptions {
    /// Number of uniform sample points across the span, endpoints included.
    pub points: usize,
    /// Also record every accepted integrator step.
    pub include_steps: bool,
}

impl Default for SampleOptions {
    fn default() -> Self {
        SampleOptions {
            points: DEFAULT_SAMPLES,
            include_steps: false,
        }
    }
}

/// Normalized amplitudes in a declared basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantumState<T, const N: usize> {
    amplitudes: CVec<T, N>,
    basis: BasisTag,
}

impl<T: Real, const N: usize> QuantumState<T, N> {
    /// Wrap amplitudes whose norm is already 1 within `norm_tol`.
    pub fn new(amplitudes: CVec<T, N>, basis: BasisTag) -> Result<Self> {
        if basis.dim() != N {
            return Err(Error::InvalidParameter(format!(
                "basis {basis:?} needs {} amplitudes, got {N}",
                basis.dim()
            )));
        }
        let norm = vec_norm(&amplitudes);
        if !norm.is_finite() || (norm - T::one()).abs() > real(1e-6) {
            return Err(Error::NotNormalized(norm.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(QuantumState { amplitudes, basis })
    }

    /// The basis state with index `k` (zero-based).
    pub fn basis_state(basis: BasisTag, k: usize) -> Result<Self> {
        if basis.dim() != N || k >= N {
            return Err(Error::InvalidParameter(format!(
                "basis state {k} does not exist in {basis:?}"
            )));
        }
        let mut amplitudes = [Complex::new(T::zero(), T::zero()); N];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Ok(QuantumState { amplitudes, basis })
    }

    pub fn amplitudes(&self) -> &CVec<T, N> {
        &self.amplitudes
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn norm(&self) -> T {
        vec_norm(&self.amplitudes)
    }

    /// Squared moduli of the amplitudes, in basis order.
    pub fn populations(&self) -> [T; N] {
        std::array::from_fn(|k| self.amplitudes[k].norm_sqr())
    }

    /// Apply a matrix without renormalizing (callers keep unitarity).
    pub(crate) fn mapped(&self, m: &crate::linalg::CMat<T, N>, basis: BasisTag) -> Self {
        QuantumState {
            amplitudes: m.mul_vec(&self.amplitudes),
            basis,
        }
    }

    pub(crate) fn raw(amplitudes: CVec<T, N>, basis: BasisTag) -> Self {
        QuantumState { amplitudes, basis }
    }
}

/// Time-ordered samples of one propagation.
///
/// `times` is strictly increasing and lies within the integration span. The
/// mixing angle and effective Rabi frequency of the driving pulses are
/// stored per sample so dressed-state projections can be formed afterwards.
#[derive(Clone, Debug)]
pub struct Trajectory<T, const N: usize> {
    pub basis: BasisTag,
    pub times: Vec<T>,
    pub states: Vec<CVec<T, N>>,
    pub populations: Vec<[T; N]>,
    pub theta: Vec<T>,
    pub omega_eff: Vec<T>,
}

impl<T: Real, const N: usize> Trajectory<T, N> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest sampled population of level `k`.
    pub fn max_population(&self, k: usize) -> Result<T> {
        if self.is_empty() {
            return Err(Error::EmptyTrajectory);
        }
        Ok(self
            .populations
            .iter()
            .map(|p| p[k])
            .fold(T::neg_infinity(), T::max))
    }
}

/// Uniform grid over `[t0, t1]` with `points` entries, endpoints included.
pub fn uniform_grid<T: Real>(t0: T, t1: T, points: usize) -> Vec<T> {
    let steps = real::<T>((points - 1) as f64);
    (0..points)
        .map(|k| {
            if k + 1 == points {
                t1
            } else {
                t0 + (t1 - t0) * real::<T>(k as f64) / steps
            }
        })
        .collect()
}

/// Integrate `i dpsi/dt = H(t) psi` across `span` with adaptive error
/// control.
///
/// The returned trajectory holds at least [`MIN_SAMPLES`] uniform samples
/// (plus the accepted steps when requested). Norm drift beyond
/// `tolerances.norm_tol` aborts with a diagnostic; the state is never
/// renormalized. `pulses` supplies the per-sample mixing angle and effective
/// Rabi frequency.
pub fn propagate<T: Real, const N: usize, H>(
    h_source: H,
    psi0: &QuantumState<T, N>,
    span: (T, T),
    tolerances: &Tolerances<T>,
    options: &SampleOptions,
    pulses: &PulsePair<T>,
) -> Result<(QuantumState<T, N>, Trajectory<T, N>)>
where
    H: Fn(T) -> HermitianMatrix<T, N>,
{
    let (t0, t1) = span;
    if !(t0.is_finite() && t1.is_finite() && t0 < t1) {
        return Err(Error::InvalidParameter(
            "integration span must be finite with t_start < t_end".into(),
        ));
    }
    if options.points < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "trajectory needs at least {MIN_SAMPLES} uniform samples"
        )));
    }
    let drift0 = (psi0.norm() - T::one()).abs();
    if drift0 > tolerances.norm_tol.max(real(1e-9)) {
        return Err(Error::NotNormalized(psi0.norm().to_f64().unwrap_or(f64::NAN)));
    }

    let grid = uniform_grid(t0, t1, options.points);
    let opts = OdeOptions {
        rtol: tolerances.rtol,
        atol: tolerances.atol,
        norm_tol: tolerances.norm_tol,
        ..OdeOptions::default()
    };
    let sol = ode::solve(
        h_source,
        psi0.amplitudes(),
        t0,
        t1,
        &grid,
        options.include_steps,
        &opts,
    )?;

    let mut traj = Trajectory {
        basis: psi0.basis(),
        times: Vec::with_capacity(sol.times.len()),
        states: Vec::with_capacity(sol.times.len()),
        populations: Vec::with_capacity(sol.times.len()),
        theta: Vec::with_capacity(sol.times.len()),
        omega_eff: Vec::with_capacity(sol.times.len()),
    };
    for (t, state) in sol.times.iter().zip(sol.states.iter()) {
        traj.times.push(*t);
        traj.states.push(*state);
        traj.populations
            .push(std::array::from_fn(|k| state[k].norm_sqr()));
        traj.theta.push(pulses.mixing_angle(*t));
        traj.omega_eff.push(pulses.effective_rabi(*t));
    }
    let final_state = QuantumState::raw(sol.final_state, psi0.basis());
    Ok((final_state, traj))
}

/// Independent verification propagator: the exact matrix exponential of `H`
/// evaluated at each substep midpoint, piecewise constant in time.
///
/// Converges (second order in the step) to the true evolution and preserves
/// unitarity to rounding accuracy, so it cross-checks [`propagate`] through
/// an entirely different discretization.
pub fn propagate_oracle<T: Real, const N: usize, H>(
    h_source: H,
    psi0: &QuantumState<T, N>,
    span: (T, T),
    steps: usize,
) -> Result<QuantumState<T, N>>
where
    H: Fn(T) -> HermitianMatrix<T, N>,
{
    if steps == 0 {
        return Err(Error::InvalidParameter(
            "oracle needs at least one step".into(),
        ));
    }
    let (t0, t1) = span;
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::InvalidParameter(
            "integration span must be finite".into(),
        ));
    }
    let dt = (t1 - t0) / real::<T>(steps as f64);
    let minus_i_dt = Complex::new(T::zero(), -dt);
    let mut psi = *psi0.amplitudes();
    let half: T = real(0.5);
    for k in 0..steps {
        let t_mid = t0 + dt * (real::<T>(k as f64) + half);
        let step_u = expm(&h_source(t_mid).matrix().scale(minus_i_dt));
        psi = step_u.mul_vec(&psi);
    }
    Ok(QuantumState::raw(psi, psi0.basis()))
}

/// Standard run for a validated config: start in the bare ground level |1>
/// and integrate the bare-frame dynamics across the configured window.
pub fn simulate<T: Real>(
    cfg: &SimulationConfig<T>,
) -> Result<(QuantumState<T, 3>, Trajectory<T, 3>)> {
    simulate_sampled(cfg, &SampleOptions::default())
}

/// [`simulate`] with explicit sampling controls.
pub fn simulate_sampled<T: Real>(
    cfg: &SimulationConfig<T>,
    options: &SampleOptions,
) -> Result<(QuantumState<T, 3>, Trajectory<T, 3>)> {
    let cfg = cfg.validate()?;
    let psi0 = QuantumState::basis_state(BasisTag::Bare, 0)?;
    let pulses = cfg.pulses();
    propagate(
        |t| bare_hamiltonian(t, &cfg),
        &psi0,
        cfg.time_span(),
        &cfg.tolerances,
        options,
        &pulses,
    )
}

/// Two-level run of the reduced bright/intermediate model: start in the
/// bright state and integrate across the configured window.
pub fn simulate_lz<T: Real>(
    cfg: &SimulationConfig<T>,
) -> Result<(QuantumState<T, 2>, Trajectory<T, 2>)> {
    let cfg = cfg.validate()?;
    let psi0 = QuantumState::basis_state(BasisTag::Lz, 0)?;
    let pulses = cfg.pulses();
    propagate(
        |t| crate::hamiltonian::lz_hamiltonian(t, &cfg),
        &psi0,
        cfg.time_span(),
        &cfg.tolerances,
        &SampleOptions::default(),
        &pulses,
    )
}
