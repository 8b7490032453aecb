//! Observables and diagnostics: populations, dark/bright decomposition,
//! crossing times, adiabaticity and decoupling conditions, the closed-form
//! Landau-Zener transfer estimate and momentum-kick bookkeeping.

use crate::config::SimulationConfig;
use crate::hamiltonian::BasisTag;
use crate::linalg::eigvals_hermitian2;
use crate::propagator::{uniform_grid, QuantumState, Trajectory, DEFAULT_SAMPLES};
use crate::pulses::PulsePair;
use crate::scalar::{real, Real};
use crate::{Error, Result};

/// Ratio below which a "much smaller than" condition counts as satisfied,
/// and (reciprocally) the factor a "much greater than" margin must reach.
const SMALLNESS: f64 = 0.1;

/// Bare-basis populations `(P1, P2, P3)`.
pub fn populations<T: Real>(psi: &QuantumState<T, 3>) -> Result<[T; 3]> {
    if psi.basis() != BasisTag::Bare {
        return Err(Error::BasisMismatch {
            expected: BasisTag::Bare,
            found: psi.basis(),
        });
    }
    Ok(psi.populations())
}

/// Project a bare-basis state onto the dressed basis at mixing angle
/// `theta`: returns `(<D|psi>, <2|psi>, <B|psi>)`.
pub fn decompose_dark_bright<T: Real>(
    psi: &QuantumState<T, 3>,
    theta: T,
) -> Result<(crate::linalg::C<T>, crate::linalg::C<T>, crate::linalg::C<T>)> {
    if psi.basis() != BasisTag::Bare {
        return Err(Error::BasisMismatch {
            expected: BasisTag::Bare,
            found: psi.basis(),
        });
    }
    let (sin, cos) = theta.sin_cos();
    let a = psi.amplitudes();
    let dark = a[0] * cos - a[2] * sin;
    let bright = a[0] * sin + a[2] * cos;
    Ok((dark, a[1], bright))
}

/// Largest sampled population of the intermediate level along a bare-basis
/// trajectory.
pub fn max_intermediate_population<T: Real>(traj: &Trajectory<T, 3>) -> Result<T> {
    if traj.basis != BasisTag::Bare {
        return Err(Error::BasisMismatch {
            expected: BasisTag::Bare,
            found: traj.basis,
        });
    }
    traj.max_population(1)
}

/// Cosine of twice the mixing angle at the bright/intermediate crossing,
/// `(1 + detuning) / 2q`, or [`Error::NoCrossing`] when the momentum does
/// not exceed half the detuning-shifted recoil.
fn crossing_cosine<T: Real>(cfg: &SimulationConfig<T>) -> Result<T> {
    let shifted_recoil = T::one() + cfg.detuning;
    let two_q = real::<T>(2.0) * cfg.q;
    if !(two_q > shifted_recoil.abs()) {
        return Err(Error::NoCrossing);
    }
    Ok(shifted_recoil / two_q)
}

/// All times in the configured window where the bright level crosses the
/// intermediate level, i.e. `cos(2 theta(t))` reaches the crossing value.
///
/// Found by bracketed bisection on the analytic mixing angle; the residual
/// of each returned root satisfies the configured root tolerance. An empty
/// list means the crossing angle is never reached inside the window (for
/// coincident pulses the angle is constant, so there is never a crossing).
pub fn crossing_times<T: Real>(cfg: &SimulationConfig<T>) -> Result<Vec<T>> {
    let cfg = cfg.validate()?;
    let target = crossing_cosine(&cfg)?;
    let pulses = cfg.pulses();
    if cfg.delay == T::zero() {
        return Ok(Vec::new());
    }
    let gap = |t: T| (real::<T>(2.0) * pulses.mixing_angle(t)).cos() - target;

    let (t0, t1) = cfg.time_span();
    let grid = uniform_grid(t0, t1, DEFAULT_SAMPLES);
    let mut roots: Vec<T> = Vec::new();
    let mut push_root = |t: T, roots: &mut Vec<T>| {
        let tol = cfg.tolerances.root_tol;
        if roots.last().map_or(true, |last| (t - *last).abs() > tol) {
            roots.push(t);
        }
    };
    let mut prev_t = grid[0];
    let mut prev_g = gap(prev_t);
    if prev_g == T::zero() {
        push_root(prev_t, &mut roots);
    }
    for &t in &grid[1..] {
        let g = gap(t);
        if g == T::zero() {
            push_root(t, &mut roots);
        } else if prev_g != T::zero() && (prev_g > T::zero()) != (g > T::zero()) {
            let mut lo = prev_t;
            let mut hi = t;
            let mut g_lo = prev_g;
            for _ in 0..200 {
                let mid = (lo + hi) * real(0.5);
                if mid <= lo || mid >= hi {
                    break;
                }
                let g_mid = gap(mid);
                if g_mid == T::zero() {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (g_mid > T::zero()) == (g_lo > T::zero()) {
                    lo = mid;
                    g_lo = g_mid;
                } else {
                    hi = mid;
                }
            }
            push_root((lo + hi) * real(0.5), &mut roots);
        }
        prev_t = t;
        prev_g = g;
    }
    Ok(roots)
}

/// Closed-form Landau-Zener estimate of the bright-to-intermediate transfer
/// probability, `1 - exp(-2 pi Gamma)` with
/// `Gamma = (Omega_eff(t*)/2)^2 / |d/dt (bright level)|` at the crossing.
///
/// The sweep rate uses the analytic mixing-angle rate, avoiding numerical
/// differentiation noise at the crossing.
pub fn lz_transition_probability<T: Real>(cfg: &SimulationConfig<T>) -> Result<T> {
    let cfg = cfg.validate()?;
    let crossings = crossing_times(&cfg)?;
    let t_star = *crossings.first().ok_or(Error::NoCrossing)?;
    let pulses = cfg.pulses();
    let coupling = pulses.effective_rabi(t_star) * real::<T>(0.5);
    if coupling == T::zero() {
        return Ok(T::zero());
    }
    let theta = pulses.mixing_angle(t_star);
    let sin2 = (theta + theta).sin();
    let slope =
        (real::<T>(4.0) * cfg.q * sin2 * pulses.mixing_angle_rate(t_star)).abs();
    if slope == T::zero() {
        return Ok(T::one());
    }
    let gamma = coupling * coupling / slope;
    Ok(T::one() - (-real::<T>(2.0) * T::PI() * gamma).exp())
}

/// Net photon momentum transferred, in units of `hbar k`, as an expectation
/// over final bare populations: ending in |3> carries two photon kicks,
/// the intermediate level one, the initial level none.
pub fn momentum_kick<T: Real>(populations: [T; 3]) -> Result<T> {
    let sum: T = populations.iter().copied().sum();
    if (sum - T::one()).abs() > real(1e-6) {
        return Err(Error::NotNormalized(sum.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(real::<T>(2.0) * populations[2] + populations[1])
}

/// Pass/fail flag for one condition together with its worst-case value.
#[derive(Clone, Copy, Debug)]
pub struct ConditionSummary<T> {
    /// Worst value of the monitored ratio or margin over the window.
    pub worst: T,
    pub satisfied: bool,
}

/// Time series and scalar summaries of every adiabaticity and decoupling
/// condition of the dressed-state picture.
///
/// All ratio series are nonnegative and must stay small for the associated
/// approximation to hold; ratios with vanishing denominators are reported as
/// infinite and flagged. The spectral gap `delta` is the distance of the
/// dark-level energy `2q cos(2 theta)` from the nearer eigenvalue of the
/// 2x2 bright/intermediate block.
#[derive(Clone, Debug)]
pub struct DiagnosticsReport<T> {
    pub times: Vec<T>,
    /// `|dtheta/dt| / Omega_eff`, the adiabaticity ratio.
    pub adiabaticity: Vec<T>,
    /// `2q sin(2 theta) / delta`, the dark-state decoupling ratio.
    pub decoupling: Vec<T>,
    /// `2q sin(2 theta) / Omega_eff`, the large-area condition.
    pub large_area: Vec<T>,
    /// `max(1/T, 2q sin(2 theta)) / Omega_eff`, the combined sufficient
    /// condition.
    pub sufficient: Vec<T>,
    /// Whether the dark level lies between the two bright-block eigenvalues
    /// at each sample (a side assumption of the decoupling argument).
    pub side_condition: Vec<bool>,
    pub adiabaticity_summary: ConditionSummary<T>,
    pub decoupling_summary: ConditionSummary<T>,
    pub large_area_summary: ConditionSummary<T>,
    pub sufficient_summary: ConditionSummary<T>,
    /// Dimensionless adiabatic-return margin: the pulse width in recoil
    /// units, which must be large for the bright state to return.
    pub adiabatic_return_margin: T,
    pub adiabatic_return_satisfied: bool,
    /// The decoupling argument also assumes positive momentum.
    pub momentum_positive: bool,
    /// Fraction of samples where the side condition holds.
    pub side_condition_fraction: T,
    /// Crossing times inside the window, empty when there are none.
    pub crossings: Vec<T>,
}

fn summarize_ratio<T: Real>(series: &[T]) -> ConditionSummary<T> {
    let worst = series
        .iter()
        .copied()
        .fold(T::zero(), |acc, v| if v > acc { v } else { acc });
    ConditionSummary {
        worst,
        satisfied: worst.is_finite() && worst <= real(SMALLNESS),
    }
}

/// Evaluate every condition series on the default uniform grid of the
/// configured window.
pub fn adiabaticity_report<T: Real>(cfg: &SimulationConfig<T>) -> Result<DiagnosticsReport<T>> {
    let cfg = cfg.validate()?;
    let pulses: PulsePair<T> = cfg.pulses();
    let (t0, t1) = cfg.time_span();
    let times = uniform_grid(t0, t1, DEFAULT_SAMPLES);
    let two_q = real::<T>(2.0) * cfg.q;
    let inv_width = pulses.pulse_width.recip();

    let n = times.len();
    let mut adiabaticity = Vec::with_capacity(n);
    let mut decoupling = Vec::with_capacity(n);
    let mut large_area = Vec::with_capacity(n);
    let mut sufficient = Vec::with_capacity(n);
    let mut side_condition = Vec::with_capacity(n);

    let ratio = |num: T, den: T| {
        if den == T::zero() {
            if num == T::zero() {
                T::zero()
            } else {
                T::infinity()
            }
        } else {
            num / den
        }
    };

    for &t in &times {
        let theta = pulses.mixing_angle(t);
        let two_theta = theta + theta;
        let (sin2, cos2) = two_theta.sin_cos();
        let omega_eff = pulses.effective_rabi(t);
        let rate = pulses.mixing_angle_rate(t).abs();
        let dark_energy = two_q * cos2;
        let mixing = (two_q * sin2).abs();

        let (mu_lo, mu_hi) = eigvals_hermitian2(
            -dark_energy,
            -(T::one() + cfg.detuning),
            omega_eff * real(0.5),
        );
        let delta = (dark_energy - mu_lo).abs().min((dark_energy - mu_hi).abs());

        adiabaticity.push(ratio(rate, omega_eff));
        decoupling.push(ratio(mixing, delta));
        large_area.push(ratio(mixing, omega_eff));
        sufficient.push(ratio(inv_width.max(mixing), omega_eff));
        side_condition.push(mu_lo < dark_energy && dark_energy < mu_hi);
    }

    let held = side_condition.iter().filter(|ok| **ok).count();
    let margin = pulses.pulse_width;
    let crossings = match crossing_times(&cfg) {
        Ok(list) => list,
        Err(Error::NoCrossing) => Vec::new(),
        Err(other) => return Err(other),
    };

    Ok(DiagnosticsReport {
        adiabaticity_summary: summarize_ratio(&adiabaticity),
        decoupling_summary: summarize_ratio(&decoupling),
        large_area_summary: summarize_ratio(&large_area),
        sufficient_summary: summarize_ratio(&sufficient),
        adiabatic_return_margin: margin,
        adiabatic_return_satisfied: margin >= real::<T>(SMALLNESS).recip(),
        momentum_positive: cfg.q > T::zero(),
        side_condition_fraction: real::<T>(held as f64) / real(n as f64),
        times,
        adiabaticity,
        decoupling,
        large_area,
        sufficient,
        side_condition,
        crossings,
    })
}
