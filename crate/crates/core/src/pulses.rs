//! Gaussian pump/Stokes envelopes, the mixing angle, its time derivative and
//! the effective Rabi frequency.
//!
//! Both envelopes share the peak `omega0` and width `pulse_width`; the pump
//! is centered at `+delay`, the Stokes at `-delay`:
//!
//! ```text
//!     Omega_P(t) = omega0 * exp(-((t - delay) / pulse_width)^2)
//!     Omega_S(t) = omega0 * exp(-((t + delay) / pulse_width)^2)
//! ```
//!
//! The mixing angle obeys `tan(theta) = Omega_P / Omega_S`, which for this
//! Gaussian pair reduces to `tan(theta) = exp(4 delay t / pulse_width^2)`:
//! monotone in `t`, running 0 -> pi/2 for positive delay. Its closed-form
//! rate is `dtheta/dt = (2 delay / width^2) / cosh(4 delay t / width^2)`.

use crate::scalar::{real, Real};

/// Ratio below which both envelopes count as underflowed relative to the
/// peak, switching the mixing angle to its analytic form.
const ENVELOPE_FLOOR: f64 = 1e-30;

/// Equal-amplitude, equal-width Gaussian pump/Stokes pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulsePair<T> {
    /// Shared peak Rabi frequency, `>= 0`.
    pub omega0: T,
    /// Shared Gaussian width, `> 0`.
    pub pulse_width: T,
    /// Pump center `+delay`, Stokes center `-delay`.
    pub delay: T,
}

impl<T: Real> PulsePair<T> {
    /// Pump envelope at time `t`.
    pub fn pump(&self, t: T) -> T {
        let arg = (t - self.delay) / self.pulse_width;
        self.omega0 * (-arg * arg).exp()
    }

    /// Stokes envelope at time `t`.
    pub fn stokes(&self, t: T) -> T {
        let arg = (t + self.delay) / self.pulse_width;
        self.omega0 * (-arg * arg).exp()
    }

    /// Exponent of the envelope ratio: `tan(theta) = exp(log_tan(t))`.
    fn log_tan(&self, t: T) -> T {
        real::<T>(4.0) * self.delay * t / (self.pulse_width * self.pulse_width)
    }

    /// Mixing angle at time `t`, in `[0, pi/2]`.
    ///
    /// Where both envelopes have underflowed relative to the peak the angle
    /// is evaluated from the analytic envelope ratio, which stays well
    /// defined far outside the pulses; the envelopes themselves are never
    /// altered.
    pub fn mixing_angle(&self, t: T) -> T {
        let pump = self.pump(t);
        let stokes = self.stokes(t);
        let floor = real::<T>(ENVELOPE_FLOOR) * self.omega0;
        if pump < floor && stokes < floor {
            self.log_tan(t).exp().atan()
        } else {
            mixing_angle(pump, stokes)
        }
    }

    /// Closed-form `dtheta/dt` of the Gaussian pair.
    pub fn mixing_angle_rate(&self, t: T) -> T {
        let width_sq = self.pulse_width * self.pulse_width;
        let peak = real::<T>(2.0) * self.delay / width_sq;
        peak / self.log_tan(t).cosh()
    }

    /// Effective Rabi frequency at time `t`.
    pub fn effective_rabi(&self, t: T) -> T {
        effective_rabi(self.pump(t), self.stokes(t))
    }
}

/// Mixing angle from a pair of envelope values: the two-argument arctangent
/// of `(pump, stokes)`. Both zero yields 0 rather than an error.
pub fn mixing_angle<T: Real>(pump: T, stokes: T) -> T {
    pump.atan2(stokes)
}

/// Euclidean norm of the two envelope values.
pub fn effective_rabi<T: Real>(pump: T, stokes: T) -> T {
    pump.hypot(stokes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn pair(omega0: f64, width: f64, delay: f64) -> PulsePair<f64> {
        PulsePair {
            omega0,
            pulse_width: width,
            delay,
        }
    }

    #[test]
    fn pump_analytic_values() {
        let p = pair(10.0, 10.0, 7.0);
        assert_eq!(p.pump(7.0), 10.0);
        assert!((p.pump(7.0 + 10.0) - 10.0 * (-1.0f64).exp()).abs() < 1e-12);
        assert!((p.pump(7.0 - 20.0) - 10.0 * (-4.0f64).exp()).abs() < 1e-12);
        // 10 e^-1 = 3.678794..., 10 e^-4 = 0.183156...
        assert!((p.pump(17.0) - 3.6787944117144233).abs() < 1e-12);
        assert!((p.pump(-13.0) - 0.18315638888734179).abs() < 1e-12);
    }

    #[test]
    fn stokes_peaks_at_minus_delay() {
        let p = pair(5.0, 3.0, 4.0);
        assert_eq!(p.stokes(-4.0), 5.0);
        let q = pair(5.0, 3.0, 3.0);
        assert!((q.stokes(0.0) - 5.0 * (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn mixing_angle_special_points() {
        assert_eq!(mixing_angle(0.0, 5.0), 0.0);
        assert!((mixing_angle(5.0, 5.0) - FRAC_PI_4).abs() < 1e-15);
        assert!((mixing_angle(5.0, 0.0) - FRAC_PI_2).abs() < 1e-15);
        assert_eq!(mixing_angle(0.0, 0.0), 0.0);
    }

    #[test]
    fn rate_closed_form_peak() {
        let p = pair(10.0, 10.0, 10.0);
        assert!((p.mixing_angle_rate(0.0) - 0.2).abs() < 1e-15);
        // coincident pulses never rotate the angle
        let q = pair(10.0, 10.0, 0.0);
        for t in [-30.0, -1.0, 0.0, 2.5, 40.0] {
            assert_eq!(q.mixing_angle_rate(t), 0.0);
            assert!((q.mixing_angle(t) - FRAC_PI_4).abs() < 1e-15);
        }
        // cosh divergence kills the rate far outside the pulses
        assert!(p.mixing_angle_rate(1e4).abs() < 1e-100);
    }

    #[test]
    fn effective_rabi_values() {
        assert_eq!(effective_rabi(3.0, 4.0), 5.0);
        assert_eq!(effective_rabi(0.0, 0.0), 0.0);
        let p = pair(10.0, 10.0, 10.0);
        // sqrt(2) * 10 * e^-1 at the midpoint of tau = T pulses
        assert!((p.effective_rabi(0.0) - 5.202600950228889).abs() < 1e-12);
    }

    #[test]
    fn angle_fallback_is_smooth_far_out() {
        // at |t| ~ 30 widths the envelopes underflow f64 but the ratio is fine
        let p = pair(10.0, 1.0, 1.0);
        let t = -300.0;
        assert_eq!(p.pump(t), 0.0);
        assert_eq!(p.stokes(t), 0.0);
        let th = p.mixing_angle(t);
        assert!((th - (4.0 * t).exp().atan()).abs() < 1e-18);
        // and the limit values are exact
        assert_eq!(p.mixing_angle(-1e6), 0.0);
        assert!((p.mixing_angle(1e6) - FRAC_PI_2).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn envelope_quadrature_identity(
            t in -60.0..60.0f64,
            omega0 in 0.0..50.0f64,
            width in 0.5..20.0f64,
            delay in -30.0..30.0f64,
        ) {
            let p = pair(omega0, width, delay);
            let lhs = p.pump(t).powi(2) + p.stokes(t).powi(2);
            let rhs = p.effective_rabi(t).powi(2);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn stokes_is_time_reversed_pump(
            t in -60.0..60.0f64,
            width in 0.5..20.0f64,
            delay in -30.0..30.0f64,
        ) {
            let p = pair(3.0, width, delay);
            prop_assert!((p.stokes(t) - p.pump(-t)).abs() < 1e-14);
        }

        #[test]
        fn angle_monotone_with_positive_delay(
            t1 in -50.0..50.0f64,
            dt in 0.001..10.0f64,
            width in 1.0..20.0f64,
            delay in 0.01..20.0f64,
        ) {
            let p = pair(1.0, width, delay);
            prop_assert!(p.mixing_angle(t1 + dt) >= p.mixing_angle(t1));
            let n = pair(1.0, width, -delay);
            prop_assert!(n.mixing_angle(t1 + dt) <= n.mixing_angle(t1));
        }

        #[test]
        fn rate_matches_central_difference(
            t in -12.0..12.0f64,
            width in 2.0..20.0f64,
            delay_frac in -2.0..2.0f64,
        ) {
            // keep 4*delay/width^2 moderate so the finite difference is
            // well conditioned; h = 1e-2 puts the rounding noise well below
            // the 10 h^2 bound
            let delay = delay_frac * width;
            let p = pair(1.0, width, delay);
            let h = 1e-2;
            let fd = (p.mixing_angle(t + h) - p.mixing_angle(t - h)) / (2.0 * h);
            let rate = p.mixing_angle_rate(t);
            let tol = 10.0 * h * h * rate.abs().max(1e-8);
            prop_assert!((rate - fd).abs() <= tol,
                "rate {} vs fd {} (tol {})", rate, fd, tol);
        }
    }
}
