//! The three Hamiltonian representations of the driven lambda system.
//!
//! All matrices are dimensionless (units of the recoil frequency). Basis
//! orderings:
//! - bare: `(|1>, |2>, |3>)`,
//! - dark/bright: `(|D>, |2>, |B>)` with `|D> = cos(theta)|1> - sin(theta)|3>`
//!   and `|B> = sin(theta)|1> + cos(theta)|3>`,
//! - the two-level Landau-Zener reduction: `(|B>, |2>)`.
//!
//! The Rabi envelopes are real and nonnegative, so every bare coupling is
//! real symmetric. The detuning enters solely through the replacement
//! `1 -> 1 + detuning` on the intermediate level.

use num_complex::Complex;

use crate::config::SimulationConfig;
use crate::linalg::{CMat, CVec, C};
use crate::scalar::{real, Real};

/// Basis a state or trajectory is expressed in. Every state carries exactly
/// one tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisTag {
    /// Bare atomic levels `(|1>, |2>, |3>)`.
    Bare,
    /// Field-dressed `(|D>, |2>, |B>)`.
    DarkBright,
    /// Reduced two-level `(|B>, |2>)`.
    Lz,
}

impl BasisTag {
    pub fn dim(self) -> usize {
        match self {
            BasisTag::Bare | BasisTag::DarkBright => 3,
            BasisTag::Lz => 2,
        }
    }
}

/// `N x N` Hermitian matrix.
///
/// Construction symmetrizes the rounding-level antihermitian residue of its
/// input, so `entry(i, j) == conj(entry(j, i))` holds exactly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermitianMatrix<T, const N: usize>(CMat<T, N>);

impl<T: Real, const N: usize> HermitianMatrix<T, N> {
    pub fn new(m: CMat<T, N>) -> Self {
        let mut h = CMat::zeros();
        let half = real::<T>(0.5);
        for i in 0..N {
            for j in 0..N {
                h[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * Complex::new(half, T::zero());
            }
        }
        HermitianMatrix(h)
    }

    pub fn matrix(&self) -> &CMat<T, N> {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> C<T> {
        self.0[(i, j)]
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [T; N] {
        crate::linalg::eigvals_hermitian(&self.0)
    }

    pub fn mul_vec(&self, v: &CVec<T, N>) -> CVec<T, N> {
        self.0.mul_vec(v)
    }
}

fn re<T: Real>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}

/// Bare-basis Hamiltonian: diagonal `(2q, -(1 + detuning), -2q)` with the
/// pump coupling `|1> <-> |2>` and the Stokes coupling `|3> <-> |2>`, each
/// with strength `Omega/2`.
pub fn bare_hamiltonian<T: Real>(t: T, cfg: &SimulationConfig<T>) -> HermitianMatrix<T, 3> {
    let pulses = cfg.pulses();
    let two_q = real::<T>(2.0) * cfg.q;
    let half = real::<T>(0.5);
    let mut m = CMat::zeros();
    m[(0, 0)] = re(two_q);
    m[(1, 1)] = re(-(T::one() + cfg.detuning));
    m[(2, 2)] = re(-two_q);
    let pump = re(half * pulses.pump(t));
    let stokes = re(half * pulses.stokes(t));
    m[(0, 1)] = pump;
    m[(1, 0)] = pump;
    m[(1, 2)] = stokes;
    m[(2, 1)] = stokes;
    HermitianMatrix::new(m)
}

/// Orthogonal map from bare to dark/bright coordinates; rows are
/// `<D|, <2|, <B|` in the bare basis.
pub fn dark_bright_transform<T: Real>(theta: T) -> CMat<T, 3> {
    let (sin, cos) = theta.sin_cos();
    let mut u = CMat::zeros();
    u[(0, 0)] = re(cos);
    u[(0, 2)] = re(-sin);
    u[(1, 1)] = re(T::one());
    u[(2, 0)] = re(sin);
    u[(2, 2)] = re(cos);
    u
}

/// Derivative of [`dark_bright_transform`] with respect to the mixing angle.
fn dark_bright_transform_dtheta<T: Real>(theta: T) -> CMat<T, 3> {
    let (sin, cos) = theta.sin_cos();
    let mut u = CMat::zeros();
    u[(0, 0)] = re(-sin);
    u[(0, 2)] = re(-cos);
    u[(2, 0)] = re(cos);
    u[(2, 2)] = re(-sin);
    u
}

/// The rotating-frame term `i (dU/dt) U^T` that makes dark/bright-frame
/// propagation exactly equivalent to the bare frame.
///
/// Built operationally from the transform and its derivative rather than
/// from a hand-derived sign; the result is antisymmetrized before the factor
/// `i` so it is Hermitian to rounding accuracy.
pub fn rotating_frame_term<T: Real>(t: T, cfg: &SimulationConfig<T>) -> CMat<T, 3> {
    let pulses = cfg.pulses();
    let theta = pulses.mixing_angle(t);
    let rate = pulses.mixing_angle_rate(t);
    let u = dark_bright_transform(theta);
    let du = dark_bright_transform_dtheta(theta).scale(re(rate));
    let w = du.mul(&u.transpose());
    let anti = w.sub(&w.transpose()).scale(re(real(0.5)));
    anti.scale(Complex::new(T::zero(), T::one()))
}

/// Dark/bright-basis Hamiltonian in the ordering `(|D>, |2>, |B>)`.
///
/// Without the flag this is the orthogonally transformed bare Hamiltonian:
/// `2q cos(2 theta)` on the dark state, `2q sin(2 theta)` coupling dark to
/// bright, and the bright/intermediate block with `Omega_eff / 2` coupling.
/// With `include_nonadiabatic` the exact rotating-frame term is added, so
/// propagation in this frame is unitarily equivalent to the bare frame.
pub fn darkbright_hamiltonian<T: Real>(
    t: T,
    cfg: &SimulationConfig<T>,
    include_nonadiabatic: bool,
) -> HermitianMatrix<T, 3> {
    let pulses = cfg.pulses();
    let theta = pulses.mixing_angle(t);
    let two_theta = theta + theta;
    let (sin2, cos2) = two_theta.sin_cos();
    let two_q = real::<T>(2.0) * cfg.q;
    let half = real::<T>(0.5);

    let mut m = CMat::zeros();
    m[(0, 0)] = re(two_q * cos2);
    m[(0, 2)] = re(two_q * sin2);
    m[(2, 0)] = re(two_q * sin2);
    m[(1, 1)] = re(-(T::one() + cfg.detuning));
    m[(2, 2)] = re(-two_q * cos2);
    let coupling = re(half * pulses.effective_rabi(t));
    m[(1, 2)] = coupling;
    m[(2, 1)] = coupling;
    if include_nonadiabatic {
        m = m.add(&rotating_frame_term(t, cfg));
    }
    HermitianMatrix::new(m)
}

/// Two-level Landau-Zener reduction in the ordering `(|B>, |2>)`, obtained
/// by dropping the dark state and shifting the intermediate level to zero:
/// diagonal `((1 + detuning) - 2q cos(2 theta), 0)` with `Omega_eff / 2`
/// coupling. The bright level crosses zero where `2q cos(2 theta)` equals
/// the detuning-shifted recoil.
pub fn lz_hamiltonian<T: Real>(t: T, cfg: &SimulationConfig<T>) -> HermitianMatrix<T, 2> {
    let pulses = cfg.pulses();
    let theta = pulses.mixing_angle(t);
    let cos2 = (theta + theta).cos();
    let two_q = real::<T>(2.0) * cfg.q;
    let half = real::<T>(0.5);
    let mut m = CMat::zeros();
    m[(0, 0)] = re(T::one() + cfg.detuning - two_q * cos2);
    let coupling = re(half * pulses.effective_rabi(t));
    m[(0, 1)] = coupling;
    m[(1, 0)] = coupling;
    HermitianMatrix::new(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg(q: f64, omega0: f64, width: f64, delay: f64) -> SimulationConfig<f64> {
        SimulationConfig::new(q, omega0, width, delay)
    }

    #[test]
    fn bare_diagonal_without_fields() {
        let c = cfg(0.0, 0.0, 10.0, 10.0);
        let h = bare_hamiltonian(0.0, &c);
        let expect = CMat::from_real_diag([0.0, -1.0, 0.0]);
        assert!(h.matrix().max_abs_diff(&expect) < 1e-15);

        let c = cfg(10.0, 0.0, 10.0, 10.0);
        let h = bare_hamiltonian(0.0, &c);
        let expect = CMat::from_real_diag([20.0, -1.0, -20.0]);
        assert!(h.matrix().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn detuning_shifts_only_the_intermediate_level() {
        let mut c = cfg(1.0, 2.0, 10.0, 5.0);
        c.detuning = 0.25;
        let h = bare_hamiltonian(1.0, &c);
        assert_eq!(h.entry(1, 1).re, -1.25);
        assert_eq!(h.entry(0, 0).re, 2.0);
    }

    #[test]
    fn coincident_pulses_make_the_frames_agree() {
        // delay 0 keeps theta constant, so the rotating term vanishes
        let c = cfg(3.0, 8.0, 5.0, 0.0);
        for t in [-7.0, 0.0, 2.5] {
            let plain = darkbright_hamiltonian(t, &c, false);
            let flagged = darkbright_hamiltonian(t, &c, true);
            assert!(plain.matrix().max_abs_diff(flagged.matrix()) < 1e-15);
        }
    }

    #[test]
    fn darkbright_equals_bare_at_zero_mixing_angle() {
        // far before both pulses theta is ~1e-16 while Stokes is at peak
        let c = cfg(2.0, 10.0, 10.0, 30.0);
        let t = -30.0;
        let theta = c.pulses().mixing_angle(t);
        assert!(theta < 1e-14);
        let db = darkbright_hamiltonian(t, &c, false);
        let bare = bare_hamiltonian(t, &c);
        assert!(db.matrix().max_abs_diff(bare.matrix()) < 1e-12);
    }

    #[test]
    fn lz_examples() {
        // theta = pi/4 (coincident pulses): bright entry is exactly 1
        let c = cfg(7.0, 4.0, 6.0, 0.0);
        let h = lz_hamiltonian(1.3, &c);
        assert!((h.entry(0, 0).re - 1.0).abs() < 1e-14);
        assert_eq!(h.entry(1, 1).re, 0.0);

        // theta ~ 0 with q = 10: bright entry is 1 - 2q = -19
        let c = cfg(10.0, 10.0, 10.0, 30.0);
        let h = lz_hamiltonian(-30.0, &c);
        assert!((h.entry(0, 0).re - (-19.0)).abs() < 1e-12);

        // at the crossing angle the bright entry vanishes
        let c = cfg(10.0, 10.0, 10.0, -10.0);
        let theta_star = (0.05f64).acos() / 2.0;
        let t_star = 100.0 * theta_star.tan().ln() / (4.0 * -10.0);
        let h = lz_hamiltonian(t_star, &c);
        assert!(h.entry(0, 0).re.abs() < 1e-12);
    }

    #[test]
    fn rotating_term_is_the_expected_generator() {
        let c = cfg(1.0, 10.0, 10.0, 10.0);
        let k = rotating_frame_term(0.0, &c);
        let rate = c.pulses().mixing_angle_rate(0.0);
        // i * rate * (dU/dtheta U^T) has +-i rate in the dark/bright corner
        assert!((k[(0, 2)] - Complex::new(0.0, -rate)).norm() < 1e-15);
        assert!((k[(2, 0)] - Complex::new(0.0, rate)).norm() < 1e-15);
        for (i, j) in [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)] {
            assert!(k[(i, j)].norm() < 1e-15);
        }
    }

    #[test]
    fn unflagged_frame_reconstructs_bare() {
        let c = cfg(4.0, 9.0, 7.0, -6.0);
        for t in [-20.0, -3.0, 0.0, 1.7, 14.0] {
            let u = dark_bright_transform(c.pulses().mixing_angle(t));
            let db = darkbright_hamiltonian(t, &c, false);
            let flagged = darkbright_hamiltonian(t, &c, true);
            let stripped = flagged.matrix().sub(&rotating_frame_term(t, &c));
            let back = u.transpose().mul(db.matrix()).mul(&u);
            let back_stripped = u.transpose().mul(&stripped).mul(&u);
            let bare = bare_hamiltonian(t, &c);
            assert!(back.max_abs_diff(bare.matrix()) < 1e-12);
            assert!(back_stripped.max_abs_diff(bare.matrix()) < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn bare_is_real_symmetric(
            t in -60.0..60.0f64,
            q in -12.0..12.0f64,
            omega0 in 0.0..40.0f64,
            width in 1.0..20.0f64,
            delay in -25.0..25.0f64,
        ) {
            let c = cfg(q, omega0, width, delay);
            let h = bare_hamiltonian(t, &c);
            prop_assert!(h.matrix().hermiticity_defect() == 0.0);
            for i in 0..3 {
                for j in 0..3 {
                    prop_assert_eq!(h.entry(i, j).im, 0.0);
                    prop_assert!(h.entry(i, j).re.is_finite());
                }
            }
        }

        #[test]
        fn orthogonal_transform_preserves_the_spectrum(
            t in -40.0..40.0f64,
            q in -12.0..12.0f64,
            omega0 in 0.0..40.0f64,
            width in 2.0..15.0f64,
            delay in -20.0..20.0f64,
        ) {
            let c = cfg(q, omega0, width, delay);
            let bare = bare_hamiltonian(t, &c).eigenvalues();
            let db = darkbright_hamiltonian(t, &c, false).eigenvalues();
            for k in 0..3 {
                prop_assert!((bare[k] - db[k]).abs() <= 1e-12,
                    "eigenvalue {} differs: {} vs {}", k, bare[k], db[k]);
            }
        }

        #[test]
        fn flagged_hamiltonian_is_hermitian(
            t in -40.0..40.0f64,
            q in -12.0..12.0f64,
            omega0 in 0.0..40.0f64,
            width in 2.0..15.0f64,
            delay in -20.0..20.0f64,
        ) {
            let c = cfg(q, omega0, width, delay);
            let h = darkbright_hamiltonian(t, &c, true);
            prop_assert!(h.matrix().hermiticity_defect() == 0.0);
        }
    }
}
