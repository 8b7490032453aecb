//! Adaptive explicit Runge-Kutta integration of the time-dependent
//! Schroedinger equation `i dpsi/dt = H(t) psi`.
//!
//! The stepper is the Dormand-Prince 5(4) pair with the standard PI-free
//! error controller. Steps land exactly on a caller-supplied checkpoint grid
//! so sampled output is reproducible independently of the adaptive internal
//! steps. Integration runs in either time direction. The state norm is
//! monitored, never corrected: drift beyond the bound aborts the run.

use num_complex::Complex;

use crate::hamiltonian::HermitianMatrix;
use crate::linalg::{vec_norm, CVec, C};
use crate::scalar::{real, Real};
use crate::{Error, Result};

// Dormand-Prince 5(4) tableau.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
const C_NODES: [f64; 5] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0];
/// Difference between the 5th and the embedded 4th order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Controls for one integration.
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    /// Abort when the state norm drifts from its initial value by more.
    pub norm_tol: T,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        OdeOptions {
            rtol: real(1e-9),
            atol: real(1e-10),
            norm_tol: real(1e-9),
            max_steps: 20_000_000,
        }
    }
}

/// Integration output: the final state plus whatever was recorded.
#[derive(Clone, Debug)]
pub struct OdeSolution<T, const N: usize> {
    pub final_state: CVec<T, N>,
    /// Recorded times, in integration order.
    pub times: Vec<T>,
    pub states: Vec<CVec<T, N>>,
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    /// Largest `| ||psi|| - ||psi0|| |` seen at accepted steps.
    pub max_norm_drift: T,
}

fn rhs<T: Real, const N: usize, H>(h_source: &H, t: T, y: &CVec<T, N>) -> CVec<T, N>
where
    H: Fn(T) -> HermitianMatrix<T, N>,
{
    let hy = h_source(t).mul_vec(y);
    let minus_i = Complex::new(T::zero(), -T::one());
    std::array::from_fn(|k| minus_i * hy[k])
}

fn add_scaled<T: Real, const N: usize>(
    y: &CVec<T, N>,
    terms: &[(T, &CVec<T, N>)],
) -> CVec<T, N> {
    std::array::from_fn(|i| {
        let mut acc = y[i];
        for (w, k) in terms {
            acc += *k * Complex::new(*w, T::zero());
        }
        acc
    })
}

/// Integrate from `t0` to `t1` (either direction), recording the state at
/// every checkpoint and, when `record_steps` is set, at every accepted step.
///
/// Checkpoints must be sorted in integration direction and lie within the
/// span; the endpoints need not be included but commonly are.
pub fn solve<T: Real, const N: usize, H>(
    h_source: H,
    psi0: &CVec<T, N>,
    t0: T,
    t1: T,
    checkpoints: &[T],
    record_steps: bool,
    opts: &OdeOptions<T>,
) -> Result<OdeSolution<T, N>>
where
    H: Fn(T) -> HermitianMatrix<T, N>,
{
    let dir = if t1 >= t0 { T::one() } else { -T::one() };
    let span = (t1 - t0).abs();
    let norm0 = vec_norm(psi0);

    let mut sol = OdeSolution {
        final_state: *psi0,
        times: Vec::new(),
        states: Vec::new(),
        steps_accepted: 0,
        steps_rejected: 0,
        max_norm_drift: T::zero(),
    };
    let mut record = |t: T, y: &CVec<T, N>, sol: &mut OdeSolution<T, N>| {
        if sol.times.last().map_or(true, |last| *last != t) {
            sol.times.push(t);
            sol.states.push(*y);
        }
    };

    let mut ck_iter = checkpoints.iter().copied().peekable();
    let mut t = t0;
    let mut y = *psi0;
    while ck_iter.peek().map_or(false, |ck| (*ck - t) * dir <= T::zero()) {
        let ck = ck_iter.next().unwrap();
        record(ck, &y, &mut sol);
    }
    if span == T::zero() {
        sol.final_state = y;
        return Ok(sol);
    }

    // conversion of the tableau to the working precision, once per call
    let a2: [T; 1] = A2.map(real);
    let a3: [T; 2] = A3.map(real);
    let a4: [T; 3] = A4.map(real);
    let a5: [T; 4] = A5.map(real);
    let a6: [T; 5] = A6.map(real);
    let b: [T; 6] = B.map(real);
    let c: [T; 5] = C_NODES.map(real);
    let e: [T; 7] = E.map(real);
    let safety: T = real(0.9);
    let grow_cap: T = real(5.0);
    let shrink_cap: T = real(0.2);
    let order_root: T = real(0.2); // 1/5 for a 5th order pair

    let mut h = span * real::<T>(1e-3);
    let mut k1 = rhs(&h_source, t, &y);
    let mut steps = 0usize;

    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= T::zero() {
            break;
        }
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepBudget {
                t: t.to_f64().unwrap_or(f64::NAN),
                max_steps: opts.max_steps,
            });
        }
        let h_floor = T::epsilon()
            * real::<T>(16.0)
            * t.abs().max(t1.abs()).max(T::one());
        if h < h_floor {
            return Err(Error::StepSizeUnderflow {
                t: t.to_f64().unwrap_or(f64::NAN),
                h: h.to_f64().unwrap_or(f64::NAN),
            });
        }

        // clip to the next checkpoint (or the end) so samples are exact
        let target = ck_iter
            .peek()
            .copied()
            .filter(|ck| (*ck - t1) * dir < T::zero())
            .unwrap_or(t1);
        let gap = (target - t) * dir;
        let clipped = h >= gap;
        let h_step = if clipped { gap } else { h };
        let hs = h_step * dir;

        let y2 = add_scaled(&y, &[(hs * a2[0], &k1)]);
        let k2 = rhs(&h_source, t + hs * c[0], &y2);
        let y3 = add_scaled(&y, &[(hs * a3[0], &k1), (hs * a3[1], &k2)]);
        let k3 = rhs(&h_source, t + hs * c[1], &y3);
        let y4 = add_scaled(
            &y,
            &[(hs * a4[0], &k1), (hs * a4[1], &k2), (hs * a4[2], &k3)],
        );
        let k4 = rhs(&h_source, t + hs * c[2], &y4);
        let y5 = add_scaled(
            &y,
            &[
                (hs * a5[0], &k1),
                (hs * a5[1], &k2),
                (hs * a5[2], &k3),
                (hs * a5[3], &k4),
            ],
        );
        let k5 = rhs(&h_source, t + hs * c[3], &y5);
        let y6 = add_scaled(
            &y,
            &[
                (hs * a6[0], &k1),
                (hs * a6[1], &k2),
                (hs * a6[2], &k3),
                (hs * a6[3], &k4),
                (hs * a6[4], &k5),
            ],
        );
        let k6 = rhs(&h_source, t + hs * c[4], &y6);
        let y_new = add_scaled(
            &y,
            &[
                (hs * b[0], &k1),
                (hs * b[2], &k3),
                (hs * b[3], &k4),
                (hs * b[4], &k5),
                (hs * b[5], &k6),
            ],
        );
        let t_new = if clipped { target } else { t + hs };
        let k7 = rhs(&h_source, t_new, &y_new);

        // scaled RMS of the embedded error estimate
        let mut err_sq = T::zero();
        for i in 0..N {
            let ei = k1[i] * Complex::new(e[0], T::zero())
                + k3[i] * Complex::new(e[2], T::zero())
                + k4[i] * Complex::new(e[3], T::zero())
                + k5[i] * Complex::new(e[4], T::zero())
                + k6[i] * Complex::new(e[5], T::zero())
                + k7[i] * Complex::new(e[6], T::zero());
            let scale = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
            let ratio = ei.norm() * h_step / scale;
            err_sq = err_sq + ratio * ratio;
        }
        let err = (err_sq / real::<T>(N as f64)).sqrt();

        if err.is_finite() && err <= T::one() {
            t = t_new;
            y = y_new;
            k1 = k7; // first-same-as-last
            sol.steps_accepted += 1;

            let drift = (vec_norm(&y) - norm0).abs();
            if drift > sol.max_norm_drift {
                sol.max_norm_drift = drift;
            }
            if drift > opts.norm_tol {
                return Err(Error::NormDrift {
                    t: t.to_f64().unwrap_or(f64::NAN),
                    drift: drift.to_f64().unwrap_or(f64::NAN),
                    tol: opts.norm_tol.to_f64().unwrap_or(f64::NAN),
                });
            }

            while ck_iter
                .peek()
                .map_or(false, |ck| (*ck - t) * dir <= T::zero())
            {
                let ck = ck_iter.next().unwrap();
                record(ck, &y, &mut sol);
            }
            if record_steps {
                record(t, &y, &mut sol);
            }

            if !clipped {
                let factor = if err == T::zero() {
                    grow_cap
                } else {
                    (safety * err.powf(-order_root)).min(grow_cap).max(shrink_cap)
                };
                h = h * factor;
            }
        } else {
            sol.steps_rejected += 1;
            let factor = if err.is_finite() {
                (safety * err.powf(-order_root)).min(T::one()).max(shrink_cap)
            } else {
                real(0.1)
            };
            h = h_step * factor;
        }
    }

    sol.final_state = y;
    Ok(sol)
}
