//! Small fixed-size complex matrices and vectors.
//!
//! The simulator only ever handles 2x2 and 3x3 Hermitian matrices and the
//! matching amplitude vectors, so everything is stack-allocated and generic
//! over the dimension. Provides the dense products, the matrix exponential
//! (scaling-and-squaring with a Pade(13) approximant) and Hermitian
//! eigenvalues via cyclic Jacobi rotations.

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::scalar::{real, Real};

pub type C<T> = Complex<T>;

/// Vector of `N` complex amplitudes.
pub type CVec<T, const N: usize> = [C<T>; N];

/// Row-major `N x N` complex matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMat<T, const N: usize>(pub [[C<T>; N]; N]);

impl<T: Real, const N: usize> CMat<T, N> {
    pub fn zeros() -> Self {
        CMat([[C::new(T::zero(), T::zero()); N]; N])
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m[(i, i)] = C::new(T::one(), T::zero());
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_real_diag(d: [T; N]) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            m[(i, i)] = C::new(d[i], T::zero());
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m[(i, j)] = self[(j, i)];
            }
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                m[(i, j)] = self[(j, i)].conj();
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m[(i, j)] += other[(i, j)];
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m[(i, j)] -= other[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, factor: C<T>) -> Self {
        let mut m = *self;
        for i in 0..N {
            for j in 0..N {
                m[(i, j)] *= factor;
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut m = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                let mut acc = C::new(T::zero(), T::zero());
                for k in 0..N {
                    acc += self[(i, k)] * other[(k, j)];
                }
                m[(i, j)] = acc;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &CVec<T, N>) -> CVec<T, N> {
        let mut out = [C::new(T::zero(), T::zero()); N];
        for i in 0..N {
            let mut acc = C::new(T::zero(), T::zero());
            for k in 0..N {
                acc += self[(i, k)] * v[k];
            }
            out[i] = acc;
        }
        out
    }

    /// Maximum column sum of entry moduli (the induced 1-norm).
    pub fn one_norm(&self) -> T {
        let mut worst = T::zero();
        for j in 0..N {
            let mut col = T::zero();
            for i in 0..N {
                col = col + self[(i, j)].norm();
            }
            if col > worst {
                worst = col;
            }
        }
        worst
    }

    /// Largest entrywise modulus of the difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for i in 0..N {
            for j in 0..N {
                let d = (self[(i, j)] - other[(i, j)]).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
        worst
    }

    /// Largest departure from hermiticity, `max |a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> T {
        self.max_abs_diff(&self.adjoint())
    }
}

impl<T, const N: usize> Index<(usize, usize)> for CMat<T, N> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.0[i][j]
    }
}

impl<T, const N: usize> IndexMut<(usize, usize)> for CMat<T, N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.0[i][j]
    }
}

/// Quadrature norm of an amplitude vector.
pub fn vec_norm<T: Real, const N: usize>(v: &CVec<T, N>) -> T {
    v.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt()
}

/// Largest per-component modulus of the difference of two vectors.
pub fn vec_max_abs_diff<T: Real, const N: usize>(a: &CVec<T, N>, b: &CVec<T, N>) -> T {
    let mut worst = T::zero();
    for k in 0..N {
        let d = (a[k] - b[k]).norm();
        if d > worst {
            worst = d;
        }
    }
    worst
}

/// Solve the linear system `A X = B` by Gaussian elimination with partial
/// pivoting. `A` must be nonsingular.
pub fn solve<T: Real, const N: usize>(a: &CMat<T, N>, b: &CMat<T, N>) -> CMat<T, N> {
    let mut lhs = *a;
    let mut rhs = *b;
    for col in 0..N {
        let mut pivot = col;
        let mut best = lhs[(col, col)].norm_sqr();
        for row in (col + 1)..N {
            let cand = lhs[(row, col)].norm_sqr();
            if cand > best {
                best = cand;
                pivot = row;
            }
        }
        if pivot != col {
            lhs.0.swap(col, pivot);
            rhs.0.swap(col, pivot);
        }
        let inv = C::new(T::one(), T::zero()) / lhs[(col, col)];
        for row in (col + 1)..N {
            let factor = lhs[(row, col)] * inv;
            for k in col..N {
                let sub = factor * lhs[(col, k)];
                lhs[(row, k)] -= sub;
            }
            for k in 0..N {
                let sub = factor * rhs[(col, k)];
                rhs[(row, k)] -= sub;
            }
        }
    }
    let mut x = CMat::<T, N>::zeros();
    for col in 0..N {
        for row in (0..N).rev() {
            let mut acc = rhs[(row, col)];
            for k in (row + 1)..N {
                acc -= lhs[(row, k)] * x[(k, col)];
            }
            x[(row, col)] = acc / lhs[(row, row)];
        }
    }
    x
}

/// Normalized Pade(13) numerator coefficients for the matrix exponential.
const PADE13: [f64; 14] = [
    1.0,
    0.5,
    0.12,
    1.8333333333333333e-2,
    1.9927536231884058e-3,
    1.6304347826086957e-4,
    1.0351966873706004e-5,
    5.175983436853002e-7,
    2.0431513566525008e-8,
    6.306022705717595e-10,
    1.4837700484041396e-11,
    2.5291534915979653e-13,
    2.8101705462199623e-15,
    1.5440497506703088e-17,
];

/// Largest scaled norm for which the Pade(13) approximant is accurate.
const PADE13_THETA: f64 = 5.371920351148152;

/// Matrix exponential by scaling-and-squaring with a Pade(13) approximant.
///
/// Diagonal Pade approximants map skew-Hermitian arguments to unitary
/// results, so propagators built from `expm(-i H dt)` stay unitary to
/// rounding accuracy.
pub fn expm<T: Real, const N: usize>(a: &CMat<T, N>) -> CMat<T, N> {
    let norm = a.one_norm();
    let theta: T = real(PADE13_THETA);
    let squarings = if norm > theta {
        (norm / theta).log2().ceil().to_u32().unwrap_or(64).min(64)
    } else {
        0
    };
    let shrink = real::<T>(0.5).powi(squarings as i32);
    let scaled = a.scale(C::new(shrink, T::zero()));

    let b: [T; 14] = std::array::from_fn(|k| real(PADE13[k]));
    let cre = |x: T| C::new(x, T::zero());
    let eye = CMat::<T, N>::identity();
    let a2 = scaled.mul(&scaled);
    let a4 = a2.mul(&a2);
    let a6 = a2.mul(&a4);

    let w1 = a6
        .scale(cre(b[13]))
        .add(&a4.scale(cre(b[11])))
        .add(&a2.scale(cre(b[9])));
    let w2 = w1
        .mul(&a6)
        .add(&a6.scale(cre(b[7])))
        .add(&a4.scale(cre(b[5])))
        .add(&a2.scale(cre(b[3])))
        .add(&eye.scale(cre(b[1])));
    let u = scaled.mul(&w2);

    let v1 = a6
        .scale(cre(b[12]))
        .add(&a4.scale(cre(b[10])))
        .add(&a2.scale(cre(b[8])));
    let v = v1
        .mul(&a6)
        .add(&a6.scale(cre(b[6])))
        .add(&a4.scale(cre(b[4])))
        .add(&a2.scale(cre(b[2])))
        .add(&eye.scale(cre(b[0])));

    let mut r = solve(&v.sub(&u), &v.add(&u));
    for _ in 0..squarings {
        r = r.mul(&r);
    }
    r
}

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic Jacobi rotations.
///
/// Converges to rounding accuracy, which the spectrum-invariance checks of
/// the basis transformation rely on.
pub fn eigvals_hermitian<T: Real, const N: usize>(h: &CMat<T, N>) -> [T; N] {
    let mut a = *h;
    let scale = h.one_norm().max(T::one());
    let tol = T::epsilon() * scale * real(4.0);
    for _sweep in 0..100 {
        let mut off = T::zero();
        for p in 0..N {
            for q in (p + 1)..N {
                off = off + a[(p, q)].norm();
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..N {
            for q in (p + 1)..N {
                let beta = a[(p, q)];
                let mag = beta.norm();
                if mag <= T::epsilon() * scale {
                    continue;
                }
                let phase = beta / C::new(mag, T::zero());
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                // tan of the smaller rotation angle zeroing a_pq
                let tau = (gamma - alpha) / (mag + mag);
                let t = if tau >= T::zero() {
                    (tau + (T::one() + tau * tau).sqrt()).recip()
                } else {
                    -((-tau + (T::one() + tau * tau).sqrt()).recip())
                };
                let c = (T::one() + t * t).sqrt().recip();
                let s = t * c;
                let mut rot = CMat::<T, N>::identity();
                rot[(p, p)] = C::new(c, T::zero());
                rot[(p, q)] = phase * s;
                rot[(q, p)] = -phase.conj() * s;
                rot[(q, q)] = C::new(c, T::zero());
                a = rot.adjoint().mul(&a).mul(&rot);
            }
        }
    }
    let mut vals: [T; N] = std::array::from_fn(|i| a[(i, i)].re);
    vals.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    vals
}

/// Eigenvalues of a 2x2 Hermitian matrix in closed form, ascending.
pub fn eigvals_hermitian2<T: Real>(a11: T, a22: T, a12_mod: T) -> (T, T) {
    let mean = (a11 + a22) * real(0.5);
    let radius = ((a11 - a22) * real::<T>(0.5)).hypot(a12_mod);
    (mean - radius, mean + radius)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M2 = CMat<f64, 2>;
    type M3 = CMat<f64, 3>;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn identity_multiplication() {
        let mut m = M3::zeros();
        m[(0, 1)] = c(1.0, -2.0);
        m[(2, 0)] = c(0.5, 0.25);
        let id = M3::identity();
        assert_eq!(m.mul(&id), m);
        assert_eq!(id.mul(&m), m);
    }

    #[test]
    fn solve_recovers_inverse_action() {
        let mut a = M3::zeros();
        a[(0, 0)] = c(2.0, 0.0);
        a[(0, 1)] = c(1.0, 1.0);
        a[(1, 0)] = c(0.0, -1.0);
        a[(1, 1)] = c(3.0, 0.0);
        a[(1, 2)] = c(0.5, 0.0);
        a[(2, 1)] = c(-1.0, 0.5);
        a[(2, 2)] = c(1.5, 0.0);
        let b = M3::identity();
        let x = solve(&a, &b);
        assert!(a.mul(&x).max_abs_diff(&M3::identity()) < 1e-13);
    }

    #[test]
    fn expm_zero_is_identity() {
        let e = expm(&M3::zeros());
        assert!(e.max_abs_diff(&M3::identity()) < 1e-15);
    }

    #[test]
    fn expm_diagonal() {
        let a = M2(
            [[c(0.0, 1.2), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -0.7)]],
        );
        let e = expm(&a);
        assert!((e[(0, 0)] - c(1.2f64.cos(), 1.2f64.sin())).norm() < 1e-15);
        assert!((e[(1, 1)] - c(0.7f64.cos(), -0.7f64.sin())).norm() < 1e-15);
        assert!(e[(0, 1)].norm() < 1e-16);
    }

    #[test]
    fn expm_pauli_x_rotation() {
        // exp(-i phi sx) = cos(phi) I - i sin(phi) sx
        let phi = 0.35_f64;
        let a = M2([[c(0.0, 0.0), c(0.0, -phi)], [c(0.0, -phi), c(0.0, 0.0)]]);
        let e = expm(&a);
        assert!((e[(0, 0)] - c(phi.cos(), 0.0)).norm() < 1e-14);
        assert!((e[(0, 1)] - c(0.0, -phi.sin())).norm() < 1e-14);
    }

    #[test]
    fn expm_large_norm_uses_squaring_and_stays_unitary() {
        // -i H with ||H|| well above the Pade threshold
        let h = M3(
            [
                [c(20.0, 0.0), c(5.0, 0.0), c(0.0, 0.0)],
                [c(5.0, 0.0), c(-1.0, 0.0), c(5.0, 0.0)],
                [c(0.0, 0.0), c(5.0, 0.0), c(-20.0, 0.0)],
            ],
        );
        let a = h.scale(c(0.0, -1.0));
        let e = expm(&a);
        let product = e.adjoint().mul(&e);
        assert!(product.max_abs_diff(&M3::identity()) < 1e-13);
    }

    #[test]
    fn jacobi_matches_closed_form_2x2() {
        let a = M2([[c(1.0, 0.0), c(2.0, -1.0)], [c(2.0, 1.0), c(-3.0, 0.0)]]);
        let vals = eigvals_hermitian(&a);
        let (lo, hi) = eigvals_hermitian2(1.0, -3.0, 5.0f64.sqrt());
        assert!((vals[0] - lo).abs() < 1e-14);
        assert!((vals[1] - hi).abs() < 1e-14);
    }

    #[test]
    fn jacobi_3x3_invariants() {
        let a = M3(
            [
                [c(2.0, 0.0), c(1.0, 0.5), c(0.25, -0.75)],
                [c(1.0, -0.5), c(-1.0, 0.0), c(0.5, 0.0)],
                [c(0.25, 0.75), c(0.5, 0.0), c(4.0, 0.0)],
            ],
        );
        let vals = eigvals_hermitian(&a);
        let trace: f64 = vals.iter().sum();
        assert!((trace - 5.0).abs() < 1e-13);
        assert!(vals[0] <= vals[1] && vals[1] <= vals[2]);
        // sum of pairwise products equals the sum of principal 2x2 minors
        let minors = (2.0 * -1.0 - (1.0f64.powi(2) + 0.5f64.powi(2)))
            + (2.0 * 4.0 - (0.25f64.powi(2) + 0.75f64.powi(2)))
            + (-1.0 * 4.0 - 0.25);
        let pairwise = vals[0] * vals[1] + vals[0] * vals[2] + vals[1] * vals[2];
        assert!((pairwise - minors).abs() < 1e-12);
    }
}
