//! Closed-form 2×2 complex linear algebra.
//!
//! Everything here works on fixed-size arrays. The singular value
//! decomposition goes through the Gram matrix `A†A`, whose eigenproblem is
//! solved with the quadratic formula; the smaller singular value is then
//! recovered directly from the matrix rather than from a square root of a
//! tiny eigenvalue, so rank-deficient inputs keep full precision.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Complex scalar used throughout the crate.
pub type Complex = Complex64;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn real(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

pub fn is_finite(z: Complex) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// A 2×2 complex matrix stored row-major.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mat2(pub [[Complex; 2]; 2]);

impl Mat2 {
    pub const fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub fn diag(a: Complex, d: Complex) -> Self {
        Mat2::new(a, ZERO, ZERO, d)
    }

    pub fn pauli_x() -> Self {
        Mat2::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn pauli_y() -> Self {
        Mat2::new(ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO)
    }

    pub fn pauli_z() -> Self {
        Mat2::diag(ONE, -ONE)
    }

    /// Build from two column vectors.
    pub fn from_columns(c0: [Complex; 2], c1: [Complex; 2]) -> Self {
        Mat2::new(c0[0], c1[0], c0[1], c1[1])
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.0[row][col]
    }

    pub fn column(&self, col: usize) -> [Complex; 2] {
        [self.0[0][col], self.0[1][col]]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2::new(
            m[0][0].conj(),
            m[1][0].conj(),
            m[0][1].conj(),
            m[1][1].conj(),
        )
    }

    pub fn scale(&self, s: Complex) -> Self {
        let m = &self.0;
        Mat2::new(m[0][0] * s, m[0][1] * s, m[1][0] * s, m[1][1] * s)
    }

    pub fn trace(&self) -> Complex {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn apply(&self, v: [Complex; 2]) -> [Complex; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// `M†M`.
    pub fn gram(&self) -> Self {
        self.adjoint() * *self
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|&z| is_finite(z))
    }

    /// `U†U = I` within `tol` (max entrywise deviation).
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.gram().max_abs_diff(&Mat2::identity()) <= tol
    }

    /// True when `self = e^{iθ}·other` for some θ, within `tol`.
    pub fn equals_up_to_phase(&self, other: &Mat2, tol: f64) -> bool {
        // the phase is read off the largest entry of `other`
        let (mut best, mut at) = (0.0, (0, 0));
        for i in 0..2 {
            for j in 0..2 {
                let a = other.0[i][j].norm();
                if a > best {
                    best = a;
                    at = (i, j);
                }
            }
        }
        if best == 0.0 {
            return self.max_abs() <= tol;
        }
        let ratio = self.0[at.0][at.1] / other.0[at.0][at.1];
        if ratio.norm() == 0.0 {
            return false;
        }
        let phase = ratio / ratio.norm();
        self.max_abs_diff(&other.scale(phase)) <= tol
    }

    /// Singular value decomposition `M = U·diag(s₀, s₁)·V†` with `s₀ ≥ s₁ ≥ 0`.
    pub fn svd(&self) -> Svd2 {
        let g = self.gram();
        let a = g.0[0][0].re;
        let d = g.0[1][1].re;
        let b = g.0[0][1];
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        let top = mean + half_gap;

        // Two candidate eigenvectors for `top`; the longer one is the
        // numerically reliable choice.
        let cand_a = [b, real(top - a)];
        let cand_b = [real(top - d), b.conj()];
        let na = vec_norm(&cand_a);
        let nb = vec_norm(&cand_b);
        let v0 = if na.max(nb) <= f64::EPSILON * (1.0 + top.abs()) {
            if a >= d {
                [ONE, ZERO]
            } else {
                [ZERO, ONE]
            }
        } else if na >= nb {
            [cand_a[0] / na, cand_a[1] / na]
        } else {
            [cand_b[0] / nb, cand_b[1] / nb]
        };
        let v1 = orthogonal_complement(v0);

        let mv0 = self.apply(v0);
        let s0 = vec_norm(&mv0);
        let u0 = if s0 > 0.0 {
            [mv0[0] / s0, mv0[1] / s0]
        } else {
            [ONE, ZERO]
        };
        let mut u1 = orthogonal_complement(u0);
        let z = inner(&u1, &self.apply(v1));
        let s1 = z.norm();
        if s1 > 0.0 {
            let phase = z / s1;
            u1 = [u1[0] * phase, u1[1] * phase];
        }

        Svd2 {
            u: Mat2::from_columns(u0, u1),
            singular: [s0, s1],
            v: Mat2::from_columns(v0, v1),
        }
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2::new(
            a[0][0] + b[0][0],
            a[0][1] + b[0][1],
            a[1][0] + b[1][0],
            a[1][1] + b[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + rhs.scale(-ONE)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(out)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Svd2 {
    pub u: Mat2,
    pub singular: [f64; 2],
    pub v: Mat2,
}

impl Svd2 {
    pub fn reconstruct(&self) -> Mat2 {
        let s = Mat2::diag(real(self.singular[0]), real(self.singular[1]));
        self.u * s * self.v.adjoint()
    }
}

/// `⟨a|b⟩`
pub fn inner(a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn vec_norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Unit vector orthogonal to a unit 2-vector.
fn orthogonal_complement(v: [Complex; 2]) -> [Complex; 2] {
    [-v[1].conj(), v[0].conj()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_of_diagonal_sorts_descending() {
        let m = Mat2::diag(real(0.25), real(-3.0));
        let svd = m.svd();
        assert!((svd.singular[0] - 3.0).abs() < 1e-14);
        assert!((svd.singular[1] - 0.25).abs() < 1e-14);
        assert!(svd.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn svd_of_rank_one_keeps_small_value_exact() {
        let m = Mat2::new(real(1.0), real(2.0), real(2.0), real(4.0 + 1e-13));
        let svd = m.svd();
        assert!(svd.singular[1] < 1e-12);
        assert!((svd.singular[0] - 5.0).abs() < 1e-12);
        assert!(svd.reconstruct().max_abs_diff(&m) < 1e-14);
        assert!(svd.u.is_unitary(1e-14) && svd.v.is_unitary(1e-14));
    }

    #[test]
    fn svd_of_zero_matrix() {
        let svd = Mat2::zero().svd();
        assert_eq!(svd.singular, [0.0, 0.0]);
        assert!(svd.u.is_unitary(1e-15));
    }

    #[test]
    fn pauli_products() {
        let xy = Mat2::pauli_x() * Mat2::pauli_y();
        assert!(xy.max_abs_diff(&Mat2::pauli_z().scale(c(0.0, 1.0))) < 1e-15);
        assert!(Mat2::pauli_y().is_unitary(1e-15));
    }

    #[test]
    fn phase_equality() {
        let z = Mat2::pauli_z();
        assert!(z.scale(c(0.0, 1.0)).equals_up_to_phase(&z, 1e-12));
        assert!(!Mat2::pauli_x().equals_up_to_phase(&z, 1e-12));
    }
}
