//! 2x2 quaternion representation used as phase-space coordinates.
//!
//! A quaternion is stored as the complex pair `(z, w)` and interpreted as the
//! matrix `[[z, -conj(w)], [w, conj(z)]]`. The conjugate entries are never
//! stored; the matrix form is reconstructed on demand.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EikonalError, Result};

pub type C64 = Complex64;

fn finite(c: C64) -> bool {
    c.re.is_finite() && c.im.is_finite()
}

/// Quaternion coordinate `Q = [[z, -w̄], [w, z̄]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub z: C64,
    pub w: C64,
}

impl Quaternion {
    /// Builds a quaternion, rejecting non-finite components.
    pub fn new(z: C64, w: C64) -> Result<Self> {
        if !finite(z) || !finite(w) {
            return Err(EikonalError::NonFinite("quaternion"));
        }
        Ok(Self { z, w })
    }

    /// Unchecked constructor for internal arithmetic on already-validated data.
    pub(crate) fn raw(z: C64, w: C64) -> Self {
        Self { z, w }
    }

    pub fn identity() -> Self {
        Self::raw(C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn zero() -> Self {
        Self::raw(C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    /// The full 2x2 matrix `[[z, -w̄], [w, z̄]]` in row-major order.
    pub fn matrix(&self) -> [[C64; 2]; 2] {
        [[self.z, -self.w.conj()], [self.w, self.z.conj()]]
    }

    /// Determinant of the matrix form, `|z|^2 + |w|^2`.
    pub fn det(&self) -> f64 {
        self.z.norm_sqr() + self.w.norm_sqr()
    }

    /// 2x2 matrix product, mapped back to `(z, w)` form.
    pub fn mul(&self, rhs: &Quaternion) -> Quaternion {
        // [[z1 z2 - w̄1 w2, ...], [w1 z2 + z̄1 w2, ...]]
        Quaternion::raw(
            self.z * rhs.z - self.w.conj() * rhs.w,
            self.w * rhs.z + self.z.conj() * rhs.w,
        )
    }

    /// Matrix inverse; errors when the determinant vanishes.
    pub fn inverse(&self) -> Result<Quaternion> {
        let d = self.det();
        if d == 0.0 {
            return Err(EikonalError::SingularQuaternion);
        }
        Ok(Quaternion::raw(self.z.conj() / d, -self.w / d))
    }

    pub fn scale(&self, s: f64) -> Quaternion {
        Quaternion::raw(self.z * s, self.w * s)
    }

    pub fn add(&self, rhs: &Quaternion) -> Quaternion {
        Quaternion::raw(self.z + rhs.z, self.w + rhs.w)
    }
}

/// Canonical pair `(Q, P)` with the resolvent stored as `G = P^T`.
///
/// The momentum is kept directly in resolvent form `G`, itself a quaternion
/// with `G = [[p_z, p_w], [-p̄_w, p̄_z]]`; in `(z, w)` storage this means
/// `g.z = p_z` and `g.w = -conj(p_w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuaternionPair {
    pub q: Quaternion,
    pub g: Quaternion,
}

impl QuaternionPair {
    pub fn new(q: Quaternion, g: Quaternion) -> Self {
        Self { q, g }
    }

    /// Eigenvalue-related momentum `p_z = G_11`.
    pub fn p_z(&self) -> C64 {
        self.g.z
    }

    /// Eigenvector-related momentum `p_w = G_12`.
    pub fn p_w(&self) -> C64 {
        -self.g.w.conj()
    }

    /// Builds the momentum quaternion from the `(p_z, p_w)` pair.
    pub fn g_from_momenta(p_z: C64, p_w: C64) -> Quaternion {
        Quaternion::raw(p_z, -p_w.conj())
    }
}
