//! Atomic spectral measures used as initial and boundary data.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{EikonalError, Result};
use crate::quaternion::C64;

/// Weighted atomic measure on the complex plane (real locations in Hermitian
/// contexts). Weights are positive and sum to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    atoms: Vec<(C64, f64)>,
}

impl SpectralMeasure {
    pub fn new(atoms: Vec<(C64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(EikonalError::BadMeasure("no atoms".into()));
        }
        let mut total = 0.0;
        for &(loc, w) in &atoms {
            if !loc.re.is_finite() || !loc.im.is_finite() || !w.is_finite() {
                return Err(EikonalError::NonFinite("measure atom"));
            }
            if w <= 0.0 {
                return Err(EikonalError::BadMeasure(format!("weight {w} <= 0")));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(EikonalError::BadMeasure(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { atoms })
    }

    /// Single unit atom.
    pub fn delta(loc: C64) -> Self {
        Self {
            atoms: vec![(loc, 1.0)],
        }
    }

    /// Equal-weight atoms at real locations.
    pub fn uniform_real(locs: &[f64]) -> Result<Self> {
        let w = 1.0 / locs.len() as f64;
        Self::new(locs.iter().map(|&x| (Complex64::new(x, 0.0), w)).collect())
    }

    pub fn atoms(&self) -> &[(C64, f64)] {
        &self.atoms
    }

    pub fn is_real(&self) -> bool {
        self.atoms.iter().all(|&(loc, _)| loc.im == 0.0)
    }

    /// Initial resolvent G_0(z) = sum_i w_i / (z - x_i).
    pub fn resolvent(&self, z: C64) -> C64 {
        self.atoms.iter().map(|&(x, w)| w / (z - x)).sum()
    }

    /// d/dz of the initial resolvent.
    pub fn resolvent_deriv(&self, z: C64) -> C64 {
        self.atoms
            .iter()
            .map(|&(x, w)| {
                let d = z - x;
                -w / (d * d)
            })
            .sum()
    }

    /// Equal-weight quantile discretization into `n` atoms (real measures,
    /// sorted ascending). Used to pair two end measures atom-by-atom.
    pub fn quantile_atoms(&self, n: usize) -> Vec<f64> {
        let mut sorted: Vec<(f64, f64)> =
            self.atoms.iter().map(|&(loc, w)| (loc.re, w)).collect();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let mut out = Vec::with_capacity(n);
        let mut cum = 0.0;
        let mut idx = 0;
        for k in 0..n {
            let target = (k as f64 + 0.5) / n as f64;
            while idx < sorted.len() - 1 && cum + sorted[idx].1 < target {
                cum += sorted[idx].1;
                idx += 1;
            }
            out.push(sorted[idx].0);
        }
        out
    }
}

/// Atomic measure of eigenphases on the circle, angles in (-pi, pi].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularMeasure {
    phases: Vec<(f64, f64)>,
}

impl AngularMeasure {
    pub fn new(phases: Vec<(f64, f64)>) -> Result<Self> {
        if phases.is_empty() {
            return Err(EikonalError::BadMeasure("no phases".into()));
        }
        let mut total = 0.0;
        for &(th, w) in &phases {
            if !th.is_finite() || !w.is_finite() {
                return Err(EikonalError::NonFinite("angular atom"));
            }
            if w <= 0.0 {
                return Err(EikonalError::BadMeasure(format!("weight {w} <= 0")));
            }
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(EikonalError::BadMeasure(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let phases = phases
            .into_iter()
            .map(|(th, w)| (wrap_angle(th), w))
            .collect();
        Ok(Self { phases })
    }

    pub fn delta(theta: f64) -> Self {
        Self {
            phases: vec![(wrap_angle(theta), 1.0)],
        }
    }

    pub fn phases(&self) -> &[(f64, f64)] {
        &self.phases
    }
}

/// Wraps an angle into (-pi, pi].
pub fn wrap_angle(theta: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut t = theta % two_pi;
    if t <= -std::f64::consts::PI {
        t += two_pi;
    } else if t > std::f64::consts::PI {
        t -= two_pi;
    }
    t
}
