//! Dense complex polynomials and companion-matrix root finding.
//!
//! Coefficients are stored low-to-high: `c[0] + c[1] z + ... + c[n] z^n`.

use num_complex::Complex64;

use crate::error::{EikonalError, Result};

pub type Poly = Vec<Complex64>;

pub fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, &c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] += c;
    }
    out
}

pub fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ca) in a.iter().enumerate() {
        for (j, &cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

pub fn poly_scale(a: &Poly, s: Complex64) -> Poly {
    a.iter().map(|&c| c * s).collect()
}

pub fn poly_eval(a: &Poly, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in a.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// All complex roots via eigenvalues of the companion matrix.
///
/// Leading coefficients below `1e-12` of the largest magnitude are treated as
/// zero (degree deflation).
pub fn poly_roots(coeffs: &Poly) -> Result<Vec<Complex64>> {
    let max_mag = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    if max_mag == 0.0 {
        return Err(EikonalError::BadMeasure("zero polynomial".into()));
    }
    let mut deg = coeffs.len() - 1;
    while deg > 0 && coeffs[deg].norm() < 1e-12 * max_mag {
        deg -= 1;
    }
    if deg == 0 {
        return Ok(vec![]);
    }
    let lead = coeffs[deg];
    let n = deg;
    let mut companion = faer::Mat::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        companion[(i, n - 1)] = -coeffs[i] / lead;
    }
    companion
        .eigenvalues()
        .map_err(|e| EikonalError::EigFailure(format!("{e:?}")))
}
