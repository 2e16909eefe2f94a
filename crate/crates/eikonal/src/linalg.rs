//! Thin dense linear-algebra layer over faer for the Monte-Carlo side.

use faer::Mat;
use faer::linalg::solvers::Solve;
use num_complex::Complex64;

use crate::error::{EikonalError, Result};

pub type CMat = Mat<Complex64>;

/// Eigenvalues of a general complex matrix.
pub fn eigvals(m: &CMat) -> Result<Vec<Complex64>> {
    m.eigenvalues()
        .map_err(|e| EikonalError::EigFailure(format!("{e:?}")))
}

/// Eigenvalues and right eigenvectors (columns of the returned matrix) of a
/// general complex matrix.
pub fn eig(m: &CMat) -> Result<(Vec<Complex64>, CMat)> {
    let d = m
        .eigen()
        .map_err(|e| EikonalError::EigFailure(format!("{e:?}")))?;
    let n = m.nrows();
    let vals: Vec<Complex64> = (0..n).map(|i| d.S()[i]).collect();
    let vecs = d.U().to_owned();
    Ok((vals, vecs))
}

/// Real eigenvalues and orthonormal eigenvectors of a Hermitian matrix (the
/// lower triangle is read).
pub fn eigh(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let d = m
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| EikonalError::EigFailure(format!("{e:?}")))?;
    let n = m.nrows();
    let vals: Vec<f64> = (0..n).map(|i| d.S()[i].re).collect();
    let vecs = d.U().to_owned();
    Ok((vals, vecs))
}

/// Matrix inverse via partial-pivot LU.
pub fn inverse(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(EikonalError::BadDimension(n));
    }
    let lu = m.partial_piv_lu();
    let mut out = CMat::identity(n, n);
    lu.solve_in_place(&mut out);
    if (0..n).any(|i| (0..n).any(|j| !out[(i, j)].re.is_finite() || !out[(i, j)].im.is_finite())) {
        return Err(EikonalError::SingularQuaternion);
    }
    Ok(out)
}

/// Max-column-sum (1-norm) of a complex matrix.
pub fn norm_1(m: &CMat) -> f64 {
    (0..m.ncols())
        .map(|j| (0..m.nrows()).map(|i| m[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// 1-norm condition estimate `||M||_1 ||M^-1||_1`.
pub fn cond_1(m: &CMat, m_inv: &CMat) -> f64 {
    norm_1(m) * norm_1(m_inv)
}

/// `A * B` for dense complex matrices.
pub fn matmul(a: &CMat, b: &CMat) -> CMat {
    a * b
}

/// Conjugate transpose.
pub fn adjoint(m: &CMat) -> CMat {
    m.adjoint().to_owned()
}

/// Matrix exponential by scaling-and-squaring: the argument is scaled by a
/// power of two until its 1-norm is below 1/2, expanded in a Taylor series to
/// machine precision, then repeatedly squared.
pub fn expm(m: &CMat) -> Result<CMat> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(EikonalError::BadDimension(n));
    }
    let norm = norm_1(m);
    if !norm.is_finite() {
        return Err(EikonalError::NonFinite("expm input"));
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = (0.5f64).powi(squarings as i32);
    let a: CMat = CMat::from_fn(n, n, |i, j| m[(i, j)] * scale);
    let mut result = CMat::identity(n, n);
    let mut term = CMat::identity(n, n);
    for k in 1..=24u32 {
        let prod = &term * &a;
        term = CMat::from_fn(n, n, |i, j| prod[(i, j)] / k as f64);
        result += &term;
        if norm_1(&term) < 1e-17 {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Builds a matrix from an entry closure.
pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> Complex64) -> CMat {
    CMat::from_fn(nrows, ncols, f)
}
