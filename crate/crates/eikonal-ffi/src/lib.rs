//! C ABI for the eikonal spectral-dynamics library.
//!
//! Conventions:
//! - Every function returns an [`EikStatus`] code; `EIK_OK` (0) means success.
//! - Models are opaque handles created from JSON specs and released with
//!   `eik_model_free`. Handles are not thread-safe; use one per thread.
//! - Output buffers are caller-allocated; sizes are documented per function.
//! - On failure, a human-readable message is available from
//!   `eik_last_error_message` (thread-local, overwritten by the next call).

// Pointer/size contracts are documented per function and in the crate-level
// conventions above; the functions are unsafe C entry points by design.
#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use eikonal::characteristics::pastur_solve;
use eikonal::ensemble::EnsembleSpec;
use eikonal::error::EikonalError;
use eikonal::hciz::{bridge_density_field, euler_match_velocity, HCIZProblem};
use eikonal::measure::{AngularMeasure, SpectralMeasure};
use eikonal::spectra::{density_1d, density_2d, overlap_correlator, sample_field_grid};
use eikonal::unitary::unitary_density;
use eikonal::validate::{run_case, CaseParams};
use num_complex::Complex64;

/// Status codes returned by every API function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EikStatus {
    /// Success.
    EikOk = 0,
    /// Invalid configuration or argument value.
    EikErrConfig = 1,
    /// Numerical failure (no convergence, degenerate input, ...).
    EikErrNumeric = 2,
    /// A required pointer argument was null.
    EikErrNullPointer = 3,
    /// A string argument was not valid UTF-8 / JSON.
    EikErrParse = 4,
    /// An output buffer was too small.
    EikErrBufferTooSmall = 5,
    /// A validation case ran but one of its checks failed.
    EikErrValidationFailed = 6,
    /// Internal panic; state may be inconsistent.
    EikErrInternal = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

fn status_of(err: &EikonalError) -> EikStatus {
    match err {
        EikonalError::Config { .. } => EikStatus::EikErrConfig,
        _ => EikStatus::EikErrNumeric,
    }
}

fn fail(err: EikonalError) -> EikStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

/// Runs `f` with panics converted to `EikErrInternal`.
fn guarded(f: impl FnOnce() -> EikStatus) -> EikStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic");
            EikStatus::EikErrInternal
        }
    }
}

unsafe fn parse_json<'a, T: serde::Deserialize<'a>>(
    ptr: *const c_char,
    what: &str,
) -> Result<T, EikStatus> {
    if ptr.is_null() {
        set_error(format!("{what}: null pointer"));
        return Err(EikStatus::EikErrNullPointer);
    }
    let s = CStr::from_ptr(ptr).to_str().map_err(|e| {
        set_error(format!("{what}: invalid UTF-8: {e}"));
        EikStatus::EikErrParse
    })?;
    serde_json::from_str(s).map_err(|e| {
        set_error(format!("{what}: {e}"));
        EikStatus::EikErrParse
    })
}

unsafe fn out_slice<'a, T>(ptr: *mut T, len: usize, what: &str) -> Result<&'a mut [T], EikStatus> {
    if ptr.is_null() {
        set_error(format!("{what}: null pointer"));
        return Err(EikStatus::EikErrNullPointer);
    }
    Ok(std::slice::from_raw_parts_mut(ptr, len))
}

/// Opaque model handle: an ensemble spec plus an initial spectral measure.
pub struct EikModel {
    spec: EnsembleSpec,
    initial: SpectralMeasure,
}

/// Copies the last error message for the calling thread into `buf`
/// (NUL-terminated, truncated to `cap` bytes). Returns the full message
/// length in bytes, excluding the terminator. `buf` may be null to query
/// the length.
#[no_mangle]
pub unsafe extern "C" fn eik_last_error_message(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Creates a model from an ensemble spec and an initial measure, both JSON.
/// `ensemble_json` example: `{"variant":"elliptic","params":{"tau":0.5}}`.
/// `initial_json` example: `{"atoms":[[[0.0,0.0],1.0]]}`; pass null for a
/// unit mass at the origin. The handle must be released with
/// `eik_model_free`.
#[no_mangle]
pub unsafe extern "C" fn eik_model_new(
    ensemble_json: *const c_char,
    initial_json: *const c_char,
    out_model: *mut *mut EikModel,
) -> EikStatus {
    guarded(|| {
        if out_model.is_null() {
            set_error("out_model: null pointer");
            return EikStatus::EikErrNullPointer;
        }
        let spec: EnsembleSpec = match parse_json(ensemble_json, "ensemble_json") {
            Ok(v) => v,
            Err(code) => return code,
        };
        if let Err(e) = spec.validate() {
            return fail(e);
        }
        let initial: SpectralMeasure = if initial_json.is_null() {
            SpectralMeasure::delta(Complex64::new(0.0, 0.0))
        } else {
            match parse_json(initial_json, "initial_json") {
                Ok(v) => v,
                Err(code) => return code,
            }
        };
        *out_model = Box::into_raw(Box::new(EikModel { spec, initial }));
        EikStatus::EikOk
    })
}

/// Releases a model handle. Passing null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn eik_model_free(model: *mut EikModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Spectral density at time `t` on `n` real points `x`, evaluated at
/// imaginary offset `epsilon`. Writes `n` values to `out_rho`.
#[no_mangle]
pub unsafe extern "C" fn eik_density(
    model: *const EikModel,
    t: f64,
    x: *const f64,
    n: usize,
    epsilon: f64,
    out_rho: *mut f64,
) -> EikStatus {
    guarded(|| {
        if model.is_null() || x.is_null() {
            set_error("model/x: null pointer");
            return EikStatus::EikErrNullPointer;
        }
        let m = &*model;
        let grid = std::slice::from_raw_parts(x, n);
        let out = match out_slice(out_rho, n, "out_rho") {
            Ok(v) => v,
            Err(code) => return code,
        };
        match density_1d(|z| pastur_solve(&m.initial, &m.spec, z, t), grid, epsilon) {
            Ok(d) => {
                out.copy_from_slice(&d.rho);
                EikStatus::EikOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Two-dimensional spectral density at time `t` on the uniform grid with
/// origin `(x0, y0)`, spacing `h`, and `nx * ny` points. The derivative
/// stencil drops the boundary ring: exactly `(nx-2) * (ny-2)` values are
/// written to `out_rho`, row-major from `(x0+h, y0+h)`.
#[no_mangle]
pub unsafe extern "C" fn eik_density_2d(
    model: *const EikModel,
    t: f64,
    x0: f64,
    y0: f64,
    h: f64,
    nx: usize,
    ny: usize,
    out_rho: *mut f64,
) -> EikStatus {
    guarded(|| {
        if model.is_null() {
            set_error("model: null pointer");
            return EikStatus::EikErrNullPointer;
        }
        if nx < 3 || ny < 3 {
            set_error("nx/ny: 2D density needs at least a 3x3 grid");
            return EikStatus::EikErrConfig;
        }
        let m = &*model;
        let out = match out_slice(out_rho, (nx - 2) * (ny - 2), "out_rho") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let field = match sample_field_grid(&m.initial, &m.spec, x0, y0, h, nx, ny, t) {
            Ok(f) => f,
            Err(e) => return fail(e),
        };
        match density_2d(&field) {
            Ok(d) => {
                out.copy_from_slice(&d.values);
                EikStatus::EikOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Diagonal eigenvector-overlap correlator at time `t` on the uniform grid
/// with origin `(x0, y0)`, spacing `h`, and `nx * ny` points. Writes
/// `nx * ny` values to `out_overlap` (zero outside the spectral support).
#[no_mangle]
pub unsafe extern "C" fn eik_overlap(
    model: *const EikModel,
    t: f64,
    x0: f64,
    y0: f64,
    h: f64,
    nx: usize,
    ny: usize,
    out_overlap: *mut f64,
) -> EikStatus {
    guarded(|| {
        if model.is_null() {
            set_error("model: null pointer");
            return EikStatus::EikErrNullPointer;
        }
        let m = &*model;
        let out = match out_slice(out_overlap, nx * ny, "out_overlap") {
            Ok(v) => v,
            Err(code) => return code,
        };
        match sample_field_grid(&m.initial, &m.spec, x0, y0, h, nx, ny, t) {
            Ok(field) => {
                out.copy_from_slice(&overlap_correlator(&field).values);
                EikStatus::EikOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Eigenphase density and angular resolvent of the unitary diffusion at
/// time `t`. The initial condition is `n_atoms` phase/weight pairs. Writes
/// `n` densities to `out_rho` and, when non-null, `n` resolvent components
/// to `out_j_re` / `out_j_im`.
#[no_mangle]
pub unsafe extern "C" fn eik_unitary_density(
    phases: *const f64,
    weights: *const f64,
    n_atoms: usize,
    t: f64,
    theta: *const f64,
    n: usize,
    epsilon: f64,
    out_rho: *mut f64,
    out_j_re: *mut f64,
    out_j_im: *mut f64,
) -> EikStatus {
    guarded(|| {
        if phases.is_null() || weights.is_null() || theta.is_null() {
            set_error("phases/weights/theta: null pointer");
            return EikStatus::EikErrNullPointer;
        }
        let atoms: Vec<(f64, f64)> = std::slice::from_raw_parts(phases, n_atoms)
            .iter()
            .zip(std::slice::from_raw_parts(weights, n_atoms))
            .map(|(&p, &w)| (p, w))
            .collect();
        let measure = match AngularMeasure::new(atoms) {
            Ok(m) => m,
            Err(e) => return fail(e),
        };
        let grid = std::slice::from_raw_parts(theta, n);
        let out = match out_slice(out_rho, n, "out_rho") {
            Ok(v) => v,
            Err(code) => return code,
        };
        match unitary_density(&measure, grid, t, epsilon) {
            Ok(field) => {
                out.copy_from_slice(&field.rho);
                if !out_j_re.is_null() {
                    for (dst, j) in
                        std::slice::from_raw_parts_mut(out_j_re, n).iter_mut().zip(&field.j)
                    {
                        *dst = j.re;
                    }
                }
                if !out_j_im.is_null() {
                    for (dst, j) in
                        std::slice::from_raw_parts_mut(out_j_im, n).iter_mut().zip(&field.j)
                    {
                        *dst = j.im;
                    }
                }
                EikStatus::EikOk
            }
            Err(e) => fail(e),
        }
    })
}

/// Density and velocity fields of the matrix Brownian bridge described by
/// `problem_json` (`{"atoms_a":[[x,w],...],"atoms_b":[...],"beta":2.0}`),
/// on `nx` spatial points `x` and `nt` interior times `t` in (0,1). Writes
/// `nt * nx` values to each of `out_rho` and `out_mu`, time-major.
#[no_mangle]
pub unsafe extern "C" fn eik_bridge_fields(
    problem_json: *const c_char,
    x: *const f64,
    nx: usize,
    t: *const f64,
    nt: usize,
    epsilon: f64,
    out_rho: *mut f64,
    out_mu: *mut f64,
) -> EikStatus {
    guarded(|| {
        let problem: HCIZProblem = match parse_json(problem_json, "problem_json") {
            Ok(v) => v,
            Err(code) => return code,
        };
        if x.is_null() || t.is_null() {
            set_error("x/t: null pointer");
            return EikStatus::EikErrNullPointer;
        }
        let x_grid = std::slice::from_raw_parts(x, nx);
        let t_grid = std::slice::from_raw_parts(t, nt);
        let rho_out = match out_slice(out_rho, nt * nx, "out_rho") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let mu_out = match out_slice(out_mu, nt * nx, "out_mu") {
            Ok(v) => v,
            Err(code) => return code,
        };
        let field = match bridge_density_field(&problem, x_grid, t_grid, epsilon)
            .and_then(|f| euler_match_velocity(&f))
        {
            Ok(f) => f,
            Err(e) => return fail(e),
        };
        for ti in 0..nt {
            rho_out[ti * nx..(ti + 1) * nx].copy_from_slice(&field.rho[ti]);
            mu_out[ti * nx..(ti + 1) * nx].copy_from_slice(&field.mu[ti]);
        }
        EikStatus::EikOk
    })
}

/// Pooled finite-N spectral statistics of `seeds` independent replicas
/// drawn with the given master seed: eigenvalues for Hermitian ensembles,
/// eigenphases for unitary ones, moduli for general ones. Writes up to
/// `cap` values into `out_values` and stores the total count in `out_len`;
/// returns `EikErrBufferTooSmall` when `cap` is insufficient (with
/// `out_len` set to the required size).
#[no_mangle]
pub unsafe extern "C" fn eik_mc_spectrum(
    ensemble_json: *const c_char,
    n: usize,
    seeds: usize,
    variance: f64,
    seed: u64,
    out_values: *mut f64,
    cap: usize,
    out_len: *mut usize,
) -> EikStatus {
    guarded(|| {
        let spec: EnsembleSpec = match parse_json(ensemble_json, "ensemble_json") {
            Ok(v) => v,
            Err(code) => return code,
        };
        if out_len.is_null() {
            set_error("out_len: null pointer");
            return EikStatus::EikErrNullPointer;
        }
        let vals = match eikonal::mc::pooled_spectrum(&spec, n, variance, seed, seeds) {
            Ok(v) => v,
            Err(e) => return fail(e),
        };
        *out_len = vals.len();
        if vals.len() > cap {
            set_error(format!("output capacity {cap} < required {}", vals.len()));
            return EikStatus::EikErrBufferTooSmall;
        }
        let out = match out_slice(out_values, vals.len(), "out_values") {
            Ok(v) => v,
            Err(code) => return code,
        };
        out.copy_from_slice(&vals);
        EikStatus::EikOk
    })
}

/// Runs a named validation case (see the library's validation suite for
/// case names). `n`/`seeds` of 0 select the case defaults. Returns `EikOk`
/// when every check passes and `EikErrValidationFailed` otherwise; the JSON
/// report is available through `eik_last_error_message` on failure.
#[no_mangle]
pub unsafe extern "C" fn eik_validate_case(
    case_name: *const c_char,
    n: usize,
    seeds: usize,
    seed: u64,
) -> EikStatus {
    guarded(|| {
        if case_name.is_null() {
            set_error("case_name: null pointer");
            return EikStatus::EikErrNullPointer;
        }
        let name = match CStr::from_ptr(case_name).to_str() {
            Ok(s) => s,
            Err(e) => {
                set_error(format!("case_name: invalid UTF-8: {e}"));
                return EikStatus::EikErrParse;
            }
        };
        let params = CaseParams {
            n: (n > 0).then_some(n),
            seeds: (seeds > 0).then_some(seeds),
            seed,
        };
        match run_case(name, &params) {
            Ok(report) if report.passed => EikStatus::EikOk,
            Ok(report) => {
                set_error(serde_json::to_string(&report).unwrap_or_default());
                EikStatus::EikErrValidationFailed
            }
            Err(e) => fail(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    #[test]
    fn model_density_roundtrip() {
        let ens = CString::new(r#"{"variant":"gue"}"#).unwrap();
        let mut model: *mut EikModel = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                eik_model_new(ens.as_ptr(), std::ptr::null(), &mut model),
                EikStatus::EikOk
            );
            let x = [0.0f64];
            let mut rho = [0.0f64];
            assert_eq!(
                eik_density(model, 1.0, x.as_ptr(), 1, 1e-9, rho.as_mut_ptr()),
                EikStatus::EikOk
            );
            assert!((rho[0] - 1.0 / std::f64::consts::PI).abs() < 1e-8);
            eik_model_free(model);
        }
    }

    #[test]
    fn bad_json_sets_message() {
        let ens = CString::new("{nope").unwrap();
        let mut model: *mut EikModel = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                eik_model_new(ens.as_ptr(), std::ptr::null(), &mut model),
                EikStatus::EikErrParse
            );
            let mut buf = [0i8; 256];
            let len = eik_last_error_message(buf.as_mut_ptr(), buf.len());
            assert!(len > 0);
        }
    }

    #[test]
    fn overlap_matches_closed_form() {
        let ens = CString::new(r#"{"variant":"ginibre"}"#).unwrap();
        let mut model: *mut EikModel = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                eik_model_new(ens.as_ptr(), std::ptr::null(), &mut model),
                EikStatus::EikOk
            );
            // single grid point at z = 0.5, t = 1: O = (t - |z|^2) / (pi t^2)
            let mut o = [0.0f64];
            assert_eq!(
                eik_overlap(model, 1.0, 0.5, 0.0, 0.1, 1, 1, o.as_mut_ptr()),
                EikStatus::EikOk
            );
            let expect = (1.0 - 0.25) / std::f64::consts::PI;
            assert!((o[0] - expect).abs() < 1e-6, "got {}", o[0]);
            eik_model_free(model);
        }
    }

    #[test]
    fn validate_case_runs() {
        let name = CString::new("semicircle").unwrap();
        unsafe {
            assert_eq!(eik_validate_case(name.as_ptr(), 0, 0, 1), EikStatus::EikOk);
        }
    }

    #[test]
    fn mc_spectrum_capacity_contract() {
        let ens = CString::new(r#"{"variant":"gue"}"#).unwrap();
        let mut len = 0usize;
        unsafe {
            // cap 0 reports the required size
            let code = eik_mc_spectrum(
                ens.as_ptr(),
                16,
                2,
                1.0,
                7,
                std::ptr::null_mut(),
                0,
                &mut len,
            );
            assert_eq!(code, EikStatus::EikErrBufferTooSmall);
            assert_eq!(len, 32);
            let mut vals = vec![0.0f64; len];
            assert_eq!(
                eik_mc_spectrum(ens.as_ptr(), 16, 2, 1.0, 7, vals.as_mut_ptr(), len, &mut len),
                EikStatus::EikOk
            );
            assert!(vals.iter().all(|v| v.is_finite()));
        }
    }
}
