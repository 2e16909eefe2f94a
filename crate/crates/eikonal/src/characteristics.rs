//! Characteristic solvers for the Hamilton-Jacobi / Burgers dynamics:
//! implicit Pastur-type resolvent equations, the quaternionic field from
//! non-Hermitian characteristics, generic RK4 Hamilton flow, and caustic
//! (spectral-edge) detection.

use serde::{Deserialize, Serialize};

use crate::ensemble::{
    hamiltonian_eval, hermitian_r, EnsembleSpec, PhasePoint, PhaseSpaceKind,
};
use crate::error::{EikonalError, Result};
use crate::measure::SpectralMeasure;
use crate::poly::{poly_add, poly_mul, poly_roots, poly_scale, Poly};
use crate::quaternion::{C64, Quaternion, QuaternionPair};

/// Quaternionic field evaluated at `(z, w -> 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSample {
    pub z: C64,
    /// Electric field g = p_z at w -> 0.
    pub g: C64,
    /// |p_w|^2 at w -> 0; zero outside the support.
    pub pw_sq: f64,
    pub inside_support: bool,
}

/// Time series of phase points under the Hamilton flow.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    /// Richardson half-step estimate of the final-state error.
    pub error_estimate: f64,
}

impl PhaseTrajectory {
    pub fn last(&self) -> &PhasePoint {
        self.states.last().expect("trajectory is never empty")
    }
}

// ---------------------------------------------------------------------------
// Pastur-type implicit resolvent
// ---------------------------------------------------------------------------

/// Builds the characteristic polynomial in `z0` for `z = z0 + t R(G0(z0))`
/// after clearing denominators. `D` is the product of `(z0 - x_i)` and `N`
/// the numerator of the atomic resolvent `G0 = N/D`.
fn characteristic_polynomial(
    initial: &SpectralMeasure,
    spec: &EnsembleSpec,
    z: C64,
    t: f64,
) -> Result<Poly> {
    let one = C64::new(1.0, 0.0);
    let mut d: Poly = vec![one];
    for &(x, _) in initial.atoms() {
        d = poly_mul(&d, &vec![-x, one]);
    }
    let mut n: Poly = vec![C64::new(0.0, 0.0)];
    for (i, &(_, wi)) in initial.atoms().iter().enumerate() {
        let mut term: Poly = vec![C64::new(wi, 0.0)];
        for (j, &(xj, _)) in initial.atoms().iter().enumerate() {
            if i != j {
                term = poly_mul(&term, &vec![-xj, one]);
            }
        }
        n = poly_add(&n, &term);
    }
    let z0_minus_z: Poly = vec![-z, one];
    match spec {
        // (z0 - z) D + t N = 0
        EnsembleSpec::Gue => Ok(poly_add(
            &poly_mul(&z0_minus_z, &d),
            &poly_scale(&n, C64::new(t, 0.0)),
        )),
        // R(g) = r/(1-g): (z0 - z)(D - N) + t r D = 0
        EnsembleSpec::Wishart { r } => {
            let d_minus_n = poly_add(&d, &poly_scale(&n, -one));
            Ok(poly_add(
                &poly_mul(&z0_minus_z, &d_minus_n),
                &poly_scale(&d, C64::new(t * r, 0.0)),
            ))
        }
        _ => Err(EikonalError::NonHermitianSpec),
    }
}

/// Newton refinement of a characteristic root on the analytic map
/// `f(z0) = z0 + t R(G0(z0)) - z`.
fn refine_root(
    initial: &SpectralMeasure,
    spec: &EnsembleSpec,
    z: C64,
    t: f64,
    mut z0: C64,
) -> Option<C64> {
    for _ in 0..60 {
        let g0 = initial.resolvent(z0);
        let (r, rp) = hermitian_r(spec, g0).ok()?;
        let f = z0 + t * r - z;
        if f.norm() < 1e-15 * (1.0 + z0.norm()) {
            return Some(z0);
        }
        let fp = C64::new(1.0, 0.0) + t * rp * initial.resolvent_deriv(z0);
        if fp.norm() < 1e-14 {
            return Some(z0);
        }
        let step = f / fp;
        z0 -= step;
        if step.norm() < 1e-15 * (1.0 + z0.norm()) {
            return Some(z0);
        }
    }
    Some(z0)
}

fn pastur_solve_inner(
    initial: &SpectralMeasure,
    spec: &EnsembleSpec,
    z: C64,
    t: f64,
    depth: usize,
) -> Result<C64> {
    if t == 0.0 {
        return Ok(initial.resolvent(z));
    }
    let poly = characteristic_polynomial(initial, spec, z, t)?;
    let roots = poly_roots(&poly)?;
    let sign = if z.im >= 0.0 { 1.0 } else { -1.0 };
    let mut candidates: Vec<(C64, C64)> = Vec::new();
    for root in roots {
        let Some(z0) = refine_root(initial, spec, z, t, root) else {
            continue;
        };
        let g = initial.resolvent(z0);
        // Residual of the implicit equation G = G0(z - t R(G)).
        let Ok((r, _)) = hermitian_r(spec, g) else { continue };
        let resid = (g - initial.resolvent(z - t * r)).norm();
        if resid > 1e-10 * (1.0 + g.norm()) {
            continue;
        }
        // Herglotz branch: sign(Im G) = -sign(Im z); the characteristic
        // origin stays on the same side as z.
        if g.im * sign < 0.0 && z0.im * sign > 0.0 {
            let dup = candidates.iter().any(|&(gc, _)| (gc - g).norm() < 1e-9);
            if !dup {
                candidates.push((g, z0));
            }
        }
    }
    match candidates.len() {
        0 => Err(EikonalError::BranchAmbiguity { z }),
        1 => Ok(candidates[0].0),
        _ => {
            // Tie at a shock: keep the root continuous with the evaluation
            // pushed away from the real axis by delta = 1e-9 per decade.
            if depth >= 4 {
                return Err(EikonalError::BranchAmbiguity { z });
            }
            let delta = 1e-9 * 10f64.powi(depth as i32);
            let shifted = z + C64::new(0.0, sign * delta);
            let g_ref = pastur_solve_inner(initial, spec, shifted, t, depth + 1)?;
            let best = candidates
                .iter()
                .min_by(|a, b| {
                    (a.0 - g_ref)
                        .norm()
                        .partial_cmp(&(b.0 - g_ref).norm())
                        .unwrap()
                })
                .unwrap();
            Ok(best.0)
        }
    }
}

/// Solves the implicit Pastur equation `G = G0(z - t R(G))` for Hermitian
/// additive specs, returning the Herglotz branch.
pub fn pastur_solve(
    initial: &SpectralMeasure,
    spec: &EnsembleSpec,
    z: C64,
    t: f64,
) -> Result<C64> {
    spec.validate()?;
    pastur_solve_inner(initial, spec, z, t, 0)
}

// ---------------------------------------------------------------------------
// Caustics / spectral edges
// ---------------------------------------------------------------------------

/// All real caustic locations `z = z0 + t R(G0(z0))` where `dz/dz0 = 0`,
/// sorted ascending. These are the support edges before characteristic
/// crossing.
pub fn caustic_edges(
    initial: &SpectralMeasure,
    spec: &EnsembleSpec,
    t: f64,
) -> Result<Vec<f64>> {
    spec.validate()?;
    let dz_dz0 = |z0: f64| -> Option<f64> {
        let zc = C64::new(z0, 0.0);
        let g0 = initial.resolvent(zc);
        let (_, rp) = hermitian_r(spec, g0).ok()?;
        let v = C64::new(1.0, 0.0) + t * rp * initial.resolvent_deriv(zc);
        if v.re.is_finite() {
            Some(v.re)
        } else {
            None
        }
    };
    let map_z = |z0: f64| -> Option<f64> {
        let zc = C64::new(z0, 0.0);
        let (r, _) = hermitian_r(spec, initial.resolvent(zc)).ok()?;
        let z = zc + t * r;
        Some(z.re)
    };

    let (lo, hi) = scan_range(initial, spec, t);
    let n = 40_000;
    let h = (hi - lo) / n as f64;
    let mut roots: Vec<f64> = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=n {
        let x = lo + k as f64 * h;
        // Skip atom neighborhoods where the map blows up.
        if initial
            .atoms()
            .iter()
            .any(|&(a, _)| (x - a.re).abs() < 1e-9)
        {
            prev = None;
            continue;
        }
        let Some(v) = dz_dz0(x) else {
            prev = None;
            continue;
        };
        if let Some((xp, vp)) = prev {
            if vp == 0.0 {
                roots.push(xp);
            } else if vp * v < 0.0 {
                if let Some(root) = bisect(&dz_dz0, xp, x) {
                    roots.push(root);
                }
            }
        }
        prev = Some((x, v));
    }
    let mut edges: Vec<f64> = roots.into_iter().filter_map(map_z).collect();
    edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(edges)
}

fn scan_range(initial: &SpectralMeasure, spec: &EnsembleSpec, t: f64) -> (f64, f64) {
    let xs: Vec<f64> = initial.atoms().iter().map(|&(a, _)| a.re).collect();
    let min = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = match spec {
        EnsembleSpec::Wishart { r } => 1.0 + r,
        _ => 1.0,
    };
    let margin = 3.0 * (1.0 + (t * scale).sqrt());
    (min - margin, max + margin)
}

fn bisect(f: &dyn Fn(f64) -> Option<f64>, mut a: f64, mut b: f64) -> Option<f64> {
    let mut fa = f(a)?;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 || (b - a) < 1e-14 * (1.0 + m.abs()) {
            return Some(m);
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    Some(0.5 * (a + b))
}

// ---------------------------------------------------------------------------
// Quaternionic field via characteristics
// ---------------------------------------------------------------------------

/// Generating sequence A(x) of the additive quaternionic spec.
fn a_of(spec: &EnsembleSpec, x: f64) -> f64 {
    match spec {
        EnsembleSpec::BiUnitary { a_coeffs } => {
            let mut acc = 0.0;
            let mut xp = 1.0;
            for &c in a_coeffs {
                acc += c * xp;
                xp *= x;
            }
            acc
        }
        _ => 1.0,
    }
}

fn tau_of(spec: &EnsembleSpec) -> f64 {
    match spec {
        EnsembleSpec::Elliptic { tau } => *tau,
        _ => 0.0,
    }
}

/// p_z at the initial point `(z0, |w0|^2 = s)` for an atomic measure.
fn p_z0(initial: &SpectralMeasure, z0: C64, s: f64) -> C64 {
    initial
        .atoms()
        .iter()
        .map(|&(x, wi)| {
            let d = z0 - x;
            wi * d.conj() / (d.norm_sqr() + s)
        })
        .sum()
}

/// sigma = sum_i w_i / (|z0 - x_i|^2 + s); p_w0 = w0 * sigma for real w0.
fn sigma0(initial: &SpectralMeasure, z0: C64, s: f64) -> f64 {
    initial
        .atoms()
        .iter()
        .map(|&(x, wi)| wi / ((z0 - x).norm_sqr() + s))
        .sum()
}

/// Solves the characteristic constraint system for the terminal point
/// `(z, w = 0)` of the additive quaternionic flow and returns the field
/// sample there. The phase of `w0` is gauged away (`w0` real, >= 0), leaving
/// three real unknowns `(Re z0, Im z0, s = w0^2)`.
pub fn quaternionic_field(
    initial: &SpectralMeasure,
    spec: &EnsembleSpec,
    z: C64,
    t: f64,
) -> Result<FieldSample> {
    spec.validate()?;
    if !matches!(
        spec,
        EnsembleSpec::Ginibre | EnsembleSpec::Elliptic { .. } | EnsembleSpec::BiUnitary { .. }
    ) {
        return Err(EikonalError::UnsupportedVariant("quaternionic_field"));
    }
    let tau = tau_of(spec);
    // Inside system:
    //   z = z0 + t tau p_z0           (z-characteristic, R_11 = tau G_11)
    //   0 = 1 - t sigma A(-s sigma^2) (w-characteristic with w0 divided out)
    let residual = |u: &[f64; 3]| -> [f64; 3] {
        let z0 = C64::new(u[0], u[1]);
        let s = u[2];
        let pz = p_z0(initial, z0, s);
        let sg = sigma0(initial, z0, s);
        let fz = z0 + t * tau * pz - z;
        [fz.re, fz.im, 1.0 - t * sg * a_of(spec, -s * sg * sg)]
    };
    let seeds: Vec<[f64; 3]> = vec![
        [z.re, z.im, t],
        [z.re, z.im, 0.5 * t],
        [z.re, z.im, 0.25 * t],
        [z.re * (1.0 - tau * 0.5), z.im * (1.0 + tau * 0.5), 0.75 * t],
    ];
    for seed in seeds {
        if let Some(u) = newton_nd(&residual, seed, 1e-13, 100) {
            if u[2] > 1e-12 {
                let z0 = C64::new(u[0], u[1]);
                let s = u[2];
                let sg = sigma0(initial, z0, s);
                return Ok(FieldSample {
                    z,
                    g: p_z0(initial, z0, s),
                    pw_sq: s * sg * sg,
                    inside_support: true,
                });
            }
        }
    }
    // Outside branch: w0 = 0, solve only the z-characteristic.
    let residual2 = |u: &[f64; 2]| -> [f64; 2] {
        let z0 = C64::new(u[0], u[1]);
        let fz = z0 + t * tau * p_z0(initial, z0, 0.0) - z;
        [fz.re, fz.im]
    };
    let out = if tau == 0.0 {
        Some([z.re, z.im])
    } else {
        newton_2d(&residual2, [z.re, z.im], 1e-13, 100)
    };
    match out {
        Some(u) => {
            let z0 = C64::new(u[0], u[1]);
            Ok(FieldSample {
                z,
                g: p_z0(initial, z0, 0.0),
                pw_sq: 0.0,
                inside_support: false,
            })
        }
        None => Err(EikonalError::NoConvergence { z }),
    }
}

fn newton_nd(
    f: &dyn Fn(&[f64; 3]) -> [f64; 3],
    mut u: [f64; 3],
    tol: f64,
    max_iter: usize,
) -> Option<[f64; 3]> {
    for _ in 0..max_iter {
        let r = f(&u);
        let norm = r.iter().map(|x| x.abs()).fold(0.0, f64::max);
        if !norm.is_finite() {
            return None;
        }
        if norm < tol {
            return Some(u);
        }
        // Numerical Jacobian, central differences.
        let mut jac = [[0.0f64; 3]; 3];
        for j in 0..3 {
            let h = 1e-7 * (1.0 + u[j].abs());
            let mut up = u;
            let mut um = u;
            up[j] += h;
            um[j] -= h;
            let rp = f(&up);
            let rm = f(&um);
            for i in 0..3 {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let step = solve3(&jac, &r)?;
        for j in 0..3 {
            u[j] -= step[j];
        }
        // Keep s = |w0|^2 in the physical half-space.
        if u[2] < 0.0 {
            u[2] = 0.0;
        }
    }
    let r = f(&u);
    if r.iter().map(|x| x.abs()).fold(0.0, f64::max) < tol * 100.0 {
        Some(u)
    } else {
        None
    }
}

fn newton_2d(
    f: &dyn Fn(&[f64; 2]) -> [f64; 2],
    mut u: [f64; 2],
    tol: f64,
    max_iter: usize,
) -> Option<[f64; 2]> {
    for _ in 0..max_iter {
        let r = f(&u);
        let norm = r[0].abs().max(r[1].abs());
        if !norm.is_finite() {
            return None;
        }
        if norm < tol {
            return Some(u);
        }
        let mut jac = [[0.0f64; 2]; 2];
        for j in 0..2 {
            let h = 1e-7 * (1.0 + u[j].abs());
            let mut up = u;
            let mut um = u;
            up[j] += h;
            um[j] -= h;
            let rp = f(&up);
            let rm = f(&um);
            for i in 0..2 {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
        if det.abs() < 1e-300 {
            return None;
        }
        let dx = (r[0] * jac[1][1] - r[1] * jac[0][1]) / det;
        let dy = (jac[0][0] * r[1] - jac[1][0] * r[0]) / det;
        u[0] -= dx;
        u[1] -= dy;
    }
    None
}

#[allow(clippy::needless_range_loop)] // in-place row elimination
fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    // Gaussian elimination with partial pivoting.
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()
        })?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for row in (col + 1)..3 {
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    let mut x = [0.0f64; 3];
    for i in (0..3).rev() {
        let mut acc = m[i][3];
        for k in (i + 1)..3 {
            acc -= m[i][k] * x[k];
        }
        x[i] = acc / m[i][i];
    }
    Some(x)
}

// ---------------------------------------------------------------------------
// Generic RK4 Hamilton flow
// ---------------------------------------------------------------------------

fn flatten(point: &PhasePoint) -> Vec<f64> {
    match point {
        PhasePoint::Scalar { z, p } => vec![z.re, z.im, p.re, p.im],
        PhasePoint::Quaternionic(pair) => vec![
            pair.q.z.re, pair.q.z.im, pair.q.w.re, pair.q.w.im,
            pair.g.z.re, pair.g.z.im, pair.g.w.re, pair.g.w.im,
        ],
        PhasePoint::Radial { z, p, r, p_r } => vec![z.re, z.im, p.re, p.im, *r, *p_r],
        PhasePoint::Bridge { z, p, alpha, p_alpha } => vec![
            z.re, z.im, p.re, p.im, alpha.re, alpha.im, p_alpha.re, p_alpha.im,
        ],
    }
}

fn unflatten(template: &PhasePoint, v: &[f64]) -> PhasePoint {
    match template {
        PhasePoint::Scalar { .. } => PhasePoint::Scalar {
            z: C64::new(v[0], v[1]),
            p: C64::new(v[2], v[3]),
        },
        PhasePoint::Quaternionic(_) => PhasePoint::Quaternionic(QuaternionPair::new(
            Quaternion::raw(C64::new(v[0], v[1]), C64::new(v[2], v[3])),
            Quaternion::raw(C64::new(v[4], v[5]), C64::new(v[6], v[7])),
        )),
        PhasePoint::Radial { .. } => PhasePoint::Radial {
            z: C64::new(v[0], v[1]),
            p: C64::new(v[2], v[3]),
            r: v[4],
            p_r: v[5],
        },
        PhasePoint::Bridge { .. } => PhasePoint::Bridge {
            z: C64::new(v[0], v[1]),
            p: C64::new(v[2], v[3]),
            alpha: C64::new(v[4], v[5]),
            p_alpha: C64::new(v[6], v[7]),
        },
    }
}

/// Hamilton vector field for the variant at a phase point.
fn derivative(spec: &EnsembleSpec, point: &PhasePoint, t: f64) -> Result<Vec<f64>> {
    let h = hamiltonian_eval(spec, point, t)?;
    match point {
        PhasePoint::Scalar { .. } => {
            let dz = h.grad_p[0];
            let dp = -h.grad_q[0];
            Ok(vec![dz.re, dz.im, dp.re, dp.im])
        }
        PhasePoint::Quaternionic(_) => {
            // Q11-dot = dH/dG11, Q21-dot = w-dot = dH/dG12; G is conserved
            // for the additive variants (grad_q = 0).
            let dz = h.grad_p[0];
            let dw = h.grad_p[1];
            Ok(vec![dz.re, dz.im, dw.re, dw.im, 0.0, 0.0, 0.0, 0.0])
        }
        PhasePoint::Radial { .. } => {
            let dz = h.grad_p[0];
            let dp = -h.grad_q[0];
            let dr = h.grad_p[2].re;
            let dpr = -h.grad_q[2].re;
            Ok(vec![dz.re, dz.im, dp.re, dp.im, dr, dpr])
        }
        PhasePoint::Bridge { .. } => {
            let dz = h.grad_p[0];
            let dalpha = h.grad_p[1];
            let dp = -h.grad_q[0];
            let dpa = -h.grad_q[1];
            Ok(vec![
                dz.re, dz.im, dp.re, dp.im, dalpha.re, dalpha.im, dpa.re, dpa.im,
            ])
        }
    }
}

fn rk4_step(
    spec: &EnsembleSpec,
    template: &PhasePoint,
    y: &[f64],
    t: f64,
    h: f64,
) -> Result<Vec<f64>> {
    let f = |t: f64, y: &[f64]| -> Result<Vec<f64>> {
        derivative(spec, &unflatten(template, y), t)
    };
    let k1 = f(t, y)?;
    let y2: Vec<f64> = y.iter().zip(&k1).map(|(a, k)| a + 0.5 * h * k).collect();
    let k2 = f(t + 0.5 * h, &y2)?;
    let y3: Vec<f64> = y.iter().zip(&k2).map(|(a, k)| a + 0.5 * h * k).collect();
    let k3 = f(t + 0.5 * h, &y3)?;
    let y4: Vec<f64> = y.iter().zip(&k3).map(|(a, k)| a + h * k).collect();
    let k4 = f(t + h, &y4)?;
    Ok(y
        .iter()
        .enumerate()
        .map(|(i, a)| a + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect())
}

fn integrate_raw(
    spec: &EnsembleSpec,
    state0: &PhasePoint,
    t_span: (f64, f64),
    step: f64,
) -> Result<(Vec<f64>, Vec<PhasePoint>, Vec<f64>)> {
    let (t0, t1) = t_span;
    let span = t1 - t0;
    let n = (span.abs() / step).ceil().max(1.0) as usize;
    if n > 100_000_000 {
        return Err(EikonalError::StepUnderflow);
    }
    let h = span / n as f64;
    let mut times = Vec::with_capacity(n + 1);
    let mut states = Vec::with_capacity(n + 1);
    let mut y = flatten(state0);
    times.push(t0);
    states.push(*state0);
    for k in 0..n {
        let t = t0 + k as f64 * h;
        y = rk4_step(spec, state0, &y, t, h)?;
        times.push(t0 + (k + 1) as f64 * h);
        states.push(unflatten(state0, &y));
    }
    Ok((times, states, y))
}

/// Fixed-step RK4 integration of the Hamilton flow, with one Richardson
/// half-step error estimate on the final state.
pub fn integrate_hamilton(
    spec: &EnsembleSpec,
    state0: &PhasePoint,
    t_span: (f64, f64),
    step: f64,
) -> Result<PhaseTrajectory> {
    spec.validate()?;
    if !step.is_finite() || step <= 0.0 {
        return Err(EikonalError::StepUnderflow);
    }
    check_state_kind(spec, state0)?;
    let (times, states, y_final) = integrate_raw(spec, state0, t_span, step)?;
    let (_, _, y_half) = integrate_raw(spec, state0, t_span, step * 0.5)?;
    let error_estimate = y_final
        .iter()
        .zip(&y_half)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / 15.0;
    Ok(PhaseTrajectory {
        times,
        states,
        error_estimate,
    })
}

fn check_state_kind(spec: &EnsembleSpec, state: &PhasePoint) -> Result<()> {
    let ok = match (spec.phase_space(), state) {
        (PhaseSpaceKind::HolomorphicScalar, PhasePoint::Scalar { .. }) => true,
        (PhaseSpaceKind::Angular, PhasePoint::Scalar { .. }) => true,
        (PhaseSpaceKind::Quaternionic, PhasePoint::Quaternionic(_)) => true,
        (PhaseSpaceKind::Quaternionic, PhasePoint::Radial { .. }) => {
            matches!(spec, EnsembleSpec::KempHall)
        }
        (PhaseSpaceKind::Bridge, PhasePoint::Bridge { .. }) => true,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(EikonalError::UnsupportedVariant("phase point kind"))
    }
}
