//! Named validation cases bundling the acceptance checks behind a single
//! entry point, so the CLI (`rmt validate --case ...`) and the test suite run
//! the same code.

use num_complex::Complex64;
use serde::Serialize;

use crate::characteristics::{caustic_edges, integrate_hamilton, pastur_solve, quaternionic_field};
use crate::ensemble::{hermitian_r, EnsembleSpec, PhasePoint};
use crate::error::{EikonalError, Result};
use crate::hciz::{
    action_evaluate, action_time_slice, bridge_density_field, bridge_resolvent,
    euler_match_velocity, h_burgers_residual, HCIZProblem,
};
use crate::linalg;
use crate::mc;
use crate::measure::{AngularMeasure, SpectralMeasure};
use crate::quaternion::{Quaternion, QuaternionPair, C64};
use crate::spectra::{density_1d, support_boundary};
use crate::unitary::{gap_closing_time, unitary_density, unitary_density_zplane};

/// One tolerance check inside a case: `value` must stay below `threshold`.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub label: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    fn below(label: &str, value: f64, threshold: f64) -> Self {
        Check {
            label: label.to_string(),
            value,
            threshold,
            passed: value.is_finite() && value < threshold,
        }
    }
}

/// Result of one named validation case. `runtime_ms` is informational and is
/// excluded from serialized artifacts so reruns are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub schema: &'static str,
    pub case: String,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip)]
    pub runtime_ms: u128,
}

/// Optional knobs for the Monte-Carlo cases.
#[derive(Debug, Clone, Copy)]
pub struct CaseParams {
    pub n: Option<usize>,
    pub seeds: Option<usize>,
    pub seed: u64,
}

impl Default for CaseParams {
    fn default() -> Self {
        CaseParams {
            n: None,
            seeds: None,
            seed: 0x5eed_0001,
        }
    }
}

pub const CASE_NAMES: &[&str] = &[
    "semicircle",
    "pastur-residual",
    "ginibre-field",
    "ginibre-mc",
    "ginibre-overlap",
    "elliptic-axes",
    "elliptic-invariants",
    "unitary-flow",
    "unitary-mc",
    "sv-duality",
    "hciz-zero",
    "bridge-endpoints",
    "determinism",
];

/// Runs one named case.
pub fn run_case(name: &str, params: &CaseParams) -> Result<CaseReport> {
    let start = std::time::Instant::now();
    let mut checks = match name {
        "semicircle" => case_semicircle()?,
        "pastur-residual" => case_pastur_residual()?,
        "ginibre-field" => case_ginibre_field()?,
        "ginibre-mc" => case_ginibre_mc(params)?,
        "ginibre-overlap" => case_ginibre_overlap(params)?,
        "elliptic-axes" => case_elliptic_axes(params)?,
        "elliptic-invariants" => case_elliptic_invariants()?,
        "unitary-flow" => case_unitary_flow()?,
        "unitary-mc" => case_unitary_mc(params)?,
        "sv-duality" => case_sv_duality()?,
        "hciz-zero" => case_hciz_zero()?,
        "bridge-endpoints" => case_bridge_endpoints()?,
        "determinism" => case_determinism(params)?,
        _ => {
            return Err(EikonalError::Config {
                field: "case".into(),
                message: format!("unknown case {name:?}; known: {CASE_NAMES:?}"),
            })
        }
    };
    let runtime_ms = start.elapsed().as_millis();
    if let Some(budget) = runtime_budget_s(name) {
        checks.push(Check::below(
            "runtime_s",
            runtime_ms as f64 / 1000.0,
            budget,
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(CaseReport {
        schema: "1",
        case: name.to_string(),
        checks,
        passed,
        runtime_ms,
    })
}

fn runtime_budget_s(name: &str) -> Option<f64> {
    match name {
        "semicircle" => Some(5.0),
        "pastur-residual" => Some(10.0),
        "ginibre-field" | "ginibre-mc" | "ginibre-overlap" => Some(180.0),
        "elliptic-axes" | "elliptic-invariants" => Some(180.0),
        "unitary-flow" | "unitary-mc" => Some(300.0),
        "hciz-zero" => Some(120.0),
        _ => None,
    }
}

fn lin_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Small deterministic generator for scattering test points.
struct Lcg(u64);
impl Lcg {
    fn next_f64(&mut self) -> f64 {
        self.0 = self
            .0
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
    fn in_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }
}

// ---------------------------------------------------------------------------
// 1. semicircle
// ---------------------------------------------------------------------------

fn case_semicircle() -> Result<Vec<Check>> {
    let initial = SpectralMeasure::delta(C64::new(0.0, 0.0));
    let mut checks = Vec::new();
    for &t in &[0.25f64, 1.0, 4.0] {
        let r = 2.0 * t.sqrt();
        let grid = lin_grid(-1.1 * r, 1.1 * r, 601);
        let dens = density_1d(
            |z| pastur_solve(&initial, &EnsembleSpec::Gue, z, t),
            &grid,
            1e-6,
        )?;
        let mut linf = 0.0f64;
        for (&x, &rho) in grid.iter().zip(&dens.rho) {
            if x.abs() <= 0.9 * r {
                let exact = (4.0 * t - x * x).sqrt() / (2.0 * std::f64::consts::PI * t);
                linf = linf.max((rho - exact).abs());
            }
        }
        checks.push(Check::below(&format!("density_linf_t{t}"), linf, 1e-6));
        let edges = caustic_edges(&initial, &EnsembleSpec::Gue, t)?;
        let edge_err = if edges.len() == 2 {
            (edges[0] + r).abs().max((edges[1] - r).abs())
        } else {
            f64::INFINITY
        };
        checks.push(Check::below(&format!("edge_err_t{t}"), edge_err, 1e-8));
    }
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 2. pastur-residual
// ---------------------------------------------------------------------------

fn pastur_residual(initial: &SpectralMeasure, spec: &EnsembleSpec, z: C64, t: f64) -> Result<f64> {
    let g = pastur_solve(initial, spec, z, t)?;
    let (r, _) = hermitian_r(spec, g)?;
    Ok((g - initial.resolvent(z - t * r)).norm())
}

fn case_pastur_residual() -> Result<Vec<Check>> {
    let mut lcg = Lcg(0xfeed_1234);
    let delta = SpectralMeasure::delta(C64::new(0.0, 0.0));
    let specs: Vec<(String, EnsembleSpec)> = vec![
        ("gue".into(), EnsembleSpec::Gue),
        ("wishart_0.5".into(), EnsembleSpec::Wishart { r: 0.5 }),
        ("wishart_1".into(), EnsembleSpec::Wishart { r: 1.0 }),
        ("wishart_2".into(), EnsembleSpec::Wishart { r: 2.0 }),
    ];
    let mut checks = Vec::new();
    for (label, spec) in &specs {
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let z = C64::new(lcg.in_range(-3.0, 3.0), lcg.in_range(0.1, 2.0));
            let t = lcg.in_range(0.05, 2.0);
            worst = worst.max(pastur_residual(&delta, spec, z, t)?);
        }
        checks.push(Check::below(&format!("residual_{label}"), worst, 1e-12));
    }
    // random atomic initial measures, 2-8 atoms, GUE increments
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let n_atoms = 2 + (lcg.next_f64() * 7.0) as usize;
        let locs: Vec<f64> = (0..n_atoms).map(|_| lcg.in_range(-2.0, 2.0)).collect();
        let measure = SpectralMeasure::uniform_real(&locs)?;
        let z = C64::new(lcg.in_range(-4.0, 4.0), lcg.in_range(0.1, 2.0));
        let t = lcg.in_range(0.05, 2.0);
        worst = worst.max(pastur_residual(&measure, &EnsembleSpec::Gue, z, t)?);
    }
    checks.push(Check::below("residual_atomic", worst, 1e-12));
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 3. ginibre-field / ginibre-mc / ginibre-overlap
// ---------------------------------------------------------------------------

fn case_ginibre_field() -> Result<Vec<Check>> {
    let initial = SpectralMeasure::delta(C64::new(0.0, 0.0));
    let spec = EnsembleSpec::Ginibre;
    let t = 1.0;
    let mut checks = Vec::new();

    // interior density by grid refinement: centered stencils around interior
    // points at two spacings, against the closed form 1/(pi t)
    let rho_exact = 1.0 / (std::f64::consts::PI * t);
    let mut worst = 0.0f64;
    for &(cx, cy) in &[(0.0, 0.0), (0.3, -0.2), (-0.4, 0.35)] {
        for &h in &[2e-3, 1e-3] {
            let gp = quaternionic_field(&initial, &spec, C64::new(cx + h, cy), t)?;
            let gm = quaternionic_field(&initial, &spec, C64::new(cx - h, cy), t)?;
            let gu = quaternionic_field(&initial, &spec, C64::new(cx, cy + h), t)?;
            let gd = quaternionic_field(&initial, &spec, C64::new(cx, cy - h), t)?;
            let dx = (gp.g - gm.g) / (2.0 * h);
            let dy = (gu.g - gd.g) / (2.0 * h);
            let rho = (dx + Complex64::new(0.0, 1.0) * dy).re / (2.0 * std::f64::consts::PI);
            worst = worst.max((rho - rho_exact).abs());
        }
    }
    checks.push(Check::below("density_refinement_err", worst, 1e-6));

    // overlap field against the closed form (t - |z|^2)/(pi t^2)
    let mut worst = 0.0f64;
    for &(cx, cy) in &[(0.0, 0.0), (0.25, 0.25), (-0.4, 0.1), (0.45, -0.2)] {
        let s = quaternionic_field(&initial, &spec, C64::new(cx, cy), t)?;
        let o = s.pw_sq / std::f64::consts::PI;
        let exact = (t - (cx * cx + cy * cy)) / (std::f64::consts::PI * t * t);
        worst = worst.max((o - exact).abs());
    }
    checks.push(Check::below("overlap_err", worst, 1e-6));

    // boundary radius sqrt(t)
    let contour = support_boundary(
        |z| quaternionic_field(&initial, &spec, z, t),
        t,
        1e-9,
        64,
    )?;
    let mut worst = 0.0f64;
    for z in &contour {
        worst = worst.max((z.norm() - t.sqrt()).abs());
    }
    checks.push(Check::below("boundary_radius_err", worst, 1e-6));
    Ok(checks)
}

fn case_ginibre_mc(params: &CaseParams) -> Result<Vec<Check>> {
    let n = params.n.unwrap_or(512);
    let seeds = params.seeds.unwrap_or(5);
    let radii = mc::pooled_spectrum(&EnsembleSpec::Ginibre, n, 1.0, params.seed, seeds)?;
    let ks = mc::ks_distance(&radii, |r| (r * r).clamp(0.0, 1.0));
    Ok(vec![Check::below("radial_ks", ks, 0.04)])
}

fn case_ginibre_overlap(params: &CaseParams) -> Result<Vec<Check>> {
    let n = params.n.unwrap_or(256);
    let seeds = params.seeds.unwrap_or(20);
    let t = 1.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..seeds {
        let s = mc::sample_ensemble(
            &EnsembleSpec::Ginibre,
            n,
            t,
            mc::split_seed(params.seed, k as u64),
        )?;
        let rec = mc::overlap_stats(&s)?;
        for (lam, &o) in rec.eigenvalues.iter().zip(&rec.o_diag) {
            if lam.norm() <= 0.5 * t.sqrt() {
                num += o;
                den += n as f64 * (t - lam.norm_sqr()) / t;
            }
        }
    }
    let ratio = num / den;
    Ok(vec![Check::below(
        "overlap_ratio_dev",
        (ratio - 1.0).abs(),
        0.1,
    )])
}

// ---------------------------------------------------------------------------
// 4. elliptic-axes / elliptic-invariants
// ---------------------------------------------------------------------------

fn case_elliptic_axes(params: &CaseParams) -> Result<Vec<Check>> {
    let tau = 0.5;
    let t = 1.0;
    let n = params.n.unwrap_or(1024);
    let seeds = params.seeds.unwrap_or(5);
    // hull estimate: farthest eigenvalue per angular sector, then a linear
    // least-squares ellipse fit (x/a)^2 + (y/b)^2 = 1 over the sector maxima;
    // this averages the inward edge fluctuation over all directions instead
    // of trusting the single most extreme sample per axis
    let sectors = 64;
    let mut hull = vec![(0.0f64, (0.0f64, 0.0f64)); sectors];
    for k in 0..seeds {
        let s = mc::sample_ensemble(
            &EnsembleSpec::Elliptic { tau },
            n,
            t,
            mc::split_seed(params.seed, k as u64),
        )?;
        for v in linalg::eigvals(&s.entries)? {
            let sector = (((v.arg() + std::f64::consts::PI) / (2.0 * std::f64::consts::PI)
                * sectors as f64) as usize)
                .min(sectors - 1);
            if v.norm() > hull[sector].0 {
                hull[sector] = (v.norm(), (v.re, v.im));
            }
        }
    }
    // normal equations for alpha x^2 + beta y^2 = 1
    let (mut sxx, mut sxy, mut syy, mut sx, mut sy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(r, (x, y)) in &hull {
        if r == 0.0 {
            continue;
        }
        let (u, v) = (x * x, y * y);
        sxx += u * u;
        sxy += u * v;
        syy += v * v;
        sx += u;
        sy += v;
    }
    let det = sxx * syy - sxy * sxy;
    let alpha = (sx * syy - sy * sxy) / det;
    let beta = (sy * sxx - sx * sxy) / det;
    let a_emp = alpha.max(0.0).sqrt().recip();
    let b_emp = beta.max(0.0).sqrt().recip();
    let a_th = t.sqrt() * (1.0 + tau);
    let b_th = t.sqrt() * (1.0 - tau);
    Ok(vec![
        Check::below("semi_axis_a_dev", (a_emp - a_th).abs() / a_th, 0.02),
        Check::below("semi_axis_b_dev", (b_emp - b_th).abs() / b_th, 0.02),
    ])
}

fn case_elliptic_invariants() -> Result<Vec<Check>> {
    let tau = 0.5;
    let spec = EnsembleSpec::Elliptic { tau };
    let q = Quaternion::new(C64::new(0.3, 0.8), C64::new(0.2, -0.1))?;
    let g = Quaternion::new(C64::new(0.1, -0.3), C64::new(0.15, 0.05))?;
    let start = PhasePoint::Quaternionic(QuaternionPair::new(q, g));
    let traj = integrate_hamilton(&spec, &start, (0.0, 1.0), 1e-3)?;
    let invariants = |p: &PhasePoint, t: f64| -> Result<(f64, C64, C64)> {
        let PhasePoint::Quaternionic(qp) = p else {
            return Err(EikonalError::UnsupportedVariant("expected quaternionic state"));
        };
        let pw_sq = qp.g.w.norm_sqr();
        let kin = 0.5 * tau * qp.g.z * qp.g.z;
        let h = crate::ensemble::hamiltonian_eval(&spec, p, t)?.value;
        Ok((pw_sq, kin, h))
    };
    let (pw0, kin0, h0) = invariants(&traj.states[0], 0.0)?;
    let mut drift = 0.0f64;
    for (state, &t) in traj.states.iter().zip(&traj.times) {
        let (pw, kin, h) = invariants(state, t)?;
        drift = drift
            .max((pw - pw0).abs())
            .max((kin - kin0).norm())
            .max((h - h0).norm());
    }
    Ok(vec![Check::below("invariant_drift", drift, 1e-8)])
}

// ---------------------------------------------------------------------------
// 5. unitary-flow / unitary-mc
// ---------------------------------------------------------------------------

fn case_unitary_flow() -> Result<Vec<Check>> {
    let initial = AngularMeasure::delta(0.0);
    let theta = lin_grid(-std::f64::consts::PI, std::f64::consts::PI, 2048);
    let mut checks = Vec::new();
    for &t in &[1.0, 2.0, 3.0, 5.0] {
        let field = unitary_density(&initial, &theta, t, 1e-8)?;
        checks.push(Check::below(
            &format!("mass_dev_t{t}"),
            (field.mass() - 1.0).abs(),
            5e-3,
        ));
    }
    // angular chart vs z-plane chart at t = 1 on unflagged interior points
    let t = 1.0;
    let field = unitary_density(&initial, &theta, t, 1e-8)?;
    let zrho = unitary_density_zplane(&initial, &theta, t, 1e-8)?;
    let mut worst = 0.0f64;
    for ((&flag, &rho), &zr) in field.flagged.iter().zip(&field.rho).zip(&zrho) {
        if !flag && rho > 1e-3 {
            worst = worst.max((rho - zr).abs());
        }
    }
    checks.push(Check::below("chart_agreement", worst, 1e-6));
    let tc = gap_closing_time(&initial)?;
    checks.push(Check::below("gap_time_dev", (tc - 4.0).abs(), 0.01));
    Ok(checks)
}

/// Largest nearest-neighbor gap of a set of phases on the circle.
fn max_phase_gap(phases: &mut [f64]) -> f64 {
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = phases.len();
    let mut gap: f64 = 2.0 * std::f64::consts::PI - (phases[n - 1] - phases[0]);
    for w in phases.windows(2) {
        gap = gap.max(w[1] - w[0]);
    }
    gap
}

fn case_unitary_mc(params: &CaseParams) -> Result<Vec<Check>> {
    let n = params.n.unwrap_or(256);
    let seeds = params.seeds.unwrap_or(5);
    let dt = 0.05;
    let mut gaps3 = Vec::new();
    let mut gaps5 = Vec::new();
    for k in 0..seeds {
        let seed = mc::split_seed(params.seed, k as u64);
        for (t, out) in [(3.0f64, &mut gaps3), (5.0, &mut gaps5)] {
            let steps = (t / dt).round() as usize;
            let u = mc::matrix_walk(&EnsembleSpec::UnitaryZ, n, steps, dt, seed)?;
            let mut phases: Vec<f64> = linalg::eigvals(&u.entries)?
                .iter()
                .map(|v| v.arg())
                .collect();
            out.push(max_phase_gap(&mut phases));
        }
    }
    gaps3.sort_by(|a, b| a.partial_cmp(b).unwrap());
    gaps5.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let med3 = gaps3[gaps3.len() / 2];
    let med5 = gaps5[gaps5.len() / 2];
    Ok(vec![
        // gap still open before the transition (median over seeds)...
        Check::below("gap_open_t3", 0.4 - med3, 0.0),
        // ...and closed after it
        Check::below("gap_closed_t5", med5, 0.25),
    ])
}

// ---------------------------------------------------------------------------
// 6. sv-duality
// ---------------------------------------------------------------------------

fn case_sv_duality() -> Result<Vec<Check>> {
    let mut lcg = Lcg(0xd0a1_77e5);
    let t = 0.2;
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let z0 = C64::from_polar(
            lcg.in_range(0.7, 1.4),
            lcg.in_range(-std::f64::consts::PI, std::f64::consts::PI),
        );
        let p0 = C64::new(lcg.in_range(-0.3, 0.3), lcg.in_range(-0.3, 0.3));
        let start = PhasePoint::Scalar { z: z0, p: p0 };
        let sv = integrate_hamilton(&EnsembleSpec::SingularValue, &start, (0.0, t), 1e-4)?;
        let un = integrate_hamilton(&EnsembleSpec::UnitaryZ, &start, (0.0, -2.0 * t), 2e-4)?;
        let (PhasePoint::Scalar { z: z_sv, .. }, PhasePoint::Scalar { z: z_un, .. }) =
            (*sv.last(), *un.last())
        else {
            return Err(EikonalError::UnsupportedVariant("expected scalar states"));
        };
        worst = worst.max((z_sv - z_un).norm());
    }
    Ok(vec![Check::below("duality_dev", worst, 1e-8)])
}

// ---------------------------------------------------------------------------
// 7. hciz-zero
// ---------------------------------------------------------------------------

fn case_hciz_zero() -> Result<Vec<Check>> {
    let p = HCIZProblem {
        atoms_a: vec![(0.0, 1.0)],
        atoms_b: vec![(0.0, 1.0)],
        beta: 2.0,
    };
    let x = lin_grid(-1.1, 1.1, 400);
    let t = lin_grid(0.2, 0.8, 400);
    let field = euler_match_velocity(&bridge_density_field(&p, &x, &t, 1e-9)?)?;
    let mut checks = Vec::new();

    // density pointwise against the semicircle of variance t(1-t), away from
    // the edge neighborhood where the epsilon regulator rounds the profile
    let mut worst = 0.0f64;
    for (ti, &tv) in t.iter().enumerate() {
        let s = tv * (1.0 - tv);
        let r = 2.0 * s.sqrt();
        for (xi, &xv) in x.iter().enumerate() {
            if (xv.abs() - r).abs() < 1e-3 {
                continue;
            }
            let exact = if xv.abs() < r {
                (4.0 * s - xv * xv).sqrt() / (2.0 * std::f64::consts::PI * s)
            } else {
                0.0
            };
            worst = worst.max((field.rho[ti][xi] - exact).abs());
        }
    }
    checks.push(Check::below("density_linf", worst, 1e-6));

    // mu vanishes at t = 1/2: the offset is a power of two so the symmetric
    // rows have bitwise-equal t(1-t) and the centered flux cancels exactly
    let dt = 0.0009765625;
    let tm = [0.5 - dt, 0.5, 0.5 + dt];
    let fm = euler_match_velocity(&bridge_density_field(&p, &x, &tm, 1e-9)?)?;
    let mu_mid = fm.mu[1].iter().fold(0.0f64, |a, &v| a.max(v.abs()));
    checks.push(Check::below("mu_at_half", mu_mid, 1e-10));

    // |mu| coefficient on the interior
    let mut worst = 0.0f64;
    for (ti, &tv) in t.iter().enumerate().skip(1).take(t.len() - 2) {
        let r = 2.0 * (tv * (1.0 - tv)).sqrt();
        for (xi, &xv) in x.iter().enumerate() {
            if xv.abs() < 0.8 * r && field.rho[ti][xi] > 1e-3 {
                let truth = (1.0 - 2.0 * tv).abs() * xv.abs() / (2.0 * tv * (1.0 - tv));
                worst = worst.max((field.mu[ti][xi].abs() - truth).abs());
            }
        }
    }
    checks.push(Check::below("mu_coefficient_dev", worst, 1e-3));

    checks.push(Check::below(
        "h_burgers_residual",
        h_burgers_residual(&field),
        1e-2,
    ));

    // time-slice action at t = 1/2 equals 1/2
    let xs = lin_grid(-1.1, 1.1, 4001);
    let fs = euler_match_velocity(&bridge_density_field(
        &p,
        &xs,
        &[0.5 - dt, 0.5, 0.5 + dt],
        1e-9,
    )?)?;
    let s_half = action_time_slice(&fs, 1);
    checks.push(Check::below("action_slice_dev", (s_half - 0.5).abs(), 1e-3));

    // log-divergence coefficient of the regularized action
    let xa = lin_grid(-1.1, 1.1, 601);
    let ta: Vec<f64> = (0..301)
        .map(|i| {
            let u = i as f64 / 300.0;
            0.002 + 0.996 * 0.5 * (1.0 - (std::f64::consts::PI * u).cos())
        })
        .collect();
    let fa = euler_match_velocity(&bridge_density_field(&p, &xa, &ta, 1e-9)?)?;
    let res = action_evaluate(&fa, &[0.005, 0.01, 0.02, 0.04])?;
    checks.push(Check::below(
        "log_coefficient_dev",
        (res.log_coefficient - 0.5).abs(),
        0.02,
    ));
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 8. bridge-endpoints
// ---------------------------------------------------------------------------

fn case_bridge_endpoints() -> Result<Vec<Check>> {
    let p = HCIZProblem {
        atoms_a: vec![(-1.0, 0.5), (1.0, 0.5)],
        atoms_b: vec![(0.0, 1.0)],
        beta: 2.0,
    };
    let ma = p.measure_a()?;
    let mb = p.measure_b()?;
    // contour: circle of radius 2.5 around the origin, clear of both spectra
    let mut sup_a = 0.0f64;
    let mut sup_b = 0.0f64;
    for k in 0..64 {
        // half-step angle offset keeps the contour off the real axis, where
        // the Herglotz branch is ambiguous
        let z = C64::from_polar(2.5, 2.0 * std::f64::consts::PI * (k as f64 + 0.5) / 64.0);
        sup_a = sup_a.max((bridge_resolvent(&p, z, 1e-6)? - ma.resolvent(z)).norm());
        sup_b = sup_b.max((bridge_resolvent(&p, z, 1.0 - 1e-6)? - mb.resolvent(z)).norm());
    }
    let mut checks = vec![
        Check::below("endpoint_a_err", sup_a, 1e-4),
        Check::below("endpoint_b_err", sup_b, 1e-4),
    ];

    // time reversal of the density field
    let q = HCIZProblem {
        atoms_a: p.atoms_b.clone(),
        atoms_b: p.atoms_a.clone(),
        beta: 2.0,
    };
    let x = lin_grid(-2.0, 2.0, 101);
    let t = lin_grid(0.2, 0.8, 31);
    let t_rev: Vec<f64> = t.iter().rev().map(|&u| 1.0 - u).collect();
    let f1 = bridge_density_field(&p, &x, &t, 1e-9)?;
    let f2 = bridge_density_field(&q, &x, &t_rev, 1e-9)?;
    let nt = t.len();
    let mut worst = 0.0f64;
    for ti in 0..nt {
        for xi in 0..x.len() {
            worst = worst.max((f1.rho[ti][xi] - f2.rho[nt - 1 - ti][xi]).abs());
        }
    }
    checks.push(Check::below("time_reversal_dev", worst, 1e-10));
    Ok(checks)
}

// ---------------------------------------------------------------------------
// 9. determinism
// ---------------------------------------------------------------------------

/// Serializes a value list at full precision; used to compare artifact bytes.
fn artifact_bytes(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| format!("{v:.12e}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn case_determinism(params: &CaseParams) -> Result<Vec<Check>> {
    // Monte-Carlo artifact: pooled spectra under a fixed master seed
    let a = mc::pooled_spectrum(&EnsembleSpec::Gue, 64, 1.0, params.seed, 4)?;
    let b = mc::pooled_spectrum(&EnsembleSpec::Gue, 64, 1.0, params.seed, 4)?;
    let mc_identical = artifact_bytes(&a) == artifact_bytes(&b);

    // PDE artifact: a density evaluation rerun
    let initial = SpectralMeasure::delta(C64::new(0.0, 0.0));
    let grid = lin_grid(-2.5, 2.5, 301);
    let d1 = density_1d(
        |z| pastur_solve(&initial, &EnsembleSpec::Gue, z, 1.0),
        &grid,
        1e-6,
    )?;
    let d2 = density_1d(
        |z| pastur_solve(&initial, &EnsembleSpec::Gue, z, 1.0),
        &grid,
        1e-6,
    )?;
    let pde_identical = artifact_bytes(&d1.rho) == artifact_bytes(&d2.rho);

    Ok(vec![
        Check::below("mc_rerun_differs", if mc_identical { 0.0 } else { 1.0 }, 0.5),
        Check::below("pde_rerun_differs", if pde_identical { 0.0 } else { 1.0 }, 0.5),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_case_is_config_error() {
        let err = run_case("nope", &CaseParams::default()).unwrap_err();
        assert!(matches!(err, EikonalError::Config { .. }));
    }

    #[test]
    fn determinism_case_passes() {
        let rep = run_case("determinism", &CaseParams::default()).unwrap();
        assert!(rep.passed, "{:?}", rep.checks);
    }
}
