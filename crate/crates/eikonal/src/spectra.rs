//! Observable extraction: 1D/2D densities, diagonal overlap correlator,
//! support boundary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::characteristics::{FieldSample, quaternionic_field};
use crate::ensemble::EnsembleSpec;
use crate::error::{EikonalError, Result};
use crate::measure::SpectralMeasure;
use crate::quaternion::C64;

/// Spectral density on a real grid, extracted at imaginary offset `epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityGrid1D {
    pub x: Vec<f64>,
    pub rho: Vec<f64>,
    pub epsilon: f64,
}

impl DensityGrid1D {
    /// Trapezoid mass of the density over its grid.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.x, &self.rho)
    }
}

fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// Uniform rectangular grid of quaternionic field samples, row-major with the
/// imaginary axis as the slow index.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGrid2D {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub samples: Vec<FieldSample>,
}

impl FieldGrid2D {
    pub fn sample(&self, i: usize, j: usize) -> &FieldSample {
        &self.samples[j * self.nx + i]
    }

    pub fn z(&self, i: usize, j: usize) -> C64 {
        C64::new(self.x0 + self.h * i as f64, self.y0 + self.h * j as f64)
    }
}

/// Real-valued grid sharing the layout of a `FieldGrid2D` (possibly with the
/// boundary ring dropped).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarGrid2D {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<f64>,
}

impl ScalarGrid2D {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    pub fn z(&self, i: usize, j: usize) -> C64 {
        C64::new(self.x0 + self.h * i as f64, self.y0 + self.h * j as f64)
    }

    /// Riemann-sum mass with cell area h^2.
    pub fn mass(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.h * self.h
    }
}

/// Diagonal-overlap grid; `O = 0` outside the detected support.
pub type OverlapGrid = ScalarGrid2D;

/// Evaluates `rho[i] = max(0, -Im G(x_i + i eps) / pi)` for a resolvent
/// evaluator. Points are independent; evaluation is parallel with
/// deterministic ordering.
pub fn density_1d<F>(resolvent: F, x_grid: &[f64], epsilon: f64) -> Result<DensityGrid1D>
where
    F: Fn(C64) -> Result<C64> + Sync,
{
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(EikonalError::Config {
            field: "epsilon".into(),
            message: format!("must be positive, got {epsilon}"),
        });
    }
    let rho = x_grid
        .par_iter()
        .map(|&x| {
            let g = resolvent(C64::new(x, epsilon))?;
            Ok((-g.im / std::f64::consts::PI).max(0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(DensityGrid1D {
        x: x_grid.to_vec(),
        rho,
        epsilon,
    })
}

/// Samples the quaternionic field on a uniform grid.
#[allow(clippy::too_many_arguments)]
pub fn sample_field_grid(
    initial: &SpectralMeasure,
    spec: &EnsembleSpec,
    x0: f64,
    y0: f64,
    h: f64,
    nx: usize,
    ny: usize,
    t: f64,
) -> Result<FieldGrid2D> {
    if h <= 0.0 || !h.is_finite() {
        return Err(EikonalError::Config {
            field: "h".into(),
            message: format!("grid spacing must be positive, got {h}"),
        });
    }
    let samples = (0..nx * ny)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k % nx, k / nx);
            let z = C64::new(x0 + h * i as f64, y0 + h * j as f64);
            quaternionic_field(initial, spec, z, t)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldGrid2D {
        x0,
        y0,
        h,
        nx,
        ny,
        samples,
    })
}

/// 2D density `rho = Re[(d_x + i d_y) g] / (2 pi)` via centered differences.
/// The boundary ring is dropped. Tiny negatives are stencil noise and clamp
/// to zero; anything below the noise floor -(1e-8 + h^2), which accounts for
/// the O(h^2 g''') truncation of the centered stencil, signals a
/// branch-selection bug and is an error.
pub fn density_2d(field: &FieldGrid2D) -> Result<ScalarGrid2D> {
    if field.nx < 3 || field.ny < 3 {
        return Err(EikonalError::GridTooSmall);
    }
    let (nx, ny, h) = (field.nx, field.ny, field.h);
    let two_pi = 2.0 * std::f64::consts::PI;
    let floor = -(1e-8 + h * h);
    let mut values = Vec::with_capacity((nx - 2) * (ny - 2));
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let dgx = (field.sample(i + 1, j).g - field.sample(i - 1, j).g) / (2.0 * h);
            let dgy = (field.sample(i, j + 1).g - field.sample(i, j - 1).g) / (2.0 * h);
            let rho = (dgx + C64::new(0.0, 1.0) * dgy).re / two_pi;
            if rho < floor {
                return Err(EikonalError::NegativeDensity(rho));
            }
            values.push(rho.max(0.0));
        }
    }
    Ok(ScalarGrid2D {
        x0: field.x0 + h,
        y0: field.y0 + h,
        h,
        nx: nx - 2,
        ny: ny - 2,
        values,
    })
}

/// Chalker-Mehlig diagonal overlap `O = |p_w|^2 / pi`; zero outside support.
pub fn overlap_correlator(field: &FieldGrid2D) -> OverlapGrid {
    let values = field
        .samples
        .iter()
        .map(|s| {
            if s.inside_support {
                s.pw_sq / std::f64::consts::PI
            } else {
                0.0
            }
        })
        .collect();
    ScalarGrid2D {
        x0: field.x0,
        y0: field.y0,
        h: field.h,
        nx: field.nx,
        ny: field.ny,
        values,
    }
}

/// Traces the support boundary by radial bisection on `pw_sq > tol` along
/// `n_rays` rays from the origin. Errors when the origin itself lies outside
/// the support.
pub fn support_boundary<F>(sampler: F, t: f64, tol: f64, n_rays: usize) -> Result<Vec<C64>>
where
    F: Fn(C64) -> Result<FieldSample> + Sync,
{
    let inside = |s: &FieldSample| s.inside_support && s.pw_sq > tol;
    let center = sampler(C64::new(0.0, 0.0))?;
    if !inside(&center) {
        return Err(EikonalError::EmptySupport);
    }
    // Outer radius: grow from the diffusive scale until outside on all rays.
    let mut r_out = 2.0 * (1.0 + t.sqrt());
    'grow: for _ in 0..40 {
        for k in 0..n_rays {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n_rays as f64;
            if inside(&sampler(C64::from_polar(r_out, th))?) {
                r_out *= 2.0;
                continue 'grow;
            }
        }
        break;
    }
    (0..n_rays)
        .into_par_iter()
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n_rays as f64;
            let mut lo = 0.0;
            let mut hi = r_out;
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if inside(&sampler(C64::from_polar(mid, th))?) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(C64::from_polar(0.5 * (lo + hi), th))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characteristics::pastur_solve;
    use crate::ensemble::EnsembleSpec;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn lin_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    fn gue_density(initial: &SpectralMeasure, t: f64, x: &[f64], eps: f64) -> DensityGrid1D {
        density_1d(
            |z| pastur_solve(initial, &EnsembleSpec::Gue, z, t),
            x,
            eps,
        )
        .unwrap()
    }

    #[test]
    fn semicircle_center_value() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let d = gue_density(&m, 1.0, &[0.0], 1e-6);
        assert!((d.rho[0] - 1.0 / std::f64::consts::PI).abs() < 1e-6);
    }

    #[test]
    fn semicircle_tail_vanishes() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let d = gue_density(&m, 1.0, &[3.0], 1e-6);
        assert!(d.rho[0] < 1e-3);
    }

    #[test]
    fn semicircle_mass_and_shape() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let x = lin_grid(-2.5, 2.5, 1001);
        let d = gue_density(&m, 1.0, &x, 1e-7);
        assert!((d.mass() - 1.0).abs() < 5e-3);
        for (&xi, &ri) in x.iter().zip(&d.rho) {
            let truth = if xi.abs() < 2.0 {
                (4.0 - xi * xi).sqrt() / (2.0 * std::f64::consts::PI)
            } else {
                0.0
            };
            // away from the edge the agreement is tight
            if (xi.abs() - 2.0).abs() > 0.05 {
                assert!((ri - truth).abs() < 1e-4, "x={xi}: {ri} vs {truth}");
            }
        }
    }

    #[test]
    fn marchenko_pastur_shape() {
        // Wishart r=1, t=1: rho(x) = sqrt((4-x)/x)/(2 pi) on (0, 4].
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let x = lin_grid(0.05, 3.95, 601);
        let d = density_1d(
            |z| pastur_solve(&m, &EnsembleSpec::Wishart { r: 1.0 }, z, 1.0),
            &x,
            1e-7,
        )
        .unwrap();
        for (&xi, &ri) in x.iter().zip(&d.rho) {
            let truth = ((4.0 - xi) / xi).sqrt() / (2.0 * std::f64::consts::PI);
            assert!((ri - truth).abs() < 1e-3, "x={xi}: {ri} vs {truth}");
        }
    }

    #[test]
    fn marchenko_pastur_mass() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        // integrable inverse-sqrt edge at 0: sqrt-spaced grid
        let x: Vec<f64> = lin_grid(1e-4, 2.012, 3000).iter().map(|u| u * u).collect();
        let d = density_1d(
            |z| pastur_solve(&m, &EnsembleSpec::Wishart { r: 1.0 }, z, 1.0),
            &x,
            1e-7,
        )
        .unwrap();
        assert!((d.mass() - 1.0).abs() < 5e-3, "mass {}", d.mass());
    }

    #[test]
    fn epsilon_convergence_is_linear() {
        // interior point: error(eps) ~ O(eps), ratio per decade in [0.05, 0.2]
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let truth = (4.0 - 1.0f64).sqrt() / (2.0 * std::f64::consts::PI);
        let errs: Vec<f64> = [1e-4, 1e-5, 1e-6]
            .iter()
            .map(|&e| (gue_density(&m, 1.0, &[1.0], e).rho[0] - truth).abs())
            .collect();
        for k in 0..2 {
            let ratio = errs[k + 1] / errs[k];
            assert!((0.05..=0.2).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn ginibre_density_2d_uniform_inside() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let field = sample_field_grid(&m, &EnsembleSpec::Ginibre, -0.002, -0.002, 1e-3, 5, 5, 1.0)
            .unwrap();
        let rho = density_2d(&field).unwrap();
        for &v in &rho.values {
            assert!((v - 1.0 / std::f64::consts::PI).abs() < 1e-6, "{v}");
        }
    }

    #[test]
    fn ginibre_density_2d_outside_zero() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let field =
            sample_field_grid(&m, &EnsembleSpec::Ginibre, 1.5, 0.3, 1e-3, 5, 5, 1.0).unwrap();
        let rho = density_2d(&field).unwrap();
        // centered stencil leaves O(h^2 g''') truncation noise
        for &v in &rho.values {
            assert!(v.abs() < 1e-6, "{v}");
        }
    }

    /// Closed-form Ginibre field at t=1 on a uniform grid.
    fn ginibre_closed_form_grid(x0: f64, y0: f64, h: f64, nx: usize, ny: usize) -> FieldGrid2D {
        let mut samples = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                let z = c(x0 + h * i as f64, y0 + h * j as f64);
                let inside = z.norm_sqr() < 1.0;
                samples.push(FieldSample {
                    z,
                    g: if inside { z.conj() } else { 1.0 / z },
                    pw_sq: if inside { 1.0 - z.norm_sqr() } else { 0.0 },
                    inside_support: inside,
                });
            }
        }
        FieldGrid2D { x0, y0, h, nx, ny, samples }
    }

    #[test]
    fn ginibre_mass_over_disk() {
        let n = 1001;
        let h = 2.4 / (n - 1) as f64;
        let field = ginibre_closed_form_grid(-1.2, -1.2, h, n, n);
        let rho = density_2d(&field).unwrap();
        assert!((rho.mass() - 1.0).abs() < 1e-3, "mass {}", rho.mass());
    }

    #[test]
    fn grid_too_small_detected() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let field =
            sample_field_grid(&m, &EnsembleSpec::Ginibre, 0.0, 0.0, 1e-3, 2, 5, 1.0).unwrap();
        assert!(matches!(
            density_2d(&field),
            Err(EikonalError::GridTooSmall)
        ));
    }

    #[test]
    fn ginibre_overlap_profile() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let t = 1.0;
        let field = sample_field_grid(&m, &EnsembleSpec::Ginibre, -0.5, -0.5, 0.25, 5, 5, t).unwrap();
        let o = overlap_correlator(&field);
        for j in 0..5 {
            for i in 0..5 {
                let z = o.z(i, j);
                let truth = ((t - z.norm_sqr()) / (std::f64::consts::PI * t * t)).max(0.0);
                assert!((o.value(i, j) - truth).abs() < 1e-9, "z={z}");
            }
        }
        // center value 1/pi, edge value 0
        let edge = quaternionic_field(&m, &EnsembleSpec::Ginibre, c(1.0, 0.0), t).unwrap();
        assert!(edge.pw_sq.abs() < 1e-9);
    }

    #[test]
    fn biunitary_field_rotationally_symmetric() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let spec = EnsembleSpec::BiUnitary {
            a_coeffs: vec![1.0, 0.5],
        };
        let r = 0.4;
        let base = quaternionic_field(&m, &spec, c(r, 0.0), 1.0).unwrap();
        for k in 1..8 {
            let th = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
            let s = quaternionic_field(&m, &spec, C64::from_polar(r, th), 1.0).unwrap();
            assert!((s.pw_sq - base.pw_sq).abs() < 1e-8);
            assert!((s.g.norm() - base.g.norm()).abs() < 1e-8);
        }
    }

    #[test]
    fn ginibre_boundary_is_circle() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        for &t in &[0.5, 1.0, 2.0] {
            let contour = support_boundary(
                |z| quaternionic_field(&m, &EnsembleSpec::Ginibre, z, t),
                t,
                1e-9,
                64,
            )
            .unwrap();
            for p in &contour {
                assert!((p.norm() - t.sqrt()).abs() < 1e-6, "t={t}, |z|={}", p.norm());
            }
        }
    }

    #[test]
    fn elliptic_boundary_semi_axes() {
        let m = SpectralMeasure::delta(c(0.0, 0.0));
        let spec = EnsembleSpec::Elliptic { tau: 0.5 };
        let contour = support_boundary(
            |z| quaternionic_field(&m, &spec, z, 1.0),
            1.0,
            1e-9,
            8,
        )
        .unwrap();
        // ray 0 is +x, ray n/4 is +y
        assert!((contour[0].re - 1.5).abs() < 1e-4, "{}", contour[0]);
        assert!((contour[2].im - 0.5).abs() < 1e-4, "{}", contour[2]);
    }

    #[test]
    fn empty_support_outside() {
        let m = SpectralMeasure::delta(c(5.0, 5.0));
        let err = support_boundary(
            |z| quaternionic_field(&m, &EnsembleSpec::Ginibre, z, 0.01),
            0.01,
            1e-9,
            16,
        );
        assert!(matches!(err, Err(EikonalError::EmptySupport)));
    }
}
