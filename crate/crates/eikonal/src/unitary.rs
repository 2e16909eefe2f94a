//! Multiplicative unitary diffusion: cotangent resolvent, Burgers flow on the
//! circle, and the gap-closing (order-disorder) transition time.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EikonalError, Result};
use crate::measure::{AngularMeasure, wrap_angle};
use crate::quaternion::C64;

/// Angular resolvent and density on a theta grid. Entries in caustic
/// neighborhoods (|d theta / d theta_0| < 1e-6) carry the `flagged` bit
/// instead of being interpolated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngularField {
    pub theta: Vec<f64>,
    pub j: Vec<C64>,
    pub rho: Vec<f64>,
    pub flagged: Vec<bool>,
    pub epsilon: f64,
}

impl AngularField {
    /// Periodic trapezoid mass over the full circle.
    pub fn mass(&self) -> f64 {
        let n = self.theta.len();
        let mut m = 0.0;
        for i in 0..n {
            let j = (i + 1) % n;
            let mut dt = self.theta[j] - self.theta[i];
            if j == 0 {
                dt += 2.0 * std::f64::consts::PI;
            }
            m += 0.5 * dt * (self.rho[i] + self.rho[j]);
        }
        m
    }
}

fn half_cot(x: C64) -> C64 {
    0.5 * (x / 2.0).cos() / (x / 2.0).sin()
}

/// Angular resolvent `J(theta) = 1/2 sum_i w_i cot((theta - theta_i)/2)`,
/// analytically continued off the real axis.
pub fn cot_resolvent(measure: &AngularMeasure, theta: C64) -> Result<C64> {
    let mut j = C64::new(0.0, 0.0);
    for &(th_i, w) in measure.phases() {
        let d = theta - th_i;
        if ((d.re / 2.0).sin().abs() < 1e-14 || (wrap_angle(d.re) / 2.0).sin().abs() < 1e-14)
            && d.im == 0.0
        {
            return Err(EikonalError::AtomCollision);
        }
        j += w * half_cot(d);
    }
    Ok(j)
}

/// `dJ/dtheta = -1/4 sum_i w_i / sin^2((theta - theta_i)/2)`.
pub fn cot_resolvent_deriv(measure: &AngularMeasure, theta: C64) -> C64 {
    measure
        .phases()
        .iter()
        .map(|&(th_i, w)| {
            let s = ((theta - th_i) / 2.0).sin();
            -0.25 * w / (s * s)
        })
        .sum()
}

/// Solves the characteristic equation `target = theta0 + t J0(theta0)` for
/// complex `theta0` by Newton with continuation in the imaginary offset.
/// Returns `(theta0, dtheta/dtheta0)`.
fn characteristic_root(
    initial: &AngularMeasure,
    theta: f64,
    t: f64,
    epsilon: f64,
) -> Result<(C64, C64)> {
    // At large imaginary part the kernel saturates (cot -> -i), so the
    // characteristic foot is near theta + i(eps + t/2).
    let mut theta0 = C64::new(theta, 1.0 + t / 2.0);
    let mut eps = 1.0f64;
    loop {
        let target = C64::new(theta, eps);
        let mut converged = false;
        for _ in 0..60 {
            let j0 = cot_resolvent(initial, theta0)?;
            let f = theta0 + t * j0 - target;
            if f.norm() < 1e-13 {
                converged = true;
                break;
            }
            let fp = 1.0 + t * cot_resolvent_deriv(initial, theta0);
            if fp.norm() < 1e-14 {
                break;
            }
            let mut step = f / fp;
            if step.norm() > 0.5 {
                step *= 0.5 / step.norm();
            }
            theta0 -= step;
        }
        if !converged {
            return Err(EikonalError::NoConvergence {
                z: C64::new(theta, eps),
            });
        }
        if eps <= epsilon {
            break;
        }
        eps = (eps * 0.5).max(epsilon);
    }
    let fp = 1.0 + t * cot_resolvent_deriv(initial, theta0);
    Ok((theta0, fp))
}

/// Eigenphase density via characteristics of the angular Burgers flow,
/// evaluated at imaginary offset `epsilon`.
pub fn unitary_density(
    initial: &AngularMeasure,
    theta_grid: &[f64],
    t: f64,
    epsilon: f64,
) -> Result<AngularField> {
    if epsilon <= 0.0 || !epsilon.is_finite() {
        return Err(EikonalError::Config {
            field: "epsilon".into(),
            message: format!("must be positive, got {epsilon}"),
        });
    }
    if t < 0.0 {
        return Err(EikonalError::Config {
            field: "t".into(),
            message: format!("must be nonnegative, got {t}"),
        });
    }
    let pts = theta_grid
        .par_iter()
        .map(|&th| {
            let (theta0, fp) = characteristic_root(initial, th, t, epsilon)?;
            // J is conserved along characteristics.
            let j = cot_resolvent(initial, theta0)?;
            let rho = (-j.im / std::f64::consts::PI).max(0.0);
            Ok((j, rho, fp.norm() < 1e-6))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AngularField {
        theta: theta_grid.to_vec(),
        j: pts.iter().map(|p| p.0).collect(),
        rho: pts.iter().map(|p| p.1).collect(),
        flagged: pts.iter().map(|p| p.2).collect(),
        epsilon,
    })
}

/// Density from the z-chart: the closed-form characteristic
/// `z = z0 exp(t(1/2 - z0 G0(z0)))` with `zG(z) = z0 G0(z0)` conserved,
/// read off at `|z| = 1 + epsilon` through the Poisson-kernel identity
/// `rho(theta) = (2 Re[z G(z)] - 1) / (2 pi)`.
pub fn unitary_density_zplane(
    initial: &AngularMeasure,
    theta_grid: &[f64],
    t: f64,
    epsilon: f64,
) -> Result<Vec<f64>> {
    let g0 = |z0: C64| -> C64 {
        initial
            .phases()
            .iter()
            .map(|&(th, w)| w / (z0 - C64::from_polar(1.0, th)))
            .sum()
    };
    let g0p = |z0: C64| -> C64 {
        initial
            .phases()
            .iter()
            .map(|&(th, w)| {
                let d = z0 - C64::from_polar(1.0, th);
                -w / (d * d)
            })
            .sum()
    };
    theta_grid
        .par_iter()
        .map(|&th| {
            // continuation in radius from far outside down to 1 + eps
            let mut z0 = C64::from_polar(4.0, th);
            let mut r = 4.0f64;
            let target_r = 1.0 + epsilon;
            loop {
                let z = C64::from_polar(r, th);
                let mut converged = false;
                for _ in 0..60 {
                    let e = (t * (0.5 - z0 * g0(z0))).exp();
                    let f = z0 * e - z;
                    if f.norm() < 1e-13 {
                        converged = true;
                        break;
                    }
                    // d/dz0 [z0 e^{t(1/2 - z0 g0)}] = e (1 - t z0 (g0 + z0 g0'))
                    let fp = e * (1.0 - t * z0 * (g0(z0) + z0 * g0p(z0)));
                    if fp.norm() < 1e-14 {
                        break;
                    }
                    let mut step = f / fp;
                    if step.norm() > 0.5 * z0.norm() {
                        step *= 0.5 * z0.norm() / step.norm();
                    }
                    z0 -= step;
                }
                if !converged {
                    return Err(EikonalError::NoConvergence {
                        z: C64::from_polar(r, th),
                    });
                }
                if r <= target_r {
                    break;
                }
                r = (1.0 + (r - 1.0) * 0.5).max(target_r);
            }
            let zg = z0 * g0(z0);
            Ok((2.0 * zg.re - 1.0) / (2.0 * std::f64::consts::PI))
        })
        .collect()
}

/// Time at which the spectral support covers the whole circle: the largest
/// over the initial gaps of the caustic-collision time for that gap. Each gap
/// center is the zero of `J` between consecutive atoms (located by
/// bisection); its caustics meet there at `t = -1/J'`.
pub fn gap_closing_time(initial: &AngularMeasure) -> Result<f64> {
    let mut phases: Vec<f64> = initial.phases().iter().map(|&(th, _)| th).collect();
    phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
    phases.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let n = phases.len();
    let j_real = |th: f64| cot_resolvent(initial, C64::new(th, 0.0)).map(|j| j.re);
    let mut t_c = 0.0f64;
    for i in 0..n {
        let lo = phases[i];
        let hi = if i + 1 < n {
            phases[i + 1]
        } else {
            phases[0] + 2.0 * std::f64::consts::PI
        };
        if hi - lo < 1e-10 {
            continue;
        }
        // J decreases from +inf to -inf across the gap; bisect its zero.
        let margin = 1e-9 * (hi - lo).max(1.0);
        let mut a = lo + margin;
        let mut b = hi - margin;
        if j_real(a)? <= 0.0 || j_real(b)? >= 0.0 {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if j_real(mid)? > 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        let center = 0.5 * (a + b);
        let jp = cot_resolvent_deriv(initial, C64::new(center, 0.0)).re;
        if jp < 0.0 {
            t_c = t_c.max(-1.0 / jp);
        }
    }
    if t_c == 0.0 {
        return Err(EikonalError::EmptySupport);
    }
    Ok(t_c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn lin_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn single_atom_kernel() {
        let m = AngularMeasure::delta(0.0);
        for th in [0.3, 1.2, -2.0] {
            let j = cot_resolvent(&m, C64::new(th, 0.0)).unwrap();
            assert!((j.re - 0.5 / (th / 2.0).tan()).abs() < 1e-14);
            assert!(j.im.abs() < 1e-14);
        }
        assert!(matches!(
            cot_resolvent(&m, C64::new(0.0, 0.0)),
            Err(EikonalError::AtomCollision)
        ));
    }

    #[test]
    fn two_atom_symmetry_point() {
        let m = AngularMeasure::new(vec![(0.0, 0.5), (PI, 0.5)]).unwrap();
        let j = cot_resolvent(&m, C64::new(PI / 2.0, 0.0)).unwrap();
        assert!(j.norm() < 1e-14);
    }

    fn uniform_phases(n: usize) -> AngularMeasure {
        AngularMeasure::new(
            (0..n)
                .map(|k| (-PI + 2.0 * PI * (k as f64 + 0.5) / n as f64, 1.0 / n as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn haar_limit_kernel_vanishes() {
        // dense uniform atoms approximate Haar: the principal value vanishes,
        // which the atom sum realizes exactly midway between atoms
        for n in [101usize, 401, 1601] {
            let m = uniform_phases(n);
            let mid = -PI + 2.0 * PI * (n / 2 + 1) as f64 / n as f64;
            let j = cot_resolvent(&m, C64::new(mid, 0.0)).unwrap();
            assert!(j.norm() < 1e-10, "n={n}: {j}");
        }
        // off the real axis the atom sum matches direct quadrature of the
        // kernel against 1/(2 pi)
        let m = uniform_phases(1601);
        let th = C64::new(0.1234, 0.1);
        let j = cot_resolvent(&m, th).unwrap();
        let nq = 200_000;
        let quad: C64 = (0..nq)
            .map(|k| {
                let phi = -PI + 2.0 * PI * (k as f64 + 0.5) / nq as f64;
                0.5 * ((th - phi) / 2.0).cos() / ((th - phi) / 2.0).sin() / nq as f64
            })
            .sum();
        assert!((j - quad).norm() < 1e-6, "{j} vs {quad}");
    }

    #[test]
    fn kernel_derivative_matches_fd() {
        let m = AngularMeasure::new(vec![(0.3, 0.4), (-1.1, 0.6)]).unwrap();
        let th = C64::new(0.9, 0.2);
        let h = 1e-6;
        let fd = (cot_resolvent(&m, th + h).unwrap() - cot_resolvent(&m, th - h).unwrap())
            / (2.0 * h);
        assert!((fd - cot_resolvent_deriv(&m, th)).norm() < 1e-8);
    }

    #[test]
    fn small_time_arc_support_and_mass() {
        let m = AngularMeasure::delta(0.0);
        let t = 0.09;
        let grid = lin_grid(-PI + 1e-3, PI, 4001);
        let field = unitary_density(&m, &grid, t, 1e-7).unwrap();
        assert!((field.mass() - 1.0).abs() < 5e-3, "mass {}", field.mass());
        // support is an arc of half-width ~ 2 sqrt(t) = 0.6
        let edge = 2.0 * t.sqrt();
        for (&th, &r) in field.theta.iter().zip(&field.rho) {
            if th.abs() > edge * 1.3 {
                assert!(r < 1e-3, "theta={th}: rho={r}");
            }
        }
        // parity: rho(-theta) = rho(theta) on the symmetric grid
        let eval_at = |x: f64| {
            let f = unitary_density(&m, &[x], t, 1e-7).unwrap();
            f.rho[0]
        };
        for x in [0.1, 0.3, 0.45] {
            assert!((eval_at(x) - eval_at(-x)).abs() < 1e-9);
        }
    }

    #[test]
    fn long_time_haar_equilibrium() {
        let m = AngularMeasure::delta(0.0);
        let grid = lin_grid(-3.0, 3.0, 61);
        let field = unitary_density(&m, &grid, 30.0, 1e-7).unwrap();
        for &r in &field.rho {
            assert!((r - 1.0 / (2.0 * PI)).abs() < 1e-4, "{r}");
        }
    }

    #[test]
    fn angular_and_zplane_charts_agree() {
        let m = AngularMeasure::delta(0.0);
        let t = 1.0;
        let grid = lin_grid(-1.5, 1.5, 41);
        let field = unitary_density(&m, &grid, t, 1e-6).unwrap();
        let z = unitary_density_zplane(&m, &grid, t, 1e-6).unwrap();
        for i in 0..grid.len() {
            assert!(
                (field.rho[i] - z[i]).abs() < 1e-6,
                "theta={}: {} vs {}",
                grid[i],
                field.rho[i],
                z[i]
            );
        }
    }

    #[test]
    fn gap_closes_at_four() {
        let m = AngularMeasure::delta(0.0);
        let t_c = gap_closing_time(&m).unwrap();
        assert!((t_c - 4.0).abs() < 0.01, "{t_c}");
    }

    #[test]
    fn gap_time_rotation_invariant() {
        for th0 in [0.7, -2.1, 3.0] {
            let m = AngularMeasure::delta(th0);
            let t_c = gap_closing_time(&m).unwrap();
            assert!((t_c - 4.0).abs() < 0.01, "atom at {th0}: {t_c}");
        }
    }

    #[test]
    fn two_atoms_close_sooner() {
        let m = AngularMeasure::new(vec![(0.0, 0.5), (PI, 0.5)]).unwrap();
        let t_c = gap_closing_time(&m).unwrap();
        assert!(t_c < 4.0 - 0.5, "{t_c}");
        assert!((t_c - 2.0).abs() < 0.01, "{t_c}");
    }
}
