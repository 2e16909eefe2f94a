//! Finite-N Monte-Carlo oracle: ensemble sampling, additive/multiplicative
//! matrix walks, empirical densities, and bi-orthogonal eigenvector overlaps.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ensemble::EnsembleSpec;
use crate::error::{EikonalError, Result};
use crate::linalg::{self, CMat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Hermitian,
    General,
    Unitary,
}

/// A dense complex matrix sample tagged with its structural class.
#[derive(Debug, Clone)]
pub struct MatrixSample {
    pub n: usize,
    pub entries: CMat,
    pub kind: MatrixKind,
}

/// Eigenvalues together with the diagonal overlaps
/// `O_ii = <L_i|L_i><R_i|R_i>` of the bi-orthonormalized left/right
/// eigenvector systems (`<L_i|R_j> = delta_ij`).
#[derive(Debug, Clone)]
pub struct OverlapRecord {
    pub eigenvalues: Vec<Complex64>,
    pub o_diag: Vec<f64>,
}

/// Normalized histogram: `sum(counts) * binwidth * normalization == 1` for
/// uniform bins (`counts` are raw tallies, `normalization = 1/(total *
/// binwidth)`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmpiricalDensity {
    pub edges: Vec<f64>,
    pub counts: Vec<f64>,
    pub normalization: f64,
}

impl EmpiricalDensity {
    pub fn from_samples(samples: &[f64], bins: usize, lo: f64, hi: f64) -> Self {
        let bins = bins.max(1);
        let width = (hi - lo) / bins as f64;
        let mut counts = vec![0.0; bins];
        for &s in samples {
            if s >= lo && s <= hi {
                let k = (((s - lo) / width) as usize).min(bins - 1);
                counts[k] += 1.0;
            }
        }
        let total: f64 = counts.iter().sum();
        let normalization = if total > 0.0 && width > 0.0 {
            1.0 / (total * width)
        } else {
            0.0
        };
        let edges = (0..=bins).map(|k| lo + k as f64 * width).collect();
        EmpiricalDensity {
            edges,
            counts,
            normalization,
        }
    }

    /// Density value of bin `k`.
    pub fn density(&self, k: usize) -> f64 {
        self.counts[k] * self.normalization
    }
}

/// Counter-based seed splitting (SplitMix64 finalizer): replica streams are
/// independent and order-independent for a fixed master seed.
pub fn split_seed(master: u64, replica: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(replica.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hermitian matrix with independent Gaussian entries scaled so that
/// `E[(1/N) Tr H^2] = variance`.
fn gue_matrix(n: usize, variance: f64, rng: &mut ChaCha8Rng) -> CMat {
    let sd_diag = (variance / n as f64).sqrt();
    let sd_off = (variance / (2.0 * n as f64)).sqrt();
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        m[(i, i)] = Complex64::new(sd_diag * d, 0.0);
        for j in i + 1..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let v = Complex64::new(sd_off * re, sd_off * im);
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    m
}

/// Rectangular matrix of iid complex Gaussians with per-entry variance
/// `variance / ncols` (so `(1/nrows) Tr XX^dag -> variance` at square shape).
fn ginibre_matrix(nrows: usize, ncols: usize, variance: f64, rng: &mut ChaCha8Rng) -> CMat {
    let sd = (variance / (2.0 * ncols as f64)).sqrt();
    CMat::from_fn(nrows, ncols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(sd * re, sd * im)
    })
}

/// Draws one matrix from the requested ensemble. Deterministic given `seed`.
pub fn sample_ensemble(
    spec: &EnsembleSpec,
    n: usize,
    variance: f64,
    seed: u64,
) -> Result<MatrixSample> {
    if n < 2 {
        return Err(EikonalError::BadDimension(n));
    }
    if variance <= 0.0 {
        return Err(EikonalError::Config {
            field: "variance".into(),
            message: format!("must be positive, got {variance}"),
        });
    }
    let mut rng = rng_for(seed);
    match spec {
        EnsembleSpec::Gue | EnsembleSpec::OrnsteinUhlenbeck { .. } => Ok(MatrixSample {
            n,
            entries: gue_matrix(n, variance, &mut rng),
            kind: MatrixKind::Hermitian,
        }),
        EnsembleSpec::Ginibre => Ok(MatrixSample {
            n,
            entries: ginibre_matrix(n, n, variance, &mut rng),
            kind: MatrixKind::General,
        }),
        EnsembleSpec::Elliptic { tau } => {
            // X = sqrt((1+tau)/2) H1 + i sqrt((1-tau)/2) H2 reproduces the
            // elliptic covariances  E[X_ij X_ji] = tau * variance / N.
            let h1 = gue_matrix(n, variance, &mut rng);
            let h2 = gue_matrix(n, variance, &mut rng);
            let c1 = ((1.0 + tau) / 2.0).sqrt();
            let c2 = ((1.0 - tau) / 2.0).sqrt();
            let entries = CMat::from_fn(n, n, |i, j| {
                c1 * h1[(i, j)] + Complex64::new(0.0, c2) * h2[(i, j)]
            });
            let kind = if (1.0 - tau).abs() < 1e-15 {
                MatrixKind::Hermitian
            } else {
                MatrixKind::General
            };
            Ok(MatrixSample { n, entries, kind })
        }
        EnsembleSpec::Wishart { r } => {
            if *r <= 0.0 {
                return Err(EikonalError::Config {
                    field: "r".into(),
                    message: format!("must be positive, got {r}"),
                });
            }
            let m_cols = ((n as f64 / r).round() as usize).max(1);
            let x = ginibre_matrix(n, m_cols, variance * m_cols as f64, &mut rng);
            let xs = linalg::adjoint(&x);
            let prod = &x * &xs;
            // exact Hermitian symmetrization against round-off
            let entries = CMat::from_fn(n, n, |i, j| {
                0.5 * (prod[(i, j)] + prod[(j, i)].conj()) / m_cols as f64
            });
            Ok(MatrixSample {
                n,
                entries,
                kind: MatrixKind::Hermitian,
            })
        }
        _ => Err(EikonalError::UnsupportedVariant(
            "sampling is defined for gue, ginibre, elliptic, wishart, ornstein_uhlenbeck",
        )),
    }
}

/// `exp(i s H)` for Hermitian `H`, via the spectral decomposition.
fn unitary_exponential(h: &CMat, s: f64) -> Result<CMat> {
    let n = h.nrows();
    let (vals, vecs) = linalg::eigh(h)?;
    let phases: Vec<Complex64> = vals
        .iter()
        .map(|&l| Complex64::new(0.0, s * l).exp())
        .collect();
    let scaled = CMat::from_fn(n, n, |i, j| vecs[(i, j)] * phases[j]);
    Ok(&scaled * linalg::adjoint(&vecs))
}

/// Runs a matrix walk: additive increments for Hermitian/non-Hermitian
/// diffusions, ordered products of exponentials for the unitary
/// (`exp(i sqrt(dt) H_j)`) and multiplicative (`exp(sqrt(dt) X_j)`) flows.
/// Step seeds are split from `seed`, so `steps = 1` reproduces
/// `sample_ensemble` with `variance = dt` for the additive walks.
pub fn matrix_walk(
    spec: &EnsembleSpec,
    n: usize,
    steps: usize,
    dt: f64,
    seed: u64,
) -> Result<MatrixSample> {
    if steps < 1 {
        return Err(EikonalError::Config {
            field: "steps".into(),
            message: "must be at least 1".into(),
        });
    }
    if dt <= 0.0 {
        return Err(EikonalError::Config {
            field: "dt".into(),
            message: format!("must be positive, got {dt}"),
        });
    }
    if n < 2 {
        return Err(EikonalError::BadDimension(n));
    }
    match spec {
        EnsembleSpec::Gue
        | EnsembleSpec::Ginibre
        | EnsembleSpec::Elliptic { .. }
        | EnsembleSpec::Wishart { .. } => {
            let mut acc = CMat::zeros(n, n);
            let mut kind = MatrixKind::Hermitian;
            for step in 0..steps {
                let inc = sample_ensemble(spec, n, dt, split_seed(seed, step as u64))?;
                acc += &inc.entries;
                kind = inc.kind;
            }
            Ok(MatrixSample {
                n,
                entries: acc,
                kind,
            })
        }
        EnsembleSpec::UnitaryZ => {
            let mut u = CMat::identity(n, n);
            let s = dt.sqrt();
            for step in 0..steps {
                let mut rng = rng_for(split_seed(seed, step as u64));
                let h = gue_matrix(n, 1.0, &mut rng);
                u = unitary_exponential(&h, s)? * u;
            }
            Ok(MatrixSample {
                n,
                entries: u,
                kind: MatrixKind::Unitary,
            })
        }
        EnsembleSpec::SingularValue => {
            let mut z = CMat::identity(n, n);
            let s = dt.sqrt();
            for step in 0..steps {
                let mut rng = rng_for(split_seed(seed, step as u64));
                let x = ginibre_matrix(n, n, 1.0, &mut rng);
                let xs = CMat::from_fn(n, n, |i, j| x[(i, j)] * s);
                z = linalg::expm(&xs)? * z;
            }
            Ok(MatrixSample {
                n,
                entries: z,
                kind: MatrixKind::General,
            })
        }
        _ => Err(EikonalError::UnsupportedVariant(
            "walks are defined for gue, ginibre, elliptic, wishart, unitary_z, singular_value",
        )),
    }
}

/// Eigenvalues plus a normalized histogram: real eigenvalues for Hermitian
/// samples, eigenphases for unitary samples, and moduli (radial histogram)
/// for general samples.
pub fn spectral_stats(
    m: &MatrixSample,
    bins: usize,
) -> Result<(Vec<Complex64>, EmpiricalDensity)> {
    let (eigenvalues, reals): (Vec<Complex64>, Vec<f64>) = match m.kind {
        MatrixKind::Hermitian => {
            let (vals, _) = linalg::eigh(&m.entries)?;
            (
                vals.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
                vals,
            )
        }
        MatrixKind::Unitary => {
            let vals = linalg::eigvals(&m.entries)?;
            let phases = vals.iter().map(|v| v.arg()).collect();
            (vals, phases)
        }
        MatrixKind::General => {
            let vals = linalg::eigvals(&m.entries)?;
            let moduli = vals.iter().map(|v| v.norm()).collect();
            (vals, moduli)
        }
    };
    let (lo, hi) = match m.kind {
        MatrixKind::Unitary => (-std::f64::consts::PI, std::f64::consts::PI),
        _ => {
            let lo = reals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = reals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if (hi - lo).abs() < 1e-300 {
                (lo - 0.5, hi + 0.5)
            } else {
                (lo, hi)
            }
        }
    };
    let hist = EmpiricalDensity::from_samples(&reals, bins, lo, hi);
    Ok((eigenvalues, hist))
}

/// Diagonal eigenvector overlaps of a general matrix. Right eigenvectors come
/// from the dense eigendecomposition; the bi-orthonormal left system is the
/// inverse of the right eigenvector matrix, so `<L_i|R_j> = delta_ij` holds by
/// construction and `O_ii = <L_i|L_i><R_i|R_i>`.
pub fn overlap_stats(m: &MatrixSample) -> Result<OverlapRecord> {
    let n = m.n;
    let (vals, r) = linalg::eig(&m.entries)?;
    let r_inv = linalg::inverse(&r)?;
    if linalg::cond_1(&r, &r_inv) > 1e12 {
        return Err(EikonalError::DefectiveMatrix);
    }
    let o_diag = (0..n)
        .map(|i| {
            let rr: f64 = (0..n).map(|k| r[(k, i)].norm_sqr()).sum();
            let ll: f64 = (0..n).map(|k| r_inv[(i, k)].norm_sqr()).sum();
            rr * ll
        })
        .collect();
    Ok(OverlapRecord {
        eigenvalues: vals,
        o_diag,
    })
}

/// Kolmogorov-Smirnov sup-norm distance between the empirical CDF of
/// `samples` and the evaluator `cdf`.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s: Vec<f64> = samples.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = s.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in s.iter().enumerate() {
        let f = cdf(x);
        sup = sup
            .max((f - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - f).abs());
    }
    sup
}

/// Semicircle CDF of radius `2 sqrt(t)`, for KS tests.
pub fn semicircle_cdf(x: f64, t: f64) -> f64 {
    let r = 2.0 * t.sqrt();
    if x <= -r {
        0.0
    } else if x >= r {
        1.0
    } else {
        let u = x / r;
        0.5 + (u * (1.0 - u * u).sqrt() + u.asin()) / std::f64::consts::PI
    }
}

/// Pools real spectra (or phases / moduli per the sample kind) over replica
/// seeds in parallel; replica order does not affect the result.
pub fn pooled_spectrum(
    spec: &EnsembleSpec,
    n: usize,
    variance: f64,
    master_seed: u64,
    replicas: usize,
) -> Result<Vec<f64>> {
    let mut per: Vec<(usize, Vec<f64>)> = (0..replicas)
        .into_par_iter()
        .map(|k| {
            let sample = sample_ensemble(spec, n, variance, split_seed(master_seed, k as u64))?;
            let reals = match sample.kind {
                MatrixKind::Hermitian => linalg::eigh(&sample.entries)?.0,
                _ => linalg::eigvals(&sample.entries)?
                    .iter()
                    .map(|v| v.norm())
                    .collect(),
            };
            Ok((k, reals))
        })
        .collect::<Result<Vec<_>>>()?;
    per.sort_by_key(|&(k, _)| k);
    Ok(per.into_iter().flat_map(|(_, v)| v).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trace_sq(m: &CMat) -> Complex64 {
        let n = m.nrows();
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                s += m[(i, j)] * m[(j, i)];
            }
        }
        s / n as f64
    }

    #[test]
    fn gue_trace_normalization() {
        let n = 400;
        let mut mean = 0.0;
        let seeds = 20;
        for k in 0..seeds {
            let s = sample_ensemble(&EnsembleSpec::Gue, n, 0.7, split_seed(11, k)).unwrap();
            mean += trace_sq(&s.entries).re;
        }
        mean /= seeds as f64;
        assert!((mean - 0.7).abs() < 0.05 * 0.7, "mean {mean}");
    }

    #[test]
    fn elliptic_tau_one_is_hermitian() {
        let s = sample_ensemble(&EnsembleSpec::Elliptic { tau: 1.0 }, 64, 1.0, 5).unwrap();
        assert_eq!(s.kind, MatrixKind::Hermitian);
        for i in 0..64 {
            for j in 0..64 {
                assert!((s.entries[(i, j)] - s.entries[(j, i)].conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn elliptic_covariance_moment() {
        // E[(1/N) Tr X^2] = tau * variance for the elliptic ensemble
        let tau = 0.5;
        let n = 300;
        let mut mean = 0.0;
        let seeds = 50;
        for k in 0..seeds {
            let s =
                sample_ensemble(&EnsembleSpec::Elliptic { tau }, n, 1.0, split_seed(3, k)).unwrap();
            mean += trace_sq(&s.entries).re;
        }
        mean /= seeds as f64;
        assert!((mean - tau).abs() < 0.1 * tau, "mean {mean}");
    }

    #[test]
    fn reproducible_samples() {
        let a = sample_ensemble(&EnsembleSpec::Ginibre, 32, 1.0, 99).unwrap();
        let b = sample_ensemble(&EnsembleSpec::Ginibre, 32, 1.0, 99).unwrap();
        for i in 0..32 {
            for j in 0..32 {
                assert_eq!(a.entries[(i, j)], b.entries[(i, j)]);
            }
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        assert!(matches!(
            sample_ensemble(&EnsembleSpec::Gue, 1, 1.0, 0),
            Err(EikonalError::BadDimension(1))
        ));
        assert!(sample_ensemble(&EnsembleSpec::Gue, 8, -1.0, 0).is_err());
        assert!(matrix_walk(&EnsembleSpec::Gue, 8, 0, 0.1, 0).is_err());
    }

    #[test]
    fn walk_single_step_matches_sample() {
        let w = matrix_walk(&EnsembleSpec::Gue, 16, 1, 0.3, 7).unwrap();
        let s = sample_ensemble(&EnsembleSpec::Gue, 16, 0.3, split_seed(7, 0)).unwrap();
        for i in 0..16 {
            for j in 0..16 {
                assert_eq!(w.entries[(i, j)], s.entries[(i, j)]);
            }
        }
    }

    #[test]
    fn additive_walk_semicircle_ks() {
        // sum of increments with total variance t: spectrum ~ semicircle(2 sqrt t)
        let t = 1.0;
        let w = matrix_walk(&EnsembleSpec::Gue, 256, 8, t / 8.0, 21).unwrap();
        let (vals, _) = linalg::eigh(&w.entries).unwrap();
        let ks = ks_distance(&vals, |x| semicircle_cdf(x, t));
        assert!(ks < 0.05, "ks {ks}");
    }

    #[test]
    fn unitary_walk_is_unitary_and_fills_circle() {
        let u = matrix_walk(&EnsembleSpec::UnitaryZ, 96, 80, 0.1, 13).unwrap();
        assert_eq!(u.kind, MatrixKind::Unitary);
        let prod = linalg::adjoint(&u.entries) * &u.entries;
        for i in 0..96 {
            for j in 0..96 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((prod[(i, j)] - Complex64::new(expect, 0.0)).norm() < 1e-10);
            }
        }
        // past the closing transition (t = 8) every phase bin is occupied
        let (_, hist) = spectral_stats(&u, 12).unwrap();
        assert!(hist.counts.iter().all(|&c| c > 0.0), "{:?}", hist.counts);
    }

    #[test]
    fn spectral_stats_zero_matrix() {
        let m = MatrixSample {
            n: 8,
            entries: CMat::zeros(8, 8),
            kind: MatrixKind::Hermitian,
        };
        let (vals, hist) = spectral_stats(&m, 16).unwrap();
        assert!(vals.iter().all(|v| v.norm() < 1e-14));
        let occupied = hist.counts.iter().filter(|&&c| c > 0.0).count();
        assert_eq!(occupied, 1);
    }

    #[test]
    fn gue_ks_against_semicircle() {
        let mut ks = Vec::new();
        for k in 0..5u64 {
            let s = sample_ensemble(&EnsembleSpec::Gue, 512, 1.0, split_seed(31, k)).unwrap();
            let (vals, _) = linalg::eigh(&s.entries).unwrap();
            ks.push(ks_distance(&vals, |x| semicircle_cdf(x, 1.0)));
        }
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!(ks[2] < 0.03, "median ks {}", ks[2]);
    }

    #[test]
    fn ginibre_radial_ks() {
        let s = sample_ensemble(&EnsembleSpec::Ginibre, 512, 1.0, 17).unwrap();
        let vals = linalg::eigvals(&s.entries).unwrap();
        let radii: Vec<f64> = vals.iter().map(|v| v.norm()).collect();
        // uniform disk of radius 1: radial CDF r^2
        let ks = ks_distance(&radii, |r| (r * r).clamp(0.0, 1.0));
        assert!(ks < 0.04, "ks {ks}");
    }

    #[test]
    fn gue_ks_decreases_with_n() {
        let mut medians = Vec::new();
        for &n in &[128usize, 256, 512] {
            let mut ks = Vec::new();
            for k in 0..5u64 {
                let s = sample_ensemble(&EnsembleSpec::Gue, n, 1.0, split_seed(41, k)).unwrap();
                let (vals, _) = linalg::eigh(&s.entries).unwrap();
                ks.push(ks_distance(&vals, |x| semicircle_cdf(x, 1.0)));
            }
            ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
            medians.push(ks[2]);
        }
        assert!(medians[0] > medians[1] && medians[1] > medians[2], "{medians:?}");
    }

    #[test]
    fn overlaps_of_normal_matrix_are_one() {
        let u = matrix_walk(&EnsembleSpec::UnitaryZ, 48, 4, 0.1, 3).unwrap();
        let rec = overlap_stats(&u).unwrap();
        for &o in &rec.o_diag {
            assert!((o - 1.0).abs() < 1e-8, "o {o}");
        }
    }

    #[test]
    fn overlaps_bounded_below_by_one() {
        let s = sample_ensemble(&EnsembleSpec::Ginibre, 64, 1.0, 23).unwrap();
        let rec = overlap_stats(&s).unwrap();
        assert!(rec.o_diag.iter().all(|&o| o >= 1.0 - 1e-8));
    }

    #[test]
    fn ginibre_overlap_matches_theory() {
        // binned <O_ii> against N (t - |z|^2)/(pi t^2) * (pi t / N) ... the
        // density-weighted correlator O(z) = (t - |z|^2)/(pi t^2) relates to
        // the per-eigenvalue mean via O(z) = rho(z) N <O_ii>/N, rho = 1/(pi t):
        // <O_ii> = N (t - |z|^2) / t  at t = 1.
        // ratio of sums: the O_ii distribution is heavy-tailed, so the
        // aggregate estimator still fluctuates at the ~15% level here
        let n = 128;
        let seeds = 16;
        let mut num = 0.0;
        let mut den = 0.0;
        for k in 0..seeds {
            let s = sample_ensemble(&EnsembleSpec::Ginibre, n, 1.0, split_seed(77, k)).unwrap();
            let rec = overlap_stats(&s).unwrap();
            for (lam, &o) in rec.eigenvalues.iter().zip(&rec.o_diag) {
                if lam.norm() <= 0.5 {
                    num += o;
                    den += n as f64 * (1.0 - lam.norm_sqr());
                }
            }
        }
        let ratio = num / den;
        assert!((ratio - 1.0).abs() < 0.25, "ratio {ratio}");
    }

    #[test]
    fn ks_distance_properties() {
        // exact quantile draws from the semicircle -> tiny distance
        let m = 100_000;
        let draws: Vec<f64> = (0..m)
            .map(|i| {
                let target = (i as f64 + 0.5) / m as f64;
                // invert the semicircle CDF by bisection
                let (mut lo, mut hi) = (-2.0, 2.0);
                for _ in 0..50 {
                    let mid = 0.5 * (lo + hi);
                    if semicircle_cdf(mid, 1.0) < target {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                0.5 * (lo + hi)
            })
            .collect();
        assert!(ks_distance(&draws, |x| semicircle_cdf(x, 1.0)) < 0.02);
        // semicircle vs uniform on [-2, 2]: the sup of |CDF difference| sits
        // where the densities cross (x = +/- sqrt(4 - pi^2/4)) and equals
        // 0.05771... analytically
        let uniform: Vec<f64> = (0..m)
            .map(|i| -2.0 + 4.0 * (i as f64 + 0.5) / m as f64)
            .collect();
        let d = ks_distance(&uniform, |x| semicircle_cdf(x, 1.0));
        assert!((d - 0.05771).abs() < 0.005, "d {d}");
        // a 0.1 shift is detectable
        let shifted: Vec<f64> = draws.iter().map(|&x| x + 0.1).collect();
        assert!(ks_distance(&shifted, |x| semicircle_cdf(x, 1.0)) > 0.02);
    }

    #[test]
    fn wishart_sample_is_hermitian_psd() {
        let s = sample_ensemble(&EnsembleSpec::Wishart { r: 0.5 }, 64, 1.0, 9).unwrap();
        assert_eq!(s.kind, MatrixKind::Hermitian);
        let (vals, _) = linalg::eigh(&s.entries).unwrap();
        assert!(vals.iter().all(|&v| v > -1e-12));
    }

    #[test]
    fn pooled_spectrum_order_independent() {
        let a = pooled_spectrum(&EnsembleSpec::Gue, 32, 1.0, 5, 4).unwrap();
        let b = pooled_spectrum(&EnsembleSpec::Gue, 32, 1.0, 5, 4).unwrap();
        assert_eq!(a, b);
    }
}
