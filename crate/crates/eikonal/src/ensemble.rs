//! Catalog of ensemble specifications: R-transforms where available,
//! explicit Hamiltonians otherwise, with analytic gradients.

use serde::{Deserialize, Serialize};

use crate::error::{EikonalError, Result};
use crate::quaternion::{C64, Quaternion, QuaternionPair};

/// Tagged ensemble description. Serializes as
/// `{"variant": "...", "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", content = "params", rename_all = "snake_case")]
pub enum EnsembleSpec {
    Gue,
    Elliptic { tau: f64 },
    Ginibre,
    /// Bi-unitary (R-diagonal) ensemble with cumulant generating sequence
    /// `A(x) = sum_k a_coeffs[k-1] x^(k-1)`.
    BiUnitary { a_coeffs: Vec<f64> },
    OrnsteinUhlenbeck { a: f64 },
    Wishart { r: f64 },
    Jacobi { theta: f64, lambda: f64 },
    /// Unitary diffusion in the z = e^{i theta} chart: H = -z^2 p^2/2 + zp/2.
    UnitaryZ,
    /// Singular values of the multiplicative walk: H = z^2 p^2 - zp.
    SingularValue,
    /// Unitary diffusion in the angle chart: H = J^2/2.
    FreeRotor,
    KempHall,
    /// Brownian-bridge dynamics pinned at t = t_f.
    Bridge { t_f: f64 },
}

/// Which phase space a variant lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseSpaceKind {
    /// Complex pair (z, p).
    HolomorphicScalar,
    /// Quaternion pair (Q, G).
    Quaternionic,
    /// Angle pair (theta, J).
    Angular,
    /// 4-tuple (z, p, alpha, p_alpha).
    Bridge,
}

/// A point in one of the catalog's phase spaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhasePoint {
    Scalar { z: C64, p: C64 },
    Quaternionic(QuaternionPair),
    /// Kemp-Hall radial chart: coordinates (z, r = |w|), momenta (p, p_r).
    Radial { z: C64, p: C64, r: f64, p_r: f64 },
    Bridge { z: C64, p: C64, alpha: C64, p_alpha: C64 },
}

/// Hamiltonian value with analytic gradients wrt the variant's phase-space
/// coordinates. Gradient layout per variant:
/// - scalar/angular: `[d/dp]`, `[d/dz]`
/// - quaternionic: holomorphic derivatives wrt the resolvent entries in
///   lexicographic order `[G11, G12, G21, G22]` and the matching `Q` entries
/// - Kemp-Hall radial chart: `[d/dp, d/dpbar, d/dp_r]`, `[d/dz, d/dzbar, d/dr]`
/// - bridge: `[d/dp, d/dp_alpha]`, `[d/dz, d/dalpha]`
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianValue {
    pub value: C64,
    pub grad_p: Vec<C64>,
    pub grad_q: Vec<C64>,
}

/// Argument for the R-transform: scalar in the Hermitian chart, quaternion
/// otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RArg {
    Scalar(C64),
    Quat(Quaternion),
}

impl EnsembleSpec {
    /// Parameter-range validation; serde can construct arbitrary specs, so
    /// entry points call this before use.
    pub fn validate(&self) -> Result<()> {
        match self {
            EnsembleSpec::Elliptic { tau } => {
                if !tau.is_finite() || tau.abs() > 1.0 {
                    return Err(EikonalError::BadMeasure(format!("|tau| = {tau} > 1")));
                }
            }
            EnsembleSpec::Wishart { r } => {
                if !r.is_finite() || *r <= 0.0 {
                    return Err(EikonalError::BadMeasure(format!("r = {r} <= 0")));
                }
            }
            EnsembleSpec::Bridge { t_f } => {
                if !t_f.is_finite() || *t_f <= 0.0 {
                    return Err(EikonalError::BadMeasure(format!("t_f = {t_f} <= 0")));
                }
            }
            EnsembleSpec::BiUnitary { a_coeffs } if a_coeffs.is_empty() => {
                return Err(EikonalError::BadMeasure("empty a_coeffs".into()));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn phase_space(&self) -> PhaseSpaceKind {
        match self {
            EnsembleSpec::Gue
            | EnsembleSpec::OrnsteinUhlenbeck { .. }
            | EnsembleSpec::Wishart { .. }
            | EnsembleSpec::Jacobi { .. }
            | EnsembleSpec::UnitaryZ
            | EnsembleSpec::SingularValue => PhaseSpaceKind::HolomorphicScalar,
            EnsembleSpec::Elliptic { .. }
            | EnsembleSpec::Ginibre
            | EnsembleSpec::BiUnitary { .. }
            | EnsembleSpec::KempHall => PhaseSpaceKind::Quaternionic,
            EnsembleSpec::FreeRotor => PhaseSpaceKind::Angular,
            EnsembleSpec::Bridge { .. } => PhaseSpaceKind::Bridge,
        }
    }

    /// True for the additive variants whose Hamiltonian is the R-transform
    /// line integral.
    pub fn is_additive(&self) -> bool {
        matches!(
            self,
            EnsembleSpec::Gue
                | EnsembleSpec::Elliptic { .. }
                | EnsembleSpec::Ginibre
                | EnsembleSpec::BiUnitary { .. }
        )
    }

    fn name(&self) -> &'static str {
        match self {
            EnsembleSpec::Gue => "gue",
            EnsembleSpec::Elliptic { .. } => "elliptic",
            EnsembleSpec::Ginibre => "ginibre",
            EnsembleSpec::BiUnitary { .. } => "bi_unitary",
            EnsembleSpec::OrnsteinUhlenbeck { .. } => "ornstein_uhlenbeck",
            EnsembleSpec::Wishart { .. } => "wishart",
            EnsembleSpec::Jacobi { .. } => "jacobi",
            EnsembleSpec::UnitaryZ => "unitary_z",
            EnsembleSpec::SingularValue => "singular_value",
            EnsembleSpec::FreeRotor => "free_rotor",
            EnsembleSpec::KempHall => "kemp_hall",
            EnsembleSpec::Bridge { .. } => "bridge",
        }
    }
}

/// Evaluates the generating sequence A(x) = sum_k a_k x^(k-1) and its
/// primitive F(x) = sum_k a_k x^k / k (both at complex argument).
fn gen_sequence(coeffs: &[f64], x: C64) -> (C64, C64) {
    let mut a = C64::new(0.0, 0.0);
    let mut f = C64::new(0.0, 0.0);
    let mut xp = C64::new(1.0, 0.0);
    for (k, &c) in coeffs.iter().enumerate() {
        a += c * xp;
        f += c * xp * x / (k as f64 + 1.0);
        xp *= x;
    }
    (a, f)
}

/// R-transform evaluation for the additive variants.
pub fn r_transform_eval(spec: &EnsembleSpec, arg: RArg) -> Result<RArg> {
    match (spec, arg) {
        (EnsembleSpec::Gue, RArg::Scalar(p)) => Ok(RArg::Scalar(p)),
        (EnsembleSpec::Gue, RArg::Quat(q)) => {
            // diag(R(z), conj R(z)) with R(z) = z is the quaternion (z, 0).
            Ok(RArg::Quat(Quaternion::raw(q.z, C64::new(0.0, 0.0))))
        }
        (EnsembleSpec::Elliptic { tau }, RArg::Quat(q)) => {
            Ok(RArg::Quat(Quaternion::raw(q.z * *tau, q.w)))
        }
        (EnsembleSpec::Ginibre, RArg::Quat(q)) => {
            Ok(RArg::Quat(Quaternion::raw(C64::new(0.0, 0.0), q.w)))
        }
        (EnsembleSpec::BiUnitary { a_coeffs }, RArg::Quat(q)) => {
            // A(-|w|^2) [[0, -wbar], [w, 0]]; the argument -|w|^2 is real.
            let x = C64::new(-q.w.norm_sqr(), 0.0);
            let (a, _) = gen_sequence(a_coeffs, x);
            Ok(RArg::Quat(Quaternion::raw(C64::new(0.0, 0.0), a * q.w)))
        }
        (s, _) if s.is_additive() => Err(EikonalError::UnsupportedVariant(
            "scalar/quaternion chart mismatch",
        )),
        (s, _) => Err(EikonalError::UnsupportedVariant(s.name())),
    }
}

/// Entrywise R-transform on a general 2x2 resolvent matrix (lexicographic
/// `[g11, g12, g21, g22]`), for the additive quaternionic variants.
pub fn r_matrix(spec: &EnsembleSpec, g: [C64; 4]) -> Result<[C64; 4]> {
    let zero = C64::new(0.0, 0.0);
    match spec {
        EnsembleSpec::Gue => Ok([g[0], zero, zero, g[3]]),
        EnsembleSpec::Elliptic { tau } => Ok([g[0] * *tau, g[1], g[2], g[3] * *tau]),
        EnsembleSpec::Ginibre => Ok([zero, g[1], g[2], zero]),
        EnsembleSpec::BiUnitary { a_coeffs } => {
            let (a, _) = gen_sequence(a_coeffs, g[1] * g[2]);
            Ok([zero, a * g[1], a * g[2], zero])
        }
        s => Err(EikonalError::UnsupportedVariant(s.name())),
    }
}

/// Scalar R-transform of the Hermitian-additive resolvent flows handled by
/// the Pastur solver, together with its derivative.
pub(crate) fn hermitian_r(spec: &EnsembleSpec, g: C64) -> Result<(C64, C64)> {
    match spec {
        EnsembleSpec::Gue => Ok((g, C64::new(1.0, 0.0))),
        // Free-Poisson increment with rectangularity r: R(g) = r/(1 - g).
        EnsembleSpec::Wishart { r } => {
            let d = C64::new(1.0, 0.0) - g;
            Ok((*r / d, *r / (d * d)))
        }
        _ => Err(EikonalError::NonHermitianSpec),
    }
}

/// Evaluates H and its analytic gradients at a phase point.
pub fn hamiltonian_eval(spec: &EnsembleSpec, point: &PhasePoint, t: f64) -> Result<HamiltonianValue> {
    spec.validate()?;
    let half = 0.5;
    match (spec, point) {
        (EnsembleSpec::Gue, PhasePoint::Scalar { p, .. })
        | (EnsembleSpec::FreeRotor, PhasePoint::Scalar { p, .. }) => Ok(HamiltonianValue {
            value: p * p * half,
            grad_p: vec![*p],
            grad_q: vec![C64::new(0.0, 0.0)],
        }),
        (EnsembleSpec::OrnsteinUhlenbeck { a }, PhasePoint::Scalar { z, p }) => {
            Ok(HamiltonianValue {
                value: p * p * half + *a * (C64::new(1.0, 0.0) - z * p),
                grad_p: vec![p - *a * z],
                grad_q: vec![-*a * p],
            })
        }
        (EnsembleSpec::Wishart { r }, PhasePoint::Scalar { z, p }) => Ok(HamiltonianValue {
            value: (1.0 - r) * p + *r * z * p * p,
            grad_p: vec![C64::new(1.0 - r, 0.0) + 2.0 * *r * z * p],
            grad_q: vec![*r * p * p],
        }),
        (EnsembleSpec::Jacobi { theta, lambda }, PhasePoint::Scalar { z, p }) => {
            let lt = lambda * theta;
            let one = C64::new(1.0, 0.0);
            Ok(HamiltonianValue {
                value: lt * z * (one - z) * p * p
                    + p * (theta * (1.0 - lambda) - (1.0 - 2.0 * lt) * z),
                grad_p: vec![
                    2.0 * lt * z * (one - z) * p + theta * (1.0 - lambda)
                        - (1.0 - 2.0 * lt) * z,
                ],
                grad_q: vec![lt * (one - 2.0 * z) * p * p - (1.0 - 2.0 * lt) * p],
            })
        }
        (EnsembleSpec::UnitaryZ, PhasePoint::Scalar { z, p }) => Ok(HamiltonianValue {
            value: -half * z * z * p * p + half * z * p,
            grad_p: vec![-z * z * p + half * z],
            grad_q: vec![-z * p * p + half * p],
        }),
        (EnsembleSpec::SingularValue, PhasePoint::Scalar { z, p }) => Ok(HamiltonianValue {
            value: z * z * p * p - z * p,
            grad_p: vec![2.0 * z * z * p - z],
            grad_q: vec![2.0 * z * p * p - p],
        }),
        (EnsembleSpec::Bridge { t_f }, PhasePoint::Bridge { z, p, alpha, p_alpha }) => {
            if t >= *t_f {
                return Err(EikonalError::BridgeTimeOverflow { t, t_f: *t_f });
            }
            let inv = 1.0 / (t_f - t);
            let one = C64::new(1.0, 0.0);
            Ok(HamiltonianValue {
                value: half * p * p + inv * (one - z * p - (alpha - one) * p_alpha),
                grad_p: vec![p - inv * z, -inv * (alpha - one)],
                grad_q: vec![-inv * p, -inv * p_alpha],
            })
        }
        (EnsembleSpec::KempHall, PhasePoint::Radial { z, p, r, p_r }) => {
            if *r == 0.0 {
                return Err(EikonalError::KempHallAxis);
            }
            let zb = z.conj();
            let pb = p.conj();
            let pr = C64::new(*p_r, 0.0);
            let rr = C64::new(*r, 0.0);
            let one = C64::new(1.0, 0.0);
            // H = (r/2) p_r (1 + (|z|^2 - r^2)/(2r) p_r - z p - zbar pbar)
            let inner = one + (z * zb - rr * rr) / (2.0 * rr) * pr - z * p - zb * pb;
            let value = rr * half * pr * inner;
            let dh_dp = -rr * half * pr * z;
            let dh_dpb = -rr * half * pr * zb;
            let dh_dpr = rr * half * inner + rr * half * pr * (z * zb - rr * rr) / (2.0 * rr);
            let dh_dz = rr * half * pr * (zb / (2.0 * rr) * pr - p);
            let dh_dzb = rr * half * pr * (z / (2.0 * rr) * pr - pb);
            let dh_dr = half * pr * inner + rr * half * pr * pr * (-(z * zb) / (2.0 * rr * rr) - half);
            Ok(HamiltonianValue {
                value,
                grad_p: vec![dh_dp, dh_dpb, dh_dpr],
                grad_q: vec![dh_dz, dh_dzb, dh_dr],
            })
        }
        (s, PhasePoint::Quaternionic(pair)) if s.is_additive() => {
            let m = pair.g.matrix();
            let g = [m[0][0], m[0][1], m[1][0], m[1][1]];
            Ok(quaternionic_additive_eval(s, g))
        }
        (s, _) => Err(EikonalError::UnsupportedVariant(s.name())),
    }
}

/// H for additive quaternionic variants as a holomorphic function of the four
/// resolvent entries `[g11, g12, g21, g22]`. Used directly by the generic
/// integrator, which evolves the entries without assuming the conjugation
/// symmetry.
pub fn quaternionic_additive_eval(spec: &EnsembleSpec, g: [C64; 4]) -> HamiltonianValue {
    let zero = C64::new(0.0, 0.0);
    match spec {
        // diag(R) = (g11, g22): H = (g11^2 + g22^2)/2
        EnsembleSpec::Gue => HamiltonianValue {
            value: 0.5 * (g[0] * g[0] + g[3] * g[3]),
            grad_p: vec![g[0], zero, zero, g[3]],
            grad_q: vec![zero; 4],
        },
        // tau/2 (g11^2 + g22^2) + g12 g21
        EnsembleSpec::Elliptic { tau } => HamiltonianValue {
            value: 0.5 * *tau * (g[0] * g[0] + g[3] * g[3]) + g[1] * g[2],
            grad_p: vec![*tau * g[0], g[2], g[1], *tau * g[3]],
            grad_q: vec![zero; 4],
        },
        EnsembleSpec::Ginibre => HamiltonianValue {
            value: g[1] * g[2],
            grad_p: vec![zero, g[2], g[1], zero],
            grad_q: vec![zero; 4],
        },
        // H = F(g12 g21) with F the primitive of A; on physical states the
        // argument is -|p_w|^2 and H = int_0^{-|p_w|^2} A(x) dx.
        EnsembleSpec::BiUnitary { a_coeffs } => {
            let s = g[1] * g[2];
            let (a, f) = gen_sequence(a_coeffs, s);
            HamiltonianValue {
                value: f,
                grad_p: vec![zero, a * g[2], a * g[1], zero],
                grad_q: vec![zero; 4],
            }
        }
        _ => unreachable!("caller checked is_additive"),
    }
}

/// Converts a quaternionic phase point to the Kemp-Hall radial chart.
/// `p_r = 2 Re(p_w e^{i arg w})` by the chain rule.
pub fn to_radial_chart(pair: &QuaternionPair) -> Result<PhasePoint> {
    let w = pair.q.w;
    let r = w.norm();
    if r == 0.0 {
        return Err(EikonalError::KempHallAxis);
    }
    let phase = w / r;
    let p_r = 2.0 * (pair.p_w() * phase).re;
    Ok(PhasePoint::Radial {
        z: pair.q.z,
        p: pair.p_z(),
        r,
        p_r,
    })
}

/// Inverse chart map; the phase of `w` is supplied explicitly (the radial
/// chart forgets it) and the radial momentum is split evenly between `p_w`
/// and its conjugate.
pub fn from_radial_chart(point: &PhasePoint, w_phase: C64) -> Result<QuaternionPair> {
    match point {
        PhasePoint::Radial { z, p, r, p_r } => {
            let w = w_phase * *r;
            let p_w = C64::new(0.5 * p_r, 0.0) * w_phase.conj();
            Ok(QuaternionPair::new(
                Quaternion::new(*z, w)?,
                QuaternionPair::g_from_momenta(*p, p_w),
            ))
        }
        _ => Err(EikonalError::UnsupportedVariant("expected radial point")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gue_r_is_identity() {
        let p = c(0.5, 0.1);
        match r_transform_eval(&EnsembleSpec::Gue, RArg::Scalar(p)).unwrap() {
            RArg::Scalar(r) => assert_eq!(r, p),
            _ => panic!("expected scalar"),
        }
    }

    #[test]
    fn ginibre_r_keeps_offdiagonal_only() {
        let q = Quaternion::raw(c(1.0, 2.0), c(0.3, -0.4));
        match r_transform_eval(&EnsembleSpec::Ginibre, RArg::Quat(q)).unwrap() {
            RArg::Quat(r) => {
                assert_eq!(r.z, c(0.0, 0.0));
                assert_eq!(r.w, q.w);
            }
            _ => panic!("expected quaternion"),
        }
    }

    #[test]
    fn elliptic_tau_zero_reduces_to_ginibre() {
        let q = Quaternion::raw(c(-0.7, 0.2), c(1.1, 0.9));
        let e = r_transform_eval(&EnsembleSpec::Elliptic { tau: 0.0 }, RArg::Quat(q)).unwrap();
        let g = r_transform_eval(&EnsembleSpec::Ginibre, RArg::Quat(q)).unwrap();
        assert_eq!(e, g);
    }

    #[test]
    fn r_transform_rejects_hamiltonian_variants() {
        let r = r_transform_eval(
            &EnsembleSpec::OrnsteinUhlenbeck { a: 1.0 },
            RArg::Scalar(c(1.0, 0.0)),
        );
        assert!(matches!(r, Err(EikonalError::UnsupportedVariant(_))));
    }

    #[test]
    fn gue_hamiltonian_value() {
        let pt = PhasePoint::Scalar { z: c(0.0, 0.0), p: c(1.0, 0.0) };
        let h = hamiltonian_eval(&EnsembleSpec::Gue, &pt, 0.0).unwrap();
        assert!((h.value - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn elliptic_tau_one_kinetic_term() {
        // p_z = i, p_w = 0 -> H = -1
        let g = QuaternionPair::g_from_momenta(c(0.0, 1.0), c(0.0, 0.0));
        let pair = QuaternionPair::new(Quaternion::identity(), g);
        let h = hamiltonian_eval(
            &EnsembleSpec::Elliptic { tau: 1.0 },
            &PhasePoint::Quaternionic(pair),
            0.0,
        )
        .unwrap();
        assert!((h.value - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn wishart_arithmetic() {
        let pt = PhasePoint::Scalar { z: c(2.0, 0.0), p: c(1.0, 0.0) };
        let h = hamiltonian_eval(&EnsembleSpec::Wishart { r: 1.0 }, &pt, 0.0).unwrap();
        assert!((h.value - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn bridge_time_overflow() {
        let pt = PhasePoint::Bridge {
            z: c(0.0, 1.0),
            p: c(0.0, 0.0),
            alpha: c(0.0, 0.0),
            p_alpha: c(0.0, 0.0),
        };
        let r = hamiltonian_eval(&EnsembleSpec::Bridge { t_f: 1.0 }, &pt, 1.0);
        assert!(matches!(r, Err(EikonalError::BridgeTimeOverflow { .. })));
    }

    #[test]
    fn kemp_hall_axis_error() {
        let pt = PhasePoint::Radial { z: c(1.0, 0.0), p: c(0.0, 0.0), r: 0.0, p_r: 1.0 };
        assert!(matches!(
            hamiltonian_eval(&EnsembleSpec::KempHall, &pt, 0.0),
            Err(EikonalError::KempHallAxis)
        ));
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = EnsembleSpec::Elliptic { tau: 0.5 };
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(s, r#"{"variant":"elliptic","params":{"tau":0.5}}"#);
        let back: EnsembleSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, spec);
        let gue: EnsembleSpec = serde_json::from_str(r#"{"variant":"gue"}"#).unwrap();
        assert_eq!(gue, EnsembleSpec::Gue);
    }

    #[test]
    fn bi_unitary_single_coeff_matches_ginibre() {
        let q = Quaternion::raw(c(0.2, 0.1), c(-0.5, 0.8));
        let b = r_transform_eval(
            &EnsembleSpec::BiUnitary { a_coeffs: vec![1.0] },
            RArg::Quat(q),
        )
        .unwrap();
        let g = r_transform_eval(&EnsembleSpec::Ginibre, RArg::Quat(q)).unwrap();
        assert_eq!(b, g);

        let entries = [c(0.3, 0.0), c(0.2, -0.1), c(-0.2, -0.1), c(0.3, 0.0)];
        let hb = quaternionic_additive_eval(
            &EnsembleSpec::BiUnitary { a_coeffs: vec![1.0] },
            entries,
        );
        let hg = quaternionic_additive_eval(&EnsembleSpec::Ginibre, entries);
        assert_eq!(hb.value, hg.value);
        assert_eq!(hb.grad_p, hg.grad_p);
    }

    #[test]
    fn radial_chart_round_trip() {
        let pair = QuaternionPair::new(
            Quaternion::raw(c(0.4, -0.3), c(0.6, 0.8)),
            QuaternionPair::g_from_momenta(c(0.1, 0.2), c(0.5, 0.0)),
        );
        let radial = to_radial_chart(&pair).unwrap();
        let w_phase = pair.q.w / pair.q.w.norm();
        let back = from_radial_chart(&radial, w_phase).unwrap();
        assert!((back.q.z - pair.q.z).norm() < 1e-14);
        assert!((back.q.w - pair.q.w).norm() < 1e-14);
        assert!((back.p_z() - pair.p_z()).norm() < 1e-14);
        // p_r is preserved even though the transverse part of p_w is not.
        let radial2 = to_radial_chart(&back).unwrap();
        match (radial, radial2) {
            (
                PhasePoint::Radial { p_r: a, .. },
                PhasePoint::Radial { p_r, .. },
            ) => assert!((a - p_r).abs() < 1e-14),
            _ => unreachable!(),
        }
    }

    /// Central finite differences of H agree with analytic gradients.
    #[test]
    fn gradients_match_finite_differences() {
        let specs: Vec<EnsembleSpec> = vec![
            EnsembleSpec::Gue,
            EnsembleSpec::OrnsteinUhlenbeck { a: 0.7 },
            EnsembleSpec::Wishart { r: 0.5 },
            EnsembleSpec::Jacobi { theta: 1.3, lambda: 0.4 },
            EnsembleSpec::UnitaryZ,
            EnsembleSpec::SingularValue,
            EnsembleSpec::FreeRotor,
        ];
        let mut rng = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            rng ^= rng << 13;
            rng ^= rng >> 7;
            rng ^= rng << 17;
            (rng >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        let h_step = 1e-5;
        for spec in &specs {
            for _ in 0..100 {
                let z = c(next(), next());
                let p = c(next(), next());
                let eval = |z: C64, p: C64| {
                    hamiltonian_eval(spec, &PhasePoint::Scalar { z, p }, 0.0)
                        .unwrap()
                        .value
                };
                let h = hamiltonian_eval(spec, &PhasePoint::Scalar { z, p }, 0.0).unwrap();
                let dp = (eval(z, p + c(h_step, 0.0)) - eval(z, p - c(h_step, 0.0)))
                    / (2.0 * h_step);
                let dz = (eval(z + c(h_step, 0.0), p) - eval(z - c(h_step, 0.0), p))
                    / (2.0 * h_step);
                let scale = 1.0 + h.grad_p[0].norm() + h.grad_q[0].norm();
                assert!(
                    (dp - h.grad_p[0]).norm() / scale < 1e-6,
                    "{spec:?} grad_p mismatch"
                );
                assert!(
                    (dz - h.grad_q[0]).norm() / scale < 1e-6,
                    "{spec:?} grad_q mismatch"
                );
            }
        }
    }

    #[test]
    fn quaternionic_gradients_match_finite_differences() {
        let specs = vec![
            EnsembleSpec::Gue,
            EnsembleSpec::Elliptic { tau: 0.6 },
            EnsembleSpec::Ginibre,
            EnsembleSpec::BiUnitary { a_coeffs: vec![1.0, -0.3, 0.2] },
        ];
        let h_step = 1e-5;
        for spec in &specs {
            let g = [c(0.4, 0.2), c(-0.3, 0.5), c(0.1, -0.6), c(0.4, -0.2)];
            let hv = quaternionic_additive_eval(spec, g);
            for k in 0..4 {
                let mut gp = g;
                let mut gm = g;
                gp[k] += c(h_step, 0.0);
                gm[k] -= c(h_step, 0.0);
                let fd = (quaternionic_additive_eval(spec, gp).value
                    - quaternionic_additive_eval(spec, gm).value)
                    / (2.0 * h_step);
                let scale = 1.0 + hv.grad_p[k].norm();
                assert!((fd - hv.grad_p[k]).norm() / scale < 1e-6, "{spec:?} entry {k}");
            }
        }
    }

    #[test]
    fn kemp_hall_gradients_match_finite_differences() {
        let h_step = 1e-5;
        let (z, p, r, p_r) = (c(0.8, -0.2), c(0.3, 0.4), 0.9, 0.7);
        let eval = |z: C64, p: C64, r: f64, p_r: f64| {
            hamiltonian_eval(
                &EnsembleSpec::KempHall,
                &PhasePoint::Radial { z, p, r, p_r },
                0.0,
            )
            .unwrap()
            .value
        };
        let hv = hamiltonian_eval(
            &EnsembleSpec::KempHall,
            &PhasePoint::Radial { z, p, r, p_r },
            0.0,
        )
        .unwrap();
        // Physical-state finite differences: z and p perturbations move the
        // conjugates too, so compare against the Wirtinger combination.
        let d_re = (eval(z + c(h_step, 0.0), p, r, p_r) - eval(z - c(h_step, 0.0), p, r, p_r))
            / (2.0 * h_step);
        let expect_re = hv.grad_q[0] + hv.grad_q[1];
        assert!((d_re - expect_re).norm() < 1e-6);
        let d_pr = (eval(z, p, r, p_r + h_step) - eval(z, p, r, p_r - h_step)) / (2.0 * h_step);
        assert!((d_pr - hv.grad_p[2]).norm() < 1e-6);
        let d_r = (eval(z, p, r + h_step, p_r) - eval(z, p, r - h_step, p_r)) / (2.0 * h_step);
        assert!((d_r - hv.grad_q[2]).norm() < 1e-6);
    }

    /// Additive-variant H equals trapezoid quadrature of the R line integral
    /// along the straight path 0 -> G with matched index pairing.
    #[test]
    fn additive_hamiltonian_matches_quadrature() {
        let specs = vec![
            EnsembleSpec::Gue,
            EnsembleSpec::Elliptic { tau: 0.8 },
            EnsembleSpec::Ginibre,
            EnsembleSpec::BiUnitary { a_coeffs: vec![1.0, 0.5] },
        ];
        let g = [c(0.2, 0.1), c(-0.15, 0.25), c(0.05, -0.3), c(0.2, -0.1)];
        let n = 10_000;
        for spec in &specs {
            let hv = quaternionic_additive_eval(spec, g);
            let mut acc = c(0.0, 0.0);
            for k in 0..=n {
                let s = k as f64 / n as f64;
                let gs = [g[0] * s, g[1] * s, g[2] * s, g[3] * s];
                let r = r_matrix(spec, gs).unwrap();
                // Tr[R dQ] pairing: R11 dQ11 + R21 dQ12 + R12 dQ21 + R22 dQ22
                // with dQ = G ds along the straight path.
                let integrand = r[0] * g[0] + r[2] * g[1] + r[1] * g[2] + r[3] * g[3];
                let wgt = if k == 0 || k == n { 0.5 } else { 1.0 };
                acc += integrand * wgt;
            }
            acc /= n as f64;
            assert!(
                (acc - hv.value).norm() < 1e-10,
                "{spec:?}: quadrature {acc} vs {}",
                hv.value
            );
        }
    }
}
