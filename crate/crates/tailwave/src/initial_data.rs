//! Initial-data families on the mixed surface Sigma_0 = spacelike part
//! (r <= R) union outgoing cone N_0 (u = 0, r >= R), and the
//! pure-characteristic specialisation used by the evolution.
//!
//! Cone profiles are closed-form evaluators, so quadratures against them can
//! be continued analytically past the grid extent and compact support is
//! exact rather than truncated.

use crate::error::{Error, Result};
use crate::geometry::{Case, CoordinateMap, SpacetimeModel};
use crate::numerics::bump;
use crate::Real;
use std::sync::Arc;

type Evaluator = Arc<dyn Fn(Real) -> Real + Send + Sync>;

/// Foliation function h_Sigma of the spacelike part, with its derivative.
/// `InverseD` selects h = 1/D (the {t = 0} surface), which is singular at
/// the horizon; data using it must stay away from the bifurcation sphere.
#[derive(Clone)]
pub enum FoliationKind {
    Constant(Real),
    InverseD,
    Custom { h: Evaluator, h1: Evaluator },
}

#[derive(Clone)]
pub struct FoliationSpec {
    pub kind: FoliationKind,
}

impl Default for FoliationSpec {
    fn default() -> Self {
        FoliationSpec {
            kind: FoliationKind::Constant(1.0),
        }
    }
}

impl FoliationSpec {
    pub fn constant(h: Real) -> Self {
        FoliationSpec {
            kind: FoliationKind::Constant(h),
        }
    }

    pub fn inverse_d() -> Self {
        FoliationSpec {
            kind: FoliationKind::InverseD,
        }
    }

    pub fn h(&self, model: &SpacetimeModel, r: Real) -> Real {
        match &self.kind {
            FoliationKind::Constant(c) => *c,
            FoliationKind::InverseD => 1.0 / model.d(r),
            FoliationKind::Custom { h, .. } => h(r),
        }
    }

    /// dh/dr.
    pub fn h1(&self, model: &SpacetimeModel, r: Real) -> Real {
        match &self.kind {
            FoliationKind::Constant(_) => 0.0,
            FoliationKind::InverseD => {
                let d = model.d(r);
                -model.d1(r) / (d * d)
            }
            FoliationKind::Custom { h1, .. } => h1(r),
        }
    }

    /// (D h)'(r) = D' h + D h'. Identically zero for h = 1/D.
    pub fn dh_prime(&self, model: &SpacetimeModel, r: Real) -> Real {
        match &self.kind {
            FoliationKind::InverseD => 0.0,
            _ => model.d1(r) * self.h(model, r) + model.d(r) * self.h1(model, r),
        }
    }

    /// v_Sigma(r) with dv/dr = h and v_Sigma(R) = 2 r*(R) = 2R.
    pub fn v_sigma(&self, map: &CoordinateMap, r: Real) -> Real {
        let model = map.model();
        let big_r = model.r_ref;
        let f = |rho: Real| self.h(model, rho);
        let (int, _) = crate::numerics::quad::adaptive(&f, r, big_r, 1e-12, 1e-14);
        2.0 * big_r - int
    }
}

/// Closed-form cone profile phi(0, v).
#[derive(Clone, Debug)]
pub enum ConeProfile {
    Zero,
    /// amplitude * e^4 exp(-1/(x(1-x))) with x = (v - center + width)/(2 width)
    Bump {
        v_center: Real,
        width: Real,
        amplitude: Real,
    },
    /// d_v phi = 2 i0 / v^2 + sum_m q[m-1] v^(-2-m), integrated so that
    /// phi -> 0 as v -> infinity:  phi = -2 i0/v - sum_m q[m-1] v^(-1-m)/(m+1)
    Tail { i0: Real, q: Vec<Real> },
    Sum(Vec<(Real, ConeProfile)>),
}

impl ConeProfile {
    pub fn phi(&self, v: Real) -> Real {
        match self {
            ConeProfile::Zero => 0.0,
            ConeProfile::Bump {
                v_center,
                width,
                amplitude,
            } => {
                let x = (v - v_center + width) / (2.0 * width);
                amplitude * bump::profile(x)
            }
            ConeProfile::Tail { i0, q } => {
                let mut out = -2.0 * i0 / v;
                let mut vpow = v * v;
                for (m, &qm) in q.iter().enumerate() {
                    let mm = (m + 1) as Real;
                    out -= qm / ((mm + 1.0) * vpow);
                    vpow *= v;
                }
                out
            }
            ConeProfile::Sum(terms) => terms.iter().map(|(c, p)| c * p.phi(v)).sum(),
        }
    }

    pub fn dphi_dv(&self, v: Real) -> Real {
        match self {
            ConeProfile::Zero => 0.0,
            ConeProfile::Bump {
                v_center,
                width,
                amplitude,
            } => {
                let x = (v - v_center + width) / (2.0 * width);
                amplitude * bump::profile_d1(x) / (2.0 * width)
            }
            ConeProfile::Tail { i0, q } => {
                let mut out = 2.0 * i0 / (v * v);
                let mut vpow = v * v * v;
                for &qm in q.iter() {
                    out += qm / vpow;
                    vpow *= v;
                }
                out
            }
            ConeProfile::Sum(terms) => terms.iter().map(|(c, p)| c * p.dphi_dv(v)).sum(),
        }
    }

    /// Support interval when the profile is compactly supported.
    pub fn support(&self) -> Option<(Real, Real)> {
        match self {
            ConeProfile::Zero => Some((0.0, 0.0)),
            ConeProfile::Bump {
                v_center, width, ..
            } => Some((v_center - width, v_center + width)),
            ConeProfile::Tail { .. } => None,
            ConeProfile::Sum(terms) => {
                let mut lo = Real::INFINITY;
                let mut hi = Real::NEG_INFINITY;
                for (_, p) in terms {
                    let (a, b) = p.support()?;
                    lo = lo.min(a);
                    hi = hi.max(b);
                }
                Some((lo, hi))
            }
        }
    }

    /// Rough magnitude for tolerance scaling.
    pub fn scale(&self) -> Real {
        match self {
            ConeProfile::Zero => 0.0,
            ConeProfile::Bump { amplitude, .. } => amplitude.abs(),
            ConeProfile::Tail { i0, q } => i0.abs() + q.iter().map(|x| x.abs()).sum::<Real>(),
            ConeProfile::Sum(terms) => terms.iter().map(|(c, p)| c.abs() * p.scale()).sum(),
        }
    }

    /// Declared NP content of the profile (exact for Tail, zero for compact).
    pub fn declared_i0(&self) -> Real {
        match self {
            ConeProfile::Tail { i0, .. } => *i0,
            ConeProfile::Sum(terms) => terms.iter().map(|(c, p)| c * p.declared_i0()).sum(),
            _ => 0.0,
        }
    }
}

/// Data for phi = r psi on the outgoing cone N_0 plus the ingoing-ray
/// convention (constant, equal to phi(0, v0)).
#[derive(Clone, Debug)]
pub struct CharacteristicData {
    pub ell: u32,
    pub v0: Real,
    pub v_max: Real,
    pub profile: ConeProfile,
}

impl CharacteristicData {
    pub fn phi(&self, v: Real) -> Real {
        self.profile.phi(v)
    }

    pub fn dphi_dv(&self, v: Real) -> Real {
        self.profile.dphi_dv(v)
    }

    /// Constant value carried along the ingoing ray v = v0.
    pub fn ingoing_value(&self) -> Real {
        self.profile.phi(self.v0)
    }

    pub fn is_compact(&self) -> bool {
        self.profile.support().is_some()
    }

    pub fn scale(&self) -> Real {
        self.profile.scale()
    }
}

/// Compactly supported smooth bump on the cone. The ingoing profile is
/// identically zero (= phi(0, v0)), so the Newman-Penrose constant vanishes
/// exactly.
pub fn bump_data(
    v_center: Real,
    width: Real,
    amplitude: Real,
    ell: u32,
    v0: Real,
    v_max: Real,
) -> Result<CharacteristicData> {
    let lo = v_center - width;
    let hi = v_center + width;
    if !(v0 < lo && hi < v_max) {
        return Err(Error::SupportOutsideGrid { lo, hi, v0, v_max });
    }
    Ok(CharacteristicData {
        ell,
        v0,
        v_max,
        profile: ConeProfile::Bump {
            v_center,
            width,
            amplitude,
        },
    })
}

/// Data with prescribed Newman-Penrose constant and 1/r expansion
/// coefficients:
/// d_v phi(0, v) = 2 i0/v^2 + sum_m q_m v^(-2-m), q_m = 2^(m+1) p_m.
///
/// The q <-> p conversion is exact on a flat background (v = 2r at u = 0);
/// on curved backgrounds the realised coefficients for m >= 2 pick up
/// mass-dependent corrections inside the remainder class the expansion
/// already allows.
pub fn tail_data(
    i0_target: Real,
    p_coeffs: &[Real],
    _beta: Real,
    ell: u32,
    v0: Real,
    v_max: Real,
) -> Result<CharacteristicData> {
    let q: Vec<Real> = p_coeffs
        .iter()
        .enumerate()
        .map(|(i, &p)| (2f64).powi(i as i32 + 2) * p)
        .collect();
    Ok(CharacteristicData {
        ell,
        v0,
        v_max,
        profile: ConeProfile::Tail { i0: i0_target, q },
    })
}

/// Pointwise linear combination a * A + b * B.
pub fn superpose(
    a: Real,
    data_a: &CharacteristicData,
    b: Real,
    data_b: &CharacteristicData,
) -> Result<CharacteristicData> {
    if data_a.ell != data_b.ell {
        return Err(Error::ModeMismatch(data_a.ell, data_b.ell));
    }
    if (data_a.v0 - data_b.v0).abs() > 1e-12 * data_a.v0.abs().max(1.0)
        || (data_a.v_max - data_b.v_max).abs() > 1e-12 * data_a.v_max.abs().max(1.0)
    {
        return Err(Error::GridMismatch(format!(
            "cone ranges differ: [{}, {}] vs [{}, {}]",
            data_a.v0, data_a.v_max, data_b.v0, data_b.v_max
        )));
    }
    let mut terms = Vec::new();
    {
        let mut push = |c: Real, p: &ConeProfile| match p {
            ConeProfile::Sum(inner) => {
                for (ci, pi) in inner {
                    terms.push((c * ci, pi.clone()));
                }
            }
            other => terms.push((c, other.clone())),
        };
        push(a, &data_a.profile);
        push(b, &data_b.profile);
    }
    Ok(CharacteristicData {
        ell: data_a.ell,
        v0: data_a.v0,
        v_max: data_a.v_max,
        profile: ConeProfile::Sum(terms),
    })
}

/// Radial profile psi(rho) on the spacelike part [r_min, R].
#[derive(Clone, Debug)]
pub enum RadialProfile {
    Zero,
    Bump {
        center: Real,
        width: Real,
        amplitude: Real,
    },
}

impl RadialProfile {
    pub fn value(&self, rho: Real) -> Real {
        match self {
            RadialProfile::Zero => 0.0,
            RadialProfile::Bump {
                center,
                width,
                amplitude,
            } => {
                let x = (rho - center + width) / (2.0 * width);
                amplitude * bump::profile(x)
            }
        }
    }

    pub fn deriv(&self, rho: Real) -> Real {
        match self {
            RadialProfile::Zero => 0.0,
            RadialProfile::Bump {
                center,
                width,
                amplitude,
            } => {
                let x = (rho - center + width) / (2.0 * width);
                amplitude * bump::profile_d1(x) / (2.0 * width)
            }
        }
    }

    pub fn support(&self) -> Option<(Real, Real)> {
        match self {
            RadialProfile::Zero => None,
            RadialProfile::Bump { center, width, .. } => Some((center - width, center + width)),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RadialProfile::Zero)
    }
}

/// Spacelike data: psi and T psi as radial profiles. The quantities entering
/// the constants quadratures follow from phi = rho psi:
/// d_rho phi = psi + rho psi', and T phi = rho (T psi).
#[derive(Clone, Debug)]
pub struct SpacelikeData {
    pub psi: RadialProfile,
    pub tpsi: RadialProfile,
}

impl SpacelikeData {
    pub fn zero() -> Self {
        SpacelikeData {
            psi: RadialProfile::Zero,
            tpsi: RadialProfile::Zero,
        }
    }

    pub fn phi(&self, rho: Real) -> Real {
        rho * self.psi.value(rho)
    }

    pub fn dphi_drho(&self, rho: Real) -> Real {
        self.psi.value(rho) + rho * self.psi.deriv(rho)
    }

    pub fn tphi(&self, rho: Real) -> Real {
        rho * self.tpsi.value(rho)
    }

    pub fn is_zero(&self) -> bool {
        self.psi.is_zero() && self.tpsi.is_zero()
    }

    pub fn support(&self) -> Option<(Real, Real)> {
        match (self.psi.support(), self.tpsi.support()) {
            (None, None) => None,
            (Some(a), None) => Some(a),
            (None, Some(b)) => Some(b),
            (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1))),
        }
    }
}

/// Validated initial data on the full mixed surface Sigma_0.
#[derive(Clone)]
pub struct MixedSurfaceData {
    pub foliation: FoliationSpec,
    pub spacelike: SpacelikeData,
    pub cone: CharacteristicData,
}

pub fn mixed_data(
    foliation: FoliationSpec,
    spacelike: SpacelikeData,
    cone: CharacteristicData,
    model: &SpacetimeModel,
) -> Result<MixedSurfaceData> {
    let big_r = model.r_ref;
    let phi_sp = spacelike.phi(big_r);
    let phi_cone = cone.phi(cone.v0);
    let tol = 1e-12 * cone.scale().max(1.0);
    if (phi_sp - phi_cone).abs() > tol {
        return Err(Error::JunctionMismatch {
            spacelike: phi_sp,
            cone: phi_cone,
        });
    }
    if model.case() == Case::Horizon {
        if let FoliationKind::InverseD = foliation.kind {
            if let Some((lo, _)) = spacelike.support() {
                let margin = 1e-6 * (big_r - model.r_plus);
                if lo <= model.r_plus + margin {
                    return Err(Error::BifurcationSphereSupport);
                }
            }
        }
    }
    Ok(MixedSurfaceData {
        foliation,
        spacelike,
        cone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_model, ModelKind};

    #[test]
    fn bump_midpoint_is_amplitude() {
        let d = bump_data(40.0, 10.0, 1.0, 0, 20.0, 3000.0).unwrap();
        assert!((d.phi(40.0) - 1.0).abs() < 1e-15);
        assert_eq!(d.phi(20.0), 0.0);
        assert_eq!(d.ingoing_value(), 0.0);
        assert!(d.is_compact());
    }

    #[test]
    fn bump_support_must_fit() {
        assert!(matches!(
            bump_data(25.0, 10.0, 1.0, 0, 20.0, 3000.0),
            Err(Error::SupportOutsideGrid { .. })
        ));
    }

    #[test]
    fn zero_amplitude_is_zero_data() {
        let d = bump_data(40.0, 10.0, 0.0, 0, 20.0, 3000.0).unwrap();
        for v in [25.0, 40.0, 55.0] {
            assert_eq!(d.phi(v), 0.0);
        }
        assert_eq!(d.scale(), 0.0);
    }

    #[test]
    fn tail_profile_derivative_consistency() {
        let d = tail_data(5.0, &[1.0, -2.0], 1.0, 0, 20.0, 3000.0).unwrap();
        for &v in &[25.0, 100.0, 777.0] {
            let h = 1e-3 * v;
            let fd = (d.phi(v + h) - d.phi(v - h)) / (2.0 * h);
            // central difference truncation is O(h^2) with h = 1e-3 v
            assert!((fd - d.dphi_dv(v)).abs() < 1e-5 * d.dphi_dv(v).abs().max(1e-10));
        }
        // q1 = 4 p1, q2 = 8 p2
        match &d.profile {
            ConeProfile::Tail { q, .. } => {
                assert_eq!(q[0], 4.0);
                assert_eq!(q[1], -16.0);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn superpose_cancels_itself() {
        let a = bump_data(40.0, 10.0, 1.0, 0, 20.0, 3000.0).unwrap();
        let s = superpose(1.0, &a, -1.0, &a).unwrap();
        for &v in &[33.0, 40.0, 47.5] {
            assert_eq!(s.phi(v), 0.0);
        }
    }

    #[test]
    fn superpose_rejects_mode_mismatch() {
        let a = bump_data(40.0, 10.0, 1.0, 0, 20.0, 3000.0).unwrap();
        let b = bump_data(40.0, 10.0, 1.0, 1, 20.0, 3000.0).unwrap();
        assert!(matches!(
            superpose(1.0, &a, 1.0, &b),
            Err(Error::ModeMismatch(0, 1))
        ));
    }

    #[test]
    fn inverse_d_foliation_makes_dh_prime_vanish() {
        let m = make_model(ModelKind::Schwarzschild, 1.0, 0.0, 1.0, None, None).unwrap();
        let f = FoliationSpec::inverse_d();
        for &r in &[2.5, 4.0, 9.0] {
            assert_eq!(f.dh_prime(&m, r), 0.0);
            assert!((f.h(&m, r) * m.d(r) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn mixed_data_junction_and_bifurcation_guards() {
        let m = make_model(ModelKind::Schwarzschild, 1.0, 0.0, 1.0, None, None).unwrap();
        let cone = bump_data(40.0, 10.0, 1.0, 0, 20.0, 3000.0).unwrap();
        // psi bump near the horizon with h = 1/D must be rejected
        let sp = SpacelikeData {
            psi: RadialProfile::Bump {
                center: 2.0,
                width: 1.0,
                amplitude: 1.0,
            },
            tpsi: RadialProfile::Zero,
        };
        assert!(matches!(
            mixed_data(FoliationSpec::inverse_d(), sp, cone.clone(), &m),
            Err(Error::BifurcationSphereSupport)
        ));
        // away from the horizon it validates
        let sp = SpacelikeData {
            psi: RadialProfile::Bump {
                center: 5.0,
                width: 1.5,
                amplitude: 1.0,
            },
            tpsi: RadialProfile::Zero,
        };
        assert!(mixed_data(FoliationSpec::inverse_d(), sp, cone, &m).is_ok());
    }

    #[test]
    fn v_sigma_matches_normalisation() {
        let m = make_model(ModelKind::Schwarzschild, 1.0, 0.0, 1.0, None, None).unwrap();
        let map = crate::geometry::CoordinateMap::new(&m);
        let f = FoliationSpec::constant(1.0);
        assert!((f.v_sigma(&map, 10.0) - 20.0).abs() < 1e-12);
        assert!((f.v_sigma(&map, 6.0) - 16.0).abs() < 1e-10);
    }
}
