//! Background spacetimes: the metric function D(r), the tortoise coordinate
//! r* with dr*/dr = 1/D normalised so r*(R) = R, its inverse, and the
//! one-dimensional mode potential.
//!
//! Two cases are supported. With a non-degenerate horizon (D(r+) = 0,
//! D'(r+) != 0) the tortoise integral has a logarithmic endpoint singularity
//! which is split off analytically: 1/D = 1/(kappa (r - r+)) + S(r) with S
//! smooth up to the horizon. Without a horizon (D >= d_D > 0 down to r = 0)
//! the integrand is regular and no split is needed.

use crate::error::{Error, Result};
use crate::numerics::quad;
use crate::Real;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    Minkowski,
    Schwarzschild,
    ReissnerNordstrom,
    Custom,
}

/// Sign structure of D: `Horizon` has r_min = r+ > 0 with a simple zero of D
/// there; `Regular` has D bounded below by a positive constant down to r = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Case {
    Horizon,
    Regular,
}

type Evaluator = Arc<dyn Fn(Real) -> Real + Send + Sync>;

/// User-supplied metric function for `ModelKind::Custom`.
#[derive(Clone)]
pub struct CustomMetric {
    pub d: Evaluator,
    pub d1: Evaluator,
    pub d2: Option<Evaluator>,
    /// Horizon radius; 0 selects the regular (r_min = 0) case.
    pub r_plus: Real,
}

#[derive(Clone)]
pub struct SpacetimeModel {
    pub kind: ModelKind,
    pub mass: Real,
    pub charge: Real,
    pub r_plus: Real,
    pub r_min: Real,
    /// Asymptotic coefficients: D = 1 + sum_m d_coeffs[m] r^{-m-1} + O(r^{-N-beta}).
    pub d_coeffs: Vec<Real>,
    pub beta: Real,
    /// Reference radius R: tortoise normalisation point and spacelike/null junction.
    pub r_ref: Real,
    custom: Option<CustomMetric>,
}

impl std::fmt::Debug for SpacetimeModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpacetimeModel")
            .field("kind", &self.kind)
            .field("mass", &self.mass)
            .field("charge", &self.charge)
            .field("r_plus", &self.r_plus)
            .field("r_ref", &self.r_ref)
            .finish()
    }
}

impl SpacetimeModel {
    pub fn d(&self, r: Real) -> Real {
        match self.kind {
            ModelKind::Minkowski => 1.0,
            ModelKind::Schwarzschild => 1.0 - 2.0 * self.mass / r,
            ModelKind::ReissnerNordstrom => {
                1.0 - 2.0 * self.mass / r + self.charge * self.charge / (r * r)
            }
            ModelKind::Custom => (self.custom.as_ref().unwrap().d)(r),
        }
    }

    pub fn d1(&self, r: Real) -> Real {
        match self.kind {
            ModelKind::Minkowski => 0.0,
            ModelKind::Schwarzschild => 2.0 * self.mass / (r * r),
            ModelKind::ReissnerNordstrom => {
                2.0 * self.mass / (r * r) - 2.0 * self.charge * self.charge / (r * r * r)
            }
            ModelKind::Custom => (self.custom.as_ref().unwrap().d1)(r),
        }
    }

    pub fn d2(&self, r: Real) -> Real {
        match self.kind {
            ModelKind::Minkowski => 0.0,
            ModelKind::Schwarzschild => -4.0 * self.mass / (r * r * r),
            ModelKind::ReissnerNordstrom => {
                -4.0 * self.mass / (r * r * r)
                    + 6.0 * self.charge * self.charge / (r * r * r * r)
            }
            ModelKind::Custom => match &self.custom.as_ref().unwrap().d2 {
                Some(f) => f(r),
                None => {
                    // central difference of d1
                    let h = 1e-5 * r.max(1.0);
                    (self.d1(r + h) - self.d1(r - h)) / (2.0 * h)
                }
            },
        }
    }

    pub fn case(&self) -> Case {
        if self.r_plus > 0.0 {
            Case::Horizon
        } else {
            Case::Regular
        }
    }

    /// D'(r+), the slope of D at the horizon (Case I only).
    pub fn kappa(&self) -> Real {
        debug_assert!(self.case() == Case::Horizon);
        self.d1(self.r_plus)
    }

    /// Length scale max(M, 1) used for tolerances and default extents.
    pub fn scale(&self) -> Real {
        self.mass.max(1.0)
    }
}

/// Build a background model, auditing the Case I/II sign structure and the
/// asymptotic-flatness decay on a sample grid.
pub fn make_model(
    kind: ModelKind,
    mass: Real,
    charge: Real,
    beta: Real,
    r_ref: Option<Real>,
    custom: Option<CustomMetric>,
) -> Result<SpacetimeModel> {
    if mass < 0.0 {
        return Err(Error::NegativeMass(mass));
    }
    let (r_plus, d_coeffs, charge) = match kind {
        ModelKind::Minkowski => (0.0, vec![], 0.0),
        ModelKind::Schwarzschild => (2.0 * mass, vec![-2.0 * mass], 0.0),
        ModelKind::ReissnerNordstrom => {
            if charge.abs() >= mass {
                return Err(Error::ExtremalOrSuperextremal { m: mass, e: charge });
            }
            let rp = mass + (mass * mass - charge * charge).sqrt();
            (rp, vec![-2.0 * mass, charge * charge], charge)
        }
        ModelKind::Custom => {
            let c = custom
                .as_ref()
                .expect("custom kind requires a CustomMetric");
            (c.r_plus, vec![-2.0 * mass], charge)
        }
    };
    let scale = mass.max(1.0);
    let model = SpacetimeModel {
        kind,
        mass,
        charge,
        r_plus,
        r_min: r_plus.max(0.0),
        d_coeffs,
        beta,
        r_ref: r_ref.unwrap_or(10.0 * scale),
        custom,
    };
    audit_model(&model)?;
    Ok(model)
}

/// Sampling audit of the model invariants over [r_min, 1e3 * max(M, 1)].
fn audit_model(model: &SpacetimeModel) -> Result<()> {
    let scale = model.scale();
    let hi = 1e3 * scale;
    match model.case() {
        Case::Horizon => {
            let rp = model.r_plus;
            let d_at_rp = model.d(rp);
            if d_at_rp.abs() > 1e-10 * scale.max(1.0) {
                return Err(Error::CustomSignViolation {
                    r: rp,
                    detail: format!("D(r+) = {d_at_rp}, expected 0"),
                });
            }
            let kappa = model.d1(rp);
            if kappa.abs() < 1e-12 {
                return Err(Error::CustomSignViolation {
                    r: rp,
                    detail: "D'(r+) = 0: degenerate (extremal) horizon".into(),
                });
            }
            for i in 1..=400 {
                let t = i as Real / 400.0;
                let r = rp + (hi - rp) * t * t;
                if model.d(r) <= 0.0 {
                    return Err(Error::CustomSignViolation {
                        r,
                        detail: format!("D(r) = {} <= 0 outside horizon", model.d(r)),
                    });
                }
            }
        }
        Case::Regular => {
            let mut d_min = Real::INFINITY;
            for i in 0..=400 {
                let t = i as Real / 400.0;
                let r = 1e-6 * scale + (hi - 1e-6 * scale) * t;
                d_min = d_min.min(model.d(r));
            }
            if d_min <= 0.0 {
                return Err(Error::CustomSignViolation {
                    r: 0.0,
                    detail: format!("min sampled D = {d_min} <= 0 in the regular case"),
                });
            }
        }
    }
    // asymptotic flatness: |D - 1 + 2M/r| r^{1+beta} should stay bounded;
    // compare far samples against the level set at R.
    let r0 = model.r_ref;
    let dev = |r: Real| (model.d(r) - 1.0 + 2.0 * model.mass / r).abs() * r.powf(1.0 + model.beta);
    let c0 = dev(r0).max(1e-12);
    for i in 1..=40 {
        let r = r0 * (1.0 + 0.5 * i as Real).min(1e6);
        if dev(r) > 10.0 * c0 + 1e-9 {
            return Err(Error::CustomSignViolation {
                r,
                detail: format!(
                    "asymptotic flatness violated: |D - 1 + 2M/r| r^(1+beta) grows ({} vs {} at R)",
                    dev(r),
                    c0
                ),
            });
        }
    }
    Ok(())
}

/// Regular part S of the tortoise integrand. In Case I, 1/D(r) =
/// 1/(kappa (r - r+)) + S(r) with S extending smoothly to the horizon;
/// in Case II, S = 1/D itself.
fn regular_integrand(model: &SpacetimeModel, r: Real) -> Real {
    match model.case() {
        Case::Regular => 1.0 / model.d(r),
        Case::Horizon => match model.kind {
            ModelKind::Schwarzschild => 1.0,
            ModelKind::ReissnerNordstrom => {
                let m = model.mass;
                let e = model.charge;
                let rp = m + (m * m - e * e).sqrt();
                let rm = m - (m * m - e * e).sqrt();
                // exact: 1/D - rp^2/((rp - rm)(r - rp)) after cancellation
                (r * rp - rm * (r + rp)) / ((r - rm) * (rp - rm))
            }
            _ => {
                let rp = model.r_plus;
                let kappa = model.d1(rp);
                let x = r - rp;
                let x_guard = 1e-4 * (model.r_ref - rp);
                if x > x_guard {
                    1.0 / model.d(r) - 1.0 / (kappa * x)
                } else {
                    // series: S(r+) = -D''(r+) / (2 D'(r+)^2), linear continuation
                    let s0 = -model.d2(rp) / (2.0 * kappa * kappa);
                    let s1 = {
                        // finite-difference slope of S just outside the guard
                        let a = x_guard;
                        let b = 2.0 * x_guard;
                        let sa = 1.0 / model.d(rp + a) - 1.0 / (kappa * a);
                        let sb = 1.0 / model.d(rp + b) - 1.0 / (kappa * b);
                        (sb - sa) / (b - a)
                    };
                    s0 + s1 * x
                }
            }
        },
    }
}

/// Tortoise coordinate map with a panel-quadrature table for both
/// directions. The kernel calls `inverse_tortoise` once per grid diagonal,
/// so the inverse path is a bracketed Newton iteration over the table.
pub struct CoordinateMap {
    model: SpacetimeModel,
    /// panel nodes in r, ascending
    r_nodes: Vec<Real>,
    /// integral of the regular integrand from R to each node
    s_prefix: Vec<Real>,
    /// r* at each node
    rstar_nodes: Vec<Real>,
    /// limit of the S-integral at the horizon (Case I)
    s_horizon: Real,
    /// r* at r -> r_min (Case II: finite; Case I: -inf, stores table bottom)
    rstar_bottom: Real,
    rstar_top: Real,
    /// below this r* the inverse uses the exponential closed form (Case I)
    rstar_switch: Real,
}

impl CoordinateMap {
    /// Build with the default table extent: r* in
    /// [-80 max(M,1), 4.2e6 max(M,1)].
    pub fn new(model: &SpacetimeModel) -> CoordinateMap {
        let s = model.scale();
        Self::with_extent(model, -80.0 * s, 4.2e6 * s)
    }

    pub fn with_extent(model: &SpacetimeModel, rstar_lo: Real, rstar_hi: Real) -> CoordinateMap {
        let r_ref = model.r_ref;
        let mut down_nodes: Vec<Real> = Vec::new();
        let mut r = r_ref;
        match model.case() {
            Case::Horizon => {
                let rp = model.r_plus;
                let kappa = model.d1(rp);
                // stop once the log term alone puts us below rstar_lo, or the
                // offset from the horizon falls below resolvable size
                let x_floor = 1e-14 * (r_ref - rp);
                loop {
                    let x = r - rp;
                    let log_part = r_ref + (x / (r_ref - rp)).ln() / kappa;
                    if (x <= x_floor) || (log_part < rstar_lo - 5.0) {
                        break;
                    }
                    r = rp + x * 0.93;
                    down_nodes.push(r);
                }
            }
            Case::Regular => {
                let floor = 1e-12 * model.scale();
                while r > floor {
                    r = (r * 0.9).max(floor * 0.999);
                    down_nodes.push(r);
                    if r <= floor {
                        break;
                    }
                }
            }
        }
        let mut up_nodes: Vec<Real> = Vec::new();
        let mut r = r_ref;
        // r* grows like r at large radii, so cap on r directly
        let r_cap = rstar_hi + 20.0 * model.scale();
        while r < r_cap {
            r *= 1.01;
            up_nodes.push(r);
        }

        let mut r_nodes: Vec<Real> = down_nodes.into_iter().rev().collect();
        let idx_ref = r_nodes.len();
        r_nodes.push(r_ref);
        r_nodes.extend(up_nodes);

        // prefix integrals of S from R, accumulated per panel
        let f = |rr: Real| regular_integrand(model, rr);
        let mut s_prefix = vec![0.0; r_nodes.len()];
        for i in (0..idx_ref).rev() {
            let (panel, _) = quad::gk15(&f, r_nodes[i + 1], r_nodes[i]);
            s_prefix[i] = s_prefix[i + 1] + panel;
        }
        for i in idx_ref + 1..r_nodes.len() {
            let (panel, _) = quad::gk15(&f, r_nodes[i - 1], r_nodes[i]);
            s_prefix[i] = s_prefix[i - 1] + panel;
        }

        let rstar_of = |r: Real, s_int: Real| -> Real {
            match model.case() {
                Case::Horizon => {
                    let rp = model.r_plus;
                    let kappa = model.d1(rp);
                    r_ref + ((r - rp) / (r_ref - rp)).ln() / kappa + s_int
                }
                Case::Regular => r_ref + s_int,
            }
        };
        let rstar_nodes: Vec<Real> = r_nodes
            .iter()
            .zip(&s_prefix)
            .map(|(&rn, &sp)| rstar_of(rn, sp))
            .collect();

        let s_horizon = match model.case() {
            Case::Horizon => {
                // remaining S-integral between the bottom node and r+ is
                // O(S(r+) * x_bottom): negligible by construction
                s_prefix[0]
            }
            Case::Regular => s_prefix[0],
        };
        let rstar_bottom = rstar_nodes[0];
        let rstar_top = *rstar_nodes.last().unwrap();
        let rstar_switch = match model.case() {
            Case::Horizon => {
                let x_switch = 1e-6 * (r_ref - model.r_plus);
                let i = r_nodes
                    .iter()
                    .position(|&rn| rn - model.r_plus >= x_switch)
                    .unwrap_or(0);
                rstar_nodes[i]
            }
            Case::Regular => Real::NEG_INFINITY,
        };

        CoordinateMap {
            model: model.clone(),
            r_nodes,
            s_prefix,
            rstar_nodes,
            s_horizon,
            rstar_bottom,
            rstar_top,
            rstar_switch,
        }
    }

    pub fn model(&self) -> &SpacetimeModel {
        &self.model
    }

    /// Integral of S from R to r using the panel table plus one partial panel.
    fn s_integral(&self, r: Real) -> Real {
        let nodes = &self.r_nodes;
        if r <= nodes[0] {
            return self.s_horizon;
        }
        if r >= *nodes.last().unwrap() {
            let n = nodes.len() - 1;
            let f = |rr: Real| regular_integrand(&self.model, rr);
            let (tailpanel, _) = quad::gk15(&f, nodes[n], r);
            return self.s_prefix[n] + tailpanel;
        }
        let i = crate::numerics::interp::bracket(nodes, r);
        let f = |rr: Real| regular_integrand(&self.model, rr);
        let (partial, _) = quad::gk15(&f, nodes[i], r);
        self.s_prefix[i] + partial
    }

    /// r*(r). Exact normalisation r*(R) = R.
    pub fn tortoise(&self, r: Real) -> Result<Real> {
        let model = &self.model;
        match model.case() {
            Case::Horizon => {
                if r <= model.r_plus {
                    return Err(Error::BelowHorizon {
                        r,
                        r_plus: model.r_plus,
                    });
                }
                let rp = model.r_plus;
                let kappa = model.d1(rp);
                Ok(model.r_ref + ((r - rp) / (model.r_ref - rp)).ln() / kappa + self.s_integral(r))
            }
            Case::Regular => {
                if r <= 0.0 {
                    return Err(Error::BelowHorizon { r, r_plus: 0.0 });
                }
                Ok(model.r_ref + self.s_integral(r))
            }
        }
    }

    /// r(r*). In Case I any r* is admitted (the near-horizon branch switches
    /// to the exponential closed form); in Case II values below r*(0) are out
    /// of the manifold.
    pub fn inverse_tortoise(&self, rstar: Real) -> Result<Real> {
        let model = &self.model;
        if rstar > self.rstar_top {
            return Err(Error::TableDomainExceeded {
                rstar,
                lo: self.rstar_bottom,
                hi: self.rstar_top,
            });
        }
        match model.case() {
            Case::Horizon => {
                let rp = model.r_plus;
                let kappa = model.d1(rp);
                if rstar < self.rstar_switch {
                    // exponential closed form from the log split. One
                    // refinement pass updates the S-integral at the estimate;
                    // the residual is O((S x)^2), far below the x itself.
                    let x0 =
                        (model.r_ref - rp) * (kappa * (rstar - model.r_ref - self.s_horizon)).exp();
                    let x = (model.r_ref - rp)
                        * (kappa * (rstar - model.r_ref - self.s_integral(rp + x0))).exp();
                    return Ok(rp + x);
                }
                let r0 = self.initial_guess(rstar);
                self.newton_polish(r0, rstar, rp)
            }
            Case::Regular => {
                if rstar < self.rstar_bottom {
                    return Err(Error::TableDomainExceeded {
                        rstar,
                        lo: self.rstar_bottom,
                        hi: self.rstar_top,
                    });
                }
                let r0 = self.initial_guess(rstar);
                self.newton_polish(r0, rstar, 0.0)
            }
        }
    }

    fn initial_guess(&self, rstar: Real) -> Real {
        let i = crate::numerics::interp::bracket(&self.rstar_nodes, rstar);
        // Hermite in r(r*) with slope dr/dr* = D
        let d0 = self.model.d(self.r_nodes[i]);
        let d1 = self.model.d(self.r_nodes[i + 1]);
        let guess = crate::numerics::interp::hermite(
            self.rstar_nodes[i],
            self.rstar_nodes[i + 1],
            self.r_nodes[i],
            self.r_nodes[i + 1],
            d0,
            d1,
            rstar,
        );
        guess.clamp(self.r_nodes[i], self.r_nodes[i + 1])
    }

    fn newton_polish(&self, mut r: Real, rstar: Real, r_floor: Real) -> Result<Real> {
        for _ in 0..10 {
            let f = self.tortoise(r)? - rstar;
            if f.abs() <= 1e-14 * rstar.abs().max(1.0) {
                break;
            }
            let step = self.model.d(r) * f;
            let mut r_next = r - step;
            if r_next <= r_floor {
                r_next = 0.5 * (r + r_floor);
            }
            r = r_next;
        }
        Ok(r)
    }

    /// Advertised inverse-table domain.
    pub fn rstar_domain(&self) -> (Real, Real) {
        (self.rstar_bottom, self.rstar_top)
    }
}

/// Mode potential V(r) = (D/4) (l(l+1)/r^2 + D'/r). For l = 0 this is
/// exactly D D' / (4r).
pub fn potential(model: &SpacetimeModel, ell: u32, r: Real) -> Real {
    let d = model.d(r);
    let d1 = model.d1(r);
    let l = ell as Real;
    0.25 * d * (l * (l + 1.0) / (r * r) + d1 / r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn schwarzschild() -> SpacetimeModel {
        make_model(ModelKind::Schwarzschild, 1.0, 0.0, 1.0, None, None).unwrap()
    }

    #[test]
    fn schwarzschild_basics() {
        let m = schwarzschild();
        assert!((m.d(4.0) - 0.5).abs() < 1e-15);
        assert_eq!(m.r_plus, 2.0);
        assert_eq!(m.r_ref, 10.0);
    }

    #[test]
    fn minkowski_is_identity_map() {
        let m = make_model(ModelKind::Minkowski, 0.0, 0.0, 1.0, None, None).unwrap();
        assert_eq!(m.r_min, 0.0);
        let map = CoordinateMap::new(&m);
        for &r in &[0.5, 1.0, 7.0, 123.0, 5e4] {
            assert!((map.tortoise(r).unwrap() - r).abs() < 1e-10 * r.max(1.0), "r = {r}");
            assert!((map.inverse_tortoise(r).unwrap() - r).abs() < 1e-10 * r.max(1.0));
        }
    }

    #[test]
    fn rn_horizon_radius() {
        let m = make_model(ModelKind::ReissnerNordstrom, 1.0, 0.5, 1.0, None, None).unwrap();
        assert!((m.r_plus - 1.8660254037844386).abs() < 1e-12);
    }

    #[test]
    fn extremal_rejected() {
        assert!(matches!(
            make_model(ModelKind::ReissnerNordstrom, 1.0, 1.0, 1.0, None, None),
            Err(Error::ExtremalOrSuperextremal { .. })
        ));
    }

    #[test]
    fn negative_mass_rejected() {
        assert!(matches!(
            make_model(ModelKind::Schwarzschild, -1.0, 0.0, 1.0, None, None),
            Err(Error::NegativeMass(_))
        ));
    }

    #[test]
    fn schwarzschild_tortoise_matches_antiderivative() {
        let m = schwarzschild();
        let map = CoordinateMap::new(&m);
        let exact = |r: f64| r + 2.0 * ((r - 2.0) / 8.0).ln();
        for &r in &[2.0 + 1e-8, 2.5, 4.0, 10.0, 55.5, 1234.5, 9.9e5] {
            let got = map.tortoise(r).unwrap();
            let want = exact(r);
            assert!(
                (got - want).abs() <= 1e-11 * want.abs().max(1.0),
                "r = {r}: got {got}, want {want}"
            );
        }
        assert_eq!(map.tortoise(10.0).unwrap(), 10.0);
    }

    #[test]
    fn rn_regular_integrand_matches_direct_difference() {
        let m = make_model(ModelKind::ReissnerNordstrom, 1.0, 0.5, 1.0, None, None).unwrap();
        let rp = m.r_plus;
        let kappa = m.d1(rp);
        for &r in &[rp + 0.5, 3.0, 8.0, 40.0] {
            let direct = 1.0 / m.d(r) - 1.0 / (kappa * (r - rp));
            let s = regular_integrand(&m, r);
            assert!((direct - s).abs() < 1e-9 * s.abs().max(1.0), "r = {r}: {direct} vs {s}");
        }
    }

    #[test]
    fn round_trip_inversion() {
        for m in [
            schwarzschild(),
            make_model(ModelKind::ReissnerNordstrom, 1.0, 0.5, 1.0, None, None).unwrap(),
        ] {
            let map = CoordinateMap::new(&m);
            for k in 0..200 {
                // spread radii from near-horizon to far field
                let t = k as f64 / 199.0;
                let r = m.r_plus + 1e-6 + (1e5 - m.r_plus) * t * t * t;
                let rs = map.tortoise(r).unwrap();
                let back = map.inverse_tortoise(rs).unwrap();
                assert!(
                    (back - r).abs() <= 1e-12 * r.max(m.mass),
                    "r = {r}, rs = {rs}, back = {back}"
                );
            }
        }
    }

    #[test]
    fn deep_inverse_is_exponentially_close_to_horizon() {
        let m = schwarzschild();
        let map = CoordinateMap::new(&m);
        let r = map.inverse_tortoise(-50.0).unwrap();
        assert!(r > 2.0);
        assert!(r - 2.0 < 1e-8, "r - 2 = {}", r - 2.0);
        // r* -> r -> r* loses ln-precision because r+ + x is stored as a
        // single f64; the achievable bound is eps * r+ / x, not 1e-12
        let rs = map.tortoise(r).unwrap();
        assert!((rs + 50.0).abs() < 1e-4, "rs = {rs}");
        // the r-space round trip stays tight
        let back = map.inverse_tortoise(rs).unwrap();
        assert!((back - r).abs() <= 1e-12 * r, "back = {back}, r = {r}");
    }

    #[test]
    fn potential_values() {
        let mink = make_model(ModelKind::Minkowski, 0.0, 0.0, 1.0, None, None).unwrap();
        assert_eq!(potential(&mink, 0, 3.7), 0.0);
        assert!((potential(&mink, 1, 2.0) - 0.125).abs() < 1e-15);
        let m = schwarzschild();
        assert!((potential(&m, 0, 4.0) - 0.00390625).abs() < 1e-15);
    }

    #[test]
    fn potential_identity_with_wave_equation_coefficient() {
        let m = schwarzschild();
        for &r in &[2.3, 5.0, 17.0, 300.0] {
            let v = potential(&m, 0, r);
            let lhs = v * 4.0 * r / m.d(r);
            assert!((lhs - m.d1(r)).abs() <= 1e-12 * m.d1(r).abs());
        }
    }

    #[test]
    fn case_one_potential_dies_off_at_negative_rstar() {
        let m = schwarzschild();
        let map = CoordinateMap::new(&m);
        let r = map.inverse_tortoise(-200.0).unwrap();
        let v = potential(&m, 0, r).abs();
        assert!(v < 1e-12, "V = {v}");
    }

    #[test]
    fn custom_model_sign_audit() {
        // a D that dips negative away from the horizon must be rejected
        let bad = CustomMetric {
            d: Arc::new(|r: f64| 1.0 - 2.0 / r - 50.0 * (-((r - 20.0) / 2.0).powi(2)).exp()),
            d1: Arc::new(|r: f64| 2.0 / (r * r)),
            d2: None,
            r_plus: 2.0,
        };
        assert!(make_model(ModelKind::Custom, 1.0, 0.0, 1.0, None, Some(bad)).is_err());
    }
}
