//! Construction of the time integral psi^(1) (and iterates psi^(k)): the
//! unique regular solution with T psi^(k) = psi^(k-1) that decays at spatial
//! infinity. On the cone the construction integrates
//!
//!     d_r psi^(1)(0, r) = (C0 - 2 int_r^inf r' d_r' phi dr') / (D r^2)
//!
//! inward from the analytic far-field expansion
//! psi^(1) = -C0/r - M C0/r^2 + (lim r^3 d_r phi)/r^2 + o(r^-2); on the
//! spacelike part it uses
//!
//!     D r^2 d_rho psi^(1)(0, rho) = - int_{r_min}^rho [ 2(1-hD) r d_rho phi
//!         - (2-Dh) r h T phi - r (Dh)' phi ] d rho',
//!
//! whose vanishing at r_min is exactly the integrability condition: any
//! offset delta in C0 reappears here as delta/(D r^2), divergent at the
//! horizon. The directly extracted I0[psi^(k)] = lim r^2 d_r (r psi^(k))
//! from the constructed profile is the independent oracle against the
//! closed form -lim r^3 d_r phi + M C0.

use crate::error::{Error, Result};
use crate::geometry::CoordinateMap;
use crate::initial_data::{FoliationSpec, MixedSurfaceData};
use crate::np_constants::{
    compute_c0_unchecked, cubic_limit, estimate_i0, vanishing_tol, ConeField, SpacelikeField,
    ValueWithError,
};
use crate::numerics::{fit, interp, quad};
use crate::Real;

/// One level of the time-integral chain. Carries the constructed cone
/// profile, the spacelike reconstruction feeding the next level, and both
/// evaluations of the NP constant of this level.
pub struct TimeIntegralData {
    pub order: u32,
    pub c0: ValueWithError,
    /// -lim r^3 d_r phi^(k-1) + M C0: the closed formula.
    pub i0_closed_form: ValueWithError,
    /// lim r^2 d_r (r psi^(k)) extracted from the constructed profile.
    pub i0_extracted: ValueWithError,
    pub v0: Real,
    pub provenance: String,

    // cone samples, ascending in r from R to r_far
    r_grid: Vec<Real>,
    psi: Vec<Real>,
    dpsi: Vec<Real>,
    v_cap: Real,
    /// coefficient of 1/r in r^2 d_r (r psi^(k)): drives analytic tails
    p1_hint: Real,
    scale: Real,

    // spacelike reconstruction on [r_min(+), R], ascending in rho
    rho_grid: Vec<Real>,
    psi_sp: Vec<Real>,
    dpsi_sp: Vec<Real>,
    tphi_sp: Vec<Real>,
}

impl TimeIntegralData {
    /// psi^(k)(0, r) on the cone.
    pub fn psi_at(&self, r: Real) -> Real {
        interp::hermite_grid(&self.r_grid, &self.psi, &self.dpsi, r)
    }

    pub fn dpsi_at(&self, r: Real) -> Real {
        interp::cubic(&self.r_grid, &self.dpsi, r)
    }

    /// phi^(k)(0, v) = r psi^(k) on the cone.
    pub fn phi_cone(&self, map: &CoordinateMap, v: Real) -> Result<Real> {
        let r = map.inverse_tortoise(0.5 * v)?;
        Ok(r * self.psi_at(r))
    }

    /// psi^(k) on the spacelike part.
    pub fn psi_spacelike(&self, rho: Real) -> Real {
        interp::cubic(&self.rho_grid, &self.psi_sp, rho)
    }

    pub fn dpsi_spacelike(&self, rho: Real) -> Real {
        interp::cubic(&self.rho_grid, &self.dpsi_sp, rho)
    }
}

/// The cone part of a chain level, bound to its coordinate map so the
/// v <-> r conversion is available to the quadratures.
pub struct LevelCone<'a> {
    pub level: &'a TimeIntegralData,
    pub map: &'a CoordinateMap,
}

impl<'a> ConeField for LevelCone<'a> {
    fn v0(&self) -> Real {
        self.level.v0
    }
    fn phi(&self, v: Real) -> Real {
        let r = self
            .map
            .inverse_tortoise(0.5 * v)
            .expect("cone radius inside table");
        r * self.level.psi_at(r)
    }
    fn dphi_dv(&self, v: Real) -> Real {
        // d_v phi = (D/2) d_r phi = (D/2)(psi + r d_r psi)
        let r = self
            .map
            .inverse_tortoise(0.5 * v)
            .expect("cone radius inside table");
        let d = self.map.model().d(r);
        0.5 * d * (self.level.psi_at(r) + r * self.level.dpsi_at(r))
    }
    fn v_cap(&self) -> Real {
        self.level.v_cap
    }
    fn support_end(&self) -> Option<Real> {
        None
    }
    fn rlphi_remainder(&self, v_far: Real) -> Real {
        // r d_v phi ~ p1 / (2 r^2) ~ 2 p1 / v^2 once I0 of the level vanishes
        2.0 * self.level.p1_hint / v_far
    }
    fn scale(&self) -> Real {
        self.level.scale
    }
}

impl<'a> SpacelikeField for LevelCone<'a> {
    fn phi(&self, rho: Real) -> Real {
        rho * self.level.psi_spacelike(rho)
    }
    fn dphi_drho(&self, rho: Real) -> Real {
        self.level.psi_spacelike(rho) + rho * self.level.dpsi_spacelike(rho)
    }
    fn tphi(&self, rho: Real) -> Real {
        interp::cubic(&self.level.rho_grid, &self.level.tphi_sp, rho)
    }
    fn window(&self, _r_min: Real, r_ref: Real) -> Option<(Real, Real)> {
        Some((self.level.rho_grid[0], r_ref))
    }
}

/// Cone grid from R out to r_far, geometric.
fn cone_grid(map: &CoordinateMap) -> Vec<Real> {
    let model = map.model();
    let r_far = 4e4 * model.scale();
    let mut grid = vec![model.r_ref];
    let mut r = model.r_ref;
    while r < r_far {
        r *= 1.004;
        grid.push(r);
    }
    grid
}

/// Spacelike grid from just above r_min to R, geometric in rho - r_min.
fn spacelike_grid(map: &CoordinateMap) -> Vec<Real> {
    let model = map.model();
    let base = model.r_min;
    let span = model.r_ref - base;
    let x0 = 1e-8 * span;
    let mut xs = vec![x0];
    let mut x = x0;
    while x < span {
        x = (x * 1.05).min(span);
        xs.push(x);
    }
    xs.into_iter().map(|x| base + x).collect()
}

/// Construct one chain level from a cone field plus optional spacelike data.
fn construct_level(
    cone: &dyn ConeField,
    spacelike: Option<(&dyn SpacelikeField, &FoliationSpec)>,
    foliation: &FoliationSpec,
    map: &CoordinateMap,
    order: u32,
) -> Result<TimeIntegralData> {
    let model = map.model();
    let mass = model.mass;

    let t0 = std::time::Instant::now();
    let a2 = cubic_limit(cone, map)?;
    eprintln!("[ti] cubic_limit: {:?}", t0.elapsed());
    let t0 = std::time::Instant::now();
    let c0 = compute_c0_unchecked(cone, spacelike, foliation, map)?;
    eprintln!("[ti] compute_c0: {:?}", t0.elapsed());
    let t0 = std::time::Instant::now();
    let i0_closed = ValueWithError::new(
        -a2.value + mass * c0.value,
        a2.error + mass.abs() * c0.error,
    );

    // ---- cone construction ----
    let r_grid = cone_grid(map);
    let n = r_grid.len();
    let r_far = r_grid[n - 1];
    // K(r) = int_r^inf r' d_{r'} phi dr', integrand w(r') = (2 r'/D) d_v phi
    let w = |r: Real| {
        let v = 2.0 * map.tortoise(r).expect("cone radius");
        2.0 * r / model.d(r) * cone.dphi_dv(v)
    };
    let support_r_end = cone.support_end().map(|v_end| {
        map.inverse_tortoise(0.5 * v_end)
            .expect("support end inside table")
    });
    let mut k_vals = vec![0.0; n];
    k_vals[n - 1] = match support_r_end {
        Some(_) => 0.0,
        None => cone.rlphi_remainder(2.0 * map.tortoise(r_far).unwrap()),
    };
    for i in (0..n - 1).rev() {
        let (lo, hi) = (r_grid[i], r_grid[i + 1]);
        let panel = match support_r_end {
            Some(rs) if lo >= rs => 0.0,
            _ => quad::gk15(&w, lo, hi).0,
        };
        k_vals[i] = k_vals[i + 1] + panel;
    }
    eprintln!("[ti] K accumulation: {:?}", t0.elapsed());
    let t0 = std::time::Instant::now();
    let dpsi: Vec<Real> = r_grid
        .iter()
        .zip(&k_vals)
        .map(|(&r, &k)| (c0.value - 2.0 * k) / (model.d(r) * r * r))
        .collect();
    // far-field seed and inward integration of psi
    let mut psi = vec![0.0; n];
    psi[n - 1] = -c0.value / r_far - mass * c0.value / (r_far * r_far)
        + a2.value / (r_far * r_far);
    for i in (0..n - 1).rev() {
        let (lo, hi) = (r_grid[i], r_grid[i + 1]);
        let f = |s: Real| {
            let k_local = k_vals[i + 1]
                + match support_r_end {
                    Some(rs) if s >= rs => 0.0,
                    _ => quad::gk15(&w, s, hi).0,
                };
            (c0.value - 2.0 * k_local) / (model.d(s) * s * s)
        };
        let (panel, _) = quad::gk15(&f, lo, hi);
        psi[i] = psi[i + 1] - panel;
    }

    eprintln!("[ti] psi integration: {:?}", t0.elapsed());
    let t0 = std::time::Instant::now();
    // ---- direct extraction of I0[psi^(k)] = lim r^2 d_r (r psi^(k)) ----
    let s = model.scale();
    let radii: Vec<Real> = [8000.0, 4000.0, 2000.0, 1000.0, 500.0]
        .iter()
        .map(|m| m * s)
        .collect();
    let cap = |r: Real, psi_v: Real, dpsi_v: Real| r * r * psi_v + r * r * r * dpsi_v;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &r in &radii {
        let pv = interp::hermite_grid(&r_grid, &psi, &dpsi, r);
        let dv = interp::cubic(&r_grid, &dpsi, r);
        xs.push(1.0 / r);
        ys.push(cap(r, pv, dv));
    }
    let xs_rev: Vec<Real> = xs.iter().rev().cloned().collect();
    let ys_rev: Vec<Real> = ys.iter().rev().cloned().collect();
    let (i0_num, i0_num_err) = fit::limit_at_zero(&xs_rev, &ys_rev, 3);
    let i0_extracted = ValueWithError::new(i0_num, i0_num_err.max(1e-13 * cone.scale().max(1e-300)));
    // subleading coefficient p1 of r^2 d_r (r psi^(k)); feeds analytic tails
    let mut y1 = Vec::new();
    for (j, &r) in radii.iter().enumerate() {
        y1.push(r * (ys[j] - i0_num));
    }
    let y1_rev: Vec<Real> = y1.iter().rev().cloned().collect();
    let (p1_hint, _) = fit::limit_at_zero(&xs_rev, &y1_rev, 2);

    eprintln!("[ti] extraction: {:?}", t0.elapsed());
    let t0 = std::time::Instant::now();
    // ---- spacelike reconstruction ----
    let rho_grid = spacelike_grid(map);
    let m_sp = rho_grid.len();
    let sp_integrand: Vec<Real> = rho_grid
        .iter()
        .map(|&rho| match spacelike {
            None => 0.0,
            Some((sp, fol)) => {
                let d = model.d(rho);
                let h = fol.h(model, rho);
                2.0 * (1.0 - h * d) * rho * sp.dphi_drho(rho)
                    - (2.0 - d * h) * rho * h * sp.tphi(rho)
                    - rho * fol.dh_prime(model, rho) * sp.phi(rho)
            }
        })
        .collect();
    let sp_cum = quad::cumulative(&rho_grid, &sp_integrand);
    let dpsi_sp: Vec<Real> = rho_grid
        .iter()
        .zip(&sp_cum)
        .map(|(&rho, &cum)| -cum / (model.d(rho) * rho * rho))
        .collect();
    let cum_dpsi = quad::cumulative(&rho_grid, &dpsi_sp);
    let psi_at_r_ref = psi[0];
    let total = cum_dpsi[m_sp - 1];
    let psi_sp: Vec<Real> = cum_dpsi
        .iter()
        .map(|&c| psi_at_r_ref - (total - c))
        .collect();
    let tphi_sp: Vec<Real> = rho_grid
        .iter()
        .map(|&rho| match spacelike {
            None => 0.0,
            Some((sp, _)) => sp.phi(rho),
        })
        .collect();

    eprintln!("[ti] spacelike reconstruction: {:?}", t0.elapsed());
    let v_cap = 2.0 * map.tortoise(r_far).unwrap() * 0.999;
    Ok(TimeIntegralData {
        order,
        c0,
        i0_closed_form: i0_closed,
        i0_extracted,
        v0: 2.0 * model.r_ref,
        provenance: format!("order-{order} time integral"),
        r_grid,
        psi,
        dpsi,
        v_cap,
        p1_hint,
        scale: cone.scale().max(c0.value.abs()),
        rho_grid,
        psi_sp,
        dpsi_sp,
        tphi_sp,
    })
}

/// Construct the first time integral of mixed initial data.
pub fn construct_time_integral(
    data: &MixedSurfaceData,
    map: &CoordinateMap,
) -> Result<TimeIntegralData> {
    let i0 = estimate_i0(&data.cone, map)?;
    let tol = vanishing_tol(&i0, data.cone.scale());
    if i0.value.abs() > tol {
        return Err(Error::NonvanishingI0 { i0: i0.value, tol });
    }
    construct_level(
        &data.cone,
        Some((&data.spacelike, &data.foliation)),
        &data.foliation,
        map,
        1,
    )
}

/// Iterate the construction: returns the chain psi^(1) .. psi^(k).
/// The vanishing gate at level j (j >= 1) checks I0[psi^(j)] before
/// constructing psi^(j+1); its tolerance widens by a factor of 10 per level
/// to absorb compounded quadrature error.
pub fn iterate_time_integral(
    data: &MixedSurfaceData,
    map: &CoordinateMap,
    k: u32,
) -> Result<Vec<TimeIntegralData>> {
    assert!(k >= 1);
    let mut chain = vec![construct_time_integral(data, map)?];
    for next_order in 2..=k {
        let gate = {
            let prev = chain.last().unwrap();
            let ve = prev.i0_closed_form;
            let tol =
                vanishing_tol(&ve, prev.scale) * 10f64.powi(next_order as i32 - 1);
            if ve.value.abs() > tol {
                Err(Error::PreconditionChainBroken {
                    k: next_order - 1,
                    value: ve.value,
                    tol,
                })
            } else {
                Ok(())
            }
        };
        gate?;
        let level = {
            let prev = chain.last().unwrap();
            let view = LevelCone { level: prev, map };
            construct_level(
                &view,
                Some((&view, &data.foliation)),
                &data.foliation,
                map,
                next_order,
            )?
        };
        chain.push(level);
    }
    Ok(chain)
}

/// Reconstructed d_rho psi^(1) on the spacelike part with an explicit C0.
/// Exposes the integrability-condition mechanism: with the true C0 the
/// derivative stays bounded toward r_min; an offset delta makes it diverge
/// like delta / (D rho^2).
pub fn reconstructed_dpsi_with_c0(
    data: &MixedSurfaceData,
    map: &CoordinateMap,
    c0_override: Real,
) -> Result<Vec<(Real, Real)>> {
    let model = map.model();
    let true_c0 = compute_c0_unchecked(
        &data.cone,
        Some((&data.spacelike, &data.foliation)),
        &data.foliation,
        map,
    )?;
    let delta = c0_override - true_c0.value;
    let rho_grid = spacelike_grid(map);
    let fol = &data.foliation;
    let sp = &data.spacelike;
    let sp_integrand: Vec<Real> = rho_grid
        .iter()
        .map(|&rho| {
            let d = model.d(rho);
            let h = fol.h(model, rho);
            2.0 * (1.0 - h * d) * rho * sp.dphi_drho(rho)
                - (2.0 - d * h) * rho * h * sp.tphi(rho)
                - rho * fol.dh_prime(model, rho) * sp.phi(rho)
        })
        .collect();
    let sp_cum = quad::cumulative(&rho_grid, &sp_integrand);
    Ok(rho_grid
        .iter()
        .zip(&sp_cum)
        .map(|(&rho, &cum)| (rho, (delta - cum) / (model.d(rho) * rho * rho)))
        .collect())
}

/// Transport a time integral across an evolved grid along the T-flow lines
/// v - u = const:  psi^(k)(u0 + s, v0 + s) = psi^(k)(0, v0) + int_0^s
/// psi^(k-1) ds', accumulated with the trapezoid rule (2nd order, matching
/// the scheme). Defined on the sub-grid v - u >= v0; other cells are NaN.
pub fn propagate_time_integral(
    psi_grid: &crate::evolution::FullField,
    tdata: &TimeIntegralData,
    map: &CoordinateMap,
) -> Result<crate::evolution::FullField> {
    let grid = psi_grid.grid;
    if (tdata.v0 - grid.v0).abs() > 1e-9 {
        return Err(Error::GridMismatch(format!(
            "time integral starts at v0 = {}, grid at {}",
            tdata.v0, grid.v0
        )));
    }
    let mut out = crate::evolution::FullField::new_nan(grid);
    let h = grid.h;
    let n_u = grid.n_u;
    let n_v = grid.n_v;
    for j0 in 0..=n_v {
        // diagonal starting on the cone at (0, v_j0)
        let v_start = grid.v0 + j0 as Real * h;
        let r_start = map.inverse_tortoise(0.5 * v_start)?;
        let mut val = tdata.psi_at(r_start);
        out.set(0, j0, val);
        let steps = (n_u).min(n_v - j0);
        for s in 1..=steps {
            let i = s;
            let j = j0 + s;
            let a = psi_grid.get(i - 1, j - 1);
            let b = psi_grid.get(i, j);
            val += 0.5 * h * (a + b);
            out.set(i, j, val);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_model, CoordinateMap, ModelKind};
    use crate::initial_data::{bump_data, mixed_data, superpose, SpacelikeData};
    use crate::np_constants::time_inverted_i0;

    fn schw_map() -> CoordinateMap {
        let m = make_model(ModelKind::Schwarzschild, 1.0, 0.0, 1.0, None, None).unwrap();
        CoordinateMap::new(&m)
    }

    fn bump_mixed(map: &CoordinateMap) -> MixedSurfaceData {
        let cone = bump_data(40.0, 10.0, 1.0, 0, 20.0, 3000.0).unwrap();
        mixed_data(
            FoliationSpec::default(),
            SpacelikeData::zero(),
            cone,
            map.model(),
        )
        .unwrap()
    }

    #[test]
    fn zero_data_gives_zero_time_integral() {
        let map = schw_map();
        let cone = bump_data(40.0, 10.0, 0.0, 0, 20.0, 3000.0).unwrap();
        let data = mixed_data(
            FoliationSpec::default(),
            SpacelikeData::zero(),
            cone,
            map.model(),
        )
        .unwrap();
        let t = construct_time_integral(&data, &map).unwrap();
        assert_eq!(t.c0.value, 0.0);
        assert_eq!(t.i0_closed_form.value, 0.0);
        for &r in &[10.0, 100.0, 5000.0] {
            assert_eq!(t.psi_at(r), 0.0);
        }
    }

    #[test]
    fn two_routes_agree_on_schwarzschild_bump() {
        let map = schw_map();
        let data = bump_mixed(&map);
        let t = construct_time_integral(&data, &map).unwrap();
        let rel = (t.i0_closed_form.value - t.i0_extracted.value).abs()
            / t.i0_closed_form.value.abs();
        assert!(
            rel < 1e-6,
            "closed = {:?}, extracted = {:?}, rel = {rel}",
            t.i0_closed_form,
            t.i0_extracted
        );
        // compact bump: I0^(1) = M C0 exactly (cubic limit vanishes)
        assert!((t.i0_closed_form.value - t.c0.value).abs() < 1e-12 * t.c0.value.abs());
    }

    #[test]
    fn closed_form_matches_np_constants_route() {
        let map = schw_map();
        let data = bump_mixed(&map);
        let t = construct_time_integral(&data, &map).unwrap();
        let direct = time_inverted_i0(
            &data.cone,
            Some((&data.spacelike, &data.foliation)),
            &data.foliation,
            &map,
        )
        .unwrap();
        assert!((t.i0_closed_form.value - direct.value).abs() <= 1e-12 * direct.value.abs());
    }

    #[test]
    fn tail_of_psi1_matches_schwarzschild_closed_form() {
        // beyond compact support, psi^(1)(r) = -(C0/2M) ln(r/(r-2M)) exactly
        let map = schw_map();
        let data = bump_mixed(&map);
        let t = construct_time_integral(&data, &map).unwrap();
        let c0 = t.c0.value;
        for &r in &[100.0f64, 1000.0, 20000.0] {
            let exact = -(c0 / 2.0) * (r / (r - 2.0)).ln();
            let got = t.psi_at(r);
            assert!(
                (got - exact).abs() < 1e-10 * exact.abs(),
                "r = {r}: got {got}, exact {exact}"
            );
        }
    }

    #[test]
    fn integrability_condition_uniqueness_surrogate() {
        // mixed data with spacelike content; delta = 0 keeps the
        // reconstructed derivative bounded toward r+, delta = 1e-3 blows up
        // like delta / D
        let m = make_model(ModelKind::Schwarzschild, 1.0, 0.0, 1.0, None, None).unwrap();
        let map = CoordinateMap::new(&m);
        let cone = bump_data(40.0, 10.0, 0.0, 0, 20.0, 3000.0).unwrap();
        let sp = SpacelikeData {
            psi: crate::initial_data::RadialProfile::Bump {
                center: 5.0,
                width: 2.0,
                amplitude: 1.0,
            },
            tpsi: crate::initial_data::RadialProfile::Zero,
        };
        let data = mixed_data(FoliationSpec::constant(1.0), sp, cone, &m).unwrap();
        let c0 = compute_c0_unchecked(
            &data.cone,
            Some((&data.spacelike, &data.foliation)),
            &data.foliation,
            &map,
        )
        .unwrap()
        .value;

        let exact = reconstructed_dpsi_with_c0(&data, &map, c0).unwrap();
        let perturbed = reconstructed_dpsi_with_c0(&data, &map, c0 + 1e-3).unwrap();
        // compare the innermost samples: rho - r+ ~ 1e-8 so D ~ 5e-9
        let (rho_in, d_exact) = exact[1];
        let (_, d_pert) = perturbed[1];
        let d_at = m.d(rho_in);
        assert!(
            d_exact.abs() < 1e3,
            "exact-C0 derivative should stay bounded, got {d_exact}"
        );
        let expected_blowup = 1e-3 / (d_at * rho_in * rho_in);
        assert!(
            (d_pert - d_exact - expected_blowup).abs() < 0.01 * expected_blowup.abs(),
            "d_pert = {d_pert}, expected extra {expected_blowup}"
        );
        assert!(d_pert.abs() > 1e4 * d_exact.abs().max(1.0));
    }

    #[test]
    fn chain_level_two_exists_for_tuned_superposition() {
        let map = schw_map();
        let a = bump_data(40.0, 10.0, 1.0, 0, 20.0, 3000.0).unwrap();
        let b = bump_data(90.0, 12.0, 1.0, 0, 20.0, 3000.0).unwrap();
        let fol = FoliationSpec::default();
        let i1a = time_inverted_i0(&a, None, &fol, &map).unwrap().value;
        let i1b = time_inverted_i0(&b, None, &fol, &map).unwrap().value;
        let tuned = superpose(1.0, &a, -i1a / i1b, &b).unwrap();
        let data = mixed_data(fol, SpacelikeData::zero(), tuned, map.model()).unwrap();
        let chain = iterate_time_integral(&data, &map, 2).unwrap();
        assert_eq!(chain.len(), 2);
        assert!(chain[0].i0_closed_form.value.abs() < 1e-10);
        let i2 = chain[1].i0_closed_form.value;
        assert!(i2.abs() > 1e-6, "I0^(2) should be generically nonzero, got {i2}");
        // two routes at level 2
        let rel = (chain[1].i0_closed_form.value - chain[1].i0_extracted.value).abs()
            / i2.abs();
        assert!(rel < 1e-4, "level-2 agreement {rel}");
    }

    #[test]
    fn chain_breaks_without_tuning() {
        let map = schw_map();
        let data = bump_mixed(&map);
        match iterate_time_integral(&data, &map, 2) {
            Err(Error::PreconditionChainBroken { k: 1, .. }) => {}
            other => panic!("expected broken chain, got {:?}", other.map(|c| c.len())),
        }
    }

    #[test]
    fn level_two_matches_h_independent_identity() {
        // for pure-characteristic tuned data (C0 = 0) the general machinery
        // must reduce to I0^(2) = M [ (R^2 + r+^2) psi^(1)(R) + 2 int r L phi^(1) dv ]
        let map = schw_map();
        let a = bump_data(40.0, 10.0, 1.0, 0, 20.0, 3000.0).unwrap();
        let b = bump_data(90.0, 12.0, 1.0, 0, 20.0, 3000.0).unwrap();
        let fol = FoliationSpec::constant(0.7);
        let i1a = time_inverted_i0(&a, None, &fol, &map).unwrap().value;
        let i1b = time_inverted_i0(&b, None, &fol, &map).unwrap().value;
        let tuned = superpose(1.0, &a, -i1a / i1b, &b).unwrap();
        let data = mixed_data(fol, SpacelikeData::zero(), tuned, map.model()).unwrap();
        let chain = iterate_time_integral(&data, &map, 2).unwrap();
        let lvl1 = &chain[0];
        let view = LevelCone { level: lvl1, map: &map };
        let rlphi = crate::np_constants::cone_rlphi_integral(&view, &map).unwrap();
        let model = map.model();
        let identity = model.mass
            * ((model.r_ref.powi(2) + model.r_plus.powi(2)) * lvl1.psi_at(model.r_ref)
                + 2.0 * rlphi.value);
        let got = chain[1].i0_closed_form.value;
        assert!(
            (got - identity).abs() < 1e-4 * identity.abs(),
            "got {got}, identity {identity}"
        );
    }
}
