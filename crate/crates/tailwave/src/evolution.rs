//! Second-order double-null evolution of phi over the characteristic
//! rectangle u in [0, u_max], v in [v0, v_max], with rolling two-row
//! storage.
//!
//! Diamond update: phi_N = phi_E + (phi_W - phi_S) - (h^2/2) V(r_c)
//! (phi_E + phi_W), with the cell-centre radius r_c shared along each
//! diagonal v - u = const, so the inverse tortoise map is called once per
//! diagonal, not per cell. The (phi_W - phi_S) grouping makes the V = 0
//! update bit-exact for transport data.
//!
//! Without a horizon the manifold ends at the axis r = 0 (the diagonal
//! v - u = 2 r*(0)); grid points at or past it hold phi = 0, the regularity
//! condition for psi = phi/r. With a horizon the rectangle never leaves the
//! exterior and no boundary is needed.

use crate::error::{Error, Result};
use crate::geometry::{potential, Case, CoordinateMap};
use crate::initial_data::CharacteristicData;
use crate::Real;

#[derive(Clone, Copy, Debug)]
pub struct NullGrid {
    pub h: Real,
    pub u_max: Real,
    pub v0: Real,
    pub v_max: Real,
    pub n_u: usize,
    pub n_v: usize,
}

impl NullGrid {
    pub fn new(h: Real, u_max: Real, v0: Real, v_max: Real) -> Result<NullGrid> {
        if h <= 0.0 || u_max <= 0.0 || v_max <= v0 {
            return Err(Error::GridMismatch(format!(
                "degenerate grid: h = {h}, u_max = {u_max}, v range [{v0}, {v_max}]"
            )));
        }
        let nu = u_max / h;
        let nv = (v_max - v0) / h;
        if (nu - nu.round()).abs() > 1e-9 * nu.max(1.0)
            || (nv - nv.round()).abs() > 1e-9 * nv.max(1.0)
        {
            return Err(Error::GridMismatch(format!(
                "u_max/h = {nu} and (v_max - v0)/h = {nv} must be integral"
            )));
        }
        Ok(NullGrid {
            h,
            u_max,
            v0,
            v_max,
            n_u: nu.round() as usize,
            n_v: nv.round() as usize,
        })
    }

    pub fn u(&self, i: usize) -> Real {
        i as Real * self.h
    }

    pub fn v(&self, j: usize) -> Real {
        self.v0 + j as Real * self.h
    }

    pub fn cells(&self) -> u64 {
        self.n_u as u64 * self.n_v as u64
    }
}

/// Fully retained grid field, indexed (i, j) over (n_u + 1) x (n_v + 1)
/// points. NaN marks points outside the computational region.
pub struct FullField {
    pub grid: NullGrid,
    data: Vec<Real>,
}

impl FullField {
    pub fn new_nan(grid: NullGrid) -> FullField {
        FullField {
            grid,
            data: vec![Real::NAN; (grid.n_u + 1) * (grid.n_v + 1)],
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Real {
        self.data[i * (self.grid.n_v + 1) + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, val: Real) {
        self.data[i * (self.grid.n_v + 1) + j] = val;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObserverKind {
    ConstantR { r: Real },
    ConstantRstar { rstar: Real },
    ScriProxy,
    GammaAlpha { alpha: Real },
}

#[derive(Clone, Debug)]
pub struct ObserverSpec {
    pub kind: ObserverKind,
    pub label: String,
}

impl ObserverSpec {
    pub fn constant_r(r: Real) -> Self {
        ObserverSpec {
            kind: ObserverKind::ConstantR { r },
            label: format!("r={r}"),
        }
    }
    pub fn constant_rstar(rstar: Real) -> Self {
        ObserverSpec {
            kind: ObserverKind::ConstantRstar { rstar },
            label: format!("rstar={rstar}"),
        }
    }
    pub fn scri() -> Self {
        ObserverSpec {
            kind: ObserverKind::ScriProxy,
            label: "scri".into(),
        }
    }
    pub fn gamma(alpha: Real) -> Self {
        ObserverSpec {
            kind: ObserverKind::GammaAlpha { alpha },
            label: format!("gamma_alpha={alpha}"),
        }
    }
}

/// Time series along one observer curve. tau = u on every curve; the
/// horizon-proxy tail is fitted against the stored v column instead.
#[derive(Clone, Debug)]
pub struct ObserverSeries {
    pub spec: ObserverSpec,
    pub tau: Vec<Real>,
    pub u: Vec<Real>,
    pub v: Vec<Real>,
    pub r: Vec<Real>,
    pub phi: Vec<Real>,
    pub psi: Vec<Real>,
    pub tpsi: Vec<Real>,
    pub t2psi: Vec<Real>,
    pub v2dvphi: Vec<Real>,
}

impl ObserverSeries {
    fn new(spec: ObserverSpec) -> Self {
        ObserverSeries {
            spec,
            tau: vec![],
            u: vec![],
            v: vec![],
            r: vec![],
            phi: vec![],
            psi: vec![],
            tpsi: vec![],
            t2psi: vec![],
            v2dvphi: vec![],
        }
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    /// Series of a named field for fitting.
    pub fn field(&self, name: &str) -> Option<&[Real]> {
        match name {
            "phi" => Some(&self.phi),
            "psi" => Some(&self.psi),
            "tpsi" => Some(&self.tpsi),
            "t2psi" => Some(&self.t2psi),
            "v2dvphi" => Some(&self.v2dvphi),
            _ => None,
        }
    }
}

/// Radiation-field column at fixed v, for the 1/v Richardson toward scri.
#[derive(Clone, Debug)]
pub struct ScriColumn {
    pub v: Real,
    pub tau: Vec<Real>,
    pub phi: Vec<Real>,
}

#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub cells: u64,
    pub residual_max: Real,
    pub residual_rms: Real,
    pub residual_samples: u64,
    pub wall_ms: f64,
}

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    /// Observer sampling every this many rows.
    pub sample_stride: usize,
    /// Columns retained for the scri Richardson, as fractions of v_max.
    pub scri_fracs: Vec<Real>,
    /// Retain the full grid (small runs only).
    pub retain_full: bool,
    pub budget_cells: u64,
    /// Roughly one in this many rows gets a residual audit.
    pub residual_row_stride: u64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            sample_stride: 1,
            scri_fracs: vec![1.0, 5.0 / 6.0, 2.0 / 3.0, 0.5],
            retain_full: false,
            budget_cells: 1 << 33,
            residual_row_stride: 101,
        }
    }
}

impl EvolveOptions {
    /// Stride that samples observers roughly every `dt` in u.
    pub fn with_sample_dt(mut self, dt: Real, h: Real) -> Self {
        self.sample_stride = ((dt / h).round() as usize).max(1);
        self
    }
}

pub struct EvolveOutput {
    pub grid: NullGrid,
    pub observers: Vec<ObserverSeries>,
    pub scri_columns: Vec<ScriColumn>,
    pub final_row: Vec<Real>,
    pub full: Option<FullField>,
    pub diagnostics: Diagnostics,
}

/// Cubic Lagrange interpolation of a uniformly spaced row at fractional
/// index jf (uses the 4 surrounding points, clamped at the ends).
fn row_interp(row: &[Real], jf: Real) -> Real {
    let n = row.len();
    let j = (jf.floor() as isize).clamp(1, n as isize - 3) as usize;
    let t = jf - j as Real;
    // nodes at offsets -1, 0, 1, 2
    let w0 = -t * (t - 1.0) * (t - 2.0) / 6.0;
    let w1 = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    let w2 = -(t + 1.0) * t * (t - 2.0) / 2.0;
    let w3 = (t + 1.0) * t * (t - 1.0) / 6.0;
    w0 * row[j - 1] + w1 * row[j] + w2 * row[j + 1] + w3 * row[j + 2]
}

/// d(phi)/dv at fractional index jf, cubic accuracy.
fn row_deriv(row: &[Real], jf: Real, h: Real) -> Real {
    let n = row.len();
    if jf >= n as Real - 1.5 {
        // one-sided second order at the outer edge
        return (3.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]) / (2.0 * h);
    }
    let j = (jf.floor() as isize).clamp(1, n as isize - 3) as usize;
    let t = jf - j as Real;
    // derivative of the cubic Lagrange weights
    let d0 = -(3.0 * t * t - 6.0 * t + 2.0) / 6.0;
    let d1 = (3.0 * t * t - 4.0 * t - 1.0) / 2.0;
    let d2 = -(3.0 * t * t - 2.0 * t - 2.0) / 2.0;
    let d3 = (3.0 * t * t - 1.0) / 6.0;
    (d0 * row[j - 1] + d1 * row[j] + d2 * row[j + 1] + d3 * row[j + 2]) / h
}

struct ObserverState {
    series: ObserverSeries,
    /// v - u offset for constant-r and constant-r* curves
    offset: Option<Real>,
    r_fixed: Option<Real>,
}

/// Evolve characteristic data over the rectangle.
pub fn evolve(
    map: &CoordinateMap,
    data: &CharacteristicData,
    grid: &NullGrid,
    observers: &[ObserverSpec],
    opts: &EvolveOptions,
) -> Result<EvolveOutput> {
    let t_start = std::time::Instant::now();
    let model = map.model();
    if grid.cells() > opts.budget_cells {
        return Err(Error::BudgetExceeded {
            cells: grid.cells(),
            budget: opts.budget_cells,
        });
    }
    if (grid.v0 - data.v0).abs() > 1e-9 {
        return Err(Error::GridMismatch(format!(
            "data cone starts at v0 = {}, grid at {}",
            data.v0, grid.v0
        )));
    }
    let h = grid.h;
    let n_u = grid.n_u;
    let n_v = grid.n_v;

    // axis diagonal in the regular case
    let axis_d = match model.case() {
        Case::Regular => Some(2.0 * map.rstar_domain().0),
        Case::Horizon => None,
    };
    if let Some(ad) = axis_d {
        if data.ell >= 1 && grid.v0 - grid.u_max <= ad + 1e-9 {
            return Err(Error::GridMismatch(
                "l >= 1 evolution cannot cross the axis r = 0".into(),
            ));
        }
    }
    // smallest valid diagonal index k = j - i (point strictly inside)
    let k_valid_min: Option<i64> = axis_d.map(|ad| {
        let k = ((ad + 1e-9 - grid.v0) / h).floor() as i64 + 1;
        k
    });

    // potential along cell-centre diagonals: cell (S at (i,j)) has
    // r*_c = (v_j - u_i)/2, index k_cell = j - i in [-(n_u-1), n_v-1]
    let off = n_u as i64 - 1;
    let mut hv = vec![0.0; n_u + n_v - 1];
    for (idx, slot) in hv.iter_mut().enumerate() {
        let k = idx as i64 - off;
        let d_c = grid.v0 + k as Real * h;
        let rstar_c = 0.5 * d_c;
        let inside = match k_valid_min {
            Some(kmin) => k >= kmin,
            None => true,
        };
        if !inside {
            continue;
        }
        let r_c = map.inverse_tortoise(rstar_c)?;
        *slot = 0.5 * h * h * potential(model, data.ell, r_c);
    }

    // observers
    let mut obs: Vec<ObserverState> = Vec::new();
    for spec in observers {
        let (offset, r_fixed) = match spec.kind {
            ObserverKind::ConstantR { r } => {
                let rs = map.tortoise(r)?;
                (Some(2.0 * rs), Some(r))
            }
            ObserverKind::ConstantRstar { rstar } => {
                let r = map.inverse_tortoise(rstar)?;
                (Some(2.0 * rstar), Some(r))
            }
            ObserverKind::ScriProxy => (None, None),
            ObserverKind::GammaAlpha { alpha } => {
                if !(alpha > 2.0 / 3.0 && alpha < 1.0) {
                    return Err(Error::GridMismatch(format!(
                        "gamma_alpha requires alpha in (2/3, 1), got {alpha}"
                    )));
                }
                (None, None)
            }
        };
        if let Some(o) = offset {
            // curve v = u + o must enter the rectangle
            if grid.u_max + o < grid.v0 + 2.0 * h || o > grid.v_max - grid.v0 {
                return Err(Error::GridMismatch(format!(
                    "observer '{}' never enters the rectangle",
                    spec.label
                )));
            }
        }
        obs.push(ObserverState {
            series: ObserverSeries::new(spec.clone()),
            offset,
            r_fixed,
        });
    }
    let scri_cols: Vec<usize> = opts
        .scri_fracs
        .iter()
        .map(|f| ((f * n_v as Real).round() as usize).clamp(2, n_v))
        .collect();
    let mut scri_columns: Vec<ScriColumn> = scri_cols
        .iter()
        .map(|&j| ScriColumn {
            v: grid.v(j),
            tau: vec![],
            phi: vec![],
        })
        .collect();

    let mut full = if opts.retain_full {
        Some(FullField::new_nan(*grid))
    } else {
        None
    };

    let ingoing = data.ingoing_value();
    let mut prev: Vec<Real> = (0..=n_v).map(|j| data.phi(grid.v(j))).collect();
    if let Some(f) = full.as_mut() {
        for (j, &val) in prev.iter().enumerate() {
            f.set(0, j, val);
        }
    }

    let mut residual_max: Real = 0.0;
    let mut residual_sq: Real = 0.0;
    let mut residual_n: u64 = 0;
    // deterministic row picker for the residual audit
    let mut rng_state: u64 = 0x9e3779b97f4a7c15;
    let mut next_rand = move || {
        rng_state ^= rng_state << 13;
        rng_state ^= rng_state >> 7;
        rng_state ^= rng_state << 17;
        rng_state
    };

    let mut curr: Vec<Real> = vec![0.0; n_v + 1];
    let sample_row = |i: usize,
                          row: &[Real],
                          obs: &mut Vec<ObserverState>,
                          scri_columns: &mut Vec<ScriColumn>|
     -> Result<()> {
        let u_i = grid.u(i);
        for st in obs.iter_mut() {
            let (v_t, r_t) = match st.series.spec.kind {
                ObserverKind::ConstantR { .. } | ObserverKind::ConstantRstar { .. } => {
                    (u_i + st.offset.unwrap(), st.r_fixed.unwrap())
                }
                ObserverKind::ScriProxy => {
                    let v_t = grid.v_max;
                    let r_t = map.inverse_tortoise(0.5 * (v_t - u_i))?;
                    (v_t, r_t)
                }
                ObserverKind::GammaAlpha { alpha } => {
                    // solve v - v^alpha = u
                    let mut v = u_i.max(2.0) + u_i.max(2.0).powf(alpha);
                    for _ in 0..40 {
                        let f = v - v.powf(alpha) - u_i;
                        let fp = 1.0 - alpha * v.powf(alpha - 1.0);
                        let step = f / fp;
                        v -= step;
                        if step.abs() < 1e-12 * v {
                            break;
                        }
                    }
                    let r_t = match map.inverse_tortoise(0.5 * (v - u_i)) {
                        Ok(r) => r,
                        Err(_) => continue,
                    };
                    (v, r_t)
                }
            };
            if v_t < grid.v0 + 2.0 * h || v_t > grid.v_max + 1e-9 {
                continue;
            }
            let jf = (v_t - grid.v0) / h;
            let phi = if (jf - jf.round()).abs() < 1e-9 {
                row[jf.round() as usize]
            } else {
                row_interp(row, jf)
            };
            let dvphi = row_deriv(row, jf.min(n_v as Real), h);
            let s = &mut st.series;
            s.tau.push(u_i);
            s.u.push(u_i);
            s.v.push(v_t);
            s.r.push(r_t);
            s.phi.push(phi);
            s.psi.push(phi / r_t);
            s.v2dvphi.push(v_t * v_t * dvphi);
        }
        for (col, &j) in scri_columns.iter_mut().zip(&scri_cols) {
            col.tau.push(u_i);
            col.phi.push(row[j]);
        }
        Ok(())
    };

    sample_row(0, &prev, &mut obs, &mut scri_columns)?;

    for i in 0..n_u {
        // compute row i+1 into curr
        let u_next = grid.u(i + 1);
        let j_lo = match k_valid_min {
            Some(kmin) => {
                let lo = kmin + (i as i64 + 1);
                lo.clamp(0, n_v as i64 + 1) as usize
            }
            None => 0,
        };
        for slot in curr.iter_mut().take(j_lo) {
            *slot = 0.0;
        }
        if j_lo == 0 {
            curr[0] = ingoing;
        }
        let j_start = j_lo.max(1);
        let base = off - 1 - i as i64;
        {
            let mut w = curr[j_start - 1];
            for j in j_start..=n_v {
                let e = prev[j];
                let s = prev[j - 1];
                let k = hv[(j as i64 + base) as usize];
                let n = e + (w - s) - k * (e + w);
                curr[j] = n;
                w = n;
            }
        }

        // residual audit on ~1/residual_row_stride of rows
        if next_rand() % opts.residual_row_stride == 0 {
            for j in j_start..=n_v {
                let e = prev[j];
                let s = prev[j - 1];
                let wv = curr[j - 1];
                let nv = curr[j];
                let vc = hv[(j as i64 + base) as usize] * 2.0 / (h * h);
                let res = (nv - e - wv + s) / (h * h) + vc * (nv + e + wv + s) / 4.0;
                residual_max = residual_max.max(res.abs());
                residual_sq += res * res;
                residual_n += 1;
            }
            if !curr[n_v].is_finite() {
                let j_bad = curr.iter().position(|x| !x.is_finite()).unwrap_or(n_v);
                return Err(Error::NaNDetected {
                    u: u_next,
                    v: grid.v(j_bad),
                });
            }
        }
        if (i + 1) % 256 == 0 && !curr[n_v].is_finite() {
            let j_bad = curr.iter().position(|x| !x.is_finite()).unwrap_or(n_v);
            return Err(Error::NaNDetected {
                u: u_next,
                v: grid.v(j_bad),
            });
        }

        if let Some(f) = full.as_mut() {
            for (j, &val) in curr.iter().enumerate() {
                let k = j as i64 - (i as i64 + 1);
                let inside = match k_valid_min {
                    Some(kmin) => k >= kmin - 1,
                    None => true,
                };
                if inside {
                    f.set(i + 1, j, val);
                }
            }
        }
        if (i + 1) % opts.sample_stride == 0 {
            sample_row(i + 1, &curr, &mut obs, &mut scri_columns)?;
        }
        std::mem::swap(&mut prev, &mut curr);
    }

    if prev.iter().any(|x| !x.is_finite()) {
        let j_bad = prev.iter().position(|x| !x.is_finite()).unwrap();
        return Err(Error::NaNDetected {
            u: grid.u_max,
            v: grid.v(j_bad),
        });
    }

    // T-derivatives along each curve by centred differences in tau
    let mut series: Vec<ObserverSeries> = obs.into_iter().map(|o| o.series).collect();
    for s in series.iter_mut() {
        finish_t_derivatives(s);
    }

    let diagnostics = Diagnostics {
        cells: grid.cells(),
        residual_max,
        residual_rms: if residual_n > 0 {
            (residual_sq / residual_n as Real).sqrt()
        } else {
            0.0
        },
        residual_samples: residual_n,
        wall_ms: t_start.elapsed().as_secs_f64() * 1e3,
    };

    Ok(EvolveOutput {
        grid: *grid,
        observers: series,
        scri_columns,
        final_row: prev,
        full,
        diagnostics,
    })
}

fn finish_t_derivatives(s: &mut ObserverSeries) {
    let n = s.len();
    s.tpsi = vec![Real::NAN; n];
    s.t2psi = vec![Real::NAN; n];
    if n < 4 {
        return;
    }
    let dt = s.tau[1] - s.tau[0];
    let y = &s.psi;
    for i in 1..n - 1 {
        s.tpsi[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
        s.t2psi[i] = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (dt * dt);
    }
    s.tpsi[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dt);
    s.tpsi[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * dt);
    s.t2psi[0] = (2.0 * y[0] - 5.0 * y[1] + 4.0 * y[2] - y[3]) / (dt * dt);
    s.t2psi[n - 1] = (2.0 * y[n - 1] - 5.0 * y[n - 2] + 4.0 * y[n - 3] - y[n - 4]) / (dt * dt);
}

/// I0(u) estimates from the retained scri column: v^2 d_v phi / 2 at the
/// largest stored v, one per requested u (nearest retained sample).
pub fn sample_np_scalar(out: &EvolveOutput, u_list: &[Real]) -> Result<Vec<(Real, Real)>> {
    let scri = out
        .observers
        .iter()
        .find(|s| s.spec.kind == ObserverKind::ScriProxy)
        .ok_or(Error::ColumnNotRetained)?;
    if scri.is_empty() {
        return Err(Error::ColumnNotRetained);
    }
    let mut res = Vec::with_capacity(u_list.len());
    for &u in u_list {
        let mut best = 0usize;
        let mut dist = Real::INFINITY;
        for (i, &ui) in scri.u.iter().enumerate() {
            let d = (ui - u).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        res.push((scri.u[best], 0.5 * scri.v2dvphi[best]));
    }
    Ok(res)
}
