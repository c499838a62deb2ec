//! End-to-end orchestration: constants -> construct -> evolve -> tail,
//! convergence triplets, and the aggregated verification report with
//! pass/fail bands pinned in code.

use crate::asymptotics::{self, Scenario, TailFit};
use crate::config::{
    build_data_for_grid, build_grid, build_model, build_observers, build_options, RunConfig,
};
use crate::error::{Error, Result};
use crate::evolution::{
    evolve, sample_np_scalar, EvolveOutput, NullGrid, ObserverKind, ObserverSpec,
};
use crate::geometry::CoordinateMap;
use crate::initial_data::MixedSurfaceData;
use crate::np_constants::{np_report, NpMethod, NpReport};
use crate::Real;
use rayon::prelude::*;
use serde::Serialize;

// ---------- JSON document types ----------

#[derive(Serialize)]
pub struct VeJson {
    pub value: Real,
    pub error: Real,
}

#[derive(Serialize)]
pub struct NpEntryJson {
    pub k: u32,
    pub value: Real,
    pub error: Real,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<Real>,
}

#[derive(Serialize)]
pub struct NpReportJson {
    pub schema: u32,
    /// "mode": the 1/(4 pi) spherical-mean prefactor is absorbed into psi.
    pub normalization: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i0: Option<VeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c0: Option<VeJson>,
    pub inverted: Vec<NpEntryJson>,
    pub notes: Vec<String>,
}

impl NpReportJson {
    pub fn from_report(r: &NpReport) -> Self {
        NpReportJson {
            schema: crate::config::SCHEMA_VERSION,
            normalization: "mode".into(),
            i0: r.i0.map(|v| VeJson {
                value: v.value,
                error: v.error,
            }),
            c0: r.c0.map(|v| VeJson {
                value: v.value,
                error: v.error,
            }),
            inverted: r
                .inverted
                .iter()
                .map(|e| NpEntryJson {
                    k: e.k,
                    value: e.value,
                    error: e.error,
                    method: match e.method {
                        NpMethod::ClosedForm => "closed_form".into(),
                        NpMethod::ConstructedLimit => "constructed_limit".into(),
                        NpMethod::Both => "both".into(),
                    },
                    agreement: e.agreement,
                })
                .collect(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct TailFitJson {
    pub schema: u32,
    pub curve: String,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<String>,
    pub window: [Real; 2],
    pub p_inf: Real,
    pub p_err: Real,
    pub amplitude: Real,
    pub amp_err: Real,
    pub exponent_theory: Real,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Real>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation: Option<Real>,
    pub local_index: Vec<[Real; 2]>,
}

impl TailFitJson {
    pub fn from_fit(f: &TailFit) -> Self {
        TailFitJson {
            schema: crate::config::SCHEMA_VERSION,
            curve: f.curve.clone(),
            field: f.field.clone(),
            scenario: f.scenario.clone(),
            window: [f.window.0, f.window.1],
            p_inf: f.p_inf,
            p_err: f.p_err,
            amplitude: f.amplitude,
            amp_err: f.amp_err,
            exponent_theory: f.exponent_theory,
            target: f.target,
            deviation: f.deviation,
            local_index: f.p_series.iter().map(|&(t, p)| [t, p]).collect(),
        }
    }
}

#[derive(Serialize)]
pub struct CriterionJson {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Serialize)]
pub struct ConvergenceEntryJson {
    pub observer: String,
    pub field: String,
    /// None when the coarse and fine solutions already agree to roundoff.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factor: Option<Real>,
    pub exact: bool,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct ConvergenceJson {
    pub schema: u32,
    pub h_levels: Vec<Real>,
    pub entries: Vec<ConvergenceEntryJson>,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct VerifyJson {
    pub schema: u32,
    pub pass: bool,
    pub criteria: Vec<CriterionJson>,
    pub np_report: NpReportJson,
    pub fits: Vec<TailFitJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence: Option<ConvergenceJson>,
}

// ---------- bands pinned from the acceptance table ----------

#[derive(Clone, Copy, Debug)]
pub struct ScenarioBand {
    pub p_tol: Real,
    pub amp_tol: Real,
}

pub fn band_for(sc: Scenario) -> ScenarioBand {
    match sc {
        Scenario::InteriorZeroNp => ScenarioBand {
            p_tol: 0.05,
            amp_tol: 0.15,
        },
        Scenario::ScriZeroNp => ScenarioBand {
            p_tol: 0.05,
            amp_tol: 0.15,
        },
        Scenario::HorizonZeroNp => ScenarioBand {
            p_tol: 0.07,
            amp_tol: 0.20,
        },
        Scenario::InteriorNonzeroNp { k: 0 } => ScenarioBand {
            p_tol: 0.05,
            amp_tol: 0.10,
        },
        Scenario::InteriorNonzeroNp { k: 1 } => ScenarioBand {
            p_tol: 0.10,
            amp_tol: 0.20,
        },
        Scenario::InteriorNonzeroNp { .. } => ScenarioBand {
            p_tol: 0.25,
            amp_tol: 0.35,
        },
        Scenario::HigherOrder => ScenarioBand {
            p_tol: 0.25,
            amp_tol: 0.35,
        },
        Scenario::ScriTk { k: 0 } => ScenarioBand {
            p_tol: 0.05,
            amp_tol: 0.15,
        },
        Scenario::ScriTk { .. } => ScenarioBand {
            p_tol: 0.10,
            amp_tol: 0.20,
        },
        Scenario::FarfieldZeroNp => ScenarioBand {
            p_tol: 0.20,
            amp_tol: 0.25,
        },
        Scenario::NpScalar => ScenarioBand {
            p_tol: 0.05,
            amp_tol: 0.02,
        },
    }
}

// ---------- pipeline ----------

pub struct RunArtifacts {
    pub map: CoordinateMap,
    pub grid: NullGrid,
    pub data: MixedSurfaceData,
    pub np: NpReport,
    pub out: EvolveOutput,
}

/// How deep the inverted-constant chain must go for a scenario list.
fn chain_depth(scenarios: &[String]) -> u32 {
    let mut k = 1;
    for s in scenarios {
        if s == "higher_order" {
            k = k.max(2);
        }
    }
    k
}

/// Build everything and evolve once.
pub fn run_pipeline(cfg: &RunConfig) -> Result<RunArtifacts> {
    let model = build_model(&cfg.model)?;
    let map = CoordinateMap::new(&model);
    let grid = build_grid(&cfg.grid, &model)?;
    let data = build_data_for_grid(&cfg.data, &map, &grid)?;
    let np = np_report(&data, &map, chain_depth(&cfg.scenarios))?;
    let mut observers = build_observers(&cfg.observers);
    if !observers
        .iter()
        .any(|o| o.kind == ObserverKind::ScriProxy)
    {
        observers.push(ObserverSpec::scri());
    }
    let opts = build_options(cfg, &grid);
    let out = evolve(&map, &data.cone, &grid, &observers, &opts)?;
    Ok(RunArtifacts {
        map,
        grid,
        data,
        np,
        out,
    })
}

fn find_series<'a>(
    out: &'a EvolveOutput,
    pred: impl Fn(&ObserverKind) -> bool,
) -> Option<&'a crate::evolution::ObserverSeries> {
    out.observers.iter().find(|s| pred(&s.spec.kind))
}

fn default_window(t_hi: Real) -> (Real, Real) {
    (t_hi / 8.0, t_hi / 2.0)
}

/// Derivative of a uniformly sampled series by centred differences.
fn t_derivative(tau: &[Real], y: &[Real]) -> Vec<Real> {
    let n = y.len();
    let mut out = vec![Real::NAN; n];
    if n < 3 {
        return out;
    }
    let dt = tau[1] - tau[0];
    for i in 1..n - 1 {
        out[i] = (y[i + 1] - y[i - 1]) / (2.0 * dt);
    }
    out
}

/// Fit one named scenario against the run artifacts.
pub fn fit_scenario(art: &RunArtifacts, sc: Scenario) -> Result<TailFit> {
    let out = &art.out;
    let u_max = art.grid.u_max;
    match sc {
        Scenario::InteriorZeroNp | Scenario::HigherOrder => {
            let s = find_series(out, |k| matches!(k, ObserverKind::ConstantR { .. }))
                .ok_or_else(|| Error::GridMismatch("no interior observer".into()))?;
            asymptotics::extrapolate_and_compare(
                &s.tau,
                &s.psi,
                &art.np,
                sc,
                default_window(u_max),
                &s.spec.label,
                "psi",
            )
        }
        Scenario::InteriorNonzeroNp { k } => {
            let s = find_series(out, |kk| matches!(kk, ObserverKind::ConstantR { .. }))
                .ok_or_else(|| Error::GridMismatch("no interior observer".into()))?;
            let (y, name): (&[Real], _) = match k {
                0 => (&s.psi, "psi"),
                1 => (&s.tpsi, "tpsi"),
                2 => (&s.t2psi, "t2psi"),
                _ => {
                    return Err(Error::GridMismatch(
                        "T^k observers support k <= 2 only".into(),
                    ))
                }
            };
            asymptotics::extrapolate_and_compare(
                &s.tau,
                y,
                &art.np,
                sc,
                default_window(u_max),
                &s.spec.label,
                name,
            )
        }
        Scenario::ScriZeroNp => {
            let (tau, phi_inf) = asymptotics::scri_series(&out.scri_columns)?;
            asymptotics::extrapolate_and_compare(
                &tau,
                &phi_inf,
                &art.np,
                sc,
                default_window(u_max),
                "scri",
                "rpsi",
            )
        }
        Scenario::ScriTk { k } => {
            let (tau, phi_inf) = asymptotics::scri_series(&out.scri_columns)?;
            let mut y = phi_inf;
            for _ in 0..k {
                y = t_derivative(&tau, &y);
            }
            let lo = k as usize;
            let hi = y.len() - k as usize;
            asymptotics::extrapolate_and_compare(
                &tau[lo..hi],
                &y[lo..hi],
                &art.np,
                sc,
                default_window(u_max),
                "scri",
                &format!("T^{k} rpsi"),
            )
        }
        Scenario::HorizonZeroNp => {
            let s = find_series(
                out,
                |k| matches!(k, ObserverKind::ConstantRstar { rstar } if *rstar < 0.0),
            )
            .ok_or_else(|| Error::GridMismatch("no horizon-proxy observer".into()))?;
            // the horizon tail is a law in v along the curve
            let v_hi = s.v.last().copied().unwrap_or(u_max);
            asymptotics::extrapolate_and_compare(
                &s.v,
                &s.psi,
                &art.np,
                sc,
                default_window(v_hi),
                &s.spec.label,
                "psi",
            )
        }
        Scenario::FarfieldZeroNp => {
            let s = find_series(out, |k| matches!(k, ObserverKind::GammaAlpha { .. }))
                .ok_or_else(|| Error::GridMismatch("no gamma_alpha observer".into()))?;
            // normalise by the predicted shape (1 + u/v) / ((u+1)^2 v)
            let mut tau = Vec::new();
            let mut y = Vec::new();
            for i in 0..s.len() {
                let (u, v) = (s.u[i], s.v[i]);
                let shape = (1.0 + u / v) / ((u + 1.0) * (u + 1.0) * v);
                if shape != 0.0 {
                    tau.push(s.tau[i]);
                    y.push(s.psi[i] / shape);
                }
            }
            asymptotics::extrapolate_and_compare(
                &tau,
                &y,
                &art.np,
                sc,
                default_window(u_max),
                &s.spec.label,
                "psi/shape",
            )
        }
        Scenario::NpScalar => {
            let s = find_series(out, |k| matches!(k, ObserverKind::ScriProxy))
                .ok_or(Error::ColumnNotRetained)?;
            asymptotics::extrapolate_and_compare(
                &s.tau,
                &s.v2dvphi,
                &art.np,
                sc,
                default_window(u_max),
                &s.spec.label,
                "v2dvphi",
            )
        }
    }
}

fn scenario_criterion(sc: Scenario, fit: &TailFit) -> CriterionJson {
    let band = band_for(sc);
    let p_ok = (fit.p_inf - fit.exponent_theory).abs() <= band.p_tol;
    let target = fit.target.unwrap_or(0.0);
    let dev = fit.deviation.unwrap_or(Real::INFINITY);
    let amp_ok = if target == 0.0 {
        true // deviation is absolute; judged by the caller's context
    } else {
        dev <= band.amp_tol && fit.amplitude * target > 0.0
    };
    CriterionJson {
        id: sc.name(),
        pass: p_ok && amp_ok,
        detail: format!(
            "p_inf = {:.4} (theory {:.1}, tol {:.2}); amplitude = {:.6e} vs target {:.6e} (dev {:.3}, tol {:.2})",
            fit.p_inf, fit.exponent_theory, band.p_tol, fit.amplitude, target, dev, band.amp_tol
        ),
    }
}

/// NP-scalar conservation: relative drift of I0(u) over the run.
pub fn np_drift(art: &RunArtifacts) -> Result<(Real, Vec<(Real, Real)>)> {
    let us: Vec<Real> = (0..=16)
        .map(|i| art.grid.u_max * i as Real / 16.0)
        .collect();
    let samples = sample_np_scalar(&art.out, &us)?;
    let i0_ref = samples[0].1;
    let mut drift: Real = 0.0;
    for &(_, val) in &samples {
        drift = drift.max((val - i0_ref).abs());
    }
    Ok((drift / i0_ref.abs().max(1e-300), samples))
}

/// Full verification: evolve, fit every requested scenario, attach a small
/// three-level convergence triplet, and aggregate pass/fail.
pub fn run_verify(cfg: &RunConfig) -> Result<VerifyJson> {
    let art = run_pipeline(cfg)?;
    let mut criteria = Vec::new();
    let mut fits = Vec::new();

    // two-oracle agreement whenever the chain ran
    for e in &art.np.inverted {
        if let Some(agr) = e.agreement {
            let tol = if e.k == 1 { 1e-6 } else { 1e-4 };
            criteria.push(CriterionJson {
                id: format!("np_two_oracle_k{}", e.k),
                pass: agr <= tol,
                detail: format!("closed vs constructed I0^({}) agree to {agr:.3e} (tol {tol:.0e})", e.k),
            });
        }
    }

    for name in &cfg.scenarios {
        match name.as_str() {
            "np_conservation" => {
                let (drift, _) = np_drift(&art)?;
                criteria.push(CriterionJson {
                    id: "np_conservation".into(),
                    pass: drift <= 0.01,
                    detail: format!("relative drift of v^2 d_v phi / 2 = {drift:.4e} (tol 1e-2)"),
                });
            }
            "t_ladder" => {
                let s = find_series(&art.out, |k| matches!(k, ObserverKind::ConstantR { .. }))
                    .ok_or_else(|| Error::GridMismatch("no interior observer".into()))?;
                let w = default_window(art.grid.u_max);
                let base =
                    asymptotics::fit_series(&s.tau, &s.psi, 3.0, w, &s.spec.label, "psi")?;
                let f1 =
                    asymptotics::fit_series(&s.tau, &s.tpsi, 4.0, w, &s.spec.label, "tpsi")?;
                let f2 =
                    asymptotics::fit_series(&s.tau, &s.t2psi, 5.0, w, &s.spec.label, "t2psi")?;
                let d1 = f1.p_inf - base.p_inf;
                let d2 = f2.p_inf - base.p_inf;
                criteria.push(CriterionJson {
                    id: "t_ladder".into(),
                    pass: (d1 - 1.0).abs() <= 0.2 && (d2 - 2.0).abs() <= 0.2,
                    detail: format!(
                        "p[psi] = {:.3}, p[Tpsi]-p[psi] = {d1:.3} (want 1 +- 0.2), p[T2psi]-p[psi] = {d2:.3} (want 2 +- 0.2)",
                        base.p_inf
                    ),
                });
                fits.push(TailFitJson::from_fit(&base));
                fits.push(TailFitJson::from_fit(&f1));
                fits.push(TailFitJson::from_fit(&f2));
            }
            "huygens" => {
                let s = find_series(&art.out, |k| matches!(k, ObserverKind::ConstantR { .. }))
                    .ok_or_else(|| Error::GridMismatch("no interior observer".into()))?;
                // quiet after the direct wave and the axis reflection pass
                let t_quiet = art
                    .data
                    .cone
                    .profile
                    .support()
                    .map(|(_, hi)| hi * 1.1)
                    .unwrap_or(art.grid.u_max / 2.0);
                let bound = 10.0 * art.grid.h * art.grid.h;
                let mut worst: Real = 0.0;
                for (i, &t) in s.tau.iter().enumerate() {
                    if t > t_quiet {
                        worst = worst.max(s.psi[i].abs());
                    }
                }
                criteria.push(CriterionJson {
                    id: "huygens".into(),
                    pass: worst <= bound,
                    detail: format!("max |psi| after passage = {worst:.3e} (tol 10 h^2 = {bound:.3e})"),
                });
            }
            "horizon_sensitivity" => {
                let deep: Vec<&crate::evolution::ObserverSeries> = art
                    .out
                    .observers
                    .iter()
                    .filter(|s| matches!(s.spec.kind, ObserverKind::ConstantRstar { rstar } if rstar < 0.0))
                    .collect();
                if deep.len() < 2 {
                    return Err(Error::GridMismatch(
                        "horizon_sensitivity needs two constant-r* observers".into(),
                    ));
                }
                let mut amps = Vec::new();
                for s in &deep {
                    let v_hi = s.v.last().copied().unwrap_or(art.grid.u_max);
                    let f = asymptotics::fit_series(
                        &s.v,
                        &s.psi,
                        3.0,
                        default_window(v_hi),
                        &s.spec.label,
                        "psi",
                    )?;
                    amps.push(f.amplitude);
                    fits.push(TailFitJson::from_fit(&f));
                }
                let shift = (amps[1] - amps[0]).abs() / amps[0].abs().max(1e-300);
                criteria.push(CriterionJson {
                    id: "horizon_sensitivity".into(),
                    pass: shift <= 0.05,
                    detail: format!("amplitude shift between proxies = {shift:.4} (tol 0.05)"),
                });
            }
            other => {
                let sc = Scenario::parse(other).ok_or_else(|| Error::Config {
                    path: "scenarios".into(),
                    detail: format!("unknown scenario '{other}'"),
                })?;
                let fit = fit_scenario(&art, sc)?;
                criteria.push(scenario_criterion(sc, &fit));
                fits.push(TailFitJson::from_fit(&fit));
            }
        }
    }

    // small convergence triplet on a clipped rectangle
    let convergence = {
        let mut ccfg = cfg.clone();
        ccfg.grid.u_max = cfg.grid.u_max.min(96.0);
        ccfg.grid.v_max = cfg
            .grid
            .v_max
            .min(2.0 * build_model(&cfg.model)?.r_ref + 384.0);
        match run_convergence(&ccfg, 3) {
            Ok(c) => Some(c),
            Err(_) => None,
        }
    };
    if let Some(c) = &convergence {
        criteria.push(CriterionJson {
            id: "scheme_order".into(),
            pass: c.pass,
            detail: format!(
                "three-level self-convergence factors on h = {:?}",
                c.h_levels
            ),
        });
    }

    let pass = criteria.iter().all(|c| c.pass);
    Ok(VerifyJson {
        schema: crate::config::SCHEMA_VERSION,
        pass,
        criteria,
        np_report: NpReportJson::from_report(&art.np),
        fits,
        convergence,
    })
}

/// Self-convergence over `levels` grids h, h/2, h/4, ...: factors near 4
/// confirm second order; bit-identical coarse/fine solutions (flat-space
/// transport) count as exact.
pub fn run_convergence(cfg: &RunConfig, levels: u32) -> Result<ConvergenceJson> {
    if levels < 3 {
        return Err(Error::Config {
            path: "levels".into(),
            detail: format!("need at least 3 levels, got {levels}"),
        });
    }
    let model = build_model(&cfg.model)?;
    let map = CoordinateMap::new(&model);
    let mut runs: Vec<(Real, EvolveOutput)> = (0..levels)
        .into_par_iter()
        .map(|lvl| -> Result<(Real, EvolveOutput)> {
            let h = cfg.grid.h / 2f64.powi(lvl as i32);
            let grid = NullGrid::new(h, cfg.grid.u_max, 2.0 * model.r_ref, cfg.grid.v_max)?;
            let data = build_data_for_grid(&cfg.data, &map, &grid)?;
            let mut observers = build_observers(&cfg.observers);
            if observers.is_empty() {
                observers.push(ObserverSpec::constant_r(model.r_ref));
            }
            let opts = build_options(cfg, &grid);
            let out = evolve(&map, &data.cone, &grid, &observers, &opts)?;
            Ok((h, out))
        })
        .collect::<Result<Vec<_>>>()?;
    runs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());

    let h_levels: Vec<Real> = runs.iter().map(|(h, _)| *h).collect();
    let mut entries = Vec::new();
    for obs_idx in 0..runs[0].1.observers.len() {
        for field in ["psi", "phi"] {
            let mut max_diffs = Vec::new();
            for w in runs.windows(2) {
                let (s0, s1) = (&w[0].1.observers[obs_idx], &w[1].1.observers[obs_idx]);
                let y0 = s0.field(field).unwrap();
                let y1 = s1.field(field).unwrap();
                // match common tau values
                let mut dmax: Real = 0.0;
                let mut j = 0usize;
                for (i, &t) in s0.tau.iter().enumerate() {
                    while j < s1.tau.len() && s1.tau[j] < t - 1e-9 {
                        j += 1;
                    }
                    if j < s1.tau.len() && (s1.tau[j] - t).abs() < 1e-9 {
                        dmax = dmax.max((y0[i] - y1[j]).abs());
                    }
                }
                max_diffs.push(dmax);
            }
            let scale = runs[0].1.observers[obs_idx]
                .field(field)
                .unwrap()
                .iter()
                .fold(0.0 as Real, |a, &b| a.max(b.abs()));
            let exact = max_diffs.iter().all(|&d| d <= 1e-13 * scale.max(1e-300));
            // consecutive-level factors d(h)/d(h/2); each should sit in
            // [3.6, 4.4] for a second-order scheme
            let factors: Vec<Real> = max_diffs
                .windows(2)
                .map(|w| w[0] / w[1].max(1e-300))
                .collect();
            let factor = if exact { None } else { factors.last().copied() };
            let pass = exact || factors.iter().all(|&f| (3.6..=4.4).contains(&f));
            entries.push(ConvergenceEntryJson {
                observer: runs[0].1.observers[obs_idx].spec.label.clone(),
                field: field.into(),
                factor,
                exact,
                pass,
            });
        }
    }
    let pass = entries.iter().all(|e| e.pass);
    Ok(ConvergenceJson {
        schema: crate::config::SCHEMA_VERSION,
        h_levels,
        entries,
        pass,
    })
}
