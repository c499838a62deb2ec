//! JSON run configuration and the builders that turn it into domain
//! objects. Schema files for every emitted document live in `schemas/`.

use crate::error::{Error, Result};
use crate::evolution::{EvolveOptions, NullGrid, ObserverSpec};
use crate::geometry::{make_model, CoordinateMap, ModelKind, SpacetimeModel};
use crate::initial_data::{
    bump_data, mixed_data, superpose, tail_data, CharacteristicData, FoliationSpec,
    MixedSurfaceData, RadialProfile, SpacelikeData,
};
use crate::Real;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}
fn default_beta() -> Real {
    1.0
}
fn default_budget() -> u64 {
    1 << 33
}
fn default_sample_every() -> Real {
    0.25
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub kind: String,
    #[serde(default, rename = "M")]
    pub mass: Real,
    #[serde(default, rename = "e")]
    pub charge: Real,
    #[serde(default = "default_beta")]
    pub beta: Real,
    #[serde(default, rename = "R")]
    pub r_ref: Option<Real>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataConfig {
    Bump {
        v_center: Real,
        width: Real,
        amplitude: Real,
        #[serde(default)]
        ell: u32,
    },
    Tail {
        i0: Real,
        #[serde(default)]
        p: Vec<Real>,
        #[serde(default = "default_beta")]
        beta: Real,
        #[serde(default)]
        ell: u32,
    },
    Superpose {
        terms: Vec<SuperposeTerm>,
    },
    /// Two bumps with the second coefficient solved so that I0^(1) = 0.
    TwoBumpTuned {
        bump_a: Box<DataConfig>,
        bump_b: Box<DataConfig>,
    },
    Mixed {
        foliation: FoliationConfig,
        spacelike: SpacelikeConfig,
        cone: Box<DataConfig>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuperposeTerm {
    pub coeff: Real,
    pub data: Box<DataConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FoliationConfig {
    pub kind: String,
    #[serde(default)]
    pub value: Option<Real>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileConfig {
    Zero,
    Bump {
        center: Real,
        width: Real,
        amplitude: Real,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacelikeConfig {
    pub psi: ProfileConfig,
    pub tpsi: ProfileConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub h: Real,
    pub u_max: Real,
    pub v_max: Real,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObserverConfig {
    ConstantR { r: Real },
    ConstantRstar { rstar: Real },
    ScriProxy,
    GammaAlpha { alpha: Real },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub model: ModelConfig,
    pub data: DataConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub observers: Vec<ObserverConfig>,
    #[serde(default)]
    pub scenarios: Vec<String>,
    #[serde(default)]
    pub output_dir: Option<String>,
    #[serde(default)]
    pub threads: usize,
    #[serde(default = "default_budget")]
    pub budget_cells: u64,
    #[serde(default = "default_sample_every")]
    pub sample_every: Real,
}

impl RunConfig {
    pub fn from_path(path: &std::path::Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| Error::Config {
            path: path.display().to_string(),
            detail: e.to_string(),
        })?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(Error::Config {
                path: "schema".into(),
                detail: format!("schema version {} != {}", cfg.schema, SCHEMA_VERSION),
            });
        }
        for s in &cfg.scenarios {
            if !matches!(
                s.as_str(),
                "np_conservation" | "huygens" | "t_ladder" | "horizon_sensitivity"
            ) && crate::asymptotics::Scenario::parse(s).is_none()
            {
                return Err(Error::Config {
                    path: "scenarios".into(),
                    detail: format!("unknown scenario '{s}'"),
                });
            }
        }
        Ok(cfg)
    }
}

pub fn build_model(cfg: &ModelConfig) -> Result<SpacetimeModel> {
    let kind = match cfg.kind.to_lowercase().as_str() {
        "minkowski" => ModelKind::Minkowski,
        "schwarzschild" => ModelKind::Schwarzschild,
        "reissner_nordstrom" | "rn" => ModelKind::ReissnerNordstrom,
        other => {
            return Err(Error::Config {
                path: "model.kind".into(),
                detail: format!("unknown model kind '{other}' (custom models are library-only)"),
            })
        }
    };
    make_model(kind, cfg.mass, cfg.charge, cfg.beta, cfg.r_ref, None)
}

pub fn build_foliation(cfg: &FoliationConfig) -> Result<FoliationSpec> {
    match cfg.kind.to_lowercase().as_str() {
        "constant" => Ok(FoliationSpec::constant(cfg.value.unwrap_or(1.0))),
        "inverse_d" => Ok(FoliationSpec::inverse_d()),
        other => Err(Error::Config {
            path: "foliation.kind".into(),
            detail: format!("unknown foliation '{other}'"),
        }),
    }
}

fn build_profile(cfg: &ProfileConfig) -> RadialProfile {
    match cfg {
        ProfileConfig::Zero => RadialProfile::Zero,
        ProfileConfig::Bump {
            center,
            width,
            amplitude,
        } => RadialProfile::Bump {
            center: *center,
            width: *width,
            amplitude: *amplitude,
        },
    }
}

fn build_characteristic(
    cfg: &DataConfig,
    map: &CoordinateMap,
    v0: Real,
    v_max: Real,
) -> Result<CharacteristicData> {
    match cfg {
        DataConfig::Bump {
            v_center,
            width,
            amplitude,
            ell,
        } => bump_data(*v_center, *width, *amplitude, *ell, v0, v_max),
        DataConfig::Tail { i0, p, beta, ell } => tail_data(*i0, p, *beta, *ell, v0, v_max),
        DataConfig::Superpose { terms } => {
            if terms.is_empty() {
                return Err(Error::Config {
                    path: "data.terms".into(),
                    detail: "superposition needs at least one term".into(),
                });
            }
            let mut acc = build_characteristic(&terms[0].data, map, v0, v_max)?;
            if terms[0].coeff != 1.0 {
                let zero = bump_data(0.5 * (v0 + v_max), 1e-3 * (v_max - v0), 0.0, acc.ell, v0, v_max)?;
                acc = superpose(terms[0].coeff, &acc, 0.0, &zero)?;
            }
            for t in &terms[1..] {
                let next = build_characteristic(&t.data, map, v0, v_max)?;
                acc = superpose(1.0, &acc, t.coeff, &next)?;
            }
            Ok(acc)
        }
        DataConfig::TwoBumpTuned { bump_a, bump_b } => {
            let a = build_characteristic(bump_a, map, v0, v_max)?;
            let b = build_characteristic(bump_b, map, v0, v_max)?;
            let fol = FoliationSpec::default();
            let i1a = crate::np_constants::time_inverted_i0(&a, None, &fol, map)?;
            let i1b = crate::np_constants::time_inverted_i0(&b, None, &fol, map)?;
            if i1b.value.abs() < 1e-14 {
                return Err(Error::Config {
                    path: "data.bump_b".into(),
                    detail: "second bump has vanishing I0^(1); cannot tune".into(),
                });
            }
            superpose(1.0, &a, -i1a.value / i1b.value, &b)
        }
        DataConfig::Mixed { .. } => Err(Error::Config {
            path: "data".into(),
            detail: "mixed data cannot be nested".into(),
        }),
    }
}

/// Build the full mixed-surface data object. Pure-characteristic families
/// get zero spacelike data and the default foliation.
pub fn build_data(cfg: &DataConfig, map: &CoordinateMap) -> Result<MixedSurfaceData> {
    let model = map.model();
    let v0 = 2.0 * model.r_ref;
    Ok(match cfg {
        DataConfig::Mixed {
            foliation,
            spacelike,
            cone,
        } => {
            let fol = build_foliation(foliation)?;
            let sp = SpacelikeData {
                psi: build_profile(&spacelike.psi),
                tpsi: build_profile(&spacelike.tpsi),
            };
            let cone = build_characteristic(cone, map, v0, 1e12)?;
            mixed_data(fol, sp, cone, model)?
        }
        other => {
            let cone = build_characteristic(other, map, v0, 1e12)?;
            mixed_data(FoliationSpec::default(), SpacelikeData::zero(), cone, model)?
        }
    })
}

/// Build the data with the cone extent pinned to a grid.
pub fn build_data_for_grid(
    cfg: &DataConfig,
    map: &CoordinateMap,
    grid: &NullGrid,
) -> Result<MixedSurfaceData> {
    let model = map.model();
    let v0 = 2.0 * model.r_ref;
    Ok(match cfg {
        DataConfig::Mixed {
            foliation,
            spacelike,
            cone,
        } => {
            let fol = build_foliation(foliation)?;
            let sp = SpacelikeData {
                psi: build_profile(&spacelike.psi),
                tpsi: build_profile(&spacelike.tpsi),
            };
            let cone = build_characteristic(cone, map, v0, grid.v_max)?;
            mixed_data(fol, sp, cone, model)?
        }
        other => {
            let cone = build_characteristic(other, map, v0, grid.v_max)?;
            mixed_data(FoliationSpec::default(), SpacelikeData::zero(), cone, model)?
        }
    })
}

pub fn build_grid(cfg: &GridConfig, model: &SpacetimeModel) -> Result<NullGrid> {
    NullGrid::new(cfg.h, cfg.u_max, 2.0 * model.r_ref, cfg.v_max)
}

pub fn build_observers(cfgs: &[ObserverConfig]) -> Vec<ObserverSpec> {
    cfgs.iter()
        .map(|c| match c {
            ObserverConfig::ConstantR { r } => ObserverSpec::constant_r(*r),
            ObserverConfig::ConstantRstar { rstar } => ObserverSpec::constant_rstar(*rstar),
            ObserverConfig::ScriProxy => ObserverSpec::scri(),
            ObserverConfig::GammaAlpha { alpha } => ObserverSpec::gamma(*alpha),
        })
        .collect()
}

pub fn build_options(cfg: &RunConfig, grid: &NullGrid) -> EvolveOptions {
    EvolveOptions {
        budget_cells: cfg.budget_cells,
        ..EvolveOptions::default()
    }
    .with_sample_dt(cfg.sample_every, grid.h)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
        "schema": 1,
        "model": {"kind": "schwarzschild", "M": 1.0, "beta": 1.0},
        "data": {"family": "bump", "v_center": 40.0, "width": 10.0, "amplitude": 1.0},
        "grid": {"h": 0.25, "u_max": 100.0, "v_max": 420.0},
        "observers": [{"kind": "constant_r", "r": 10.0}, {"kind": "scri_proxy"}],
        "scenarios": ["interior_zero_np"]
    }"#;

    #[test]
    fn sample_config_parses_and_builds() {
        let cfg: RunConfig = serde_json::from_str(SAMPLE).unwrap();
        let model = build_model(&cfg.model).unwrap();
        assert_eq!(model.r_plus, 2.0);
        let map = CoordinateMap::new(&model);
        let grid = build_grid(&cfg.grid, &model).unwrap();
        assert_eq!(grid.v0, 20.0);
        let data = build_data_for_grid(&cfg.data, &map, &grid).unwrap();
        assert!(data.spacelike.is_zero());
        assert_eq!(build_observers(&cfg.observers).len(), 2);
    }

    #[test]
    fn unknown_fields_are_rejected_with_path() {
        let bad = SAMPLE.replace("\"v_center\"", "\"v_middle\"");
        let err = serde_json::from_str::<RunConfig>(&bad).unwrap_err();
        assert!(err.to_string().contains("v_middle") || err.to_string().contains("unknown"));
    }

    #[test]
    fn unknown_scenario_is_rejected() {
        let tmp = std::env::temp_dir().join("tailwave_bad_scenario.json");
        std::fs::write(&tmp, SAMPLE.replace("interior_zero_np", "no_such_scenario")).unwrap();
        assert!(matches!(
            RunConfig::from_path(&tmp),
            Err(Error::Config { .. })
        ));
        std::fs::remove_file(&tmp).ok();
    }
}
