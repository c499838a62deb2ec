//! Shared fixtures and independent oracles for the integration suites.
//!
//! The quadrature oracle here is deliberately a different algorithm
//! (adaptive Simpson) from the library's Gauss-Kronrod panels, so the
//! geometry acceptance check compares two independent routes.

use std::sync::LazyLock;
use tailwave::config::RunConfig;
use tailwave::evolution::{evolve, EvolveOptions, EvolveOutput, NullGrid, ObserverSpec};
use tailwave::geometry::{make_model, CoordinateMap, ModelKind, SpacetimeModel};
use tailwave::initial_data::{bump_data, mixed_data, superpose, FoliationSpec, SpacelikeData};
use tailwave::np_constants::{np_report, time_inverted_i0, NpReport};
use tailwave::Real;

/// Adaptive Simpson quadrature, the test-side oracle.
pub fn simpson<F: Fn(Real) -> Real>(f: &F, a: Real, b: Real, tol: Real) -> Real {
    fn simpson_rule<F: Fn(Real) -> Real>(f: &F, a: Real, m: Real, b: Real) -> Real {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn rec<F: Fn(Real) -> Real>(
        f: &F,
        a: Real,
        m: Real,
        b: Real,
        whole: Real,
        tol: Real,
        depth: u32,
    ) -> Real {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let left = simpson_rule(f, a, lm, m);
        let right = simpson_rule(f, m, rm, b);
        let err = left + right - whole;
        if err.abs() <= 15.0 * tol || depth >= 40 {
            left + right + err / 15.0
        } else {
            rec(f, a, lm, m, left, 0.5 * tol, depth + 1)
                + rec(f, m, rm, b, right, 0.5 * tol, depth + 1)
        }
    }
    let m = 0.5 * (a + b);
    rec(f, a, m, b, simpson_rule(f, a, m, b), tol, 0)
}

/// Oracle for r*(r): adaptive Simpson of 1/D from R to r, with the
/// logarithmic endpoint handled by the same analytic split the definition
/// forces (the ln term is exact; only the regular remainder is integrated).
pub fn tortoise_oracle(model: &SpacetimeModel, r: Real) -> Real {
    let r_ref = model.r_ref;
    if model.r_plus > 0.0 {
        let rp = model.r_plus;
        let kappa = model.d1(rp);
        let s = |rr: Real| 1.0 / model.d(rr) - 1.0 / (kappa * (rr - rp));
        r_ref + ((r - rp) / (r_ref - rp)).ln() / kappa + simpson(&s, r_ref, r, 1e-13)
    } else {
        let s = |rr: Real| 1.0 / model.d(rr);
        r_ref + simpson(&s, r_ref, r, 1e-13)
    }
}

pub fn minkowski() -> SpacetimeModel {
    make_model(ModelKind::Minkowski, 0.0, 0.0, 1.0, None, None).unwrap()
}

pub fn schwarzschild() -> SpacetimeModel {
    make_model(ModelKind::Schwarzschild, 1.0, 0.0, 1.0, None, None).unwrap()
}

pub fn reissner_nordstrom() -> SpacetimeModel {
    make_model(ModelKind::ReissnerNordstrom, 1.0, 0.5, 1.0, None, None).unwrap()
}

pub struct BigRun {
    pub map: CoordinateMap,
    pub np: NpReport,
    pub out: EvolveOutput,
    pub grid: NullGrid,
}

fn evolve_with_np(
    model: SpacetimeModel,
    data: tailwave::initial_data::MixedSurfaceData,
    grid: NullGrid,
    observers: Vec<ObserverSpec>,
    k_max: u32,
) -> BigRun {
    let map = CoordinateMap::new(&model);
    let np = np_report(&data, &map, k_max).expect("np report");
    let opts = EvolveOptions::default().with_sample_dt(0.25, grid.h);
    let out = evolve(&map, &data.cone, &grid, &observers, &opts).expect("evolution");
    BigRun { map, np, out, grid }
}

/// Schwarzschild compact-bump run: the workhorse for the zero-NP tails
/// (interior, scri, horizon, T-ladder).
pub static SCHW_BUMP_RUN: LazyLock<BigRun> = LazyLock::new(|| {
    let model = schwarzschild();
    let map = CoordinateMap::new(&model);
    let grid = NullGrid::new(0.125, 1500.0, 20.0, 3000.0).unwrap();
    let cone = bump_data(40.0, 10.0, 1.0, 0, 20.0, grid.v_max).unwrap();
    let data = mixed_data(FoliationSpec::default(), SpacelikeData::zero(), cone, &model).unwrap();
    drop(map);
    evolve_with_np(
        model,
        data,
        grid,
        vec![
            ObserverSpec::constant_r(10.0),
            ObserverSpec::constant_rstar(-50.0),
            ObserverSpec::constant_rstar(-75.0),
            ObserverSpec::gamma(0.85),
            ObserverSpec::scri(),
        ],
        1,
    )
});

/// Schwarzschild tail run with I0 = 1: nonzero-NP laws and NP conservation.
pub static SCHW_TAIL_RUN: LazyLock<BigRun> = LazyLock::new(|| {
    let model = schwarzschild();
    let grid = NullGrid::new(0.125, 1500.0, 20.0, 3000.0).unwrap();
    let cone =
        tailwave::initial_data::tail_data(1.0, &[], 1.0, 0, 20.0, grid.v_max).unwrap();
    let data = mixed_data(FoliationSpec::default(), SpacelikeData::zero(), cone, &model).unwrap();
    evolve_with_np(
        model,
        data,
        grid,
        vec![ObserverSpec::constant_r(10.0), ObserverSpec::scri()],
        0,
    )
});

/// Two-bump superposition tuned so I0^(1) = 0: the tau^-4 law.
pub static SCHW_TWO_BUMP_RUN: LazyLock<BigRun> = LazyLock::new(|| {
    let model = schwarzschild();
    let map = CoordinateMap::new(&model);
    let grid = NullGrid::new(0.125, 1500.0, 20.0, 3000.0).unwrap();
    let a = bump_data(40.0, 10.0, 1.0, 0, 20.0, grid.v_max).unwrap();
    let b = bump_data(90.0, 12.0, 1.0, 0, 20.0, grid.v_max).unwrap();
    let fol = FoliationSpec::default();
    let i1a = time_inverted_i0(&a, None, &fol, &map).unwrap().value;
    let i1b = time_inverted_i0(&b, None, &fol, &map).unwrap().value;
    let tuned = superpose(1.0, &a, -i1a / i1b, &b).unwrap();
    let data = mixed_data(fol, SpacelikeData::zero(), tuned, &model).unwrap();
    evolve_with_np(
        model,
        data,
        grid,
        vec![ObserverSpec::constant_r(10.0), ObserverSpec::scri()],
        2,
    )
});

/// One pass/fail line per criterion, spec-style.
pub fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "[{}] {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
}

pub fn load_bundled_config(name: &str) -> RunConfig {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name);
    RunConfig::from_path(&path).expect("bundled config parses")
}
