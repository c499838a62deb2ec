use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use tailwave::asymptotics::Scenario;
use tailwave::config::{build_data_for_grid, build_grid, build_model, RunConfig, SCHEMA_VERSION};
use tailwave::evolution::ObserverSeries;
use tailwave::geometry::CoordinateMap;
use tailwave::np_constants::np_report;
use tailwave::pipeline::{self, NpReportJson, TailFitJson};
use tailwave::time_integral::iterate_time_integral;
use tailwave::Real;

#[derive(Parser)]
#[command(
    name = "tailwave",
    about = "Double-null scalar-wave evolution on black-hole backgrounds with late-time tail verification",
    version
)]
struct Cli {
    /// Output directory (falls back to $TAILWAVE_OUT, then ./out)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for independent runs (0 = all cores)
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Cell-count cap for a single evolution
    #[arg(long, global = true)]
    budget_cells: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump (r, D, D', r*) tables for the configured model as CSV
    Model {
        #[arg(long)]
        config: PathBuf,
    },
    /// Compute the NP report (I0, C0, inverted constants) from the data block
    Constants {
        #[arg(long)]
        config: PathBuf,
        /// Also emit the constructed time-integral chain as CSV (v, phi_k)
        #[arg(long)]
        construct: bool,
        /// Chain depth
        #[arg(long, default_value_t = 1)]
        k: u32,
    },
    /// Evolve and write one CSV per observer plus diagnostics JSON
    Evolve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Fit a tail scenario from an observer CSV and an NP report
    Tail {
        /// Observer CSV produced by `evolve`
        #[arg(long)]
        csv: PathBuf,
        /// NP report JSON produced by `constants`
        #[arg(long)]
        np: PathBuf,
        /// Scenario name (e.g. interior_zero_np)
        #[arg(long)]
        scenario: String,
        /// Field column to fit (psi, tpsi, t2psi, phi, v2dvphi)
        #[arg(long, default_value = "psi")]
        field: String,
        /// Use the v column as abscissa (horizon tails)
        #[arg(long)]
        in_v: bool,
    },
    /// Three-or-more-level self-convergence of the configured run
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 3)]
        levels: u32,
    },
    /// Full pipeline: constants -> construct -> evolve -> tail, with
    /// pass/fail against the built-in acceptance bands
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
}

fn out_dir(cli: &Cli) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| std::env::var("TAILWAVE_OUT").ok().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn fmt(x: Real) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn observer_csv(path: &Path, s: &ObserverSeries) -> anyhow::Result<()> {
    let mut out = String::from("tau,u,v,r,phi,psi,Tpsi,T2psi,v2dvphi\n");
    for i in 0..s.len() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            fmt(s.tau[i]),
            fmt(s.u[i]),
            fmt(s.v[i]),
            fmt(s.r[i]),
            fmt(s.phi[i]),
            fmt(s.psi[i]),
            fmt(s.tpsi[i]),
            fmt(s.t2psi[i]),
            fmt(s.v2dvphi[i]),
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn sanitize(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_alphanumeric() { c } else { '_' })
        .collect()
}

fn load_config(path: &Path, cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::from_path(path)?;
    if let Some(b) = cli.budget_cells {
        cfg.budget_cells = b;
    }
    if cli.threads != 0 {
        cfg.threads = cli.threads;
    }
    Ok(cfg)
}

fn init_threads(cfg: &RunConfig) {
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .ok();
    }
}

#[derive(serde::Serialize)]
struct DiagnosticsJson {
    schema: u32,
    cells: u64,
    residual_max: Real,
    residual_rms: Real,
    residual_samples: u64,
    wall_ms: f64,
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let dir = out_dir(&cli);
    std::fs::create_dir_all(&dir)?;

    match &cli.command {
        Command::Model { config } => {
            let cfg = load_config(config, &cli)?;
            let model = build_model(&cfg.model)?;
            let map = CoordinateMap::new(&model);
            let mut out = String::from("r,D,Dprime,rstar\n");
            let r_lo = model.r_min + 1e-6 * model.scale();
            let r_hi = 100.0 * model.scale().max(model.r_ref);
            let n = 2000;
            for i in 0..=n {
                let t = i as Real / n as Real;
                let r = r_lo + (r_hi - r_lo) * t * t;
                let rs = map.tortoise(r)?;
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt(r),
                    fmt(model.d(r)),
                    fmt(model.d1(r)),
                    fmt(rs)
                ));
            }
            let path = dir.join("model.csv");
            std::fs::write(&path, out)?;
            println!("wrote {}", path.display());
        }
        Command::Constants { config, construct, k } => {
            let cfg = load_config(config, &cli)?;
            let model = build_model(&cfg.model)?;
            let map = CoordinateMap::new(&model);
            let grid = build_grid(&cfg.grid, &model)?;
            let data = build_data_for_grid(&cfg.data, &map, &grid)?;
            let report = np_report(&data, &map, *k)?;
            let path = dir.join("npreport.json");
            write_json(&path, &NpReportJson::from_report(&report))?;
            println!("wrote {}", path.display());
            if *construct {
                let chain = iterate_time_integral(&data, &map, *k)?;
                for level in &chain {
                    let mut csv = String::from("v,phi\n");
                    let mut v = data.cone.v0;
                    while v <= grid.v_max {
                        csv.push_str(&format!("{},{}\n", fmt(v), fmt(level.phi_cone(&map, v)?)));
                        v += 4.0 * grid.h;
                    }
                    let path = dir.join(format!("time_integral_k{}.csv", level.order));
                    std::fs::write(&path, csv)?;
                    println!("wrote {}", path.display());
                }
            }
        }
        Command::Evolve { config } => {
            let cfg = load_config(config, &cli)?;
            init_threads(&cfg);
            let art = pipeline::run_pipeline(&cfg)?;
            for s in &art.out.observers {
                let path = dir.join(format!("observer_{}.csv", sanitize(&s.spec.label)));
                observer_csv(&path, s)?;
                println!("wrote {}", path.display());
            }
            let d = &art.out.diagnostics;
            let path = dir.join("diagnostics.json");
            write_json(
                &path,
                &DiagnosticsJson {
                    schema: SCHEMA_VERSION,
                    cells: d.cells,
                    residual_max: d.residual_max,
                    residual_rms: d.residual_rms,
                    residual_samples: d.residual_samples,
                    wall_ms: d.wall_ms,
                },
            )?;
            println!("wrote {}", path.display());
        }
        Command::Tail {
            csv,
            np,
            scenario,
            field,
            in_v,
        } => {
            let sc = Scenario::parse(scenario)
                .with_context(|| format!("unknown scenario '{scenario}'"))?;
            let np_json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(np)?)?;
            let report = np_from_json(&np_json)?;
            let (tau, y) = read_series(csv, field, *in_v)?;
            let hi = tau.last().copied().unwrap_or(1.0);
            let fit = tailwave::asymptotics::extrapolate_and_compare(
                &tau,
                &y,
                &report,
                sc,
                (hi / 4.0, hi),
                &csv.display().to_string(),
                field,
            )?;
            let path = dir.join("tailfit.json");
            write_json(&path, &TailFitJson::from_fit(&fit))?;
            println!(
                "{:<22} {:>10} {:>12} {:>14} {:>14} {:>10}",
                "scenario", "p_inf", "p_theory", "amplitude", "target", "dev"
            );
            println!(
                "{:<22} {:>10.4} {:>12.1} {:>14.6e} {:>14.6e} {:>10.4}",
                scenario,
                fit.p_inf,
                fit.exponent_theory,
                fit.amplitude,
                fit.target.unwrap_or(0.0),
                fit.deviation.unwrap_or(f64::NAN)
            );
            println!("wrote {}", path.display());
        }
        Command::Convergence { config, levels } => {
            let cfg = load_config(config, &cli)?;
            init_threads(&cfg);
            let report = pipeline::run_convergence(&cfg, *levels)?;
            let path = dir.join("convergence.json");
            write_json(&path, &report)?;
            for e in &report.entries {
                println!(
                    "{:<20} {:<8} factor = {:<10} {}",
                    e.observer,
                    e.field,
                    e.factor
                        .map(|f| format!("{f:.3}"))
                        .unwrap_or_else(|| "exact".into()),
                    if e.pass { "PASS" } else { "FAIL" }
                );
            }
            if !report.pass {
                bail!("convergence outside the [3.6, 4.4] band");
            }
        }
        Command::Verify { config } => {
            let cfg = load_config(config, &cli)?;
            init_threads(&cfg);
            let report = pipeline::run_verify(&cfg)?;
            let path = dir.join("verify.json");
            write_json(&path, &report)?;
            for c in &report.criteria {
                println!(
                    "[{}] {:<24} {}",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.id,
                    c.detail
                );
            }
            println!("wrote {}", path.display());
            if !report.pass {
                bail!("verification failed");
            }
        }
    }
    Ok(())
}

/// Minimal NP-report reader for the `tail` subcommand.
fn np_from_json(v: &serde_json::Value) -> anyhow::Result<tailwave::np_constants::NpReport> {
    use tailwave::np_constants::{NpEntry, NpMethod, NpReport, ValueWithError};
    let mut report = NpReport::default();
    let ve = |o: &serde_json::Value| -> Option<ValueWithError> {
        Some(ValueWithError::new(
            o.get("value")?.as_f64()?,
            o.get("error")?.as_f64()?,
        ))
    };
    if let Some(x) = v.get("i0") {
        report.i0 = ve(x);
    }
    if let Some(x) = v.get("c0") {
        report.c0 = ve(x);
    }
    if let Some(arr) = v.get("inverted").and_then(|x| x.as_array()) {
        for e in arr {
            report.inverted.push(NpEntry {
                k: e.get("k").and_then(|x| x.as_u64()).unwrap_or(0) as u32,
                value: e.get("value").and_then(|x| x.as_f64()).unwrap_or(f64::NAN),
                error: e.get("error").and_then(|x| x.as_f64()).unwrap_or(f64::NAN),
                method: NpMethod::Both,
                agreement: e.get("agreement").and_then(|x| x.as_f64()),
            });
        }
    }
    Ok(report)
}

/// Read (abscissa, field) columns from an observer CSV.
fn read_series(path: &Path, field: &str, in_v: bool) -> anyhow::Result<(Vec<Real>, Vec<Real>)> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let header = lines.next().context("empty CSV")?;
    let cols: Vec<&str> = header.split(',').collect();
    let named = |n: &str| cols.iter().position(|c| c.eq_ignore_ascii_case(n));
    let t_idx = if in_v {
        named("v").context("no v column")?
    } else {
        named("tau").context("no tau column")?
    };
    let y_idx = named(field).with_context(|| format!("no column '{field}'"))?;
    let mut tau = Vec::new();
    let mut y = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let t: Real = fields[t_idx].parse()?;
        let yy: Real = fields[y_idx].parse()?;
        tau.push(t);
        y.push(yy);
    }
    Ok((tau, y))
}
