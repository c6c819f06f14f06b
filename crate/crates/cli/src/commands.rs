use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use farey_renewal::exact::{DigitSource, GeometricMean, LazyReal, QuadraticBits, RationalDigits};
use farey_renewal::experiments::{
    run_diamond_vaaler, run_khinchin, run_ly_uniform_law, run_stable_stability, run_uniform_law, run_weak_law,
    Diagnostics, ExperimentConfig, OutputFormat, RandomDigits, UniformLawSummary,
};
use farey_renewal::operator::{standard_mesh, uniform_returning_trace, ClosedFormDensity};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{emit, Cell, Provenance, Staged, Table};
use crate::{Common, Failure};

/// Oracle column is filled for `n` up to this value.
const ORACLE_UP_TO: u32 = 20;
const DEFAULT_PROBES: [f64; 3] = [0.6, 0.75, 0.9];
const DEFAULT_OPERATOR_SCHEDULE: [u64; 7] = [1, 2, 5, 10, 20, 100, 1000];

type CmdResult = Result<(), Failure>;

/// Defaults, then the config file, then explicit flags.
fn resolve(common: &Common, base: ExperimentConfig) -> Result<ExperimentConfig, Failure> {
    let mut cfg = base;
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path).map_err(|e| Failure::io(&format!("reading {}", path.display()), e))?;
        cfg.apply_kv_text(&text)?;
    }
    if let Some(v) = common.seed {
        cfg.master_seed = v;
    }
    if let Some(v) = common.trials {
        cfg.trials = v;
    }
    if !common.n.is_empty() {
        cfg.horizons = common.n.clone();
    }
    if !common.epsilon.is_empty() {
        cfg.epsilons = common.epsilon.clone();
    }
    if let Some(v) = common.workers {
        cfg.workers = v;
    }
    if let Some(v) = common.refine_cap {
        cfg.refine_cap = v;
    }
    if let Some(v) = common.engine {
        cfg.engine = v;
    }
    if let Some(v) = common.format {
        cfg.format = v;
    }
    Ok(cfg)
}

fn write_table(table: &Table, prov: &Provenance, format: OutputFormat, out: Option<&Path>) -> CmdResult {
    let text = match format {
        OutputFormat::Csv => table.to_csv(prov),
        OutputFormat::Json => table.to_json(prov),
    };
    emit(out, &text).map_err(|e| Failure::io("writing output", e))
}

fn report_runtime(what: &str, start: Instant) {
    eprintln!("farey: {what} finished in {:.3} s", start.elapsed().as_secs_f64());
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn parse_rational(s: &str) -> Result<(BigInt, BigInt), Failure> {
    let bad = || Failure::usage(format!("rational `{s}` is not of the form p/q"));
    let (p, q) = s.split_once('/').ok_or_else(bad)?;
    Ok((BigInt::from_str(p.trim()).map_err(|_| bad())?, BigInt::from_str(q.trim()).map_err(|_| bad())?))
}

fn constant_bits(name: &str) -> Result<QuadraticBits, Failure> {
    match name {
        "golden" => Ok(QuadraticBits::golden()),
        "silver" => Ok(QuadraticBits::silver()),
        _ => {
            let n: u64 = name
                .strip_prefix("sqrt:")
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| Failure::usage(format!("unknown constant `{name}` (golden | silver | sqrt:N)")))?;
            // Fractional part of √n.
            let r = (1..).take_while(|k: &u64| k * k <= n).last().unwrap_or(0);
            Ok(QuadraticBits::new(n, r, 1)?)
        }
    }
}

pub fn expand(common: &Common, rational: Option<&str>, constant: Option<&str>, count: u64) -> CmdResult {
    let cfg = resolve(common, ExperimentConfig::default())?;
    let given = [common.seed.is_some(), rational.is_some(), constant.is_some()];
    if given.iter().filter(|&&g| g).count() != 1 {
        return Err(Failure::usage("expand needs exactly one of --seed, --rational, --constant"));
    }
    if count == 0 {
        return Err(Failure::usage("--count must be at least 1"));
    }
    let (label, mut source): (String, Box<dyn DigitSource>) = if let Some(r) = rational {
        let (p, q) = parse_rational(r)?;
        (format!("rational:{p}/{q}"), Box::new(RationalDigits::new(p, q)?))
    } else if let Some(c) = constant {
        let bits = constant_bits(c)?;
        (format!("constant:{c}"), Box::new(LazyReal::from_bits(bits).with_refine_cap(cfg.refine_cap)))
    } else {
        (format!("seed:{}", cfg.master_seed), Box::new(RandomDigits::new(&cfg, 0)))
    };
    let mut extra = vec![("source", label), ("count", count.to_string()), ("refine_cap", cfg.refine_cap.to_string())];
    if common.seed.is_some() {
        extra.push(("engine", cfg.engine.to_string()));
    }
    let prov = Provenance::new("expand", cfg.master_seed, "", &extra);

    let mut table = Table::new(&["k", "a_k", "S_k", "S_flat_k", "geometric_mean"]);
    let (mut sum, mut max) = (0u64, 0u64);
    let mut gm = GeometricMean::default();
    let mut ended = false;
    for k in 1..=count {
        let Some(a) = source.next_digit()? else {
            ended = true;
            break;
        };
        sum = sum.checked_add(a).ok_or(farey_renewal::Error::DigitOverflow)?;
        max = max.max(a);
        gm.push(a);
        table.push(vec![Cell::U(k), Cell::U(a), Cell::U(sum), Cell::U(sum - max), Cell::F(gm.value())]);
    }
    if ended {
        table.trailer.push(format!("end-of-stream after {} digits", gm.count()));
    }
    table.json_extra.insert("end_of_stream".into(), json!(ended));
    write_table(&table, &prov, cfg.format, common.out.as_deref())
}

#[derive(Serialize)]
struct SimulateSummary {
    trials: u64,
    horizons: Vec<UniformLawSummary>,
    diagnostics: Diagnostics,
}

pub fn simulate(common: &Common) -> CmdResult {
    let cfg = resolve(common, ExperimentConfig::default())?;
    cfg.validate()?;
    let dir = common.out.as_deref().ok_or_else(|| Failure::usage("simulate needs --out DIR"))?;
    fs::create_dir_all(dir).map_err(|e| Failure::io(&format!("creating {}", dir.display()), e))?;
    let start = Instant::now();
    let run = run_uniform_law(&cfg)?;
    let prov = Provenance::new("simulate", cfg.master_seed, &cfg.canonical(), &[]);

    let mut table = Table::new(&["trial", "n", "X_n", "gap", "scaled"]);
    for (trial, recs) in run.records.iter().enumerate() {
        for r in recs {
            table.push(vec![Cell::U(trial as u64), Cell::U(r.n), Cell::U(r.x_n), Cell::U(r.gap), Cell::F(r.scaled)]);
        }
    }
    let rows = match cfg.format {
        OutputFormat::Csv => ("trials.csv", table.to_csv(&prov)),
        OutputFormat::Json => ("trials.json", table.to_json(&prov)),
    };
    let summary = SimulateSummary { trials: cfg.trials, horizons: run.summaries(), diagnostics: run.diagnostics };
    let mut staged = Staged::default();
    let io = |e| Failure::io("writing output", e);
    staged.add(&dir.join(rows.0), &rows.1).map_err(io)?;
    staged.add(&dir.join("summary.json"), &prov.json_document(&summary)).map_err(io)?;
    staged.commit().map_err(io)?;
    report_runtime("simulate", start);
    Ok(())
}

pub fn tail(common: &Common) -> CmdResult {
    let mut cfg = resolve(common, ExperimentConfig::default())?;
    cfg.epsilons.sort_by(f64::total_cmp);
    cfg.epsilons.dedup();
    cfg.validate()?;
    let start = Instant::now();
    let run = run_uniform_law(&cfg)?;
    let prov = Provenance::new("tail", cfg.master_seed, &cfg.canonical(), &[]);
    let mut table = Table::new(&["epsilon", "n", "frequency", "theoretical", "ratio", "stderr"]);
    for r in run.tail_reports(&cfg.epsilons) {
        table.push(vec![
            Cell::F(r.epsilon),
            Cell::U(r.n),
            Cell::F(r.frequency),
            Cell::F(r.theoretical),
            Cell::F(r.ratio),
            Cell::F(r.stderr),
        ]);
    }
    table.json_extra.insert("diagnostics".into(), serde_json::to_value(run.diagnostics).expect("plain struct"));
    write_table(&table, &prov, cfg.format, common.out.as_deref())?;
    report_runtime("tail", start);
    Ok(())
}

pub fn operator(common: &Common, density: &str, probes: &[f64]) -> CmdResult {
    let base = ExperimentConfig { horizons: DEFAULT_OPERATOR_SCHEDULE.to_vec(), ..Default::default() };
    let cfg = resolve(common, base)?;
    let f = ClosedFormDensity::<f64>::from_str(density)?;
    let probes = if probes.is_empty() { DEFAULT_PROBES.to_vec() } else { probes.to_vec() };
    let schedule = cfg.schedule();
    let start = Instant::now();
    let rows = uniform_returning_trace(&f, &schedule, &probes, standard_mesh(), ORACLE_UP_TO)?;
    let prov = Provenance::new(
        "operator",
        cfg.master_seed,
        "",
        &[("density", density.to_string()), ("n", join(&schedule)), ("probe", join(&probes))],
    );
    let mut table = Table::new(&[
        "n",
        "W_n",
        "probe_x",
        "value",
        "product",
        "min_slope",
        "max_second_diff",
        "mu_integral",
        "oracle",
    ]);
    for r in rows {
        table.push(vec![
            Cell::U(r.n),
            Cell::F(r.w_n),
            Cell::F(r.probe_x),
            Cell::F(r.value),
            Cell::F(r.product),
            Cell::F(r.min_slope),
            Cell::F(r.max_second_difference),
            Cell::F(r.mu_integral),
            r.oracle.map_or(Cell::Empty, Cell::F),
        ]);
    }
    write_table(&table, &prov, cfg.format, common.out.as_deref())?;
    report_runtime("operator", start);
    Ok(())
}

#[derive(Serialize)]
struct LyHorizon {
    n: u64,
    ks: f64,
    median: f64,
}

pub fn classic(common: &Common, which: &str) -> CmdResult {
    let (horizons, trials): (&[u64], u64) = match which {
        "khinchin" | "diamond-vaaler" => (&[10_000, 100_000, 1_000_000], 1),
        "weak-law" => (&[1_000, 10_000], 1000),
        "stable" => (&[10_000, 100_000], 1000),
        "ly" => (&[1_000, 10_000, 100_000], 1000),
        _ => {
            return Err(Failure::usage(format!(
                "unknown --which `{which}` (khinchin | diamond-vaaler | weak-law | stable | ly)"
            )))
        }
    };
    let base = ExperimentConfig { horizons: horizons.to_vec(), trials, ..Default::default() };
    let cfg = resolve(common, base)?;
    cfg.validate()?;
    let start = Instant::now();
    let payload: Value = match which {
        "khinchin" => serde_json::to_value(run_khinchin(&cfg)?),
        "diamond-vaaler" => serde_json::to_value(run_diamond_vaaler(&cfg)?),
        "weak-law" => serde_json::to_value(run_weak_law(&cfg)?),
        "stable" => serde_json::to_value(run_stable_stability(&cfg)?),
        _ => {
            let run = run_ly_uniform_law(&cfg)?;
            let horizons: Vec<LyHorizon> = run
                .ks_by_horizon()
                .into_iter()
                .map(|(n, ks)| {
                    let median = run.distribution(n).and_then(|d| d.median()).unwrap_or(f64::NAN);
                    LyHorizon { n, ks, median }
                })
                .collect();
            Ok(json!({ "trials": cfg.trials, "horizons": horizons, "diagnostics": run.diagnostics }))
        }
    }
    .expect("serializable report");
    let prov = Provenance::new(which, cfg.master_seed, &cfg.canonical(), &[]);
    emit(common.out.as_deref(), &prov.json_document(&payload)).map_err(|e| Failure::io("writing output", e))?;
    report_runtime(which, start);
    Ok(())
}
