//! Pilot runs behind the statistical envelopes in `fixtures/acceptance.toml`.
//!
//! Usage: `cargo run --release --example pilot -- [seed ...]` (default 42 43 44).
//! Prints one TOML table per seed to stdout.

use std::time::Instant;

use farey_renewal::experiments::*;
use farey_renewal::operator::{standard_mesh, uniform_returning_trace, ClosedFormDensity};

fn list<T: std::fmt::Display>(v: &[T]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn main() -> farey_renewal::Result<()> {
    let seeds: Vec<u64> = std::env::args().skip(1).map(|s| s.parse().expect("seed")).collect();
    let seeds = if seeds.is_empty() { vec![42, 43, 44] } else { seeds };

    let probes = [0.6, 0.75, 0.9];
    let rows = uniform_returning_trace(&ClosedFormDensity::Identity, &[1 << 10, 1 << 20], &probes, standard_mesh(), 0)?;
    let dev = |n: u64| -> Vec<f64> { rows.iter().filter(|r| r.n == n).map(|r| (r.product - 1.0).abs()).collect() };
    println!("[operator]\ndeviation_2p10 = {}\ndeviation_2p20 = {}\n", list(&dev(1 << 10)), list(&dev(1 << 20)));

    for seed in seeds {
        let t = Instant::now();
        let base = ExperimentConfig { master_seed: seed, ..Default::default() };
        println!("[seed_{seed}]");

        let ul = run_uniform_law(&ExperimentConfig {
            trials: 100_000,
            horizons: vec![1_000, 10_000, 100_000, 1_000_000],
            ..base.clone()
        })?;
        let s = ul.summaries();
        println!("uniform_ks = {}", list(&s.iter().map(|s| s.ks).collect::<Vec<_>>()));
        println!("uniform_atom = {}", list(&s.iter().map(|s| s.atom_frequency).collect::<Vec<_>>()));
        let tails = ul.tail_reports(&[0.1, 0.3, 0.5]);
        let top: Vec<f64> = tails.iter().filter(|r| r.n == 1_000_000).map(|r| r.ratio).collect();
        println!("tail_ratio_1e6 = {}", list(&top));

        let k = run_khinchin(&ExperimentConfig { horizons: vec![1_000_000], ..base.clone() })?;
        println!("khinchin_1e6 = {}", k.checkpoints[0].value);

        let dv = run_diamond_vaaler(&ExperimentConfig { horizons: vec![10_000, 100_000, 1_000_000], ..base.clone() })?;
        println!(
            "diamond_vaaler_deviation = {}",
            list(&dv.checkpoints.iter().map(|c| c.relative_deviation).collect::<Vec<_>>())
        );

        let st = run_stable_stability(&ExperimentConfig { trials: 10_000, horizons: vec![10_000, 100_000], ..base.clone() })?;
        println!("stable_ks = {}", st.ks);

        let ly = run_ly_uniform_law(&ExperimentConfig {
            trials: 10_000,
            horizons: vec![1_000, 10_000, 100_000],
            ..base.clone()
        })?;
        println!("ly_ks = {}", list(&ly.ks_by_horizon().iter().map(|p| p.1).collect::<Vec<_>>()));
        println!("runtime_seconds = {:.1}\n", t.elapsed().as_secs_f64());
    }
    Ok(())
}
