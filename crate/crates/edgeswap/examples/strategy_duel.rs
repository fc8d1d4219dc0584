//! Compare the two global-stage strategies on a mid-size instance.
//! Expect roughly a minute of work with the bundled default (pcb442).
//!
//! Usage: cargo run --release --example strategy_duel [path/to/instance.tsp] [optimum] [seeds]

use std::error::Error;
use std::path::{Path, PathBuf};

use edgeswap::{parse_tsplib, run, GaConfig, StrategyKind};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data/pcb442.tsp"));
    let optimum: i64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50778);
    let seeds: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);

    let inst = parse_tsplib(&std::fs::read_to_string(&path)?)?;
    println!("instance: {} (n={}), optimum {optimum}, {seeds} seeds per strategy\n", inst.name(), inst.n());

    for strategy in [StrategyKind::Block, StrategyKind::KMultiple] {
        let mut errs = Vec::new();
        let mut secs = 0.0;
        for seed in 1..=seeds {
            let cfg = GaConfig { global_strategy: strategy, seed, ..GaConfig::default() };
            let report = run(&inst, &cfg)?;
            errs.push(100.0 * (report.best_length - optimum) as f64 / optimum as f64);
            secs += report.wall_seconds;
        }
        let mean = errs.iter().sum::<f64>() / errs.len() as f64;
        let per_seed = errs.iter().map(|e| format!("{e:.4}")).collect::<Vec<_>>().join(", ");
        println!("{strategy:?}: mean err {mean:.4}%  (per seed [{per_seed}], {secs:.1}s total)");
    }
    Ok(())
}
