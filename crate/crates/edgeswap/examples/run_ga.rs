//! Run the two-stage genetic algorithm on a bundled instance and print the
//! trace around the stage switch.
//!
//! Usage: cargo run --release --example run_ga [path/to/instance.tsp] [seed]

use std::error::Error;
use std::path::{Path, PathBuf};

use edgeswap::{parse_tsplib, run, GaConfig};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data/eil51.tsp"));
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let inst = parse_tsplib(&std::fs::read_to_string(&path)?)?;
    let cfg = GaConfig { seed, ..GaConfig::default() };
    let report = run(&inst, &cfg)?;

    println!("instance: {} (n={})", report.instance, inst.n());
    println!("best length: {}", report.best_length);
    println!("generations: {}", report.generations);
    match report.stage_switch_generation {
        Some(g) => println!("switched to the global stage at generation {g}"),
        None => println!("finished inside the local stage"),
    }
    println!("stopped: {:?} after {:.2}s", report.stop_reason, report.wall_seconds);

    // A window of the trace centered on the switch shows both stages at work.
    let switch = report.stage_switch_generation.unwrap_or(report.generations);
    println!("\ngeneration  stage   best     mean");
    for stat in &report.trace {
        if stat.generation + 3 >= switch && stat.generation <= switch + 3 {
            println!(
                "{:>10}  {:<6} {:>6}  {:>9.1}",
                stat.generation,
                format!("{:?}", stat.stage),
                stat.best,
                stat.mean
            );
        }
    }
    Ok(())
}
