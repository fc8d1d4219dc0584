//! Run a seeded benchmark batch over the small bundled instances and print
//! the CSV summary.
//!
//! Usage: cargo run --release --example bench_batch [runs]

use std::error::Error;
use std::path::Path;

use edgeswap::bench::{csv_summary, run_benchmark, ManifestEntry};
use edgeswap::GaConfig;

fn main() -> Result<(), Box<dyn Error>> {
    let runs: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let entries: Vec<ManifestEntry> = [("berlin52.tsp", 7542), ("eil51.tsp", 426), ("st70.tsp", 675)]
        .into_iter()
        .map(|(file, optimum)| ManifestEntry { path: data.join(file), optimum })
        .collect();

    let outcomes = run_benchmark(&entries, &GaConfig::default(), runs, 1);
    print!("{}", csv_summary(&outcomes));
    Ok(())
}
