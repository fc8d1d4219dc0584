//! Evaluate a published optimal tour with this crate's distance function,
//! then write it back out in TSPLIB tour format.
//!
//! Usage: cargo run --example verify_optimum [instance.tsp] [tour.opt.tour]

use std::error::Error;
use std::path::{Path, PathBuf};

use edgeswap::parse_tsplib;
use edgeswap::tour::{parse_tour_file, write_tour_file};

fn main() -> Result<(), Box<dyn Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let mut args = std::env::args().skip(1);
    let inst_path = args.next().map(PathBuf::from).unwrap_or_else(|| data.join("berlin52.tsp"));
    let tour_path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| data.join("berlin52.opt.tour"));

    let inst = parse_tsplib(&std::fs::read_to_string(&inst_path)?)?;
    let tour = parse_tour_file(&std::fs::read_to_string(&tour_path)?)?;
    tour.validate(inst.n())?;

    println!("instance: {} (n={})", inst.name(), inst.n());
    println!("tour file: {}", tour_path.display());
    println!("length under {}: {}", inst.kind(), tour.length(&inst));

    let out = std::env::temp_dir().join(format!("{}-roundtrip.tour", inst.name()));
    std::fs::write(&out, write_tour_file(inst.name(), &tour))?;
    println!("rewritten to {}", out.display());
    Ok(())
}
