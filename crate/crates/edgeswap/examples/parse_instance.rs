//! Load a TSPLIB file and inspect distances and candidate lists.
//!
//! Usage: cargo run --example parse_instance [path/to/instance.tsp]

use std::error::Error;
use std::path::{Path, PathBuf};

use edgeswap::{build_neighbor_lists, parse_tsplib};

fn default_instance() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/berlin52.tsp")
}

fn main() -> Result<(), Box<dyn Error>> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(default_instance);
    let inst = parse_tsplib(&std::fs::read_to_string(&path)?)?;

    println!("name: {}", inst.name());
    println!("cities: {}", inst.n());
    println!("edge weights: {}", inst.kind());

    let show = inst.n().min(5);
    for i in 0..show {
        let (x, y) = inst.coords()[i];
        if i == 0 {
            println!("city {i}: ({x}, {y})");
        } else {
            println!("city {i}: ({x}, {y})  d(0,{i}) = {}", inst.distance(0, i));
        }
    }

    let nbrs = build_neighbor_lists(&inst, 5);
    println!("nearest {} neighbors of city 0: {:?}", nbrs.k(), nbrs.neighbors(0));
    Ok(())
}
