//! Improve a random tour with candidate-list 2-opt.
//!
//! Usage: cargo run --example two_opt_pass [path/to/instance.tsp] [seed]

use std::error::Error;
use std::path::{Path, PathBuf};

use edgeswap::{build_neighbor_lists, parse_tsplib, two_opt, Tour};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data/berlin52.tsp"));
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let inst = parse_tsplib(&std::fs::read_to_string(&path)?)?;
    let nbrs = build_neighbor_lists(&inst, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut order: Vec<u32> = (0..inst.n() as u32).collect();
    order.shuffle(&mut rng);
    let random_tour = Tour::new(order);
    let improved = two_opt(&inst, &nbrs, &random_tour, &mut rng);

    let before = random_tour.length(&inst);
    let after = improved.length(&inst);
    println!("instance: {} (n={})", inst.name(), inst.n());
    println!("random tour:  {before}");
    println!("after 2-opt:  {after}");
    println!("improvement:  {:.2}%", 100.0 * (before - after) as f64 / before as f64);
    Ok(())
}
