//! Cross-check the GA against both exact oracles on a small random instance.
//!
//! Usage: cargo run --example exact_check [n] [seed]

use std::error::Error;

use edgeswap::instance::{EdgeWeightKind, Instance};
use edgeswap::oracle::{brute_force_optimum, held_karp};
use edgeswap::{run, GaConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(9);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coords: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(0.0..1000.0), rng.random_range(0.0..1000.0)))
        .collect();
    let inst = Instance::new("random", coords, EdgeWeightKind::Euc2d)?;

    let (brute, tour) = brute_force_optimum(&inst)?;
    let hk = held_karp(&inst)?;
    let cfg = GaConfig { n_pop: 20, n_ch: 5, g_stagnation: 10, seed, ..GaConfig::default() };
    let ga = run(&inst, &cfg)?;

    println!("n = {n}, seed = {seed}");
    println!("brute force: {brute}  (tour {:?})", tour.order());
    println!("held-karp:   {hk}");
    println!("ga:          {}", ga.best_length);
    assert_eq!(brute, hk);
    if ga.best_length == brute {
        println!("the GA found the optimum");
    } else {
        println!("the GA missed by {:.3}%", 100.0 * (ga.best_length - brute) as f64 / brute as f64);
    }
    Ok(())
}
