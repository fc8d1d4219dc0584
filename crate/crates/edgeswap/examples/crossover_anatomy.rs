//! Walk through the edge-swapping crossover one step at a time: merge two
//! parents, partition the multigraph into rings, pick an R-set, swap it into
//! the first parent, and reconnect the loops.
//!
//! Usage: cargo run --example crossover_anatomy [seed]

use std::error::Error;
use std::path::Path;

use edgeswap::crossover::{apply_rset, merge_graphs, merge_subloops, partition_m_rings, select_rset};
use edgeswap::{build_neighbor_lists, parse_tsplib, two_opt, Strategy, Tour};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn Error>> {
    let seed: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(1);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/eil51.tsp");
    let inst = parse_tsplib(&std::fs::read_to_string(path)?)?;
    let nbrs = build_neighbor_lists(&inst, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Two distinct local optima make interesting parents.
    let parent = |rng: &mut ChaCha8Rng| {
        let mut order: Vec<u32> = (0..inst.n() as u32).collect();
        order.shuffle(rng);
        two_opt(&inst, &nbrs, &Tour::new(order), rng)
    };
    let pa = parent(&mut rng);
    let pb = parent(&mut rng);
    println!("parent A: {}", pa.length(&inst));
    println!("parent B: {}", pb.length(&inst));
    println!(
        "edges unique to A: {}",
        pa.edges().symmetric_difference_len(&pb.edges()) / 2
    );

    let g = merge_graphs(&pa, &pb)?;
    let rings = partition_m_rings(&g, &mut rng);
    let mut sizes: Vec<usize> = rings.iter().map(|r| r.size()).collect();
    sizes.sort_unstable();
    println!("\nmerged graph: {} labeled edges", g.edges().len());
    println!("rings: {} with sizes {:?}", rings.len(), sizes);
    println!(
        "effective: {} (ineffective rings are doubled shared edges)",
        rings.iter().filter(|r| r.is_effective()).count()
    );

    let centroids: Vec<(f64, f64)> = rings.iter().map(|r| r.centroid(&inst)).collect();
    for strategy in [Strategy::Single, Strategy::Random, Strategy::KMultiple(3), Strategy::Block(3)] {
        let Some(rset) = select_rset(&rings, &centroids, strategy, &mut rng) else {
            println!("\n{strategy:?}: no effective ring to select");
            continue;
        };
        let im = apply_rset(&pa, &rings, &rset);
        let child = merge_subloops(&inst, &nbrs, &im);
        println!(
            "\n{strategy:?}: swapped {} rings ({} edges out, {} in)",
            rset.rings.len(),
            rset.size,
            rset.size
        );
        println!(
            "  intermediate: {} loops, length {}",
            im.loop_count(),
            im.total_length(&inst)
        );
        println!("  child after reconnection: {}", child.length(&inst));
    }
    Ok(())
}
