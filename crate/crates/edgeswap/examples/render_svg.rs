//! Draw a tour and a merged-ring overlay as SVG files.
//!
//! Usage: cargo run --example render_svg [out_dir]

use std::error::Error;
use std::path::{Path, PathBuf};

use edgeswap::render::{rings_svg, tour_svg};
use edgeswap::{build_neighbor_lists, parse_tsplib, two_opt, Tour};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn Error>> {
    let out_dir = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(std::env::temp_dir);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/berlin52.tsp");
    let inst = parse_tsplib(&std::fs::read_to_string(path)?)?;
    let nbrs = build_neighbor_lists(&inst, 10);
    let mut rng = ChaCha8Rng::seed_from_u64(1);

    let parent = |rng: &mut ChaCha8Rng| {
        let mut order: Vec<u32> = (0..inst.n() as u32).collect();
        order.shuffle(rng);
        two_opt(&inst, &nbrs, &Tour::new(order), rng)
    };
    let pa = parent(&mut rng);
    let pb = parent(&mut rng);

    let tour_path = out_dir.join("berlin52-tour.svg");
    std::fs::write(&tour_path, tour_svg(&inst, &pa))?;
    println!("tour ({}): {}", pa.length(&inst), tour_path.display());

    // Solid strokes are parent A edges, dashed are parent B; one color per ring.
    let rings_path = out_dir.join("berlin52-rings.svg");
    std::fs::write(&rings_path, rings_svg(&inst, &pa, &pb, &mut rng)?)?;
    println!("ring overlay: {}", rings_path.display());
    Ok(())
}
