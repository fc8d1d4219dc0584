//! Exact solvers and structural validators, used as independent references
//! in tests.

use itertools::Itertools;
use thiserror::Error;

use crate::crossover::{MergedGraph, MRing, Parent};
use crate::instance::Instance;
use crate::tour::Tour;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {n} cities; this exact solver handles at most {max}")]
    TooLarge { n: usize, max: usize },
}

/// Exhaustive optimum for up to 10 cities.
///
/// City 0 is fixed as the start and each cycle is enumerated in one
/// direction only, so `(n-1)!/2` orders are scored.
pub fn brute_force_optimum(inst: &Instance) -> Result<(i64, Tour), OracleError> {
    let n = inst.n();
    if n > 10 {
        return Err(OracleError::TooLarge { n, max: 10 });
    }
    let mut best_len = i64::MAX;
    let mut best_order: Vec<u32> = Vec::new();
    for perm in (1..n as u32).permutations(n - 1) {
        if perm[0] > perm[n - 2] {
            continue;
        }
        let mut len = inst.distance(0, perm[0] as usize);
        for pair in perm.windows(2) {
            len += inst.distance(pair[0] as usize, pair[1] as usize);
        }
        len += inst.distance(perm[n - 2] as usize, 0);
        if len < best_len {
            best_len = len;
            best_order = perm;
        }
    }
    let mut order = vec![0u32];
    order.extend(best_order);
    Ok((best_len, Tour::new(order)))
}

/// Dynamic-programming optimum length for up to 18 cities.
pub fn held_karp(inst: &Instance) -> Result<i64, OracleError> {
    let n = inst.n();
    if n > 18 {
        return Err(OracleError::TooLarge { n, max: 18 });
    }
    // dp[mask][j]: cheapest path from city 0 through exactly the cities of
    // `mask` (over cities 1..n), ending at city j+1.
    let m = n - 1;
    let full = (1usize << m) - 1;
    let mut dp = vec![i64::MAX; (full + 1) * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = inst.distance(0, j + 1);
    }
    for mask in 1..=full {
        for j in 0..m {
            let cur = dp[mask * m + j];
            if cur == i64::MAX || mask & (1 << j) == 0 {
                continue;
            }
            for k in 0..m {
                if mask & (1 << k) != 0 {
                    continue;
                }
                let next = mask | (1 << k);
                let cand = cur + inst.distance(j + 1, k + 1);
                let cell = &mut dp[next * m + k];
                if cand < *cell {
                    *cell = cand;
                }
            }
        }
    }
    let best = (0..m)
        .map(|j| dp[full * m + j] + inst.distance(j + 1, 0))
        .min()
        .expect("n >= 3 leaves at least one end city");
    Ok(best)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionViolation {
    #[error("ring {index} is empty")]
    EmptyRing { index: usize },
    #[error("ring {index} has an odd edge count {count}")]
    OddEdgeCount { index: usize, count: usize },
    #[error("ring {index} does not alternate between parent labels")]
    NotAlternating { index: usize },
    #[error("ring {index} is not a closed walk")]
    NotClosed { index: usize },
    #[error("edge ({u}, {v}) from parent {parent:?} appears {in_rings} times across rings but {in_graph} times in the merged graph")]
    Coverage { u: u32, v: u32, parent: Parent, in_rings: usize, in_graph: usize },
}

/// Checks that `rings` is a faithful partition of the merged graph: every
/// labeled edge lands in exactly one ring, and every ring is a closed walk
/// alternating between the two parents.
pub fn check_partition(g: &MergedGraph, rings: &[MRing]) -> Result<(), PartitionViolation> {
    for (index, ring) in rings.iter().enumerate() {
        let edges = ring.edges();
        if edges.is_empty() {
            return Err(PartitionViolation::EmptyRing { index });
        }
        if edges.len() % 2 != 0 {
            return Err(PartitionViolation::OddEdgeCount { index, count: edges.len() });
        }
        for i in 0..edges.len() {
            let next = (i + 1) % edges.len();
            if edges[i].parent == edges[next].parent {
                return Err(PartitionViolation::NotAlternating { index });
            }
        }
        if !is_closed_walk(ring) {
            return Err(PartitionViolation::NotClosed { index });
        }
    }

    let mut in_rings: Vec<((u32, u32), Parent)> = rings
        .iter()
        .flat_map(|r| r.edges().iter().map(|e| (e.key(), e.parent)))
        .collect();
    let mut in_graph: Vec<((u32, u32), Parent)> =
        g.edges().iter().map(|e| (e.key(), e.parent)).collect();
    in_rings.sort_unstable();
    in_graph.sort_unstable();
    if in_rings != in_graph {
        // Report the first labeled edge whose multiplicities disagree.
        let count = |v: &[((u32, u32), Parent)], key: &((u32, u32), Parent)| {
            v.iter().filter(|e| *e == key).count()
        };
        let key = in_rings
            .iter()
            .chain(in_graph.iter())
            .find(|k| count(&in_rings, k) != count(&in_graph, k))
            .copied()
            .expect("unequal sorted multisets differ on some element");
        return Err(PartitionViolation::Coverage {
            u: key.0 .0,
            v: key.0 .1,
            parent: key.1,
            in_rings: count(&in_rings, &key),
            in_graph: count(&in_graph, &key),
        });
    }
    Ok(())
}

/// Whether the ring's edges chain end-to-end back to the start in at least
/// one of the two travel directions of the first edge.
fn is_closed_walk(ring: &MRing) -> bool {
    let edges = ring.edges();
    'dir: for start in [edges[0].u, edges[0].v] {
        let mut cur = start;
        for e in edges {
            if e.u == cur {
                cur = e.v;
            } else if e.v == cur {
                cur = e.u;
            } else {
                continue 'dir;
            }
        }
        if cur == start {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::EdgeWeightKind;

    fn ring(points: &[(f64, f64)]) -> Instance {
        Instance::new("ring", points.to_vec(), EdgeWeightKind::Euc2d).unwrap()
    }

    #[test]
    fn brute_force_finds_the_square_perimeter() {
        let inst = ring(&[(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]);
        let (len, tour) = brute_force_optimum(&inst).unwrap();
        assert_eq!(len, 40);
        assert_eq!(tour, Tour::new(vec![0, 1, 2, 3]));
        assert_eq!(tour.length(&inst), len);
    }

    #[test]
    fn brute_force_rejects_large_instances() {
        let coords: Vec<(f64, f64)> = (0..11).map(|i| (i as f64, 0.0)).collect();
        let inst = Instance::new("big", coords, EdgeWeightKind::Euc2d).unwrap();
        assert_eq!(brute_force_optimum(&inst), Err(OracleError::TooLarge { n: 11, max: 10 }));
    }

    #[test]
    fn held_karp_matches_brute_force() {
        use rand::Rng;
        use rand::SeedableRng;

        for seed in 0..10u64 {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let n = rng.random_range(5..=9);
            let coords: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(0.0..100.0), rng.random_range(0.0..100.0)))
                .collect();
            let inst = Instance::new("rand", coords, EdgeWeightKind::Euc2d).unwrap();
            let (bf, _) = brute_force_optimum(&inst).unwrap();
            assert_eq!(held_karp(&inst).unwrap(), bf, "seed {seed}");
        }
    }

    #[test]
    fn held_karp_on_a_known_cycle() {
        // Points on a circle: the optimum is the circular order.
        let coords: Vec<(f64, f64)> = (0..12)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 12.0;
                (100.0 * a.cos(), 100.0 * a.sin())
            })
            .collect();
        let inst = Instance::new("circle", coords, EdgeWeightKind::Euc2d).unwrap();
        let circular = Tour::new((0..12).collect());
        assert_eq!(held_karp(&inst).unwrap(), circular.length(&inst));
    }
}
