//! The edge-swapping crossover: merged parent graphs, alternating rings,
//! ring selection strategies, and sub-loop reconnection.

use rand::seq::{index, IndexedRandom, SliceRandom};
use rand::Rng;
use thiserror::Error;

use crate::instance::{Instance, NeighborLists};
use crate::tour::Tour;

/// Which parent an edge in the merged graph came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parent {
    A,
    B,
}

impl Parent {
    pub fn other(self) -> Parent {
        match self {
            Parent::A => Parent::B,
            Parent::B => Parent::A,
        }
    }
}

/// An undirected edge tagged with its parent of origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct LabeledEdge {
    pub u: u32,
    pub v: u32,
    pub parent: Parent,
}

impl LabeledEdge {
    /// The endpoints as a `(low, high)` pair.
    pub fn key(&self) -> (u32, u32) {
        if self.u <= self.v {
            (self.u, self.v)
        } else {
            (self.v, self.u)
        }
    }

    fn other_end(&self, from: u32) -> u32 {
        if self.u == from {
            self.v
        } else {
            debug_assert_eq!(self.v, from);
            self.u
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrossoverError {
    #[error("parent tours disagree on city count: {pa} vs {pb}")]
    SizeMismatch { pa: usize, pb: usize },
}

/// The union multigraph of two parent tours over the same cities.
///
/// Every city has exactly two edges from each parent; an edge shared by both
/// tours appears twice, once per label.
#[derive(Debug, Clone)]
pub struct MergedGraph {
    n: usize,
    edges: Vec<LabeledEdge>,
    /// Ids of the four incident edges of each city.
    incident: Vec<[u32; 4]>,
}

impl MergedGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// All `2n` labeled edges; parent-A edges first.
    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    pub fn incident(&self, city: u32) -> [u32; 4] {
        self.incident[city as usize]
    }
}

/// Overlays the edges of both parents into one multigraph.
pub fn merge_graphs(pa: &Tour, pb: &Tour) -> Result<MergedGraph, CrossoverError> {
    if pa.n() != pb.n() {
        return Err(CrossoverError::SizeMismatch { pa: pa.n(), pb: pb.n() });
    }
    let n = pa.n();
    let mut edges = Vec::with_capacity(2 * n);
    for (tour, parent) in [(pa, Parent::A), (pb, Parent::B)] {
        let order = tour.order();
        for i in 0..n {
            edges.push(LabeledEdge { u: order[i], v: order[(i + 1) % n], parent });
        }
    }
    let mut incident = vec![[u32::MAX; 4]; n];
    let mut fill = vec![0u8; n];
    for (id, e) in edges.iter().enumerate() {
        for end in [e.u, e.v] {
            let slot = fill[end as usize];
            debug_assert!(slot < 4, "city {end} has more than four incident edges");
            incident[end as usize][slot as usize] = id as u32;
            fill[end as usize] = slot + 1;
        }
    }
    debug_assert!(fill.iter().all(|&f| f == 4));
    Ok(MergedGraph { n, edges, incident })
}

/// A closed walk in the merged graph whose edges alternate between the two
/// parents. Its size `m` counts edges per parent, so the walk has `2m` edges.
#[derive(Debug, Clone)]
pub struct MRing {
    edges: Vec<LabeledEdge>,
}

impl MRing {
    /// Edges in walk order, alternating labels.
    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges contributed by each parent.
    pub fn size(&self) -> usize {
        self.edges.len() / 2
    }

    /// A doubled edge: one edge per parent over the same endpoints.
    /// Swapping it cannot change anything.
    pub fn is_ineffective(&self) -> bool {
        self.edges.len() == 2
    }

    /// Carries more than four edges, so it is worth swapping on its own.
    pub fn is_effective(&self) -> bool {
        self.edges.len() > 4
    }

    /// Distinct cities the ring touches, ascending.
    pub fn distinct_vertices(&self) -> Vec<u32> {
        let mut vs: Vec<u32> = self.edges.iter().flat_map(|e| [e.u, e.v]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    /// Mean coordinate of the ring's distinct cities.
    pub fn centroid(&self, inst: &Instance) -> (f64, f64) {
        let vs = self.distinct_vertices();
        let mut cx = 0.0;
        let mut cy = 0.0;
        for &v in &vs {
            let (x, y) = inst.coords()[v as usize];
            cx += x;
            cy += y;
        }
        (cx / vs.len() as f64, cy / vs.len() as f64)
    }
}

/// Splits the merged graph into rings that alternate between parent labels.
///
/// Tracing starts at a random city, repeatedly leaves the current city by a
/// random unused edge with the required label, and closes a ring as soon as
/// the walk returns to an earlier visit of the current city at even edge
/// distance (keeping the labels alternating around the closed walk). The
/// closed suffix is cut off and tracing resumes from the cut point. Every
/// edge ends up in exactly one ring.
pub fn partition_m_rings<R: Rng + ?Sized>(g: &MergedGraph, rng: &mut R) -> Vec<MRing> {
    let n = g.n();
    let mut alive = vec![true; 2 * n];
    // Unused edges per city, split by label; both start at 2.
    let mut remaining = vec![[2u8; 2]; n];

    let mut start_order: Vec<u32> = (0..n as u32).collect();
    start_order.shuffle(rng);
    let mut start_ptr = 0;

    let mut rings = Vec::new();
    // Walk state: node 0 is `base`; entry i of `path` is the edge taken at
    // step i+1 and the vertex it reached.
    let mut base = 0u32;
    let mut path: Vec<(u32, u32)> = Vec::new();
    // Node indices at which each vertex currently appears on the walk.
    let mut visits: Vec<Vec<u32>> = vec![Vec::new(); n];

    let pick = |cur: u32,
                want: Option<Parent>,
                alive: &[bool],
                rng: &mut R|
     -> Option<u32> {
        let mut cand = [0u32; 4];
        let mut cnt = 0;
        for id in g.incident(cur) {
            if alive[id as usize] && want.is_none_or(|p| g.edges()[id as usize].parent == p) {
                cand[cnt] = id;
                cnt += 1;
            }
        }
        if cnt == 0 {
            None
        } else {
            Some(cand[rng.random_range(0..cnt)])
        }
    };

    loop {
        if path.is_empty() {
            // Fresh start from the next city that still has unused edges.
            while start_ptr < n {
                let v = start_order[start_ptr] as usize;
                if remaining[v][0] + remaining[v][1] > 0 {
                    break;
                }
                start_ptr += 1;
            }
            if start_ptr == n {
                break;
            }
            base = start_order[start_ptr];
            visits[base as usize].push(0);
        }
        let cur = if let Some(&(_, v)) = path.last() { v } else { base };
        let want = path
            .last()
            .map(|&(eid, _)| g.edges()[eid as usize].parent.other());
        let eid = pick(cur, want, &alive, rng)
            .expect("an alternating continuation always exists while edges remain");
        let e = g.edges()[eid as usize];
        alive[eid as usize] = false;
        remaining[e.u as usize][e.parent as usize] -= 1;
        remaining[e.v as usize][e.parent as usize] -= 1;
        let to = e.other_end(cur);
        path.push((eid, to));

        let here = path.len() as u32;
        // A ring closes when `to` was already on the walk an even number of
        // steps ago; earlier closures were cut immediately, so at most one
        // even-distance visit can exist.
        let closing = visits[to as usize]
            .iter()
            .copied()
            .find(|&at| (here - at).is_multiple_of(2));
        if let Some(at) = closing {
            let cut: Vec<(u32, u32)> = path.drain(at as usize..).collect();
            for &(_, v) in &cut {
                let stack = &mut visits[v as usize];
                let top = stack.pop();
                debug_assert!(top.is_some());
            }
            // The pops also dropped the visit the ring closed onto; restore
            // it unless the whole walk was consumed.
            if at > 0 {
                visits[to as usize].push(at);
            } else {
                debug_assert!(path.is_empty());
                debug_assert!(visits[base as usize].is_empty());
            }
            rings.push(MRing { edges: cut.iter().map(|&(eid, _)| g.edges()[eid as usize]).collect() });
        } else {
            visits[to as usize].push(here);
        }
    }

    rings
}

/// Indices of the rings chosen for one child, with their total size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RSet {
    pub rings: Vec<usize>,
    /// Sum of the chosen rings' per-parent sizes `m`.
    pub size: usize,
}

/// How rings are picked for each child.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// One effective ring per child, never reusing a ring across the
    /// children of one crossover call.
    Single,
    /// Every effective ring joins with probability 1/2; empty draws retry
    /// up to 20 times.
    Random,
    /// A fixed-size random subset of the effective rings.
    KMultiple(usize),
    /// A random seed ring plus its geometrically nearest effective rings,
    /// by centroid distance, up to the target count.
    Block(usize),
}

const RANDOM_RETRIES: usize = 20;

/// Draws ring subsets for successive children of one crossover call.
pub struct RingSelector {
    strategy: Strategy,
    used: Vec<bool>,
}

impl RingSelector {
    pub fn new(strategy: Strategy, ring_count: usize) -> Self {
        RingSelector { strategy, used: vec![false; ring_count] }
    }

    /// Picks the rings for the next child, or `None` when the strategy has
    /// nothing to offer (no effective rings, `Single` exhausted, or 20 empty
    /// `Random` draws).
    pub fn select<R: Rng + ?Sized>(
        &mut self,
        rings: &[MRing],
        centroids: &[(f64, f64)],
        rng: &mut R,
    ) -> Option<RSet> {
        debug_assert_eq!(rings.len(), self.used.len());
        let effective: Vec<usize> =
            (0..rings.len()).filter(|&i| rings[i].is_effective()).collect();
        if effective.is_empty() {
            return None;
        }
        let chosen: Vec<usize> = match self.strategy {
            Strategy::Single => {
                let unused: Vec<usize> =
                    effective.iter().copied().filter(|&i| !self.used[i]).collect();
                let &pick = unused.choose(rng)?;
                self.used[pick] = true;
                vec![pick]
            }
            Strategy::Random => {
                let mut drawn = Vec::new();
                for _ in 0..RANDOM_RETRIES {
                    drawn = effective
                        .iter()
                        .copied()
                        .filter(|_| rng.random_bool(0.5))
                        .collect();
                    if !drawn.is_empty() {
                        break;
                    }
                }
                if drawn.is_empty() {
                    return None;
                }
                drawn
            }
            Strategy::KMultiple(k) => {
                let take = k.min(effective.len());
                let mut picks: Vec<usize> = index::sample(rng, effective.len(), take)
                    .iter()
                    .map(|i| effective[i])
                    .collect();
                picks.sort_unstable();
                picks
            }
            Strategy::Block(target) => {
                let &seed = effective.choose(rng).expect("effective is non-empty");
                let (sx, sy) = centroids[seed];
                let mut rest: Vec<usize> =
                    effective.iter().copied().filter(|&i| i != seed).collect();
                // Order by centroid distance to the seed; ties fall back to
                // ring index for determinism.
                rest.sort_by(|&i, &j| {
                    let di = dist2(centroids[i], (sx, sy));
                    let dj = dist2(centroids[j], (sx, sy));
                    di.partial_cmp(&dj).unwrap().then(i.cmp(&j))
                });
                let mut picks = vec![seed];
                picks.extend(rest.into_iter().take(target.saturating_sub(1)));
                picks.sort_unstable();
                picks
            }
        };
        let size = chosen.iter().map(|&i| rings[i].size()).sum();
        Some(RSet { rings: chosen, size })
    }
}

fn dist2(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    dx * dx + dy * dy
}

/// One-shot selection; [`RingSelector`] keeps state across children.
pub fn select_rset<R: Rng + ?Sized>(
    rings: &[MRing],
    centroids: &[(f64, f64)],
    strategy: Strategy,
    rng: &mut R,
) -> Option<RSet> {
    RingSelector::new(strategy, rings.len()).select(rings, centroids, rng)
}

/// Parent A with the selected rings' A-edges swapped for their B-edges:
/// a degree-2 multigraph that may have fallen apart into several loops.
#[derive(Debug, Clone)]
pub struct IntermediateSolution {
    /// Two neighbors per city; a doubled edge lists the same city twice.
    adjacency: Vec<[u32; 2]>,
    /// Cities of each loop in walk order, ordered by smallest member city.
    loops: Vec<Vec<u32>>,
}

impl IntermediateSolution {
    pub fn adjacency(&self) -> &[[u32; 2]] {
        &self.adjacency
    }

    pub fn loops(&self) -> &[Vec<u32>] {
        &self.loops
    }

    pub fn loop_count(&self) -> usize {
        self.loops.len()
    }

    /// Total weight of all loop edges.
    pub fn total_length(&self, inst: &Instance) -> i64 {
        let mut sum = 0;
        for (c, row) in self.adjacency.iter().enumerate() {
            for &o in row {
                sum += inst.distance(c, o as usize);
            }
        }
        // Each edge was counted from both endpoints.
        sum / 2
    }

    /// Multiset of the solution's edges as `(low, high)` pairs, sorted.
    /// Doubled edges contribute two entries.
    pub fn edge_multiset(&self) -> Vec<(u32, u32)> {
        let mut multiset = Vec::with_capacity(self.adjacency.len());
        for (c, row) in self.adjacency.iter().enumerate() {
            for &o in row {
                // Each edge is collected at its low endpoint only; a doubled
                // edge sits in both of that endpoint's slots.
                if (c as u32) <= o {
                    multiset.push((c as u32, o));
                }
            }
        }
        multiset.sort_unstable();
        multiset
    }
}

/// Swaps the R-set into parent A: removes the chosen rings' A-edges, adds
/// their B-edges, and records the loops of the resulting structure.
pub fn apply_rset(pa: &Tour, rings: &[MRing], rset: &RSet) -> IntermediateSolution {
    let n = pa.n();
    // Adjacency with explicit fill counts so removals and additions stay
    // balanced even around doubled edges.
    let mut adj = pa.adjacency();
    let mut fill = vec![2u8; n];

    let remove = |adj: &mut Vec<[u32; 2]>, fill: &mut Vec<u8>, u: u32, v: u32| {
        let row = &mut adj[u as usize];
        let len = fill[u as usize] as usize;
        let slot = (0..len)
            .find(|&s| row[s] == v)
            .expect("removed edge must be present");
        row[slot] = row[len - 1];
        fill[u as usize] -= 1;
    };
    let add = |adj: &mut Vec<[u32; 2]>, fill: &mut Vec<u8>, u: u32, v: u32| {
        let len = fill[u as usize] as usize;
        assert!(len < 2, "city {u} would exceed degree 2");
        adj[u as usize][len] = v;
        fill[u as usize] += 1;
    };

    for &ri in &rset.rings {
        for e in rings[ri].edges() {
            if e.parent == Parent::A {
                remove(&mut adj, &mut fill, e.u, e.v);
                remove(&mut adj, &mut fill, e.v, e.u);
            }
        }
    }
    for &ri in &rset.rings {
        for e in rings[ri].edges() {
            if e.parent == Parent::B {
                add(&mut adj, &mut fill, e.u, e.v);
                add(&mut adj, &mut fill, e.v, e.u);
            }
        }
    }
    debug_assert!(fill.iter().all(|&f| f == 2));

    // Walk out the loops. Slots are consumed individually so doubled edges
    // (two-city loops) walk correctly.
    let mut slot_used = vec![[false; 2]; n];
    let mut in_loop = vec![false; n];
    let mut loops = Vec::new();
    for start in 0..n as u32 {
        if in_loop[start as usize] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut cur = start;
        let mut back_slot = usize::MAX;
        loop {
            cycle.push(cur);
            in_loop[cur as usize] = true;
            let row = adj[cur as usize];
            let next_slot = (0..2)
                .find(|&s| s != back_slot && !slot_used[cur as usize][s])
                .expect("degree-2 walk cannot dead-end");
            slot_used[cur as usize][next_slot] = true;
            let nxt = row[next_slot];
            // Mark the matching inbound slot at the far end.
            let nxt_row = adj[nxt as usize];
            back_slot = (0..2)
                .find(|&s| nxt_row[s] == cur && !slot_used[nxt as usize][s])
                .expect("adjacency must be symmetric");
            slot_used[nxt as usize][back_slot] = true;
            if nxt == start {
                break;
            }
            cur = nxt;
        }
        loops.push(cycle);
    }

    IntermediateSolution { adjacency: adj, loops }
}

/// Reconnects an intermediate solution into a single tour by repeatedly
/// merging the smallest loop into another loop with the cheapest 2-edge
/// exchange over neighbor-list candidates.
pub fn merge_subloops(
    inst: &Instance,
    nbrs: &NeighborLists,
    im: &IntermediateSolution,
) -> Tour {
    let n = inst.n();
    let mut adj: Vec<[u32; 2]> = im.adjacency().to_vec();
    let mut loop_of = vec![0u32; n];
    // Loop membership lists; merged loops keep the surviving id.
    let mut members: Vec<Vec<u32>> = im.loops().to_vec();
    let mut alive: Vec<bool> = vec![true; members.len()];
    for (li, cities) in members.iter().enumerate() {
        for &c in cities {
            loop_of[c as usize] = li as u32;
        }
    }
    let mut alive_count = members.len();

    let w = |a: u32, b: u32| inst.distance(a as usize, b as usize);

    while alive_count > 1 {
        let small = (0..members.len())
            .filter(|&i| alive[i])
            .min_by_key(|&i| (members[i].len(), i))
            .expect("at least two loops alive");

        // Candidate exchange: remove (a,b) from the small loop and (c,d)
        // from another loop, reconnect either straight or crossed.
        let mut best: Option<(i64, u32, u32, u32, u32, bool)> = None;
        let consider = |a: u32, b: u32, c: u32, d: u32, best: &mut Option<(i64, u32, u32, u32, u32, bool)>| {
            let removed = w(a, b) + w(c, d);
            let straight = w(a, c) + w(b, d) - removed;
            let crossed = w(a, d) + w(b, c) - removed;
            let (delta, cross) = if straight <= crossed { (straight, false) } else { (crossed, true) };
            if best.as_ref().is_none_or(|&(bd, ..)| delta < bd) {
                *best = Some((delta, a, b, c, d, cross));
            }
        };

        for &a in &members[small] {
            for b in adj[a as usize] {
                for &c in nbrs.neighbors(a as usize) {
                    if loop_of[c as usize] == loop_of[a as usize] {
                        continue;
                    }
                    for d in adj[c as usize] {
                        consider(a, b, c, d, &mut best);
                    }
                }
            }
        }
        if best.is_none() {
            // No neighbor-list candidate leaves the loop; scan everything.
            for &a in &members[small] {
                for b in adj[a as usize] {
                    for c in 0..n as u32 {
                        if loop_of[c as usize] == loop_of[a as usize] {
                            continue;
                        }
                        for d in adj[c as usize] {
                            consider(a, b, c, d, &mut best);
                        }
                    }
                }
            }
        }
        let (_, a, b, c, d, cross) = best.expect("another loop always offers an exchange");

        let rewire = |adj: &mut Vec<[u32; 2]>, at: u32, from: u32, to: u32| {
            let row = &mut adj[at as usize];
            let slot = (0..2).find(|&s| row[s] == from).expect("edge endpoint must match");
            row[slot] = to;
        };
        if cross {
            rewire(&mut adj, a, b, d);
            rewire(&mut adj, d, c, a);
            rewire(&mut adj, b, a, c);
            rewire(&mut adj, c, d, b);
        } else {
            rewire(&mut adj, a, b, c);
            rewire(&mut adj, c, d, a);
            rewire(&mut adj, b, a, d);
            rewire(&mut adj, d, c, b);
        }

        // Fold the smaller membership list into the larger one.
        let other = loop_of[c as usize] as usize;
        let (keep, fold) = if members[small].len() >= members[other].len() {
            (small, other)
        } else {
            (other, small)
        };
        let folded = std::mem::take(&mut members[fold]);
        for &city in &folded {
            loop_of[city as usize] = keep as u32;
        }
        members[keep].extend(folded);
        alive[fold] = false;
        alive_count -= 1;
    }

    // Read off the single remaining cycle.
    let mut order = Vec::with_capacity(n);
    let mut prev = u32::MAX;
    let mut cur = 0u32;
    loop {
        order.push(cur);
        let row = adj[cur as usize];
        let nxt = if row[0] != prev { row[0] } else { row[1] };
        prev = cur;
        cur = nxt;
        if cur == 0 {
            break;
        }
    }
    debug_assert_eq!(order.len(), n, "reconnection must reach every city");
    Tour::new(order)
}

/// Produces up to `n_ch` children from one parent pair.
///
/// The merged graph is partitioned into rings once; each child draws its own
/// ring subset, swaps it into parent A, and reconnects the loops. Parents
/// whose merged graph has no effective ring yield no children.
pub fn es_crossover<R: Rng + ?Sized>(
    inst: &Instance,
    nbrs: &NeighborLists,
    pa: &Tour,
    pb: &Tour,
    strategy: Strategy,
    n_ch: usize,
    rng: &mut R,
) -> Result<Vec<Tour>, CrossoverError> {
    let g = merge_graphs(pa, pb)?;
    let rings = partition_m_rings(&g, rng);
    if !rings.iter().any(|r| r.is_effective()) {
        return Ok(Vec::new());
    }
    let centroids: Vec<(f64, f64)> = rings.iter().map(|r| r.centroid(inst)).collect();
    let mut selector = RingSelector::new(strategy, rings.len());
    let mut children = Vec::with_capacity(n_ch);
    for _ in 0..n_ch {
        match selector.select(&rings, &centroids, rng) {
            Some(rset) => {
                let intermediate = apply_rset(pa, &rings, &rset);
                children.push(merge_subloops(inst, nbrs, &intermediate));
            }
            // Single has run out of rings for good; Random may still hit on
            // a later child's draws.
            None if strategy == Strategy::Single => break,
            None => continue,
        }
    }
    Ok(children)
}
