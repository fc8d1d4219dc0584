//! Greedy 2-opt restricted to neighbor-list candidates.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::instance::{Instance, NeighborLists};
use crate::tour::Tour;

/// Improves a tour with first-improvement 2-opt moves until no candidate
/// move helps.
///
/// For every city `a` and every candidate `c` in its neighbor list, the move
/// removes `(a, succ a)` and `(c, succ c)` (and likewise on the predecessor
/// side) and reconnects; a move is taken only when it strictly shortens the
/// tour, so the result never exceeds the input. Don't-look bits skip cities
/// whose neighborhood has not changed since they last failed to improve;
/// because a reversal can invalidate a sleeping city's bit, a full sweep
/// re-verifies every city before returning.
pub fn two_opt<R: Rng + ?Sized>(
    inst: &Instance,
    nbrs: &NeighborLists,
    tour: &Tour,
    rng: &mut R,
) -> Tour {
    let n = tour.n();
    debug_assert_eq!(n, inst.n());
    let order = tour.order().to_vec();
    let mut pos: Vec<u32> = vec![0; n];
    for (i, &city) in order.iter().enumerate() {
        pos[city as usize] = i as u32;
    }

    let mut scan: Vec<u32> = (0..n as u32).collect();
    scan.shuffle(rng);

    let mut state = Search {
        inst,
        nbrs,
        order,
        pos,
        dont_look: vec![false; n],
        active: n,
    };

    loop {
        while state.active > 0 {
            for &a in &scan {
                if !state.dont_look[a as usize] {
                    state.improve_from(a);
                    // Nothing is left at `a` right now; any later move that
                    // touches it clears the bit again.
                    state.dont_look[a as usize] = true;
                    state.active -= 1;
                }
            }
        }
        // The bits only track the four endpoints of each move, but a
        // reversal also swaps successor and predecessor for every city
        // inside the reversed span. Verify everything once; stop only on a
        // clean sweep.
        let mut applied_any = false;
        for &a in &scan {
            if state.improve_from(a) {
                applied_any = true;
            }
        }
        if !applied_any {
            break;
        }
    }
    Tour::new(state.order)
}

struct Search<'a> {
    inst: &'a Instance,
    nbrs: &'a NeighborLists,
    order: Vec<u32>,
    pos: Vec<u32>,
    dont_look: Vec<bool>,
    active: usize,
}

impl Search<'_> {
    fn w(&self, a: u32, b: u32) -> i64 {
        self.inst.distance(a as usize, b as usize)
    }

    /// Applies improving moves around `a` until none is left; reports
    /// whether any move was applied.
    fn improve_from(&mut self, a: u32) -> bool {
        let n = self.order.len();
        let mut applied = false;
        'retry: loop {
            let pa = self.pos[a as usize] as usize;
            let succ_a = self.order[(pa + 1) % n];
            let pred_a = self.order[(pa + n - 1) % n];
            for dir in 0..2 {
                // dir 0 pairs (a, succ a) with (c, succ c); dir 1 pairs the
                // predecessor edges.
                let b = if dir == 0 { succ_a } else { pred_a };
                let w_ab = self.w(a, b);
                for &c in self.nbrs.neighbors(a as usize) {
                    let pc = self.pos[c as usize] as usize;
                    let d = if dir == 0 {
                        self.order[(pc + 1) % n]
                    } else {
                        self.order[(pc + n - 1) % n]
                    };
                    let delta = w_ab + self.w(c, d) - self.w(a, c) - self.w(b, d);
                    if delta > 0 {
                        // Normalize to removing (x, succ x) and (y, succ y),
                        // then reverse the span after x.
                        let (x, y) = if dir == 0 { (a, c) } else { (b, d) };
                        self.apply_move(x, y);
                        for city in [a, b, c, d] {
                            if self.dont_look[city as usize] {
                                self.dont_look[city as usize] = false;
                                self.active += 1;
                            }
                        }
                        applied = true;
                        continue 'retry;
                    }
                }
            }
            return applied;
        }
    }

    /// Removes edges `(x, succ x)` and `(y, succ y)`, adding `(x, y)` and
    /// `(succ x, succ y)`, by reversing whichever of the two spans is
    /// shorter.
    fn apply_move(&mut self, x: u32, y: u32) {
        let n = self.order.len();
        let px = self.pos[x as usize] as usize;
        let py = self.pos[y as usize] as usize;
        let i = (px + 1) % n;
        let inner = (py + n - i) % n + 1;
        if inner * 2 <= n {
            self.reverse_segment(i, py);
        } else {
            // Reversing the complement span yields the same undirected tour.
            self.reverse_segment((py + 1) % n, px);
        }
    }

    fn reverse_segment(&mut self, mut i: usize, mut j: usize) {
        let n = self.order.len();
        let len = (j + n - i) % n + 1;
        for _ in 0..len / 2 {
            self.order.swap(i, j);
            self.pos[self.order[i] as usize] = i as u32;
            self.pos[self.order[j] as usize] = j as u32;
            i = if i + 1 == n { 0 } else { i + 1 };
            j = if j == 0 { n - 1 } else { j - 1 };
        }
    }
}
