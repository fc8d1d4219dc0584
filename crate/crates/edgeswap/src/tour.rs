//! Tours as city permutations, undirected edge sets, and `.tour` files.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::instance::Instance;

/// A Hamiltonian cycle given as a visiting order; the last city links back
/// to the first.
///
/// Equality ignores rotation and direction: two tours are equal exactly when
/// they use the same undirected edges.
#[derive(Debug, Clone, Eq)]
pub struct Tour {
    order: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TourViolation {
    #[error("expected {expected} cities, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("city {city} is out of range for {n} cities")]
    OutOfRange { city: u32, n: usize },
    #[error("city {0} appears more than once")]
    DuplicateCity(u32),
    #[error("city {0} never appears")]
    MissingCity(u32),
}

impl Tour {
    pub fn new(order: Vec<u32>) -> Self {
        Tour { order }
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Checks that the order is a permutation of `0..n`.
    pub fn validate(&self, n: usize) -> Result<(), TourViolation> {
        if self.order.len() != n {
            return Err(TourViolation::WrongLength { expected: n, found: self.order.len() });
        }
        let mut seen = vec![false; n];
        for &city in &self.order {
            let c = city as usize;
            if c >= n {
                return Err(TourViolation::OutOfRange { city, n });
            }
            if seen[c] {
                return Err(TourViolation::DuplicateCity(city));
            }
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(TourViolation::MissingCity(missing as u32));
        }
        Ok(())
    }

    /// Total integer length including the closing edge.
    pub fn length(&self, inst: &Instance) -> i64 {
        let n = self.order.len();
        let mut total = 0;
        for i in 0..n {
            let a = self.order[i] as usize;
            let b = self.order[(i + 1) % n] as usize;
            total += inst.distance(a, b);
        }
        total
    }

    /// The tour's undirected edges.
    pub fn edges(&self) -> EdgeSet {
        let n = self.order.len();
        let mut edges = BTreeSet::new();
        for i in 0..n {
            edges.insert(ordered(self.order[i], self.order[(i + 1) % n]));
        }
        EdgeSet { edges }
    }

    /// `pos[city] = index of city in the order`; inverse of the permutation.
    pub fn positions(&self) -> Vec<u32> {
        let mut pos = vec![0u32; self.order.len()];
        for (i, &city) in self.order.iter().enumerate() {
            pos[city as usize] = i as u32;
        }
        pos
    }

    /// Both cyclic neighbors of each city, as an n-row adjacency table.
    pub fn adjacency(&self) -> Vec<[u32; 2]> {
        let n = self.order.len();
        let mut adj = vec![[0u32; 2]; n];
        for i in 0..n {
            let prev = self.order[(i + n - 1) % n];
            let next = self.order[(i + 1) % n];
            adj[self.order[i] as usize] = [prev, next];
        }
        adj
    }
}

impl PartialEq for Tour {
    fn eq(&self, other: &Self) -> bool {
        if self.order.len() != other.order.len() {
            return false;
        }
        let mut a = self.adjacency();
        let mut b = other.adjacency();
        for row in a.iter_mut().chain(b.iter_mut()) {
            row.sort_unstable();
        }
        a == b
    }
}

fn ordered(u: u32, v: u32) -> (u32, u32) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A set of undirected edges over city indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EdgeSet {
    edges: BTreeSet<(u32, u32)>,
}

impl EdgeSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, u: u32, v: u32) -> bool {
        self.edges.contains(&ordered(u, v))
    }

    pub fn insert(&mut self, u: u32, v: u32) -> bool {
        self.edges.insert(ordered(u, v))
    }

    /// Edges as `(low, high)` pairs in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    /// Number of edges in exactly one of the two sets.
    pub fn symmetric_difference_len(&self, other: &EdgeSet) -> usize {
        self.edges.symmetric_difference(&other.edges).count()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TourFileError {
    #[error("missing TOUR_SECTION")]
    MissingSection,
    #[error("line {line}: bad tour entry `{entry}`")]
    BadEntry { line: usize, entry: String },
    #[error("DIMENSION is {dimension} but the tour lists {found} cities")]
    DimensionMismatch { dimension: usize, found: usize },
    #[error("tour file lists no cities")]
    Empty,
}

/// Parses a TSPLIB `.tour` file. City numbers are 1-based in the file and
/// 0-based in the returned [`Tour`].
pub fn parse_tour_file(text: &str) -> Result<Tour, TourFileError> {
    let mut dimension: Option<usize> = None;
    let mut lines = text.lines().enumerate();
    let mut in_tour = false;
    for (_, raw) in &mut lines {
        let line = raw.trim();
        if line == "TOUR_SECTION" {
            in_tour = true;
            break;
        }
        if let Some((key, value)) = line.split_once(':') {
            if key.trim() == "DIMENSION" {
                dimension = value.trim().parse::<usize>().ok();
            }
        }
    }
    if !in_tour {
        return Err(TourFileError::MissingSection);
    }

    let mut order = Vec::new();
    'outer: for (idx, raw) in &mut lines {
        let line_no = idx + 1;
        for tok in raw.split_whitespace() {
            if tok == "-1" || tok == "EOF" {
                break 'outer;
            }
            let city = tok.parse::<i64>().map_err(|_| TourFileError::BadEntry {
                line: line_no,
                entry: tok.to_string(),
            })?;
            if city < 1 || city > u32::MAX as i64 {
                return Err(TourFileError::BadEntry { line: line_no, entry: tok.to_string() });
            }
            order.push((city - 1) as u32);
        }
    }
    if order.is_empty() {
        return Err(TourFileError::Empty);
    }
    if let Some(dim) = dimension {
        if dim != order.len() {
            return Err(TourFileError::DimensionMismatch { dimension: dim, found: order.len() });
        }
    }
    Ok(Tour::new(order))
}

/// Writes a TSPLIB `.tour` file with 1-based city numbers.
pub fn write_tour_file(name: &str, tour: &Tour) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    writeln!(out, "NAME : {name}").unwrap();
    writeln!(out, "TYPE : TOUR").unwrap();
    writeln!(out, "DIMENSION : {}", tour.n()).unwrap();
    writeln!(out, "TOUR_SECTION").unwrap();
    for &city in tour.order() {
        writeln!(out, "{}", city + 1).unwrap();
    }
    writeln!(out, "-1").unwrap();
    writeln!(out, "EOF").unwrap();
    out
}
