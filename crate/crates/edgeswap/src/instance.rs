//! TSPLIB instances: parsing, integer distances, and neighbor lists.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Supported TSPLIB `EDGE_WEIGHT_TYPE` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeWeightKind {
    /// Euclidean distance rounded to the nearest integer (halves round up).
    Euc2d,
    /// Euclidean distance rounded up.
    Ceil2d,
}

impl std::fmt::Display for EdgeWeightKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdgeWeightKind::Euc2d => "EUC_2D",
            EdgeWeightKind::Ceil2d => "CEIL_2D",
        })
    }
}

/// A symmetric TSP instance over 2-D points with integer edge weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    coords: Vec<(f64, f64)>,
    kind: EdgeWeightKind,
}

#[derive(Debug, Error, PartialEq)]
pub enum TsplibError {
    #[error("line {line}: cannot parse header entry `{entry}`")]
    MalformedHeader { line: usize, entry: String },
    #[error("line {line}: unsupported TYPE `{found}`, only TSP is handled")]
    UnsupportedType { line: usize, found: String },
    #[error("line {line}: unsupported EDGE_WEIGHT_TYPE `{found}`, only EUC_2D and CEIL_2D are handled")]
    UnsupportedWeightType { line: usize, found: String },
    #[error("missing {0} header")]
    MissingHeader(&'static str),
    #[error("missing NODE_COORD_SECTION")]
    MissingCoordSection,
    #[error("line {line}: bad coordinate line: {msg}")]
    BadCoord { line: usize, msg: String },
    #[error("DIMENSION is {dimension} but the file has {found} coordinate lines")]
    DimensionMismatch { dimension: usize, found: usize },
    #[error("need at least 3 cities, got {0}")]
    TooFewCities(usize),
    #[error("line {line}: unexpected content `{content}` after coordinates")]
    TrailingContent { line: usize, content: String },
}

impl Instance {
    /// Builds an instance directly from coordinates.
    pub fn new(
        name: impl Into<String>,
        coords: Vec<(f64, f64)>,
        kind: EdgeWeightKind,
    ) -> Result<Self, TsplibError> {
        if coords.len() < 3 {
            return Err(TsplibError::TooFewCities(coords.len()));
        }
        Ok(Instance { name: name.into(), coords, kind })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn coords(&self) -> &[(f64, f64)] {
        &self.coords
    }

    pub fn kind(&self) -> EdgeWeightKind {
        self.kind
    }

    /// Number of cities.
    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// Integer edge weight between two distinct cities.
    pub fn distance(&self, i: usize, j: usize) -> i64 {
        debug_assert_ne!(i, j, "distance is only defined between distinct cities");
        let (xi, yi) = self.coords[i];
        let (xj, yj) = self.coords[j];
        let dx = xi - xj;
        let dy = yi - yj;
        let d = (dx * dx + dy * dy).sqrt();
        match self.kind {
            EdgeWeightKind::Euc2d => (d + 0.5).floor() as i64,
            EdgeWeightKind::Ceil2d => d.ceil() as i64,
        }
    }
}

/// Parses the subset of TSPLIB used here: `TYPE: TSP` files with a
/// `NODE_COORD_SECTION` and `EUC_2D` or `CEIL_2D` weights.
pub fn parse_tsplib(text: &str) -> Result<Instance, TsplibError> {
    let mut name: Option<String> = None;
    let mut dimension: Option<usize> = None;
    let mut kind: Option<EdgeWeightKind> = None;

    let mut lines = text.lines().enumerate();
    let mut in_coords = false;
    for (idx, raw) in &mut lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "NODE_COORD_SECTION" {
            in_coords = true;
            break;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(TsplibError::MalformedHeader { line: line_no, entry: line.to_string() });
        };
        let value = value.trim();
        match key.trim() {
            "NAME" => name = Some(value.to_string()),
            "TYPE" => {
                // Some files append an attribution after the type keyword.
                if value != "TSP" && !value.starts_with("TSP ") {
                    return Err(TsplibError::UnsupportedType {
                        line: line_no,
                        found: value.to_string(),
                    });
                }
            }
            "DIMENSION" => {
                let dim = value.parse::<usize>().map_err(|_| TsplibError::MalformedHeader {
                    line: line_no,
                    entry: line.to_string(),
                })?;
                dimension = Some(dim);
            }
            "EDGE_WEIGHT_TYPE" => {
                kind = Some(match value {
                    "EUC_2D" => EdgeWeightKind::Euc2d,
                    "CEIL_2D" => EdgeWeightKind::Ceil2d,
                    other => {
                        return Err(TsplibError::UnsupportedWeightType {
                            line: line_no,
                            found: other.to_string(),
                        })
                    }
                });
            }
            // COMMENT and any other metadata headers carry no semantics here.
            _ => {}
        }
    }
    if !in_coords {
        return Err(TsplibError::MissingCoordSection);
    }
    let dimension = dimension.ok_or(TsplibError::MissingHeader("DIMENSION"))?;
    let kind = kind.ok_or(TsplibError::MissingHeader("EDGE_WEIGHT_TYPE"))?;

    let mut coords = Vec::with_capacity(dimension);
    let mut trailing: Option<(usize, String)> = None;
    for (idx, raw) in &mut lines {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "EOF" {
            break;
        }
        if coords.len() == dimension {
            trailing = Some((line_no, line.to_string()));
            break;
        }
        let mut parts = line.split_whitespace();
        let index_tok = parts.next().unwrap();
        let x_tok = parts.next();
        let y_tok = parts.next();
        let (Some(x_tok), Some(y_tok), None) = (x_tok, y_tok, parts.next()) else {
            return Err(TsplibError::BadCoord {
                line: line_no,
                msg: format!("expected `index x y`, got `{line}`"),
            });
        };
        if index_tok.parse::<usize>().is_err() {
            return Err(TsplibError::BadCoord {
                line: line_no,
                msg: format!("city index `{index_tok}` is not an integer"),
            });
        }
        let parse_coord = |tok: &str| -> Result<f64, TsplibError> {
            let v = tok.parse::<f64>().map_err(|_| TsplibError::BadCoord {
                line: line_no,
                msg: format!("coordinate `{tok}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(TsplibError::BadCoord {
                    line: line_no,
                    msg: format!("coordinate `{tok}` is not finite"),
                });
            }
            Ok(v)
        };
        coords.push((parse_coord(x_tok)?, parse_coord(y_tok)?));
    }
    if let Some((line, content)) = trailing {
        return Err(TsplibError::TrailingContent { line, content });
    }
    if coords.len() != dimension {
        return Err(TsplibError::DimensionMismatch { dimension, found: coords.len() });
    }

    Instance::new(name.unwrap_or_else(|| "unnamed".to_string()), coords, kind)
}

/// Writes an instance back out in TSPLIB form; `parse_tsplib` round-trips it.
pub fn write_tsplib(inst: &Instance) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    writeln!(out, "NAME : {}", inst.name()).unwrap();
    writeln!(out, "TYPE : TSP").unwrap();
    writeln!(out, "DIMENSION : {}", inst.n()).unwrap();
    writeln!(out, "EDGE_WEIGHT_TYPE : {}", inst.kind()).unwrap();
    writeln!(out, "NODE_COORD_SECTION").unwrap();
    for (i, (x, y)) in inst.coords().iter().enumerate() {
        writeln!(out, "{} {} {}", i + 1, x, y).unwrap();
    }
    writeln!(out, "EOF").unwrap();
    out
}

/// For each city, its nearest other cities in ascending weight order.
///
/// Ties break toward the lower city index, so construction is deterministic.
#[derive(Debug, Clone)]
pub struct NeighborLists {
    k: usize,
    flat: Vec<u32>,
}

impl NeighborLists {
    /// Effective list length: `min(requested k, n - 1)`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// The `k` nearest cities of `city`, nearest first.
    pub fn neighbors(&self, city: usize) -> &[u32] {
        &self.flat[city * self.k..(city + 1) * self.k]
    }
}

/// Builds k-nearest-neighbor lists by scanning all pairs.
pub fn build_neighbor_lists(inst: &Instance, k: usize) -> NeighborLists {
    let n = inst.n();
    let keff = k.min(n - 1);
    let mut flat = Vec::with_capacity(n * keff);
    let mut buf: Vec<(i64, u32)> = Vec::with_capacity(n - 1);
    for i in 0..n {
        buf.clear();
        for j in 0..n {
            if j != i {
                buf.push((inst.distance(i, j), j as u32));
            }
        }
        if keff < buf.len() {
            buf.select_nth_unstable(keff - 1);
        }
        buf[..keff].sort_unstable();
        flat.extend(buf[..keff].iter().map(|&(_, j)| j));
    }
    NeighborLists { k: keff, flat }
}
