//! Triangulation families and small two-terminal networks.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::seed;
use crate::network::{GraphFile, TwoTerminalGraph};
use crate::percolation::{BoundaryArcs, CrossingDomain};
use crate::triangulation::{Triangulation, TriangulationError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    TriangularLatticeDisk,
    #[serde(rename = "d-regular-hyperbolic")]
    RegularHyperbolic,
    MixedDegree,
    TriangularRhombus,
    Ladder,
    ParallelPaths,
    GridWithPoles,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::TriangularLatticeDisk,
        Family::RegularHyperbolic,
        Family::MixedDegree,
        Family::TriangularRhombus,
        Family::Ladder,
        Family::ParallelPaths,
        Family::GridWithPoles,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::TriangularLatticeDisk => "triangular-lattice-disk",
            Family::RegularHyperbolic => "d-regular-hyperbolic",
            Family::MixedDegree => "mixed-degree",
            Family::TriangularRhombus => "triangular-rhombus",
            Family::Ladder => "ladder",
            Family::ParallelPaths => "parallel-paths",
            Family::GridWithPoles => "grid-with-poles",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| GeneratorError::Range(format!("unknown family `{s}`")))
    }
}

/// Parameters of a generated graph.
///
/// `size` is the radius for disk families, the side for rhombi, the path
/// length for ladders and parallel paths, and the row count of a grid.
/// `degree` is the interior degree of the hyperbolic family, the defect
/// degree of the mixed family and the number of parallel paths; `width` is
/// the column count of a grid (defaults to `size`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub family: Family,
    pub size: usize,
    #[serde(default = "default_degree")]
    pub degree: usize,
    #[serde(default)]
    pub width: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_degree() -> usize {
    7
}

impl GeneratorSpec {
    pub fn new(family: Family, size: usize) -> Self {
        Self {
            family,
            size,
            degree: default_degree(),
            width: None,
            seed: 0,
        }
    }

    pub fn generate(&self) -> Result<GraphFile, GeneratorError> {
        Ok(match self.family {
            Family::TriangularLatticeDisk => GraphFile::Triangulation(triangular_lattice_disk(self.size)?),
            Family::RegularHyperbolic => {
                GraphFile::Triangulation(regular_hyperbolic_triangulation(self.degree, self.size)?)
            }
            Family::MixedDegree => {
                GraphFile::Triangulation(mixed_degree_triangulation(self.size, self.degree, self.seed)?)
            }
            Family::TriangularRhombus => GraphFile::Triangulation(triangular_rhombus(self.size)?.triangulation),
            Family::Ladder => GraphFile::TwoTerminal(ladder_graph(self.size)?),
            Family::ParallelPaths => GraphFile::TwoTerminal(parallel_paths(self.degree, self.size)?),
            Family::GridWithPoles => {
                GraphFile::TwoTerminal(grid_with_poles(self.size, self.width.unwrap_or(self.size))?)
            }
        })
    }

    /// Crossing domain for the triangulation families: the rhombus with its
    /// four sides, or a disk with its boundary cut in quarters.
    pub fn crossing_domain(&self) -> Result<CrossingDomain, GeneratorError> {
        match self.family {
            Family::TriangularRhombus => triangular_rhombus(self.size),
            Family::Ladder | Family::ParallelPaths | Family::GridWithPoles => Err(GeneratorError::Range(
                format!("{} is not a triangulation family", self.family),
            )),
            _ => match self.generate()? {
                GraphFile::Triangulation(t) => {
                    let arcs = BoundaryArcs::quarters(t.boundary().len())
                        .map_err(|e| GeneratorError::Range(e.to_string()))?;
                    Ok(CrossingDomain {
                        triangulation: t,
                        arcs,
                        center: 0,
                    })
                }
                GraphFile::TwoTerminal(_) => unreachable!("triangulation families"),
            },
        }
    }
}

fn hex_distance(q: i64, s: i64) -> i64 {
    (q.abs() + s.abs() + (q + s).abs()) / 2
}

fn axial_triangles<F: Fn(i64, i64) -> Option<usize>>(coords: &[(i64, i64)], id: F) -> Vec<[usize; 3]> {
    let mut tris = Vec::new();
    for &(q, s) in coords {
        let a = id(q, s).expect("member");
        if let (Some(b), Some(c)) = (id(q + 1, s), id(q, s + 1)) {
            tris.push([a, b, c]);
        }
        if let (Some(b), Some(c)) = (id(q, s + 1), id(q - 1, s + 1)) {
            tris.push([a, b, c]);
        }
    }
    tris
}

/// Hexagonal ball of radius `r` in the triangular lattice, center = vertex 0.
pub fn triangular_lattice_disk(r: usize) -> Result<Triangulation, GeneratorError> {
    if r < 1 {
        return Err(GeneratorError::Range("lattice radius must be at least 1".into()));
    }
    let ri = r as i64;
    let mut coords = Vec::new();
    for q in -ri..=ri {
        for s in -ri..=ri {
            if hex_distance(q, s) <= ri {
                coords.push((q, s));
            }
        }
    }
    let angle = |&(q, s): &(i64, i64)| {
        let (x, y) = (q as f64 + s as f64 / 2.0, s as f64 * 3f64.sqrt() / 2.0);
        y.atan2(x)
    };
    coords.sort_by(|a, b| {
        hex_distance(a.0, a.1)
            .cmp(&hex_distance(b.0, b.1))
            .then(angle(a).total_cmp(&angle(b)))
    });
    let index: std::collections::HashMap<(i64, i64), usize> =
        coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let tris = axial_triangles(&coords, |q, s| index.get(&(q, s)).copied());
    Ok(Triangulation::from_triangles(coords.len(), &tris)?)
}

/// `n x n` rhombus of the triangular lattice (the Hex board). Vertex
/// `(q, s)` has id `s * n + q`; the left side is `q = 0`, the right side
/// `q = n - 1`.
pub fn triangular_rhombus(n: usize) -> Result<CrossingDomain, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::Range("rhombus side must be at least 2".into()));
    }
    let ni = n as i64;
    let coords: Vec<(i64, i64)> = (0..ni).flat_map(|s| (0..ni).map(move |q| (q, s))).collect();
    let id = |q: i64, s: i64| {
        ((0..ni).contains(&q) && (0..ni).contains(&s)).then(|| (s * ni + q) as usize)
    };
    let tris = axial_triangles(&coords, id);
    let t = Triangulation::from_triangles(n * n, &tris)?;
    let pos = |v: usize| t.boundary().iter().position(|&b| b == v).expect("corner on boundary");
    // Counterclockwise: bottom row left to right, right side up, top row
    // right to left, left side down.
    let top_left = pos(n * (n - 1));
    let bottom_left = pos(0);
    let bottom_right = pos(n - 1);
    let top_right = pos(n * n - 1);
    let len = t.boundary().len();
    let arcs = BoundaryArcs::new(
        [top_left, (bottom_left + 1) % len, bottom_right, (top_right + 1) % len],
        len,
    )
    .map_err(|e| GeneratorError::Range(e.to_string()))?;
    let c = n / 2;
    Ok(CrossingDomain {
        triangulation: t,
        arcs,
        center: c * n + c,
    })
}

/// Triangulation built layer by layer around vertex 0, where each vertex on
/// layer `k < r` receives just enough children on layer `k + 1` to reach its
/// target degree. Consecutive vertices of a layer share one child.
///
/// `target(v, k)` gives the degree of vertex `v` on layer `k`; it must be at
/// least 6 so every vertex has two or more children.
pub fn layered_triangulation<F>(r: usize, mut target: F) -> Result<Triangulation, GeneratorError>
where
    F: FnMut(usize, usize) -> usize,
{
    if r < 1 {
        return Err(GeneratorError::Range("radius must be at least 1".into()));
    }
    let d0 = target(0, 0);
    if d0 < 3 {
        return Err(GeneratorError::Range(format!("center degree {d0} < 3")));
    }
    let mut tris = Vec::new();
    let mut layer: Vec<usize> = (1..=d0).collect();
    let mut parents = vec![0usize; d0 + 1];
    for i in 0..d0 {
        tris.push([0, layer[i], layer[(i + 1) % d0]]);
        parents[layer[i]] = 1;
    }
    let mut next_id = d0 + 1;
    for k in 1..r {
        let len = layer.len();
        let first = next_id;
        next_id += 1;
        parents.push(0);
        let mut next_layer = vec![first];
        let mut prev_last = first;
        for i in 0..len {
            let v = layer[i];
            let want = target(v, k);
            let children = want
                .checked_sub(2 + parents[v])
                .filter(|&c| c >= 2)
                .ok_or_else(|| {
                    GeneratorError::Range(format!("target degree {want} too small at vertex {v}"))
                })?;
            let mut kids = Vec::with_capacity(children);
            kids.push(prev_last);
            for _ in 0..children - 2 {
                kids.push(next_id);
                next_layer.push(next_id);
                parents.push(0);
                next_id += 1;
            }
            let last = if i + 1 == len {
                first
            } else {
                let id = next_id;
                next_id += 1;
                parents.push(0);
                next_layer.push(id);
                id
            };
            kids.push(last);
            for w in &kids {
                parents[*w] += 1;
            }
            for j in 0..kids.len() - 1 {
                tris.push([v, kids[j], kids[j + 1]]);
            }
            tris.push([v, last, layer[(i + 1) % len]]);
            prev_last = last;
        }
        layer = next_layer;
    }
    Ok(Triangulation::from_triangles(next_id, &tris)?)
}

/// Ball of radius `r` in the `d`-regular triangulation of the hyperbolic
/// plane: every non-boundary vertex has degree exactly `d`.
pub fn regular_hyperbolic_triangulation(d: usize, r: usize) -> Result<Triangulation, GeneratorError> {
    if d < 7 {
        return Err(GeneratorError::Range(format!("hyperbolic degree must be >= 7, got {d}")));
    }
    layered_triangulation(r, |_, _| d)
}

/// Triangular lattice with sparse vertices of degree `defect_degree`.
///
/// A vertex on layer `k >= 1` becomes a defect with probability
/// `k^{-3/2} / 2`, so a ball of radius `r` holds on the order of `sqrt(r)`
/// defects. The draw is counter-based on `(seed, vertex id)`.
pub fn mixed_degree_triangulation(
    r: usize,
    defect_degree: usize,
    seed_value: u64,
) -> Result<Triangulation, GeneratorError> {
    if defect_degree < 7 {
        return Err(GeneratorError::Range(format!(
            "defect degree must be >= 7, got {defect_degree}"
        )));
    }
    let stream = seed::substream(seed_value, "mixed-degree");
    layered_triangulation(r, |v, k| {
        if k == 0 {
            return 6;
        }
        let q = 0.5 * (k as f64).powf(-1.5);
        if seed::uniform(stream, v as u64) < q {
            defect_degree
        } else {
            6
        }
    })
}

/// Path of `k` unit edges; source at one end, sink at the other.
pub fn ladder_graph(k: usize) -> Result<TwoTerminalGraph, GeneratorError> {
    if k < 1 {
        return Err(GeneratorError::Range("ladder needs at least one edge".into()));
    }
    let pos: Vec<[f64; 2]> = (0..=k).map(|i| [i as f64, 0.0]).collect();
    let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, i + 1)).collect();
    Ok(TwoTerminalGraph::from_drawing(&pos, &edges, vec![0], vec![k]))
}

/// `count` disjoint source-sink paths of `len` edges each.
pub fn parallel_paths(count: usize, len: usize) -> Result<TwoTerminalGraph, GeneratorError> {
    if count < 1 || len < 2 {
        return Err(GeneratorError::Range("need count >= 1 and len >= 2".into()));
    }
    let mut pos = vec![[0.0, 0.0], [len as f64, 0.0]];
    let mut edges = Vec::new();
    for j in 0..count {
        let y = j as f64 - (count as f64 - 1.0) / 2.0;
        let mut prev = 0;
        for i in 1..len {
            pos.push([i as f64, y]);
            let id = pos.len() - 1;
            edges.push((prev, id));
            prev = id;
        }
        edges.push((prev, 1));
    }
    Ok(TwoTerminalGraph::from_drawing(&pos, &edges, vec![0], vec![1]))
}

/// `n x m` grid (n rows, m columns); the left column is the source set
/// and the right column the sink set. Vertex `(row, col)` has id
/// `row * m + col`.
pub fn grid_with_poles(n: usize, m: usize) -> Result<TwoTerminalGraph, GeneratorError> {
    if n < 1 || m < 2 {
        return Err(GeneratorError::Range("grid needs n >= 1 rows and m >= 2 columns".into()));
    }
    let mut pos = Vec::with_capacity(n * m);
    for i in 0..n {
        for j in 0..m {
            pos.push([j as f64, i as f64]);
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..m {
            let v = i * m + j;
            if j + 1 < m {
                edges.push((v, v + 1));
            }
            if i + 1 < n {
                edges.push((v, v + m));
            }
        }
    }
    let sources = (0..n).map(|i| i * m).collect();
    let sinks = (0..n).map(|i| i * m + m - 1).collect();
    Ok(TwoTerminalGraph::from_drawing(&pos, &edges, sources, sinks))
}
