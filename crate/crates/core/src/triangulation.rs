//! Finite triangulations of a disk.
//!
//! A [`Triangulation`] is a rotation system (counterclockwise neighbour lists)
//! together with the boundary cycle, listed counterclockwise so that the
//! interior lies to the left of every boundary step. Construction validates
//! that every face other than the outer one is a triangle and that the Euler
//! relation `V - E + F = 2` holds.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::embedding::Embedding;

/// Marker for "no path" in distance arrays.
pub const UNREACHED: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TriangulationError {
    #[error("degenerate input: {0} vertices (at least 3 required)")]
    Degenerate(usize),
    #[error("vertex {vertex} lists neighbour {neighbor} which is out of range")]
    NeighborOutOfRange { vertex: usize, neighbor: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("multi-edge between {0} and {1}")]
    MultiEdge(usize, usize),
    #[error("adjacency not symmetric: {0} lists {1} but not conversely")]
    Asymmetric(usize, usize),
    #[error("vertex {vertex} has degree {degree} above the bound {bound}")]
    DegreeBound { vertex: usize, degree: usize, bound: usize },
    #[error("boundary is not a simple cycle: {0}")]
    BadBoundary(String),
    #[error("boundary cycle is not the outer face walk of the rotation system")]
    BoundaryNotOuterFace,
    #[error("non-triangular interior face {0:?}")]
    NonTriangularFace(Vec<usize>),
    #[error("Euler relation violated: V - E + F = {v} - {e} + {f} != 2")]
    Euler { v: usize, e: usize, f: usize },
    #[error("triangle list does not form a disk: {0}")]
    NotADisk(String),
    #[error("ball is not simply connected after extraction: {0}")]
    BallNotSimplyConnected(String),
    #[error("vertex {0} does not exist")]
    NoSuchVertex(usize),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone)]
pub struct Triangulation {
    embedding: Embedding,
    boundary: Vec<usize>,
    degree_bound: usize,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.rotation() == other.rotation() && self.boundary == other.boundary
    }
}

impl Triangulation {
    /// Validates a rotation system and boundary cycle.
    pub fn build_from_rotation(
        neighbors: Vec<Vec<usize>>,
        boundary: Vec<usize>,
    ) -> Result<Self, TriangulationError> {
        let bound = neighbors.iter().map(Vec::len).max().unwrap_or(0);
        Self::build_with_degree_bound(neighbors, boundary, bound)
    }

    pub fn build_with_degree_bound(
        neighbors: Vec<Vec<usize>>,
        boundary: Vec<usize>,
        degree_bound: usize,
    ) -> Result<Self, TriangulationError> {
        use TriangulationError as E;
        let n = neighbors.len();
        if n < 3 {
            return Err(E::Degenerate(n));
        }
        for (u, nbrs) in neighbors.iter().enumerate() {
            if nbrs.len() > degree_bound {
                return Err(E::DegreeBound {
                    vertex: u,
                    degree: nbrs.len(),
                    bound: degree_bound,
                });
            }
            for (k, &v) in nbrs.iter().enumerate() {
                if v >= n {
                    return Err(E::NeighborOutOfRange { vertex: u, neighbor: v });
                }
                if v == u {
                    return Err(E::SelfLoop(u));
                }
                if nbrs[..k].contains(&v) {
                    return Err(E::MultiEdge(u, v));
                }
                if !neighbors[v].contains(&u) {
                    return Err(E::Asymmetric(u, v));
                }
            }
        }
        let len = boundary.len();
        if len < 3 {
            return Err(E::BadBoundary(format!("length {len}")));
        }
        let mut seen = vec![false; n];
        for &b in &boundary {
            if b >= n {
                return Err(E::NoSuchVertex(b));
            }
            if std::mem::replace(&mut seen[b], true) {
                return Err(E::BadBoundary(format!("vertex {b} repeated")));
            }
        }
        for i in 0..len {
            let (a, b) = (boundary[i], boundary[(i + 1) % len]);
            if !neighbors[a].contains(&b) {
                return Err(E::BadBoundary(format!("{a} and {b} are not adjacent")));
            }
        }

        let embedding = Embedding::new(neighbors).expect("symmetry checked above");
        let faces = embedding.faces();
        let outer_dart = embedding
            .find_dart(boundary[1], boundary[0])
            .expect("adjacency checked above");
        let outer = faces.left_of[outer_dart];
        let walk = &faces.cycles[outer];
        let expected: Vec<usize> = (0..len).map(|i| boundary[(len + 1 - i) % len]).collect();
        if !same_cycle(walk, &expected) {
            return Err(E::BoundaryNotOuterFace);
        }
        for (id, cycle) in faces.cycles.iter().enumerate() {
            if id != outer && cycle.len() != 3 {
                return Err(E::NonTriangularFace(cycle.clone()));
            }
        }
        let (v, e, f) = (n, embedding.edge_count(), faces.cycles.len());
        if v + f != e + 2 {
            return Err(E::Euler { v, e, f });
        }
        Ok(Self {
            embedding,
            boundary,
            degree_bound,
        })
    }

    /// Builds a triangulation from counterclockwise triangles covering a disk.
    ///
    /// Vertex ids must be `0..n`; every vertex must lie on some triangle. The
    /// boundary cycle starts at its smallest vertex.
    pub fn from_triangles(n: usize, triangles: &[[usize; 3]]) -> Result<Self, TriangulationError> {
        use TriangulationError as E;
        if n < 3 {
            return Err(E::Degenerate(n));
        }
        // succ[v]: around v, neighbour a is followed counterclockwise by b.
        let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for k in 0..3 {
                let (v, a, b) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                if v >= n {
                    return Err(E::NoSuchVertex(v));
                }
                if succ[v].insert(a, b).is_some() {
                    return Err(E::NotADisk(format!("two triangles follow {a} around {v}")));
                }
                if directed.insert((v, a), t).is_some() {
                    return Err(E::NotADisk(format!("directed edge {v}->{a} used twice")));
                }
            }
        }
        let mut rotation = Vec::with_capacity(n);
        for (v, s) in succ.iter().enumerate() {
            if s.is_empty() {
                return Err(E::NotADisk(format!("vertex {v} lies on no triangle")));
            }
            let has_pred: std::collections::HashSet<usize> = s.values().copied().collect();
            let mut starts: Vec<usize> = s.keys().copied().filter(|a| !has_pred.contains(a)).collect();
            starts.sort_unstable();
            if starts.len() > 1 {
                return Err(E::NotADisk(format!("vertex {v} is a pinch point")));
            }
            let start = match starts.first() {
                Some(&a) => a,
                None => *s.keys().min().expect("nonempty"),
            };
            let mut order = vec![start];
            let mut cur = start;
            while let Some(&next) = s.get(&cur) {
                if next == start {
                    break;
                }
                order.push(next);
                cur = next;
            }
            if order.len() != s.len() + usize::from(!starts.is_empty()) {
                return Err(E::NotADisk(format!("link of vertex {v} is not connected")));
            }
            rotation.push(order);
        }
        // Boundary darts: a->b in a triangle with b->a in none.
        let mut next_boundary: HashMap<usize, usize> = HashMap::new();
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) && next_boundary.insert(a, b).is_some() {
                return Err(E::NotADisk(format!("boundary pinches at {a}")));
            }
        }
        let start = *next_boundary
            .keys()
            .min()
            .ok_or_else(|| E::NotADisk("no boundary".into()))?;
        let mut boundary = vec![start];
        let mut cur = next_boundary[&start];
        while cur != start {
            boundary.push(cur);
            cur = *next_boundary
                .get(&cur)
                .ok_or_else(|| E::NotADisk("open boundary".into()))?;
            if boundary.len() > next_boundary.len() {
                return Err(E::NotADisk("boundary does not close".into()));
            }
        }
        if boundary.len() != next_boundary.len() {
            return Err(E::NotADisk(format!(
                "{} boundary components",
                1 + usize::from(boundary.len() < next_boundary.len())
            )));
        }
        Self::build_from_rotation(rotation, boundary)
    }

    pub fn vertex_count(&self) -> usize {
        self.embedding.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.embedding.edge_count()
    }

    /// Face count including the outer face.
    pub fn face_count(&self) -> usize {
        2 + self.edge_count() - self.vertex_count()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        self.embedding.rotation()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.embedding.neighbors(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.embedding.degree(v)
    }

    pub fn boundary(&self) -> &[usize] {
        &self.boundary
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn boundary_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.vertex_count()];
        for &b in &self.boundary {
            mask[b] = true;
        }
        mask
    }

    /// Interior triangles, each listed counterclockwise.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let e = &self.embedding;
        let outer = e
            .find_dart(self.boundary[1], self.boundary[0])
            .expect("validated");
        let faces = e.faces();
        let outer_face = faces.left_of[outer];
        faces
            .cycles
            .iter()
            .enumerate()
            .filter(|(id, _)| *id != outer_face)
            .map(|(_, c)| [c[0], c[1], c[2]])
            .collect()
    }

    /// Degree histogram of vertices not on the boundary.
    pub fn interior_degree_histogram(&self) -> std::collections::BTreeMap<usize, usize> {
        let mask = self.boundary_mask();
        let mut h = std::collections::BTreeMap::new();
        for v in 0..self.vertex_count() {
            if !mask[v] {
                *h.entry(self.degree(v)).or_insert(0) += 1;
            }
        }
        h
    }

    pub fn distances_from(&self, center: usize) -> Vec<usize> {
        bfs_distances(self.rotation(), center)
    }

    /// Graph distance from `center` to the nearest boundary vertex.
    pub fn distance_to_boundary(&self, center: usize) -> usize {
        let dist = self.distances_from(center);
        self.boundary.iter().map(|&b| dist[b]).min().unwrap_or(0)
    }

    /// Text serialization: `V E`, one neighbour list per vertex in rotation
    /// order, then the boundary cycle.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.vertex_count(), self.edge_count());
        for nbrs in self.rotation() {
            let _ = writeln!(s, "{}", join(nbrs));
        }
        let _ = writeln!(s, "{}", join(&self.boundary));
        s
    }

    pub fn from_text(text: &str) -> Result<Self, TriangulationError> {
        let (rot, rest) = parse_rotation_block(text)?;
        let (line_no, line) = rest
            .into_iter()
            .next()
            .ok_or(TriangulationError::Parse {
                line: rot.len() + 2,
                message: "missing boundary line".into(),
            })?;
        let boundary = parse_ids(line, line_no)?;
        Self::build_from_rotation(rot, boundary)
    }
}

fn join(ids: &[usize]) -> String {
    ids.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

pub(crate) fn parse_ids(line: &str, line_no: usize) -> Result<Vec<usize>, TriangulationError> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| TriangulationError::Parse {
                line: line_no,
                message: format!("bad vertex id `{tok}`"),
            })
        })
        .collect()
}

/// Parses the `V E` header and `V` neighbour lines; returns the remaining
/// non-empty lines with their 1-based line numbers.
pub(crate) fn parse_rotation_block(
    text: &str,
) -> Result<(Vec<Vec<usize>>, Vec<(usize, &str)>), TriangulationError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hl, header) = lines.next().ok_or(TriangulationError::Parse {
        line: 1,
        message: "empty input".into(),
    })?;
    let head = parse_ids(header, hl)?;
    if head.len() != 2 {
        return Err(TriangulationError::Parse {
            line: hl,
            message: "header must be `V E`".into(),
        });
    }
    let (v, e) = (head[0], head[1]);
    let mut rot = Vec::with_capacity(v);
    for _ in 0..v {
        let (ln, line) = lines.next().ok_or(TriangulationError::Parse {
            line: hl + rot.len() + 1,
            message: "missing neighbour line".into(),
        })?;
        rot.push(parse_ids(line, ln)?);
    }
    let degree_sum: usize = rot.iter().map(Vec::len).sum();
    if degree_sum != 2 * e {
        return Err(TriangulationError::Parse {
            line: hl,
            message: format!("header says {e} edges but degrees sum to {degree_sum}"),
        });
    }
    let rest = lines.filter(|(_, l)| !l.trim().is_empty()).collect();
    Ok((rot, rest))
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(shift) = a.iter().position(|&x| x == b[0]) else {
        return false;
    };
    (0..a.len()).all(|i| a[(shift + i) % a.len()] == b[i])
}

/// Breadth-first distances; unreachable vertices get [`UNREACHED`].
pub fn bfs_distances(neighbors: &[Vec<usize>], source: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHED; neighbors.len()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        for &v in &neighbors[u] {
            if dist[v] == UNREACHED {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

#[derive(Debug, Clone, PartialEq)]
pub struct BallDecomposition {
    pub center: usize,
    /// Distance from the center, indexed by vertex id of the ball.
    pub distance: Vec<usize>,
    pub layer_sizes: Vec<usize>,
}

/// A ball `B_r` cut out of a triangulation.
#[derive(Debug, Clone)]
pub struct Ball {
    /// `None` when the ball spans no triangle (`r = 0`).
    pub triangulation: Option<Triangulation>,
    pub decomposition: BallDecomposition,
    /// Original vertex id of every ball vertex.
    pub original: Vec<usize>,
    /// Number of pinch vertices that were duplicated to keep the boundary simple.
    pub pinch_splits: usize,
}

/// Extracts the subcomplex of triangles whose three corners lie within graph
/// distance `r` of `center`. The center becomes vertex 0 and the remaining
/// vertices are numbered by (distance, original id).
pub fn ball(t: &Triangulation, center: usize, r: usize) -> Result<Ball, TriangulationError> {
    if center >= t.vertex_count() {
        return Err(TriangulationError::NoSuchVertex(center));
    }
    let dist = t.distances_from(center);
    let mut members: Vec<usize> = (0..t.vertex_count()).filter(|&v| dist[v] <= r).collect();
    members.sort_by_key(|&v| (dist[v], v));
    let mut new_id = vec![UNREACHED; t.vertex_count()];
    for (i, &v) in members.iter().enumerate() {
        new_id[v] = i;
    }
    let mut layer_sizes = vec![0; r + 1];
    for &v in &members {
        layer_sizes[dist[v]] += 1;
    }
    let mut original = members.clone();
    let mut distance: Vec<usize> = members.iter().map(|&v| dist[v]).collect();

    let mut kept: Vec<[usize; 3]> = t
        .triangles()
        .into_iter()
        .filter(|tri| tri.iter().all(|&v| dist[v] <= r))
        .map(|tri| tri.map(|v| new_id[v]))
        .collect();
    if kept.is_empty() {
        // Only possible for r = 0: a single vertex spans no 2-cell.
        return Ok(Ball {
            triangulation: None,
            decomposition: BallDecomposition {
                center: 0,
                distance: vec![0],
                layer_sizes: vec![1],
            },
            original: vec![center],
            pinch_splits: 0,
        });
    }

    // Split pinch vertices: every fan of kept triangles around a vertex gets
    // its own copy.
    let n = members.len();
    let mut succ: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    for tri in &kept {
        for k in 0..3 {
            succ[tri[k]].insert(tri[(k + 1) % 3], tri[(k + 2) % 3]);
        }
    }
    let mut fan_copy: Vec<HashMap<usize, usize>> = vec![HashMap::new(); n];
    let mut splits = 0;
    let mut next_id = n;
    for v in 0..n {
        let s = &succ[v];
        let preds: std::collections::HashSet<usize> = s.values().copied().collect();
        let mut starts: Vec<usize> = s.keys().copied().filter(|a| !preds.contains(a)).collect();
        starts.sort_unstable();
        if starts.len() <= 1 {
            continue;
        }
        splits += 1;
        for (fan, &a0) in starts.iter().enumerate() {
            let id = if fan == 0 {
                v
            } else {
                original.push(original[v]);
                distance.push(distance[v]);
                next_id += 1;
                next_id - 1
            };
            let mut a = a0;
            loop {
                fan_copy[v].insert(a, id);
                match s.get(&a) {
                    Some(&b) => a = b,
                    None => break,
                }
            }
        }
    }
    if splits > 0 {
        log::debug!("ball extraction split {splits} pinch vertices");
        for tri in kept.iter_mut() {
            let orig = *tri;
            for k in 0..3 {
                if let Some(&id) = fan_copy[orig[k]].get(&orig[(k + 1) % 3]) {
                    tri[k] = id;
                }
            }
        }
    }
    let triangulation = Triangulation::from_triangles(next_id, &kept)
        .map_err(|e| TriangulationError::BallNotSimplyConnected(e.to_string()))?;
    Ok(Ball {
        triangulation: Some(triangulation),
        decomposition: BallDecomposition {
            center: 0,
            distance,
            layer_sizes,
        },
        original,
        pinch_splits: splits,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrowthRow {
    pub r: usize,
    pub ball_size: usize,
    pub sphere_size: usize,
}

/// `(r, |B_r|, |∂B_r|)` for every radius at which the ball has not yet
/// reached the boundary of `t`, i.e. where it agrees with the ball of any
/// triangulation that `t` exhausts.
pub fn growth_profile(t: &Triangulation, center: usize) -> Vec<GrowthRow> {
    let dist = t.distances_from(center);
    let reach = t.boundary().iter().map(|&b| dist[b]).min().unwrap_or(0);
    let mut layers = vec![0usize; reach + 1];
    for &d in &dist {
        if d <= reach {
            layers[d] += 1;
        }
    }
    let mut total = 0;
    layers
        .into_iter()
        .enumerate()
        .map(|(r, sphere_size)| {
            total += sphere_size;
            GrowthRow {
                r,
                ball_size: total,
                sphere_size,
            }
        })
        .collect()
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
