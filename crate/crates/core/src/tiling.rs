//! Square tilings from unit current flows (one square per edge).
//!
//! With sources at potential 0 and sinks at 1, edge `u -> v` becomes a square
//! of side `|φ(v) - φ(u)|` whose horizontal extent is `[φ(u), φ(v)]`. The
//! vertical coordinate is the stream function: a potential on faces that
//! jumps by the edge flow across each edge.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harmonic::{effective_resistance, HarmonicError};
use crate::harness::runner::Runner;
use crate::harness::seed;
use crate::harness::stats::EstimateWithCI;
use crate::network::TwoTerminalGraph;

/// Edges whose flow is below this are dropped.
pub const MIN_FLOW: f64 = 1e-12;
/// Absolute tolerance for contacts and corners, on unit-width coordinates.
pub const CONTACT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TilingError {
    #[error(transparent)]
    Solver(#[from] HarmonicError),
    #[error("total current is zero")]
    ZeroCurrent,
    #[error("invalid tiling file: {0}")]
    Parse(String),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub x: f64,
    pub y: f64,
    pub side: f64,
    /// Index of the source edge in `Embedding::edges` order.
    pub edge: usize,
    /// Endpoint at potential `x`.
    pub u: usize,
    /// Endpoint at potential `x + side`.
    pub v: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquareTiling {
    pub width: f64,
    pub height: f64,
    /// `Some(height)` when the tiling lives on a cylinder: tiles leaving the
    /// top re-enter at the bottom.
    pub period: Option<f64>,
    pub tiles: Vec<Tile>,
    pub adjacency: Vec<Vec<usize>>,
    pub max_corner_incidence: usize,
    pub dropped_edges: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct TilingFile {
    width: f64,
    height: f64,
    #[serde(default)]
    period: Option<f64>,
    #[serde(default)]
    dropped_edges: usize,
    tiles: Vec<TileRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct TileRecord {
    x: f64,
    y: f64,
    side: f64,
    edge: usize,
    #[serde(default)]
    u: usize,
    #[serde(default)]
    v: usize,
}

/// Builds the tiling of a two-terminal graph with unit conductances.
pub fn tile_from_two_terminal(g: &TwoTerminalGraph, tol: f64) -> Result<SquareTiling, TilingError> {
    let emb = g.embedding();
    let res = match effective_resistance(g.neighbors(), &g.sources, &g.sinks, tol) {
        Err(HarmonicError::OverlappingTerminals(_)) => return Err(TilingError::ZeroCurrent),
        other => other?,
    };
    let phi = &res.solution.potential;
    let total = 1.0 / res.by_current;
    if !(total > MIN_FLOW) || !total.is_finite() {
        return Err(TilingError::ZeroCurrent);
    }
    let flow = |d: usize| phi[emb.head(d)] - phi[emb.tail(d)];

    let faces = emb.faces();
    // 1 for sources, 2 for sinks.
    let is_terminal = {
        let mut m = vec![0u8; g.vertex_count()];
        g.sources.iter().for_each(|&v| m[v] = 1);
        g.sinks.iter().for_each(|&v| m[v] = 2);
        m
    };

    // Split the outer face at terminals so the stream function is single
    // valued on each piece.
    let mut node = faces.left_of.clone();
    let mut outer_walk = vec![g.outer_dart()];
    loop {
        let d = emb.next_in_face(*outer_walk.last().expect("nonempty"));
        if d == outer_walk[0] {
            break;
        }
        outer_walk.push(d);
    }
    let cuts: Vec<usize> = (0..outer_walk.len())
        .filter(|&i| is_terminal[emb.tail(outer_walk[i])] != 0)
        .collect();
    let mut next_node = faces.cycles.len();
    if cuts.is_empty() {
        next_node += 1;
        outer_walk.iter().for_each(|&d| node[d] = next_node - 1);
    } else {
        for (j, &c) in cuts.iter().enumerate() {
            let end = if j + 1 < cuts.len() {
                cuts[j + 1]
            } else {
                cuts[0] + outer_walk.len()
            };
            for i in c..end {
                node[outer_walk[i % outer_walk.len()]] = next_node;
            }
            next_node += 1;
        }
    }

    let mut darts_of = vec![Vec::new(); next_node];
    for d in 0..emb.dart_count() {
        darts_of[node[d]].push(d);
    }
    // A rectangle when every terminal is on the outer face and the sources
    // and sinks occupy two contiguous runs of it; a cylinder otherwise.
    let classes: Vec<u8> = cuts.iter().map(|&i| is_terminal[emb.tail(outer_walk[i])]).collect();
    let changes = (0..classes.len())
        .filter(|&i| classes[i] != classes[(i + 1) % classes.len()])
        .count();
    let mut on_outer = vec![false; g.vertex_count()];
    outer_walk.iter().for_each(|&d| on_outer[emb.tail(d)] = true);
    let rectangle = changes == 2 && g.sources.iter().chain(&g.sinks).all(|&v| on_outer[v]);
    let period = (!rectangle).then_some(total);

    let start = node[outer_walk[0]];
    let mut psi = vec![f64::NAN; next_node];
    psi[start] = 0.0;
    let mut queue = VecDeque::from([start]);
    while let Some(n) = queue.pop_front() {
        for &d in &darts_of[n] {
            let other = node[emb.twin(d)];
            if psi[other].is_nan() {
                psi[other] = psi[n] - flow(d);
                queue.push_back(other);
            }
        }
    }

    let mut tiles = Vec::new();
    let mut dropped = 0;
    for (edge, (a, b)) in emb.edges().into_iter().enumerate() {
        let d0 = emb.find_dart(a, b).expect("edge dart");
        let f = flow(d0);
        if f.abs() < MIN_FLOW {
            dropped += 1;
            continue;
        }
        let d = if f > 0.0 { d0 } else { emb.twin(d0) };
        let (u, v) = (emb.tail(d), emb.head(d));
        tiles.push(Tile {
            x: phi[u],
            y: psi[node[emb.twin(d)]],
            side: f.abs(),
            edge,
            u,
            v,
        });
    }
    match period {
        Some(per) => {
            for t in &mut tiles {
                t.y = t.y.rem_euclid(per);
                if per - t.y < CONTACT_TOL * per {
                    t.y = 0.0;
                }
            }
        }
        None => {
            let low = tiles.iter().map(|t| t.y).fold(f64::INFINITY, f64::min);
            tiles.iter_mut().for_each(|t| t.y -= low);
        }
    }
    Ok(SquareTiling::from_tiles(1.0, total, period, tiles, dropped))
}

fn overlap(a0: f64, a1: f64, b0: f64, b1: f64) -> f64 {
    a1.min(b1) - a0.max(b0)
}

impl SquareTiling {
    /// Assembles a tiling and recomputes contacts and corner incidence.
    pub fn from_tiles(width: f64, height: f64, period: Option<f64>, tiles: Vec<Tile>, dropped_edges: usize) -> Self {
        let mut t = Self {
            width,
            height,
            period,
            tiles,
            adjacency: Vec::new(),
            max_corner_incidence: 0,
            dropped_edges,
        };
        t.adjacency = t.compute_adjacency();
        t.max_corner_incidence = t.corner_incidence();
        t
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Vertical overlap of two intervals, allowing for the cylinder wrap.
    fn y_overlap(&self, a: &Tile, b: &Tile) -> f64 {
        match self.period {
            None => overlap(a.y, a.y + a.side, b.y, b.y + b.side),
            Some(p) => [-p, 0.0, p]
                .iter()
                .map(|s| overlap(a.y, a.y + a.side, b.y + s, b.y + b.side + s))
                .fold(f64::NEG_INFINITY, f64::max),
        }
    }

    fn y_touch(&self, top: f64, bottom: f64) -> bool {
        match self.period {
            None => (top - bottom).abs() < CONTACT_TOL,
            Some(p) => {
                let d = (top - bottom).rem_euclid(p);
                d < CONTACT_TOL || p - d < CONTACT_TOL
            }
        }
    }

    fn touching(&self, a: &Tile, b: &Tile) -> bool {
        let side_by_side = ((a.x + a.side - b.x).abs() < CONTACT_TOL
            || (b.x + b.side - a.x).abs() < CONTACT_TOL)
            && self.y_overlap(a, b) > CONTACT_TOL;
        let stacked = (self.y_touch(a.y + a.side, b.y) || self.y_touch(b.y + b.side, a.y))
            && overlap(a.x, a.x + a.side, b.x, b.x + b.side) > CONTACT_TOL;
        side_by_side || stacked
    }

    fn compute_adjacency(&self) -> Vec<Vec<usize>> {
        let n = self.tiles.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| self.tiles[i].x.total_cmp(&self.tiles[j].x));
        let mut adj = vec![Vec::new(); n];
        for (k, &i) in order.iter().enumerate() {
            let a = &self.tiles[i];
            for &j in &order[k + 1..] {
                let b = &self.tiles[j];
                if b.x > a.x + a.side + CONTACT_TOL {
                    break;
                }
                if self.touching(a, b) {
                    adj[i].push(j);
                    adj[j].push(i);
                }
            }
        }
        adj.iter_mut().for_each(|l| l.sort_unstable());
        adj
    }

    fn contains_point(&self, t: &Tile, px: f64, py: f64) -> bool {
        let in_x = px > t.x - CONTACT_TOL && px < t.x + t.side + CONTACT_TOL;
        let in_y = match self.period {
            None => py > t.y - CONTACT_TOL && py < t.y + t.side + CONTACT_TOL,
            Some(p) => {
                let d = (py - t.y).rem_euclid(p);
                d < t.side + CONTACT_TOL || p - d < CONTACT_TOL
            }
        };
        in_x && in_y
    }

    /// Tiles (closed squares) containing each corner, maximized over corners.
    fn corner_incidence(&self) -> usize {
        let mut best = 0;
        for t in &self.tiles {
            for (px, py) in [
                (t.x, t.y),
                (t.x + t.side, t.y),
                (t.x, t.y + t.side),
                (t.x + t.side, t.y + t.side),
            ] {
                let count = self.tiles.iter().filter(|s| self.contains_point(s, px, py)).count();
                best = best.max(count);
            }
        }
        best
    }

    /// Tile pairs that touch only at a point.
    pub fn point_contacts(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.tiles.len() {
            for j in i + 1..self.tiles.len() {
                if self.adjacency[i].binary_search(&j).is_ok() {
                    continue;
                }
                let a = &self.tiles[i];
                let b = &self.tiles[j];
                let meet = [(a.x, a.y), (a.x + a.side, a.y), (a.x, a.y + a.side), (a.x + a.side, a.y + a.side)]
                    .iter()
                    .any(|&(px, py)| self.contains_point(b, px, py));
                if meet {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn touches_left(&self, i: usize) -> bool {
        self.tiles[i].x < CONTACT_TOL
    }

    pub fn touches_right(&self, i: usize) -> bool {
        let t = &self.tiles[i];
        t.x + t.side > self.width - CONTACT_TOL
    }

    pub fn to_json(&self) -> String {
        let file = TilingFile {
            width: self.width,
            height: self.height,
            period: self.period,
            dropped_edges: self.dropped_edges,
            tiles: self
                .tiles
                .iter()
                .map(|t| TileRecord {
                    x: t.x,
                    y: t.y,
                    side: t.side,
                    edge: t.edge,
                    u: t.u,
                    v: t.v,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, TilingError> {
        let f: TilingFile = serde_json::from_str(text).map_err(|e| TilingError::Parse(e.to_string()))?;
        let tiles = f
            .tiles
            .into_iter()
            .map(|r| Tile {
                x: r.x,
                y: r.y,
                side: r.side,
                edge: r.edge,
                u: r.u,
                v: r.v,
            })
            .collect();
        Ok(Self::from_tiles(f.width, f.height, f.period, tiles, f.dropped_edges))
    }
}

/// Geometric checks on a tiling.
#[derive(Debug, Clone, PartialEq)]
pub struct TilingReport {
    pub max_corner_incidence: usize,
    /// At most three tiles meet at any corner.
    pub pass: bool,
    /// `|sum of areas - rectangle area| / rectangle area`.
    pub area_residual: f64,
    /// Largest overlap area between two tile interiors.
    pub max_overlap: f64,
    pub overlapping_pairs: usize,
    pub tiles_outside: usize,
}

pub fn validate_tiling(t: &SquareTiling) -> TilingReport {
    let area: f64 = t.tiles.iter().map(|s| s.side * s.side).sum();
    let rect = t.width * t.height;
    let mut order: Vec<usize> = (0..t.len()).collect();
    order.sort_by(|&i, &j| t.tiles[i].x.total_cmp(&t.tiles[j].x));
    let mut max_overlap: f64 = 0.0;
    let mut pairs = 0;
    for (k, &i) in order.iter().enumerate() {
        let a = &t.tiles[i];
        for &j in &order[k + 1..] {
            let b = &t.tiles[j];
            if b.x >= a.x + a.side - CONTACT_TOL {
                break;
            }
            let ox = overlap(a.x, a.x + a.side, b.x, b.x + b.side);
            let oy = t.y_overlap(a, b);
            if ox > CONTACT_TOL && oy > CONTACT_TOL {
                pairs += 1;
                max_overlap = max_overlap.max(ox * oy);
            }
        }
    }
    let outside = t
        .tiles
        .iter()
        .filter(|s| {
            s.x < -CONTACT_TOL
                || s.x + s.side > t.width + CONTACT_TOL
                || (t.period.is_none() && (s.y < -CONTACT_TOL || s.y + s.side > t.height + CONTACT_TOL))
        })
        .count();
    TilingReport {
        max_corner_incidence: t.max_corner_incidence,
        pass: t.max_corner_incidence <= 3,
        area_residual: (area - rect).abs() / rect,
        max_overlap,
        overlapping_pairs: pairs,
        tiles_outside: outside,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TileColoring {
    pub black: Vec<bool>,
    pub p: f64,
    pub seed: u64,
}

impl TileColoring {
    /// Tile `i` is black iff `seed::uniform(seed, i) < p`.
    pub fn sample(tiles: usize, p: f64, seed: u64) -> Self {
        Self {
            black: (0..tiles).map(|i| seed::uniform(seed, i as u64) < p).collect(),
            p,
            seed,
        }
    }
}

/// Whether black tiles join the left side to the right side.
pub fn left_right_crossing(t: &SquareTiling, coloring: &TileColoring) -> bool {
    crossing_with(t, |i| coloring.black[i])
}

pub(crate) fn crossing_with<F: Fn(usize) -> bool>(t: &SquareTiling, black: F) -> bool {
    let n = t.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for i in 0..n {
        if t.touches_left(i) && black(i) {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        if t.touches_right(i) {
            return true;
        }
        for &j in &t.adjacency[i] {
            if !seen[j] && black(j) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    false
}

pub fn crossing_probability_tiling(
    t: &SquareTiling,
    p: f64,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<EstimateWithCI, TilingError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(TilingError::BadProbability(p));
    }
    let hits = runner.map(0..trials, |i| {
        let s = seed::trial_seed(seed, "cross-tiling", i);
        crossing_with(t, |k| seed::uniform(s, k as u64) < p)
    });
    Ok(EstimateWithCI::from_outcomes(hits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{ladder_graph, parallel_paths};

    #[test]
    fn single_edge_is_unit_square() {
        let t = tile_from_two_terminal(&ladder_graph(1).unwrap(), 1e-12).unwrap();
        assert_eq!(t.len(), 1);
        assert!((t.tiles[0].side - 1.0).abs() < 1e-12);
        assert_eq!(t.period, None);
    }

    #[test]
    fn path_is_a_row() {
        let t = tile_from_two_terminal(&ladder_graph(3).unwrap(), 1e-12).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.tiles.iter().all(|s| (s.side - 1.0 / 3.0).abs() < 1e-12 && s.y.abs() < 1e-12));
        let r = validate_tiling(&t);
        assert_eq!(r.max_corner_incidence, 2);
        assert!(r.pass);
    }

    #[test]
    fn two_parallel_paths() {
        let t = tile_from_two_terminal(&parallel_paths(2, 2).unwrap(), 1e-12).unwrap();
        assert_eq!(t.len(), 4);
        assert!((t.height - 1.0).abs() < 1e-12);
        let r = validate_tiling(&t);
        assert_eq!(r.max_corner_incidence, 4);
        assert!(!r.pass);
        assert_eq!(r.overlapping_pairs, 0);
        assert!(r.area_residual < 1e-12);
    }

    #[test]
    fn single_tile_crossing() {
        let t = tile_from_two_terminal(&ladder_graph(1).unwrap(), 1e-12).unwrap();
        let black = TileColoring { black: vec![true], p: 1.0, seed: 0 };
        let white = TileColoring { black: vec![false], p: 0.0, seed: 0 };
        assert!(left_right_crossing(&t, &black));
        assert!(!left_right_crossing(&t, &white));
    }

    #[test]
    fn json_round_trip() {
        let t = tile_from_two_terminal(&parallel_paths(2, 2).unwrap(), 1e-12).unwrap();
        let back = SquareTiling::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
