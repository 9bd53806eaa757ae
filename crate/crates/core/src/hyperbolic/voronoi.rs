//! Voronoi cells of a hyperbolic Poisson sample, through the Euclidean
//! Delaunay triangulation of their Poincaré-disc coordinates.
//!
//! The truncation circle is surrounded by a ring of uncolored ghost points a
//! fraction of a cell apart. A site touches boundary arc X when its cell
//! borders the cell of a ghost whose angle lies in X. The ghosts form the
//! outer cycle of the triangulation, so black crossings between opposite
//! arcs and white crossings between the other two are exactly complementary.

use std::f64::consts::TAU;

use delaunator::{triangulate, Point, EMPTY};

use super::poisson::PoissonSample;
use super::IdealBoundaryQuad;
use crate::harness::seed;

/// Ghost spacing as a fraction of the local cell size.
pub const GHOST_SPACING: f64 = 0.5;
pub const MIN_GHOSTS: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct VoronoiTessellation {
    pub sites: Vec<[f64; 2]>,
    pub ghosts: Vec<[f64; 2]>,
    /// Site-site Delaunay adjacency.
    pub adjacency: Vec<Vec<usize>>,
    /// Adjacency over sites followed by ghosts (ghost `g` has index
    /// `sites.len() + g`).
    pub full_adjacency: Vec<Vec<usize>>,
    /// Bit `i` set when the site touches arc `i` (0 = A, ..., 3 = D).
    pub incidence: Vec<u8>,
    /// Site-site edges with a Delaunay circumdisk leaving the unit disc.
    pub ideal_exposed: Vec<(usize, usize)>,
    /// Site-site edges whose two triangles are nearly cocircular.
    pub degenerate: usize,
}

/// Number and Euclidean radius of the ghost ring for a truncation at `R`.
pub fn ghost_ring(lambda: f64, radius: f64) -> (usize, f64) {
    let count = ((TAU * radius.sinh() * lambda.sqrt() / GHOST_SPACING).ceil() as usize).max(MIN_GHOSTS);
    let t = (radius / 2.0).tanh();
    let outside = ((radius + 0.5 * GHOST_SPACING / lambda.sqrt()) / 2.0).tanh();
    // Keep every site strictly inside the ghost polygon.
    let hull = t / (std::f64::consts::PI / count as f64).cos() * (1.0 + 1e-9);
    (count, outside.max(hull).min(1.0 - 1e-15))
}

fn incircle(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> (f64, f64) {
    let row = |p: [f64; 2]| {
        let (x, y) = (p[0] - d[0], p[1] - d[1]);
        (x, y, x * x + y * y)
    };
    let (ax, ay, a2) = row(a);
    let (bx, by, b2) = row(b);
    let (cx, cy, c2) = row(c);
    let det = ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
    let scale = [a2, b2, c2].iter().cloned().fold(0.0, f64::max);
    (det, scale * scale)
}

fn circumdisk_leaves_unit_disc(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> bool {
    let d = 2.0 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]));
    if d == 0.0 {
        return true;
    }
    let n = |p: [f64; 2]| p[0] * p[0] + p[1] * p[1];
    let ux = (n(a) * (b[1] - c[1]) + n(b) * (c[1] - a[1]) + n(c) * (a[1] - b[1])) / d;
    let uy = (n(a) * (c[0] - b[0]) + n(b) * (a[0] - c[0]) + n(c) * (b[0] - a[0])) / d;
    let r = ((a[0] - ux).powi(2) + (a[1] - uy).powi(2)).sqrt();
    (ux * ux + uy * uy).sqrt() + r > 1.0
}

pub fn build_tessellation(sample: &PoissonSample, quad: &IdealBoundaryQuad) -> VoronoiTessellation {
    let sites = sample.points();
    let n = sites.len();
    let (count, ring) = ghost_ring(sample.lambda, sample.radius);
    let jitter = seed::substream(sample.seed, "ghost-jitter");
    let ghosts: Vec<[f64; 2]> = (0..count)
        .map(|j| {
            // Outward radial jitter breaks exact cocircularity without
            // pulling any ghost off the hull.
            let r = ring * (1.0 + 1e-12 * seed::uniform(jitter, j as u64));
            let th = TAU * j as f64 / count as f64;
            [r * th.cos(), r * th.sin()]
        })
        .collect();
    let ghost_arc: Vec<usize> = (0..count)
        .map(|j| quad.arc_of(TAU * j as f64 / count as f64))
        .collect();

    let all: Vec<[f64; 2]> = sites.iter().chain(&ghosts).copied().collect();
    let pts: Vec<Point> = all.iter().map(|p| Point { x: p[0], y: p[1] }).collect();
    let del = triangulate(&pts);

    let mut full_adjacency = vec![Vec::new(); all.len()];
    let mut exposed_tri = vec![false; del.triangles.len() / 3];
    for (t, tri) in del.triangles.chunks_exact(3).enumerate() {
        exposed_tri[t] = circumdisk_leaves_unit_disc(all[tri[0]], all[tri[1]], all[tri[2]]);
    }
    let mut ideal_exposed = Vec::new();
    let mut degenerate = 0;
    for e in 0..del.triangles.len() {
        let a = del.triangles[e];
        let b = del.triangles[if e % 3 == 2 { e - 2 } else { e + 1 }];
        let opp = del.halfedges[e];
        if opp != EMPTY && opp < e {
            continue;
        }
        full_adjacency[a].push(b);
        full_adjacency[b].push(a);
        if a < n && b < n {
            let mut exposed = exposed_tri[e / 3];
            if opp != EMPTY {
                exposed |= exposed_tri[opp / 3];
                let c = del.triangles[if e % 3 == 0 { e + 2 } else { e - 1 }];
                let d = del.triangles[if opp % 3 == 0 { opp + 2 } else { opp - 1 }];
                let (det, scale) = incircle(all[a], all[b], all[c], all[d]);
                if det.abs() <= 1e-12 * scale {
                    degenerate += 1;
                }
            }
            if exposed {
                ideal_exposed.push((a.min(b), a.max(b)));
            }
        }
    }
    for l in &mut full_adjacency {
        l.sort_unstable();
        l.dedup();
    }
    let mut incidence = vec![0u8; n];
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|s| {
            for &w in &full_adjacency[s] {
                if w >= n {
                    incidence[s] |= 1 << ghost_arc[w - n];
                }
            }
            full_adjacency[s].iter().copied().filter(|&w| w < n).collect()
        })
        .collect();
    VoronoiTessellation {
        sites,
        ghosts,
        adjacency,
        full_adjacency,
        incidence,
        ideal_exposed,
        degenerate,
    }
}

impl VoronoiTessellation {
    pub fn touches(&self, site: usize, arc: usize) -> bool {
        self.incidence[site] & (1 << arc) != 0
    }

    /// `Some(crossed)` for a black path from arc `from` to arc `to`, or
    /// `None` when either arc touches no site.
    pub fn crossing<F: Fn(usize) -> bool>(&self, from: usize, to: usize, black: F) -> Option<bool> {
        let n = self.sites.len();
        if !(0..n).any(|s| self.touches(s, from)) || !(0..n).any(|s| self.touches(s, to)) {
            return None;
        }
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = (0..n).filter(|&s| self.touches(s, from) && black(s)).collect();
        stack.iter().for_each(|&s| seen[s] = true);
        while let Some(u) = stack.pop() {
            if self.touches(u, to) {
                return Some(true);
            }
            for &v in &self.adjacency[u] {
                if !seen[v] && black(v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        Some(false)
    }

    /// Site colors for one trial: black iff `uniform(color_seed, i) < p`.
    pub fn colors(&self, p: f64, color_seed: u64) -> Vec<bool> {
        (0..self.sites.len())
            .map(|i| seed::uniform(color_seed, i as u64) < p)
            .collect()
    }
}
