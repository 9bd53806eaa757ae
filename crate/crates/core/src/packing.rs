//! Euclidean circle packings of triangulated disks.
//!
//! Interior radii are found by the uniform-neighbour relaxation: each sweep
//! replaces `r_v` by the radius that would give angle sum `2π` if all its
//! `k` neighbours had the same radius, matched to the current angle sum.
//! Boundary radii are held fixed.

use std::collections::{HashMap, VecDeque};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::triangulation::Triangulation;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_SWEEPS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PackingError {
    #[error("expected {expected} boundary radii, got {got}")]
    RadiiCount { expected: usize, got: usize },
    #[error("radii must be positive and finite")]
    BadRadius,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("no convergence after {sweeps} sweeps: vertex {vertex} has angle error {error:e}")]
    Budget { sweeps: usize, vertex: usize, error: f64 },
    #[error("layout tangency error {0:e} exceeds the bound")]
    Layout(f64),
    #[error("invalid packing file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CirclePacking {
    pub radius: Vec<f64>,
    pub center: Vec<[f64; 2]>,
    pub angle_error: f64,
    pub tangency_error: f64,
    pub sweeps: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct CircleRecord {
    vertex: usize,
    radius: f64,
    cx: f64,
    cy: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingOptions {
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for PackingOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_sweeps: DEFAULT_SWEEPS,
        }
    }
}

/// Angle at a circle of radius `rv` in the triangle formed with tangent
/// circles of radii `ra` and `rb`.
#[inline]
pub fn corner_angle(rv: f64, ra: f64, rb: f64) -> f64 {
    let s = (ra * rb / ((rv + ra) * (rv + rb))).sqrt();
    2.0 * s.min(1.0).asin()
}

/// Angle sum at interior vertex `v`.
pub fn angle_sum(t: &Triangulation, radius: &[f64], v: usize) -> f64 {
    let nb = t.neighbors(v);
    let k = nb.len();
    (0..k)
        .map(|i| corner_angle(radius[v], radius[nb[i]], radius[nb[(i + 1) % k]]))
        .sum()
}

fn max_angle_error(t: &Triangulation, radius: &[f64], interior: &[usize]) -> (usize, f64) {
    interior
        .iter()
        .map(|&v| (v, (angle_sum(t, radius, v) - 2.0 * PI).abs()))
        .fold((usize::MAX, 0.0), |a, b| if b.1 > a.1 { b } else { a })
}

/// Packs `t` with the given boundary radii (in boundary-cycle order; all 1
/// when `None`).
pub fn pack(
    t: &Triangulation,
    boundary_radii: Option<&[f64]>,
    opts: PackingOptions,
) -> Result<CirclePacking, PackingError> {
    if !(opts.tol > 0.0) {
        return Err(PackingError::BadTolerance(opts.tol));
    }
    let n = t.vertex_count();
    let mut radius = vec![1.0; n];
    if let Some(b) = boundary_radii {
        if b.len() != t.boundary().len() {
            return Err(PackingError::RadiiCount {
                expected: t.boundary().len(),
                got: b.len(),
            });
        }
        if b.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(PackingError::BadRadius);
        }
        for (&v, &r) in t.boundary().iter().zip(b) {
            radius[v] = r;
        }
    }
    let on_boundary = t.boundary_mask();
    let interior: Vec<usize> = (0..n).filter(|&v| !on_boundary[v]).collect();

    // Angle residuals add up along layout paths, so relax well past `tol`
    // and stop early only once progress stalls.
    let target = (opts.tol * 1e-2).max(1e-14);
    let mut sweeps = 0;
    let mut last = f64::INFINITY;
    let mut stalled = 0;
    let (mut worst, mut err) = max_angle_error(t, &radius, &interior);
    while err > target && !(err <= opts.tol && stalled >= 20) {
        if sweeps >= opts.max_sweeps {
            return Err(PackingError::Budget {
                sweeps,
                vertex: worst,
                error: err,
            });
        }
        for &v in &interior {
            let k = t.degree(v) as f64;
            let theta = angle_sum(t, &radius, v);
            let beta = (theta / (2.0 * k)).sin();
            let delta = (PI / k).sin();
            let equiv = radius[v] * beta / (1.0 - beta);
            radius[v] = equiv * (1.0 - delta) / delta;
        }
        sweeps += 1;
        (worst, err) = max_angle_error(t, &radius, &interior);
        if err > last {
            log::debug!("angle error rose from {last:e} to {err:e} at sweep {sweeps}");
        }
        stalled = if err < 0.9 * last { 0 } else { stalled + 1 };
        last = err;
    }

    let center = layout(t, &radius);
    let tangency_error = tangency_error(t, &radius, &center);
    if !(tangency_error <= 1e3 * opts.tol.max(1e-12)) {
        return Err(PackingError::Layout(tangency_error));
    }
    Ok(CirclePacking {
        radius,
        center,
        angle_error: err,
        tangency_error,
        sweeps,
    })
}

/// Places vertex 0 at the origin and its first neighbour on the positive
/// x-axis, then walks across triangles.
fn layout(t: &Triangulation, radius: &[f64]) -> Vec<[f64; 2]> {
    let n = t.vertex_count();
    let mut third: HashMap<(usize, usize), usize> = HashMap::new();
    for [a, b, c] in t.triangles() {
        third.insert((a, b), c);
        third.insert((b, c), a);
        third.insert((c, a), b);
    }
    let mut center = vec![[f64::NAN; 2]; n];
    let root = 0;
    let first = t.neighbors(root)[0];
    center[root] = [0.0, 0.0];
    center[first] = [radius[root] + radius[first], 0.0];
    let mut placed = vec![false; n];
    placed[root] = true;
    placed[first] = true;
    let mut queue = VecDeque::from([(root, first), (first, root)]);
    while let Some((a, b)) = queue.pop_front() {
        let Some(&c) = third.get(&(a, b)) else { continue };
        if !placed[c] {
            let ang = corner_angle(radius[a], radius[b], radius[c]);
            let [ax, ay] = center[a];
            let [bx, by] = center[b];
            let base = (by - ay).atan2(bx - ax) + ang;
            let d = radius[a] + radius[c];
            center[c] = [ax + d * base.cos(), ay + d * base.sin()];
            placed[c] = true;
            queue.push_back((c, b));
            queue.push_back((a, c));
        }
        queue.push_back((b, c));
        queue.push_back((c, a));
        // Each directed edge only needs one visit.
        third.remove(&(a, b));
    }
    center
}

fn tangency_error(t: &Triangulation, radius: &[f64], center: &[[f64; 2]]) -> f64 {
    t.embedding()
        .edges()
        .into_iter()
        .map(|(u, v)| {
            let d = ((center[u][0] - center[v][0]).powi(2) + (center[u][1] - center[v][1]).powi(2)).sqrt();
            let s = radius[u] + radius[v];
            (d - s).abs() / s
        })
        .fold(0.0, f64::max)
}

/// Error maxima recomputed from radii and centers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingReport {
    pub angle_error: f64,
    pub tangency_error: f64,
    /// Largest relative overlap `(r_u + r_v - |c_u - c_v|) / (r_u + r_v)`
    /// between non-adjacent circles.
    pub overlap: f64,
}

pub fn validate_packing(p: &CirclePacking, t: &Triangulation) -> PackingReport {
    let on_boundary = t.boundary_mask();
    let interior: Vec<usize> = (0..t.vertex_count()).filter(|&v| !on_boundary[v]).collect();
    let (_, angle_error) = max_angle_error(t, &p.radius, &interior);
    PackingReport {
        angle_error,
        tangency_error: tangency_error(t, &p.radius, &p.center),
        overlap: non_adjacent_overlap(p, t),
    }
}

/// Spatial hash with cells of the largest diameter, so only neighbouring
/// cells need checking.
fn non_adjacent_overlap(p: &CirclePacking, t: &Triangulation) -> f64 {
    let cell = 2.0 * p.radius.iter().cloned().fold(0.0, f64::max);
    if !(cell > 0.0) {
        return 0.0;
    }
    let key = |c: [f64; 2]| ((c[0] / cell).floor() as i64, (c[1] / cell).floor() as i64);
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (v, &c) in p.center.iter().enumerate() {
        grid.entry(key(c)).or_default().push(v);
    }
    let mut worst: f64 = 0.0;
    for (u, &c) in p.center.iter().enumerate() {
        let (kx, ky) = key(c);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for &v in grid.get(&(kx + dx, ky + dy)).map_or(&[][..], Vec::as_slice) {
                    if v <= u || t.neighbors(u).contains(&v) {
                        continue;
                    }
                    let d = ((c[0] - p.center[v][0]).powi(2) + (c[1] - p.center[v][1]).powi(2)).sqrt();
                    let s = p.radius[u] + p.radius[v];
                    worst = worst.max((s - d) / s);
                }
            }
        }
    }
    worst
}

impl CirclePacking {
    pub fn to_json(&self) -> String {
        let recs: Vec<CircleRecord> = (0..self.radius.len())
            .map(|v| CircleRecord {
                vertex: v,
                radius: self.radius[v],
                cx: self.center[v][0],
                cy: self.center[v][1],
            })
            .collect();
        serde_json::to_string_pretty(&recs).expect("plain data serializes")
    }

    /// Reads circles back; error fields are left at zero.
    pub fn from_json(text: &str) -> Result<Self, PackingError> {
        let mut recs: Vec<CircleRecord> =
            serde_json::from_str(text).map_err(|e| PackingError::Parse(e.to_string()))?;
        recs.sort_by_key(|r| r.vertex);
        if recs.iter().enumerate().any(|(i, r)| r.vertex != i) {
            return Err(PackingError::Parse("vertex ids must be 0..V-1".into()));
        }
        Ok(Self {
            radius: recs.iter().map(|r| r.radius).collect(),
            center: recs.iter().map(|r| [r.cx, r.cy]).collect(),
            angle_error: 0.0,
            tangency_error: 0.0,
            sweeps: 0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wheel(k: usize) -> Triangulation {
        let tris: Vec<[usize; 3]> = (0..k).map(|i| [0, 1 + i, 1 + (i + 1) % k]).collect();
        Triangulation::from_triangles(k + 1, &tris).unwrap()
    }

    #[test]
    fn wheel6_hub_is_one() {
        let p = pack(&wheel(6), None, PackingOptions::default()).unwrap();
        assert!((p.radius[0] - 1.0).abs() < 1e-10);
        assert!(validate_packing(&p, &wheel(6)).angle_error < 1e-10);
    }

    #[test]
    fn wheel7_hub() {
        let p = pack(&wheel(7), None, PackingOptions::default()).unwrap();
        let expect = 1.0 / (PI / 7.0).sin() - 1.0;
        assert!((p.radius[0] - expect).abs() < 1e-9);
    }

    #[test]
    fn triangle_345() {
        let t = Triangulation::from_triangles(3, &[[0, 1, 2]]).unwrap();
        let radii: Vec<f64> = t
            .boundary()
            .iter()
            .map(|&v| [1.0, 2.0, 3.0][v])
            .collect();
        let p = pack(&t, Some(&radii), PackingOptions::default()).unwrap();
        let d = |a: usize, b: usize| {
            ((p.center[a][0] - p.center[b][0]).powi(2) + (p.center[a][1] - p.center[b][1]).powi(2)).sqrt()
        };
        let mut sides = [d(0, 1), d(1, 2), d(0, 2)];
        sides.sort_by(f64::total_cmp);
        for (s, e) in sides.iter().zip([3.0, 4.0, 5.0]) {
            assert!((s - e).abs() < 1e-12);
        }
        assert_eq!(validate_packing(&p, &t).angle_error, 0.0);
    }

    #[test]
    fn perturbation_is_detected() {
        let t = wheel(6);
        let mut p = pack(&t, None, PackingOptions::default()).unwrap();
        p.radius[0] *= 1.01;
        assert!(validate_packing(&p, &t).angle_error > 1e-3);
    }
}
