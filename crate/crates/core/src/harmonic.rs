//! Dirichlet problems on graphs with edge conductances.
//!
//! Potentials at free vertices solve the reduced Laplacian system by
//! Jacobi-preconditioned conjugate gradients. Dot products are summed in
//! vertex order, so results do not depend on thread count.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::triangulation::{bfs_distances, Triangulation};

pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarmonicError {
    #[error("no boundary vertices")]
    NoBoundary,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("vertex {0} out of range")]
    NoSuchVertex(usize),
    #[error("vertex {vertex} lies in a component without boundary vertices")]
    Disconnected { vertex: usize },
    #[error("no convergence after {iterations} iterations, residual {residual:e}")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("source and sink sets must be nonempty")]
    EmptyTerminals,
    #[error("vertex {0} is both a source and a sink")]
    OverlappingTerminals(usize),
    #[error("r_max too small: need at least 4, got {0}")]
    RmaxTooSmall(usize),
    #[error("radius {requested} exceeds the available radius {available}")]
    RadiusUnavailable { requested: usize, available: usize },
}

/// Unit-conductance graph or one with per-edge conductances aligned with
/// the adjacency lists.
#[derive(Debug, Clone, Copy)]
pub struct Network<'a> {
    pub neighbors: &'a [Vec<usize>],
    pub conductance: Option<&'a [Vec<f64>]>,
}

impl<'a> Network<'a> {
    pub fn unit(neighbors: &'a [Vec<usize>]) -> Self {
        Self {
            neighbors,
            conductance: None,
        }
    }

    #[inline]
    fn c(&self, u: usize, k: usize) -> f64 {
        self.conductance.map_or(1.0, |c| c[u][k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicSolution {
    pub potential: Vec<f64>,
    /// `current[u][k]` flows from `u` to `neighbors[u][k]`.
    pub current: Vec<Vec<f64>>,
    pub energy: f64,
    /// Largest net current at a free vertex.
    pub residual: f64,
    pub iterations: usize,
}

impl HarmonicSolution {
    /// Net current leaving `v`.
    pub fn net_current(&self, v: usize) -> f64 {
        self.current[v].iter().sum()
    }
}

pub fn solve_dirichlet(
    neighbors: &[Vec<usize>],
    boundary: &[(usize, f64)],
    tol: f64,
) -> Result<HarmonicSolution, HarmonicError> {
    solve_network(Network::unit(neighbors), boundary, tol)
}

pub fn solve_network(
    net: Network<'_>,
    boundary: &[(usize, f64)],
    tol: f64,
) -> Result<HarmonicSolution, HarmonicError> {
    let n = net.neighbors.len();
    if !(tol > 0.0) {
        return Err(HarmonicError::BadTolerance(tol));
    }
    if boundary.is_empty() {
        return Err(HarmonicError::NoBoundary);
    }
    let mut fixed = vec![None; n];
    for &(v, x) in boundary {
        *fixed.get_mut(v).ok_or(HarmonicError::NoSuchVertex(v))? = Some(x);
    }
    check_reachable(net.neighbors, &fixed)?;

    // Compact indices of free vertices.
    let free: Vec<usize> = (0..n).filter(|&v| fixed[v].is_none()).collect();
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in free.iter().enumerate() {
        slot[v] = i;
    }
    let m = free.len();
    let mut diag = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for (i, &v) in free.iter().enumerate() {
        for (k, &w) in net.neighbors[v].iter().enumerate() {
            let c = net.c(v, k);
            diag[i] += c;
            if let Some(x) = fixed[w] {
                rhs[i] += c * x;
            }
        }
    }
    let apply = |p: &[f64], out: &mut [f64]| {
        for (i, &v) in free.iter().enumerate() {
            let mut acc = diag[i] * p[i];
            for (k, &w) in net.neighbors[v].iter().enumerate() {
                if slot[w] != usize::MAX {
                    acc -= net.c(v, k) * p[slot[w]];
                }
            }
            out[i] = acc;
        }
    };

    let start = boundary.iter().map(|b| b.1).sum::<f64>() / boundary.len() as f64;
    let mut x = vec![start; m];
    let budget = 20 * n.max(1);
    let mut iterations = 0;
    let mut residual;
    let mut r = vec![0.0; m];
    let mut ap = vec![0.0; m];
    loop {
        // (Re)start from the true residual.
        apply(&x, &mut ap);
        for i in 0..m {
            r[i] = rhs[i] - ap[i];
        }
        residual = max_abs(&r);
        if residual <= tol {
            break;
        }
        if iterations >= budget {
            return Err(HarmonicError::NonConvergence {
                iterations,
                residual,
            });
        }
        let mut z: Vec<f64> = (0..m).map(|i| r[i] / diag[i]).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        while iterations < budget {
            iterations += 1;
            apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                break;
            }
            let alpha = rz / pap;
            for i in 0..m {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            // Stop a little below tol so the true residual usually passes.
            if max_abs(&r) <= 0.25 * tol {
                break;
            }
            for i in 0..m {
                z[i] = r[i] / diag[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..m {
                p[i] = z[i] + beta * p[i];
            }
        }
    }

    let potential: Vec<f64> = (0..n)
        .map(|v| fixed[v].unwrap_or_else(|| x[slot[v]]))
        .collect();
    Ok(finish(net, potential, residual, iterations))
}

fn finish(net: Network<'_>, potential: Vec<f64>, residual: f64, iterations: usize) -> HarmonicSolution {
    let mut energy = 0.0;
    let current: Vec<Vec<f64>> = net
        .neighbors
        .iter()
        .enumerate()
        .map(|(u, nb)| {
            nb.iter()
                .enumerate()
                .map(|(k, &v)| {
                    let i = net.c(u, k) * (potential[u] - potential[v]);
                    if u < v {
                        energy += i * (potential[u] - potential[v]);
                    }
                    i
                })
                .collect()
        })
        .collect();
    HarmonicSolution {
        potential,
        current,
        energy,
        residual,
        iterations,
    }
}

fn check_reachable(neighbors: &[Vec<usize>], fixed: &[Option<f64>]) -> Result<(), HarmonicError> {
    let mut seen: Vec<bool> = fixed.iter().map(Option::is_some).collect();
    let mut queue: VecDeque<usize> = (0..neighbors.len()).filter(|&v| seen[v]).collect();
    while let Some(u) = queue.pop_front() {
        for &v in &neighbors[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(vertex) => Err(HarmonicError::Disconnected { vertex }),
        None => Ok(()),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Effective resistance computed two ways from the same solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Resistance {
    /// Unit potential gap over the total current.
    pub by_current: f64,
    /// Unit potential gap squared over the Dirichlet energy.
    pub by_energy: f64,
    pub solution: HarmonicSolution,
}

impl Resistance {
    pub fn value(&self) -> f64 {
        self.by_current
    }
}

/// Sources are held at potential 0 and sinks at 1.
pub fn effective_resistance(
    neighbors: &[Vec<usize>],
    sources: &[usize],
    sinks: &[usize],
    tol: f64,
) -> Result<Resistance, HarmonicError> {
    effective_resistance_network(Network::unit(neighbors), sources, sinks, tol)
}

pub fn effective_resistance_network(
    net: Network<'_>,
    sources: &[usize],
    sinks: &[usize],
    tol: f64,
) -> Result<Resistance, HarmonicError> {
    if sources.is_empty() || sinks.is_empty() {
        return Err(HarmonicError::EmptyTerminals);
    }
    if let Some(&v) = sources.iter().find(|v| sinks.contains(v)) {
        return Err(HarmonicError::OverlappingTerminals(v));
    }
    let boundary: Vec<(usize, f64)> = sources
        .iter()
        .map(|&s| (s, 0.0))
        .chain(sinks.iter().map(|&t| (t, 1.0)))
        .collect();
    let solution = solve_network(net, &boundary, tol)?;
    // Current enters the sources from the rest of the network.
    let total: f64 = sources.iter().map(|&s| -solution.net_current(s)).sum();
    Ok(Resistance {
        by_current: 1.0 / total,
        by_energy: 1.0 / solution.energy,
        solution,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkVerdict {
    RecurrentLike,
    TransientLike,
}

impl std::fmt::Display for WalkVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            WalkVerdict::RecurrentLike => "recurrent-like",
            WalkVerdict::TransientLike => "transient-like",
        })
    }
}

/// Resistance from a center to the sphere of radius `r`, for `r = 1, 2, ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResistanceCurve {
    pub points: Vec<(usize, f64)>,
}

impl ResistanceCurve {
    pub fn at(&self, r: usize) -> Option<f64> {
        self.points.iter().find(|p| p.0 == r).map(|p| p.1)
    }

    /// `R(r) - R(r / 2)`.
    pub fn doubling_increment(&self, r: usize) -> Option<f64> {
        Some(self.at(r)? - self.at(r / 2)?)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,R_eff\n");
        for (r, x) in &self.points {
            let _ = writeln!(s, "{r},{x}");
        }
        s
    }
}

/// Resistance between `center` and `∂B_r(center)` for one radius.
pub fn ball_resistance(
    t: &Triangulation,
    dist: &[usize],
    center: usize,
    r: usize,
    tol: f64,
) -> Result<f64, HarmonicError> {
    let keep: Vec<usize> = (0..t.vertex_count()).filter(|&v| dist[v] <= r).collect();
    let mut slot = vec![usize::MAX; t.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        slot[v] = i;
    }
    let nb: Vec<Vec<usize>> = keep
        .iter()
        .map(|&v| {
            t.neighbors(v)
                .iter()
                .filter(|&&w| slot[w] != usize::MAX)
                .map(|&w| slot[w])
                .collect()
        })
        .collect();
    let sphere: Vec<usize> = keep.iter().filter(|&&v| dist[v] == r).map(|&v| slot[v]).collect();
    Ok(effective_resistance(&nb, &[slot[center]], &sphere, tol)?.value())
}

/// Heuristic transience verdict from the resistance curve: transient-like
/// iff `R(r_max) - R(r_max / 2) < 0.05 R(r_max / 2)`.
pub fn classify_walk(
    t: &Triangulation,
    center: usize,
    r_max: usize,
) -> Result<(ResistanceCurve, WalkVerdict), HarmonicError> {
    if r_max < 4 {
        return Err(HarmonicError::RmaxTooSmall(r_max));
    }
    if center >= t.vertex_count() {
        return Err(HarmonicError::NoSuchVertex(center));
    }
    let dist = bfs_distances(t.rotation(), center);
    let available = t.boundary().iter().map(|&b| dist[b]).min().unwrap_or(0);
    if r_max > available {
        return Err(HarmonicError::RadiusUnavailable {
            requested: r_max,
            available,
        });
    }
    let points = (1..=r_max)
        .map(|r| Ok((r, ball_resistance(t, &dist, center, r, DEFAULT_TOL)?)))
        .collect::<Result<Vec<_>, HarmonicError>>()?;
    let curve = ResistanceCurve { points };
    let half = curve.at(r_max / 2).expect("r_max / 2 >= 1");
    let verdict = if curve.at(r_max).expect("present") - half < 0.05 * half {
        WalkVerdict::TransientLike
    } else {
        WalkVerdict::RecurrentLike
    };
    Ok((curve, verdict))
}
