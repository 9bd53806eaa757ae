//! Bernoulli site percolation on triangulations.
//!
//! Site `v` in a trial with seed `s` is open iff `seed::uniform(s, v) < p`.
//! The uniform variable depends only on `(s, v)`, so configurations at
//! different `p` are coupled monotonically and trials can run in any order.

use std::collections::VecDeque;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use thiserror::Error;

use crate::harness::runner::Runner;
use crate::harness::seed;
use crate::harness::stats::{EstimateWithCI, MeanWithCI};
use crate::triangulation::{ball, Triangulation, TriangulationError, UNREACHED};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PercolationError {
    #[error("radius {requested} exceeds the available radius {available} around the center")]
    RadiusUnavailable { requested: usize, available: usize },
    #[error("boundary arcs invalid: {0}")]
    BadArcs(String),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("empty parameter grid")]
    EmptyGrid,
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

fn check_p(p: f64) -> Result<(), PercolationError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(PercolationError::BadProbability(p))
    }
}

#[inline]
pub fn is_open(trial_seed: u64, v: usize, p: f64) -> bool {
    seed::uniform(trial_seed, v as u64) < p
}

#[derive(Debug, Clone, PartialEq)]
pub struct SiteConfiguration {
    pub open: Vec<bool>,
    pub p: f64,
    pub seed: u64,
}

pub fn sample_sites(vertex_count: usize, p: f64, seed: u64) -> SiteConfiguration {
    SiteConfiguration {
        open: (0..vertex_count).map(|v| is_open(seed, v, p)).collect(),
        p,
        seed,
    }
}

impl SiteConfiguration {
    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }
}

/// Weighted quick-union with path halving.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Open clusters. Labels are dense, in order of each cluster's smallest vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterLabeling {
    pub label: Vec<Option<usize>>,
    pub sizes: Vec<usize>,
}

pub fn clusters(neighbors: &[Vec<usize>], config: &SiteConfiguration) -> ClusterLabeling {
    let n = neighbors.len();
    assert_eq!(n, config.open.len(), "configuration does not match graph");
    let mut uf = UnionFind::new(n);
    for u in 0..n {
        if !config.open[u] {
            continue;
        }
        for &v in &neighbors[u] {
            if v > u && config.open[v] {
                uf.union(u, v);
            }
        }
    }
    let mut root_label = vec![usize::MAX; n];
    let mut label = vec![None; n];
    let mut sizes = Vec::new();
    for v in 0..n {
        if !config.open[v] {
            continue;
        }
        let r = uf.find(v);
        if root_label[r] == usize::MAX {
            root_label[r] = sizes.len();
            sizes.push(0);
        }
        label[v] = Some(root_label[r]);
        sizes[root_label[r]] += 1;
    }
    ClusterLabeling { label, sizes }
}

/// Explores the open cluster of a fixed center inside a ball.
#[derive(Debug, Clone)]
pub struct OneArm<'a> {
    neighbors: &'a [Vec<usize>],
    center: usize,
    distance: Vec<usize>,
    r_max: usize,
}

impl<'a> OneArm<'a> {
    pub fn new(t: &'a Triangulation, center: usize, r_max: usize) -> Result<Self, PercolationError> {
        if center >= t.vertex_count() {
            return Err(TriangulationError::NoSuchVertex(center).into());
        }
        let distance = t.distances_from(center);
        let available = t.boundary().iter().map(|&b| distance[b]).min().unwrap_or(0);
        if r_max > available {
            return Err(PercolationError::RadiusUnavailable {
                requested: r_max,
                available,
            });
        }
        Ok(Self {
            neighbors: t.rotation(),
            center,
            distance,
            r_max,
        })
    }

    /// Largest distance reached by the center's open cluster within
    /// `B_{r_max}`; `None` when the center is closed.
    pub fn reach(&self, p: f64, trial_seed: u64) -> Option<usize> {
        if !is_open(trial_seed, self.center, p) {
            return None;
        }
        let mut seen = vec![false; self.neighbors.len()];
        let mut queue = VecDeque::new();
        seen[self.center] = true;
        queue.push_back(self.center);
        let mut best = 0;
        while let Some(u) = queue.pop_front() {
            best = best.max(self.distance[u]);
            if best == self.r_max {
                break;
            }
            for &v in &self.neighbors[u] {
                if !seen[v] && self.distance[v] <= self.r_max {
                    seen[v] = true;
                    if is_open(trial_seed, v, p) {
                        queue.push_back(v);
                    }
                }
            }
        }
        Some(best)
    }
}

/// Probability that the center is open and its open cluster meets `∂B_r`.
pub fn one_arm_probability(
    t: &Triangulation,
    center: usize,
    r: usize,
    p: f64,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<EstimateWithCI, PercolationError> {
    Ok(one_arm_curve(t, center, &[r], p, trials, seed, runner)?[0].1)
}

/// One-arm estimates at several radii from the same trials.
pub fn one_arm_curve(
    t: &Triangulation,
    center: usize,
    radii: &[usize],
    p: f64,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<Vec<(usize, EstimateWithCI)>, PercolationError> {
    check_p(p)?;
    let r_max = *radii.iter().max().ok_or(PercolationError::EmptyGrid)?;
    let arm = OneArm::new(t, center, r_max)?;
    let reach = runner.map(0..trials, |i| arm.reach(p, seed::trial_seed(seed, "one-arm", i)));
    Ok(radii
        .iter()
        .map(|&r| {
            let hits = reach.iter().filter(|x| x.is_some_and(|d| d >= r)).count() as u64;
            (r, EstimateWithCI::from_counts(hits, trials))
        })
        .collect())
}

/// Number of open clusters inside `B_r` whose diameter is at least `r / 2`.
///
/// Diameters use the double-sweep eccentricity: BFS from any cluster vertex,
/// then BFS again from the farthest vertex found.
pub fn macroscopic_cluster_count(
    t: &Triangulation,
    center: usize,
    r: usize,
    p: f64,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<MeanWithCI, PercolationError> {
    check_p(p)?;
    let dist = t.distances_from(center);
    let available = t.boundary().iter().map(|&b| dist[b]).min().unwrap_or(0);
    if r > available {
        return Err(PercolationError::RadiusUnavailable {
            requested: r,
            available,
        });
    }
    let counts = runner.map(0..trials, |i| {
        let s = seed::trial_seed(seed, "macro-clusters", i);
        macroscopic_count_one(t.rotation(), &dist, r, |v| is_open(s, v, p)) as f64
    });
    Ok(MeanWithCI::from_samples(&counts))
}

pub(crate) fn macroscopic_count_one<F: Fn(usize) -> bool>(
    neighbors: &[Vec<usize>],
    dist: &[usize],
    r: usize,
    open: F,
) -> usize {
    let n = neighbors.len();
    let inside: Vec<bool> = (0..n).map(|v| dist[v] <= r && open(v)).collect();
    let mut label = vec![usize::MAX; n];
    let mut count = 0;
    let mut queue = VecDeque::new();
    let mut scratch = vec![UNREACHED; n];
    let mut touched = Vec::new();
    for s in 0..n {
        if !inside[s] || label[s] != usize::MAX {
            continue;
        }
        // Label the cluster and find a far vertex.
        label[s] = s;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in &neighbors[u] {
                if inside[v] && label[v] == usize::MAX {
                    label[v] = s;
                    queue.push_back(v);
                }
            }
        }
        let sweep = |from: usize, scratch: &mut Vec<usize>, touched: &mut Vec<usize>| {
            for &t in touched.iter() {
                scratch[t] = UNREACHED;
            }
            touched.clear();
            let mut q = VecDeque::new();
            scratch[from] = 0;
            touched.push(from);
            q.push_back(from);
            let mut far = (from, 0);
            while let Some(u) = q.pop_front() {
                if scratch[u] > far.1 {
                    far = (u, scratch[u]);
                }
                for &v in &neighbors[u] {
                    if label[v] == s && scratch[v] == UNREACHED {
                        scratch[v] = scratch[u] + 1;
                        touched.push(v);
                        q.push_back(v);
                    }
                }
            }
            far
        };
        let (far, _) = sweep(s, &mut scratch, &mut touched);
        let (_, ecc) = sweep(far, &mut scratch, &mut touched);
        if 2 * ecc >= r {
            count += 1;
        }
    }
    count
}

/// Four consecutive arcs of a boundary cycle, given by their start indices.
///
/// Arc `i` covers indices `starts[i], starts[i] + 1, ...` up to (excluding)
/// `starts[i + 1]`, cyclically. Arcs 1 and 3 (indices 0 and 2) must be
/// nonempty; the separating arcs may be empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryArcs {
    pub starts: [usize; 4],
    pub len: usize,
}

impl BoundaryArcs {
    pub fn new(starts: [usize; 4], len: usize) -> Result<Self, PercolationError> {
        if starts.iter().any(|&s| s >= len) {
            return Err(PercolationError::BadArcs(format!("start index beyond boundary length {len}")));
        }
        let off = |i: usize| (starts[i] + len - starts[0]) % len;
        let (o1, o2) = (off(1), off(2));
        let o3 = if starts[3] == starts[0] { len } else { off(3) };
        if !(0 < o1 && o1 <= o2 && o2 < o3 && o3 <= len) {
            return Err(PercolationError::BadArcs(format!(
                "starts {starts:?} are not in cyclic order with nonempty arcs 1 and 3"
            )));
        }
        Ok(Self { starts, len })
    }

    pub fn quarters(len: usize) -> Result<Self, PercolationError> {
        if len < 4 {
            return Err(PercolationError::BadArcs(format!("boundary of length {len} has no quarters")));
        }
        Self::new([0, len / 4, len / 2, 3 * len / 4], len)
    }

    pub fn arc_len(&self, i: usize) -> usize {
        let a = self.starts[i];
        let b = self.starts[(i + 1) % 4];
        let l = (b + self.len - a) % self.len;
        if i == 3 && l == 0 {
            0
        } else if l == 0 && i != 3 {
            // Only empty separating arcs have equal starts.
            0
        } else {
            l
        }
    }

    /// Boundary vertices of each arc.
    pub fn members(&self, boundary: &[usize]) -> [Vec<usize>; 4] {
        std::array::from_fn(|i| {
            (0..self.arc_len(i))
                .map(|k| boundary[(self.starts[i] + k) % self.len])
                .collect()
        })
    }
}

/// A triangulated disk with four marked boundary arcs and a center vertex.
#[derive(Debug, Clone)]
pub struct CrossingDomain {
    pub triangulation: Triangulation,
    pub arcs: BoundaryArcs,
    pub center: usize,
}

impl CrossingDomain {
    /// The ball `B_r(center)` of `t` with the given arcs on its boundary.
    /// `arcs = None` cuts the boundary in quarters.
    pub fn from_ball(
        t: &Triangulation,
        center: usize,
        r: usize,
        arcs: Option<[usize; 4]>,
    ) -> Result<Self, PercolationError> {
        let b = ball(t, center, r)?;
        let tri = b.triangulation.ok_or(PercolationError::RadiusUnavailable {
            requested: r,
            available: 0,
        })?;
        let len = tri.boundary().len();
        let arcs = match arcs {
            Some(s) => BoundaryArcs::new(s, len)?,
            None => BoundaryArcs::quarters(len)?,
        };
        Ok(Self {
            triangulation: tri,
            arcs,
            center: 0,
        })
    }

    fn arc_masks(&self) -> (Vec<bool>, Vec<bool>) {
        let n = self.triangulation.vertex_count();
        let m = self.arcs.members(self.triangulation.boundary());
        let mut from = vec![false; n];
        let mut to = vec![false; n];
        m[0].iter().for_each(|&v| from[v] = true);
        m[2].iter().for_each(|&v| to[v] = true);
        (from, to)
    }

    /// Whether an open path joins arc 1 to arc 3.
    pub fn crosses<F: Fn(usize) -> bool>(&self, open: F) -> bool {
        let (from, to) = self.arc_masks();
        crosses_with(self.triangulation.rotation(), &from, &to, open)
    }
}

pub(crate) fn crosses_with<F: Fn(usize) -> bool>(
    neighbors: &[Vec<usize>],
    from: &[bool],
    to: &[bool],
    open: F,
) -> bool {
    let n = neighbors.len();
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for v in 0..n {
        if from[v] && open(v) {
            if to[v] {
                return true;
            }
            seen[v] = true;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &v in &neighbors[u] {
            if !seen[v] {
                seen[v] = true;
                if open(v) {
                    if to[v] {
                        return true;
                    }
                    queue.push_back(v);
                }
            }
        }
    }
    false
}

/// Probability of an open crossing from arc 1 to arc 3 of a domain.
pub fn arc_crossing_probability(
    domain: &CrossingDomain,
    p: f64,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<EstimateWithCI, PercolationError> {
    check_p(p)?;
    let (from, to) = domain.arc_masks();
    let nb = domain.triangulation.rotation();
    let hits = runner.map(0..trials, |i| {
        let s = seed::trial_seed(seed, "arc-cross", i);
        crosses_with(nb, &from, &to, |v| is_open(s, v, p))
    });
    Ok(EstimateWithCI::from_outcomes(hits))
}

/// Crossing probability between two arcs of the boundary of `B_r(center)`.
#[allow(clippy::too_many_arguments)]
pub fn boundary_arc_crossing(
    t: &Triangulation,
    center: usize,
    r: usize,
    arcs: Option<[usize; 4]>,
    p: f64,
    trials: u64,
    seed: u64,
    runner: &Runner,
) -> Result<EstimateWithCI, PercolationError> {
    let domain = CrossingDomain::from_ball(t, center, r, arcs)?;
    arc_crossing_probability(&domain, p, trials, seed, runner)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub size: usize,
    pub p: f64,
    pub crossing: EstimateWithCI,
    /// Radius used for the one-arm columns: distance from the domain center
    /// to its boundary.
    pub arm_radius: usize,
    pub one_arm: EstimateWithCI,
    pub one_arm_half: EstimateWithCI,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcEstimate {
    pub value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcSweep {
    pub rows: Vec<SweepRow>,
    /// Where the crossing curve of the largest domain passes 1/2.
    pub pc_crossing: Option<PcEstimate>,
    /// Where the arm persistence `P(reach r) / P(reach r/2)` of the largest
    /// domain passes 1/2. Unlike the crossing intercept this does not sit at
    /// the self-dual point of a triangulation.
    pub pc_arm: Option<f64>,
}

/// Linear interpolation of the first upward passage of `ys` through `level`.
pub fn intercept(ps: &[f64], ys: &[f64], level: f64) -> Option<f64> {
    let i = ys.iter().position(|&y| y >= level)?;
    if i == 0 {
        return Some(ps[0]);
    }
    let (p0, p1, y0, y1) = (ps[i - 1], ps[i], ys[i - 1], ys[i]);
    Some(p0 + (level - y0) * (p1 - p0) / (y1 - y0))
}

/// Crossing and one-arm table over a family of domains and a grid of `p`.
///
/// Trials share seeds across `p` and sizes, so every row is a monotone
/// function of `p` trial by trial.
pub fn pc_sweep(
    domains: &[(usize, CrossingDomain)],
    p_grid: &[f64],
    trials: u64,
    seed: u64,
    bootstrap: usize,
    runner: &Runner,
) -> Result<PcSweep, PercolationError> {
    if domains.is_empty() || p_grid.is_empty() {
        return Err(PercolationError::EmptyGrid);
    }
    for &p in p_grid {
        check_p(p)?;
    }
    let mut rows = Vec::new();
    for (size, dom) in domains {
        let t = &dom.triangulation;
        let arm_radius = t.distance_to_boundary(dom.center);
        let half = arm_radius / 2;
        let arm = OneArm::new(t, dom.center, arm_radius)?;
        let (from, to) = dom.arc_masks();
        for &p in p_grid {
            let out = runner.map(0..trials, |i| {
                let s = seed::trial_seed(seed, "pc-sweep", i);
                let cross = crosses_with(t.rotation(), &from, &to, |v| is_open(s, v, p));
                let reach = arm.reach(p, s);
                (cross, reach.is_some_and(|d| d >= arm_radius), reach.is_some_and(|d| d >= half))
            });
            rows.push(SweepRow {
                size: *size,
                p,
                crossing: EstimateWithCI::from_outcomes(out.iter().map(|o| o.0)),
                arm_radius,
                one_arm: EstimateWithCI::from_outcomes(out.iter().map(|o| o.1)),
                one_arm_half: EstimateWithCI::from_outcomes(out.iter().map(|o| o.2)),
            });
        }
    }
    let largest = domains.iter().map(|d| d.0).max().expect("nonempty");
    let top: Vec<&SweepRow> = rows.iter().filter(|r| r.size == largest).collect();
    let ps: Vec<f64> = top.iter().map(|r| r.p).collect();
    let ys: Vec<f64> = top.iter().map(|r| r.crossing.estimate).collect();
    let pc_crossing = intercept(&ps, &ys, 0.5).map(|value| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed::substream(seed, "bootstrap"));
        let mut reps: Vec<f64> = (0..bootstrap)
            .filter_map(|_| {
                let resampled: Vec<f64> = ys
                    .iter()
                    .map(|&y| {
                        let b = Binomial::new(trials, y.clamp(0.0, 1.0)).expect("valid binomial");
                        b.sample(&mut rng) as f64 / trials as f64
                    })
                    .collect();
                intercept(&ps, &resampled, 0.5)
            })
            .collect();
        reps.sort_by(f64::total_cmp);
        let q = |f: f64| {
            if reps.is_empty() {
                value
            } else {
                reps[((reps.len() - 1) as f64 * f).round() as usize]
            }
        };
        PcEstimate {
            value,
            ci_lo: q(0.025),
            ci_hi: q(0.975),
        }
    });
    let persistence: Vec<f64> = top
        .iter()
        .map(|r| {
            if r.one_arm_half.estimate > 0.0 {
                r.one_arm.estimate / r.one_arm_half.estimate
            } else {
                0.0
            }
        })
        .collect();
    let pc_arm = intercept(&ps, &persistence, 0.5);
    Ok(PcSweep {
        rows,
        pc_crossing,
        pc_arm,
    })
}

/// Exact BFS labeling of open components, used to cross-check union-find.
pub fn bfs_components(neighbors: &[Vec<usize>], open: &[bool]) -> Vec<Option<usize>> {
    let mut label = vec![None; neighbors.len()];
    let mut next = 0;
    for s in 0..neighbors.len() {
        if !open[s] || label[s].is_some() {
            continue;
        }
        label[s] = Some(next);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &neighbors[u] {
                if open[v] && label[v].is_none() {
                    label[v] = Some(next);
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    label
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::triangular_lattice_disk;

    fn wheel6() -> Triangulation {
        let tris: Vec<[usize; 3]> = (0..6).map(|i| [0, 1 + i, 1 + (i + 1) % 6]).collect();
        Triangulation::from_triangles(7, &tris).unwrap()
    }

    #[test]
    fn extreme_probabilities() {
        let c = sample_sites(10, 0.0, 3);
        assert_eq!(c.open_count(), 0);
        let c = sample_sites(10, 1.0, 3);
        assert_eq!(c.open_count(), 10);
    }

    #[test]
    fn triangle_all_open_is_one_cluster() {
        let nb = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
        let c = sample_sites(3, 1.0, 0);
        let l = clusters(&nb, &c);
        assert_eq!(l.sizes, vec![3]);
    }

    #[test]
    fn alternating_six_cycle() {
        let nb: Vec<Vec<usize>> = (0..6).map(|i| vec![(i + 1) % 6, (i + 5) % 6]).collect();
        let cfg = SiteConfiguration {
            open: (0..6).map(|i| i % 2 == 0).collect(),
            p: 0.5,
            seed: 0,
        };
        assert_eq!(clusters(&nb, &cfg).sizes, vec![1, 1, 1]);
    }

    #[test]
    fn arcs_validation() {
        assert!(BoundaryArcs::new([0, 1, 3, 4], 6).is_ok());
        assert!(BoundaryArcs::new([0, 3, 1, 4], 6).is_err());
        assert!(BoundaryArcs::new([0, 0, 3, 4], 6).is_err());
        assert!(BoundaryArcs::new([0, 2, 2, 4], 6).is_ok());
        assert!(BoundaryArcs::new([2, 3, 4, 2], 6).is_ok());
        let a = BoundaryArcs::new([2, 3, 4, 2], 6).unwrap();
        assert_eq!((0..4).map(|i| a.arc_len(i)).collect::<Vec<_>>(), vec![1, 1, 4, 0]);
        assert!(BoundaryArcs::new([0, 1, 2, 9], 6).is_err());
    }

    #[test]
    fn one_arm_radius_check() {
        let t = wheel6();
        let err = one_arm_probability(&t, 0, 2, 0.5, 10, 0, &Runner::serial()).unwrap_err();
        assert!(matches!(err, PercolationError::RadiusUnavailable { requested: 2, available: 1 }));
    }

    #[test]
    fn one_arm_p_one() {
        let t = triangular_lattice_disk(6).unwrap();
        let e = one_arm_probability(&t, 0, 6, 1.0, 50, 1, &Runner::serial()).unwrap();
        assert_eq!(e.estimate, 1.0);
    }

    #[test]
    fn macroscopic_extremes() {
        let t = triangular_lattice_disk(4).unwrap();
        let r = Runner::serial();
        assert_eq!(macroscopic_cluster_count(&t, 0, 4, 1.0, 20, 0, &r).unwrap().mean, 1.0);
        assert_eq!(macroscopic_cluster_count(&t, 0, 4, 0.0, 20, 0, &r).unwrap().mean, 0.0);
    }

    #[test]
    fn intercept_interpolates() {
        assert_eq!(intercept(&[0.0, 1.0], &[0.0, 1.0], 0.5), Some(0.5));
        assert_eq!(intercept(&[0.2, 0.4], &[0.1, 0.2], 0.5), None);
    }
}
