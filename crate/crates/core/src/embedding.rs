//! Combinatorial planar embeddings given by rotation systems.
//!
//! A rotation system lists, for every vertex, its neighbours in
//! counterclockwise order. Every directed edge (a *dart*) `u -> v` has a face
//! on its left; walking `u -> v -> w` where `w` precedes `u` in the rotation at
//! `v` keeps that face on the left, so interior faces are traced
//! counterclockwise and the outer face clockwise.

/// Dart-indexed view of a rotation system.
#[derive(Debug, Clone)]
pub struct Embedding {
    rotation: Vec<Vec<usize>>,
    offset: Vec<usize>,
    tail: Vec<usize>,
    twin: Vec<usize>,
}

/// Faces traced from an [`Embedding`].
#[derive(Debug, Clone)]
pub struct Faces {
    /// Vertex cycle of each face, in traversal order.
    pub cycles: Vec<Vec<usize>>,
    /// Face on the left of each dart.
    pub left_of: Vec<usize>,
}

impl Embedding {
    /// Builds the dart structure. Returns `None` when the rotation system is
    /// not symmetric (some `v` in `rot[u]` without `u` in `rot[v]`) or refers
    /// to a vertex out of range.
    pub fn new(rotation: Vec<Vec<usize>>) -> Option<Self> {
        let n = rotation.len();
        let mut offset = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for nbrs in &rotation {
            offset.push(acc);
            acc += nbrs.len();
        }
        offset.push(acc);
        let mut tail = Vec::with_capacity(acc);
        let mut twin = vec![usize::MAX; acc];
        for (u, nbrs) in rotation.iter().enumerate() {
            for _ in nbrs {
                tail.push(u);
            }
        }
        for (u, nbrs) in rotation.iter().enumerate() {
            for (k, &v) in nbrs.iter().enumerate() {
                if v >= n {
                    return None;
                }
                let j = rotation[v].iter().position(|&w| w == u)?;
                twin[offset[u] + k] = offset[v] + j;
            }
        }
        Some(Self {
            rotation,
            offset,
            tail,
            twin,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn dart_count(&self) -> usize {
        self.tail.len()
    }

    pub fn edge_count(&self) -> usize {
        self.tail.len() / 2
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    /// Dart id of `u -> rotation[u][k]`.
    pub fn dart(&self, u: usize, k: usize) -> usize {
        self.offset[u] + k
    }

    /// Dart id of `u -> v`, if the edge exists.
    pub fn find_dart(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation
            .get(u)?
            .iter()
            .position(|&w| w == v)
            .map(|k| self.offset[u] + k)
    }

    pub fn tail(&self, d: usize) -> usize {
        self.tail[d]
    }

    pub fn head(&self, d: usize) -> usize {
        self.tail[self.twin[d]]
    }

    pub fn twin(&self, d: usize) -> usize {
        self.twin[d]
    }

    /// The dart following `d` around the face on its left.
    pub fn next_in_face(&self, d: usize) -> usize {
        let t = self.twin[d];
        let v = self.tail[t];
        let j = t - self.offset[v];
        let deg = self.rotation[v].len();
        self.offset[v] + (j + deg - 1) % deg
    }

    /// Undirected edges as `(u, v)` with `u < v`, in dart order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for d in 0..self.dart_count() {
            let (u, v) = (self.tail(d), self.head(d));
            if u < v {
                out.push((u, v));
            }
        }
        out
    }

    pub fn faces(&self) -> Faces {
        let mut left_of = vec![usize::MAX; self.dart_count()];
        let mut cycles = Vec::new();
        for start in 0..self.dart_count() {
            if left_of[start] != usize::MAX {
                continue;
            }
            let id = cycles.len();
            let mut cycle = Vec::new();
            let mut d = start;
            loop {
                left_of[d] = id;
                cycle.push(self.tail(d));
                d = self.next_in_face(d);
                if d == start {
                    break;
                }
            }
            cycles.push(cycle);
        }
        Faces { cycles, left_of }
    }
}

/// Rotation system of a straight-line drawing: neighbours sorted by angle.
pub fn rotation_from_positions(positions: &[[f64; 2]], edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut rot = vec![Vec::new(); positions.len()];
    for &(u, v) in edges {
        rot[u].push(v);
        rot[v].push(u);
    }
    for (u, nbrs) in rot.iter_mut().enumerate() {
        let [x, y] = positions[u];
        nbrs.sort_by(|&a, &b| {
            let ta = (positions[a][1] - y).atan2(positions[a][0] - x);
            let tb = (positions[b][1] - y).atan2(positions[b][0] - x);
            ta.total_cmp(&tb)
        });
    }
    rot
}

/// Signed (shoelace) area of a vertex cycle in a drawing.
pub fn signed_area(positions: &[[f64; 2]], cycle: &[usize]) -> f64 {
    let mut a = 0.0;
    for i in 0..cycle.len() {
        let p = positions[cycle[i]];
        let q = positions[cycle[(i + 1) % cycle.len()]];
        a += p[0] * q[1] - q[0] * p[1];
    }
    a / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_has_two_faces() {
        let e = Embedding::new(vec![vec![1, 2], vec![2, 0], vec![0, 1]]).unwrap();
        let f = e.faces();
        assert_eq!(f.cycles.len(), 2);
        assert!(f.cycles.iter().all(|c| c.len() == 3));
    }

    #[test]
    fn asymmetric_rotation_rejected() {
        assert!(Embedding::new(vec![vec![1], vec![]]).is_none());
    }

    #[test]
    fn drawing_orientation() {
        let pos = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];
        let rot = rotation_from_positions(&pos, &[(0, 1), (1, 2), (0, 2)]);
        let e = Embedding::new(rot).unwrap();
        let f = e.faces();
        let areas: Vec<f64> = f.cycles.iter().map(|c| signed_area(&pos, c)).collect();
        assert!(areas.iter().any(|&a| (a - 0.5).abs() < 1e-12));
        assert!(areas.iter().any(|&a| (a + 0.5).abs() < 1e-12));
    }
}
