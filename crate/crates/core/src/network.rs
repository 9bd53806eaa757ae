//! Embedded planar graphs with marked terminal sets.

use std::fmt::Write as _;

use crate::embedding::{rotation_from_positions, signed_area, Embedding};
use crate::triangulation::{parse_ids, parse_rotation_block, Triangulation, TriangulationError};

/// A planar graph with source and sink vertex sets.
///
/// `outer` is a dart `(u, v)` whose left face is the unbounded face.
#[derive(Debug, Clone)]
pub struct TwoTerminalGraph {
    embedding: Embedding,
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
    pub outer: (usize, usize),
}

impl PartialEq for TwoTerminalGraph {
    fn eq(&self, other: &Self) -> bool {
        self.embedding.rotation() == other.embedding.rotation()
            && self.sources == other.sources
            && self.sinks == other.sinks
            && self.outer == other.outer
    }
}

impl TwoTerminalGraph {
    pub fn new(
        rotation: Vec<Vec<usize>>,
        sources: Vec<usize>,
        sinks: Vec<usize>,
        outer: (usize, usize),
    ) -> Result<Self, TriangulationError> {
        let n = rotation.len();
        let embedding = Embedding::new(rotation).ok_or(TriangulationError::Parse {
            line: 0,
            message: "rotation system is not symmetric".into(),
        })?;
        for &v in sources.iter().chain(&sinks) {
            if v >= n {
                return Err(TriangulationError::NoSuchVertex(v));
            }
        }
        if embedding.find_dart(outer.0, outer.1).is_none() {
            return Err(TriangulationError::Parse {
                line: 0,
                message: format!("outer dart {}->{} is not an edge", outer.0, outer.1),
            });
        }
        Ok(Self {
            embedding,
            sources,
            sinks,
            outer,
        })
    }

    /// Straight-line drawing; the outer face is the face of most negative
    /// signed area.
    pub fn from_drawing(
        positions: &[[f64; 2]],
        edges: &[(usize, usize)],
        sources: Vec<usize>,
        sinks: Vec<usize>,
    ) -> Self {
        let embedding = Embedding::new(rotation_from_positions(positions, edges))
            .expect("edge lists are symmetric by construction");
        let faces = embedding.faces();
        let outer_face = (0..faces.cycles.len())
            .min_by(|&a, &b| {
                signed_area(positions, &faces.cycles[a])
                    .total_cmp(&signed_area(positions, &faces.cycles[b]))
            })
            .expect("at least one face");
        let d = faces
            .left_of
            .iter()
            .position(|&f| f == outer_face)
            .expect("face has a dart");
        let outer = (embedding.tail(d), embedding.head(d));
        Self {
            embedding,
            sources,
            sinks,
            outer,
        }
    }

    /// Root-to-boundary network of a triangulation: the source is `root`,
    /// the sinks are the boundary cycle.
    pub fn from_triangulation(t: &Triangulation, root: usize) -> Self {
        let b = t.boundary();
        Self {
            embedding: t.embedding().clone(),
            sources: vec![root],
            sinks: b.to_vec(),
            outer: (b[1], b[0]),
        }
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn neighbors(&self) -> &[Vec<usize>] {
        self.embedding.rotation()
    }

    pub fn vertex_count(&self) -> usize {
        self.embedding.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.embedding.edge_count()
    }

    pub fn outer_dart(&self) -> usize {
        self.embedding
            .find_dart(self.outer.0, self.outer.1)
            .expect("validated at construction")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.vertex_count(), self.edge_count());
        for nbrs in self.neighbors() {
            let _ = writeln!(s, "{}", ids(nbrs));
        }
        let _ = writeln!(s, "source {}", ids(&self.sources));
        let _ = writeln!(s, "sink {}", ids(&self.sinks));
        let _ = writeln!(s, "outer {} {}", self.outer.0, self.outer.1);
        s
    }

    pub fn from_text(text: &str) -> Result<Self, TriangulationError> {
        let (rot, rest) = parse_rotation_block(text)?;
        let mut sources = None;
        let mut sinks = None;
        let mut outer = None;
        for (ln, line) in rest {
            let (key, tail) = line.trim().split_once(' ').unwrap_or((line.trim(), ""));
            let vals = parse_ids(tail, ln)?;
            match key {
                "source" => sources = Some(vals),
                "sink" => sinks = Some(vals),
                "outer" if vals.len() == 2 => outer = Some((vals[0], vals[1])),
                _ => {
                    return Err(TriangulationError::Parse {
                        line: ln,
                        message: format!("unexpected line `{line}`"),
                    })
                }
            }
        }
        let missing = |what: &str| TriangulationError::Parse {
            line: 0,
            message: format!("missing `{what}` line"),
        };
        Self::new(
            rot,
            sources.ok_or_else(|| missing("source"))?,
            sinks.ok_or_else(|| missing("sink"))?,
            outer.ok_or_else(|| missing("outer"))?,
        )
    }
}

fn ids(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

/// Either kind of graph file the command line accepts.
#[derive(Debug, Clone)]
pub enum GraphFile {
    Triangulation(Triangulation),
    TwoTerminal(TwoTerminalGraph),
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, TriangulationError> {
        let is_two_terminal = text
            .lines()
            .any(|l| l.trim_start().starts_with("source"));
        if is_two_terminal {
            TwoTerminalGraph::from_text(text).map(GraphFile::TwoTerminal)
        } else {
            Triangulation::from_text(text).map(GraphFile::Triangulation)
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            GraphFile::Triangulation(t) => t.to_text(),
            GraphFile::TwoTerminal(g) => g.to_text(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let pos = [[0.0, 0.0], [1.0, 1.0], [1.0, -1.0], [2.0, 0.0]];
        let g = TwoTerminalGraph::from_drawing(&pos, &[(0, 1), (0, 2), (1, 3), (2, 3)], vec![0], vec![3]);
        let back = TwoTerminalGraph::from_text(&g.to_text()).unwrap();
        assert_eq!(back, g);
        assert!(matches!(GraphFile::parse(&g.to_text()).unwrap(), GraphFile::TwoTerminal(_)));
    }

    #[test]
    fn outer_face_of_drawing() {
        let pos = [[0.0, 0.0], [1.0, 1.0], [1.0, -1.0], [2.0, 0.0]];
        let g = TwoTerminalGraph::from_drawing(&pos, &[(0, 1), (0, 2), (1, 3), (2, 3)], vec![0], vec![3]);
        let f = g.embedding().faces();
        let outer = f.left_of[g.outer_dart()];
        assert!(signed_area(&pos, &f.cycles[outer]) < 0.0);
    }
}
