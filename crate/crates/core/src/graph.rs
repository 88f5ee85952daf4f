//! The intersection multigraph of an arrangement and rotation systems on it.
//!
//! Nodes of the intersection graph are hyperedges and every arrangement
//! vertex becomes one edge joining the two hyperedges that contain it. Edge
//! ids reuse vertex ids, and in graphs produced by [`IntersectionGraph::build`]
//! node and edge indices coincide with canonical hyperedge and vertex indices.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("edge `{edge}` references node index {node} out of range")]
    BadEndpoint { edge: String, node: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no nodes")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub ends: (usize, usize),
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends.0 == self.ends.1
    }

    /// The endpoint across the edge from `node`.
    pub fn opposite(&self, node: usize) -> usize {
        if self.ends.0 == node {
            self.ends.1
        } else {
            self.ends.0
        }
    }
}

/// One end of an edge. End 0 sits at `ends.0`, end 1 at `ends.1`; a self-loop
/// has both ends at the same node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub end: u8,
}

impl Dart {
    pub fn new(edge: usize, end: u8) -> Self {
        Dart { edge, end }
    }

    pub fn twin(self) -> Dart {
        Dart { edge: self.edge, end: 1 - self.end }
    }

    fn slot(self) -> usize {
        2 * self.edge + self.end as usize
    }
}

/// A connected multigraph with string-identified nodes and edges.
///
/// Parallel edges and self-loops are permitted; graphs built from an
/// arrangement never contain self-loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph {
    nodes: Vec<String>,
    edges: Vec<Edge>,
}

impl IntersectionGraph {
    pub fn new(nodes: Vec<String>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if nodes.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut seen = std::collections::BTreeSet::new();
        for n in &nodes {
            if !seen.insert(n.as_str()) {
                return Err(GraphError::DuplicateId { kind: "node", id: n.clone() });
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for e in &edges {
            if !seen.insert(e.id.as_str()) {
                return Err(GraphError::DuplicateId { kind: "edge", id: e.id.clone() });
            }
            for node in [e.ends.0, e.ends.1] {
                if node >= nodes.len() {
                    return Err(GraphError::BadEndpoint { edge: e.id.clone(), node });
                }
            }
        }
        let g = IntersectionGraph { nodes, edges };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// The dual multigraph of an arrangement.
    pub fn build(a: &Arrangement) -> Self {
        let nodes = a.hyperedges().iter().map(|h| h.id().to_string()).collect();
        let edges = (0..a.vertex_count())
            .map(|v| {
                let [h0, h1] = a.hyperedges_of(v);
                Edge { id: a.vertex_id(v).to_string(), ends: (h0, h1) }
            })
            .collect();
        IntersectionGraph { nodes, edges }
    }

    /// Reads the graph back as an arrangement: nodes become hyperedges and
    /// edges become vertices. Each hyperedge lists its members in the order
    /// the incident edges appear in [`IntersectionGraph::incident`].
    pub fn to_arrangement(&self) -> Result<Arrangement, ArrangementError> {
        let hyperedges = (0..self.nodes.len()).map(|n| {
            let members: Vec<String> = self.incident(n).into_iter().map(|d| self.edges[d.edge].id.clone()).collect();
            (self.nodes[n].clone(), members)
        });
        Arrangement::new(self.edges.iter().map(|e| e.id.clone()), hyperedges)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn node_ids(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, n: usize) -> &str {
        &self.nodes[n]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// The node a dart sits at.
    pub fn dart_node(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge];
        if d.end == 0 {
            e.ends.0
        } else {
            e.ends.1
        }
    }

    /// Darts at `node` in increasing edge index (end 0 before end 1).
    pub fn incident(&self, node: usize) -> Vec<Dart> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.ends.0 == node {
                out.push(Dart::new(i, 0));
            }
            if e.ends.1 == node {
                out.push(Dart::new(i, 1));
            }
        }
        out
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().map(|e| (e.ends.0 == node) as usize + (e.ends.1 == node) as usize).sum()
    }

    fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for e in &self.edges {
            adj[e.ends.0].push(e.ends.1);
            adj[e.ends.1].push(e.ends.0);
        }
        let mut seen = vec![false; self.nodes.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(n) = queue.pop_front() {
            for &m in &adj[n] {
                if !seen[m] {
                    seen[m] = true;
                    queue.push_back(m);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Deterministic Graphviz rendering. Nodes are emitted in lexicographic id
    /// order and edges in lexicographic id order; edge labels are vertex ids.
    pub fn to_dot(&self) -> String {
        let mut node_order: Vec<usize> = (0..self.nodes.len()).collect();
        node_order.sort_by(|&a, &b| self.nodes[a].cmp(&self.nodes[b]));
        let mut edge_order: Vec<usize> = (0..self.edges.len()).collect();
        edge_order.sort_by(|&a, &b| self.edges[a].id.cmp(&self.edges[b].id));

        let mut out = String::from("graph intersection {\n");
        for n in node_order {
            let _ = writeln!(out, "  {} [label={}];", dot_quote(&self.nodes[n]), dot_quote(&self.nodes[n]));
        }
        for e in edge_order {
            let edge = &self.edges[e];
            let _ = writeln!(
                out,
                "  {} -- {} [label={}];",
                dot_quote(&self.nodes[edge.ends.0]),
                dot_quote(&self.nodes[edge.ends.1]),
                dot_quote(&edge.id)
            );
        }
        out.push_str("}\n");
        out
    }
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverageError {
    #[error("rotation system has {got} node entries, graph has {expected} nodes")]
    NodeCount { expected: usize, got: usize },
    #[error("edge end {edge}/{end} is missing from the rotation system")]
    MissingEnd { edge: String, end: u8 },
    #[error("edge end {edge}/{end} appears more than once")]
    DuplicateEnd { edge: String, end: u8 },
    #[error("edge end {edge}/{end} is listed at node `{node}` where it does not sit")]
    MisplacedEnd { edge: String, end: u8, node: String },
    #[error("unknown {kind} `{id}`")]
    UnknownId { kind: &'static str, id: String },
    #[error("edge `{edge}` is listed {got} times at node `{node}`, expected {expected}")]
    Multiplicity { edge: String, node: String, expected: usize, got: usize },
}

/// Cyclic order of darts around every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rotations: Vec<Vec<Dart>>,
}

impl RotationSystem {
    pub fn new(rotations: Vec<Vec<Dart>>) -> Self {
        RotationSystem { rotations }
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn rotation(&self, node: usize) -> &[Dart] {
        &self.rotations[node]
    }

    /// Checks that every dart of `g` appears exactly once, at its own node.
    pub fn check_coverage(&self, g: &IntersectionGraph) -> Result<(), CoverageError> {
        if self.rotations.len() != g.node_count() {
            return Err(CoverageError::NodeCount { expected: g.node_count(), got: self.rotations.len() });
        }
        let mut seen = vec![false; 2 * g.edge_count()];
        for (node, rot) in self.rotations.iter().enumerate() {
            for &d in rot {
                if d.edge >= g.edge_count() || d.end > 1 {
                    return Err(CoverageError::UnknownId { kind: "edge end", id: format!("{}/{}", d.edge, d.end) });
                }
                let edge = g.edge(d.edge).id.clone();
                if g.dart_node(d) != node {
                    return Err(CoverageError::MisplacedEnd { edge, end: d.end, node: g.node_id(node).to_string() });
                }
                if std::mem::replace(&mut seen[d.slot()], true) {
                    return Err(CoverageError::DuplicateEnd { edge, end: d.end });
                }
            }
        }
        if let Some(slot) = seen.iter().position(|s| !s) {
            return Err(CoverageError::MissingEnd { edge: g.edge(slot / 2).id.clone(), end: (slot % 2) as u8 });
        }
        Ok(())
    }

    /// Face boundaries, each a cyclic sequence of darts where the successor
    /// of `d` is the rotation successor of `d.twin()` at the far node.
    /// Assumes coverage has been checked.
    pub fn faces(&self, g: &IntersectionGraph) -> Vec<Vec<Dart>> {
        let mut next_in_rotation = vec![Dart::new(0, 0); 2 * g.edge_count()];
        for rot in &self.rotations {
            for (i, &d) in rot.iter().enumerate() {
                next_in_rotation[d.slot()] = rot[(i + 1) % rot.len()];
            }
        }
        let mut visited = vec![false; 2 * g.edge_count()];
        let mut faces = Vec::new();
        for slot in 0..2 * g.edge_count() {
            if visited[slot] {
                continue;
            }
            let start = Dart::new(slot / 2, (slot % 2) as u8);
            let mut face = Vec::new();
            let mut d = start;
            loop {
                visited[d.slot()] = true;
                face.push(d);
                d = next_in_rotation[d.twin().slot()];
                if d == start {
                    break;
                }
            }
            faces.push(face);
        }
        faces
    }

    /// Number of faces, counting an edgeless node as bounding one face.
    pub fn face_count(&self, g: &IntersectionGraph) -> usize {
        let isolated = self.rotations.iter().filter(|r| r.is_empty()).count();
        self.faces(g).len() + isolated
    }

    /// Euler characteristic V - E + F of the embedding.
    pub fn euler_characteristic(&self, g: &IntersectionGraph) -> i64 {
        g.node_count() as i64 - g.edge_count() as i64 + self.face_count(g) as i64
    }

    /// Per-node words of edge ids. A self-loop contributes its id twice; the
    /// first occurrence is end 0.
    pub fn to_words(&self, g: &IntersectionGraph) -> BTreeMap<String, Vec<String>> {
        self.rotations
            .iter()
            .enumerate()
            .map(|(n, rot)| (g.node_id(n).to_string(), rot.iter().map(|d| g.edge(d.edge).id.clone()).collect()))
            .collect()
    }

    /// Inverse of [`RotationSystem::to_words`], validating full coverage.
    pub fn from_words(g: &IntersectionGraph, words: &BTreeMap<String, Vec<String>>) -> Result<Self, CoverageError> {
        if let Some(unknown) = words.keys().find(|id| g.node_index(id).is_none()) {
            return Err(CoverageError::UnknownId { kind: "node", id: unknown.clone() });
        }
        let mut rotations = Vec::with_capacity(g.node_count());
        for node in 0..g.node_count() {
            let word = words.get(g.node_id(node)).map(Vec::as_slice).unwrap_or(&[]);
            let mut used: BTreeMap<usize, usize> = BTreeMap::new();
            let mut rot = Vec::with_capacity(word.len());
            for id in word {
                let e = g.edge_index(id).ok_or_else(|| CoverageError::UnknownId { kind: "edge", id: id.clone() })?;
                let edge = g.edge(e);
                let count = used.entry(e).or_insert(0);
                *count += 1;
                let expected = (edge.ends.0 == node) as usize + (edge.ends.1 == node) as usize;
                if *count > expected {
                    return Err(CoverageError::Multiplicity {
                        edge: id.clone(),
                        node: g.node_id(node).to_string(),
                        expected,
                        got: *count,
                    });
                }
                let end = if edge.is_loop() {
                    (*count - 1) as u8
                } else if edge.ends.0 == node {
                    0
                } else {
                    1
                };
                rot.push(Dart::new(e, end));
            }
            rotations.push(rot);
        }
        let r = RotationSystem { rotations };
        r.check_coverage(g)?;
        Ok(r)
    }
}
