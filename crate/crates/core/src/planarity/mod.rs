//! Certified planarity testing for intersection multigraphs.
//!
//! [`test_planarity`] returns either a rotation system whose face count
//! satisfies Euler's formula or a K5 / K3,3 subdivision. Both outcomes are
//! checkable with [`verify_embedding`] and [`verify_witness`], which share no
//! code with the search.

mod embed;
mod kuratowski;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{CoverageError, Dart, IntersectionGraph, RotationSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KuratowskiKind {
    K5,
    K33,
}

impl KuratowskiKind {
    pub fn branch_count(self) -> usize {
        match self {
            KuratowskiKind::K5 => 5,
            KuratowskiKind::K33 => 6,
        }
    }

    pub fn branch_degree(self) -> usize {
        match self {
            KuratowskiKind::K5 => 4,
            KuratowskiKind::K33 => 3,
        }
    }

    /// Edges of the pattern graph over branch positions. K5 edges are the
    /// pairs `i < j` in lexicographic order; K3,3 joins positions `0..3` to
    /// `3..6`, also lexicographic.
    pub fn pattern_edges(self) -> Vec<(usize, usize)> {
        match self {
            KuratowskiKind::K5 => (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))).collect(),
            KuratowskiKind::K33 => (0..3).flat_map(|i| (3..6).map(move |j| (i, j))).collect(),
        }
    }
}

/// A path of graph edges joining two branch nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchPath {
    pub from: usize,
    pub to: usize,
    pub edges: Vec<usize>,
}

/// A subdivision of K5 or K3,3 inside a graph.
///
/// For K3,3, `branch[0..3]` is one side of the bipartition and `branch[3..6]`
/// the other. Witnesses produced by [`test_planarity`] are canonical: branch
/// nodes are ordered by id (for K3,3 the side holding the smallest id comes
/// first) and `paths[k]` realizes `kind.pattern_edges()[k]`, oriented from
/// the lower position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KuratowskiWitness {
    pub kind: KuratowskiKind,
    pub branch: Vec<usize>,
    pub paths: Vec<BranchPath>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanarityResult {
    Planar(RotationSystem),
    NonPlanar(KuratowskiWitness),
}

impl PlanarityResult {
    pub fn is_planar(&self) -> bool {
        matches!(self, PlanarityResult::Planar(_))
    }
}

/// Decides planarity of `g`, returning a certificate either way.
///
/// Self-loops and parallel edges are set aside for the search and put back
/// into the final embedding next to their representative edge.
pub fn test_planarity(g: &IntersectionGraph) -> PlanarityResult {
    let n = g.node_count();
    let mut simple: Vec<(usize, usize)> = Vec::new();
    let mut original: Vec<usize> = Vec::new();
    let mut representative: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        if e.is_loop() {
            continue;
        }
        let key = (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1));
        if let std::collections::btree_map::Entry::Vacant(slot) = representative.entry(key) {
            slot.insert(i);
            simple.push(e.ends);
            original.push(i);
        }
    }

    match embed::embed(n, &simple) {
        Some(rotations) => {
            let mut rotations: Vec<Vec<Dart>> = rotations
                .into_iter()
                .map(|rot| rot.into_iter().map(|d| Dart::new(original[d.edge], d.end)).collect())
                .collect();
            for (i, e) in g.edges().iter().enumerate() {
                if e.is_loop() {
                    rotations[e.ends.0].extend([Dart::new(i, 0), Dart::new(i, 1)]);
                    continue;
                }
                let rep = representative[&(e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1))];
                if rep == i {
                    continue;
                }
                let rep_edge = g.edge(rep);
                let rep_dart_at = |node: usize| Dart::new(rep, if rep_edge.ends.0 == node { 0 } else { 1 });
                let (a, b) = e.ends;
                let pos = rotations[a].iter().position(|&d| d == rep_dart_at(a)).unwrap();
                rotations[a].insert(pos + 1, Dart::new(i, 0));
                let pos = rotations[b].iter().position(|&d| d == rep_dart_at(b)).unwrap();
                rotations[b].insert(pos, Dart::new(i, 1));
            }
            PlanarityResult::Planar(RotationSystem::new(rotations))
        }
        None => {
            let raw = kuratowski::extract(n, &simple).expect("non-planar graph has a non-planar block");
            let paths = raw
                .paths
                .into_iter()
                .map(|(from, to, edges)| BranchPath { from, to, edges: edges.into_iter().map(|e| original[e]).collect() })
                .collect();
            let witness = canonicalize(g, raw.kind, raw.branch, paths).expect("extracted subdivision is well formed");
            PlanarityResult::NonPlanar(witness)
        }
    }
}

/// Shorthand for the verdict alone.
pub fn is_planar(g: &IntersectionGraph) -> bool {
    let simple: BTreeSet<(usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| !e.is_loop())
        .map(|e| (e.ends.0.min(e.ends.1), e.ends.0.max(e.ends.1)))
        .collect();
    embed::is_planar(g.node_count(), &simple.into_iter().collect::<Vec<_>>())
}

/// Re-orders a witness into canonical form: branch nodes by id, K3,3 sides
/// by bipartition, paths by pattern edge. Returns `None` when the branch set
/// or path endpoints do not describe the claimed pattern.
pub fn canonicalize(
    g: &IntersectionGraph,
    kind: KuratowskiKind,
    branch: Vec<usize>,
    paths: Vec<BranchPath>,
) -> Option<KuratowskiWitness> {
    if branch.len() != kind.branch_count() || branch.iter().any(|&b| b >= g.node_count()) {
        return None;
    }
    let by_id = |nodes: &mut Vec<usize>| nodes.sort_by(|&a, &b| g.node_id(a).cmp(g.node_id(b)));
    let ordered = match kind {
        KuratowskiKind::K5 => {
            let mut b = branch;
            by_id(&mut b);
            b
        }
        KuratowskiKind::K33 => {
            let mut sorted = branch.clone();
            by_id(&mut sorted);
            let anchor = sorted[0];
            let joined = |x: usize, y: usize| paths.iter().any(|p| (p.from == x && p.to == y) || (p.from == y && p.to == x));
            let (mut side_a, mut side_b): (Vec<usize>, Vec<usize>) =
                sorted.into_iter().partition(|&v| v == anchor || !joined(anchor, v));
            if side_a.len() != 3 || side_b.len() != 3 {
                return None;
            }
            by_id(&mut side_a);
            by_id(&mut side_b);
            side_a.extend(side_b);
            side_a
        }
    };
    let mut out = Vec::with_capacity(paths.len());
    for (i, j) in kind.pattern_edges() {
        let (u, v) = (ordered[i], ordered[j]);
        let p = paths.iter().find(|p| (p.from == u && p.to == v) || (p.from == v && p.to == u))?;
        let mut edges = p.edges.clone();
        if p.from != u {
            edges.reverse();
        }
        out.push(BranchPath { from: u, to: v, edges });
    }
    Some(KuratowskiWitness { kind, branch: ordered, paths: out })
}

/// True iff face tracing on `r` gives V - E + F = 2.
pub fn verify_embedding(g: &IntersectionGraph, r: &RotationSystem) -> Result<bool, CoverageError> {
    r.check_coverage(g)?;
    Ok(r.euler_characteristic(g) == 2)
}

/// True iff `w` is a subdivision of its pattern inside `g`: every pattern
/// edge has exactly one simple path between the right branch nodes, and
/// paths meet only at their endpoints.
pub fn verify_witness(g: &IntersectionGraph, w: &KuratowskiWitness) -> bool {
    let count = w.kind.branch_count();
    if w.branch.len() != count || w.branch.iter().any(|&b| b >= g.node_count()) {
        return false;
    }
    let position = |node: usize| w.branch.iter().position(|&b| b == node);
    if w.branch.iter().enumerate().any(|(i, &b)| position(b) != Some(i)) {
        return false;
    }
    let expected: BTreeSet<(usize, usize)> = w.kind.pattern_edges().into_iter().collect();
    if w.paths.len() != expected.len() {
        return false;
    }
    let mut covered = BTreeSet::new();
    let mut interior_used = vec![false; g.node_count()];
    for path in &w.paths {
        let (Some(i), Some(j)) = (position(path.from), position(path.to)) else {
            return false;
        };
        let pair = (i.min(j), i.max(j));
        if !expected.contains(&pair) || !covered.insert(pair) {
            return false;
        }
        if path.edges.is_empty() {
            return false;
        }
        let mut cur = path.from;
        for (step, &e) in path.edges.iter().enumerate() {
            if e >= g.edge_count() {
                return false;
            }
            let edge = g.edge(e);
            if edge.is_loop() || (edge.ends.0 != cur && edge.ends.1 != cur) {
                return false;
            }
            cur = edge.opposite(cur);
            let last = step + 1 == path.edges.len();
            if last {
                if cur != path.to {
                    return false;
                }
            } else if position(cur).is_some() || std::mem::replace(&mut interior_used[cur], true) {
                return false;
            }
        }
    }
    true
}

/// JSON form of a witness, with node and edge ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessJson {
    pub kind: KuratowskiKind,
    pub branch_vertices: Vec<String>,
    pub paths: Vec<PathJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathJson {
    pub from: String,
    pub to: String,
    pub edges: Vec<String>,
}

impl WitnessJson {
    pub fn from_witness(g: &IntersectionGraph, w: &KuratowskiWitness) -> Self {
        WitnessJson {
            kind: w.kind,
            branch_vertices: w.branch.iter().map(|&b| g.node_id(b).to_string()).collect(),
            paths: w
                .paths
                .iter()
                .map(|p| PathJson {
                    from: g.node_id(p.from).to_string(),
                    to: g.node_id(p.to).to_string(),
                    edges: p.edges.iter().map(|&e| g.edge(e).id.clone()).collect(),
                })
                .collect(),
        }
    }

    pub fn to_witness(&self, g: &IntersectionGraph) -> Result<KuratowskiWitness, CoverageError> {
        let node = |id: &str| g.node_index(id).ok_or_else(|| CoverageError::UnknownId { kind: "node", id: id.to_string() });
        let edge = |id: &str| g.edge_index(id).ok_or_else(|| CoverageError::UnknownId { kind: "edge", id: id.to_string() });
        Ok(KuratowskiWitness {
            kind: self.kind,
            branch: self.branch_vertices.iter().map(|b| node(b)).collect::<Result<_, _>>()?,
            paths: self
                .paths
                .iter()
                .map(|p| {
                    Ok(BranchPath {
                        from: node(&p.from)?,
                        to: node(&p.to)?,
                        edges: p.edges.iter().map(|e| edge(e)).collect::<Result<_, _>>()?,
                    })
                })
                .collect::<Result<_, CoverageError>>()?,
        })
    }
}
