//! Arrangements: connected hypergraphs in which every vertex lies on exactly
//! two hyperedges, together with hyperedge signings and classical (±1)
//! realizations.
//!
//! Vertex and hyperedge ids are opaque strings. Construction canonicalizes
//! both families by sorting ids, so indices are stable and lexicographic.
//! Hyperedge members keep the order they were given in; that order fixes
//! the product order used when verifying operator assignments.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrangementError {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("hyperedge `{hyperedge}` is empty")]
    EmptyHyperedge { hyperedge: String },
    #[error("hyperedge `{hyperedge}` references unknown vertex `{vertex}`")]
    UnknownVertex { hyperedge: String, vertex: String },
    #[error("hyperedge `{hyperedge}` lists vertex `{vertex}` more than once")]
    RepeatedMember { hyperedge: String, vertex: String },
    #[error("vertex `{vertex}` lies in {degree} hyperedges, expected exactly 2")]
    DegreeError { vertex: String, degree: usize },
    #[error("arrangement is disconnected: hyperedge `{unreachable}` is not reachable from `{start}`")]
    Disconnected { start: String, unreachable: String },
    #[error("arrangement has no hyperedges")]
    NoHyperedges,
    #[error("signing does not cover hyperedge `{0}`")]
    MissingSign(String),
    #[error("signing names unknown hyperedge `{0}`")]
    UnknownHyperedge(String),
    #[error("signing has {got} entries but the arrangement has {expected} hyperedges")]
    SigningLength { expected: usize, got: usize },
    #[error("some hyperedges carry a sign and others do not")]
    PartialSigning,
    #[error("signing has odd parity and admits no classical realization")]
    OddParity,
    #[error("malformed arrangement JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperedge {
    id: String,
    members: Vec<usize>,
}

impl Hyperedge {
    pub fn id(&self) -> &str {
        &self.id
    }

    /// Member vertex indices in stored order.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position_of(&self, vertex: usize) -> Option<usize> {
        self.members.iter().position(|&m| m == vertex)
    }
}

/// A validated arrangement. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    vertices: Vec<String>,
    hyperedges: Vec<Hyperedge>,
    /// The two hyperedges containing each vertex, lower index first.
    incidence: Vec<[usize; 2]>,
}

impl Arrangement {
    /// Validates a raw description and returns the canonical arrangement.
    pub fn new<V, H, K, M>(vertices: V, hyperedges: H) -> Result<Self, ArrangementError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        H: IntoIterator<Item = (K, M)>,
        K: Into<String>,
        M: IntoIterator,
        M::Item: Into<String>,
    {
        let mut vertex_ids: Vec<String> = vertices.into_iter().map(Into::into).collect();
        vertex_ids.sort();
        if let Some(w) = vertex_ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(ArrangementError::DuplicateId { kind: "vertex", id: w[0].clone() });
        }

        let mut raw: Vec<(String, Vec<String>)> = hyperedges
            .into_iter()
            .map(|(id, members)| (id.into(), members.into_iter().map(Into::into).collect()))
            .collect();
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = raw.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ArrangementError::DuplicateId { kind: "hyperedge", id: w[0].0.clone() });
        }
        if raw.is_empty() {
            return Err(ArrangementError::NoHyperedges);
        }

        let mut degree_lists: Vec<Vec<usize>> = vec![Vec::new(); vertex_ids.len()];
        let mut hyperedges = Vec::with_capacity(raw.len());
        for (h, (id, members)) in raw.into_iter().enumerate() {
            if members.is_empty() {
                return Err(ArrangementError::EmptyHyperedge { hyperedge: id });
            }
            let mut indices = Vec::with_capacity(members.len());
            for member in members {
                let Ok(v) = vertex_ids.binary_search(&member) else {
                    return Err(ArrangementError::UnknownVertex { hyperedge: id, vertex: member });
                };
                if indices.contains(&v) {
                    return Err(ArrangementError::RepeatedMember { hyperedge: id, vertex: member });
                }
                indices.push(v);
                degree_lists[v].push(h);
            }
            hyperedges.push(Hyperedge { id, members: indices });
        }

        let mut incidence = Vec::with_capacity(vertex_ids.len());
        for (v, list) in degree_lists.iter().enumerate() {
            if list.len() != 2 {
                return Err(ArrangementError::DegreeError {
                    vertex: vertex_ids[v].clone(),
                    degree: list.len(),
                });
            }
            incidence.push([list[0].min(list[1]), list[0].max(list[1])]);
        }

        let arrangement = Arrangement { vertices: vertex_ids, hyperedges, incidence };
        let (dist, _) = arrangement.dual_bfs(0);
        if let Some(h) = dist.iter().position(Option::is_none) {
            return Err(ArrangementError::Disconnected {
                start: arrangement.hyperedges[0].id.clone(),
                unreachable: arrangement.hyperedges[h].id.clone(),
            });
        }
        Ok(arrangement)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn hyperedge_count(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn hyperedges(&self) -> &[Hyperedge] {
        &self.hyperedges
    }

    pub fn hyperedge(&self, h: usize) -> &Hyperedge {
        &self.hyperedges[h]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.as_str().cmp(id)).ok()
    }

    pub fn hyperedge_index(&self, id: &str) -> Option<usize> {
        self.hyperedges.binary_search_by(|h| h.id.as_str().cmp(id)).ok()
    }

    /// The two hyperedges containing `v`, lower index first.
    pub fn hyperedges_of(&self, v: usize) -> [usize; 2] {
        self.incidence[v]
    }

    /// The hyperedge containing `v` other than `h`.
    pub fn other_hyperedge(&self, v: usize, h: usize) -> usize {
        let [a, b] = self.incidence[v];
        if a == h {
            b
        } else {
            a
        }
    }

    /// Hyperedges with a single member. They are legal boards but the
    /// corresponding game question is trivial for Bob.
    pub fn singleton_hyperedges(&self) -> Vec<usize> {
        (0..self.hyperedges.len()).filter(|&h| self.hyperedges[h].len() == 1).collect()
    }

    /// Breadth-first search over the dual multigraph. Neighbours are visited
    /// through incident vertices in increasing vertex index.
    fn dual_bfs(&self, start: usize) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
        let mut dist = vec![None; self.hyperedges.len()];
        let mut via = vec![None; self.hyperedges.len()];
        let mut queue = VecDeque::from([start]);
        dist[start] = Some(0);
        while let Some(h) = queue.pop_front() {
            let mut members = self.hyperedges[h].members.clone();
            members.sort_unstable();
            for v in members {
                let next = self.other_hyperedge(v, h);
                if dist[next].is_none() {
                    dist[next] = Some(dist[h].unwrap() + 1);
                    via[next] = Some(v);
                    queue.push_back(next);
                }
            }
        }
        (dist, via)
    }

    /// Vertices along a shortest chain of hyperedges from `from` to `to`;
    /// consecutive hyperedges in the chain share the listed vertex.
    pub fn dual_path(&self, from: usize, to: usize) -> Vec<usize> {
        let (_, via) = self.dual_bfs(from);
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let v = via[cur].expect("arrangement is connected");
            path.push(v);
            cur = self.other_hyperedge(v, cur);
        }
        path.reverse();
        path
    }

    /// Vertex set whose negation flips exactly the listed hyperedges' products.
    ///
    /// Hyperedges are paired off in order and each pair is joined by a dual
    /// path; a vertex is flipped when it lies on an odd number of those paths.
    /// Returns `None` if an odd number of hyperedges is requested.
    pub fn sign_flip_vertices(&self, hyperedges: &[usize]) -> Option<Vec<bool>> {
        if !hyperedges.len().is_multiple_of(2) {
            return None;
        }
        let mut flips = vec![false; self.vertices.len()];
        for pair in hyperedges.chunks(2) {
            for v in self.dual_path(pair[0], pair[1]) {
                flips[v] = !flips[v];
            }
        }
        Some(flips)
    }
}

/// A total assignment of ±1 to the hyperedges of one arrangement, indexed
/// by canonical hyperedge index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signing {
    signs: Vec<Sign>,
}

impl Signing {
    pub fn all_plus(a: &Arrangement) -> Self {
        Signing { signs: vec![Sign::Plus; a.hyperedge_count()] }
    }

    pub fn from_signs(a: &Arrangement, signs: Vec<Sign>) -> Result<Self, ArrangementError> {
        if signs.len() != a.hyperedge_count() {
            return Err(ArrangementError::SigningLength {
                expected: a.hyperedge_count(),
                got: signs.len(),
            });
        }
        Ok(Signing { signs })
    }

    pub fn from_map(a: &Arrangement, map: &BTreeMap<String, Sign>) -> Result<Self, ArrangementError> {
        if let Some(unknown) = map.keys().find(|id| a.hyperedge_index(id).is_none()) {
            return Err(ArrangementError::UnknownHyperedge(unknown.clone()));
        }
        let signs = a
            .hyperedges()
            .iter()
            .map(|h| map.get(h.id()).copied().ok_or_else(|| ArrangementError::MissingSign(h.id().to_string())))
            .collect::<Result<_, _>>()?;
        Ok(Signing { signs })
    }

    pub fn to_map(&self, a: &Arrangement) -> BTreeMap<String, Sign> {
        a.hyperedges().iter().zip(&self.signs).map(|(h, &s)| (h.id().to_string(), s)).collect()
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn sign(&self, h: usize) -> Sign {
        self.signs[h]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn set(&mut self, h: usize, sign: Sign) {
        self.signs[h] = sign;
    }

    /// Product of all hyperedge signs.
    pub fn parity(&self) -> Sign {
        Sign::product(self.signs.iter().copied())
    }

    /// Indices of hyperedges whose sign differs between the two signings.
    pub fn differences(&self, other: &Signing) -> Vec<usize> {
        (0..self.signs.len()).filter(|&h| self.signs[h] != other.signs[h]).collect()
    }
}

/// Parity of a signing.
pub fn parity(s: &Signing) -> Sign {
    s.parity()
}

/// ±1 labels on vertices, indexed by canonical vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalRealization {
    labels: Vec<Sign>,
}

impl ClassicalRealization {
    pub fn new(labels: Vec<Sign>) -> Self {
        ClassicalRealization { labels }
    }

    pub fn labels(&self) -> &[Sign] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Sign {
        self.labels[v]
    }

    /// Direct product check over every hyperedge.
    pub fn satisfies(&self, a: &Arrangement, s: &Signing) -> bool {
        self.labels.len() == a.vertex_count()
            && s.len() == a.hyperedge_count()
            && a.hyperedges()
                .iter()
                .enumerate()
                .all(|(h, e)| Sign::product(e.members().iter().map(|&v| self.labels[v])) == s.sign(h))
    }

    pub fn to_map(&self, a: &Arrangement) -> BTreeMap<String, Sign> {
        a.vertex_ids().iter().cloned().zip(self.labels.iter().copied()).collect()
    }
}

pub fn is_classically_realizable(_a: &Arrangement, s: &Signing) -> bool {
    s.parity() == Sign::Plus
}

/// Builds a classical realization by flipping vertex labels along dual paths
/// joining the `-1` hyperedges in pairs, starting from the all-`+1` labelling.
pub fn classical_realize(a: &Arrangement, s: &Signing) -> Result<ClassicalRealization, ArrangementError> {
    let negative: Vec<usize> = (0..s.len()).filter(|&h| s.sign(h).is_negative()).collect();
    let flips = a.sign_flip_vertices(&negative).ok_or(ArrangementError::OddParity)?;
    Ok(ClassicalRealization::new(flips.into_iter().map(Sign::from_bool_negative).collect()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperedgeRecord {
    pub id: String,
    pub vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<Sign>,
}

/// On-disk arrangement description.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrangementFile {
    pub vertices: Vec<String>,
    pub hyperedges: Vec<HyperedgeRecord>,
}

impl ArrangementFile {
    pub fn from_json(text: &str) -> Result<Self, ArrangementError> {
        serde_json::from_str(text).map_err(|e| ArrangementError::Json(e.to_string()))
    }

    /// Validates the description; the signing is present iff every hyperedge
    /// carries a sign.
    pub fn into_arrangement(self) -> Result<(Arrangement, Option<Signing>), ArrangementError> {
        let signed = self.hyperedges.iter().filter(|h| h.sign.is_some()).count();
        if signed != 0 && signed != self.hyperedges.len() {
            return Err(ArrangementError::PartialSigning);
        }
        let signs: BTreeMap<String, Sign> =
            self.hyperedges.iter().filter_map(|h| h.sign.map(|s| (h.id.clone(), s))).collect();
        let a = Arrangement::new(self.vertices, self.hyperedges.into_iter().map(|h| (h.id, h.vertices)))?;
        let signing = if signed == 0 { None } else { Some(Signing::from_map(&a, &signs)?) };
        Ok((a, signing))
    }

    pub fn from_arrangement(a: &Arrangement, s: Option<&Signing>) -> Self {
        ArrangementFile {
            vertices: a.vertex_ids().to_vec(),
            hyperedges: a
                .hyperedges()
                .iter()
                .enumerate()
                .map(|(h, e)| HyperedgeRecord {
                    id: e.id().to_string(),
                    vertices: e.members().iter().map(|&v| a.vertex_id(v).to_string()).collect(),
                    sign: s.map(|s| s.sign(h)),
                })
                .collect(),
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("arrangement serializes")
    }
}

/// Parses and validates an arrangement JSON document.
pub fn parse_arrangement(text: &str) -> Result<(Arrangement, Option<Signing>), ArrangementError> {
    ArrangementFile::from_json(text)?.into_arrangement()
}
