//! Contraction certificates for planar intersection graphs.
//!
//! Each node carries a cyclic word of edge symbols (its rotation) and a sign.
//! Under any quantum realization, the operators around a word multiply to
//! the node's sign times the identity. Contracting an edge splices two words
//! and multiplies their signs; two adjacent equal symbols cancel because
//! every operator squares to the identity. A trace that reaches a single
//! empty word therefore proves `parity = +1` for every realizable signing.
//!
//! The checker assumes nothing about where a trace came from. In particular
//! it does not require the initial rotation to be planar: the splice and
//! cancel rules are sound for any rotation, planarity is only what makes a
//! complete trace exist.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{IntersectionGraph, RotationSystem};
use crate::planarity::verify_embedding;
use crate::sign::Sign;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("rotation system is not a planar embedding of the graph: {0}")]
    EmbeddingInvalid(String),
    #[error("no adjacent pair to cancel; {remaining} symbols remain")]
    Stuck { remaining: usize },
    #[error("invalid initial state: {0}")]
    InvalidInitial(String),
    #[error("illegal step {step}: {reason}")]
    IllegalStep { step: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase", deny_unknown_fields)]
pub enum Step {
    Contract { edge: String },
    Cancel { symbol: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub rotation: BTreeMap<String, Vec<String>>,
    pub signs: BTreeMap<String, Sign>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractionTrace {
    pub initial: InitialState,
    pub steps: Vec<Step>,
    pub final_sign: Sign,
}

impl ContractionTrace {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }

    pub fn contractions(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Contract { .. })).count()
    }

    pub fn cancellations(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Cancel { .. })).count()
    }
}

/// Live words during replay. Merged-away nodes hold `None`.
#[derive(Debug, Clone)]
struct WordState {
    words: Vec<Option<Vec<usize>>>,
    signs: Vec<Sign>,
    alive: Vec<bool>,
}

impl WordState {
    fn new(r: &RotationSystem, signs: Vec<Sign>, edge_count: usize) -> Self {
        WordState {
            words: r.rotations().iter().map(|rot| Some(rot.iter().map(|d| d.edge).collect())).collect(),
            signs,
            alive: vec![true; edge_count],
        }
    }

    /// (node, position) of every occurrence of `symbol`.
    fn occurrences(&self, symbol: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (n, w) in self.words.iter().enumerate() {
            if let Some(w) = w {
                out.extend(w.iter().enumerate().filter(|(_, &s)| s == symbol).map(|(i, _)| (n, i)));
            }
        }
        out
    }

    fn contract(&mut self, symbol: usize) -> Result<(), String> {
        if !self.alive[symbol] {
            return Err("symbol was already cancelled".into());
        }
        let occ = self.occurrences(symbol);
        let [(u, iu), (v, iv)] = occ[..] else {
            return Err(format!("symbol occurs {} times", occ.len()));
        };
        if u == v {
            return Err("both occurrences lie in one word".into());
        }
        let wv = self.words[v].take().expect("live node");
        let spliced: Vec<usize> = wv[iv + 1..].iter().chain(&wv[..iv]).copied().collect();
        let wu = self.words[u].as_mut().expect("live node");
        wu.splice(iu..=iu, spliced);
        self.signs[u] = self.signs[u] * self.signs[v];
        self.alive[symbol] = false;
        Ok(())
    }

    fn cancel(&mut self, symbol: usize) -> Result<(), String> {
        if !self.alive[symbol] {
            return Err("symbol was already cancelled".into());
        }
        let occ = self.occurrences(symbol);
        let [(u, i), (v, j)] = occ[..] else {
            return Err(format!("symbol occurs {} times", occ.len()));
        };
        if u != v {
            return Err("occurrences lie in different words".into());
        }
        let w = self.words[u].as_mut().expect("live node");
        let len = w.len();
        if j == i + 1 {
            w.drain(i..=j);
        } else if i == 0 && j == len - 1 {
            w.pop();
            w.remove(0);
        } else {
            return Err("occurrences are not adjacent".into());
        }
        self.alive[symbol] = false;
        Ok(())
    }

    fn live_nodes(&self) -> Vec<usize> {
        (0..self.words.len()).filter(|&n| self.words[n].is_some()).collect()
    }
}

fn node_signs_from_map(g: &IntersectionGraph, map: &BTreeMap<String, Sign>) -> Result<Vec<Sign>, String> {
    if let Some(unknown) = map.keys().find(|id| g.node_index(id).is_none()) {
        return Err(format!("sign for unknown node `{unknown}`"));
    }
    (0..g.node_count())
        .map(|n| map.get(g.node_id(n)).copied().ok_or_else(|| format!("missing sign for node `{}`", g.node_id(n))))
        .collect()
}

/// Builds a trace: contract a breadth-first spanning tree, then cancel
/// adjacent pairs in the remaining single word.
pub fn generate(g: &IntersectionGraph, r: &RotationSystem, signs: &[Sign]) -> Result<ContractionTrace, CertificateError> {
    match verify_embedding(g, r) {
        Ok(true) => {}
        Ok(false) => return Err(CertificateError::EmbeddingInvalid("Euler characteristic is not 2".into())),
        Err(e) => return Err(CertificateError::EmbeddingInvalid(e.to_string())),
    }
    assert_eq!(signs.len(), g.node_count(), "one sign per node");

    let mut steps = Vec::new();
    let mut state = WordState::new(r, signs.to_vec(), g.edge_count());
    for e in spanning_tree(g) {
        state.contract(e).expect("tree edge joins two live words");
        steps.push(Step::Contract { edge: g.edge(e).id.clone() });
    }
    let root = state.live_nodes()[0];
    let word = state.words[root].clone().unwrap_or_default();
    let mut stack: Vec<usize> = Vec::new();
    for s in word {
        if stack.last() == Some(&s) {
            stack.pop();
            steps.push(Step::Cancel { symbol: g.edge(s).id.clone() });
        } else {
            stack.push(s);
        }
    }
    if !stack.is_empty() {
        return Err(CertificateError::Stuck { remaining: stack.len() });
    }
    Ok(ContractionTrace {
        initial: InitialState {
            rotation: r.to_words(g),
            signs: (0..g.node_count()).map(|n| (g.node_id(n).to_string(), signs[n])).collect(),
        },
        steps,
        final_sign: state.signs[root],
    })
}

/// Tree edges in breadth-first discovery order from the smallest node id,
/// visiting neighbours by edge id.
fn spanning_tree(g: &IntersectionGraph) -> Vec<usize> {
    let mut by_id: Vec<usize> = (0..g.edge_count()).collect();
    by_id.sort_by(|&a, &b| g.edge(a).id.cmp(&g.edge(b).id));
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for &e in &by_id {
        let (a, b) = g.edge(e).ends;
        if a != b {
            adj[a].push(e);
            adj[b].push(e);
        }
    }
    let root = (0..g.node_count()).min_by(|&a, &b| g.node_id(a).cmp(g.node_id(b))).expect("non-empty graph");
    let mut seen = vec![false; g.node_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut tree = Vec::new();
    while let Some(n) = queue.pop_front() {
        for &e in &adj[n] {
            let m = g.edge(e).opposite(n);
            if !seen[m] {
                seen[m] = true;
                tree.push(e);
                queue.push_back(m);
            }
        }
    }
    tree
}

/// Replays `t` against `g` and returns the final sign.
pub fn check(g: &IntersectionGraph, t: &ContractionTrace) -> Result<Sign, CertificateError> {
    let r = RotationSystem::from_words(g, &t.initial.rotation).map_err(|e| CertificateError::InvalidInitial(e.to_string()))?;
    let signs = node_signs_from_map(g, &t.initial.signs).map_err(CertificateError::InvalidInitial)?;
    let mut state = WordState::new(&r, signs, g.edge_count());
    for (i, step) in t.steps.iter().enumerate() {
        let illegal = |reason: String| CertificateError::IllegalStep { step: i, reason };
        let (id, result) = match step {
            Step::Contract { edge } => (edge, g.edge_index(edge).map(|e| state.contract(e))),
            Step::Cancel { symbol } => (symbol, g.edge_index(symbol).map(|e| state.cancel(e))),
        };
        match result {
            None => return Err(illegal(format!("unknown symbol `{id}`"))),
            Some(Err(reason)) => return Err(illegal(format!("`{id}`: {reason}"))),
            Some(Ok(())) => {}
        }
    }
    let end = |reason: String| CertificateError::IllegalStep { step: t.steps.len(), reason };
    let live = state.live_nodes();
    if live.len() != 1 {
        return Err(end(format!("{} words remain", live.len())));
    }
    let root = live[0];
    let left = state.words[root].as_ref().map_or(0, Vec::len);
    if left != 0 {
        return Err(end(format!("final word has {left} symbols")));
    }
    if state.signs[root] != t.final_sign {
        return Err(end(format!("final sign is {}, trace claims {}", state.signs[root], t.final_sign)));
    }
    Ok(state.signs[root])
}

/// [`check`], additionally requiring the trace to start from `r` and `signs`.
pub fn check_against(
    g: &IntersectionGraph,
    r: &RotationSystem,
    signs: &[Sign],
    t: &ContractionTrace,
) -> Result<Sign, CertificateError> {
    if t.initial.rotation != r.to_words(g) {
        return Err(CertificateError::InvalidInitial("rotation differs from the given embedding".into()));
    }
    let expected: BTreeMap<String, Sign> = (0..g.node_count()).map(|n| (g.node_id(n).to_string(), signs[n])).collect();
    if t.initial.signs != expected {
        return Err(CertificateError::InvalidInitial("signs differ from the given signing".into()));
    }
    check(g, t)
}
