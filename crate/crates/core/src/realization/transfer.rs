//! Moving a built-in realization onto any arrangement whose dual contains a
//! K5 or K3,3 subdivision, and the overall magic/non-magic decision.

use thiserror::Error;

use crate::arrangement::{classical_realize, Arrangement, ClassicalRealization, Signing};
use crate::certificate::{self, CertificateError, ContractionTrace};
use crate::graph::{IntersectionGraph, RotationSystem};
use crate::pauli::PauliOperator;
use crate::planarity::{
    test_planarity, verify_embedding, verify_witness, BranchPath, KuratowskiKind, KuratowskiWitness, PlanarityResult,
};
use crate::sign::Sign;

use super::{builtin_for, check_realization, Builtin, QuantumRealization};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("minor embedding does not match the target graph: {0}")]
    EmbeddingMismatch(String),
    #[error("self-check failed: {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// Pattern vertex `i` sits at node `vertex_map[i]`; pattern edge
/// `kind.pattern_edges()[k]` runs along the graph edges `path_map[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorEmbedding {
    pub kind: KuratowskiKind,
    pub vertex_map: Vec<usize>,
    pub path_map: Vec<Vec<usize>>,
}

impl MinorEmbedding {
    pub fn to_witness(&self) -> KuratowskiWitness {
        KuratowskiWitness {
            kind: self.kind,
            branch: self.vertex_map.clone(),
            paths: self
                .kind
                .pattern_edges()
                .into_iter()
                .zip(&self.path_map)
                .map(|((i, j), edges)| BranchPath { from: self.vertex_map[i], to: self.vertex_map[j], edges: edges.clone() })
                .collect(),
        }
    }
}

/// Reads a canonical witness as a topological-minor embedding. Branch
/// positions keep the witness order, which is sorted by id (K3,3: by side).
pub fn extract_minor_embedding(w: &KuratowskiWitness) -> MinorEmbedding {
    MinorEmbedding {
        kind: w.kind,
        vertex_map: w.branch.clone(),
        path_map: w.paths.iter().map(|p| p.edges.clone()).collect(),
    }
}

/// Labels every edge on the path for pattern edge `uv` with the source
/// operator of `uv` and all other edges with the identity. Branch nodes take
/// the source hyperedge signs; every other node gets `+1`.
pub fn transfer(
    me: &MinorEmbedding,
    target: &Arrangement,
    source: &Builtin,
) -> Result<(Signing, QuantumRealization), SynthesisError> {
    if me.kind != source.kind {
        return Err(SynthesisError::EmbeddingMismatch(format!("{:?} embedding, {:?} source", me.kind, source.kind)));
    }
    let g = IntersectionGraph::build(target);
    if me.path_map.len() != me.kind.pattern_edges().len() || !verify_witness(&g, &me.to_witness()) {
        return Err(SynthesisError::EmbeddingMismatch("paths do not form a subdivision".into()));
    }
    let n = source.realization.n_qubits();
    let mut operators = vec![PauliOperator::identity(n); target.vertex_count()];
    for (k, path) in me.path_map.iter().enumerate() {
        let op = source.realization.operator(source.pattern_vertices[k]);
        for &e in path {
            operators[e] = op.clone();
        }
    }
    let mut signs = vec![Sign::Plus; target.hyperedge_count()];
    for (i, &node) in me.vertex_map.iter().enumerate() {
        signs[node] = source.signing.sign(source.pattern_nodes[i]);
    }
    let signing = Signing::from_signs(target, signs).expect("one sign per hyperedge");
    let r = QuantumRealization::new(n, operators);
    match check_realization(target, &signing, &r) {
        Ok(Ok(())) => Ok((signing, r)),
        Ok(Err(v)) => Err(SynthesisError::SelfCheck(format!("transferred realization fails: {v:?}"))),
        Err(e) => Err(SynthesisError::SelfCheck(e.to_string())),
    }
}

#[derive(Debug, Clone)]
pub enum MagicVerdict {
    Magic {
        signing: Signing,
        realization: QuantumRealization,
        witness: KuratowskiWitness,
        embedding: MinorEmbedding,
    },
    NotMagic {
        rotation: RotationSystem,
        certificate: ContractionTrace,
        classical: ClassicalRealization,
    },
}

impl MagicVerdict {
    pub fn is_magic(&self) -> bool {
        matches!(self, MagicVerdict::Magic { .. })
    }
}

/// Decides whether `a` is magic and attaches a checked artifact: an odd
/// signing with a Pauli realization, or a contraction certificate together
/// with a classical realization of the all-`+1` signing.
pub fn synthesize(a: &Arrangement) -> Result<MagicVerdict, SynthesisError> {
    let g = IntersectionGraph::build(a);
    match test_planarity(&g) {
        PlanarityResult::NonPlanar(witness) => {
            if !verify_witness(&g, &witness) {
                return Err(SynthesisError::SelfCheck("Kuratowski witness rejected".into()));
            }
            let embedding = extract_minor_embedding(&witness);
            let (signing, realization) = transfer(&embedding, a, builtin_for(witness.kind))?;
            if signing.parity() != Sign::Minus {
                return Err(SynthesisError::SelfCheck("transferred signing has even parity".into()));
            }
            Ok(MagicVerdict::Magic { signing, realization, witness, embedding })
        }
        PlanarityResult::Planar(rotation) => {
            if verify_embedding(&g, &rotation) != Ok(true) {
                return Err(SynthesisError::SelfCheck("embedding fails Euler's formula".into()));
            }
            let plus = vec![Sign::Plus; g.node_count()];
            let certificate = certificate::generate(&g, &rotation, &plus)?;
            if certificate::check_against(&g, &rotation, &plus, &certificate)? != Sign::Plus {
                return Err(SynthesisError::SelfCheck("certificate ends with -1".into()));
            }
            let all_plus = Signing::all_plus(a);
            let classical = classical_realize(a, &all_plus).map_err(|e| SynthesisError::SelfCheck(e.to_string()))?;
            if !classical.satisfies(a, &all_plus) {
                return Err(SynthesisError::SelfCheck("classical realization fails".into()));
            }
            Ok(MagicVerdict::NotMagic { rotation, certificate, classical })
        }
    }
}
