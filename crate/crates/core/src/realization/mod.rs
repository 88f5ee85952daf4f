//! Quantum realizations: Pauli observables on vertices whose products along
//! every hyperedge equal the hyperedge sign times the identity.

mod builtin;
mod transfer;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, Signing};
use crate::pauli::{product_of, PauliOperator};
use crate::sign::Sign;

pub use builtin::{builtin_for, builtin_pentagram, builtin_square, Builtin};
pub use transfer::{extract_minor_embedding, synthesize, transfer, MagicVerdict, MinorEmbedding, SynthesisError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizationError {
    #[error("realization has {got} operators for {expected} vertices")]
    Coverage { expected: usize, got: usize },
    #[error("operator for `{vertex}` acts on {got} qubits, expected {expected}")]
    QubitCount { vertex: String, expected: usize, got: usize },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("missing operator for vertex `{0}`")]
    MissingOperator(String),
    #[error(transparent)]
    Signing(#[from] ArrangementError),
    #[error("invalid realization JSON: {0}")]
    Json(String),
}

/// Why a complete realization fails its hyperedge conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotObservable { vertex: usize },
    Anticommuting { hyperedge: usize, first: usize, second: usize },
    WrongProduct { hyperedge: usize, product: PauliOperator },
}

/// One Pauli operator per arrangement vertex, by vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumRealization {
    n_qubits: usize,
    operators: Vec<PauliOperator>,
}

impl QuantumRealization {
    pub fn new(n_qubits: usize, operators: Vec<PauliOperator>) -> Self {
        QuantumRealization { n_qubits, operators }
    }

    /// Every vertex gets `+I`; realizes the all-`+1` signing.
    pub fn trivial(a: &Arrangement, n_qubits: usize) -> Self {
        QuantumRealization { n_qubits, operators: vec![PauliOperator::identity(n_qubits); a.vertex_count()] }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn operators(&self) -> &[PauliOperator] {
        &self.operators
    }

    pub fn operator(&self, v: usize) -> &PauliOperator {
        &self.operators[v]
    }

    pub fn set(&mut self, v: usize, op: PauliOperator) {
        self.operators[v] = op;
    }

    fn check_shape(&self, a: &Arrangement) -> Result<(), RealizationError> {
        if self.operators.len() != a.vertex_count() {
            return Err(RealizationError::Coverage { expected: a.vertex_count(), got: self.operators.len() });
        }
        for (v, op) in self.operators.iter().enumerate() {
            if op.n_qubits() != self.n_qubits {
                return Err(RealizationError::QubitCount {
                    vertex: a.vertex_id(v).to_string(),
                    expected: self.n_qubits,
                    got: op.n_qubits(),
                });
            }
        }
        Ok(())
    }
}

/// Full check, reporting the first violated condition. Commutation within a
/// hyperedge is checked before its product.
pub fn check_realization(
    a: &Arrangement,
    s: &Signing,
    r: &QuantumRealization,
) -> Result<Result<(), Violation>, RealizationError> {
    r.check_shape(a)?;
    if s.len() != a.hyperedge_count() {
        return Err(ArrangementError::SigningLength { expected: a.hyperedge_count(), got: s.len() }.into());
    }
    if let Some(vertex) = (0..a.vertex_count()).find(|&v| !r.operators[v].is_observable()) {
        return Ok(Err(Violation::NotObservable { vertex }));
    }
    for (h, edge) in a.hyperedges().iter().enumerate() {
        let members = edge.members();
        for (i, &x) in members.iter().enumerate() {
            for &y in &members[i + 1..] {
                if !r.operators[x].commutes(&r.operators[y]).expect("shapes checked") {
                    return Ok(Err(Violation::Anticommuting { hyperedge: h, first: x, second: y }));
                }
            }
        }
        let product = product_of(r.n_qubits, members.iter().map(|&v| &r.operators[v])).expect("shapes checked");
        if product.scalar_sign() != Some(s.sign(h)) {
            return Ok(Err(Violation::WrongProduct { hyperedge: h, product }));
        }
    }
    Ok(Ok(()))
}

/// Exact symbolic verification of `r` against the signed arrangement.
pub fn verify_realization(a: &Arrangement, s: &Signing, r: &QuantumRealization) -> Result<bool, RealizationError> {
    Ok(check_realization(a, s, r)?.is_ok())
}

/// Adapts a realization of `from` into one of `to`, which must have the same
/// parity. Operators are negated along dual paths pairing up the hyperedges
/// whose signs differ; each negated vertex flips both of its hyperedges.
pub fn resign(a: &Arrangement, from: &Signing, r: &QuantumRealization, to: &Signing) -> Option<QuantumRealization> {
    let flips = a.sign_flip_vertices(&from.differences(to))?;
    let mut out = r.clone();
    for (v, flip) in flips.into_iter().enumerate() {
        if flip {
            out.operators[v] = out.operators[v].negated();
        }
    }
    Some(out)
}

/// A realization of `s`, if one exists. Even signings get one-qubit `±I`
/// labels; odd signings are moved from the synthesized magic realization.
/// Returns `None` for odd signings of non-magic arrangements.
pub fn realize(a: &Arrangement, s: &Signing) -> Result<Option<QuantumRealization>, SynthesisError> {
    let (from, r) = if s.parity() == Sign::Plus {
        (Signing::all_plus(a), QuantumRealization::trivial(a, 1))
    } else {
        match synthesize(a)? {
            MagicVerdict::Magic { signing, realization, .. } => (signing, realization),
            MagicVerdict::NotMagic { .. } => return Ok(None),
        }
    };
    let moved = resign(a, &from, &r, s).expect("parities agree");
    match check_realization(a, s, &moved) {
        Ok(Ok(())) => Ok(Some(moved)),
        Ok(Err(v)) => Err(SynthesisError::SelfCheck(format!("re-signed realization fails: {v:?}"))),
        Err(e) => Err(SynthesisError::SelfCheck(e.to_string())),
    }
}

/// On-disk realization with its signing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RealizationFile {
    pub n_qubits: usize,
    pub operators: BTreeMap<String, PauliOperator>,
    pub signs: BTreeMap<String, Sign>,
}

impl RealizationFile {
    pub fn from_realization(a: &Arrangement, s: &Signing, r: &QuantumRealization) -> Self {
        RealizationFile {
            n_qubits: r.n_qubits,
            operators: (0..a.vertex_count()).map(|v| (a.vertex_id(v).to_string(), r.operators[v].clone())).collect(),
            signs: s.to_map(a),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, RealizationError> {
        serde_json::from_str(text).map_err(|e| RealizationError::Json(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("realization serializes")
    }

    /// Resolves ids against `a`. Operator widths are checked by the verifier.
    pub fn resolve(&self, a: &Arrangement) -> Result<(Signing, QuantumRealization), RealizationError> {
        if let Some(unknown) = self.operators.keys().find(|id| a.vertex_index(id).is_none()) {
            return Err(RealizationError::UnknownVertex(unknown.clone()));
        }
        let operators = a
            .vertex_ids()
            .iter()
            .map(|id| self.operators.get(id).cloned().ok_or_else(|| RealizationError::MissingOperator(id.clone())))
            .collect::<Result<_, _>>()?;
        let signing = Signing::from_map(a, &self.signs)?;
        let r = QuantumRealization::new(self.n_qubits, operators);
        r.check_shape(a)?;
        Ok((signing, r))
    }
}
