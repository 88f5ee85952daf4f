//! The two smallest magic arrangements with fixed Pauli tables.

use std::sync::OnceLock;

use crate::arrangement::{Arrangement, Signing};
use crate::graph::IntersectionGraph;
use crate::pauli::PauliOperator;
use crate::planarity::{test_planarity, KuratowskiKind, PlanarityResult};
use crate::sign::Sign;

use super::QuantumRealization;

/// A magic arrangement whose dual is exactly K5 or K3,3, with an odd signing
/// and a realization of it.
///
/// `pattern_nodes[i]` is the hyperedge at pattern position `i` and
/// `pattern_vertices[k]` the vertex realizing `kind.pattern_edges()[k]`,
/// both taken from the canonical witness of the arrangement's own dual.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub kind: KuratowskiKind,
    pub arrangement: Arrangement,
    pub signing: Signing,
    pub realization: QuantumRealization,
    pub pattern_nodes: Vec<usize>,
    pub pattern_vertices: Vec<usize>,
}

type Line<const N: usize> = (&'static str, [(&'static str, &'static str); N], Sign);

const SQUARE: [Line<3>; 6] = [
    ("row1", [("v11", "+XI"), ("v12", "+IX"), ("v13", "+XX")], Sign::Plus),
    ("row2", [("v21", "+IZ"), ("v22", "+ZI"), ("v23", "+ZZ")], Sign::Plus),
    ("row3", [("v31", "-XZ"), ("v32", "-ZX"), ("v33", "+YY")], Sign::Plus),
    ("col1", [("v11", ""), ("v21", ""), ("v31", "")], Sign::Minus),
    ("col2", [("v12", ""), ("v22", ""), ("v32", "")], Sign::Minus),
    ("col3", [("v13", ""), ("v23", ""), ("v33", "")], Sign::Minus),
];

// Vertex `pij` lies on lines i and j. No Y appears, so every operator is real.
const PENTAGRAM: [(&str, &str); 10] = [
    ("p01", "+XXX"),
    ("p02", "+XZZ"),
    ("p03", "+ZXZ"),
    ("p04", "+ZZX"),
    ("p12", "+XII"),
    ("p13", "+IXI"),
    ("p14", "+IIX"),
    ("p23", "+IIZ"),
    ("p24", "+IZI"),
    ("p34", "+ZII"),
];

fn assemble(
    n_qubits: usize,
    vertices: Vec<(String, PauliOperator)>,
    hyperedges: Vec<(String, Vec<String>, Sign)>,
) -> Builtin {
    let a = Arrangement::new(
        vertices.iter().map(|(v, _)| v.clone()),
        hyperedges.iter().map(|(h, m, _)| (h.clone(), m.clone())),
    )
    .expect("builtin arrangement is valid");
    let signs = a
        .hyperedges()
        .iter()
        .map(|h| hyperedges.iter().find(|(id, _, _)| id == h.id()).expect("known").2)
        .collect();
    let signing = Signing::from_signs(&a, signs).expect("one sign per hyperedge");
    let operators = a
        .vertex_ids()
        .iter()
        .map(|id| vertices.iter().find(|(v, _)| v == id).expect("known").1.clone())
        .collect();
    let realization = QuantumRealization::new(n_qubits, operators);

    let g = IntersectionGraph::build(&a);
    let PlanarityResult::NonPlanar(w) = test_planarity(&g) else {
        unreachable!("builtin duals are Kuratowski graphs")
    };
    debug_assert!(w.paths.iter().all(|p| p.edges.len() == 1));
    Builtin {
        kind: w.kind,
        pattern_nodes: w.branch.clone(),
        pattern_vertices: w.paths.iter().map(|p| p.edges[0]).collect(),
        arrangement: a,
        signing,
        realization,
    }
}

/// Three-by-three square on two qubits: rows multiply to `+I`, columns to `-I`.
pub fn builtin_square() -> Builtin {
    let vertices = SQUARE[..3]
        .iter()
        .flat_map(|(_, cells, _)| cells.iter())
        .map(|&(v, op)| (v.to_string(), op.parse().expect("valid table entry")))
        .collect();
    let hyperedges = SQUARE
        .iter()
        .map(|(h, cells, s)| (h.to_string(), cells.iter().map(|(v, _)| v.to_string()).collect(), *s))
        .collect();
    assemble(2, vertices, hyperedges)
}

/// Five lines, each pair meeting in one point, on three qubits. `line0`
/// multiplies to `-I`, the other lines to `+I`.
pub fn builtin_pentagram() -> Builtin {
    let vertices = PENTAGRAM.iter().map(|&(v, op)| (v.to_string(), op.parse().expect("valid table entry"))).collect();
    let hyperedges = (0..5)
        .map(|line| {
            let members = PENTAGRAM
                .iter()
                .filter(|(v, _)| v[1..].contains(char::from_digit(line, 10).unwrap()))
                .map(|(v, _)| v.to_string())
                .collect();
            let sign = if line == 0 { Sign::Minus } else { Sign::Plus };
            (format!("line{line}"), members, sign)
        })
        .collect();
    assemble(3, vertices, hyperedges)
}

/// The builtin whose dual is `kind`, built once per process.
pub fn builtin_for(kind: KuratowskiKind) -> &'static Builtin {
    static SQUARE_CELL: OnceLock<Builtin> = OnceLock::new();
    static PENTAGRAM_CELL: OnceLock<Builtin> = OnceLock::new();
    match kind {
        KuratowskiKind::K5 => PENTAGRAM_CELL.get_or_init(builtin_pentagram),
        KuratowskiKind::K33 => SQUARE_CELL.get_or_init(builtin_square),
    }
}
