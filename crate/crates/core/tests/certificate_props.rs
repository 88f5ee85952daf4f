mod common;

use std::collections::BTreeSet;

use mermin::certificate::{check, generate, CertificateError, ContractionTrace, InitialState, Step};
use mermin::corpus::{random_multigraph, sample_arrangement};
use mermin::graph::{Dart, IntersectionGraph, RotationSystem};
use mermin::planarity::{test_planarity, PlanarityResult};
use mermin::sign::Sign;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_rotation<R: Rng>(rng: &mut R, g: &IntersectionGraph) -> RotationSystem {
    RotationSystem::new(
        (0..g.node_count())
            .map(|v| {
                let mut d = g.incident(v);
                d.shuffle(rng);
                d
            })
            .collect(),
    )
}

fn random_signs<R: Rng>(rng: &mut R, n: usize) -> Vec<Sign> {
    (0..n).map(|_| Sign::from_bool_negative(rng.gen())).collect()
}

/// Splice rule against the tree-walk word and free reduction, on arbitrary
/// (also non-planar) rotations of graphs with at most five edges.
#[test]
fn checker_agrees_with_free_reduction_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let (mut reduced, mut stuck) = (0, 0);
    for _ in 0..2000 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(n - 1..=5);
        let g = random_multigraph(&mut rng, n, m, true);
        let r = random_rotation(&mut rng, &g);
        let ends: Vec<(usize, usize)> = g.edges().iter().map(|e| e.ends).collect();
        let tree = common::bfs_tree(n, &ends);
        let tree_set: BTreeSet<usize> = tree.iter().copied().collect();
        let rot: Vec<Vec<usize>> =
            r.rotations().iter().map(|ds| ds.iter().map(|d| 2 * d.edge + d.end as usize).collect()).collect();
        let word = common::contracted_word(&rot, &tree_set, |d| g.dart_node(Dart::new(d / 2, (d % 2) as u8)));
        let (removed, left) = common::free_reduce(&word);
        let genus_zero = r.euler_characteristic(&g) == 2;
        assert_eq!(left.is_empty(), genus_zero, "rotation {:?}", r.to_words(&g));

        let signs = random_signs(&mut rng, n);
        let parity = Sign::product(signs.iter().copied());
        let id = |e: usize| g.edge(e).id.clone();
        let trace = ContractionTrace {
            initial: InitialState {
                rotation: r.to_words(&g),
                signs: (0..n).map(|v| (g.node_id(v).to_string(), signs[v])).collect(),
            },
            steps: tree
                .iter()
                .map(|&e| Step::Contract { edge: id(e) })
                .chain(removed.iter().map(|&e| Step::Cancel { symbol: id(e) }))
                .collect(),
            final_sign: parity,
        };
        let verdict = check(&g, &trace);
        if genus_zero {
            reduced += 1;
            assert_eq!(verdict, Ok(parity));
            assert_eq!(generate(&g, &r, &signs).map(|t| check(&g, &t)), Ok(Ok(parity)));
        } else {
            stuck += 1;
            assert!(matches!(verdict, Err(CertificateError::IllegalStep { .. })));
            assert!(matches!(generate(&g, &r, &signs), Err(CertificateError::EmbeddingInvalid(_))));
        }
    }
    assert!(reduced > 200 && stuck > 200, "{reduced} reduced, {stuck} stuck");
}

#[test]
fn planar_corpus_round_trips() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut planar = 0;
    for _ in 0..300 {
        let a = sample_arrangement(&mut rng, 10, 25);
        let g = IntersectionGraph::build(&a);
        let PlanarityResult::Planar(r) = test_planarity(&g) else { continue };
        planar += 1;
        let signs = random_signs(&mut rng, g.node_count());
        let t = generate(&g, &r, &signs).unwrap();
        assert_eq!(t.contractions(), g.node_count() - 1);
        assert_eq!(t.cancellations(), g.edge_count() - (g.node_count() - 1));
        assert_eq!(check(&g, &t), Ok(Sign::product(signs)));
        let json = t.to_json_pretty();
        assert_eq!(ContractionTrace::from_json(&json).unwrap(), t);
    }
    assert!(planar > 50);
}

#[test]
fn mutated_traces_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut rejected = 0;
    while rejected < 200 {
        let a = sample_arrangement(&mut rng, 8, 14);
        let g = IntersectionGraph::build(&a);
        let PlanarityResult::Planar(r) = test_planarity(&g) else { continue };
        let t = generate(&g, &r, &random_signs(&mut rng, g.node_count())).unwrap();
        if t.steps.is_empty() {
            continue;
        }
        let mut bad = t.clone();
        let i = rng.gen_range(0..t.steps.len());
        match rng.gen_range(0..6) {
            0 => {
                bad.steps.remove(i);
            }
            1 => bad.steps.insert(i, t.steps[i].clone()),
            2 => bad.steps[i] = Step::Cancel { symbol: "no-such-symbol".into() },
            3 => bad.final_sign = -bad.final_sign,
            4 => bad.steps.truncate(i),
            _ => {
                bad.steps[i] = match &t.steps[i] {
                    Step::Contract { edge } => Step::Cancel { symbol: edge.clone() },
                    Step::Cancel { symbol } => Step::Contract { edge: symbol.clone() },
                }
            }
        }
        let verdict = check(&g, &bad);
        assert!(matches!(verdict, Err(CertificateError::IllegalStep { .. })), "{verdict:?}");
        rejected += 1;
    }
}
