//! Seeded random arrangements and multigraphs for testing and the `gen`
//! command.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arrangement::Arrangement;
use crate::graph::{Edge, IntersectionGraph};

/// Random connected multigraph: a random spanning tree plus extra edges
/// between uniform endpoints. Self-loops appear only when `loops` is set.
pub fn random_multigraph_edges<R: Rng + ?Sized>(rng: &mut R, nodes: usize, edges: usize, loops: bool) -> Vec<(usize, usize)> {
    assert!(nodes >= 1 && edges + 1 >= nodes, "need at least a spanning tree");
    assert!(loops || nodes >= 2 || edges == 0, "a single node admits only loops");
    let mut order: Vec<usize> = (0..nodes).collect();
    order.shuffle(rng);
    let mut out: Vec<(usize, usize)> = (1..nodes).map(|i| (order[rng.gen_range(0..i)], order[i])).collect();
    while out.len() < edges {
        let a = rng.gen_range(0..nodes);
        let b = rng.gen_range(0..nodes);
        if a != b || loops {
            out.push((a, b));
        }
    }
    out.shuffle(rng);
    out
}

pub fn random_multigraph<R: Rng + ?Sized>(rng: &mut R, nodes: usize, edges: usize, loops: bool) -> IntersectionGraph {
    let ends = random_multigraph_edges(rng, nodes, edges, loops);
    IntersectionGraph::new(
        (0..nodes).map(|i| format!("n{i:02}")).collect(),
        ends.into_iter().enumerate().map(|(i, ends)| Edge { id: format!("x{i:02}"), ends }).collect(),
    )
    .expect("spanning tree keeps the graph connected")
}

/// Random arrangement with exactly `hyperedges` hyperedges and `vertices`
/// vertices. Ids are zero-padded (`e00`, `v00`) and member order within each
/// hyperedge is shuffled.
pub fn random_arrangement<R: Rng + ?Sized>(rng: &mut R, hyperedges: usize, vertices: usize) -> Arrangement {
    assert!(hyperedges >= 2, "a single hyperedge cannot hold a degree-two vertex");
    let ends = random_multigraph_edges(rng, hyperedges, vertices, false);
    let mut members: Vec<Vec<String>> = vec![Vec::new(); hyperedges];
    for (v, &(a, b)) in ends.iter().enumerate() {
        members[a].push(format!("v{v:02}"));
        members[b].push(format!("v{v:02}"));
    }
    for m in &mut members {
        m.shuffle(rng);
    }
    Arrangement::new(
        (0..vertices).map(|v| format!("v{v:02}")),
        members.into_iter().enumerate().map(|(h, m)| (format!("e{h:02}"), m)),
    )
    .expect("generated arrangement is valid")
}

/// Random sizes: 2..=`max_hyperedges` hyperedges and enough vertices to
/// connect them, up to `max_vertices`.
pub fn sample_arrangement<R: Rng + ?Sized>(rng: &mut R, max_hyperedges: usize, max_vertices: usize) -> Arrangement {
    let k = rng.gen_range(2..=max_hyperedges);
    let v = rng.gen_range(k - 1..=max_vertices.max(k - 1));
    random_arrangement(rng, k, v)
}

/// `count` arrangements from one seed.
pub fn corpus(seed: u64, count: usize, max_hyperedges: usize, max_vertices: usize) -> Vec<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| sample_arrangement(&mut rng, max_hyperedges, max_vertices)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_determinism() {
        let a = corpus(5, 50, 10, 25);
        assert_eq!(a, corpus(5, 50, 10, 25));
        for arr in &a {
            assert!((2..=10).contains(&arr.hyperedge_count()));
            assert!(arr.vertex_count() <= 25);
        }
    }

    #[test]
    fn multigraph_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_multigraph(&mut rng, 7, 15, true);
        assert_eq!((g.node_count(), g.edge_count()), (7, 15));
        let g = random_multigraph(&mut rng, 1, 3, true);
        assert!(g.edges().iter().all(|e| e.is_loop()));
    }
}
