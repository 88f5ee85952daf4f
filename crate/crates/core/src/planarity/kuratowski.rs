//! Kuratowski subdivision extraction by edge deletion.
//!
//! Starting from a non-planar block, every edge whose removal leaves the
//! remainder non-planar is dropped. What survives is edge-minimal non-planar,
//! hence exactly a subdivision of K5 or K3,3 (plus isolated vertices).

use super::embed;
use super::KuratowskiKind;

/// A subdivision found in a simple graph, in terms of simple-edge indices.
pub(crate) struct RawWitness {
    pub kind: KuratowskiKind,
    pub branch: Vec<usize>,
    /// (from, to, edges) with from < to as node indices.
    pub paths: Vec<(usize, usize, Vec<usize>)>,
}

pub(crate) fn extract(n: usize, edges: &[(usize, usize)]) -> Option<RawWitness> {
    let block = embed::first_nonplanar_block(n, edges)?;
    let mut keep = vec![true; block.len()];
    // An edge needed now stays needed in every subgraph; so do the other
    // edges of its chain through degree-2 nodes, which removal treats alike.
    let mut settled = vec![false; block.len()];
    for i in 0..block.len() {
        if settled[i] {
            continue;
        }
        keep[i] = false;
        let subset: Vec<(usize, usize)> =
            block.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| edges[e]).collect();
        if embed::is_planar(n, &subset) {
            keep[i] = true;
            for j in chain(n, edges, &block, &keep, i) {
                settled[j] = true;
            }
        }
    }
    let kept: Vec<usize> = block.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();

    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for &e in &kept {
        let (a, b) = edges[e];
        adj[a].push((e, b));
        adj[b].push((e, a));
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() >= 3).collect();
    let kind = match (branch.len(), adj.get(branch[0]).map(Vec::len)) {
        (5, Some(4)) => KuratowskiKind::K5,
        (6, Some(3)) => KuratowskiKind::K33,
        _ => unreachable!("edge-minimal non-planar graph is a Kuratowski subdivision"),
    };
    debug_assert!(branch.iter().all(|&b| adj[b].len() == kind.branch_degree()));

    let mut is_branch = vec![false; n];
    for &b in &branch {
        is_branch[b] = true;
    }
    let mut paths = Vec::new();
    for &b in &branch {
        for &(first, next) in &adj[b] {
            let mut path = vec![first];
            let mut prev_edge = first;
            let mut cur = next;
            while !is_branch[cur] {
                let &(e, w) = adj[cur].iter().find(|&&(e, _)| e != prev_edge).expect("subdivision vertex has degree 2");
                path.push(e);
                prev_edge = e;
                cur = w;
            }
            if b < cur {
                paths.push((b, cur, path));
            }
        }
    }
    Some(RawWitness { kind, branch, paths })
}

/// Positions in `block` of the kept edges on the maximal path through
/// degree-2 nodes that contains `block[start]`.
fn chain(n: usize, edges: &[(usize, usize)], block: &[usize], keep: &[bool], start: usize) -> Vec<usize> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, &e) in block.iter().enumerate() {
        if keep[i] {
            incident[edges[e].0].push(i);
            incident[edges[e].1].push(i);
        }
    }
    let mut out = vec![start];
    let (a, b) = edges[block[start]];
    for mut node in [a, b] {
        let mut prev = start;
        while incident[node].len() == 2 {
            let next = if incident[node][0] == prev { incident[node][1] } else { incident[node][0] };
            if next == start {
                break;
            }
            out.push(next);
            let (x, y) = edges[block[next]];
            node = if x == node { y } else { x };
            prev = next;
        }
    }
    out
}
