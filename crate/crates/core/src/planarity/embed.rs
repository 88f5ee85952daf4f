//! Planar embedding of simple loopless graphs by path addition.
//!
//! The graph is split into biconnected blocks. Each block is embedded
//! starting from a cycle: at every step the not-yet-embedded part is broken
//! into fragments (chords, and components of unembedded vertices together
//! with their attachment edges), each fragment is matched against the faces
//! that contain all of its attachment vertices, and a path through a forced
//! (or otherwise the first) fragment is drawn across an admissible face. A
//! fragment with no admissible face means the block is not planar. Block
//! rotations are concatenated at cut vertices.

use std::collections::VecDeque;

use crate::graph::Dart;

const UNSET: usize = usize::MAX;

/// Edge index lists of the biconnected blocks, in discovery order.
pub(crate) fn biconnected_components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        adj[a].push((i, b));
        adj[b].push((i, a));
    }
    let mut disc = vec![UNSET; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut blocks = Vec::new();

    for root in 0..n {
        if disc[root] != UNSET || adj[root].is_empty() {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (node, edge used to reach it, next adjacency position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, UNSET, 0)];
        while let Some(top) = stack.last_mut() {
            let (node, parent_edge, pos) = *top;
            if pos < adj[node].len() {
                top.2 += 1;
                let (e, next) = adj[node][pos];
                if e == parent_edge {
                    continue;
                }
                if disc[next] == UNSET {
                    disc[next] = time;
                    low[next] = time;
                    time += 1;
                    edge_stack.push(e);
                    stack.push((next, e, 0));
                } else if disc[next] < disc[node] {
                    edge_stack.push(e);
                    low[node] = low[node].min(disc[next]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[node]);
                    if low[node] >= disc[parent] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(e);
                            if e == parent_edge {
                                break;
                            }
                        }
                        block.sort_unstable();
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Rotation system of a planar simple graph, darts indexing into `edges`;
/// `None` if the graph is not planar.
pub(crate) fn embed(n: usize, edges: &[(usize, usize)]) -> Option<Vec<Vec<Dart>>> {
    let mut rotations = vec![Vec::new(); n];
    for block in biconnected_components(n, edges) {
        for (node, darts) in embed_block(n, edges, &block)? {
            rotations[node].extend(darts);
        }
    }
    Some(rotations)
}

pub(crate) fn is_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    biconnected_components(n, edges).iter().all(|block| embed_block(n, edges, block).is_some())
}

/// Index of the first block that fails to embed.
pub(crate) fn first_nonplanar_block(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    biconnected_components(n, edges).into_iter().find(|block| embed_block(n, edges, block).is_none())
}

struct Block {
    /// Local vertex -> global node.
    verts: Vec<usize>,
    /// Local edge endpoints.
    ends: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
}

impl Block {
    fn dart_at(&self, e: usize, v: usize) -> Dart {
        Dart::new(e, if self.ends[e].0 == v { 0 } else { 1 })
    }

    fn tail(&self, d: Dart) -> usize {
        if d.end == 0 {
            self.ends[d.edge].0
        } else {
            self.ends[d.edge].1
        }
    }
}

struct Fragment {
    edges: Vec<usize>,
    attachments: Vec<usize>,
    component: Option<usize>,
}

fn embed_block(n: usize, edges: &[(usize, usize)], block: &[usize]) -> Option<Vec<(usize, Vec<Dart>)>> {
    let mut local = vec![UNSET; n];
    let mut verts = Vec::new();
    for &e in block {
        for v in [edges[e].0, edges[e].1] {
            if local[v] == UNSET {
                local[v] = verts.len();
                verts.push(v);
            }
        }
    }
    let k = verts.len();
    let m = block.len();
    let ends: Vec<(usize, usize)> = block.iter().map(|&e| (local[edges[e].0], local[edges[e].1])).collect();

    if m == 1 {
        return Some(vec![(edges[block[0]].0, vec![Dart::new(block[0], 0)]), (edges[block[0]].1, vec![Dart::new(block[0], 1)])]);
    }
    if k >= 3 && m > 3 * k - 6 {
        return None;
    }

    let mut adj = vec![Vec::new(); k];
    for (i, &(a, b)) in ends.iter().enumerate() {
        adj[a].push((i, b));
        adj[b].push((i, a));
    }
    let blk = Block { verts, ends, adj };

    let mut in_v = vec![false; k];
    let mut in_e = vec![false; m];
    let mut rot: Vec<Vec<Dart>> = vec![Vec::new(); k];
    seed_cycle(&blk, &mut in_v, &mut in_e, &mut rot);
    let mut embedded = in_e.iter().filter(|&&x| x).count();

    while embedded < m {
        let faces = trace_faces(&blk, &rot, &in_e);
        let face_sets: Vec<Vec<bool>> = faces
            .iter()
            .map(|f| {
                let mut set = vec![false; k];
                for &d in f {
                    set[blk.tail(d)] = true;
                }
                set
            })
            .collect();
        let (fragments, component) = fragments(&blk, &in_v, &in_e);

        let mut chosen: Option<(usize, usize)> = None;
        let mut fallback: Option<(usize, usize)> = None;
        for (i, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len())
                .filter(|&f| frag.attachments.iter().all(|&a| face_sets[f][a]))
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    if chosen.is_none() {
                        chosen = Some((i, admissible[0]));
                    }
                }
                _ => {
                    if fallback.is_none() {
                        fallback = Some((i, admissible[0]));
                    }
                }
            }
        }
        let (fi, face) = chosen.or(fallback).expect("unembedded edges form at least one fragment");
        let (path_vertices, path_edges) = fragment_path(&blk, &fragments[fi], &in_v, &component);
        insert_path(&blk, &faces[face], &path_vertices, &path_edges, &mut rot);
        for &v in &path_vertices {
            in_v[v] = true;
        }
        for &e in &path_edges {
            in_e[e] = true;
        }
        embedded += path_edges.len();
    }

    Some(
        rot.into_iter()
            .enumerate()
            .map(|(v, darts)| (blk.verts[v], darts.into_iter().map(|d| Dart::new(block[d.edge], d.end)).collect()))
            .collect(),
    )
}

/// Embeds the cycle closed by the first non-tree edge of a BFS tree.
fn seed_cycle(blk: &Block, in_v: &mut [bool], in_e: &mut [bool], rot: &mut [Vec<Dart>]) {
    let k = blk.verts.len();
    let mut parent = vec![UNSET; k];
    let mut parent_edge = vec![UNSET; k];
    let mut seen = vec![false; k];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    while let Some(u) = queue.pop_front() {
        for &(e, w) in &blk.adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                parent_edge[w] = e;
                queue.push_back(w);
            }
        }
    }
    let tree_edge = |e: usize| {
        let (a, b) = blk.ends[e];
        parent_edge[a] == e || parent_edge[b] == e
    };
    let closing = (0..blk.ends.len()).find(|&e| !tree_edge(e)).expect("a biconnected block has a cycle");
    let (u, v) = blk.ends[closing];

    let mut ancestors = vec![false; k];
    let mut x = u;
    loop {
        ancestors[x] = true;
        if parent[x] == UNSET {
            break;
        }
        x = parent[x];
    }
    let mut lca = v;
    while !ancestors[lca] {
        lca = parent[lca];
    }
    let mut cycle_edges = vec![closing];
    for start in [u, v] {
        let mut x = start;
        while x != lca {
            cycle_edges.push(parent_edge[x]);
            x = parent[x];
        }
    }
    for e in cycle_edges {
        in_e[e] = true;
        let (a, b) = blk.ends[e];
        in_v[a] = true;
        in_v[b] = true;
        rot[a].push(blk.dart_at(e, a));
        rot[b].push(blk.dart_at(e, b));
    }
}

fn slot(d: Dart) -> usize {
    2 * d.edge + d.end as usize
}

fn trace_faces(blk: &Block, rot: &[Vec<Dart>], in_e: &[bool]) -> Vec<Vec<Dart>> {
    let m = blk.ends.len();
    let mut succ = vec![Dart::new(0, 0); 2 * m];
    for r in rot {
        for (i, &d) in r.iter().enumerate() {
            succ[slot(d)] = r[(i + 1) % r.len()];
        }
    }
    let mut visited = vec![false; 2 * m];
    let mut faces = Vec::new();
    for e in (0..m).filter(|&e| in_e[e]) {
        for end in 0..2 {
            let start = Dart::new(e, end);
            if visited[slot(start)] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start;
            loop {
                visited[slot(d)] = true;
                face.push(d);
                d = succ[slot(d.twin())];
                if d == start {
                    break;
                }
            }
            faces.push(face);
        }
    }
    faces
}

fn fragments(blk: &Block, in_v: &[bool], in_e: &[bool]) -> (Vec<Fragment>, Vec<usize>) {
    let k = blk.verts.len();
    let mut component = vec![UNSET; k];
    let mut frags: Vec<Fragment> = Vec::new();
    for start in 0..k {
        if in_v[start] || component[start] != UNSET {
            continue;
        }
        let c = frags.len();
        component[start] = c;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &(_, w) in &blk.adj[u] {
                if !in_v[w] && component[w] == UNSET {
                    component[w] = c;
                    queue.push_back(w);
                }
            }
        }
        frags.push(Fragment { edges: Vec::new(), attachments: Vec::new(), component: Some(c) });
    }
    for (e, &(a, b)) in blk.ends.iter().enumerate() {
        if in_e[e] {
            continue;
        }
        if in_v[a] && in_v[b] {
            frags.push(Fragment { edges: vec![e], attachments: vec![a.min(b), a.max(b)], component: None });
        } else {
            let c = if in_v[a] { component[b] } else { component[a] };
            frags[c].edges.push(e);
            for v in [a, b] {
                if in_v[v] {
                    frags[c].attachments.push(v);
                }
            }
        }
    }
    for f in &mut frags {
        f.attachments.sort_unstable();
        f.attachments.dedup();
    }
    (frags, component)
}

/// A path through the fragment joining two distinct attachment vertices.
fn fragment_path(blk: &Block, frag: &Fragment, in_v: &[bool], component: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let Some(c) = frag.component else {
        let e = frag.edges[0];
        let (a, b) = blk.ends[e];
        return (vec![a, b], vec![e]);
    };
    let k = blk.verts.len();
    let source = frag.attachments[0];
    let mut prev_edge = vec![UNSET; k];
    let mut seen = vec![false; k];
    seen[source] = true;
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        for &(e, w) in &blk.adj[u] {
            if in_v[w] {
                if u == source || w == source || in_v[u] {
                    continue;
                }
                // Reached a second attachment.
                let mut vertices = vec![w, u];
                let mut path_edges = vec![e];
                let mut x = u;
                while x != source {
                    let pe = prev_edge[x];
                    path_edges.push(pe);
                    let (a, b) = blk.ends[pe];
                    x = if a == x { b } else { a };
                    vertices.push(x);
                }
                vertices.reverse();
                path_edges.reverse();
                return (vertices, path_edges);
            }
            if component[w] == c && !seen[w] {
                seen[w] = true;
                prev_edge[w] = e;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a biconnected block has two attachments")
}

fn insert_path(blk: &Block, face: &[Dart], vertices: &[usize], path_edges: &[usize], rot: &mut [Vec<Dart>]) {
    let first = vertices[0];
    let last = *vertices.last().unwrap();
    let leaving = |v: usize| *face.iter().find(|&&d| blk.tail(d) == v).expect("attachment lies on the face");
    let at_first = leaving(first);
    let at_last = leaving(last);

    let insert_before = |rot: &mut Vec<Dart>, anchor: Dart, d: Dart| {
        let pos = rot.iter().position(|&x| x == anchor).expect("face dart is in the rotation");
        rot.insert(pos, d);
    };
    insert_before(&mut rot[first], at_first, blk.dart_at(path_edges[0], first));
    insert_before(&mut rot[last], at_last, blk.dart_at(*path_edges.last().unwrap(), last));
    for i in 1..vertices.len() - 1 {
        let v = vertices[i];
        rot[v] = vec![blk.dart_at(path_edges[i - 1], v), blk.dart_at(path_edges[i], v)];
    }
}
