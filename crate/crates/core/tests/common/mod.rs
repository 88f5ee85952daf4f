//! Independent oracles shared by the integration tests and the acceptance
//! suite. None of these call into the code they are used to check.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use mermin::arrangement::{Arrangement, Signing};
use mermin::pauli::{Pauli, PauliOperator, Phase};
use mermin::sign::Sign;

/// Product of `(deg - 1)!` over nodes, saturating.
pub fn rotation_count(n: usize, edges: &[(usize, usize)]) -> u128 {
    let mut deg = vec![0u128; n];
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
    }
    deg.iter().fold(1u128, |acc, &d| {
        let f: u128 = (1..d.max(1)).product();
        acc.saturating_mul(f)
    })
}

/// Loops dropped, parallel edges merged.
pub fn simplify(edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    edges
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.min(b), a.max(b)))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Faces of a rotation system given as dart lists, dart `2e + end`, where
/// end 0 sits at `edges[e].0`.
pub fn count_faces(n: usize, edge_count: usize, rot: &[Vec<usize>]) -> usize {
    let mut succ = vec![usize::MAX; 2 * edge_count];
    for r in rot {
        for (i, &d) in r.iter().enumerate() {
            succ[d] = r[(i + 1) % r.len()];
        }
    }
    let mut seen = vec![false; 2 * edge_count];
    let mut faces = 0;
    for start in 0..2 * edge_count {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = succ[d ^ 1];
        }
    }
    faces + (0..n).filter(|&v| rot[v].is_empty()).count()
}

/// Tries every rotation system and reports whether one satisfies
/// V - E + F = 2. Components other than the one holding node 0 are ignored,
/// so callers pass connected graphs.
pub fn exhaustive_planar(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut darts: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(a, b)) in edges.iter().enumerate() {
        darts[a].push(2 * e);
        darts[b].push(2 * e + 1);
    }
    let target = 2 + edges.len() as i64 - n as i64;
    let mut rot: Vec<Vec<usize>> = vec![Vec::new(); n];
    fn search(
        v: usize,
        n: usize,
        m: usize,
        darts: &[Vec<usize>],
        rot: &mut Vec<Vec<usize>>,
        target: i64,
    ) -> bool {
        if v == n {
            return count_faces(n, m, rot) as i64 == target;
        }
        let ds = &darts[v];
        if ds.len() <= 2 {
            rot[v] = ds.clone();
            return search(v + 1, n, m, darts, rot, target);
        }
        // Fix the first dart; permute the rest.
        let mut rest: Vec<usize> = ds[1..].to_vec();
        permutations(&mut rest, 0, &mut |perm| {
            rot[v] = std::iter::once(ds[0]).chain(perm.iter().copied()).collect();
            search(v + 1, n, m, darts, rot, target)
        })
    }
    search(0, n, edges.len(), &darts, &mut rot, target)
}

/// Heap-style permutation walk; stops early when `f` returns true.
fn permutations(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == items.len() {
        return f(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permutations(items, k + 1, f) {
            items.swap(k, i);
            return true;
        }
        items.swap(k, i);
    }
    false
}

/// Cyclic word obtained by contracting the tree edges of a rotation system,
/// computed by walking around the tree. Darts are `2e + end`.
pub fn contracted_word(rot: &[Vec<usize>], tree: &BTreeSet<usize>, dart_node: impl Fn(usize) -> usize) -> Vec<usize> {
    fn walk(
        node: usize,
        entry: Option<usize>,
        rot: &[Vec<usize>],
        tree: &BTreeSet<usize>,
        dart_node: &dyn Fn(usize) -> usize,
        out: &mut Vec<usize>,
    ) {
        let r = &rot[node];
        let start = entry.map_or(0, |d| r.iter().position(|&x| x == d).unwrap() + 1);
        let count = if entry.is_some() { r.len() - 1 } else { r.len() };
        for i in 0..count {
            let d = r[(start + i) % r.len()];
            if tree.contains(&(d / 2)) {
                walk(dart_node(d ^ 1), Some(d ^ 1), rot, tree, dart_node, out);
            } else {
                out.push(d / 2);
            }
        }
    }
    let mut out = Vec::new();
    walk(0, None, rot, tree, &dart_node, &mut out);
    out
}

/// Repeatedly deletes adjacent equal symbols (cyclically). Returns the
/// symbols in deletion order and whatever is left.
pub fn free_reduce(word: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut w = word.to_vec();
    let mut removed = Vec::new();
    'outer: loop {
        let len = w.len();
        for i in 0..len {
            let j = (i + 1) % len;
            if len >= 2 && w[i] == w[j] {
                removed.push(w[i]);
                if j == 0 {
                    w.pop();
                    w.remove(0);
                } else {
                    w.drain(i..=j);
                }
                continue 'outer;
            }
        }
        break;
    }
    (removed, w)
}

/// Spanning tree of a connected multigraph by breadth-first search from
/// node 0, as edge indices in discovery order.
pub fn bfs_tree(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut tree = Vec::new();
    while let Some(v) = queue.pop_front() {
        for (e, &(a, b)) in edges.iter().enumerate() {
            let other = if a == v { b } else if b == v { a } else { continue };
            if !seen[other] {
                seen[other] = true;
                tree.push(e);
                queue.push_back(other);
            }
        }
    }
    tree
}

/// Backtracking search for a two-qubit table on the 3x3 grid whose rows
/// multiply to `+I` and columns to `-I`, with pairwise commuting lines.
/// Products are computed by a separate single-qubit multiplication table.
pub fn search_square_table() -> Option<Vec<PauliOperator>> {
    // Non-identity two-qubit letters with a real phase of +1 or -1.
    let letters = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut pool = Vec::new();
    for a in letters {
        for b in letters {
            if (a, b) == (Pauli::I, Pauli::I) {
                continue;
            }
            for sign in [Phase::ONE, Phase::MINUS_ONE] {
                pool.push((sign, [a, b]));
            }
        }
    }
    type Entry = (Phase, [Pauli; 2]);
    // Single-qubit product: (phase exponent, letter).
    fn mul1(a: Pauli, b: Pauli) -> (u32, Pauli) {
        use Pauli::*;
        match (a, b) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }
    fn mul(a: &Entry, b: &Entry) -> Entry {
        let (k0, p0) = mul1(a.1[0], b.1[0]);
        let (k1, p1) = mul1(a.1[1], b.1[1]);
        let k = a.0.exponent() as u32 + b.0.exponent() as u32 + k0 + k1;
        (Phase::from_exponent(k), [p0, p1])
    }
    fn commute(a: &Entry, b: &Entry) -> bool {
        mul(a, b) == mul(b, a)
    }
    fn line_ok(cells: &[Entry; 3], sign: Phase) -> bool {
        mul(&mul(&cells[0], &cells[1]), &cells[2]) == (sign, [Pauli::I, Pauli::I])
    }
    fn fill(grid: &mut Vec<Entry>, pool: &[Entry]) -> bool {
        let k = grid.len();
        if k == 9 {
            return true;
        }
        let (r, c) = (k / 3, k % 3);
        for cand in pool {
            let row_ok = (0..c).all(|j| commute(&grid[r * 3 + j], cand));
            let col_ok = (0..r).all(|i| commute(&grid[i * 3 + c], cand));
            if !row_ok || !col_ok {
                continue;
            }
            grid.push(*cand);
            let row_done = c < 2 || line_ok(&[grid[r * 3], grid[r * 3 + 1], grid[r * 3 + 2]], Phase::ONE);
            let col_done = r < 2 || line_ok(&[grid[c], grid[3 + c], grid[6 + c]], Phase::MINUS_ONE);
            if row_done && col_done && fill(grid, pool) {
                return true;
            }
            grid.pop();
        }
        false
    }
    let mut grid = Vec::new();
    fill(&mut grid, &pool).then(|| grid.iter().map(|(ph, ls)| PauliOperator::from_letters(*ph, ls)).collect())
}

/// Best classical value from the parity-mismatch count: a hyperedge whose
/// members' Alice colors multiply to the wrong sign costs exactly one query.
pub fn classical_value_by_mismatches(a: &Arrangement, s: &Signing) -> f64 {
    let n = a.vertex_count();
    let mut fewest = usize::MAX;
    for mask in 0u64..1 << n {
        let color = |v: usize| if mask >> v & 1 == 1 { -1i8 } else { 1 };
        let mismatches = a
            .hyperedges()
            .iter()
            .enumerate()
            .filter(|(h, e)| e.members().iter().map(|&v| color(v)).product::<i8>() != s.sign(*h).to_i8())
            .count();
        fewest = fewest.min(mismatches);
    }
    (2 * n - fewest) as f64 / (2 * n) as f64
}

/// Arrangement whose dual is `pattern` with pattern edge `k` subdivided into
/// `lengths[k]` edges. Nodes are `h{i}` for branch nodes and `s{k}_{j}` for
/// subdivision nodes; vertices are `x{k}_{j}`.
pub fn subdivided_pattern(pattern: &[(usize, usize)], branch: usize, lengths: &[usize]) -> Arrangement {
    let mut members: Vec<(String, Vec<String>)> = (0..branch).map(|i| (format!("h{i}"), Vec::new())).collect();
    let mut vertices = Vec::new();
    for (k, (&(i, j), &len)) in pattern.iter().zip(lengths).enumerate() {
        let mut prev = i;
        for step in 0..len {
            let vid = format!("x{k}_{step}");
            vertices.push(vid.clone());
            members[prev].1.push(vid.clone());
            let next = if step + 1 == len {
                j
            } else {
                members.push((format!("s{k}_{step}"), Vec::new()));
                members.len() - 1
            };
            members[next].1.push(vid);
            prev = next;
        }
    }
    Arrangement::new(vertices, members).expect("subdivision is a valid arrangement")
}

/// Every way of distributing `extra` subdivision nodes over `slots` edges.
pub fn compositions(slots: usize, extra: usize) -> Vec<Vec<usize>> {
    if slots == 1 {
        return vec![vec![extra]];
    }
    (0..=extra)
        .flat_map(|first| {
            compositions(slots - 1, extra - first).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Random signing with the requested parity.
pub fn random_signing_with_parity<R: rand::Rng>(rng: &mut R, a: &Arrangement, parity: Sign) -> Signing {
    let mut signs: Vec<Sign> = (0..a.hyperedge_count()).map(|_| Sign::from_bool_negative(rng.gen())).collect();
    if Sign::product(signs.iter().copied()) != parity {
        signs[0] = -signs[0];
    }
    Signing::from_signs(a, signs).unwrap()
}
