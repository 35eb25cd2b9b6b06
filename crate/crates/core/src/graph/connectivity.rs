//! Bridges, small edge cuts and cyclic edge connectivity.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CubicGraph, EdgeCut, EdgeId, GraphError, Multigraph, Vertex};

/// Bridges via one iterative low-link DFS per component. Parallel edges are
/// never bridges because the DFS skips only the tree edge's own id.
pub fn find_bridges(g: &Multigraph) -> BTreeSet<EdgeId> {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut bridges = BTreeSet::new();
    let mut time = 0;
    // (vertex, edge used to enter it, next incidence index)
    let mut stack: Vec<(Vertex, EdgeId, usize)> = Vec::new();
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        stack.push((root, usize::MAX, 0));
        while let Some(&mut (v, via, ref mut next)) = stack.last_mut() {
            let darts = g.darts_at(v);
            if *next < darts.len() {
                let d = darts[*next];
                *next += 1;
                let e = d.edge();
                if e == via {
                    continue;
                }
                let w = g.dart_vertex(d.opposite());
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, e, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(parent, _, _)) = stack.last() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        bridges.insert(via);
                    }
                }
            }
        }
    }
    bridges
}

/// Length of a shortest circuit (2 for parallel edges), `None` for forests.
pub fn girth(g: &Multigraph) -> Option<usize> {
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut via = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        via[root] = usize::MAX;
        queue.clear();
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[v] + 1 >= b) {
                break;
            }
            for (e, w) in g.neighbors(v) {
                if e == via[v] {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    via[w] = e;
                    queue.push_back(w);
                } else {
                    let len = dist[v] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

/// Cut-space signatures: a random 64-bit label per edge such that the XOR
/// over any edge cut is zero, and a nonzero XOR certifies a non-cut.
/// Candidate cuts found through labels are re-verified exactly.
fn cut_labels(g: &Multigraph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c0de);
    let mut label = vec![0u64; g.edge_count()];
    let mut parent_edge = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut in_tree = vec![false; g.edge_count()];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let start = order.len();
        order.push(root);
        let mut i = start;
        while i < order.len() {
            let v = order[i];
            i += 1;
            for (e, w) in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent_edge[w] = e;
                    in_tree[e] = true;
                    order.push(w);
                }
            }
        }
    }
    // xor accumulated at each vertex from incident non-tree edges
    let mut acc = vec![0u64; n];
    for (e, u, v) in g.edges() {
        if !in_tree[e] {
            let r: u64 = rng.gen();
            label[e] = r;
            acc[u] ^= r;
            acc[v] ^= r;
        }
    }
    // leaves first: the tree edge above v carries the xor of its subtree
    for &v in order.iter().rev() {
        let pe = parent_edge[v];
        if pe != usize::MAX {
            label[pe] = acc[v];
            let p = g.other_end(pe, v);
            acc[p] ^= acc[v];
        }
    }
    label
}

fn connected_without(g: &Multigraph, removed: &[EdgeId]) -> Option<BTreeSet<Vertex>> {
    // returns the component of vertex 0 if removal disconnects the graph
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for (e, w) in g.neighbors(v) {
            if !seen[w] && !removed.contains(&e) {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    if count == n {
        None
    } else {
        Some((0..n).filter(|&v| seen[v]).collect())
    }
}

/// `Some(1)` if the graph has a bridge, `Some(2)` if it has a 2-edge cut,
/// `None` if it is 3-edge-connected. The graph must be connected.
pub fn edge_connectivity_at_most_two(g: &Multigraph) -> Option<usize> {
    if !find_bridges(g).is_empty() {
        return Some(1);
    }
    two_edge_cut(g).map(|_| 2)
}

fn two_edge_cut(g: &Multigraph) -> Option<[EdgeId; 2]> {
    let labels = cut_labels(g);
    let mut by_label: HashMap<u64, EdgeId> = HashMap::new();
    for (e, &l) in labels.iter().enumerate() {
        if let Some(&f) = by_label.get(&l) {
            if connected_without(g, &[f, e]).is_some() {
                return Some([f, e]);
            }
        } else {
            by_label.insert(l, e);
        }
    }
    None
}

pub fn is_three_edge_connected(g: &Multigraph) -> bool {
    g.is_connected() && edge_connectivity_at_most_two(g).is_none()
}

/// A 3-edge cut, flagged cyclic when both sides contain a cycle (for cubic
/// graphs: when neither side is a single vertex).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ThreeEdgeCut {
    pub cut: EdgeCut,
    pub cyclic: bool,
}

/// All 3-edge cuts of a 3-edge-connected cubic graph, including the trivial
/// cuts δ(v). Each cut is reported once, with `side` the smaller shore (ties
/// go to the shore containing the smallest vertex).
pub fn enumerate_3_edge_cuts(g: &CubicGraph) -> Result<Vec<ThreeEdgeCut>, GraphError> {
    if !is_three_edge_connected(g) {
        return Err(GraphError::NotThreeEdgeConnected);
    }
    let labels = cut_labels(g);
    let mut by_label: HashMap<u64, Vec<EdgeId>> = HashMap::new();
    for (e, &l) in labels.iter().enumerate() {
        by_label.entry(l).or_default().push(e);
    }
    let m = g.edge_count();
    let mut triples = BTreeSet::new();
    for a in 0..m {
        for b in a + 1..m {
            if let Some(cs) = by_label.get(&(labels[a] ^ labels[b])) {
                for &c in cs {
                    if c > b {
                        triples.insert([a, b, c]);
                    }
                }
            }
        }
    }
    let n = g.vertex_count();
    let mut cuts = Vec::new();
    for t in triples {
        let Some(side0) = connected_without(g, &t) else {
            continue;
        };
        let other: BTreeSet<Vertex> = (0..n).filter(|v| !side0.contains(v)).collect();
        let side = if other.len() < side0.len() {
            other
        } else {
            side0
        };
        let cyclic = side.len() > 1 && n - side.len() > 1;
        cuts.push(ThreeEdgeCut {
            cut: EdgeCut {
                side,
                cut_edges: t.into_iter().collect(),
            },
            cyclic,
        });
    }
    Ok(cuts)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CyclicConnectivity {
    /// Size of a smallest cycle-separating cut, with one such cut.
    Finite { value: usize, cut: EdgeCut },
    /// No two vertex-disjoint cycles exist.
    Infinite,
}

impl CyclicConnectivity {
    pub fn value(&self) -> Option<usize> {
        match self {
            CyclicConnectivity::Finite { value, .. } => Some(*value),
            CyclicConnectivity::Infinite => None,
        }
    }

    /// Whether the graph is cyclically `k`-edge-connected.
    pub fn at_least(&self, k: usize) -> bool {
        self.value().is_none_or(|v| v >= k)
    }
}

pub const DEFAULT_CYCLIC_GUARD: usize = 40;

pub fn cyclic_edge_connectivity(g: &CubicGraph) -> Result<CyclicConnectivity, GraphError> {
    cyclic_edge_connectivity_with_guard(g, DEFAULT_CYCLIC_GUARD)
}

/// Exact cyclic edge connectivity.
///
/// Cuts of size at most 3 are found for any `n`. Beyond that the search
/// pairs up disjoint connected vertex sets of size `c - 1` and asks whether
/// at most `c` edges separate them; in a cubic graph a shore with at least
/// `c - 1` vertices behind a `c`-cut always contains a cycle, so the first
/// `c` that succeeds is the answer. That stage is exponential in `c` and only
/// runs when `n <= guard` (and `n <= 64`).
pub fn cyclic_edge_connectivity_with_guard(
    g: &CubicGraph,
    guard: usize,
) -> Result<CyclicConnectivity, GraphError> {
    let n = g.vertex_count();
    if let Some(e) = find_bridges(g).into_iter().next() {
        let side = connected_without(g, &[e]).expect("bridge disconnects");
        return Ok(CyclicConnectivity::Finite {
            value: 1,
            cut: g.cut(&side),
        });
    }
    if let Some(pair) = two_edge_cut(g) {
        let side = connected_without(g, &pair).expect("2-cut disconnects");
        return Ok(CyclicConnectivity::Finite {
            value: 2,
            cut: g.cut(&side),
        });
    }
    if let Some(c) = enumerate_3_edge_cuts(g)?.into_iter().find(|c| c.cyclic) {
        return Ok(CyclicConnectivity::Finite {
            value: 3,
            cut: c.cut,
        });
    }
    if n > guard.min(64) {
        return Err(GraphError::TooLarge {
            n,
            guard: guard.min(64),
        });
    }
    let upper = girth_cycle_cut(g);
    let mut c = 4;
    while 2 * c - 2 <= n {
        if let Some(u) = &upper {
            if c >= u.size() {
                break;
            }
        }
        if let Some(cut) = separating_cut_of_size(g, c) {
            return Ok(CyclicConnectivity::Finite {
                value: cut.size(),
                cut,
            });
        }
        c += 1;
    }
    Ok(match upper {
        Some(cut) => CyclicConnectivity::Finite {
            value: cut.size(),
            cut,
        },
        None => CyclicConnectivity::Infinite,
    })
}

/// δ(C) for a shortest circuit C, when the rest of the graph has a cycle.
fn girth_cycle_cut(g: &Multigraph) -> Option<EdgeCut> {
    let cycle = shortest_circuit(g)?;
    let side: BTreeSet<Vertex> = cycle.into_iter().collect();
    let rest: Vec<Vertex> = (0..g.vertex_count())
        .filter(|v| !side.contains(v))
        .collect();
    if has_cycle_within(g, &rest) {
        Some(g.cut(&side))
    } else {
        None
    }
}

fn shortest_circuit(g: &Multigraph) -> Option<Vec<Vertex>> {
    let n = g.vertex_count();
    let mut best: Option<Vec<Vertex>> = None;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut via = vec![(usize::MAX, usize::MAX); n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for (e, w) in g.neighbors(v) {
                if e == via[v].1 {
                    continue;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    via[w] = (v, e);
                    queue.push_back(w);
                } else {
                    let len = dist[v] + dist[w] + 1;
                    if best.as_ref().is_none_or(|b| len < b.len()) {
                        let path = |mut x: Vertex| {
                            let mut p = vec![x];
                            while x != root {
                                x = via[x].0;
                                p.push(x);
                            }
                            p
                        };
                        let (pv, pw) = (path(v), path(w));
                        // both paths end at root; keep the circuit only if they
                        // meet first at root
                        let sv: BTreeSet<_> = pv[..pv.len() - 1].iter().collect();
                        if pw[..pw.len() - 1].iter().all(|x| !sv.contains(x)) {
                            let mut cyc = pv;
                            cyc.pop();
                            cyc.extend(pw.into_iter().rev());
                            cyc.pop();
                            best = Some(cyc);
                        }
                    }
                }
            }
        }
    }
    best
}

fn has_cycle_within(g: &Multigraph, verts: &[Vertex]) -> bool {
    let inside: BTreeSet<Vertex> = verts.iter().copied().collect();
    let mut dsu: HashMap<Vertex, Vertex> = verts.iter().map(|&v| (v, v)).collect();
    fn find(dsu: &mut HashMap<Vertex, Vertex>, x: Vertex) -> Vertex {
        let p = dsu[&x];
        if p == x {
            return x;
        }
        let r = find(dsu, p);
        dsu.insert(x, r);
        r
    }
    for (_, u, v) in g.edges() {
        if inside.contains(&u) && inside.contains(&v) {
            let (a, b) = (find(&mut dsu, u), find(&mut dsu, v));
            if a == b {
                return true;
            }
            dsu.insert(a, b);
        }
    }
    false
}

fn mask_above(v: usize) -> u64 {
    if v >= 63 {
        0
    } else {
        !((1u64 << (v + 1)) - 1)
    }
}

/// Connected vertex sets of exactly `size` vertices, as bitmasks (n <= 64).
fn connected_sets(g: &Multigraph, size: usize) -> Vec<u64> {
    let n = g.vertex_count();
    let adj: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).fold(0u64, |m, (_, w)| m | (1 << w)))
        .collect();
    let mut out = Vec::new();
    // ESU enumeration: each set is produced once, from its smallest vertex.
    fn extend(
        adj: &[u64],
        root: usize,
        sub: u64,
        ext: u64,
        nbhd: u64,
        left: usize,
        out: &mut Vec<u64>,
    ) {
        if left == 0 {
            out.push(sub);
            return;
        }
        let mut ext = ext;
        while ext != 0 {
            let w = ext.trailing_zeros() as usize;
            ext &= ext - 1;
            let fresh = adj[w] & !nbhd & !sub & mask_above(root);
            extend(
                adj,
                root,
                sub | (1 << w),
                ext | fresh,
                nbhd | adj[w],
                left - 1,
                out,
            );
        }
    }
    for v in 0..n {
        let ext = adj[v] & mask_above(v);
        extend(&adj, v, 1 << v, ext, adj[v] | (1 << v), size - 1, &mut out);
    }
    out
}

/// Looks for an edge cut of at most `c` edges separating two disjoint
/// connected sets of `c - 1` vertices each.
fn separating_cut_of_size(g: &Multigraph, c: usize) -> Option<EdgeCut> {
    let sets = connected_sets(g, c - 1);
    let mut flow = UnitFlow::new(g);
    for (i, &s) in sets.iter().enumerate() {
        for &t in &sets[i + 1..] {
            if s & t != 0 {
                continue;
            }
            if let Some(side) = flow.cut_at_most(s, t, c) {
                return Some(g.cut(&side));
            }
        }
    }
    None
}

struct UnitFlow<'a> {
    g: &'a Multigraph,
    flow: Vec<i8>,
    prev: Vec<(Vertex, EdgeId)>,
}

impl<'a> UnitFlow<'a> {
    fn new(g: &'a Multigraph) -> Self {
        UnitFlow {
            g,
            flow: vec![0; g.edge_count()],
            prev: vec![(usize::MAX, usize::MAX); g.vertex_count()],
        }
    }

    /// If the max number of edge-disjoint paths from `s` to `t` is at most
    /// `c`, returns the source shore of a minimum cut.
    fn cut_at_most(&mut self, s: u64, t: u64, c: usize) -> Option<BTreeSet<Vertex>> {
        self.flow.iter_mut().for_each(|f| *f = 0);
        for _ in 0..=c {
            match self.augment(s, t) {
                Ok(()) => {}
                Err(reach) => return Some(reach),
            }
        }
        None
    }

    fn augment(&mut self, s: u64, t: u64) -> Result<(), BTreeSet<Vertex>> {
        let g = self.g;
        let n = g.vertex_count();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for v in 0..n {
            if s >> v & 1 == 1 {
                seen[v] = true;
                queue.push_back(v);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &d in g.darts_at(v) {
                let e = d.edge();
                let w = g.dart_vertex(d.opposite());
                // pushing from end 0 to end 1 is +1
                let dir: i8 = if d.end() == 0 { 1 } else { -1 };
                if seen[w] || self.flow[e] == dir {
                    continue;
                }
                seen[w] = true;
                self.prev[w] = (v, e);
                if t >> w & 1 == 1 {
                    let mut x = w;
                    while s >> x & 1 == 0 {
                        let (p, pe) = self.prev[x];
                        let push: i8 = if g.endpoints(pe).0 == p { 1 } else { -1 };
                        self.flow[pe] += push;
                        x = p;
                    }
                    return Ok(());
                }
                queue.push_back(w);
            }
        }
        Err((0..n).filter(|&v| seen[v]).collect())
    }
}
