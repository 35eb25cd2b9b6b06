//! Spanning trees, postman sets inside a tree, and the partial cover formed
//! by G − J and M △ J.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{CubicGraph, EdgeId, Multigraph, Vertex};
use crate::matching::Matching;
use crate::partial_cdc::{circuits_of, validate_partial_cdc, OddDegree, PartialCdc, PcdcError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PostmanError {
    #[error("required edges contain a cycle through edge {0}")]
    RequiredEdgesCyclic(EdgeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("internal degree error: {0}")]
    InternalDegree(#[from] OddDegree),
    #[error("constructed walks are not a partial cover: {0}")]
    InvalidCover(#[from] PcdcError),
}

/// Spanning tree rooted at vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanningTree {
    pub edges: BTreeSet<EdgeId>,
    /// `(parent, edge to parent)`, `None` at the root.
    pub parent: Vec<Option<(Vertex, EdgeId)>>,
}

impl SpanningTree {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Builds the rooted form of an edge set known to be a spanning tree.
    pub fn from_edges(g: &Multigraph, edges: BTreeSet<EdgeId>) -> Self {
        let n = g.vertex_count();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        if n > 0 {
            seen[0] = true;
        }
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for (e, w) in g.neighbors(v) {
                if edges.contains(&e) && !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
        SpanningTree { edges, parent }
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.0[a.max(b)] = a.min(b);
        true
    }
}

/// Edges in the order a BFS from vertex 0 first meets them, scanning each
/// vertex's edges by ascending id.
fn bfs_edge_order(g: &Multigraph) -> Vec<EdgeId> {
    let n = g.vertex_count();
    let mut seen_v = vec![false; n];
    let mut seen_e = vec![false; g.edge_count()];
    let mut order = Vec::with_capacity(g.edge_count());
    let mut queue = VecDeque::new();
    for root in 0..n {
        if seen_v[root] {
            continue;
        }
        seen_v[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let mut inc: Vec<(EdgeId, Vertex)> = g.neighbors(v).collect();
            inc.sort_unstable();
            for (e, w) in inc {
                if !seen_e[e] {
                    seen_e[e] = true;
                    order.push(e);
                }
                if !seen_v[w] {
                    seen_v[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Spanning tree containing `required`, completed greedily along a BFS
/// from vertex 0 in edge-id order.
pub fn spanning_tree(
    g: &Multigraph,
    required: &BTreeSet<EdgeId>,
) -> Result<SpanningTree, PostmanError> {
    spanning_tree_avoiding(g, required, &[])
}

/// As [`spanning_tree`], but edges flagged in `avoid` are only used once
/// the other edges cannot connect the graph.
pub fn spanning_tree_avoiding(
    g: &Multigraph,
    required: &BTreeSet<EdgeId>,
    avoid: &[bool],
) -> Result<SpanningTree, PostmanError> {
    let n = g.vertex_count();
    let mut dsu = Dsu((0..n).collect());
    let mut edges = BTreeSet::new();
    for &e in required {
        let (u, v) = g.endpoints(e);
        if !dsu.union(u, v) {
            return Err(PostmanError::RequiredEdgesCyclic(e));
        }
        edges.insert(e);
    }
    let order = bfs_edge_order(g);
    let avoided = |e: EdgeId| avoid.get(e).copied().unwrap_or(false);
    let preferred = order.iter().filter(|&&e| !avoided(e));
    let rest = order.iter().filter(|&&e| avoided(e));
    for &e in preferred.chain(rest) {
        if edges.len() + 1 == n {
            break;
        }
        let (u, v) = g.endpoints(e);
        if dsu.union(u, v) {
            edges.insert(e);
        }
    }
    if n > 0 && edges.len() + 1 != n {
        return Err(PostmanError::Disconnected);
    }
    Ok(SpanningTree::from_edges(g, edges))
}

/// Edge set J with every vertex incident to an odd number of its edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostmanSet(pub BTreeSet<EdgeId>);

impl PostmanSet {
    pub fn has_odd_incidence(&self, g: &Multigraph) -> bool {
        (0..g.vertex_count())
            .all(|v| g.neighbors(v).filter(|(e, _)| self.0.contains(e)).count() % 2 == 1)
    }
}

/// Postman set inside `t`: strip leaves in FIFO order, every vertex starting
/// with label 1; a leaf with label 1 puts its tree edge into J and flips its
/// neighbour's label.
pub fn postman_from_tree(g: &CubicGraph, t: &SpanningTree) -> PostmanSet {
    let n = g.vertex_count();
    let mut deg = vec![0usize; n];
    for &e in &t.edges {
        let (u, v) = g.endpoints(e);
        deg[u] += 1;
        deg[v] += 1;
    }
    let mut label = vec![true; n];
    let mut removed = vec![false; g.edge_count()];
    let mut queue: VecDeque<Vertex> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut j = BTreeSet::new();
    while let Some(v) = queue.pop_front() {
        if deg[v] != 1 {
            continue;
        }
        let (e, u) = g
            .neighbors(v)
            .find(|&(e, _)| t.edges.contains(&e) && !removed[e])
            .expect("a leaf keeps one tree edge");
        removed[e] = true;
        deg[v] = 0;
        deg[u] -= 1;
        if label[v] {
            j.insert(e);
            label[u] = !label[u];
        }
        if deg[u] == 1 {
            queue.push_back(u);
        }
    }
    PostmanSet(j)
}

/// The walks of G − J and of M △ J, validated as a partial cover. The edges
/// they leave uncovered are exactly M ∩ J.
pub fn partial_cdc_from_matching_postman(
    g: &CubicGraph,
    m: &Matching,
    j: &PostmanSet,
) -> Result<PartialCdc, PostmanError> {
    let in_j: Vec<bool> = (0..g.edge_count()).map(|e| j.0.contains(&e)).collect();
    let rest: Vec<bool> = in_j.iter().map(|&b| !b).collect();
    let sym: Vec<bool> = (0..g.edge_count())
        .map(|e| m.contains(e) != in_j[e])
        .collect();
    let mut walks = circuits_of(g, &rest)?;
    walks.extend(circuits_of(g, &sym)?);
    Ok(validate_partial_cdc(g, walks)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;
    use crate::matching::perfect_matching;

    fn set(ids: &[usize]) -> BTreeSet<usize> {
        ids.iter().copied().collect()
    }

    #[test]
    fn k4_star_and_path() {
        let g = generate_k4();
        // star at 2: edges 1 (0-2), 2 (1-2), 5 (2-3)
        let star = SpanningTree::from_edges(&g, set(&[1, 2, 5]));
        assert_eq!(postman_from_tree(&g, &star).0, set(&[1, 2, 5]));
        // path 0-1-2-3: edges 0, 2, 5
        let path = SpanningTree::from_edges(&g, set(&[0, 2, 5]));
        assert_eq!(postman_from_tree(&g, &path).0, set(&[0, 5]));
    }

    #[test]
    fn k4_cover_example() {
        let g = generate_k4();
        // M = {01, 23}, J = star at 2
        let m = Matching::new(&g, set(&[0, 5])).unwrap();
        let j = PostmanSet(set(&[1, 2, 5]));
        let pcdc = partial_cdc_from_matching_postman(&g, &m, &j).unwrap();
        assert_eq!(pcdc.walks.len(), 2);
        assert_eq!(pcdc.uncovered_edges().collect::<Vec<_>>(), vec![5]);
    }

    #[test]
    fn theta_cover() {
        let g = generate_theta();
        let m = Matching::new(&g, set(&[0])).unwrap();
        let j = PostmanSet(set(&[0]));
        let pcdc = partial_cdc_from_matching_postman(&g, &m, &j).unwrap();
        assert_eq!(pcdc.walks.len(), 1);
        assert_eq!(pcdc.uncovered_edges().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn required_edges() {
        let g = generate_petersen();
        let t = spanning_tree(&g, &set(&[7])).unwrap();
        assert_eq!(t.len(), 9);
        assert!(t.edges.contains(&7));
        assert!(t.parent[0].is_none());
        assert!((1..10).all(|v| t.parent[v].is_some()));
        assert_eq!(
            spanning_tree(&g, &set(&[0, 1, 2, 3, 4])),
            Err(PostmanError::RequiredEdgesCyclic(4))
        );
        let k4 = spanning_tree(&generate_k4(), &BTreeSet::new()).unwrap();
        assert_eq!(k4.edges, set(&[0, 1, 3]));
    }

    #[test]
    fn petersen_any_tree_gives_cover() {
        let g = generate_petersen();
        let m = perfect_matching(&g).unwrap();
        for first in 0..15 {
            let t = spanning_tree(&g, &set(&[first])).unwrap();
            let j = postman_from_tree(&g, &t);
            assert!(j.0.is_subset(&t.edges));
            assert!(j.has_odd_incidence(&g));
            let pcdc = partial_cdc_from_matching_postman(&g, &m, &j).unwrap();
            let unc: BTreeSet<_> = pcdc.uncovered_edges().collect();
            let expect: BTreeSet<_> = m.edges().intersection(&j.0).copied().collect();
            assert_eq!(unc, expect);
        }
    }
}
