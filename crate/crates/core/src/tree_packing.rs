//! Contracting the circuits of G − M, packing edge-disjoint spanning trees in
//! the contracted graph, and the resulting embedding pipeline.

use std::collections::{BTreeSet, VecDeque};

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{
    cyclic_edge_connectivity, CubicGraph, CyclicConnectivity, EdgeId, GraphError, Multigraph,
    Vertex,
};
use crate::matching::{perfect_matching, Matching};
use crate::pipelines::{finish, BoundName, PipelineError, PipelineResult, Witness};
use crate::postman::{
    partial_cdc_from_matching_postman, postman_from_tree, spanning_tree_avoiding, SpanningTree,
};

/// H = G with every component of G − M contracted to a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedMultigraph {
    pub h: Multigraph,
    pub component_of: Vec<Vertex>,
    /// `edge_corr[h_edge]` is the matching edge of G it came from.
    pub edge_corr: Vec<EdgeId>,
    /// Matching edges with both ends in one component.
    pub loops: Vec<EdgeId>,
}

/// Components are numbered by their smallest vertex; H keeps the matching
/// edges in ascending id order.
pub fn contract_cycles(g: &CubicGraph, m: &Matching) -> ContractedMultigraph {
    let n = g.vertex_count();
    let mut component_of = vec![usize::MAX; n];
    let mut count = 0;
    for root in 0..n {
        if component_of[root] != usize::MAX {
            continue;
        }
        component_of[root] = count;
        let mut stack = vec![root];
        while let Some(v) = stack.pop() {
            for (e, w) in g.neighbors(v) {
                if !m.contains(e) && component_of[w] == usize::MAX {
                    component_of[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    let mut edges = Vec::new();
    let mut edge_corr = Vec::new();
    let mut loops = Vec::new();
    for &e in m.edges() {
        let (u, v) = g.endpoints(e);
        let (a, b) = (component_of[u], component_of[v]);
        if a == b {
            loops.push(e);
        } else {
            edges.push((a, b));
            edge_corr.push(e);
        }
    }
    ContractedMultigraph {
        h: Multigraph::new(count, edges).expect("loops removed"),
        component_of,
        edge_corr,
        loops,
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("no {k} edge-disjoint spanning trees: {crossing} edges cross a partition into {} parts", partition.len())]
pub struct PackingInfeasible {
    pub k: usize,
    /// Parts of a vertex partition P with fewer than k(|P| − 1) crossing edges.
    pub partition: Vec<Vec<Vertex>>,
    pub crossing: usize,
}

struct Forests<'a> {
    h: &'a Multigraph,
    owner: Vec<Option<usize>>,
    k: usize,
}

impl Forests<'_> {
    /// Tree path between `u` and `v` in forest `i`, or `None` if they lie in
    /// different trees.
    fn path(&self, i: usize, u: Vertex, v: Vertex) -> Option<Vec<EdgeId>> {
        let n = self.h.vertex_count();
        let mut via = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for (e, y) in self.h.neighbors(x) {
                if self.owner[e] == Some(i) && !seen[y] {
                    seen[y] = true;
                    via[y] = e;
                    queue.push_back(y);
                }
            }
        }
        if !seen[v] {
            return None;
        }
        let mut out = Vec::new();
        let mut x = v;
        while x != u {
            let e = via[x];
            out.push(e);
            x = self.h.other_end(e, x);
        }
        Some(out)
    }

    /// Breadth-first search for a shortest augmenting sequence starting at
    /// the unplaced `sources`. Returns the labelled edges on failure.
    fn augment(&mut self, sources: &[EdgeId]) -> Result<(), Vec<bool>> {
        let mut label: Vec<Option<(EdgeId, usize)>> = vec![None; self.h.edge_count()];
        let mut reached = vec![false; self.h.edge_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            reached[s] = true;
            queue.push_back(s);
        }
        while let Some(x) = queue.pop_front() {
            let (u, v) = self.h.endpoints(x);
            for i in 0..self.k {
                if self.owner[x] == Some(i) {
                    continue;
                }
                match self.path(i, u, v) {
                    None => {
                        let (mut y, mut forest) = (x, i);
                        loop {
                            let before = self.owner[y];
                            self.owner[y] = Some(forest);
                            match label[y] {
                                Some((prev, _)) => {
                                    y = prev;
                                    forest = before.expect("labelled edges are placed");
                                }
                                None => break,
                            }
                        }
                        return Ok(());
                    }
                    Some(path) => {
                        for f in path {
                            if !reached[f] {
                                reached[f] = true;
                                label[f] = Some((x, i));
                                queue.push_back(f);
                            }
                        }
                    }
                }
            }
        }
        Err(reached)
    }
}

/// k pairwise edge-disjoint spanning trees of `h` by matroid-union
/// augmentation, or a partition certifying that none exist.
pub fn edge_disjoint_spanning_trees(
    h: &Multigraph,
    k: usize,
) -> Result<Vec<SpanningTree>, PackingInfeasible> {
    let n = h.vertex_count();
    let mut f = Forests {
        h,
        owner: vec![None; h.edge_count()],
        k,
    };
    let target = k * n.saturating_sub(1);
    let mut placed = 0;
    for e in 0..h.edge_count() {
        if placed == target {
            break;
        }
        if f.augment(&[e]).is_ok() {
            placed += 1;
        }
    }
    if placed < target {
        let unplaced: Vec<EdgeId> = (0..h.edge_count())
            .filter(|&e| f.owner[e].is_none())
            .collect();
        let reached = if unplaced.is_empty() {
            vec![false; h.edge_count()]
        } else {
            f.augment(&unplaced)
                .expect_err("a maximum packing has no augmenting path")
        };
        let mut part = vec![usize::MAX; n];
        let mut parts = Vec::new();
        for root in 0..n {
            if part[root] != usize::MAX {
                continue;
            }
            let id = parts.len();
            part[root] = id;
            let mut members = vec![root];
            let mut i = 0;
            while i < members.len() {
                let x = members[i];
                i += 1;
                for (e, y) in h.neighbors(x) {
                    if reached[e] && part[y] == usize::MAX {
                        part[y] = id;
                        members.push(y);
                    }
                }
            }
            members.sort_unstable();
            parts.push(members);
        }
        let crossing = h.edges().filter(|&(_, u, v)| part[u] != part[v]).count();
        debug_assert!(crossing < k * (parts.len() - 1));
        return Err(PackingInfeasible {
            k,
            partition: parts,
            crossing,
        });
    }
    Ok((0..k)
        .map(|i| {
            let edges = (0..h.edge_count())
                .filter(|&e| f.owner[e] == Some(i))
                .collect();
            SpanningTree::from_edges(h, edges)
        })
        .collect())
}

/// Checks cyclic 2k-edge-connectivity when it is computable. Returns
/// whether the check ran.
fn check_cyclic(g: &CubicGraph, required: usize) -> Result<bool, PipelineError> {
    match cyclic_edge_connectivity(g) {
        Ok(c) if c.at_least(required) => Ok(true),
        Ok(CyclicConnectivity::Finite { value, .. }) => {
            Err(PipelineError::CyclicConnectivityTooLow {
                required,
                actual: Some(value),
            })
        }
        Ok(CyclicConnectivity::Infinite) => Ok(true),
        Err(GraphError::TooLarge { .. }) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// Embedding with at most n/(2k) singular edges for a cyclically
/// 2k-edge-connected cubic graph.
pub fn pipeline_cyclically_2k(g: &CubicGraph, k: usize) -> Result<PipelineResult, PipelineError> {
    let checked = check_cyclic(g, 2 * k)?;
    let m = perfect_matching(g)?;
    run_2k(g, k, m, checked)
}

/// As [`pipeline_cyclically_2k`] with a caller-chosen perfect matching.
pub fn pipeline_cyclically_2k_with_matching(
    g: &CubicGraph,
    k: usize,
    m: Matching,
) -> Result<PipelineResult, PipelineError> {
    let checked = check_cyclic(g, 2 * k)?;
    run_2k(g, k, m, checked)
}

fn run_2k(
    g: &CubicGraph,
    k: usize,
    m: Matching,
    checked: bool,
) -> Result<PipelineResult, PipelineError> {
    if k == 0 {
        return Err(PipelineError::CyclicConnectivityTooLow {
            required: 0,
            actual: None,
        });
    }
    let contracted = contract_cycles(g, &m);
    let trees = edge_disjoint_spanning_trees(&contracted.h, k)?;
    let (smallest, t_h) = trees
        .iter()
        .enumerate()
        .min_by_key(|(i, t)| (t.len(), *i))
        .expect("k >= 1");
    let lifted: BTreeSet<EdgeId> = t_h.edges.iter().map(|&e| contracted.edge_corr[e]).collect();
    let avoid = m.indicator(g.edge_count());
    let t_g = spanning_tree_avoiding(g, &lifted, &avoid)?;
    let j = postman_from_tree(g, &t_g);
    let uncovered: BTreeSet<EdgeId> = m.edges().intersection(&j.0).copied().collect();
    if !uncovered.is_subset(&lifted) {
        return Err(PipelineError::Soundness(format!(
            "M ∩ J = {uncovered:?} is not inside the lifted tree {lifted:?}"
        )));
    }
    let pcdc = partial_cdc_from_matching_postman(g, &m, &j)?;
    let n = g.vertex_count() as i64;
    let bound = Ratio::new(n, 2 * k as i64);
    if t_h.len() as i64 > bound.to_integer() {
        return Err(PipelineError::BoundViolated {
            singular: t_h.len(),
            bound: bound.to_integer() as usize,
        });
    }
    let witness = Witness {
        matchings: vec![("M".into(), m)],
        postman: Some(j),
        tree: Some(t_g),
        h_vertices: Some(contracted.h.vertex_count()),
        h_edges: Some(contracted.h.edge_count()),
        packed_tree_sizes: trees.iter().map(SpanningTree::len).collect(),
        smallest_tree: Some((smallest, lifted)),
        precondition_checked: checked,
        k: Some(k),
        fractional: None,
    };
    finish(g, &pcdc, BoundName::Cyclic2k, bound, witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    fn parallel(m: usize) -> Multigraph {
        Multigraph::new(2, vec![(0, 1); m]).unwrap()
    }

    #[test]
    fn petersen_spokes_contract_to_two_vertices() {
        let g = generate_petersen();
        let m = Matching::new(&g, (5..10).collect()).unwrap();
        let c = contract_cycles(&g, &m);
        assert_eq!(c.h.vertex_count(), 2);
        assert_eq!(c.h.edge_count(), 5);
        assert_eq!(c.edge_corr, vec![5, 6, 7, 8, 9]);
        assert!(c.loops.is_empty());
    }

    #[test]
    fn k4_and_theta_contract_to_a_point() {
        let g = generate_k4();
        let m = perfect_matching(&g).unwrap();
        let c = contract_cycles(&g, &m);
        assert_eq!(c.h.vertex_count(), 1);
        assert_eq!(c.loops.len(), 2);
        let t = generate_theta();
        let c = contract_cycles(&t, &Matching::new(&t, BTreeSet::from([0])).unwrap());
        assert_eq!((c.h.vertex_count(), c.loops.clone()), (1, vec![0]));
        let trees = edge_disjoint_spanning_trees(&c.h, 3).unwrap();
        assert!(trees.iter().all(SpanningTree::is_empty));
    }

    #[test]
    fn parallel_edge_packings() {
        let trees = edge_disjoint_spanning_trees(&parallel(4), 2).unwrap();
        assert_eq!(trees.len(), 2);
        assert!(trees.iter().all(|t| t.len() == 1));
        assert!(trees[0].edges.is_disjoint(&trees[1].edges));
        assert!(edge_disjoint_spanning_trees(&parallel(5), 2).is_ok());
        assert!(edge_disjoint_spanning_trees(&parallel(2), 3).is_err());
    }

    #[test]
    fn c4_cannot_hold_two_trees() {
        let c4 = Multigraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let err = edge_disjoint_spanning_trees(&c4, 2).unwrap_err();
        assert!(err.crossing < 2 * (err.partition.len() - 1));
    }

    #[test]
    fn k4_packs_two_trees_only_with_swaps() {
        // K4 has exactly 6 = 2 * 3 edges; greedy order forces exchanges
        let g = generate_k4();
        let trees = edge_disjoint_spanning_trees(&g, 2).unwrap();
        for t in &trees {
            assert_eq!(t.len(), 3);
            assert!(t.parent.iter().skip(1).all(Option::is_some));
        }
        assert!(trees[0].edges.is_disjoint(&trees[1].edges));
        let err = edge_disjoint_spanning_trees(&g, 3).unwrap_err();
        assert!(err.crossing < 3 * (err.partition.len() - 1));
    }

    #[test]
    fn petersen_spoke_pipeline() {
        let g = generate_petersen();
        let m = Matching::new(&g, (5..10).collect()).unwrap();
        let r = pipeline_cyclically_2k_with_matching(&g, 2, m).unwrap();
        assert_eq!(r.witness.packed_tree_sizes, vec![1, 1]);
        assert!(r.report.singular.len() <= 1);
        let r = pipeline_cyclically_2k(&g, 2).unwrap();
        assert!(r.report.singular.len() <= 2);
    }

    #[test]
    fn k4_gets_no_singular_edges() {
        let r = pipeline_cyclically_2k(&generate_k4(), 2).unwrap();
        assert!(r.report.singular.is_empty());
        assert_eq!(r.witness.h_vertices, Some(1));
    }

    #[test]
    fn prism_is_not_cyclically_four_connected() {
        assert!(matches!(
            pipeline_cyclically_2k(&generate_prism(), 2),
            Err(PipelineError::CyclicConnectivityTooLow {
                actual: Some(3),
                ..
            })
        ));
    }
}
