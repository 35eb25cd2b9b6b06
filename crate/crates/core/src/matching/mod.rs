//! Perfect matchings: plain, minimum weight, avoiding 3-edge cuts, and the
//! second matching with small intersection.

mod cardinality;
mod weighted;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{enumerate_3_edge_cuts, CubicGraph, EdgeId, GraphError, ThreeEdgeCut};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("graph is not 3-edge-connected")]
    NotThreeEdgeConnected,
    #[error("no perfect matching avoiding all 3-edge cuts after {iterations} rounds")]
    CutAvoidanceFailed { iterations: usize },
    #[error("|M1 ∩ M2| = {intersection} exceeds the bound {bound}")]
    BoundViolated { intersection: usize, bound: usize },
    #[error("{0}")]
    Parse(String),
    #[error("edge set is not a perfect matching: {0}")]
    NotPerfect(String),
}

impl From<GraphError> for MatchingError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::NotThreeEdgeConnected => MatchingError::NotThreeEdgeConnected,
            other => MatchingError::Parse(other.to_string()),
        }
    }
}

/// A perfect matching, as a set of edge ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matching(BTreeSet<EdgeId>);

impl Matching {
    /// Checks that every vertex is covered exactly once.
    pub fn new(g: &CubicGraph, edges: BTreeSet<EdgeId>) -> Result<Self, MatchingError> {
        let mut cover = vec![0u8; g.vertex_count()];
        for &e in &edges {
            if e >= g.edge_count() {
                return Err(MatchingError::NotPerfect(format!("no edge {e}")));
            }
            let (u, v) = g.endpoints(e);
            cover[u] += 1;
            cover[v] += 1;
        }
        match cover.iter().position(|&c| c != 1) {
            Some(v) => Err(MatchingError::NotPerfect(format!(
                "vertex {v} is covered {} times",
                cover[v]
            ))),
            None => Ok(Matching(edges)),
        }
    }

    pub fn edges(&self) -> &BTreeSet<EdgeId> {
        &self.0
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Incidence vector χ_M.
    pub fn indicator(&self, edge_count: usize) -> Vec<bool> {
        let mut v = vec![false; edge_count];
        for &e in &self.0 {
            v[e] = true;
        }
        v
    }

    pub fn intersection_size(&self, other: &Matching) -> usize {
        self.0.intersection(&other.0).count()
    }

    pub fn weight(&self, w: &[u64]) -> u64 {
        self.0.iter().map(|&e| w[e]).sum()
    }
}

impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&ids.join(" "))
    }
}

/// One line of space-separated edge ids.
pub fn parse_matching(g: &CubicGraph, text: &str) -> Result<Matching, MatchingError> {
    let ids = parse_edge_ids(text)?;
    Matching::new(g, ids)
}

pub fn parse_edge_ids(text: &str) -> Result<BTreeSet<EdgeId>, MatchingError> {
    text.split_ascii_whitespace()
        .map(|t| {
            t.parse::<EdgeId>()
                .map_err(|_| MatchingError::Parse(format!("bad edge id {t:?}")))
        })
        .collect()
}

fn from_mates(g: &CubicGraph, mate: &[Option<usize>]) -> Result<Matching, MatchingError> {
    if mate.iter().any(Option::is_none) {
        return Err(MatchingError::NoPerfectMatching);
    }
    let mut set = BTreeSet::new();
    let mut covered = vec![false; g.vertex_count()];
    for (e, u, v) in g.edges() {
        if mate[u] == Some(v) && !covered[u] {
            covered[u] = true;
            covered[v] = true;
            set.insert(e);
        }
    }
    Ok(Matching(set))
}

/// Some perfect matching, deterministic in the input.
pub fn perfect_matching(g: &CubicGraph) -> Result<Matching, MatchingError> {
    let adj: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|v| {
            let mut nb: Vec<usize> = g.neighbors(v).map(|(_, w)| w).collect();
            nb.sort_unstable();
            nb
        })
        .collect();
    from_mates(g, &cardinality::maximum_matching(&adj, true))
}

/// Perfect matching of least total weight. Among parallel edges only the
/// cheapest (then lowest id) can be chosen.
pub fn min_weight_perfect_matching(g: &CubicGraph, w: &[u64]) -> Result<Matching, MatchingError> {
    assert_eq!(w.len(), g.edge_count());
    let mut best: HashMap<(usize, usize), EdgeId> = HashMap::new();
    for (e, u, v) in g.edges() {
        let key = (u.min(v), u.max(v));
        best.entry(key)
            .and_modify(|f| {
                if (w[e], e) < (w[*f], *f) {
                    *f = e;
                }
            })
            .or_insert(e);
    }
    let mut chosen: Vec<EdgeId> = best.into_values().collect();
    chosen.sort_unstable();
    let top = chosen.iter().map(|&e| w[e]).max().unwrap_or(0) as i64 + 1;
    let simple: Vec<(usize, usize, i64)> = chosen
        .iter()
        .map(|&e| {
            let (u, v) = g.endpoints(e);
            (u, v, top - w[e] as i64)
        })
        .collect();
    let mate = weighted::max_weight_matching(g.vertex_count(), &simple, true);
    if mate.iter().any(Option::is_none) {
        return Err(MatchingError::NoPerfectMatching);
    }
    let set = chosen
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = g.endpoints(e);
            mate[u] == Some(v)
        })
        .collect();
    Ok(Matching(set))
}

/// Default iteration cap for [`matching_avoiding_3cuts`]: the edge count.
pub fn default_cut_rounds(g: &CubicGraph) -> usize {
    g.edge_count()
}

/// A perfect matching containing no 3-edge cut, found by cutting planes: each
/// round re-solves a minimum-weight matching where an edge weighs as many
/// of the violated cuts seen so far as contain it.
pub fn matching_avoiding_3cuts(
    g: &CubicGraph,
    max_rounds: usize,
) -> Result<Matching, MatchingError> {
    let cuts = enumerate_3_edge_cuts(g)?;
    let nontrivial: Vec<&ThreeEdgeCut> = cuts.iter().filter(|c| c.cut.side.len() > 1).collect();
    let mut m = perfect_matching(g)?;
    let mut seen: BTreeSet<usize> = BTreeSet::new();
    for _ in 0..=max_rounds {
        let violated: Vec<usize> = (0..nontrivial.len())
            .filter(|&i| nontrivial[i].cut.cut_edges.iter().all(|&e| m.contains(e)))
            .collect();
        if violated.is_empty() {
            return Ok(m);
        }
        seen.extend(violated);
        let mut w = vec![0u64; g.edge_count()];
        for &i in &seen {
            for &e in &nontrivial[i].cut.cut_edges {
                w[e] += 1;
            }
        }
        m = min_weight_perfect_matching(g, &w)?;
    }
    Err(MatchingError::CutAvoidanceFailed {
        iterations: max_rounds,
    })
}

/// M₂ minimising |M₁ ∩ M₂|; fails if the intersection exceeds ⌊n/10⌋.
pub fn second_matching_kkn(g: &CubicGraph, m1: &Matching) -> Result<Matching, MatchingError> {
    let w: Vec<u64> = m1
        .indicator(g.edge_count())
        .iter()
        .map(|&b| b as u64)
        .collect();
    let m2 = min_weight_perfect_matching(g, &w)?;
    let intersection = m1.intersection_size(&m2);
    let bound = g.vertex_count() / 10;
    if intersection > bound {
        return Err(MatchingError::BoundViolated {
            intersection,
            bound,
        });
    }
    Ok(m2)
}

/// f(e) = 1/k on M and (k−1)/(2k) elsewhere; a point of the perfect
/// matching polytope when G is cyclically k-edge-connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalPmPoint {
    pub k: i64,
    pub value: Vec<Ratio<i64>>,
}

pub fn fractional_point(g: &CubicGraph, m: &Matching, k: i64) -> FractionalPmPoint {
    assert!(k >= 3, "fractional point needs k >= 3");
    let on = Ratio::new(1, k);
    let off = Ratio::new(k - 1, 2 * k);
    let value = (0..g.edge_count())
        .map(|e| if m.contains(e) { on } else { off })
        .collect();
    FractionalPmPoint { k, value }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    #[test]
    fn small_perfect_matchings() {
        let k4 = generate_k4();
        let m = perfect_matching(&k4).unwrap();
        assert_eq!(m.len(), 2);
        let p = generate_petersen();
        let m = perfect_matching(&p).unwrap();
        assert_eq!(m.len(), 5);
        assert_eq!(perfect_matching(&generate_theta()).unwrap().len(), 1);
        assert!(Matching::new(&p, m.edges().clone()).is_ok());
    }

    #[test]
    fn large_random_matching() {
        let g = generate_random_cubic_bridgeless(2000, 3).unwrap();
        let m = perfect_matching(&g).unwrap();
        assert_eq!(m.len(), 1000);
        assert!(Matching::new(&g, m.edges().clone()).is_ok());
    }

    #[test]
    fn k4_disjoint_second_matching() {
        let g = generate_k4();
        let m = perfect_matching(&g).unwrap();
        let w: Vec<u64> = m.indicator(6).iter().map(|&b| b as u64).collect();
        let m2 = min_weight_perfect_matching(&g, &w).unwrap();
        assert_eq!(m2.weight(&w), 0);
        assert_eq!(
            second_matching_kkn(&g, &m).unwrap().intersection_size(&m),
            0
        );
    }

    #[test]
    fn theta_uses_cheapest_parallel_edge() {
        let g = generate_theta();
        let m = min_weight_perfect_matching(&g, &[5, 1, 3]).unwrap();
        assert_eq!(m.edges().iter().copied().collect::<Vec<_>>(), vec![1]);
        let m = min_weight_perfect_matching(&g, &[2, 2, 2]).unwrap();
        assert_eq!(m.edges().iter().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn prism_rung_matching_rejected() {
        let g = generate_prism();
        let m = matching_avoiding_3cuts(&g, default_cut_rounds(&g)).unwrap();
        assert!(!(6..9).all(|e| m.contains(e)));
        assert_eq!(
            second_matching_kkn(&g, &m).unwrap().intersection_size(&m),
            0
        );
    }

    #[test]
    fn petersen_kkn() {
        let g = generate_petersen();
        let m1 = matching_avoiding_3cuts(&g, 15).unwrap();
        let m2 = second_matching_kkn(&g, &m1).unwrap();
        assert_eq!(m1.intersection_size(&m2), 1);
    }

    #[test]
    fn cut_avoidance_needs_three_edge_connectivity() {
        assert_eq!(
            matching_avoiding_3cuts(&generate_dumbbell(), 10),
            Err(MatchingError::NotThreeEdgeConnected)
        );
    }

    #[test]
    fn fractional_values() {
        let g = generate_petersen();
        let m = perfect_matching(&g).unwrap();
        let f = fractional_point(&g, &m, 5);
        for v in 0..10 {
            let s: Ratio<i64> = g.neighbors(v).map(|(e, _)| f.value[e]).sum();
            assert_eq!(s, Ratio::from_integer(1));
        }
        assert!(f.value.contains(&Ratio::new(2, 5)));
        let f3 = fractional_point(&g, &m, 3);
        assert!(f3.value.iter().all(|&x| x == Ratio::new(1, 3)));
    }

    #[test]
    fn matching_text() {
        let g = generate_petersen();
        let m = parse_matching(&g, "5 6 7 8 9\n").unwrap();
        assert_eq!(m.to_string(), "5 6 7 8 9");
        assert!(matches!(
            parse_matching(&g, "5 6"),
            Err(MatchingError::NotPerfect(_))
        ));
        assert!(matches!(
            parse_matching(&g, "5 x"),
            Err(MatchingError::Parse(_))
        ));
    }
}
