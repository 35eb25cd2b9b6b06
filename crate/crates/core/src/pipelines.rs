//! End-to-end constructions: a partial cover is built from matchings (and
//! for the 2k strategy a postman set), extended, traced and checked against
//! the strategy's bound.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::embedding::{
    analyze, verify_fdc, write_embedding, Embedding, FdcReport, FdcViolation, Surface,
};
use crate::graph::{
    cyclic_edge_connectivity, find_bridges, is_three_edge_connected, CubicGraph,
    CyclicConnectivity, EdgeId, GraphError,
};
use crate::matching::{
    default_cut_rounds, fractional_point, matching_avoiding_3cuts, min_weight_perfect_matching,
    perfect_matching, second_matching_kkn, FractionalPmPoint, Matching, MatchingError,
};
use crate::partial_cdc::{
    circuits_of, extend_to_embedding, validate_partial_cdc, ExtensionError, OddDegree, PartialCdc,
    PcdcError,
};
use crate::postman::{PostmanError, PostmanSet, SpanningTree};
use crate::tree_packing::PackingInfeasible;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundName {
    HalfN,
    TenthN,
    Over2k,
    Cyclic2k,
}

impl BoundName {
    pub const ALL: [BoundName; 4] = [
        BoundName::HalfN,
        BoundName::TenthN,
        BoundName::Over2k,
        BoundName::Cyclic2k,
    ];

    /// Strategy name used on the command line and in reports.
    pub fn strategy(self) -> &'static str {
        match self {
            BoundName::HalfN => "half-n",
            BoundName::TenthN => "tenth-n",
            BoundName::Over2k => "over-2k",
            BoundName::Cyclic2k => "cyclic-2k",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            BoundName::HalfN => "n/2",
            BoundName::TenthN => "n/10",
            BoundName::Over2k | BoundName::Cyclic2k => "n/2k",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.strategy())
    }
}

impl FromStr for BoundName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        BoundName::ALL
            .into_iter()
            .find(|b| b.strategy() == s)
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PipelineError {
    #[error("graph has bridges: {0:?}")]
    NotBridgeless(BTreeSet<EdgeId>),
    #[error("graph is not 3-edge-connected")]
    NotThreeEdgeConnected,
    #[error("cyclic edge connectivity {actual:?} is below the required {required}")]
    CyclicConnectivityTooLow {
        required: usize,
        actual: Option<usize>,
    },
    #[error("cyclic edge connectivity is not computable within the guard; pass k explicitly")]
    NeedExplicitK,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Packing(#[from] PackingInfeasible),
    #[error(transparent)]
    Postman(#[from] PostmanError),
    #[error(transparent)]
    Cover(#[from] PcdcError),
    #[error(transparent)]
    Degree(#[from] OddDegree),
    #[error(transparent)]
    Extension(#[from] ExtensionError),
    #[error("traced faces are not a double cover: {0}")]
    Fdc(#[from] FdcViolation),
    #[error("{singular} singular edges exceed the bound {bound}")]
    BoundViolated { singular: usize, bound: usize },
    #[error("soundness check failed: {0}")]
    Soundness(String),
}

impl PipelineError {
    /// Input does not meet the strategy's hypotheses, as opposed to an
    /// internal inconsistency.
    pub fn is_precondition(&self) -> bool {
        match self {
            PipelineError::NotBridgeless(_)
            | PipelineError::NotThreeEdgeConnected
            | PipelineError::CyclicConnectivityTooLow { .. }
            | PipelineError::NeedExplicitK
            | PipelineError::Graph(_)
            | PipelineError::Packing(_) => true,
            PipelineError::Matching(m) => matches!(
                m,
                MatchingError::NoPerfectMatching | MatchingError::NotThreeEdgeConnected
            ),
            _ => false,
        }
    }
}

/// Everything a pipeline used besides the graph.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Witness {
    pub matchings: Vec<(String, Matching)>,
    pub postman: Option<PostmanSet>,
    pub tree: Option<SpanningTree>,
    pub h_vertices: Option<usize>,
    pub h_edges: Option<usize>,
    pub packed_tree_sizes: Vec<usize>,
    /// Index of the smallest packed tree and its edges lifted into G.
    pub smallest_tree: Option<(usize, BTreeSet<EdgeId>)>,
    /// False when the connectivity hypothesis was too expensive to verify.
    pub precondition_checked: bool,
    pub k: Option<usize>,
    /// The point 1/k on M, (k−1)/2k elsewhere, checkable against the perfect
    /// matching polytope by the oracle when n is small.
    pub fractional: Option<FractionalPmPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineResult {
    pub embedding: Embedding,
    pub report: FdcReport,
    pub bound_name: BoundName,
    pub bound_claimed: Ratio<i64>,
    pub covered_edges: BTreeSet<EdgeId>,
    pub walks: usize,
    pub witness: Witness,
}

impl PipelineResult {
    /// The claimed bound at integer granularity.
    pub fn bound(&self) -> usize {
        self.bound_claimed.floor().to_integer() as usize
    }

    pub fn singular_count(&self) -> usize {
        self.report.singular.len()
    }
}

/// Extends the cover, traces the faces and checks conservation, the double
/// cover property, regularity of covered edges and the bound.
pub(crate) fn finish(
    g: &CubicGraph,
    pcdc: &PartialCdc,
    bound_name: BoundName,
    bound_claimed: Ratio<i64>,
    witness: Witness,
) -> Result<PipelineResult, PipelineError> {
    let embedding = extend_to_embedding(g, pcdc)?;
    let report = analyze(g, &embedding);
    verify_fdc(g, &report.faces)?;
    let covered_edges: BTreeSet<EdgeId> = pcdc.covered_edges().collect();
    if let Some(e) = report.singular.intersection(&covered_edges).next() {
        return Err(PipelineError::Soundness(format!(
            "covered edge {e} is singular"
        )));
    }
    let bound = bound_claimed.floor().to_integer() as usize;
    if report.singular.len() > bound {
        return Err(PipelineError::BoundViolated {
            singular: report.singular.len(),
            bound,
        });
    }
    Ok(PipelineResult {
        embedding,
        report,
        bound_name,
        bound_claimed,
        covered_edges,
        walks: pcdc.walks.len(),
        witness,
    })
}

fn require_bridgeless(g: &CubicGraph) -> Result<(), PipelineError> {
    let bridges = find_bridges(g);
    if bridges.is_empty() {
        Ok(())
    } else {
        Err(PipelineError::NotBridgeless(bridges))
    }
}

fn indicator(g: &CubicGraph, f: impl Fn(EdgeId) -> bool) -> Vec<bool> {
    (0..g.edge_count()).map(f).collect()
}

/// Circuits of G − M as the partial cover: at most n/2 singular edges.
pub fn embed_half_n(g: &CubicGraph) -> Result<PipelineResult, PipelineError> {
    require_bridgeless(g)?;
    let m = perfect_matching(g)?;
    embed_half_n_with(g, m)
}

pub fn embed_half_n_with(g: &CubicGraph, m: Matching) -> Result<PipelineResult, PipelineError> {
    let walks = circuits_of(g, &indicator(g, |e| !m.contains(e)))?;
    let pcdc = validate_partial_cdc(g, walks)?;
    let n = g.vertex_count() as i64;
    let witness = Witness {
        matchings: vec![("M".into(), m)],
        precondition_checked: true,
        ..Witness::default()
    };
    finish(g, &pcdc, BoundName::HalfN, Ratio::new(n, 2), witness)
}

/// Circuits of G − M₁ and of M₁ △ M₂ where M₁ avoids every 3-edge cut and
/// M₂ meets M₁ in at most n/10 edges.
pub fn embed_tenth_n(g: &CubicGraph) -> Result<PipelineResult, PipelineError> {
    if !is_three_edge_connected(g) {
        return Err(PipelineError::NotThreeEdgeConnected);
    }
    let m1 = matching_avoiding_3cuts(g, default_cut_rounds(g))?;
    let m2 = second_matching_kkn(g, &m1)?;
    let n = g.vertex_count();
    let union = m1.edges().union(m2.edges()).count();
    if 10 * union < 9 * n {
        return Err(PipelineError::Soundness(format!(
            "|M1 ∪ M2| = {union} is below 9n/10"
        )));
    }
    two_matching_cover(
        g,
        m1,
        m2,
        BoundName::TenthN,
        Ratio::new(n as i64, 10),
        None,
        true,
    )
}

fn two_matching_cover(
    g: &CubicGraph,
    m1: Matching,
    m2: Matching,
    bound_name: BoundName,
    bound: Ratio<i64>,
    k: Option<usize>,
    checked: bool,
) -> Result<PipelineResult, PipelineError> {
    let mut walks = circuits_of(g, &indicator(g, |e| !m1.contains(e)))?;
    walks.extend(circuits_of(
        g,
        &indicator(g, |e| m1.contains(e) != m2.contains(e)),
    )?);
    let pcdc = validate_partial_cdc(g, walks)?;
    let (a, b) = if bound_name == BoundName::TenthN {
        ("M1", "M2")
    } else {
        ("M", "M'")
    };
    let witness = Witness {
        matchings: vec![(a.into(), m1), (b.into(), m2)],
        precondition_checked: checked,
        k,
        ..Witness::default()
    };
    finish(g, &pcdc, bound_name, bound, witness)
}

/// For a cyclically k-edge-connected graph: M′ minimising |M ∩ M′| meets M in
/// at most n/(2k) edges. With `k = None` the exact cyclic edge connectivity
/// is used.
pub fn embed_over_2k(g: &CubicGraph, k: Option<usize>) -> Result<PipelineResult, PipelineError> {
    let computed = match cyclic_edge_connectivity(g) {
        Ok(c) => Some(c),
        Err(GraphError::TooLarge { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let (k, checked) = match (k, computed) {
        (Some(k), Some(c)) => {
            if k < 3 || !c.at_least(k) {
                return Err(PipelineError::CyclicConnectivityTooLow {
                    required: k.max(3),
                    actual: c.value(),
                });
            }
            (k, true)
        }
        (Some(k), None) => {
            if k < 3 {
                return Err(PipelineError::CyclicConnectivityTooLow {
                    required: 3,
                    actual: None,
                });
            }
            (k, false)
        }
        (None, Some(CyclicConnectivity::Finite { value, .. })) if value >= 3 => (value, true),
        (None, Some(c)) => {
            return Err(PipelineError::CyclicConnectivityTooLow {
                required: 3,
                actual: c.value(),
            })
        }
        (None, None) => return Err(PipelineError::NeedExplicitK),
    };
    if !checked {
        require_bridgeless(g)?;
    }
    let m = perfect_matching(g)?;
    let w: Vec<u64> = (0..g.edge_count()).map(|e| m.contains(e) as u64).collect();
    let m_prime = min_weight_perfect_matching(g, &w)?;
    let n = g.vertex_count() as i64;
    let fractional = fractional_point(g, &m, k as i64);
    let mut r = two_matching_cover(
        g,
        m,
        m_prime,
        BoundName::Over2k,
        Ratio::new(n, 2 * k as i64),
        Some(k),
        checked,
    )?;
    r.witness.fractional = Some(fractional);
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tighter {
    Ours,
    BenderRichmond,
    Equal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrComparison {
    pub our_singular: usize,
    pub our_bound: usize,
    pub surface: Surface,
    pub br_bound: usize,
    pub tighter: Tighter,
}

/// Our bound against the one that holds for any 3-edge-connected graph on
/// the surface the construction happened to land on.
pub fn compare_bender_richmond(result: &PipelineResult) -> BrComparison {
    let our_bound = result.bound();
    let br_bound = result.report.bender_richmond_bound;
    BrComparison {
        our_singular: result.singular_count(),
        our_bound,
        surface: result.report.surface,
        br_bound,
        tighter: match our_bound.cmp(&br_bound) {
            std::cmp::Ordering::Less => Tighter::Ours,
            std::cmp::Ordering::Greater => Tighter::BenderRichmond,
            std::cmp::Ordering::Equal => Tighter::Equal,
        },
    }
}

fn ids(set: impl IntoIterator<Item = EdgeId>) -> String {
    set.into_iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Text report: `#` header lines, the embedding in its text form, then `#`
/// witness lines. The embedding parser reads it back directly.
pub fn write_report(g: &CubicGraph, r: &PipelineResult) -> String {
    let br = compare_bender_richmond(r);
    let mut s = String::new();
    let w = &r.witness;
    writeln!(s, "# strategy: {}", r.bound_name).unwrap();
    writeln!(s, "# n: {}", g.vertex_count()).unwrap();
    writeln!(s, "# edges: {}", g.edge_count()).unwrap();
    if let Some(k) = w.k {
        writeln!(s, "# k: {k}").unwrap();
    }
    writeln!(
        s,
        "# bound: {} = {}",
        r.bound_name.formula(),
        r.bound_claimed
    )
    .unwrap();
    writeln!(s, "# singular ≤ {}", r.bound()).unwrap();
    writeln!(s, "# singular: {}", r.singular_count()).unwrap();
    writeln!(s, "# faces: {}", r.report.face_count).unwrap();
    writeln!(s, "# chi: {}", r.report.euler_characteristic).unwrap();
    writeln!(s, "# orientable: {}", r.report.orientable).unwrap();
    writeln!(s, "# surface: {}", r.report.surface).unwrap();
    writeln!(s, "# bender-richmond bound: {}", br.br_bound).unwrap();
    let tighter = match br.tighter {
        Tighter::Ours => "ours",
        Tighter::BenderRichmond => "bender-richmond",
        Tighter::Equal => "equal",
    };
    writeln!(s, "# tighter bound: {tighter}").unwrap();
    if !w.precondition_checked {
        writeln!(s, "# warning: connectivity hypothesis not verified").unwrap();
    }
    s.push_str(&write_embedding(g, &r.embedding));
    writeln!(
        s,
        "# singular edges: {}",
        ids(r.report.singular.iter().copied())
    )
    .unwrap();
    writeln!(s, "# covered edges: {}", r.covered_edges.len()).unwrap();
    writeln!(s, "# partial cover walks: {}", r.walks).unwrap();
    for (name, m) in &w.matchings {
        writeln!(s, "# matching {name}: {m}").unwrap();
    }
    if let Some(j) = &w.postman {
        writeln!(s, "# postman set: {}", ids(j.0.iter().copied())).unwrap();
    }
    if let Some(t) = &w.tree {
        writeln!(s, "# spanning tree: {}", ids(t.edges.iter().copied())).unwrap();
    }
    if let (Some(hv), Some(he)) = (w.h_vertices, w.h_edges) {
        writeln!(s, "# contracted graph: {hv} vertices, {he} edges").unwrap();
        writeln!(
            s,
            "# packed tree sizes: {}",
            ids(w.packed_tree_sizes.iter().copied())
        )
        .unwrap();
    }
    if let Some(f) = &w.fractional {
        let check = if g.vertex_count() <= 16 {
            "available"
        } else {
            "too large"
        };
        writeln!(
            s,
            "# fractional point: 1/{k} on M, {}/{} elsewhere; exhaustive check {check}",
            f.k - 1,
            2 * f.k,
            k = f.k
        )
        .unwrap();
    }
    if let Some((i, lifted)) = &w.smallest_tree {
        writeln!(s, "# smallest tree {i}: {}", ids(lifted.iter().copied())).unwrap();
    }
    s
}
