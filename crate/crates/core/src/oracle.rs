//! Brute-force ground truth for the constructive modules.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;
use thiserror::Error;

use crate::embedding::{
    singular_edges, trace_facial_walks, Embedding, EmbeddingError, EmbeddingSpace, FacialWalk, Sign,
};
use crate::graph::{generate_petersen, CubicGraph, EdgeId, GraphError, Vertex};
use crate::matching::{FractionalPmPoint, Matching};
use crate::partial_cdc::{circuits_of, ClosedWalk};

fn singular_count(g: &CubicGraph, emb: &Embedding) -> usize {
    singular_edges(&trace_facial_walks(g, emb)).len()
}

/// Fewest singular edges over every normalised embedding, with the first
/// embedding (in enumeration order) attaining it.
pub fn min_singular_exhaustive(
    g: &CubicGraph,
    guard: usize,
) -> Result<(usize, Embedding), EmbeddingError> {
    let space = EmbeddingSpace::new(g, guard)?;
    if let Some(i) = (0..space.len())
        .into_par_iter()
        .find_first(|&i| singular_count(g, &space.get(i)) == 0)
    {
        return Ok((0, space.get(i)));
    }
    let (count, i) = (0..space.len())
        .into_par_iter()
        .map(|i| (singular_count(g, &space.get(i)), i))
        .min()
        .expect("embedding space is never empty");
    Ok((count, space.get(i)))
}

pub const PM_ENUMERATION_GUARD: usize = 16;

/// Every perfect matching, parallel edges counted separately.
pub fn enumerate_perfect_matchings(g: &CubicGraph) -> Result<Vec<Matching>, GraphError> {
    let n = g.vertex_count();
    if n > PM_ENUMERATION_GUARD {
        return Err(GraphError::TooLarge {
            n,
            guard: PM_ENUMERATION_GUARD,
        });
    }
    fn go(
        g: &CubicGraph,
        matched: &mut [bool],
        chosen: &mut Vec<EdgeId>,
        out: &mut Vec<BTreeSet<EdgeId>>,
    ) {
        let Some(v) = matched.iter().position(|&m| !m) else {
            out.push(chosen.iter().copied().collect());
            return;
        };
        let mut inc: Vec<(EdgeId, Vertex)> = g.neighbors(v).collect();
        inc.sort_unstable();
        for (e, w) in inc {
            if matched[w] {
                continue;
            }
            matched[v] = true;
            matched[w] = true;
            chosen.push(e);
            go(g, matched, chosen, out);
            chosen.pop();
            matched[v] = false;
            matched[w] = false;
        }
    }
    let mut out = Vec::new();
    go(g, &mut vec![false; n], &mut Vec::new(), &mut out);
    Ok(out
        .into_iter()
        .map(|s| Matching::new(g, s).expect("backtracking yields perfect matchings"))
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Constraint {
    Negative {
        edge: EdgeId,
    },
    Degree {
        vertex: Vertex,
        sum: Ratio<i64>,
    },
    OddSet {
        set: BTreeSet<Vertex>,
        cut: Ratio<i64>,
    },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EdmondsError {
    #[error("violated constraint: {0:?}")]
    ViolatedConstraint(Constraint),
    #[error("point has {got} coordinates, graph has {expected} edges")]
    WrongLength { got: usize, expected: usize },
    #[error(transparent)]
    TooLarge(#[from] GraphError),
}

/// Checks nonnegativity, x(δ(v)) = 1 at every vertex and x(δ(U)) ≥ 1 for
/// every odd U. Each odd set is checked once together with its complement.
pub fn check_edmonds_point(g: &CubicGraph, f: &FractionalPmPoint) -> Result<(), EdmondsError> {
    let n = g.vertex_count();
    if n > PM_ENUMERATION_GUARD {
        return Err(GraphError::TooLarge {
            n,
            guard: PM_ENUMERATION_GUARD,
        }
        .into());
    }
    if f.value.len() != g.edge_count() {
        return Err(EdmondsError::WrongLength {
            got: f.value.len(),
            expected: g.edge_count(),
        });
    }
    let zero = Ratio::from_integer(0);
    let one = Ratio::from_integer(1);
    if let Some(edge) = f.value.iter().position(|x| *x < zero) {
        return Err(EdmondsError::ViolatedConstraint(Constraint::Negative {
            edge,
        }));
    }
    for v in 0..n {
        let sum: Ratio<i64> = g.neighbors(v).map(|(e, _)| f.value[e]).sum();
        if sum != one {
            return Err(EdmondsError::ViolatedConstraint(Constraint::Degree {
                vertex: v,
                sum,
            }));
        }
    }
    let edges: Vec<(EdgeId, usize, usize)> = g.edges().collect();
    let violated = (1u32..1 << (n - 1)).into_par_iter().find_first(|&rest| {
        if rest.count_ones() % 2 == 0 {
            return false;
        }
        let mask = rest << 1;
        let cut: Ratio<i64> = edges
            .iter()
            .filter(|&&(_, u, v)| (mask >> u & 1) != (mask >> v & 1))
            .map(|&(e, _, _)| f.value[e])
            .sum();
        cut < one
    });
    match violated {
        None => Ok(()),
        Some(rest) => {
            let mask = rest << 1;
            let set: BTreeSet<Vertex> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let cut = g.cut(&set).cut_edges.iter().map(|&e| f.value[e]).sum();
            Err(EdmondsError::ViolatedConstraint(Constraint::OddSet {
                set,
                cut,
            }))
        }
    }
}

/// Lengths of all circuits of `g`, by depth-first search from each circuit's
/// smallest vertex.
pub fn circuit_lengths(g: &CubicGraph) -> BTreeSet<usize> {
    let n = g.vertex_count();
    let mut lengths = BTreeSet::new();
    fn go(
        g: &CubicGraph,
        start: Vertex,
        v: Vertex,
        via: EdgeId,
        depth: usize,
        on_path: &mut [bool],
        lengths: &mut BTreeSet<usize>,
    ) {
        for (e, w) in g.neighbors(v) {
            if e == via {
                continue;
            }
            if w == start {
                lengths.insert(depth + 1);
            } else if w > start && !on_path[w] {
                on_path[w] = true;
                go(g, start, w, e, depth + 1, on_path, lengths);
                on_path[w] = false;
            }
        }
    }
    let mut on_path = vec![false; n];
    for s in 0..n {
        on_path[s] = true;
        go(g, s, s, usize::MAX, 0, &mut on_path, &mut lengths);
        on_path[s] = false;
    }
    lengths
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PetersenReport {
    /// The two 5-circuits left by removing the spokes.
    pub circuits: Vec<ClosedWalk>,
    pub extensions: usize,
    pub min_singular: usize,
    pub witness: Embedding,
    /// Every face other than the two circuits has length divisible by 4.
    pub other_faces_divisible_by_4: bool,
    pub circuit_lengths: BTreeSet<usize>,
    pub no_4_or_12_circuit: bool,
}

fn spoke_circuits(g: &CubicGraph) -> Vec<ClosedWalk> {
    let spokes: BTreeSet<EdgeId> = (5..10).collect();
    let keep: Vec<bool> = (0..g.edge_count()).map(|e| !spokes.contains(&e)).collect();
    circuits_of(g, &keep).expect("Petersen minus spokes is 2-regular")
}

fn keys(walks: &[ClosedWalk]) -> Vec<Vec<(Vertex, EdgeId)>> {
    walks.iter().map(|w| w.canonical_key()).collect()
}

fn contains_all(faces: &[FacialWalk], keys: &[Vec<(Vertex, EdgeId)>]) -> bool {
    keys.iter().all(|k| faces.iter().any(|f| f.matches(k)))
}

/// Every embedding of Petersen in which both spoke-complement 5-circuits are
/// faces. Each rotation choice fixes the side on which each circuit passes
/// every vertex, which forces the signs of the circuit edges; the spoke signs
/// stay free, so there are 2^10 · 2^5 extensions.
pub fn check_petersen_nonextension() -> PetersenReport {
    let g = generate_petersen();
    let circuits = spoke_circuits(&g);
    let circuit_keys = keys(&circuits);
    let results: Vec<(usize, bool, u32, u32)> = (0u32..1 << 10)
        .into_par_iter()
        .flat_map_iter(|rot| {
            let (reversed, forced) = forced_signature(&g, &circuits, rot);
            let g = &g;
            let circuit_keys = &circuit_keys;
            (0u32..1 << 5).map(move |spin| {
                let mut sig = forced.clone();
                for s in 0..5 {
                    if spin >> s & 1 == 1 {
                        sig[5 + s] = Sign::Minus;
                    }
                }
                let emb = Embedding::from_choices(g, &reversed, sig);
                let faces = trace_facial_walks(g, &emb);
                assert!(
                    contains_all(&faces, circuit_keys),
                    "forced signs must keep the circuits facial"
                );
                let divisible = faces
                    .iter()
                    .filter(|f| !circuit_keys.iter().any(|k| f.matches(k)))
                    .all(|f| f.len() % 4 == 0);
                (singular_edges(&faces).len(), divisible, rot, spin)
            })
        })
        .collect();
    let &(min_singular, _, rot, spin) = results.iter().min_by_key(|r| (r.0, r.2, r.3)).unwrap();
    let witness = rebuild(&g, &circuits, rot, spin);
    let lengths = circuit_lengths(&g);
    PetersenReport {
        extensions: results.len(),
        min_singular,
        witness,
        other_faces_divisible_by_4: results.iter().all(|r| r.1),
        no_4_or_12_circuit: !lengths.contains(&4) && !lengths.contains(&12),
        circuit_lengths: lengths,
        circuits,
    }
}

/// Rotation choice from the bits of `rot` and the circuit-edge signs that
/// make every circuit facial under it; other edges get +1.
fn forced_signature(g: &CubicGraph, circuits: &[ClosedWalk], rot: u32) -> (Vec<bool>, Vec<Sign>) {
    let reversed: Vec<bool> = (0..g.vertex_count()).map(|v| rot >> v & 1 == 1).collect();
    let base = Embedding::from_choices(g, &reversed, vec![Sign::Plus; g.edge_count()]);
    let mut sig = vec![Sign::Plus; g.edge_count()];
    for c in circuits {
        let steps = c.steps();
        let t = steps.len();
        let side = |i: usize| {
            let (v, e) = steps[i % t];
            let prev = steps[(i + t - 1) % t].1;
            Sign::from_bool(base.succ(g.dart_at(prev, v).unwrap()) == g.dart_at(e, v).unwrap())
        };
        for i in 0..t {
            sig[steps[i].1] = side(i) * side(i + 1);
        }
    }
    (reversed, sig)
}

fn rebuild(g: &CubicGraph, circuits: &[ClosedWalk], rot: u32, spin: u32) -> Embedding {
    let (reversed, mut sig) = forced_signature(g, circuits, rot);
    for s in 0..5 {
        if spin >> s & 1 == 1 {
            sig[5 + s] = Sign::Minus;
        }
    }
    Embedding::from_choices(g, &reversed, sig)
}

/// Cross-check by filtering all normalised Petersen embeddings for those
/// with both circuits facial. Returns (matching embeddings, minimum
/// singular count among them).
pub fn petersen_nonextension_by_filter() -> (usize, usize) {
    let g = generate_petersen();
    let circuit_keys = keys(&spoke_circuits(&g));
    let space = EmbeddingSpace::new(&g, 10).expect("Petersen is within the guard");
    let hits: Vec<usize> = (0..space.len())
        .into_par_iter()
        .filter_map(|i| {
            let faces = trace_facial_walks(&g, &space.get(i));
            contains_all(&faces, &circuit_keys).then(|| singular_edges(&faces).len())
        })
        .collect();
    (hits.len(), hits.iter().copied().min().unwrap_or(usize::MAX))
}

pub const CYCLIC_EXHAUSTIVE_GUARD: usize = 22;

/// Cyclic edge connectivity by trying every vertex bipartition; `None` when
/// no bipartition leaves a cycle on both sides.
pub fn cyclic_connectivity_exhaustive(g: &CubicGraph) -> Result<Option<usize>, GraphError> {
    let n = g.vertex_count();
    if n > CYCLIC_EXHAUSTIVE_GUARD {
        return Err(GraphError::TooLarge {
            n,
            guard: CYCLIC_EXHAUSTIVE_GUARD,
        });
    }
    let edges: Vec<(EdgeId, usize, usize)> = g.edges().collect();
    let has_cycle = |mask: u32, side: u32| {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(_, u, v) in &edges {
            if (mask >> u & 1) == side && (mask >> v & 1) == side {
                let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                if a == b {
                    return true;
                }
                parent[a] = b;
            }
        }
        false
    };
    Ok((1u32..1 << (n - 1))
        .into_par_iter()
        .filter_map(|rest| {
            let mask = rest << 1;
            if !has_cycle(mask, 0) || !has_cycle(mask, 1) {
                return None;
            }
            Some(
                edges
                    .iter()
                    .filter(|&&(_, u, v)| (mask >> u & 1) != (mask >> v & 1))
                    .count(),
            )
        })
        .min())
}
