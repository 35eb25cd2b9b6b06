//! Closed walks, the partial cycle double cover conditions, and the
//! extension of a partial cover to a full embedding.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::embedding::{canonical_steps, Embedding, FacialWalk, Sign};
use crate::graph::{CubicGraph, Dart, EdgeId, Multigraph, Vertex};

/// A closed walk `v0 e0 v1 e1 ... e_{t-1} v0`, stored as the steps
/// `(v_i, e_i)` in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedWalk {
    steps: Vec<(Vertex, EdgeId)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("walk {walk}: {msg}")]
    NotAWalk { walk: usize, msg: String },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
}

impl ClosedWalk {
    /// Checks that every `e_i` joins `v_i` and `v_{i+1}` (indices mod t).
    pub fn new(g: &Multigraph, steps: Vec<(Vertex, EdgeId)>) -> Result<Self, String> {
        if steps.len() < 2 {
            return Err("a closed walk needs at least two edges".into());
        }
        let t = steps.len();
        for i in 0..t {
            let (v, e) = steps[i];
            let w = steps[(i + 1) % t].0;
            if e >= g.edge_count() || v >= g.vertex_count() {
                return Err(format!("step {i} refers to a missing vertex or edge"));
            }
            let (a, b) = g.endpoints(e);
            if !((a == v && b == w) || (a == w && b == v)) {
                return Err(format!("edge {e} does not join {v} and {w}"));
            }
        }
        Ok(ClosedWalk { steps })
    }

    /// Closed walk through the given vertex/edge sequence without checking it
    /// against a graph.
    pub fn from_steps_unchecked(steps: Vec<(Vertex, EdgeId)>) -> Self {
        ClosedWalk { steps }
    }

    pub fn steps(&self) -> &[(Vertex, EdgeId)] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.steps.iter().map(|&(_, e)| e)
    }

    /// Passages `(e_{i-1}, v_i, e_i)`, one per step.
    pub fn passages(&self) -> impl Iterator<Item = (EdgeId, Vertex, EdgeId)> + '_ {
        let t = self.steps.len();
        (0..t).map(move |i| {
            let (v, e) = self.steps[i];
            (self.steps[(i + t - 1) % t].1, v, e)
        })
    }

    /// Identity of the walk up to cyclic shift and reversal.
    pub fn canonical_key(&self) -> Vec<(Vertex, EdgeId)> {
        canonical_steps(&self.steps)
    }
}

impl fmt::Display for ClosedWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, e) in &self.steps {
            write!(f, "{v} {e} ")?;
        }
        write!(f, "{}", self.steps[0].0)
    }
}

impl From<&FacialWalk> for ClosedWalk {
    fn from(f: &FacialWalk) -> Self {
        ClosedWalk {
            steps: f.canonical_key(),
        }
    }
}

/// Reads one walk per line, `v0 e0 v1 ... v0`. Blank lines and `#` comments
/// are skipped.
pub fn parse_walks(g: &Multigraph, text: &str) -> Result<Vec<ClosedWalk>, WalkError> {
    let mut walks = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |msg: String| WalkError::Syntax { line: idx + 1, msg };
        let ids = line
            .split_ascii_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| syntax(format!("bad id {t:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if ids.len() < 5 || ids.len() % 2 == 0 {
            return Err(syntax(
                "expected v0 e0 v1 ... v0 with at least two edges".into(),
            ));
        }
        if ids[0] != ids[ids.len() - 1] {
            return Err(syntax("walk does not return to its first vertex".into()));
        }
        let steps = ids[..ids.len() - 1]
            .chunks_exact(2)
            .map(|p| (p[0], p[1]))
            .collect();
        let walk = ClosedWalk::new(g, steps).map_err(|msg| WalkError::NotAWalk {
            walk: walks.len(),
            msg,
        })?;
        walks.push(walk);
    }
    Ok(walks)
}

pub fn write_walks(walks: &[ClosedWalk]) -> String {
    walks.iter().map(|w| format!("{w}\n")).collect()
}

/// An angle at `vertex`: two distinct incident edges, smaller id first.
pub type Angle = (Vertex, EdgeId, EdgeId);

fn angle(v: Vertex, e: EdgeId, f: EdgeId) -> Angle {
    (v, e.min(f), e.max(f))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PcdcError {
    #[error("walk {walk} is not a closed walk: {msg}")]
    NotAWalk { walk: usize, msg: String },
    #[error("C1 violated at edge {edge} by walks {walks:?}")]
    C1 { edge: EdgeId, walks: (usize, usize) },
    #[error("C2 violated at angle {angle:?} by walks {walks:?}")]
    C2 { angle: Angle, walks: (usize, usize) },
}

/// A validated collection of closed walks satisfying C1 (each edge covered
/// at most once, or twice by two different walks) and C2 (no angle used by
/// two passages).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialCdc {
    pub walks: Vec<ClosedWalk>,
    pub edge_usage: Vec<u8>,
    pub angle_usage: BTreeMap<Angle, usize>,
}

impl PartialCdc {
    pub fn covered_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_usage.len()).filter(|&e| self.edge_usage[e] > 0)
    }

    pub fn uncovered_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_usage.len()).filter(|&e| self.edge_usage[e] == 0)
    }
}

pub fn validate_partial_cdc(
    g: &CubicGraph,
    walks: Vec<ClosedWalk>,
) -> Result<PartialCdc, PcdcError> {
    let mut by_key: HashMap<Vec<(Vertex, EdgeId)>, usize> = HashMap::new();
    for (i, w) in walks.iter().enumerate() {
        ClosedWalk::new(g, w.steps.clone()).map_err(|msg| PcdcError::NotAWalk { walk: i, msg })?;
        if let Some(&j) = by_key.get(&w.canonical_key()) {
            return Err(PcdcError::C1 {
                edge: w.steps[0].1,
                walks: (j, i),
            });
        }
        by_key.insert(w.canonical_key(), i);
    }
    let mut edge_usage = vec![0u8; g.edge_count()];
    let mut edge_walk = vec![usize::MAX; g.edge_count()];
    let mut angle_walk: BTreeMap<Angle, usize> = BTreeMap::new();
    let mut angle_usage = BTreeMap::new();
    for (i, w) in walks.iter().enumerate() {
        for e in w.edges() {
            if edge_usage[e] >= 2 || edge_walk[e] == i {
                return Err(PcdcError::C1 {
                    edge: e,
                    walks: (edge_walk[e], i),
                });
            }
            edge_usage[e] += 1;
            edge_walk[e] = i;
        }
        for (e, v, f) in w.passages() {
            let a = angle(v, e, f);
            if let Some(&j) = angle_walk.get(&a) {
                return Err(PcdcError::C2 {
                    angle: a,
                    walks: (j, i),
                });
            }
            angle_walk.insert(a, i);
            angle_usage.insert(a, 1);
        }
    }
    Ok(PartialCdc {
        walks,
        edge_usage,
        angle_usage,
    })
}

/// D_v: the three edges at `v` as nodes, linked when some walk passes
/// through `v` between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkGraph {
    pub vertex: Vertex,
    pub nodes: [EdgeId; 3],
    pub links: Vec<(EdgeId, EdgeId)>,
}

impl LinkGraph {
    pub fn max_degree(&self) -> usize {
        self.nodes
            .iter()
            .map(|&x| {
                self.links
                    .iter()
                    .filter(|&&(a, b)| a == x || b == x)
                    .count()
            })
            .max()
            .unwrap_or(0)
    }

    pub fn has_double_link(&self) -> bool {
        let mut seen: Vec<_> = self
            .links
            .iter()
            .map(|&(a, b)| (a.min(b), a.max(b)))
            .collect();
        seen.sort();
        seen.windows(2).any(|w| w[0] == w[1])
    }

    /// The triangle on the three nodes, oriented from the smallest edge id
    /// towards the smaller of the other two.
    pub fn completed_orientation(&self) -> [EdgeId; 3] {
        let mut n = self.nodes;
        n.sort();
        n
    }
}

pub fn link_graphs(g: &CubicGraph, pcdc: &PartialCdc) -> Vec<LinkGraph> {
    let mut out: Vec<LinkGraph> = (0..g.vertex_count())
        .map(|v| LinkGraph {
            vertex: v,
            nodes: g.darts3(v).map(Dart::edge),
            links: Vec::new(),
        })
        .collect();
    for w in &pcdc.walks {
        for (e, v, f) in w.passages() {
            out[v].links.push((e, f));
        }
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtensionError {
    #[error("walks disagree on the sign of edge {edge}")]
    InconsistentLambda { edge: EdgeId },
}

/// Builds an embedding in which every walk of `pcdc` is a facial walk.
///
/// Completing any D_v of a cubic vertex gives the same triangle, so every
/// rotation lists the darts in ascending edge order; the walks then only
/// decide λ. A walk leaving `u` through π_u of its arrival has side +1 at
/// `u`, and λ(e) is the product of the sides at the two ends of `e`. Edges no
/// walk touches get +1.
pub fn extend_to_embedding(g: &CubicGraph, pcdc: &PartialCdc) -> Result<Embedding, ExtensionError> {
    let emb = Embedding::ascending(g, vec![Sign::Plus; g.edge_count()]);
    let mut lambda: Vec<Option<Sign>> = vec![None; g.edge_count()];
    for w in &pcdc.walks {
        let steps = w.steps();
        let t = steps.len();
        let side: Vec<Sign> = w
            .passages()
            .map(|(e, v, f)| {
                let arrive = g.dart_at(e, v).expect("walk checked");
                let leave = g.dart_at(f, v).expect("walk checked");
                Sign::from_bool(emb.succ(arrive) == leave)
            })
            .collect();
        for i in 0..t {
            let e = steps[i].1;
            let s = side[i] * side[(i + 1) % t];
            match lambda[e] {
                None => lambda[e] = Some(s),
                Some(old) if old != s => {
                    return Err(ExtensionError::InconsistentLambda { edge: e })
                }
                Some(_) => {}
            }
        }
    }
    let signature = lambda
        .into_iter()
        .map(|s| s.unwrap_or(Sign::Plus))
        .collect();
    Ok(emb.with_signature(signature))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AngleError {
    #[error("angle {0:?} is used by two face passages")]
    UsedTwice(Angle),
    #[error("{missing} angles are not on any face")]
    Uncovered { missing: usize },
}

/// Assigns every angle to the face passing through it. Each of the 3n angles
/// of a cubic graph must be used by exactly one passage.
pub fn angle_coverage(
    g: &CubicGraph,
    faces: &[FacialWalk],
) -> Result<BTreeMap<Angle, usize>, AngleError> {
    let mut map = BTreeMap::new();
    for (id, face) in faces.iter().enumerate() {
        let walk = ClosedWalk::from(face);
        for (e, v, f) in walk.passages() {
            let a = angle(v, e, f);
            if map.insert(a, id).is_some() {
                return Err(AngleError::UsedTwice(a));
            }
        }
    }
    let expected = 3 * g.vertex_count();
    if map.len() != expected {
        return Err(AngleError::Uncovered {
            missing: expected - map.len(),
        });
    }
    Ok(map)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("vertex {vertex} has odd degree {degree} in the edge set")]
pub struct OddDegree {
    pub vertex: Vertex,
    pub degree: usize,
}

/// Splits an even-degree edge set of a cubic graph into circuits. Each
/// circuit starts at the first endpoint of its smallest unused edge and
/// follows that edge first.
pub fn circuits_of(g: &CubicGraph, edges: &[bool]) -> Result<Vec<ClosedWalk>, OddDegree> {
    for v in 0..g.vertex_count() {
        let degree = g.neighbors(v).filter(|&(e, _)| edges[e]).count();
        if degree % 2 == 1 {
            return Err(OddDegree { vertex: v, degree });
        }
    }
    let mut used = vec![false; g.edge_count()];
    let mut out = Vec::new();
    for start in 0..g.edge_count() {
        if !edges[start] || used[start] {
            continue;
        }
        let (v0, mut v) = g.endpoints(start);
        let mut steps = vec![(v0, start)];
        used[start] = true;
        while v != v0 {
            let (e, w) = g
                .neighbors(v)
                .filter(|&(e, _)| edges[e] && !used[e])
                .min()
                .expect("even degrees close every trail");
            used[e] = true;
            steps.push((v, e));
            v = w;
        }
        out.push(ClosedWalk { steps });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::trace_facial_walks;
    use crate::graph::*;

    fn walk(g: &CubicGraph, seq: &[usize]) -> ClosedWalk {
        let steps = seq[..seq.len() - 1]
            .chunks(2)
            .map(|p| (p[0], p[1]))
            .collect();
        ClosedWalk::new(g, steps).unwrap()
    }

    fn faces_contain(g: &CubicGraph, emb: &Embedding, walks: &[ClosedWalk]) -> bool {
        let keys: Vec<_> = trace_facial_walks(g, emb)
            .iter()
            .map(|f| f.canonical_key())
            .collect();
        walks.iter().all(|w| keys.contains(&w.canonical_key()))
    }

    #[test]
    fn petersen_two_pentagons() {
        let g = generate_petersen();
        let outer = walk(&g, &[0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 0]);
        let inner = walk(&g, &[5, 10, 7, 12, 9, 14, 6, 11, 8, 13, 5]);
        let pcdc = validate_partial_cdc(&g, vec![outer, inner]).unwrap();
        let emb = extend_to_embedding(&g, &pcdc).unwrap();
        assert!(faces_contain(&g, &emb, &pcdc.walks));
        let faces = trace_facial_walks(&g, &emb);
        assert!(!crate::embedding::singular_edges(&faces).is_empty());
    }

    #[test]
    fn repeated_circuit_is_c1() {
        let g = generate_k4();
        let c = walk(&g, &[0, 0, 1, 2, 2, 1, 0]);
        assert!(matches!(
            validate_partial_cdc(&g, vec![c.clone(), c]),
            Err(PcdcError::C1 { walks: (0, 1), .. })
        ));
    }

    #[test]
    fn theta_two_digons() {
        let g = generate_theta();
        let a = walk(&g, &[0, 0, 1, 1, 0]);
        let b = walk(&g, &[0, 1, 1, 2, 0]);
        let pcdc = validate_partial_cdc(&g, vec![a, b]).unwrap();
        assert_eq!(pcdc.edge_usage, vec![1, 2, 1]);
        let emb = extend_to_embedding(&g, &pcdc).unwrap();
        let faces = trace_facial_walks(&g, &emb);
        assert!(faces_contain(&g, &emb, &pcdc.walks));
        assert_eq!(faces.len(), 3);
        assert!(crate::embedding::singular_edges(&faces).is_empty());
    }

    #[test]
    fn shared_angle_is_c2() {
        let g = generate_k4();
        // both pass through the angle {0, 1} at vertex 0
        let tri = walk(&g, &[0, 0, 1, 2, 2, 1, 0]);
        let quad = walk(&g, &[0, 0, 1, 4, 3, 5, 2, 1, 0]);
        let other = walk(&g, &[0, 0, 1, 4, 3, 3, 0]);
        assert!(validate_partial_cdc(&g, vec![tri.clone(), other]).is_ok());
        assert!(matches!(
            validate_partial_cdc(&g, vec![tri, quad]),
            Err(PcdcError::C2 {
                angle: (0, 0, 1),
                ..
            })
        ));
    }

    #[test]
    fn empty_cover_extends() {
        let g = generate_petersen();
        let pcdc = validate_partial_cdc(&g, vec![]).unwrap();
        let emb = extend_to_embedding(&g, &pcdc).unwrap();
        let faces = trace_facial_walks(&g, &emb);
        crate::embedding::verify_fdc(&g, &faces).unwrap();
    }

    #[test]
    fn link_graphs_are_paths() {
        let g = generate_petersen();
        let outer = walk(&g, &[0, 0, 1, 1, 2, 2, 3, 3, 4, 4, 0]);
        let pcdc = validate_partial_cdc(&g, vec![outer]).unwrap();
        for d in link_graphs(&g, &pcdc) {
            assert!(d.max_degree() <= 2);
            assert!(!d.has_double_link());
            assert_eq!(d.links.len(), usize::from(d.vertex < 5));
        }
    }

    #[test]
    fn angles_are_covered_once() {
        let g = generate_k4();
        let pcdc = validate_partial_cdc(&g, vec![]).unwrap();
        let emb = extend_to_embedding(&g, &pcdc).unwrap();
        let map = angle_coverage(&g, &trace_facial_walks(&g, &emb)).unwrap();
        assert_eq!(map.len(), 12);
        let t = generate_theta();
        let emb = Embedding::trivial(&t);
        assert_eq!(
            angle_coverage(&t, &trace_facial_walks(&t, &emb))
                .unwrap()
                .len(),
            6
        );
    }

    #[test]
    fn not_a_walk() {
        let g = generate_k4();
        assert!(ClosedWalk::new(&g, vec![(0, 0), (1, 5)]).is_err());
        let bad = ClosedWalk::from_steps_unchecked(vec![(0, 0), (2, 0)]);
        assert!(matches!(
            validate_partial_cdc(&g, vec![bad]),
            Err(PcdcError::NotAWalk { walk: 0, .. })
        ));
    }

    #[test]
    fn walk_file_roundtrip() {
        let g = generate_petersen();
        let text = "# outer\n0 0 1 1 2 2 3 3 4 4 0\n\n5 10 7 12 9 14 6 11 8 13 5\n";
        let walks = parse_walks(&g, text).unwrap();
        assert_eq!(walks.len(), 2);
        let back = parse_walks(&g, &write_walks(&walks)).unwrap();
        assert_eq!(back, walks);
        assert!(matches!(
            parse_walks(&g, "0 0 1 1 0"),
            Err(WalkError::NotAWalk { .. })
        ));
        assert!(matches!(
            parse_walks(&g, "0 0 1 1"),
            Err(WalkError::Syntax { line: 1, .. })
        ));
    }

    #[test]
    fn circuits_of_two_factor() {
        let g = generate_petersen();
        let mut set = vec![true; 15];
        for e in 5..10 {
            set[e] = false;
        }
        let cs = circuits_of(&g, &set).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.len() == 5));
        set[0] = false;
        assert!(circuits_of(&g, &set).is_err());
    }
}
