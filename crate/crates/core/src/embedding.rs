//! Rotation systems with edge signatures, facial-walk tracing and the
//! surface statistics derived from the traced faces.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::{self, Write as _};
use std::ops::{Mul, Range};

use thiserror::Error;

use crate::graph::{CubicGraph, Dart, EdgeId, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_bool(positive: bool) -> Self {
        if positive {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bool(self == rhs)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("syntax error on line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("embedding does not fit the graph: {0}")]
    Mismatch(String),
    #[error("{count} embeddings exceed the enumeration guard (n = {n} > {guard})")]
    TooLarge { n: usize, guard: usize, count: u128 },
}

/// A rotation system π (one cyclic order of the three darts at every vertex)
/// with a signature λ on the edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    next: Vec<u32>,
    prev: Vec<u32>,
    signature: Vec<Sign>,
}

impl Embedding {
    /// `rotations[v] = [a, b, c]` means π_v(a) = b, π_v(b) = c, π_v(c) = a.
    pub fn new(
        g: &CubicGraph,
        rotations: &[[Dart; 3]],
        signature: Vec<Sign>,
    ) -> Result<Self, EmbeddingError> {
        let n = g.vertex_count();
        if rotations.len() != n {
            return Err(EmbeddingError::Mismatch(format!(
                "{} rotations for {n} vertices",
                rotations.len()
            )));
        }
        if signature.len() != g.edge_count() {
            return Err(EmbeddingError::Mismatch(format!(
                "{} signs for {} edges",
                signature.len(),
                g.edge_count()
            )));
        }
        let mut next = vec![u32::MAX; 2 * g.edge_count()];
        let mut prev = next.clone();
        for (v, rot) in rotations.iter().enumerate() {
            let mut want = g.darts3(v);
            let mut have = *rot;
            want.sort();
            have.sort();
            if want != have {
                return Err(EmbeddingError::Mismatch(format!(
                    "rotation at vertex {v} is not a permutation of its darts"
                )));
            }
            for i in 0..3 {
                next[rot[i].0] = rot[(i + 1) % 3].0 as u32;
                prev[rot[(i + 1) % 3].0] = rot[i].0 as u32;
            }
        }
        Ok(Embedding {
            next,
            prev,
            signature,
        })
    }

    /// Rotation at `v` is its incidence order, or the reverse when
    /// `reversed[v]` is set.
    pub fn from_choices(g: &CubicGraph, reversed: &[bool], signature: Vec<Sign>) -> Self {
        let rotations: Vec<[Dart; 3]> = (0..g.vertex_count())
            .map(|v| {
                let [a, b, c] = g.darts3(v);
                if reversed[v] {
                    [a, c, b]
                } else {
                    [a, b, c]
                }
            })
            .collect();
        Embedding::new(g, &rotations, signature).expect("choices always fit the graph")
    }

    /// Incidence-order rotations with λ ≡ +1.
    pub fn trivial(g: &CubicGraph) -> Self {
        Self::from_choices(
            g,
            &vec![false; g.vertex_count()],
            vec![Sign::Plus; g.edge_count()],
        )
    }

    /// π_v(d).
    #[inline]
    pub fn succ(&self, d: Dart) -> Dart {
        Dart(self.next[d.0] as usize)
    }

    /// π_v⁻¹(d).
    #[inline]
    pub fn pred(&self, d: Dart) -> Dart {
        Dart(self.prev[d.0] as usize)
    }

    #[inline]
    pub fn sign(&self, e: EdgeId) -> Sign {
        self.signature[e]
    }

    /// Every rotation in ascending dart order.
    pub fn ascending(g: &CubicGraph, signature: Vec<Sign>) -> Self {
        assert_eq!(signature.len(), g.edge_count(), "one sign per edge");
        let mut next = vec![u32::MAX; 2 * g.edge_count()];
        let mut prev = next.clone();
        for v in 0..g.vertex_count() {
            let mut rot = g.darts3(v);
            rot.sort_unstable();
            for i in 0..3 {
                next[rot[i].0] = rot[(i + 1) % 3].0 as u32;
                prev[rot[(i + 1) % 3].0] = rot[i].0 as u32;
            }
        }
        Embedding {
            next,
            prev,
            signature,
        }
    }

    /// Same rotations, new signature.
    pub fn with_signature(mut self, signature: Vec<Sign>) -> Self {
        assert_eq!(signature.len(), self.signature.len(), "one sign per edge");
        self.signature = signature;
        self
    }

    pub fn signature(&self) -> &[Sign] {
        &self.signature
    }

    /// The rotation at `v` starting from its smallest dart.
    pub fn rotation(&self, g: &CubicGraph, v: Vertex) -> [Dart; 3] {
        let first = *g.darts_at(v).iter().min().expect("cubic");
        let second = self.succ(first);
        [first, second, self.succ(second)]
    }

    /// Reverses the rotation at `v` and flips the sign of its edges. The
    /// resulting embedding has the same faces.
    pub fn flip_vertex(&mut self, g: &CubicGraph, v: Vertex) {
        for &d in g.darts_at(v) {
            std::mem::swap(&mut self.next[d.0], &mut self.prev[d.0]);
            self.signature[d.edge()] = self.signature[d.edge()].flip();
        }
    }
}

/// Start of the lexicographically least rotation of the sequence `at(0..n)`,
/// in O(n).
fn least_rotation_by<T: Ord>(n: usize, at: impl Fn(usize) -> T) -> usize {
    let wrap = |x: usize| if x >= n { x - n } else { x };
    let (mut i, mut j, mut k) = (0, 1, 0);
    while i < n && j < n && k < n {
        let (a, b) = (at(wrap(i + k)), at(wrap(j + k)));
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

#[cfg(test)]
fn least_rotation<T: Ord + Copy>(s: &[T]) -> usize {
    least_rotation_by(s.len(), |i| s[i])
}

/// Brings a closed walk to its canonical form in place; see
/// [`canonical_steps`].
fn canonicalize<V: Copy + Ord, E: Copy + Ord>(steps: &mut [(V, E)]) {
    let t = steps.len();
    if t == 0 {
        return;
    }
    let wrap = |x: usize| if x >= t { x - t } else { x };
    // reverse walk: (v0, e_{t-1}), (v_{t-1}, e_{t-2}), ..., (v1, e0)
    let reversed = |s: &[(V, E)], i: usize| (s[if i == 0 { 0 } else { t - i }].0, s[t - 1 - i].1);
    let ka = least_rotation_by(t, |i| steps[i]);
    let kb = least_rotation_by(t, |i| reversed(steps, i));
    let a = (0..t).map(|i| steps[wrap(ka + i)]);
    let b = (0..t).map(|i| reversed(steps, wrap(kb + i)));
    if a.le(b) {
        steps.rotate_left(ka);
    } else {
        steps.reverse();
        let last = steps[t - 1].0;
        for i in (1..t).rev() {
            steps[i].0 = steps[i - 1].0;
        }
        steps[0].0 = last;
        steps.rotate_left(kb);
    }
}

/// Canonical representative of a closed walk given as `(v_i, e_i)` steps:
/// the least sequence among all cyclic shifts of the walk and of its reverse.
pub fn canonical_steps(steps: &[(Vertex, EdgeId)]) -> Vec<(Vertex, EdgeId)> {
    let mut v = steps.to_vec();
    canonicalize(&mut v);
    v
}

/// A facial walk, stored in canonical orientation and starting point.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FacialWalk {
    steps: Vec<(u32, u32)>,
}

impl FacialWalk {
    pub fn from_steps(steps: &[(Vertex, EdgeId)]) -> Self {
        FacialWalk::from_vec(steps.iter().map(|&(v, e)| (v as u32, e as u32)).collect())
    }

    fn from_vec(mut steps: Vec<(u32, u32)>) -> Self {
        canonicalize(&mut steps);
        FacialWalk { steps }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> impl ExactSizeIterator<Item = (Vertex, EdgeId)> + Clone + '_ {
        self.steps.iter().map(|&(v, e)| (v as Vertex, e as EdgeId))
    }

    pub fn canonical_key(&self) -> Vec<(Vertex, EdgeId)> {
        self.steps().collect()
    }

    /// Whether `key` is this walk's canonical key.
    pub fn matches(&self, key: &[(Vertex, EdgeId)]) -> bool {
        self.steps().eq(key.iter().copied())
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.steps.iter().map(|&(_, e)| e as EdgeId)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.steps.iter().map(|&(v, _)| v as Vertex)
    }

    /// Edges traversed twice by this walk.
    pub fn repeated_edges(&self) -> BTreeSet<EdgeId> {
        let mut once = BTreeSet::new();
        let mut twice = BTreeSet::new();
        for e in self.edges() {
            if !once.insert(e) {
                twice.insert(e);
            }
        }
        twice
    }
}

impl fmt::Display for FacialWalk {
    /// `v0 e0 v1 e1 ... v0`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, e) in &self.steps {
            write!(f, "{v} {e} ")?;
        }
        match self.steps.first() {
            Some((v0, _)) => write!(f, "{v0}"),
            None => Ok(()),
        }
    }
}

/// All facial walks of the embedding, one per face.
///
/// A traversal state is a dart we arrived through plus the current side.
/// From state `(d, s)` at `v` the walk leaves along π_v(d) when `s = +1` and
/// along π_v⁻¹(d) otherwise, and the side is multiplied by the sign of the
/// edge it crosses. Every face owns two orbits of the 4|E| states, one per
/// direction; both are marked when the face is first met.
pub fn trace_facial_walks(g: &CubicGraph, emb: &Embedding) -> Vec<FacialWalk> {
    let darts = 2 * g.edge_count();
    let state = |d: Dart, s: Sign| 2 * d.0 + (!s.is_plus()) as usize;
    let mut visited = vec![0u64; (2 * darts).div_ceil(64)];
    let mark = |visited: &mut [u64], i: usize| visited[i / 64] |= 1 << (i % 64);
    let mut faces = Vec::new();
    for d0 in (0..darts).map(Dart) {
        for s0 in [Sign::Plus, Sign::Minus] {
            let i0 = state(d0, s0);
            if visited[i0 / 64] >> (i0 % 64) & 1 == 1 {
                continue;
            }
            let mut steps = Vec::new();
            let (mut d, mut s) = (d0, s0);
            loop {
                let out = if s.is_plus() {
                    emb.succ(d)
                } else {
                    emb.pred(d)
                };
                mark(&mut visited, state(d, s));
                mark(&mut visited, state(out, s.flip()));
                steps.push((g.dart_vertex(d) as u32, out.edge() as u32));
                d = out.opposite();
                s = s * emb.sign(out.edge());
                if d == d0 && s == s0 {
                    break;
                }
            }
            faces.push(FacialWalk::from_vec(steps));
        }
    }
    faces
}

pub fn singular_edges(faces: &[FacialWalk]) -> BTreeSet<EdgeId> {
    faces.iter().flat_map(|f| f.repeated_edges()).collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FdcViolation {
    #[error("face lengths sum to {total}, expected {expected}")]
    Conservation { total: usize, expected: usize },
    #[error("edge {edge} is covered {count} times")]
    Coverage { edge: EdgeId, count: usize },
}

/// Checks the facial double cover invariants: total length 2|E| and every
/// edge covered exactly twice.
pub fn verify_fdc(g: &CubicGraph, faces: &[FacialWalk]) -> Result<(), FdcViolation> {
    let total: usize = faces.iter().map(FacialWalk::len).sum();
    if total != 2 * g.edge_count() {
        return Err(FdcViolation::Conservation {
            total,
            expected: 2 * g.edge_count(),
        });
    }
    let mut count = vec![0; g.edge_count()];
    for e in faces.iter().flat_map(|f| f.edges()) {
        count[e] += 1;
    }
    match count.iter().position(|&c| c != 2) {
        Some(edge) => Err(FdcViolation::Coverage {
            edge,
            count: count[edge],
        }),
        None => Ok(()),
    }
}

/// Genus of the surface an embedding lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surface {
    /// Orientable genus g, χ = 2 − 2g.
    Orientable(usize),
    /// Non-orientable genus g̃, χ = 2 − g̃.
    NonOrientable(usize),
}

impl Surface {
    /// Upper bound on singular edges for 3-edge-connected graphs embedded in
    /// this surface: 0 on the sphere, 1 on the projective plane, otherwise
    /// 6g − 3 or 3g̃ − 3.
    pub fn bender_richmond_bound(self) -> usize {
        match self {
            Surface::Orientable(0) => 0,
            Surface::Orientable(g) => 6 * g - 3,
            Surface::NonOrientable(1) => 1,
            Surface::NonOrientable(g) => 3 * g - 3,
        }
    }

    pub fn is_orientable(self) -> bool {
        matches!(self, Surface::Orientable(_))
    }

    pub fn genus(self) -> usize {
        match self {
            Surface::Orientable(g) | Surface::NonOrientable(g) => g,
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Surface::Orientable(0) => f.write_str("sphere"),
            Surface::Orientable(g) => write!(f, "orientable genus {g}"),
            Surface::NonOrientable(1) => f.write_str("projective plane"),
            Surface::NonOrientable(g) => write!(f, "non-orientable genus {g}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FdcReport {
    pub faces: Vec<FacialWalk>,
    pub singular: BTreeSet<EdgeId>,
    pub face_count: usize,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub surface: Surface,
    pub bender_richmond_bound: usize,
}

/// Whether some set of vertex flips makes every sign +1, i.e. no cycle has
/// an odd number of negative edges.
pub fn is_orientable(g: &CubicGraph, emb: &Embedding) -> bool {
    let n = g.vertex_count();
    let mut flip: Vec<Option<Sign>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if flip[root].is_some() {
            continue;
        }
        flip[root] = Some(Sign::Plus);
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let fv = flip[v].expect("queued vertices are labelled");
            for (e, w) in g.neighbors(v) {
                let want = fv * emb.sign(e);
                match flip[w] {
                    None => {
                        flip[w] = Some(want);
                        queue.push_back(w);
                    }
                    Some(fw) if fw != want => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

pub fn surface_stats(g: &CubicGraph, emb: &Embedding, faces: Vec<FacialWalk>) -> FdcReport {
    let singular = singular_edges(&faces);
    let face_count = faces.len();
    let chi = g.vertex_count() as i64 - g.edge_count() as i64 + face_count as i64;
    let orientable = is_orientable(g, emb);
    let surface = if orientable {
        debug_assert!(chi % 2 == 0 && chi <= 2);
        Surface::Orientable(((2 - chi) / 2) as usize)
    } else {
        Surface::NonOrientable((2 - chi) as usize)
    };
    FdcReport {
        faces,
        singular,
        face_count,
        euler_characteristic: chi,
        orientable,
        surface,
        bender_richmond_bound: surface.bender_richmond_bound(),
    }
}

/// Traces faces and computes surface statistics in one go.
pub fn analyze(g: &CubicGraph, emb: &Embedding) -> FdcReport {
    surface_stats(g, emb, trace_facial_walks(g, emb))
}

pub const DEFAULT_ENUMERATION_GUARD: usize = 14;

/// All embeddings of a graph up to vertex flips: every rotation choice
/// combined with every signature that is +1 on a fixed BFS spanning tree.
#[derive(Clone, Debug)]
pub struct EmbeddingSpace<'a> {
    g: &'a CubicGraph,
    cotree: Vec<EdgeId>,
}

impl<'a> EmbeddingSpace<'a> {
    pub fn new(g: &'a CubicGraph, guard: usize) -> Result<Self, EmbeddingError> {
        let n = g.vertex_count();
        let cotree_len = g.edge_count() + 1 - n;
        if n > guard || n + cotree_len >= 64 {
            return Err(EmbeddingError::TooLarge {
                n,
                guard,
                count: 1u128 << (n + cotree_len).min(127),
            });
        }
        let mut in_tree = vec![false; g.edge_count()];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(v) = queue.pop_front() {
            for (e, w) in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
        let cotree = (0..g.edge_count()).filter(|&e| !in_tree[e]).collect();
        Ok(EmbeddingSpace { g, cotree })
    }

    pub fn len(&self) -> u64 {
        1u64 << (self.g.vertex_count() + self.cotree.len())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Low `n` bits pick reversed rotations, the remaining bits the signs of
    /// the cotree edges.
    pub fn get(&self, index: u64) -> Embedding {
        let n = self.g.vertex_count();
        let reversed: Vec<bool> = (0..n).map(|v| index >> v & 1 == 1).collect();
        let mut signature = vec![Sign::Plus; self.g.edge_count()];
        for (i, &e) in self.cotree.iter().enumerate() {
            if index >> (n + i) & 1 == 1 {
                signature[e] = Sign::Minus;
            }
        }
        Embedding::from_choices(self.g, &reversed, signature)
    }

    pub fn iter(&self) -> impl Iterator<Item = Embedding> + '_ {
        self.iter_range(0..self.len())
    }

    pub fn iter_range(&self, range: Range<u64>) -> impl Iterator<Item = Embedding> + '_ {
        range.map(move |i| self.get(i))
    }
}

/// Streams every normalised embedding of `g`; see [`EmbeddingSpace`].
pub fn enumerate_embeddings(
    g: &CubicGraph,
    guard: usize,
) -> Result<impl Iterator<Item = Embedding> + '_, EmbeddingError> {
    let space = EmbeddingSpace::new(g, guard)?;
    let len = space.len();
    Ok((0..len).map(move |i| space.get(i)))
}

/// Text form: `rotation v: d1 d2 d3` per vertex, then `signature e: +1|-1`
/// per edge, darts written `edge.end`.
pub fn write_embedding(g: &CubicGraph, emb: &Embedding) -> String {
    let mut s = String::new();
    for v in 0..g.vertex_count() {
        let [a, b, c] = emb.rotation(g, v);
        writeln!(s, "rotation {v}: {a} {b} {c}").unwrap();
    }
    for e in 0..g.edge_count() {
        writeln!(s, "signature {e}: {}", emb.sign(e)).unwrap();
    }
    s
}

fn parse_dart(tok: &str) -> Option<Dart> {
    let (e, end) = tok.split_once('.')?;
    let e: usize = e.parse().ok()?;
    let end: usize = end.parse().ok()?;
    (end < 2).then(|| Dart::new(e, end))
}

/// Parses the text form. Blank lines and lines starting with `#` are
/// skipped, so a pipeline report can be read back directly. Syntax errors
/// are distinguished from embeddings that do not fit `g`.
pub fn parse_embedding(g: &CubicGraph, text: &str) -> Result<Embedding, EmbeddingError> {
    let n = g.vertex_count();
    let m = g.edge_count();
    let mut rotations: Vec<Option<[Dart; 3]>> = vec![None; n];
    let mut signs: Vec<Option<Sign>> = vec![None; m];
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let syntax = |msg: &str| EmbeddingError::Syntax {
            line: idx + 1,
            msg: msg.to_string(),
        };
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| syntax("expected `rotation v:` or `signature e:`"))?;
        let mut head = head.split_ascii_whitespace();
        let kind = head.next().unwrap_or("");
        let id: usize = head
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| syntax("missing or bad id"))?;
        if head.next().is_some() {
            return Err(syntax("trailing tokens before ':'"));
        }
        let toks: Vec<&str> = body.split_ascii_whitespace().collect();
        match kind {
            "rotation" => {
                if toks.len() != 3 {
                    return Err(syntax("a rotation lists exactly three darts"));
                }
                let mut darts = [Dart(0); 3];
                for (slot, tok) in darts.iter_mut().zip(&toks) {
                    *slot = parse_dart(tok).ok_or_else(|| syntax("bad dart, expected edge.end"))?;
                }
                if id >= n {
                    return Err(EmbeddingError::Mismatch(format!("no vertex {id}")));
                }
                if rotations[id].replace(darts).is_some() {
                    return Err(EmbeddingError::Mismatch(format!(
                        "vertex {id} has two rotation lines"
                    )));
                }
            }
            "signature" => {
                let sign = match toks.as_slice() {
                    ["+1"] | ["1"] => Sign::Plus,
                    ["-1"] => Sign::Minus,
                    _ => return Err(syntax("a signature is +1 or -1")),
                };
                if id >= m {
                    return Err(EmbeddingError::Mismatch(format!("no edge {id}")));
                }
                if signs[id].replace(sign).is_some() {
                    return Err(EmbeddingError::Mismatch(format!(
                        "edge {id} has two signature lines"
                    )));
                }
            }
            _ => return Err(syntax("expected `rotation` or `signature`")),
        }
    }
    let rotations = rotations
        .into_iter()
        .enumerate()
        .map(|(v, r)| {
            r.ok_or_else(|| EmbeddingError::Mismatch(format!("no rotation for vertex {v}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    for r in &rotations {
        if r.iter().any(|d| d.edge() >= m) {
            return Err(EmbeddingError::Mismatch(
                "dart refers to a missing edge".into(),
            ));
        }
    }
    let signs = signs
        .into_iter()
        .enumerate()
        .map(|(e, s)| {
            s.ok_or_else(|| EmbeddingError::Mismatch(format!("no signature for edge {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Embedding::new(g, &rotations, signs)
}
