//! Multigraphs with stable edge ids, and the cubic specialisation used by
//! every pipeline.
//!
//! Edges are identified by their position in the edge list. Each edge `e`
//! contributes two darts, `2e` (the half-edge at its first endpoint) and
//! `2e + 1` (at its second endpoint). Parallel edges are distinct edges.

mod connectivity;
mod generate;
mod io;

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use thiserror::Error;

pub use connectivity::{
    cyclic_edge_connectivity, cyclic_edge_connectivity_with_guard, edge_connectivity_at_most_two,
    enumerate_3_edge_cuts, find_bridges, girth, is_three_edge_connected, CyclicConnectivity,
    ThreeEdgeCut, DEFAULT_CYCLIC_GUARD,
};
pub use generate::{
    generate_dumbbell, generate_gn, generate_k33, generate_k4, generate_mobius_ladder,
    generate_petersen, generate_prism, generate_random_cubic_bridgeless, generate_theta,
};
pub use io::{parse_edge_list, parse_graph, parse_graph6, to_edge_list, to_graph6, GraphFormat};

pub type Vertex = usize;
pub type EdgeId = usize;

/// A half-edge: edge id in the high bits, endpoint index (0 or 1) in the low bit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dart(pub usize);

impl Dart {
    pub fn new(edge: EdgeId, end: usize) -> Self {
        debug_assert!(end < 2);
        Dart(2 * edge + end)
    }

    #[inline]
    pub fn edge(self) -> EdgeId {
        self.0 >> 1
    }

    #[inline]
    pub fn end(self) -> usize {
        self.0 & 1
    }

    /// The other half of the same edge.
    #[inline]
    pub fn opposite(self) -> Dart {
        Dart(self.0 ^ 1)
    }
}

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.edge(), self.end())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("vertex {vertex} has degree {degree}, expected 3")]
    NotCubic { vertex: Vertex, degree: usize },
    #[error("edge {0} is a loop")]
    LoopEdge(EdgeId),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("G_n expansion with n = {0} would create digons (need n >= 4)")]
    DegenerateExpansion(usize),
    #[error("random generation failed: {0}")]
    GenerationFailure(String),
    #[error("exhaustive search limited to n <= {guard}, got n = {n}")]
    TooLarge { n: usize, guard: usize },
    #[error("graph is not 3-edge-connected")]
    NotThreeEdgeConnected,
}

/// Undirected multigraph without loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    n: usize,
    edges: Vec<[u32; 2]>,
    /// Darts grouped by vertex: those at `v` are `darts[start[v]..start[v + 1]]`.
    darts: Vec<Dart>,
    start: Vec<u32>,
}

impl Multigraph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        if n >= u32::MAX as usize || 2 * edges.len() >= u32::MAX as usize {
            return Err(GraphError::MalformedInput(format!(
                "graph too large: {n} vertices"
            )));
        }
        let mut degree = vec![0u32; n + 1];
        let mut stored = Vec::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::LoopEdge(id));
            }
            degree[u + 1] += 1;
            degree[v + 1] += 1;
            stored.push([u as u32, v as u32]);
        }
        let mut start = degree;
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill: Vec<u32> = start[..n].to_vec();
        let mut darts = vec![Dart(0); 2 * stored.len()];
        for (id, &[u, v]) in stored.iter().enumerate() {
            for (end, w) in [(0, u), (1, v)] {
                darts[fill[w as usize] as usize] = Dart::new(id, end);
                fill[w as usize] += 1;
            }
        }
        Ok(Multigraph {
            n,
            edges: stored,
            darts,
            start,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        let [u, v] = self.edges[e];
        (u as Vertex, v as Vertex)
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, Vertex, Vertex)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .map(|(id, &[u, v])| (id, u as Vertex, v as Vertex))
    }

    /// Vertex at which the dart sits.
    #[inline]
    pub fn dart_vertex(&self, d: Dart) -> Vertex {
        self.edges[d.edge()][d.end()] as Vertex
    }

    /// Endpoint of `e` other than `v`.
    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let [a, b] = self.edges[e].map(|x| x as Vertex);
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// The dart of `e` sitting at `v`.
    pub fn dart_at(&self, e: EdgeId, v: Vertex) -> Option<Dart> {
        let [a, b] = self.edges[e].map(|x| x as Vertex);
        if a == v {
            Some(Dart::new(e, 0))
        } else if b == v {
            Some(Dart::new(e, 1))
        } else {
            None
        }
    }

    pub fn darts_at(&self, v: Vertex) -> &[Dart] {
        &self.darts[self.start[v] as usize..self.start[v + 1] as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        (self.start[v + 1] - self.start[v]) as usize
    }

    /// Neighbours of `v` as `(edge, other endpoint)` in incidence order.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = (EdgeId, Vertex)> + '_ {
        self.darts_at(v)
            .iter()
            .map(move |d| (d.edge(), self.edges[d.edge()][1 - d.end()] as Vertex))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for (_, w) in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.n
    }

    /// Edges with exactly one endpoint in `side`.
    pub fn cut(&self, side: &BTreeSet<Vertex>) -> EdgeCut {
        let cut_edges = self
            .edges()
            .filter(|&(_, u, v)| side.contains(&u) != side.contains(&v))
            .map(|(e, _, _)| e)
            .collect();
        EdgeCut {
            side: side.clone(),
            cut_edges,
        }
    }
}

/// Connected multigraph in which every vertex has degree exactly three.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicGraph(Multigraph);

impl CubicGraph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        Self::from_multigraph(Multigraph::new(n, edges)?)
    }

    pub fn from_multigraph(g: Multigraph) -> Result<Self, GraphError> {
        for v in 0..g.vertex_count() {
            if g.degree(v) != 3 {
                return Err(GraphError::NotCubic {
                    vertex: v,
                    degree: g.degree(v),
                });
            }
        }
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(CubicGraph(g))
    }

    pub fn as_multigraph(&self) -> &Multigraph {
        &self.0
    }

    /// The three darts at `v`.
    pub fn darts3(&self, v: Vertex) -> [Dart; 3] {
        let d = self.0.darts_at(v);
        [d[0], d[1], d[2]]
    }
}

impl Deref for CubicGraph {
    type Target = Multigraph;

    fn deref(&self) -> &Multigraph {
        &self.0
    }
}

/// δ(U): the edges leaving a vertex set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct EdgeCut {
    pub side: BTreeSet<Vertex>,
    pub cut_edges: BTreeSet<EdgeId>,
}

impl EdgeCut {
    pub fn size(&self) -> usize {
        self.cut_edges.len()
    }
}
