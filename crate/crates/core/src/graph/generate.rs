use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::connectivity::find_bridges;
use super::{CubicGraph, GraphError, Vertex};

fn build(n: usize, edges: Vec<(Vertex, Vertex)>) -> CubicGraph {
    CubicGraph::new(n, edges).expect("fixed construction is cubic")
}

/// Outer 5-cycle on 0..5, inner pentagram on 5..10, spokes i -- i+5.
/// Edge ids: outer 0..5, spokes 5..10, inner 10..15.
pub fn generate_petersen() -> CubicGraph {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        edges.push((i, i + 5));
    }
    for i in 0..5 {
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    build(10, edges)
}

pub fn generate_k4() -> CubicGraph {
    build(4, vec![(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)])
}

/// Two vertices joined by three parallel edges.
pub fn generate_theta() -> CubicGraph {
    build(2, vec![(0, 1), (0, 1), (0, 1)])
}

/// C3 x K2: triangles 0-1-2 and 3-4-5, rungs i -- i+3 (edge ids 6, 7, 8).
pub fn generate_prism() -> CubicGraph {
    build(
        6,
        vec![
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (0, 3),
            (1, 4),
            (2, 5),
        ],
    )
}

pub fn generate_k33() -> CubicGraph {
    let mut edges = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            edges.push((a, b));
        }
    }
    build(6, edges)
}

/// Möbius ladder on `n` vertices (`n` even, at least 4): an `n`-cycle plus
/// the `n / 2` long diagonals. `n = 8` is the Wagner graph.
pub fn generate_mobius_ladder(n: usize) -> Result<CubicGraph, GraphError> {
    if n < 4 || n % 2 == 1 {
        return Err(GraphError::GenerationFailure(format!(
            "Möbius ladder needs an even n >= 4, got {n}"
        )));
    }
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.extend((0..n / 2).map(|i| (i, i + n / 2)));
    CubicGraph::new(n, edges)
}

/// Two copies of K4 with one edge subdivided, the subdivision vertices
/// joined by a bridge (edge id 14).
pub fn generate_dumbbell() -> CubicGraph {
    let mut edges = Vec::new();
    for base in [0, 5] {
        // K4 on base..base+4 minus (base, base+1), subdivided by base+4
        edges.extend([
            (base, base + 2),
            (base, base + 3),
            (base + 1, base + 2),
            (base + 1, base + 3),
            (base + 2, base + 3),
            (base, base + 4),
            (base + 4, base + 1),
        ]);
    }
    edges.push((4, 9));
    build(10, edges)
}

/// Inflates K_n into a cubic graph by replacing each vertex with a circuit of
/// length n - 1. Vertex `i * (n - 1) + j` is slot `j` of the circuit for K_n
/// vertex `i`; slot `j` carries the K_n edge to the `j`-th neighbour in a
/// seed-shuffled copy of the ascending neighbour list. Circuit edges come
/// first in the edge list, followed by the K_n edges in lexicographic order.
pub fn generate_gn(n: usize, seed: u64) -> Result<CubicGraph, GraphError> {
    if n < 4 {
        return Err(GraphError::DegenerateExpansion(n));
    }
    let len = n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut slot_of = vec![vec![usize::MAX; n]; n];
    for (i, slots) in slot_of.iter_mut().enumerate() {
        let mut order: Vec<usize> = (0..n).filter(|&l| l != i).collect();
        order.shuffle(&mut rng);
        for (j, l) in order.into_iter().enumerate() {
            slots[l] = j;
        }
    }
    let mut edges = Vec::with_capacity(n * len * 3 / 2);
    for i in 0..n {
        for j in 0..len {
            edges.push((i * len + j, i * len + (j + 1) % len));
        }
    }
    for i in 0..n {
        for l in i + 1..n {
            edges.push((i * len + slot_of[i][l], l * len + slot_of[l][i]));
        }
    }
    CubicGraph::new(n * len, edges)
}

const MAX_ATTEMPTS: usize = 10_000;

/// Random connected, bridgeless, simple cubic graph from the pairing model
/// with rejection. Deterministic in `seed`.
pub fn generate_random_cubic_bridgeless(n: usize, seed: u64) -> Result<CubicGraph, GraphError> {
    if n % 2 == 1 {
        return Err(GraphError::GenerationFailure(format!(
            "no cubic graph has an odd number of vertices ({n})"
        )));
    }
    if n < 4 {
        return Err(GraphError::GenerationFailure(format!(
            "no simple cubic graph on {n} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<Vertex> = (0..3 * n).map(|p| p / 3).collect();
    let mut seen = std::collections::HashSet::with_capacity(3 * n);
    'attempt: for _ in 0..MAX_ATTEMPTS {
        points.shuffle(&mut rng);
        seen.clear();
        let mut edges = Vec::with_capacity(3 * n / 2);
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !seen.insert((u, v)) {
                continue 'attempt;
            }
            edges.push((u, v));
        }
        edges.sort_unstable();
        let g = match CubicGraph::new(n, edges) {
            Ok(g) => g,
            Err(GraphError::Disconnected) => continue,
            Err(e) => return Err(e),
        };
        if find_bridges(&g).is_empty() {
            return Ok(g);
        }
    }
    Err(GraphError::GenerationFailure(format!(
        "no bridgeless simple cubic graph on {n} vertices after {MAX_ATTEMPTS} attempts"
    )))
}
