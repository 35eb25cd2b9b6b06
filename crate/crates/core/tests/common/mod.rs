#![allow(dead_code)]

use std::collections::BTreeSet;

use cdc_embed::embedding::trace_facial_walks;
use cdc_embed::graph::*;
use cdc_embed::matching::perfect_matching;
use cdc_embed::partial_cdc::{
    circuits_of, extend_to_embedding, validate_partial_cdc, ClosedWalk, PartialCdc,
};
use cdc_embed::postman::{
    partial_cdc_from_matching_postman, postman_from_tree, spanning_tree, SpanningTree,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn random_graph(n: usize, seed: u64) -> CubicGraph {
    generate_random_cubic_bridgeless(n, seed).unwrap()
}

/// Uniformly shuffled Kruskal tree.
pub fn random_tree(g: &CubicGraph, rng: &mut ChaCha8Rng) -> SpanningTree {
    let mut order: Vec<EdgeId> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut comp: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(c: &mut [usize], mut x: usize) -> usize {
        while c[x] != x {
            c[x] = c[c[x]];
            x = c[x];
        }
        x
    }
    let mut chosen = BTreeSet::new();
    for e in order {
        let (u, v) = g.endpoints(e);
        let (a, b) = (find(&mut comp, u), find(&mut comp, v));
        if a != b {
            comp[a] = b;
            chosen.insert(e);
        }
    }
    spanning_tree(g, &chosen).unwrap()
}

fn degrees_even(g: &CubicGraph, set: &[bool]) -> bool {
    (0..g.vertex_count()).all(|v| g.neighbors(v).filter(|&(e, _)| set[e]).count() % 2 == 0)
}

/// Postman-set properties for one random (graph, tree) pair.
pub fn postman_property(n: usize, seed: u64) -> Result<(), String> {
    let g = random_graph(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = random_tree(&g, &mut rng);
    let j = postman_from_tree(&g, &t);
    if !j.0.is_subset(&t.edges) {
        return Err("J leaves the tree".into());
    }
    if !j.has_odd_incidence(&g) {
        return Err("J has an even vertex".into());
    }
    let m = perfect_matching(&g).map_err(|e| e.to_string())?;
    let in_j: Vec<bool> = (0..g.edge_count()).map(|e| j.0.contains(&e)).collect();
    let rest: Vec<bool> = in_j.iter().map(|b| !b).collect();
    let sym: Vec<bool> = (0..g.edge_count())
        .map(|e| m.contains(e) != in_j[e])
        .collect();
    if !degrees_even(&g, &rest) || !degrees_even(&g, &sym) {
        return Err("G − J or M △ J has an odd vertex".into());
    }
    partial_cdc_from_matching_postman(&g, &m, &j).map_err(|e| e.to_string())?;
    Ok(())
}

/// Random element of the cycle space: a random sum of fundamental cycles.
fn random_cycle(g: &CubicGraph, t: &SpanningTree, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut depth = vec![0usize; g.vertex_count()];
    let mut order: Vec<Vertex> = (0..g.vertex_count()).collect();
    order.sort_by_key(|&v| {
        let mut d = 0;
        let mut x = v;
        while let Some((p, _)) = t.parent[x] {
            x = p;
            d += 1;
        }
        d
    });
    for &v in &order {
        if let Some((p, _)) = t.parent[v] {
            depth[v] = depth[p] + 1;
        }
    }
    let mut set = vec![false; g.edge_count()];
    for e in 0..g.edge_count() {
        if t.edges.contains(&e) || !rng.gen_bool(0.5) {
            continue;
        }
        set[e] ^= true;
        let (mut u, mut v) = g.endpoints(e);
        while u != v {
            if depth[u] < depth[v] {
                std::mem::swap(&mut u, &mut v);
            }
            let (p, pe) = t.parent[u].unwrap();
            set[pe] ^= true;
            u = p;
        }
    }
    set
}

/// A partial CDC built either the way a pipeline does or from random
/// circuits kept only while the validator accepts them.
pub fn random_partial_cdc(n: usize, seed: u64) -> (CubicGraph, PartialCdc) {
    let g = random_graph(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let m = perfect_matching(&g).unwrap();
    match seed % 3 {
        0 => {
            let walks = circuits_of(
                &g,
                &m.indicator(g.edge_count())
                    .iter()
                    .map(|b| !b)
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            let p = validate_partial_cdc(&g, walks).unwrap();
            (g, p)
        }
        1 => {
            let t = random_tree(&g, &mut rng);
            let j = postman_from_tree(&g, &t);
            let p = partial_cdc_from_matching_postman(&g, &m, &j).unwrap();
            (g, p)
        }
        _ => {
            let t = random_tree(&g, &mut rng);
            let mut kept: Vec<ClosedWalk> = Vec::new();
            for _ in 0..rng.gen_range(1..=4) {
                let c = random_cycle(&g, &t, &mut rng);
                for w in circuits_of(&g, &c).unwrap() {
                    let mut trial = kept.clone();
                    trial.push(w);
                    if validate_partial_cdc(&g, trial.clone()).is_ok() {
                        kept = trial;
                    }
                }
            }
            let p = validate_partial_cdc(&g, kept).unwrap();
            (g, p)
        }
    }
}

/// Every walk of the cover is a face of its extension.
pub fn extension_property(g: &CubicGraph, p: &PartialCdc) -> Result<(), String> {
    let emb = extend_to_embedding(g, p).map_err(|e| e.to_string())?;
    let faces: BTreeSet<Vec<(Vertex, EdgeId)>> = trace_facial_walks(g, &emb)
        .iter()
        .map(|f| f.canonical_key())
        .collect();
    match p.walks.iter().find(|w| !faces.contains(&w.canonical_key())) {
        Some(w) => Err(format!("walk {w} is not facial")),
        None => Ok(()),
    }
}
