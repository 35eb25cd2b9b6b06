mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cdc_embed::embedding::{trace_facial_walks, verify_fdc, DEFAULT_ENUMERATION_GUARD};
use cdc_embed::graph::*;
use cdc_embed::matching::{min_weight_perfect_matching, perfect_matching, Matching};
use cdc_embed::oracle::{
    check_edmonds_point, check_petersen_nonextension, enumerate_perfect_matchings,
    min_singular_exhaustive,
};
use cdc_embed::partial_cdc::{circuits_of, extend_to_embedding, validate_partial_cdc};
use cdc_embed::pipelines::{embed_half_n, embed_over_2k, embed_tenth_n, PipelineResult};
use cdc_embed::tree_packing::{pipeline_cyclically_2k, pipeline_cyclically_2k_with_matching};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t < limit, "took {t:?}, limit {limit:?}");
    Ok(t)
}

fn graph(n: usize, edges: &[(usize, usize)]) -> CubicGraph {
    CubicGraph::new(n, edges.to_vec()).unwrap()
}

fn cube() -> CubicGraph {
    graph(
        8,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 4),
            (0, 4),
            (1, 5),
            (2, 6),
            (3, 7),
        ],
    )
}

fn pentagonal_prism() -> CubicGraph {
    let mut e: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
    e.extend((0..5).map(|i| (5 + i, 5 + (i + 1) % 5)));
    e.extend((0..5).map(|i| (i, i + 5)));
    graph(10, &e)
}

fn small_corpus() -> Vec<(&'static str, CubicGraph)> {
    vec![
        ("K4", generate_k4()),
        ("theta", generate_theta()),
        ("prism", generate_prism()),
        ("K3,3", generate_k33()),
        ("cube", cube()),
        ("Möbius 8", generate_mobius_ladder(8).unwrap()),
        ("Möbius 10", generate_mobius_ladder(10).unwrap()),
        ("pentagonal prism", pentagonal_prism()),
        ("Petersen", generate_petersen()),
    ]
}

fn check_result(g: &CubicGraph, r: &PipelineResult) -> Result<(), String> {
    verify_fdc(g, &r.report.faces).map_err(|e| e.to_string())?;
    let total: usize = r.report.faces.iter().map(|f| f.len()).sum();
    ensure!(total == 2 * g.edge_count(), "face lengths sum to {total}");
    ensure!(
        r.singular_count() <= r.bound(),
        "{} singular > {}",
        r.singular_count(),
        r.bound()
    );
    ensure!(
        r.report.singular.is_disjoint(&r.covered_edges),
        "a covered edge is singular"
    );
    Ok(())
}

fn c1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for i in 0..50u64 {
        let n = 10 * (1 + i as usize % 20);
        let g = generate_random_cubic_bridgeless(n, i).map_err(|e| e.to_string())?;
        let r = embed_half_n(&g).map_err(|e| format!("n={n}: {e}"))?;
        check_result(&g, &r)?;
        let m = &r.witness.matchings[0].1;
        ensure!(
            r.report.singular.iter().all(|&e| m.contains(e)),
            "singular edge outside M"
        );
        ensure!(
            2 * r.singular_count() <= n,
            "n={n}: {} singular",
            r.singular_count()
        );
        worst = worst.max(r.singular_count() as f64 / n as f64);
    }
    let t = within(Duration::from_secs(5), start)?;
    Ok(format!("50 graphs, max singular/n = {worst:.3}, {t:.2?}"))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let mut graphs = vec![
        ("K4", generate_k4()),
        ("prism", generate_prism()),
        ("Petersen", generate_petersen()),
        ("G4", generate_gn(4, 0).unwrap()),
        ("G5", generate_gn(5, 0).unwrap()),
    ];
    let mut seed = 0;
    while graphs.len() < 25 {
        let n = 10 + 4 * (seed as usize % 20);
        let g = generate_random_cubic_bridgeless(n, 1000 + seed).map_err(|e| e.to_string())?;
        seed += 1;
        if is_three_edge_connected(&g) {
            graphs.push(("random", g));
        }
    }
    let mut counts = Vec::new();
    for (name, g) in &graphs {
        let n = g.vertex_count();
        let r = embed_tenth_n(g).map_err(|e| format!("{name}: {e}"))?;
        check_result(g, &r)?;
        ensure!(
            10 * r.singular_count() <= n,
            "{name}: {} singular",
            r.singular_count()
        );
        let m1 = r.witness.matchings[0].1.edges();
        let m2 = r.witness.matchings[1].1.edges();
        let union = m1.union(m2).count();
        ensure!(10 * union >= 9 * n, "{name}: |M1 ∪ M2| = {union}");
        ensure!(
            r.report
                .singular
                .iter()
                .all(|e| m1.contains(e) && m2.contains(e)),
            "{name}: singular edge outside M1 ∩ M2"
        );
        let limit = match *name {
            "Petersen" => 1,
            "K4" => 0,
            "G5" => 2,
            _ => usize::MAX,
        };
        ensure!(
            r.singular_count() <= limit,
            "{name}: {} singular",
            r.singular_count()
        );
        if *name != "random" {
            counts.push(format!("{name}={}", r.singular_count()));
        }
    }
    let t = within(Duration::from_secs(10), start)?;
    Ok(format!("25 graphs, {}, {t:.2?}", counts.join(" ")))
}

fn c3() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    for (name, g, k) in [
        ("Petersen", generate_petersen(), 5),
        ("prism", generate_prism(), 3),
    ] {
        let r = embed_over_2k(&g, Some(k)).map_err(|e| format!("{name}: {e}"))?;
        check_result(&g, &r)?;
        ensure!(
            r.singular_count() <= 1,
            "{name}: {} singular",
            r.singular_count()
        );
        let f = r.witness.fractional.as_ref().ok_or("no fractional point")?;
        check_edmonds_point(&g, f).map_err(|e| format!("{name}: {e}"))?;
        out.push(format!("{name}={}", r.singular_count()));
    }
    let auto = embed_over_2k(&generate_petersen(), None).map_err(|e| e.to_string())?;
    ensure!(auto.witness.k == Some(5), "auto k = {:?}", auto.witness.k);
    let t = within(Duration::from_secs(5), start)?;
    Ok(format!("{}, Edmonds points ok, {t:.2?}", out.join(" ")))
}

fn c4() -> Outcome {
    let start = Instant::now();
    let g = generate_petersen();
    let r = pipeline_cyclically_2k(&g, 2).map_err(|e| e.to_string())?;
    check_result(&g, &r)?;
    ensure!(r.singular_count() <= 2, "{} singular", r.singular_count());
    let spokes = Matching::new(&g, (5..10).collect()).map_err(|e| e.to_string())?;
    let s = pipeline_cyclically_2k_with_matching(&g, 2, spokes).map_err(|e| e.to_string())?;
    check_result(&g, &s)?;
    let w = &s.witness;
    ensure!(
        w.h_vertices == Some(2) && w.h_edges == Some(5),
        "H has {:?} vertices, {:?} edges",
        w.h_vertices,
        w.h_edges
    );
    let smallest = w.smallest_tree.as_ref().map(|(_, t)| t.len());
    ensure!(
        smallest == Some(1),
        "smallest packed tree has {smallest:?} edges"
    );
    ensure!(
        s.singular_count() <= 1,
        "{} singular with the spoke matching",
        s.singular_count()
    );
    let t = within(Duration::from_secs(2), start)?;
    Ok(format!(
        "k=2: {} singular; spokes: H = 2 vertices/5 edges, trees {:?}, {} singular, {t:.2?}",
        r.singular_count(),
        w.packed_tree_sizes,
        s.singular_count()
    ))
}

fn c5() -> Outcome {
    let start = Instant::now();
    let r = check_petersen_nonextension();
    ensure!(r.extensions > 0, "no extensions enumerated");
    ensure!(r.min_singular >= 1, "an extension has no singular edge");
    ensure!(
        r.other_faces_divisible_by_4,
        "a non-circuit face has length not divisible by 4"
    );
    ensure!(r.no_4_or_12_circuit, "Petersen has a 4- or 12-circuit");
    let t = within(Duration::from_secs(60), start)?;
    Ok(format!(
        "{} extensions, exhaustive minimum {}, {t:.2?}",
        r.extensions, r.min_singular
    ))
}

fn c6() -> Outcome {
    let start = Instant::now();
    let mut out = Vec::new();
    for (name, g) in small_corpus() {
        let (min, _) =
            min_singular_exhaustive(&g, DEFAULT_ENUMERATION_GUARD).map_err(|e| e.to_string())?;
        let mut runs: Vec<PipelineResult> = Vec::new();
        runs.extend(embed_half_n(&g));
        runs.extend(embed_tenth_n(&g));
        runs.extend(embed_over_2k(&g, None));
        for k in 1..=2 {
            runs.extend(pipeline_cyclically_2k(&g, k));
        }
        ensure!(!runs.is_empty(), "{name}: no pipeline applied");
        for r in &runs {
            check_result(&g, r)?;
            ensure!(
                r.singular_count() >= min,
                "{name}: {} {} < oracle {min}",
                r.bound_name,
                r.singular_count()
            );
        }
        match name {
            "K4" | "Petersen" => ensure!(min == 0, "{name}: oracle minimum {min}"),
            _ => {}
        }
        out.push(format!("{name}:{min}/{}", runs.len()));
    }
    let t = within(Duration::from_secs(300), start)?;
    Ok(format!("minimum/pipelines {}, {t:.2?}", out.join(" ")))
}

fn c7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut graphs = small_corpus();
    graphs.push(("G4", generate_gn(4, 0).unwrap()));
    for seed in 0..6 {
        graphs.push((
            "random 12",
            generate_random_cubic_bridgeless(12, seed).unwrap(),
        ));
    }
    let mut trials = 0;
    for (name, g) in &graphs {
        let pms = enumerate_perfect_matchings(g).map_err(|e| e.to_string())?;
        for _ in 0..20 {
            let w: Vec<u64> = (0..g.edge_count()).map(|_| rng.gen_range(0..10)).collect();
            let best = pms.iter().map(|m| m.weight(&w)).min().unwrap();
            let m = min_weight_perfect_matching(g, &w).map_err(|e| e.to_string())?;
            ensure!(
                m.weight(&w) == best,
                "{name}: blossom {} vs brute force {best}",
                m.weight(&w)
            );
            ensure!(
                pms.contains(&m),
                "{name}: blossom output not a perfect matching"
            );
            trials += 1;
        }
    }
    let pms = enumerate_perfect_matchings(&generate_petersen()).unwrap();
    ensure!(
        pms.len() == 6,
        "Petersen has {} perfect matchings",
        pms.len()
    );
    for (i, a) in pms.iter().enumerate() {
        for b in &pms[i + 1..] {
            ensure!(
                a.intersection_size(b) == 1,
                "two Petersen matchings share {} edges",
                a.intersection_size(b)
            );
        }
    }
    Ok(format!(
        "{trials} weighted instances on {} graphs agree; Petersen: 6 PMs, pairwise ∩ = 1",
        graphs.len()
    ))
}

fn sizes() -> impl Strategy<Value = (usize, u64)> {
    ((2usize..=30).prop_map(|h| 2 * h), any::<u64>())
}

fn run_property(f: impl Fn(usize, u64) -> Result<(), String>) -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&sizes(), |(n, seed)| {
            f(n, seed).map_err(TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok("1000 random cases".into())
}

fn c8() -> Outcome {
    run_property(common::postman_property)
}

fn c9() -> Outcome {
    run_property(|n, seed| {
        let (g, p) = common::random_partial_cdc(n, seed);
        common::extension_property(&g, &p)
    })
}

fn median(mut v: Vec<Duration>) -> Duration {
    v.sort();
    v[v.len() / 2]
}

fn extend_and_trace(n: usize) -> Result<Duration, String> {
    let g = generate_random_cubic_bridgeless(n, 10).map_err(|e| e.to_string())?;
    let m = perfect_matching(&g).map_err(|e| e.to_string())?;
    let rest: Vec<bool> = (0..g.edge_count()).map(|e| !m.contains(e)).collect();
    let p = validate_partial_cdc(&g, circuits_of(&g, &rest).unwrap()).map_err(|e| e.to_string())?;
    let mut times = Vec::new();
    for _ in 0..5 {
        let t = Instant::now();
        let emb = extend_to_embedding(&g, &p).map_err(|e| e.to_string())?;
        let faces = trace_facial_walks(&g, &emb);
        std::hint::black_box(faces);
        times.push(t.elapsed());
    }
    Ok(median(times))
}

fn c10() -> Outcome {
    let n = 10_000;
    let g = generate_random_cubic_bridgeless(n, 10).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let r = embed_half_n(&g).map_err(|e| e.to_string())?;
    let total = start.elapsed();
    check_result(&g, &r)?;
    ensure!(total < Duration::from_secs(10), "n = 10^4 took {total:?}");
    let small = extend_and_trace(n)?;
    let large = extend_and_trace(2 * n)?;
    let ratio = large.as_secs_f64() / small.as_secs_f64();
    if ratio > 2.0 {
        return Err(format!(
            "doubling n: {small:?} -> {large:?}, ratio {ratio:.2}"
        ));
    }
    Ok(format!(
        "n=10^4 end-to-end {total:.2?}; extend+trace median {small:.2?} -> {large:.2?} at 2n (ratio {ratio:.2})"
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("half-n bound on 50 random graphs", c1),
        ("tenth-n bound on 3-edge-connected graphs", c2),
        ("over-2k bound and Edmonds points", c3),
        ("cyclic-2k pipeline on Petersen", c4),
        ("Petersen circuits do not extend to a CDC", c5),
        ("pipelines never beat the exhaustive minimum", c6),
        ("blossom agrees with enumeration", c7),
        ("postman set properties", c8),
        ("extension keeps every walk facial", c9),
        ("scale", c10),
    ];
    let mut failed = BTreeSet::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why}", i + 1);
                failed.insert(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
