//! End-to-end acceptance checks. Each test prints one PASS/FAIL line and
//! asserts the same outcome. Oracles here are written independently of the
//! library's own checkers.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use advlocal::advice::{measure_sparsity, AdviceKind, ComposableParams, Schema};
use advlocal::bits::{frame_decode, frame_encode, runlength_decode, runlength_encode, Bits};
use advlocal::coloring::three::ThreeConsts;
use advlocal::coloring::{delta_coloring_alpha, delta_schema, linial_target, three_coloring_schema, ColoringConstants};
use advlocal::experiment::{self, SchemaParams};
use advlocal::gen::{generate, generate_graph, GeneratorKind};
use advlocal::lcl::LclProblem;
use advlocal::onebit::to_one_bit;
use advlocal::orientation::{
    delta_edge_coloring_alpha, delta_edge_coloring_schema, splitting_schema, EdgeSubsetCodec, HandSplitting,
    OrientationConfig, OrientationSchema,
};
use advlocal::search::{self, SearchStats, EXHAUSTIVE_LIMIT};
use advlocal::solution::{EdgeColoring, Labeling, Orientation, Solution};
use advlocal::subexp::{cycle_ball, grid_ball, ClusterConstants, SubexpConfig, SubexpSchema};
use advlocal::Graph;

fn verdict(n: usize, name: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let ok = ok && elapsed <= limit;
    println!(
        "criterion {n} ({name}): {} [{:.1}s of {}s] {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(ok, "criterion {n} failed: {detail}");
}

// ---- oracles ----

fn edge_key(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// |in − out| ≤ 1 everywhere, 0 at even degree, each edge oriented once.
fn balanced(g: &Graph, o: &Orientation) -> Result<(), String> {
    let arcs = o.arcs(g);
    let mut seen = HashSet::new();
    let mut outd = vec![0i64; g.n()];
    let mut ind = vec![0i64; g.n()];
    for &(t, h) in &arcs {
        if !g.has_edge(t, h) || !seen.insert(edge_key(t, h)) {
            return Err(format!("bad arc {t}->{h}"));
        }
        outd[t] += 1;
        ind[h] += 1;
    }
    if seen.len() != g.m() {
        return Err(format!("{} of {} edges oriented", seen.len(), g.m()));
    }
    for v in 0..g.n() {
        let d = (outd[v] - ind[v]).abs();
        if d > 1 || (g.degree(v) % 2 == 0 && d != 0) {
            return Err(format!("node {} has in {} out {}", g.id(v), ind[v], outd[v]));
        }
    }
    Ok(())
}

/// Color of edge {u, v} as seen from both ends; None when they disagree.
fn edge_color(g: &Graph, e: &EdgeColoring, u: usize, v: usize) -> Option<u32> {
    let a = e.colors[u][g.neighbors(u).iter().position(|&w| w == v)?];
    let b = e.colors[v][g.neighbors(v).iter().position(|&w| w == u)?];
    (a == b).then_some(a)
}

fn splits(g: &Graph, e: &EdgeColoring) -> Result<(), String> {
    for v in 0..g.n() {
        let mut count = [0usize; 2];
        for &w in g.neighbors(v) {
            match edge_color(g, e, v, w) {
                Some(1) => count[0] += 1,
                Some(2) => count[1] += 1,
                other => return Err(format!("edge {}-{} has color {other:?}", g.id(v), g.id(w))),
            }
        }
        if count[0] != count[1] {
            return Err(format!("node {} has {count:?}", g.id(v)));
        }
    }
    Ok(())
}

/// Proper k-edge coloring whose classes are perfect matchings.
fn perfect_edge_coloring(g: &Graph, e: &EdgeColoring, k: u32) -> Result<(), String> {
    for v in 0..g.n() {
        let mut cols: Vec<u32> = Vec::new();
        for &w in g.neighbors(v) {
            let c = edge_color(g, e, v, w).ok_or("inconsistent ends")?;
            cols.push(c);
        }
        cols.sort_unstable();
        if cols != (1..=k).collect::<Vec<u32>>() {
            return Err(format!("node {} sees {cols:?}", g.id(v)));
        }
    }
    Ok(())
}

fn proper(g: &Graph, colors: &[u32], k: u32) -> Result<(), String> {
    for v in 0..g.n() {
        if colors[v] == 0 || colors[v] > k {
            return Err(format!("node {} has color {}", g.id(v), colors[v]));
        }
        for &w in g.neighbors(v) {
            if colors[w] == colors[v] {
                return Err(format!("edge {}-{} monochromatic", g.id(v), g.id(w)));
            }
        }
    }
    Ok(())
}

/// Node labels of a node-labeling LCL: index into the output alphabet.
fn node_labels(l: &Labeling) -> Vec<u8> {
    l.slots.iter().map(|s| s[0]).collect()
}

fn labeling_valid(g: &Graph, lcl: &str, l: &Labeling) -> Result<(), String> {
    let x = node_labels(l);
    match lcl {
        "3-coloring" => proper(g, &x.iter().map(|&c| c as u32 + 1).collect::<Vec<_>>(), 3),
        "mis" => {
            for v in 0..g.n() {
                let inside = x[v] == 0;
                let nb_in = g.neighbors(v).iter().filter(|&&w| x[w] == 0).count();
                if x[v] > 1 || (inside && nb_in > 0) || (!inside && nb_in == 0) {
                    return Err(format!("node {} violates MIS", g.id(v)));
                }
            }
            Ok(())
        }
        other => Err(format!("no oracle for {other}")),
    }
}

/// Planted-partition graphs with mixed degree parities, grids, paths, and
/// unions of Hamiltonian cycles.
fn orientation_instances() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200u64)
        .map(|i| {
            let n = rng.gen_range(12..=500);
            match i % 5 {
                0 | 1 => generate_graph(GeneratorKind::ThreeColorableRandom, &[n, rng.gen_range(1..=8)], i).unwrap(),
                2 => generate_graph(GeneratorKind::EvenDegreeRandom, &[n, 2 * rng.gen_range(1..=4)], i).unwrap(),
                3 => {
                    let w = rng.gen_range(2..=22);
                    generate_graph(GeneratorKind::Grid2d, &[w, rng.gen_range(2..=22)], i).unwrap()
                }
                _ => generate_graph(GeneratorKind::Path, &[n], i).unwrap(),
            }
        })
        .collect()
}

fn variable_orientation_params() -> ComposableParams {
    ComposableParams { c: 1.0, gamma: 2, alpha: 16 }
}

fn one_bit_params() -> ComposableParams {
    ComposableParams { c: 0.0007, gamma: 2, alpha: 24_000 }
}

#[test]
fn c1_almost_balanced_orientation() {
    let start = Instant::now();
    let graphs = orientation_instances();
    let mut bad = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let config = OrientationConfig { seed: i as u64, ..Default::default() };
        let s = OrientationSchema::new(variable_orientation_params(), config).unwrap();
        let res = s
            .encode(g, &[])
            .and_then(|a| s.decode(g, &a.bits, &[]))
            .map_err(|e| e.to_string())
            .and_then(|d| balanced(g, d.solution.as_orientation().unwrap()));
        if let Err(e) = res {
            bad.push(format!("variable #{i}: {e}"));
        }
        let inner = OrientationSchema::new(one_bit_params(), config).unwrap();
        let one = to_one_bit(Box::new(inner), one_bit_params()).unwrap();
        let res = one.encode(g, &[]).map_err(|e| e.to_string()).and_then(|a| {
            if a.bits.len() != g.n() || a.bits.iter().any(|b| b.len() != 1) {
                return Err("advice not exactly 1 bit per node".into());
            }
            let d = one.decode(g, &a.bits, &[]).map_err(|e| e.to_string())?;
            balanced(g, d.solution.as_orientation().unwrap())
        });
        if let Err(e) = res {
            bad.push(format!("1-bit #{i}: {e}"));
        }
    }
    let detail = format!("{} graphs, {} violations {:?}", graphs.len(), bad.len(), bad.iter().take(3).collect::<Vec<_>>());
    verdict(1, "almost-balanced orientation", bad.is_empty(), start.elapsed(), Duration::from_secs(60), &detail);
}

#[test]
fn c2_sparsity_of_the_one_bit_orientation() {
    let start = Instant::now();
    let g = generate_graph(GeneratorKind::Grid2d, &[40, 40], 7).unwrap();
    let ratio = |p: ComposableParams| -> Result<f64, String> {
        let inner = OrientationSchema::new(p, OrientationConfig::default()).map_err(|e| e.to_string())?;
        let s = to_one_bit(Box::new(inner), p).map_err(|e| e.to_string())?;
        let a = s.encode(&g, &[]).map_err(|e| e.to_string())?;
        let d = s.decode(&g, &a.bits, &[]).map_err(|e| e.to_string())?;
        balanced(&g, d.solution.as_orientation().unwrap())?;
        let ones = a.bits.iter().filter(|b| b.get(0) == Some(true)).count() as f64 / g.n() as f64;
        assert_eq!(measure_sparsity(&a).unwrap(), ones);
        Ok(ones)
    };
    let a = ratio(one_bit_params());
    let b = ratio(ComposableParams { c: 0.0006, gamma: 2, alpha: 28_000 });
    let ok = matches!((&a, &b), (Ok(x), Ok(y)) if *x <= 0.2 && y < x);
    verdict(
        2,
        "sparsity",
        ok,
        start.elapsed(),
        Duration::from_secs(30),
        &format!("ratio at (c 0.0007, α 24000) = {a:?}, at (c 0.0006, α 28000) = {b:?}"),
    );
}

#[test]
fn c3_edge_subset_decompression() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut bad = Vec::new();
    let codec = EdgeSubsetCodec::new(one_bit_params(), OrientationConfig::default()).unwrap();
    for i in 0..100u64 {
        let n = rng.gen_range(10..=300);
        let g = match i % 3 {
            0 => generate_graph(GeneratorKind::ThreeColorableRandom, &[n, rng.gen_range(2..=8)], i).unwrap(),
            1 => generate_graph(GeneratorKind::EvenDegreeRandom, &[n, 2 * rng.gen_range(1..=3)], i).unwrap(),
            _ => generate_graph(GeneratorKind::Grid2d, &[rng.gen_range(2..=15), rng.gen_range(2..=15)], i).unwrap(),
        };
        let density = rng.gen_range(0.0..=1.0);
        let x: Vec<(usize, usize)> = g.edges().into_iter().filter(|_| rng.gen_bool(density)).collect();
        let want: HashSet<(usize, usize)> = x.iter().map(|&(u, v)| edge_key(u, v)).collect();
        let res = codec.encode(&g, &x).and_then(|a| Ok((codec.decode(&g, &a.bits)?, a)));
        match res {
            Ok(((got, _), a)) => {
                let got: HashSet<(usize, usize)> = got.iter().map(|&(u, v)| edge_key(u, v)).collect();
                if got != want {
                    bad.push(format!("#{i}: subset differs"));
                }
                for v in 0..g.n() {
                    if a.bits[v].len() > g.degree(v).div_ceil(2) + 1 {
                        bad.push(format!("#{i}: node {} holds {} bits at degree {}", g.id(v), a.bits[v].len(), g.degree(v)));
                    }
                }
            }
            Err(e) => bad.push(format!("#{i}: {e}")),
        }
    }
    let detail = format!("100 pairs, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>());
    verdict(3, "edge-subset decompression", bad.is_empty(), start.elapsed(), Duration::from_secs(30), &detail);
}

#[test]
fn c4_splitting_and_edge_coloring() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut runs = 0;
    let split = splitting_schema(ComposableParams { c: 1.0, gamma: 3, alpha: 11_664 }, OrientationConfig::default()).unwrap();
    let mut instances: Vec<Graph> = Vec::new();
    for (i, n) in [4usize, 10, 30, 100, 250].into_iter().enumerate() {
        instances.push(generate_graph(GeneratorKind::Cycle, &[2 * n], i as u64).unwrap());
    }
    for (i, (side, d)) in [(8, 2), (20, 4), (40, 4), (16, 8), (60, 8), (100, 2)].into_iter().enumerate() {
        instances.push(generate_graph(GeneratorKind::BipartiteRegularPow2, &[side, d], 10 + i as u64).unwrap());
    }
    for (i, g) in instances.iter().enumerate() {
        runs += 1;
        let res = split
            .encode(g, &[])
            .and_then(|a| split.decode(g, &a.bits, &[]))
            .map_err(|e| e.to_string())
            .and_then(|d| splits(g, d.solution.as_edge_coloring().unwrap()));
        if let Err(e) = res {
            bad.push(format!("splitting #{i}: {e}"));
        }
    }
    for delta in [2usize, 4, 8] {
        let gamma = 1 + 2 * (delta - 1);
        let params = ComposableParams { c: 1.0, gamma, alpha: delta_edge_coloring_alpha(delta, 1.0, gamma) };
        let s = delta_edge_coloring_schema(delta, params, OrientationConfig::default()).unwrap();
        for (j, side) in [delta, 2 * delta, 25, 60].into_iter().enumerate() {
            runs += 1;
            let g = generate_graph(GeneratorKind::BipartiteRegularPow2, &[side, delta], 100 + j as u64).unwrap();
            let res = s
                .encode(&g, &[])
                .and_then(|a| s.decode(&g, &a.bits, &[]))
                .map_err(|e| e.to_string())
                .and_then(|d| perfect_edge_coloring(&g, d.solution.as_edge_coloring().unwrap(), delta as u32));
            if let Err(e) = res {
                bad.push(format!("Δ={delta} side {side}: {e}"));
            }
        }
    }
    let detail = format!("{runs} instances, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>());
    verdict(4, "splitting and Δ-edge coloring", bad.is_empty(), start.elapsed(), Duration::from_secs(60), &detail);
}

/// Smallest r whose constants pass the family checks and whose encoding
/// succeeds on `g`.
fn smallest_r(g: &Graph, lcl: &LclProblem, ball: fn(usize) -> f64) -> Option<(usize, SubexpSchema)> {
    let delta = g.max_degree();
    (1..=16).find_map(|r| {
        let consts = ClusterConstants::for_family(r, delta, ball).ok()?;
        consts.check_family().ok()?;
        let s = SubexpSchema::new(lcl.clone(), SubexpConfig::verified(consts)).ok()?;
        s.encode(g, &[]).ok()?;
        Some((r, s))
    })
}

#[test]
fn c5_lcl_on_subexponential_growth() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut lines = Vec::new();
    let families: [(&str, fn(usize) -> Vec<usize>, fn(usize) -> f64, GeneratorKind, [usize; 2]); 2] = [
        ("cycle", |n| vec![n], cycle_ball, GeneratorKind::Cycle, [500, 1000]),
        ("grid", |n| vec![n, n], grid_ball, GeneratorKind::Grid2d, [15, 30]),
    ];
    for lcl_name in ["3-coloring", "mis"] {
        let lcl = LclProblem::builtin(lcl_name).unwrap();
        for (family, shape, ball, kind, [small, large]) in families {
            let g_small = generate_graph(kind, &shape(small), 1).unwrap();
            let g_large = generate_graph(kind, &shape(large), 2).unwrap();
            let Some((r, s)) = smallest_r(&g_large, &lcl, ball) else {
                bad.push(format!("{lcl_name} on {family}: no feasible r up to 16"));
                continue;
            };
            let mut radii = Vec::new();
            for g in [&g_small, &g_large] {
                let res = s.encode(g, &[]).and_then(|a| Ok((s.decode(g, &a.bits, &[])?, a)));
                match res {
                    Ok((d, a)) => {
                        if a.kind != AdviceKind::UniformFixed || a.beta != 1 || a.bits.iter().any(|b| b.len() != 1) {
                            bad.push(format!("{lcl_name} on {family} n={}: advice not uniform 1-bit", g.n()));
                        }
                        if let Err(e) = labeling_valid(g, lcl_name, d.solution.as_labeling().unwrap()) {
                            bad.push(format!("{lcl_name} on {family} n={}: {e}", g.n()));
                        }
                        radii.push(d.locality.declared_radius);
                    }
                    Err(e) => bad.push(format!("{lcl_name} on {family} n={}: {e}", g.n())),
                }
            }
            if radii.len() == 2 && radii[0] != radii[1] {
                bad.push(format!("{lcl_name} on {family}: radius {} vs {}", radii[0], radii[1]));
            }
            lines.push(format!("{lcl_name}/{family} r={r}"));
        }
    }
    let detail = format!("{lines:?}; {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>());
    verdict(5, "LCL on sub-exponential growth", bad.is_empty(), start.elapsed(), Duration::from_secs(300), &detail);
}

fn planted_three_colorable() -> Vec<(Graph, Vec<u32>)> {
    (0..50usize)
        .map(|i| {
            let n = [100, 200, 300, 400][i % 4];
            let d = 3 + i % 3;
            let gen = generate(GeneratorKind::ThreeColorableRandom, &[n, d], i as u64, 1).unwrap();
            (gen.graph, gen.planted.unwrap())
        })
        .collect()
}

#[test]
fn c6_three_coloring() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let profile = ColoringConstants::three_coloring_desk();
    for (i, (g, planted)) in planted_three_colorable().into_iter().enumerate() {
        assert!(g.n() <= 400 && g.max_degree() <= 5);
        let s = three_coloring_schema(profile.clone(), i as u64, Some(planted));
        let enc = match s.encode_detailed(&g) {
            Ok(e) => e,
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if let Some(c) = enc.checks.iter().find(|c| !c.holds) {
            bad.push(format!("#{i}: {} = {} against {}", c.name, c.measured, c.bound));
        }
        match s.decode(&g, &enc.advice.bits, &[]) {
            Ok(d) => {
                let cols = d.solution.as_vertex_coloring().unwrap();
                if let Err(e) = proper(&g, cols, 3) {
                    bad.push(format!("#{i}: {e}"));
                }
                let ones = |c: &[u32]| (0..g.n()).filter(|&v| c[v] == 1).collect::<Vec<_>>();
                if ones(cols) != ones(&enc.greedy) {
                    bad.push(format!("#{i}: color-1 sets differ"));
                }
            }
            Err(e) => bad.push(format!("#{i}: {e}")),
        }
    }
    let detail = format!("50 graphs, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>());
    verdict(6, "3-coloring with 1 bit", bad.is_empty(), start.elapsed(), Duration::from_secs(300), &detail);
}

#[test]
fn c7_delta_coloring_pipeline() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let alpha = delta_coloring_alpha(1.0, 6);
    let s = delta_schema(ComposableParams { c: 1.0, gamma: 6, alpha }, ColoringConstants::default(), None).unwrap();
    let mut runs = 0;
    for d in [4usize, 6] {
        for (j, n) in [60usize, 150, 300].into_iter().enumerate() {
            runs += 1;
            let g = generate(GeneratorKind::DeltaColorableRandom, &[n, d], (10 * d + j) as u64, 1).unwrap().graph;
            let delta = g.max_degree() as u32;
            let res = s.encode(&g, &[]).and_then(|a| s.decode_all(&g, &a.bits)).map_err(|e| e.to_string()).and_then(
                |(sols, _)| {
                    let stage = |i: usize| sols[i].as_vertex_coloring().unwrap().to_vec();
                    proper(&g, &stage(0), linial_target(delta as usize)).map_err(|e| format!("initial: {e}"))?;
                    proper(&g, &stage(1), delta + 1).map_err(|e| format!("list: {e}"))?;
                    proper(&g, &stage(3), delta).map_err(|e| format!("final: {e}"))
                },
            );
            if let Err(e) = res {
                bad.push(format!("Δ={d} n={n}: {e}"));
            }
        }
    }
    let detail = format!("{runs} graphs, {} violations {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>());
    verdict(7, "Δ-coloring pipeline", bad.is_empty(), start.elapsed(), Duration::from_secs(300), &detail);
}

/// Frame layout written out by hand with string formatting.
fn frame_oracle(entries: &[(usize, Vec<bool>)], k: usize) -> String {
    let iw = (usize::BITS - k.leading_zeros()) as usize; // ⌈log₂(k+1)⌉
    let mut sorted = entries.to_vec();
    sorted.sort();
    let mut s = String::new();
    for (i, l) in sorted {
        let w = (usize::BITS - l.len().leading_zeros()) as usize;
        if iw > 0 {
            s += &format!("{i:0iw$b}");
        }
        s += &"1".repeat(w);
        s += "0";
        if w > 0 {
            s += &format!("{:0w$b}", l.len());
        }
        s.extend(l.iter().map(|&b| if b { '1' } else { '0' }));
    }
    s
}

fn bits_str(b: &Bits) -> String {
    b.0.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

fn frame_case() -> impl Strategy<Value = (usize, Vec<(usize, Vec<bool>)>)> {
    (1usize..40).prop_flat_map(|k| {
        let entry = proptest::collection::vec(any::<bool>(), 1..60);
        (Just(k), proptest::collection::btree_map(1..=k, entry, 0..k.min(8) + 1))
            .prop_map(|(k, m)| (k, m.into_iter().collect::<Vec<_>>()))
    })
}

#[test]
fn c8_codec_roundtrips_and_composition_equivalence() {
    let start = Instant::now();
    let mut bad: Vec<String> = Vec::new();
    let mut runner = TestRunner::new(Config { cases: 10_000, failure_persistence: None, ..Config::default() });
    let frames = runner.run(&frame_case(), |(k, entries)| {
        let bits: Vec<(usize, Bits)> = entries.iter().map(|(i, l)| (*i, Bits(l.clone()))).collect();
        let enc = frame_encode(&bits, k).unwrap();
        prop_assert_eq!(bits_str(&enc), frame_oracle(&entries, k));
        prop_assert_eq!(frame_decode(&enc, k).unwrap(), bits);
        Ok(())
    });
    if let Err(e) = frames {
        bad.push(format!("frame: {e}"));
    }
    let mut runner = TestRunner::new(Config { cases: 10_000, failure_persistence: None, ..Config::default() });
    let runs = runner.run(&(proptest::collection::vec(any::<bool>(), 0..80), 2usize..12), |(l, gamma)| {
        let enc = runlength_encode(&Bits(l.clone()), gamma).unwrap();
        let oracle: String =
            l.iter().map(|&b| "1".repeat(if b { gamma + 2 } else { gamma + 1 }) + "0").collect();
        prop_assert_eq!(bits_str(&enc), oracle);
        prop_assert_eq!(runlength_decode(&enc, gamma).unwrap().0, l);
        Ok(())
    });
    if let Err(e) = runs {
        bad.push(format!("run-length: {e}"));
    }

    let params = ComposableParams { c: 1.0, gamma: 3, alpha: 11_664 };
    let slot = ComposableParams { gamma: 6 * params.gamma, ..params };
    let mut mismatches = 0;
    for i in 0..20u64 {
        let config = OrientationConfig { seed: i, ..Default::default() };
        let composed = splitting_schema(params, config).unwrap();
        let hand = HandSplitting::new(params, slot, config).unwrap();
        let g = if i % 2 == 0 {
            generate_graph(GeneratorKind::Cycle, &[2 * (3 + 7 * i as usize)], i).unwrap()
        } else {
            let d = [2, 4, 8][(i as usize / 2) % 3];
            generate_graph(GeneratorKind::BipartiteRegularPow2, &[d + 3 * i as usize, d], i).unwrap()
        };
        let out = |s: &dyn Schema| -> Result<EdgeColoring, String> {
            let a = s.encode(&g, &[]).map_err(|e| e.to_string())?;
            let d = s.decode(&g, &a.bits, &[]).map_err(|e| e.to_string())?;
            Ok(d.solution.as_edge_coloring().unwrap().clone())
        };
        match (out(&composed), out(&hand)) {
            (Ok(a), Ok(b)) => {
                let differ = (0..g.n()).filter(|&v| a.colors[v] != b.colors[v]).count();
                if differ > 0 {
                    mismatches += differ;
                    bad.push(format!("instance {i}: {differ} nodes differ"));
                }
            }
            (a, b) => bad.push(format!("instance {i}: {:?} / {:?}", a.err(), b.err())),
        }
    }
    let detail = format!("2×10000 codec cases, 20 instances, {mismatches} node mismatches {:?}", bad.iter().take(3).collect::<Vec<_>>());
    verdict(8, "combinator oracle equivalence", bad.is_empty(), start.elapsed(), Duration::from_secs(30), &detail);
}

#[test]
fn c9_resampling_search() {
    let start = Instant::now();
    let mut bad = Vec::new();
    let mut small = 0;
    let mut total = 0;
    let within = |s: &SearchStats| !s.exhaustive && s.resamples <= s.budget;
    for (i, g) in orientation_instances().iter().enumerate() {
        for params in [variable_orientation_params(), one_bit_params()] {
            total += 1;
            let config = OrientationConfig { seed: i as u64, ..Default::default() };
            let s = OrientationSchema::new(params, config).unwrap();
            match s.encode_detailed(g) {
                Ok(enc) => {
                    if !within(&enc.stats) {
                        bad.push(format!("orientation #{i}: {:?}", enc.stats));
                    }
                    let (problem, _, _) = s.shift_problem(g);
                    if enc.stats.vars <= EXHAUSTIVE_LIMIT {
                        small += 1;
                        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                        let found = search::moser_tardos(&problem, &mut rng, config.budget);
                        let oracle = search::exhaustive(&problem);
                        let ok = matches!(&found, Ok((a, _)) if search::is_satisfied(&problem, a)) && oracle.is_some();
                        // The marked pairs themselves: one per window, holders 3α apart.
                        let spaced = enc.pairs.iter().enumerate().all(|(x, p)| {
                            enc.pairs[x + 1..].iter().all(|q| g.distance(p.holder, q.holder).is_none_or(|d| d >= problem.min_dist))
                        });
                        if !(ok && spaced && enc.pairs.len() == problem.windows.len()) {
                            bad.push(format!("orientation #{i}: small instance not certified"));
                        }
                    }
                }
                Err(e) => bad.push(format!("orientation #{i}: {e}")),
            }
        }
    }
    let profile = ColoringConstants::three_coloring_desk();
    for (i, (g, planted)) in planted_three_colorable().into_iter().enumerate() {
        total += 1;
        let s = three_coloring_schema(profile.clone(), i as u64, Some(planted));
        match s.encode_detailed(&g) {
            Ok(enc) if within(&enc.search) => {}
            Ok(enc) => bad.push(format!("3-coloring #{i}: {:?}", enc.search)),
            Err(e) => bad.push(format!("3-coloring #{i}: {e}")),
        }
    }
    let detail = format!("{total} encodings, {small} exhaustively certified, {} failures {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>());
    verdict(9, "resampling search", bad.is_empty(), start.elapsed(), Duration::from_secs(120), &detail);
}

/// Independent validity of a decoded solution for each runner schema.
fn valid(schema: &str, g: &Graph, sol: &Solution, subset: &HashSet<(usize, usize)>) -> Result<(), String> {
    match (schema, sol) {
        ("orientation" | "orientation-variable", Solution::Orientation(o)) => balanced(g, o),
        ("splitting", Solution::EdgeColoring(e)) => splits(g, e),
        ("edge-coloring", Solution::EdgeColoring(e)) => perfect_edge_coloring(g, e, g.max_degree() as u32),
        ("lcl-subexp", Solution::Labeling(l)) => labeling_valid(g, "3-coloring", l),
        ("initial-coloring", Solution::VertexColoring(c)) => proper(g, c, linial_target(g.max_degree())),
        ("delta-coloring", Solution::VertexColoring(c)) => proper(g, c, g.max_degree() as u32),
        ("three-coloring", Solution::VertexColoring(c)) => proper(g, c, 3),
        ("edge-subset", Solution::EdgeSubset(x)) => {
            let got: HashSet<(usize, usize)> = x.iter().map(|&(u, v)| edge_key(u, v)).collect();
            if &got == subset {
                Ok(())
            } else {
                Err("subset differs".into())
            }
        }
        _ => Err("unexpected solution kind".into()),
    }
}

#[test]
fn c10_verify_soundness_under_single_bit_corruption() {
    let start = Instant::now();
    let three = {
        let gen = generate(GeneratorKind::ThreeColorableRandom, &[150, 4], 5, 1).unwrap();
        (gen.graph, gen.planted)
    };
    let desk = SchemaParams { profile: Some(ColoringConstants::three_coloring_desk()), ..Default::default() };
    let clusters = SchemaParams { profile: Some(ColoringConstants::clustering_desk(20, 2)), ..Default::default() };
    let cases: Vec<(&str, Graph, Option<Vec<u32>>, SchemaParams)> = vec![
        ("orientation", generate_graph(GeneratorKind::Cycle, &[100], 1).unwrap(), None, SchemaParams::default()),
        ("orientation", generate_graph(GeneratorKind::Cycle, &[100], 1).unwrap(), None, SchemaParams { r: Some(50), ..Default::default() }),
        ("orientation-variable", generate_graph(GeneratorKind::Cycle, &[300], 2).unwrap(), None, SchemaParams { r: Some(60), ..Default::default() }),
        ("orientation-variable", generate_graph(GeneratorKind::Path, &[400], 3).unwrap(), None, SchemaParams { r: Some(60), ..Default::default() }),
        ("edge-subset", generate_graph(GeneratorKind::Grid2d, &[8, 8], 4).unwrap(), None, SchemaParams::default()),
        ("splitting", generate_graph(GeneratorKind::BipartiteRegularPow2, &[20, 4], 5).unwrap(), None, SchemaParams::default()),
        ("edge-coloring", generate_graph(GeneratorKind::BipartiteRegularPow2, &[12, 4], 6).unwrap(), None, SchemaParams::default()),
        ("lcl-subexp", generate_graph(GeneratorKind::Cycle, &[120], 7).unwrap(), None, SchemaParams::default()),
        ("initial-coloring", generate_graph(GeneratorKind::ThreeColorableRandom, &[80, 4], 8).unwrap(), None, clusters),
        ("delta-coloring", generate(GeneratorKind::DeltaColorableRandom, &[60, 4], 9, 1).unwrap().graph, None, SchemaParams::default()),
        ("three-coloring", three.0, three.1, desk),
    ];
    let mut bad = Vec::new();
    let mut summary = Vec::new();
    for (k, (schema, g, planted, params)) in cases.into_iter().enumerate() {
        let seed = k as u64;
        let (report, advice) = experiment::run_on_graph(&g, planted, schema, &params, seed);
        let Some(advice) = advice.filter(|_| report.passed()) else {
            bad.push(format!("{schema}: honest run failed: {:?}", report.failure));
            continue;
        };
        // The edge-subset runner draws its subset from the seed; pin it.
        let (params, subset) = if schema == "edge-subset" {
            let (sol, _) = experiment::decode_solution(&g, &advice.bits, schema, &params, seed).unwrap();
            let Solution::EdgeSubset(x) = sol else { unreachable!() };
            let pairs = x.iter().map(|&(u, v)| (g.id(u), g.id(v))).collect();
            (SchemaParams { subset: Some(pairs), ..params }, x.iter().map(|&(u, v)| edge_key(u, v)).collect())
        } else {
            (params, HashSet::new())
        };
        let honest = experiment::verify(&g, &advice.bits, schema, &params, seed);
        if !honest.passed() {
            bad.push(format!("{schema}: honest advice rejected at {:?}", honest.rejecting));
            continue;
        }
        let positions: Vec<(usize, usize)> =
            (0..g.n()).flat_map(|v| (0..advice.bits[v].len()).map(move |i| (v, i))).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + k as u64);
        let mut passes = 0;
        let mut counter = HashMap::new();
        for _ in 0..100 {
            let (v, i) = positions[rng.gen_range(0..positions.len())];
            let mut bits = advice.bits.clone();
            bits[v].0[i] = !bits[v].0[i];
            let r = experiment::verify(&g, &bits, schema, &params, seed);
            if r.passed() {
                passes += 1;
                let sol = experiment::decode_solution(&g, &bits, schema, &params, seed).map(|(s, _)| s);
                match sol.map_err(|e| e.to_string()).and_then(|s| valid(schema, &g, &s, &subset)) {
                    Ok(()) => {}
                    Err(e) => {
                        *counter.entry(schema).or_insert(0) += 1;
                        bad.push(format!("{schema}: pass with invalid output after flipping node {} bit {i}: {e}", g.id(v)));
                    }
                }
            }
        }
        summary.push(format!("{schema}: {passes}/100 pass"));
    }
    let detail = format!("{summary:?}; {} counterexamples {:?}", bad.len(), bad.iter().take(3).collect::<Vec<_>>());
    verdict(10, "verify soundness", bad.is_empty(), start.elapsed(), Duration::from_secs(120), &detail);
}

#[test]
fn three_coloring_desk_profile_is_pinned() {
    let t = ThreeConsts::new(&ColoringConstants::three_coloring_desk(), 5);
    assert_eq!(
        (t.small_diameter, t.ruling_spacing, t.candidate_radius, t.candidate_spacing, t.shift_reach, t.group_radius, t.candidate_count),
        (10, 26, 4, 3, 4, 10, 6)
    );
}
