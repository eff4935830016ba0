//! Seeded graph generators.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Cycle,
    Path,
    Grid2d,
    EvenDegreeRandom,
    BipartiteRegularPow2,
    ThreeColorableRandom,
    DeltaColorableRandom,
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "cycle" => GeneratorKind::Cycle,
            "path" => GeneratorKind::Path,
            "grid2d" => GeneratorKind::Grid2d,
            "even_degree_random" => GeneratorKind::EvenDegreeRandom,
            "bipartite_regular_pow2" => GeneratorKind::BipartiteRegularPow2,
            "three_colorable_random" => GeneratorKind::ThreeColorableRandom,
            "delta_colorable_random" => GeneratorKind::DeltaColorableRandom,
            other => return Err(Error::InvalidParams(format!("unknown generator {other}"))),
        })
    }
}

/// A generated graph plus the planted coloring when the generator has one
/// (indexed like the graph's nodes, colors from 1).
#[derive(Clone, Debug)]
pub struct Generated {
    pub graph: Graph,
    pub planted: Option<Vec<u32>>,
}

pub fn generate_graph(kind: GeneratorKind, params: &[usize], seed: u64) -> Result<Graph> {
    Ok(generate(kind, params, seed, 1)?.graph)
}

/// `id_exponent` = 1 gives IDs as a permutation of 1..n; larger values draw
/// distinct IDs from 1..n^id_exponent.
pub fn generate(kind: GeneratorKind, params: &[usize], seed: u64, id_exponent: u32) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let need = |k: usize| -> Result<()> {
        if params.len() < k {
            Err(Error::InvalidParams(format!("{kind:?} needs {k} parameters")))
        } else {
            Ok(())
        }
    };
    let (n, edges, planted): (usize, Vec<(usize, usize)>, Option<Vec<u32>>) = match kind {
        GeneratorKind::Cycle => {
            need(1)?;
            let n = params[0];
            if n < 3 {
                return Err(Error::InvalidParams("cycle needs n >= 3".into()));
            }
            (n, (0..n).map(|i| (i, (i + 1) % n)).collect(), None)
        }
        GeneratorKind::Path => {
            need(1)?;
            let n = params[0];
            if n < 1 {
                return Err(Error::InvalidParams("path needs n >= 1".into()));
            }
            (n, (1..n).map(|i| (i - 1, i)).collect(), None)
        }
        GeneratorKind::Grid2d => {
            need(2)?;
            let (w, h) = (params[0], params[1]);
            if w == 0 || h == 0 {
                return Err(Error::InvalidParams("grid needs positive sides".into()));
            }
            let mut e = Vec::new();
            for y in 0..h {
                for x in 0..w {
                    let v = y * w + x;
                    if x + 1 < w {
                        e.push((v, v + 1));
                    }
                    if y + 1 < h {
                        e.push((v, v + w));
                    }
                }
            }
            (w * h, e, None)
        }
        GeneratorKind::EvenDegreeRandom => {
            need(2)?;
            let (n, d) = (params[0], params[1]);
            if d == 0 || d % 2 == 1 {
                return Err(Error::InvalidParams(format!("even_degree_random needs an even degree, got {d}")));
            }
            if n <= d {
                return Err(Error::InvalidParams("even_degree_random needs n > d".into()));
            }
            (n, union_of_cycles(n, d / 2, &mut rng)?, None)
        }
        GeneratorKind::BipartiteRegularPow2 => {
            need(2)?;
            let (side, d) = (params[0], params[1]);
            if d == 0 || !d.is_power_of_two() {
                return Err(Error::InvalidParams(format!("degree {d} is not a power of 2")));
            }
            if side < d {
                return Err(Error::InvalidParams("bipartite_regular_pow2 needs n per side >= degree".into()));
            }
            let mut perm: Vec<usize> = (0..side).collect();
            perm.shuffle(&mut rng);
            let mut shifts: Vec<usize> = (0..side).collect();
            shifts.shuffle(&mut rng);
            let mut e = Vec::new();
            for i in 0..side {
                for &s in &shifts[..d] {
                    e.push((i, side + (perm[i] + s) % side));
                }
            }
            let planted = (0..2 * side).map(|v| if v < side { 1 } else { 2 }).collect();
            (2 * side, e, Some(planted))
        }
        GeneratorKind::ThreeColorableRandom => {
            need(2)?;
            let (n, d) = (params[0], params[1]);
            let (e, classes) = planted_partition(n, 3, d, &mut rng)?;
            (n, e, Some(classes))
        }
        GeneratorKind::DeltaColorableRandom => {
            need(2)?;
            let (n, d) = (params[0], params[1]);
            if d < 2 {
                return Err(Error::InvalidParams("delta_colorable_random needs degree >= 2".into()));
            }
            let (e, classes) = planted_partition(n, d, d, &mut rng)?;
            (n, e, Some(classes))
        }
    };
    let ids = draw_ids(n, id_exponent, &mut rng)?;
    let id_edges: Vec<(u64, u64)> = edges.iter().map(|&(a, b)| (ids[a], ids[b])).collect();
    let graph = Graph::from_edges(&ids, &id_edges)?;
    Ok(Generated { graph, planted })
}

fn draw_ids(n: usize, exponent: u32, rng: &mut ChaCha8Rng) -> Result<Vec<u64>> {
    if exponent <= 1 {
        let mut ids: Vec<u64> = (1..=n as u64).collect();
        ids.shuffle(rng);
        return Ok(ids);
    }
    let top = (n as u64)
        .checked_pow(exponent)
        .ok_or_else(|| Error::InvalidParams("ID space overflows u64".into()))?
        .max(n as u64);
    let mut seen = HashSet::with_capacity(n);
    let mut ids = Vec::with_capacity(n);
    while ids.len() < n {
        let id = rng.gen_range(1..=top);
        if seen.insert(id) {
            ids.push(id);
        }
    }
    Ok(ids)
}

/// Union of `k` random Hamiltonian cycles without repeated edges; every
/// node gets degree exactly 2k. A cycle that reuses an edge is redrawn.
fn union_of_cycles(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(usize, usize)>> {
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(n * k);
    for _ in 0..k {
        let mut drawn = None;
        for _ in 0..20_000 {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            let cycle: Vec<(usize, usize)> = (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect();
            let keys: HashSet<(usize, usize)> = cycle.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
            if keys.len() == n && keys.is_disjoint(&seen) {
                seen.extend(keys);
                drawn = Some(cycle);
                break;
            }
        }
        match drawn {
            Some(c) => edges.extend(c),
            None => {
                return Err(Error::InvalidParams(format!(
                    "could not draw {k} edge-disjoint Hamiltonian cycles on {n} nodes"
                )))
            }
        }
    }
    Ok(edges)
}

fn planted_partition(
    n: usize,
    parts: usize,
    cap: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(Vec<(usize, usize)>, Vec<u32>)> {
    if n < parts || parts < 2 || cap == 0 {
        return Err(Error::InvalidParams(format!(
            "planted partition needs n >= {parts} classes and a positive degree cap"
        )));
    }
    let mut class: Vec<u32> = (0..n).map(|v| (v % parts) as u32 + 1).collect();
    class.shuffle(rng);
    let mut deg = vec![0usize; n];
    let mut seen = HashSet::new();
    let mut edges = Vec::new();
    let target = n * cap / 2;
    let mut attempts = 0;
    while edges.len() < target && attempts < 40 * n * cap {
        attempts += 1;
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if class[a] == class[b] || deg[a] >= cap || deg[b] >= cap {
            continue;
        }
        if seen.insert((a.min(b), a.max(b))) {
            deg[a] += 1;
            deg[b] += 1;
            edges.push((a, b));
        }
    }
    Ok((edges, class))
}
