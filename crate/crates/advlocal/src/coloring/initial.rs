//! O(Δ²)-coloring with advice. The encoder clusters the graph around a
//! ruling set, dissolves clusters next to broken ones, colors the cluster
//! graph with one palette per degree bucket and writes each cluster's color
//! on spaced interior nodes. The decoder rebuilds the clusters from the
//! markers, combines the cluster color with a central coloring of the
//! cluster, then runs Linial's reduction.
//!
//! Strings: `11` on surviving centers, `111` on dissolved centers, one
//! color bit on each holder.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::rc::Rc;

use super::constants::{ColoringConstants, Constant};
use super::linial::{linial_reduce, linial_target, rounds_needed};
use crate::advice::{basic_threshold, AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::{ceil_log2, Bits};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, FnAlgorithm, View};
use crate::solution::{check_vertex_coloring, Solution};

/// Active constants of one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClusterConsts {
    pub radius: usize,
    pub spacing: usize,
    pub base: u64,
    pub high_degree: usize,
    pub interior_volume: usize,
}

impl ClusterConsts {
    pub fn new(consts: &ColoringConstants, alpha: usize, delta: usize) -> ClusterConsts {
        ClusterConsts {
            radius: consts.get(Constant::ClusterRadius, alpha, delta).max(2),
            spacing: consts.get(Constant::HolderSpacing, alpha, delta),
            base: consts.get(Constant::BucketBase, alpha, delta).max(2) as u64,
            high_degree: consts.get(Constant::HighDegree, alpha, delta),
            interior_volume: consts.get(Constant::InteriorVolume, alpha, delta),
        }
    }

    /// Decoder view radius for the cluster phase.
    pub fn view_radius(&self) -> usize {
        10 * self.radius + 6 * self.spacing + 3
    }
}

/// For every node, the nearest source by (distance, source ID); `None` when
/// unreachable.
pub fn nearest_source(g: &Graph, sources: &[usize]) -> Vec<Option<(usize, usize)>> {
    let mut best: Vec<Option<(usize, usize)>> = vec![None; g.n()];
    let mut frontier: Vec<usize> = Vec::new();
    for &s in sources {
        best[s] = Some((s, 0));
        frontier.push(s);
    }
    let mut d = 0;
    while !frontier.is_empty() {
        d += 1;
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for &u in &frontier {
            let label = best[u].expect("frontier is labeled").0;
            for &w in g.neighbors(u) {
                if best[w].is_some() {
                    continue;
                }
                let e = next.entry(w).or_insert(label);
                if g.id(label) < g.id(*e) {
                    *e = label;
                }
            }
        }
        frontier = next.keys().copied().collect();
        for (w, label) in next {
            best[w] = Some((label, d));
        }
    }
    best
}

/// Like [`nearest_source`] but each source carries a label; the nearest
/// source wins, ties to the smaller label ID.
fn nearest_labeled(g: &Graph, sources: &[(usize, usize)]) -> Vec<Option<usize>> {
    let mut best: Vec<Option<usize>> = vec![None; g.n()];
    let mut frontier = Vec::new();
    for &(s, label) in sources {
        match best[s] {
            Some(l) if g.id(l) <= g.id(label) => {}
            _ => best[s] = Some(label),
        }
        frontier.push(s);
    }
    frontier.sort_unstable();
    frontier.dedup();
    while !frontier.is_empty() {
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for &u in &frontier {
            let label = best[u].expect("frontier is labeled");
            for &w in g.neighbors(u) {
                if best[w].is_some() {
                    continue;
                }
                let e = next.entry(w).or_insert(label);
                if g.id(label) < g.id(*e) {
                    *e = label;
                }
            }
        }
        frontier = next.keys().copied().collect();
        for (w, label) in next {
            best[w] = Some(label);
        }
    }
    best
}

/// Number of edges leaving each cluster, keyed by center.
fn cluster_degrees(g: &Graph, label: &[usize]) -> HashMap<usize, usize> {
    let mut deg: HashMap<usize, usize> = HashMap::new();
    for v in 0..g.n() {
        deg.entry(label[v]).or_insert(0);
        for &w in g.neighbors(v) {
            if label[w] != label[v] {
                *deg.entry(label[v]).or_insert(0) += 1;
            }
        }
    }
    deg
}

/// 1 + in-cluster distance to the nearest node with a neighbor outside the
/// cluster (the distance to the outside); `usize::MAX` without a border.
fn depths(g: &Graph, label: &[usize]) -> Vec<usize> {
    let mut depth = vec![usize::MAX; g.n()];
    let mut queue = VecDeque::new();
    for v in 0..g.n() {
        if g.neighbors(v).iter().any(|&w| label[w] != label[v]) {
            depth[v] = 1;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if label[w] == label[u] && depth[w] == usize::MAX {
                depth[w] = depth[u] + 1;
                queue.push_back(w);
            }
        }
    }
    depth
}

/// Clusters before and after dissolving.
#[derive(Clone, Debug, PartialEq)]
pub struct Clusters {
    /// Every ruling-set node, ascending ID.
    pub centers: Vec<usize>,
    pub dissolved: Vec<usize>,
    /// Node → center of its initial cluster.
    pub initial: Vec<usize>,
    /// Node → center of its final cluster.
    pub fin: Vec<usize>,
    pub initial_degree: HashMap<usize, usize>,
}

/// Final clusters from the initial ones: members of dissolved clusters join
/// the nearest surviving high-degree cluster.
fn finalize(g: &Graph, centers: Vec<usize>, dissolved: Vec<usize>, high: usize) -> Result<Clusters> {
    let near = nearest_source(g, &centers);
    let initial: Vec<usize> = near
        .iter()
        .enumerate()
        .map(|(v, o)| o.map(|(c, _)| c).ok_or(Error::Decode(format!("node {} reaches no center", g.id(v)))))
        .collect::<Result<_>>()?;
    let initial_degree = cluster_degrees(g, &initial);
    let mut fin = initial.clone();
    if !dissolved.is_empty() {
        let gone: std::collections::HashSet<usize> = dissolved.iter().copied().collect();
        let sources: Vec<(usize, usize)> = (0..g.n())
            .filter(|&v| !gone.contains(&initial[v]) && initial_degree[&initial[v]] >= high)
            .map(|v| (v, initial[v]))
            .collect();
        let near = nearest_labeled(g, &sources);
        for v in 0..g.n() {
            if gone.contains(&initial[v]) {
                fin[v] = near[v].ok_or(Error::Decode(format!("node {} reaches no high-degree cluster", g.id(v))))?;
            }
        }
    }
    Ok(Clusters { centers, dissolved, initial, fin, initial_degree })
}

/// Smallest i ≥ 1 with degree < base^i, and the offset of bucket i's palette.
pub fn bucket(degree: usize, base: u64) -> Result<(u32, u64, u64)> {
    let mut offset = 0u64;
    let mut size = base;
    for i in 1..64u32 {
        if (degree as u64) < size {
            return Ok((i, offset, size));
        }
        offset = offset.checked_add(size).ok_or(Error::Infeasible("bucket palette overflows".into()))?;
        size = size.checked_mul(base).ok_or(Error::Infeasible("bucket palette overflows".into()))?;
    }
    Err(Error::Infeasible(format!("cluster degree {degree} beyond every bucket")))
}

/// Encoder result, kept for inspection.
#[derive(Clone, Debug, PartialEq)]
pub struct InitialEncoding {
    pub advice: AdviceAssignment,
    pub clusters: Clusters,
    /// Final center → cluster color (from 1).
    pub cluster_color: HashMap<usize, u64>,
    /// Final center → holders in ID order.
    pub holders: HashMap<usize, Vec<usize>>,
    pub broken: Vec<usize>,
}

pub fn encode_clusters(g: &Graph, k: &ClusterConsts) -> Result<InitialEncoding> {
    let centers = g.ruling_set(k.radius, k.radius)?;
    let near = nearest_source(g, &centers);
    let initial: Vec<usize> = near.iter().map(|o| o.expect("ruling set dominates").0).collect();
    let deg = cluster_degrees(g, &initial);
    let depth = depths(g, &initial);
    let mut interior: HashMap<usize, usize> = HashMap::new();
    for v in 0..g.n() {
        if depth[v] > k.spacing {
            *interior.entry(initial[v]).or_insert(0) += 1;
        }
    }
    let broken: Vec<usize> = centers
        .iter()
        .copied()
        .filter(|c| deg[c] >= k.high_degree && interior.get(c).copied().unwrap_or(0) < k.interior_volume)
        .collect();
    let mut gone: std::collections::HashSet<usize> = std::collections::HashSet::new();
    for &b in &broken {
        if gone.contains(&b) {
            continue;
        }
        let border: Vec<usize> = (0..g.n()).filter(|&v| initial[v] == b && depth[v] == 1).collect();
        for &x in &border {
            for (u, _) in g.ball(x, 2 * k.spacing) {
                if initial[u] != b {
                    gone.insert(initial[u]);
                }
            }
        }
    }
    let dissolved: Vec<usize> = centers.iter().copied().filter(|c| gone.contains(c)).collect();
    let clusters = finalize(g, centers, dissolved, k.high_degree)?;

    // Cluster graph, one greedy palette per bucket.
    let fin = &clusters.fin;
    let fdeg = cluster_degrees(g, fin);
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n() {
        for &w in g.neighbors(v) {
            if fin[w] != fin[v] {
                adj.entry(fin[v]).or_default().push(fin[w]);
            }
        }
    }
    let mut order: Vec<usize> = fdeg.keys().copied().collect();
    order.sort_by_key(|&c| g.id(c));
    let mut local: HashMap<usize, u64> = HashMap::new();
    let mut cluster_color = HashMap::new();
    for &c in &order {
        let (i, offset, size) = bucket(fdeg[&c], k.base)?;
        let used: Vec<u64> = adj
            .get(&c)
            .into_iter()
            .flatten()
            .filter(|&&o| bucket(fdeg[&o], k.base).map(|b| b.0) == Ok(i))
            .filter_map(|o| local.get(o).copied())
            .collect();
        let pick = (0..size).find(|x| !used.contains(x)).ok_or(Error::PaletteExceeded(size as usize))?;
        local.insert(c, pick);
        cluster_color.insert(c, offset + pick + 1);
    }

    // Holders: interior nodes at depth > spacing, pairwise and from the
    // center at least 2·spacing+1 apart, in ID order.
    let fdepth = depths(g, fin);
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in g.id_order() {
        members.entry(fin[v]).or_default().push(v);
    }
    let mut bits = vec![Bits::new(); g.n()];
    for &c in &clusters.centers {
        bits[c] = if clusters.dissolved.contains(&c) { "111" } else { "11" }.parse().expect("literal");
    }
    let mut holders = HashMap::new();
    for &c in &order {
        let (_, _, size) = bucket(fdeg[&c], k.base)?;
        let width = if fdeg[&c] == 0 { 0 } else { ceil_log2(size).max(1) };
        let mut picked: Vec<usize> = Vec::new();
        if width > 0 {
            let mut blocked: std::collections::HashSet<usize> =
                g.ball(c, 2 * k.spacing).into_iter().map(|(u, _)| u).collect();
            for &v in &members[&c] {
                if picked.len() == width {
                    break;
                }
                if fdepth[v] <= k.spacing || blocked.contains(&v) || !bits[v].is_empty() {
                    continue;
                }
                picked.push(v);
                blocked.extend(g.ball(v, 2 * k.spacing).into_iter().map(|(u, _)| u));
            }
            if picked.len() < width {
                return Err(Error::Infeasible(format!(
                    "cluster of {} has {} holder sites at depth > {} spaced {} apart, needs {width} (radius {} too small)",
                    g.id(c),
                    picked.len(),
                    k.spacing,
                    2 * k.spacing + 1,
                    k.radius
                )));
            }
            let value = local[&c];
            for (j, &h) in picked.iter().enumerate() {
                bits[h] = Bits(vec![(value >> (width - 1 - j)) & 1 == 1]);
            }
        }
        holders.insert(c, picked);
    }
    Ok(InitialEncoding { advice: AdviceAssignment::variable(bits), clusters, cluster_color, holders, broken })
}

/// Per final cluster: pre-reduction colors of its members, or the reason it
/// could not be decoded.
fn decode_clusters(g: &Graph, advice: &[Bits], k: &ClusterConsts, only: Option<usize>) -> Result<HashMap<usize, Result<Vec<(usize, u32)>>>> {
    let delta = g.max_degree() as u64;
    let mut centers = Vec::new();
    let mut dissolved = Vec::new();
    for v in g.id_order() {
        match advice[v].len() {
            0 | 1 => {}
            2 | 3 if advice[v].ones() == advice[v].len() => {
                centers.push(v);
                if advice[v].len() == 3 {
                    dissolved.push(v);
                }
            }
            _ => return Err(Error::Decode(format!("node {} holds an unknown marker {}", g.id(v), advice[v]))),
        }
    }
    if centers.is_empty() {
        return Err(Error::Decode("no cluster center in view".into()));
    }
    let clusters = finalize(g, centers, dissolved, k.high_degree)?;
    let fin = &clusters.fin;
    let fdeg = cluster_degrees(g, fin);
    let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
    for v in g.id_order() {
        members.entry(fin[v]).or_default().push(v);
    }
    let mut out = HashMap::new();
    for (&c, nodes) in &members {
        if only.is_some_and(|t| fin[t] != c) {
            continue;
        }
        let decoded = (|| -> Result<Vec<(usize, u32)>> {
            let (_, offset, size) = bucket(fdeg[&c], k.base)?;
            let width = if fdeg[&c] == 0 { 0 } else { ceil_log2(size).max(1) };
            let held: Vec<bool> = nodes.iter().filter(|&&v| advice[v].len() == 1).map(|&v| advice[v].get(0) == Some(true)).collect();
            if held.len() != width {
                return Err(Error::Decode(format!("cluster of {} holds {} color bits, expected {width}", g.id(c), held.len())));
            }
            let local = held.iter().fold(0u64, |acc, &b| acc << 1 | b as u64);
            if local >= size {
                return Err(Error::Decode(format!("cluster color {local} outside its bucket of {size}")));
            }
            let kappa = offset + local + 1;
            let (sub, map) = g.induced(nodes);
            let inner = sub.greedy_coloring(&sub.id_order(), delta as u32 + 1)?;
            let combined = (kappa - 1)
                .checked_mul(delta + 1)
                .ok_or(Error::Infeasible("combined color overflows".into()))?;
            map.iter()
                .zip(inner)
                .map(|(&v, ci)| {
                    let col = combined + ci as u64;
                    u32::try_from(col).map(|c| (v, c)).map_err(|_| Error::Infeasible("combined color exceeds 32 bits".into()))
                })
                .collect()
        })();
        out.insert(c, decoded);
    }
    Ok(out)
}

/// Central reference decoder for the cluster phase on a whole graph.
pub fn decode_clusters_global(g: &Graph, advice: &[Bits], k: &ClusterConsts) -> Result<Vec<u32>> {
    let per = decode_clusters(g, advice, k, None)?;
    let mut colors = vec![0u32; g.n()];
    for (_, res) in per {
        for (v, c) in res? {
            colors[v] = c;
        }
    }
    Ok(colors)
}

pub struct InitialColoringSchema {
    params: ComposableParams,
    consts: ColoringConstants,
}

impl InitialColoringSchema {
    pub fn new(params: ComposableParams, consts: ColoringConstants) -> Result<InitialColoringSchema> {
        consts.validate()?;
        Ok(InitialColoringSchema { params, consts })
    }

    pub fn cluster_consts(&self, g: &Graph) -> ClusterConsts {
        ClusterConsts::new(&self.consts, self.params.alpha, g.max_degree())
    }

    pub fn encode_detailed(&self, g: &Graph) -> Result<InitialEncoding> {
        encode_clusters(g, &self.cluster_consts(g))
    }

    /// Colors after the cluster phase and before the reduction.
    pub fn decode_clusters(&self, g: &Graph, advice: &[Bits]) -> Result<(Vec<u32>, crate::local::LocalityReport)> {
        let k = self.cluster_consts(g);
        let memo: RefCell<HashMap<usize, Rc<HashMap<usize, u32>>>> = RefCell::new(HashMap::new());
        let alg = FnAlgorithm {
            radius: k.view_radius(),
            f: |view: &View<Bits>| {
                let v = view.center();
                // A view that is a whole component decodes the same way at
                // every member.
                if view.is_closed() {
                    let nodes = view.nodes();
                    let root = *nodes.iter().min_by_key(|&&u| view.id(u).unwrap_or(u64::MAX)).expect("nonempty");
                    let cached = memo.borrow().get(&root).cloned();
                    let table = match cached {
                        Some(t) => t,
                        None => {
                            let (sub, map) = view.as_graph();
                            let adv: Vec<Bits> = map.iter().map(|&u| view.state(u).cloned()).collect::<Result<_>>()?;
                            let cols = decode_clusters_global(&sub, &adv, &k)?;
                            let t: Rc<HashMap<usize, u32>> = Rc::new(map.into_iter().zip(cols).collect());
                            memo.borrow_mut().insert(root, t.clone());
                            t
                        }
                    };
                    return Ok(table[&v]);
                }
                let (sub, map) = view.as_graph();
                let adv: Vec<Bits> = map.iter().map(|&u| view.state(u).cloned()).collect::<Result<_>>()?;
                let me = map.iter().position(|&u| u == v).expect("center in view");
                let per = decode_clusters(&sub, &adv, &k, Some(me))?;
                for (_, res) in per {
                    if let Some(&(_, c)) = res?.iter().find(|(u, _)| *u == me) {
                        return Ok(c);
                    }
                }
                Err(Error::Decode("center not in any cluster".into()))
            },
        };
        run_local(g, advice, &alg)
    }
}

impl Schema for InitialColoringSchema {
    fn name(&self) -> String {
        "initial-coloring".into()
    }
    fn gamma0(&self) -> usize {
        3
    }
    fn threshold(&self, c: f64, gamma: usize) -> f64 {
        basic_threshold(3, c, gamma)
    }
    fn params(&self) -> Option<ComposableParams> {
        Some(self.params)
    }
    fn radius(&self, g: &Graph) -> usize {
        self.cluster_consts(g).view_radius() + rounds_needed(u32::MAX as u64, g.max_degree())
    }

    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        Ok(self.encode_detailed(g)?.advice)
    }

    fn decode(&self, g: &Graph, advice: &[Bits], _deps: &[&Solution]) -> Result<Decoded> {
        let (pre, rep) = self.decode_clusters(g, advice)?;
        check_vertex_coloring(g, &pre, u32::MAX, false)?;
        let (out, lin) = linial_reduce(g, &pre)?;
        let mut locality = rep.then(&lin);
        locality.declared_radius = self.radius(g);
        Ok(Decoded { solution: Solution::VertexColoring(out), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        check_vertex_coloring(g, solution.as_vertex_coloring()?, linial_target(g.max_degree()), false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::advice::max_holders_per_ball;
    use crate::gen::{generate_graph, GeneratorKind};

    fn params() -> ComposableParams {
        ComposableParams { c: 1.0, gamma: 3, alpha: 81 }
    }

    #[test]
    fn nearest_source_breaks_ties_by_id() {
        // Path 1-2-3-4-5 with sources at both ends: node 3 goes to ID 1.
        let g = Graph::from_edges(&[1, 2, 3, 4, 5], &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let s = [g.index_of(5).unwrap(), g.index_of(1).unwrap()];
        let near = nearest_source(&g, &s);
        let mid = near[g.index_of(3).unwrap()].unwrap();
        assert_eq!((g.id(mid.0), mid.1), (1, 2));
    }

    #[test]
    fn buckets() {
        assert_eq!(bucket(0, 2).unwrap(), (1, 0, 2));
        assert_eq!(bucket(2, 2).unwrap(), (2, 2, 4));
        assert_eq!(bucket(5, 4).unwrap(), (2, 4, 16));
    }

    #[test]
    fn one_cluster_is_colored_centrally() {
        let g = generate_graph(GeneratorKind::DeltaColorableRandom, &[60, 4], 1).unwrap();
        let s = InitialColoringSchema::new(params(), ColoringConstants::default()).unwrap();
        let enc = s.encode_detailed(&g).unwrap();
        let comps = g.components().len();
        assert_eq!(enc.clusters.centers.len(), comps);
        let out = s.decode(&g, &enc.advice.bits, &[]).unwrap();
        let cols = out.solution.as_vertex_coloring().unwrap();
        check_vertex_coloring(&g, cols, g.max_degree() as u32 + 1, false).unwrap();
    }

    #[test]
    fn long_cycle_with_desk_profile() {
        let g = generate_graph(GeneratorKind::Cycle, &[500], 3).unwrap();
        let consts = ColoringConstants::clustering_desk(40, 3);
        let s = InitialColoringSchema::new(ComposableParams { c: 1.0, gamma: 3, alpha: 3 }, consts).unwrap();
        let enc = s.encode_detailed(&g).unwrap();
        // Each center dominates at most 2·39+1 nodes.
        assert!(enc.clusters.centers.len() >= 500_usize.div_ceil(79));
        // Centers are at least the ruling distance apart, so marker nodes
        // of distinct centers never share a neighbor.
        for (i, &a) in enc.clusters.centers.iter().enumerate() {
            for &b in &enc.clusters.centers[i + 1..] {
                assert!(g.distance(a, b).unwrap() >= 40);
            }
        }
        assert!(max_holders_per_ball(&g, &enc.advice.bits, 3).0 <= 3);
        let (pre, _) = s.decode_clusters(&g, &enc.advice.bits).unwrap();
        assert_eq!(pre, decode_clusters_global(&g, &enc.advice.bits, &s.cluster_consts(&g)).unwrap());
        let out = s.decode(&g, &enc.advice.bits, &[]).unwrap();
        let cols = out.solution.as_vertex_coloring().unwrap();
        check_vertex_coloring(&g, cols, 4 * 16, false).unwrap();
        s.check(&g, &out.solution, &[]).unwrap();
    }

    #[test]
    fn views_smaller_than_the_graph_agree() {
        let g = generate_graph(GeneratorKind::Cycle, &[900], 5).unwrap();
        let consts = ColoringConstants::clustering_desk(20, 2);
        let s = InitialColoringSchema::new(ComposableParams { c: 1.0, gamma: 3, alpha: 2 }, consts).unwrap();
        let enc = s.encode_detailed(&g).unwrap();
        assert!(s.cluster_consts(&g).view_radius() < 450);
        let (pre, _) = s.decode_clusters(&g, &enc.advice.bits).unwrap();
        assert_eq!(pre, decode_clusters_global(&g, &enc.advice.bits, &s.cluster_consts(&g)).unwrap());
        check_vertex_coloring(&g, &pre, u32::MAX, false).unwrap();
    }

    #[test]
    fn broken_clusters_dissolve_their_neighbors() {
        // A grid with a tiny cluster radius and a low high-degree threshold:
        // every cluster counts as broken.
        let g = generate_graph(GeneratorKind::Grid2d, &[20, 20], 2).unwrap();
        let consts = ColoringConstants::clustering_desk(6, 1)
            .with(Constant::HighDegree, 1.0)
            .with(Constant::InteriorVolume, 1000.0);
        let s = InitialColoringSchema::new(ComposableParams { c: 1.0, gamma: 3, alpha: 1 }, consts).unwrap();
        let enc = s.encode_detailed(&g);
        match enc {
            Ok(enc) => {
                assert!(!enc.broken.is_empty());
                assert!(!enc.clusters.dissolved.is_empty());
                let out = s.decode(&g, &enc.advice.bits, &[]).unwrap();
                s.check(&g, &out.solution, &[]).unwrap();
            }
            // Merged clusters can outgrow the holder sites; the failure must
            // name the shortfall.
            Err(e) => assert!(matches!(e, Error::Infeasible(ref m) if m.contains("holder sites"))),
        }
    }
}
