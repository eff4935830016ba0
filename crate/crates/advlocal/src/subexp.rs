//! One bit of advice per node for any LCL on graphs of sub-exponential
//! growth.
//!
//! The encoder clusters the graph: nodes are distance-5x colored, and color
//! classes are processed in ascending order; a node of the current color
//! that still sees a node at distance 2x in the residual graph becomes a
//! center and takes every residual node within α_v + r. Each center writes
//! its color along a path P_v of y = ⌊x/2⌋ nodes, and the labels of the
//! nodes near its border on an independent set Z′ of isolated 1s close to
//! the center. The decoder strips isolated 1s, recognizes centers color by
//! color, reads the border labels and completes every cluster, then every
//! leftover component, by exact search.

use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::advice::{AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::{Graph, GrowthProfile};
use crate::lcl::{LclProblem, Slots, DEFAULT_SEARCH_CAP};
use crate::local::{run_local, FnAlgorithm, LocalityReport, View};
use crate::solution::{Labeling, Solution};

const CENTER_PREFIX: [bool; 8] = [true, true, true, true, false, true, true, false];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterConstants {
    pub r: usize,
    pub delta: usize,
    /// log₂(1 + 1/Δ^r) / (3r)
    pub c: f64,
    pub x0: usize,
    /// max{4r, x0}
    pub x: usize,
}

impl ClusterConstants {
    pub fn new(r: usize, delta: usize, x0: usize) -> Result<ClusterConstants> {
        if r == 0 || delta == 0 {
            return Err(Error::InvalidParams("r and Δ must be positive".into()));
        }
        let c = (1.0 + (delta as f64).powi(r as i32).recip()).log2() / (3.0 * r as f64);
        Ok(ClusterConstants { r, delta, c, x0, x: (4 * r).max(x0) })
    }

    /// Same r and Δ, with x0 set to the smallest value valid for every graph
    /// whose radius-x balls have at most `ball(x)` nodes.
    pub fn for_family(r: usize, delta: usize, ball: impl Fn(usize) -> f64) -> Result<ClusterConstants> {
        let base = ClusterConstants::new(r, delta, 0)?;
        ClusterConstants::new(r, delta, family_x0(base.c, ball))
    }

    pub fn y(&self) -> usize {
        self.x / 2
    }

    pub fn delta_r(&self) -> f64 {
        (self.delta as f64).powi(self.r as i32)
    }

    /// Distance-coloring palette bound ⌊2^(5cx)⌋, saturated at usize::MAX.
    pub fn palette_cap(&self) -> usize {
        let e = 5.0 * self.c * self.x as f64;
        if e >= 63.0 {
            usize::MAX
        } else {
            e.exp2().floor() as usize
        }
    }

    /// The inequalities the construction needs from the constants alone.
    pub fn check_family(&self) -> Result<()> {
        if self.x < 4 * self.r {
            return Err(Error::Infeasible(format!("x = {} < 4r = {}", self.x, 4 * self.r)));
        }
        let need = 20.0 * self.c * self.x as f64 + 9.0;
        if need > self.y() as f64 {
            return Err(Error::Infeasible(format!(
                "20cx + 9 = {need:.3} > ⌊x/2⌋ = {} (r = {}, x = {})",
                self.y(),
                self.r,
                self.x
            )));
        }
        Ok(())
    }

    pub fn growth(&self) -> GrowthProfile {
        GrowthProfile { c: self.c, x0: self.x0 }
    }
}

/// Smallest x0 with ball(x) ≤ 2^(cx) for all x ≥ x0, for ball sizes that
/// grow polynomially.
pub fn family_x0(c: f64, ball: impl Fn(usize) -> f64) -> usize {
    let mut last_bad = None;
    let mut x = 1usize;
    loop {
        let b = ball(x);
        if b > (c * x as f64).exp2() {
            last_bad = Some(x);
        } else if c * x as f64 > 2.0 * b.log2() + 16.0 {
            break;
        }
        x += 1;
    }
    last_bad.map_or(0, |b| b + 1)
}

/// Ball sizes of paths and cycles.
pub fn cycle_ball(x: usize) -> f64 {
    2.0 * x as f64 + 1.0
}

/// Ball sizes of 2-dimensional grids.
pub fn grid_ball(x: usize) -> f64 {
    let x = x as f64;
    2.0 * x * x + 2.0 * x + 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstantsMode {
    /// Family inequalities and the growth bound are checked before encoding.
    Verified,
    /// Only the per-instance conditions are checked (path budget, payload
    /// capacity, palette); for exercising clusters on small graphs.
    Relaxed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubexpConfig {
    pub consts: ClusterConstants,
    pub mode: ConstantsMode,
    /// Upper bound on the fraction of 1s, checked after encoding.
    pub epsilon: Option<f64>,
    pub search_cap: usize,
}

impl SubexpConfig {
    pub fn verified(consts: ClusterConstants) -> SubexpConfig {
        SubexpConfig { consts, mode: ConstantsMode::Verified, epsilon: None, search_cap: DEFAULT_SEARCH_CAP }
    }

    pub fn relaxed(consts: ClusterConstants) -> SubexpConfig {
        SubexpConfig { mode: ConstantsMode::Relaxed, ..SubexpConfig::verified(consts) }
    }
}

/// Neighborhood access shared by the encoder (whole graph) and the decoder
/// (views); `keep` selects the residual graph.
trait Hood {
    fn nbrs(&self, u: usize) -> Result<Vec<usize>>;
    fn nid(&self, u: usize) -> Result<u64>;
}

impl Hood for Graph {
    fn nbrs(&self, u: usize) -> Result<Vec<usize>> {
        Ok(self.neighbors(u).to_vec())
    }
    fn nid(&self, u: usize) -> Result<u64> {
        Ok(self.id(u))
    }
}

impl<S> Hood for View<'_, S> {
    fn nbrs(&self, u: usize) -> Result<Vec<usize>> {
        self.neighbors(u)
    }
    fn nid(&self, u: usize) -> Result<u64> {
        self.id(u)
    }
}

/// BFS distances from `src` through nodes accepted by `keep`, up to `limit`.
fn layers<H: Hood + ?Sized>(h: &H, src: usize, limit: usize, keep: &dyn Fn(usize) -> bool) -> Result<HashMap<usize, usize>> {
    let mut dist = HashMap::from([(src, 0usize)]);
    let mut frontier = vec![src];
    for d in 1..=limit {
        let mut next = Vec::new();
        for &u in &frontier {
            for w in h.nbrs(u)? {
                if keep(w) && !dist.contains_key(&w) {
                    dist.insert(w, d);
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(dist)
}

/// Smallest α in x..=2x with |N≤α| ≥ Δ^r·|N=α+r|, from BFS distances that
/// reach at least 2x + r.
fn alpha_from(dist: &HashMap<usize, usize>, consts: &ClusterConstants) -> Result<usize> {
    let top = 2 * consts.x + consts.r;
    let mut per = vec![0usize; top + 1];
    for &d in dist.values() {
        if d <= top {
            per[d] += 1;
        }
    }
    let mut cum: usize = per[..consts.x].iter().sum();
    for alpha in consts.x..=2 * consts.x {
        cum += per[alpha];
        if cum as f64 >= consts.delta_r() * per[alpha + consts.r] as f64 {
            return Ok(alpha);
        }
    }
    Err(Error::Precondition(format!(
        "no α in {}..={} with |N≤α| ≥ Δ^r·|N=α+r|: the growth bound does not hold",
        consts.x,
        2 * consts.x
    )))
}

/// α_v on the whole graph.
pub fn find_alpha(g: &Graph, v: usize, consts: &ClusterConstants) -> Result<usize> {
    let dist = layers(g, v, 2 * consts.x + consts.r, &|_| true)?;
    alpha_from(&dist, consts)
}

/// Greedy coloring in ascending ID order where nodes within distance `d`
/// get distinct colors; colors start at 1.
pub fn distance_coloring(g: &Graph, d: usize) -> Vec<u32> {
    let mut colors = vec![0u32; g.n()];
    for v in g.id_order() {
        let used: HashSet<u32> = g.ball(v, d).into_iter().map(|(u, _)| colors[u]).collect();
        colors[v] = (1..).find(|c| !used.contains(c)).expect("unbounded palette");
    }
    colors
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub center: usize,
    pub color: u32,
    pub alpha: usize,
    /// Index into [`ClusterLayout::residuals`]: the residual graph G_i.
    pub phase: usize,
    /// Residual distance from the center of every member.
    pub members: Vec<(usize, usize)>,
    pub path: Vec<usize>,
}

impl Cluster {
    pub fn inner(&self) -> Vec<usize> {
        self.members.iter().filter(|&&(_, d)| d <= self.alpha).map(|&(u, _)| u).collect()
    }

    pub fn border(&self, r: usize) -> Vec<usize> {
        self.members.iter().filter(|&&(_, d)| d == self.alpha + r).map(|&(u, _)| u).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusterLayout {
    pub coloring: Vec<u32>,
    pub clusters: Vec<Cluster>,
    pub leftover: Vec<usize>,
    /// Residual node sets of the phases that created clusters.
    pub residuals: Vec<Vec<bool>>,
    /// Cluster radius beyond α_v.
    pub r: usize,
}

impl ClusterLayout {
    pub fn cluster_of(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &(u, _) in &c.members {
                out[u] = Some(i);
            }
        }
        out
    }
}

pub fn build_clustering(g: &Graph, consts: &ClusterConstants) -> Result<ClusterLayout> {
    let x = consts.x;
    let coloring = distance_coloring(g, 5 * x);
    let used = coloring.iter().copied().max().unwrap_or(0) as usize;
    if used > consts.palette_cap() {
        return Err(Error::PaletteExceeded(consts.palette_cap()));
    }
    let mut residual = vec![true; g.n()];
    let mut by_color: Vec<Vec<usize>> = vec![Vec::new(); used + 1];
    for v in g.id_order() {
        by_color[coloring[v] as usize].push(v);
    }
    let mut clusters = Vec::new();
    let mut residuals = Vec::new();
    for (color, nodes) in by_color.iter().enumerate().skip(1) {
        let mut found = Vec::new();
        for &v in nodes {
            if !residual[v] {
                continue;
            }
            let keep = |u: usize| residual[u];
            let dist = layers(g, v, 2 * x + consts.r, &keep)?;
            if !dist.values().any(|&d| d >= 2 * x) {
                continue;
            }
            let alpha = alpha_from(&dist, consts)?;
            let mut members: Vec<(usize, usize)> =
                dist.iter().filter(|&(_, &d)| d <= alpha + consts.r).map(|(&u, &d)| (u, d)).collect();
            members.sort_by_key(|&(u, d)| (d, g.id(u)));
            let path = center_path(g, &dist, v, consts.y())?;
            found.push(Cluster { center: v, color: color as u32, alpha, phase: residuals.len(), members, path });
        }
        if found.is_empty() {
            continue;
        }
        residuals.push(residual.clone());
        for c in &found {
            for &(u, _) in &c.members {
                if !residual[u] {
                    return Err(Error::Precondition(format!("clusters overlap at node {}", g.id(u))));
                }
                residual[u] = false;
            }
        }
        clusters.extend(found);
    }
    let leftover = g.id_order().into_iter().filter(|&v| residual[v]).collect();
    Ok(ClusterLayout { coloring, clusters, leftover, residuals, r: consts.r })
}

/// v_1 = v, ..., v_y with v_j at residual distance j - 1: ends at the
/// smallest-ID node at distance y - 1, each step back to the smallest-ID
/// predecessor.
fn center_path(g: &Graph, dist: &HashMap<usize, usize>, v: usize, y: usize) -> Result<Vec<usize>> {
    let end = dist
        .iter()
        .filter(|&(_, &d)| d + 1 == y)
        .map(|(&u, _)| u)
        .min_by_key(|&u| g.id(u))
        .ok_or_else(|| Error::Precondition("no node at distance y - 1 from the center".into()))?;
    let mut path = vec![end];
    let mut cur = end;
    for d in (0..y.saturating_sub(1)).rev() {
        cur = g
            .neighbors(cur)
            .iter()
            .copied()
            .find(|w| dist.get(w) == Some(&d))
            .expect("BFS predecessor exists");
        path.push(cur);
    }
    path.reverse();
    debug_assert_eq!(path[0], v);
    Ok(path)
}

/// B″ = 11110110 · B′ · 0, where B′ is the binary form of `color` with
/// 0 ↦ 110 and 1 ↦ 1110.
pub fn encode_cluster_color(color: u32, y: usize) -> Result<Bits> {
    if color == 0 {
        return Err(Error::InvalidParams("cluster colors start at 1".into()));
    }
    let mut out = Bits(CENTER_PREFIX.to_vec());
    let width = 32 - color.leading_zeros() as usize;
    for b in Bits::from_uint(color as u64, width).0 {
        let ones = if b { 3 } else { 2 };
        out.0.extend(std::iter::repeat(true).take(ones));
        out.push(false);
    }
    out.push(false);
    if out.len() > y {
        return Err(Error::Infeasible(format!("cluster color {color} needs {} path bits > y = {y}", out.len())));
    }
    Ok(out)
}

/// Inverse of [`encode_cluster_color`] on the bits of a whole path:
/// 11110110 followed by (110|1110)* 0 0*, at least one token, no leading
/// zero digit.
pub fn decode_cluster_color(path: &[bool]) -> Option<u32> {
    if path.len() < 8 || path[..8] != CENTER_PREFIX {
        return None;
    }
    let mut value: u64 = 0;
    let mut tokens = 0;
    let mut j = 8;
    loop {
        match path.get(j) {
            None => return None,
            Some(false) => break,
            Some(true) => {
                let run = path[j..].iter().take_while(|&&b| b).count();
                if !(2..=3).contains(&run) || j + run >= path.len() {
                    return None;
                }
                let digit = (run == 3) as u64;
                if tokens == 0 && digit == 0 {
                    return None;
                }
                value = (value << 1) | digit;
                tokens += 1;
                if tokens > 32 {
                    return None;
                }
                j += run + 1;
            }
        }
    }
    if tokens == 0 || path[j..].iter().any(|&b| b) {
        return None;
    }
    u32::try_from(value).ok()
}

/// Nodes within r̄ of the border in G_i, ascending by ID.
fn border_region<H: Hood + ?Sized>(
    h: &H,
    border: &[usize],
    rbar: usize,
    keep: &dyn Fn(usize) -> bool,
) -> Result<Vec<usize>> {
    let mut seen: BTreeSet<(u64, usize)> = BTreeSet::new();
    for &b in border {
        for (u, _) in layers(h, b, rbar, keep)? {
            seen.insert((h.nid(u)?, u));
        }
    }
    Ok(seen.into_iter().map(|(_, u)| u).collect())
}

/// Z′: greedy MIS, ascending ID, of the inner nodes that neither hold a
/// clustering 1 nor neighbor one.
fn payload_nodes<H: Hood + ?Sized>(h: &H, inner: &[usize], ones: &dyn Fn(usize) -> Result<bool>) -> Result<Vec<usize>> {
    let mut blocked = HashSet::new();
    for &u in inner {
        if ones(u)? {
            blocked.insert(u);
            blocked.extend(h.nbrs(u)?);
        }
    }
    let mut z: Vec<(u64, usize)> =
        inner.iter().filter(|u| !blocked.contains(u)).map(|&u| Ok((h.nid(u)?, u))).collect::<Result<_>>()?;
    z.sort_unstable();
    let mut chosen: Vec<usize> = Vec::new();
    let mut taken = HashSet::new();
    for (_, u) in z {
        if h.nbrs(u)?.iter().any(|w| taken.contains(w)) {
            continue;
        }
        taken.insert(u);
        chosen.push(u);
    }
    Ok(chosen)
}

/// Payload string of a cluster: k bits per label slot of every node in S_v
/// (ascending ID), slots in adjacency order.
pub fn encode_border_solution(
    g: &Graph,
    problem: &LclProblem,
    layout: &ClusterLayout,
    cluster: &Cluster,
    solution: &Labeling,
) -> Result<(Vec<usize>, Bits)> {
    let residual = &layout.residuals[cluster.phase];
    let keep = |u: usize| residual[u];
    let s = border_region(g, &cluster.border(layout.r), problem.radius(), &keep)?;
    let k = problem.label_bits();
    let mut b = Bits::new();
    for &u in &s {
        for &l in &solution.slots[u] {
            b.extend_from(&Bits::from_uint(l as u64, k));
        }
    }
    Ok((s, b))
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubexpEncoding {
    pub advice: AdviceAssignment,
    pub layout: ClusterLayout,
    /// Per cluster: (|B|, |Z′|).
    pub payload: Vec<(usize, usize)>,
}

pub struct SubexpSchema {
    problem: LclProblem,
    config: SubexpConfig,
    inputs: Vec<u8>,
    solution: Option<Labeling>,
}

#[derive(Clone, Debug)]
struct NodeState {
    bit: bool,
    /// Clustering bit: the advice bit with isolated 1s removed.
    cb: bool,
    clustered: bool,
    fixed: Vec<Option<u8>>,
    mark: Option<u32>,
}

/// Result of decoding one cluster, shared by all nodes that compute it.
struct Outcome {
    members: HashSet<usize>,
    /// Labels fixed from the payload (S_v) and by the completion (members).
    labels: HashMap<usize, Vec<u8>>,
}

impl SubexpSchema {
    pub fn new(problem: LclProblem, config: SubexpConfig) -> Result<SubexpSchema> {
        if config.mode == ConstantsMode::Verified {
            config.consts.check_family()?;
        }
        Ok(SubexpSchema { problem, config, inputs: Vec::new(), solution: None })
    }

    pub fn with_inputs(mut self, inputs: Vec<u8>) -> SubexpSchema {
        self.inputs = inputs;
        self
    }

    /// Uses `solution` instead of searching for one at encode time.
    pub fn with_solution(mut self, solution: Labeling) -> SubexpSchema {
        self.solution = Some(solution);
        self
    }

    pub fn problem(&self) -> &LclProblem {
        &self.problem
    }

    pub fn config(&self) -> &SubexpConfig {
        &self.config
    }

    fn consts(&self) -> &ClusterConstants {
        &self.config.consts
    }

    fn detect_radius(&self) -> usize {
        2 * self.consts().x
    }

    /// Centers within 2x + r + r̄, whose clusters need the residual ball of
    /// radius 2x + r + 2r̄ and one more hop of adjacency.
    fn member_radius(&self) -> usize {
        let c = self.consts();
        let rbar = self.problem.radius();
        (2 * c.x + c.r + rbar) + (2 * c.x + c.r + 2 * rbar) + 1
    }

    fn leftover_radius(&self) -> usize {
        2 * self.consts().x + 2 * self.problem.radius() + 1
    }

    /// Declared rounds: one to strip isolated 1s, then per possible color a
    /// detection and a membership/completion phase, then the leftovers.
    pub fn declared_radius(&self) -> usize {
        let phases = self.consts().palette_cap();
        phases
            .saturating_mul(self.detect_radius() + self.member_radius())
            .saturating_add(1 + self.leftover_radius())
    }

    pub fn encode_detailed(&self, g: &Graph) -> Result<SubexpEncoding> {
        let consts = *self.consts();
        if g.max_degree() > consts.delta {
            return Err(Error::Precondition(format!("max degree {} exceeds Δ = {}", g.max_degree(), consts.delta)));
        }
        if self.config.mode == ConstantsMode::Verified {
            let check = g.check_growth(&consts.growth());
            if let Some((id, x, size)) = check.witness {
                return Err(Error::Precondition(format!(
                    "growth bound fails at node {id}: |N≤{x}| = {size} > 2^({:.5}·{x})",
                    consts.c
                )));
            }
        }
        let layout = build_clustering(g, &consts)?;
        let mut bits = vec![false; g.n()];
        for c in &layout.clusters {
            let b = encode_cluster_color(c.color, consts.y())?;
            for (j, &u) in c.path.iter().enumerate() {
                bits[u] = b.get(j).unwrap_or(false);
            }
        }
        let mut payload = Vec::new();
        if !layout.clusters.is_empty() {
            let solution = match &self.solution {
                Some(s) => s.clone(),
                None => self.problem.solve(g, &self.inputs, self.config.search_cap)?,
            };
            self.problem.check(g, &self.inputs, &solution)?;
            let clustering_bits = bits.clone();
            for c in &layout.clusters {
                let (_, b) = encode_border_solution(g, &self.problem, &layout, c, &solution)?;
                let z = payload_nodes(g, &c.inner(), &|u| Ok(clustering_bits[u]))?;
                if b.len() > z.len() {
                    return Err(Error::Infeasible(format!(
                        "payload of the cluster at node {} needs {} bits > |Z′| = {}",
                        g.id(c.center),
                        b.len(),
                        z.len()
                    )));
                }
                for (j, &u) in z.iter().enumerate().take(b.len()) {
                    bits[u] = b.0[j];
                }
                payload.push((b.len(), z.len()));
            }
        }
        let advice = AdviceAssignment::uniform(bits.into_iter().map(|b| Bits(vec![b])).collect(), 1)?;
        if let Some(eps) = self.config.epsilon {
            let ratio = crate::advice::measure_sparsity(&advice)?;
            if ratio > eps {
                return Err(Error::Infeasible(format!("1-ratio {ratio:.4} > ε = {eps}")));
            }
        }
        Ok(SubexpEncoding { advice, layout, payload })
    }

    /// Decoder phase at one color: center detection output for every node.
    fn detect(&self, view: &View<NodeState>) -> Result<Option<u32>> {
        let me = view.center();
        let st = view.state(me)?;
        if st.clustered || !st.cb {
            return Ok(None);
        }
        let x = self.consts().x;
        let y = self.consts().y();
        let keep = |u: usize| view.state(u).map(|s| !s.clustered).unwrap_or(false);
        let dist = layers(view, me, 2 * x, &keep)?;
        if !dist.values().any(|&d| d == 2 * x) {
            return Ok(None);
        }
        let mut ones: Vec<Vec<usize>> = vec![Vec::new(); x + 1];
        for (&u, &d) in &dist {
            if d <= x && view.state(u)?.cb {
                ones[d].push(u);
            }
        }
        if ones[..=y.min(x)].iter().any(|l| l.len() > 1) || ones[(y + 1).min(x + 1)..].iter().any(|l| !l.is_empty()) {
            return Ok(None);
        }
        let mut path = vec![true];
        let mut frontier = vec![me];
        for j in 1..y {
            let mut next = BTreeSet::new();
            for &u in &frontier {
                for w in view.neighbors(u)? {
                    if dist.get(&w) == Some(&j) {
                        next.insert(w);
                    }
                }
            }
            match ones[j].first() {
                Some(one) if next.contains(one) => {
                    frontier = vec![*one];
                    path.push(true);
                }
                Some(_) => return Ok(None),
                None if next.is_empty() => return Ok(None),
                None => {
                    frontier = next.into_iter().collect();
                    path.push(false);
                }
            }
        }
        if y < ones.len() && !ones[y].is_empty() {
            return Ok(None);
        }
        Ok(decode_cluster_color(&path))
    }

    /// Decodes the cluster centered at `v`, from any view that contains the
    /// residual ball of radius 2x + r + r̄ + 1 around `v`.
    fn outcome(&self, view: &View<NodeState>, v: usize) -> Result<Outcome> {
        let consts = self.consts();
        let rbar = self.problem.radius();
        let keep = |u: usize| view.state(u).map(|s| !s.clustered).unwrap_or(false);
        let dist = layers(view, v, 2 * consts.x + consts.r + rbar, &keep)?;
        let alpha = alpha_from(&dist, consts)?;
        let members: HashSet<usize> = dist.iter().filter(|&(_, &d)| d <= alpha + consts.r).map(|(&u, _)| u).collect();
        let inner: Vec<usize> = dist.iter().filter(|&(_, &d)| d <= alpha).map(|(&u, _)| u).collect();
        let border: Vec<usize> = dist.iter().filter(|&(_, &d)| d == alpha + consts.r).map(|(&u, _)| u).collect();
        let s = border_region(view, &border, rbar, &keep)?;
        let z = payload_nodes(view, &inner, &|u| Ok(view.state(u)?.cb))?;
        let kb = self.problem.label_bits();
        let mut cursor = 0usize;
        let mut labels: HashMap<usize, Vec<u8>> = HashMap::new();
        for &u in &s {
            let slots = self.problem.slots(view.degree(u)?);
            let mut mine = Vec::with_capacity(slots);
            for _ in 0..slots {
                let mut val = 0u64;
                for _ in 0..kb {
                    let node = z.get(cursor).ok_or_else(|| {
                        Error::Decode(format!("payload of the cluster at node {} runs past Z′", view.id(v).unwrap_or(0)))
                    })?;
                    val = (val << 1) | view.state(*node)?.bit as u64;
                    cursor += 1;
                }
                mine.push(val as u8);
            }
            labels.insert(u, mine);
        }
        // Completion: members not fully fixed are free; everything within
        // 2r̄ of the members (the checkers' views) contributes known labels.
        let mut slots: Slots = vec![Vec::new(); view.n()];
        let mut around = BTreeSet::new();
        for &u in &members {
            around.extend(crate::lcl::within(view, u, 2 * rbar)?);
        }
        for &w in &around {
            let known = &view.state(w)?.fixed;
            slots[w] = match labels.get(&w) {
                Some(l) => {
                    let l: Vec<Option<u8>> = l.iter().map(|&a| Some(a)).collect();
                    if known.iter().any(Option::is_some) && *known != l {
                        return Err(Error::Decode(format!("payloads disagree on node {}", view.id(w)?)));
                    }
                    l
                }
                None => known.clone(),
            };
        }
        let mut free: Vec<usize> = members.iter().copied().filter(|&u| !full(&slots[u], &self.problem, view, u)).collect();
        free.sort_unstable();
        let inputs = self.inputs_view(view, &around)?;
        self.problem.complete(view, &inputs, &mut slots, &free, self.config.search_cap)?;
        for &u in &members {
            labels.insert(u, slots[u].iter().map(|l| l.unwrap_or(0)).collect());
        }
        Ok(Outcome { members, labels })
    }

    fn inputs_view(&self, view: &View<NodeState>, nodes: &BTreeSet<usize>) -> Result<Vec<u8>> {
        if self.inputs.is_empty() {
            return Ok(Vec::new());
        }
        let mut out = vec![0u8; view.n()];
        for &u in nodes {
            view.state(u)?;
            out[u] = self.inputs[u];
        }
        Ok(out)
    }

    pub fn decode_labeling(&self, g: &Graph, advice: &[Bits]) -> Result<(Labeling, LocalityReport)> {
        if advice.len() != g.n() || advice.iter().any(|b| b.len() != 1) {
            return Err(Error::Decode("expected exactly one advice bit per node".into()));
        }
        let raw: Vec<bool> = advice.iter().map(|b| b.0[0]).collect();
        let strip = FnAlgorithm {
            radius: 1,
            f: |view: &View<bool>| {
                let me = view.center();
                let one = *view.state(me)?;
                Ok(one && view.neighbors(me)?.iter().any(|&w| *view.state(w).unwrap_or(&false)))
            },
        };
        let (cb, mut locality) = run_local(g, &raw, &strip)?;
        let mut state: Vec<NodeState> = (0..g.n())
            .map(|v| NodeState { bit: raw[v], cb: cb[v], clustered: false, fixed: Vec::new(), mark: None })
            .collect();
        let mut last = 0u32;
        let mut phases = 0usize;
        loop {
            let detect = FnAlgorithm { radius: self.detect_radius(), f: |view: &View<NodeState>| self.detect(view) };
            let (marks, loc) = run_local(g, &state, &detect)?;
            locality = locality.then(&loc);
            let Some(color) = marks.iter().flatten().copied().filter(|&c| c > last).min() else { break };
            phases += 1;
            if phases > self.consts().palette_cap() {
                return Err(Error::Decode("more center colors than the palette allows".into()));
            }
            for (v, m) in marks.into_iter().enumerate() {
                state[v].mark = m.filter(|&c| c == color);
            }
            let memo: RefCell<HashMap<usize, Rc<Outcome>>> = RefCell::new(HashMap::new());
            let consts = *self.consts();
            let reach = 2 * consts.x + consts.r + self.problem.radius();
            let member = FnAlgorithm {
                radius: self.member_radius(),
                f: |view: &View<NodeState>| {
                    let me = view.center();
                    let st = view.state(me)?;
                    if st.clustered {
                        return Ok((true, st.fixed.clone()));
                    }
                    let keep = |u: usize| view.state(u).map(|s| !s.clustered).unwrap_or(false);
                    let near = layers(view, me, reach, &keep)?;
                    let mut centers: Vec<usize> =
                        near.keys().copied().filter(|&u| view.state(u).is_ok_and(|s| s.mark.is_some())).collect();
                    centers.sort_unstable();
                    let mut clustered = false;
                    let mut fixed = st.fixed.clone();
                    for c in centers {
                        let cached = memo.borrow().get(&c).cloned();
                        let out = match cached {
                            Some(o) => o,
                            None => {
                                let o = Rc::new(self.outcome(view, c)?);
                                memo.borrow_mut().insert(c, o.clone());
                                o
                            }
                        };
                        if out.members.contains(&me) {
                            if clustered {
                                return Err(Error::Decode("node claimed by two cluster centers".into()));
                            }
                            clustered = true;
                        }
                        if let Some(l) = out.labels.get(&me) {
                            fixed = l.iter().map(|&a| Some(a)).collect();
                        }
                    }
                    Ok((clustered, fixed))
                },
            };
            let (res, loc) = run_local(g, &state, &member)?;
            locality = locality.then(&loc);
            for (v, (clustered, fixed)) in res.into_iter().enumerate() {
                state[v].clustered = clustered;
                state[v].fixed = fixed;
                state[v].mark = None;
            }
            last = color;
        }
        let memo: RefCell<HashMap<usize, Rc<HashMap<usize, Vec<u8>>>>> = RefCell::new(HashMap::new());
        let x = self.consts().x;
        let finish = FnAlgorithm {
            radius: self.leftover_radius(),
            f: |view: &View<NodeState>| {
                let me = view.center();
                let st = view.state(me)?;
                if st.clustered {
                    return Ok(st.fixed.iter().map(|l| l.unwrap_or(0)).collect::<Vec<u8>>());
                }
                let keep = |u: usize| view.state(u).map(|s| !s.clustered).unwrap_or(false);
                let comp = layers(view, me, 2 * x, &keep)?;
                if comp.values().any(|&d| d >= 2 * x) {
                    return Err(Error::Decode("unclustered component reaches distance 2x".into()));
                }
                let root = *comp.keys().min_by_key(|&&u| view.id(u).unwrap_or(u64::MAX)).expect("nonempty");
                let cached = memo.borrow().get(&root).cloned();
                let solved = match cached {
                    Some(s) => s,
                    None => {
                        let nodes: Vec<usize> = comp.keys().copied().collect();
                        let s = Rc::new(self.complete_region(view, &nodes)?);
                        memo.borrow_mut().insert(root, s.clone());
                        s
                    }
                };
                Ok(solved[&me].clone())
            },
        };
        let (labels, loc) = run_local(g, &state, &finish)?;
        locality = locality.then(&loc);
        locality.declared_radius = self.declared_radius();
        Ok((Labeling { slots: labels }, locality))
    }

    fn complete_region(&self, view: &View<NodeState>, nodes: &[usize]) -> Result<HashMap<usize, Vec<u8>>> {
        let rbar = self.problem.radius();
        let mut around = BTreeSet::new();
        for &u in nodes {
            around.extend(crate::lcl::within(view, u, 2 * rbar)?);
        }
        let mut slots: Slots = vec![Vec::new(); view.n()];
        for &w in &around {
            slots[w] = view.state(w)?.fixed.clone();
        }
        let mut free: Vec<usize> = nodes.iter().copied().filter(|&u| !full(&slots[u], &self.problem, view, u)).collect();
        free.sort_unstable();
        let inputs = self.inputs_view(view, &around)?;
        self.problem.complete(view, &inputs, &mut slots, &free, self.config.search_cap)?;
        Ok(nodes.iter().map(|&u| (u, slots[u].iter().map(|l| l.unwrap_or(0)).collect())).collect())
    }
}

fn full(slots: &[Option<u8>], problem: &LclProblem, view: &View<NodeState>, u: usize) -> bool {
    let need = view.degree(u).map(|d| problem.slots(d)).unwrap_or(usize::MAX);
    slots.len() == need && slots.iter().all(Option::is_some)
}

impl Schema for SubexpSchema {
    fn name(&self) -> String {
        format!("lcl-subexp:{}", self.problem.name())
    }
    fn gamma0(&self) -> usize {
        0
    }
    fn threshold(&self, _c: f64, _gamma: usize) -> f64 {
        0.0
    }
    fn params(&self) -> Option<ComposableParams> {
        None
    }
    fn radius(&self, _g: &Graph) -> usize {
        self.declared_radius()
    }
    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        Ok(self.encode_detailed(g)?.advice)
    }
    fn decode(&self, g: &Graph, advice: &[Bits], _deps: &[&Solution]) -> Result<Decoded> {
        let (labeling, locality) = self.decode_labeling(g, advice)?;
        Ok(Decoded { solution: Solution::Labeling(labeling), locality })
    }
    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        self.problem.check(g, &self.inputs, solution.as_labeling()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate_graph, GeneratorKind};

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn color_strings() {
        assert_eq!(encode_cluster_color(5, 64).unwrap().to_string(), "11110110".to_string() + "11101101110" + "0");
        assert_eq!(encode_cluster_color(1, 64).unwrap().to_string(), "11110110".to_string() + "1110" + "0");
        assert!(matches!(encode_cluster_color(5, 19), Err(Error::Infeasible(_))));
        for i in 1..600u32 {
            let mut b = encode_cluster_color(i, 64).unwrap().0;
            b.resize(64, false);
            assert_eq!(decode_cluster_color(&b), Some(i));
        }
        assert_eq!(decode_cluster_color(&bits("111101100000")), None);
        assert_eq!(decode_cluster_color(&bits("1111011011100100")), None);
        assert_eq!(decode_cluster_color(&bits("11110110111")), None);
    }

    #[test]
    fn constants_formulae() {
        let k = ClusterConstants::new(3, 2, 0).unwrap();
        assert!((k.c - (1.125f64).log2() / 9.0).abs() < 1e-12);
        assert_eq!(k.x, 12);
        assert!(k.check_family().is_err());
        assert!(ClusterConstants::new(2, 2, 500).unwrap().check_family().is_err());
        let fam = ClusterConstants::for_family(3, 2, cycle_ball).unwrap();
        fam.check_family().unwrap();
        // Brute-force oracle for the cycle family bound.
        let x0 = (1..100_000).rev().find(|&x| cycle_ball(x) > (fam.c * x as f64).exp2()).unwrap() + 1;
        assert_eq!(fam.x0, x0);
    }

    #[test]
    fn alpha_on_paths() {
        let g = generate_graph(GeneratorKind::Path, &[400], 3).unwrap();
        let k = ClusterConstants::new(1, 2, 10).unwrap();
        let mid = (0..400).find(|&v| g.distance(v, 0).is_some_and(|d| d == 200) || g.distance(v, 0) == Some(199));
        let v = mid.unwrap();
        let a = find_alpha(&g, v, &k).unwrap();
        // Scan oracle.
        let dist = g.distances(v, usize::MAX);
        let ball = |r: usize| dist.iter().flatten().filter(|&&d| d <= r).count();
        let ring = |r: usize| dist.iter().flatten().filter(|&&d| d == r).count();
        let want = (k.x..=2 * k.x).find(|&al| ball(al) >= 2 * ring(al + 1)).unwrap();
        assert_eq!(a, want);
        // Small component: the ring is empty, so the first α is taken.
        let tiny = generate_graph(GeneratorKind::Path, &[5], 1).unwrap();
        assert_eq!(find_alpha(&tiny, 0, &k).unwrap(), k.x);
    }

    #[test]
    fn alpha_on_grid() {
        let g = generate_graph(GeneratorKind::Grid2d, &[41, 41], 5).unwrap();
        let k = ClusterConstants::new(1, 4, 5).unwrap();
        let v = (0..g.n()).find(|&v| g.ball(v, 20).len() == 2 * 400 + 40 + 1).unwrap();
        let dist = g.distances(v, usize::MAX);
        let ball = |r: usize| dist.iter().flatten().filter(|&&d| d <= r).count();
        let ring = |r: usize| dist.iter().flatten().filter(|&&d| d == r).count();
        let want = (k.x..=2 * k.x).find(|&al| ball(al) >= 4 * ring(al + 1)).unwrap();
        assert_eq!(find_alpha(&g, v, &k).unwrap(), want);
    }

    #[test]
    fn clustering_of_a_cycle_is_disjoint() {
        let g = generate_graph(GeneratorKind::Cycle, &[200], 9).unwrap();
        let k = ClusterConstants::new(1, 2, 8).unwrap();
        let layout = build_clustering(&g, &k).unwrap();
        assert!(!layout.clusters.is_empty());
        let mut seen = vec![0; g.n()];
        for c in &layout.clusters {
            for &(u, _) in &c.members {
                seen[u] += 1;
            }
            assert_eq!(c.path.len(), k.y());
        }
        for &u in &layout.leftover {
            seen[u] += 1;
        }
        assert!(seen.iter().all(|&s| s == 1));
        // Small diameter: no clusters at all.
        let small = generate_graph(GeneratorKind::Cycle, &[30], 9).unwrap();
        let l = build_clustering(&small, &k).unwrap();
        assert!(l.clusters.is_empty());
        assert_eq!(l.leftover.len(), 30);
    }

    #[test]
    fn border_labels_round_trip() {
        let g = generate_graph(GeneratorKind::Cycle, &[200], 9).unwrap();
        let k = ClusterConstants::new(1, 2, 24).unwrap();
        let p = LclProblem::coloring(3);
        let sol = p.solve(&g, &[], DEFAULT_SEARCH_CAP).unwrap();
        let layout = build_clustering(&g, &k).unwrap();
        let c = &layout.clusters[0];
        let (s, b) = encode_border_solution(&g, &p, &layout, c, &sol).unwrap();
        assert_eq!(b.len(), 2 * s.len());
        for (j, &u) in s.iter().enumerate() {
            let l = Bits(b.0[2 * j..2 * j + 2].to_vec()).to_uint() as u8;
            assert_eq!(l, sol.slots[u][0]);
        }
    }

    #[test]
    fn small_graph_is_solved_without_advice() {
        let g = generate_graph(GeneratorKind::Cycle, &[40], 2).unwrap();
        let k = ClusterConstants::for_family(3, 2, cycle_ball).unwrap();
        let s = SubexpSchema::new(LclProblem::coloring(3), SubexpConfig::verified(k)).unwrap();
        let enc = s.encode_detailed(&g).unwrap();
        assert!(enc.layout.clusters.is_empty());
        assert!(enc.advice.bits.iter().all(|b| b.0 == [false]));
        let out = s.decode(&g, &enc.advice.bits, &[]).unwrap();
        s.check(&g, &out.solution, &[]).unwrap();
    }

    fn relaxed_roundtrip(g: &Graph, p: LclProblem, k: ClusterConstants) -> SubexpEncoding {
        let s = SubexpSchema::new(p, SubexpConfig::relaxed(k)).unwrap();
        let enc = s.encode_detailed(g).unwrap();
        let out = s.decode(g, &enc.advice.bits, &[]).unwrap();
        s.check(g, &out.solution, &[]).unwrap();
        enc
    }

    #[test]
    fn clusters_decode_on_a_long_cycle() {
        let g = generate_graph(GeneratorKind::Cycle, &[1200], 4).unwrap();
        let k = ClusterConstants::new(1, 2, 64).unwrap();
        for p in [LclProblem::coloring(3), LclProblem::mis()] {
            let enc = relaxed_roundtrip(&g, p, k);
            assert!(enc.layout.clusters.len() >= 3);
            // Payload 1s are isolated and clustering 1s come in runs of ≥ 2.
            for v in 0..g.n() {
                if enc.advice.bits[v].0[0] {
                    let on_path = enc.layout.clusters.iter().any(|c| {
                        let marked = encode_cluster_color(c.color, k.y()).unwrap().len();
                        c.path[..marked].contains(&v)
                    });
                    let touching = g.neighbors(v).iter().any(|&w| enc.advice.bits[w].0[0]);
                    assert_eq!(on_path, touching);
                }
            }
        }
    }
}
