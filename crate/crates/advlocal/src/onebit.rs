//! Conversion of a composable variable-length schema into a uniform
//! 1-bit-per-node schema.
//!
//! Bit-holding nodes of the wrapped schema are marked with a 1. Holders
//! closer than d = ⌊α/(10γ)⌋ are grouped into clusters; each cluster's
//! strings are packed, run-length coded, and written along a shortest path
//! ("ray") that starts far enough from the cluster that its 1-runs never
//! touch the markers. Runs of γ+1 ones mean 0 and runs of γ+2 ones mean 1,
//! while marker groups have at most γ nodes, so the two are told apart by
//! component size. Components too small to host a ray are solved by
//! re-running the wrapped encoder on the whole component.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::advice::{require_threshold, AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::{ceil_log2, run_to_bit, runlength_encode, Bits};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, LocalAlgorithm, View};
use crate::solution::Solution;

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 10_000;

pub struct OneBit {
    inner: Box<dyn Schema>,
    params: ComposableParams,
    brute_force_cap: usize,
}

/// Wraps `inner` as a uniform 1-bit schema at parameters (c, γ, α).
pub fn to_one_bit(inner: Box<dyn Schema>, params: ComposableParams) -> Result<OneBit> {
    require_threshold(inner.as_ref(), &params)?;
    Ok(OneBit { inner, params, brute_force_cap: DEFAULT_BRUTE_FORCE_CAP })
}

impl OneBit {
    pub fn with_brute_force_cap(mut self, cap: usize) -> OneBit {
        self.brute_force_cap = cap;
        self
    }

    pub fn inner(&self) -> &dyn Schema {
        self.inner.as_ref()
    }

    /// Clustering distance d = ⌊α/(10γ)⌋.
    pub fn d(&self) -> usize {
        self.params.alpha / (10 * self.params.gamma)
    }

    pub fn ray_len(&self) -> usize {
        self.d() / 8
    }

    fn reach(&self) -> usize {
        self.d() / 4
    }

    fn check_constants(&self) -> Result<()> {
        let p = &self.params;
        let d = self.d();
        if d < 80 {
            return Err(Error::Infeasible(format!("d = ⌊α/(10γ)⌋ = {d} < 80")));
        }
        let lhs = 16.0 * p.c * p.alpha as f64 / p.gamma as f64;
        if lhs >= (d / 8) as f64 {
            return Err(Error::Infeasible(format!("16cα/γ = {lhs:.2} is not < d/8 = {}", d / 8)));
        }
        Ok(())
    }

    /// Holder clusters: absorb holders within distance d of any member,
    /// starting from holders in ascending ID order.
    fn clusters(&self, g: &Graph, holders: &[usize]) -> Result<Vec<Vec<usize>>> {
        let d = self.d();
        let is_holder: HashSet<usize> = holders.iter().copied().collect();
        let mut assigned = HashSet::new();
        let mut sorted = holders.to_vec();
        sorted.sort_by_key(|&v| g.id(v));
        let mut out = Vec::new();
        for &h in &sorted {
            if assigned.contains(&h) {
                continue;
            }
            assigned.insert(h);
            let mut members = vec![h];
            let mut head = 0;
            while head < members.len() {
                let m = members[head];
                head += 1;
                let mut near: Vec<usize> =
                    g.ball(m, d).into_iter().map(|(u, _)| u).filter(|u| is_holder.contains(u) && !assigned.contains(u)).collect();
                near.sort_by_key(|&u| g.id(u));
                for u in near {
                    assigned.insert(u);
                    members.push(u);
                }
            }
            if members.len() > self.params.gamma {
                return Err(Error::Precondition(format!(
                    "cluster around node {} has {} bit-holders > γ = {}",
                    g.id(h),
                    members.len(),
                    self.params.gamma
                )));
            }
            members.sort_by_key(|&u| g.id(u));
            out.push(members);
        }
        Ok(out)
    }
}

/// Multi-source BFS distances from `sources` up to `limit`.
fn distances_from_set(g: &Graph, sources: &[usize], limit: usize) -> HashMap<usize, usize> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    for &s in sources {
        dist.insert(s, 0);
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == limit {
            continue;
        }
        for &w in g.neighbors(u) {
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Packs member strings: per member, w ones, a 0, the length in w bits,
/// then the string, with w = ⌈log₂(|s|+1)⌉.
fn pack_members(strings: &[&Bits]) -> Bits {
    let mut l = Bits::new();
    for s in strings {
        let w = ceil_log2(s.len() as u64 + 1);
        l.extend_from(&Bits::repeat(true, w));
        l.push(false);
        l.extend_from(&Bits::from_uint(s.len() as u64, w));
        l.extend_from(s);
    }
    l
}

fn unpack_members(l: &Bits, count: usize) -> Result<Vec<Bits>> {
    let s = &l.0;
    let mut pos = 0;
    let mut out = Vec::new();
    while out.len() < count {
        let mut w = 0;
        while s.get(pos) == Some(&true) {
            w += 1;
            pos += 1;
        }
        if s.get(pos) != Some(&false) || w > 32 {
            return Err(Error::Decode("bad member length header".into()));
        }
        pos += 1;
        if pos + w > s.len() {
            return Err(Error::Decode("truncated member length".into()));
        }
        let len = Bits(s[pos..pos + w].to_vec()).to_uint() as usize;
        pos += w;
        if pos + len > s.len() {
            return Err(Error::Decode("truncated member string".into()));
        }
        out.push(Bits(s[pos..pos + len].to_vec()));
        pos += len;
    }
    if pos != s.len() {
        return Err(Error::Decode("trailing payload bits".into()));
    }
    Ok(out)
}

impl Schema for OneBit {
    fn name(&self) -> String {
        format!("one-bit({})", self.inner.name())
    }

    fn gamma0(&self) -> usize {
        self.inner.gamma0()
    }

    fn threshold(&self, c: f64, gamma: usize) -> f64 {
        self.inner.threshold(c, gamma)
    }

    fn params(&self) -> Option<ComposableParams> {
        Some(self.params)
    }

    fn radius(&self, g: &Graph) -> usize {
        self.params.alpha.saturating_add(self.inner.radius(g))
    }

    fn encode(&self, g: &Graph, deps: &[&Solution]) -> Result<AdviceAssignment> {
        if !deps.is_empty() {
            return Err(Error::InvalidParams("one-bit conversion wraps standalone schemas only".into()));
        }
        let inner = self.inner.encode(g, deps)?;
        let budget = self.params.bit_budget();
        if let Some(v) = (0..g.n()).find(|&v| inner.bits[v].len() as f64 > budget) {
            return Err(Error::Infeasible(format!(
                "node {} holds {} bits > c·α/γ³ = {budget:.3}",
                g.id(v),
                inner.bits[v].len()
            )));
        }
        let holders = inner.holders();
        let mut out = vec![false; g.n()];
        if holders.is_empty() {
            return AdviceAssignment::uniform(out.into_iter().map(|b| Bits(vec![b])).collect(), 1);
        }
        self.check_constants()?;
        for &h in &holders {
            out[h] = true;
        }
        let comp_of = component_index(g);
        let ray_len = self.ray_len();
        for cluster in self.clusters(g, &holders)? {
            let dist = distances_from_set(g, &cluster, self.reach());
            let z = dist
                .iter()
                .filter(|(_, &x)| x >= ray_len + 10)
                .map(|(&u, _)| u)
                .min_by_key(|&u| g.id(u));
            let Some(z) = z else {
                // Whole component lies close to the cluster: decoders see it
                // entirely and recompute the wrapped advice themselves.
                let comp = &comp_of.1[comp_of.0[cluster[0]]];
                if comp.len() > self.brute_force_cap {
                    return Err(Error::Infeasible(format!(
                        "component of {} nodes has no payload ray and exceeds the brute-force cap {}",
                        comp.len(),
                        self.brute_force_cap
                    )));
                }
                let (sub, _) = g.induced(comp);
                if sub.diameter() > self.params.alpha {
                    return Err(Error::Infeasible(format!(
                        "component around node {} has no payload ray and diameter > α",
                        g.id(cluster[0])
                    )));
                }
                continue;
            };
            let strings: Vec<&Bits> = cluster.iter().map(|&m| &inner.bits[m]).collect();
            let payload = runlength_encode(&pack_members(&strings), self.params.gamma)?;
            if payload.len() > ray_len {
                return Err(Error::Infeasible(format!(
                    "payload of {} bits exceeds the ray length ⌊d/8⌋ = {ray_len}",
                    payload.len()
                )));
            }
            let mut cur = z;
            for (j, &bit) in payload.0.iter().enumerate() {
                out[cur] = bit;
                if j + 1 < payload.len() {
                    let x = dist[&cur];
                    cur = g
                        .neighbors(cur)
                        .iter()
                        .copied()
                        .find(|w| dist.get(w) == Some(&(x - 1)))
                        .expect("a shortest path continues toward the cluster");
                }
            }
        }
        AdviceAssignment::uniform(out.into_iter().map(|b| Bits(vec![b])).collect(), 1)
    }

    fn decode(&self, g: &Graph, advice: &[Bits], deps: &[&Solution]) -> Result<Decoded> {
        if advice.iter().any(|b| b.len() != 1) {
            return Err(Error::Decode("expected exactly one bit per node".into()));
        }
        let phase = Reconstruct { schema: self, cache: RefCell::new(HashMap::new()) };
        let (strings, first) = run_local(g, advice, &phase)?;
        let inner = self.inner.decode(g, &strings, deps)?;
        Ok(Decoded { solution: inner.solution, locality: first.then(&inner.locality) })
    }

    fn check(&self, g: &Graph, solution: &Solution, deps: &[&Solution]) -> Result<()> {
        self.inner.check(g, solution, deps)
    }
}

fn component_index(g: &Graph) -> (Vec<usize>, Vec<Vec<usize>>) {
    let comps = g.components();
    let mut of = vec![0; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            of[v] = i;
        }
    }
    (of, comps)
}

/// First decoder phase: every node recovers the wrapped schema's string.
struct Reconstruct<'s> {
    schema: &'s OneBit,
    /// Wrapped advice of brute-forced components, keyed by smallest ID.
    cache: RefCell<HashMap<u64, BTreeMap<u64, Bits>>>,
}

impl Reconstruct<'_> {
    fn bit(view: &View<Bits>, u: usize) -> Result<bool> {
        Ok(view.state(u)?.get(0) == Some(true))
    }

    /// The 1-component containing `u`, computed inside the view.
    fn one_component(view: &View<Bits>, u: usize) -> Result<Vec<usize>> {
        let mut comp = vec![u];
        let mut seen = HashSet::from([u]);
        let mut head = 0;
        while head < comp.len() {
            let x = comp[head];
            head += 1;
            for w in view.neighbors(x)? {
                if Self::bit(view, w)? && seen.insert(w) {
                    comp.push(w);
                }
            }
        }
        Ok(comp)
    }

    fn is_marker(&self, view: &View<Bits>, u: usize) -> Result<bool> {
        Ok(Self::bit(view, u)? && Self::one_component(view, u)?.len() <= self.schema.params.gamma)
    }

    /// Cluster of marker `h`, sorted by ID.
    fn cluster_of(&self, view: &View<Bits>, h: usize) -> Result<Vec<usize>> {
        let d = self.schema.d();
        let mut members = vec![h];
        let mut seen = HashSet::from([h]);
        let mut head = 0;
        while head < members.len() {
            let m = members[head];
            head += 1;
            for (u, _) in view.bfs(m, d, |_| true)? {
                if !seen.contains(&u) && self.is_marker(view, u)? {
                    seen.insert(u);
                    members.push(u);
                }
            }
        }
        let mut ids: Vec<(u64, usize)> = members.iter().map(|&u| Ok((view.id(u)?, u))).collect::<Result<_>>()?;
        ids.sort_unstable();
        Ok(ids.into_iter().map(|(_, u)| u).collect())
    }

    /// Payload bits of a cluster, read from runs ordered by decreasing
    /// distance to the cluster. `None` when the cluster has no ray.
    fn payload(&self, view: &View<Bits>, cluster: &[usize]) -> Result<Option<Bits>> {
        let gamma = self.schema.params.gamma;
        let reach = self.schema.reach();
        let mut dist: HashMap<usize, usize> = HashMap::new();
        for &m in cluster {
            for (u, x) in view.bfs(m, reach, |_| true)? {
                let e = dist.entry(u).or_insert(x);
                *e = (*e).min(x);
            }
        }
        let mut runs: Vec<(usize, bool)> = Vec::new();
        let mut seen = HashSet::new();
        let mut near: Vec<(usize, u64, usize)> =
            dist.iter().map(|(&u, &x)| Ok((x, view.id(u)?, u))).collect::<Result<_>>()?;
        near.sort_unstable();
        for (_, _, u) in near {
            if seen.contains(&u) || !Self::bit(view, u)? {
                continue;
            }
            let comp = Self::one_component(view, u)?;
            seen.extend(comp.iter().copied());
            if comp.len() <= gamma {
                continue;
            }
            let far = comp.iter().map(|w| dist.get(w).copied().unwrap_or(usize::MAX)).max().unwrap_or(0);
            runs.push((far, run_to_bit(comp.len(), gamma)?));
        }
        if runs.is_empty() {
            return Ok(None);
        }
        runs.sort_by(|a, b| b.0.cmp(&a.0));
        Ok(Some(Bits(runs.into_iter().map(|(_, b)| b).collect())))
    }

    fn brute_force(&self, view: &View<Bits>) -> Result<Bits> {
        let center_id = view.id(view.center())?;
        let nodes = view.nodes();
        let key = nodes.iter().map(|&u| view.id(u)).collect::<Result<Vec<u64>>>()?.into_iter().min().unwrap_or(0);
        if let Some(map) = self.cache.borrow().get(&key) {
            return Ok(map.get(&center_id).cloned().unwrap_or_default());
        }
        if nodes.len() > self.schema.brute_force_cap {
            return Err(Error::Infeasible("component exceeds the brute-force cap".into()));
        }
        let (sub, _) = view.as_graph();
        let adv = self.schema.inner.encode(&sub, &[])?;
        let map: BTreeMap<u64, Bits> = (0..sub.n()).map(|i| (sub.id(i), adv.bits[i].clone())).collect();
        let own = map.get(&center_id).cloned().unwrap_or_default();
        self.cache.borrow_mut().insert(key, map);
        Ok(own)
    }
}

impl LocalAlgorithm<Bits> for Reconstruct<'_> {
    type Output = Bits;

    fn radius(&self) -> usize {
        self.schema.params.alpha
    }

    fn eval(&self, view: &View<Bits>) -> Result<Bits> {
        let v = view.center();
        let holder = self.is_marker(view, v)?;
        if view.is_closed() {
            // Whole component visible: fall back when some cluster has no ray.
            let mut done = HashSet::new();
            for u in view.nodes() {
                if done.contains(&u) || !self.is_marker(view, u)? {
                    continue;
                }
                let cluster = self.cluster_of(view, u)?;
                done.extend(cluster.iter().copied());
                if self.payload(view, &cluster)?.is_none() {
                    return self.brute_force(view);
                }
            }
        }
        if !holder {
            return Ok(Bits::new());
        }
        let cluster = self.cluster_of(view, v)?;
        let Some(runs) = self.payload(view, &cluster)? else {
            return Err(Error::Decode("bit-holder without a payload ray".into()));
        };
        let strings = unpack_members(&runs, cluster.len())?;
        let pos = cluster.iter().position(|&u| u == v).expect("holder is in its cluster");
        Ok(strings[pos].clone())
    }
}
