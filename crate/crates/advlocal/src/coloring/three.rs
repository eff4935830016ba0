//! 3-coloring of 3-colorable graphs with one bit per node.
//!
//! The encoder fixes a greedy 3-coloring and puts a 1 on every node of
//! color 1. Components of the graph induced by colors 2 and 3 that are
//! small get nothing more; in large ones, groups of one or two connected
//! blobs of extra 1s fix the 2-coloring: one blob means the group's
//! smallest node has color 2, two blobs mean color 3. A 1 is read as
//! "color 1" exactly when the node has at most one neighbor holding a 1.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::constants::{ColoringConstants, Constant};
use crate::advice::{AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::lcl::{LclProblem, DEFAULT_SEARCH_CAP};
use crate::local::{run_local, FnAlgorithm, View};
use crate::search::{self, BinaryCsp, SearchStats};
use crate::solution::{check_vertex_coloring, Solution};

/// Active distances of one run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeConsts {
    pub delta: usize,
    pub small_diameter: usize,
    pub ruling_spacing: usize,
    pub candidate_radius: usize,
    pub candidate_spacing: usize,
    pub shift_reach: usize,
    pub group_radius: usize,
    pub candidate_count: usize,
}

impl ThreeConsts {
    pub fn new(consts: &ColoringConstants, delta: usize) -> ThreeConsts {
        // These constants do not depend on α.
        let get = |c| consts.get(c, 1, delta);
        ThreeConsts {
            delta,
            small_diameter: get(Constant::SmallDiameter),
            ruling_spacing: get(Constant::RulingSpacing),
            candidate_radius: get(Constant::CandidateRadius),
            candidate_spacing: get(Constant::CandidateSpacing),
            shift_reach: get(Constant::ShiftReach),
            group_radius: get(Constant::GroupRadius),
            candidate_count: get(Constant::CandidateCount),
        }
    }

    /// Distance within a large component from any node to the nearest
    /// extra 1, by construction: ruling-set domination, then candidate
    /// radius, then the farthest selected node.
    pub fn find_radius(&self) -> usize {
        self.ruling_spacing.saturating_sub(1) + self.candidate_radius + self.delta.max(self.shift_reach + 1)
    }

    pub fn view_radius(&self) -> usize {
        (self.small_diameter + 2).max(self.find_radius() + self.group_radius + 1)
    }
}

/// Lowers colors until every node of color i sees all colors below i.
pub fn greedify(g: &Graph, colors: &[u32]) -> Vec<u32> {
    let mut c = colors.to_vec();
    let order = g.id_order();
    loop {
        let mut changed = false;
        for &v in &order {
            let used: HashSet<u32> = g.neighbors(v).iter().map(|&w| c[w]).collect();
            let free = (1..).find(|x| !used.contains(x)).expect("some color is free");
            if free < c[v] {
                c[v] = free;
                changed = true;
            }
        }
        if !changed {
            return c;
        }
    }
}

/// True when every node of color i > 1 has a neighbor of each color below i.
pub fn is_greedy(g: &Graph, colors: &[u32]) -> bool {
    (0..g.n()).all(|v| (1..colors[v]).all(|c| g.neighbors(v).iter().any(|&w| colors[w] == c)))
}

/// BFS from `src` through nodes with `mask` set, up to `limit` hops.
fn bfs_masked(g: &Graph, src: usize, limit: usize, mask: &[bool]) -> Vec<(usize, usize)> {
    let mut seen = HashMap::from([(src, 0usize)]);
    let mut out = vec![(src, 0)];
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let d = seen[&u];
        if d == limit {
            continue;
        }
        for &w in g.neighbors(u) {
            if mask[w] && !seen.contains_key(&w) {
                seen.insert(w, d + 1);
                out.push((w, d + 1));
                queue.push_back(w);
            }
        }
    }
    out
}

/// Same, sorted by (distance, ID).
fn near_masked(g: &Graph, src: usize, limit: usize, mask: &[bool]) -> Vec<(usize, usize)> {
    let mut v = bfs_masked(g, src, limit, mask);
    v.sort_by_key(|&(u, d)| (d, g.id(u)));
    v
}

/// Selection of the closest node with two color-1 neighbors, or else the
/// closest adjacent pair without a common color-1 neighbor, among nodes of
/// `allowed` within `reach` of `v`.
fn single_or_double(g: &Graph, phi: &[u32], v: usize, reach: usize, comp: &[bool], allowed: &dyn Fn(usize) -> bool) -> Option<Vec<usize>> {
    let ones = |z: usize| -> Vec<usize> { g.neighbors(z).iter().copied().filter(|&w| phi[w] == 1).collect() };
    let near = near_masked(g, v, reach, comp);
    if let Some(&(w, _)) = near.iter().find(|&&(z, _)| allowed(z) && ones(z).len() >= 2) {
        return Some(vec![w]);
    }
    let within: HashSet<usize> = near.iter().map(|&(z, _)| z).collect();
    for &(x, _) in &near {
        if !allowed(x) {
            continue;
        }
        let ox = ones(x);
        let mut ys: Vec<usize> =
            g.neighbors(x).iter().copied().filter(|&y| comp[y] && within.contains(&y) && allowed(y)).collect();
        ys.sort_by_key(|&y| g.id(y));
        if let Some(y) = ys.into_iter().find(|&y| ones(y).iter().all(|o| !ox.contains(o))) {
            return Some(vec![x, y]);
        }
    }
    None
}

/// One candidate's selections.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    pub node: usize,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl Candidate {
    pub fn union(&self) -> Vec<usize> {
        self.first.iter().chain(&self.second).copied().collect()
    }
}

/// Selections around `v`, or `None` when either is missing nearby.
fn candidate(g: &Graph, phi: &[u32], v: usize, k: &ThreeConsts, comp: &[bool]) -> Option<Candidate> {
    let first = single_or_double(g, phi, v, k.delta, comp, &|_| true)?;
    let mut blocked: HashSet<usize> = HashSet::new();
    for &s in &first {
        blocked.insert(s);
        for &w in g.neighbors(s) {
            blocked.insert(w);
            if phi[w] == 1 {
                blocked.extend(g.neighbors(w).iter().copied());
            }
        }
    }
    // The second selection may sit one hop past the reach when it is a pair.
    let second = single_or_double(g, phi, v, k.shift_reach + 1, comp, &|z| !blocked.contains(&z))?;
    Some(Candidate { node: v, first, second })
}

/// One (component, ruling node) group of extra 1s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub component: usize,
    pub ruling: usize,
    pub chosen: Candidate,
    /// Nodes given a 1.
    pub marked: Vec<usize>,
}

/// A checked inequality between a measured distance and a constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    pub measured: usize,
    pub bound: usize,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeEncoding {
    pub advice: AdviceAssignment,
    pub greedy: Vec<u32>,
    /// Components of the color-2/3 subgraph that carry groups.
    pub large: Vec<Vec<usize>>,
    pub groups: Vec<Group>,
    pub search: SearchStats,
    pub checks: Vec<Inequality>,
    pub consts: ThreeConsts,
}

struct GroupCsp<'a> {
    /// touched[var][value]: color-1 nodes adjacent to the candidate's union.
    touched: &'a [Vec<Vec<usize>>],
}

impl BinaryCsp for GroupCsp<'_> {
    fn num_vars(&self) -> usize {
        self.touched.len()
    }
    fn domain_size(&self, var: usize) -> usize {
        self.touched[var].len()
    }
    fn conflict(&self, assign: &[Option<usize>], var: usize) -> Option<usize> {
        let mine = &self.touched[var][assign[var]?];
        (0..assign.len()).find(|&b| {
            b != var && assign[b].is_some_and(|val| self.touched[b][val].iter().any(|u| mine.contains(u)))
        })
    }
}

pub struct ThreeColoringSchema {
    consts: ColoringConstants,
    seed: u64,
    hint: Option<Vec<u32>>,
}

/// The 1-bit 3-coloring schema. `hint` is a known proper 3-coloring (for
/// instance a planted one); without it the encoder searches for one.
pub fn three_coloring_schema(consts: ColoringConstants, seed: u64, hint: Option<Vec<u32>>) -> ThreeColoringSchema {
    ThreeColoringSchema { consts, seed, hint }
}

impl ThreeColoringSchema {
    pub fn consts(&self, g: &Graph) -> ThreeConsts {
        ThreeConsts::new(&self.consts, g.max_degree())
    }

    fn base_coloring(&self, g: &Graph) -> Result<Vec<u32>> {
        let colors = match &self.hint {
            Some(h) => {
                if h.len() != g.n() {
                    return Err(Error::InvalidParams(format!("hint has {} colors for {} nodes", h.len(), g.n())));
                }
                h.clone()
            }
            None => {
                let l = LclProblem::coloring(3).solve(g, &[], DEFAULT_SEARCH_CAP)?;
                l.slots.iter().map(|s| s.first().copied().unwrap_or(0) as u32 + 1).collect()
            }
        };
        check_vertex_coloring(g, &colors, 3, false).map_err(|e| Error::Precondition(format!("not a 3-coloring: {e}")))?;
        Ok(colors)
    }

    pub fn encode_detailed(&self, g: &Graph) -> Result<ThreeEncoding> {
        let k = self.consts(g);
        let phi = greedify(g, &self.base_coloring(g)?);
        let mut bits: Vec<bool> = phi.iter().map(|&c| c == 1).collect();
        let two_three: Vec<bool> = phi.iter().map(|&c| c != 1).collect();
        let nodes23: Vec<usize> = (0..g.n()).filter(|&v| two_three[v]).collect();
        let (sub, map) = g.induced(&nodes23);
        let mut large: Vec<Vec<usize>> = Vec::new();
        let mut max_small = 0;
        for comp in sub.components() {
            let members: Vec<usize> = comp.iter().map(|&i| map[i]).collect();
            let (c, _) = sub.induced(&comp);
            let diam = c.diameter();
            if diam <= k.small_diameter {
                max_small = max_small.max(diam);
            } else {
                large.push(members);
            }
        }

        // Variables: one per (component, ruling node), domain = candidates.
        let mut vars: Vec<(usize, usize, Vec<Candidate>)> = Vec::new();
        let mut mask = vec![false; g.n()];
        for (ci, members) in large.iter().enumerate() {
            for &v in members {
                mask[v] = true;
            }
            let (cg, cmap) = g.induced(members);
            let ruling: Vec<usize> = cg
                .ruling_set(k.ruling_spacing, k.ruling_spacing.saturating_sub(1).max(1))?
                .into_iter()
                .map(|i| cmap[i])
                .collect();
            for r in ruling {
                let mut q: Vec<Candidate> = Vec::new();
                for (v, _) in near_masked(g, r, k.candidate_radius, &mask) {
                    if q.len() == k.candidate_count {
                        break;
                    }
                    let spaced = q.iter().all(|c| {
                        bfs_masked(g, c.node, k.candidate_spacing.saturating_sub(1), &mask).iter().all(|&(z, _)| z != v)
                    });
                    if !spaced {
                        continue;
                    }
                    if let Some(c) = candidate(g, &phi, v, &k, &mask) {
                        q.push(c);
                    }
                }
                if q.is_empty() {
                    return Err(Error::Infeasible(format!(
                        "no candidate within candidate_radius {} of ruling node {} has both selections",
                        k.candidate_radius,
                        g.id(r)
                    )));
                }
                vars.push((ci, r, q));
            }
            for &v in members {
                mask[v] = false;
            }
        }

        let touched: Vec<Vec<Vec<usize>>> = vars
            .iter()
            .map(|(_, _, q)| {
                q.iter()
                    .map(|c| {
                        let mut t: Vec<usize> =
                            c.union().iter().flat_map(|&s| g.neighbors(s).iter().copied()).filter(|&w| phi[w] == 1).collect();
                        t.sort_unstable();
                        t.dedup();
                        t
                    })
                    .collect()
            })
            .collect();
        let csp = GroupCsp { touched: &touched };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let (assign, stats) = search::solve(&csp, &mut rng, 10 * vars.len(), |_, a, b| {
            format!("groups at ruling nodes {} and {} share a color-1 neighbor", g.id(vars[a].1), g.id(vars[b].1))
        })?;

        let mut groups = Vec::new();
        for ((ci, r, q), val) in vars.iter().zip(assign) {
            let chosen = q[val].clone();
            let union = chosen.union();
            let s = *union.iter().min_by_key(|&&x| g.id(x)).expect("selections are nonempty");
            let marked = if phi[s] == 2 {
                if chosen.first.contains(&s) {
                    chosen.first.clone()
                } else {
                    chosen.second.clone()
                }
            } else {
                union
            };
            for &m in &marked {
                bits[m] = true;
            }
            groups.push(Group { component: *ci, ruling: *r, chosen, marked });
        }

        let checks = self.instance_checks(g, &k, &phi, &bits, &large, &groups, max_small);
        if let Some(bad) = checks.iter().find(|c| !c.holds) {
            return Err(Error::Infeasible(format!("{}: measured {} against {}", bad.name, bad.measured, bad.bound)));
        }
        let advice = AdviceAssignment::uniform(bits.into_iter().map(|b| Bits(vec![b])).collect(), 1)?;
        Ok(ThreeEncoding { advice, greedy: phi, large, groups, search: stats, checks, consts: k })
    }

    #[allow(clippy::too_many_arguments)]
    fn instance_checks(
        &self,
        g: &Graph,
        k: &ThreeConsts,
        phi: &[u32],
        bits: &[bool],
        large: &[Vec<usize>],
        groups: &[Group],
        max_small: usize,
    ) -> Vec<Inequality> {
        let mut checks = vec![Inequality {
            name: "small component diameter <= small_diameter".into(),
            measured: max_small,
            bound: k.small_diameter,
            holds: max_small <= k.small_diameter,
        }];
        let mut comp_mask: Vec<Vec<bool>> = Vec::new();
        for members in large {
            let mut m = vec![false; g.n()];
            for &v in members {
                m[v] = true;
            }
            comp_mask.push(m);
        }
        let group_of: HashMap<usize, usize> =
            groups.iter().enumerate().flat_map(|(i, gr)| gr.marked.iter().map(move |&m| (m, i))).collect();

        // Every marked node sees its whole group, and nothing else, within
        // the group radius.
        let mut spread = 0;
        let mut closest = usize::MAX;
        for (i, gr) in groups.iter().enumerate() {
            let mask = &comp_mask[gr.component];
            for &w in &gr.marked {
                let ball: HashMap<usize, usize> = bfs_masked(g, w, usize::MAX, mask).into_iter().collect();
                for &m in &gr.marked {
                    spread = spread.max(ball[&m]);
                }
                for (&z, &d) in &ball {
                    if group_of.get(&z).is_some_and(|&j| j != i) {
                        closest = closest.min(d);
                    }
                }
            }
        }
        checks.push(Inequality {
            name: "in-group distance <= group_radius".into(),
            measured: spread,
            bound: k.group_radius,
            holds: spread <= k.group_radius,
        });
        let shown = if closest == usize::MAX { k.group_radius + 1 } else { closest };
        checks.push(Inequality {
            name: "distance between groups > group_radius".into(),
            measured: shown,
            bound: k.group_radius,
            holds: closest > k.group_radius,
        });

        // Every node of a large component reaches a marked node in it.
        let mut far = 0;
        for (ci, members) in large.iter().enumerate() {
            let mask = &comp_mask[ci];
            let sources: Vec<usize> = members.iter().copied().filter(|&v| group_of.contains_key(&v)).collect();
            let mut dist: HashMap<usize, usize> = sources.iter().map(|&s| (s, 0)).collect();
            let mut queue: VecDeque<usize> = sources.into_iter().collect();
            while let Some(u) = queue.pop_front() {
                for &w in g.neighbors(u) {
                    if mask[w] && !dist.contains_key(&w) {
                        dist.insert(w, dist[&u] + 1);
                        queue.push_back(w);
                    }
                }
            }
            for &v in members {
                far = far.max(dist.get(&v).copied().unwrap_or(usize::MAX));
            }
        }
        checks.push(Inequality {
            name: "distance to a marked node <= find_radius".into(),
            measured: far.min(k.find_radius() + 1),
            bound: k.find_radius(),
            holds: far <= k.find_radius(),
        });

        // The read-back color-1 set.
        let wrong = (0..g.n()).filter(|&v| is_type_one(g, bits, v) != (phi[v] == 1)).count();
        checks.push(Inequality { name: "nodes misread as color 1 or not".into(), measured: wrong, bound: 0, holds: wrong == 0 });
        checks
    }

    pub fn decode_coloring(&self, g: &Graph, advice: &[Bits]) -> Result<(Vec<u32>, crate::local::LocalityReport)> {
        if advice.len() != g.n() || advice.iter().any(|b| b.len() != 1) {
            return Err(Error::Decode("the 3-coloring schema expects exactly one bit per node".into()));
        }
        let k = self.consts(g);
        let bit: Vec<bool> = advice.iter().map(|b| b.0[0]).collect();
        let alg = FnAlgorithm { radius: k.view_radius(), f: |view: &View<bool>| decode_node(view, &k) };
        run_local(g, &bit, &alg)
    }
}

fn is_type_one(g: &Graph, bits: &[bool], v: usize) -> bool {
    bits[v] && g.neighbors(v).iter().filter(|&&w| bits[w]).count() <= 1
}

fn decode_node(view: &View<bool>, k: &ThreeConsts) -> Result<u32> {
    let u = view.center();
    // Color-1 membership of every node whose adjacency is visible.
    let mut in_w: HashMap<usize, bool> = HashMap::new();
    for z in view.nodes() {
        if view.dist(z).is_some_and(|d| d < view.radius()) {
            let mine = *view.state(z)?;
            let mut lit = 0;
            for &w in view.all_neighbors(z)? {
                if *view.state(w)? {
                    lit += 1;
                }
            }
            in_w.insert(z, mine && lit <= 1);
        }
    }
    if in_w[&u] {
        return Ok(1);
    }
    // Nodes without a known membership are never reached below: every BFS
    // stays strictly inside the view.
    let keep = |z: usize| in_w.get(&z).is_some_and(|&w| !w);

    let reach = view.bfs(u, k.small_diameter + 1, keep)?;
    if reach.iter().all(|&(_, d)| d <= k.small_diameter) {
        let comp: HashSet<usize> = reach.iter().map(|&(z, _)| z).collect();
        let mut diam = 0;
        for &z in &comp {
            let e = view.bfs(z, 2 * k.small_diameter + 1, |x| comp.contains(&x))?;
            diam = diam.max(e.iter().map(|&(_, d)| d).max().unwrap_or(0));
        }
        if diam <= k.small_diameter {
            let root = *comp.iter().min_by_key(|&&z| view.id(z).unwrap_or(u64::MAX)).expect("u is in its component");
            let d = view.bfs(root, 2 * k.small_diameter + 1, |x| comp.contains(&x))?;
            let du = d.iter().find(|&&(z, _)| z == u).map(|&(_, d)| d).expect("component is connected");
            return Ok(if du % 2 == 0 { 2 } else { 3 });
        }
    }

    let around = view.bfs(u, k.find_radius() + k.group_radius, keep)?;
    let lit = |z: usize| view.state(z).map(|&b| b).unwrap_or(false);
    let w = around
        .iter()
        .filter(|&&(z, d)| d <= k.find_radius() && lit(z))
        .min_by_key(|&&(z, d)| (d, view.id(z).unwrap_or(u64::MAX)))
        .map(|&(z, _)| z)
        .ok_or_else(|| Error::Decode(format!("no marked node within {} in the component", k.find_radius())))?;
    let group: Vec<usize> =
        view.bfs(w, k.group_radius, keep)?.into_iter().map(|(z, _)| z).filter(|&z| lit(z)).collect();
    let members: HashSet<usize> = group.iter().copied().collect();
    let mut blobs = 0;
    let mut seen: HashSet<usize> = HashSet::new();
    for &z in &group {
        if seen.insert(z) {
            blobs += 1;
            let mut stack = vec![z];
            while let Some(a) = stack.pop() {
                for b in view.neighbors(a)? {
                    if members.contains(&b) && seen.insert(b) {
                        stack.push(b);
                    }
                }
            }
        }
    }
    let x = *group.iter().min_by_key(|&&z| view.id(z).unwrap_or(u64::MAX)).expect("w is marked");
    let dx = around
        .iter()
        .find(|&&(z, _)| z == x)
        .map(|&(_, d)| d)
        .ok_or_else(|| Error::Decode("group's smallest node lies outside the view".into()))?;
    Ok(match (blobs == 1, dx % 2 == 0) {
        (true, true) => 2,
        (true, false) => 3,
        (false, false) => 2,
        (false, true) => 3,
    })
}

impl Schema for ThreeColoringSchema {
    fn name(&self) -> String {
        "three-coloring".into()
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
    fn radius(&self, g: &Graph) -> usize {
        self.consts(g).view_radius()
    }
    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        Ok(self.encode_detailed(g)?.advice)
    }
    fn decode(&self, g: &Graph, advice: &[Bits], _deps: &[&Solution]) -> Result<Decoded> {
        let (colors, locality) = self.decode_coloring(g, advice)?;
        Ok(Decoded { solution: Solution::VertexColoring(colors), locality })
    }
    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        check_vertex_coloring(g, solution.as_vertex_coloring()?, 3, false)
    }
}

/// Summary of the checks, by name.
pub fn check_table(enc: &ThreeEncoding) -> BTreeMap<String, (usize, usize)> {
    enc.checks.iter().map(|c| (c.name.clone(), (c.measured, c.bound))).collect()
}
