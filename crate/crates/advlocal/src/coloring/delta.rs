//! Δ-coloring of Δ-colorable graphs as a composition of four slots:
//! the O(Δ²) initial coloring, a (Δ+1)-list coloring, a reduction that
//! pushes the (Δ+1)-colored nodes to far-apart roots, and a final fix that
//! shifts colors along a short path from each root.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

use super::constants::{ColoringConstants, Constant};
use super::initial::InitialColoringSchema;
use super::linial::linial_target;
use super::list::{class_sweep, list_coloring};
use crate::advice::{basic_threshold, AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::{ceil_log2, Bits};
use crate::compose::{Composed, DependencyDag};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, FnAlgorithm, LocalityReport, View};
use crate::solution::{check_vertex_coloring, Solution};

/// Colors 1..=k; 0 marks an uncolored node.
pub type PartialColoring = Vec<u32>;

fn marker() -> Bits {
    Bits(vec![true; 3])
}

/// Minimum pairwise distance of the roots left uncolored:
/// ⌈2·log₂n / log₂Δ⌉, raised to 2α+2 so that an α-ball never holds two.
pub fn default_root_distance(n: usize, delta: usize, alpha: usize) -> usize {
    let logn = (n.max(2) as f64).log2();
    let logd = (delta.max(2) as f64).log2();
    ((2.0 * logn / logd).ceil() as usize).max(2 * alpha + 2)
}

/// Reduces a proper coloring to Δ+1 colors by list coloring with the full
/// palette. No advice.
pub struct ListStage;

impl Schema for ListStage {
    fn name(&self) -> String {
        "list-coloring".into()
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
        linial_target(g.max_degree()) as usize
    }
    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        Ok(AdviceAssignment::variable(vec![Bits::new(); g.n()]))
    }
    fn decode(&self, g: &Graph, _advice: &[Bits], deps: &[&Solution]) -> Result<Decoded> {
        let base = deps.first().ok_or(Error::InvalidParams("list stage needs a base coloring".into()))?;
        let base = base.as_vertex_coloring()?;
        let d = g.max_degree() as u32;
        let lists = vec![(1..=d + 1).collect::<Vec<u32>>(); g.n()];
        let (out, mut locality) = list_coloring(g, base, linial_target(g.max_degree()), &lists)?;
        locality.declared_radius = self.radius(g);
        Ok(Decoded { solution: Solution::VertexColoring(out), locality })
    }
    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        check_vertex_coloring(g, solution.as_vertex_coloring()?, g.max_degree() as u32 + 1, false)
    }
}

/// Moves the color-(Δ+1) nodes toward marked roots: along a shortest-path
/// forest to the roots and the nodes of degree < Δ, each uncolored node
/// uncolors its parent and recolors itself, deepest layer first. Only roots
/// of full degree stay uncolored.
pub struct ReduceToRoots {
    params: ComposableParams,
    consts: ColoringConstants,
    distance: Option<usize>,
}

#[derive(Clone, Debug)]
struct ForestNode {
    color: u32,
    root: bool,
    depth: Option<usize>,
    parent: Option<usize>,
}

impl ReduceToRoots {
    pub fn new(params: ComposableParams, consts: ColoringConstants, distance: Option<usize>) -> ReduceToRoots {
        ReduceToRoots { params, consts, distance }
    }

    pub fn root_distance(&self, g: &Graph) -> usize {
        self.distance.unwrap_or_else(|| default_root_distance(g.n(), g.max_degree(), self.params.alpha)).max(2)
    }

    fn relay_spacing(&self, g: &Graph) -> usize {
        self.consts.get(Constant::RelaySpacing, self.params.alpha, g.max_degree())
    }

    fn deps<'a>(deps: &[&'a Solution]) -> Result<(&'a [u32], &'a [u32])> {
        if deps.len() < 2 {
            return Err(Error::InvalidParams("root reduction needs the base and the (Δ+1)-coloring".into()));
        }
        Ok((deps[0].as_vertex_coloring()?, deps[1].as_vertex_coloring()?))
    }

    /// Runs the layered recoloring; returns the partial coloring and the
    /// deepest layer that held an uncolored node.
    fn simulate(&self, g: &Graph, advice: &[Bits], base: &[u32], colors: &[u32]) -> Result<(PartialColoring, usize, LocalityReport)> {
        let delta = g.max_degree();
        let dist = self.root_distance(g);
        let palette = linial_target(delta);
        for v in 0..g.n() {
            if !advice[v].is_empty() && advice[v] != marker() {
                return Err(Error::Decode(format!("node {} holds {} instead of a root marker", g.id(v), advice[v])));
            }
        }
        let state: Vec<(u32, bool)> = (0..g.n()).map(|v| (colors[v], !advice[v].is_empty())).collect();
        let forest = FnAlgorithm {
            radius: dist + 1,
            f: |view: &View<(u32, bool)>| {
                let v = view.center();
                let is_src = |u: usize| -> bool {
                    view.state(u).map(|s| s.1).unwrap_or(false) || view.degree(u).map(|d| d < delta).unwrap_or(false)
                };
                let depth_of = |x: usize| -> Result<Option<usize>> {
                    Ok(view.bfs(x, dist - 1, |_| true)?.into_iter().find(|&(u, _)| is_src(u)).map(|(_, d)| d))
                };
                let depth = depth_of(v)?;
                let parent = match depth {
                    Some(d) if d > 0 => {
                        let mut best: Option<usize> = None;
                        for &w in view.all_neighbors(v)? {
                            if depth_of(w)? == Some(d - 1) && best.is_none_or(|b| view.id(w).ok() < view.id(b).ok()) {
                                best = Some(w);
                            }
                        }
                        best
                    }
                    _ => None,
                };
                let (color, root) = *view.state(v)?;
                Ok(ForestNode { color: if color as usize == delta + 1 { 0 } else { color }, root, depth, parent })
            },
        };
        let (mut nodes, mut locality) = run_local(g, &state, &forest)?;
        if let Some(v) = (0..g.n()).find(|&v| nodes[v].color == 0 && nodes[v].depth.is_none()) {
            return Err(Error::Decode(format!("uncolored node {} is farther than {dist} from every root", g.id(v))));
        }
        let deepest = (0..g.n()).filter(|&v| nodes[v].color == 0).filter_map(|v| nodes[v].depth).max().unwrap_or(0);
        let lists = vec![(1..=delta as u32).collect::<Vec<u32>>(); g.n()];
        let phases = |layer: usize, nodes: &mut Vec<ForestNode>| -> Result<LocalityReport> {
            let uncolor = FnAlgorithm {
                radius: 1,
                f: |view: &View<ForestNode>| {
                    let v = view.center();
                    let me = view.state(v)?;
                    for &w in view.all_neighbors(v)? {
                        let s = view.state(w)?;
                        if s.depth == Some(layer) && s.parent == Some(v) && s.color == 0 {
                            return Ok(0);
                        }
                    }
                    Ok(me.color)
                },
            };
            let (cols, rep) = if layer > 0 { run_local(g, nodes, &uncolor)? } else { (nodes.iter().map(|s| s.color).collect(), LocalityReport::default()) };
            for (s, c) in nodes.iter_mut().zip(&cols) {
                s.color = *c;
            }
            let active: Vec<bool> = (0..g.n())
                .map(|v| {
                    let s = &nodes[v];
                    s.color == 0 && s.depth == Some(layer) && !(layer == 0 && s.root && g.degree(v) >= delta)
                })
                .collect();
            let (cols, sweep) = class_sweep(g, &cols, &active, base, palette, &lists)?;
            for (s, c) in nodes.iter_mut().zip(cols) {
                s.color = c;
            }
            Ok(rep.then(&sweep))
        };
        for layer in (0..=deepest).rev() {
            // Layers without uncolored nodes change nothing.
            if !nodes.iter().any(|s| s.color == 0 && s.depth == Some(layer)) {
                continue;
            }
            let rep = phases(layer, &mut nodes)?;
            locality.max_ball = locality.max_ball.max(rep.max_ball);
            locality.measured_radius += rep.measured_radius;
            locality.wall_ms += rep.wall_ms;
        }
        locality.declared_radius = self.radius(g);
        Ok((nodes.into_iter().map(|s| s.color).collect(), deepest, locality))
    }
}

/// Partial Δ-coloring whose uncolored nodes are pairwise ≥ `distance` apart.
pub fn check_roots(g: &Graph, colors: &[u32], distance: usize) -> Result<()> {
    check_vertex_coloring(g, colors, g.max_degree() as u32, true)?;
    let holes: Vec<usize> = (0..g.n()).filter(|&v| colors[v] == 0).collect();
    for &u in &holes {
        for (w, d) in g.ball(u, distance.saturating_sub(1)) {
            if w != u && colors[w] == 0 {
                return Err(Error::Verification(format!(
                    "uncolored nodes {} and {} are {d} < {distance} apart",
                    g.id(u),
                    g.id(w)
                )));
            }
        }
    }
    Ok(())
}

impl Schema for ReduceToRoots {
    fn name(&self) -> String {
        "reduce-to-roots".into()
    }
    fn gamma0(&self) -> usize {
        1
    }
    fn threshold(&self, c: f64, gamma: usize) -> f64 {
        basic_threshold(3, c, gamma)
    }
    fn params(&self) -> Option<ComposableParams> {
        Some(self.params)
    }
    fn radius(&self, g: &Graph) -> usize {
        let d = self.root_distance(g);
        (d + 1).saturating_add(d.saturating_mul(1 + linial_target(g.max_degree()) as usize))
    }

    fn encode(&self, g: &Graph, deps: &[&Solution]) -> Result<AdviceAssignment> {
        let (base, colors) = Self::deps(deps)?;
        let delta = g.max_degree();
        check_vertex_coloring(g, colors, delta as u32 + 1, false).map_err(|e| Error::Precondition(e.to_string()))?;
        let dist = self.root_distance(g);
        let top: Vec<usize> = g.id_order().into_iter().filter(|&v| colors[v] as usize == delta + 1).collect();
        let roots = g.ruling_set_among(&top, dist, dist - 1)?;
        let mut bits = vec![Bits::new(); g.n()];
        for &r in &roots {
            bits[r] = marker();
        }
        let (_, deepest, _) = self.simulate(g, &bits, base, colors)?;
        let spacing = self.relay_spacing(g);
        if deepest >= spacing {
            return Err(Error::Infeasible(format!(
                "forest depth {deepest} ≥ relay spacing {spacing}: relay layers would be needed"
            )));
        }
        Ok(AdviceAssignment::variable(bits))
    }

    fn decode(&self, g: &Graph, advice: &[Bits], deps: &[&Solution]) -> Result<Decoded> {
        let (base, colors) = Self::deps(deps)?;
        let (out, _, locality) = self.simulate(g, advice, base, colors)?;
        Ok(Decoded { solution: Solution::VertexColoring(out), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        check_roots(g, solution.as_vertex_coloring()?, self.root_distance(g))
    }
}

/// How one uncolored node gets a color: the path from the node to its
/// target and the colors that change.
#[derive(Clone, Debug, PartialEq)]
pub struct PlanEntry {
    pub root: usize,
    pub target: usize,
    pub path: Vec<usize>,
    pub changes: Vec<(usize, u32)>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecolorPlan {
    pub entries: Vec<PlanEntry>,
}

impl RecolorPlan {
    pub fn apply(&self, partial: &[u32]) -> Vec<u32> {
        let mut out = partial.to_vec();
        for e in &self.entries {
            for &(v, c) in &e.changes {
                out[v] = c;
            }
        }
        out
    }
}

/// Shortest path from `from` to `to`, each step to the smallest-ID neighbor
/// one hop closer. `dist_to` gives distances to `to`.
fn canonical_path(
    from: usize,
    to: usize,
    nbrs: &dyn Fn(usize) -> Result<Vec<usize>>,
    id: &dyn Fn(usize) -> u64,
    dist_to: &HashMap<usize, usize>,
) -> Result<Vec<usize>> {
    let mut path = vec![from];
    let mut cur = from;
    while cur != to {
        let d = *dist_to.get(&cur).ok_or(Error::Decode("path leaves the searched region".into()))?;
        let next = nbrs(cur)?
            .into_iter()
            .filter(|w| dist_to.get(w) == Some(&(d - 1)))
            .min_by_key(|&w| id(w))
            .ok_or(Error::Decode("no step toward the target".into()))?;
        path.push(next);
        cur = next;
    }
    Ok(path)
}

/// Moves the hole from the path's first node along the path until a node
/// has a free color. Returns the changed colors.
fn shift_along(
    path: &[usize],
    colors: &mut HashMap<usize, u32>,
    nbrs: &dyn Fn(usize) -> Result<Vec<usize>>,
    color_of: &dyn Fn(usize) -> Result<u32>,
    delta: usize,
) -> Result<Vec<(usize, u32)>> {
    let get = |colors: &HashMap<usize, u32>, u: usize| -> Result<u32> {
        match colors.get(&u) {
            Some(&c) => Ok(c),
            None => color_of(u),
        }
    };
    for i in 0..path.len() {
        let h = path[i];
        let mut used = Vec::new();
        for w in nbrs(h)? {
            used.push(get(colors, w)?);
        }
        if let Some(c) = (1..=delta as u32).find(|c| !used.contains(c)) {
            colors.insert(h, c);
            let mut changes: Vec<(usize, u32)> = colors.iter().map(|(&u, &c)| (u, c)).collect();
            changes.sort_unstable();
            return Ok(changes);
        }
        let Some(&next) = path.get(i + 1) else { break };
        let c = get(colors, next)?;
        colors.insert(h, c);
        colors.insert(next, 0);
    }
    Err(Error::SearchFailed("no free color at the end of the shift path".into()))
}

fn is_target(g: &Graph, colors: &[u32], w: usize, path: &[usize], delta: usize) -> bool {
    if g.degree(w) < delta {
        return true;
    }
    let on_path: HashSet<usize> = path.iter().copied().collect();
    let mut seen: Vec<u32> = Vec::new();
    for &x in g.neighbors(w) {
        if on_path.contains(&x) || colors[x] == 0 {
            continue;
        }
        if seen.contains(&colors[x]) {
            return true;
        }
        seen.push(colors[x]);
    }
    false
}

/// For each uncolored node, the nearest node (by distance, then ID) that has
/// degree < Δ or two equally colored neighbors off the canonical path to it,
/// plus the color shift along that path. The combined result is checked to
/// be a proper Δ-coloring with pairwise separated paths.
pub fn find_recolor_plan(g: &Graph, partial: &[u32], search_radius: usize) -> Result<RecolorPlan> {
    let delta = g.max_degree();
    check_vertex_coloring(g, partial, delta as u32, true).map_err(|e| Error::Precondition(e.to_string()))?;
    let nbrs = |u: usize| -> Result<Vec<usize>> { Ok(g.neighbors(u).to_vec()) };
    let id = |u: usize| g.id(u);
    let color_of = |u: usize| -> Result<u32> { Ok(partial[u]) };
    let mut entries = Vec::new();
    for u in g.id_order().into_iter().filter(|&u| partial[u] == 0) {
        let mut found = None;
        let mut near = g.ball(u, search_radius);
        near.sort_by_key(|&(w, d)| (d, g.id(w)));
        for (w, _) in near {
            let dist_to: HashMap<usize, usize> = g.ball(w, search_radius).into_iter().collect();
            let path = canonical_path(u, w, &nbrs, &id, &dist_to)?;
            if is_target(g, partial, w, &path, delta) {
                found = Some((w, path));
                break;
            }
        }
        let (target, path) = found.ok_or_else(|| {
            Error::SearchFailed(format!(
                "no recoloring target within {search_radius} of node {}: not Δ-colorable or constants too tight",
                g.id(u)
            ))
        })?;
        let changes = shift_along(&path, &mut HashMap::new(), &nbrs, &color_of, delta)?;
        entries.push(PlanEntry { root: u, target, path, changes });
    }
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            for &x in &a.path {
                if b.path.iter().any(|&y| x == y || g.has_edge(x, y)) {
                    return Err(Error::Verification(format!(
                        "shift paths of {} and {} touch",
                        g.id(a.root),
                        g.id(b.root)
                    )));
                }
            }
        }
    }
    let plan = RecolorPlan { entries };
    check_vertex_coloring(g, &plan.apply(partial), delta as u32, false)?;
    Ok(plan)
}

/// Colors the remaining roots: markers `111` sit on the shift targets.
pub struct FixRootColors {
    params: ComposableParams,
    consts: ColoringConstants,
    distance: Option<usize>,
}

impl FixRootColors {
    pub fn new(params: ComposableParams, consts: ColoringConstants, distance: Option<usize>) -> FixRootColors {
        FixRootColors { params, consts, distance }
    }

    fn root_distance(&self, g: &Graph) -> usize {
        self.distance.unwrap_or_else(|| default_root_distance(g.n(), g.max_degree(), self.params.alpha)).max(2)
    }

    /// Longest shift path the decoder looks for.
    pub fn reach(&self, g: &Graph) -> usize {
        (self.root_distance(g) - 2) / 4
    }

    fn partial<'a>(deps: &[&'a Solution]) -> Result<&'a [u32]> {
        deps.first().ok_or(Error::InvalidParams("root fix needs the partial coloring".into()))?.as_vertex_coloring()
    }
}

impl Schema for FixRootColors {
    fn name(&self) -> String {
        "fix-root-colors".into()
    }
    fn gamma0(&self) -> usize {
        2
    }
    fn threshold(&self, c: f64, gamma: usize) -> f64 {
        basic_threshold(3, c, gamma)
    }
    fn params(&self) -> Option<ComposableParams> {
        Some(self.params)
    }
    fn radius(&self, g: &Graph) -> usize {
        2 * self.reach(g) + 2
    }

    fn encode(&self, g: &Graph, deps: &[&Solution]) -> Result<AdviceAssignment> {
        let partial = Self::partial(deps)?;
        let plan = find_recolor_plan(g, partial, self.reach(g))?;
        let spacing = self.consts.get(Constant::MarkerSpacing, self.params.alpha, g.max_degree());
        let mut bits = vec![Bits::new(); g.n()];
        for e in &plan.entries {
            if e.path.len() > spacing {
                return Err(Error::Infeasible(format!(
                    "shift path of {} nodes exceeds marker spacing {spacing}: path markers would be needed",
                    e.path.len()
                )));
            }
            bits[e.target] = marker();
        }
        Ok(AdviceAssignment::variable(bits))
    }

    fn decode(&self, g: &Graph, advice: &[Bits], deps: &[&Solution]) -> Result<Decoded> {
        let partial = Self::partial(deps)?;
        let delta = g.max_degree();
        let reach = self.reach(g);
        let state: Vec<(u32, bool)> = (0..g.n())
            .map(|v| {
                if !advice[v].is_empty() && advice[v] != marker() {
                    Err(Error::Decode(format!("node {} holds {} instead of a target marker", g.id(v), advice[v])))
                } else {
                    Ok((partial[v], !advice[v].is_empty()))
                }
            })
            .collect::<Result<_>>()?;
        let memo: RefCell<HashMap<usize, Rc<Vec<(usize, u32)>>>> = RefCell::new(HashMap::new());
        let alg = FnAlgorithm {
            radius: 2 * reach + 2,
            f: |view: &View<(u32, bool)>| {
                let v = view.center();
                let own = view.state(v)?.0;
                let holes: Vec<usize> =
                    view.bfs(v, reach, |_| true)?.into_iter().map(|(u, _)| u).filter(|&u| view.state(u).is_ok_and(|s| s.0 == 0)).collect();
                for u in holes {
                    let cached = memo.borrow().get(&u).cloned();
                    let changes = match cached {
                        Some(c) => c,
                        None => {
                            let near = view.bfs(u, reach, |_| true)?;
                            let target = near
                                .iter()
                                .filter(|(x, _)| view.state(*x).is_ok_and(|s| s.1))
                                .min_by_key(|(x, d)| (*d, view.id(*x).unwrap_or(u64::MAX)))
                                .map(|&(x, _)| x)
                                .ok_or_else(|| Error::Decode(format!("no target marker within {reach}")))?;
                            let dist_to: HashMap<usize, usize> = view.bfs(target, 2 * reach, |_| true)?.into_iter().collect();
                            let nbrs = |x: usize| -> Result<Vec<usize>> { Ok(view.all_neighbors(x)?.to_vec()) };
                            let id = |x: usize| view.id(x).unwrap_or(u64::MAX);
                            let path = canonical_path(u, target, &nbrs, &id, &dist_to)?;
                            let color_of = |x: usize| -> Result<u32> { Ok(view.state(x)?.0) };
                            let c = Rc::new(shift_along(&path, &mut HashMap::new(), &nbrs, &color_of, delta)?);
                            memo.borrow_mut().insert(u, c.clone());
                            c
                        }
                    };
                    if let Some(&(_, c)) = changes.iter().find(|(x, _)| *x == v) {
                        return Ok(c);
                    }
                }
                Ok(own)
            },
        };
        let (out, mut locality) = run_local(g, &state, &alg)?;
        locality.declared_radius = self.radius(g);
        Ok(Decoded { solution: Solution::VertexColoring(out), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        check_vertex_coloring(g, solution.as_vertex_coloring()?, g.max_degree() as u32, false)
    }
}

/// Smallest α at which the four-slot composition is feasible for (c, γ).
pub fn delta_coloring_alpha(c: f64, gamma: usize) -> usize {
    let k = 4;
    let q = (2 * k * gamma) as f64;
    let own = q.powi(3) * ceil_log2(k as u64) as f64 / c;
    own.max(basic_threshold(3, c, 2 * k * gamma)).ceil() as usize
}

/// Slots: 0 initial coloring, 1 list coloring, 2 root reduction, 3 root fix.
/// `distance` overrides the root spacing.
pub fn delta_schema(params: ComposableParams, consts: ColoringConstants, distance: Option<usize>) -> Result<Composed> {
    let slot = ComposableParams { gamma: 8 * params.gamma, ..params };
    let slots: Vec<Box<dyn Schema>> = vec![
        Box::new(InitialColoringSchema::new(slot, consts.clone())?),
        Box::new(ListStage),
        Box::new(ReduceToRoots::new(slot, consts.clone(), distance)),
        Box::new(FixRootColors::new(slot, consts, distance)),
    ];
    Composed::new("delta-coloring", slots, DependencyDag::new(4, &[(1, 0), (2, 0), (2, 1), (3, 2)])?, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate, generate_graph, GeneratorKind};

    fn schema() -> Composed {
        let alpha = delta_coloring_alpha(1.0, 6);
        delta_schema(ComposableParams { c: 1.0, gamma: 6, alpha }, ColoringConstants::default(), None).unwrap()
    }

    #[test]
    fn even_cycle_gets_two_colors() {
        let g = generate_graph(GeneratorKind::Cycle, &[6], 2).unwrap();
        let s = schema();
        let adv = s.encode(&g, &[]).unwrap();
        let (sols, _) = s.decode_all(&g, &adv.bits).unwrap();
        check_vertex_coloring(&g, sols[3].as_vertex_coloring().unwrap(), 2, false).unwrap();
        check_vertex_coloring(&g, sols[1].as_vertex_coloring().unwrap(), 3, false).unwrap();
    }

    #[test]
    fn odd_cycle_fails_loudly() {
        let g = generate_graph(GeneratorKind::Cycle, &[7], 2).unwrap();
        let err = schema().encode(&g, &[]).unwrap_err();
        assert!(matches!(err, Error::SearchFailed(_)), "{err}");
    }

    #[test]
    fn planted_graphs() {
        for (n, d, seed) in [(120, 4, 1u64), (300, 6, 2)] {
            let g = generate(GeneratorKind::DeltaColorableRandom, &[n, d], seed, 1).unwrap().graph;
            let s = schema();
            let (adv, _) = s.encode_with_solutions(&g).unwrap();
            let out = s.decode(&g, &adv.bits, &[]).unwrap();
            check_vertex_coloring(&g, out.solution.as_vertex_coloring().unwrap(), g.max_degree() as u32, false).unwrap();
        }
    }

    #[test]
    fn plan_of_length_one() {
        // Star center 1 uncolored with Δ = 3; leaf 2 has degree 1 < Δ, but
        // the center itself has a free color only if its leaves repeat one.
        let g = Graph::from_edges(&[1, 2, 3, 4, 5], &[(1, 2), (1, 3), (1, 4), (4, 5)]).unwrap();
        let idx = |id| g.index_of(id).unwrap();
        let mut partial = vec![0u32; 5];
        partial[idx(2)] = 1;
        partial[idx(3)] = 2;
        partial[idx(4)] = 3;
        partial[idx(5)] = 1;
        let plan = find_recolor_plan(&g, &partial, 3).unwrap();
        assert_eq!(plan.entries.len(), 1);
        assert_eq!(plan.entries[0].path.len(), 2);
        assert_eq!(g.id(plan.entries[0].target), 2);
        check_vertex_coloring(&g, &plan.apply(&partial), 3, false).unwrap();
    }

    #[test]
    fn shift_on_six_cycle() {
        // C6 in ID order 1..6; node 1 uncolored, the rest colored 1,2,1,2,2:
        // its neighbors 2 and 6 hold colors 1 and 2, so the hole must move.
        let ids = [1u64, 2, 3, 4, 5, 6];
        let edges: Vec<(u64, u64)> = (0..6).map(|i| (ids[i], ids[(i + 1) % 6])).collect();
        let g = Graph::from_edges(&ids, &edges).unwrap();
        let partial = vec![0, 1, 2, 1, 2, 2];
        // Improper on 5-6: rejected.
        assert!(find_recolor_plan(&g, &partial, 3).is_err());
        let partial = vec![0, 1, 2, 1, 2, 1];
        let plan = find_recolor_plan(&g, &partial, 3).unwrap();
        let fixed = plan.apply(&partial);
        check_vertex_coloring(&g, &fixed, 2, false).unwrap();
        // Hand simulation: node 1 sees colors {1} twice, takes 2 in place.
        assert_eq!(fixed, vec![2, 1, 2, 1, 2, 1]);
    }

    #[test]
    fn separated_holes_have_disjoint_paths() {
        let g = generate(GeneratorKind::DeltaColorableRandom, &[200, 4], 9, 1).unwrap();
        let planted = g.planted.unwrap();
        let g = g.graph;
        let delta = g.max_degree() as u32;
        assert_eq!(delta, 4);
        // Uncolor nodes of one class that are far apart.
        let class: Vec<usize> = g.id_order().into_iter().filter(|&v| planted[v] == 1).collect();
        let holes = g.ruling_set_among(&class, 7, 6).unwrap();
        let mut partial: Vec<u32> = planted.clone();
        assert!(partial.iter().all(|&c| c <= delta));
        for &h in &holes {
            partial[h] = 0;
        }
        let plan = find_recolor_plan(&g, &partial, 2).unwrap();
        assert_eq!(plan.entries.len(), holes.len());
        for (i, a) in plan.entries.iter().enumerate() {
            for b in &plan.entries[i + 1..] {
                assert!(a.path.iter().all(|x| !b.path.contains(x)));
            }
        }
    }
}
