//! Splitting of even-degree bipartite graphs: orient almost-balanced, 2-color
//! the nodes, then color red exactly the edges leaving white nodes.

use std::collections::VecDeque;

use super::schema::{OrientationConfig, OrientationSchema};
use crate::advice::{basic_threshold, require_threshold, AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::Bits;
use crate::compose::{Composed, DependencyDag};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, FnAlgorithm, View};
use crate::solution::{check_vertex_coloring, EdgeColoring, Orientation, Solution};

/// 2-coloring with the smallest ID of every component white (color 1).
pub fn canonical_two_coloring(g: &Graph) -> Result<Vec<u32>> {
    let mut color = vec![0u32; g.n()];
    for comp in g.components() {
        let s = comp[0];
        color[s] = 1;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if color[w] == 0 {
                    color[w] = 3 - color[u];
                    queue.push_back(w);
                } else if color[w] == color[u] {
                    return Err(Error::Precondition(format!(
                        "graph is not bipartite (edge {}-{})",
                        g.id(u),
                        g.id(w)
                    )));
                }
            }
        }
    }
    Ok(color)
}

/// Color of `center` from the nearest node carrying a color bit (its last
/// bit, 1 = black), searched up to `limit` hops.
fn color_from_nearest(view: &View<Bits>, limit: usize) -> Result<u32> {
    let mut best: Option<(usize, u64, bool)> = None;
    for (u, d) in view.bfs(view.center(), limit, |_| true)? {
        if best.is_some_and(|b| d > b.0) {
            break;
        }
        let s = view.state(u)?;
        if let Some(bit) = s.get(s.len().wrapping_sub(1)) {
            let id = view.id(u)?;
            if best.map_or(true, |b| id < b.1) {
                best = Some((d, id, bit));
            }
        }
    }
    let (d, _, black) = best.ok_or_else(|| Error::Decode(format!("no color holder within {limit} hops")))?;
    let base = if black { 2 } else { 1 };
    Ok(if d % 2 == 0 { base } else { 3 - base })
}

/// Bipartite 2-coloring: nodes of a (2α+1)-spaced ruling set store their
/// canonical color; everyone else counts parity to the nearest one.
pub struct TwoColoringSchema {
    params: ComposableParams,
}

impl TwoColoringSchema {
    pub fn new(params: ComposableParams) -> Result<TwoColoringSchema> {
        let s = TwoColoringSchema { params };
        require_threshold(&s, &params)?;
        Ok(s)
    }
}

impl Schema for TwoColoringSchema {
    fn name(&self) -> String {
        "two-coloring".into()
    }
    fn gamma0(&self) -> usize {
        1
    }
    fn threshold(&self, c: f64, gamma: usize) -> f64 {
        basic_threshold(1, c, gamma)
    }
    fn params(&self) -> Option<ComposableParams> {
        Some(self.params)
    }
    fn radius(&self, _g: &Graph) -> usize {
        2 * self.params.alpha
    }

    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        let color = canonical_two_coloring(g)?;
        let a = self.params.alpha;
        let mut bits = vec![Bits::new(); g.n()];
        for h in g.ruling_set(2 * a + 1, 2 * a)? {
            bits[h] = Bits(vec![color[h] == 2]);
        }
        Ok(AdviceAssignment::variable(bits))
    }

    fn decode(&self, g: &Graph, advice: &[Bits], _deps: &[&Solution]) -> Result<Decoded> {
        let limit = 2 * self.params.alpha;
        let alg = FnAlgorithm { radius: limit, f: |view: &View<Bits>| color_from_nearest(view, limit) };
        let (colors, locality) = run_local(g, advice, &alg)?;
        Ok(Decoded { solution: Solution::VertexColoring(colors), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        check_vertex_coloring(g, solution.as_vertex_coloring()?, 2, false)
    }
}

/// Red (1) on edges leaving white nodes, blue (2) otherwise.
pub fn split_by_color(g: &Graph, ori: &Orientation, colors: &[u32]) -> EdgeColoring {
    let colors = (0..g.n())
        .map(|v| {
            ori.out[v]
                .iter()
                .map(|&out| {
                    let red = if colors[v] == 1 { out } else { !out };
                    if red {
                        1
                    } else {
                        2
                    }
                })
                .collect()
        })
        .collect();
    EdgeColoring { colors }
}

fn check_even_degrees(g: &Graph) -> Result<()> {
    match (0..g.n()).find(|&v| g.degree(v) % 2 == 1) {
        Some(v) => Err(Error::Precondition(format!("node {} has odd degree {}", g.id(v), g.degree(v)))),
        None => Ok(()),
    }
}

/// Last slot of the composed splitting: no advice, reads the orientation
/// and the 2-coloring of its own node.
pub struct SplitCombine;

impl Schema for SplitCombine {
    fn name(&self) -> String {
        "split-combine".into()
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
        1
    }

    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        check_even_degrees(g)?;
        Ok(AdviceAssignment::variable(vec![Bits::new(); g.n()]))
    }

    fn decode(&self, g: &Graph, _advice: &[Bits], deps: &[&Solution]) -> Result<Decoded> {
        let [ori, col] = deps else {
            return Err(Error::InvalidParams("split-combine needs an orientation and a 2-coloring".into()));
        };
        let ori = ori.as_orientation()?;
        let col = col.as_vertex_coloring()?;
        let state: Vec<(Vec<bool>, u32)> = (0..g.n()).map(|v| (ori.out[v].clone(), col[v])).collect();
        let alg = FnAlgorithm {
            radius: 1,
            f: |view: &View<(Vec<bool>, u32)>| {
                let (out, c) = view.state(view.center())?;
                Ok(out.iter().map(|&o| if (*c == 1) == o { 1 } else { 2 }).collect::<Vec<u32>>())
            },
        };
        let (colors, locality) = run_local(g, &state, &alg)?;
        Ok(Decoded { solution: Solution::EdgeColoring(EdgeColoring { colors }), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        solution.as_edge_coloring()?.check_splitting(g)
    }
}

/// Splitting as a composition of orientation, 2-coloring and the combine
/// step.
pub fn splitting_schema(params: ComposableParams, orient: OrientationConfig) -> Result<Composed> {
    let slot = ComposableParams { gamma: 6 * params.gamma, ..params };
    let slots: Vec<Box<dyn Schema>> = vec![
        Box::new(OrientationSchema::new(slot, orient)?),
        Box::new(TwoColoringSchema::new(slot)?),
        Box::new(SplitCombine),
    ];
    Composed::new("splitting", slots, DependencyDag::new(3, &[(2, 0), (2, 1)])?, params)
}

/// The same splitting written by hand: orientation holders store "1", the
/// direction and their color; partners "1" and their color; a ruling set
/// of the remaining area stores its color alone.
pub struct HandSplitting {
    params: ComposableParams,
    orientation: OrientationSchema,
}

impl HandSplitting {
    /// `orientation_params` must be the parameters the orientation slot of
    /// the composed schema runs with, for outputs to coincide.
    pub fn new(params: ComposableParams, orientation_params: ComposableParams, orient: OrientationConfig) -> Result<Self> {
        let s = HandSplitting { params, orientation: OrientationSchema::new(orientation_params, orient)? };
        require_threshold(&s, &params)?;
        Ok(s)
    }
}

impl Schema for HandSplitting {
    fn name(&self) -> String {
        "splitting-direct".into()
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
        self.orientation.radius(g).max(2 * self.params.alpha) + 1
    }

    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        check_even_degrees(g)?;
        let color = canonical_two_coloring(g)?;
        let enc = self.orientation.encode_detailed(g)?;
        let a = self.params.alpha;
        let mut bits = vec![Bits::new(); g.n()];
        let mut blocked = vec![false; g.n()];
        for (v, s) in enc.advice.bits.iter().enumerate() {
            if !s.is_empty() {
                let mut b = s.clone();
                b.push(color[v] == 2);
                bits[v] = b;
                if s.len() == 2 {
                    for (u, _) in g.ball(v, 2 * a) {
                        blocked[u] = true;
                    }
                }
            }
        }
        let rest: Vec<usize> = g.id_order().into_iter().filter(|&v| !blocked[v]).collect();
        for h in g.ruling_set_among(&rest, 2 * a + 1, 2 * a)? {
            bits[h] = Bits(vec![color[h] == 2]);
        }
        Ok(AdviceAssignment::variable(bits))
    }

    fn decode(&self, g: &Graph, advice: &[Bits], _deps: &[&Solution]) -> Result<Decoded> {
        let orient_bits: Vec<Bits> =
            advice.iter().map(|s| if s.len() >= 2 { Bits(s.0[..s.len() - 1].to_vec()) } else { Bits::new() }).collect();
        let ori = self.orientation.decode(g, &orient_bits, &[])?;
        let limit = 2 * self.params.alpha;
        let alg = FnAlgorithm { radius: limit, f: |view: &View<Bits>| color_from_nearest(view, limit) };
        let (colors, loc) = run_local(g, advice, &alg)?;
        let split = split_by_color(g, ori.solution.as_orientation()?, &colors);
        let mut locality = ori.locality.clone();
        locality.declared_radius = self.radius(g);
        locality.max_ball = locality.max_ball.max(loc.max_ball);
        locality.measured_radius = locality.measured_radius.max(loc.measured_radius);
        Ok(Decoded { solution: Solution::EdgeColoring(split), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        solution.as_edge_coloring()?.check_splitting(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate_graph, GeneratorKind};

    fn params() -> ComposableParams {
        ComposableParams { c: 1.0, gamma: 3, alpha: 11_664 }
    }

    #[test]
    fn small_bipartite_instances_split() {
        let s = splitting_schema(params(), OrientationConfig::default()).unwrap();
        for g in [
            generate_graph(GeneratorKind::Cycle, &[4], 0).unwrap(),
            generate_graph(GeneratorKind::Cycle, &[8], 1).unwrap(),
            Graph::from_edges(&[1, 2, 3, 4], &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap(),
        ] {
            let adv = s.encode(&g, &[]).unwrap();
            let out = s.decode(&g, &adv.bits, &[]).unwrap();
            s.check(&g, &out.solution, &[]).unwrap();
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = splitting_schema(params(), OrientationConfig::default()).unwrap();
        let odd = generate_graph(GeneratorKind::Cycle, &[5], 0).unwrap();
        assert!(matches!(s.encode(&odd, &[]), Err(Error::Precondition(_))));
        let path = generate_graph(GeneratorKind::Path, &[4], 0).unwrap();
        assert!(matches!(s.encode(&path, &[]), Err(Error::Precondition(_))));
    }

    #[test]
    fn composition_threshold_is_enforced() {
        let low = ComposableParams { alpha: 11_663, ..params() };
        assert!(matches!(splitting_schema(low, OrientationConfig::default()), Err(Error::Infeasible(_))));
    }
}
