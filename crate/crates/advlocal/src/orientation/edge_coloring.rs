//! Δ-edge coloring of Δ-regular bipartite graphs, Δ a power of 2, by
//! repeated splitting. Split slots form a binary tree: slot t splits the
//! edges that slot ⌊t/2⌋ colored red (t even) or blue (t odd); slot 1
//! splits all edges. A final slot reads the red/blue path of every edge.

use super::schema::{OrientationConfig, OrientationSchema};
use super::splitting::{split_by_color, TwoColoringSchema};
use crate::advice::{basic_threshold, AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::Bits;
use crate::compose::{Composed, DependencyDag};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, FnAlgorithm, View};
use crate::solution::{EdgeColoring, Solution};

/// Splits the edges selected by the parent slot. Output colors are 1/2 on
/// those edges and 0 elsewhere.
pub struct SubgraphSplit {
    orientation: OrientationSchema,
    /// Parent color selecting this slot's edges; `None` for all edges.
    parent_color: Option<u32>,
}

impl SubgraphSplit {
    fn subgraph(&self, g: &Graph, deps: &[&Solution]) -> Result<Graph> {
        let edges: Vec<(u64, u64)> = match self.parent_color {
            None => g.edges().into_iter().map(|(u, v)| (g.id(u), g.id(v))).collect(),
            Some(want) => {
                let parent = deps.get(1).ok_or_else(|| Error::InvalidParams("split slot needs its parent".into()))?;
                let parent = parent.as_edge_coloring()?;
                g.edges()
                    .into_iter()
                    .filter(|&(u, v)| parent.color(g, u, v) == want)
                    .map(|(u, v)| (g.id(u), g.id(v)))
                    .collect()
            }
        };
        Graph::from_edges(g.ids(), &edges)
    }
}

impl Schema for SubgraphSplit {
    fn name(&self) -> String {
        "subgraph-split".into()
    }
    fn gamma0(&self) -> usize {
        2
    }
    fn threshold(&self, c: f64, gamma: usize) -> f64 {
        basic_threshold(2, c, gamma)
    }
    fn params(&self) -> Option<ComposableParams> {
        self.orientation.params()
    }
    fn radius(&self, g: &Graph) -> usize {
        self.orientation.radius(g) + 1
    }

    fn encode(&self, g: &Graph, deps: &[&Solution]) -> Result<AdviceAssignment> {
        let h = self.subgraph(g, deps)?;
        self.orientation.encode(&h, &[])
    }

    fn decode(&self, g: &Graph, advice: &[Bits], deps: &[&Solution]) -> Result<Decoded> {
        let colors = deps.first().ok_or_else(|| Error::InvalidParams("split slot needs the 2-coloring".into()))?;
        let colors = colors.as_vertex_coloring()?;
        let h = self.subgraph(g, deps)?;
        let ori = self.orientation.decode(&h, advice, &[])?;
        let split = split_by_color(&h, ori.solution.as_orientation()?, colors);
        let lifted = (0..g.n())
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&w| h.adj_pos(v, w).map_or(0, |p| split.colors[v][p]))
                    .collect()
            })
            .collect();
        let mut locality = ori.locality;
        locality.declared_radius = self.radius(g);
        Ok(Decoded { solution: Solution::EdgeColoring(EdgeColoring { colors: lifted }), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, deps: &[&Solution]) -> Result<()> {
        let h = self.subgraph(g, deps)?;
        let col = solution.as_edge_coloring()?;
        let on_h = EdgeColoring {
            colors: (0..h.n()).map(|v| h.neighbors(v).iter().map(|&w| col.color(g, v, w)).collect()).collect(),
        };
        on_h.check_splitting(&h)
    }
}

/// Reads, per edge, the colors along its path of split slots.
pub struct PathToColor {
    delta: usize,
}

impl Schema for PathToColor {
    fn name(&self) -> String {
        "split-path-color".into()
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
        0
    }

    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        let delta = self.delta;
        if !delta.is_power_of_two() || delta < 2 {
            return Err(Error::Precondition(format!("Δ = {delta} is not a power of 2")));
        }
        if let Some(v) = (0..g.n()).find(|&v| g.degree(v) != delta) {
            return Err(Error::Precondition(format!("node {} has degree {} != Δ = {delta}", g.id(v), g.degree(v))));
        }
        Ok(AdviceAssignment::variable(vec![Bits::new(); g.n()]))
    }

    fn decode(&self, g: &Graph, _advice: &[Bits], deps: &[&Solution]) -> Result<Decoded> {
        if deps.len() != self.delta - 1 {
            return Err(Error::InvalidParams("path-color needs every split slot".into()));
        }
        let splits: Vec<&EdgeColoring> = deps.iter().map(|d| d.as_edge_coloring()).collect::<Result<_>>()?;
        let state: Vec<Vec<Vec<u32>>> = (0..g.n()).map(|v| splits.iter().map(|s| s.colors[v].clone()).collect()).collect();
        let delta = self.delta;
        let alg = FnAlgorithm {
            radius: 0,
            f: |view: &View<Vec<Vec<u32>>>| {
                let per = view.state(view.center())?;
                let deg = view.degree(view.center())?;
                (0..deg)
                    .map(|i| {
                        let mut t = 1usize;
                        while t < delta {
                            let c = per[t - 1][i];
                            if c == 0 {
                                return Err(Error::Decode("edge missing from its split slot".into()));
                            }
                            t = 2 * t + (c as usize - 1);
                        }
                        Ok((t - delta + 1) as u32)
                    })
                    .collect::<Result<Vec<u32>>>()
            },
        };
        let (colors, locality) = run_local(g, &state, &alg)?;
        Ok(Decoded { solution: Solution::EdgeColoring(EdgeColoring { colors }), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        solution.as_edge_coloring()?.check_proper(g, self.delta as u32, true)
    }
}

/// Slots: 0 = 2-coloring, t = 1..Δ-1 split slots, Δ = path-to-color.
pub fn delta_edge_coloring_schema(delta: usize, params: ComposableParams, orient: OrientationConfig) -> Result<Composed> {
    if delta < 2 || !delta.is_power_of_two() {
        return Err(Error::InvalidParams(format!("Δ = {delta} is not a power of 2")));
    }
    let k = delta + 1;
    let slot = ComposableParams { gamma: 2 * k * params.gamma, ..params };
    let mut slots: Vec<Box<dyn Schema>> = vec![Box::new(TwoColoringSchema::new(slot)?)];
    let mut edges = Vec::new();
    for t in 1..delta {
        let parent_color = if t == 1 { None } else { Some(1 + (t % 2) as u32) };
        slots.push(Box::new(SubgraphSplit { orientation: OrientationSchema::new(slot, orient)?, parent_color }));
        edges.push((t, 0));
        if t > 1 {
            edges.push((t, t / 2));
        }
    }
    slots.push(Box::new(PathToColor { delta }));
    for t in 1..delta {
        edges.push((delta, t));
    }
    Composed::new("delta-edge-coloring", slots, DependencyDag::new(k, &edges)?, params)
}

/// Smallest α at which the Δ-edge coloring composition is feasible for
/// (c, γ): the composition threshold at k = Δ+1 slots.
pub fn delta_edge_coloring_alpha(delta: usize, c: f64, gamma: usize) -> usize {
    let k = delta + 1;
    let q = (2 * k * gamma) as f64;
    let own = q.powi(3) * crate::bits::ceil_log2(k as u64) as f64 / c;
    own.max(basic_threshold(2, c, 2 * k * gamma)).ceil() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate_graph, GeneratorKind};

    fn run(g: &Graph, delta: usize) -> EdgeColoring {
        let gamma = 1 + 2 * (delta - 1);
        let alpha = delta_edge_coloring_alpha(delta, 1.0, gamma);
        let s = delta_edge_coloring_schema(delta, ComposableParams { c: 1.0, gamma, alpha }, OrientationConfig::default())
            .unwrap();
        let adv = s.encode(g, &[]).unwrap();
        let out = s.decode(g, &adv.bits, &[]).unwrap();
        s.check(g, &out.solution, &[]).unwrap();
        out.solution.as_edge_coloring().unwrap().clone()
    }

    #[test]
    fn cycle_and_k22() {
        let c6 = generate_graph(GeneratorKind::Cycle, &[6], 0).unwrap();
        run(&c6, 2);
        let k22 = Graph::from_edges(&[1, 2, 3, 4], &[(1, 3), (1, 4), (2, 3), (2, 4)]).unwrap();
        run(&k22, 2);
    }

    #[test]
    fn four_regular_bipartite() {
        let g = generate_graph(GeneratorKind::BipartiteRegularPow2, &[8, 4], 5).unwrap();
        run(&g, 4);
    }

    #[test]
    fn rejects_non_power_of_two() {
        let p = ComposableParams { c: 1.0, gamma: 9, alpha: 1 << 30 };
        assert!(delta_edge_coloring_schema(3, p, OrientationConfig::default()).is_err());
    }
}
