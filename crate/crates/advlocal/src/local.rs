//! LOCAL-model simulation. A decoder is a function of the radius-T view
//! around a node; `run_local` evaluates it at every node and records the
//! locality that was declared and touched.

use std::cell::{Cell, OnceCell};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// The radius-`r` ball around `center`, with per-node state attached.
/// Nodes outside the ball are not accessible: every accessor returns an
/// error for them. The ball itself is computed on first use beyond the
/// center, so algorithms that only read their own state stay cheap.
pub struct View<'a, S> {
    g: &'a Graph,
    state: &'a [S],
    center: usize,
    radius: usize,
    dist: OnceCell<HashMap<usize, usize>>,
    probe: &'a Probe,
}

/// What the views of one run actually touched: the largest ball
/// materialized and the farthest distance read from.
#[derive(Debug, Default)]
pub struct Probe {
    ball: Cell<usize>,
    reach: Cell<usize>,
}

impl Probe {
    pub fn max_ball(&self) -> usize {
        self.ball.get()
    }

    pub fn reach(&self) -> usize {
        self.reach.get()
    }
}

impl<'a, S> View<'a, S> {
    pub fn new(g: &'a Graph, state: &'a [S], center: usize, radius: usize, probe: &'a Probe) -> Self {
        View { g, state, center, radius, dist: OnceCell::new(), probe }
    }

    fn note(&self, d: usize) {
        self.probe.reach.set(self.probe.reach.get().max(d));
    }

    fn note_all(&self) {
        let far = self.ball().values().copied().max().unwrap_or(0);
        self.note(far);
    }

    fn ball(&self) -> &HashMap<usize, usize> {
        self.dist.get_or_init(|| {
            let ball: HashMap<usize, usize> = self.g.ball(self.center, self.radius).into_iter().collect();
            self.probe.ball.set(self.probe.ball.get().max(ball.len()));
            ball
        })
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of nodes of the host graph (a global scalar known to nodes).
    pub fn n(&self) -> usize {
        self.g.n()
    }

    /// Maximum degree of the host graph (a global scalar known to nodes).
    pub fn max_degree(&self) -> usize {
        self.g.max_degree()
    }

    pub fn dist(&self, u: usize) -> Option<usize> {
        if u == self.center {
            return Some(0);
        }
        self.ball().get(&u).copied()
    }

    pub fn contains(&self, u: usize) -> bool {
        self.dist(u).is_some()
    }

    fn check(&self, u: usize) -> Result<()> {
        if let Some(d) = self.dist(u) {
            self.note(d);
            Ok(())
        } else {
            Err(Error::NodeFailure {
                node: self.g.id(self.center),
                msg: format!("read outside its radius-{} view", self.radius),
            })
        }
    }

    pub fn state(&self, u: usize) -> Result<&'a S> {
        self.check(u)?;
        Ok(&self.state[u])
    }

    pub fn id(&self, u: usize) -> Result<u64> {
        self.check(u)?;
        Ok(self.g.id(u))
    }

    pub fn degree(&self, u: usize) -> Result<usize> {
        self.check(u)?;
        Ok(self.g.degree(u))
    }

    /// Neighbors of `u` inside the ball, ascending by ID.
    pub fn neighbors(&self, u: usize) -> Result<Vec<usize>> {
        self.check(u)?;
        if self.radius == 0 {
            return Ok(Vec::new());
        }
        let ball = self.ball();
        Ok(self.g.neighbors(u).iter().copied().filter(|w| ball.contains_key(w)).collect())
    }

    /// All neighbors of `u` including those just outside the ball; only
    /// allowed for nodes strictly inside the ball, whose edges are all seen.
    pub fn all_neighbors(&self, u: usize) -> Result<&'a [usize]> {
        match self.dist(u) {
            Some(d) if d < self.radius => {
                self.note(d + 1);
                Ok(self.g.neighbors(u))
            }
            _ => Err(Error::NodeFailure {
                node: self.g.id(self.center),
                msg: "full adjacency requested at the view boundary".into(),
            }),
        }
    }

    pub fn label(&self, u: usize, w: usize) -> Result<Option<&'a str>> {
        self.check(u)?;
        self.check(w)?;
        Ok(self.g.label(u, w))
    }

    /// Ball members sorted by (distance, ID).
    pub fn nodes(&self) -> Vec<usize> {
        let mut v: Vec<(usize, u64, usize)> = self.ball().iter().map(|(&u, &d)| (d, self.g.id(u), u)).collect();
        if v.is_empty() {
            return vec![self.center];
        }
        v.sort_unstable();
        v.into_iter().map(|(_, _, u)| u).collect()
    }

    /// BFS from `src` inside the ball, only through nodes accepted by `keep`,
    /// up to `limit` hops. Returns (node, distance) in BFS order.
    pub fn bfs(&self, src: usize, limit: usize, keep: impl Fn(usize) -> bool) -> Result<Vec<(usize, usize)>> {
        self.check(src)?;
        let ball = if self.radius == 0 { None } else { Some(self.ball()) };
        let mut seen = HashMap::new();
        seen.insert(src, 0usize);
        let mut out = vec![(src, 0)];
        let mut queue = VecDeque::from([(src, 0usize)]);
        while let Some((u, d)) = queue.pop_front() {
            if d == limit {
                continue;
            }
            for &w in self.g.neighbors(u) {
                if !ball.is_some_and(|b| b.contains_key(&w)) || !keep(w) || seen.contains_key(&w) {
                    continue;
                }
                seen.insert(w, d + 1);
                out.push((w, d + 1));
                queue.push_back((w, d + 1));
            }
        }
        if let Some(b) = ball {
            self.note(out.iter().filter_map(|(u, _)| b.get(u)).copied().max().unwrap_or(0));
        }
        Ok(out)
    }

    /// The same view at a smaller radius.
    pub fn restrict(&self, r: usize) -> View<'a, S> {
        View::new(self.g, self.state, self.center, r.min(self.radius), self.probe)
    }

    /// The ball as a standalone graph (same IDs and labels) together with
    /// the host index of each of its nodes.
    pub fn as_graph(&self) -> (Graph, Vec<usize>) {
        self.note_all();
        self.g.induced(&self.nodes())
    }

    /// True when every node of the ball has all its neighbors inside the
    /// ball, i.e. the view is a whole connected component.
    pub fn is_closed(&self) -> bool {
        self.note_all();
        let ball = self.ball();
        // Degrees are part of the view, so this needs no access beyond it.
        ball.keys().all(|&u| self.g.neighbors(u).iter().filter(|w| ball.contains_key(w)).count() == self.g.degree(u))
    }
}

impl<'a, S: Clone> View<'a, S> {
    /// Owned, comparable copy of everything the view exposes.
    pub fn snapshot(&self) -> ViewSnapshot<S> {
        self.note_all();
        let ball = self.ball();
        let mut nodes = BTreeMap::new();
        let mut edges = BTreeSet::new();
        let mut labels = BTreeMap::new();
        for (&u, &d) in ball {
            nodes.insert(self.g.id(u), (d, self.g.degree(u), self.state[u].clone()));
            for &w in self.g.neighbors(u) {
                if ball.contains_key(&w) {
                    if self.g.id(u) < self.g.id(w) {
                        edges.insert((self.g.id(u), self.g.id(w)));
                    }
                    if let Some(l) = self.g.label(u, w) {
                        labels.insert((self.g.id(u), self.g.id(w)), l.to_string());
                    }
                }
            }
        }
        ViewSnapshot {
            center: self.g.id(self.center),
            radius: self.radius,
            n: self.g.n(),
            max_degree: self.g.max_degree(),
            nodes,
            edges,
            labels,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ViewSnapshot<S> {
    pub center: u64,
    pub radius: usize,
    pub n: usize,
    pub max_degree: usize,
    /// ID → (distance, degree, state)
    pub nodes: BTreeMap<u64, (usize, usize, S)>,
    pub edges: BTreeSet<(u64, u64)>,
    pub labels: BTreeMap<(u64, u64), String>,
}

pub trait LocalAlgorithm<S> {
    type Output;
    /// Declared number of rounds.
    fn radius(&self) -> usize;
    fn eval(&self, view: &View<'_, S>) -> Result<Self::Output>;
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LocalityReport {
    pub declared_radius: usize,
    pub nodes: usize,
    /// Largest ball any node actually materialized.
    pub max_ball: usize,
    /// Farthest distance from its center at which any view was read.
    #[serde(default)]
    pub measured_radius: usize,
    /// Wall time in milliseconds. Excluded from reproducibility comparisons.
    #[serde(default)]
    pub wall_ms: u128,
}

impl LocalityReport {
    /// Sequential phases: radii add up.
    pub fn then(&self, next: &LocalityReport) -> LocalityReport {
        LocalityReport {
            declared_radius: self.declared_radius.saturating_add(next.declared_radius),
            nodes: self.nodes.max(next.nodes),
            max_ball: self.max_ball.max(next.max_ball),
            measured_radius: self.measured_radius.saturating_add(next.measured_radius),
            wall_ms: self.wall_ms + next.wall_ms,
        }
    }
}

/// Evaluates `alg` at every node (ascending ID) on the view of radius
/// `alg.radius()`. Errors carry the failing node ID.
pub fn run_local<S, A: LocalAlgorithm<S>>(
    g: &Graph,
    state: &[S],
    alg: &A,
) -> Result<(Vec<A::Output>, LocalityReport)> {
    assert_eq!(state.len(), g.n(), "one state per node");
    let start = Instant::now();
    let radius = alg.radius();
    let probe = Probe::default();
    probe.ball.set(1);
    let mut out: Vec<Option<A::Output>> = (0..g.n()).map(|_| None).collect();
    for v in g.id_order() {
        let view = View::new(g, state, v, radius, &probe);
        let res = alg.eval(&view).map_err(|e| match e {
            Error::NodeFailure { .. } => e,
            other => Error::NodeFailure { node: g.id(v), msg: other.to_string() },
        })?;
        out[v] = Some(res);
    }
    let report = LocalityReport {
        declared_radius: radius,
        nodes: g.n(),
        max_ball: if g.n() == 0 { 0 } else { probe.max_ball() },
        measured_radius: probe.reach(),
        wall_ms: start.elapsed().as_millis(),
    };
    Ok((out.into_iter().map(|o| o.expect("every node evaluated")).collect(), report))
}

/// A view function packaged with its radius.
pub struct FnAlgorithm<F> {
    pub radius: usize,
    pub f: F,
}

impl<S, O, F: Fn(&View<'_, S>) -> Result<O>> LocalAlgorithm<S> for FnAlgorithm<F> {
    type Output = O;
    fn radius(&self) -> usize {
        self.radius
    }
    fn eval(&self, view: &View<'_, S>) -> Result<O> {
        (self.f)(view)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::Bits;
    use crate::gen::{generate_graph, GeneratorKind};

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn identity_algorithm_returns_advice() {
        let g = generate_graph(GeneratorKind::Grid2d, &[4, 3], 2).unwrap();
        let advice: Vec<Bits> = (0..g.n()).map(|v| Bits::from_uint(v as u64, 4)).collect();
        let alg = FnAlgorithm { radius: 0, f: |v: &View<Bits>| Ok(v.state(v.center())?.clone()) };
        let (out, rep) = run_local(&g, &advice, &alg).unwrap();
        assert_eq!(out, advice);
        assert_eq!(rep.max_ball, 1);
    }

    #[test]
    fn counting_ones_on_c4() {
        let g = Graph::from_edges(&[1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4), (4, 1)]).unwrap();
        let advice = vec![bits("1"), bits("0"), bits("0"), bits("0")];
        let alg = FnAlgorithm {
            radius: 1,
            f: |v: &View<Bits>| {
                let mut c = 0;
                for u in v.nodes() {
                    if v.dist(u) == Some(1) && v.state(u)?.get(0) == Some(true) {
                        c += 1;
                    }
                }
                Ok(c)
            },
        };
        let (a, _) = run_local(&g, &advice, &alg).unwrap();
        let (b, _) = run_local(&g, &advice, &alg).unwrap();
        assert_eq!(a, vec![0, 1, 0, 1]);
        assert_eq!(a, b);
    }

    #[test]
    fn measured_radius_counts_reads_only() {
        let g = generate_graph(GeneratorKind::Cycle, &[12], 1).unwrap();
        let state = vec![1u32; 12];
        let own = FnAlgorithm { radius: 3, f: |v: &View<u32>| Ok(*v.state(v.center())?) };
        let (_, rep) = run_local(&g, &state, &own).unwrap();
        assert_eq!((rep.declared_radius, rep.measured_radius), (3, 0));
        let near = FnAlgorithm {
            radius: 3,
            f: |v: &View<u32>| {
                let mut s = 0;
                for &w in v.all_neighbors(v.center())? {
                    s += *v.state(w)?;
                }
                Ok(s)
            },
        };
        let (out, rep) = run_local(&g, &state, &near).unwrap();
        assert!(out.iter().all(|&s| s == 2));
        assert_eq!(rep.measured_radius, 1);
        assert_eq!(rep.then(&rep).measured_radius, 2);
    }

    #[test]
    fn views_are_bounded() {
        let g = generate_graph(GeneratorKind::Grid2d, &[5, 5], 0).unwrap();
        let corner = (0..25).find(|&v| g.degree(v) == 2).unwrap();
        let state = vec![(); 25];
        let probe = Probe::default();
        let view = View::new(&g, &state, corner, 1, &probe);
        assert_eq!(view.nodes().len(), 3);
        let snap = view.snapshot();
        assert_eq!(snap.edges.len(), 2);
        let far = (0..25).find(|&u| g.distance(corner, u) == Some(2)).unwrap();
        assert!(view.state(far).is_err());
        let zero = view.restrict(0);
        assert_eq!(zero.nodes(), vec![corner]);
    }

    #[test]
    fn whole_cycle_at_radius_three() {
        let g = generate_graph(GeneratorKind::Cycle, &[6], 4).unwrap();
        let state = vec![0u8; 6];
        let probe = Probe::default();
        let view = View::new(&g, &state, 0, 3, &probe);
        let snap = view.snapshot();
        assert_eq!(snap.nodes.len(), 6);
        assert_eq!(snap.edges.len(), 6);
    }

    #[test]
    fn failure_names_the_node() {
        let g = generate_graph(GeneratorKind::Path, &[3], 1).unwrap();
        let alg = FnAlgorithm {
            radius: 0,
            f: |v: &View<()>| if v.id(v.center())? == 2 { Err(Error::Decode("x".into())) } else { Ok(()) },
        };
        match run_local(&g, &[(), (), ()], &alg) {
            Err(Error::NodeFailure { node, .. }) => assert_eq!(node, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
