//! Almost-balanced orientation with a few advice pairs per long cycle or
//! path of the virtual graph.
//!
//! Short pieces (at most r edges) are oriented canonically by every node on
//! its own. On long pieces the encoder marks one edge per window of r+1
//! consecutive edges: its smaller-ID endpoint (the holder) stores "1" and a
//! direction bit, the other endpoint stores "1". Holders are pairwise at
//! least 3α apart in G, so an α-ball holds at most two marked nodes.

use std::cell::RefCell;
use std::collections::{HashMap, HashSet};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::decompose::{copies, cycle_decompose, walk, Adjacency, Copy, CycleDecomposition, Step, WalkEnd};
use crate::advice::{basic_threshold, require_threshold, AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, LocalAlgorithm, View};
use crate::search::{self, BinaryCsp, SearchStats};
use crate::solution::{Orientation, Solution};

pub const DEFAULT_R_CAP: usize = 100_000;
pub const DEFAULT_SHIFT_BUDGET: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientationConfig {
    /// Short-piece threshold; derived from Δ and α when absent.
    pub r: Option<usize>,
    pub r_cap: usize,
    pub seed: u64,
    pub budget: usize,
}

impl Default for OrientationConfig {
    fn default() -> Self {
        OrientationConfig { r: None, r_cap: DEFAULT_R_CAP, seed: 0, budget: DEFAULT_SHIFT_BUDGET }
    }
}

/// One marked edge: holder, partner and whether the edge leaves the holder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pair {
    pub holder: usize,
    pub partner: usize,
    pub out_of_holder: bool,
}

/// Marker placement as a constraint problem: one variable per window, its
/// domain the window's edges; two choices clash when their holders are
/// closer than 3α.
pub struct ShiftProblem<'g> {
    g: &'g Graph,
    pub windows: Vec<Vec<Pair>>,
    pub min_dist: usize,
    balls: RefCell<HashMap<usize, HashSet<usize>>>,
}

impl<'g> ShiftProblem<'g> {
    pub fn new(g: &'g Graph, windows: Vec<Vec<Pair>>, min_dist: usize) -> Self {
        ShiftProblem { g, windows, min_dist, balls: RefCell::new(HashMap::new()) }
    }

    fn near(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let mut balls = self.balls.borrow_mut();
        let ball = balls
            .entry(a)
            .or_insert_with(|| self.g.ball(a, self.min_dist - 1).into_iter().map(|(u, _)| u).collect());
        ball.contains(&b)
    }

    pub fn pairs(&self, assign: &[usize]) -> Vec<Pair> {
        assign.iter().enumerate().map(|(i, &j)| self.windows[i][j]).collect()
    }
}

impl BinaryCsp for ShiftProblem<'_> {
    fn num_vars(&self) -> usize {
        self.windows.len()
    }

    fn domain_size(&self, var: usize) -> usize {
        self.windows[var].len()
    }

    fn conflict(&self, assign: &[Option<usize>], var: usize) -> Option<usize> {
        let h = self.windows[var][assign[var]?].holder;
        (0..assign.len()).find(|&w| w != var && assign[w].is_some_and(|j| self.near(h, self.windows[w][j].holder)))
    }
}

/// Everything the encoder decided, for inspection.
pub struct OrientationEncoding {
    pub advice: AdviceAssignment,
    pub decomposition: CycleDecomposition,
    pub r: usize,
    pub long_pieces: usize,
    pub pairs: Vec<Pair>,
    pub stats: SearchStats,
}

pub struct OrientationSchema {
    params: ComposableParams,
    config: OrientationConfig,
    log: RefCell<Vec<SearchStats>>,
}

impl OrientationSchema {
    pub fn new(params: ComposableParams, config: OrientationConfig) -> Result<OrientationSchema> {
        if params.alpha < 3 {
            return Err(Error::InvalidParams("orientation needs α >= 3".into()));
        }
        if config.r == Some(0) {
            return Err(Error::InvalidParams("r must be positive".into()));
        }
        let s = OrientationSchema { params, config, log: RefCell::new(Vec::new()) };
        require_threshold(&s, &params)?;
        Ok(s)
    }

    pub fn config(&self) -> &OrientationConfig {
        &self.config
    }

    /// Search statistics of every encoding run so far.
    pub fn search_log(&self) -> Vec<SearchStats> {
        self.log.borrow().clone()
    }

    /// Short-piece threshold: the configured r, or min(Δ^(α/2), cap).
    pub fn r(&self, g: &Graph) -> usize {
        if let Some(r) = self.config.r {
            return r;
        }
        let delta = g.max_degree().max(1) as f64;
        let derived = delta.powf(self.params.alpha as f64 / 2.0);
        if derived >= self.config.r_cap as f64 {
            self.config.r_cap
        } else {
            (derived as usize).max(1)
        }
    }

    /// Windows of consecutive edges of a long piece; each needs one marker.
    fn windows(len: usize, closed: bool, r: usize) -> Vec<std::ops::Range<usize>> {
        if len <= 2 * r + 1 {
            if closed {
                return vec![0..len];
            }
            return vec![(len - 1).saturating_sub(r)..(r + 1).min(len)];
        }
        let m = len.div_ceil(r + 1);
        (0..m).map(|k| k * (r + 1)..((k + 1) * (r + 1)).min(len)).collect()
    }

    /// The shift problem of `g` together with the decomposition it came from.
    pub fn shift_problem<'g>(&self, g: &'g Graph) -> (ShiftProblem<'g>, CycleDecomposition, usize) {
        let decomposition = cycle_decompose(g);
        let r = self.r(g);
        let mut windows = Vec::new();
        let mut long = 0;
        for piece in decomposition.pieces.iter().filter(|p| p.len() > r) {
            long += 1;
            let arcs = piece.arcs();
            for range in Self::windows(piece.len(), piece.closed, r) {
                let cands = range
                    .map(|i| {
                        let (t, h) = arcs[i];
                        if g.id(t) < g.id(h) {
                            Pair { holder: t, partner: h, out_of_holder: true }
                        } else {
                            Pair { holder: h, partner: t, out_of_holder: false }
                        }
                    })
                    .collect();
                windows.push(cands);
            }
        }
        (ShiftProblem::new(g, windows, 3 * self.params.alpha), decomposition, long)
    }

    pub fn encode_detailed(&self, g: &Graph) -> Result<OrientationEncoding> {
        let (problem, decomposition, long_pieces) = self.shift_problem(g);
        let r = self.r(g);
        let mut rng = ChaCha8Rng::seed_from_u64(self.config.seed);
        let (assign, stats) = search::solve(&problem, &mut rng, self.config.budget, |last, a, b| {
            format!(
                "holders {} and {} closer than 3α = {}",
                g.id(problem.windows[a][last[a]].holder),
                g.id(problem.windows[b][last[b]].holder),
                problem.min_dist
            )
        })?;
        let pairs = problem.pairs(&assign);
        let mut bits = vec![Bits::new(); g.n()];
        for p in &pairs {
            bits[p.holder] = Bits(vec![true, p.out_of_holder]);
            bits[p.partner] = Bits(vec![true]);
        }
        self.log.borrow_mut().push(stats.clone());
        Ok(OrientationEncoding { advice: AdviceAssignment::variable(bits), decomposition, r, long_pieces, pairs, stats })
    }
}

impl Schema for OrientationSchema {
    fn name(&self) -> String {
        "orientation".into()
    }

    fn gamma0(&self) -> usize {
        2
    }

    fn threshold(&self, c: f64, gamma: usize) -> f64 {
        basic_threshold(2, c, gamma)
    }

    fn params(&self) -> Option<ComposableParams> {
        Some(self.params)
    }

    fn radius(&self, g: &Graph) -> usize {
        self.r(g) + 2
    }

    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        Ok(self.encode_detailed(g)?.advice)
    }

    fn decode(&self, g: &Graph, advice: &[Bits], _deps: &[&Solution]) -> Result<Decoded> {
        let dec = Decoder { r: self.r(g) };
        let (out, locality) = run_local(g, advice, &dec)?;
        Ok(Decoded { solution: Solution::Orientation(Orientation { out }), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, _deps: &[&Solution]) -> Result<()> {
        solution.as_orientation()?.check_balanced(g)
    }
}

struct Decoder {
    r: usize,
}

fn key<A: Adjacency + ?Sized>(a: &A, c: Copy) -> Result<(u64, usize)> {
    Ok((a.node_id(c.0)?, c.1))
}

impl Decoder {
    /// Whether the piece through `start` is traversed in the direction of
    /// adjacency position 2·copy.
    fn forward(&self, view: &View<Bits>, start: Copy) -> Result<bool> {
        let r = self.r;
        let (fwd, end) = walk(view, start, 2 * start.1, r + 1)?;
        if end == WalkEnd::Closed && fwd.len() <= r {
            let nodes: Vec<Copy> = std::iter::once(start).chain(fwd.iter().map(|s| s.to).take(fwd.len() - 1)).collect();
            let n = nodes.len();
            let mut top = 0;
            for i in 1..n {
                if key(view, nodes[i])? > key(view, nodes[top])? {
                    top = i;
                }
            }
            let next = view.id(nodes[(top + 1) % n].0)?;
            let prev = view.id(nodes[(top + n - 1) % n].0)?;
            return Ok(next > prev);
        }
        let (back, back_end) = if 2 * start.1 + 1 < view.degree(start.0)? {
            walk(view, start, 2 * start.1 + 1, r + 1)?
        } else {
            (Vec::new(), WalkEnd::Dead)
        };
        if end == WalkEnd::Dead && back_end == WalkEnd::Dead && fwd.len() + back.len() <= r {
            let end_a = fwd.last().map(|s| s.to).unwrap_or(start);
            let end_b = back.last().map(|s| s.to).unwrap_or(start);
            return Ok(key(view, end_b)? < key(view, end_a)?);
        }
        let pair_dir = |s: &Step| -> Result<Option<bool>> {
            let (x, y) = (s.from.0, s.to.0);
            let (bx, by) = (view.state(x)?, view.state(y)?);
            let is_partner = |b: &Bits| b.len() == 1 && b.get(0) == Some(true);
            let is_holder = |b: &Bits| b.len() == 2 && b.get(0) == Some(true);
            if is_holder(bx) && is_partner(by) {
                return Ok(Some(bx.get(1) == Some(true)));
            }
            if is_holder(by) && is_partner(bx) {
                return Ok(Some(by.get(1) != Some(true)));
            }
            Ok(None)
        };
        for i in 0..fwd.len().max(back.len()) {
            if let Some(s) = fwd.get(i) {
                if let Some(d) = pair_dir(s)? {
                    return Ok(d);
                }
            }
            if let Some(s) = back.get(i) {
                if let Some(d) = pair_dir(s)? {
                    return Ok(!d);
                }
            }
        }
        Err(Error::Decode(format!("no advice pair within {} steps on a long piece", r + 1)))
    }
}

impl LocalAlgorithm<Bits> for Decoder {
    type Output = Vec<bool>;

    fn radius(&self) -> usize {
        self.r + 2
    }

    fn eval(&self, view: &View<Bits>) -> Result<Vec<bool>> {
        let v = view.center();
        let deg = view.degree(v)?;
        let mut out = vec![false; deg];
        for a in 0..copies(deg) {
            let f = self.forward(view, (v, a))?;
            out[2 * a] = f;
            if 2 * a + 1 < deg {
                out[2 * a + 1] = !f;
            }
        }
        Ok(out)
    }
}
