//! Splitting every node into degree-≤2 copies so that the edge set falls
//! apart into cycles and paths.
//!
//! A node of degree d gets ⌈d/2⌉ copies; copy `a` (from 0) owns adjacency
//! positions 2a and 2a+1, adjacency being sorted by neighbor ID.

use std::collections::HashSet;

use crate::error::Result;
use crate::graph::Graph;
use crate::local::View;

/// (node index, copy index)
pub type Copy = (usize, usize);

/// Read access to IDs and full adjacency lists; implemented by graphs and
/// by views (where it only works strictly inside the ball).
pub trait Adjacency {
    fn node_id(&self, u: usize) -> Result<u64>;
    fn adj(&self, u: usize) -> Result<&[usize]>;
}

impl Adjacency for Graph {
    fn node_id(&self, u: usize) -> Result<u64> {
        Ok(self.id(u))
    }
    fn adj(&self, u: usize) -> Result<&[usize]> {
        Ok(self.neighbors(u))
    }
}

impl<S> Adjacency for View<'_, S> {
    fn node_id(&self, u: usize) -> Result<u64> {
        self.id(u)
    }
    fn adj(&self, u: usize) -> Result<&[usize]> {
        self.all_neighbors(u)
    }
}

pub fn copies(degree: usize) -> usize {
    degree.div_ceil(2)
}

/// One traversed virtual edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step {
    pub from: Copy,
    pub from_pos: usize,
    pub to: Copy,
    pub to_pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WalkEnd {
    /// Came back to the start copy.
    Closed,
    /// Reached a copy with a single edge.
    Dead,
    /// Stopped after the step limit.
    Limit,
}

/// Walks from `start` leaving through adjacency position `first_pos`, for
/// at most `limit` steps.
pub fn walk<A: Adjacency + ?Sized>(a: &A, start: Copy, first_pos: usize, limit: usize) -> Result<(Vec<Step>, WalkEnd)> {
    let mut steps = Vec::new();
    let (mut u, mut pos) = (start.0, first_pos);
    loop {
        if steps.len() == limit {
            return Ok((steps, WalkEnd::Limit));
        }
        let w = a.adj(u)?[pos];
        let wadj = a.adj(w)?;
        let to_pos = wadj.iter().position(|&x| x == u).expect("adjacency is symmetric");
        let to = (w, to_pos / 2);
        steps.push(Step { from: (u, pos / 2), from_pos: pos, to, to_pos });
        if to == start {
            return Ok((steps, WalkEnd::Closed));
        }
        let other = to_pos ^ 1;
        if other >= wadj.len() {
            return Ok((steps, WalkEnd::Dead));
        }
        u = w;
        pos = other;
    }
}

/// A cycle or path of the virtual graph, listed in its canonical direction:
/// edge i goes from `nodes[i]` to `nodes[i+1]` (cyclically for cycles).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub closed: bool,
    pub nodes: Vec<Copy>,
}

impl Piece {
    pub fn len(&self) -> usize {
        if self.closed {
            self.nodes.len()
        } else {
            self.nodes.len() - 1
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Original edges as arcs, in piece order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).map(|i| (self.nodes[i].0, self.nodes[(i + 1) % self.nodes.len()].0)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleDecomposition {
    pub pieces: Vec<Piece>,
}

impl CycleDecomposition {
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.pieces.iter().flat_map(Piece::arcs).collect()
    }
}

fn key(g: &Graph, c: Copy) -> (u64, usize) {
    (g.id(c.0), c.1)
}

/// Orders a cycle canonically: start at the largest (ID, copy) copy and
/// leave toward its larger-ID cycle neighbor.
fn canonical_cycle(g: &Graph, mut nodes: Vec<Copy>) -> Vec<Copy> {
    let n = nodes.len();
    let top = (0..n).max_by_key(|&i| key(g, nodes[i])).expect("nonempty cycle");
    let next = g.id(nodes[(top + 1) % n].0);
    let prev = g.id(nodes[(top + n - 1) % n].0);
    nodes.rotate_left(top);
    if prev > next {
        nodes[1..].reverse();
    }
    nodes
}

/// Paths run from their smaller (ID, copy) endpoint.
fn canonical_path(g: &Graph, mut nodes: Vec<Copy>) -> Vec<Copy> {
    if key(g, nodes[nodes.len() - 1]) < key(g, nodes[0]) {
        nodes.reverse();
    }
    nodes
}

pub fn cycle_decompose(g: &Graph) -> CycleDecomposition {
    let mut seen: HashSet<Copy> = HashSet::new();
    let mut pieces = Vec::new();
    for v in g.id_order() {
        for a in 0..copies(g.degree(v)) {
            let start = (v, a);
            if seen.contains(&start) {
                continue;
            }
            let (fwd, end) = walk(g, start, 2 * a, usize::MAX).expect("graph access is total");
            let piece = if end == WalkEnd::Closed {
                let nodes: Vec<Copy> = std::iter::once(start).chain(fwd.iter().map(|s| s.to).take(fwd.len() - 1)).collect();
                Piece { closed: true, nodes: canonical_cycle(g, nodes) }
            } else {
                let mut back = Vec::new();
                if 2 * a + 1 < g.degree(v) {
                    back = walk(g, start, 2 * a + 1, usize::MAX).expect("graph access is total").0;
                }
                let mut nodes: Vec<Copy> = back.iter().rev().map(|s| s.to).collect();
                nodes.push(start);
                nodes.extend(fwd.iter().map(|s| s.to));
                Piece { closed: false, nodes: canonical_path(g, nodes) }
            };
            seen.extend(piece.nodes.iter().copied());
            pieces.push(piece);
        }
    }
    CycleDecomposition { pieces }
}

/// Canonical orientation of a cycle given by node IDs in cyclic order:
/// the largest ID points toward the larger of its two cycle neighbors.
/// Returns arcs as (tail ID, head ID).
pub fn orient_short_cycle(cycle: &[u64]) -> Vec<(u64, u64)> {
    let n = cycle.len();
    if n < 3 {
        return Vec::new();
    }
    let top = (0..n).max_by_key(|&i| cycle[i]).expect("nonempty");
    let next = cycle[(top + 1) % n];
    let prev = cycle[(top + n - 1) % n];
    let mut order: Vec<u64> = (0..n).map(|i| cycle[(top + i) % n]).collect();
    if prev > next {
        order[1..].reverse();
    }
    (0..n).map(|i| (order[i], order[(i + 1) % n])).collect()
}
