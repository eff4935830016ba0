//! Undirected simple graphs with unique node IDs and the combinatorial
//! primitives the schemas are built from.
//!
//! Nodes are addressed internally by a dense index `0..n`; the unique ID of
//! a node is what algorithms compare when they need an order. Adjacency
//! lists are kept sorted by neighbor ID so that "the i-th incident edge"
//! means the same thing to every encoder and decoder.

use std::collections::{BTreeMap, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    ids: Vec<u64>,
    adj: Vec<Vec<usize>>,
    index: HashMap<u64, usize>,
    /// Input labels on edge endpoints, keyed by (node, neighbor).
    labels: BTreeMap<(usize, usize), String>,
    max_degree: usize,
    m: usize,
}

impl Graph {
    /// Builds a graph from node IDs and an edge list given by IDs.
    pub fn from_edges(ids: &[u64], edges: &[(u64, u64)]) -> Result<Graph> {
        let mut index = HashMap::with_capacity(ids.len());
        for (i, &id) in ids.iter().enumerate() {
            if id == 0 {
                return Err(Error::InvalidParams("node IDs must be positive".into()));
            }
            if index.insert(id, i).is_some() {
                return Err(Error::InvalidParams(format!("duplicate node ID {id}")));
            }
        }
        let mut adj = vec![Vec::new(); ids.len()];
        for &(a, b) in edges {
            let u = *index.get(&a).ok_or(Error::UnknownNode(a))?;
            let v = *index.get(&b).ok_or(Error::UnknownNode(b))?;
            if u == v {
                return Err(Error::InvalidParams(format!("self-loop at {a}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_by_key(|&w| ids[w]);
            let before = list.len();
            list.dedup();
            if list.len() != before {
                return Err(Error::InvalidParams(format!("multi-edge at node {}", ids[u])));
            }
        }
        let max_degree = adj.iter().map(Vec::len).max().unwrap_or(0);
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(Graph { ids: ids.to_vec(), adj, index, labels: BTreeMap::new(), max_degree, m })
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn index_of(&self, id: u64) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownNode(id))
    }

    /// Neighbors of `v`, ascending by ID.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Position of `w` in `v`'s adjacency list.
    pub fn adj_pos(&self, v: usize, w: usize) -> Option<usize> {
        let target = self.ids[w];
        self.adj[v].binary_search_by_key(&target, |&x| self.ids[x]).ok()
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.adj_pos(v, w).is_some()
    }

    /// Edges as index pairs `(u, v)` with `id(u) < id(v)`, sorted by ID pair.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n() {
            for &v in &self.adj[u] {
                if self.ids[u] < self.ids[v] {
                    out.push((u, v));
                }
            }
        }
        out.sort_by_key(|&(u, v)| (self.ids[u], self.ids[v]));
        out
    }

    /// Node indices sorted ascending by ID.
    pub fn id_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by_key(|&v| self.ids[v]);
        order
    }

    pub fn set_label(&mut self, v: usize, w: usize, label: &str) -> Result<()> {
        if !self.has_edge(v, w) {
            return Err(Error::InvalidParams(format!(
                "label on non-edge {}-{}",
                self.ids[v], self.ids[w]
            )));
        }
        self.labels.insert((v, w), label.to_string());
        Ok(())
    }

    pub fn label(&self, v: usize, w: usize) -> Option<&str> {
        self.labels.get(&(v, w)).map(String::as_str)
    }

    pub fn labels(&self) -> impl Iterator<Item = (usize, usize, &str)> {
        self.labels.iter().map(|(&(v, w), l)| (v, w, l.as_str()))
    }

    /// BFS distances from `src`, stopping at `limit` hops. Unreached nodes are `None`.
    pub fn distances(&self, src: usize, limit: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            if d == limit {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Nodes within `r` hops of `v` with their distances, in BFS order.
    pub fn ball(&self, v: usize, r: usize) -> Vec<(usize, usize)> {
        let mut seen = HashMap::new();
        seen.insert(v, 0usize);
        let mut out = vec![(v, 0)];
        let mut head = 0;
        while head < out.len() {
            let (u, d) = out[head];
            head += 1;
            if d == r {
                continue;
            }
            for &w in &self.adj[u] {
                if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(w) {
                    e.insert(d + 1);
                    out.push((w, d + 1));
                }
            }
        }
        out
    }

    /// Ball lookup by ID, for callers working with external node names.
    pub fn ball_by_id(&self, id: u64, r: usize) -> Result<BTreeMap<u64, usize>> {
        let v = self.index_of(id)?;
        Ok(self.ball(v, r).into_iter().map(|(u, d)| (self.ids[u], d)).collect())
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distances(u, usize::MAX)[v]
    }

    /// Graph on the same IDs with an edge between nodes at distance `1..=k`.
    pub fn power_graph(&self, k: usize) -> Result<Graph> {
        if k == 0 {
            return Err(Error::InvalidParams("power graph needs k >= 1".into()));
        }
        let mut edges = Vec::new();
        for u in 0..self.n() {
            for (w, d) in self.ball(u, k) {
                if d >= 1 && self.ids[u] < self.ids[w] {
                    edges.push((self.ids[u], self.ids[w]));
                }
            }
        }
        Graph::from_edges(&self.ids, &edges)
    }

    /// Greedy (alpha, beta)-ruling set: a maximal independent set of the
    /// power graph G^(alpha-1), built by scanning nodes in ascending ID.
    pub fn ruling_set(&self, alpha: usize, beta: usize) -> Result<Vec<usize>> {
        self.ruling_set_among(&self.id_order(), alpha, beta)
    }

    /// Ruling set restricted to `candidates` (scanned in the given order),
    /// with distances measured in the whole graph. Domination is only
    /// guaranteed for the candidates.
    pub fn ruling_set_among(
        &self,
        candidates: &[usize],
        alpha: usize,
        beta: usize,
    ) -> Result<Vec<usize>> {
        if alpha == 0 || beta + 1 < alpha {
            return Err(Error::InvalidParams(format!(
                "ruling set needs alpha >= 1 and beta >= alpha - 1 (alpha={alpha}, beta={beta})"
            )));
        }
        let mut blocked = vec![false; self.n()];
        let mut chosen = Vec::new();
        for &v in candidates {
            if blocked[v] {
                continue;
            }
            chosen.push(v);
            for (w, _) in self.ball(v, alpha - 1) {
                blocked[w] = true;
            }
        }
        Ok(chosen)
    }

    /// Greedy coloring with colors `1..=k`, processing nodes in `order`.
    /// Each node takes the smallest color unused by already-colored neighbors.
    pub fn greedy_coloring(&self, order: &[usize], k: u32) -> Result<Vec<u32>> {
        let mut color = vec![0u32; self.n()];
        for &v in order {
            let mut used: Vec<u32> = self.adj[v].iter().map(|&w| color[w]).filter(|&c| c > 0).collect();
            used.sort_unstable();
            used.dedup();
            let mut c = 1;
            for u in used {
                if u == c {
                    c += 1;
                } else if u > c {
                    break;
                }
            }
            if c > k {
                return Err(Error::PaletteExceeded(k as usize));
            }
            color[v] = c;
        }
        Ok(color)
    }

    /// Connected components, each sorted ascending by ID; components ordered
    /// by their smallest ID.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut out: Vec<Vec<usize>> = Vec::new();
        for s in self.id_order() {
            if comp[s] != usize::MAX {
                continue;
            }
            let cid = out.len();
            comp[s] = cid;
            let mut members = vec![s];
            let mut head = 0;
            while head < members.len() {
                let u = members[head];
                head += 1;
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = cid;
                        members.push(w);
                    }
                }
            }
            members.sort_by_key(|&v| self.ids[v]);
            out.push(members);
        }
        out
    }

    /// Largest eccentricity over all nodes (max over components).
    pub fn diameter(&self) -> usize {
        (0..self.n())
            .map(|v| self.distances(v, usize::MAX).into_iter().flatten().max().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Induced subgraph on `nodes`; returns the subgraph and the map from
    /// subgraph index to original index. Labels on kept edges carry over.
    pub fn induced(&self, nodes: &[usize]) -> (Graph, Vec<usize>) {
        let keep: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let ids: Vec<u64> = nodes.iter().map(|&v| self.ids[v]).collect();
        let mut edges = Vec::new();
        for &u in nodes {
            for &w in &self.adj[u] {
                if self.ids[u] < self.ids[w] && keep.contains_key(&w) {
                    edges.push((self.ids[u], self.ids[w]));
                }
            }
        }
        let mut sub = Graph::from_edges(&ids, &edges).expect("induced subgraph of a valid graph");
        for (&(v, w), l) in &self.labels {
            if let (Some(&a), Some(&b)) = (keep.get(&v), keep.get(&w)) {
                sub.labels.insert((a, b), l.clone());
            }
        }
        (sub, nodes.to_vec())
    }

    /// Checks |ball(v, x)| <= 2^(c x) for every node and every
    /// x in [x0, diameter]. Reports the first violation by (ID, x).
    pub fn check_growth(&self, profile: &GrowthProfile) -> GrowthCheck {
        let diam = self.diameter();
        for v in self.id_order() {
            let dist = self.distances(v, usize::MAX);
            let mut per = vec![0usize; diam + 1];
            for d in dist.into_iter().flatten() {
                per[d] += 1;
            }
            let mut cum = 0usize;
            for (x, cnt) in per.iter().enumerate() {
                cum += cnt;
                if x >= profile.x0 && (cum as f64) > (profile.c * x as f64).exp2() {
                    return GrowthCheck { ok: false, witness: Some((self.ids[v], x, cum)) };
                }
            }
        }
        GrowthCheck { ok: true, witness: None }
    }

    /// Checks the structural invariants: symmetry, sortedness, no loops.
    pub fn validate(&self) -> Result<()> {
        for u in 0..self.n() {
            let list = &self.adj[u];
            for pair in list.windows(2) {
                if self.ids[pair[0]] >= self.ids[pair[1]] {
                    return Err(Error::InvalidParams("adjacency not strictly sorted".into()));
                }
            }
            for &w in list {
                if w == u || !self.has_edge(w, u) {
                    return Err(Error::InvalidParams("adjacency not symmetric".into()));
                }
            }
        }
        if self.adj.iter().map(Vec::len).max().unwrap_or(0) != self.max_degree {
            return Err(Error::InvalidParams("recorded max degree is stale".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthProfile {
    pub c: f64,
    pub x0: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthCheck {
    pub ok: bool,
    /// (node ID, radius, ball size) of the first violation.
    pub witness: Option<(u64, usize, usize)>,
}

pub fn is_proper_coloring(g: &Graph, colors: &[u32]) -> bool {
    g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: u64) -> Graph {
        let ids: Vec<u64> = (1..=n).collect();
        let edges: Vec<(u64, u64)> = (1..n).map(|i| (i, i + 1)).collect();
        Graph::from_edges(&ids, &edges).unwrap()
    }

    fn cycle(n: u64) -> Graph {
        let ids: Vec<u64> = (1..=n).collect();
        let edges: Vec<(u64, u64)> = (1..=n).map(|i| (i, i % n + 1)).collect();
        Graph::from_edges(&ids, &edges).unwrap()
    }

    #[test]
    fn balls_on_a_path() {
        let g = path(3);
        assert_eq!(g.ball_by_id(1, 1).unwrap(), BTreeMap::from([(1, 0), (2, 1)]));
        assert_eq!(g.ball_by_id(2, 1).unwrap(), BTreeMap::from([(1, 1), (2, 0), (3, 1)]));
        assert_eq!(g.ball_by_id(2, 0).unwrap(), BTreeMap::from([(2, 0)]));
        assert!(matches!(g.ball_by_id(9, 1), Err(Error::UnknownNode(9))));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(&[1, 2], &[(1, 1)]).is_err());
        assert!(Graph::from_edges(&[1, 2], &[(1, 2), (2, 1)]).is_err());
        assert!(Graph::from_edges(&[1, 1], &[]).is_err());
    }

    #[test]
    fn power_graph_cases() {
        let c6 = cycle(6);
        assert_eq!(c6.power_graph(1).unwrap().edges(), c6.edges());
        let sq = c6.power_graph(2).unwrap();
        assert!((0..6).all(|v| sq.degree(v) == 4));
        let tri = path(3).power_graph(2).unwrap();
        assert_eq!(tri.m(), 3);
        assert!(c6.power_graph(0).is_err());
    }

    #[test]
    fn greedy_coloring_examples() {
        let tri = Graph::from_edges(&[1, 2, 3], &[(1, 2), (2, 3), (1, 3)]).unwrap();
        assert_eq!(tri.greedy_coloring(&tri.id_order(), 3).unwrap(), vec![1, 2, 3]);
        assert!(matches!(tri.greedy_coloring(&tri.id_order(), 2), Err(Error::PaletteExceeded(2))));
        let c4 = cycle(4);
        assert_eq!(c4.greedy_coloring(&c4.id_order(), 4).unwrap(), vec![1, 2, 1, 2]);
        let empty = Graph::from_edges(&[4, 5, 6], &[]).unwrap();
        assert_eq!(empty.greedy_coloring(&empty.id_order(), 1).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn ruling_set_single_node() {
        let g = Graph::from_edges(&[7], &[]).unwrap();
        assert_eq!(g.ruling_set(5, 9).unwrap(), vec![0]);
        assert!(g.ruling_set(5, 2).is_err());
    }

    #[test]
    fn components_and_induced() {
        let g = Graph::from_edges(&[1, 2, 3, 4], &[(1, 2), (3, 4)]).unwrap();
        let comps = g.components();
        assert_eq!(comps.len(), 2);
        let (sub, map) = g.induced(&comps[1]);
        assert_eq!(sub.n(), 2);
        assert_eq!(sub.m(), 1);
        assert_eq!(map.iter().map(|&v| g.id(v)).collect::<Vec<_>>(), vec![3, 4]);
    }

    #[test]
    fn growth_single_node() {
        let g = Graph::from_edges(&[1], &[]).unwrap();
        assert!(g.check_growth(&GrowthProfile { c: 0.01, x0: 0 }).ok);
    }
}
