//! Locally checkable labeling problems: finite alphabets, a checking
//! radius, and a deterministic checker over the labeled radius-r̄ view of a
//! node. Checkers accept partial labelings (unassigned slots are `None`)
//! and reject only when no extension can be accepted, which lets the same
//! checker prune the exact search.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::View;
use crate::solution::Labeling;

/// Largest output alphabet and checking radius accepted at encode time.
pub const MAX_OUTPUTS: usize = 8;
pub const MAX_RADIUS: usize = 2;
pub const DEFAULT_SEARCH_CAP: usize = 5_000_000;

/// Adjacency access for checkers and searches, over a whole graph or a
/// LOCAL view. Views refuse adjacency of nodes on their boundary.
pub trait Topology {
    fn adj(&self, u: usize) -> Result<&[usize]>;
    fn node_id(&self, u: usize) -> Result<u64>;
}

impl Topology for Graph {
    fn adj(&self, u: usize) -> Result<&[usize]> {
        Ok(self.neighbors(u))
    }
    fn node_id(&self, u: usize) -> Result<u64> {
        Ok(self.id(u))
    }
}

impl<S> Topology for View<'_, S> {
    fn adj(&self, u: usize) -> Result<&[usize]> {
        self.all_neighbors(u)
    }
    fn node_id(&self, u: usize) -> Result<u64> {
        self.id(u)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    /// One label per node.
    Node,
    /// One label per (node, incident edge) pair, in adjacency order.
    HalfEdge,
}

/// Accepted radius-1 views: (own input, own output, sorted neighbor outputs).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    #[serde(default)]
    pub input: u8,
    pub output: u8,
    pub neighbors: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckerSpec {
    Builtin(Builtin),
    Table(Vec<TableEntry>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// Proper coloring with the output alphabet as palette.
    Coloring,
    /// Outputs "in" (0) and "out" (1): independent and dominating.
    Mis,
    /// Half-edge outputs "out" (0) and "in" (1), consistent per edge;
    /// nodes of degree ≥ 3 need an outgoing edge.
    SinklessOrientation,
}

/// On-disk form of an LCL problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LclDefinition {
    pub name: String,
    #[serde(default = "one")]
    pub inputs: usize,
    pub outputs: Vec<String>,
    pub radius: usize,
    pub kind: OutputKind,
    pub checker: CheckerSpec,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq)]
pub struct LclProblem {
    def: LclDefinition,
    table: HashSet<(u8, u8, Vec<u8>)>,
}

pub type Slots = Vec<Vec<Option<u8>>>;

fn slot(labels: &Slots, u: usize, p: usize) -> Option<u8> {
    labels[u].get(p).copied().flatten()
}

impl LclProblem {
    pub fn from_definition(def: LclDefinition) -> Result<LclProblem> {
        let k = def.outputs.len();
        if k == 0 || def.inputs == 0 {
            return Err(Error::InvalidParams("alphabets must be nonempty".into()));
        }
        if k > MAX_OUTPUTS || def.radius > MAX_RADIUS {
            return Err(Error::InvalidParams(format!(
                "supported up to {MAX_OUTPUTS} outputs and radius {MAX_RADIUS}, got {k} and {}",
                def.radius
            )));
        }
        let mut table = HashSet::new();
        match &def.checker {
            CheckerSpec::Builtin(Builtin::Coloring) => {}
            CheckerSpec::Builtin(Builtin::Mis) if k != 2 => {
                return Err(Error::InvalidParams("MIS needs exactly two outputs".into()))
            }
            CheckerSpec::Builtin(Builtin::SinklessOrientation) if k != 2 || def.kind != OutputKind::HalfEdge => {
                return Err(Error::InvalidParams("sinkless orientation needs two half-edge outputs".into()))
            }
            CheckerSpec::Builtin(_) => {}
            CheckerSpec::Table(entries) => {
                if def.radius != 1 || def.kind != OutputKind::Node {
                    return Err(Error::InvalidParams("truth tables describe radius-1 node labelings".into()));
                }
                for e in entries {
                    let bad = e.output as usize >= k
                        || e.input as usize >= def.inputs
                        || e.neighbors.iter().any(|&b| b as usize >= k);
                    if bad {
                        return Err(Error::InvalidParams("truth table entry outside the alphabets".into()));
                    }
                    let mut nb = e.neighbors.clone();
                    nb.sort_unstable();
                    table.insert((e.input, e.output, nb));
                }
            }
        }
        if def.radius == 0 {
            return Err(Error::InvalidParams("checking radius must be at least 1".into()));
        }
        Ok(LclProblem { def, table })
    }

    pub fn from_json(text: &str) -> Result<LclProblem> {
        let def: LclDefinition = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        LclProblem::from_definition(def)
    }

    pub fn definition(&self) -> &LclDefinition {
        &self.def
    }

    pub fn coloring(k: usize) -> LclProblem {
        LclProblem::from_definition(LclDefinition {
            name: format!("{k}-coloring"),
            inputs: 1,
            outputs: (1..=k).map(|c| c.to_string()).collect(),
            radius: 1,
            kind: OutputKind::Node,
            checker: CheckerSpec::Builtin(Builtin::Coloring),
        })
        .expect("valid built-in")
    }

    pub fn mis() -> LclProblem {
        LclProblem::from_definition(LclDefinition {
            name: "mis".into(),
            inputs: 1,
            outputs: vec!["in".into(), "out".into()],
            radius: 1,
            kind: OutputKind::Node,
            checker: CheckerSpec::Builtin(Builtin::Mis),
        })
        .expect("valid built-in")
    }

    pub fn sinkless_orientation() -> LclProblem {
        LclProblem::from_definition(LclDefinition {
            name: "sinkless-orientation".into(),
            inputs: 1,
            outputs: vec!["out".into(), "in".into()],
            radius: 1,
            kind: OutputKind::HalfEdge,
            checker: CheckerSpec::Builtin(Builtin::SinklessOrientation),
        })
        .expect("valid built-in")
    }

    /// Built-in by name: `mis`, `sinkless-orientation`, or `<k>-coloring`.
    pub fn builtin(name: &str) -> Result<LclProblem> {
        match name {
            "mis" => Ok(LclProblem::mis()),
            "sinkless-orientation" | "sinkless_orientation" => Ok(LclProblem::sinkless_orientation()),
            other => match other.strip_suffix("-coloring").and_then(|k| k.parse::<usize>().ok()) {
                Some(k) if (1..=MAX_OUTPUTS).contains(&k) => Ok(LclProblem::coloring(k)),
                _ => Err(Error::InvalidParams(format!("unknown LCL problem {other:?}"))),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.def.name
    }

    pub fn radius(&self) -> usize {
        self.def.radius
    }

    pub fn kind(&self) -> OutputKind {
        self.def.kind
    }

    pub fn num_outputs(&self) -> usize {
        self.def.outputs.len()
    }

    /// Bits per encoded label.
    pub fn label_bits(&self) -> usize {
        crate::bits::ceil_log2(self.num_outputs() as u64)
    }

    /// Label slots of a node of degree `deg`.
    pub fn slots(&self, deg: usize) -> usize {
        match self.def.kind {
            OutputKind::Node => 1,
            OutputKind::HalfEdge => deg,
        }
    }

    /// Checker at `v`. Reads adjacency up to distance r̄ - 1 from `v` and
    /// labels up to distance r̄.
    pub fn accepts<T: Topology + ?Sized>(&self, topo: &T, inputs: &[u8], labels: &Slots, v: usize) -> Result<bool> {
        let k = self.num_outputs() as u8;
        let nb = topo.adj(v)?;
        for p in 0..self.slots(nb.len()) {
            if slot(labels, v, p).is_some_and(|l| l >= k) {
                return Ok(false);
            }
        }
        match &self.def.checker {
            CheckerSpec::Builtin(Builtin::Coloring) => {
                let Some(a) = slot(labels, v, 0) else { return Ok(true) };
                Ok(nb.iter().all(|&w| slot(labels, w, 0) != Some(a)))
            }
            CheckerSpec::Builtin(Builtin::Mis) => match slot(labels, v, 0) {
                None => Ok(true),
                Some(0) => Ok(nb.iter().all(|&w| slot(labels, w, 0) != Some(0))),
                Some(_) => {
                    let all = nb.iter().all(|&w| slot(labels, w, 0).is_some());
                    Ok(!all || nb.iter().any(|&w| slot(labels, w, 0) == Some(0)))
                }
            },
            CheckerSpec::Builtin(Builtin::SinklessOrientation) => {
                for (p, &w) in nb.iter().enumerate() {
                    let Some(mine) = slot(labels, v, p) else { continue };
                    let q = topo_pos(topo, w, v)?;
                    if slot(labels, w, q) == Some(mine) {
                        return Ok(false);
                    }
                }
                if nb.len() >= 3 {
                    let all = (0..nb.len()).all(|p| slot(labels, v, p).is_some());
                    if all && (0..nb.len()).all(|p| slot(labels, v, p) != Some(0)) {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            CheckerSpec::Table(_) => {
                let Some(a) = slot(labels, v, 0) else { return Ok(true) };
                let mut around = Vec::with_capacity(nb.len());
                for &w in nb {
                    match slot(labels, w, 0) {
                        Some(b) => around.push(b),
                        None => return Ok(true),
                    }
                }
                around.sort_unstable();
                Ok(self.table.contains(&(inputs.get(v).copied().unwrap_or(0), a, around)))
            }
        }
    }

    /// Nodes rejecting a complete labeling of `g`.
    pub fn rejecting(&self, g: &Graph, inputs: &[u8], labeling: &Labeling) -> Result<Vec<usize>> {
        let labels = self.to_slots(g, labeling)?;
        let mut out = Vec::new();
        for v in g.id_order() {
            if labels[v].iter().any(Option::is_none) || !self.accepts(g, inputs, &labels, v)? {
                out.push(v);
            }
        }
        Ok(out)
    }

    pub fn check(&self, g: &Graph, inputs: &[u8], labeling: &Labeling) -> Result<()> {
        match self.rejecting(g, inputs, labeling)?.first() {
            None => Ok(()),
            Some(&v) => Err(Error::Verification(format!("{} rejected at node {}", self.name(), g.id(v)))),
        }
    }

    fn to_slots(&self, g: &Graph, labeling: &Labeling) -> Result<Slots> {
        if labeling.slots.len() != g.n() {
            return Err(Error::Verification("labeling does not cover every node".into()));
        }
        (0..g.n())
            .map(|v| {
                let s = &labeling.slots[v];
                if s.len() != self.slots(g.degree(v)) {
                    return Err(Error::Verification(format!("node {} has {} label slots", g.id(v), s.len())));
                }
                Ok(s.iter().map(|&l| Some(l)).collect())
            })
            .collect()
    }

    /// Completes `labels` on `free` by backtracking: nodes in BFS order
    /// (each component of `free` from its smallest ID, neighbors by
    /// ascending ID), slots in port order, labels in alphabet order. After
    /// every assignment the checker runs at all nodes within r̄ of the
    /// assigned node. `cap` bounds the number of assignments tried.
    pub fn complete<T: Topology + ?Sized>(
        &self,
        topo: &T,
        inputs: &[u8],
        labels: &mut Slots,
        free: &[usize],
        cap: usize,
    ) -> Result<usize> {
        let order = bfs_order(topo, free)?;
        let mut vars: Vec<(usize, usize)> = Vec::new();
        let mut watch: Vec<Vec<usize>> = Vec::new();
        for &u in &order {
            let deg = topo.adj(u)?.len();
            let need = self.slots(deg);
            if labels[u].len() < need {
                labels[u].resize(need, None);
            }
            let near = within(topo, u, self.radius())?;
            for p in 0..need {
                if labels[u][p].is_none() {
                    vars.push((u, p));
                    watch.push(near.clone());
                }
            }
        }
        // Fixed labels must be consistent before anything is added.
        let mut seen = HashSet::new();
        for near in &watch {
            for &w in near {
                if seen.insert(w) && !self.accepts(topo, inputs, labels, w)? {
                    return Err(Error::SearchFailed(format!(
                        "{}: fixed labels already rejected at node {}",
                        self.name(),
                        topo.node_id(w)?
                    )));
                }
            }
        }
        let k = self.num_outputs() as u8;
        let mut steps = 0usize;
        let mut i = 0usize;
        while i < vars.len() {
            let (u, p) = vars[i];
            let start = labels[u][p].map_or(0, |l| l + 1);
            labels[u][p] = None;
            let mut placed = false;
            for l in start..k {
                steps += 1;
                if steps > cap {
                    return Err(Error::SearchFailed(format!(
                        "{}: exact search exceeded {cap} steps on {} variables",
                        self.name(),
                        vars.len()
                    )));
                }
                labels[u][p] = Some(l);
                let mut ok = true;
                for &w in &watch[i] {
                    if !self.accepts(topo, inputs, labels, w)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    placed = true;
                    break;
                }
            }
            if placed {
                i += 1;
            } else {
                labels[u][p] = None;
                if i == 0 {
                    return Err(Error::SearchFailed(format!("{}: no valid completion exists", self.name())));
                }
                i -= 1;
            }
        }
        Ok(steps)
    }

    /// A full solution of `g` by exact search.
    pub fn solve(&self, g: &Graph, inputs: &[u8], cap: usize) -> Result<Labeling> {
        let mut labels: Slots = (0..g.n()).map(|_| Vec::new()).collect();
        let all: Vec<usize> = (0..g.n()).collect();
        self.complete(g, inputs, &mut labels, &all, cap)?;
        Ok(Labeling { slots: labels.into_iter().map(|s| s.into_iter().map(|l| l.unwrap_or(0)).collect()).collect() })
    }
}

fn topo_pos<T: Topology + ?Sized>(topo: &T, w: usize, v: usize) -> Result<usize> {
    topo.adj(w)?
        .iter()
        .position(|&x| x == v)
        .ok_or_else(|| Error::InvalidParams("adjacency is not symmetric".into()))
}

/// Nodes within `r` hops of `u`; adjacency is read up to distance r - 1.
pub fn within<T: Topology + ?Sized>(topo: &T, u: usize, r: usize) -> Result<Vec<usize>> {
    let mut seen = BTreeMap::from([(u, 0usize)]);
    let mut queue = VecDeque::from([u]);
    while let Some(a) = queue.pop_front() {
        let d = seen[&a];
        if d == r {
            continue;
        }
        for &b in topo.adj(a)? {
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(b) {
                e.insert(d + 1);
                queue.push_back(b);
            }
        }
    }
    Ok(seen.into_keys().collect())
}

fn bfs_order<T: Topology + ?Sized>(topo: &T, free: &[usize]) -> Result<Vec<usize>> {
    let set: HashSet<usize> = free.iter().copied().collect();
    let mut by_id: Vec<(u64, usize)> = free.iter().map(|&u| Ok((topo.node_id(u)?, u))).collect::<Result<_>>()?;
    by_id.sort_unstable();
    let mut done = BTreeSet::new();
    let mut order = Vec::with_capacity(free.len());
    for &(_, s) in &by_id {
        if !done.insert(s) {
            continue;
        }
        let mut queue = VecDeque::from([s]);
        while let Some(a) = queue.pop_front() {
            order.push(a);
            for &b in topo.adj(a)? {
                if set.contains(&b) && done.insert(b) {
                    queue.push_back(b);
                }
            }
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate_graph, GeneratorKind};

    fn brute_force_valid(p: &LclProblem, g: &Graph) -> bool {
        // Exhaustive scan over all labelings of a tiny graph.
        let k = p.num_outputs() as u64;
        let slots: Vec<usize> = (0..g.n()).map(|v| p.slots(g.degree(v))).collect();
        let total: usize = slots.iter().sum();
        (0..k.pow(total as u32)).any(|mut code| {
            let lab = Labeling {
                slots: slots
                    .iter()
                    .map(|&s| {
                        (0..s)
                            .map(|_| {
                                let l = (code % k) as u8;
                                code /= k;
                                l
                            })
                            .collect()
                    })
                    .collect(),
            };
            p.check(g, &[], &lab).is_ok()
        })
    }

    #[test]
    fn search_agrees_with_exhaustive_scan() {
        let c5 = generate_graph(GeneratorKind::Cycle, &[5], 1).unwrap();
        let c4 = generate_graph(GeneratorKind::Cycle, &[4], 1).unwrap();
        let k4 = Graph::from_edges(&[1, 2, 3, 4], &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]).unwrap();
        for (p, g) in [
            (LclProblem::coloring(2), &c5),
            (LclProblem::coloring(2), &c4),
            (LclProblem::coloring(3), &c5),
            (LclProblem::mis(), &c5),
            (LclProblem::sinkless_orientation(), &k4),
        ] {
            let found = p.solve(g, &[], DEFAULT_SEARCH_CAP);
            assert_eq!(found.is_ok(), brute_force_valid(&p, g), "{} on n={}", p.name(), g.n());
            if let Ok(l) = found {
                p.check(g, &[], &l).unwrap();
            }
        }
    }

    #[test]
    fn grid_solutions() {
        let g = generate_graph(GeneratorKind::Grid2d, &[30, 30], 4).unwrap();
        for p in [LclProblem::coloring(3), LclProblem::mis(), LclProblem::sinkless_orientation()] {
            let l = p.solve(&g, &[], DEFAULT_SEARCH_CAP).unwrap();
            p.check(&g, &[], &l).unwrap();
        }
    }

    #[test]
    fn partial_labelings_are_not_rejected_early() {
        let g = generate_graph(GeneratorKind::Path, &[3], 0).unwrap();
        let p = LclProblem::mis();
        let mid = (0..3).find(|&v| g.degree(v) == 2).unwrap();
        let mut labels: Slots = vec![vec![None]; 3];
        labels[mid] = vec![Some(1)];
        assert!(p.accepts(&g, &[], &labels, mid).unwrap());
        for v in 0..3 {
            labels[v] = vec![Some(1)];
        }
        assert!(!p.accepts(&g, &[], &labels, mid).unwrap());
    }

    #[test]
    fn truth_table_matches_builtin() {
        let json = r#"{"name":"2col","outputs":["a","b"],"radius":1,"kind":"node",
            "checker":{"table":[{"output":0,"neighbors":[1]},{"output":1,"neighbors":[0]},
            {"output":0,"neighbors":[1,1]},{"output":1,"neighbors":[0,0]}]}}"#;
        let table = LclProblem::from_json(json).unwrap();
        let builtin = LclProblem::coloring(2);
        let g = generate_graph(GeneratorKind::Path, &[4], 2).unwrap();
        for code in 0..16u32 {
            let lab = Labeling { slots: (0..4).map(|v| vec![((code >> v) & 1) as u8]).collect() };
            assert_eq!(table.check(&g, &[], &lab).is_ok(), builtin.check(&g, &[], &lab).is_ok());
        }
    }

    #[test]
    fn rejects_unsupported_definitions() {
        assert!(LclProblem::builtin("9-coloring").is_err());
        assert!(LclProblem::builtin("3-coloring").is_ok());
        let json = r#"{"name":"x","outputs":["a"],"radius":2,"kind":"node","checker":{"table":[]}}"#;
        assert!(LclProblem::from_json(json).is_err());
    }
}
