//! DAG composition of variable-length schemas. Each node's per-slot strings
//! are packed with the frame codec; the decoder unpacks them and solves the
//! slots dependencies-first.

use crate::advice::{require_threshold, AdviceAssignment, ComposableParams, Decoded, Schema};
use crate::bits::{ceil_log2, frame_decode, frame_encode, Bits};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, FnAlgorithm, LocalityReport, View};
use crate::solution::Solution;

/// Edges `(i, j)` mean slot `i` consumes the solution of slot `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DependencyDag {
    pub k: usize,
    pub edges: Vec<(usize, usize)>,
}

impl DependencyDag {
    pub fn new(k: usize, edges: &[(usize, usize)]) -> Result<DependencyDag> {
        if edges.iter().any(|&(i, j)| i >= k || j >= k) {
            return Err(Error::InvalidParams("dependency refers to a missing slot".into()));
        }
        let dag = DependencyDag { k, edges: edges.to_vec() };
        dag.order()?;
        Ok(dag)
    }

    pub fn chain(k: usize) -> DependencyDag {
        DependencyDag { k, edges: (1..k).map(|i| (i, i - 1)).collect() }
    }

    pub fn deps_of(&self, i: usize) -> Vec<usize> {
        let mut d: Vec<usize> = self.edges.iter().filter(|e| e.0 == i).map(|e| e.1).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Slots ordered so that every slot comes after the slots it consumes;
    /// ties by index.
    pub fn order(&self) -> Result<Vec<usize>> {
        let mut pending: Vec<usize> = (0..self.k).map(|i| self.deps_of(i).len()).collect();
        let mut done = vec![false; self.k];
        let mut out = Vec::with_capacity(self.k);
        while out.len() < self.k {
            let next = (0..self.k).find(|&i| !done[i] && pending[i] == 0).ok_or_else(|| {
                Error::InvalidParams("dependency graph has a cycle".into())
            })?;
            done[next] = true;
            out.push(next);
            for i in 0..self.k {
                if !done[i] && self.deps_of(i).contains(&next) {
                    pending[i] -= 1;
                }
            }
        }
        Ok(out)
    }
}

pub struct Composed {
    name: String,
    slots: Vec<Box<dyn Schema>>,
    dag: DependencyDag,
    params: ComposableParams,
    output: usize,
}

impl Composed {
    /// Composes `slots` along `dag`. The composite's solution is the one of
    /// the last slot.
    pub fn new(name: &str, slots: Vec<Box<dyn Schema>>, dag: DependencyDag, params: ComposableParams) -> Result<Composed> {
        if slots.len() != dag.k || slots.is_empty() {
            return Err(Error::InvalidParams("slot count does not match the dependency graph".into()));
        }
        dag.order()?;
        let output = slots.len() - 1;
        let c = Composed { name: name.to_string(), slots, dag, params, output };
        require_threshold(&c, &params)?;
        Ok(c)
    }

    pub fn slots(&self) -> &[Box<dyn Schema>] {
        &self.slots
    }

    pub fn dag(&self) -> &DependencyDag {
        &self.dag
    }

    fn k(&self) -> usize {
        self.slots.len()
    }

    /// Per-string bound for one slot: c·α/(2kγ)³.
    fn slot_budget(&self) -> f64 {
        let q = 2.0 * self.k() as f64 * self.params.gamma as f64;
        self.params.c * self.params.alpha as f64 / q.powi(3)
    }

    /// Encodes every slot and also returns the decoded per-slot solutions the
    /// encoder fed forward.
    pub fn encode_with_solutions(&self, g: &Graph) -> Result<(AdviceAssignment, Vec<Solution>)> {
        let k = self.k();
        let mut per_slot: Vec<Vec<Bits>> = vec![Vec::new(); k];
        let mut sols: Vec<Option<Solution>> = vec![None; k];
        let budget = self.slot_budget();
        for i in self.dag.order()? {
            let deps: Vec<&Solution> =
                self.dag.deps_of(i).iter().map(|&j| sols[j].as_ref().expect("dependency solved first")).collect();
            let adv = self.slots[i].encode(g, &deps)?;
            if let Some(v) = (0..g.n()).find(|&v| adv.bits[v].len() as f64 > budget) {
                return Err(Error::Infeasible(format!(
                    "slot {} ({}) gives node {} {} bits > c·α/(2kγ)³ = {budget:.3}",
                    i + 1,
                    self.slots[i].name(),
                    g.id(v),
                    adv.bits[v].len()
                )));
            }
            let decoded = self.slots[i].decode(g, &adv.bits, &deps)?;
            sols[i] = Some(decoded.solution);
            per_slot[i] = adv.bits;
        }
        let mut bits = Vec::with_capacity(g.n());
        for v in 0..g.n() {
            let entries: Vec<(usize, Bits)> = (0..k)
                .filter(|&i| !per_slot[i][v].is_empty())
                .map(|i| (i + 1, per_slot[i][v].clone()))
                .collect();
            bits.push(frame_encode(&entries, k)?);
        }
        let total = self.params.bit_budget();
        if let Some(v) = (0..g.n()).find(|&v| bits[v].len() as f64 > total) {
            return Err(Error::Infeasible(format!(
                "{}: node {} holds {} framed bits > c·α/γ³ = {total:.3}",
                self.name,
                g.id(v),
                bits[v].len()
            )));
        }
        let sols = sols.into_iter().map(|s| s.expect("all slots solved")).collect();
        Ok((AdviceAssignment::variable(bits), sols))
    }

    /// Decodes every slot; returns all slot solutions.
    pub fn decode_all(&self, g: &Graph, advice: &[Bits]) -> Result<(Vec<Solution>, LocalityReport)> {
        let k = self.k();
        let unframe = FnAlgorithm {
            radius: 0,
            f: |view: &View<Bits>| {
                let own = view.state(view.center())?;
                let mut per = vec![Bits::new(); k];
                for (i, l) in frame_decode(own, k)? {
                    per[i - 1] = l;
                }
                Ok(per)
            },
        };
        let (framed, first) = run_local(g, advice, &unframe)?;
        let mut sols: Vec<Option<Solution>> = vec![None; k];
        let mut report = first;
        // Measured reach along the longest dependency chain.
        let mut finish = vec![0usize; k];
        for i in self.dag.order()? {
            let slot_bits: Vec<Bits> = framed.iter().map(|per| per[i].clone()).collect();
            let deps: Vec<&Solution> =
                self.dag.deps_of(i).iter().map(|&j| sols[j].as_ref().expect("dependency solved first")).collect();
            let decoded = self.slots[i].decode(g, &slot_bits, &deps)?;
            report.max_ball = report.max_ball.max(decoded.locality.max_ball);
            report.wall_ms += decoded.locality.wall_ms;
            finish[i] = decoded.locality.measured_radius + self.dag.deps_of(i).iter().map(|&j| finish[j]).max().unwrap_or(0);
            sols[i] = Some(decoded.solution);
        }
        report.measured_radius += finish.iter().copied().max().unwrap_or(0);
        report.declared_radius = self.radius(g);
        Ok((sols.into_iter().map(|s| s.expect("all slots solved")).collect(), report))
    }
}

impl Schema for Composed {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn gamma0(&self) -> usize {
        self.slots.iter().map(|s| s.gamma0()).sum()
    }

    fn threshold(&self, c: f64, gamma: usize) -> f64 {
        let k = self.k();
        let q = (2 * k * gamma) as f64;
        let own = q.powi(3) * ceil_log2(k as u64) as f64 / c;
        self.slots.iter().map(|s| s.threshold(c, 2 * k * gamma)).fold(own, f64::max)
    }

    fn params(&self) -> Option<ComposableParams> {
        Some(self.params)
    }

    /// Longest dependency path, weighting each slot by its own radius.
    fn radius(&self, g: &Graph) -> usize {
        let mut finish = vec![0usize; self.k()];
        for i in self.dag.order().expect("validated at construction") {
            let before = self.dag.deps_of(i).iter().map(|&j| finish[j]).max().unwrap_or(0);
            finish[i] = before.saturating_add(self.slots[i].radius(g));
        }
        finish.into_iter().max().unwrap_or(0)
    }

    fn encode(&self, g: &Graph, _deps: &[&Solution]) -> Result<AdviceAssignment> {
        Ok(self.encode_with_solutions(g)?.0)
    }

    fn decode(&self, g: &Graph, advice: &[Bits], _deps: &[&Solution]) -> Result<Decoded> {
        let (mut sols, locality) = self.decode_all(g, advice)?;
        Ok(Decoded { solution: sols.swap_remove(self.output), locality })
    }

    fn check(&self, g: &Graph, solution: &Solution, deps: &[&Solution]) -> Result<()> {
        self.slots[self.output].check(g, solution, deps)
    }
}
