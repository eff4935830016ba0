//! Compression of an arbitrary edge subset: a 1-bit orientation advice,
//! then one membership bit per outgoing edge (ascending head ID). A node of
//! degree d stores at most ⌈d/2⌉ + 1 bits.

use super::schema::{OrientationConfig, OrientationSchema};
use crate::advice::{AdviceAssignment, ComposableParams, Schema};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, FnAlgorithm, LocalityReport, View};
use crate::onebit::{to_one_bit, OneBit};
use crate::solution::{canonical_edges, Orientation};

pub struct EdgeSubsetCodec {
    orientation: OneBit,
}

impl EdgeSubsetCodec {
    pub fn new(params: ComposableParams, orient: OrientationConfig) -> Result<EdgeSubsetCodec> {
        let inner = OrientationSchema::new(params, orient)?;
        Ok(EdgeSubsetCodec { orientation: to_one_bit(Box::new(inner), params)? })
    }

    pub fn radius(&self, g: &Graph) -> usize {
        self.orientation.radius(g) + 1
    }

    fn orientation_bits(advice: &[Bits]) -> Result<Vec<Bits>> {
        advice
            .iter()
            .map(|s| match s.get(0) {
                Some(b) => Ok(Bits(vec![b])),
                None => Err(Error::Decode("missing orientation bit".into())),
            })
            .collect()
    }

    /// `x` holds edges as index pairs in either order.
    pub fn encode(&self, g: &Graph, x: &[(usize, usize)]) -> Result<AdviceAssignment> {
        if let Some(&(u, v)) = x.iter().find(|&&(u, v)| u >= g.n() || v >= g.n() || !g.has_edge(u, v)) {
            return Err(Error::InvalidParams(format!("({u}, {v}) is not an edge")));
        }
        let member: std::collections::HashSet<(usize, usize)> = canonical_edges(g, x).into_iter().collect();
        let one = self.orientation.encode(g, &[])?;
        // Decode once so the membership bits follow exactly the orientation
        // the nodes will recover.
        let decoded = self.orientation.decode(g, &one.bits, &[])?;
        let ori = decoded.solution.as_orientation()?;
        let bits = (0..g.n())
            .map(|v| {
                let mut s = one.bits[v].clone();
                for (i, &w) in g.neighbors(v).iter().enumerate() {
                    if ori.out[v][i] {
                        let e = if g.id(v) < g.id(w) { (v, w) } else { (w, v) };
                        s.push(member.contains(&e));
                    }
                }
                s
            })
            .collect();
        Ok(AdviceAssignment::variable(bits))
    }

    /// Recovers the subset as canonical edges (`id(u) < id(v)`, sorted).
    pub fn decode(&self, g: &Graph, advice: &[Bits]) -> Result<(Vec<(usize, usize)>, LocalityReport)> {
        let first = Self::orientation_bits(advice)?;
        let decoded = self.orientation.decode(g, &first, &[])?;
        let ori: &Orientation = decoded.solution.as_orientation()?;
        // The orientation phase already saw the neighbor IDs, so they are
        // part of each node's state from here on.
        let state: Vec<(Vec<bool>, Bits, Vec<u64>)> = (0..g.n())
            .map(|v| (ori.out[v].clone(), advice[v].clone(), g.neighbors(v).iter().map(|&w| g.id(w)).collect()))
            .collect();
        // Every node spells out the membership of its out-edges, keyed by
        // head ID.
        let spell = FnAlgorithm {
            radius: 0,
            f: |view: &View<(Vec<bool>, Bits, Vec<u64>)>| {
                let (out, bits, ids) = view.state(view.center())?;
                let mut k = 1;
                let mut per = Vec::new();
                for (i, &wid) in ids.iter().enumerate() {
                    if out[i] {
                        let b = bits.get(k).ok_or_else(|| Error::Decode("membership bits truncated".into()))?;
                        k += 1;
                        per.push((wid, b));
                    }
                }
                if k != bits.len() {
                    return Err(Error::Decode("extra membership bits".into()));
                }
                Ok(per)
            },
        };
        let (spelled, loc0) = run_local(g, &state, &spell)?;
        // One round: incoming edges are read from the tail.
        let alg = FnAlgorithm {
            radius: 1,
            f: |view: &View<Vec<(u64, bool)>>| {
                let v = view.center();
                let vid = view.id(v)?;
                let mut mine = Vec::new();
                for w in view.neighbors(v)? {
                    let wid = view.id(w)?;
                    let own = view.state(v)?.iter().find(|e| e.0 == wid);
                    let theirs = view.state(w)?.iter().find(|e| e.0 == vid);
                    let is_member = match (own, theirs) {
                        (Some(e), None) | (None, Some(e)) => e.1,
                        _ => return Err(Error::Decode("edge oriented inconsistently".into())),
                    };
                    if is_member {
                        mine.push(w);
                    }
                }
                mine.sort_by_key(|&w| view.id(w).unwrap_or(0));
                Ok(mine)
            },
        };
        let (per_node, loc) = run_local(g, &spelled, &alg)?;
        let loc = loc0.then(&loc);
        let mut edges = Vec::new();
        for (v, ws) in per_node.iter().enumerate() {
            for &w in ws {
                if !per_node[w].contains(&v) {
                    return Err(Error::Decode(format!("endpoints of {}-{} disagree", g.id(v), g.id(w))));
                }
                edges.push((v, w));
            }
        }
        let mut locality = decoded.locality.then(&loc);
        locality.declared_radius = self.radius(g);
        Ok((canonical_edges(g, &edges), locality))
    }
}

/// Every node stores at most ⌈deg/2⌉ + 1 bits.
pub fn check_bit_bound(g: &Graph, advice: &[Bits]) -> Result<()> {
    for v in 0..g.n() {
        let bound = g.degree(v).div_ceil(2) + 1;
        if advice[v].len() > bound {
            return Err(Error::Verification(format!(
                "node {} stores {} bits > ⌈deg/2⌉+1 = {bound}",
                g.id(v),
                advice[v].len()
            )));
        }
    }
    Ok(())
}
