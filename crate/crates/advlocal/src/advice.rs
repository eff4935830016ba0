//! Advice assignments and the schema abstraction.

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::LocalityReport;
use crate::solution::Solution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdviceKind {
    UniformFixed,
    SubsetFixed,
    Variable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdviceAssignment {
    pub bits: Vec<Bits>,
    pub kind: AdviceKind,
    /// Declared per-node bound on string length.
    pub beta: usize,
}

impl AdviceAssignment {
    pub fn variable(bits: Vec<Bits>) -> AdviceAssignment {
        let beta = bits.iter().map(Bits::len).max().unwrap_or(0);
        AdviceAssignment { bits, kind: AdviceKind::Variable, beta }
    }

    pub fn uniform(bits: Vec<Bits>, beta: usize) -> Result<AdviceAssignment> {
        let a = AdviceAssignment { bits, kind: AdviceKind::UniformFixed, beta };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Verification(format!("{:?} advice: {msg}", self.kind)));
        match self.kind {
            AdviceKind::UniformFixed => {
                if self.bits.iter().any(|b| b.len() != self.beta) {
                    return bad("string length differs from beta");
                }
            }
            AdviceKind::SubsetFixed => {
                let mut lens = self.bits.iter().map(Bits::len).filter(|&l| l > 0);
                if let Some(first) = lens.next() {
                    if lens.any(|l| l != first) || first > self.beta {
                        return bad("nonempty strings differ in length");
                    }
                }
            }
            AdviceKind::Variable => {
                if self.bits.iter().any(|b| b.len() > self.beta) {
                    return bad("string longer than beta");
                }
            }
        }
        Ok(())
    }

    /// Indices of nodes holding a nonempty string.
    pub fn holders(&self) -> Vec<usize> {
        holders(&self.bits)
    }

    pub fn max_bits(&self) -> usize {
        self.bits.iter().map(Bits::len).max().unwrap_or(0)
    }

    pub fn mean_bits(&self) -> f64 {
        if self.bits.is_empty() {
            0.0
        } else {
            self.bits.iter().map(Bits::len).sum::<usize>() as f64 / self.bits.len() as f64
        }
    }
}

pub fn holders(bits: &[Bits]) -> Vec<usize> {
    (0..bits.len()).filter(|&v| !bits[v].is_empty()).collect()
}

/// Fraction of nodes assigned bit 1 in a uniform 1-bit assignment.
pub fn measure_sparsity(advice: &AdviceAssignment) -> Result<f64> {
    if advice.kind != AdviceKind::UniformFixed || advice.beta != 1 {
        return Err(Error::InvalidParams("sparsity is defined for uniform 1-bit advice".into()));
    }
    advice.validate()?;
    if advice.bits.is_empty() {
        return Ok(0.0);
    }
    let ones = advice.bits.iter().filter(|b| b.get(0) == Some(true)).count();
    Ok(ones as f64 / advice.bits.len() as f64)
}

/// Parameters of a composable schema: per-node budget c·α/γ³ and the
/// radius α of the balls in which bit-holders are counted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComposableParams {
    pub c: f64,
    pub gamma: usize,
    pub alpha: usize,
}

impl ComposableParams {
    pub fn bit_budget(&self) -> f64 {
        self.c * self.alpha as f64 / (self.gamma as f64).powi(3)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decoded {
    pub solution: Solution,
    pub locality: LocalityReport,
}

/// An encoder paired with a LOCAL decoder. `deps` carries the solutions of
/// the problems this one depends on when the schema is a slot of a
/// composition; standalone schemas receive an empty slice.
pub trait Schema {
    fn name(&self) -> String;

    /// Bound on bit-holding nodes per α-ball (0 for schemas without advice).
    fn gamma0(&self) -> usize;

    /// Composability threshold A(c, γ): the schema is composable for α ≥ A.
    fn threshold(&self, c: f64, gamma: usize) -> f64;

    fn params(&self) -> Option<ComposableParams>;

    /// Declared decoder radius on `g`.
    fn radius(&self, g: &Graph) -> usize;

    fn encode(&self, g: &Graph, deps: &[&Solution]) -> Result<AdviceAssignment>;

    fn decode(&self, g: &Graph, advice: &[Bits], deps: &[&Solution]) -> Result<Decoded>;

    /// Validity predicate of the solved problem.
    fn check(&self, g: &Graph, solution: &Solution, deps: &[&Solution]) -> Result<()>;
}

/// Composability threshold shared by single-level schemas whose strings
/// have at most `beta` bits: A(c, γ) = max{γ³β/c, γ³β}.
pub fn basic_threshold(beta: usize, c: f64, gamma: usize) -> f64 {
    let g3 = (gamma as f64).powi(3) * beta as f64;
    (g3 / c).max(g3)
}

/// Largest number of bit-holding nodes in any radius-`alpha` ball.
pub fn max_holders_per_ball(g: &Graph, bits: &[Bits], alpha: usize) -> (usize, Option<usize>) {
    let holders = holders(bits);
    if holders.is_empty() {
        return (0, None);
    }
    let mut best = (0, None);
    // Only balls centered within α of a holder can contain one.
    let mut candidates = vec![false; g.n()];
    for &h in &holders {
        for (u, _) in g.ball(h, alpha) {
            candidates[u] = true;
        }
    }
    for v in (0..g.n()).filter(|&v| candidates[v]) {
        let count = g.ball(v, alpha).iter().filter(|(u, _)| !bits[*u].is_empty()).count();
        if count > best.0 {
            best = (count, Some(v));
        }
    }
    best
}

/// Checks the two composability properties of an encoding: at most γ0
/// holders per α-ball, and per-node bits within c·α/γ³.
pub fn check_composable(g: &Graph, bits: &[Bits], gamma0: usize, params: &ComposableParams) -> Result<()> {
    let (worst, at) = max_holders_per_ball(g, bits, params.alpha);
    if worst > gamma0 {
        return Err(Error::Verification(format!(
            "ball of radius {} around node {} holds {worst} > {gamma0} bit-holders",
            params.alpha,
            at.map(|v| g.id(v)).unwrap_or(0)
        )));
    }
    let budget = params.bit_budget();
    if let Some(v) = (0..g.n()).find(|&v| bits[v].len() as f64 > budget) {
        return Err(Error::Infeasible(format!(
            "node {} holds {} bits > c·α/γ³ = {budget:.3}",
            g.id(v),
            bits[v].len()
        )));
    }
    Ok(())
}

/// Rejects parameters below the schema's composability threshold.
pub fn require_threshold(schema: &dyn Schema, p: &ComposableParams) -> Result<()> {
    let a = schema.threshold(p.c, p.gamma);
    if (p.alpha as f64) < a {
        return Err(Error::Infeasible(format!(
            "{}: α = {} < A(c={}, γ={}) = {a:.1}",
            schema.name(),
            p.alpha,
            p.c,
            p.gamma
        )));
    }
    if p.gamma < schema.gamma0() {
        return Err(Error::Infeasible(format!("{}: γ = {} < γ0 = {}", schema.name(), p.gamma, schema.gamma0())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{generate_graph, GeneratorKind};

    fn ones(n: usize, k: usize) -> AdviceAssignment {
        let bits = (0..n).map(|i| Bits(vec![i < k])).collect();
        AdviceAssignment::uniform(bits, 1).unwrap()
    }

    #[test]
    fn sparsity_counts() {
        assert_eq!(measure_sparsity(&ones(10, 0)).unwrap(), 0.0);
        assert_eq!(measure_sparsity(&ones(10, 10)).unwrap(), 1.0);
        assert_eq!(measure_sparsity(&ones(12, 3)).unwrap(), 0.25);
        let var = AdviceAssignment::variable(vec![Bits(vec![true, false])]);
        assert!(measure_sparsity(&var).is_err());
    }

    #[test]
    fn kinds_validate() {
        let sub = AdviceAssignment { bits: vec![Bits::new(), Bits(vec![true, true])], kind: AdviceKind::SubsetFixed, beta: 2 };
        assert!(sub.validate().is_ok());
        let bad = AdviceAssignment { bits: vec![Bits(vec![true]), Bits(vec![true, true])], kind: AdviceKind::SubsetFixed, beta: 2 };
        assert!(bad.validate().is_err());
        assert!(AdviceAssignment::uniform(vec![Bits::new()], 1).is_err());
    }

    #[test]
    fn holder_scan_on_path() {
        let g = generate_graph(GeneratorKind::Path, &[10], 0).unwrap();
        // Generator indices follow the path.
        let mut bits = vec![Bits::new(); 10];
        bits[0] = Bits(vec![true]);
        bits[3] = Bits(vec![true]);
        bits[9] = Bits(vec![false]);
        assert_eq!(max_holders_per_ball(&g, &bits, 1).0, 1);
        assert_eq!(max_holders_per_ball(&g, &bits, 2).0, 2);
        assert_eq!(max_holders_per_ball(&g, &bits, 9).0, 3);
    }

    #[test]
    fn basic_threshold_values() {
        assert_eq!(basic_threshold(2, 1.0, 2), 16.0);
        assert_eq!(basic_threshold(2, 0.5, 2), 32.0);
        assert_eq!(basic_threshold(2, 4.0, 2), 16.0);
    }
}
