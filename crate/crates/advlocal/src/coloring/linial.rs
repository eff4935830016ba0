//! Color reduction by polynomials over a prime field. A color c < q^(d+1)
//! is read as a polynomial of degree ≤ d over GF(q); a node picks the first
//! point t where its polynomial differs from all neighbors' and takes the
//! new color (t, p(t)). With q > dΔ such a point always exists.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, FnAlgorithm, LocalityReport, View};
use crate::solution::check_vertex_coloring;

pub fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= x {
        if x % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// Smallest prime ≥ x.
pub fn prime_at_least(x: u64) -> u64 {
    let mut p = x.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Field size of the final round: the smallest prime above 2Δ.
pub fn final_field(delta: usize) -> u64 {
    prime_at_least(2 * delta as u64 + 1)
}

/// Palette every reduction ends in: q² with q the final field size, which
/// is below 16Δ² for Δ ≥ 1.
pub fn linial_target(delta: usize) -> u32 {
    let q = final_field(delta);
    (q * q) as u32
}

/// Field size and degree of a round reducing palette `k`: q prime,
/// q > dΔ and q^(d+1) ≥ k, with q as small as possible.
pub fn round_params(k: u64, delta: usize) -> (u64, u32) {
    let mut best: Option<(u64, u32)> = None;
    for d in 1..=62u32 {
        // Smallest t with t^(d+1) >= k.
        let mut t = (k as f64).powf(1.0 / (d + 1) as f64).floor().max(1.0) as u64;
        while t.checked_pow(d + 1).is_some_and(|p| p < k) {
            t += 1;
        }
        while t > 1 && (t - 1).checked_pow(d + 1).is_none_or(|p| p >= k) {
            t -= 1;
        }
        let q = prime_at_least(t.max(d as u64 * delta as u64 + 1));
        if best.is_none_or(|(bq, _)| q < bq) {
            best = Some((q, d));
        }
    }
    best.expect("at least one degree tried")
}

fn eval_poly(color: u32, q: u64, d: u32, t: u64) -> u64 {
    // Coefficients are the base-q digits of color - 1, lowest first.
    let mut c = (color - 1) as u64;
    let mut acc = 0u64;
    let mut pow = 1u64;
    for _ in 0..=d {
        acc = (acc + (c % q) * pow) % q;
        c /= q;
        pow = pow * t % q;
    }
    acc
}

/// New color of a node with color `own` whose neighbors have `others`.
pub fn reduce_one(own: u32, others: &[u32], q: u64, d: u32) -> Result<u32> {
    if others.contains(&own) {
        return Err(Error::Precondition(format!("input coloring is improper at color {own}")));
    }
    for t in 0..q {
        let mine = eval_poly(own, q, d, t);
        if others.iter().all(|&o| eval_poly(o, q, d, t) != mine) {
            return Ok((t * q + mine + 1) as u32);
        }
    }
    Err(Error::Verification(format!("no separating point in GF({q}) at degree {d}")))
}

/// One reduction round per entry: (q, d, coloring after the round).
#[derive(Clone, Debug, PartialEq)]
pub struct LinialTrace {
    pub rounds: Vec<(u64, u32, Vec<u32>)>,
    pub locality: LocalityReport,
}

/// Iterates rounds until the palette is at most [`linial_target`]; every
/// intermediate coloring is checked proper. A coloring already within the
/// target is returned unchanged with no rounds.
pub fn linial_trace(g: &Graph, colors: &[u32]) -> Result<LinialTrace> {
    let delta = g.max_degree();
    let mut k = colors.iter().copied().max().unwrap_or(0) as u64;
    check_vertex_coloring(g, colors, k.max(1) as u32, false).map_err(|e| Error::Precondition(e.to_string()))?;
    let target = linial_target(delta) as u64;
    let mut cur = colors.to_vec();
    let mut rounds = Vec::new();
    let mut locality = LocalityReport { nodes: g.n(), ..Default::default() };
    while k > target {
        let (q, d) = round_params(k, delta);
        if q * q >= k {
            return Err(Error::Verification(format!("round at palette {k} would not shrink it")));
        }
        let alg = FnAlgorithm {
            radius: 1,
            f: |view: &View<u32>| {
                let v = view.center();
                let others: Vec<u32> =
                    view.all_neighbors(v)?.iter().map(|&w| view.state(w).copied()).collect::<Result<_>>()?;
                reduce_one(*view.state(v)?, &others, q, d)
            },
        };
        let (next, rep) = run_local(g, &cur, &alg)?;
        check_vertex_coloring(g, &next, (q * q) as u32, false)?;
        locality = locality.then(&rep);
        k = next.iter().copied().max().unwrap_or(0) as u64;
        cur = next.clone();
        rounds.push((q, d, next));
    }
    Ok(LinialTrace { rounds, locality })
}

/// Reduces a proper coloring to at most [`linial_target`] colors.
pub fn linial_reduce(g: &Graph, colors: &[u32]) -> Result<(Vec<u32>, LocalityReport)> {
    let trace = linial_trace(g, colors)?;
    let out = trace.rounds.last().map(|r| r.2.clone()).unwrap_or_else(|| colors.to_vec());
    Ok((out, trace.locality))
}

/// Number of rounds from palette `k` at maximum degree `delta`; a bound
/// that depends on k and Δ only.
pub fn rounds_needed(mut k: u64, delta: usize) -> usize {
    let target = linial_target(delta) as u64;
    let mut r = 0;
    while k > target {
        let (q, _) = round_params(k, delta);
        if q * q >= k {
            break;
        }
        k = q * q;
        r += 1;
    }
    r
}
