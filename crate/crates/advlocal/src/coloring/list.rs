//! (deg+1)-list coloring by sweeping the classes of a proper base coloring:
//! in phase j the nodes of base color j pick, in parallel, the smallest list
//! color no colored neighbor holds. One phase per base color.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::local::{run_local, FnAlgorithm, LocalityReport, View};
use crate::solution::check_vertex_coloring;

#[derive(Clone, Debug)]
struct SweepState {
    color: u32,
    active: bool,
    base: u32,
    list: Vec<u32>,
}

/// Colors every `active` node from its list, leaving the others as they are
/// (0 = uncolored). `palette` bounds the base colors and is the declared
/// number of phases. Fails when a node finds its list exhausted.
pub fn class_sweep(
    g: &Graph,
    colors: &[u32],
    active: &[bool],
    base: &[u32],
    palette: u32,
    lists: &[Vec<u32>],
) -> Result<(Vec<u32>, LocalityReport)> {
    if let Some(v) = (0..g.n()).find(|&v| active[v] && (base[v] == 0 || base[v] > palette)) {
        return Err(Error::InvalidParams(format!("node {} has base color {} outside 1..={palette}", g.id(v), base[v])));
    }
    let mut state: Vec<SweepState> = (0..g.n())
        .map(|v| SweepState { color: colors[v], active: active[v], base: base[v], list: lists[v].clone() })
        .collect();
    let mut classes: Vec<u32> = (0..g.n()).filter(|&v| active[v]).map(|v| base[v]).collect();
    classes.sort_unstable();
    classes.dedup();
    let mut locality = LocalityReport { nodes: g.n(), ..Default::default() };
    // Classes without members are no-ops; they still count as phases.
    for j in classes {
        let alg = FnAlgorithm {
            radius: 1,
            f: |view: &View<SweepState>| {
                let v = view.center();
                let me = view.state(v)?;
                if !me.active || me.base != j {
                    return Ok(me.color);
                }
                let mut taken = Vec::new();
                for &w in view.all_neighbors(v)? {
                    let s = view.state(w)?;
                    if s.active && s.base == j {
                        return Err(Error::Precondition("base coloring is improper".into()));
                    }
                    if s.color != 0 {
                        taken.push(s.color);
                    }
                }
                me.list
                    .iter()
                    .copied()
                    .filter(|c| !taken.contains(c))
                    .min()
                    .ok_or_else(|| Error::Verification(format!("list of {} colors exhausted", me.list.len())))
            },
        };
        let (next, rep) = run_local(g, &state, &alg)?;
        for (s, c) in state.iter_mut().zip(next) {
            s.color = c;
        }
        locality.max_ball = locality.max_ball.max(rep.max_ball);
        locality.measured_radius += rep.measured_radius;
        locality.wall_ms += rep.wall_ms;
    }
    locality.declared_radius = palette as usize;
    Ok((state.into_iter().map(|s| s.color).collect(), locality))
}

/// Colors every node from its own list; lists need at least deg+1 colors
/// and `base` must be a proper coloring with colors in 1..=palette.
pub fn list_coloring(g: &Graph, base: &[u32], palette: u32, lists: &[Vec<u32>]) -> Result<(Vec<u32>, LocalityReport)> {
    check_vertex_coloring(g, base, palette, false).map_err(|e| Error::Precondition(e.to_string()))?;
    for v in 0..g.n() {
        let mut l = lists[v].clone();
        l.sort_unstable();
        l.dedup();
        if l.len() < g.degree(v) + 1 || l.contains(&0) {
            return Err(Error::InvalidParams(format!(
                "list of node {} has {} colors < deg+1 = {}",
                g.id(v),
                l.len(),
                g.degree(v) + 1
            )));
        }
    }
    let (out, rep) = class_sweep(g, &vec![0; g.n()], &vec![true; g.n()], base, palette, lists)?;
    check_vertex_coloring(g, &out, u32::MAX, false)?;
    Ok((out, rep))
}
