//! Plain-text formats for graphs, advice, edge sets and orientations.
//!
//! Graph: header `n m Δ`, then `m` lines `u v`, then optional `label u v L`
//! lines (label of edge {u,v} at endpoint u). Nodes that appear in no edge
//! are listed as `node u` so that a written graph reads back identically.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {} {}\n", g.n(), g.m(), g.max_degree());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", g.id(u), g.id(v));
    }
    for v in g.id_order() {
        if g.degree(v) == 0 {
            let _ = writeln!(out, "node {}", g.id(v));
        }
    }
    for (v, w, l) in g.labels() {
        let _ = writeln!(out, "label {} {} {}", g.id(v), g.id(w), l);
    }
    out
}

fn parse_u64(tok: Option<&str>, line: usize) -> Result<u64> {
    tok.ok_or_else(|| Error::Parse(format!("line {line}: missing field")))?
        .parse::<u64>()
        .map_err(|e| Error::Parse(format!("line {line}: {e}")))
}

pub fn read_graph(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::Parse("empty graph file".into()))?;
    let mut h = header.split_whitespace();
    let n = parse_u64(h.next(), 1)? as usize;
    let m = parse_u64(h.next(), 1)? as usize;
    let delta = parse_u64(h.next(), 1)? as usize;
    let mut ids = BTreeSet::new();
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for (i, line) in lines {
        let lineno = i + 1;
        let mut t = line.split_whitespace();
        match t.clone().next() {
            Some("node") => {
                t.next();
                ids.insert(parse_u64(t.next(), lineno)?);
            }
            Some("label") => {
                t.next();
                let u = parse_u64(t.next(), lineno)?;
                let v = parse_u64(t.next(), lineno)?;
                let l = t.next().unwrap_or("").to_string();
                labels.push((u, v, l));
            }
            _ => {
                let u = parse_u64(t.next(), lineno)?;
                let v = parse_u64(t.next(), lineno)?;
                ids.insert(u);
                ids.insert(v);
                edges.push((u, v));
            }
        }
    }
    let ids: Vec<u64> = ids.into_iter().collect();
    if ids.len() != n || edges.len() != m {
        return Err(Error::Parse(format!(
            "header says n={n} m={m}, body has n={} m={}",
            ids.len(),
            edges.len()
        )));
    }
    let mut g = Graph::from_edges(&ids, &edges).map_err(|e| Error::Parse(e.to_string()))?;
    if g.max_degree() != delta {
        return Err(Error::Parse(format!("header says Δ={delta}, graph has {}", g.max_degree())));
    }
    for (u, v, l) in labels {
        let (a, b) = (g.index_of(u)?, g.index_of(v)?);
        g.set_label(a, b, &l).map_err(|e| Error::Parse(e.to_string()))?;
    }
    Ok(g)
}

/// One line per node, ascending by ID: `id bits`.
pub fn write_advice(g: &Graph, advice: &[Bits]) -> String {
    let mut out = String::new();
    for v in g.id_order() {
        let _ = writeln!(out, "{} {}", g.id(v), advice[v]);
    }
    out
}

pub fn read_advice(g: &Graph, text: &str) -> Result<Vec<Bits>> {
    let mut advice = vec![Bits::new(); g.n()];
    let mut seen = vec![false; g.n()];
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut t = line.split_whitespace();
        let id = parse_u64(t.next(), i + 1)?;
        let bits = t.next().unwrap_or("");
        let v = g.index_of(id).map_err(|_| Error::Parse(format!("line {}: unknown node {id}", i + 1)))?;
        advice[v] = bits.parse().map_err(|e: Error| Error::Parse(format!("line {}: {e}", i + 1)))?;
        seen[v] = true;
    }
    if let Some(v) = seen.iter().position(|&s| !s) {
        return Err(Error::Parse(format!("advice missing for node {}", g.id(v))));
    }
    Ok(advice)
}

/// Edge list `u v` by ID; used for edge subsets and orientations (`u v` = u→v).
pub fn write_pairs(g: &Graph, pairs: &[(usize, usize)]) -> String {
    let mut out = String::new();
    for &(u, v) in pairs {
        let _ = writeln!(out, "{} {}", g.id(u), g.id(v));
    }
    out
}

pub fn read_pairs(g: &Graph, text: &str) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut t = line.split_whitespace();
        let u = g.index_of(parse_u64(t.next(), i + 1)?)?;
        let v = g.index_of(parse_u64(t.next(), i + 1)?)?;
        if !g.has_edge(u, v) {
            return Err(Error::Parse(format!("line {}: not an edge", i + 1)));
        }
        out.push((u, v));
    }
    Ok(out)
}
