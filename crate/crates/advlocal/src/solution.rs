//! Solution types shared by schemas and their validity predicates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Orientation stored per adjacency slot: `out[v][i]` is true when the edge
/// to `g.neighbors(v)[i]` leaves `v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub out: Vec<Vec<bool>>,
}

impl Orientation {
    pub fn from_arcs(g: &Graph, arcs: &[(usize, usize)]) -> Result<Orientation> {
        let mut out: Vec<Vec<Option<bool>>> = (0..g.n()).map(|v| vec![None; g.degree(v)]).collect();
        for &(u, v) in arcs {
            let (pu, pv) = match (g.adj_pos(u, v), g.adj_pos(v, u)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::InvalidParams("arc is not an edge".into())),
            };
            if out[u][pu].is_some() {
                return Err(Error::InvalidParams("edge oriented twice".into()));
            }
            out[u][pu] = Some(true);
            out[v][pv] = Some(false);
        }
        let out = out
            .into_iter()
            .map(|row| row.into_iter().map(|x| x.ok_or_else(|| Error::InvalidParams("edge left unoriented".into()))).collect())
            .collect::<Result<Vec<Vec<bool>>>>()?;
        Ok(Orientation { out })
    }

    /// Arcs `(tail, head)` in edge order.
    pub fn arcs(&self, g: &Graph) -> Vec<(usize, usize)> {
        g.edges()
            .into_iter()
            .map(|(u, v)| if self.out[u][g.adj_pos(u, v).expect("edge")] { (u, v) } else { (v, u) })
            .collect()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out[v].iter().filter(|&&b| b).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.out[v].len() - self.out_degree(v)
    }

    /// Both endpoints agree on every edge.
    pub fn check_consistent(&self, g: &Graph) -> Result<()> {
        if self.out.len() != g.n() {
            return Err(Error::Verification("orientation size mismatch".into()));
        }
        for (u, v) in g.edges() {
            let a = self.out[u][g.adj_pos(u, v).expect("edge")];
            let b = self.out[v][g.adj_pos(v, u).expect("edge")];
            if a == b {
                return Err(Error::Verification(format!("edge {}-{} oriented inconsistently", g.id(u), g.id(v))));
            }
        }
        Ok(())
    }

    /// |in − out| ≤ 1 everywhere, 0 at even-degree nodes.
    pub fn check_balanced(&self, g: &Graph) -> Result<()> {
        self.check_consistent(g)?;
        for v in 0..g.n() {
            let diff = self.in_degree(v).abs_diff(self.out_degree(v));
            if diff > 1 || (g.degree(v) % 2 == 0 && diff != 0) {
                return Err(Error::Verification(format!(
                    "node {} has in={} out={}",
                    g.id(v),
                    self.in_degree(v),
                    self.out_degree(v)
                )));
            }
        }
        Ok(())
    }
}

/// Edge colors per adjacency slot; 0 means "not colored".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeColoring {
    pub colors: Vec<Vec<u32>>,
}

impl EdgeColoring {
    pub fn color(&self, g: &Graph, u: usize, v: usize) -> u32 {
        self.colors[u][g.adj_pos(u, v).expect("edge")]
    }

    pub fn check_consistent(&self, g: &Graph) -> Result<()> {
        for (u, v) in g.edges() {
            if self.color(g, u, v) != self.color(g, v, u) {
                return Err(Error::Verification(format!("edge {}-{} colored inconsistently", g.id(u), g.id(v))));
            }
        }
        Ok(())
    }

    /// Every node sees equally many edges of color 1 and color 2.
    pub fn check_splitting(&self, g: &Graph) -> Result<()> {
        self.check_consistent(g)?;
        for v in 0..g.n() {
            let red = self.colors[v].iter().filter(|&&c| c == 1).count();
            let blue = self.colors[v].iter().filter(|&&c| c == 2).count();
            if red != blue || red + blue != g.degree(v) {
                return Err(Error::Verification(format!("node {} has {red} red and {blue} blue edges", g.id(v))));
            }
        }
        Ok(())
    }

    /// Proper with colors in 1..=k; with `perfect`, each class is a perfect matching.
    pub fn check_proper(&self, g: &Graph, k: u32, perfect: bool) -> Result<()> {
        self.check_consistent(g)?;
        for v in 0..g.n() {
            let mut seen = vec![false; k as usize + 1];
            for &c in &self.colors[v] {
                if c == 0 || c > k {
                    return Err(Error::Verification(format!("node {} has edge color {c} outside 1..={k}", g.id(v))));
                }
                if std::mem::replace(&mut seen[c as usize], true) {
                    return Err(Error::Verification(format!("node {} has two edges of color {c}", g.id(v))));
                }
            }
            if perfect && seen.iter().skip(1).any(|&s| !s) {
                return Err(Error::Verification(format!("node {} misses a color class", g.id(v))));
            }
        }
        Ok(())
    }
}

/// Per-node output slots for LCL problems: one slot for node labelings,
/// `deg(v)` slots (adjacency order) for half-edge labelings. Values index
/// the output alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Labeling {
    pub slots: Vec<Vec<u8>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Solution {
    Orientation(Orientation),
    /// Colors from 1; 0 means uncolored (partial colorings).
    VertexColoring(Vec<u32>),
    EdgeColoring(EdgeColoring),
    Labeling(Labeling),
    /// Edges as index pairs with `id(u) < id(v)`, sorted.
    EdgeSubset(Vec<(usize, usize)>),
}

impl Solution {
    pub fn as_orientation(&self) -> Result<&Orientation> {
        match self {
            Solution::Orientation(o) => Ok(o),
            _ => Err(Error::InvalidParams("expected an orientation".into())),
        }
    }

    pub fn as_vertex_coloring(&self) -> Result<&[u32]> {
        match self {
            Solution::VertexColoring(c) => Ok(c),
            _ => Err(Error::InvalidParams("expected a vertex coloring".into())),
        }
    }

    pub fn as_edge_coloring(&self) -> Result<&EdgeColoring> {
        match self {
            Solution::EdgeColoring(c) => Ok(c),
            _ => Err(Error::InvalidParams("expected an edge coloring".into())),
        }
    }

    pub fn as_labeling(&self) -> Result<&Labeling> {
        match self {
            Solution::Labeling(l) => Ok(l),
            _ => Err(Error::InvalidParams("expected a labeling".into())),
        }
    }
}

/// Proper on the colored part; colors within 1..=k. Uncolored (0) allowed
/// only when `allow_uncolored`.
pub fn check_vertex_coloring(g: &Graph, colors: &[u32], k: u32, allow_uncolored: bool) -> Result<()> {
    for v in 0..g.n() {
        let c = colors[v];
        if (c == 0 && !allow_uncolored) || c > k {
            return Err(Error::Verification(format!("node {} has color {c} outside 1..={k}", g.id(v))));
        }
    }
    for (u, v) in g.edges() {
        if colors[u] != 0 && colors[u] == colors[v] {
            return Err(Error::Verification(format!("edge {}-{} is monochromatic", g.id(u), g.id(v))));
        }
    }
    Ok(())
}

/// Edges in canonical form (`id(u) < id(v)`), sorted and deduplicated.
pub fn canonical_edges(g: &Graph, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> =
        edges.iter().map(|&(u, v)| if g.id(u) < g.id(v) { (u, v) } else { (v, u) }).collect();
    out.sort_by_key(|&(u, v)| (g.id(u), g.id(v)));
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_roundtrip_and_balance() {
        let g = Graph::from_edges(&[1, 2, 3], &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let arcs = vec![(0, 1), (1, 2), (2, 0)];
        let o = Orientation::from_arcs(&g, &arcs).unwrap();
        o.check_balanced(&g).unwrap();
        assert_eq!(canonical_edges(&g, &o.arcs(&g)).len(), 3);
        let bad = Orientation::from_arcs(&g, &[(0, 1), (2, 1), (2, 0)]).unwrap();
        assert!(bad.check_balanced(&g).is_err());
        assert!(Orientation::from_arcs(&g, &[(0, 1)]).is_err());
    }

    #[test]
    fn vertex_coloring_checks() {
        let g = Graph::from_edges(&[1, 2], &[(1, 2)]).unwrap();
        assert!(check_vertex_coloring(&g, &[1, 2], 2, false).is_ok());
        assert!(check_vertex_coloring(&g, &[1, 1], 2, false).is_err());
        assert!(check_vertex_coloring(&g, &[0, 1], 2, true).is_ok());
        assert!(check_vertex_coloring(&g, &[0, 1], 2, false).is_err());
    }
}
