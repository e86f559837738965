//! Geodesic graph on cover centers.

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::chains::Chain;
use crate::error::{Error, Result};
use crate::geom::cover::Cover;
use crate::geom::paths::{path_chain, shortest_paths};
use crate::geom::MetricComplex;

#[derive(Clone, Debug, Serialize)]
pub struct GraphEdge {
    /// Cover-set indices, `a < b`.
    pub a: usize,
    pub b: usize,
    /// Vertex path from the center of `a` to the center of `b`.
    pub path: Vec<usize>,
    pub length: f64,
    /// The path left the union of the two sets.
    pub global: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicGraph {
    /// Center vertex of each cover set.
    pub nodes: Vec<usize>,
    pub edges: Vec<GraphEdge>,
    #[serde(skip)]
    index: BTreeMap<(usize, usize), usize>,
}

impl GeodesicGraph {
    pub fn edge_between(&self, a: usize, b: usize) -> Option<(usize, i32)> {
        if a < b {
            self.index.get(&(a, b)).map(|&i| (i, 1))
        } else {
            self.index.get(&(b, a)).map(|&i| (i, -1))
        }
    }

    /// Vertex path from center `a` to center `b`.
    pub fn path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if a == b {
            return Some(vec![self.nodes[a]]);
        }
        let (i, s) = self.edge_between(a, b)?;
        let mut p = self.edges[i].path.clone();
        if s < 0 {
            p.reverse();
        }
        Some(p)
    }

    /// Complex 1-chain traced by a chain on graph edges.
    pub fn realize(&self, space: &MetricComplex, c: &Chain) -> Result<Chain> {
        let mut out = Chain::zero(1);
        for (i, a) in c.iter() {
            let e = self.edges.get(i).ok_or_else(|| Error::structural("graph edge index out of range"))?;
            out.add_scaled(&path_chain(space.complex(), &e.path)?, a);
        }
        Ok(out)
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.length).collect()
    }

    pub fn len_of(&self, c: &Chain) -> f64 {
        c.iter().map(|(i, a)| self.edges[i].length * a.to_f64().map_or(f64::INFINITY, f64::abs)).sum()
    }
}

/// Connects the centers of every intersecting pair of cover sets by a
/// shortest path, inside the union of the two sets when possible.
pub fn geodesic_graph(space: &MetricComplex, cover: &Cover) -> Result<GeodesicGraph> {
    if !space.is_connected() {
        return Err(Error::structural("the 1-skeleton is disconnected"));
    }
    let n = space.n_vertices();
    let nodes: Vec<usize> = cover.sets.iter().map(|s| s.center).collect();
    let mut edges = Vec::new();
    let mut index = BTreeMap::new();
    for a in 0..cover.len() {
        let global = shortest_paths(space, nodes[a], None);
        for b in a + 1..cover.len() {
            let (sa, sb) = (&cover.sets[a], &cover.sets[b]);
            if !sa.members.iter().any(|&v| sb.contains(v)) {
                continue;
            }
            let mut mask = vec![false; n];
            for &v in sa.members.iter().chain(&sb.members) {
                mask[v] = true;
            }
            let local = shortest_paths(space, nodes[a], Some(&mask));
            let (sp, is_global) = match local.path_to(nodes[b]) {
                Some(_) => (&local, false),
                None => (&global, true),
            };
            let path = sp.path_to(nodes[b]).expect("skeleton is connected");
            index.insert((a, b), edges.len());
            edges.push(GraphEdge { a, b, length: sp.dist[nodes[b]], path, global: is_global });
        }
    }
    Ok(GeodesicGraph { nodes, edges, index })
}
