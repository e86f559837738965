//! Triangulated spaces with Euclidean vertex positions.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::chains::SimplicialComplex;
use crate::error::{Error, Result};
use crate::filling::FillSolver;

/// Vertex labels splitting a space into bodies and necks. Labels that are
/// keys of `necks` are necks; each names the two bodies it joins. Every
/// other label is a body.
#[derive(Clone, Debug, Serialize)]
pub struct Regions {
    pub labels: Vec<String>,
    pub necks: BTreeMap<String, [String; 2]>,
}

impl Regions {
    pub fn new(labels: Vec<String>, necks: BTreeMap<String, [String; 2]>) -> Result<Self> {
        for (neck, [a, b]) in &necks {
            if a == b {
                return Err(Error::structural(format!("neck {neck} must join two distinct bodies")));
            }
            if necks.contains_key(a) || necks.contains_key(b) {
                return Err(Error::structural(format!("neck {neck} is declared adjacent to another neck")));
            }
        }
        Ok(Regions { labels, necks })
    }

    pub fn is_neck(&self, label: &str) -> bool {
        self.necks.contains_key(label)
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    /// Whether two region labels may share an edge.
    pub fn adjacent(&self, a: &str, b: &str) -> bool {
        a == b
            || self.necks.get(a).is_some_and(|bs| bs.iter().any(|x| x == b))
            || self.necks.get(b).is_some_and(|bs| bs.iter().any(|x| x == a))
    }

    /// Distinct labels in sorted order.
    pub fn distinct(&self) -> Vec<&str> {
        let mut v: Vec<&str> = self.labels.iter().map(String::as_str).collect();
        v.sort_unstable();
        v.dedup();
        v
    }
}

/// A simplicial complex of dimension at most 2 realized in `R^d`, with
/// edge lengths and Heron areas as its 1- and 2-volumes.
#[derive(Debug)]
pub struct MetricComplex {
    complex: SimplicialComplex,
    coords: Vec<Vec<f64>>,
    lengths: Vec<f64>,
    areas: Vec<f64>,
    radial: Option<Vec<f64>>,
    regions: Option<Regions>,
    // neighbor, edge index; sorted by neighbor
    adj: Vec<Vec<(usize, usize)>>,
    solver: OnceLock<Option<FillSolver>>,
}

impl Clone for MetricComplex {
    fn clone(&self) -> Self {
        MetricComplex {
            complex: self.complex.clone(),
            coords: self.coords.clone(),
            lengths: self.lengths.clone(),
            areas: self.areas.clone(),
            radial: self.radial.clone(),
            regions: self.regions.clone(),
            adj: self.adj.clone(),
            solver: OnceLock::new(),
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Triangle area from side lengths, in the cancellation-safe ordering.
pub fn heron(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    0.25 * p.max(0.0).sqrt()
}

impl MetricComplex {
    pub fn new(
        complex: SimplicialComplex,
        coords: Vec<Vec<f64>>,
        radial: Option<Vec<f64>>,
        regions: Option<Regions>,
    ) -> Result<Self> {
        let n = complex.n_vertices();
        if complex.dimension() > 2 {
            return Err(Error::structural("metric complexes are at most 2-dimensional"));
        }
        if coords.len() != n {
            return Err(Error::structural(format!("{n} vertices but {} coordinates", coords.len())));
        }
        let d = coords.first().map_or(0, Vec::len);
        if d == 0 || coords.iter().any(|p| p.len() != d) {
            return Err(Error::structural("coordinates must share one positive ambient dimension"));
        }
        if coords.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::structural("coordinates must be finite"));
        }
        if let Some(r) = &radial {
            if r.len() != n || r.iter().any(|x| !x.is_finite() || *x < 0.0) {
                return Err(Error::structural("radial values must be finite, nonnegative, one per vertex"));
            }
        }
        if let Some(reg) = &regions {
            if reg.labels.len() != n {
                return Err(Error::structural("region labels must cover every vertex"));
            }
        }
        let edges: &[Vec<usize>] = if complex.dimension() >= 1 { complex.simplices(1) } else { &[] };
        let lengths: Vec<f64> = edges.iter().map(|e| dist(&coords[e[0]], &coords[e[1]])).collect();
        if let Some(i) = lengths.iter().position(|&l| !(l > 0.0)) {
            return Err(Error::structural(format!("edge {:?} has zero length", edges[i])));
        }
        let diam2 = bbox_diagonal(&coords).powi(2);
        let areas: Vec<f64> = if complex.dimension() >= 2 {
            complex
                .simplices(2)
                .iter()
                .map(|t| {
                    heron(
                        dist(&coords[t[0]], &coords[t[1]]),
                        dist(&coords[t[1]], &coords[t[2]]),
                        dist(&coords[t[0]], &coords[t[2]]),
                    )
                })
                .collect()
        } else {
            Vec::new()
        };
        if let Some(i) = areas.iter().position(|&a| !(a > 1e-12 * diam2)) {
            return Err(Error::structural(format!("triangle {:?} is degenerate", complex.simplex(2, i))));
        }
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adj[e[0]].push((e[1], i));
            adj[e[1]].push((e[0], i));
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(MetricComplex { complex, coords, lengths, areas, radial, regions, adj, solver: OnceLock::new() })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn n_vertices(&self) -> usize {
        self.complex.n_vertices()
    }

    pub fn coords(&self) -> &[Vec<f64>] {
        &self.coords
    }

    pub fn ambient_dim(&self) -> usize {
        self.coords[0].len()
    }

    pub fn edge_lengths(&self) -> &[f64] {
        &self.lengths
    }

    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn radial(&self) -> Option<&[f64]> {
        self.radial.as_deref()
    }

    pub fn regions(&self) -> Option<&Regions> {
        self.regions.as_ref()
    }

    /// Neighbors with connecting edge index, by increasing neighbor id.
    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        dist(&self.coords[u], &self.coords[v])
    }

    pub fn min_edge_length(&self) -> f64 {
        self.lengths.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Diagonal of the bounding box of the vertices.
    pub fn extent(&self) -> f64 {
        bbox_diagonal(&self.coords)
    }

    /// Largest shortest-path distance in the 1-skeleton; infinite when
    /// disconnected.
    pub fn graph_diameter(&self) -> f64 {
        (0..self.n_vertices())
            .map(|s| super::paths::shortest_paths(self, s, None).dist.into_iter().fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }

    pub fn is_connected(&self) -> bool {
        self.n_vertices() == 0
            || super::paths::shortest_paths(self, 0, None).dist.iter().all(|d| d.is_finite())
    }

    /// Cached solver for `∂E = z` with `E` a 2-chain.
    pub fn fill_solver(&self) -> Result<&FillSolver> {
        self.solver
            .get_or_init(|| FillSolver::new(&self.complex, 1).ok())
            .as_ref()
            .ok_or_else(|| Error::domain("space has no 2-simplices to fill with"))
    }

    /// Same complex with every coordinate and radial value multiplied by `t`.
    pub fn scaled(&self, t: f64) -> Result<Self> {
        let coords = self.coords.iter().map(|p| p.iter().map(|x| x * t).collect()).collect();
        let radial = self.radial.as_ref().map(|r| r.iter().map(|x| x * t).collect());
        MetricComplex::new(self.complex.clone(), coords, radial, self.regions.clone())
    }
}

fn bbox_diagonal(coords: &[Vec<f64>]) -> f64 {
    let d = coords.first().map_or(0, Vec::len);
    (0..d)
        .map(|k| {
            let (lo, hi) = coords.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p[k]), hi.max(p[k]))
            });
            (hi - lo).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heron_values() {
        assert!((heron(3.0, 4.0, 5.0) - 6.0).abs() < 1e-12);
        let s = 2f64.sqrt();
        assert!((heron(s, s, s) - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert_eq!(heron(1.0, 2.0, 3.0), 0.0);
    }

    #[test]
    fn rejects_bad_geometry() {
        let k = SimplicialComplex::new(3, [[0, 1, 2]]).unwrap();
        let flat = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]];
        assert!(MetricComplex::new(k.clone(), flat, None, None).is_err());
        let dup = vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![2.0, 1.0]];
        assert!(MetricComplex::new(k.clone(), dup, None, None).is_err());
        let ok = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let m = MetricComplex::new(k, ok, None, None).unwrap();
        assert!((m.areas()[0] - 0.5).abs() < 1e-15);
        assert!(m.is_connected());
        assert!((m.graph_diameter() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn region_adjacency() {
        let necks = BTreeMap::from([("n".to_string(), ["a".to_string(), "b".to_string()])]);
        let r = Regions::new(vec!["a".into(), "n".into(), "b".into()], necks).unwrap();
        assert!(r.adjacent("a", "n") && r.adjacent("n", "b") && r.adjacent("a", "a"));
        assert!(!r.adjacent("a", "b"));
        assert!(r.is_neck("n") && !r.is_neck("a"));
        assert_eq!(r.distinct(), vec!["a", "b", "n"]);
    }
}
