//! Ball covers of a triangulated space and their nerves.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::chains::SimplicialComplex;
use crate::error::{Error, Result};
use crate::geom::paths::{near, shortest_paths};
use crate::geom::MetricComplex;
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    BodyBall,
    /// Ball cut to a radial slab around its center.
    NeckTrapezoid,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverSet {
    pub center: usize,
    /// Sorted vertex ids.
    pub members: Vec<usize>,
    pub kind: SetKind,
    pub region: Option<String>,
}

impl CoverSet {
    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Cover {
    pub radius: f64,
    pub sets: Vec<CoverSet>,
    pub warnings: Vec<String>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Indices of the sets containing each vertex.
    pub fn membership(&self, n_vertices: usize) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); n_vertices];
        for (i, s) in self.sets.iter().enumerate() {
            for &v in &s.members {
                m[v].push(i);
            }
        }
        m
    }

    /// Checks that the sets cover every vertex, contain their centers and
    /// are connected in the 1-skeleton.
    pub fn validate(&self, space: &MetricComplex) -> Result<()> {
        let n = space.n_vertices();
        if self.membership(n).iter().any(Vec::is_empty) {
            return Err(Error::structural("cover misses a vertex"));
        }
        for (i, s) in self.sets.iter().enumerate() {
            if s.members.iter().any(|&v| v >= n) || !s.contains(s.center) {
                return Err(Error::structural(format!("cover set {i} is malformed")));
            }
            let mut mask = vec![false; n];
            for &v in &s.members {
                mask[v] = true;
            }
            let sp = shortest_paths(space, s.center, Some(&mask));
            if s.members.iter().any(|&v| !sp.dist[v].is_finite()) {
                return Err(Error::structural(format!("cover set {i} is disconnected")));
            }
        }
        Ok(())
    }
}

/// Balls around a farthest-point net, one net per region. Each set is the
/// ball of radius `2·radius` around its center in the metric of the
/// center's region; neck sets are further cut to the slab
/// `|ρ − ρ(center)| ≤ radius` and to the component of the center. Without
/// region labels the whole space is one body.
pub fn ball_cover(space: &MetricComplex, radius: f64) -> Result<Cover> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::domain(format!("cover radius must be positive, got {radius}")));
    }
    let n = space.n_vertices();
    let mut warnings = Vec::new();
    if space.min_edge_length() > radius {
        warnings.push(format!(
            "radius {radius} is below the shortest edge {}; sets may be single vertices",
            space.min_edge_length()
        ));
    }
    let groups: Vec<(Option<String>, Vec<bool>)> = match space.regions() {
        None => vec![(None, vec![true; n])],
        Some(reg) => reg
            .distinct()
            .into_iter()
            .map(|l| (Some(l.to_string()), (0..n).map(|v| reg.label(v) == l).collect()))
            .collect(),
    };
    let slack = 1.0 + tolerance();
    let mut sets = Vec::new();
    for (label, mask) in groups {
        let neck = match (&label, space.regions()) {
            (Some(l), Some(reg)) => reg.is_neck(l),
            _ => false,
        };
        if neck && space.radial().is_none() {
            return Err(Error::structural("neck regions need radial values"));
        }
        let kind = if neck { SetKind::NeckTrapezoid } else { SetKind::BodyBall };
        let make = |c: usize, dist: &[f64]| -> CoverSet {
            let mut inside: Vec<bool> = (0..n).map(|v| mask[v] && dist[v] <= 2.0 * radius * slack).collect();
            if let (true, Some(rho)) = (neck, space.radial()) {
                for (v, ins) in inside.iter_mut().enumerate() {
                    *ins &= (rho[v] - rho[c]).abs() <= radius * slack;
                }
                let comp = shortest_paths(space, c, Some(&inside));
                for (v, ins) in inside.iter_mut().enumerate() {
                    *ins &= comp.dist[v].is_finite();
                }
            }
            CoverSet {
                center: c,
                members: (0..n).filter(|&v| inside[v]).collect(),
                kind,
                region: label.clone(),
            }
        };
        let Some(seed) = (0..n).find(|&v| mask[v]) else { continue };
        let mut nearest = vec![f64::INFINITY; n];
        let mut centers = vec![seed];
        let mut region_sets = Vec::new();
        let mut c = seed;
        loop {
            let sp = shortest_paths(space, c, Some(&mask));
            for (best, d) in nearest.iter_mut().zip(&sp.dist) {
                *best = best.min(*d);
            }
            region_sets.push(make(c, &sp.dist));
            // farthest vertex from the current net; rounding-level ties go
            // to the lowest id so the net does not depend on scale
            let top = (0..n).filter(|&v| mask[v]).map(|v| nearest[v]).fold(f64::NEG_INFINITY, f64::max);
            let far = (0..n).find(|&v| mask[v] && (nearest[v] == top || near(nearest[v], top)));
            match far {
                Some(f) if nearest[f] > radius * slack => {
                    centers.push(f);
                    c = f;
                }
                _ => break,
            }
        }
        // slab cuts can leave vertices uncovered
        loop {
            let covered: BTreeSet<usize> = region_sets.iter().flat_map(|s| s.members.iter().copied()).collect();
            let Some(u) = (0..n).find(|&v| mask[v] && !covered.contains(&v)) else { break };
            let sp = shortest_paths(space, u, Some(&mask));
            region_sets.push(make(u, &sp.dist));
        }
        sets.extend(region_sets);
    }
    let cover = Cover { radius, sets, warnings };
    cover.validate(space)?;
    Ok(cover)
}

/// Nerve of a cover truncated at dimension 2: one vertex per set, an edge
/// per intersecting pair, a triangle per intersecting triple.
pub fn nerve(cover: &Cover) -> SimplicialComplex {
    let n_vertices = cover.sets.iter().flat_map(|s| s.members.iter().copied()).max().map_or(0, |m| m + 1);
    let membership = cover.membership(n_vertices);
    let mut simplices: BTreeSet<Vec<usize>> = (0..cover.len()).map(|i| vec![i]).collect();
    for sets in &membership {
        for (a, &i) in sets.iter().enumerate() {
            for (b, &j) in sets.iter().enumerate().skip(a + 1) {
                simplices.insert(vec![i, j]);
                for &k in &sets[b + 1..] {
                    simplices.insert(vec![i, j, k]);
                }
            }
        }
    }
    SimplicialComplex::new(cover.len(), simplices).expect("nerve simplices are valid")
}
