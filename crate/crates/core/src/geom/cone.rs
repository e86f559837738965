//! Discrete cones over loops.

use std::collections::HashMap;

use serde::Serialize;

use crate::chains::{is_cycle, mass, Chain};
use crate::error::{Error, Result};
use crate::filling::min_mass_fill_with;
use crate::geom::paths::{near, path_chain, shortest_paths, ShortestPaths};
use crate::geom::MetricComplex;

#[derive(Clone, Debug, Serialize)]
pub struct ConeFill {
    #[serde(skip)]
    pub chain: Chain,
    pub mass: f64,
    pub loop_mass: f64,
    /// Largest distance from a loop vertex to the apex.
    pub radius: f64,
    /// Edge triangles that needed a global least-mass fill.
    pub fallbacks: usize,
}

impl ConeFill {
    /// `mass / (radius · loop_mass)`, the measured cone constant.
    pub fn ratio(&self) -> Option<f64> {
        let d = self.radius * self.loop_mass;
        (d > 0.0).then(|| self.mass / d)
    }
}

/// Any fill of `z`, least-mass when the search finishes.
pub(crate) fn fallback_fill(space: &MetricComplex, z: &Chain) -> Result<Chain> {
    let solver = space.fill_solver()?;
    match min_mass_fill_with(solver, space.areas(), z) {
        Ok(f) => Ok(f.chain),
        Err(Error::NonOptimal { incumbent, .. }) => Ok(incumbent),
        Err(e) => Err(e),
    }
}

struct Cone<'a> {
    space: &'a MetricComplex,
    tree: ShortestPaths,
    fallbacks: usize,
}

impl Cone<'_> {
    fn face(&self, x: usize, y: usize, w: usize) -> Option<Chain> {
        let c = self.space.complex();
        c.index_of(&{
            let mut t = vec![x, y, w];
            t.sort_unstable();
            t
        })?;
        Chain::from_simplices(c, 2, [(vec![x, y, w], 1i64)]).ok()
    }

    /// 2-chain bounding `P(x) + [x,y] − P(y)`, where `P` is the tree path
    /// from the apex.
    fn edge_fill(&mut self, mut x: usize, mut y: usize) -> Result<Chain> {
        let pred = &self.tree.pred;
        let mut out = Chain::zero(2);
        loop {
            if x == y || pred[y] == Some(x) || pred[x] == Some(y) {
                return Ok(out);
            }
            let (dx, dy) = (self.tree.dist[x], self.tree.dist[y]);
            let from_x = pred[x].and_then(|w| self.face(x, y, w).map(|f| (w, f)));
            let from_y = pred[y].and_then(|w| self.face(x, y, w).map(|f| (w, f)));
            let step = if dx >= dy || near(dx, dy) { from_x.map(|s| (true, s)).or(from_y.map(|s| (false, s))) } else {
                from_y.map(|s| (false, s)).or(from_x.map(|s| (true, s)))
            };
            match step {
                Some((true, (w, f))) => {
                    out = &out + &f;
                    x = w;
                }
                Some((false, (w, f))) => {
                    out = &out + &f;
                    y = w;
                }
                None => {
                    let c = self.space.complex();
                    let px = self.tree.path_to(x).expect("reachable");
                    let py = self.tree.path_to(y).expect("reachable");
                    let z = &(&path_chain(c, &px)? + &path_chain(c, &[x, y])?) - &path_chain(c, &py)?;
                    self.fallbacks += 1;
                    return Ok(&out + &fallback_fill(self.space, &z)?);
                }
            }
        }
    }
}

/// Fill of the 1-cycle `loop_` by coning each edge to `apex` along the
/// shortest-path tree, one face at a time through a tree parent. Edge
/// triangles with no such face are filled by least mass instead.
pub fn cone_fill(space: &MetricComplex, loop_: &Chain, apex: usize) -> Result<ConeFill> {
    let complex = space.complex();
    if loop_.dim() != 1 {
        return Err(Error::structural("cone fills take 1-chains"));
    }
    loop_.validate(complex)?;
    if apex >= space.n_vertices() {
        return Err(Error::structural(format!("apex {apex} out of range")));
    }
    if !is_cycle(complex, loop_)? {
        return Err(Error::domain("cone fill input is not a cycle"));
    }
    let loop_mass = mass(space.edge_lengths(), loop_)?;
    if loop_.is_zero() {
        return Ok(ConeFill { chain: Chain::zero(2), mass: 0.0, loop_mass, radius: 0.0, fallbacks: 0 });
    }
    let mut cone = Cone { space, tree: shortest_paths(space, apex, None), fallbacks: 0 };
    let mut radius = 0.0f64;
    let mut memo: HashMap<usize, Chain> = HashMap::new();
    let mut out = Chain::zero(2);
    for (i, a) in loop_.iter() {
        let (u, v) = (complex.simplex(1, i)[0], complex.simplex(1, i)[1]);
        for w in [u, v] {
            let d = cone.tree.dist[w];
            if !d.is_finite() {
                return Err(Error::domain(format!("vertex {w} cannot reach apex {apex}")));
            }
            radius = radius.max(d);
        }
        if let std::collections::hash_map::Entry::Vacant(slot) = memo.entry(i) {
            slot.insert(cone.edge_fill(u, v)?);
        }
        out.add_scaled(&memo[&i], a);
    }
    let m = mass(space.areas(), &out)?;
    Ok(ConeFill { chain: out, mass: m, loop_mass, radius, fallbacks: cone.fallbacks })
}
