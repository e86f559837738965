//! Rerouting a cycle through the geodesic graph.

use serde::Serialize;

use crate::chains::{boundary, is_cycle, mass, Chain};
use crate::error::{Error, Result};
use crate::geom::cone::cone_fill;
use crate::geom::cover::Cover;
use crate::geom::graph::GeodesicGraph;
use crate::geom::paths::{argmin_near, path_chain, shortest_paths, ShortestPaths};
use crate::geom::MetricComplex;

#[derive(Clone, Debug, Serialize)]
pub struct Projection {
    /// Cycle on geodesic-graph edges, coefficient per edge.
    #[serde(skip)]
    pub graph_cycle: Chain,
    /// The same cycle traced in the complex.
    #[serde(skip)]
    pub realized: Chain,
    /// Fill of `c − realized`.
    #[serde(skip)]
    pub fill: Chain,
    pub input_mass: f64,
    pub graph_mass: f64,
    pub fill_mass: f64,
    pub arcs: usize,
    pub cone_fallbacks: usize,
}

impl Projection {
    /// `mass(C′)/mass(c)` and `mass(E1)/mass(c)`.
    pub fn constants(&self) -> Option<(f64, f64)> {
        (self.input_mass > 0.0).then(|| (self.graph_mass / self.input_mass, self.fill_mass / self.input_mass))
    }
}

/// Splits a 1-cycle into closed walks of oriented edges, each started at
/// its least vertex and always taking the smallest next vertex.
pub(crate) fn closed_walks(space: &MetricComplex, c: &Chain) -> Vec<Vec<usize>> {
    let complex = space.complex();
    let n = space.n_vertices();
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, a) in c.iter() {
        let e = complex.simplex(1, i);
        let (from, to) = if a.sign() == num_bigint::Sign::Plus { (e[0], e[1]) } else { (e[1], e[0]) };
        let k = num_traits::ToPrimitive::to_usize(a.magnitude()).expect("multiplicity fits in memory");
        out_arcs[from].extend(std::iter::repeat_n(to, k));
    }
    for arcs in &mut out_arcs {
        arcs.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut walks = Vec::new();
    while let Some(start) = (0..n).find(|&v| !out_arcs[v].is_empty()) {
        let mut walk = vec![start];
        let mut cur = start;
        while let Some(next) = out_arcs[cur].pop() {
            walk.push(next);
            cur = next;
            if cur == start {
                break;
            }
        }
        walks.push(walk);
    }
    walks
}

struct Spokes {
    trees: Vec<ShortestPaths>,
}

impl Spokes {
    fn new(space: &MetricComplex, cover: &Cover) -> Self {
        let n = space.n_vertices();
        let trees = cover
            .sets
            .iter()
            .map(|s| {
                let mut mask = vec![false; n];
                for &v in &s.members {
                    mask[v] = true;
                }
                shortest_paths(space, s.center, Some(&mask))
            })
            .collect();
        Spokes { trees }
    }

    /// Set whose center is nearest to `v` inside the set.
    fn nearest(&self, cover: &Cover, v: usize) -> Option<usize> {
        argmin_near((0..cover.len()).filter(|&j| cover.sets[j].contains(v)), |j| self.trees[j].dist[v])
    }

    fn spoke(&self, space: &MetricComplex, set: usize, v: usize) -> Result<Chain> {
        let p = self.trees[set].path_to(v).ok_or_else(|| Error::structural("cover set is disconnected"))?;
        path_chain(space.complex(), &p)
    }
}

/// Reroutes the 1-cycle `c` through cover centers: `c` is cut into maximal
/// arcs lying in one cover set, each arc is replaced by the graph edge
/// between consecutive centers, and the difference is filled by cones at
/// the centers.
pub fn project_cycle_to_graph(
    space: &MetricComplex,
    cover: &Cover,
    graph: &GeodesicGraph,
    c: &Chain,
) -> Result<Projection> {
    let complex = space.complex();
    if c.dim() != 1 {
        return Err(Error::structural("projection takes 1-chains"));
    }
    c.validate(complex)?;
    if !is_cycle(complex, c)? {
        return Err(Error::domain("projection input is not a cycle"));
    }
    let input_mass = mass(space.edge_lengths(), c)?;
    let spokes = Spokes::new(space, cover);
    let mut graph_cycle = Chain::zero(1);
    let mut fill = Chain::zero(2);
    let mut arcs = 0;
    let mut cone_fallbacks = 0;
    let mut fill_loop = |z: Chain, apex: usize, fill: &mut Chain| -> Result<()> {
        if !z.is_zero() {
            let f = cone_fill(space, &z, apex)?;
            cone_fallbacks += f.fallbacks;
            *fill = &*fill + &f.chain;
        }
        Ok(())
    };
    for walk in closed_walks(space, c) {
        let steps: Vec<(usize, usize)> = walk.windows(2).map(|w| (w[0], w[1])).collect();
        let mut sigma = Vec::with_capacity(steps.len());
        for &(x, y) in &steps {
            let near_y = spokes.nearest(cover, y);
            let near_x = spokes.nearest(cover, x);
            let s = near_y
                .filter(|&j| cover.sets[j].contains(x))
                .or(near_x.filter(|&j| cover.sets[j].contains(y)))
                .or((0..cover.len()).find(|&j| cover.sets[j].contains(x) && cover.sets[j].contains(y)))
                .ok_or_else(|| Error::domain(format!("edge [{x}, {y}] lies in no cover set; cover too fine")))?;
            sigma.push(s);
        }
        let len = steps.len();
        if sigma.iter().all(|&s| s == sigma[0]) {
            arcs += 1;
            let z = path_chain(complex, &walk)?;
            fill_loop(z, cover.sets[sigma[0]].center, &mut fill)?;
            continue;
        }
        // rotate so that a new arc starts at position 0
        let shift = (0..len).find(|&t| sigma[t] != sigma[(t + len - 1) % len]).expect("two arcs at least");
        let order: Vec<usize> = (0..len).map(|t| (t + shift) % len).collect();
        let mut runs: Vec<(usize, Vec<usize>)> = Vec::new();
        for &t in &order {
            match runs.last_mut() {
                Some((s, idx)) if *s == sigma[t] => idx.push(t),
                _ => runs.push((sigma[t], vec![t])),
            }
        }
        arcs += runs.len();
        for j in 0..runs.len() {
            let (s, ref idx) = runs[j];
            let (s_next, ref idx_next) = runs[(j + 1) % runs.len()];
            let p_start = steps[idx[0]].0;
            let p_end = steps[*idx.last().expect("nonempty run")].1;
            debug_assert_eq!(p_end, steps[idx_next[0]].0);
            let mut arc_path = vec![p_start];
            arc_path.extend(idx.iter().map(|&t| steps[t].1));
            let arc = path_chain(complex, &arc_path)?;
            let a_loop = &(&spokes.spoke(space, s, p_start)? + &arc) - &spokes.spoke(space, s, p_end)?;
            fill_loop(a_loop, cover.sets[s].center, &mut fill)?;
            let gamma = graph
                .path(s, s_next)
                .ok_or_else(|| Error::structural("consecutive cover sets are not joined in the graph"))?;
            let gamma_chain = path_chain(complex, &gamma)?;
            let junction =
                &(&spokes.spoke(space, s, p_end)? - &spokes.spoke(space, s_next, p_end)?) - &gamma_chain;
            fill_loop(junction, cover.sets[s].center, &mut fill)?;
            let (e, sign) = graph.edge_between(s, s_next).expect("path exists");
            graph_cycle.add_term(e, &num_bigint::BigInt::from(sign));
        }
    }
    let realized = graph.realize(space, &graph_cycle)?;
    if boundary(complex, &fill)? != c - &realized {
        return Err(Error::structural("internal: projection homotopy does not close"));
    }
    Ok(Projection {
        graph_mass: mass(space.edge_lengths(), &realized)?,
        fill_mass: mass(space.areas(), &fill)?,
        graph_cycle,
        realized,
        fill,
        input_mass,
        arcs,
        cone_fallbacks,
    })
}
