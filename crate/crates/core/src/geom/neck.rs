//! Sweeping cycles down a neck along its radial coordinate.

use std::collections::HashMap;

use serde::Serialize;

use crate::chains::{boundary, mass, Chain};
use crate::error::{Error, Result};
use crate::geom::cone::fallback_fill;
use crate::geom::paths::argmin_near;
use crate::geom::MetricComplex;
use crate::tolerance;

#[derive(Clone, Debug, Serialize)]
pub struct NeckSweep {
    /// Image of the input at the target level.
    #[serde(skip)]
    pub pushed: Chain,
    /// 2-chain with `∂sweep = c − pushed`.
    #[serde(skip)]
    pub sweep: Chain,
    pub mass: f64,
    pub input_mass: f64,
    /// Highest radial value on the input minus the target level.
    pub radial_span: f64,
    pub rounds: usize,
    pub fallbacks: usize,
}

struct Sweeper<'a> {
    space: &'a MetricComplex,
    rho: &'a [f64],
    level: f64,
    fallbacks: usize,
    memo: HashMap<usize, (Option<(usize, usize)>, Chain)>,
}

impl Sweeper<'_> {
    fn settled(&self, v: usize) -> bool {
        self.rho[v] <= self.level + tolerance() * self.level.abs().max(1.0)
    }

    /// Nearest neighbor strictly lower in radial value, lowest id on ties.
    fn successor(&self, v: usize) -> Result<usize> {
        if self.settled(v) {
            return Ok(v);
        }
        let lower = self.space.neighbors(v).iter().map(|&(w, _)| w).filter(|&w| self.rho[w] < self.rho[v]);
        argmin_near(lower, |w| self.space.distance(v, w))
            .ok_or_else(|| Error::structural(format!("vertex {v} has no lower neighbor; radial field is not monotone")))
    }

    /// Pushed edge and the fill of the quadrilateral it sweeps.
    fn step(&mut self, e: usize) -> Result<(Option<(usize, usize)>, Chain)> {
        if let Some(r) = self.memo.get(&e) {
            return Ok(r.clone());
        }
        let complex = self.space.complex();
        let (u, v) = (complex.simplex(1, e)[0], complex.simplex(1, e)[1]);
        let (su, sv) = (self.successor(u)?, self.successor(v)?);
        let pushed = (su != sv).then_some((su, sv));
        if let Some((a, b)) = pushed {
            if complex.edge_index(a, b).is_none() {
                return Err(Error::structural(format!(
                    "successors {a}, {b} of edge [{u}, {v}] are not adjacent"
                )));
            }
        }
        let mut target = Chain::from_simplices(complex, 1, [(vec![u, v], 1i64)])?;
        for (from, to, s) in [(v, sv, 1i64), (su, sv, -1), (u, su, -1)] {
            if from != to {
                target = &target + &Chain::from_simplices(complex, 1, [(vec![from, to], s)])?;
            }
        }
        let fill = self.local_fill(&[u, v, su, sv], &target)?;
        self.memo.insert(e, (pushed, fill.clone()));
        Ok((pushed, fill))
    }

    /// Least-mass combination of the faces spanned by `verts` with
    /// coefficients in {-1, 0, 1} bounding `target`.
    fn local_fill(&mut self, verts: &[usize], target: &Chain) -> Result<Chain> {
        let complex = self.space.complex();
        if target.is_zero() {
            return Ok(Chain::zero(2));
        }
        let mut vs = verts.to_vec();
        vs.sort_unstable();
        vs.dedup();
        let faces: Vec<usize> = if complex.dimension() >= 2 {
            (0..complex.count(2)).filter(|&t| complex.simplex(2, t).iter().all(|x| vs.contains(x))).collect()
        } else {
            Vec::new()
        };
        let mut best: Option<(f64, Chain)> = None;
        let total = 3usize.pow(faces.len() as u32);
        for code in 1..total {
            let mut k = code;
            let terms: Vec<(usize, i64)> = faces
                .iter()
                .map(|&t| {
                    let a = (k % 3) as i64 - 1;
                    k /= 3;
                    (t, a)
                })
                .collect();
            let f = Chain::from_terms(2, terms);
            if &boundary(complex, &f)? == target {
                let m = mass(self.space.areas(), &f)?;
                if best.as_ref().is_none_or(|(bm, _)| m < *bm) {
                    best = Some((m, f));
                }
            }
        }
        match best {
            Some((_, f)) => Ok(f),
            None => {
                self.fallbacks += 1;
                fallback_fill(self.space, target)
            }
        }
    }
}

/// Pushes `c` down to radial value `target_level` by repeatedly moving each
/// vertex to its successor (nearest strictly lower neighbor), filling each
/// swept quadrilateral from the faces on its corners.
pub fn neck_contract(space: &MetricComplex, c: &Chain, target_level: f64) -> Result<NeckSweep> {
    let rho = space.radial().ok_or_else(|| Error::structural("neck contraction needs radial values"))?;
    let complex = space.complex();
    if c.dim() != 1 {
        return Err(Error::structural("neck contraction takes 1-chains"));
    }
    c.validate(complex)?;
    if !target_level.is_finite() {
        return Err(Error::domain("target level must be finite"));
    }
    let input_mass = mass(space.edge_lengths(), c)?;
    let top = c
        .iter()
        .flat_map(|(i, _)| complex.simplex(1, i).iter().map(|&v| rho[v]))
        .fold(target_level, f64::max);
    let mut sw = Sweeper { space, rho, level: target_level, fallbacks: 0, memo: HashMap::new() };
    let mut cur = c.clone();
    let mut sweep = Chain::zero(2);
    let mut rounds = 0;
    while cur.iter().any(|(i, _)| complex.simplex(1, i).iter().any(|&v| !sw.settled(v))) {
        rounds += 1;
        if rounds > space.n_vertices() + 1 {
            return Err(Error::structural("successor chain does not reach the target level"));
        }
        let mut next = Chain::zero(1);
        for (i, a) in cur.iter() {
            let (pushed, fill) = sw.step(i)?;
            sweep.add_scaled(&fill, a);
            if let Some((x, y)) = pushed {
                next = &next + &Chain::from_simplices(complex, 1, [(vec![x, y], 1i64)])?.scaled(a);
            }
        }
        cur = next;
    }
    debug_assert_eq!(boundary(complex, &sweep).ok(), Some(c - &cur));
    Ok(NeckSweep {
        mass: mass(space.areas(), &sweep)?,
        pushed: cur,
        sweep,
        input_mass,
        radial_span: top - target_level,
        rounds,
        fallbacks: sw.fallbacks,
    })
}
