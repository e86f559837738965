//! Cutting a cycle along region interfaces.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::chains::{boundary, is_cycle, mass, Chain};
use crate::error::{Error, Result};
use crate::geom::paths::path_chain;
use crate::geom::MetricComplex;

#[derive(Clone, Debug, Serialize)]
pub struct Piece {
    pub region: String,
    #[serde(skip)]
    pub chain: Chain,
    pub mass: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    /// Nonzero pieces in region-label order.
    pub pieces: Vec<Piece>,
    /// `Σ mass(pieces) / mass(c)`; 1 when `c` is zero.
    pub c0: f64,
}

/// Splits the 1-cycle `c` into cycles each supported in the closed star of
/// one region. Body-body edges stay in their body, body-neck edges go to
/// the neck, and each neck piece is closed up by paths through the
/// interface vertices of the adjacent bodies.
pub fn decompose_cycle(space: &MetricComplex, c: &Chain) -> Result<Decomposition> {
    let reg = space.regions().ok_or_else(|| Error::structural("decomposition needs region labels"))?;
    let complex = space.complex();
    if c.dim() != 1 {
        return Err(Error::structural("decomposition takes 1-chains"));
    }
    c.validate(complex)?;
    if !is_cycle(complex, c)? {
        return Err(Error::domain("decomposition input is not a cycle"));
    }
    let mut raw: BTreeMap<String, Chain> = BTreeMap::new();
    for (i, a) in c.iter() {
        let e = complex.simplex(1, i);
        let (la, lb) = (reg.label(e[0]), reg.label(e[1]));
        let target = if la == lb {
            la
        } else if !reg.adjacent(la, lb) {
            return Err(Error::structural(format!(
                "edge [{}, {}] joins non-adjacent regions {la} and {lb}",
                e[0], e[1]
            )));
        } else if reg.is_neck(la) {
            la
        } else {
            lb
        };
        raw.entry(target.to_string()).or_insert_with(|| Chain::zero(1)).add_term(i, a);
    }
    let n = space.n_vertices();
    let necks: Vec<String> = raw.keys().filter(|l| reg.is_neck(l)).cloned().collect();
    for neck in necks {
        let flux = boundary(complex, &raw[&neck])?;
        if flux.is_zero() {
            continue;
        }
        for body in reg.necks[&neck].clone() {
            // interface of `body` towards `neck`
            let inside: Vec<bool> = (0..n)
                .map(|v| reg.label(v) == body && space.neighbors(v).iter().any(|&(w, _)| reg.label(w) == neck))
                .collect();
            let demand: BTreeMap<usize, BigInt> = flux.iter().filter(|(v, _)| inside[*v]).map(|(v, a)| (v, -a)).collect();
            if demand.is_empty() {
                continue;
            }
            let q = route(space, &inside, &demand)?;
            raw.entry(neck.clone()).and_modify(|c| *c = &*c + &q);
            let b = raw.entry(body.clone()).or_insert_with(|| Chain::zero(1));
            *b = &*b - &q;
        }
        if !boundary(complex, &raw[&neck])?.is_zero() {
            return Err(Error::structural(format!("cycle crosses neck {neck} with nonzero net flux")));
        }
    }
    let input = mass(space.edge_lengths(), c)?;
    let mut pieces = Vec::new();
    for (region, chain) in raw {
        if chain.is_zero() {
            continue;
        }
        let m = mass(space.edge_lengths(), &chain)?;
        pieces.push(Piece { region, chain, mass: m });
    }
    let total: f64 = pieces.iter().map(|p| p.mass).sum();
    let c0 = if input > 0.0 { total / input } else { 1.0 };
    Ok(Decomposition { pieces, c0 })
}

/// 1-chain inside `inside` with boundary `demand`, along BFS trees rooted
/// at the least vertex of each component.
fn route(space: &MetricComplex, inside: &[bool], demand: &BTreeMap<usize, BigInt>) -> Result<Chain> {
    let n = inside.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut root = vec![usize::MAX; n];
    for s in 0..n {
        if !inside[s] || root[s] != usize::MAX {
            continue;
        }
        root[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in space.neighbors(u) {
                if inside[w] && root[w] == usize::MAX {
                    root[w] = s;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
    }
    let mut per_root: BTreeMap<usize, BigInt> = BTreeMap::new();
    let mut out = Chain::zero(1);
    for (&v, g) in demand {
        *per_root.entry(root[v]).or_insert_with(BigInt::zero) += g;
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = parent[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        out.add_scaled(&path_chain(space.complex(), &path)?, g);
    }
    if per_root.values().any(|s| !s.is_zero()) {
        return Err(Error::structural("cycle crosses a neck with nonzero net flux"));
    }
    Ok(out)
}
