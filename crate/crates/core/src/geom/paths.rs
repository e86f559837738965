//! Single-source shortest paths in the 1-skeleton with deterministic
//! tie-breaking.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::chains::{Chain, SimplicialComplex};
use crate::error::Result;
use crate::geom::MetricComplex;

const TIE: f64 = 1e-12;

pub(crate) fn near(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite() && (a - b).abs() <= TIE * a.abs().max(b.abs())
}

/// Smallest id among the candidates whose key is within rounding of the
/// minimum key.
pub(crate) fn argmin_near(ids: impl IntoIterator<Item = usize>, key: impl Fn(usize) -> f64) -> Option<usize> {
    let ids: Vec<usize> = ids.into_iter().collect();
    let low = ids.iter().map(|&i| key(i)).fold(f64::INFINITY, f64::min);
    ids.into_iter().filter(|&i| key(i) == low || near(key(i), low)).min()
}

#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub source: usize,
    pub dist: Vec<f64>,
    pub pred: Vec<Option<usize>>,
}

impl ShortestPaths {
    /// Vertex sequence from the source to `v`.
    pub fn path_to(&self, v: usize) -> Option<Vec<usize>> {
        if !self.dist[v].is_finite() {
            return None;
        }
        let mut out = vec![v];
        let mut cur = v;
        while let Some(p) = self.pred[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        Some(out)
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Dijkstra from `source`, optionally restricted to `allowed` vertices.
/// Paths of equal length (relative `1e-12`) resolve to the
/// lexicographically smallest vertex sequence.
pub fn shortest_paths(space: &MetricComplex, source: usize, allowed: Option<&[bool]>) -> ShortestPaths {
    let n = space.n_vertices();
    let ok = |v: usize| allowed.is_none_or(|a| a[v]);
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    if ok(source) {
        dist[source] = 0.0;
        heap.push(Item(0.0, source));
    }
    let lengths = space.edge_lengths();
    while let Some(Item(d, u)) = heap.pop() {
        if done[u] || d > dist[u] {
            continue;
        }
        done[u] = true;
        for &(v, e) in space.neighbors(u) {
            if !ok(v) || done[v] {
                continue;
            }
            let nd = d + lengths[e];
            let better = if near(nd, dist[v]) {
                pred[v].is_some_and(|p| lex_less(&pred, u, p))
            } else {
                nd < dist[v]
            };
            if better {
                dist[v] = dist[v].min(nd);
                pred[v] = Some(u);
                heap.push(Item(dist[v], v));
            }
        }
    }
    ShortestPaths { source, dist, pred }
}

fn chain_of(pred: &[Option<usize>], mut v: usize) -> Vec<usize> {
    let mut out = vec![v];
    while let Some(p) = pred[v] {
        out.push(p);
        v = p;
    }
    out.reverse();
    out
}

/// Whether the path to `a` sorts before the path to `b`.
fn lex_less(pred: &[Option<usize>], a: usize, b: usize) -> bool {
    chain_of(pred, a) < chain_of(pred, b)
}

/// Oriented 1-chain traversing `path` vertex by vertex.
pub fn path_chain(complex: &SimplicialComplex, path: &[usize]) -> Result<Chain> {
    Chain::from_simplices(complex, 1, path.windows(2).map(|w| (vec![w[0], w[1]], 1i64)))
}

pub fn path_length(space: &MetricComplex, path: &[usize]) -> f64 {
    path.windows(2)
        .map(|w| space.complex().edge_index(w[0], w[1]).map_or(f64::INFINITY, |e| space.edge_lengths()[e]))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_tie_breaks_lexicographically() {
        // unit square 0-1-2-3 with diagonal-free triangulation via 4 = center
        let k = SimplicialComplex::new(4, [vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap();
        let coords = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]];
        let m = MetricComplex::new(k, coords, None, None).unwrap();
        let sp = shortest_paths(&m, 0, None);
        assert_eq!(sp.path_to(2).unwrap(), vec![0, 1, 2]);
        assert!((sp.dist[2] - 2.0).abs() < 1e-15);
        let sp = shortest_paths(&m, 2, None);
        assert_eq!(sp.path_to(0).unwrap(), vec![2, 1, 0]);
        let mask = [true, false, true, true];
        let sp = shortest_paths(&m, 0, Some(&mask));
        assert_eq!(sp.path_to(2).unwrap(), vec![0, 3, 2]);
        assert!(sp.path_to(1).is_none());
    }
}
