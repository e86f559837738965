//! Integer row echelon bases and exhaustive enumeration of lattice cosets
//! `x0 + L` inside coordinate boxes.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Basis vector of an echelon lattice basis together with its pivot column.
#[derive(Clone, Debug)]
pub struct EchelonRow {
    pub pivot: usize,
    pub coords: Vec<BigInt>,
}

/// Unimodular row reduction of `rows` to echelon form with positive pivots
/// and entries above each pivot reduced into `[0, pivot)`. The nonzero
/// output rows span the same lattice as the input.
pub fn row_echelon(mut rows: Vec<Vec<BigInt>>) -> Vec<EchelonRow> {
    let n = rows.first().map_or(0, Vec::len);
    let mut out: Vec<EchelonRow> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                if best.is_none_or(|b| rows[i][col].magnitude() < rows[b][col].magnitude()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let pivot = rows[r].clone();
                for (a, p) in rows[i].iter_mut().zip(&pivot) {
                    *a -= p * &q;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                if rows[r][col].is_negative() {
                    for a in rows[r].iter_mut() {
                        *a = -std::mem::take(a);
                    }
                }
                out.push(EchelonRow { pivot: col, coords: rows[r].clone() });
                r += 1;
                break;
            }
        }
        if r == rows.len() {
            break;
        }
    }
    // Hermite reduction above pivots.
    for k in 0..out.len() {
        let (upper, lower) = out.split_at_mut(k);
        let row = &lower[0];
        for above in upper.iter_mut() {
            let q = above.coords[row.pivot].div_floor(&row.coords[row.pivot]);
            if !q.is_zero() {
                for (a, p) in above.coords.iter_mut().zip(&row.coords) {
                    *a -= p * &q;
                }
            }
        }
    }
    out
}

/// Nodes visited before a coset search gives up.
pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

/// Visitor driving [`Coset::enumerate`].
pub trait CosetVisitor {
    /// Largest admissible `|x_col|`; may shrink as the search progresses.
    fn coord_bound(&self, col: usize) -> i128;
    /// Columns `0..upto` of `x` are final. Return false to prune.
    fn partial(&mut self, x: &[i128], upto: usize) -> bool;
    fn leaf(&mut self, x: &[i128]);
}

/// The coset `x0 + span_Z(basis)` with an echelon basis, in `i128`.
#[derive(Clone, Debug)]
pub struct Coset {
    x0: Vec<i128>,
    basis: Vec<(usize, Vec<i128>)>,
}

fn to_i128(v: &BigInt) -> Result<i128> {
    v.to_i128()
        .filter(|x| x.checked_abs().is_some_and(|a| a < (1i128 << 100)))
        .ok_or_else(|| Error::capacity("coefficient too large for coset enumeration"))
}

impl Coset {
    pub fn new(x0: &[BigInt], basis: &[EchelonRow]) -> Result<Self> {
        let x0 = x0.iter().map(to_i128).collect::<Result<Vec<_>>>()?;
        let basis = basis
            .iter()
            .map(|r| Ok((r.pivot, r.coords.iter().map(to_i128).collect::<Result<Vec<_>>>()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Coset { x0, basis })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn len(&self) -> usize {
        self.x0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x0.is_empty()
    }

    pub fn base_point(&self) -> &[i128] {
        &self.x0
    }

    pub fn basis(&self) -> impl Iterator<Item = &[i128]> {
        self.basis.iter().map(|(_, v)| v.as_slice())
    }

    /// Depth-first enumeration of every coset point admitted by the
    /// visitor's coordinate bounds. Errors once `budget` nodes are spent.
    pub fn enumerate<V: CosetVisitor>(&self, visitor: &mut V, budget: u64) -> Result<u64> {
        let mut x = self.x0.clone();
        let mut nodes = 0u64;
        let first = self.basis.first().map_or(x.len(), |b| b.0);
        if visitor.partial(&x, first) {
            self.descend(0, &mut x, visitor, &mut nodes, budget)?;
        }
        Ok(nodes)
    }

    fn descend<V: CosetVisitor>(
        &self,
        level: usize,
        x: &mut [i128],
        visitor: &mut V,
        nodes: &mut u64,
        budget: u64,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::capacity(format!("coset search exceeded {budget} nodes")));
        }
        if level == self.basis.len() {
            visitor.leaf(x);
            return Ok(());
        }
        let (p, ref h) = self.basis[level];
        let hp = h[p];
        let base = x[p];
        let upto = self.basis.get(level + 1).map_or(x.len(), |b| b.0);
        // closest z to zeroing x[p], then alternate outward
        let center = round_div(-base, hp);
        let mut current = 0i128;
        let shift = |x: &mut [i128], to: i128, current: &mut i128| {
            let delta = to - *current;
            if delta != 0 {
                for (a, b) in x.iter_mut().zip(h) {
                    *a += delta * b;
                }
            }
            *current = to;
        };
        let (mut up, mut down) = (center, center - 1);
        let (mut up_open, mut down_open) = (true, true);
        let mut take_up = true;
        while up_open || down_open {
            let z = if (take_up && up_open) || !down_open {
                let z = up;
                up += 1;
                if (base + z * hp).abs() > visitor.coord_bound(p) {
                    up_open = false;
                    take_up = false;
                    continue;
                }
                z
            } else {
                let z = down;
                down -= 1;
                if (base + z * hp).abs() > visitor.coord_bound(p) {
                    down_open = false;
                    take_up = true;
                    continue;
                }
                z
            };
            take_up = !take_up;
            shift(x, z, &mut current);
            if visitor.partial(x, upto) {
                self.descend(level + 1, x, visitor, nodes, budget)?;
            }
        }
        shift(x, 0, &mut current);
        Ok(())
    }
}

fn round_div(a: i128, b: i128) -> i128 {
    debug_assert!(b > 0);
    (2 * a + b).div_euclid(2 * b)
}

/// Lexicographic comparison of integer vectors.
pub fn lex_cmp(a: &[i128], b: &[i128]) -> Ordering {
    a.iter().cmp(b.iter())
}

/// Search key for minimal-norm coset representatives: max-norm, then ℓ1,
/// then lexicographic.
fn max_l1(x: &[i128]) -> (i128, i128) {
    x.iter().fold((0, 0), |(m, s), v| (m.max(v.abs()), s + v.abs()))
}

struct MaxNormSearch {
    radius: i128,
    best: Option<(i128, Vec<i128>)>,
}

impl CosetVisitor for MaxNormSearch {
    fn coord_bound(&self, _col: usize) -> i128 {
        self.radius
    }

    fn partial(&mut self, x: &[i128], upto: usize) -> bool {
        let (m, s) = max_l1(&x[..upto]);
        m <= self.radius && self.best.as_ref().is_none_or(|(l1, _)| s <= *l1)
    }

    fn leaf(&mut self, x: &[i128]) {
        let (m, s) = max_l1(x);
        if m > self.radius {
            return;
        }
        let better = match &self.best {
            None => true,
            Some((l1, v)) => s < *l1 || (s == *l1 && lex_cmp(x, v) == Ordering::Less),
        };
        if better {
            self.best = Some((s, x.to_vec()));
        }
    }
}

/// Coset point minimizing (max-norm, ℓ1, lexicographic) with
/// max-norm at most `max_radius`, by iterative deepening on the radius.
pub fn minimal_max_norm(coset: &Coset, max_radius: i128, budget: u64) -> Result<Option<Vec<i128>>> {
    let mut spent = 0u64;
    for radius in 0..=max_radius.max(0) {
        let mut search = MaxNormSearch { radius, best: None };
        spent += coset.enumerate(&mut search, budget.saturating_sub(spent))?;
        if let Some((_, x)) = search.best {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Repeatedly moves by `±b` for basis vectors `b` while doing so lowers
/// `key`. Deterministic: the first improving move in basis order wins.
pub fn greedy_descent<K: Ord>(coset: &Coset, start: &[i128], key: impl Fn(&[i128]) -> K) -> Vec<i128> {
    let mut x = start.to_vec();
    let mut best = key(&x);
    let basis: Vec<&[i128]> = coset.basis().collect();
    'outer: loop {
        for b in &basis {
            for sign in [1i128, -1] {
                let mut step = 1i128;
                let mut moved = false;
                // doubling line search along ±b
                loop {
                    let cand: Vec<i128> = x.iter().zip(b.iter()).map(|(a, c)| a + sign * step * c).collect();
                    let k = key(&cand);
                    if k < best {
                        best = k;
                        x = cand;
                        moved = true;
                        step = step.saturating_mul(2);
                    } else if step > 1 {
                        step = 1;
                    } else {
                        break;
                    }
                }
                if moved {
                    continue 'outer;
                }
            }
        }
        return x;
    }
}

pub fn max_l1_key(x: &[i128]) -> (i128, i128) {
    max_l1(x)
}

pub fn to_bigint_vec(x: &[i128]) -> Vec<BigInt> {
    x.iter().map(|&v| BigInt::from(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn echelon_spans_same_lattice() {
        let rows = vec![big(&[2, 4, 6]), big(&[3, 3, 3])];
        let e = row_echelon(rows);
        assert_eq!(e.len(), 2);
        assert_eq!(e[0].pivot, 0);
        assert_eq!(e[0].coords, big(&[1, 5, 9]));
        assert_eq!(e[1].pivot, 1);
        assert_eq!(e[1].coords, big(&[0, 6, 12]));
    }

    #[test]
    fn echelon_drops_dependent_rows() {
        let e = row_echelon(vec![big(&[1, 1]), big(&[2, 2])]);
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn min_max_norm_on_line() {
        // solutions of x - y = 3: (3,0) + t(1,1)
        let basis = row_echelon(vec![big(&[1, 1])]);
        let coset = Coset::new(&big(&[3, 0]), &basis).unwrap();
        let x = minimal_max_norm(&coset, 5, DEFAULT_NODE_BUDGET).unwrap().unwrap();
        assert_eq!(x, vec![1, -2]);
    }

    #[test]
    fn empty_box() {
        let coset = Coset::new(&big(&[4]), &[]).unwrap();
        assert_eq!(minimal_max_norm(&coset, 3, DEFAULT_NODE_BUDGET).unwrap(), None);
        assert_eq!(minimal_max_norm(&coset, 4, DEFAULT_NODE_BUDGET).unwrap(), Some(vec![4]));
    }

    #[test]
    fn greedy_reaches_line_optimum() {
        let basis = row_echelon(vec![big(&[1, 1])]);
        let coset = Coset::new(&big(&[40, 37]), &basis).unwrap();
        let x = greedy_descent(&coset, coset.base_point(), max_l1_key);
        assert_eq!(max_l1(&x).0, 2);
    }
}
