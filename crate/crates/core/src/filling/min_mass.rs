//! Least-mass integral fillings by branch and bound over the solution coset.

use std::cmp::Ordering;

use num_traits::Zero;

use crate::chains::{boundary, mass, Chain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filling::FillSolver;
use crate::intlin::lattice::{greedy_descent, lex_cmp, Coset, CosetVisitor};
use crate::tolerance;

/// Kernel dimensions above this are not searched exhaustively.
pub const MAX_BRANCH_AND_BOUND_DIM: usize = 20;

const NODE_BUDGET: u64 = 5_000_000;

#[derive(Clone, Debug)]
pub struct MinMassFill {
    pub chain: Chain,
    pub mass: f64,
    /// Search nodes visited; zero when no search was needed.
    pub nodes: u64,
}

#[derive(Clone, Copy)]
struct Mass(f64);

impl PartialEq for Mass {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Mass {}

impl PartialOrd for Mass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Mass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

fn weighted_l1(w: &[f64], x: &[i128]) -> f64 {
    x.iter().zip(w).map(|(&a, &wi)| a.unsigned_abs() as f64 * wi).sum()
}

struct MassSearch<'a> {
    w: &'a [f64],
    tol: f64,
    best: f64,
    // every leaf found within tolerance of `best`
    near: Vec<(f64, Vec<i128>)>,
}

impl MassSearch<'_> {
    fn cap(&self) -> f64 {
        self.best * (1.0 + self.tol)
    }
}

impl CosetVisitor for MassSearch<'_> {
    fn coord_bound(&self, col: usize) -> i128 {
        let b = (self.cap() / self.w[col]).floor();
        if b >= 1e30 {
            i128::MAX / 4
        } else {
            b as i128
        }
    }

    fn partial(&mut self, x: &[i128], upto: usize) -> bool {
        weighted_l1(&self.w[..upto], &x[..upto]) <= self.cap()
    }

    fn leaf(&mut self, x: &[i128]) {
        let m = weighted_l1(self.w, x);
        if m > self.cap() {
            return;
        }
        if m < self.best {
            self.best = m;
            let cap = self.cap();
            self.near.retain(|(v, _)| *v <= cap);
        }
        self.near.push((m, x.to_vec()));
    }
}

fn pick(near: Vec<(f64, Vec<i128>)>) -> (f64, Vec<i128>) {
    near.into_iter()
        .min_by(|a, b| lex_cmp(&a.1, &b.1))
        .expect("search always holds its incumbent")
}

/// Minimum-mass `(k+1)`-chain with boundary `z`, where `weights` are the
/// volumes of the `(k+1)`-simplices. Masses within relative `1e-9` of the
/// optimum tie, and ties go to the lexicographically smallest coefficient
/// vector. When the search cannot finish within its dimension and node
/// limits the error is [`Error::NonOptimal`] carrying the best chain found.
pub fn min_mass_fill(complex: &SimplicialComplex, weights: &[f64], z: &Chain) -> Result<MinMassFill> {
    z.validate(complex)?;
    let solver = FillSolver::new(complex, z.dim())?;
    let out = min_mass_fill_with(&solver, weights, z)?;
    debug_assert_eq!(&boundary(complex, &out.chain)?, z);
    Ok(out)
}

/// [`min_mass_fill`] reusing a prepared solver.
pub fn min_mass_fill_with(solver: &FillSolver, weights: &[f64], z: &Chain) -> Result<MinMassFill> {
    let n = solver.system().matrix().cols();
    if weights.len() != n {
        return Err(Error::structural(format!("expected {n} weights, got {}", weights.len())));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(Error::domain(format!("weights must be positive and finite, got {w}")));
    }
    let dim = solver.k() + 1;
    let x0 = solver.particular(z)?;
    if z.is_zero() {
        return Ok(MinMassFill { chain: Chain::zero(dim), mass: 0.0, nodes: 0 });
    }
    if solver.system().kernel_dim() == 0 {
        let chain = Chain::from_dense(dim, &x0);
        let m = mass(weights, &chain)?;
        return Ok(MinMassFill { chain, mass: m, nodes: 0 });
    }
    let coset: Coset = match solver.coset(&x0) {
        Ok(c) => c,
        Err(_) => {
            let chain = Chain::from_dense(dim, &x0);
            let m = mass(weights, &chain)?;
            return Err(Error::NonOptimal {
                message: "coefficients too large to search".into(),
                incumbent: chain,
                mass: m,
            });
        }
    };
    let start = greedy_descent(&coset, coset.base_point(), |x| Mass(weighted_l1(weights, x)));
    let start_mass = weighted_l1(weights, &start);
    let to_chain = |x: &[i128]| {
        let big: Vec<_> = x.iter().map(|&v| num_bigint::BigInt::from(v)).collect();
        Chain::from_dense(dim, &big)
    };
    if coset.dim() > MAX_BRANCH_AND_BOUND_DIM {
        return Err(Error::NonOptimal {
            message: format!("kernel dimension {} exceeds the exhaustive limit", coset.dim()),
            incumbent: to_chain(&start),
            mass: start_mass,
        });
    }
    let mut search = MassSearch {
        w: weights,
        tol: tolerance(),
        best: start_mass,
        near: vec![(start_mass, start)],
    };
    match coset.enumerate(&mut search, NODE_BUDGET) {
        Ok(nodes) => {
            let (_, x) = pick(search.near);
            let chain = to_chain(&x);
            let m = mass(weights, &chain)?;
            debug_assert!(!chain.is_zero() || m.is_zero());
            Ok(MinMassFill { chain, mass: m, nodes })
        }
        Err(_) => {
            let (m, x) = pick(search.near);
            Err(Error::NonOptimal {
                message: format!("search exceeded {NODE_BUDGET} nodes"),
                incumbent: to_chain(&x),
                mass: m,
            })
        }
    }
}
