//! Exact integer linear algebra: rank, Smith normal form, integer
//! solvability of `Ax = b`, minimal-norm solutions, and the
//! Hadamard-type small-solution bound.

mod bound;
pub mod lattice;
mod matrix;
mod snf;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub use bound::{
    bfrt_bound, bfrt_bound_ceil, certify, max_minor_abs, BoundCertificate, HadamardCase,
    ENUMERATION_BUDGET,
};
pub(crate) use bound::ceil_sqrt;
pub use lattice::{Coset, EchelonRow, DEFAULT_NODE_BUDGET};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

use crate::error::{Error, Obstruction, Result};

/// Largest homogeneous lattice dimension searched exactly for minimal
/// max-norm representatives.
pub const MAX_EXACT_COSET_DIM: usize = 8;

pub fn rank(a: &IntMatrix) -> usize {
    a.rank()
}

/// A matrix together with its Smith form and an echelon basis of its
/// integer kernel, reusable across right-hand sides.
#[derive(Clone, Debug)]
pub struct IntegerSystem {
    a: IntMatrix,
    snf: SmithForm,
    kernel: Vec<EchelonRow>,
}

impl IntegerSystem {
    pub fn new(a: IntMatrix) -> Self {
        let snf = smith_normal_form(&a);
        let vt = snf.v.transpose();
        let kernel_rows: Vec<Vec<BigInt>> =
            (snf.rank..a.cols()).map(|j| vt.row(j).to_vec()).collect();
        let kernel = lattice::row_echelon(kernel_rows);
        debug_assert_eq!(kernel.len(), a.cols() - snf.rank);
        IntegerSystem { a, snf, kernel }
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn smith(&self) -> &SmithForm {
        &self.snf
    }

    pub fn rank(&self) -> usize {
        self.snf.rank
    }

    /// Dimension of the integer kernel lattice.
    pub fn kernel_dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn kernel(&self) -> &[EchelonRow] {
        &self.kernel
    }

    /// Some integer solution of `Ax = b`, read off the Smith form.
    /// Unsolvable systems yield [`Error::NoIntegerSolution`].
    pub fn solve(&self, b: &[BigInt]) -> Result<Vec<BigInt>> {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        if b.len() != rows {
            return Err(Error::structural(format!(
                "right-hand side has length {} but the matrix has {rows} rows",
                b.len()
            )));
        }
        let u = &self.snf.u;
        let mut c = vec![BigInt::zero(); rows];
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            for (i, ci) in c.iter_mut().enumerate() {
                let e = &u[(i, j)];
                if !e.is_zero() {
                    *ci += e * bj;
                }
            }
        }
        let mut x = vec![BigInt::zero(); cols];
        for (i, ci) in c.into_iter().enumerate() {
            if i < self.snf.rank {
                let d = &self.snf.d[(i, i)];
                let (q, r) = ci.div_rem(d);
                if !r.is_zero() {
                    return Err(Error::NoIntegerSolution(Obstruction { row: i, divisor: d.clone(), residue: ci }));
                }
                if q.is_zero() {
                    continue;
                }
                for (k, xk) in x.iter_mut().enumerate() {
                    let v = &self.snf.v[(k, i)];
                    if !v.is_zero() {
                        *xk += v * &q;
                    }
                }
            } else if !ci.is_zero() {
                return Err(Error::NoIntegerSolution(Obstruction { row: i, divisor: BigInt::zero(), residue: ci }));
            }
        }
        Ok(x)
    }

    /// Minimal (max-norm, ℓ1, lexicographic) solution with max-norm at most
    /// `radius`; `None` when the system is unsolvable or no solution lies in
    /// the box.
    pub fn solve_small(&self, b: &[BigInt], radius: &BigInt) -> Result<Option<Vec<BigInt>>> {
        let x0 = match self.solve(b) {
            Ok(x) => x,
            Err(Error::NoIntegerSolution(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        let d = self.kernel_dim();
        let n = self.a.cols();
        if d > MAX_EXACT_COSET_DIM {
            let side = 2.0 * radius.to_f64().unwrap_or(f64::INFINITY) + 1.0;
            if side.powi(d as i32) > ENUMERATION_BUDGET as f64 {
                return Err(Error::capacity(format!(
                    "coset dimension {d} exceeds {MAX_EXACT_COSET_DIM} and the box of radius {radius} in {n} variables exceeds the enumeration budget"
                )));
            }
        }
        let r = radius
            .to_i128()
            .filter(|r| *r < 1i128 << 60)
            .ok_or_else(|| Error::capacity("search radius too large"))?;
        let coset = Coset::new(&x0, &self.kernel)?;
        if r < 0 {
            return Ok(None);
        }
        Ok(lattice::minimal_max_norm(&coset, r, DEFAULT_NODE_BUDGET)?.map(|x| lattice::to_bigint_vec(&x)))
    }
}

/// Some integer solution of `Ax = b`, or `None` when none exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    match IntegerSystem::new(a.clone()).solve(b) {
        Ok(x) => Ok(Some(x)),
        Err(Error::NoIntegerSolution(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Integer solution minimizing max-norm, then ℓ1, then lexicographically,
/// among those with `max|x_i| ≤ budget_box`.
pub fn solve_integer_small(a: &IntMatrix, b: &[BigInt], budget_box: u64) -> Result<Option<Vec<BigInt>>> {
    IntegerSystem::new(a.clone()).solve_small(b, &BigInt::from(budget_box))
}
