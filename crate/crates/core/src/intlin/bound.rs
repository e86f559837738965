//! Small-solution bounds for solvable integer systems: exact maximal minors
//! of the augmented matrix and the Hadamard estimate
//! `m^{m/2} · M_A^{m-1} · max{M_A, M_b}` that dominates them.

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{IntMatrix, IntegerSystem};
use crate::error::{Error, Result};

/// Default cap on the number of minors (or box points) enumerated.
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Exact `max |det S|` over all `m×m` submatrices `S` of `a_aug`.
///
/// Fails with a capacity error when `C(rows, m)·C(cols, m)` exceeds
/// `budget`; callers should then rely on [`bfrt_bound`].
pub fn max_minor_abs(a_aug: &IntMatrix, m: usize, budget: u64) -> Result<BigInt> {
    if m > a_aug.rows().min(a_aug.cols()) {
        return Err(Error::domain(format!(
            "minor size {m} exceeds matrix shape {}x{}",
            a_aug.rows(),
            a_aug.cols()
        )));
    }
    if m == 0 {
        return Ok(BigInt::one());
    }
    let count = binomial(a_aug.rows(), m).saturating_mul(binomial(a_aug.cols(), m));
    if count > budget as u128 {
        return Err(Error::capacity(format!(
            "{count} minors of size {m} exceed the enumeration budget {budget}; use the Hadamard estimate"
        )));
    }
    if m == 1 {
        return Ok(a_aug.max_abs());
    }
    let mut best = BigInt::zero();
    for rows in (0..a_aug.rows()).combinations(m) {
        for cols in (0..a_aug.cols()).combinations(m) {
            let d = a_aug.submatrix(&rows, &cols).determinant()?.abs();
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// `⌈√n⌉` for nonnegative `n`.
pub(crate) fn ceil_sqrt(n: &BigInt) -> BigInt {
    let s = n.sqrt();
    if &(&s * &s) < n {
        s + 1
    } else {
        s
    }
}

/// Exact `⌈m^{m/2} · M_A^{m-1} · max{M_A, M_b}⌉`.
pub fn bfrt_bound_ceil(m: u32, ma: &BigInt, mb: &BigInt) -> BigInt {
    let top = ma.max(mb).clone();
    if m == 0 {
        return top;
    }
    let core = ma.pow(m - 1) * &top;
    if m.is_multiple_of(2) {
        BigInt::from(m).pow(m / 2) * core
    } else {
        ceil_sqrt(&(BigInt::from(m).pow(m) * &core * &core))
    }
}

/// Whether `f ≥ √n`, decided exactly.
fn dominates_sqrt(f: f64, n: &BigInt) -> bool {
    let (mant, exp, _) = num_traits::Float::integer_decode(f);
    let mant = BigInt::from(mant);
    if exp >= 0 {
        let v = mant << exp as usize;
        &(&v * &v) >= n
    } else {
        &mant * &mant >= n << (2 * (-exp) as usize)
    }
}

/// `m^{m/2} · M_A^{m-1} · max{M_A, M_b}` in binary64, rounded upward: the
/// least double not below the real value. `m = 0` yields `max{M_A, M_b}`.
pub fn bfrt_bound(m: u32, ma: u64, mb: u64) -> f64 {
    let top = BigInt::from(ma.max(mb));
    if m == 0 {
        return round_up(&top);
    }
    let core = BigInt::from(ma).pow(m - 1) * top;
    let square = BigInt::from(m).pow(m) * &core * &core;
    let mut f = square.to_f64().map_or(f64::INFINITY, f64::sqrt);
    if !f.is_finite() {
        return f64::INFINITY;
    }
    while !dominates_sqrt(f, &square) {
        f = f.next_up();
    }
    while f > 0.0 && dominates_sqrt(f.next_down(), &square) {
        f = f.next_down();
    }
    f
}

fn round_up(v: &BigInt) -> f64 {
    let f = v.to_f64().unwrap_or(f64::INFINITY);
    if f.is_finite() && BigInt::from_f64(f).is_some_and(|g| &g < v) {
        f.next_up()
    } else {
        f
    }
}

/// Which column type attains the Hadamard estimate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HadamardCase {
    /// `M_A ≥ M_b`: minors built from columns of `A` alone dominate.
    ColumnsOfA,
    /// `M_b > M_A`: minors containing the `b` column dominate.
    ContainsB,
}

/// Evidence for the small-solution guarantee on one system `Ax = b`.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCertificate {
    /// Rank of `A`.
    pub m: usize,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub max_a: BigInt,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub max_b: BigInt,
    pub hadamard_bound: f64,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub hadamard_ceil: BigInt,
    pub case: HadamardCase,
    /// Set when `m = 0` and the bound degenerates to `max{M_A, M_b}`.
    pub empty_rank: bool,
    #[serde(serialize_with = "crate::serde_big::opt_int")]
    pub minor_max: Option<BigInt>,
    #[serde(serialize_with = "crate::serde_big::opt_vec")]
    pub solution: Option<Vec<BigInt>>,
    /// Set when the box search was skipped for capacity, so a missing
    /// `solution` says nothing about existence.
    pub search_skipped: bool,
}

impl BoundCertificate {
    pub fn solution_max(&self) -> Option<BigInt> {
        self.solution.as_ref().map(|x| x.iter().map(Signed::abs).max().unwrap_or_default())
    }

    /// `max|x_i| ≤ Y ≤ ⌈bound⌉` for whichever quantities are present.
    /// At rank zero the empty minor is 1 while the bound collapses to
    /// `max{M_A, M_b}`, so only `x = 0` is required.
    pub fn holds(&self) -> bool {
        if self.empty_rank {
            return self.solution_max().is_none_or(|x| x.is_zero());
        }
        let y_ok = self.minor_max.as_ref().is_none_or(|y| y <= &self.hadamard_ceil);
        let x_ok = match (self.solution_max(), &self.minor_max) {
            (Some(x), Some(y)) => &x <= y,
            (Some(x), None) => x <= self.hadamard_ceil,
            _ => true,
        };
        y_ok && x_ok
    }
}

/// Builds a [`BoundCertificate`] for `Ax = b`: rank, entry maxima, the
/// Hadamard estimate, exact `Y` when enumeration fits `budget`, and a
/// max-norm-minimal solution searched within the box of radius `Y` (or the
/// estimate when `Y` is unavailable).
pub fn certify(a: &IntMatrix, b: &[BigInt], budget: u64) -> Result<BoundCertificate> {
    let system = IntegerSystem::new(a.clone());
    let m = system.rank();
    let max_a = a.max_abs();
    let max_b = b.iter().map(Signed::abs).max().unwrap_or_default();
    let m32 = u32::try_from(m).map_err(|_| Error::capacity("rank too large"))?;
    let hadamard_ceil = bfrt_bound_ceil(m32, &max_a, &max_b);
    let hadamard_bound = match (max_a.to_u64(), max_b.to_u64()) {
        (Some(x), Some(y)) => bfrt_bound(m32, x, y),
        _ => f64::INFINITY,
    };
    let case = if max_a >= max_b { HadamardCase::ColumnsOfA } else { HadamardCase::ContainsB };
    let aug = a.augment(b)?;
    let minor_max = match max_minor_abs(&aug, m, budget) {
        Ok(y) => Some(y),
        Err(Error::Capacity(_)) => None,
        Err(e) => return Err(e),
    };
    let radius = minor_max.clone().unwrap_or_else(|| hadamard_ceil.clone());
    let (solution, search_skipped) = match system.solve_small(b, &radius) {
        Ok(x) => (x, false),
        Err(Error::Capacity(_)) => (None, true),
        Err(e) => return Err(e),
    };
    Ok(BoundCertificate {
        m,
        max_a,
        max_b,
        hadamard_bound,
        hadamard_ceil,
        case,
        empty_rank: m == 0,
        minor_max,
        solution,
        search_skipped,
    })
}
