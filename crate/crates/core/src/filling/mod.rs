//! Fillings of simplicial boundaries.
//!
//! [`fill_boundary`] solves `∂x = c` over the integers and shrinks the
//! solution inside its kernel coset, recording the coefficient bounds
//! `C(n0,k+1)^{C(n0,k+1)/2}·max|c|` (max-norm) and
//! `C(n0,k+2)·C(n0,k+1)^{C(n0,k+1)/2}·max|c|` (ℓ1) in a
//! [`FillCertificate`]. [`min_mass_fill`] finds a fill of least weighted
//! mass, and [`hf1_profile`] uses it to estimate the first homological
//! filling function from below.

mod hf1;
mod min_mass;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::chains::{boundary, boundary_matrix, Chain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::intlin::lattice::{self, greedy_descent, max_l1_key, minimal_max_norm, Coset};
use crate::intlin::{ceil_sqrt, IntegerSystem, MAX_EXACT_COSET_DIM};

pub use hf1::{
    amin_upper_bound, fit_upper_line, h1_is_trivial, hf1_profile, simple_cycles, CycleBudget, Hf1Profile,
    Hf1Sample,
};
pub(crate) use hf1::{cycle_rank, h1_trivial_with};
pub use min_mass::{min_mass_fill, min_mass_fill_with, MinMassFill, MAX_BRANCH_AND_BOUND_DIM};

/// Node budget for exact max-norm reduction inside [`fill_boundary`].
const REDUCTION_NODE_BUDGET: u64 = 2_000_000;

/// Exponents above this are reported by logarithm only.
const EXACT_POWER_LIMIT: u64 = 4_000;

/// Upper bound of the form `⌈N^{N/2}⌉ · s · f`, exact when small enough to
/// expand and always available as a base-10 logarithm.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientBound {
    pub log10: f64,
    #[serde(serialize_with = "crate::serde_big::opt_int")]
    pub exact: Option<BigInt>,
}

fn log10_big(v: &BigInt) -> f64 {
    if v.is_zero() {
        return f64::NEG_INFINITY;
    }
    match v.abs().to_f64() {
        Some(f) if f.is_finite() => f.log10(),
        _ => v.bits() as f64 * std::f64::consts::LOG10_2,
    }
}

impl CoefficientBound {
    /// `⌈n^{n/2}⌉ · scale`.
    pub fn power_half(n: u64, scale: &BigInt) -> Self {
        let log10 = if n == 0 { 0.0 } else { 0.5 * n as f64 * (n as f64).log10() } + log10_big(scale);
        let exact = (n <= EXACT_POWER_LIMIT).then(|| {
            let p = u32::try_from(n).expect("bounded exponent");
            ceil_sqrt(&BigInt::from(n).pow(p)) * scale
        });
        CoefficientBound { log10, exact }
    }

    pub fn times(&self, factor: u128) -> Self {
        CoefficientBound {
            log10: self.log10 + (factor as f64).log10(),
            exact: self.exact.as_ref().map(|e| e * BigInt::from(factor)),
        }
    }

    pub fn admits(&self, v: &BigInt) -> bool {
        match &self.exact {
            Some(e) => v <= e,
            None => log10_big(v) <= self.log10 + 1e-9,
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// How the returned solution was shrunk inside its coset.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    /// Input was zero or the solution is unique.
    Trivial,
    /// Exact minimal (max-norm, ℓ1, lexicographic) representative.
    Exact,
    /// Local descent along kernel basis vectors; not certified minimal.
    Greedy,
    /// Solution read off the Smith form, unchanged.
    Unreduced,
}

#[derive(Clone, Debug, Serialize)]
pub struct FillCertificate {
    /// Dimension of the filled boundary.
    pub k: usize,
    pub n0: usize,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub input_max_coeff: BigInt,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub output_max_coeff: BigInt,
    #[serde(serialize_with = "crate::serde_big::int")]
    pub output_l1: BigInt,
    /// `C(n0,k+1)^{C(n0,k+1)/2} · input_max_coeff`.
    pub bound_max: CoefficientBound,
    /// `C(n0,k+2) · bound_max`.
    pub bound_l1: CoefficientBound,
    /// Rank `m` of `∂_{k+1}`.
    pub rank_used: usize,
    /// Stricter `m^{m/2} · input_max_coeff`; reported, not enforced.
    pub rank_bound_max: CoefficientBound,
    pub within_rank_bound: bool,
    pub kernel_dim: usize,
    pub reduction: Reduction,
}

impl FillCertificate {
    /// Both enforced inequalities.
    pub fn holds(&self) -> bool {
        self.bound_max.admits(&self.output_max_coeff) && self.bound_l1.admits(&self.output_l1)
    }
}

/// Cached integer system for `∂_{k+1} x = c` on one complex.
#[derive(Clone, Debug)]
pub struct FillSolver {
    k: usize,
    n0: usize,
    system: IntegerSystem,
}

impl FillSolver {
    /// Solver filling `k`-boundaries with `(k+1)`-chains.
    pub fn new(complex: &SimplicialComplex, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::domain("filling 0-chains is not supported; k must be at least 1"));
        }
        if k + 1 > complex.dimension() {
            return Err(Error::domain(format!(
                "complex has dimension {}, no {}-simplices to fill with",
                complex.dimension(),
                k + 1
            )));
        }
        let system = IntegerSystem::new(boundary_matrix(complex, k + 1)?);
        Ok(FillSolver { k, n0: complex.n_vertices(), system })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn system(&self) -> &IntegerSystem {
        &self.system
    }

    fn rhs(&self, c: &Chain) -> Result<Vec<BigInt>> {
        if c.dim() != self.k {
            return Err(Error::structural(format!(
                "solver fills {}-chains, got a {}-chain",
                self.k,
                c.dim()
            )));
        }
        let rows = self.system.matrix().rows();
        if c.iter().any(|(i, _)| i >= rows) {
            return Err(Error::structural("chain index out of range"));
        }
        Ok(c.to_dense(rows))
    }

    /// Some `(k+1)`-chain with boundary `c`, straight from the Smith form.
    pub fn particular(&self, c: &Chain) -> Result<Vec<BigInt>> {
        self.system.solve(&self.rhs(c)?)
    }

    pub(crate) fn coset(&self, x0: &[BigInt]) -> Result<Coset> {
        Coset::new(x0, self.system.kernel())
    }

    /// Fill of `c` with certificate; see [`fill_boundary`].
    pub fn fill(&self, c: &Chain) -> Result<(Chain, FillCertificate)> {
        let x0 = self.particular(c)?;
        let d = self.system.kernel_dim();
        let (x, reduction) = if c.is_zero() {
            (vec![BigInt::zero(); x0.len()], Reduction::Trivial)
        } else if d == 0 {
            (x0, Reduction::Trivial)
        } else {
            match self.coset(&x0) {
                Err(_) => (x0, Reduction::Unreduced),
                Ok(coset) => {
                    let greedy = greedy_descent(&coset, coset.base_point(), max_l1_key);
                    if d <= MAX_EXACT_COSET_DIM {
                        let radius = max_l1_key(&greedy).0;
                        match minimal_max_norm(&coset, radius, REDUCTION_NODE_BUDGET) {
                            Ok(Some(best)) => (lattice::to_bigint_vec(&best), Reduction::Exact),
                            _ => (lattice::to_bigint_vec(&greedy), Reduction::Greedy),
                        }
                    } else {
                        (lattice::to_bigint_vec(&greedy), Reduction::Greedy)
                    }
                }
            }
        };
        let out = Chain::from_dense(self.k + 1, &x);
        let cert = self.certificate(c, &out, reduction);
        Ok((out, cert))
    }

    fn certificate(&self, c: &Chain, out: &Chain, reduction: Reduction) -> FillCertificate {
        let input_max = c.max_abs_coeff();
        let n_k = binomial(self.n0, self.k + 1);
        let n_k1 = binomial(self.n0, self.k + 2);
        let bound_max = CoefficientBound::power_half(u64::try_from(n_k).unwrap_or(u64::MAX), &input_max);
        let bound_l1 = bound_max.times(n_k1);
        let m = self.system.rank();
        let rank_bound_max = CoefficientBound::power_half(m as u64, &input_max);
        let output_max = out.max_abs_coeff();
        FillCertificate {
            k: self.k,
            n0: self.n0,
            within_rank_bound: rank_bound_max.admits(&output_max),
            input_max_coeff: input_max,
            output_max_coeff: output_max,
            output_l1: out.l1_norm(),
            bound_max,
            bound_l1,
            rank_used: m,
            rank_bound_max,
            kernel_dim: self.system.kernel_dim(),
            reduction,
        }
    }
}

/// `(k+1)`-chain `x` with `∂x = c`, its coefficients shrunk towards the
/// minimal max-norm representative of the solution coset (exactly when the
/// kernel lattice has dimension at most 8), plus the coefficient
/// certificate.
pub fn fill_boundary(complex: &SimplicialComplex, c: &Chain) -> Result<(Chain, FillCertificate)> {
    c.validate(complex)?;
    let solver = FillSolver::new(complex, c.dim())?;
    let (x, cert) = solver.fill(c)?;
    if &boundary(complex, &x)? != c {
        return Err(Error::structural("internal: filling does not reproduce the boundary"));
    }
    Ok((x, cert))
}
