//! Abstract simplicial complexes, integer chains, boundary operators and
//! weighted mass.
//!
//! Simplices are strictly increasing vertex tuples; within each dimension
//! they are indexed in lexicographic order. Chains are sparse maps from
//! simplex index to nonzero `BigInt` coefficient.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intlin::IntMatrix;

/// Finite abstract simplicial complex on vertices `0..n_vertices`, closed
/// under taking faces.
#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    n_vertices: usize,
    by_dim: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

/// Sorts `tuple` into increasing order and returns the sign of the sorting
/// permutation. Repeated vertices are an error.
pub fn canonicalize(tuple: &[usize]) -> Result<(Vec<usize>, i32)> {
    let mut v = tuple.to_vec();
    let mut sign = 1;
    // insertion sort, counting transpositions
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::structural(format!("simplex {tuple:?} repeats a vertex")));
    }
    Ok((v, sign))
}

impl SimplicialComplex {
    /// Builds the complex generated by `simplices` (each of any dimension ≥ 0)
    /// together with all of their faces. Every vertex `0..n_vertices` is a
    /// 0-simplex whether or not it appears in a generator.
    pub fn new<I, S>(n_vertices: usize, simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut sets: Vec<std::collections::BTreeSet<Vec<usize>>> = vec![(0..n_vertices).map(|v| vec![v]).collect()];
        for s in simplices {
            let s = s.as_ref();
            if s.is_empty() {
                return Err(Error::structural("empty simplex"));
            }
            let (s, _) = canonicalize(s)?;
            if let Some(&bad) = s.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::structural(format!("vertex {bad} out of range 0..{n_vertices}")));
            }
            let k = s.len() - 1;
            while sets.len() <= k {
                sets.push(Default::default());
            }
            // all nonempty subsets are faces
            let n = s.len();
            for mask in 1u32..(1 << n) {
                let face: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
                sets[face.len() - 1].insert(face);
            }
        }
        while sets.len() > 1 && sets.last().is_some_and(|s| s.is_empty()) {
            sets.pop();
        }
        let by_dim: Vec<Vec<Vec<usize>>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = by_dim
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Ok(SimplicialComplex { n_vertices, by_dim, index })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Largest `k` with at least one `k`-simplex (0 for a bare vertex set).
    pub fn dimension(&self) -> usize {
        self.by_dim.len() - 1
    }

    /// Number of `k`-simplices.
    pub fn count(&self, k: usize) -> usize {
        self.by_dim.get(k).map_or(0, Vec::len)
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn simplex(&self, k: usize, i: usize) -> &[usize] {
        &self.by_dim[k][i]
    }

    /// Index of an already-sorted simplex.
    pub fn index_of(&self, simplex: &[usize]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.index.get(k)?.get(simplex).copied()
    }

    /// Index and orientation sign of an arbitrary vertex tuple.
    pub fn oriented_index(&self, tuple: &[usize]) -> Result<(usize, i32)> {
        let (s, sign) = canonicalize(tuple)?;
        let i = self
            .index_of(&s)
            .ok_or_else(|| Error::structural(format!("simplex {tuple:?} is not in the complex")))?;
        Ok((i, sign))
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.index_of(&[u.min(v), u.max(v)])
    }

    /// Neighbor lists of the 1-skeleton, sorted ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n_vertices];
        for e in self.simplices(1) {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        adj
    }
}

/// Formal integer combination of oriented `dim`-simplices, stored sparsely
/// by simplex index without zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    dim: usize,
    coeffs: BTreeMap<usize, BigInt>,
}

impl Chain {
    pub fn zero(dim: usize) -> Self {
        Chain { dim, coeffs: BTreeMap::new() }
    }

    pub fn elementary(dim: usize, index: usize) -> Self {
        let mut c = Chain::zero(dim);
        c.add_term(index, &BigInt::one());
        c
    }

    /// Sums repeated indices and drops zeros.
    pub fn from_terms<I, T>(dim: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (usize, T)>,
        T: Into<BigInt>,
    {
        let mut c = Chain::zero(dim);
        for (i, a) in terms {
            c.add_term(i, &a.into());
        }
        c
    }

    /// Chain from vertex tuples in any order; each coefficient is multiplied
    /// by the sign of the permutation sorting its tuple.
    pub fn from_simplices<I, S, T>(complex: &SimplicialComplex, dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, T)>,
        S: AsRef<[usize]>,
        T: Into<BigInt>,
    {
        let mut c = Chain::zero(dim);
        for (tuple, a) in terms {
            let tuple = tuple.as_ref();
            if tuple.len() != dim + 1 {
                return Err(Error::structural(format!("tuple {tuple:?} is not a {dim}-simplex")));
            }
            let (i, sign) = complex.oriented_index(tuple)?;
            let a: BigInt = a.into();
            c.add_term(i, &(a * sign));
        }
        Ok(c)
    }

    pub fn from_dense(dim: usize, x: &[BigInt]) -> Self {
        Chain {
            dim,
            coeffs: x.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(i, a)| (i, a.clone())).collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); len];
        for (&i, a) in &self.coeffs {
            v[i] = a.clone();
        }
        v
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of simplices with nonzero coefficient.
    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs.iter().map(|(&i, a)| (i, a))
    }

    pub fn coefficient(&self, index: usize) -> BigInt {
        self.coeffs.get(&index).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, index: usize, a: &BigInt) {
        if a.is_zero() {
            return;
        }
        let e = self.coeffs.entry(index).or_default();
        *e += a;
        if e.is_zero() {
            self.coeffs.remove(&index);
        }
    }

    pub fn add_scaled(&mut self, other: &Chain, n: &BigInt) {
        assert_eq!(self.dim, other.dim, "adding chains of different dimension");
        for (i, a) in other.iter() {
            self.add_term(i, &(a * n));
        }
    }

    pub fn scaled(&self, n: &BigInt) -> Chain {
        let mut c = Chain::zero(self.dim);
        c.add_scaled(self, n);
        c
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs.values().map(Signed::abs).max().unwrap_or_default()
    }

    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.values().map(Signed::abs).sum()
    }

    /// Checks every index against the complex.
    pub fn validate(&self, complex: &SimplicialComplex) -> Result<()> {
        let n = complex.count(self.dim);
        match self.coeffs.keys().next_back() {
            Some(&i) if i >= n => Err(Error::structural(format!(
                "{}-simplex index {i} out of range (complex has {n})",
                self.dim
            ))),
            _ => Ok(()),
        }
    }
}

impl Add for &Chain {
    type Output = Chain;

    fn add(self, rhs: &Chain) -> Chain {
        let mut c = self.clone();
        c.add_scaled(rhs, &BigInt::one());
        c
    }
}

impl Sub for &Chain {
    type Output = Chain;

    fn sub(self, rhs: &Chain) -> Chain {
        let mut c = self.clone();
        c.add_scaled(rhs, &-BigInt::one());
        c
    }
}

impl Neg for &Chain {
    type Output = Chain;

    fn neg(self) -> Chain {
        self.scaled(&-BigInt::one())
    }
}

/// `∂[v0..vk] = Σ_j (-1)^j [v0..v̂j..vk]`.
pub fn boundary(complex: &SimplicialComplex, c: &Chain) -> Result<Chain> {
    if c.dim == 0 {
        return Err(Error::domain("boundary of a 0-chain is undefined"));
    }
    c.validate(complex)?;
    let k = c.dim;
    let mut out = Chain::zero(k - 1);
    let mut face = Vec::with_capacity(k);
    for (i, a) in c.iter() {
        let s = complex.simplex(k, i);
        for j in 0..=k {
            face.clear();
            face.extend(s.iter().enumerate().filter(|&(p, _)| p != j).map(|(_, &v)| v));
            let f = complex.index_of(&face).expect("complex is closed under faces");
            if j % 2 == 0 {
                out.add_term(f, a);
            } else {
                out.add_term(f, &-a);
            }
        }
    }
    Ok(out)
}

/// Matrix of `∂_k` with rows indexed by `(k-1)`-simplices and columns by
/// `k`-simplices, both in canonical order.
pub fn boundary_matrix(complex: &SimplicialComplex, k: usize) -> Result<IntMatrix> {
    if k == 0 || k > complex.dimension() {
        return Err(Error::domain(format!(
            "boundary matrix index {k} outside 1..={}",
            complex.dimension()
        )));
    }
    let mut m = IntMatrix::zeros(complex.count(k - 1), complex.count(k));
    let mut face = Vec::with_capacity(k);
    for (col, s) in complex.simplices(k).iter().enumerate() {
        for j in 0..=k {
            face.clear();
            face.extend(s.iter().enumerate().filter(|&(p, _)| p != j).map(|(_, &v)| v));
            let row = complex.index_of(&face).expect("complex is closed under faces");
            m[(row, col)] = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        }
    }
    Ok(m)
}

/// `Σ |a_i| · weights[i]` over the support of `c`.
pub fn mass(weights: &[f64], c: &Chain) -> Result<f64> {
    let mut total = 0.0;
    for (i, a) in c.iter() {
        let w = *weights
            .get(i)
            .ok_or_else(|| Error::structural(format!("no weight for {}-simplex {i}", c.dim)))?;
        if !(w > 0.0) {
            return Err(Error::domain(format!("weight {w} of {}-simplex {i} is not positive", c.dim)));
        }
        total += a.abs().to_f64().unwrap_or(f64::INFINITY) * w;
    }
    Ok(total)
}

pub fn is_cycle(complex: &SimplicialComplex, c: &Chain) -> Result<bool> {
    Ok(boundary(complex, c)?.is_zero())
}
