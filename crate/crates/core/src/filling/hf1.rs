//! Lower estimates of the first homological filling function
//! `HF1(l) = sup_{mass(z) <= l} inf_{∂E = z} mass(E)` from an enumerated
//! cycle family.

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::chains::{mass, Chain, SimplicialComplex};
use crate::error::{Error, Result};
use crate::filling::min_mass::min_mass_fill_with;
use crate::filling::FillSolver;
use crate::tolerance;

/// Largest multiple `n·z` of an enumerated cycle added to the family.
const MAX_MULTIPLE: u32 = 8;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CycleBudget {
    /// Longest simple cycle enumerated, in edges.
    pub max_edges: usize,
    /// Stop after this many simple cycles.
    pub max_cycles: usize,
}

impl Default for CycleBudget {
    fn default() -> Self {
        CycleBudget { max_edges: 8, max_cycles: 5_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Hf1Sample {
    pub l: f64,
    pub hf_lower_estimate: f64,
    /// Family members of mass at most `l`.
    pub cycle_census: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hf1Profile {
    /// Always `"lower"`: every value underestimates the true supremum.
    pub estimate: &'static str,
    pub samples: Vec<Hf1Sample>,
    pub fitted_f1: f64,
    pub fitted_f2: f64,
    pub cycles_enumerated: usize,
    /// True if `max_cycles` cut the enumeration short.
    pub truncated: bool,
    /// Family members dropped because their fill was not certified optimal.
    pub non_optimal_skipped: usize,
}

impl Hf1Profile {
    /// Estimate at `l`, taken from the largest sample abscissa not above it.
    pub fn estimate_at(&self, l: f64) -> f64 {
        self.samples
            .iter()
            .filter(|s| s.l <= l * (1.0 + tolerance()))
            .map(|s| s.hf_lower_estimate)
            .fold(0.0, f64::max)
    }
}

fn components(complex: &SimplicialComplex) -> usize {
    let mut parent: Vec<usize> = (0..complex.n_vertices()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = complex.n_vertices();
    if complex.dimension() >= 1 {
        for e in complex.simplices(1) {
            let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
            if a != b {
                parent[a] = b;
                count -= 1;
            }
        }
    }
    count
}

/// Whether `H1(K; Z) = 0`: every 1-cycle bounds an integral 2-chain.
pub fn h1_is_trivial(complex: &SimplicialComplex) -> Result<bool> {
    let cycle_rank = cycle_rank(complex);
    if complex.dimension() < 2 {
        return Ok(cycle_rank == 0);
    }
    Ok(h1_trivial_with(&FillSolver::new(complex, 1)?, cycle_rank))
}

/// Rank of the cycle space `ker ∂1`.
pub(crate) fn cycle_rank(complex: &SimplicialComplex) -> usize {
    let n1 = if complex.dimension() >= 1 { complex.count(1) } else { 0 };
    n1 - (complex.n_vertices() - components(complex))
}

pub(crate) fn h1_trivial_with(solver: &FillSolver, cycle_rank: usize) -> bool {
    let snf = solver.system().smith();
    snf.rank == cycle_rank && snf.invariant_factors().iter().all(One::is_one)
}

/// Simple cycles of the 1-skeleton by increasing length, each as its
/// vertex sequence starting at its least vertex with `v[1] < v[last]`.
/// Returns the cycles and whether `max_cycles` truncated the list.
pub fn simple_cycles(complex: &SimplicialComplex, budget: CycleBudget) -> (Vec<Vec<usize>>, bool) {
    let adj = complex.adjacency();
    let n = complex.n_vertices();
    let mut out = Vec::new();
    for len in 3..=budget.max_edges {
        for s in 0..n {
            // hop distance back to s inside vertices >= s, for pruning
            let mut dist = vec![usize::MAX; n];
            dist[s] = 0;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if v > s && dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            let mut path = vec![s];
            let mut on_path = vec![false; n];
            on_path[s] = true;
            if extend(&adj, &dist, len, &mut path, &mut on_path, &mut out, budget.max_cycles) {
                return (out, true);
            }
        }
    }
    (out, false)
}

/// Returns true once the cycle cap is reached.
fn extend(
    adj: &[Vec<usize>],
    dist: &[usize],
    len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> bool {
    let s = path[0];
    let u = *path.last().expect("nonempty path");
    if path.len() == len {
        if adj[u].contains(&s) && path[1] < u {
            if out.len() >= cap {
                return true;
            }
            out.push(path.clone());
        }
        return false;
    }
    let remaining = len - path.len();
    for &v in &adj[u] {
        if v <= s || on_path[v] || dist[v] > remaining {
            continue;
        }
        path.push(v);
        on_path[v] = true;
        let stop = extend(adj, dist, len, path, on_path, out, cap);
        on_path[v] = false;
        path.pop();
        if stop {
            return true;
        }
    }
    false
}

fn cycle_chain(complex: &SimplicialComplex, cycle: &[usize]) -> Result<Chain> {
    let steps = cycle.iter().zip(cycle.iter().cycle().skip(1)).map(|(&a, &b)| (vec![a, b], 1i64));
    Chain::from_simplices(complex, 1, steps)
}

/// Least-squares slope (clamped at 0) with the intercept raised until the
/// line lies on or above every sample.
pub fn fit_upper_line(points: &[(f64, f64)]) -> (f64, f64) {
    if points.is_empty() {
        return (0.0, 0.0);
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let f1 = if sxx > 0.0 { (sxy / sxx).max(0.0) } else { 0.0 };
    let mut f2 = points.iter().map(|p| p.1 - f1 * p.0).fold(f64::NEG_INFINITY, f64::max);
    // rounding in f1·l + f2 can land an ulp below a sample
    while points.iter().any(|p| f1 * p.0 + f2 < p.1) {
        f2 = f2.next_up();
    }
    (f1, f2)
}

/// Lower estimate of `HF1` at each `l` in `l_grid` from all simple cycles
/// within `budget` and their multiples up to mass `max(l_grid)`. `edge_w`
/// and `face_w` are the 1- and 2-simplex volumes.
pub fn hf1_profile(
    complex: &SimplicialComplex,
    edge_w: &[f64],
    face_w: &[f64],
    l_grid: &[f64],
    budget: CycleBudget,
) -> Result<Hf1Profile> {
    if l_grid.iter().any(|l| !l.is_finite() || *l < 0.0) {
        return Err(Error::domain("filling-function grid must be finite and nonnegative"));
    }
    let mut grid = l_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let l_cap = grid.last().copied().unwrap_or(0.0) * (1.0 + tolerance());

    let n1 = if complex.dimension() >= 1 { complex.count(1) } else { 0 };
    let cycle_rank = cycle_rank(complex);
    if complex.dimension() < 2 {
        if cycle_rank != 0 {
            return Err(Error::domain("H_1 is nontrivial: the 1-skeleton has cycles and no 2-simplices"));
        }
        return Ok(assemble(&grid, Vec::new(), 0, false, 0));
    }
    let solver = FillSolver::new(complex, 1)?;
    if !h1_trivial_with(&solver, cycle_rank) {
        return Err(Error::domain("H_1 is nontrivial: some 1-cycle bounds no integral 2-chain"));
    }
    if edge_w.len() != n1 {
        return Err(Error::structural(format!("expected {n1} edge weights, got {}", edge_w.len())));
    }

    let (cycles, truncated) = simple_cycles(complex, budget);
    // per cycle: (mass₁, fill mass) of each multiple, and skipped count
    type Family = (Vec<(f64, f64)>, usize);
    let per_cycle: Vec<Result<Family>> = cycles
        .par_iter()
        .map(|cyc| {
            let z = cycle_chain(complex, cyc)?;
            let m1 = mass(edge_w, &z)?;
            let mut rows = Vec::new();
            let mut skipped = 0;
            for n in 1..=MAX_MULTIPLE {
                let mn = m1 * n as f64;
                if mn > l_cap {
                    break;
                }
                match min_mass_fill_with(&solver, face_w, &z.scaled(&BigInt::from(n))) {
                    Ok(f) => rows.push((mn, f.mass)),
                    Err(Error::NonOptimal { .. }) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            Ok((rows, skipped))
        })
        .collect();
    let mut family = Vec::new();
    let mut skipped = 0;
    for r in per_cycle {
        let (rows, s) = r?;
        family.extend(rows);
        skipped += s;
    }
    Ok(assemble(&grid, family, cycles.len(), truncated, skipped))
}

fn assemble(grid: &[f64], family: Vec<(f64, f64)>, enumerated: usize, truncated: bool, skipped: usize) -> Hf1Profile {
    let samples: Vec<Hf1Sample> = grid
        .iter()
        .map(|&l| {
            let cap = l * (1.0 + tolerance());
            let within = family.iter().filter(|(m, _)| *m <= cap);
            let (count, best) = within.fold((0, 0.0f64), |(c, b), (_, f)| (c + 1, b.max(*f)));
            Hf1Sample { l, hf_lower_estimate: best, cycle_census: count }
        })
        .collect();
    let pts: Vec<(f64, f64)> = samples.iter().map(|s| (s.l, s.hf_lower_estimate)).collect();
    let (fitted_f1, fitted_f2) = fit_upper_line(&pts);
    Hf1Profile {
        estimate: "lower",
        samples,
        fitted_f1,
        fitted_f2,
        cycles_enumerated: enumerated,
        truncated,
        non_optimal_skipped: skipped,
    }
}

/// `(n+1)!/2 · hf1_at_2d`; the factor is 60 for `n = 4`.
pub fn amin_upper_bound(hf1_at_2d: f64, n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("dimension must be at least 2, got {n}")));
    }
    if !(hf1_at_2d >= 0.0) {
        return Err(Error::domain(format!("filling value must be nonnegative, got {hf1_at_2d}")));
    }
    let factor: f64 = (2..=u64::from(n) + 1).map(|i| i as f64).product::<f64>() / 2.0;
    Ok(factor * hf1_at_2d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetra() -> SimplicialComplex {
        SimplicialComplex::new(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap()
    }

    #[test]
    fn tetra_profile_unit_weights() {
        let k = tetra();
        let p = hf1_profile(&k, &[1.0; 6], &[1.0; 4], &[0.0, 2.0, 2.999, 3.0, 4.0], CycleBudget::default())
            .unwrap();
        let est: Vec<f64> = p.samples.iter().map(|s| s.hf_lower_estimate).collect();
        assert_eq!(est, vec![0.0, 0.0, 0.0, 1.0, 2.0]);
        // four triangles at l = 3; plus the three 4-cycles at l = 4
        assert_eq!(p.samples[3].cycle_census, 4);
        assert_eq!(p.samples[4].cycle_census, 7);
        assert_eq!(p.cycles_enumerated, 7);
        assert!(!p.truncated);
        assert!(p.fitted_f1 >= 0.0);
        for s in &p.samples {
            assert!(s.hf_lower_estimate <= p.fitted_f1 * s.l + p.fitted_f2 + 1e-12);
        }
    }

    #[test]
    fn rejects_nontrivial_h1() {
        let annulus = SimplicialComplex::new(
            6,
            [[0, 1, 3], [1, 3, 4], [1, 2, 4], [2, 4, 5], [2, 0, 5], [0, 5, 3]],
        )
        .unwrap();
        assert!(!h1_is_trivial(&annulus).unwrap());
        let w1 = vec![1.0; annulus.count(1)];
        let w2 = vec![1.0; annulus.count(2)];
        let err = hf1_profile(&annulus, &w1, &w2, &[1.0], CycleBudget::default()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(h1_is_trivial(&tetra()).unwrap());
    }

    #[test]
    fn cycles_canonical() {
        let (c, t) = simple_cycles(&tetra(), CycleBudget { max_edges: 3, max_cycles: 100 });
        assert!(!t);
        assert_eq!(c, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]);
        let (c, t) = simple_cycles(&tetra(), CycleBudget { max_edges: 4, max_cycles: 5 });
        assert!(t);
        assert_eq!(c.len(), 5);
    }

    #[test]
    fn amin_factor() {
        assert_eq!(amin_upper_bound(1.0, 4).unwrap(), 60.0);
        assert_eq!(amin_upper_bound(0.0, 7).unwrap(), 0.0);
        assert_eq!(amin_upper_bound(2.5, 2).unwrap(), 7.5);
        assert!(amin_upper_bound(1.0, 1).is_err());
    }

    #[test]
    fn fit_dominates() {
        let pts = [(0.0, 0.0), (1.0, 2.0), (2.0, 2.5), (3.0, 5.0)];
        let (f1, f2) = fit_upper_line(&pts);
        assert!(f1 > 0.0);
        assert!(pts.iter().all(|&(x, y)| y <= f1 * x + f2));
        assert_eq!(fit_upper_line(&[(1.0, 3.0)]), (0.0, 3.0));
    }
}
