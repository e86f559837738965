//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//! Runs as a plain binary (`harness = false`) so the lines always print.

use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;
use std::time::{Duration, Instant};

use fillbound::chains::{boundary, boundary_matrix, mass, Chain, SimplicialComplex};
use fillbound::filling::{fill_boundary, min_mass_fill};
use fillbound::geom::{ball_cover, cone_fill, neck_contract, pipeline_fill, MetricComplex};
use fillbound::intlin::{certify, IntMatrix, ENUMERATION_BUDGET};
use fillbound_cli::commands::{self, BfrtArgs, Hf1Args};
use fillbound_cli::generators::{generate, Shape};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn space(shape: Shape, scale: f64) -> MetricComplex {
    generate(shape, scale).unwrap().to_space().unwrap()
}

/// Boundary by direct traversal of each simplex's faces.
fn oracle_boundary(k: &SimplicialComplex, c: &Chain) -> Chain {
    let mut out = Chain::zero(c.dim().saturating_sub(1));
    if c.dim() == 0 {
        return out;
    }
    for (i, a) in c.iter() {
        let s = k.simplex(c.dim(), i);
        for j in 0..s.len() {
            let face: Vec<usize> = s.iter().enumerate().filter(|&(p, _)| p != j).map(|(_, &v)| v).collect();
            let idx = k.index_of(&face).expect("closed complex");
            let t = if j % 2 == 0 { a.clone() } else { -a.clone() };
            out.add_term(idx, &t);
        }
    }
    out
}

fn random_complex(rng: &mut ChaCha8Rng, n: usize, max_size: usize, count: usize) -> SimplicialComplex {
    let simplices: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=max_size.min(n));
            let mut vs: Vec<usize> = (0..n).collect();
            vs.shuffle(rng);
            vs.truncate(size);
            vs
        })
        .collect();
    SimplicialComplex::new(n, simplices).unwrap()
}

fn random_chain(rng: &mut ChaCha8Rng, k: &SimplicialComplex, dim: usize, amp: i64) -> Chain {
    Chain::from_terms(dim, (0..k.count(dim)).map(|i| (i, rng.gen_range(-amp..=amp))))
}

// ---------------------------------------------------------------- 1

fn chain_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut violations = 0;
    let mut checked = 0;
    for _ in 0..500 {
        let n = rng.gen_range(2..=12);
        let count = rng.gen_range(1..=10);
        let k = random_complex(&mut rng, n, 4, count);
        for dim in 2..=k.dimension() {
            let c = random_chain(&mut rng, &k, dim, 5);
            let d = boundary(&k, &c).unwrap();
            if d != oracle_boundary(&k, &c) || !boundary(&k, &d).unwrap().is_zero() {
                violations += 1;
            }
            let prod = boundary_matrix(&k, dim - 1).unwrap().mul(&boundary_matrix(&k, dim).unwrap()).unwrap();
            if !prod.is_zero() {
                violations += 1;
            }
            checked += 1;
        }
    }
    if violations == 0 {
        Ok(format!("500 complexes, {checked} chain/matrix checks, 0 violations"))
    } else {
        Err(format!("{violations} violations"))
    }
}

// ---------------------------------------------------------------- 2

/// Integer determinant by cofactor expansion.
fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect()).collect();
        let t = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn max_minor(rows: &[Vec<BigInt>], size: usize) -> BigInt {
    let cols = rows[0].len();
    let mut best = BigInt::zero();
    for r in subsets(rows.len(), size) {
        for c in subsets(cols, size) {
            let sub: Vec<Vec<BigInt>> = r.iter().map(|&i| c.iter().map(|&j| rows[i][j].clone()).collect()).collect();
            best = best.max(det(&sub).abs());
        }
    }
    best
}

fn rank_by_minors(rows: &[Vec<BigInt>]) -> usize {
    let max = rows.len().min(rows[0].len());
    (1..=max).rev().find(|&r| !max_minor(rows, r).is_zero()).unwrap_or(0)
}

/// Some `x` with `max|x_j| ≤ r` and `A·x = b`, by exhaustive box search.
fn box_has_solution(a: &[Vec<i64>], b: &[i64], r: i64) -> bool {
    let n = a[0].len();
    let mut x = vec![-r; n];
    loop {
        if a.iter().zip(b).all(|(row, &bi)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<i64>() == bi) {
            return true;
        }
        let mut j = 0;
        while j < n && x[j] == r {
            x[j] = -r;
            j += 1;
        }
        if j == n {
            return false;
        }
        x[j] += 1;
    }
}

fn bfrt() -> Outcome {
    let args = BfrtArgs { trials: 500, m_max: 3, n_max: 8, ma_max: 3, seed: 2024 };
    let summary = commands::bfrt_check(args).map_err(|e| e.to_string())?;
    if summary.violations != 0 || summary.skipped_capacity != 0 || summary.evaluated != 500 {
        return Err(format!(
            "{} violations, {} skipped, {} evaluated",
            summary.violations, summary.skipped_capacity, summary.evaluated
        ));
    }
    // independent re-verification of every instance
    let mut minimality_checked = 0;
    for t in 0..args.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        rng.set_stream(t as u64);
        let (a, b) = commands::random_system(&mut rng, args.m_max, args.n_max, args.ma_max);
        let rows: Vec<Vec<BigInt>> = (0..a.rows()).map(|i| a.row(i).to_vec()).collect();
        let aug: Vec<Vec<BigInt>> = rows.iter().zip(&b).map(|(r, bi)| r.iter().cloned().chain([bi.clone()]).collect()).collect();
        let m = rank_by_minors(&rows);
        let y = max_minor(&aug, m.max(1));
        let y = if m == 0 { aug.iter().flatten().map(Signed::abs).max().unwrap() } else { y };
        let ma = rows.iter().flatten().map(Signed::abs).max().unwrap();
        let mb = b.iter().map(Signed::abs).max().unwrap();
        let top = ma.clone().max(mb);
        // Y ≤ ⌈X⌉  ⟺  (Y−1)² < X²,  X² = m^m · M_A^{2(m−1)} · top²
        let x2 = if m == 0 {
            &top * &top
        } else {
            BigInt::from(m).pow(m as u32) * ma.pow(2 * (m as u32 - 1)) * &top * &top
        };
        let ym1 = &y - 1;
        if y > BigInt::zero() && &ym1 * &ym1 >= x2 {
            return Err(format!("trial {t}: Y = {y} exceeds the bound"));
        }
        let rec = &summary.records[t];
        if m > 0 && rec.y.as_deref() != Some(y.to_string().as_str()) {
            return Err(format!("trial {t}: minor maximum {:?} differs from oracle {y}", rec.y));
        }
        let cert = certify(&a, &b, ENUMERATION_BUDGET).map_err(|e| e.to_string())?;
        let x = cert.solution.ok_or(format!("trial {t}: no solution"))?;
        if a.mul_vec(&x).unwrap() != b {
            return Err(format!("trial {t}: returned x does not solve the system"));
        }
        let s = x.iter().map(Signed::abs).max().unwrap_or_default();
        if s > y {
            return Err(format!("trial {t}: max|x| = {s} > Y = {y}"));
        }
        let s = s.to_i64().unwrap();
        let n = a.cols() as u32;
        if s > 0 && (2 * s - 1).pow(n) <= 200_000 {
            let ai: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect()).collect();
            let bi: Vec<i64> = b.iter().map(|v| v.to_i64().unwrap()).collect();
            if box_has_solution(&ai, &bi, s - 1) {
                return Err(format!("trial {t}: a solution with max-norm below {s} exists"));
            }
            minimality_checked += 1;
        }
    }
    let tight = summary.tightness_y_over_bound.max.unwrap_or(0.0);
    Ok(format!(
        "500 systems, 0 violations, {minimality_checked} minimality box checks, max Y/bound = {tight:.3}"
    ))
}

// ---------------------------------------------------------------- 3

fn leibniz(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0i128;
    fn heap(k: usize, perm: &mut Vec<usize>, m: &[Vec<i128>], total: &mut i128) {
        if k <= 1 {
            let mut inv = 0;
            for i in 0..perm.len() {
                for j in i + 1..perm.len() {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            let p: i128 = (0..perm.len()).map(|i| m[i][perm[i]]).product();
            *total += if inv % 2 == 0 { p } else { -p };
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, m, total);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            perm.swap(j, k - 1);
        }
    }
    heap(n, &mut perm, m, &mut total);
    total
}

fn hadamard() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=5);
        let amp = rng.gen_range(1..=20);
        let m: Vec<Vec<i128>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-amp..=amp)).collect()).collect();
        let d = leibniz(&m);
        let lib = IntMatrix::from_rows(&m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect::<Vec<_>>())
            .unwrap()
            .determinant()
            .unwrap();
        let cols: i128 = (0..n).map(|j| (0..n).map(|i| m[i][j] * m[i][j]).sum::<i128>()).product();
        if lib != BigInt::from(d) || d * d > cols {
            violations += 1;
        }
    }
    if violations == 0 {
        Ok("1000 matrices, |det|² ≤ Π‖col‖² exactly, 0 violations".into())
    } else {
        Err(format!("{violations} violations"))
    }
}

// ---------------------------------------------------------------- 4

/// Smallest `r` admitting an integer 2-chain with `∂x = c` and max-norm
/// `r`, by backtracking over the triangle coefficients.
fn oracle_min_max_norm(k: &SimplicialComplex, c: &Chain, limit: i64) -> Option<i64> {
    let tris = k.simplices(2);
    let edges = k.count(1);
    // incidence with signs, and number of triangles on each edge
    let inc: Vec<Vec<(usize, i64)>> = tris
        .iter()
        .map(|t| {
            vec![
                (k.index_of(&[t[1], t[2]]).unwrap(), 1),
                (k.index_of(&[t[0], t[2]]).unwrap(), -1),
                (k.index_of(&[t[0], t[1]]).unwrap(), 1),
            ]
        })
        .collect();
    let target: Vec<i64> = (0..edges).map(|e| c.coefficient(e).to_i64().unwrap()).collect();
    let mut on_edge = vec![0i64; edges];
    for row in &inc {
        for &(e, _) in row {
            on_edge[e] += 1;
        }
    }
    if (0..edges).any(|e| on_edge[e] == 0 && target[e] != 0) {
        return None;
    }
    fn go(t: usize, r: i64, inc: &[Vec<(usize, i64)>], res: &mut [i64], rem: &mut [i64]) -> bool {
        if t == inc.len() {
            return res.iter().all(|&x| x == 0);
        }
        for x in -r..=r {
            let mut ok = true;
            for &(e, s) in &inc[t] {
                res[e] -= s * x;
                rem[e] -= 1;
                if res[e].abs() > r * rem[e] {
                    ok = false;
                }
            }
            if ok && go(t + 1, r, inc, res, rem) {
                return true;
            }
            for &(e, s) in &inc[t] {
                res[e] += s * x;
                rem[e] += 1;
            }
        }
        false
    }
    (0..=limit).find(|&r| go(0, r, &inc, &mut target.clone(), &mut on_edge.clone()))
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn combinatorial_filling() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut exhaustive = 0;
    let mut worst_ratio = 0f64;
    for trial in 0..200 {
        let n = rng.gen_range(4..=10);
        let t = rng.gen_range(2..=binom(n as u64, 3).min(14) as usize);
        let mut all: Vec<Vec<usize>> = (0..n)
            .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| vec![a, b, c])))
            .collect();
        all.shuffle(&mut rng);
        all.truncate(t);
        let k = SimplicialComplex::new(n, &all).unwrap();
        let mut c1 = Chain::zero(1);
        while c1.is_zero() {
            c1 = boundary(&k, &random_chain(&mut rng, &k, 2, 3)).unwrap();
        }
        let (x, _cert) = fill_boundary(&k, &c1).map_err(|e| format!("trial {trial}: {e}"))?;
        if oracle_boundary(&k, &x) != c1 {
            return Err(format!("trial {trial}: boundary mismatch"));
        }
        // out ≤ C^{C/2} · in  ⟺  out² ≤ C^C · in²
        let cn = binom(n as u64, 2) as u32;
        let (out, inp) = (x.max_abs_coeff(), c1.max_abs_coeff());
        if &out * &out > BigInt::from(cn).pow(cn) * &inp * &inp {
            return Err(format!("trial {trial}: coefficient {out} exceeds the bound"));
        }
        if n <= 8 {
            let got = out.to_i64().unwrap();
            let best = oracle_min_max_norm(&k, &c1, got).ok_or(format!("trial {trial}: oracle found no fill"))?;
            if got > 2 * best {
                return Err(format!("trial {trial}: max-norm {got} vs optimum {best}"));
            }
            worst_ratio = worst_ratio.max(got as f64 / best as f64);
            exhaustive += 1;
        }
    }
    Ok(format!("200 boundaries exact and within bound; {exhaustive} exhaustive checks, worst ratio {worst_ratio:.2}"))
}

// ---------------------------------------------------------------- 5

fn min_mass_oracle() -> Outcome {
    let oct = space(Shape::Octahedron, 1.0);
    let eq = Chain::from_simplices(oct.complex(), 1, [([0, 2], 1), ([2, 1], 1), ([1, 3], 1), ([3, 0], 1)]).unwrap();
    let f = min_mass_fill(oct.complex(), oct.areas(), &eq).map_err(|e| e.to_string())?;
    let want = 2.0 * 3f64.sqrt();
    if (f.mass - want).abs() > 1e-9 || f.chain.support_len() != 4 {
        return Err(format!("octahedron equator mass {} (want {want})", f.mass));
    }
    let tet = space(Shape::TetraBoundary, 1.0);
    let tri = Chain::from_simplices(tet.complex(), 1, [([0, 1], 1), ([1, 2], 1), ([2, 0], 1)]).unwrap();
    let g = min_mass_fill(tet.complex(), tet.areas(), &tri).map_err(|e| e.to_string())?;
    let face = 3f64.sqrt() / 4.0;
    if (g.mass - face).abs() > 1e-9 || g.chain.support_len() != 1 {
        return Err(format!("tetra triangle mass {} (want {face})", g.mass));
    }
    Ok(format!("equator {:.12}, tetra face {:.12}", f.mass, g.mass))
}

// ---------------------------------------------------------------- 6

/// Random closed walk: a random walk closed up by a shortest hop path.
fn random_walk_cycle(rng: &mut ChaCha8Rng, m: &MetricComplex) -> Chain {
    let n = m.n_vertices();
    let start = rng.gen_range(0..n);
    let mut walk = vec![start];
    for _ in 0..rng.gen_range(2..=14) {
        let nb = m.neighbors(*walk.last().unwrap());
        walk.push(nb[rng.gen_range(0..nb.len())].0);
    }
    let end = *walk.last().unwrap();
    let mut pred = vec![usize::MAX; n];
    pred[end] = end;
    let mut q = VecDeque::from([end]);
    while let Some(u) = q.pop_front() {
        for &(w, _) in m.neighbors(u) {
            if pred[w] == usize::MAX {
                pred[w] = u;
                q.push_back(w);
            }
        }
    }
    let mut back = vec![start];
    while *back.last().unwrap() != end {
        back.push(pred[*back.last().unwrap()]);
    }
    back.reverse();
    walk.extend(back.into_iter().skip(1));
    Chain::from_simplices(m.complex(), 1, walk.windows(2).map(|w| (vec![w[0], w[1]], 1))).unwrap()
}

fn pipeline_spaces() -> Vec<(&'static str, MetricComplex, f64)> {
    vec![
        ("octahedron", space(Shape::Octahedron, 1.0), 0.8),
        ("icosphere(1)", space(Shape::Icosphere { level: 1 }, 1.0), 0.8),
        ("icosphere(2)", space(Shape::Icosphere { level: 2 }, 1.0), 0.8),
        ("capsule", space(Shape::Capsule { n: 6, levels: 5 }, 1.0), 0.8),
    ]
}

fn pipeline_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut lines = Vec::new();
    for (name, m, radius) in pipeline_spaces() {
        let cover = ball_cover(&m, radius).map_err(|e| e.to_string())?;
        let mut nonzero = 0;
        for i in 0..50 {
            let c = random_walk_cycle(&mut rng, &m);
            let (e, report) = pipeline_fill(&m, &cover, &c).map_err(|e| format!("{name} cycle {i}: {e}"))?;
            if boundary(m.complex(), &e).unwrap() != c || !report.boundary_verified {
                return Err(format!("{name} cycle {i}: boundary mismatch"));
            }
            nonzero += usize::from(!c.is_zero());
        }
        lines.push(format!("{name} 50 ({nonzero} nonzero)"));
    }
    Ok(format!("∂E = C exactly: {}", lines.join(", ")))
}

// ---------------------------------------------------------------- 7

fn cone_bound() -> Outcome {
    let (n, rings) = (12, 3);
    let mut details = Vec::new();
    for r in [1.0, 2.0] {
        let m = space(Shape::Disk { n, rings }, r);
        let ring0 = 1 + (rings - 1) * n;
        let circle =
            Chain::from_simplices(m.complex(), 1, (0..n).map(|i| (vec![ring0 + i, ring0 + (i + 1) % n], 1))).unwrap();
        let perimeter = 2.0 * n as f64 * r * (PI / n as f64).sin();
        let mass1 = mass(m.edge_lengths(), &circle).unwrap();
        if (mass1 - perimeter).abs() > 1e-9 * perimeter {
            return Err(format!("r = {r}: circle mass {mass1} vs {perimeter}"));
        }
        let cone = cone_fill(&m, &circle, 0).map_err(|e| e.to_string())?;
        if boundary(m.complex(), &cone.chain).unwrap() != circle {
            return Err(format!("r = {r}: cone boundary mismatch"));
        }
        let mass2 = mass(m.areas(), &cone.chain).unwrap();
        if mass2 > 1.05 * r * mass1 {
            return Err(format!("r = {r}: mass₂ {mass2} > 1.05·r·mass₁ = {}", 1.05 * r * mass1));
        }
        details.push(format!("r={r}: {:.3} ≤ {:.3}", mass2, 1.05 * r * mass1));
    }
    Ok(details.join(", "))
}

// ---------------------------------------------------------------- 8

fn neck_contraction() -> Outcome {
    let m = space(Shape::Prism { n: 6, levels: 2 }, 1.0);
    let top = Chain::from_simplices(m.complex(), 1, (0..6).map(|i| (vec![6 + i, 6 + (i + 1) % 6], 1))).unwrap();
    let rho = m.radial().unwrap();
    let level = rho.iter().copied().fold(f64::INFINITY, f64::min);
    let sweep = neck_contract(&m, &top, level).map_err(|e| e.to_string())?;
    let expect = &top - &sweep.pushed;
    if boundary(m.complex(), &sweep.sweep).unwrap() != expect {
        return Err("∂E ≠ c − C′".into());
    }
    let span = (6..12).map(|v| rho[v]).fold(f64::NEG_INFINITY, f64::max) - level;
    let mass1 = mass(m.edge_lengths(), &top).unwrap();
    let mass2 = mass(m.areas(), &sweep.sweep).unwrap();
    if mass2 > 1.05 * span * mass1 {
        return Err(format!("mass₂ {mass2} > 1.05·{span}·{mass1}"));
    }
    Ok(format!("∂E = c − C′ exactly, mass₂ {mass2:.6} ≤ {:.6}", 1.05 * span * mass1))
}

// ---------------------------------------------------------------- 9

fn floyd_diameter(m: &MetricComplex) -> f64 {
    let n = m.n_vertices();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (u, row) in d.iter_mut().enumerate() {
        row[u] = 0.0;
        for &(w, e) in m.neighbors(u) {
            row[w] = row[w].min(m.edge_lengths()[e]);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d.iter().flatten().copied().fold(0.0, f64::max)
}

fn hf1_linearity() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut details = Vec::new();
    for level in [1, 2] {
        let file = generate(Shape::Icosphere { level }, 1.0).unwrap();
        let path = dir.path().join(format!("ico{level}.json"));
        std::fs::write(&path, file.to_canonical()).map_err(|e| e.to_string())?;
        let report = commands::hf1(&Hf1Args {
            space: path,
            l_max: 2.0 * PI * 1.1,
            steps: 16,
            budget: Default::default(),
            unit_weights: false,
        })
        .map_err(|e| e.to_string())?;
        let p = &report.profile;
        let (f1, f2) = (p.fitted_f1, p.fitted_f2);
        if let Some(s) = p.samples.iter().find(|s| s.hf_lower_estimate > f1 * s.l + f2) {
            return Err(format!("icosphere({level}): sample at l = {} above the fit", s.l));
        }
        if p.samples.windows(2).any(|w| w[1].hf_lower_estimate < w[0].hf_lower_estimate) {
            return Err(format!("icosphere({level}): profile not monotone"));
        }
        if f1 > 3.0 {
            return Err(format!("icosphere({level}): f1 = {f1} > 3"));
        }
        let diam = floyd_diameter(&file.to_space().unwrap());
        if (diam - report.diameter).abs() > 1e-12 * diam {
            return Err(format!("icosphere({level}): diameter {} vs oracle {diam}", report.diameter));
        }
        if report.amin_upper_bound != 60.0 * report.hf_at_l_amin || report.l_amin != 2.0 * report.diameter {
            return Err(format!("icosphere({level}): amin {} ≠ 60·{}", report.amin_upper_bound, report.hf_at_l_amin));
        }
        details.push(format!("ico({level}) f1={f1:.3} f2={f2:.3} amin={:.3}", report.amin_upper_bound));
    }
    Ok(details.join(", "))
}

// ---------------------------------------------------------------- 10

fn rel_close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn scale_equivariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let spaces = [
        ("octahedron", space(Shape::Octahedron, 1.0)),
        ("icosphere(1)", space(Shape::Icosphere { level: 1 }, 1.0)),
        ("capsule", space(Shape::Capsule { n: 6, levels: 5 }, 1.0)),
    ];
    let mut checks = 0;
    for (name, m) in &spaces {
        let cover = ball_cover(m, 0.8).map_err(|e| e.to_string())?;
        let cycles: Vec<Chain> = (0..5).map(|_| random_walk_cycle(&mut rng, m)).collect();
        let base: Vec<_> = cycles.iter().map(|c| pipeline_fill(m, &cover, c).unwrap()).collect();
        for t in [0.5, 2.0] {
            let mt = m.scaled(t).map_err(|e| e.to_string())?;
            for (a, b) in m.edge_lengths().iter().zip(mt.edge_lengths()) {
                if !rel_close(a * t, *b) {
                    return Err(format!("{name}: edge length does not scale"));
                }
            }
            for (a, b) in m.areas().iter().zip(mt.areas()) {
                if !rel_close(a * t * t, *b) {
                    return Err(format!("{name}: area does not scale"));
                }
            }
            let ct = ball_cover(&mt, 0.8 * t).map_err(|e| e.to_string())?;
            for (c, (e, r)) in cycles.iter().zip(&base) {
                let (et, rt) = pipeline_fill(&mt, &ct, c).map_err(|e| format!("{name} t={t}: {e}"))?;
                if &et != e {
                    return Err(format!("{name} t={t}: filling chain changed"));
                }
                if !rel_close(r.input_mass1 * t, rt.input_mass1) || !rel_close(r.mass_total * t * t, rt.mass_total) {
                    return Err(format!("{name} t={t}: masses do not scale"));
                }
                checks += 1;
            }
            let c = &cycles[0];
            if !c.is_zero() {
                let (f, ft) = (min_mass_fill(m.complex(), m.areas(), c), min_mass_fill(mt.complex(), mt.areas(), c));
                let (f, ft) = (f.map_err(|e| e.to_string())?, ft.map_err(|e| e.to_string())?);
                if f.chain != ft.chain || !rel_close(f.mass * t * t, ft.mass) {
                    return Err(format!("{name} t={t}: minimal fill changed"));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} fills unchanged; mass₁ ×t, mass₂ ×t² within 1e-9"))
}

// ----------------------------------------------------------------

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: Vec<Criterion> = vec![
        (1, "chain algebra", Duration::from_secs(5), chain_algebra),
        (2, "small-solution certification", Duration::from_secs(60), bfrt),
        (3, "Hadamard inequality", Duration::from_secs(2), hadamard),
        (4, "combinatorial filling", Duration::from_secs(120), combinatorial_filling),
        (5, "min-mass oracle", Duration::from_secs(1), min_mass_oracle),
        (6, "pipeline exactness", Duration::from_secs(120), pipeline_exactness),
        (7, "cone bound", Duration::from_secs(5), cone_bound),
        (8, "neck contraction", Duration::from_secs(1), neck_contraction),
        (9, "filling-function linearity", Duration::from_secs(300), hf1_linearity),
        (10, "scale equivariance", Duration::from_secs(10), scale_equivariance),
    ];
    let mut failed = BTreeMap::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        println!(
            "criterion {id:>2} {:<30} {} ({:.2} s / {} s) {detail}",
            name,
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
        if !ok {
            failed.insert(id, name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {:?}", failed.keys().collect::<Vec<_>>());
        std::process::exit(1);
    }
}
