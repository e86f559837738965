//! Command implementations. Each returns the text it would emit so the
//! binary and the tests share one code path.

use std::collections::VecDeque;
use std::path::{Path, PathBuf};

use fillbound::filling::{amin_upper_bound, fit_upper_line, hf1_profile, CycleBudget, Hf1Profile};
use fillbound::geom::{ball_cover, pipeline_fill_with, MetricComplex, PipelineOptions};
use fillbound::intlin::{certify, IntMatrix, ENUMERATION_BUDGET};
use fillbound::Error;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::formats::{chain_to_json, read_chain, write_atomic, SpaceFile};
use crate::generators::{generate, Shape};
use crate::{exit, CliError, CliResult};

/// Worker pool capped by `FILLBOUND_THREADS` when set.
pub fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("FILLBOUND_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("FILLBOUND_THREADS must be a positive integer, got {v:?}")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn pretty(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub fn error_json(e: &CliError) -> Value {
    json!({ "error": { "kind": e.kind_label(), "message": e.to_string() } })
}

pub fn gen(shape: Shape, scale: f64) -> CliResult<String> {
    Ok(generate(shape, scale)?.to_canonical())
}

pub fn load_space(path: &Path) -> CliResult<MetricComplex> {
    Ok(SpaceFile::read(path)?.to_space()?)
}

#[derive(Clone, Debug)]
pub struct FillArgs {
    pub space: PathBuf,
    pub cycle: PathBuf,
    pub radius: f64,
    pub chain_out: Option<PathBuf>,
    pub timing: bool,
}

/// Report text and exit code. Failures still produce a report, carrying
/// the error under `"error"`.
pub fn fill(args: &FillArgs) -> (String, i32) {
    match fill_inner(args) {
        Ok(v) => (pretty(&v), exit::OK),
        Err(e) => (pretty(&error_json(&e)), e.exit_code()),
    }
}

fn fill_inner(args: &FillArgs) -> CliResult<Value> {
    let space = load_space(&args.space)?;
    let c = read_chain(&args.cycle, space.complex())?;
    let cover = ball_cover(&space, args.radius)?;
    let (e, report) = pipeline_fill_with(&space, &cover, &c, PipelineOptions { timing: args.timing })?;
    if let Some(out) = &args.chain_out {
        write_atomic(out, &chain_to_json(&e, space.complex()))?;
    }
    let mut v = serde_json::to_value(&report).expect("report serializes");
    v["cover"] = json!({
        "radius": cover.radius,
        "sets": cover.len(),
        "warnings": cover.warnings,
    });
    v["fill_support"] = json!(e.support_len());
    v["fill_max_coeff"] = json!(e.max_abs_coeff().to_string());
    Ok(v)
}

#[derive(Clone, Debug)]
pub struct Hf1Args {
    pub space: PathBuf,
    pub l_max: f64,
    pub steps: usize,
    pub budget: CycleBudget,
    /// Unit edge lengths and face areas instead of the geometric ones.
    pub unit_weights: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Hf1Report {
    pub profile: Hf1Profile,
    pub weights: &'static str,
    pub diameter: f64,
    /// Twice the diameter, where the area bound is evaluated.
    pub l_amin: f64,
    pub hf_at_l_amin: f64,
    pub amin_upper_bound: f64,
}

impl Hf1Report {
    /// Plot-ready columns `l, hf_estimate, fit`.
    pub fn csv(&self) -> String {
        let mut out = String::from("l,hf_estimate,fit\n");
        let (f1, f2) = (self.profile.fitted_f1, self.profile.fitted_f2);
        for s in &self.profile.samples {
            out.push_str(&format!("{},{},{}\n", s.l, s.hf_lower_estimate, f1 * s.l + f2));
        }
        out
    }
}

/// Hop-count diameter, the metric diameter under unit edge weights.
fn hop_diameter(space: &MetricComplex) -> f64 {
    let n = space.n_vertices();
    let mut best = 0usize;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &(w, _) in space.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    best = best.max(dist[w]);
                    queue.push_back(w);
                }
            }
        }
    }
    best as f64
}

pub fn hf1(args: &Hf1Args) -> CliResult<Hf1Report> {
    if !(args.l_max.is_finite() && args.l_max >= 0.0) {
        return Err(CliError::Usage(format!("--l-max must be finite and nonnegative, got {}", args.l_max)));
    }
    let space = load_space(&args.space)?;
    let complex = space.complex();
    let (edge_w, face_w, diameter) = if args.unit_weights {
        (vec![1.0; complex.count(1)], vec![1.0; complex.count(2)], hop_diameter(&space))
    } else {
        (space.edge_lengths().to_vec(), space.areas().to_vec(), space.graph_diameter())
    };
    let grid: Vec<f64> = if args.l_max == 0.0 || args.steps == 0 {
        vec![0.0]
    } else {
        (0..=args.steps).map(|i| args.l_max * i as f64 / args.steps as f64).collect()
    };
    let l_amin = 2.0 * diameter;
    let mut full = grid.clone();
    full.push(l_amin);
    let mut profile = hf1_profile(complex, &edge_w, &face_w, &full, args.budget)?;
    let hf_at_l_amin = profile.estimate_at(l_amin);
    let amin = amin_upper_bound(hf_at_l_amin, 4)?;
    // rows and fit cover the requested grid only
    profile.samples.retain(|s| grid.contains(&s.l));
    let points: Vec<(f64, f64)> = profile.samples.iter().map(|s| (s.l, s.hf_lower_estimate)).collect();
    (profile.fitted_f1, profile.fitted_f2) = fit_upper_line(&points);
    Ok(Hf1Report {
        profile,
        weights: if args.unit_weights { "unit" } else { "geometric" },
        diameter,
        l_amin,
        hf_at_l_amin,
        amin_upper_bound: amin,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct BfrtArgs {
    pub trials: usize,
    pub m_max: usize,
    pub n_max: usize,
    pub ma_max: u64,
    pub seed: u64,
}

pub const BFRT_M_LIMIT: usize = 6;
pub const BFRT_N_LIMIT: usize = 12;
pub const BFRT_MA_LIMIT: u64 = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct BfrtRecord {
    pub trial: usize,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub max_a: String,
    pub max_b: String,
    /// Max-norm of the smallest solution found.
    pub solution_max: Option<String>,
    /// Largest maximal minor of the augmented matrix.
    pub y: Option<String>,
    pub bound_ceil: String,
    pub hadamard_bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct RatioStats {
    pub count: usize,
    pub min: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<f64>,
}

impl RatioStats {
    fn of(xs: impl Iterator<Item = f64>) -> Self {
        let xs: Vec<f64> = xs.collect();
        if xs.is_empty() {
            return RatioStats::default();
        }
        RatioStats {
            count: xs.len(),
            min: xs.iter().copied().reduce(f64::min),
            mean: Some(xs.iter().sum::<f64>() / xs.len() as f64),
            max: xs.iter().copied().reduce(f64::max),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BfrtSummary {
    pub trials: usize,
    pub seed: u64,
    pub m_max: usize,
    pub n_max: usize,
    pub ma_max: u64,
    pub evaluated: usize,
    pub skipped_capacity: usize,
    pub violations: usize,
    /// `solution_max / Y`.
    pub tightness_solution_over_y: RatioStats,
    /// `Y / ⌈bound⌉`.
    pub tightness_y_over_bound: RatioStats,
    pub records: Vec<BfrtRecord>,
}

/// One random solvable system `A·x = b`; `b` is the image of a random
/// `x` so solvability holds by construction.
pub fn random_system(rng: &mut impl Rng, m_max: usize, n_max: usize, ma_max: u64) -> (IntMatrix, Vec<BigInt>) {
    let m = rng.gen_range(1..=m_max);
    let n = rng.gen_range(1..=n_max);
    let ma = rng.gen_range(1..=ma_max) as i64;
    let mut data: Vec<i64> = (0..m * n).map(|_| rng.gen_range(-ma..=ma)).collect();
    if data.iter().all(|&x| x == 0) {
        let k = rng.gen_range(0..data.len());
        data[k] = if rng.gen() { ma } else { -ma };
    }
    let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-ma..=ma)).collect();
    let b = (0..m).map(|i| BigInt::from((0..n).map(|j| data[i * n + j] * x[j]).sum::<i64>())).collect();
    let a = IntMatrix::from_vec(m, n, data.into_iter().map(BigInt::from).collect()).expect("shape matches");
    (a, b)
}

/// Certifies one instance; `None` when it had to be skipped for capacity.
pub fn check_instance(trial: usize, a: &IntMatrix, b: &[BigInt]) -> fillbound::Result<Option<BfrtRecord>> {
    let cert = match certify(a, b, ENUMERATION_BUDGET) {
        Ok(c) => c,
        Err(Error::Capacity(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if cert.search_skipped {
        return Ok(None);
    }
    // a solvable system must have its small solution inside the box
    let holds = cert.holds() && cert.solution.is_some();
    Ok(Some(BfrtRecord {
        trial,
        rows: a.rows(),
        cols: a.cols(),
        rank: cert.m,
        max_a: cert.max_a.to_string(),
        max_b: cert.max_b.to_string(),
        solution_max: cert.solution_max().map(|x| x.to_string()),
        y: cert.minor_max.as_ref().map(ToString::to_string),
        bound_ceil: cert.hadamard_ceil.to_string(),
        hadamard_bound: cert.hadamard_bound,
        holds,
    }))
}

fn ratio(a: &Option<String>, b: &str) -> Option<f64> {
    let a: f64 = a.as_ref()?.parse().ok()?;
    let b: f64 = b.parse().ok()?;
    (b > 0.0).then(|| a / b)
}

pub fn bfrt_check(args: BfrtArgs) -> CliResult<BfrtSummary> {
    if args.trials > 0 {
        if !(1..=BFRT_M_LIMIT).contains(&args.m_max) {
            return Err(CliError::Usage(format!("--m-max must lie in [1, {BFRT_M_LIMIT}]")));
        }
        if !(1..=BFRT_N_LIMIT).contains(&args.n_max) {
            return Err(CliError::Usage(format!("--n-max must lie in [1, {BFRT_N_LIMIT}]")));
        }
        if !(1..=BFRT_MA_LIMIT).contains(&args.ma_max) {
            return Err(CliError::Usage(format!("--ma-max must lie in [1, {BFRT_MA_LIMIT}]")));
        }
    }
    let results: Vec<fillbound::Result<Option<BfrtRecord>>> = (0..args.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            rng.set_stream(t as u64);
            let (a, b) = random_system(&mut rng, args.m_max, args.n_max, args.ma_max);
            check_instance(t, &a, &b)
        })
        .collect();
    let mut records = Vec::new();
    let mut skipped = 0;
    for r in results {
        match r? {
            Some(rec) => records.push(rec),
            None => skipped += 1,
        }
    }
    let violations = records.iter().filter(|r| !r.holds).count();
    Ok(BfrtSummary {
        trials: args.trials,
        seed: args.seed,
        m_max: args.m_max,
        n_max: args.n_max,
        ma_max: args.ma_max,
        evaluated: records.len(),
        skipped_capacity: skipped,
        violations,
        tightness_solution_over_y: RatioStats::of(
            records.iter().filter_map(|r| ratio(&r.solution_max, r.y.as_deref()?)),
        ),
        tightness_y_over_bound: RatioStats::of(records.iter().filter_map(|r| ratio(&r.y, &r.bound_ceil))),
        records,
    })
}

pub fn to_pretty(v: &impl Serialize) -> String {
    pretty(v)
}
