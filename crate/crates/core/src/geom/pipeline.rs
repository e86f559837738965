//! End-to-end filling: neck sweep, graph projection, nerve fill, lift.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use crate::chains::{boundary, is_cycle, mass, Chain};
use crate::error::{Error, Result};
use crate::filling::{amin_upper_bound, cycle_rank, fill_boundary, h1_trivial_with, FillCertificate};
use crate::geom::cone::{cone_fill, fallback_fill};
use crate::geom::cover::{nerve, Cover};
use crate::geom::decompose::decompose_cycle;
use crate::geom::graph::geodesic_graph;
use crate::geom::neck::neck_contract;
use crate::geom::paths::path_chain;
use crate::geom::project::project_cycle_to_graph;
use crate::geom::MetricComplex;

#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineOptions {
    /// Record wall-clock seconds per stage in the report.
    pub timing: bool,
}

/// Measured ratios; each is `None` when its denominator vanishes.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MeasuredConstants {
    /// Total piece mass over input mass after decomposition.
    pub c0: Option<f64>,
    /// Rerouted-cycle mass over input mass.
    pub c_gamma: Option<f64>,
    /// Projection-fill mass over input mass.
    pub c_projection_fill: Option<f64>,
    /// Largest nerve-fill coefficient over the simplicial length of the
    /// nerve cycle.
    pub c_l: Option<f64>,
    /// Largest lifted-triangle area over its perimeter.
    pub k9: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FillingReport {
    pub input_mass1: f64,
    pub mass_e0: f64,
    pub mass_e1: f64,
    pub mass_e2: f64,
    pub mass_total: f64,
    /// Number of nerve vertices (cover sets).
    pub n0: usize,
    pub certificate: Option<FillCertificate>,
    /// `mass(E) / mass(c)`.
    pub measured_f1: Option<f64>,
    /// The area factor 60 applied to this fill's mass.
    pub amin_bound: f64,
    pub constants: MeasuredConstants,
    pub flags: Vec<String>,
    pub boundary_verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<&'static str, f64>>,
}

fn ratio(a: f64, b: f64) -> Option<f64> {
    (b > 0.0).then(|| a / b)
}

/// [`pipeline_fill_with`] with default options.
pub fn pipeline_fill(space: &MetricComplex, cover: &Cover, c: &Chain) -> Result<(Chain, FillingReport)> {
    pipeline_fill_with(space, cover, c, PipelineOptions::default())
}

/// Fills the 1-cycle `c` in stages. `E0` sweeps neck pieces down to the
/// adjacent body; `E1` reroutes the rest through the geodesic graph; `E2`
/// fills the rerouted cycle on the nerve and lifts each nerve triangle by
/// a cone at one of its centers. Returns `E = E0 + E1 + E2` with `∂E = c`.
pub fn pipeline_fill_with(
    space: &MetricComplex,
    cover: &Cover,
    c: &Chain,
    opts: PipelineOptions,
) -> Result<(Chain, FillingReport)> {
    let complex = space.complex();
    if c.dim() != 1 {
        return Err(Error::structural("pipeline fills 1-cycles"));
    }
    c.validate(complex)?;
    if !is_cycle(complex, c)? {
        return Err(Error::domain("input chain is not a cycle"));
    }
    cover.validate(space).map_err(|e| e.in_stage("cover"))?;
    let mut clock = Clock { on: opts.timing, last: Instant::now(), times: BTreeMap::new() };
    let input_mass1 = mass(space.edge_lengths(), c)?;
    let mut flags = Vec::new();
    let mut constants = MeasuredConstants::default();

    if complex.dimension() < 2 || !h1_trivial_with(space.fill_solver()?, cycle_rank(complex)) {
        return Err(Error::domain("H_1 of the space is nontrivial").in_stage("hypothesis"));
    }
    clock.lap("hypothesis");

    // E0: push neck pieces into the bodies
    let mut e0 = Chain::zero(2);
    let mut c1 = c.clone();
    if let Some(reg) = space.regions() {
        let dec = decompose_cycle(space, c).map_err(|e| e.in_stage("decompose"))?;
        constants.c0 = Some(dec.c0);
        c1 = Chain::zero(1);
        for piece in dec.pieces {
            if !reg.is_neck(&piece.region) {
                c1 = &c1 + &piece.chain;
                continue;
            }
            let body = &reg.necks[&piece.region][0];
            let rho = space.radial().ok_or_else(|| Error::structural("neck regions need radial values"))?;
            let level = (0..space.n_vertices())
                .filter(|&v| reg.label(v) == body)
                .map(|v| rho[v])
                .fold(f64::NEG_INFINITY, f64::max);
            if !level.is_finite() {
                return Err(Error::structural(format!("body {body} of neck {} has no vertices", piece.region))
                    .in_stage("neck_contract"));
            }
            let sweep = neck_contract(space, &piece.chain, level).map_err(|e| e.in_stage("neck_contract"))?;
            if sweep.fallbacks > 0 {
                flags.push(format!("neck {}: {} swept cells filled by least mass", piece.region, sweep.fallbacks));
            }
            e0 = &e0 + &sweep.sweep;
            c1 = &c1 + &sweep.pushed;
        }
    } else {
        flags.push("no region labels: single-body mode".into());
    }
    clock.lap("e0");

    // E1: reroute through the geodesic graph
    let graph = geodesic_graph(space, cover).map_err(|e| e.in_stage("geodesic_graph"))?;
    if graph.edges.iter().any(|e| e.global) {
        flags.push("some geodesic-graph edges leave their cover sets".into());
    }
    let proj = project_cycle_to_graph(space, cover, &graph, &c1).map_err(|e| e.in_stage("project"))?;
    if proj.cone_fallbacks > 0 {
        flags.push(format!("projection: {} cone cells filled by least mass", proj.cone_fallbacks));
    }
    if let Some((cg, cf)) = proj.constants() {
        constants.c_gamma = Some(cg);
        constants.c_projection_fill = Some(cf);
    }
    let e1 = proj.fill.clone();
    clock.lap("e1");

    // E2: nerve fill lifted by cones
    let nerve_complex = nerve(cover);
    let mut nerve_cycle = Chain::zero(1);
    for (i, a) in proj.graph_cycle.iter() {
        let ge = &graph.edges[i];
        let idx = nerve_complex.edge_index(ge.a, ge.b).expect("graph edges are nerve edges");
        nerve_cycle.add_term(idx, a);
    }
    let mut e2 = Chain::zero(2);
    let mut certificate = None;
    if !nerve_cycle.is_zero() {
        let nerve_fill = if nerve_complex.dimension() >= 2 {
            match fill_boundary(&nerve_complex, &nerve_cycle) {
                Ok(r) => Some(r),
                Err(Error::NoIntegerSolution(_)) => None,
                Err(e) => return Err(e.in_stage("nerve_fill")),
            }
        } else {
            None
        };
        match nerve_fill {
            Some((f, cert)) => {
                let len = nerve_cycle.l1_norm().to_f64().unwrap_or(f64::INFINITY);
                constants.c_l = ratio(f.max_abs_coeff().to_f64().unwrap_or(f64::INFINITY), len);
                certificate = Some(cert);
                let mut k9 = 0.0f64;
                let mut lift_fallbacks = 0;
                for (t, a) in f.iter() {
                    let tri = nerve_complex.simplex(2, t);
                    let mut walk = Vec::new();
                    for (x, y) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
                        let p = graph.path(x, y).expect("nerve edges are graph edges");
                        walk.extend_from_slice(if walk.is_empty() { &p[..] } else { &p[1..] });
                    }
                    let lp = path_chain(complex, &walk)?;
                    let lift = if lp.is_zero() {
                        Chain::zero(2)
                    } else {
                        let cone = cone_fill(space, &lp, cover.sets[tri[0]].center).map_err(|e| e.in_stage("lift"))?;
                        lift_fallbacks += cone.fallbacks;
                        if cone.loop_mass > 0.0 {
                            k9 = k9.max(cone.mass / cone.loop_mass);
                        }
                        cone.chain
                    };
                    e2.add_scaled(&lift, a);
                }
                constants.k9 = Some(k9);
                if lift_fallbacks > 0 {
                    flags.push(format!("lift: {lift_fallbacks} cone cells filled by least mass"));
                }
            }
            None => {
                flags.push("nerve cycle bounds no nerve 2-chain; rerouted cycle filled directly".into());
                e2 = fallback_fill(space, &proj.realized).map_err(|e| e.in_stage("nerve_fill"))?;
            }
        }
    }
    clock.lap("e2");

    let e = &(&e0 + &e1) + &e2;
    let boundary_verified = &boundary(complex, &e)? == c;
    if !boundary_verified {
        return Err(Error::structural("internal: assembled filling does not bound the input").in_stage("verify"));
    }
    let areas = space.areas();
    let (m0, m1, m2) = (mass(areas, &e0)?, mass(areas, &e1)?, mass(areas, &e2)?);
    let mass_total = m0 + m1 + m2;
    let real_total = mass(areas, &e)?;
    if real_total < mass_total * (1.0 - 1e-9) {
        flags.push(format!("stage fills overlap with cancellation; net mass {real_total}"));
    }
    if e.iter().any(|(_, a)| a.abs() > num_bigint::BigInt::from(1u8)) {
        flags.push("filling has coefficients of absolute value above 1".into());
    }
    clock.lap("verify");
    let report = FillingReport {
        input_mass1,
        mass_e0: m0,
        mass_e1: m1,
        mass_e2: m2,
        mass_total,
        n0: cover.len(),
        certificate,
        measured_f1: ratio(mass_total, input_mass1),
        amin_bound: amin_upper_bound(mass_total, 4)?,
        constants,
        flags,
        boundary_verified,
        timing: clock.on.then_some(clock.times),
    };
    Ok((e, report))
}

struct Clock {
    on: bool,
    last: Instant,
    times: BTreeMap<&'static str, f64>,
}

impl Clock {
    fn lap(&mut self, stage: &'static str) {
        if self.on {
            let now = Instant::now();
            self.times.insert(stage, (now - self.last).as_secs_f64());
            self.last = now;
        }
    }
}
