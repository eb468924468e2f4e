//! Dispatch from a [`RunManifest`] to the library, producing one artifact.

use std::path::PathBuf;

use mtlogloss::{
    erasure_rd, jd_boundary, jd_contains_closed, jd_contains_lp, jd_corner_points, jd_timeshare_split, rd_logloss,
    repeat_for_peak, simulate_jd_timeshare, simulate_rd_point, simulate_smsw, simulate_wz, simulate_xd,
    sw_region_contains, wz_logloss, xd_contains, xd_grid_oracle, xd_grid_oracle_many, xd_min_hxu, xd_tradeoff_curve,
    AuxChannel, Axis, ExtraBinRates, JdQuery, JointPmf, SimConfig, SimResult, XdOptions, XdQuery, XdSolution,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{RdfunParams, RegionJdParams, RegionXdParams, Scheme, SimulateParams, VerifyParams};
use crate::error::{CliError, Result};
use crate::format::{emit, fmt_sig, Artifact, Cell, Format, Table};
use crate::manifest::{write_sidecar, RunManifest};
use crate::pmf_file::load_pmf;

/// Label carried by every region-xd output: the solver returns a feasible
/// channel, so its `H(X|U)` can only overestimate the true minimum.
pub const XD_BOUND: &str = "achievable upper bound on min H(X|U)";

/// Agreement required between the solver and the lattice search.
pub const ORACLE_TOL: f64 = 0.02;
/// Agreement required at the curve endpoints.
pub const ENDPOINT_TOL: f64 = 1e-6;

/// A finished computation. `flag` marks results that were produced but
/// should not be trusted as-is, such as a solve that did not converge.
#[derive(Debug)]
pub struct Completed {
    pub artifact: Artifact,
    pub summary: String,
    pub flag: Option<Flag>,
}

#[derive(Debug, Clone)]
pub struct Flag {
    pub kind: &'static str,
    pub message: String,
}

impl Flag {
    pub fn record(&self) -> Value {
        json!({"error": self.kind, "exit_code": crate::error::EXIT_RUNTIME, "message": self.message})
    }
}

/// What [`execute`] wrote.
#[derive(Debug)]
pub struct Executed {
    pub completed: Completed,
    pub format: Format,
    pub sidecar: Option<PathBuf>,
}

/// Entropy header for the summary line.
pub fn pmf_header(p: &JointPmf) -> String {
    format!(
        "pmf {}x{} H(X)={:.6} H(Y)={:.6} H(X,Y)={:.6} H(X|Y)={:.6} H(Y|X)={:.6}",
        p.m(),
        p.l(),
        p.entropy_of(Axis::X),
        p.entropy_of(Axis::Y),
        p.joint_entropy(),
        p.conditional_entropy(Axis::Y),
        p.conditional_entropy(Axis::X),
    )
}

pub fn compute(m: &RunManifest) -> Result<Completed> {
    let run = match m.command.as_str() {
        "region-jd" => region_jd,
        "region-xd" => region_xd,
        "simulate" => simulate,
        "rdfun" => rdfun,
        "verify" => verify,
        other => return Err(CliError::UnknownCommand(other.into())),
    };
    m.check_input()?;
    let p = load_pmf(&m.input_path)?;
    let mut done = run(m, &p)?;
    done.summary = format!("{}: {}; {}", m.command, pmf_header(&p), done.summary);
    Ok(done)
}

/// Computes, writes the output and its sidecar, and reports what was done.
pub fn execute(m: &RunManifest) -> Result<Executed> {
    let completed = compute(m)?;
    let out = m.output_path.as_deref();
    let format = m
        .format
        .or_else(|| out.and_then(Format::from_extension))
        .unwrap_or_else(|| completed.artifact.default_format());
    emit(&completed.artifact, format, out)?;
    let sidecar = out.map(|o| write_sidecar(m, o)).transpose()?;
    Ok(Executed { completed, format, sidecar })
}

fn not_converged(what: &str) -> Option<Flag> {
    Some(Flag { kind: "NonConvergence", message: format!("{what} did not reach a stationary point") })
}

fn channel_json(c: &AuxChannel) -> Value {
    json!(c.rows())
}

fn region_jd(m: &RunManifest, p: &JointPmf) -> Result<Completed> {
    let a: RegionJdParams = m.params_as()?;
    let corners = jd_corner_points(p, a.d);
    match (a.rx, a.ry) {
        (Some(rx), Some(ry)) => {
            let q = JdQuery::new(rx, ry, a.d).map_err(CliError::model("region-jd query"))?;
            let (contains, cert) = jd_contains_lp(p, &q);
            let closed = jd_contains_closed(p, &q);
            let record = json!({
                "query": {"rx": rx, "ry": ry, "d": a.d},
                "contains": contains,
                "closed_form_agrees": closed == contains,
                "certificate": cert.map(|c| json!({"delta_x": c.delta_x, "delta_y": c.delta_y})),
                "corners": {
                    "p1": {"rx": corners.p1.rx, "ry": corners.p1.ry},
                    "p2": {"rx": corners.p2.rx, "ry": corners.p2.ry},
                },
            });
            let summary = format!("({}, {}) at d={} {}", fmt_sig(rx), fmt_sig(ry), fmt_sig(a.d), verdict(contains));
            let flag = (closed != contains).then(|| Flag {
                kind: "OracleDisagreement",
                message: "polygon search and closed form disagree".into(),
            });
            Ok(Completed { artifact: Artifact::Record(record), summary, flag })
        }
        (None, None) => {
            JdQuery::new(0.0, 0.0, a.d).map_err(CliError::model("region-jd"))?;
            let face = jd_boundary(p, a.d, a.samples).map_err(CliError::model("region-jd boundary"))?;
            let mut t = Table::new(&["rx", "ry"]);
            for r in &face {
                t.push(vec![r.rx.into(), r.ry.into()]);
            }
            let summary = format!(
                "dominant face at d={} from ({}, {}) to ({}, {}), {} points",
                fmt_sig(a.d),
                fmt_sig(corners.p1.rx),
                fmt_sig(corners.p1.ry),
                fmt_sig(corners.p2.rx),
                fmt_sig(corners.p2.ry),
                face.len()
            );
            Ok(Completed { artifact: Artifact::Table(t), summary, flag: None })
        }
        _ => Err(CliError::Usage("region-jd needs both --rx and --ry, or neither".into())),
    }
}

fn verdict(contains: bool) -> &'static str {
    if contains {
        "inside"
    } else {
        "outside"
    }
}

fn xd_options(restarts: usize, max_iter: usize, seed: u64) -> XdOptions {
    XdOptions { restarts, max_iter, seed, ..XdOptions::default() }
}

fn solution_json(s: &XdSolution) -> Value {
    json!({"g_hat": s.value, "rate": s.rate, "converged": s.converged, "channel": channel_json(&s.channel)})
}

fn region_xd(m: &RunManifest, p: &JointPmf) -> Result<Completed> {
    let a: RegionXdParams = m.params_as()?;
    let opts = xd_options(a.restarts, a.max_iter, m.seed);
    let oracle = |b: f64| -> Result<Option<f64>> {
        a.grid_step.map(|s| xd_grid_oracle(p, b, s)).transpose().map_err(CliError::model("region-xd grid oracle"))
    };
    match (a.rx, a.ry, a.dx, a.ry_budget) {
        (Some(rx), Some(ry), Some(dx), None) => {
            let q = XdQuery::new(rx, ry, dx).map_err(CliError::model("region-xd query"))?;
            let v = xd_contains(p, &q, &opts).map_err(CliError::model("region-xd membership"))?;
            let record = json!({
                "bound": XD_BOUND,
                "query": {"rx": rx, "ry": ry, "dx": dx},
                "contains": v.contains,
                "solution": solution_json(&v.solution),
                "grid_oracle": oracle(ry)?,
            });
            let summary = format!(
                "({}, {}, {}) {} against g_hat={} ({XD_BOUND})",
                fmt_sig(rx),
                fmt_sig(ry),
                fmt_sig(dx),
                verdict(v.contains),
                fmt_sig(v.g_hat)
            );
            let flag = if v.solution.converged { None } else { not_converged("membership solve") };
            Ok(Completed { artifact: Artifact::Record(record), summary, flag })
        }
        (None, None, None, Some(b)) => {
            let s = xd_min_hxu(p, b, &opts).map_err(CliError::model("region-xd solve"))?;
            let record = json!({
                "bound": XD_BOUND,
                "ry_budget": b,
                "solution": solution_json(&s),
                "grid_oracle": oracle(b)?,
            });
            let summary = format!("g_hat({})={} ({XD_BOUND})", fmt_sig(b), fmt_sig(s.value));
            let flag = if s.converged { None } else { not_converged("solve") };
            Ok(Completed { artifact: Artifact::Record(record), summary, flag })
        }
        (None, None, None, None) => {
            let curve = xd_tradeoff_curve(p, a.samples, &opts).map_err(CliError::model("region-xd curve"))?;
            let budgets: Vec<f64> = curve.points.iter().map(|c| c.ry_budget).collect();
            let grid = a
                .grid_step
                .map(|s| xd_grid_oracle_many(p, &budgets, s))
                .transpose()
                .map_err(CliError::model("region-xd grid oracle"))?;
            let mut cols = vec!["ry_budget", "min_h_x_given_u_upper", "rate"];
            if grid.is_some() {
                cols.push("grid_oracle");
            }
            let mut t = Table::new(&cols);
            for (i, c) in curve.points.iter().enumerate() {
                let mut row: Vec<Cell> = vec![c.ry_budget.into(), c.min_h_x_given_u.into(), c.rate.into()];
                if let Some(g) = &grid {
                    row.push(g[i].into());
                }
                t.push(row);
            }
            let summary = format!("curve of {} budgets, second column is an {XD_BOUND}", t.rows.len());
            let flag = if curve.converged { None } else { not_converged("curve solve") };
            Ok(Completed { artifact: Artifact::Table(t), summary, flag })
        }
        _ => Err(CliError::Usage("region-xd takes --rx/--ry/--dx together, or --ry-budget, or neither".into())),
    }
}

fn required<T>(v: Option<T>, flag: &str, scheme: Scheme) -> Result<T> {
    v.ok_or_else(|| CliError::Usage(format!("simulate {} needs --{flag}", scheme.name())))
}

fn simulate(m: &RunManifest, p: &JointPmf) -> Result<Completed> {
    let a: SimulateParams = m.params_as()?;
    let cfg = SimConfig::new(a.n, a.eps, a.trials).with_seed(m.seed);
    let ctx = || CliError::model(format!("simulate {}", a.scheme.name()));
    let res: SimResult = match a.scheme {
        Scheme::Wz => simulate_wz(p, &cfg, required(a.rate, "rate", a.scheme)?).map_err(ctx())?,
        Scheme::Rd => simulate_rd_point(&p.marginal_x(), &cfg, required(a.rate, "rate", a.scheme)?).map_err(ctx())?,
        Scheme::Jd => simulate_jd_timeshare(p, &cfg, required(a.d, "d", a.scheme)?, a.mix).map_err(ctx())?,
        Scheme::Smsw => {
            let d = required(a.d, "d", a.scheme)?;
            let split = jd_timeshare_split(p, &cfg, d, a.mix).map_err(ctx())?;
            let default = ExtraBinRates::from_split(&split, a.eps);
            let extra = ExtraBinRates { x: a.extra_x.unwrap_or(default.x), y: a.extra_y.unwrap_or(default.y) };
            simulate_smsw(p, &cfg, d, a.mix, &split, extra).map_err(ctx())?
        }
        Scheme::Xd => {
            let dx = required(a.dx, "dx", a.scheme)?;
            let channel = match a.ry_budget {
                Some(b) => {
                    let opts = xd_options(XdOptions::default().restarts, XdOptions::default().max_iter, m.seed);
                    xd_min_hxu(p, b, &opts).map_err(ctx())?.channel
                }
                None => AuxChannel::copy(p.l(), p.l()),
            };
            simulate_xd(p, &channel, &cfg, dx).map_err(ctx())?
        }
    };
    let mut cols = vec![
        "scheme",
        "n",
        "trials",
        "mean_distortion",
        "ci_halfwidth",
        "block_error_rate",
        "clamped_fraction",
        "rate_x",
        "rate_y",
    ];
    let mut row: Vec<Cell> = vec![
        a.scheme.name().into(),
        a.n.into(),
        res.trials_run.into(),
        res.mean_distortion.into(),
        res.ci_halfwidth.into(),
        res.block_error_rate.into(),
        res.clamped_fraction.into(),
        res.rate_x.into(),
        res.rate_y.into(),
    ];
    if let Some(r) = a.repeats {
        let peak = repeat_for_peak(&res.block_distortions, res.mean_distortion, a.eps, r)
            .map_err(CliError::model("peak distortion"))?;
        cols.push("peak_exceed_prob");
        row.push(peak.into());
    }
    let mut t = Table::new(&cols);
    t.push(row);
    let summary = format!(
        "{} n={} trials={} mean distortion {} ± {}, block error {}, rates ({}, {})",
        a.scheme.name(),
        a.n,
        res.trials_run,
        fmt_sig(res.mean_distortion),
        fmt_sig(res.ci_halfwidth),
        fmt_sig(res.block_error_rate),
        fmt_sig(res.rate_x),
        fmt_sig(res.rate_y)
    );
    Ok(Completed { artifact: Artifact::Table(t), summary, flag: None })
}

fn rdfun(m: &RunManifest, p: &JointPmf) -> Result<Completed> {
    let a: RdfunParams = m.params_as()?;
    let px = p.marginal_x();
    let top = px.entropy().max(1.0);
    let ds: Vec<f64> = match a.d {
        Some(d) => vec![d],
        None if a.samples >= 2 => (0..a.samples).map(|i| top * i as f64 / (a.samples - 1) as f64).collect(),
        None => return Err(CliError::Usage(format!("samples = {}, need at least 2", a.samples))),
    };
    let mut t = Table::new(&["d", "rd_logloss", "wz_logloss", "rd_erasure"]);
    for &d in &ds {
        if !(d.is_finite() && d >= 0.0) {
            return Err(CliError::Usage(format!("d = {d} must be a nonnegative number")));
        }
        let erasure = erasure_rd(&px, d.min(1.0)).map_err(CliError::model("rdfun erasure"))?;
        t.push(vec![d.into(), rd_logloss(&px, d).into(), wz_logloss(p, d).into(), erasure.into()]);
    }
    let summary = format!("{} distortion values", t.rows.len());
    Ok(Completed { artifact: Artifact::Table(t), summary, flag: None })
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn verify(m: &RunManifest, p: &JointPmf) -> Result<Completed> {
    let a: VerifyParams = m.params_as()?;
    if a.grid < 2 {
        return Err(CliError::Usage(format!("grid = {}, need at least 2", a.grid)));
    }
    let (hx, hy, hxy) = (p.entropy_of(Axis::X), p.entropy_of(Axis::Y), p.joint_entropy());
    let hx_y = p.conditional_entropy(Axis::Y);
    let step = |top: f64, i: usize| top * i as f64 / (a.grid - 1) as f64;
    let mut queries = Vec::with_capacity(a.grid.pow(3) + a.queries);
    for i in 0..a.grid {
        for j in 0..a.grid {
            for k in 0..a.grid {
                queries.push((step(hx + 1.0, i), step(hy + 1.0, j), step(hxy, k)));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(m.seed);
    for _ in 0..a.queries {
        queries.push((rng.random::<f64>() * (hx + 1.0), rng.random::<f64>() * (hy + 1.0), rng.random::<f64>() * hxy));
    }
    let mut checks = Vec::new();
    let lp_vs_closed = queries
        .iter()
        .filter(|&&(rx, ry, d)| {
            let q = JdQuery { rx, ry, d };
            jd_contains_lp(p, &q).0 != jd_contains_closed(p, &q)
        })
        .count();
    checks.push(Check {
        name: "jd_polygon_vs_closed_form",
        passed: lp_vs_closed == 0,
        detail: format!("{lp_vs_closed}/{} disagreements", queries.len()),
    });
    let collapse = queries
        .iter()
        .filter(|&&(rx, ry, _)| {
            jd_contains_closed(p, &JdQuery { rx, ry, d: 0.0 }) != sw_region_contains(p, rx, ry, 0.0, 0.0)
        })
        .count();
    checks.push(Check {
        name: "jd_zero_distortion_is_slepian_wolf",
        passed: collapse == 0,
        detail: format!("{collapse}/{} disagreements", queries.len()),
    });

    let opts = xd_options(a.restarts, XdOptions::default().max_iter, m.seed);
    let solve = |b: f64| xd_min_hxu(p, b, &opts).map_err(CliError::model("verify xd solve"));
    let (g0, g1) = (solve(0.0)?, solve(hy)?);
    let gap = (g0.value - hx).abs().max((g1.value - hx_y).abs());
    checks.push(Check {
        name: "xd_endpoints",
        passed: gap <= ENDPOINT_TOL,
        detail: format!("g_hat(0)={} g_hat(H(Y))={} max gap {}", fmt_sig(g0.value), fmt_sig(g1.value), fmt_sig(gap)),
    });
    if let Some(s) = a.grid_step {
        if a.samples < 2 {
            return Err(CliError::Usage(format!("samples = {}, need at least 2", a.samples)));
        }
        let budgets: Vec<f64> = (0..a.samples).map(|i| hy * i as f64 / (a.samples - 1) as f64).collect();
        let grid = xd_grid_oracle_many(p, &budgets, s).map_err(CliError::model("verify grid oracle"))?;
        let mut worst: f64 = 0.0;
        for (b, g) in budgets.iter().zip(&grid) {
            worst = worst.max((solve(*b)?.value - g).abs());
        }
        checks.push(Check {
            name: "xd_solver_vs_lattice",
            passed: worst <= ORACLE_TOL,
            detail: format!("max |solver - lattice| = {} over {} budgets", fmt_sig(worst), budgets.len()),
        });
    }

    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    let record = json!({
        "entropies": {"h_x": hx, "h_y": hy, "h_xy": hxy, "h_x_given_y": hx_y, "h_y_given_x": p.conditional_entropy(Axis::X)},
        "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        "passed": failed.is_empty(),
    });
    let summary = format!("{}/{} checks passed", checks.len() - failed.len(), checks.len());
    let flag =
        (!failed.is_empty()).then(|| Flag { kind: "CheckFailed", message: format!("failed: {}", failed.join(", ")) });
    Ok(Completed { artifact: Artifact::Record(record), summary, flag })
}
