//! Rate region when only `X` must be reconstructed within a log-loss budget
//! and `Y` acts as a rate-limited helper.
//!
//! A triple `(Rx, Ry, Dx)` is achievable iff some channel `p(u|y)` with
//! `|U| ≤ |Y| + 2` has `Ry ≥ I(Y;U)` and `Rx + Dx ≥ H(X|U)`. The boundary is
//! `g(Ry) = min { H(X|U) : I(Y;U) ≤ Ry }`, which is found numerically here.
//! The problem is nonconvex, so every value reported is an achievable upper
//! bound on `g`, backed by an explicit channel.

mod caratheodory;
mod envelope;
mod ib;
pub mod oracle;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmf::{AuxChannel, AuxJoint, Axis, JointPmf, Pair};
use envelope::Point;

pub use oracle::{grid_size, xd_grid_oracle, xd_grid_oracle_many, GRID_LIMIT};

/// Rate slack allowed when deciding whether a candidate meets the budget.
const FEAS_TOL: f64 = 1e-12;
/// Chords aim this far inside the budget so rounding cannot push them out.
const CHORD_MARGIN: f64 = 1e-10;
/// Upper end of the `log2 β` search interval. `β ≤ 1` only ever yields `I(Y;U) = 0`.
const LOG2_BETA_MAX: f64 = 20.0;

/// Flattened copies of the pmf used in the inner loops.
pub(crate) struct Tables {
    pub m: usize,
    pub l: usize,
    pub py: Vec<f64>,
    /// `p(x, y)` at `x·l + y`.
    pub pxy: Vec<f64>,
    /// `p(x | y)` at `x·l + y`; zero for null `y`.
    pub px_y: Vec<f64>,
}

impl Tables {
    pub fn new(p: &JointPmf) -> Self {
        let (m, l) = (p.m(), p.l());
        let py = p.marginal_y().probs().to_vec();
        let pxy = p.as_slice().to_vec();
        let px_y = (0..m * l).map(|i| if py[i % l] > 0.0 { pxy[i] / py[i % l] } else { 0.0 }).collect();
        Tables { m, l, py, pxy, px_y }
    }
}

/// `(I(Y;U), H(X|U))` for an `l × k` channel.
pub(crate) fn channel_stats(t: &Tables, w: &[f64], k: usize) -> (f64, f64) {
    let (m, l) = (t.m, t.l);
    let mut pu = vec![0.0; k];
    let mut pxu = vec![0.0; m * k];
    for y in 0..l {
        for u in 0..k {
            let wyu = w[y * k + u];
            if wyu > 0.0 {
                pu[u] += t.py[y] * wyu;
                for x in 0..m {
                    pxu[x * k + u] += t.pxy[x * l + y] * wyu;
                }
            }
        }
    }
    let mut rate = 0.0;
    for y in 0..l {
        for u in 0..k {
            let wyu = w[y * k + u];
            if wyu > 0.0 && t.py[y] > 0.0 {
                rate += t.py[y] * wyu * (wyu / pu[u]).log2();
            }
        }
    }
    let mut value = 0.0;
    for x in 0..m {
        for u in 0..k {
            let v = pxu[x * k + u];
            if v > 0.0 {
                value -= v * (v / pu[u]).log2();
            }
        }
    }
    (rate.max(0.0), value.max(0.0))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XdOptions {
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Stop when the Lagrangian changes by less than this fraction.
    pub rel_tol: f64,
    pub bisection_steps: usize,
    /// Slack on the membership decision.
    pub tol: f64,
}

impl Default for XdOptions {
    fn default() -> Self {
        XdOptions { restarts: 32, seed: 0, max_iter: 2000, rel_tol: 1e-10, bisection_steps: 40, tol: 1e-6 }
    }
}

/// An achievable point on the boundary together with the channel that attains it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XdSolution {
    /// `H(X|U)` of `channel`, an upper bound on the true minimum.
    pub value: f64,
    /// `I(Y;U)` of `channel`.
    pub rate: f64,
    pub channel: AuxChannel,
    /// False when no alternating-minimization run behind the answer reached
    /// a stationary point within the iteration limit.
    pub converged: bool,
}

fn finalize(p: &JointPmf, t: &Tables, w: &[f64], k: usize, converged: bool) -> Result<XdSolution> {
    let l = p.l();
    let reduced = caratheodory::reduce_support(t, w, k);
    let channel = AuxChannel::from_flat_unchecked(l, l + 2, reduced);
    let joint = AuxJoint::new(p.clone(), channel)?;
    Ok(XdSolution {
        value: joint.h_x_given_u(),
        rate: joint.mutual_information(Pair::YU),
        channel: joint.channel().clone(),
        converged,
    })
}

fn trivial_points(t: &Tables, l: usize) -> [Point; 2] {
    let k = l + 2;
    let constant = AuxChannel::constant(l, k).as_slice().to_vec();
    let copy = AuxChannel::copy(l, k).as_slice().to_vec();
    let (r0, v0) = channel_stats(t, &constant, k);
    let (r1, v1) = channel_stats(t, &copy, k);
    [
        Point { rate: r0, value: v0, w: constant, k, converged: true },
        Point { rate: r1, value: v1, w: copy, k, converged: true },
    ]
}

/// Smallest `H(X|U)` found subject to `I(Y;U) ≤ ry_budget`.
///
/// Each restart draws a random initial channel and bisects `log2 β` so that
/// the stationary point of the bottleneck iteration meets the budget. Every
/// point visited, plus the constant and copy channels, feeds a lower convex
/// envelope, and the envelope value at the budget is realized by mixing two
/// channels and trimming the mixture back to `|Y| + 2` symbols.
pub fn xd_min_hxu(p: &JointPmf, ry_budget: f64, opts: &XdOptions) -> Result<XdSolution> {
    crate::error::nonnegative("ry_budget", ry_budget)?;
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("restarts must be at least 1".into()));
    }
    let t = Tables::new(p);
    let (l, k) = (p.l(), p.l() + 2);
    let mut points: Vec<Point> = trivial_points(&t, l).into();
    let runs: Vec<Vec<Point>> = (0..opts.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(r as u64);
            let init = ib::random_channel(&mut rng, l, k);
            let (mut lo, mut hi) = (0.0, LOG2_BETA_MAX);
            let mut visited = Vec::with_capacity(opts.bisection_steps);
            for _ in 0..opts.bisection_steps {
                let mid = 0.5 * (lo + hi);
                let run = ib::ib_solve(&t, mid.exp2(), &init, k, opts.max_iter, opts.rel_tol);
                if run.rate <= ry_budget {
                    lo = mid;
                } else {
                    hi = mid;
                }
                visited.push(Point { rate: run.rate, value: run.value, w: run.w, k, converged: run.converged });
            }
            visited
        })
        .collect();
    points.extend(runs.into_iter().flatten());

    let (a, chord) = envelope::best_at(&points, ry_budget, FEAS_TOL);
    let single = finalize(p, &t, &points[a].w, k, points[a].converged)?;
    let Some((b, _)) = chord else { return Ok(single) };
    let (pa, pb) = (&points[a], &points[b]);
    let target = (ry_budget - CHORD_MARGIN).max(pa.rate);
    let theta = ((pb.rate - target) / (pb.rate - pa.rate)).clamp(0.0, 1.0);
    let (w, kk) = envelope::mix(pa, pb, theta, l);
    let mixed = finalize(p, &t, &w, kk, pa.converged && pb.converged)?;
    if mixed.rate <= ry_budget + FEAS_TOL && mixed.value < single.value {
        Ok(mixed)
    } else {
        Ok(single)
    }
}

/// Turns an unconverged solve into an error carrying the best value found.
pub fn require_converged(sol: XdSolution) -> Result<XdSolution> {
    if sol.converged {
        Ok(sol)
    } else {
        Err(Error::NonConvergence { best: sol.value })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XdQuery {
    pub rx: f64,
    pub ry: f64,
    pub dx: f64,
}

impl XdQuery {
    pub fn new(rx: f64, ry: f64, dx: f64) -> Result<Self> {
        for (name, v) in [("rx", rx), ("ry", ry), ("dx", dx)] {
            crate::error::nonnegative(name, v)?;
        }
        Ok(XdQuery { rx, ry, dx })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XdVerdict {
    pub contains: bool,
    /// The achievable bound `ĝ(ry)` the decision was made against.
    pub g_hat: f64,
    pub solution: XdSolution,
}

/// `rx + dx ≥ ĝ(ry) − tol`.
pub fn xd_contains(p: &JointPmf, q: &XdQuery, opts: &XdOptions) -> Result<XdVerdict> {
    let solution = xd_min_hxu(p, q.ry, opts)?;
    Ok(XdVerdict { contains: q.rx + q.dx >= solution.value - opts.tol, g_hat: solution.value, solution })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurvePoint {
    pub ry_budget: f64,
    pub min_h_x_given_u: f64,
    /// `I(Y;U)` actually used, at most `ry_budget`.
    pub rate: f64,
    pub channel: AuxChannel,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TradeoffCurve {
    pub points: Vec<CurvePoint>,
    pub converged: bool,
}

/// `ĝ` on `samples` evenly spaced budgets over `[0, H(Y)]`, made
/// nonincreasing and convex by reusing and mixing the channels found.
pub fn xd_tradeoff_curve(p: &JointPmf, samples: usize, opts: &XdOptions) -> Result<TradeoffCurve> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("samples = {samples}, need at least 2")));
    }
    let hy = p.entropy_of(Axis::Y);
    let last = (samples - 1) as f64;
    let budgets: Vec<f64> = (0..samples).map(|i| if i + 1 == samples { hy } else { hy * i as f64 / last }).collect();
    let mut sols = budgets.par_iter().map(|&b| xd_min_hxu(p, b, opts)).collect::<Result<Vec<_>>>()?;
    for i in 1..samples {
        if sols[i].value > sols[i - 1].value {
            sols[i] = sols[i - 1].clone();
        }
    }
    let t = Tables::new(p);
    let l = p.l();
    let as_point = |b: f64, s: &XdSolution| Point {
        rate: b,
        value: s.value,
        w: s.channel.as_slice().to_vec(),
        k: s.channel.k(),
        converged: s.converged,
    };
    let pts: Vec<Point> = budgets.iter().zip(&sols).map(|(&b, s)| as_point(b, s)).collect();
    let hull = envelope::lower_hull(&pts);
    let mut improved = sols.clone();
    for seg in hull.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        for i in a + 1..b {
            let theta = (budgets[b] - budgets[i]) / (budgets[b] - budgets[a]);
            // mix the real channels; their rates sit at or below the budgets
            let real_a = Point { rate: sols[a].rate, ..pts[a].clone() };
            let real_b = Point { rate: sols[b].rate, ..pts[b].clone() };
            let (w, kk) = envelope::mix(&real_a, &real_b, theta, l);
            let mixed = finalize(p, &t, &w, kk, sols[a].converged && sols[b].converged)?;
            if mixed.value < improved[i].value && mixed.rate <= budgets[i] + FEAS_TOL {
                improved[i] = mixed;
            }
        }
    }
    let converged = improved.iter().all(|s| s.converged);
    let points = budgets
        .into_iter()
        .zip(improved)
        .map(|(ry_budget, s)| CurvePoint { ry_budget, min_h_x_given_u: s.value, rate: s.rate, channel: s.channel })
        .collect();
    Ok(TradeoffCurve { points, converged })
}
