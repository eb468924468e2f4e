//! Rate region for lossy reconstruction of the pair `(X, Y)` under joint
//! log-loss, the Slepian–Wolf region with distortion slacks, and the
//! single-terminal rate-distortion functions it specializes to.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmf::{Axis, Dist, JointPmf};

/// Inclusive tolerance for membership on the region boundary.
pub const REGION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JdQuery {
    pub rx: f64,
    pub ry: f64,
    pub d: f64,
}

impl JdQuery {
    pub fn new(rx: f64, ry: f64, d: f64) -> Result<Self> {
        for (name, v) in [("rx", rx), ("ry", ry), ("d", d)] {
            crate::error::nonnegative(name, v)?;
        }
        Ok(JdQuery { rx, ry, d })
    }
}

/// Distortion slacks that witness membership.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SlackCertificate {
    pub delta_x: f64,
    pub delta_y: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatePair {
    pub rx: f64,
    pub ry: f64,
}

/// The two corners whose time-sharing traces the dominant face.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CornerPair {
    pub p1: RatePair,
    pub p2: RatePair,
}

struct Entropies {
    hxy: f64,
    hx_y: f64,
    hy_x: f64,
    hx: f64,
    hy: f64,
}

fn entropies(p: &JointPmf) -> Entropies {
    Entropies {
        hxy: p.joint_entropy(),
        hx_y: p.conditional_entropy(Axis::Y),
        hy_x: p.conditional_entropy(Axis::X),
        hx: p.entropy_of(Axis::X),
        hy: p.entropy_of(Axis::Y),
    }
}

/// Decides membership by searching the vertices of the slack polygon
/// `{δx, δy ≥ 0, δx + δy ≤ D, Rx + δx ≥ H(X|Y), Ry + δy ≥ H(Y|X)}`.
///
/// The polygon is bounded, so it is nonempty iff one of the pairwise line
/// intersections is feasible. Among feasible vertices the one minimizing
/// `(δx + δy, δx)` is returned, which is the componentwise-minimal slack pair.
pub fn jd_contains_lp(p: &JointPmf, q: &JdQuery) -> (bool, Option<SlackCertificate>) {
    let h = entropies(p);
    if q.rx + q.ry + q.d < h.hxy - REGION_TOL {
        return (false, None);
    }
    // each constraint as a·δ ≥ b
    let cons: [([f64; 2], f64); 5] = [
        ([1.0, 0.0], 0.0),
        ([0.0, 1.0], 0.0),
        ([-1.0, -1.0], -q.d),
        ([1.0, 0.0], h.hx_y - q.rx),
        ([0.0, 1.0], h.hy_x - q.ry),
    ];
    let feasible = |v: [f64; 2]| cons.iter().all(|(a, b)| a[0] * v[0] + a[1] * v[1] >= b - REGION_TOL);
    let mut best: Option<[f64; 2]> = None;
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            let ([a1, a2], b1) = cons[i];
            let ([c1, c2], b2) = cons[j];
            let det = a1 * c2 - a2 * c1;
            if det.abs() < 1e-15 {
                continue;
            }
            let v = [(b1 * c2 - a2 * b2) / det, (a1 * b2 - b1 * c1) / det];
            if !feasible(v) {
                continue;
            }
            let better = match best {
                None => true,
                Some(w) => {
                    let (s, t) = (v[0] + v[1], w[0] + w[1]);
                    s < t - 1e-15 || ((s - t).abs() <= 1e-15 && v[0] < w[0])
                }
            };
            if better {
                best = Some(v);
            }
        }
    }
    match best {
        Some([dx, dy]) => (true, Some(SlackCertificate { delta_x: dx.max(0.0), delta_y: dy.max(0.0) })),
        None => (false, None),
    }
}

/// Closed-form membership with the slacks eliminated.
pub fn jd_contains_closed(p: &JointPmf, q: &JdQuery) -> bool {
    let h = entropies(p);
    let needed = (h.hx_y - q.rx).max(0.0) + (h.hy_x - q.ry).max(0.0);
    needed <= q.d + REGION_TOL && q.rx + q.ry + q.d >= h.hxy - REGION_TOL
}

/// Slepian–Wolf region with per-source distortion slacks `d1`, `d2`.
pub fn sw_region_contains(p: &JointPmf, rx: f64, ry: f64, d1: f64, d2: f64) -> bool {
    let h = entropies(p);
    rx + d1 >= h.hx_y - REGION_TOL && ry + d2 >= h.hy_x - REGION_TOL && rx + ry + d1 + d2 >= h.hxy - REGION_TOL
}

/// Corners `P₁` (Y sent losslessly first) and `P₂` (X first) at distortion `d`.
///
/// Coordinates are clamped at zero: past `D = H(X,Y)` the unclamped formula
/// for the second coordinate goes negative.
pub fn jd_corner_points(p: &JointPmf, d: f64) -> CornerPair {
    let h = entropies(p);
    let p1 = RatePair { rx: (h.hx_y - d).max(0.0), ry: h.hy.min(h.hy - (d - h.hx_y)).max(0.0) };
    let p2 = RatePair { rx: h.hx.min(h.hx - (d - h.hy_x)).max(0.0), ry: (h.hy_x - d).max(0.0) };
    CornerPair { p1, p2 }
}

/// Evenly spaced points on the dominant face from `P₁` to `P₂`.
///
/// Only the face is sampled: on the axis-parallel rays beyond the corners one
/// coordinate can be lowered without leaving the region.
pub fn jd_boundary(p: &JointPmf, d: f64, samples: usize) -> Result<Vec<RatePair>> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("samples = {samples}, need at least 2")));
    }
    let c = jd_corner_points(p, d);
    let last = (samples - 1) as f64;
    Ok((0..samples)
        .map(|i| {
            let t = i as f64 / last;
            RatePair { rx: c.p1.rx + t * (c.p2.rx - c.p1.rx), ry: c.p1.ry + t * (c.p2.ry - c.p1.ry) }
        })
        .collect())
}

/// `max(H(X) − d, 0)`.
pub fn rd_logloss(p_x: &Dist, d: f64) -> f64 {
    (p_x.entropy() - d).max(0.0)
}

/// `max(H(X|Y) − d, 0)`: rate for X with Y at the decoder only.
pub fn wz_logloss(p: &JointPmf, d: f64) -> f64 {
    (p.conditional_entropy(Axis::Y) - d).max(0.0)
}
