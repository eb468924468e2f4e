//! Time-sharing codes: single-source coding with or without decoder side
//! information, and joint coding of `(X, Y)` between the two corner points.

use rand::Rng;

use super::binning::{lossless_block, Lossless, Space, TypicalIndex};
use super::{clamped_mean, run_trials, sample_pairs, Outcome, SimConfig, SimResult};
use crate::error::{Error, Result};
use crate::logloss::{decompose_distortion, DistortionSplit, Reproduction, ReproductionSeq};
use crate::pmf::{Axis, Dist, JointPmf};

/// `⌊frac · n⌋`, robust to `frac · n` landing a hair below an integer.
pub(crate) fn split_len(frac: f64, n: usize) -> usize {
    ((frac * n as f64 + 1e-9).floor().max(0.0) as usize).min(n)
}

/// `p(a | b)` for every value `b` of the conditioning coordinate; the
/// marginal of `a` stands in for null symbols.
fn conditionals(p: &JointPmf, given: Axis) -> Vec<Dist> {
    let (count, other) = match given {
        Axis::X => (p.m(), Axis::Y),
        Axis::Y => (p.l(), Axis::X),
    };
    (0..count).map(|b| p.posterior(given, b).unwrap_or_else(|_| p.marginal(other))).collect()
}

/// One block of the side-information code.
// the full trace is only inspected by tests
#[cfg_attr(not(test), allow(dead_code))]
#[derive(Clone, Debug)]
pub(crate) struct WzTrace {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    /// Length of the lossless prefix.
    pub n1: usize,
    pub lossless: Lossless,
    pub reproductions: Vec<Dist>,
    pub outcome: Outcome,
}

pub(crate) struct WzCode {
    n: usize,
    n1: usize,
    h: f64,
    m: usize,
    post: Vec<Dist>,
}

impl WzCode {
    pub fn new(p: &JointPmf, cfg: &SimConfig, rate: f64) -> Result<Self> {
        cfg.validate()?;
        crate::error::nonnegative("rate", rate)?;
        let h = p.conditional_entropy(Axis::Y);
        let n1 = split_len(rate / (h + cfg.eps), cfg.n);
        super::binning::lossless_bits(p.m(), n1, h + cfg.eps)?;
        Ok(WzCode { n: cfg.n, n1, h, m: p.m(), post: conditionals(p, Axis::Y) })
    }

    pub fn trace(&self, p: &JointPmf, cfg: &SimConfig, rng: &mut impl Rng) -> Result<WzTrace> {
        let (x, y) = sample_pairs(rng, p, self.n);
        let cond: Vec<&[f64]> = y[..self.n1].iter().map(|&b| self.post[b].probs()).collect();
        let lossless = lossless_block(rng, Space::X, &x[..self.n1], &cond, self.m, self.h + cfg.eps, self.h, cfg.eps)?;
        let mut reproductions = lossless.reproductions.clone();
        reproductions.extend(y[self.n1..].iter().map(|&b| self.post[b].clone()));
        let (distortion, clamped) =
            clamped_mean(reproductions.iter().zip(&x).map(|(r, &a)| r.prob(a)), self.n, cfg.clamp);
        let outcome =
            Outcome { distortion, error: self.n1 > 0 && lossless.error, clamped, bits_x: lossless.bits, bits_y: 0 };
        Ok(WzTrace { x, y, n1: self.n1, lossless, reproductions, outcome })
    }
}

/// `X` at `rate` bits/symbol with `Y` known only to the decoder.
///
/// A prefix of `⌊rate·n / (H(X|Y) + eps)⌋` symbols is binned at
/// `H(X|Y) + eps` bits/symbol and decoded to its exact posterior given the
/// bin and `Y`; the remaining symbols are reproduced as `p(x | yᵢ)`.
pub fn simulate_wz(p: &JointPmf, cfg: &SimConfig, rate: f64) -> Result<SimResult> {
    let code = WzCode::new(p, cfg, rate)?;
    run_trials(cfg, |rng| Ok(code.trace(p, cfg, rng)?.outcome))
}

/// [`simulate_wz`] without side information.
pub fn simulate_rd_point(p_x: &Dist, cfg: &SimConfig, rate: f64) -> Result<SimResult> {
    simulate_wz(&JointPmf::independent(p_x, &Dist::point(1, 0)), cfg, rate)
}

/// One corner-point code on a sub-block: the primary source is sent
/// losslessly on a prefix, the secondary is binned with the primary as
/// decoder side information on a shorter prefix.
struct CornerCode {
    primary: Axis,
    n_sub: usize,
    /// Positions carrying the primary source.
    n_p: usize,
    /// Positions carrying the secondary source too.
    n_a: usize,
    h_sec_given_prim: f64,
    h_sec: f64,
    typical: TypicalIndex,
    sec_given_prim: Vec<Dist>,
    prim_given_sec: Vec<Dist>,
    sec_marginal: Dist,
}

impl CornerCode {
    fn new(p: &JointPmf, d: f64, n_sub: usize, primary: Axis, eps: f64) -> Result<Self> {
        let secondary = match primary {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        };
        let h_sec_given_prim = p.conditional_entropy(primary);
        let h_prim = p.entropy_of(primary);
        let (n_p, n_a) = if d <= h_sec_given_prim {
            // primary everywhere, secondary silent on a d / H(S|P) share
            let n_a = if h_sec_given_prim > 0.0 { split_len(1.0 - d / h_sec_given_prim, n_sub) } else { 0 };
            (n_sub, n_a)
        } else {
            let frac = if h_prim > 0.0 { ((p.joint_entropy() - d) / h_prim).clamp(0.0, 1.0) } else { 0.0 };
            (split_len(frac, n_sub), 0)
        };
        let sec_alphabet = match secondary {
            Axis::X => p.m(),
            Axis::Y => p.l(),
        };
        super::binning::lossless_bits(sec_alphabet, n_a, h_sec_given_prim + eps)?;
        Ok(CornerCode {
            primary,
            n_sub,
            n_p,
            n_a,
            h_sec_given_prim,
            h_sec: p.entropy_of(secondary),
            typical: TypicalIndex::new(&p.marginal(primary), n_p, eps)?,
            sec_given_prim: conditionals(p, primary),
            prim_given_sec: conditionals(p, secondary),
            sec_marginal: p.marginal(secondary),
        })
    }

    /// Joint reproduction over `(x, y)` from a mass function on (secondary, primary).
    fn joint(&self, p: &JointPmf, f: impl Fn(usize, usize) -> f64) -> Reproduction {
        let (m, l) = (p.m(), p.l());
        let q = (0..m * l)
            .map(|i| {
                let (x, y) = (i / l, i % l);
                match self.primary {
                    Axis::Y => f(x, y),
                    Axis::X => f(y, x),
                }
            })
            .collect();
        Reproduction::joint(m, l, Dist::from_raw_unchecked(q)).expect("dimensions match")
    }

    /// Returns reproductions, (secondary bits, primary bits) and the error flag.
    fn run(
        &self,
        rng: &mut impl Rng,
        p: &JointPmf,
        xs: &[usize],
        ys: &[usize],
        eps: f64,
    ) -> Result<(Vec<Reproduction>, u32, u32, bool)> {
        let (sec, prim) = match self.primary {
            Axis::Y => (xs, ys),
            Axis::X => (ys, xs),
        };
        let known = self.typical.is_typical(&prim[..self.n_p]);
        let cond: Vec<&[f64]> = (0..self.n_a)
            .map(|i| if known { self.sec_given_prim[prim[i]].probs() } else { self.sec_marginal.probs() })
            .collect();
        let h = if known { self.h_sec_given_prim } else { self.h_sec };
        let alphabet = self.sec_marginal.len();
        let lossless = lossless_block(
            rng,
            Space::from(self.primary.other()),
            &sec[..self.n_a],
            &cond,
            alphabet,
            self.h_sec_given_prim + eps,
            h,
            eps,
        )?;
        let prior = self.joint(p, |s, pp| match self.primary {
            Axis::Y => p.get(s, pp),
            Axis::X => p.get(pp, s),
        });
        let point = |pp: usize, b: usize| if pp == b { 1.0 } else { 0.0 };
        let reps = (0..self.n_sub)
            .map(|i| {
                if i < self.n_a {
                    let q = &lossless.reproductions[i];
                    if known {
                        self.joint(p, |s, pp| q.prob(s) * point(pp, prim[i]))
                    } else {
                        self.joint(p, |s, pp| q.prob(s) * self.prim_given_sec[s].prob(pp))
                    }
                } else if i < self.n_p && known {
                    let c = &self.sec_given_prim[prim[i]];
                    self.joint(p, |s, pp| c.prob(s) * point(pp, prim[i]))
                } else {
                    prior.clone()
                }
            })
            .collect();
        let error = !known || (self.n_a > 0 && lossless.error);
        Ok((reps, lossless.bits, self.typical.bits, error))
    }
}

impl Axis {
    fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }
}

impl From<Axis> for Space {
    fn from(a: Axis) -> Space {
        match a {
            Axis::X => Space::X,
            Axis::Y => Space::Y,
        }
    }
}

/// One block of the joint code.
#[derive(Clone, Debug)]
pub(crate) struct JdTrace {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub reproductions: Vec<Reproduction>,
    pub outcome: Outcome,
}

pub(crate) struct JdCode {
    n: usize,
    /// Positions `[0, n1)` run at the Y-primary corner, the rest at the X-primary one.
    n1: usize,
    first: CornerCode,
    second: CornerCode,
}

impl JdCode {
    pub fn new(p: &JointPmf, cfg: &SimConfig, d: f64, mix: f64) -> Result<Self> {
        cfg.validate()?;
        if !(0.0..=1.0).contains(&mix) {
            return Err(Error::InvalidParameter(format!("mix = {mix} outside [0, 1]")));
        }
        crate::error::nonnegative("d", d)?;
        let n1 = split_len(mix, cfg.n);
        Ok(JdCode {
            n: cfg.n,
            n1,
            first: CornerCode::new(p, d, n1, Axis::Y, cfg.eps)?,
            second: CornerCode::new(p, d, cfg.n - n1, Axis::X, cfg.eps)?,
        })
    }

    pub fn trace(&self, p: &JointPmf, cfg: &SimConfig, rng: &mut impl Rng) -> Result<JdTrace> {
        let (x, y) = sample_pairs(rng, p, self.n);
        let (mut reproductions, bx1, by1, e1) = self.first.run(rng, p, &x[..self.n1], &y[..self.n1], cfg.eps)?;
        let (reps2, by2, bx2, e2) = self.second.run(rng, p, &x[self.n1..], &y[self.n1..], cfg.eps)?;
        reproductions.extend(reps2);
        let masses = reproductions.iter().enumerate().map(|(i, r)| r.mass(x[i], Some(y[i])).expect("joint support"));
        let (distortion, clamped) = clamped_mean(masses, self.n, cfg.clamp);
        let outcome = Outcome { distortion, error: e1 || e2, clamped, bits_x: bx1 + bx2, bits_y: by1 + by2 };
        Ok(JdTrace { x, y, reproductions, outcome })
    }
}

/// Joint log-loss coding of `(X, Y)` at distortion `d`, time-sharing a `mix`
/// share of the block at the corner where `Y` is sent first and the rest at
/// the corner where `X` is.
///
/// At a corner the first source is indexed within its weakly typical set.
/// When `d ≤ H(S|P)` the second source is binned with the first as side
/// information on a `1 − d/H(S|P)` share and left to `p(s | p)` on the
/// rest; otherwise the second source is never sent and the first is sent on
/// just enough symbols to bring the distortion down to `d`.
pub fn simulate_jd_timeshare(p: &JointPmf, cfg: &SimConfig, d: f64, mix: f64) -> Result<SimResult> {
    let code = JdCode::new(p, cfg, d, mix)?;
    run_trials(cfg, |rng| Ok(code.trace(p, cfg, rng)?.outcome))
}

/// Average split of the joint distortion of [`simulate_jd_timeshare`] into
/// its `X` part and its `Y`-given-`X` part, over the same trials.
pub fn jd_timeshare_split(p: &JointPmf, cfg: &SimConfig, d: f64, mix: f64) -> Result<DistortionSplit> {
    use rayon::prelude::*;
    let code = JdCode::new(p, cfg, d, mix)?;
    let splits = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let tr = code.trace(p, cfg, &mut cfg.rng(t))?;
            decompose_distortion(&ReproductionSeq::new(tr.reproductions)?, &tr.x, &tr.y)
        })
        .collect::<Result<Vec<_>>>()?;
    let t = splits.len() as f64;
    let avg = |f: fn(&DistortionSplit) -> f64| splits.iter().map(f).sum::<f64>() / t;
    Ok(DistortionSplit { d_total: avg(|s| s.d_total), d_x: avg(|s| s.d_x), d_y_given_x: avg(|s| s.d_y_given_x) })
}
