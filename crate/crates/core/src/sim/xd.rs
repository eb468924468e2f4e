//! Reconstructing `X` with a rate-limited description of `Y` as helper.
//!
//! The `Y` encoder quantizes `yⁿ` to the first codeword of an i.i.d. `p(u)`
//! codebook that is jointly typical with it. The `X` encoder time-shares a
//! lossless binned prefix, decoded with `uⁿ` as side information, with
//! silent symbols reproduced as `p(x | uᵢ)`.

use rand::Rng;
use rand_distr::{Distribution, Geometric};

use super::binning::{lossless_block, space_size, Space};
use super::timeshare::split_len;
use super::{clamped_mean, run_trials, sample_pairs, Outcome, SimConfig, SimResult};
use crate::error::{Error, Result};
use crate::pmf::{AuxChannel, AuxJoint, Axis, Dist, JointPmf};

struct XdCode {
    n: usize,
    n1: usize,
    codebook_bits: u32,
    h_x_given_u: f64,
    h_x: f64,
    h_y: f64,
    h_u: f64,
    h_yu: f64,
    log_py: Vec<f64>,
    log_pu: Vec<f64>,
    /// `log2 p(y, u)` at `y·k + u`.
    log_pyu: Vec<f64>,
    x_given_u: Vec<Dist>,
    px: Dist,
    k: usize,
    m: usize,
}

/// All `uⁿ` jointly typical with `yⁿ`, with their probabilities under `p(u)`.
fn typical_codewords(c: &XdCode, ys: &[usize], eps: f64) -> Result<Vec<(Vec<usize>, f64)>> {
    let n = ys.len() as f64;
    let ly: f64 = ys.iter().map(|&b| c.log_py[b]).sum();
    if (-ly / n - c.h_y).abs() >= eps {
        return Ok(vec![]);
    }
    let supports: Vec<Vec<usize>> =
        ys.iter().map(|&b| (0..c.k).filter(|&u| c.log_pyu[b * c.k + u].is_finite()).collect()).collect();
    let size: f64 = supports.iter().map(|s| s.len() as f64).product();
    if size > super::SPACE_LIMIT as f64 {
        return Err(Error::EnumerationTooLarge { size, limit: super::SPACE_LIMIT as f64 });
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ys.len());
    #[allow(clippy::too_many_arguments)]
    fn walk(
        i: usize,
        lu: f64,
        lyu: f64,
        c: &XdCode,
        ys: &[usize],
        supports: &[Vec<usize>],
        eps: f64,
        cur: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, f64)>,
    ) {
        let n = ys.len() as f64;
        if i == ys.len() {
            if (-lu / n - c.h_u).abs() < eps && (-lyu / n - c.h_yu).abs() < eps {
                out.push((cur.clone(), lu.exp2()));
            }
            return;
        }
        for &u in &supports[i] {
            cur.push(u);
            walk(i + 1, lu + c.log_pu[u], lyu + c.log_pyu[ys[i] * c.k + u], c, ys, supports, eps, cur, out);
            cur.pop();
        }
    }
    walk(0, 0.0, 0.0, c, ys, &supports, eps, &mut cur, &mut out);
    Ok(out)
}

/// `X` reconstructed within log-loss `dx` using the helper channel `a`.
///
/// The `U` codebook has `2^⌈n(I(Y;U) + eps)⌉` codewords. Instead of drawing it,
/// the index of the first typical codeword is drawn from its exact geometric
/// law and the codeword itself from `p(uⁿ)` restricted to the typical set,
/// which has the same distribution. An index past the end of the codebook is
/// an encoding failure, after which the decoder falls back to `p(x)`.
pub fn simulate_xd(p: &JointPmf, a: &AuxChannel, cfg: &SimConfig, dx: f64) -> Result<SimResult> {
    cfg.validate()?;
    crate::error::nonnegative("dx", dx)?;
    let aux = AuxJoint::new(p.clone(), a.clone())?;
    let k = a.k();
    let yu = aux.joint().yu();
    let xu = aux.joint().xu();
    let pu = aux.p_u();
    let h_x_given_u = aux.h_x_given_u();
    let n1 = if dx < h_x_given_u { split_len(1.0 - dx / h_x_given_u, cfg.n) } else { 0 };
    super::binning::lossless_bits(p.m(), n1, h_x_given_u + 2.0 * cfg.eps)?;
    let rate_u = aux.mutual_information(crate::pmf::Pair::YU) + cfg.eps;
    let codebook_bits = (cfg.n as f64 * rate_u - 1e-9).ceil() as u32;
    if codebook_bits > 62 {
        return Err(Error::InvalidParameter(format!("codebook of 2^{codebook_bits} words")));
    }
    let lg = |v: f64| if v > 0.0 { v.log2() } else { f64::NEG_INFINITY };
    let code = XdCode {
        n: cfg.n,
        n1,
        codebook_bits,
        h_x_given_u,
        h_x: p.entropy_of(Axis::X),
        h_y: p.entropy_of(Axis::Y),
        h_u: pu.entropy(),
        h_yu: yu.joint_entropy(),
        log_py: p.marginal_y().probs().iter().map(|&v| lg(v)).collect(),
        log_pu: pu.probs().iter().map(|&v| lg(v)).collect(),
        log_pyu: yu.as_slice().iter().map(|&v| lg(v)).collect(),
        x_given_u: (0..k).map(|u| xu.posterior(Axis::Y, u).unwrap_or_else(|_| p.marginal_x())).collect(),
        px: p.marginal_x(),
        k,
        m: p.m(),
    };
    space_size(p.m(), n1)?;
    run_trials(cfg, |rng| xd_trial(&code, p, cfg, rng).map(|(o, _)| o))
}

/// `(xⁿ, uⁿ, reproductions)` as seen after a successful encoding.
type Decoded = (Vec<usize>, Vec<usize>, Vec<Dist>);

/// One block; also returns what the decoder saw when encoding succeeded.
fn xd_trial(c: &XdCode, p: &JointPmf, cfg: &SimConfig, rng: &mut impl Rng) -> Result<(Outcome, Option<Decoded>)> {
    let (x, y) = sample_pairs(rng, p, c.n);
    let typical = typical_codewords(c, &y, cfg.eps)?;
    let q: f64 = typical.iter().map(|(_, w)| w).sum();
    let u = if q > 0.0 {
        let first = if q >= 1.0 { 0 } else { Geometric::new(q).expect("0 < q < 1").sample(rng) };
        let pick = rng.random::<f64>() * q;
        let mut acc = 0.0;
        let chosen = typical
            .iter()
            .find(|(_, w)| {
                acc += w;
                acc > pick
            })
            .unwrap_or(typical.last().expect("nonempty"));
        (first < (1u64 << c.codebook_bits)).then(|| chosen.0.clone())
    } else {
        None
    };
    let cond_of = |i: usize| -> &[f64] {
        match &u {
            Some(u) => c.x_given_u[u[i]].probs(),
            None => c.px.probs(),
        }
    };
    let cond: Vec<&[f64]> = (0..c.n1).map(cond_of).collect();
    let h = if u.is_some() { c.h_x_given_u } else { c.h_x };
    let lossless = lossless_block(rng, Space::X, &x[..c.n1], &cond, c.m, c.h_x_given_u + 2.0 * cfg.eps, h, cfg.eps)?;
    let mut reps = lossless.reproductions.clone();
    reps.extend((c.n1..c.n).map(|i| Dist::from_raw_unchecked(cond_of(i).to_vec())));
    let (distortion, clamped) = clamped_mean(reps.iter().zip(&x).map(|(r, &a)| r.prob(a)), c.n, cfg.clamp);
    let outcome = Outcome {
        distortion,
        error: u.is_none() || (c.n1 > 0 && lossless.error),
        clamped,
        bits_x: lossless.bits,
        bits_y: c.codebook_bits,
    };
    Ok((outcome, u.map(|u| (x, u, reps))))
}
