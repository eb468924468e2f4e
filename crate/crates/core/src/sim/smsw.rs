//! Recovering both sources exactly from a joint log-loss code plus two extra
//! bin indices.
//!
//! The reproductions of the inner code act as a list decoder: only sequences
//! whose log-loss against them is small are plausible, and there are few of
//! those, so a short extra bin index singles out the truth.

use rand::Rng;
use serde::Serialize;

use super::binning::{seq_index, space_size, BinAssignment, Space};
use super::timeshare::JdCode;
use super::{run_trials, Outcome, SimConfig, SimResult};
use crate::error::Result;
use crate::logloss::{enumerate_within, surprisal, DistortionSplit, Reproduction};
use crate::pmf::JointPmf;

/// Rates of the extra bin indices, in bits/symbol.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtraBinRates {
    pub x: f64,
    pub y: f64,
}

impl ExtraBinRates {
    /// `D_x + 3·eps` and `D_{y|x} + 3·eps`.
    pub fn from_split(split: &DistortionSplit, eps: f64) -> Self {
        ExtraBinRates { x: split.d_x + 3.0 * eps, y: split.d_y_given_x + 3.0 * eps }
    }
}

/// Unique sequence in bin `target` whose summed cost is below `limit`.
fn unique_in_bin(
    rng: &mut impl Rng,
    space: Space,
    costs: &[Vec<f64>],
    truth: &[usize],
    rate: f64,
    limit: f64,
) -> Result<(Option<Vec<usize>>, u32)> {
    let (n, alphabet) = (costs.len(), costs[0].len());
    let size = space_size(alphabet, n)?;
    let bits = (n as f64 * rate - 1e-9).ceil().max(0.0) as u32;
    let bins = BinAssignment::random(rng, space, size, 1u64.checked_shl(bits).unwrap_or(u64::MAX).min(size));
    let target = bins.bin_of(seq_index(truth, alphabet));
    let mut found =
        enumerate_within(costs, limit, true).into_iter().filter(|s| bins.bin_of(seq_index(s, alphabet)) == target);
    let first = found.next();
    Ok((if found.next().is_none() { first } else { None }, bits))
}

/// Decodes `xⁿ` then `yⁿ` from the inner joint code's reproductions and two
/// extra bins, declaring an error unless each search returns exactly the
/// truth.
///
/// The inner code is [`simulate_jd_timeshare`](super::simulate_jd_timeshare)
/// at `(d, mix)`; `split` gives the per-source distortion targets the
/// searches are centered on.
pub fn simulate_smsw(
    p: &JointPmf,
    cfg: &SimConfig,
    d: f64,
    mix: f64,
    split: &DistortionSplit,
    extra: ExtraBinRates,
) -> Result<SimResult> {
    crate::error::nonnegative("extra x rate", extra.x)?;
    crate::error::nonnegative("extra y rate", extra.y)?;
    space_size(p.m(), cfg.n)?;
    space_size(p.l(), cfg.n)?;
    let code = JdCode::new(p, cfg, d, mix)?;
    let n = cfg.n as f64;
    run_trials(cfg, |rng| {
        let tr = code.trace(p, cfg, rng)?;
        let marginals: Vec<Vec<f64>> = tr
            .reproductions
            .iter()
            .map(|r: &Reproduction| r.marginal_x().probs().iter().map(|&q| surprisal(q)).collect())
            .collect();
        let (x_hat, bits_x) = unique_in_bin(rng, Space::X, &marginals, &tr.x, extra.x, n * (split.d_x + cfg.eps))?;
        let mut error = x_hat.as_deref() != Some(tr.x.as_slice());
        let mut bits_y = (n * extra.y - 1e-9).ceil().max(0.0) as u32;
        if let Some(xh) = &x_hat {
            let conditionals: Vec<Vec<f64>> = tr
                .reproductions
                .iter()
                .zip(xh)
                .map(|(r, &a)| match r.conditional_y(a) {
                    Some(c) => c.probs().iter().map(|&q| surprisal(q)).collect(),
                    None => vec![f64::INFINITY; p.l()],
                })
                .collect();
            let (y_hat, b) =
                unique_in_bin(rng, Space::Y, &conditionals, &tr.y, extra.y, n * (split.d_y_given_x + cfg.eps))?;
            bits_y = b;
            error |= y_hat.as_deref() != Some(tr.y.as_slice());
        }
        let bits_x_total = tr.outcome.bits_x + bits_x;
        Ok(Outcome { error, bits_x: bits_x_total, bits_y: tr.outcome.bits_y + bits_y, ..tr.outcome })
    })
}

#[cfg(test)]
mod tests {
    use super::super::jd_timeshare_split;
    use super::*;

    #[test]
    fn lossless_inner_code_never_errs() {
        let p = JointPmf::dsbs(0.25);
        let cfg = SimConfig::new(12, 0.1, 100);
        let split = DistortionSplit { d_total: 0.0, d_x: 0.0, d_y_given_x: 0.0 };
        let r = simulate_smsw(&p, &cfg, 0.0, 0.5, &split, ExtraBinRates { x: 0.05, y: 0.05 }).unwrap();
        // the only errors left are failures of the inner code itself
        assert!(r.block_error_rate <= 0.05, "{r:?}");
    }

    #[test]
    fn no_extra_bins_is_ambiguous() {
        let p = JointPmf::dsbs(0.25);
        let cfg = SimConfig::new(16, 0.1, 200);
        let split = jd_timeshare_split(&p, &cfg, 0.3, 0.5).unwrap();
        let r = simulate_smsw(&p, &cfg, 0.3, 0.5, &split, ExtraBinRates { x: 0.0, y: 0.0 }).unwrap();
        assert!(r.block_error_rate >= 0.5);
    }

    #[test]
    fn more_extra_rate_never_hurts() {
        let p = JointPmf::dsbs(0.25);
        let cfg = SimConfig::new(16, 0.1, 300);
        let split = jd_timeshare_split(&p, &cfg, 0.3, 0.5).unwrap();
        let mut prev = 1.0;
        for extra in [0.0, 0.1, 0.3, 0.6] {
            let r = simulate_smsw(&p, &cfg, 0.3, 0.5, &split, ExtraBinRates { x: extra, y: extra }).unwrap();
            let ci = 1.96 * (0.25f64 / 300.0).sqrt();
            assert!(r.block_error_rate <= prev + ci, "{extra}: {} after {prev}", r.block_error_rate);
            prev = r.block_error_rate;
        }
    }

    #[test]
    fn rates_include_extra_bins() {
        let p = JointPmf::dsbs(0.25);
        let cfg = SimConfig::new(16, 0.1, 4);
        let split = DistortionSplit { d_total: 0.3, d_x: 0.15, d_y_given_x: 0.15 };
        let inner = super::super::simulate_jd_timeshare(&p, &cfg, 0.3, 0.5).unwrap();
        let extra = ExtraBinRates::from_split(&split, 0.1);
        let r = simulate_smsw(&p, &cfg, 0.3, 0.5, &split, extra).unwrap();
        assert!((r.rate_x - inner.rate_x - 8.0 / 16.0).abs() < 1e-12);
        assert_eq!(r.block_distortions, inner.block_distortions);
    }
}
