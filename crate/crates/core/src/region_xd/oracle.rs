//! Exhaustive search over channels whose rows lie on a simplex lattice.
//!
//! The lattice uses `|U| = |Y| + 1` symbols. That many suffice for the
//! `(I(Y;U), H(X|U))` tradeoff: `p(y)`, `H(X|U)` and `H(Y|U)` are `|Y| + 1`
//! continuous functionals over a connected set, so the Fenchel–Eggleston form
//! of Carathéodory's theorem applies. One fewer symbol also keeps the
//! step-0.02 binary case inside the enumeration guard.

use rayon::prelude::*;

use super::{channel_stats, Tables};
use crate::error::{Error, Result};
use crate::pmf::JointPmf;

/// Largest number of lattice channels the oracle will visit.
pub const GRID_LIMIT: f64 = 1e8;

/// Every point of `{w ∈ (ℕ/n)^k : Σ w = 1}`, in lexicographic order.
pub(crate) fn simplex_lattice(k: usize, n: usize) -> Vec<Vec<f64>> {
    fn rec(k: usize, left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<f64>>) {
        if cur.len() == k - 1 {
            cur.push(left);
            out.push(cur.iter().map(|&c| c as f64 / n as f64).collect());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(k, left - c, n, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, n, n, &mut Vec::with_capacity(k), &mut out);
    out
}

fn binomial(n: usize, r: usize) -> f64 {
    (0..r).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Number of lattice channels visited for an `l`-row channel at `grid_step`.
pub fn grid_size(l: usize, grid_step: f64) -> f64 {
    let n = (1.0 / grid_step).round() as usize;
    let k = l + 1;
    binomial(n + k - 1, k - 1).powi(l as i32)
}

/// Minimum of `H(X|U)` over lattice channels with `I(Y;U) ≤ budget`, for each budget.
pub fn xd_grid_oracle_many(p: &JointPmf, budgets: &[f64], grid_step: f64) -> Result<Vec<f64>> {
    if crate::error::positive("grid_step", grid_step)? > 1.0 {
        return Err(Error::InvalidParameter(format!("grid_step = {grid_step} exceeds 1")));
    }
    let size = grid_size(p.l(), grid_step);
    if size > GRID_LIMIT {
        return Err(Error::GridTooLarge { size, limit: GRID_LIMIT });
    }
    let t = Tables::new(p);
    let l = p.l();
    let k = l + 1;
    let n = (1.0 / grid_step).round() as usize;
    let lattice = simplex_lattice(k, n);
    let cap = budgets.iter().map(|b| b + 1e-12).collect::<Vec<_>>();

    let per_first: Vec<Vec<f64>> = (0..lattice.len())
        .into_par_iter()
        .map(|first| {
            let mut best = vec![f64::INFINITY; budgets.len()];
            let mut w = vec![0.0; l * k];
            w[..k].copy_from_slice(&lattice[first]);
            let mut idx = vec![0usize; l];
            idx[0] = first;
            loop {
                for y in 1..l {
                    w[y * k..(y + 1) * k].copy_from_slice(&lattice[idx[y]]);
                }
                let (rate, value) = channel_stats(&t, &w, k);
                for (b, c) in best.iter_mut().zip(&cap) {
                    if rate <= *c && value < *b {
                        *b = value;
                    }
                }
                // odometer over rows 1..l
                let mut y = l;
                loop {
                    if y == 1 {
                        return best;
                    }
                    y -= 1;
                    idx[y] += 1;
                    if idx[y] < lattice.len() {
                        break;
                    }
                    idx[y] = 0;
                }
            }
        })
        .collect();
    let mut out = vec![f64::INFINITY; budgets.len()];
    for row in per_first {
        for (o, v) in out.iter_mut().zip(row) {
            *o = o.min(v);
        }
    }
    Ok(out)
}

pub fn xd_grid_oracle(p: &JointPmf, ry_budget: f64, grid_step: f64) -> Result<f64> {
    Ok(xd_grid_oracle_many(p, &[ry_budget], grid_step)?[0])
}
