//! Support reduction for auxiliary channels.
//!
//! A channel is a mixture over `u` of conditionals `p(y|u)` with weights
//! `p(u)`. The quantities the region depends on are linear in those weights:
//! `p(y)` (one row per `y`), `H(X|U)` and `H(Y|U)`. That is `l + 2` linear
//! constraints, so some optimal mixture uses at most `l + 2` points. While the
//! support is larger, a null vector of the constraint matrix gives a direction
//! that keeps every constraint fixed and can be followed until a weight hits 0.

use nalgebra::DMatrix;

use super::Tables;
use crate::pmf::plogp;

/// Reduces `w` (`l × k`) to at most `l + 2` used labels and returns it as an
/// `l × (l + 2)` channel.
pub(crate) fn reduce_support(t: &Tables, w: &[f64], k: usize) -> Vec<f64> {
    let (m, l) = (t.m, t.l);
    // weights p(u) and conditionals p(y|u) for the labels in use
    let mut weights = Vec::new();
    let mut conds: Vec<Vec<f64>> = Vec::new();
    for u in 0..k {
        let pu: f64 = (0..l).map(|y| t.py[y] * w[y * k + u]).sum();
        if pu > 0.0 {
            weights.push(pu);
            conds.push((0..l).map(|y| t.py[y] * w[y * k + u] / pu).collect());
        }
    }
    let h_of = |c: &[f64]| -> (f64, f64) {
        let hy: f64 = c.iter().map(|&v| plogp(v)).sum();
        let hx: f64 = (0..m).map(|x| plogp((0..l).map(|y| t.px_y[x * l + y] * c[y]).sum())).sum();
        (hx, hy)
    };
    let rows = l + 2;
    while weights.len() > rows {
        let s = weights.len();
        let mut a = DMatrix::<f64>::zeros(s, s);
        for (j, c) in conds.iter().enumerate() {
            for y in 0..l {
                a[(y, j)] = c[y];
            }
            let (hx, hy) = h_of(c);
            a[(l, j)] = hx;
            a[(l + 1, j)] = hy;
        }
        let svd = a.svd(false, true);
        let v_t = svd.v_t.expect("requested V");
        let (idx, _) = svd.singular_values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("nonempty");
        let mut dir: Vec<f64> = v_t.row(idx).iter().copied().collect();
        if dir.iter().all(|&d| d <= 0.0) {
            dir.iter_mut().for_each(|d| *d = -*d);
        }
        // largest step keeping all weights nonnegative
        let (hit, step) = dir
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0.0)
            .map(|(j, &d)| (j, weights[j] / d))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("null vector sums to zero so has a positive entry");
        for j in 0..s {
            weights[j] = (weights[j] - step * dir[j]).max(0.0);
        }
        weights[hit] = 0.0;
        let keep: Vec<usize> = (0..s).filter(|&j| weights[j] > 0.0).collect();
        weights = keep.iter().map(|&j| weights[j]).collect();
        conds = keep.iter().map(|&j| conds[j].clone()).collect();
    }
    let total: f64 = weights.iter().sum();
    let mut out = vec![0.0; l * rows];
    for y in 0..l {
        if t.py[y] > 0.0 {
            let col: Vec<f64> = weights.iter().zip(&conds).map(|(wu, c)| wu / total * c[y]).collect();
            let s: f64 = col.iter().sum();
            for (u, v) in col.iter().enumerate() {
                out[y * rows + u] = v / s;
            }
        } else {
            out[y * rows] = 1.0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::{channel_stats, ib::random_channel};
    use super::*;
    use crate::pmf::JointPmf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn preserves_rate_and_value() {
        let p = JointPmf::from_rows(&[vec![0.3, 0.1, 0.1], vec![0.05, 0.25, 0.2]]).unwrap();
        let t = Tables::new(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for k in [6, 9, 14] {
            let w = random_channel(&mut rng, 3, k);
            let (r0, v0) = channel_stats(&t, &w, k);
            let out = reduce_support(&t, &w, k);
            let (r1, v1) = channel_stats(&t, &out, 5);
            assert!((r0 - r1).abs() < 1e-10, "{r0} {r1}");
            assert!((v0 - v1).abs() < 1e-10, "{v0} {v1}");
            for row in out.chunks(5) {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                assert!(row.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn small_support_is_kept() {
        let p = JointPmf::dsbs(0.25);
        let t = Tables::new(&p);
        let w = vec![1.0, 0.0, 0.0, 1.0];
        let out = reduce_support(&t, &w, 2);
        assert_eq!(out, vec![1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
    }
}
