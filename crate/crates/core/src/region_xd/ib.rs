//! Lagrangian alternating minimization of `H(X|U) + λ·I(Y;U)` over `p(u|y)`.
//!
//! With `β = 1/λ` this is the information-bottleneck functional, and the
//! channel update is the usual exponential tilting
//! `p(u|y) ∝ p(u) · 2^(−β·KL(p(x|y) ‖ p(x|u)))`.

use rand::Rng;
use rand_distr::Exp1;

use super::{channel_stats, Tables};

pub(crate) struct IbRun {
    pub w: Vec<f64>,
    pub rate: f64,
    pub value: f64,
    pub converged: bool,
}

/// Dirichlet(1) rows.
pub(crate) fn random_channel(rng: &mut impl Rng, l: usize, k: usize) -> Vec<f64> {
    let mut w = Vec::with_capacity(l * k);
    for _ in 0..l {
        let row: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(Exp1) + 1e-12).collect();
        let s: f64 = row.iter().sum();
        w.extend(row.iter().map(|v| v / s));
    }
    w
}

pub(crate) fn ib_solve(t: &Tables, beta: f64, init: &[f64], k: usize, max_iter: usize, rel_tol: f64) -> IbRun {
    let (m, l) = (t.m, t.l);
    let mut w = init.to_vec();
    let mut pu = vec![0.0; k];
    let mut px_u = vec![0.0; m * k];
    let mut logits = vec![0.0; k];
    let (mut rate, mut value) = channel_stats(t, &w, k);
    let mut obj = value + rate / beta;
    let mut converged = false;
    for _ in 0..max_iter {
        pu.iter_mut().for_each(|v| *v = 0.0);
        px_u.iter_mut().for_each(|v| *v = 0.0);
        for y in 0..l {
            for u in 0..k {
                let wyu = w[y * k + u];
                pu[u] += t.py[y] * wyu;
                for x in 0..m {
                    px_u[x * k + u] += t.pxy[x * l + y] * wyu;
                }
            }
        }
        for u in 0..k {
            if pu[u] > 0.0 {
                for x in 0..m {
                    px_u[x * k + u] /= pu[u];
                }
            }
        }
        for y in 0..l {
            if t.py[y] <= 0.0 {
                continue;
            }
            let mut top = f64::NEG_INFINITY;
            for u in 0..k {
                logits[u] = if pu[u] > 0.0 {
                    let mut kl = 0.0;
                    for x in 0..m {
                        let a = t.px_y[x * l + y];
                        if a > 0.0 {
                            let b = px_u[x * k + u];
                            kl += if b > 0.0 { a * (a / b).log2() } else { f64::INFINITY };
                        }
                    }
                    pu[u].log2() - beta * kl
                } else {
                    f64::NEG_INFINITY
                };
                top = top.max(logits[u]);
            }
            let mut s = 0.0;
            for u in 0..k {
                let e = if logits[u].is_finite() { (logits[u] - top).exp2() } else { 0.0 };
                w[y * k + u] = e;
                s += e;
            }
            for u in 0..k {
                w[y * k + u] /= s;
            }
        }
        (rate, value) = channel_stats(t, &w, k);
        let next = value + rate / beta;
        let delta = (obj - next).abs();
        obj = next;
        if delta <= rel_tol * obj.abs().max(1e-12) {
            converged = true;
            break;
        }
    }
    IbRun { w, rate, value, converged }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmf::JointPmf;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn objective_never_increases() {
        let p = JointPmf::from_rows(&[vec![0.3, 0.1, 0.1], vec![0.05, 0.25, 0.2]]).unwrap();
        let t = Tables::new(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let k = 5;
        let init = random_channel(&mut rng, 3, k);
        let beta = 4.0;
        let mut prev = {
            let (r, v) = channel_stats(&t, &init, k);
            v + r / beta
        };
        let mut w = init;
        for _ in 0..50 {
            let run = ib_solve(&t, beta, &w, k, 1, 0.0);
            let obj = run.value + run.rate / beta;
            assert!(obj <= prev + 1e-12, "{obj} > {prev}");
            prev = obj;
            w = run.w;
        }
    }

    #[test]
    fn small_beta_collapses() {
        let p = JointPmf::dsbs(0.25);
        let t = Tables::new(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let init = random_channel(&mut rng, 2, 4);
        let run = ib_solve(&t, 0.9, &init, 4, 2000, 1e-12);
        assert!(run.rate < 1e-6);
        assert!((run.value - 1.0).abs() < 1e-6);
    }

    #[test]
    fn rows_stay_normalized() {
        let p = JointPmf::dsbs(0.1);
        let t = Tables::new(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let init = random_channel(&mut rng, 2, 4);
        let run = ib_solve(&t, 30.0, &init, 4, 500, 1e-10);
        for row in run.w.chunks(4) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
