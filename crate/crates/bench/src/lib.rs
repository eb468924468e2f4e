//! Inputs shared by the benchmarks.

use mtlogloss::{JdQuery, JointPmf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A strictly positive `m × l` pmf drawn from `seed`.
pub fn random_pmf(m: usize, l: usize, seed: u64) -> JointPmf {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w: Vec<f64> = (0..m * l).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = w.iter().sum();
    JointPmf::from_fn(m, l, |x, y| w[x * l + y] / total).expect("normalized weights")
}

/// Uniform queries over the box that contains the interesting part of the region.
pub fn random_queries(p: &JointPmf, count: usize, seed: u64) -> Vec<JdQuery> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (hx, hy, hxy) = (p.marginal_x().entropy(), p.marginal_y().entropy(), p.joint_entropy());
    (0..count)
        .map(|_| JdQuery {
            rx: rng.random::<f64>() * (hx + 1.0),
            ry: rng.random::<f64>() * (hy + 1.0),
            d: rng.random::<f64>() * hxy,
        })
        .collect()
}
