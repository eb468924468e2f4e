//! End-to-end use of the public API across modules.

use approx::assert_abs_diff_eq;
use mtlogloss::{
    erasure_rd, jd_boundary, jd_contains_closed, jd_contains_lp, jd_corner_points, rd_logloss, require_converged,
    simulate_rd_point, simulate_wz, simulate_xd, sw_region_contains, wz_logloss, xd_contains, xd_min_hxu,
    xd_tradeoff_curve, AuxChannel, AuxJoint, Axis, Dist, JdQuery, JointPmf, SimConfig, XdOptions, XdQuery,
};

fn skewed() -> JointPmf {
    JointPmf::from_rows(&[vec![0.30, 0.05, 0.05], vec![0.02, 0.25, 0.03], vec![0.10, 0.05, 0.15]]).unwrap()
}

#[test]
fn face_points_are_tight_for_both_membership_tests() {
    for p in [JointPmf::dsbs(0.25), skewed()] {
        for d in [0.0, 0.2, 0.7] {
            for r in jd_boundary(&p, d, 9).unwrap() {
                let on = JdQuery::new(r.rx, r.ry, d).unwrap();
                assert!(jd_contains_closed(&p, &on) && jd_contains_lp(&p, &on).0);
                let below = JdQuery { rx: (r.rx - 1e-3).max(0.0), ry: (r.ry - 1e-3).max(0.0), d };
                assert!(!jd_contains_closed(&p, &below) && !jd_contains_lp(&p, &below).0);
            }
        }
    }
}

#[test]
fn certificate_is_the_minimal_slack_pair() {
    let p = skewed();
    let (hx_y, hy_x) = (p.conditional_entropy(Axis::Y), p.conditional_entropy(Axis::X));
    // sum rate 0.1 below the lossless face, made up by distortion
    let q = JdQuery::new(hx_y + 0.05, p.entropy_of(Axis::Y) - 0.15, 0.3).unwrap();
    let (inside, cert) = jd_contains_lp(&p, &q);
    let c = cert.expect("inside points carry a certificate");
    assert!(inside);
    assert_abs_diff_eq!(c.delta_x, (hx_y - q.rx).max(0.0), epsilon = 1e-12);
    assert_abs_diff_eq!(c.delta_y, (hy_x - q.ry).max(0.0), epsilon = 1e-12);
    // the individual constraints hold at the slacks, the sum constraint at the full budget
    assert!(sw_region_contains(&p, q.rx, q.ry, c.delta_x, c.delta_y + (q.d - c.delta_x - c.delta_y)));
}

#[test]
fn corners_at_zero_distortion_are_the_lossless_corners() {
    let p = skewed();
    let c = jd_corner_points(&p, 0.0);
    assert_abs_diff_eq!(c.p1.rx, p.conditional_entropy(Axis::Y), epsilon = 1e-12);
    assert_abs_diff_eq!(c.p1.ry, p.entropy_of(Axis::Y), epsilon = 1e-12);
    assert_abs_diff_eq!(c.p2.rx, p.entropy_of(Axis::X), epsilon = 1e-12);
    assert_abs_diff_eq!(c.p2.ry, p.conditional_entropy(Axis::X), epsilon = 1e-12);
}

#[test]
fn single_terminal_functions() {
    let fair = Dist::uniform(2);
    for d in [0.0, 0.25, 0.5, 1.0] {
        assert_abs_diff_eq!(rd_logloss(&fair, d), erasure_rd(&fair, d).unwrap(), epsilon = 1e-12);
    }
    let p = skewed();
    assert!(wz_logloss(&p, 0.1) <= rd_logloss(&p.marginal_x(), 0.1));
}

#[test]
fn xd_curve_channels_reproduce_their_values() {
    let p = skewed();
    let opts = XdOptions { restarts: 8, ..XdOptions::default() };
    let curve = xd_tradeoff_curve(&p, 5, &opts).unwrap();
    assert!(curve.converged);
    let g: Vec<f64> = curve.points.iter().map(|c| c.min_h_x_given_u).collect();
    assert!(g.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    for c in &curve.points {
        let joint = AuxJoint::new(p.clone(), c.channel.clone()).unwrap();
        assert_abs_diff_eq!(joint.h_x_given_u(), c.min_h_x_given_u, epsilon = 1e-9);
        assert!(c.rate <= c.ry_budget + 1e-9);
    }
    assert_abs_diff_eq!(g[0], p.entropy_of(Axis::X), epsilon = 1e-6);
    assert_abs_diff_eq!(g[4], p.conditional_entropy(Axis::Y), epsilon = 1e-6);
}

#[test]
fn xd_membership_matches_the_solved_bound() {
    let p = JointPmf::dsbs(0.25);
    let opts = XdOptions { restarts: 8, ..XdOptions::default() };
    let sol = require_converged(xd_min_hxu(&p, 0.5, &opts).unwrap()).unwrap();
    let inside = xd_contains(&p, &XdQuery::new(sol.value - 0.1, 0.5, 0.1 + 1e-3).unwrap(), &opts).unwrap();
    let outside = xd_contains(&p, &XdQuery::new(sol.value - 0.1, 0.5, 0.05).unwrap(), &opts).unwrap();
    assert!(inside.contains && !outside.contains);
}

#[test]
fn simulations_depend_only_on_the_seed() {
    let p = JointPmf::dsbs(0.25);
    let cfg = SimConfig::new(12, 0.1, 60);
    let a = simulate_wz(&p, &cfg, 0.4).unwrap();
    assert_eq!(a, simulate_wz(&p, &cfg, 0.4).unwrap());
    assert_ne!(a.block_distortions, simulate_wz(&p, &cfg.clone().with_seed(1), 0.4).unwrap().block_distortions);
    let x = simulate_xd(&p, &AuxChannel::copy(2, 2), &cfg, 0.4).unwrap();
    assert_eq!(x, simulate_xd(&p, &AuxChannel::copy(2, 2), &cfg, 0.4).unwrap());
}

#[test]
fn more_rate_means_less_distortion() {
    let px = Dist::new(vec![0.7, 0.2, 0.1]).unwrap();
    let cfg = SimConfig::new(10, 0.1, 200);
    let low = simulate_rd_point(&px, &cfg, 0.3).unwrap().mean_distortion;
    let high = simulate_rd_point(&px, &cfg, 0.9).unwrap().mean_distortion;
    assert!(high < low, "{high} vs {low}");
    assert!(low <= px.entropy() + 0.05);
}
