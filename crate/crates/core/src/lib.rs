//! Two-terminal source coding under logarithmic loss.
//!
//! Exact rate regions for joint and single-source reconstruction, an
//! auxiliary-channel solver for the region with distortion on one source,
//! and Monte Carlo simulation of the binning schemes that achieve them.

pub mod error;
pub mod logloss;
pub mod pmf;
pub mod region_jd;
pub mod region_xd;
pub mod sim;

pub use error::{Error, Result};
pub use logloss::{
    decompose_distortion, distortion_typical_set, erasure_rd, expected_distortion, optimal_estimator,
    sequence_distortion, symbol_distortion, DistortionSplit, Estimator, Reproduction, ReproductionSeq, Support,
    TypicalKind, TypicalSet,
};
pub use pmf::{
    binary_entropy, conditional_entropy, entropy, mutual_information, posterior, validate_pmf, AuxChannel, AuxJoint,
    Axis, Dist, JointPmf, Pair, TriplePmf,
};
pub use region_jd::{
    jd_boundary, jd_contains_closed, jd_contains_lp, jd_corner_points, rd_logloss, sw_region_contains, wz_logloss,
    CornerPair, JdQuery, RatePair, SlackCertificate,
};
pub use region_xd::{
    require_converged, xd_contains, xd_grid_oracle, xd_grid_oracle_many, xd_min_hxu, xd_tradeoff_curve, CurvePoint,
    TradeoffCurve, XdOptions, XdQuery, XdSolution, XdVerdict,
};
pub use sim::{
    jd_timeshare_split, repeat_for_peak, simulate_jd_timeshare, simulate_rd_point, simulate_smsw, simulate_wz,
    simulate_xd, BinAssignment, ExtraBinRates, SimConfig, SimResult, Space,
};
