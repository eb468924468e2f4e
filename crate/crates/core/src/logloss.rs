//! The logarithmic-loss distortion measure.
//!
//! A reproduction is a probability vector, either over `X × Y` (joint
//! distortion) or over `X` alone. The distortion of a realized symbol is the
//! surprisal the reproduction assigns to it, in bits, and is `+∞` when that
//! mass is zero.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmf::{Dist, TriplePmf};

/// Largest sequence space the exhaustive typical-set enumerator will walk.
pub const ENUMERATION_LIMIT: f64 = (1u64 << 24) as f64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Support {
    /// Over `X × Y`, flattened row-major (`x·l + y`).
    Joint { m: usize, l: usize },
    /// Over `X`.
    Marginal { m: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reproduction {
    support: Support,
    q: Dist,
}

impl Reproduction {
    pub fn joint(m: usize, l: usize, q: Dist) -> Result<Self> {
        if q.len() != m * l {
            return Err(Error::DimensionMismatch(format!("{} masses for a {m}×{l} reproduction", q.len())));
        }
        Ok(Reproduction { support: Support::Joint { m, l }, q })
    }

    pub fn marginal(q: Dist) -> Self {
        Reproduction { support: Support::Marginal { m: q.len() }, q }
    }

    /// Product reproduction `a(x)·b(y)`.
    pub fn product(a: &Dist, b: &Dist) -> Self {
        let q: Vec<f64> = a.probs().iter().flat_map(|&u| b.probs().iter().map(move |&v| u * v)).collect();
        Reproduction { support: Support::Joint { m: a.len(), l: b.len() }, q: Dist::from_raw_unchecked(q) }
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn dist(&self) -> &Dist {
        &self.q
    }

    /// Mass on `(x, y)` for a joint reproduction, or on `x` for a marginal one.
    pub fn mass(&self, x: usize, y: Option<usize>) -> Result<f64> {
        match (self.support, y) {
            (Support::Joint { m, l }, Some(y)) if x < m && y < l => Ok(self.q.prob(x * l + y)),
            (Support::Marginal { m }, None) if x < m => Ok(self.q.prob(x)),
            _ => Err(Error::SupportMismatch),
        }
    }

    /// `ẑ(x) = Σ_y ẑ(x, y)`; the identity for marginal reproductions.
    pub fn marginal_x(&self) -> Dist {
        match self.support {
            Support::Joint { m, l } => {
                Dist::from_raw_unchecked((0..m).map(|x| self.q.probs()[x * l..(x + 1) * l].iter().sum()).collect())
            }
            Support::Marginal { .. } => self.q.clone(),
        }
    }

    /// `ẑ(y | x)`, or `None` when `ẑ(x) = 0` or the reproduction is marginal.
    pub fn conditional_y(&self, x: usize) -> Option<Dist> {
        match self.support {
            Support::Joint { l, .. } => {
                let row = &self.q.probs()[x * l..(x + 1) * l];
                let mass: f64 = row.iter().sum();
                (mass > 0.0).then(|| Dist::from_raw_unchecked(row.iter().map(|v| v / mass).collect()))
            }
            Support::Marginal { .. } => None,
        }
    }
}

/// A length-`n` sequence of reproductions sharing one support.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ReproductionSeq(Vec<Reproduction>);

impl ReproductionSeq {
    pub fn new(items: Vec<Reproduction>) -> Result<Self> {
        let first = items.first().ok_or(Error::EmptyAlphabet)?.support;
        if items.iter().any(|r| r.support != first) {
            return Err(Error::SupportMismatch);
        }
        Ok(ReproductionSeq(items))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn items(&self) -> &[Reproduction] {
        &self.0
    }

    pub fn support(&self) -> Support {
        self.0[0].support
    }
}

/// Total, marginal and conditional components of a joint distortion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistortionSplit {
    pub d_total: f64,
    pub d_x: f64,
    pub d_y_given_x: f64,
}

#[inline]
pub(crate) fn surprisal(q: f64) -> f64 {
    if q > 0.0 {
        -q.log2()
    } else {
        f64::INFINITY
    }
}

/// `log2 1/ẑ(x, y)` or `log2 1/v̂(x)`.
pub fn symbol_distortion(x: usize, y: Option<usize>, r: &Reproduction) -> Result<f64> {
    Ok(surprisal(r.mass(x, y)?))
}

/// Per-symbol average of [`symbol_distortion`] over a block.
pub fn sequence_distortion(xs: &[usize], ys: Option<&[usize]>, rs: &ReproductionSeq) -> Result<f64> {
    if xs.len() != rs.len() {
        return Err(Error::LengthMismatch { left: xs.len(), right: rs.len() });
    }
    if let Some(ys) = ys {
        if ys.len() != xs.len() {
            return Err(Error::LengthMismatch { left: xs.len(), right: ys.len() });
        }
    }
    let mut total = 0.0;
    for (i, r) in rs.items().iter().enumerate() {
        total += symbol_distortion(xs[i], ys.map(|ys| ys[i]), r)?;
    }
    Ok(total / xs.len() as f64)
}

/// The posterior `Pr(X = x, Y = y | U = u)` as a joint reproduction.
pub fn optimal_estimator(t: &TriplePmf, u: usize) -> Result<Reproduction> {
    if u >= t.k() {
        return Err(Error::DimensionMismatch(format!("u = {u} with |U| = {}", t.k())));
    }
    Reproduction::joint(t.m(), t.l(), t.posterior_xy(u)?)
}

/// How the decoder maps an observed `u` to a reproduction.
#[derive(Clone, Copy, Debug)]
pub enum Estimator<'a> {
    Posterior,
    /// One joint reproduction per `u`.
    Supplied(&'a [Reproduction]),
}

/// `Σ_{x,y,u} p(x,y,u) · log2 1/ẑ[u](x,y)`.
pub fn expected_distortion(t: &TriplePmf, est: Estimator<'_>) -> Result<f64> {
    let pu = t.p_u();
    let mut total = 0.0;
    for u in 0..t.k() {
        if pu.prob(u) <= 0.0 {
            continue;
        }
        let r = match est {
            Estimator::Posterior => optimal_estimator(t, u)?,
            Estimator::Supplied(map) => {
                let r = map.get(u).ok_or_else(|| Error::DimensionMismatch(format!("no reproduction for u = {u}")))?;
                if r.support() != (Support::Joint { m: t.m(), l: t.l() }) {
                    return Err(Error::SupportMismatch);
                }
                r.clone()
            }
        };
        for x in 0..t.m() {
            for y in 0..t.l() {
                let p = t.get(x, y, u);
                if p > 0.0 {
                    total += p * surprisal(r.mass(x, Some(y))?);
                }
            }
        }
    }
    Ok(total)
}

/// Splits the block distortion of a joint reproduction sequence into the part
/// charged to `X` (through `ẑᵢ(x)`) and the part charged to `Y` given `X`
/// (through `ẑᵢ(y|x)`).
pub fn decompose_distortion(rs: &ReproductionSeq, xs: &[usize], ys: &[usize]) -> Result<DistortionSplit> {
    if !matches!(rs.support(), Support::Joint { .. }) {
        return Err(Error::SupportMismatch);
    }
    if xs.len() != rs.len() || ys.len() != rs.len() {
        return Err(Error::LengthMismatch { left: rs.len(), right: xs.len().max(ys.len()) });
    }
    let n = rs.len() as f64;
    let (mut dx, mut dyx, mut total) = (0.0, 0.0, 0.0);
    for (i, r) in rs.items().iter().enumerate() {
        let joint = r.mass(xs[i], Some(ys[i]))?;
        if joint <= 0.0 {
            return Err(Error::ZeroMassAtRealization { position: i });
        }
        let marginal = r.marginal_x().prob(xs[i]);
        dx += surprisal(marginal);
        dyx += surprisal(joint / marginal);
        total += surprisal(joint);
    }
    Ok(DistortionSplit { d_total: total / n, d_x: dx / n, d_y_given_x: dyx / n })
}

/// Which per-symbol distortion a typical set is built from.
#[derive(Clone, Copy, Debug)]
pub enum TypicalKind<'a> {
    /// Pairs `(xⁿ, yⁿ)` under `ẑᵢ(x, y)`; symbols are encoded `x·l + y`.
    Joint,
    /// `xⁿ` under the marginals `ẑᵢ(x)`.
    MarginalX,
    /// `yⁿ` under the conditionals `ẑᵢ(y | xᵢ)` for the given `xⁿ`.
    ConditionalYGivenX(&'a [usize]),
}

/// All sequences whose distortion against a reproduction sequence is within a budget.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypicalSet {
    /// Size of the per-position alphabet the members are written in.
    pub alphabet: usize,
    pub members: Vec<Vec<usize>>,
}

impl TypicalSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Per-position surprisal table for one [`TypicalKind`].
pub(crate) fn cost_table(rs: &ReproductionSeq, kind: TypicalKind<'_>) -> Result<Vec<Vec<f64>>> {
    let Support::Joint { .. } = rs.support() else {
        return match kind {
            TypicalKind::MarginalX => Ok(rs.items().iter().map(|r| costs_of(r.dist())).collect()),
            _ => Err(Error::SupportMismatch),
        };
    };
    match kind {
        TypicalKind::Joint => Ok(rs.items().iter().map(|r| costs_of(r.dist())).collect()),
        TypicalKind::MarginalX => Ok(rs.items().iter().map(|r| costs_of(&r.marginal_x())).collect()),
        TypicalKind::ConditionalYGivenX(xs) => {
            if xs.len() != rs.len() {
                return Err(Error::LengthMismatch { left: rs.len(), right: xs.len() });
            }
            let Support::Joint { l, .. } = rs.support() else { unreachable!() };
            Ok(rs
                .items()
                .iter()
                .zip(xs)
                .map(|(r, &x)| match r.conditional_y(x) {
                    Some(c) => costs_of(&c),
                    None => vec![f64::INFINITY; l],
                })
                .collect())
        }
    }
}

fn costs_of(d: &Dist) -> Vec<f64> {
    d.probs().iter().map(|&q| surprisal(q)).collect()
}

/// Depth-first enumeration of every sequence whose summed cost is within
/// `limit` (`< limit` when `strict`). Costs are nonnegative, so partial sums prune.
pub(crate) fn enumerate_within(costs: &[Vec<f64>], limit: f64, strict: bool) -> Vec<Vec<usize>> {
    let n = costs.len();
    // cheapest completion from position i onward
    let mut tail_min = vec![0.0; n + 1];
    for i in (0..n).rev() {
        let best = costs[i].iter().copied().fold(f64::INFINITY, f64::min);
        tail_min[i] = tail_min[i + 1] + best;
    }
    let admits = |v: f64| if strict { v < limit } else { v <= limit };
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(n);
    fn walk(
        i: usize,
        acc: f64,
        costs: &[Vec<f64>],
        tail_min: &[f64],
        admits: &dyn Fn(f64) -> bool,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == costs.len() {
            out.push(stack.clone());
            return;
        }
        for (s, &c) in costs[i].iter().enumerate() {
            let next = acc + c;
            if next.is_finite() && admits(next + tail_min[i + 1]) {
                stack.push(s);
                walk(i + 1, next, costs, tail_min, admits, stack, out);
                stack.pop();
            }
        }
    }
    walk(0, 0.0, costs, &tail_min, &admits, &mut stack, &mut out);
    out
}

/// Exhaustively lists the distortion-typical set
/// `{ s : d(s, ẑⁿ) ≤ budget + eps }` for the chosen kind.
pub fn distortion_typical_set(
    rs: &ReproductionSeq,
    budget: f64,
    eps: f64,
    kind: TypicalKind<'_>,
) -> Result<TypicalSet> {
    let costs = cost_table(rs, kind)?;
    let alphabet = costs[0].len();
    let size = (alphabet as f64).powi(rs.len() as i32);
    if size > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge { size, limit: ENUMERATION_LIMIT });
    }
    let n = rs.len() as f64;
    let limit = n * (budget + eps) + 1e-12;
    Ok(TypicalSet { alphabet, members: enumerate_within(&costs, limit, false) })
}

/// Point-to-point rate-distortion function under the erasure measure:
/// `(1 − budget)·H`.
pub fn erasure_rd(d: &Dist, budget: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&budget) {
        return Err(Error::BudgetOutOfRange(budget));
    }
    Ok((1.0 - budget) * d.entropy())
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::pmf::{binary_entropy, AuxChannel, AuxJoint, JointPmf};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_dist(rng: &mut impl Rng, len: usize) -> Dist {
        Dist::from_weights((0..len).map(|_| rng.random::<f64>() + 1e-3).collect()).unwrap()
    }

    fn random_joint_seq(rng: &mut impl Rng, n: usize, m: usize, l: usize) -> ReproductionSeq {
        ReproductionSeq::new((0..n).map(|_| Reproduction::joint(m, l, random_dist(rng, m * l)).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn symbol_distortion_examples() {
        let uniform = Reproduction::joint(2, 2, Dist::uniform(4)).unwrap();
        assert_abs_diff_eq!(symbol_distortion(0, Some(0), &uniform).unwrap(), 2.0, epsilon = 1e-15);
        let point = Reproduction::marginal(Dist::point(2, 0));
        assert_eq!(symbol_distortion(0, None, &point).unwrap(), 0.0);
        let soft = Reproduction::marginal(Dist::new(vec![0.75, 0.25]).unwrap());
        assert_abs_diff_eq!(symbol_distortion(1, None, &soft).unwrap(), -(0.25f64).log2(), epsilon = 1e-15);
        assert_eq!(symbol_distortion(1, None, &point).unwrap(), f64::INFINITY);
    }

    #[test]
    fn symbol_distortion_support_mismatch() {
        let joint = Reproduction::joint(2, 2, Dist::uniform(4)).unwrap();
        assert_eq!(symbol_distortion(0, None, &joint), Err(Error::SupportMismatch));
        let marg = Reproduction::marginal(Dist::uniform(2));
        assert_eq!(symbol_distortion(0, Some(1), &marg), Err(Error::SupportMismatch));
    }

    #[test]
    fn sequence_distortion_examples() {
        let rs = ReproductionSeq::new(vec![
            Reproduction::marginal(Dist::point(3, 2)),
            Reproduction::marginal(Dist::point(3, 0)),
        ])
        .unwrap();
        assert_eq!(sequence_distortion(&[2, 0], None, &rs).unwrap(), 0.0);

        // per-symbol 1 bit and 3 bits
        let rs = ReproductionSeq::new(vec![
            Reproduction::marginal(Dist::new(vec![0.5, 0.5]).unwrap()),
            Reproduction::marginal(Dist::new(vec![0.875, 0.125]).unwrap()),
        ])
        .unwrap();
        assert_abs_diff_eq!(sequence_distortion(&[0, 1], None, &rs).unwrap(), 2.0, epsilon = 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rs = random_joint_seq(&mut rng, 4, 2, 3);
        let xs = [0, 1, 1, 0];
        let ys = [2, 0, 1, 1];
        let termwise: f64 =
            (0..4).map(|i| symbol_distortion(xs[i], Some(ys[i]), &rs.items()[i]).unwrap()).sum::<f64>() / 4.0;
        assert_abs_diff_eq!(sequence_distortion(&xs, Some(&ys), &rs).unwrap(), termwise, epsilon = 1e-14);
        assert!(matches!(sequence_distortion(&xs[..3], Some(&ys), &rs), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn optimal_estimator_examples() {
        let base = JointPmf::dsbs(0.25);
        let indep = TriplePmf::independent(&base, &Dist::new(vec![0.3, 0.7]).unwrap());
        let r = optimal_estimator(&indep, 1).unwrap();
        for (a, b) in r.dist().probs().iter().zip(base.as_slice()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }

        let reveal = TriplePmf::revealing(&base);
        let r = optimal_estimator(&reveal, 2).unwrap();
        assert_eq!(r.dist(), &Dist::point(4, 2));

        let u_is_y = AuxJoint::new(base, AuxChannel::copy(2, 2)).unwrap();
        let r = optimal_estimator(u_is_y.joint(), 0).unwrap();
        // Bayes: p(x, y | y = 0) puts 0.75, 0.25 on (0,0), (1,0)
        let want = [0.75, 0.0, 0.25, 0.0];
        for (a, b) in r.dist().probs().iter().zip(want) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn optimal_estimator_zero_mass() {
        let base = JointPmf::dsbs(0.25);
        let a = AuxJoint::new(base, AuxChannel::copy(2, 4)).unwrap();
        assert_eq!(optimal_estimator(a.joint(), 3), Err(Error::ZeroProbabilityCondition { symbol: 3 }));
    }

    #[test]
    fn expected_distortion_examples() {
        let base = JointPmf::dsbs(0.25);
        let constant = AuxJoint::new(base.clone(), AuxChannel::constant(2, 3)).unwrap();
        assert_abs_diff_eq!(
            expected_distortion(constant.joint(), Estimator::Posterior).unwrap(),
            base.joint_entropy(),
            epsilon = 1e-12
        );
        let reveal = TriplePmf::revealing(&base);
        assert_abs_diff_eq!(expected_distortion(&reveal, Estimator::Posterior).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn non_posterior_estimator_pays_kl() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = JointPmf::from_rows(&[vec![0.1, 0.2, 0.05], vec![0.3, 0.15, 0.2]]).unwrap();
        let rows: Vec<Vec<f64>> = (0..3).map(|_| random_dist(&mut rng, 4).probs().to_vec()).collect();
        let a = AuxJoint::new(base, AuxChannel::new(&rows).unwrap()).unwrap();
        let t = a.joint();
        let map: Vec<Reproduction> =
            (0..4).map(|_| Reproduction::joint(2, 3, random_dist(&mut rng, 6)).unwrap()).collect();
        let got = expected_distortion(t, Estimator::Supplied(&map)).unwrap();
        // H(X,Y|U) + Σ_u p(u) KL(p(·|u) ‖ ẑ[u])
        let pu = t.p_u();
        let mut kl = 0.0;
        for u in 0..4 {
            let post = t.posterior_xy(u).unwrap();
            for (i, &pp) in post.probs().iter().enumerate() {
                if pp > 0.0 {
                    kl += pu.prob(u) * pp * (pp / map[u].dist().prob(i)).log2();
                }
            }
        }
        let want = t.h_xy_given_u() + kl;
        assert_abs_diff_eq!(got, want, epsilon = 1e-12);
        assert!(got > t.h_xy_given_u());
    }

    #[test]
    fn decomposition_examples() {
        let a = Dist::new(vec![0.6, 0.4]).unwrap();
        let b = Dist::new(vec![0.2, 0.8]).unwrap();
        let rs = ReproductionSeq::new(vec![Reproduction::product(&a, &b); 2]).unwrap();
        let s = decompose_distortion(&rs, &[0, 1], &[1, 0]).unwrap();
        assert_abs_diff_eq!(s.d_x, (surprisal(0.6) + surprisal(0.4)) / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.d_y_given_x, (surprisal(0.8) + surprisal(0.2)) / 2.0, epsilon = 1e-14);

        let rs = ReproductionSeq::new(vec![Reproduction::joint(2, 2, Dist::point(4, 3)).unwrap()]).unwrap();
        let s = decompose_distortion(&rs, &[1], &[1]).unwrap();
        assert_eq!((s.d_total, s.d_x, s.d_y_given_x), (0.0, 0.0, 0.0));
        assert_eq!(decompose_distortion(&rs, &[0], &[1]), Err(Error::ZeroMassAtRealization { position: 0 }));
    }

    #[test]
    fn decomposition_matches_explicit_factorization() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rs = random_joint_seq(&mut rng, 1, 2, 2);
        let q = rs.items()[0].dist().probs().to_vec();
        let (x, y) = (1, 0);
        let zx = q[2] + q[3];
        let zy_x = q[2] / zx;
        let s = decompose_distortion(&rs, &[x], &[y]).unwrap();
        assert_abs_diff_eq!(s.d_x, -zx.log2(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.d_y_given_x, -zy_x.log2(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.d_total, s.d_x + s.d_y_given_x, epsilon = 1e-12);
    }

    #[test]
    fn typical_set_saturates() {
        let rs = ReproductionSeq::new(vec![Reproduction::joint(2, 2, Dist::uniform(4)).unwrap(); 3]).unwrap();
        let set = distortion_typical_set(&rs, 2.0, 0.01, TypicalKind::Joint).unwrap();
        assert_eq!(set.len(), 64);
        assert!(set.len() as f64 <= 2f64.powf(3.0 * (2.0 + 0.02)));
    }

    #[test]
    fn typical_set_point_masses() {
        let rs = ReproductionSeq::new(vec![
            Reproduction::joint(2, 2, Dist::point(4, 1)).unwrap(),
            Reproduction::joint(2, 2, Dist::point(4, 2)).unwrap(),
        ])
        .unwrap();
        let set = distortion_typical_set(&rs, 0.0, 0.01, TypicalKind::Joint).unwrap();
        assert_eq!(set.members, vec![vec![1, 2]]);
    }

    #[test]
    fn typical_set_n3_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let rs = random_joint_seq(&mut rng, 3, 2, 2);
        let set = distortion_typical_set(&rs, 1.0, 0.1, TypicalKind::Joint).unwrap();
        // brute force over all 64 pair sequences
        let mut count = 0;
        for idx in 0..64usize {
            let s = [idx / 16, (idx / 4) % 4, idx % 4];
            let d: f64 = (0..3).map(|i| surprisal(rs.items()[i].dist().prob(s[i]))).sum::<f64>() / 3.0;
            if d <= 1.1 {
                count += 1;
            }
        }
        assert_eq!(set.len(), count);
        assert!(set.len() <= 12);
    }

    #[test]
    fn conditional_typical_set_uses_given_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let rs = random_joint_seq(&mut rng, 4, 2, 3);
        let xs = [1, 0, 0, 1];
        let set = distortion_typical_set(&rs, 1.0, 0.1, TypicalKind::ConditionalYGivenX(&xs)).unwrap();
        assert_eq!(set.alphabet, 3);
        for ys in &set.members {
            let split = decompose_distortion(&rs, &xs, ys).unwrap();
            assert!(split.d_y_given_x <= 1.1 + 1e-12);
        }
        assert!(set.len() as f64 <= 2f64.powf(4.0 * 1.1));
    }

    #[test]
    fn typical_set_guard() {
        let rs = ReproductionSeq::new(vec![Reproduction::joint(4, 4, Dist::uniform(16)).unwrap(); 7]).unwrap();
        assert!(matches!(
            distortion_typical_set(&rs, 1.0, 0.1, TypicalKind::Joint),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn erasure_rd_examples() {
        let bit = Dist::uniform(2);
        assert_eq!(erasure_rd(&bit, 0.0).unwrap(), 1.0);
        assert_eq!(erasure_rd(&bit, 1.0).unwrap(), 0.0);
        assert_eq!(erasure_rd(&bit, 1.5), Err(Error::BudgetOutOfRange(1.5)));

        // Brute force over test channels x -> {x, erase}: erase with prob e_x,
        // never reproduce the wrong symbol (infinite cost).
        let steps = 100;
        let mut best = f64::INFINITY;
        for i in 0..=steps {
            for j in 0..=steps {
                let (e0, e1) = (i as f64 / steps as f64, j as f64 / steps as f64);
                if 0.5 * (e0 + e1) > 0.5 + 1e-12 {
                    continue;
                }
                // I(X; Ẑ) = H(X) − H(X|Ẑ); only the erasure symbol is uncertain
                let pe = 0.5 * (e0 + e1);
                let h_given = if pe > 0.0 { pe * binary_entropy(0.5 * e0 / pe) } else { 0.0 };
                best = best.min(1.0 - h_given);
            }
        }
        assert_abs_diff_eq!(best, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(erasure_rd(&bit, 0.5).unwrap(), best, epsilon = 1e-9);
    }
}
