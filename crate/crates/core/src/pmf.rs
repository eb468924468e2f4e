//! Finite-alphabet probability: distributions, joint pmfs, auxiliary channels
//! and the entropies everything else is measured in.
//!
//! All information quantities are in bits. `0 · log 0` is taken to be 0.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on the total mass of a distribution.
pub const PROB_TOL: f64 = 1e-9;
/// Entries more negative than this are rejected rather than clamped to zero.
pub const NEG_TOL: f64 = 1e-12;

/// `-p log2 p`, with the continuity convention at zero.
#[inline]
pub(crate) fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

fn check_mass(values: &mut [f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    for (index, v) in values.iter_mut().enumerate() {
        if !v.is_finite() || *v < -NEG_TOL {
            return Err(Error::NegativeMass { index, value: *v });
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::NotNormalized { sum });
    }
    for v in values.iter_mut() {
        *v /= sum;
    }
    Ok(())
}

/// A probability vector over a single finite alphabet.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Dist(Vec<f64>);

impl Dist {
    pub fn new(mut q: Vec<f64>) -> Result<Self> {
        check_mass(&mut q)?;
        Ok(Dist(q))
    }

    /// Builds a distribution by normalizing nonnegative weights.
    pub fn from_weights(w: Vec<f64>) -> Result<Self> {
        let sum: f64 = w.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::NotNormalized { sum });
        }
        Dist::new(w.into_iter().map(|v| v / sum).collect())
    }

    pub fn point(len: usize, at: usize) -> Self {
        assert!(at < len, "point mass index out of range");
        let mut q = vec![0.0; len];
        q[at] = 1.0;
        Dist(q)
    }

    pub fn uniform(len: usize) -> Self {
        assert!(len > 0);
        Dist(vec![1.0 / len as f64; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn probs(&self) -> &[f64] {
        &self.0
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.0[i]
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }

    pub(crate) fn from_raw_unchecked(q: Vec<f64>) -> Self {
        Dist(q)
    }
}

/// Shannon entropy in bits.
pub fn entropy(d: &Dist) -> f64 {
    // a near-point mass can sum to a hair below zero
    d.0.iter().map(|&p| plogp(p)).sum::<f64>().max(0.0)
}

/// Selects one coordinate of a pair `(X, Y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    X,
    Y,
}

/// Joint pmf `p(x, y)` on `{0..m} × {0..l}`, stored row-major with `x` indexing rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointPmf {
    m: usize,
    l: usize,
    p: Vec<f64>,
}

/// Validates a raw matrix into a [`JointPmf`].
///
/// Entries in `[-1e-12, 0)` are clamped to zero; a total within `1e-9` of one
/// is renormalized, anything further off is rejected.
pub fn validate_pmf(raw: &[Vec<f64>]) -> Result<JointPmf> {
    let m = raw.len();
    if m == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let l = raw[0].len();
    if l == 0 {
        return Err(Error::EmptyAlphabet);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != l {
            return Err(Error::Ragged { row, found: r.len(), expected: l });
        }
    }
    let mut p: Vec<f64> = raw.iter().flatten().copied().collect();
    check_mass(&mut p)?;
    Ok(JointPmf { m, l, p })
}

impl JointPmf {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        validate_pmf(rows)
    }

    pub fn from_fn(m: usize, l: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..m).map(|x| (0..l).map(|y| f(x, y)).collect()).collect();
        validate_pmf(&rows)
    }

    /// Doubly symmetric binary source: uniform `X`, `Y = X ⊕ Bernoulli(crossover)`.
    pub fn dsbs(crossover: f64) -> Self {
        let a = 0.5 * (1.0 - crossover);
        let b = 0.5 * crossover;
        JointPmf { m: 2, l: 2, p: vec![a, b, b, a] }
    }

    pub fn independent(px: &Dist, py: &Dist) -> Self {
        let p = px.probs().iter().flat_map(|&a| py.probs().iter().map(move |&b| a * b)).collect();
        JointPmf { m: px.len(), l: py.len(), p }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn l(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.p[x * self.l + y]
    }

    /// Flat row-major view of the matrix.
    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.p.chunks(self.l).map(|r| r.to_vec()).collect()
    }

    /// The same pmf with the roles of `X` and `Y` exchanged.
    pub fn transpose(&self) -> JointPmf {
        let mut p = vec![0.0; self.p.len()];
        for x in 0..self.m {
            for y in 0..self.l {
                p[y * self.m + x] = self.get(x, y);
            }
        }
        JointPmf { m: self.l, l: self.m, p }
    }

    pub fn marginal(&self, axis: Axis) -> Dist {
        match axis {
            Axis::X => Dist((0..self.m).map(|x| (0..self.l).map(|y| self.get(x, y)).sum()).collect()),
            Axis::Y => Dist((0..self.l).map(|y| (0..self.m).map(|x| self.get(x, y)).sum()).collect()),
        }
    }

    pub fn marginal_x(&self) -> Dist {
        self.marginal(Axis::X)
    }

    pub fn marginal_y(&self) -> Dist {
        self.marginal(Axis::Y)
    }

    /// The whole matrix as one distribution over `m·l` points.
    pub fn flat(&self) -> Dist {
        Dist(self.p.clone())
    }

    pub fn joint_entropy(&self) -> f64 {
        self.p.iter().map(|&p| plogp(p)).sum::<f64>().max(0.0)
    }

    pub fn entropy_of(&self, axis: Axis) -> f64 {
        entropy(&self.marginal(axis))
    }

    /// Conditional entropy of the other coordinate given `given`.
    pub fn conditional_entropy(&self, given: Axis) -> f64 {
        conditional_entropy(self, given)
    }

    /// Bayes posterior over the other coordinate after observing `symbol` on `observed`.
    pub fn posterior(&self, observed: Axis, symbol: usize) -> Result<Dist> {
        posterior(self, observed, symbol)
    }
}

/// `H(X|Y)` when `given = Y`, `H(Y|X)` when `given = X`, from `H(X,Y) − H(given)`.
pub fn conditional_entropy(j: &JointPmf, given: Axis) -> f64 {
    (j.joint_entropy() - j.entropy_of(given)).max(0.0)
}

pub fn posterior(j: &JointPmf, observed: Axis, symbol: usize) -> Result<Dist> {
    let column: Vec<f64> = match observed {
        Axis::Y => {
            if symbol >= j.l {
                return Err(Error::DimensionMismatch(format!("y = {symbol} with |Y| = {}", j.l)));
            }
            (0..j.m).map(|x| j.get(x, symbol)).collect()
        }
        Axis::X => {
            if symbol >= j.m {
                return Err(Error::DimensionMismatch(format!("x = {symbol} with |X| = {}", j.m)));
            }
            (0..j.l).map(|y| j.get(symbol, y)).collect()
        }
    };
    let mass: f64 = column.iter().sum();
    if mass <= 0.0 {
        return Err(Error::ZeroProbabilityCondition { symbol });
    }
    Ok(Dist(column.into_iter().map(|v| v / mass).collect()))
}

/// Conditional distribution `p(u|y)`: `l` rows, each a distribution over `k` symbols.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxChannel {
    l: usize,
    k: usize,
    w: Vec<f64>,
}

impl AuxChannel {
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        let l = rows.len();
        if l == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let k = rows[0].len();
        let mut w = Vec::with_capacity(l * k);
        for (row, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(Error::Ragged { row, found: r.len(), expected: k });
            }
            let d = Dist::new(r.clone())?;
            w.extend_from_slice(d.probs());
        }
        Ok(AuxChannel { l, k, w })
    }

    /// `U = Y`, padded with unused symbols up to `k`.
    pub fn copy(l: usize, k: usize) -> Self {
        assert!(k >= l, "copy channel needs k ≥ l");
        let mut w = vec![0.0; l * k];
        for y in 0..l {
            w[y * k + y] = 1.0;
        }
        AuxChannel { l, k, w }
    }

    /// `U` independent of `Y`, concentrated on symbol 0.
    pub fn constant(l: usize, k: usize) -> Self {
        let mut w = vec![0.0; l * k];
        for y in 0..l {
            w[y * k] = 1.0;
        }
        AuxChannel { l, k, w }
    }

    pub(crate) fn from_flat_unchecked(l: usize, k: usize, w: Vec<f64>) -> Self {
        debug_assert_eq!(w.len(), l * k);
        AuxChannel { l, k, w }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, y: usize, u: usize) -> f64 {
        self.w[y * self.k + u]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.w
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.w.chunks(self.k).map(|r| r.to_vec()).collect()
    }

    /// Relabels `U` so that new symbol `perm[u]` carries old symbol `u`.
    pub fn permute_labels(&self, perm: &[usize]) -> AuxChannel {
        assert_eq!(perm.len(), self.k);
        let mut w = vec![0.0; self.w.len()];
        for y in 0..self.l {
            for u in 0..self.k {
                w[y * self.k + perm[u]] = self.get(y, u);
            }
        }
        AuxChannel { l: self.l, k: self.k, w }
    }
}

/// An arbitrary joint pmf `p(x, y, u)` on `m × l × k`.
///
/// This is the general object the log-loss estimator results are stated for;
/// [`AuxJoint`] produces one with the Markov structure `X - Y - U`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TriplePmf {
    m: usize,
    l: usize,
    k: usize,
    p: Vec<f64>,
}

impl TriplePmf {
    pub fn new(m: usize, l: usize, k: usize, mut p: Vec<f64>) -> Result<Self> {
        if m == 0 || l == 0 || k == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if p.len() != m * l * k {
            return Err(Error::DimensionMismatch(format!("{} entries for a {m}×{l}×{k} tensor", p.len())));
        }
        check_mass(&mut p)?;
        Ok(TriplePmf { m, l, k, p })
    }

    /// `U = (X, Y)`, encoded as `u = x·l + y`.
    pub fn revealing(base: &JointPmf) -> Self {
        let (m, l) = (base.m, base.l);
        let k = m * l;
        let mut p = vec![0.0; m * l * k];
        for x in 0..m {
            for y in 0..l {
                p[(x * l + y) * k + x * l + y] = base.get(x, y);
            }
        }
        TriplePmf { m, l, k, p }
    }

    /// `U` independent of `(X, Y)` with the given marginal.
    pub fn independent(base: &JointPmf, pu: &Dist) -> Self {
        let (m, l, k) = (base.m, base.l, pu.len());
        let mut p = Vec::with_capacity(m * l * k);
        for &pxy in &base.p {
            p.extend(pu.probs().iter().map(|&q| pxy * q));
        }
        TriplePmf { m, l, k, p }
    }

    pub fn m(&self) -> usize {
        self.m
    }
    pub fn l(&self) -> usize {
        self.l
    }
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize, u: usize) -> f64 {
        self.p[(x * self.l + y) * self.k + u]
    }

    pub fn p_u(&self) -> Dist {
        let mut q = vec![0.0; self.k];
        for (i, &v) in self.p.iter().enumerate() {
            q[i % self.k] += v;
        }
        Dist(q)
    }

    /// Marginal over `(X, Y)`.
    pub fn base(&self) -> JointPmf {
        JointPmf { m: self.m, l: self.l, p: self.p.chunks(self.k).map(|c| c.iter().sum()).collect() }
    }

    /// `Pr(X = x, Y = y | U = u)` as a distribution over `m·l` points, row-major.
    pub fn posterior_xy(&self, u: usize) -> Result<Dist> {
        let col: Vec<f64> = (0..self.m * self.l).map(|xy| self.p[xy * self.k + u]).collect();
        let mass: f64 = col.iter().sum();
        if mass <= 0.0 {
            return Err(Error::ZeroProbabilityCondition { symbol: u });
        }
        Ok(Dist(col.into_iter().map(|v| v / mass).collect()))
    }

    /// Joint of `(X, U)` as an `m × k` pmf.
    pub fn xu(&self) -> JointPmf {
        let mut p = vec![0.0; self.m * self.k];
        for x in 0..self.m {
            for y in 0..self.l {
                for u in 0..self.k {
                    p[x * self.k + u] += self.get(x, y, u);
                }
            }
        }
        JointPmf { m: self.m, l: self.k, p }
    }

    /// Joint of `(Y, U)` as an `l × k` pmf.
    pub fn yu(&self) -> JointPmf {
        let mut p = vec![0.0; self.l * self.k];
        for x in 0..self.m {
            for y in 0..self.l {
                for u in 0..self.k {
                    p[y * self.k + u] += self.get(x, y, u);
                }
            }
        }
        JointPmf { m: self.l, l: self.k, p }
    }

    pub fn entropy_xyu(&self) -> f64 {
        self.p.iter().map(|&v| plogp(v)).sum::<f64>().max(0.0)
    }

    /// `H(X, Y | U)`.
    pub fn h_xy_given_u(&self) -> f64 {
        (self.entropy_xyu() - entropy(&self.p_u())).max(0.0)
    }
}

/// Which pair a mutual information refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pair {
    YU,
    XU,
}

/// `p(x, y, u) = p(x, y) · p(u|y)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuxJoint {
    base: JointPmf,
    channel: AuxChannel,
    joint: TriplePmf,
}

impl AuxJoint {
    pub fn new(base: JointPmf, channel: AuxChannel) -> Result<Self> {
        if channel.l != base.l {
            return Err(Error::DimensionMismatch(format!("channel has {} input rows, |Y| = {}", channel.l, base.l)));
        }
        if channel.k > base.l + 2 {
            return Err(Error::DimensionMismatch(format!("|U| = {} exceeds |Y| + 2 = {}", channel.k, base.l + 2)));
        }
        let (m, l, k) = (base.m, base.l, channel.k);
        let mut p = Vec::with_capacity(m * l * k);
        for x in 0..m {
            for y in 0..l {
                let pxy = base.get(x, y);
                p.extend((0..k).map(|u| pxy * channel.get(y, u)));
            }
        }
        let joint = TriplePmf { m, l, k, p };
        Ok(AuxJoint { base, channel, joint })
    }

    pub fn base(&self) -> &JointPmf {
        &self.base
    }

    pub fn channel(&self) -> &AuxChannel {
        &self.channel
    }

    pub fn joint(&self) -> &TriplePmf {
        &self.joint
    }

    pub fn p_u(&self) -> Dist {
        self.joint.p_u()
    }

    pub fn mutual_information(&self, pair: Pair) -> f64 {
        mutual_information(self, pair)
    }

    /// `H(X|U)`.
    pub fn h_x_given_u(&self) -> f64 {
        self.joint.xu().conditional_entropy(Axis::Y)
    }

    /// `H(Y|U)`.
    pub fn h_y_given_u(&self) -> f64 {
        self.joint.yu().conditional_entropy(Axis::Y)
    }
}

/// `I(Y;U)` or `I(X;U)` from the derived joint, clamped at zero.
pub fn mutual_information(a: &AuxJoint, pair: Pair) -> f64 {
    let j = match pair {
        Pair::YU => a.joint.yu(),
        Pair::XU => a.joint.xu(),
    };
    (j.entropy_of(Axis::X) + j.entropy_of(Axis::Y) - j.joint_entropy()).max(0.0)
}

/// Binary entropy function in bits.
pub fn binary_entropy(p: f64) -> f64 {
    plogp(p) + plogp(1.0 - p)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn bsc_channel(a: f64, k: usize) -> AuxChannel {
        let mut r0 = vec![0.0; k];
        let mut r1 = vec![0.0; k];
        r0[0] = 1.0 - a;
        r0[1] = a;
        r1[0] = a;
        r1[1] = 1.0 - a;
        AuxChannel::new(&[r0, r1]).unwrap()
    }

    #[test]
    fn validate_accepts_uniform() {
        let j = validate_pmf(&[vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        assert_eq!((j.m(), j.l()), (2, 2));
        assert_abs_diff_eq!(j.joint_entropy(), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn validate_rejects_bad_input() {
        assert!(matches!(validate_pmf(&[vec![0.5, 0.6]]), Err(Error::NotNormalized { .. })));
        assert!(matches!(validate_pmf(&[vec![1.1, -0.1]]), Err(Error::NegativeMass { .. })));
        assert_eq!(validate_pmf(&[]), Err(Error::EmptyAlphabet));
        assert_eq!(validate_pmf(&[vec![]]), Err(Error::EmptyAlphabet));
        assert!(matches!(validate_pmf(&[vec![0.5, 0.25], vec![0.25]]), Err(Error::Ragged { row: 1, .. })));
    }

    #[test]
    fn validate_renormalizes_within_tolerance() {
        let j = validate_pmf(&[vec![0.5 + 5e-10, 0.5], vec![0.0, -1e-13]]).unwrap();
        let s: f64 = j.as_slice().iter().sum();
        assert_abs_diff_eq!(s, 1.0, epsilon = 1e-15);
        assert_eq!(j.get(1, 1), 0.0);
    }

    #[test]
    fn dsbs_from_bsc_rows() {
        // (1/2)·BSC(0.25) rows
        let rows: Vec<Vec<f64>> = vec![vec![0.5 * 0.75, 0.5 * 0.25], vec![0.5 * 0.25, 0.5 * 0.75]];
        let sum: f64 = rows.iter().flatten().sum();
        assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-15);
        let j = validate_pmf(&rows).unwrap();
        assert_eq!(j, JointPmf::dsbs(0.25));
        assert_eq!(j.rows(), vec![vec![0.375, 0.125], vec![0.125, 0.375]]);
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(entropy(&Dist::new(vec![0.5, 0.5]).unwrap()), 1.0, epsilon = 1e-15);
        assert_eq!(entropy(&Dist::new(vec![1.0, 0.0]).unwrap()), 0.0);
        let direct = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        let h = entropy(&Dist::new(vec![0.25, 0.75]).unwrap());
        assert_abs_diff_eq!(h, direct, epsilon = 1e-15);
        assert_abs_diff_eq!(h, 0.811278124459, epsilon = 1e-12);
    }

    #[test]
    fn conditional_entropy_examples() {
        let indep = JointPmf::independent(&Dist::uniform(2), &Dist::uniform(2));
        assert_abs_diff_eq!(conditional_entropy(&indep, Axis::Y), 1.0, epsilon = 1e-12);
        let copy = validate_pmf(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_abs_diff_eq!(conditional_entropy(&copy, Axis::Y), 0.0, epsilon = 1e-12);

        let j = JointPmf::dsbs(0.25);
        // direct sum of p(x,y) log 1/p(x|y)
        let py = j.marginal_y();
        let mut direct = 0.0;
        for x in 0..2 {
            for y in 0..2 {
                let pxy = j.get(x, y);
                direct -= pxy * (pxy / py.prob(y)).log2();
            }
        }
        let h = conditional_entropy(&j, Axis::Y);
        assert_abs_diff_eq!(h, direct, epsilon = 1e-12);
        assert_abs_diff_eq!(h, binary_entropy(0.25), epsilon = 1e-12);
    }

    #[test]
    fn mutual_information_examples() {
        let j = JointPmf::dsbs(0.25);
        let copy = AuxJoint::new(j.clone(), AuxChannel::copy(2, 4)).unwrap();
        assert_abs_diff_eq!(copy.mutual_information(Pair::YU), 1.0, epsilon = 1e-12);
        let constant = AuxJoint::new(j.clone(), AuxChannel::constant(2, 4)).unwrap();
        assert_abs_diff_eq!(constant.mutual_information(Pair::YU), 0.0, epsilon = 1e-12);

        let a = AuxJoint::new(j, bsc_channel(0.1, 4)).unwrap();
        let i = a.mutual_information(Pair::YU);
        // direct: Y uniform, U|Y ~ BSC(0.1) so p(y,u) = 0.5·BSC
        let mut direct = 0.0;
        for (pyu, pu) in [(0.45, 0.5), (0.05, 0.5), (0.05, 0.5), (0.45, 0.5)] {
            let v: f64 = pyu;
            direct += v * (v / (0.5 * pu)).log2();
        }
        assert_abs_diff_eq!(i, direct, epsilon = 1e-12);
        assert_abs_diff_eq!(i, 1.0 - binary_entropy(0.1), epsilon = 1e-12);
        assert_abs_diff_eq!(i, 0.531004406, epsilon = 1e-9);
    }

    #[test]
    fn posterior_examples() {
        let indep = JointPmf::independent(&Dist::uniform(2), &Dist::uniform(2));
        assert_eq!(posterior(&indep, Axis::Y, 0).unwrap(), Dist::uniform(2));
        let copy = validate_pmf(&[vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_eq!(posterior(&copy, Axis::Y, 1).unwrap(), Dist::point(2, 1));
        let d = posterior(&JointPmf::dsbs(0.25), Axis::Y, 0).unwrap();
        assert_abs_diff_eq!(d.prob(0), 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(d.prob(1), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn posterior_on_null_symbol_fails() {
        let j = validate_pmf(&[vec![0.5, 0.0], vec![0.5, 0.0]]).unwrap();
        assert_eq!(j.marginal_y().prob(1), 0.0);
        assert_eq!(posterior(&j, Axis::Y, 1), Err(Error::ZeroProbabilityCondition { symbol: 1 }));
        assert!(posterior(&j, Axis::X, 0).is_ok());
    }

    #[test]
    fn aux_joint_rejects_oversized_alphabet() {
        let j = JointPmf::dsbs(0.1);
        let rows = vec![vec![0.2; 5], vec![0.2; 5]];
        let ch = AuxChannel::new(&rows).unwrap();
        assert!(matches!(AuxJoint::new(j, ch), Err(Error::DimensionMismatch(_))));
    }

    pub(crate) fn arb_joint(max_m: usize, max_l: usize) -> impl Strategy<Value = JointPmf> {
        (1..=max_m, 1..=max_l)
            .prop_flat_map(|(m, l)| prop::collection::vec(0.0f64..1.0, m * l).prop_map(move |w| (m, l, w)))
            .prop_filter_map("nonzero mass", |(m, l, w)| {
                let s: f64 = w.iter().sum();
                if s <= 1e-6 {
                    return None;
                }
                let rows: Vec<Vec<f64>> = w.chunks(l).map(|r| r.iter().map(|v| v / s).collect()).collect();
                debug_assert_eq!(rows.len(), m);
                validate_pmf(&rows).ok()
            })
    }

    fn arb_aux() -> impl Strategy<Value = AuxJoint> {
        arb_joint(4, 4).prop_flat_map(|j| {
            let l = j.l();
            (Just(j), 1..=(l + 2)).prop_flat_map(move |(j, k)| {
                prop::collection::vec(0.01f64..1.0, l * k).prop_map(move |w| {
                    let rows: Vec<Vec<f64>> = w
                        .chunks(k)
                        .map(|r| {
                            let s: f64 = r.iter().sum();
                            r.iter().map(|v| v / s).collect()
                        })
                        .collect();
                    AuxJoint::new(j.clone(), AuxChannel::new(&rows).unwrap()).unwrap()
                })
            })
        })
    }

    proptest! {
        #[test]
        fn chain_rule(j in arb_joint(5, 5)) {
            let hxy = j.joint_entropy();
            let lhs1 = j.entropy_of(Axis::Y) + conditional_entropy(&j, Axis::Y);
            let lhs2 = j.entropy_of(Axis::X) + conditional_entropy(&j, Axis::X);
            prop_assert!((hxy - lhs1).abs() < 1e-12);
            prop_assert!((hxy - lhs2).abs() < 1e-12);
        }

        #[test]
        fn conditioning_reduces_entropy(j in arb_joint(5, 5)) {
            let hxy = conditional_entropy(&j, Axis::Y);
            let hx = j.entropy_of(Axis::X);
            prop_assert!(hxy >= 0.0);
            prop_assert!(hxy <= hx + 1e-12);
            prop_assert!(hx <= (j.m() as f64).log2() + 1e-12);
        }

        #[test]
        fn data_processing(a in arb_aux()) {
            let ixu = a.mutual_information(Pair::XU);
            let iyu = a.mutual_information(Pair::YU);
            prop_assert!(ixu <= iyu + 1e-12);
            let hx = a.base().entropy_of(Axis::X);
            prop_assert!((a.h_x_given_u() - (hx - ixu)).abs() < 1e-12);
        }

        #[test]
        fn entropy_permutation_invariant(w in prop::collection::vec(0.0f64..1.0, 1..8), seed in any::<u64>()) {
            let s: f64 = w.iter().sum();
            prop_assume!(s > 1e-6);
            let d = Dist::new(w.iter().map(|v| v / s).collect()).unwrap();
            let mut idx: Vec<usize> = (0..w.len()).collect();
            // deterministic Fisher–Yates from the seed
            let mut state = seed;
            for i in (1..idx.len()).rev() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let j = (state >> 33) as usize % (i + 1);
                idx.swap(i, j);
            }
            let permuted = Dist::new(idx.iter().map(|&i| d.prob(i)).collect()).unwrap();
            prop_assert!((entropy(&d) - entropy(&permuted)).abs() < 1e-12);
        }
    }
}
