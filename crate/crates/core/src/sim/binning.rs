//! Random binning of finite sequence spaces and the lossless sub-block codes
//! built on it.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pmf::Dist;

/// Largest sequence space any simulator enumerates.
pub const SPACE_LIMIT: u64 = 1 << 20;

/// Which source a bin assignment hashes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Space {
    X,
    Y,
}

/// `|alphabet|^len`, or an error past [`SPACE_LIMIT`].
pub(crate) fn space_size(alphabet: usize, len: usize) -> Result<u64> {
    let size = (alphabet as f64).powi(len as i32);
    if size > SPACE_LIMIT as f64 {
        return Err(Error::EnumerationTooLarge { size, limit: SPACE_LIMIT as f64 });
    }
    Ok((alphabet as u64).pow(len as u32))
}

/// Lexicographic index of a sequence, first symbol most significant.
pub(crate) fn seq_index(seq: &[usize], alphabet: usize) -> u64 {
    seq.iter().fold(0u64, |acc, &s| acc * alphabet as u64 + s as u64)
}

pub(crate) fn seq_digits(mut index: u64, alphabet: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (index % alphabet as u64) as usize;
        index /= alphabet as u64;
    }
    out
}

/// A uniformly random map from a sequence space onto `bin_count` bins in
/// which every bin receives `⌊space/bin_count⌋` or one more sequences.
///
/// A random permutation is drawn and sequence `j` lands in bin
/// `perm[j] mod bin_count`. Each sequence is still uniform over bins, as in
/// i.i.d. binning, but bins never run empty while others overflow.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinAssignment {
    pub space: Space,
    pub bin_count: u64,
    #[serde(skip)]
    perm: Vec<u32>,
    #[serde(skip)]
    inverse: Vec<u32>,
}

impl BinAssignment {
    pub fn random(rng: &mut impl Rng, space: Space, size: u64, bin_count: u64) -> Self {
        assert!(size <= SPACE_LIMIT && bin_count >= 1);
        let mut inverse: Vec<u32> = (0..size as u32).collect();
        inverse.shuffle(rng);
        let mut perm = vec![0u32; size as usize];
        for (v, &j) in inverse.iter().enumerate() {
            perm[j as usize] = v as u32;
        }
        BinAssignment { space, bin_count: bin_count.min(size.max(1)), perm, inverse }
    }

    pub fn size(&self) -> u64 {
        self.perm.len() as u64
    }

    pub fn bin_of(&self, index: u64) -> u64 {
        self.perm[index as usize] as u64 % self.bin_count
    }

    /// Sequence indices in bin `b`, in increasing order of their permuted label.
    pub fn members(&self, b: u64) -> impl Iterator<Item = u64> + '_ {
        (b..self.size()).step_by(self.bin_count as usize).map(move |v| self.inverse[v as usize] as u64)
    }
}

/// What the decoder of a lossless sub-block ends up with.
// the full trace is only inspected by tests
#[cfg_attr(not(test), allow(dead_code))]
#[derive(Clone, Debug)]
pub(crate) struct Lossless {
    pub bits: u32,
    pub bins: BinAssignment,
    pub bin: u64,
    /// Exact per-position posterior given the bin and the side information.
    pub reproductions: Vec<Dist>,
    /// The strict unique weakly-typical search did not return the truth.
    pub error: bool,
}

/// Bits to spend on a lossless block of `len` symbols at `per_symbol`
/// bits/symbol, never more than the raw description.
pub(crate) fn lossless_bits(alphabet: usize, len: usize, per_symbol: f64) -> Result<(u32, u64)> {
    let size = space_size(alphabet, len)?;
    let raw = (size as f64).log2().ceil() as u32;
    let wanted = (len as f64 * per_symbol - 1e-9).ceil().max(0.0) as u32;
    Ok((wanted.min(raw), size))
}

/// Sends `xs` by its bin index; the decoder knows `cond[i]`, the distribution
/// of the `i`-th symbol given its side information.
///
/// `per_symbol` sets the bin count and `h`, `eps` the weak-typicality window
/// of the uniqueness search.
#[allow(clippy::too_many_arguments)]
pub(crate) fn lossless_block(
    rng: &mut impl Rng,
    space: Space,
    xs: &[usize],
    cond: &[&[f64]],
    alphabet: usize,
    per_symbol: f64,
    h: f64,
    eps: f64,
) -> Result<Lossless> {
    let len = xs.len();
    let (bits, size) = lossless_bits(alphabet, len, per_symbol)?;
    let bin_count = (1u64 << bits).min(size);
    let bins = BinAssignment::random(rng, space, size, bin_count);
    let truth = seq_index(xs, alphabet);
    let bin = bins.bin_of(truth);
    if len == 0 {
        return Ok(Lossless { bits, bins, bin, reproductions: vec![], error: false });
    }

    let mut members = Vec::new();
    let mut loglik = Vec::new();
    for j in bins.members(bin) {
        let digits = seq_digits(j, alphabet, len);
        let ll: f64 = digits.iter().enumerate().map(|(i, &s)| cond[i][s].log2()).sum();
        members.push(digits);
        loglik.push(ll);
    }
    let top = loglik.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = loglik.iter().map(|&ll| (ll - top).exp2()).collect();
    let total: f64 = weights.iter().sum();
    let reproductions = (0..len)
        .map(|i| {
            let mut q = vec![0.0; alphabet];
            for (digits, w) in members.iter().zip(&weights) {
                q[digits[i]] += w / total;
            }
            Dist::from_raw_unchecked(q)
        })
        .collect();

    let typical: Vec<&Vec<usize>> =
        members.iter().zip(&loglik).filter(|(_, &ll)| (-ll / len as f64 - h).abs() < eps).map(|(d, _)| d).collect();
    let error = !(typical.len() == 1 && typical[0].as_slice() == xs);
    Ok(Lossless { bits, bins, bin, reproductions, error })
}

/// Index into the weakly typical set of an i.i.d. source, with one extra
/// codeword flagging atypical sequences when the set is not everything.
#[derive(Clone, Debug)]
pub(crate) struct TypicalIndex {
    pub bits: u32,
    logp: Vec<f64>,
    h: f64,
    eps: f64,
}

impl TypicalIndex {
    pub fn new(dist: &Dist, len: usize, eps: f64) -> Result<Self> {
        let size = space_size(dist.len(), len)?;
        let logp: Vec<f64> = dist.probs().iter().map(|&p| p.log2()).collect();
        let h = dist.entropy();
        let mut me = TypicalIndex { bits: 0, logp, h, eps };
        if len == 0 {
            return Ok(me);
        }
        let count = (0..size).filter(|&j| me.is_typical(&seq_digits(j, dist.len(), len))).count() as u64;
        let codewords = count + u64::from(count < size);
        me.bits = if codewords <= 1 { 0 } else { (codewords as f64).log2().ceil() as u32 };
        Ok(me)
    }

    pub fn is_typical(&self, seq: &[usize]) -> bool {
        if seq.is_empty() {
            return true;
        }
        let ll: f64 = seq.iter().map(|&s| self.logp[s]).sum();
        (-ll / seq.len() as f64 - self.h).abs() < self.eps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_sequence_in_exactly_one_bin() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bins = BinAssignment::random(&mut rng, Space::X, 100, 7);
        let mut seen = vec![0; 100];
        for b in 0..7 {
            let members: Vec<u64> = bins.members(b).collect();
            assert!(members.len() == 14 || members.len() == 15);
            for j in members {
                assert_eq!(bins.bin_of(j), b);
                seen[j as usize] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn bin_count_is_capped_by_space() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bins = BinAssignment::random(&mut rng, Space::Y, 8, 64);
        assert_eq!(bins.bin_count, 8);
    }

    #[test]
    fn indexing_round_trips() {
        for j in 0..81 {
            assert_eq!(seq_index(&seq_digits(j, 3, 4), 3), j);
        }
        assert_eq!(seq_index(&[1, 0, 1], 2), 5);
    }

    #[test]
    fn guard() {
        assert!(space_size(2, 20).is_ok());
        assert!(matches!(space_size(2, 21), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn full_rate_block_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cond = [0.75, 0.25];
        let c: Vec<&[f64]> = vec![&cond; 5];
        let out = lossless_block(&mut rng, Space::X, &[0, 1, 1, 0, 0], &c, 2, 1.0, 0.811, 0.5).unwrap();
        assert_eq!(out.bits, 5);
        for (r, &x) in out.reproductions.iter().zip(&[0, 1, 1, 0, 0]) {
            assert_eq!(r.prob(x), 1.0);
        }
    }

    #[test]
    fn zero_rate_block_is_prior() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cond = [0.75, 0.25];
        let c: Vec<&[f64]> = vec![&cond; 4];
        let out = lossless_block(&mut rng, Space::X, &[0, 1, 1, 0], &c, 2, 0.0, 0.811, 0.1).unwrap();
        assert_eq!(out.bits, 0);
        for r in &out.reproductions {
            assert!((r.prob(0) - 0.75).abs() < 1e-12);
        }
        assert!(out.error);
    }

    #[test]
    fn uniform_typical_set_is_everything() {
        let t = TypicalIndex::new(&Dist::uniform(2), 8, 0.1).unwrap();
        assert_eq!(t.bits, 8);
        let t = TypicalIndex::new(&Dist::new(vec![0.75, 0.25]).unwrap(), 8, 0.1).unwrap();
        // exactly the sequences with two ones: C(8,2) = 28, plus the flag
        assert_eq!(t.bits, 5);
        assert!(t.is_typical(&[1, 1, 0, 0, 0, 0, 0, 0]));
        assert!(!t.is_typical(&[1, 0, 0, 0, 0, 0, 0, 0]));
    }
}
