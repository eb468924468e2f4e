//! Peak distortion under repetition of a block code.

use crate::error::{Error, Result};

/// Fraction of length-`repeats` windows of consecutive blocks (taken
/// cyclically) whose average distortion exceeds `budget + eps`.
///
/// Repeating a code `N` times and averaging turns an average-distortion
/// guarantee into a high-probability one, by the weak law of large numbers.
pub fn repeat_for_peak(samples: &[f64], budget: f64, eps: f64, repeats: usize) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::InvalidParameter("no distortion samples".into()));
    }
    if repeats == 0 {
        return Err(Error::InvalidParameter("window length must be at least 1".into()));
    }
    let len = samples.len();
    let mut prefix = Vec::with_capacity(2 * len + 1);
    prefix.push(0.0);
    for i in 0..(len + repeats) {
        let last = *prefix.last().expect("nonempty");
        prefix.push(last + samples[i % len]);
    }
    let over = (0..len).filter(|&s| (prefix[s + repeats] - prefix[s]) / repeats as f64 > budget + eps).count();
    Ok(over as f64 / len as f64)
}
