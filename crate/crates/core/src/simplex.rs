//! Probability vectors, empirical types, and type-class combinatorics.
//!
//! A *type* is the empirical distribution of a length-`n` sequence, stored as
//! integer counts with denominator `n`. Everything downstream (exact error
//! probabilities, calibration, limit-law checks) is built on enumerating
//! types and weighting them by their type-class probabilities.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::stream::StreamRng;
use rand::Rng;

/// A probability vector on a `k`-letter alphabet, `k >= 2`.
///
/// Entries are nonnegative and sum to one (within 1e-12 after construction).
/// `interior` records whether every entry is strictly positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
    interior: bool,
}

impl Distribution {
    /// Normalize nonnegative `weights` to a probability vector.
    ///
    /// Rejects vectors of length < 2 and any negative, non-finite, or
    /// all-zero input.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidDistribution("alphabet size must be >= 2"));
        }
        let mut sum = 0.0;
        for &w in weights {
            if !w.is_finite() {
                return Err(Error::InvalidDistribution("weights must be finite"));
            }
            if w < 0.0 {
                return Err(Error::InvalidDistribution("weights must be nonnegative"));
            }
            sum += w;
        }
        if sum <= 0.0 {
            return Err(Error::InvalidDistribution("at least one weight must be positive"));
        }
        let probs: Vec<f64> = weights.iter().map(|&w| w / sum).collect();
        let interior = probs.iter().all(|&p| p > 0.0);
        Ok(Self { probs, interior })
    }

    /// Uniform distribution on `k` symbols.
    pub fn uniform(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidDistribution("alphabet size must be >= 2"));
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
            interior: true,
        })
    }

    pub(crate) fn from_probs_unchecked(probs: Vec<f64>) -> Self {
        let interior = probs.iter().all(|&p| p > 0.0);
        Self { probs, interior }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Alphabet size.
    pub fn k(&self) -> usize {
        self.probs.len()
    }

    /// True iff every entry is strictly positive.
    pub fn is_interior(&self) -> bool {
        self.interior
    }

    /// Cumulative sums with the final entry pinned to exactly 1, for
    /// inverse-CDF sampling.
    fn cumulative(&self) -> Vec<f64> {
        let mut cum = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for &p in &self.probs {
            acc += p;
            cum.push(acc);
        }
        *cum.last_mut().expect("k >= 2") = 1.0;
        cum
    }
}

/// Integer count vector with denominator `n`: the type of a length-`n`
/// sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TypeDistribution {
    counts: Vec<u64>,
    n: u64,
}

impl TypeDistribution {
    /// Build a type from explicit counts; `n` is their sum.
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidDistribution("alphabet size must be >= 2"));
        }
        let n: u64 = counts.iter().sum();
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be >= 1"));
        }
        Ok(Self { counts, n })
    }

    /// Count symbol occurrences in `sample` over an alphabet of size `k`.
    pub fn from_sample(sample: &[u32], k: usize) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InvalidParameter("sample must be nonempty"));
        }
        if k < 2 {
            return Err(Error::InvalidDistribution("alphabet size must be >= 2"));
        }
        let mut counts = vec![0u64; k];
        for &s in sample {
            let idx = s as usize;
            if idx >= k {
                return Err(Error::SymbolOutOfRange { index: s, k });
            }
            counts[idx] += 1;
        }
        Ok(Self {
            counts,
            n: sample.len() as u64,
        })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.counts.len()
    }

    /// The induced probability vector `counts / n`.
    pub fn empirical(&self) -> Distribution {
        let n = self.n as f64;
        Distribution::from_probs_unchecked(self.counts.iter().map(|&c| c as f64 / n).collect())
    }
}

/// Number of types with denominator `n` on `k` symbols: `C(n+k-1, k-1)`.
///
/// Saturates at `u128::MAX` instead of overflowing.
pub fn num_types(n: u64, k: usize) -> u128 {
    binomial(n as u128 + k as u128 - 1, k as u128 - 1)
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        let num = n - k + 1 + i;
        // acc * num may overflow; divide first where exact, else saturate.
        acc = match acc.checked_mul(num) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Streams every composition of `n` into `k` nonnegative counts exactly once.
///
/// Order is decreasing-lexicographic on the count vector, starting at
/// `(n, 0, ..., 0)` and ending at `(0, ..., 0, n)`; the position of a type in
/// this order is its *index*, so disjoint index ranges partition the stream
/// for parallel consumption.
pub struct TypeEnumerator {
    current: Option<Vec<u64>>,
    n: u64,
}

impl TypeEnumerator {
    /// Enumerate all types with denominator `n` on `k` symbols.
    pub fn new(n: u64, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("sample size must be >= 1"));
        }
        if k < 2 {
            return Err(Error::InvalidDistribution("alphabet size must be >= 2"));
        }
        let mut first = vec![0u64; k];
        first[0] = n;
        Ok(Self {
            current: Some(first),
            n,
        })
    }

    /// Start the stream at position `index` of the decreasing-lex order.
    pub fn starting_at(n: u64, k: usize, index: u128) -> Result<Self> {
        let mut e = Self::new(n, k)?;
        e.current = unrank(n, k, index);
        Ok(e)
    }
}

/// Count vector at position `index` of the decreasing-lex order, if any.
fn unrank(n: u64, k: usize, index: u128) -> Option<Vec<u64>> {
    if index >= num_types(n, k) {
        return None;
    }
    let mut counts = vec![0u64; k];
    let mut rem_n = n;
    let mut rem_idx = index;
    for pos in 0..k - 1 {
        let slots = (k - pos - 1) as u128;
        // Count vectors with counts[pos] = v form a contiguous block of size
        // C(rem_n - v + slots - 1, slots - 1), largest v first.
        let mut v = rem_n;
        loop {
            let block = binomial(rem_n as u128 - v as u128 + slots - 1, slots - 1);
            if rem_idx < block {
                break;
            }
            rem_idx -= block;
            v -= 1;
        }
        counts[pos] = v;
        rem_n -= v;
    }
    counts[k - 1] = rem_n;
    Some(counts)
}

impl Iterator for TypeEnumerator {
    type Item = TypeDistribution;

    fn next(&mut self) -> Option<Self::Item> {
        let counts = self.current.take()?;
        let k = counts.len();
        // Decreasing-lex successor: decrement the rightmost nonzero among the
        // first k-1 slots, dump everything to its right (plus one) into the
        // next slot, and zero the tail.
        let mut next = counts.clone();
        let tail: u64 = next[k - 1];
        let pivot = (0..k - 1).rev().find(|&i| next[i] > 0);
        match pivot {
            Some(i) => {
                next[i] -= 1;
                next[i + 1] = tail + 1;
                for c in next.iter_mut().skip(i + 2) {
                    *c = 0;
                }
                self.current = Some(next);
            }
            None => self.current = None,
        }
        Some(TypeDistribution { counts, n: self.n })
    }
}

/// Natural log of the exact probability that an i.i.d. sample from `p` has
/// type `t`: `ln[ multinomial(n; counts) * prod p_i^{counts_i} ]`.
///
/// Returns `-inf` when `t` puts mass on a symbol `p` excludes. Multinomial
/// coefficients go through log-gamma, accurate to well below 1e-10 at desk
/// scale.
pub fn log_type_class_prob(t: &TypeDistribution, p: &Distribution) -> Result<f64> {
    if t.k() != p.k() {
        return Err(Error::DimensionMismatch(t.k(), p.k()));
    }
    let mut log_prob = libm::lgamma(t.n as f64 + 1.0);
    for (&c, &prob) in t.counts.iter().zip(p.probs()) {
        if c == 0 {
            continue;
        }
        if prob == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        log_prob += c as f64 * prob.ln() - libm::lgamma(c as f64 + 1.0);
    }
    Ok(log_prob)
}

/// Draw `n` i.i.d. symbols from `p` by inverse CDF.
///
/// The draw sequence is a pure function of the RNG state, so a stream opened
/// at the same `(seed, stream_id)` reproduces the sample exactly.
pub fn sample_iid(p: &Distribution, n: u64, rng: &mut StreamRng) -> Vec<u32> {
    let cum = p.cumulative();
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        out.push(draw_symbol(&cum, rng));
    }
    out
}

/// Draw `n` i.i.d. symbols from `p` and return only their type.
///
/// Identical draws to [`sample_iid`]; the sequence is just never
/// materialized.
pub fn sample_type(p: &Distribution, n: u64, rng: &mut StreamRng) -> TypeDistribution {
    let cum = p.cumulative();
    let mut counts = vec![0u64; p.k()];
    for _ in 0..n {
        counts[draw_symbol(&cum, rng) as usize] += 1;
    }
    TypeDistribution { counts, n }
}

#[inline]
fn draw_symbol(cum: &[f64], rng: &mut StreamRng) -> u32 {
    let u: f64 = rng.random();
    // First index with cum[i] > u; u < 1 = cum[k-1] keeps this in range.
    cum.partition_point(|&c| c <= u) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logsum::log_sum_exp;
    use crate::stream::stream;

    fn dist(p: &[f64]) -> Distribution {
        Distribution::from_weights(p).unwrap()
    }

    #[test]
    fn from_weights_normalizes() {
        let d = dist(&[1.0, 1.0]);
        assert_eq!(d.probs(), &[0.5, 0.5]);
        assert!(d.is_interior());

        let d = dist(&[9.0, 1.0]);
        assert_eq!(d.probs(), &[0.9, 0.1]);

        let d = dist(&[0.5, 0.5, 0.0]);
        assert_eq!(d.probs(), &[0.5, 0.5, 0.0]);
        assert!(!d.is_interior());
    }

    #[test]
    fn from_weights_rejects_bad_input() {
        assert!(Distribution::from_weights(&[1.0]).is_err());
        assert!(Distribution::from_weights(&[0.0, 0.0]).is_err());
        assert!(Distribution::from_weights(&[-0.1, 1.1]).is_err());
        assert!(Distribution::from_weights(&[f64::NAN, 1.0]).is_err());
    }

    #[test]
    fn type_of_sample_counts() {
        let t = TypeDistribution::from_sample(&[0, 1, 1, 0], 2).unwrap();
        assert_eq!(t.counts(), &[2, 2]);
        assert_eq!(t.n(), 4);

        let t = TypeDistribution::from_sample(&[2, 2, 2], 3).unwrap();
        assert_eq!(t.counts(), &[0, 0, 3]);
    }

    #[test]
    fn type_of_sample_rejects_out_of_range() {
        assert!(matches!(
            TypeDistribution::from_sample(&[0, 3], 2),
            Err(Error::SymbolOutOfRange { index: 3, k: 2 })
        ));
    }

    #[test]
    fn enumeration_order_and_count() {
        let types: Vec<_> = TypeEnumerator::new(2, 2).unwrap().collect();
        let counts: Vec<_> = types.iter().map(|t| t.counts().to_vec()).collect();
        assert_eq!(counts, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);

        assert_eq!(TypeEnumerator::new(1, 3).unwrap().count(), 3);

        // C(22, 2) = 231, cross-checked against the closed-form binomial.
        let n20k3 = TypeEnumerator::new(20, 3).unwrap().count();
        assert_eq!(n20k3 as u128, num_types(20, 3));
        assert_eq!(n20k3, 231);
    }

    #[test]
    fn enumeration_has_no_duplicates() {
        use std::collections::HashSet;
        for (n, k) in [(6u64, 4usize), (9, 3), (4, 5)] {
            let all: Vec<_> = TypeEnumerator::new(n, k).unwrap().collect();
            assert_eq!(all.len() as u128, num_types(n, k));
            let set: HashSet<_> = all.iter().map(|t| t.counts().to_vec()).collect();
            assert_eq!(set.len(), all.len());
            for t in &all {
                assert_eq!(t.counts().iter().sum::<u64>(), n);
            }
        }
    }

    #[test]
    fn starting_at_matches_skip() {
        let all: Vec<_> = TypeEnumerator::new(7, 4).unwrap().collect();
        for start in [0u128, 1, 17, 59, 100] {
            let sub: Vec<_> = TypeEnumerator::starting_at(7, 4, start)
                .unwrap()
                .collect();
            assert_eq!(sub.len(), all.len() - start as usize);
            assert_eq!(sub.first(), all.get(start as usize));
        }
        assert_eq!(
            TypeEnumerator::starting_at(7, 4, num_types(7, 4))
                .unwrap()
                .count(),
            0
        );
    }

    #[test]
    fn type_class_prob_hand_values() {
        let p = dist(&[0.5, 0.5]);
        let t = TypeDistribution::new(vec![2, 0]).unwrap();
        assert!((log_type_class_prob(&t, &p).unwrap() - (0.25f64).ln()).abs() < 1e-14);

        let t = TypeDistribution::new(vec![1, 1]).unwrap();
        assert!((log_type_class_prob(&t, &p).unwrap() - (0.5f64).ln()).abs() < 1e-14);

        let unsupported = TypeDistribution::new(vec![1, 0]).unwrap();
        let q = dist(&[0.0, 1.0]);
        assert_eq!(
            log_type_class_prob(&unsupported, &q).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn type_class_probs_sum_to_one() {
        for (n, k, p) in [
            (12u64, 2usize, dist(&[0.3, 0.7])),
            (8, 3, dist(&[0.2, 0.5, 0.3])),
            (5, 4, dist(&[0.1, 0.2, 0.3, 0.4])),
            (40, 2, dist(&[0.9, 0.1])),
        ] {
            let logs: Vec<f64> = TypeEnumerator::new(n, k)
                .unwrap()
                .map(|t| log_type_class_prob(&t, &p).unwrap())
                .collect();
            assert!(
                log_sum_exp(&logs).abs() < 1e-9,
                "mass off unity for n={n} k={k}"
            );
        }
    }

    #[test]
    fn sampling_degenerate_and_deterministic() {
        let p = dist(&[1.0, 0.0]);
        let mut rng = stream(1, 0);
        assert_eq!(sample_iid(&p, 5, &mut rng), vec![0, 0, 0, 0, 0]);

        let q = dist(&[0.4, 0.6]);
        let a = sample_iid(&q, 100, &mut stream(42, 9));
        let b = sample_iid(&q, 100, &mut stream(42, 9));
        assert_eq!(a, b);
    }

    #[test]
    fn sample_type_matches_sample_iid() {
        let p = dist(&[0.2, 0.3, 0.5]);
        let seq = sample_iid(&p, 500, &mut stream(5, 2));
        let t_seq = TypeDistribution::from_sample(&seq, 3).unwrap();
        let t_direct = sample_type(&p, 500, &mut stream(5, 2));
        assert_eq!(t_seq, t_direct);
    }

    #[test]
    fn empirical_frequency_concentrates() {
        // 3-sigma binomial bound at n = 1e5 is ~0.0047 < 0.01.
        let p = dist(&[0.5, 0.5]);
        let t = sample_type(&p, 100_000, &mut stream(11, 0));
        let freq = t.counts()[0] as f64 / 100_000.0;
        assert!((freq - 0.5).abs() < 0.01, "freq = {freq}");
    }
}
