//! Log-domain probability accumulation.

#[allow(unused_imports)]
use num_traits::Float;

/// `ln(exp(a) + exp(b))` without leaving the log domain.
///
/// `-inf` acts as the additive identity, so it is safe as an accumulator seed.
#[inline]
pub fn log_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Log-sum-exp of a slice, pairwise to keep the result independent of
/// accumulation order up to ~1e-15.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    match values.len() {
        0 => f64::NEG_INFINITY,
        1 => values[0],
        2 => log_add(values[0], values[1]),
        n => {
            let (left, right) = values.split_at(n / 2);
            log_add(log_sum_exp(left), log_sum_exp(right))
        }
    }
}
