use num_bigint::BigUint;
use serde::Serialize;

use crate::error::{Error, Result};

/// Bounds on `log2` of the number of messages storable in `n` cells with `t` stuck cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KuznetsovBounds {
    pub lower: usize,
    pub upper: usize,
}

/// `n − t − ⌈log₂ ln(2^t · C(n,t))⌉ ≤ log₂ M ≤ n − t`.
///
/// The binomial is computed exactly. At `t = 0` the logarithm is undefined
/// and both bounds are reported as `n`. The lower bound is clamped at 0.
pub fn kuznetsov_bounds(n: usize, t: usize) -> Result<KuznetsovBounds> {
    if t > n {
        return Err(Error::Usage(format!("t = {t} exceeds n = {n}")));
    }
    let upper = n - t;
    if t == 0 {
        return Ok(KuznetsovBounds { lower: n, upper });
    }
    let count = binomial(n, t) << t;
    // count >= 2, so ln(count) > 1/2 and the ceiling is never negative.
    let gap = ln_biguint(&count).log2().ceil().max(0.0) as usize;
    Ok(KuznetsovBounds { lower: upper.saturating_sub(gap), upper })
}

fn binomial(n: usize, t: usize) -> BigUint {
    let t = t.min(n - t);
    let mut c = BigUint::from(1u32);
    for i in 0..t {
        c = c * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    c
}

/// Natural log of a positive big integer, from its top 64 bits and bit length.
fn ln_biguint(x: &BigUint) -> f64 {
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0) as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `n − k − ⌈k/r⌉ + 2`, the largest minimum distance compatible with locality `r`.
pub fn singleton_bound(n: usize, k: usize, r: usize) -> Result<usize> {
    if r == 0 || r > k {
        return Err(Error::Usage(format!("locality r = {r} must lie in [1, k = {k}]")));
    }
    if k > n {
        return Err(Error::Usage(format!("k = {k} exceeds n = {n}")));
    }
    Ok(singleton_value(n, k, r))
}

/// The bound formula without range checks; `⌈k/r⌉` is 1 whenever `r ≥ k`.
pub(crate) fn singleton_value(n: usize, k: usize, r: usize) -> usize {
    (n + 2).saturating_sub(k + k.div_ceil(r.max(1)))
}
