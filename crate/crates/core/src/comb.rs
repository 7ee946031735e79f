//! Exact integer combinatorics used by the design bounds.

use crate::error::{Error, Result};

/// Exact binomial coefficient with overflow detection.
///
/// Evaluated by the stepwise product `r <- r * (n - k + i) / i`; every
/// intermediate value is an exact integer, so the only failure mode is
/// exceeding `u128`.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 1..=k {
        r = r
            .checked_mul((n - k + i) as u128)
            .ok_or(Error::Overflow)?;
        r /= i as u128;
    }
    Ok(r)
}

/// Exact factorial with overflow detection.
pub fn factorial(n: u64) -> Result<u128> {
    let mut r: u128 = 1;
    for i in 2..=n as u128 {
        r = r.checked_mul(i).ok_or(Error::Overflow)?;
    }
    Ok(r)
}
