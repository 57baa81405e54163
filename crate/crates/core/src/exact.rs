//! Exact integer helpers for the inequality checks.

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// A positive rational split into numerator and denominator.
pub fn positive_parts(r: &BigRational, what: &str) -> Result<(BigUint, BigUint)> {
    if !r.is_positive() {
        return Err(Error::precondition(format!("{what} must be positive, got {r}")));
    }
    let num = r.numer().to_biguint().expect("positive");
    let den = r.denom().to_biguint().expect("positive");
    Ok((num, den))
}

/// `⌊base^(num/den)⌋`: the largest `r` with `r^den ≤ base^num`.
pub fn floor_rational_power(base: u64, num: u32, den: u32) -> u64 {
    assert!(den > 0);
    let target = BigUint::from(base).pow(num);
    let fits = |r: u64| BigUint::from(r).pow(den) <= target;
    // r ≤ max(base, 1)^ceil(num/den) bounds the answer
    let mut hi: u64 = 1;
    while fits(hi) {
        hi = hi.saturating_mul(2);
        if hi == u64::MAX {
            break;
        }
    }
    let mut lo = 0u64; // fits(0) always holds
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Rational exponent as a pair of small integers.
pub fn small_parts(r: &BigRational, what: &str) -> Result<(u32, u32)> {
    let (num, den) = positive_parts(r, what)?;
    match (num.to_u32(), den.to_u32()) {
        (Some(n), Some(d)) => Ok((n, d)),
        _ => Err(Error::precondition(format!("{what} {r} has too large a numerator or denominator"))),
    }
}

/// `⌈c · log₂ n⌉` for rational `c > 0` and `n ≥ 1`: the least `m ≥ 0` with
/// `2^(den·m) ≥ n^num`.
pub fn ceil_scaled_log2(c: &BigRational, n: u64) -> Result<u64> {
    let (num, den) = small_parts(c, "log-set constant")?;
    let target = BigUint::from(n).pow(num);
    let mut m = 0u64;
    let mut power = BigUint::one();
    let step = BigUint::one() << den as usize;
    while power < target {
        power *= &step;
        m += 1;
    }
    Ok(m)
}

/// `a ≤ r · b`, exactly.
pub fn at_most_times(a: u64, r: &BigRational, b: u64) -> bool {
    let lhs = BigRational::from_integer(a.into());
    let rhs = r * BigRational::from_integer(b.into());
    lhs <= rhs
}

pub fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

/// Greatest common divisor, used by invariant-factor checks.
pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}
