//! Exact integer combinatorics backing state construction and the operator
//! oracles. Everything here stays in integer (or big-integer) arithmetic until
//! the caller converts a final ratio to floating point.

use num_bigint::BigUint;
use num_traits::One;

/// n! as a big integer.
pub(crate) fn factorial_big(n: u32) -> BigUint {
    let mut acc = BigUint::one();
    for k in 2..=u64::from(n) {
        acc *= k;
    }
    acc
}

/// n! in u128. Exact for n ≤ 34.
pub(crate) fn factorial_u128(n: u32) -> u128 {
    debug_assert!(n <= 34, "{n}! overflows u128");
    (2..=u128::from(n)).product::<u128>().max(1)
}

/// Binomial coefficient C(n, k) in u128, computed by the usual
/// overflow-avoiding running product.
pub(crate) fn binomial_u128(n: u32, k: u32) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..u128::from(k) {
        acc = acc * (u128::from(n) - i) / (i + 1);
    }
    acc
}

/// Multinomial coefficient total! / Π parts!, with Σ parts = total.
pub(crate) fn multinomial_u128(total: u32, parts: &[u32]) -> u128 {
    debug_assert_eq!(parts.iter().sum::<u32>(), total);
    let mut acc = factorial_u128(total);
    for &p in parts {
        acc /= factorial_u128(p);
    }
    acc
}
