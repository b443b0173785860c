//! Counting the available states and patterns.

use num_bigint::BigUint;
use num_traits::One;

/// Number of N-photon pure states over four modes: the number of occupation
/// 4-tuples summing to N, i.e. (N+1)(N+2)(N+3)/3!, exact at any N.
pub fn count_pure_states(photon_number: u32) -> BigUint {
    let n = BigUint::from(photon_number);
    (&n + 1u32) * (&n + 2u32) * (&n + 3u32) / BigUint::from(6u32)
}

/// Number of distinct binary pixel patterns reachable with dose mixing on the
/// (N+1)×(N+1) grid: 2^((N+1)²), exact.
pub fn count_patterns(photon_number: u32) -> BigUint {
    let side = u64::from(photon_number) + 1;
    BigUint::one() << (side * side)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force enumeration of nonnegative 4-tuples with Σnᵢ = N.
    fn enumerate_four_mode_states(n: u32) -> u64 {
        let mut count = 0;
        for a in 0..=n {
            for b in 0..=n - a {
                for c in 0..=n - a - b {
                    let _d = n - a - b - c;
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn matches_enumeration_for_small_n() {
        for n in 0..=12 {
            assert_eq!(
                count_pure_states(n),
                BigUint::from(enumerate_four_mode_states(n)),
                "n = {n}"
            );
        }
        assert_eq!(count_pure_states(1), BigUint::from(4u32));
        assert_eq!(count_pure_states(2), BigUint::from(10u32));
        assert_eq!(count_pure_states(6), BigUint::from(84u32));
    }

    #[test]
    fn pattern_counts() {
        assert_eq!(count_patterns(0), BigUint::from(2u32));
        assert_eq!(count_patterns(1), BigUint::from(16u32));
        assert_eq!(count_patterns(6), BigUint::from(1u64 << 49));
    }
}
