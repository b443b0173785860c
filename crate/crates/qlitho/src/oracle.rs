//! Brute-force operator-expectation oracles.
//!
//! These evaluate the deposition rate from first principles — as the
//! normally ordered absorption expectation ⟨ê†ᵏêᵏ⟩/k! on explicit Fock
//! amplitudes with exact integer combinatorics — and deliberately share no
//! code with the Dirichlet/sine-ratio evaluators in [`crate::kernel`]. The
//! two routes are compared against each other in the tests; keeping them
//! independent is the point.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{binomial_u128, factorial_u128, multinomial_u128};
use crate::kernel::KernelSpec;
use crate::state::TwoModeState;

/// Exact-combinatorics cutoff for the two-mode expectation.
pub const TWO_MODE_ORACLE_MAX_N: u32 = 20;

/// Exact-combinatorics cutoff (per axis) for the four-mode expectation.
pub const FOUR_MODE_ORACLE_MAX_N: u32 = 4;

/// ⟨ê†ᴺêᴺ⟩/N! for ê = (â₁ + â₂)/√2 on a two-mode N-photon state.
///
/// êᴺ maps |n, N−n⟩ to 2^{−N/2} C(N,n) √(n!(N−n)!) |0,0⟩, so the expectation
/// is the squared modulus of one amplitude-weighted sum. Binomials and
/// factorials are exact integers up to the N ≤ 20 cutoff.
pub fn deposition_two_mode_oracle(state: &TwoModeState) -> Result<f64> {
    let n = state.photon_number();
    if n > TWO_MODE_ORACLE_MAX_N {
        return Err(Error::OracleCutoff {
            n,
            max: TWO_MODE_ORACLE_MAX_N,
        });
    }
    let scale = (-f64::from(n) / 2.0).exp2();
    let mut amplitude = Complex64::new(0.0, 0.0);
    for k in 0..=n {
        let weight = binomial_u128(n, k) as f64
            * ((factorial_u128(k) * factorial_u128(n - k)) as f64).sqrt();
        amplitude += state.amplitude(k) * (scale * weight);
    }
    Ok(amplitude.norm_sqr() / factorial_u128(n) as f64)
}

/// ⟨ê†²ᴺê²ᴺ⟩/(2N)! for ê = (â₁ + â₂ + â₃ + â₄)/2 on the product of two
/// N-photon two-mode states (modes 1,2 along X, modes 3,4 along Y).
///
/// ê²ᴺ collapses each four-mode basis ket through one multinomial term, so
/// the expectation is again a single squared sum, here over the (N+1)²
/// product kets.
pub fn deposition_four_mode_oracle(
    state_x: &TwoModeState,
    state_y: &TwoModeState,
) -> Result<f64> {
    let n = state_x.photon_number();
    if state_y.photon_number() != n {
        return Err(Error::PhotonNumberMismatch {
            left: n,
            right: state_y.photon_number(),
        });
    }
    if n > FOUR_MODE_ORACLE_MAX_N {
        return Err(Error::OracleCutoff {
            n,
            max: FOUR_MODE_ORACLE_MAX_N,
        });
    }
    let total = 2 * n;
    let scale = (-f64::from(total)).exp2();
    let mut amplitude = Complex64::new(0.0, 0.0);
    for m in 0..=n {
        for k in 0..=n {
            let occupancy = [m, n - m, k, n - k];
            let root_product = occupancy
                .iter()
                .map(|&o| factorial_u128(o) as f64)
                .product::<f64>()
                .sqrt();
            let weight = multinomial_u128(total, &occupancy) as f64 * root_product;
            amplitude += state_x.amplitude(m) * state_y.amplitude(k) * (scale * weight);
        }
    }
    Ok(amplitude.norm_sqr() / factorial_u128(total) as f64)
}

/// The exposure state whose deposition expectation tracks
/// `kernel_1d(spec, ·)` at position `x`: the reciprocal binomial state
/// propagated by x − x_ℓ.
pub fn probe_state(spec: &KernelSpec, x: f64) -> Result<TwoModeState> {
    let state = TwoModeState::reciprocal_binomial(spec.photon_number())?;
    Ok(state.propagate(x - spec.pixel_center()))
}
