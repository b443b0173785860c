//! Two-mode fixed-photon-number states and their free-space transforms.
//!
//! A [`TwoModeState`] holds the N+1 complex amplitudes c_n of an N-photon
//! superposition over the basis kets |n, N−n⟩ (n photons in mode 1, N−n in
//! mode 2). The distinguished construction is the reciprocal binomial state
//!
//! ```text
//! |ψ⟩ = 𝒩^{-1/2} Σ_n √(n!(N−n)!) |n, N−n⟩,    𝒩 = Σ_n n!(N−n)!
//! ```
//!
//! whose flattened amplitude weights make the downstream deposition sum a
//! pure Dirichlet kernel. Counter-propagating free-space travel and a
//! relative phase between the modes are both diagonal in this basis, so the
//! transforms below are plain phase multiplications.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::exact::factorial_big;

/// Largest photon number for which N! still converts to a finite f64 after
/// the exact-integer stage.
pub const MAX_PHOTON_NUMBER: u32 = 170;

/// Absolute tolerance on Σ|c_n|² − 1 at construction.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// An N-photon two-mode state, stored densely as N+1 complex amplitudes.
///
/// Immutable after construction; transforms return fresh values, so states
/// can be shared or sent across threads freely.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    photon_number: u32,
    amplitudes: Vec<Complex64>,
}

impl TwoModeState {
    /// Builds a state from explicit amplitudes, enforcing N ≥ 1, the
    /// (N+1)-length layout, and unit norm within [`NORM_TOLERANCE`].
    pub fn new(photon_number: u32, amplitudes: Vec<Complex64>) -> Result<Self> {
        if !(1..=MAX_PHOTON_NUMBER).contains(&photon_number) {
            return Err(Error::PhotonNumber {
                n: photon_number,
                min: 1,
                max: MAX_PHOTON_NUMBER,
            });
        }
        let expected = photon_number as usize + 1;
        if amplitudes.len() != expected {
            return Err(Error::AmplitudeCount {
                n: photon_number,
                expected,
                got: amplitudes.len(),
            });
        }
        for c in &amplitudes {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(Error::NonFinite {
                    what: "amplitude",
                    value: if c.re.is_finite() { c.im } else { c.re },
                });
            }
        }
        let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Unnormalized {
                norm_sqr,
                tolerance: NORM_TOLERANCE,
            });
        }
        Ok(TwoModeState {
            photon_number,
            amplitudes,
        })
    }

    /// The reciprocal binomial state: c_n = √(n!(N−n)!/𝒩) with
    /// 𝒩 = Σ_n n!(N−n)!.
    ///
    /// Factorials and their sum are computed in exact integer arithmetic;
    /// each weight is converted to f64 exactly once, as the rational
    /// n!(N−n)!/𝒩 ≤ 1, so no intermediate overflows even at N = 170.
    /// All amplitudes come out real, nonnegative, and palindromic
    /// (c_n = c_{N−n} exactly).
    pub fn reciprocal_binomial(photon_number: u32) -> Result<Self> {
        if !(1..=MAX_PHOTON_NUMBER).contains(&photon_number) {
            return Err(Error::PhotonNumber {
                n: photon_number,
                min: 1,
                max: MAX_PHOTON_NUMBER,
            });
        }
        let n = photon_number;
        let weights: Vec<BigInt> = (0..=n)
            .map(|k| BigInt::from(factorial_big(k) * factorial_big(n - k)))
            .collect();
        let normalization: BigInt = weights.iter().sum();
        let amplitudes = weights
            .into_iter()
            .map(|w| {
                let ratio = BigRational::new(w, normalization.clone())
                    .to_f64()
                    .expect("weight ratio is in [0, 1]");
                Complex64::new(ratio.sqrt(), 0.0)
            })
            .collect();
        Ok(TwoModeState {
            photon_number,
            amplitudes,
        })
    }

    pub fn photon_number(&self) -> u32 {
        self.photon_number
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of the basis ket |n, N−n⟩.
    pub fn amplitude(&self, n: u32) -> Complex64 {
        self.amplitudes[n as usize]
    }

    /// Free-space propagation to position `x` (in units of λ): the two
    /// counter-propagating modes accumulate opposite phases, leaving the
    /// relative factor e^{i2πx(2n−N)} on c_n. The n-independent global phase
    /// is dropped. `x` must be finite.
    pub fn propagate(&self, x: f64) -> TwoModeState {
        debug_assert!(x.is_finite());
        let n = f64::from(self.photon_number);
        self.phase_map(|k| 2.0 * std::f64::consts::PI * x * (2.0 * k - n))
    }

    /// Relative phase shift of mode 1 against mode 2 by 2πℓ/(N+1):
    /// c_n ↦ c_n·e^{i2πℓn/(N+1)}. Half-integer ℓ is the half-pixel shift;
    /// ℓ and ℓ+(N+1) act identically. `ell` must be finite.
    pub fn apply_relative_phase(&self, ell: f64) -> TwoModeState {
        debug_assert!(ell.is_finite());
        let period = f64::from(self.photon_number) + 1.0;
        self.phase_map(|k| 2.0 * std::f64::consts::PI * ell * k / period)
    }

    fn phase_map(&self, phase: impl Fn(f64) -> f64) -> TwoModeState {
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, c)| c * Complex64::cis(phase(k as f64)))
            .collect();
        TwoModeState {
            photon_number: self.photon_number,
            amplitudes,
        }
    }

    /// Σ|c_n|², kept around for norm-preservation checks.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }
}
