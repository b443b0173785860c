//! Birefringent phase-plate banks.
//!
//! The relative phase 2πℓ/(N+1) that aims a kernel at pixel ℓ is realized
//! optically by inserting plates whose optical path differences are
//! power-of-two multiples of λ/(N+1); the binary decomposition of ℓ mod N+1
//! selects which plates go in, so ⌈log₂(N+1)⌉ plates cover every pixel. An
//! extra λ/[2(N+1)] plate realizes the half-pixel-shifted grid.

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Plate selection realizing one relative phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlateBank {
    photon_number: u32,
    plates: Vec<u32>,
    half_shift: bool,
}

impl PlateBank {
    pub fn photon_number(&self) -> u32 {
        self.photon_number
    }

    /// Indices k of the selected plates; plate k has retardance 2ᵏ·λ/(N+1).
    pub fn plates(&self) -> &[u32] {
        &self.plates
    }

    /// Whether the λ/[2(N+1)] half-shift plate is inserted.
    pub fn has_half_shift(&self) -> bool {
        self.half_shift
    }

    /// Total number of physical plates in the bank.
    pub fn plate_count(&self) -> usize {
        self.plates.len() + usize::from(self.half_shift)
    }

    /// Retardance of plate k in units of λ, exact.
    pub fn plate_retardance(&self, k: u32) -> Ratio<u64> {
        Ratio::new(1u64 << k, u64::from(self.photon_number) + 1)
    }

    /// Summed optical path difference of the bank in units of λ, exact;
    /// equals (ℓ mod (N+1))/(N+1) for the requested ℓ.
    pub fn total_retardance(&self) -> Ratio<u64> {
        let period = u64::from(self.photon_number) + 1;
        let mut total = Ratio::new(0, 1);
        for &k in &self.plates {
            total += Ratio::new(1u64 << k, period);
        }
        if self.half_shift {
            total += Ratio::new(1, 2 * period);
        }
        total
    }

    /// The phase index ℓ' ∈ [0, N+1) this bank realizes.
    pub fn reduced_ell(&self) -> f64 {
        let whole: u64 = self.plates.iter().map(|&k| 1u64 << k).sum();
        whole as f64 + if self.half_shift { 0.5 } else { 0.0 }
    }
}

/// Decomposes the phase for pixel index `ell` (integer or half-integer) into
/// a plate bank: ℓ is reduced modulo N+1 into [0, N+1), the integer part is
/// split into powers of two, and a fractional part of exactly 1/2 selects the
/// half-shift plate.
pub fn plate_bank(ell: f64, photon_number: u32) -> Result<PlateBank> {
    if photon_number < 1 {
        return Err(Error::PhotonNumber {
            n: photon_number,
            min: 1,
            max: u32::MAX,
        });
    }
    if !ell.is_finite() {
        return Err(Error::NonFinite {
            what: "pixel index",
            value: ell,
        });
    }
    let doubled = 2.0 * ell;
    if (doubled - doubled.round()).abs() > 1e-12 {
        return Err(Error::FractionalPixelIndex { value: ell });
    }
    let period = 2 * (i64::from(photon_number) + 1);
    let folded = (doubled.round() as i64).rem_euclid(period) as u64;
    let half_shift = folded % 2 == 1;
    let mut whole = folded / 2;
    let mut plates = Vec::new();
    let mut k = 0;
    while whole > 0 {
        if whole & 1 == 1 {
            plates.push(k);
        }
        whole >>= 1;
        k += 1;
    }
    Ok(PlateBank {
        photon_number,
        plates,
        half_shift,
    })
}
