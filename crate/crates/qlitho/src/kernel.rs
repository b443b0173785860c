//! Deposition-rate kernels.
//!
//! With both axes measured in units of λ, an N-photon two-mode exposure aimed
//! at pixel ℓ deposits at rate
//!
//! ```text
//! K(x) = |(1/(N+1)) Σ_{n=0}^{N} e^{i4π(x − x_ℓ)n}|²,
//! x_ℓ = (ℓ − 1/2)/(2(N+1)),
//! ```
//!
//! a squared Dirichlet kernel normalized to peak 1. The finite complex sum is
//! regular everywhere and is the canonical evaluator here. The equivalent
//! closed sine ratio
//!
//! ```text
//! K(x) = sin²{[2(N+1)x − ℓ + 1/2]π} / {(N+1)² sin²[(2x − (ℓ−1/2)/(N+1))π]}
//! ```
//!
//! is kept as a cross-check; its 0/0 points are removable and sit exactly at
//! the peaks, so [`kernel_1d_closed`] falls back to the sum form there.
//!
//! Structure worth remembering when reading the tests: K has period 1/2 in x,
//! peaks of width 1/(N+1) (zero to zero), and vanishes identically at every
//! foreign pixel center x_{ℓ'} with ℓ' − ℓ ≢ 0 (mod N+1).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// How close (in units of π) the closed form's denominator argument may come
/// to an integer before the removable singularity is sidestepped via the
/// finite-sum evaluator.
pub const SINGULARITY_GUARD: f64 = 1e-8;

/// Photon number and target pixel index of one deposition kernel.
///
/// `ell` is integer or half-integer in practice (half-integers address the
/// half-pixel-shifted grid), but any finite real is accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    photon_number: u32,
    ell: f64,
}

impl KernelSpec {
    pub fn new(photon_number: u32, ell: f64) -> Result<Self> {
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
        Ok(KernelSpec { photon_number, ell })
    }

    pub fn photon_number(&self) -> u32 {
        self.photon_number
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// Center x_ℓ of the targeted pixel, in units of λ.
    pub fn pixel_center(&self) -> f64 {
        pixel_center(self.photon_number, self.ell)
    }
}

/// Pixel-index → substrate-coordinate map x_ℓ = (ℓ − 1/2)/(2(N+1)), λ units.
///
/// Also converts fractional pixel coordinates, so it doubles as the waypoint
/// transform for ridge paths.
pub fn pixel_center(photon_number: u32, ell: f64) -> f64 {
    (ell - 0.5) / (2.0 * (f64::from(photon_number) + 1.0))
}

/// Shared Dirichlet-sum evaluator; every deposition path in the crate funnels
/// through this single function so 1D, 2D, and accumulated exposures agree
/// bit for bit.
pub(crate) fn dirichlet(photon_number: u32, ell: f64, x: f64) -> f64 {
    let terms = f64::from(photon_number) + 1.0;
    let theta = 4.0 * PI * (x - pixel_center(photon_number, ell));
    let sum: Complex64 = (0..=photon_number)
        .map(|k| Complex64::cis(theta * f64::from(k)))
        .sum();
    // Modulus-squared of a mean of unit phasors; clip the last-ulp excess so
    // replica peaks stay inside [0, 1].
    (sum / terms).norm_sqr().min(1.0)
}

/// Deposition rate at `x` by the everywhere-regular finite sum. Exactly 1 at
/// x = x_ℓ, identically 0 at foreign pixel centers, 1/2-periodic, in [0, 1].
pub fn kernel_1d(spec: &KernelSpec, x: f64) -> f64 {
    debug_assert!(x.is_finite());
    dirichlet(spec.photon_number, spec.ell, x)
}

/// Deposition rate at `x` by the closed sine ratio, with the finite-sum
/// fallback inside [`SINGULARITY_GUARD`] of the removable singularities.
pub fn kernel_1d_closed(spec: &KernelSpec, x: f64) -> f64 {
    debug_assert!(x.is_finite());
    let terms = f64::from(spec.photon_number) + 1.0;
    let denom_arg = 2.0 * x - (spec.ell - 0.5) / terms;
    if (denom_arg - denom_arg.round()).abs() < SINGULARITY_GUARD {
        return dirichlet(spec.photon_number, spec.ell, x);
    }
    let numerator = ((2.0 * terms * x - spec.ell + 0.5) * PI).sin();
    let denominator = (denom_arg * PI).sin();
    (numerator * numerator) / (terms * terms * denominator * denominator)
}

/// Two-axis deposition rate: the four-mode product state factorizes, so the
/// rate is the product of the two independent 1D kernels. Peak value 1 at
/// (x_{ℓx}, x_{ℓy}).
pub fn kernel_2d(photon_number: u32, ell_x: f64, ell_y: f64, x: f64, y: f64) -> f64 {
    debug_assert!(photon_number >= 1);
    dirichlet(photon_number, ell_x, x) * dirichlet(photon_number, ell_y, y)
}
