//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors reported by state construction, planning, rendering, and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// Photon number outside the range an operation supports.
    #[error("photon number {n} outside supported range {min}..={max}")]
    PhotonNumber { n: u32, min: u32, max: u32 },

    /// Amplitude vector length does not match the photon number.
    #[error("expected {expected} amplitudes for {n} photons, got {got}")]
    AmplitudeCount { n: u32, expected: usize, got: usize },

    /// State norm deviates from one beyond the construction tolerance.
    #[error("state norm² = {norm_sqr} deviates from 1 by more than {tolerance}")]
    Unnormalized { norm_sqr: f64, tolerance: f64 },

    /// A non-finite amplitude or parameter was supplied.
    #[error("non-finite value {value} for {what}")]
    NonFinite { what: &'static str, value: f64 },

    /// Exact operator expectation requested beyond its combinatorial cutoff.
    #[error("photon number {n} exceeds the exact-expectation cutoff {max}")]
    OracleCutoff { n: u32, max: u32 },

    /// Two states that must share a photon number do not.
    #[error("states carry different photon numbers: {left} vs {right}")]
    PhotonNumberMismatch { left: u32, right: u32 },

    /// A pixel index that must be an integer multiple of 1/2 is not.
    #[error("pixel index {value} is not an integer multiple of 1/2")]
    FractionalPixelIndex { value: f64 },

    /// A dose that must be finite and nonnegative is not.
    #[error("dose {value} must be finite and nonnegative")]
    InvalidDose { value: f64 },

    /// Mask entry outside the unit interval.
    #[error("mask value {value} at pixel ({ell_x}, {ell_y}) outside [0, 1]")]
    MaskValue { value: f64, ell_x: u32, ell_y: u32 },

    /// Mask buffer does not hold (N+1)² entries.
    #[error("mask for {n} photons needs {expected} values ({side}×{side}), got {got}")]
    MaskShape {
        n: u32,
        side: u32,
        expected: usize,
        got: usize,
    },

    /// Doses collide above 1 when folding a plan back into a mask.
    #[error("accumulated dose {value} at pixel ({ell_x}, {ell_y}) exceeds 1")]
    MaskOverflow { value: f64, ell_x: u32, ell_y: u32 },

    /// Grid resolution outside the supported range.
    #[error("resolution {resolution} outside supported range {min}..={max}")]
    Resolution {
        resolution: usize,
        min: usize,
        max: usize,
    },

    /// A sampled path needs at least two waypoints.
    #[error("path needs at least 2 waypoints, got {got}")]
    Waypoints { got: usize },

    /// Per-segment sample count below the minimum.
    #[error("need at least {min} samples per segment, got {got}")]
    SampleCount { got: usize, min: usize },

    /// Dose optimization invoked without any free dose.
    #[error("no free doses designated")]
    NoFreeDoses,

    /// A free-shot index does not address a shot of the plan.
    #[error("free-shot index {index} out of range for a plan with {shots} shots")]
    FreeShotIndex { index: usize, shots: usize },

    /// Dose bounds do not form a valid interval.
    #[error("dose bounds [{lo}, {hi}] are not a valid nonnegative interval")]
    DoseBounds { lo: f64, hi: f64 },

    /// Background metric requested with shots present but no exposed pixels.
    #[error("exposed-pixel set is empty but the plan has shots")]
    EmptyExposedSet,

    /// Grayscale ceiling must be a positive finite number.
    #[error("display ceiling must be positive and finite, got {value}")]
    DisplayMax { value: f64 },

    /// Plan file could not be decoded.
    #[error("invalid exposure plan in {path}: {reason}")]
    PlanFormat { path: PathBuf, reason: String },

    /// Mask file could not be decoded.
    #[error("invalid pixel mask in {path}: {reason}")]
    MaskFormat { path: PathBuf, reason: String },

    /// Underlying I/O failure, with the offending path.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
