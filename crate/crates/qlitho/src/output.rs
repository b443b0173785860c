//! PGM and CSV writers for field maps and ridge profiles.
//!
//! Field maps go out as plain-text PGM (P2) with maxval 65535: each sample is
//! `round(clamp(E/display_max, 0, 1)·65535)` with halves rounded away from
//! zero, rows written in increasing y. CSV files carry a header line and one
//! record per sample with every number printed to 17 significant digits, so
//! files re-read to the exact f64.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::field::{FieldMap, RidgeProfile};
use crate::pgm;

/// 17-significant-digit scientific form; round-trips any f64.
fn digits17(v: f64) -> String {
    format!("{v:.16e}")
}

fn check_display_max(display_max: f64) -> Result<()> {
    if !display_max.is_finite() || display_max <= 0.0 {
        return Err(Error::DisplayMax { value: display_max });
    }
    Ok(())
}

/// 16-bit grayscale quantization of one exposure sample.
fn quantize(value: f64, display_max: f64) -> u32 {
    ((value / display_max).clamp(0.0, 1.0) * 65535.0).round() as u32
}

/// Writes the map as P2 with maxval 65535, exposures clipped at
/// `display_max`.
pub fn write_pgm(map: &FieldMap, display_max: f64, path: &Path) -> Result<()> {
    check_display_max(display_max)?;
    let r = map.resolution() as u32;
    let samples = map.data().iter().map(|&v| quantize(v, display_max));
    pgm::write_p2(path, r, r, 65535, samples)
}

/// Writes `x,y,value` records, one per cell, rows in increasing y.
pub fn write_map_csv(map: &FieldMap, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io_err = |e| Error::io(path, e);
    writeln!(out, "x,y,value").map_err(io_err)?;
    let r = map.resolution();
    for j in 0..r {
        let y = FieldMap::cell_coordinate(r, j);
        for i in 0..r {
            let x = FieldMap::cell_coordinate(r, i);
            writeln!(
                out,
                "{},{},{}",
                digits17(x),
                digits17(y),
                digits17(map.value(i, j))
            )
            .map_err(io_err)?;
        }
    }
    out.flush().map_err(io_err)
}

/// Writes `arc,value` records along the profile.
pub fn write_profile_csv(profile: &RidgeProfile, path: &Path) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let io_err = |e| Error::io(path, e);
    writeln!(out, "arc,value").map_err(io_err)?;
    for (arc, value) in profile.arc_positions().iter().zip(profile.values()) {
        writeln!(out, "{},{}", digits17(*arc), digits17(*value)).map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}
