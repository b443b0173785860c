//! Minimal plain-text PGM (P2) reader/writer shared by mask and field output.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub(crate) struct P2Image {
    pub width: u32,
    pub height: u32,
    pub maxval: u32,
    pub samples: Vec<u32>,
}

/// Writes `P2\n{w} {h}\n{maxval}\n` followed by one line per row of
/// space-separated samples, row 0 first.
pub(crate) fn write_p2(
    path: &Path,
    width: u32,
    height: u32,
    maxval: u32,
    samples: impl Iterator<Item = u32>,
) -> Result<()> {
    let mut text = format!("P2\n{width} {height}\n{maxval}\n");
    let mut in_row = 0;
    for s in samples {
        debug_assert!(s <= maxval);
        if in_row > 0 {
            text.push(' ');
        }
        text.push_str(itoa(s).as_str());
        in_row += 1;
        if in_row == width {
            text.push('\n');
            in_row = 0;
        }
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

fn itoa(v: u32) -> String {
    v.to_string()
}

/// Parses a P2 file: whitespace-separated tokens, `#` comments to end of line.
pub(crate) fn read_p2(path: &Path) -> Result<P2Image> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_p2(&text).map_err(|reason| Error::MaskFormat {
        path: path.into(),
        reason,
    })
}

pub(crate) fn parse_p2(text: &str) -> std::result::Result<P2Image, String> {
    let mut tokens = text
        .lines()
        .map(|line| line.split('#').next().unwrap_or(""))
        .flat_map(|line| line.split_ascii_whitespace());
    if tokens.next() != Some("P2") {
        return Err("missing P2 magic".into());
    }
    let mut next_int = |what: &str| -> std::result::Result<u32, String> {
        tokens
            .next()
            .ok_or_else(|| format!("missing {what}"))?
            .parse::<u32>()
            .map_err(|e| format!("bad {what}: {e}"))
    };
    let width = next_int("width")?;
    let height = next_int("height")?;
    let maxval = next_int("maxval")?;
    if width == 0 || height == 0 || maxval == 0 {
        return Err("zero dimension or maxval".into());
    }
    let expected = width as usize * height as usize;
    let mut samples = Vec::with_capacity(expected);
    for _ in 0..expected {
        let s = next_int("sample")?;
        if s > maxval {
            return Err(format!("sample {s} exceeds maxval {maxval}"));
        }
        samples.push(s);
    }
    if tokens.next().is_some() {
        return Err("trailing data after samples".into());
    }
    Ok(P2Image {
        width,
        height,
        maxval,
        samples,
    })
}
