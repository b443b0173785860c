//! Accumulated exposure fields, ridge profiles, and pattern metrics.
//!
//! The substrate is the square [0, 1/2)×[0, 1/2) in λ units, sampled on an
//! R×R grid at cell centers x = (i+1/2)/(2R), y = (j+1/2)/(2R) — centers
//! rather than corners so no sample sits on the x = 0 replica seam. Sequential
//! exposure means plain dose-weighted superposition, so a field map is
//!
//! ```text
//! E(x, y) = Σ_shots dose · K_N(ℓx, x) · K_N(ℓy, y)
//! ```
//!
//! evaluated per cell in shot order. Every cell is independent, which is what
//! the `parallel` feature exploits: rows are rendered across threads with
//! bit-identical per-cell arithmetic, so parallel and sequential maps agree
//! exactly. [`accumulate_serial`] keeps the single-threaded path callable in
//! any build (the criterion bench compares the two).

use crate::error::{Error, Result};
use crate::kernel::{dirichlet, pixel_center};
use crate::plan::ExposurePlan;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub const MIN_RESOLUTION: usize = 8;
pub const MAX_RESOLUTION: usize = 8192;

/// Background metric: smallest resolution at which the cell grid resolves
/// the exclusion zones.
pub const MIN_BACKGROUND_RESOLUTION: usize = 64;

/// Samples per segment used when a profile is needed internally (background
/// normalization) and no explicit count is given.
pub const DEFAULT_PROFILE_SAMPLES: usize = 64;

/// Exclusion radius of the background metric, in pixel units (wrapped
/// Chebyshev distance). A shot deposits its main lobe over its own pixel and
/// one pixel beyond on each side (the lobe's zeros sit on the neighboring
/// centers), so "background" starts past the 3×3 pixel block around every
/// shot; beyond it only sidelobes remain.
pub const BACKGROUND_EXCLUSION_RADIUS: f64 = 1.5;

/// Sampled exposure over the λ/2 square, row-major with y increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldMap {
    resolution: usize,
    data: Vec<f64>,
}

impl FieldMap {
    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Row-major samples, index j·R + i.
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.resolution + i]
    }

    /// λ-unit coordinate of cell center `index` on an axis of `resolution`
    /// cells.
    pub fn cell_coordinate(resolution: usize, index: usize) -> f64 {
        (index as f64 + 0.5) / (2.0 * resolution as f64)
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }
}

struct ShotTable {
    dose: f64,
    kx: Vec<f64>,
    ky: Vec<f64>,
}

fn shot_tables(plan: &ExposurePlan, resolution: usize) -> Vec<ShotTable> {
    let n = plan.photon_number();
    plan.shots()
        .iter()
        .map(|s| ShotTable {
            dose: s.dose(),
            kx: (0..resolution)
                .map(|i| dirichlet(n, s.ell_x(), FieldMap::cell_coordinate(resolution, i)))
                .collect(),
            ky: (0..resolution)
                .map(|j| dirichlet(n, s.ell_y(), FieldMap::cell_coordinate(resolution, j)))
                .collect(),
        })
        .collect()
}

/// Per-cell accumulation in shot order; the table entries are the very same
/// kernel values [`exposure_at`] computes, so a rendered cell equals
/// `exposure_at` at its center bit for bit.
fn render_row(tables: &[ShotTable], j: usize, row: &mut [f64]) {
    for (i, cell) in row.iter_mut().enumerate() {
        let mut acc = 0.0;
        for t in tables {
            acc += t.dose * (t.kx[i] * t.ky[j]);
        }
        *cell = acc;
    }
}

fn check_resolution(resolution: usize, min: usize) -> Result<()> {
    if !(min..=MAX_RESOLUTION).contains(&resolution) {
        return Err(Error::Resolution {
            resolution,
            min,
            max: MAX_RESOLUTION,
        });
    }
    Ok(())
}

/// Renders the plan's accumulated exposure on an R×R grid, 8 ≤ R ≤ 8192.
/// Runs rows in parallel under the `parallel` feature, sequentially
/// otherwise; both orders produce identical maps.
pub fn accumulate(plan: &ExposurePlan, resolution: usize) -> Result<FieldMap> {
    check_resolution(resolution, MIN_RESOLUTION)?;
    let tables = shot_tables(plan, resolution);
    let mut data = vec![0.0; resolution * resolution];

    #[cfg(feature = "parallel")]
    data.par_chunks_mut(resolution)
        .enumerate()
        .for_each(|(j, row)| render_row(&tables, j, row));

    #[cfg(not(feature = "parallel"))]
    for (j, row) in data.chunks_mut(resolution).enumerate() {
        render_row(&tables, j, row);
    }

    Ok(FieldMap { resolution, data })
}

/// Single-threaded reference renderer; always available regardless of the
/// `parallel` feature and bit-identical to [`accumulate`].
pub fn accumulate_serial(plan: &ExposurePlan, resolution: usize) -> Result<FieldMap> {
    check_resolution(resolution, MIN_RESOLUTION)?;
    let tables = shot_tables(plan, resolution);
    let mut data = vec![0.0; resolution * resolution];
    for (j, row) in data.chunks_mut(resolution).enumerate() {
        render_row(&tables, j, row);
    }
    Ok(FieldMap { resolution, data })
}

/// Exposure at an arbitrary λ-unit point: the same dose-weighted kernel sum
/// the renderer uses, in shot order.
pub fn exposure_at(plan: &ExposurePlan, x: f64, y: f64) -> f64 {
    let n = plan.photon_number();
    let mut acc = 0.0;
    for s in plan.shots() {
        acc += s.dose() * (dirichlet(n, s.ell_x(), x) * dirichlet(n, s.ell_y(), y));
    }
    acc
}

pub(crate) struct PathSample {
    /// Path length from the first waypoint, in pixel units.
    pub arc: f64,
    /// Pixel coordinates of the sample.
    pub px: f64,
    pub py: f64,
}

/// Uniform samples along the polyline through `waypoints` (pixel
/// coordinates): `samples_per_segment` per segment including both endpoints,
/// with the duplicate at each joint dropped.
pub(crate) fn sample_path(waypoints: &[(f64, f64)], samples_per_segment: usize) -> Vec<PathSample> {
    debug_assert!(waypoints.len() >= 2 && samples_per_segment >= 2);
    let mut samples = Vec::new();
    let mut arc_base = 0.0;
    for (seg, pair) in waypoints.windows(2).enumerate() {
        let (ax, ay) = pair[0];
        let (bx, by) = pair[1];
        let length = (bx - ax).hypot(by - ay);
        for k in 0..samples_per_segment {
            if seg > 0 && k == 0 {
                continue; // joint already emitted by the previous segment
            }
            let t = k as f64 / (samples_per_segment - 1) as f64;
            samples.push(PathSample {
                arc: arc_base + t * length,
                px: ax + t * (bx - ax),
                py: ay + t * (by - ay),
            });
        }
        arc_base += length;
    }
    samples
}

/// Exposure sampled along a polyline of pixel-coordinate waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeProfile {
    arc_positions: Vec<f64>,
    values: Vec<f64>,
    min_value: f64,
    max_value: f64,
}

impl RidgeProfile {
    /// Path-length positions in pixel units.
    pub fn arc_positions(&self) -> &[f64] {
        &self.arc_positions
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Samples the exposure along the piecewise-linear path through waypoint
/// pixel centers; needs ≥ 2 waypoints and ≥ 2 samples per segment.
pub fn ridge_profile(
    plan: &ExposurePlan,
    waypoints: &[(f64, f64)],
    samples_per_segment: usize,
) -> Result<RidgeProfile> {
    if waypoints.len() < 2 {
        return Err(Error::Waypoints {
            got: waypoints.len(),
        });
    }
    if samples_per_segment < 2 {
        return Err(Error::SampleCount {
            got: samples_per_segment,
            min: 2,
        });
    }
    let n = plan.photon_number();
    let samples = sample_path(waypoints, samples_per_segment);
    let mut arc_positions = Vec::with_capacity(samples.len());
    let mut values = Vec::with_capacity(samples.len());
    for s in &samples {
        arc_positions.push(s.arc);
        values.push(exposure_at(plan, pixel_center(n, s.px), pixel_center(n, s.py)));
    }
    let min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max_value = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RidgeProfile {
        arc_positions,
        values,
        min_value,
        max_value,
    })
}

/// Per-axis pixel distance on the λ/2 torus (the kernel repeats every N+1
/// pixels, so exclusion zones must too).
fn wrapped_distance(a: f64, b: f64, period: f64) -> f64 {
    let d = (a - b).rem_euclid(period);
    d.min(period - d)
}

/// Exposure of the plan's ridge through its own shot centers, used to
/// normalize the background metric. Degenerates to the single center's
/// exposure for one-shot plans.
fn default_ridge_max(plan: &ExposurePlan) -> f64 {
    let centers = plan.shot_centers();
    match centers.len() {
        0 => 0.0,
        1 => {
            let n = plan.photon_number();
            exposure_at(
                plan,
                pixel_center(n, centers[0].0),
                pixel_center(n, centers[0].1),
            )
        }
        _ => ridge_profile(plan, &centers, DEFAULT_PROFILE_SAMPLES)
            .expect("plan-order ridge is well-formed")
            .max_value(),
    }
}

/// Worst exposure over all cells farther than
/// [`BACKGROUND_EXCLUSION_RADIUS`] (wrapped Chebyshev, pixel units) from
/// every exposed pixel center, divided by the plan's ridge maximum.
pub fn background_penalty(
    plan: &ExposurePlan,
    exposed: &[(f64, f64)],
    resolution: usize,
) -> Result<f64> {
    if plan.shots().is_empty() {
        return Ok(0.0);
    }
    if exposed.is_empty() {
        return Err(Error::EmptyExposedSet);
    }
    check_resolution(resolution, MIN_BACKGROUND_RESOLUTION)?;

    let map = accumulate(plan, resolution)?;
    let period = f64::from(plan.photon_number()) + 1.0;
    let scale = period / resolution as f64; // cells per axis → pixels per cell
    let mut worst = 0.0f64;
    for j in 0..resolution {
        let py = (j as f64 + 0.5) * scale + 0.5;
        for i in 0..resolution {
            let px = (i as f64 + 0.5) * scale + 0.5;
            let clear = exposed.iter().all(|&(ex, ey)| {
                wrapped_distance(px, ex, period).max(wrapped_distance(py, ey, period))
                    > BACKGROUND_EXCLUSION_RADIUS
            });
            if clear {
                worst = worst.max(map.value(i, j));
            }
        }
    }
    let ridge_max = default_ridge_max(plan);
    if ridge_max <= 0.0 {
        return Ok(0.0);
    }
    Ok(worst / ridge_max)
}

/// Summary quality numbers for one pattern.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternMetrics {
    pub ridge_min: f64,
    pub ridge_max: f64,
    /// min/max along the ridge; the pattern's ripple figure.
    pub ridge_min_ratio: f64,
    pub background_penalty: f64,
}

/// Profiles the plan along `ridge_waypoints` and scans its background in one
/// call; the background exclusion set is the plan's own shot centers.
pub fn pattern_metrics(
    plan: &ExposurePlan,
    ridge_waypoints: &[(f64, f64)],
    resolution: usize,
    samples_per_segment: usize,
) -> Result<PatternMetrics> {
    let profile = ridge_profile(plan, ridge_waypoints, samples_per_segment)?;
    let background = background_penalty(plan, &plan.shot_centers(), resolution)?;
    Ok(PatternMetrics {
        ridge_min: profile.min_value(),
        ridge_max: profile.max_value(),
        ridge_min_ratio: profile.min_value() / profile.max_value(),
        background_penalty: background,
    })
}
