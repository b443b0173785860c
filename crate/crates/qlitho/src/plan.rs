//! Exposure plans, pixel masks, and the bundled demonstration patterns.
//!
//! A plan is an ordered list of shots, each aiming one kernel peak at a pixel
//! `(ℓx, ℓy)` with a relative dose; the exposures run sequentially, so the
//! accumulated field is the dose-weighted sum of the per-shot kernels.
//! Integer indices address the aligned grid, odd half-integers the grid
//! shifted by half a pixel along both axes.
//!
//! Plan files are UTF-8 JSON: `{"n_photons": N, "shots": [{"lx", "ly",
//! "dose"}, ...]}` with shot order preserved. Masks are plain-text PGM (P2)
//! with maxval 255, one row per ℓy, value/255 = target dose.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pgm;

/// Tolerance for recognizing indices as integer multiples of 1/2.
const HALF_STEP_TOLERANCE: f64 = 1e-12;

/// One exposure: a kernel peak aimed at pixel (ℓx, ℓy) with a relative dose
/// (1 = the nominal isolated-pixel dose).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExposureShot {
    pub(crate) ell_x: f64,
    pub(crate) ell_y: f64,
    pub(crate) dose: f64,
}

impl ExposureShot {
    /// Validates that both indices are multiples of 1/2 and the dose is
    /// finite and nonnegative. Index range is not checked here; plans wrap
    /// indices into the principal window on construction.
    pub fn new(ell_x: f64, ell_y: f64, dose: f64) -> Result<Self> {
        for ell in [ell_x, ell_y] {
            if !ell.is_finite() {
                return Err(Error::NonFinite {
                    what: "pixel index",
                    value: ell,
                });
            }
            if (2.0 * ell - (2.0 * ell).round()).abs() > 2.0 * HALF_STEP_TOLERANCE {
                return Err(Error::FractionalPixelIndex { value: ell });
            }
        }
        if !dose.is_finite() || dose < 0.0 {
            return Err(Error::InvalidDose { value: dose });
        }
        Ok(ExposureShot { ell_x, ell_y, dose })
    }

    pub fn ell_x(&self) -> f64 {
        self.ell_x
    }

    pub fn ell_y(&self) -> f64 {
        self.ell_y
    }

    pub fn dose(&self) -> f64 {
        self.dose
    }
}

/// An ordered exposure schedule for one photon number.
///
/// Construction wraps every index modulo N+1 into the principal window
/// (0, N+1] — integers land in 1..=N+1, half-integers in 0.5..=N+0.5 —
/// mirroring the λ/2 periodicity of the kernel instead of rejecting
/// out-of-window values.
#[derive(Debug, Clone, PartialEq)]
pub struct ExposurePlan {
    photon_number: u32,
    shots: Vec<ExposureShot>,
}

impl ExposurePlan {
    pub fn new(photon_number: u32, shots: Vec<ExposureShot>) -> Result<Self> {
        if photon_number < 1 {
            return Err(Error::PhotonNumber {
                n: photon_number,
                min: 1,
                max: u32::MAX,
            });
        }
        let shots = shots
            .into_iter()
            .map(|s| ExposureShot {
                ell_x: wrap_index(s.ell_x, photon_number),
                ell_y: wrap_index(s.ell_y, photon_number),
                dose: s.dose,
            })
            .collect();
        Ok(ExposurePlan {
            photon_number,
            shots,
        })
    }

    pub fn photon_number(&self) -> u32 {
        self.photon_number
    }

    pub fn shots(&self) -> &[ExposureShot] {
        &self.shots
    }

    /// Shot centers as pixel-coordinate pairs, in plan order.
    pub fn shot_centers(&self) -> Vec<(f64, f64)> {
        self.shots.iter().map(|s| (s.ell_x, s.ell_y)).collect()
    }

    pub fn to_json(&self) -> String {
        let file = PlanFile {
            n_photons: self.photon_number,
            shots: self
                .shots
                .iter()
                .map(|s| ShotRecord {
                    lx: s.ell_x,
                    ly: s.ell_y,
                    dose: s.dose,
                })
                .collect(),
        };
        serde_json::to_string(&file).expect("plan serialization cannot fail")
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, String> {
        let file: PlanFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let shots = file
            .shots
            .iter()
            .map(|r| ExposureShot::new(r.lx, r.ly, r.dose))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.to_string())?;
        ExposurePlan::new(file.n_photons, shots).map_err(|e| e.to_string())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|reason| Error::PlanFormat {
            path: path.into(),
            reason,
        })
    }
}

/// Fold a half-step index into the principal window (0, N+1].
///
/// Runs on doubled integers so the fold is exact: ℓ = N+1 stays N+1 (the
/// zero-phase member), ℓ = N+2 wraps to 1, ℓ = −1/2 wraps to N+1/2.
fn wrap_index(ell: f64, photon_number: u32) -> f64 {
    let period = 2 * (i64::from(photon_number) + 1);
    let doubled = (2.0 * ell).round() as i64;
    let folded = (doubled - 1).rem_euclid(period) + 1;
    folded as f64 / 2.0
}

#[derive(Serialize, Deserialize)]
struct PlanFile {
    n_photons: u32,
    shots: Vec<ShotRecord>,
}

#[derive(Serialize, Deserialize)]
struct ShotRecord {
    lx: f64,
    ly: f64,
    dose: f64,
}

/// An (N+1)×(N+1) grayscale target pattern on the λ/2 square, values in
/// [0, 1], indexed by 1-based (column ℓx, row ℓy).
#[derive(Debug, Clone, PartialEq)]
pub struct PixelMask {
    photon_number: u32,
    values: Vec<f64>,
}

impl PixelMask {
    pub fn new(photon_number: u32, values: Vec<f64>) -> Result<Self> {
        if photon_number < 1 {
            return Err(Error::PhotonNumber {
                n: photon_number,
                min: 1,
                max: u32::MAX,
            });
        }
        let side = photon_number as usize + 1;
        if values.len() != side * side {
            return Err(Error::MaskShape {
                n: photon_number,
                side: side as u32,
                expected: side * side,
                got: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::MaskValue {
                    value: v,
                    ell_x: (i % side) as u32 + 1,
                    ell_y: (i / side) as u32 + 1,
                });
            }
        }
        Ok(PixelMask {
            photon_number,
            values,
        })
    }

    pub fn zeros(photon_number: u32) -> Result<Self> {
        let side = photon_number as usize + 1;
        Self::new(photon_number, vec![0.0; side * side])
    }

    pub fn photon_number(&self) -> u32 {
        self.photon_number
    }

    /// Grid side N+1.
    pub fn side(&self) -> u32 {
        self.photon_number + 1
    }

    pub fn value(&self, ell_x: u32, ell_y: u32) -> f64 {
        self.values[self.offset(ell_x, ell_y)]
    }

    pub fn set(&mut self, ell_x: u32, ell_y: u32, value: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::MaskValue {
                value,
                ell_x,
                ell_y,
            });
        }
        let offset = self.offset(ell_x, ell_y);
        self.values[offset] = value;
        Ok(())
    }

    fn offset(&self, ell_x: u32, ell_y: u32) -> usize {
        let side = self.side();
        assert!(
            (1..=side).contains(&ell_x) && (1..=side).contains(&ell_y),
            "pixel ({ell_x}, {ell_y}) outside the {side}×{side} grid"
        );
        (ell_y as usize - 1) * side as usize + (ell_x as usize - 1)
    }

    /// Writes the mask as plain-text PGM (P2), maxval 255, row ℓy = 1 first.
    pub fn write_pgm(&self, path: &Path) -> Result<()> {
        let side = self.side();
        let samples = self.values.iter().map(|v| (v * 255.0).round() as u32);
        pgm::write_p2(path, side, side, 255, samples)
    }

    /// Reads a plain-text PGM (P2) mask; the image must be square with
    /// maxval 255, and N is taken from the side length.
    pub fn read_pgm(path: &Path) -> Result<Self> {
        let image = pgm::read_p2(path)?;
        let fail = |reason: String| Error::MaskFormat {
            path: path.into(),
            reason,
        };
        if image.width != image.height {
            return Err(fail(format!(
                "mask must be square, got {}×{}",
                image.width, image.height
            )));
        }
        if image.maxval != 255 {
            return Err(fail(format!("mask maxval must be 255, got {}", image.maxval)));
        }
        if image.width < 2 {
            return Err(fail("mask side must be at least 2 (N ≥ 1)".into()));
        }
        let values = image.samples.iter().map(|&s| f64::from(s) / 255.0).collect();
        PixelMask::new(image.width - 1, values)
    }
}

/// One unit-of-value shot per strictly positive mask entry, ordered row-major
/// by (ℓy, ℓx), with the entry's value as the dose.
pub fn plan_from_mask(mask: &PixelMask) -> ExposurePlan {
    let side = mask.side();
    let mut shots = Vec::new();
    for ell_y in 1..=side {
        for ell_x in 1..=side {
            let dose = mask.value(ell_x, ell_y);
            if dose > 0.0 {
                shots.push(ExposureShot {
                    ell_x: f64::from(ell_x),
                    ell_y: f64::from(ell_y),
                    dose,
                });
            }
        }
    }
    ExposurePlan::new(mask.photon_number(), shots).expect("mask indices are in range")
}

/// Folds a plan back into a mask. Requires integer indices (half-pixel shots
/// have no mask cell); doses accumulate per pixel and must stay ≤ 1.
pub fn mask_from_plan(plan: &ExposurePlan) -> Result<PixelMask> {
    let mut mask = PixelMask::zeros(plan.photon_number())?;
    for shot in plan.shots() {
        if shot.ell_x.fract() != 0.0 || shot.ell_y.fract() != 0.0 {
            return Err(Error::FractionalPixelIndex {
                value: if shot.ell_x.fract() != 0.0 {
                    shot.ell_x
                } else {
                    shot.ell_y
                },
            });
        }
        let (ell_x, ell_y) = (shot.ell_x as u32, shot.ell_y as u32);
        let total = mask.value(ell_x, ell_y) + shot.dose;
        if total > 1.0 + HALF_STEP_TOLERANCE {
            return Err(Error::MaskOverflow {
                value: total,
                ell_x,
                ell_y,
            });
        }
        mask.set(ell_x, ell_y, total.min(1.0))?;
    }
    Ok(mask)
}

/// The bundled demonstration patterns, all at N = 6 on the 7×7 grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Serpentine pattern of ten unit-dose pixels plus the deliberately
    /// isolated pixel (6, 4).
    Fig2,
    /// Diagonal pattern on integer pixels only, unit doses; its ridge ripple
    /// is the worst case for the aligned grid.
    Fig3,
    /// The diagonal pattern smoothed with half-pixel intermediate shots and
    /// graded doses 1.0 / 0.83 / 0.66.
    Fig4,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Fig2, Preset::Fig3, Preset::Fig4];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.iter().copied().find(|p| p.name() == name)
    }

    pub fn plan(&self) -> ExposurePlan {
        match self {
            Preset::Fig2 => preset_fig2(),
            Preset::Fig3 => preset_fig3(),
            Preset::Fig4 => preset_fig4(),
        }
    }

    /// Waypoints (pixel coordinates) of the ridge along which the preset's
    /// pattern quality is profiled.
    pub fn ridge_waypoints(&self) -> Vec<(f64, f64)> {
        match self {
            // the ten serpentine centers, in exposure order
            Preset::Fig2 => vec![
                (2.0, 1.0),
                (2.0, 2.0),
                (2.0, 3.0),
                (2.0, 4.0),
                (3.0, 4.0),
                (4.0, 4.0),
                (5.0, 4.0),
                (5.0, 5.0),
                (5.0, 6.0),
                (5.0, 7.0),
            ],
            // the 45° diagonal through (2,3) … (5,6); every integer and
            // half-integer center of the diagonal arm lies on this segment
            Preset::Fig3 | Preset::Fig4 => vec![(2.0, 3.0), (5.0, 6.0)],
        }
    }
}

fn plan_of(photon_number: u32, shots: &[(f64, f64, f64)]) -> ExposurePlan {
    let shots = shots
        .iter()
        .map(|&(lx, ly, dose)| ExposureShot::new(lx, ly, dose).expect("preset shot is valid"))
        .collect();
    ExposurePlan::new(photon_number, shots).expect("preset plan is valid")
}

/// Serpentine demonstration pattern: eleven unit-dose shots at N = 6.
pub fn preset_fig2() -> ExposurePlan {
    plan_of(
        6,
        &[
            (2.0, 1.0, 1.0),
            (2.0, 2.0, 1.0),
            (2.0, 3.0, 1.0),
            (2.0, 4.0, 1.0),
            (3.0, 4.0, 1.0),
            (4.0, 4.0, 1.0),
            (5.0, 4.0, 1.0),
            (5.0, 5.0, 1.0),
            (5.0, 6.0, 1.0),
            (5.0, 7.0, 1.0),
            (6.0, 4.0, 1.0),
        ],
    )
}

/// Diagonal demonstration pattern on the aligned grid, unit doses.
pub fn preset_fig3() -> ExposurePlan {
    plan_of(
        6,
        &[
            (2.0, 1.0, 1.0),
            (2.0, 2.0, 1.0),
            (2.0, 3.0, 1.0),
            (3.0, 4.0, 1.0),
            (4.0, 5.0, 1.0),
            (5.0, 6.0, 1.0),
            (5.0, 7.0, 1.0),
        ],
    )
}

/// Diagonal pattern smoothed with half-pixel intermediate shots: full dose on
/// the straight tails, 0.83 on the first diagonal steps, 0.66 on the interior
/// diagonal and the three intermediate half-pixel positions.
pub fn preset_fig4() -> ExposurePlan {
    plan_of(
        6,
        &[
            (2.0, 1.0, 1.0),
            (2.0, 2.0, 1.0),
            (5.0, 7.0, 1.0),
            (2.0, 3.0, 0.83),
            (5.0, 6.0, 0.83),
            (3.0, 4.0, 0.66),
            (4.0, 5.0, 0.66),
            (2.5, 3.5, 0.66),
            (3.5, 4.5, 0.66),
            (4.5, 5.5, 0.66),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shot_validation() {
        assert!(ExposureShot::new(2.0, 3.5, 0.7).is_ok());
        assert!(matches!(
            ExposureShot::new(2.25, 3.0, 1.0),
            Err(Error::FractionalPixelIndex { .. })
        ));
        assert!(matches!(
            ExposureShot::new(2.0, 3.0, -0.1),
            Err(Error::InvalidDose { .. })
        ));
        assert!(matches!(
            ExposureShot::new(f64::INFINITY, 3.0, 1.0),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn indices_wrap_into_the_principal_window() {
        let shots = vec![
            ExposureShot::new(7.0, 8.0, 1.0).unwrap(),
            ExposureShot::new(0.0, -1.0, 1.0).unwrap(),
            ExposureShot::new(7.5, 0.5, 1.0).unwrap(),
        ];
        let plan = ExposurePlan::new(6, shots).unwrap();
        let centers = plan.shot_centers();
        assert_eq!(centers[0], (7.0, 1.0)); // N+1 is the zero-phase member, N+2 wraps to 1
        assert_eq!(centers[1], (7.0, 6.0));
        assert_eq!(centers[2], (0.5, 0.5)); // half-integers fold to 0.5..=N+0.5
    }

    #[test]
    fn empty_mask_gives_empty_plan() {
        let mask = PixelMask::zeros(6).unwrap();
        assert!(plan_from_mask(&mask).shots().is_empty());
    }

    #[test]
    fn single_pixel_mask_gives_single_shot() {
        let mut mask = PixelMask::zeros(6).unwrap();
        mask.set(3, 4, 1.0).unwrap();
        let plan = plan_from_mask(&mask);
        assert_eq!(plan.shots().len(), 1);
        assert_eq!(plan.shots()[0], ExposureShot::new(3.0, 4.0, 1.0).unwrap());
    }

    #[test]
    fn fig2_mask_round_trips() {
        let plan = preset_fig2();
        let mask = mask_from_plan(&plan).unwrap();
        assert_eq!(mask.value(2, 1), 1.0);
        assert_eq!(mask.value(6, 4), 1.0);
        assert_eq!(mask.value(1, 1), 0.0);
        // plan_from_mask orders row-major by (ℓy, ℓx); same shot set
        let rebuilt = plan_from_mask(&mask);
        assert_eq!(rebuilt.shots().len(), plan.shots().len());
        let mut a = plan.shot_centers();
        let mut b = rebuilt.shot_centers();
        a.sort_by(|p, q| p.partial_cmp(q).unwrap());
        b.sort_by(|p, q| p.partial_cmp(q).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn mask_from_plan_rejects_half_pixels_and_overflow() {
        assert!(matches!(
            mask_from_plan(&preset_fig4()),
            Err(Error::FractionalPixelIndex { .. })
        ));
        let plan = ExposurePlan::new(
            6,
            vec![
                ExposureShot::new(2.0, 2.0, 0.7).unwrap(),
                ExposureShot::new(2.0, 2.0, 0.7).unwrap(),
            ],
        )
        .unwrap();
        assert!(matches!(
            mask_from_plan(&plan),
            Err(Error::MaskOverflow { .. })
        ));
    }

    #[test]
    fn preset_shot_counts_and_dose_multisets() {
        assert_eq!(preset_fig2().shots().len(), 11);
        assert!(preset_fig2().shots().iter().all(|s| s.dose() == 1.0));

        let fig3 = preset_fig3();
        assert_eq!(fig3.shots().len(), 7);
        assert!(fig3
            .shots()
            .iter()
            .all(|s| s.ell_x().fract() == 0.0 && s.ell_y().fract() == 0.0));

        let fig4 = preset_fig4();
        assert_eq!(fig4.shots().len(), 10);
        let mut doses: Vec<f64> = fig4.shots().iter().map(|s| s.dose()).collect();
        doses.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(doses, vec![0.66, 0.66, 0.66, 0.66, 0.66, 0.83, 0.83, 1.0, 1.0, 1.0]);
        let halves = fig4
            .shots()
            .iter()
            .filter(|s| s.ell_x().fract() != 0.0)
            .map(|s| (s.ell_x(), s.ell_y()))
            .collect::<Vec<_>>();
        assert_eq!(halves, vec![(2.5, 3.5), (3.5, 4.5), (4.5, 5.5)]);
    }

    #[test]
    fn json_round_trip_preserves_order_and_values() {
        let plan = preset_fig4();
        let text = plan.to_json();
        assert!(text.starts_with(r#"{"n_photons":6,"shots":[{"lx":2.0,"ly":1.0,"dose":1.0}"#));
        let back = ExposurePlan::from_json(&text).unwrap();
        assert_eq!(back, plan);
    }

    #[test]
    fn json_rejects_bad_plans() {
        assert!(ExposurePlan::from_json("{").is_err());
        assert!(ExposurePlan::from_json(r#"{"n_photons":0,"shots":[]}"#).is_err());
        assert!(
            ExposurePlan::from_json(r#"{"n_photons":6,"shots":[{"lx":1.25,"ly":1.0,"dose":1.0}]}"#)
                .is_err()
        );
        assert!(
            ExposurePlan::from_json(r#"{"n_photons":6,"shots":[{"lx":1.0,"ly":1.0,"dose":-2.0}]}"#)
                .is_err()
        );
    }

    #[test]
    fn preset_lookup_by_name() {
        assert_eq!(Preset::from_name("fig3"), Some(Preset::Fig3));
        assert_eq!(Preset::from_name("fig9"), None);
        assert_eq!(Preset::Fig2.plan(), preset_fig2());
    }

    #[test]
    fn mask_pgm_file_round_trip() {
        let dir = std::env::temp_dir().join(format!("qlitho-mask-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        let path = dir.join("serpentine.pgm");

        let mask = mask_from_plan(&preset_fig2()).unwrap();
        mask.write_pgm(&path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("P2\n7 7\n255\n"));

        let back = PixelMask::read_pgm(&path).unwrap();
        assert_eq!(back, mask); // unit doses quantize exactly

        // maxval other than 255 is refused
        let bad = dir.join("bad.pgm");
        fs::write(&bad, "P2\n2 2\n65535\n0 0\n0 0\n").unwrap();
        assert!(matches!(
            PixelMask::read_pgm(&bad),
            Err(Error::MaskFormat { .. })
        ));
    }
}
