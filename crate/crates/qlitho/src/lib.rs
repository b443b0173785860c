//! Sub-diffraction interference lithography, simulated end to end.
//!
//! The library models a λ/2-sided substrate exposed by engineered two-mode
//! photon states at grazing incidence from two orthogonal axes. Each exposure
//! deposits a squared-Dirichlet kernel whose peak lands on one cell of an
//! (N+1)×(N+1) pixel grid; sequencing exposures with per-shot doses builds
//! arbitrary grayscale pixel patterns at feature scales a factor N+1 below
//! the classical diffraction limit.
//!
//! The pieces, bottom to top:
//!
//! * [`state`] — two-mode N-photon states: reciprocal binomial construction,
//!   free-space propagation, relative phase shifts.
//! * [`kernel`] — deposition-rate kernels, as a robust finite complex sum and
//!   as the equivalent closed sine ratio.
//! * [`oracle`] — independent brute-force expectations of the absorption
//!   operator, used to cross-check the kernels.
//! * [`plan`], [`plates`], [`counting`], [`dose`] — exposure planning: shot
//!   lists from pixel masks, binary phase-plate banks, state/pattern counting,
//!   and dose optimization along a ridge.
//! * [`field`], [`output`] — accumulated exposure maps, ridge profiles,
//!   background metrics, and PGM/CSV writers.
//!
//! The `parallel` feature (on by default) evaluates field maps with rayon;
//! disabling it yields a bit-identical sequential build.

pub mod counting;
pub mod dose;
pub mod error;
pub mod field;
pub mod kernel;
pub mod oracle;
pub mod output;
pub mod plan;
pub mod plates;
pub mod state;

mod exact;
mod pgm;

pub use counting::{count_patterns, count_pure_states};
pub use dose::optimize_doses;
pub use error::{Error, Result};
pub use field::{
    accumulate, accumulate_serial, background_penalty, exposure_at, pattern_metrics,
    ridge_profile, FieldMap, PatternMetrics, RidgeProfile,
};
pub use kernel::{kernel_1d, kernel_1d_closed, kernel_2d, pixel_center, KernelSpec};
pub use output::{write_map_csv, write_pgm, write_profile_csv};
pub use oracle::{deposition_four_mode_oracle, deposition_two_mode_oracle, probe_state};
pub use plan::{
    mask_from_plan, plan_from_mask, preset_fig2, preset_fig3, preset_fig4, ExposurePlan,
    ExposureShot, PixelMask, Preset,
};
pub use plates::{plate_bank, PlateBank};
pub use state::TwoModeState;
