//! `qlitho` — kernels, exposure planning, field rendering, and pattern
//! metrics from the command line.
//!
//! Exit status: 0 on success, 2 for argument problems (no output file is
//! created or truncated), 1 for runtime and I/O failures.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qlitho::{
    accumulate, count_patterns, count_pure_states, kernel_1d, kernel_2d, pattern_metrics,
    plan_from_mask, plate_bank, ridge_profile, write_pgm, write_profile_csv, ExposurePlan,
    FieldMap, KernelSpec, PixelMask, Preset,
};

#[derive(Parser)]
#[command(name = "qlitho", version, about = "Sub-diffraction exposure pattern simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a 1D deposition kernel as CSV (x,value)
    Kernel1d {
        /// Photon number N
        #[arg(long)]
        n: u32,
        /// Target pixel index ℓ (half-integers as decimals)
        #[arg(long)]
        ell: f64,
        /// Evaluate at a single λ-unit position instead of sweeping
        #[arg(long)]
        x: Option<f64>,
        /// Sample count across [0, 1/2)
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a 2D deposition kernel as CSV (x,y,value)
    Kernel2d {
        #[arg(long)]
        n: u32,
        /// Pixel index along X
        #[arg(long)]
        lx: f64,
        /// Pixel index along Y
        #[arg(long)]
        ly: f64,
        /// Probe a single point (requires --y)
        #[arg(long)]
        x: Option<f64>,
        /// Probe a single point (requires --x)
        #[arg(long)]
        y: Option<f64>,
        /// Grid resolution for the sweep
        #[arg(long, default_value_t = 128)]
        res: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a plan's accumulated exposure to PGM + CSV
    Expose {
        #[command(flatten)]
        source: PlanSource,
        #[arg(long, default_value_t = 512)]
        res: usize,
        /// Grayscale ceiling; defaults to the map maximum
        #[arg(long)]
        display_max: Option<f64>,
        /// Output base path; writes <out>.pgm and <out>.csv
        #[arg(long)]
        out: PathBuf,
    },
    /// Print ridge and background metrics for a plan
    Metrics {
        #[command(flatten)]
        source: PlanSource,
        #[arg(long, default_value_t = 512)]
        res: usize,
        /// Profile samples per ridge segment
        #[arg(long, default_value_t = 64)]
        samples: usize,
    },
    /// Print the birefringent plate bank realizing pixel index ℓ
    Plates {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        ell: f64,
    },
    /// Print four-mode state and pattern counts
    Counts {
        #[arg(long)]
        n: u32,
    },
    /// Render a bundled pattern with map, profile, and metrics files
    Repro {
        /// Pattern name: fig2, fig3, or fig4
        figure: String,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long)]
        display_max: Option<f64>,
    },
}

/// Exactly one exposure-plan source.
#[derive(Args)]
struct PlanSource {
    /// JSON exposure plan
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Plain-text PGM (P2, maxval 255) pixel mask
    #[arg(long)]
    mask: Option<PathBuf>,
    /// Bundled pattern name: fig2, fig3, or fig4
    #[arg(long)]
    preset: Option<String>,
}

enum AppError {
    /// Bad arguments; nothing was written. Exit 2.
    Usage(String),
    /// Failure while doing the work. Exit 1.
    Runtime(String),
}

type AppResult<T> = Result<T, AppError>;

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

impl From<qlitho::Error> for AppError {
    fn from(e: qlitho::Error) -> Self {
        AppError::Runtime(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("run `qlitho --help` for usage");
            ExitCode::from(2)
        }
        Err(AppError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> AppResult<()> {
    match command {
        Command::Kernel1d {
            n,
            ell,
            x,
            samples,
            out,
        } => kernel1d(n, ell, x, samples, out.as_deref()),
        Command::Kernel2d {
            n,
            lx,
            ly,
            x,
            y,
            res,
            out,
        } => kernel2d(n, lx, ly, x, y, res, out.as_deref()),
        Command::Expose {
            source,
            res,
            display_max,
            out,
        } => expose(&source, res, display_max, &out),
        Command::Metrics {
            source,
            res,
            samples,
        } => metrics(&source, res, samples),
        Command::Plates { n, ell } => plates(n, ell),
        Command::Counts { n } => counts(n),
        Command::Repro {
            figure,
            out,
            display_max,
        } => repro(&figure, &out, display_max),
    }
}

/// 17-significant-digit record fields, matching the library's CSV writers.
fn digits17(v: f64) -> String {
    format!("{v:.16e}")
}

fn check_finite(what: &str, v: f64) -> AppResult<()> {
    if !v.is_finite() {
        return Err(usage(format!("{what} must be finite, got {v}")));
    }
    Ok(())
}

fn check_resolution(res: usize) -> AppResult<()> {
    if !(8..=8192).contains(&res) {
        return Err(usage(format!("--res {res} outside supported range 8..=8192")));
    }
    Ok(())
}

fn kernel_spec(n: u32, ell: f64, flag: &str) -> AppResult<KernelSpec> {
    check_finite(flag, ell)?;
    KernelSpec::new(n, ell).map_err(|e| usage(e.to_string()))
}

/// Opens the record sink only after all argument validation has passed, so
/// usage errors can never create or truncate an output file. Large sweeps
/// stream through it.
fn sink(out: Option<&Path>) -> AppResult<BufWriter<Box<dyn Write>>> {
    let raw: Box<dyn Write> = match out {
        None => Box::new(io::stdout()),
        Some(path) => Box::new(
            fs::File::create(path)
                .map_err(|e| AppError::Runtime(format!("{}: {e}", path.display())))?,
        ),
    };
    Ok(BufWriter::new(raw))
}

fn emit_error(e: io::Error) -> AppError {
    AppError::Runtime(format!("writing records: {e}"))
}

fn kernel1d(n: u32, ell: f64, x: Option<f64>, samples: usize, out: Option<&Path>) -> AppResult<()> {
    let spec = kernel_spec(n, ell, "--ell")?;
    if let Some(x) = x {
        check_finite("--x", x)?;
        let mut w = sink(out)?;
        writeln!(w, "x,value\n{},{}", digits17(x), digits17(kernel_1d(&spec, x)))
            .and_then(|_| w.flush())
            .map_err(emit_error)?;
        return Ok(());
    }
    if samples < 1 {
        return Err(usage("--samples must be at least 1"));
    }
    let mut w = sink(out)?;
    writeln!(w, "x,value").map_err(emit_error)?;
    for i in 0..samples {
        let xi = (i as f64 + 0.5) / (2.0 * samples as f64);
        writeln!(w, "{},{}", digits17(xi), digits17(kernel_1d(&spec, xi))).map_err(emit_error)?;
    }
    w.flush().map_err(emit_error)
}

fn kernel2d(
    n: u32,
    lx: f64,
    ly: f64,
    x: Option<f64>,
    y: Option<f64>,
    res: usize,
    out: Option<&Path>,
) -> AppResult<()> {
    // validate through the same constructor the 1D path uses
    kernel_spec(n, lx, "--lx")?;
    kernel_spec(n, ly, "--ly")?;
    match (x, y) {
        (Some(x), Some(y)) => {
            check_finite("--x", x)?;
            check_finite("--y", y)?;
            let mut w = sink(out)?;
            writeln!(
                w,
                "x,y,value\n{},{},{}",
                digits17(x),
                digits17(y),
                digits17(kernel_2d(n, lx, ly, x, y))
            )
            .and_then(|_| w.flush())
            .map_err(emit_error)
        }
        (None, None) => {
            check_resolution(res)?;
            let mut w = sink(out)?;
            writeln!(w, "x,y,value").map_err(emit_error)?;
            for j in 0..res {
                let yj = FieldMap::cell_coordinate(res, j);
                for i in 0..res {
                    let xi = FieldMap::cell_coordinate(res, i);
                    writeln!(
                        w,
                        "{},{},{}",
                        digits17(xi),
                        digits17(yj),
                        digits17(kernel_2d(n, lx, ly, xi, yj))
                    )
                    .map_err(emit_error)?;
                }
            }
            w.flush().map_err(emit_error)
        }
        _ => Err(usage("--x and --y must be given together")),
    }
}

/// A loaded plan plus the ridge its metrics are measured along.
struct LoadedPlan {
    plan: ExposurePlan,
    ridge: Vec<(f64, f64)>,
    label: String,
}

fn load_plan(source: &PlanSource) -> AppResult<LoadedPlan> {
    let picked = [
        source.plan.is_some(),
        source.mask.is_some(),
        source.preset.is_some(),
    ]
    .iter()
    .filter(|&&b| b)
    .count();
    if picked != 1 {
        return Err(usage("give exactly one of --plan, --mask, or --preset"));
    }
    if let Some(name) = &source.preset {
        let preset = Preset::from_name(name)
            .ok_or_else(|| usage(format!("unknown preset {name:?}; expected fig2, fig3, or fig4")))?;
        return Ok(LoadedPlan {
            plan: preset.plan(),
            ridge: preset.ridge_waypoints(),
            label: preset.name().to_string(),
        });
    }
    let plan = if let Some(path) = &source.plan {
        ExposurePlan::read_json(path)?
    } else {
        let mask = PixelMask::read_pgm(source.mask.as_ref().unwrap())?;
        plan_from_mask(&mask)
    };
    if plan.shots().is_empty() {
        return Err(AppError::Runtime("plan has no shots".into()));
    }
    // file-sourced plans are profiled through their own shot centers
    let mut ridge = plan.shot_centers();
    if ridge.len() == 1 {
        ridge.push(ridge[0]);
    }
    Ok(LoadedPlan {
        plan,
        ridge,
        label: "plan".to_string(),
    })
}

fn check_display_max(value: Option<f64>) -> AppResult<()> {
    if let Some(v) = value {
        if !v.is_finite() || v <= 0.0 {
            return Err(usage(format!("--display-max must be positive, got {v}")));
        }
    }
    Ok(())
}

fn expose(
    source: &PlanSource,
    res: usize,
    display_max: Option<f64>,
    out: &Path,
) -> AppResult<()> {
    check_resolution(res)?;
    check_display_max(display_max)?;
    let loaded = load_plan(source)?;
    let map = accumulate(&loaded.plan, res)?;
    let ceiling = effective_display_max(&map, display_max);
    write_pgm(&map, ceiling, &out.with_extension("pgm"))?;
    qlitho::write_map_csv(&map, &out.with_extension("csv"))?;
    Ok(())
}

fn effective_display_max(map: &FieldMap, display_max: Option<f64>) -> f64 {
    match display_max {
        Some(v) => v,
        None => {
            let max = map.max_value();
            if max > 0.0 {
                max
            } else {
                1.0
            }
        }
    }
}

fn metrics_text(loaded: &LoadedPlan, res: usize, samples: usize) -> AppResult<String> {
    let m = pattern_metrics(&loaded.plan, &loaded.ridge, res, samples)?;
    let mut text = String::new();
    let _ = writeln!(text, "pattern={}", loaded.label);
    let _ = writeln!(text, "resolution={res}");
    let _ = writeln!(text, "samples_per_segment={samples}");
    let _ = writeln!(text, "ridge_min={:.6}", m.ridge_min);
    let _ = writeln!(text, "ridge_max={:.6}", m.ridge_max);
    let _ = writeln!(text, "ridge_min_ratio={:.6}", m.ridge_min_ratio);
    let _ = writeln!(text, "background_penalty={:.6}", m.background_penalty);
    Ok(text)
}

fn metrics(source: &PlanSource, res: usize, samples: usize) -> AppResult<()> {
    if res < 64 {
        return Err(usage(format!("--res {res} below the metric minimum 64")));
    }
    check_resolution(res)?;
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let loaded = load_plan(source)?;
    print!("{}", metrics_text(&loaded, res, samples)?);
    Ok(())
}

fn plates(n: u32, ell: f64) -> AppResult<()> {
    check_finite("--ell", ell)?;
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    let bank = plate_bank(ell, n).map_err(|e| usage(e.to_string()))?;
    let period = u64::from(n) + 1;
    println!("n={n} ell={ell} reduced_ell={}", bank.reduced_ell());
    for &k in bank.plates() {
        let numerator = 1u64 << k;
        if numerator == 1 {
            println!("plate k={k} retardance=lambda/{period}");
        } else {
            println!("plate k={k} retardance={numerator}*lambda/{period}");
        }
    }
    if bank.has_half_shift() {
        println!("half-shift plate retardance=lambda/{}", 2 * period);
    }
    let total = bank.total_retardance();
    println!(
        "plates={} total_retardance={}*lambda/{}",
        bank.plate_count(),
        total.numer(),
        total.denom()
    );
    Ok(())
}

fn counts(n: u32) -> AppResult<()> {
    println!("pure_states={}", count_pure_states(n));
    println!("patterns={}", count_patterns(n));
    Ok(())
}

fn repro(figure: &str, out_dir: &Path, display_max: Option<f64>) -> AppResult<()> {
    const RESOLUTION: usize = 512;
    const SAMPLES: usize = 64;
    let preset = Preset::from_name(figure)
        .ok_or_else(|| usage(format!("unknown figure {figure:?}; expected fig2, fig3, or fig4")))?;
    check_display_max(display_max)?;
    fs::create_dir_all(out_dir)
        .map_err(|e| AppError::Runtime(format!("{}: {e}", out_dir.display())))?;

    let plan = preset.plan();
    let ridge = preset.ridge_waypoints();
    let map = accumulate(&plan, RESOLUTION)?;
    let profile = ridge_profile(&plan, &ridge, SAMPLES)?;
    let loaded = LoadedPlan {
        plan,
        ridge,
        label: preset.name().to_string(),
    };
    let metrics = metrics_text(&loaded, RESOLUTION, SAMPLES)?;

    let base = out_dir.join(preset.name());
    write_pgm(
        &map,
        effective_display_max(&map, display_max),
        &with_suffix(&base, "_map.pgm"),
    )?;
    write_profile_csv(&profile, &with_suffix(&base, "_profile.csv"))?;
    let metrics_path = with_suffix(&base, "_metrics.txt");
    fs::write(&metrics_path, &metrics)
        .map_err(|e| AppError::Runtime(format!("{}: {e}", metrics_path.display())))?;
    print!("{metrics}");
    Ok(())
}

fn with_suffix(base: &Path, suffix: &str) -> PathBuf {
    let mut name = base.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    base.with_file_name(name)
}

// the CLI's sample-spacing convention backs a doc claim in the README;
// keep the probe functions exercised from unit position too
#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffix_joining() {
        assert_eq!(
            with_suffix(Path::new("out/fig2"), "_map.pgm"),
            Path::new("out/fig2_map.pgm")
        );
    }

    #[test]
    fn display_ceiling_falls_back_to_one_for_dark_maps() {
        let plan = ExposurePlan::new(6, vec![]).unwrap();
        let map = accumulate(&plan, 8).unwrap();
        assert_eq!(effective_display_max(&map, None), 1.0);
        assert_eq!(effective_display_max(&map, Some(2.5)), 2.5);
    }

    #[test]
    fn probe_helpers_reject_non_finite() {
        assert!(check_finite("--x", f64::NAN).is_err());
        assert!(check_finite("--x", 0.25).is_ok());
    }
}
