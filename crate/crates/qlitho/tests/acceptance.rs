//! Acceptance suite: one test per release criterion, each printing a
//! `PASS`/`FAIL` line with its measured numbers (run with `-- --nocapture`
//! to see the lines for passing criteria).

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use qlitho::{
    background_penalty, count_patterns, count_pure_states, deposition_four_mode_oracle,
    deposition_two_mode_oracle, exposure_at, kernel_1d, kernel_1d_closed, kernel_2d,
    optimize_doses, pattern_metrics, pixel_center, plate_bank, ridge_profile, ExposurePlan,
    ExposureShot, KernelSpec, Preset, TwoModeState,
};

/// Deterministic SplitMix64; frozen so the pseudo-random sweeps never move.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn report(criterion: &str, passed: bool, details: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("acceptance {criterion}: {verdict} — {details}");
    assert!(passed, "acceptance {criterion}: {verdict} — {details}");
}

/// 1e-9 relative agreement, falling back to 1e-12 absolute below 1e-6.
fn agrees(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs());
    if scale < 1e-6 {
        (a - b).abs() <= 1e-12
    } else {
        (a - b).abs() <= 1e-9 * scale
    }
}

#[test]
fn criterion_1_kernel_triple_equivalence() {
    let started = Instant::now();
    let mut rng = SplitMix64(0x51ac_e0f1_77e5_0001);
    let mut worst: f64 = 0.0;
    for n in 1u32..=10 {
        let base = TwoModeState::reciprocal_binomial(n).unwrap();
        for ell in 1..=n + 1 {
            let spec = KernelSpec::new(n, f64::from(ell)).unwrap();
            let center = spec.pixel_center();
            let peak = deposition_two_mode_oracle(&base).unwrap();
            for _ in 0..1000 {
                let x = rng.next_f64();
                let sum_form = kernel_1d(&spec, x);
                let closed_form = kernel_1d_closed(&spec, x);
                let oracle =
                    deposition_two_mode_oracle(&base.propagate(x - center)).unwrap() / peak;
                assert!(
                    agrees(sum_form, closed_form) && agrees(sum_form, oracle),
                    "n={n} ell={ell} x={x}: sum {sum_form}, closed {closed_form}, oracle {oracle}"
                );
                worst = worst
                    .max((sum_form - closed_form).abs())
                    .max((sum_form - oracle).abs());
            }
        }
    }
    let elapsed = started.elapsed();
    report(
        "1 kernel triple equivalence",
        elapsed < Duration::from_secs(10),
        &format!("worst absolute deviation {worst:.3e}, elapsed {elapsed:.2?} (limit 10 s)"),
    );
}

#[test]
fn criterion_2_four_mode_factorization() {
    let started = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 1u32..=4 {
        let ell_x = 1.0;
        let ell_y = f64::from(n + 1);
        let spec_x = KernelSpec::new(n, ell_x).unwrap();
        let spec_y = KernelSpec::new(n, ell_y).unwrap();
        let base = TwoModeState::reciprocal_binomial(n).unwrap();
        let peak = deposition_four_mode_oracle(&base, &base).unwrap();
        for j in 0..21 {
            let y = (j as f64 + 0.5) * 0.5 / 21.0;
            let state_y = base.propagate(y - spec_y.pixel_center());
            for i in 0..21 {
                let x = (i as f64 + 0.5) * 0.5 / 21.0;
                let state_x = base.propagate(x - spec_x.pixel_center());
                let oracle = deposition_four_mode_oracle(&state_x, &state_y).unwrap() / peak;
                let product = kernel_2d(n, ell_x, ell_y, x, y);
                let deviation = (oracle - product).abs();
                worst = worst.max(deviation);
                assert!(
                    deviation <= 1e-9 * product.abs().max(1.0),
                    "n={n} (x,y)=({x},{y}): oracle {oracle} vs kernel {product}"
                );
            }
        }
    }
    let elapsed = started.elapsed();
    report(
        "2 four-mode factorization",
        elapsed < Duration::from_secs(30),
        &format!("worst deviation {worst:.3e} on 21×21 grids, elapsed {elapsed:.2?} (limit 30 s)"),
    );
}

/// Signed Dirichlet amplitude; flips sign at every kernel zero, so bisection
/// can pin the zeros numerically without touching the squared evaluators.
fn signed_amplitude(n: u32, ell: f64, x: f64) -> f64 {
    let terms = f64::from(n) + 1.0;
    let t = 2.0 * x - (ell - 0.5) / terms;
    (terms * PI * t).sin() / (terms * (PI * t).sin())
}

fn bisect_zero(n: u32, ell: f64, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = signed_amplitude(n, ell, lo);
    assert!(
        f_lo * signed_amplitude(n, ell, hi) < 0.0,
        "zero not bracketed"
    );
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if signed_amplitude(n, ell, mid) * f_lo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_3_structural_kernel_properties() {
    let started = Instant::now();
    let mut rng = SplitMix64(0x51ac_e0f1_77e5_0003);
    let mut worst_zero: f64 = 0.0;
    let mut worst_period: f64 = 0.0;
    let mut worst_spacing: f64 = 0.0;
    for n in 1u32..=10 {
        for ell in 1..=n + 1 {
            let spec = KernelSpec::new(n, f64::from(ell)).unwrap();
            // identically dark foreign pixel centers
            for foreign in 1..=n + 1 {
                if foreign == ell {
                    continue;
                }
                let v = kernel_1d(&spec, pixel_center(n, f64::from(foreign)));
                worst_zero = worst_zero.max(v);
                assert!(v <= 1e-12, "n={n} ell={ell} foreign={foreign}: {v}");
            }
            // λ/2 periodicity
            for _ in 0..100 {
                let x = rng.next_f64();
                let d = (kernel_1d(&spec, x + 0.5) - kernel_1d(&spec, x)).abs();
                worst_period = worst_period.max(d);
                assert!(d <= 1e-12, "n={n} ell={ell} x={x}: periodicity {d}");
            }
            // main peak bordered by zeros exactly 1/(N+1) apart
            let center = spec.pixel_center();
            let pixel = 1.0 / (2.0 * (f64::from(n) + 1.0));
            let right = bisect_zero(n, f64::from(ell), center + 0.2 * pixel, center + 1.4 * pixel);
            let left = bisect_zero(n, f64::from(ell), center - 1.4 * pixel, center - 0.2 * pixel);
            let spacing_error = ((right - left) - 1.0 / (f64::from(n) + 1.0)).abs();
            worst_spacing = worst_spacing.max(spacing_error);
            assert!(
                spacing_error <= 1e-9,
                "n={n} ell={ell}: zero spacing off by {spacing_error}"
            );
        }
    }
    let elapsed = started.elapsed();
    report(
        "3 structural kernel properties",
        true,
        &format!(
            "foreign-center max {worst_zero:.2e}, periodicity max {worst_period:.2e}, \
             zero-spacing max error {worst_spacing:.2e}, elapsed {elapsed:.2?}"
        ),
    );
}

#[test]
fn criterion_4_fig2_reproduction() {
    let started = Instant::now();
    let plan = Preset::Fig2.plan();
    let metrics = pattern_metrics(&plan, &Preset::Fig2.ridge_waypoints(), 512, 64).unwrap();

    // the deliberately isolated pixel and the wrap-around victim stay dark
    // as far as every *other* shot is concerned
    let without_isolated = ExposurePlan::new(
        6,
        plan.shots()
            .iter()
            .filter(|s| (s.ell_x(), s.ell_y()) != (6.0, 4.0))
            .copied()
            .collect(),
    )
    .unwrap();
    let leak_6_4 = exposure_at(
        &without_isolated,
        pixel_center(6, 6.0),
        pixel_center(6, 4.0),
    );
    let leak_5_1 = exposure_at(&plan, pixel_center(6, 5.0), pixel_center(6, 1.0));

    let elapsed = started.elapsed();
    let passed = (0.88..=0.91).contains(&metrics.ridge_min_ratio)
        && metrics.background_penalty <= 0.13
        && leak_6_4 <= 1e-9
        && leak_5_1 <= 1e-9
        && elapsed < Duration::from_secs(10);
    report(
        "4 serpentine pattern (fig2)",
        passed,
        &format!(
            "ridge min/max {:.4} (window 0.88..0.91), background {:.4} (limit 0.13), \
             foreign exposure at (6,4) {leak_6_4:.2e}, at (5,1) {leak_5_1:.2e}, \
             elapsed {elapsed:.2?} (limit 10 s)",
            metrics.ridge_min_ratio, metrics.background_penalty
        ),
    );
}

#[test]
fn criterion_5_fig3_reproduction() {
    let started = Instant::now();
    let plan = Preset::Fig3.plan();
    let profile = ridge_profile(&plan, &Preset::Fig3.ridge_waypoints(), 64).unwrap();
    let ratio = profile.min_value() / profile.max_value();
    let elapsed = started.elapsed();
    let passed = (0.32..=0.38).contains(&ratio) && elapsed < Duration::from_secs(10);
    report(
        "5 diagonal pattern (fig3)",
        passed,
        &format!("ridge min/max {ratio:.4} (window 0.32..0.38), elapsed {elapsed:.2?} (limit 10 s)"),
    );
}

#[test]
fn criterion_6_fig4_reproduction() {
    let started = Instant::now();
    let plan = Preset::Fig4.plan();
    let profile = ridge_profile(&plan, &Preset::Fig4.ridge_waypoints(), 64).unwrap();
    let elapsed = started.elapsed();
    let passed = (1.02..=1.06).contains(&profile.max_value())
        && (0.88..=0.92).contains(&profile.min_value())
        && elapsed < Duration::from_secs(10);
    report(
        "6 smoothed diagonal (fig4)",
        passed,
        &format!(
            "ridge max {:.4} (window 1.02..1.06), min {:.4} (window 0.88..0.92), \
             elapsed {elapsed:.2?} (limit 10 s)",
            profile.max_value(),
            profile.min_value()
        ),
    );
}

#[test]
fn criterion_7_plate_bank() {
    let started = Instant::now();
    let mut worst_count = 0usize;
    for n in (1u32..=64).chain([1024]) {
        let period = u64::from(n) + 1;
        let bound = period.next_power_of_two().trailing_zeros() as usize;
        for ell in 1..=n + 1 {
            let bank = plate_bank(f64::from(ell), n).unwrap();
            // exact rational reconstruction of λ·(ℓ mod (N+1))/(N+1)
            assert_eq!(
                bank.total_retardance(),
                num_rational::Ratio::new(u64::from(ell) % period, period),
                "n={n} ell={ell}"
            );
            assert!(
                bank.plate_count() <= bound,
                "n={n} ell={ell}: {} plates > {bound}",
                bank.plate_count()
            );
            if n == 1024 {
                worst_count = worst_count.max(bank.plate_count());
            }
        }
    }
    let elapsed = started.elapsed();
    let passed = worst_count <= 10 && elapsed < Duration::from_secs(5);
    report(
        "7 plate bank",
        passed,
        &format!(
            "exact reconstruction for N ≤ 64 and N = 1024; worst N=1024 bank {worst_count} \
             plates (limit 10), elapsed {elapsed:.2?} (limit 5 s)"
        ),
    );
}

#[test]
fn criterion_8_counting() {
    let started = Instant::now();
    // independent oracle: enumerate occupation 4-tuples summing to n
    let enumerate = |n: u32| -> u64 {
        let mut count = 0;
        for a in 0..=n {
            for b in 0..=n - a {
                count += u64::from(n - a - b + 1);
            }
        }
        count
    };
    for n in 0..=12 {
        assert_eq!(
            count_pure_states(n),
            BigUint::from(enumerate(n)),
            "pure-state count at n={n}"
        );
    }
    let patterns = count_patterns(6);
    let passed = patterns == BigUint::from(562_949_953_421_312u64);
    report(
        "8 counting",
        passed,
        &format!(
            "pure-state formula matches enumeration for N ≤ 12; 2^49 = {patterns}, \
             elapsed {:.2?}",
            started.elapsed()
        ),
    );
}

#[test]
fn criterion_9_dose_optimizer() {
    let started = Instant::now();
    let plan = Preset::Fig4.plan();
    let ridge = Preset::Fig4.ridge_waypoints();
    let free: Vec<usize> = plan
        .shots()
        .iter()
        .enumerate()
        .filter(|(_, s)| s.dose() < 1.0)
        .map(|(i, _)| i)
        .collect();
    assert_eq!(free.len(), 7);

    let objective = |p: &ExposurePlan| {
        ridge_profile(p, &ridge, 64)
            .unwrap()
            .values()
            .iter()
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max)
    };

    // sweeps are deterministic, so k iterations is a prefix of k+1: the
    // per-iteration objective trace comes from rerunning with growing k
    let mut trace = vec![objective(&plan)];
    let mut monotone = true;
    for iterations in 1..=12 {
        let tuned = optimize_doses(&plan, &free, &ridge, (0.0, 1.2), 64, iterations).unwrap();
        let now = objective(&tuned);
        monotone &= now <= trace.last().unwrap() + 1e-12;
        trace.push(now);
    }

    let tuned = optimize_doses(&plan, &free, &ridge, (0.0, 1.2), 64, 12).unwrap();
    let profile = ridge_profile(&tuned, &ridge, 64).unwrap();
    let ripple = profile.max_value() - profile.min_value();
    let elapsed = started.elapsed();
    let passed = ripple <= 0.14 && monotone;
    report(
        "9 dose optimizer",
        passed,
        &format!(
            "optimized ripple {ripple:.4} (limit 0.14), objective {:.4} → {:.4}, \
             monotone per iteration: {monotone}, elapsed {elapsed:.2?}",
            trace[0],
            trace.last().unwrap()
        ),
    );
}

#[test]
fn background_exposed_set_mirrors_shot_centers() {
    // the background criterion feeds the metric the half-integer
    // intermediate shots too; spot-check the call used by the suite
    let plan = Preset::Fig4.plan();
    let value = background_penalty(&plan, &plan.shot_centers(), 256).unwrap();
    assert!(value.is_finite() && value >= 0.0);
}

#[test]
fn preset_shot_lists_are_frozen() {
    let fig2 = Preset::Fig2.plan();
    assert_eq!(fig2.shots().len(), 11);
    assert!(fig2
        .shots()
        .iter()
        .any(|s| (s.ell_x(), s.ell_y()) == (6.0, 4.0)));
    let fig4 = Preset::Fig4.plan();
    let full: Vec<(f64, f64)> = fig4
        .shots()
        .iter()
        .filter(|s| s.dose() == 1.0)
        .map(|s| (s.ell_x(), s.ell_y()))
        .collect();
    assert_eq!(full, vec![(2.0, 1.0), (2.0, 2.0), (5.0, 7.0)]);
    let shot = ExposureShot::new(2.5, 3.5, 0.66).unwrap();
    assert!(fig4.shots().contains(&shot));
}
