//! The ten acceptance criteria, each at its stated tolerance and time budget.
//! Every test prints one PASS/FAIL line straight to stdout, past the test
//! harness's capture, so the lines show up in a plain `cargo test` log. A
//! criterion fails if its measurement or its runtime is out of bounds.

use circlelab_bottcher::{phi, sample_omega, search_region};
use circlelab_core::{c64, ChartId, ChartPoint, Complex64, CounterRng, GaussRat};
use circlelab_leeyang::{
    density_run, histogram_masses, invariance_check, ks_uniform, pullback_levels, seed_curve, tv_distance,
    HolonomyOptions, PullbackOptions,
};
use circlelab_manifold::slice::default_thetas;
use circlelab_manifold::{
    analyticity_probe_with, bisect_slice_with, distortion_check, functional_residual, psi_contour, solve_series_in,
    tension_experiment, GaussM61, SeriesField, SliceOptions,
};
use circlelab_maps::catalog::cached;
use circlelab_maps::{eval, eval_in_chart, preimages, to_chart};
use rand::Rng;
use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

fn report(index: usize, name: &str, pass: bool, detail: &str, elapsed: Duration, budget_s: f64) -> bool {
    let in_time = elapsed.as_secs_f64() < budget_s;
    let ok = pass && in_time;
    // println! would be captured for passing tests
    let line = format!(
        "{} [{index}/10] {name}: {detail}; {:.2} s (budget {budget_s} s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    let _ = writeln!(std::io::stdout().lock(), "{line}");
    ok
}

#[test]
fn bottcher_invariance() {
    let t = Instant::now();
    let g = cached("g").unwrap();
    let region = search_region(g, 0.5, 20_000, 0).unwrap();
    let rng = CounterRng::new(4);
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let x = sample_omega(g, &region, &rng, i).unwrap();
        let a = phi(g, &x, tol, 200).unwrap();
        let b = phi(g, &eval(g, &x).unwrap(), tol, 200).unwrap();
        worst = worst.max((b.value - a.value * a.value).norm());
    }
    let ok = worst <= 1e-8;
    assert!(report(
        1,
        "Böttcher invariance",
        ok,
        &format!("max |φ(g(x)) − φ(x)²| = {worst:.2e} (≤ 1e-8)"),
        t.elapsed(),
        30.0
    ));
}

#[test]
fn line_identity() {
    let t = Instant::now();
    let g = cached("g").unwrap();
    let rng = CounterRng::new(2);
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let mut s = rng.stream(i);
        let z = Complex64::from_polar(s.gen_range(0.5..=2.0), s.gen_range(0.0..std::f64::consts::TAU));
        let r = phi(g, &ChartPoint::new(ChartId::AffineZero, z, c64(0.0, 0.0)), 1e-12, 60).unwrap();
        worst = worst.max((r.value - z).norm());
    }
    let ok = worst <= 1e-13;
    assert!(report(2, "line identity", ok, &format!("max |φ(z, 0) − z| = {worst:.2e} (≤ 1e-13)"), t.elapsed(), 1.0));
}

#[test]
fn level_set_equals_basin_boundary() {
    let t = Instant::now();
    let g = cached("g").unwrap();
    let th = default_thetas(64);
    let a = bisect_slice_with(g, c64(0.02, 0.0), &th, 1e-9, &SliceOptions::default()).unwrap();
    let b = psi_contour(g, c64(0.02, 0.0), &th, 1e-9, 1e-12, (0.8, 1.2)).unwrap();
    let d = a.sup_distance(&b);
    let ok = d <= 1e-6;
    assert!(report(
        3,
        "ψ = 0 versus basin boundary",
        ok,
        &format!("sup distance {d:.2e} (≤ 1e-6)"),
        t.elapsed(),
        300.0
    ));
}

#[test]
fn newton_circle() {
    let t = Instant::now();
    let n = cached("N").unwrap();
    let opts = SliceOptions { bracket: (0.75, 1.3), ..Default::default() };
    let s = bisect_slice_with(n, c64(0.0, 0.0), &default_thetas(64), 1e-12, &opts).unwrap();
    // y = z/(z − 1) in the Newton coordinate; the slice is the line Re(y) = 1/2
    let worst = s
        .thetas
        .iter()
        .zip(&s.radii)
        .map(|(th, r)| {
            let z = Complex64::from_polar(*r, *th);
            ((z / (z - 1.0)).re - 0.5).abs()
        })
        .fold(0.0, f64::max);
    let ok = worst <= 1e-9 && s.radii.len() == 64;
    assert!(report(
        4,
        "Newton circle",
        ok,
        &format!("max |Re(y) − 1/2| = {worst:.2e} at 64 angles (≤ 1e-9)"),
        t.elapsed(),
        60.0
    ));
}

#[test]
fn degree_eight_preimages() {
    let t = Instant::now();
    let r = cached("R").unwrap();
    let rng = CounterRng::new(1);
    let mut counts_ok = true;
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let mut s = rng.stream(i);
        let mut c = || c64(s.gen_range(-1.0..1.0), s.gen_range(-1.0..1.0));
        let y = ChartPoint::new(ChartId::PhysicalZt, c(), c());
        let pre = preimages(r, &y).unwrap();
        counts_ok &= pre.len() == 8;
        for x in pre {
            let fx = to_chart(&eval_in_chart(r, &x).unwrap(), ChartId::PhysicalZt, r).unwrap();
            worst = worst.max(fx.dist(&y) / 1.0f64.max(y.max_abs()));
        }
    }
    let ok = counts_ok && worst <= 1e-9;
    let detail = format!("all 100 targets have 8 preimages: {counts_ok}; max forward residual {worst:.2e} (≤ 1e-9)");
    assert!(report(5, "degree-8 preimages", ok, &detail, t.elapsed(), 120.0));
}

#[test]
fn series_oracle_values() {
    let t = Instant::now();
    let f = cached("f").unwrap();
    let s = solve_series_in::<GaussRat>(f, 24).unwrap();
    let part = |j: usize, k: i64| s.coeffs[j].coeff(k).parts();
    let a1 = s.coeffs[1].mode_range() == Some((0, 0)) && part(1, 0) == ("-2/3".into(), "0".into());
    // a₂ = (4z₀ − 2)/(9z₀²) = 4/9 z₀⁻¹ − 2/9 z₀⁻²
    let a2 = s.coeffs[2].mode_range() == Some((-2, -1))
        && part(2, -1) == ("4/9".into(), "0".into())
        && part(2, -2) == ("-2/9".into(), "0".into());
    let res = functional_residual(f, &s).unwrap();
    let ok = a1 && a2 && res.valuation_exceeds(24);
    let val = match res.valuation {
        Some(v) => v.to_string(),
        None => format!("> {} (zero through w^{})", res.checked, res.checked),
    };
    let detail = format!("a₁ exact: {a1}, a₂ exact: {a2}, residual w-valuation {val} (> 24)");
    assert!(report(6, "series oracle values", ok, &detail, t.elapsed(), 60.0));
}

#[test]
fn analyticity_dichotomy() {
    let t = Instant::now();
    let sf = solve_series_in::<GaussM61>(cached("f").unwrap(), 128).unwrap();
    let pf = analyticity_probe_with(&sf, &[1.0], 0.05, (8, 128)).unwrap();
    let sm = solve_series_in::<GaussM61>(cached("m").unwrap(), 128).unwrap();
    let pm = analyticity_probe_with(&sm, &[1.0], 0.05, (8, 128)).unwrap();
    let ef = pf.fit.as_ref().map_or(f64::NAN, |f| f.exponent);
    let em = pm.fit.as_ref().map_or(f64::NAN, |f| f.exponent);
    let ok = (1.4..=1.8).contains(&ef) && em <= 1.1;
    let detail = format!("exponent f = {ef:.4} (in [1.4, 1.8]), m = {em:.4} (≤ 1.1), j ∈ [8, 128]");
    assert!(report(7, "analyticity dichotomy", ok, &detail, t.elapsed(), 600.0));
}

#[test]
fn distortion() {
    let t = Instant::now();
    let r4 = distortion_check(3, 0.05, 4, 500).unwrap();
    let r3 = distortion_check(3, 0.05, 3, 500).unwrap();
    let spread = r4.spread();
    let overlap = r3.overlaps(&r4);
    let ok = spread < 10.0 && overlap && r4.samples == 500;
    let mut detail =
        format!("n=4 spread {spread:.3e} (< 10) over {} survivors, n=3/n=4 overlap: {overlap}", r4.samples);
    if !ok {
        // Orbits may stay in B_3 while |q| overtakes |p|; the step factor
        // |1 + 2q/p|² is then unbounded.
        let cone = r4.cone_ratio_range.map_or("none".to_string(), |(a, b)| format!("[{a:.6}, {b:.6}]"));
        detail.push_str(&format!(
            "; not attainable: B_3 lets q overtake p, so the ratio is unbounded; survivors that also stay in K^h ({}) have ratios in {cone}",
            r4.cone_samples
        ));
    }
    assert!(report(8, "distortion", ok, &detail, t.elapsed(), 120.0));
}

#[test]
fn tension() {
    let t = Instant::now();
    let eps = 0.1;
    let reps: Vec<_> = (2..=6).map(|k| tension_experiment(eps, k).unwrap()).collect();
    let floor = 0.5 * eps.powi(4);
    let horizontal = reps.iter().all(|r| r.horizontal_proxy >= floor);
    let v: Vec<f64> = reps.iter().map(|r| r.vertical_proxy).collect();
    let monotone = v.windows(2).all(|w| w[1] < w[0]);
    let drop = v[0] / v[4];
    let ok = horizontal && monotone && drop >= 10.0;
    let h: Vec<String> = reps.iter().map(|r| format!("{:.2e}", r.horizontal_proxy)).collect();
    let vs: Vec<String> = v.iter().map(|x| format!("{x:.2e}")).collect();
    let detail = format!(
        "ε = {eps}, k = 2..6: horizontal {h:?} (≥ {floor:.1e}); vertical {vs:?} decreasing: {monotone}, k=2/k=6 = {drop:.1e} (≥ 10)"
    );
    assert!(report(9, "tension", ok, &detail, t.elapsed(), 300.0));
}

#[test]
fn cylinder_pipeline() {
    let t = Instant::now();
    let inv = invariance_check(10_000, 11).unwrap();
    let inv_ok = inv.passes(1e-12) && inv.samples == 10_000;
    let base = density_run(0.0, 10_000, &HolonomyOptions::default()).unwrap();
    let ks = ks_uniform(&base.arrivals);
    let opts = PullbackOptions::default();
    let a = pullback_levels(&seed_curve(PI, 64), 8, &opts).unwrap();
    let b = pullback_levels(&seed_curve(2.0, 64), 8, &opts).unwrap();
    let (a8, b8) = (a.last().unwrap(), b.last().unwrap());
    let tv = tv_distance(&histogram_masses(&a8.thetas(), 64), &histogram_masses(&b8.thetas(), 64));
    let ok = inv_ok && ks <= 0.01 && tv < 0.05;
    let detail = format!(
        "invariance max ||z′| − 1| {:.1e} (≤ 1e-12): {inv_ok}; μ₀ KS {ks:.1e} (≤ 0.01); level-8 two-seed TV {tv:.4} (< 0.05)",
        inv.max_modulus_err
    );
    assert!(report(10, "cylinder pipeline", ok, &detail, t.elapsed(), 600.0));
}
