use circlelab_bottcher::*;
use circlelab_core::{ChartId, ChartPoint, Complex64, CounterRng};
use circlelab_maps::catalog::cached;
use circlelab_maps::eval;
use rand::Rng;

fn g_region() -> RegionParams {
    search_region(cached("g").unwrap(), 0.5, 20_000, 0).unwrap()
}

#[test]
fn line_identity_in_both_charts() {
    let g = cached("g").unwrap();
    let rng = CounterRng::new(2);
    for i in 0..1000 {
        let mut s = rng.stream(i);
        let z = Complex64::from_polar(s.gen_range(0.5..2.0), s.gen_range(0.0..6.3));
        let r = phi(g, &ChartPoint::new(ChartId::AffineZero, z, Complex64::new(0.0, 0.0)), 1e-12, 60).unwrap();
        assert!((r.value - z).norm() <= 1e-13, "{z}");
        assert_eq!(r.truncation_bound, 0.0);
    }
}

#[test]
fn invariance_on_region_samples() {
    let g = cached("g").unwrap();
    let region = g_region();
    let rng = CounterRng::new(4);
    let tol = 1e-9;
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let x = sample_omega(g, &region, &rng, i).unwrap();
        let a = phi(g, &x, tol, 200).unwrap();
        let b = phi(g, &eval(g, &x).unwrap(), tol, 200).unwrap();
        worst = worst.max((b.value - a.value * a.value).norm());
    }
    assert!(worst <= 10.0 * tol, "{worst}");
}

#[test]
fn tail_bound_is_honest() {
    let g = cached("g").unwrap();
    let region = g_region();
    let rng = CounterRng::new(6);
    for i in 0..200 {
        let x = sample_omega(g, &region, &rng, i).unwrap();
        let coarse = phi(g, &x, 1e-4, 200).unwrap();
        let fine = phi(g, &x, 1e-14, 400).unwrap();
        assert!(fine.terms > coarse.terms);
        assert!((coarse.value - fine.value).norm() <= coarse.truncation_bound, "{x:?}");
    }
}

#[test]
fn psi_examples() {
    let g = cached("g").unwrap();
    let x = ChartPoint::new(ChartId::AffineZero, Complex64::from_polar(0.9, 2.0), Complex64::new(0.0, 0.0));
    assert!((psi(g, &x, 1e-12).unwrap().value - 0.9f64.ln()).abs() <= 1e-12);
    let x = ChartPoint::new(ChartId::AffineZero, Complex64::from_polar(1.0, 2.0), Complex64::new(0.0, 0.0));
    assert!(psi(g, &x, 1e-12).unwrap().value.abs() <= 1e-12);
}

#[test]
fn region_search_outcomes() {
    let g = cached("g").unwrap();
    let r = g_region();
    assert!(r.check().is_ok());
    let rep = validate_region(g, &r, 100_000, 1);
    assert!(rep.success(), "{} violations, guard {}", rep.violations, rep.max_guard);
    assert_eq!(rep.n_samples, 100_000);
    // a < b: the search is expected to fail
    assert!(matches!(search_region(cached("f").unwrap(), 0.5, 5_000, 0), Err(BottcherError::NoValidRegion { .. })));
    let n = cached("N").unwrap();
    let rn = search_region(n, 0.5, 20_000, 0).unwrap();
    assert!(validate_region(n, &rn, 20_000, 3).success());
}

#[test]
fn falsification_and_empty_region() {
    // the tube is the binding constraint for g
    let g = cached("g").unwrap();
    let mut r = g_region();
    r.tube *= 8.0;
    assert!(!validate_region(g, &r, 100_000, 1).success());
    // for m the disc around the fixed point is
    let m = cached("m").unwrap();
    let mut r = search_region(m, 0.5, 20_000, 0).unwrap();
    r.eps1 *= 2.0;
    let rep = validate_region(m, &r, 100_000, 1);
    assert!(rep.violations > 0);
    let empty = RegionParams::new(0.0, 0.0, 0.5, 0.0);
    let rep = validate_region(g, &empty, 1000, 0);
    assert!(rep.success() && rep.vacuous && !rep.warnings.is_empty());
}

#[test]
fn report_csv_and_params_json() {
    let g = cached("g").unwrap();
    let r = g_region();
    let back = RegionParams::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    let rep = validate_region(g, &r, 40, 0);
    let mut buf = Vec::new();
    rep.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("sample_z_re,sample_z_im,sample_w_re,sample_w_im,guard_value,violated"));
    assert_eq!(lines.count(), 40);
    assert!(RegionParams::from_json(
        "{\"eps1\": 2.0, \"eps2\": 0.1, \"delta1\": 0.1, \"delta2\": 0.1, \"k\": 0.5, \"tube\": 0.1}"
    )
    .is_err());
}

#[test]
fn averaging_levels_agree() {
    let base = RegionParams::new(0.3, 0.3, 0.5, 0.1);
    let tol = 1e-9;
    let x = ChartPoint::new(ChartId::PqAtInfinity, Complex64::from_polar(1.0, 0.7), Complex64::new(1e-10, 0.0));
    let r = cached("R").unwrap();
    let direct = phi_with(r, &x, tol, 200, &PhiOptions { experimental: true, region: None }).unwrap();
    let v0 = averaging_phi(&x, 0, &base, tol).unwrap();
    assert_eq!(v0, direct);
    let v1 = averaging_phi(&x, 1, &base, tol).unwrap();
    let v2 = averaging_phi(&x, 2, &base, tol).unwrap();
    assert!((v1.value - v2.value).norm() <= 10.0 * tol);
    assert!((v0.value - v2.value).norm() <= 10.0 * tol);
    // along L0 towards p-infinity φ(p, 0) = p
    let mut last = f64::INFINITY;
    for m in 1..8 {
        let p = 0.5f64.powi(m);
        let v = averaging_phi(&ChartPoint::real(ChartId::PqAtInfinity, p, 0.0), 0, &base, tol).unwrap();
        assert!(v.value.norm() < last);
        last = v.value.norm();
    }
    assert!(last < 1e-2);
}

#[test]
fn r_needs_the_experimental_flag() {
    let r = cached("R").unwrap();
    let x = ChartPoint::real(ChartId::PqAtInfinity, 0.9, 0.0);
    assert!(matches!(phi(r, &x, 1e-9, 50), Err(BottcherError::RequiresExperimental { .. })));
}
