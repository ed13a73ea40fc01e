use circlelab_core::{c64, Complex64, GaussRat, PrecisionContext};
use circlelab_manifold::series::EXACT_ORDER_CAP;
use circlelab_manifold::{
    analyticity_probe, analyticity_probe_with, functional_residual, solve_series, solve_series_in, AnySeries, GaussM61,
    ManifoldError, SeriesField,
};
use circlelab_maps::catalog;

fn parts(s: &circlelab_manifold::CircleSeries<GaussRat>, j: usize, k: i64) -> (String, String) {
    s.coeffs[j].coeff(k).parts()
}

#[test]
fn f_first_coefficients_are_exact() {
    let f = catalog::cached("f").unwrap();
    let s = solve_series_in::<GaussRat>(f, 4).unwrap();
    assert!(s.coeffs[0].is_zero() || s.coeffs[0].mode_range() == Some((1, 1)));
    assert_eq!(s.coeffs[1].mode_range(), Some((0, 0)));
    assert_eq!(parts(&s, 1, 0), ("-2/3".into(), "0".into()));
    // a₂ = (4z₀ − 2)/(9z₀²)
    assert_eq!(s.coeffs[2].mode_range(), Some((-2, -1)));
    assert_eq!(parts(&s, 2, -1), ("4/9".into(), "0".into()));
    assert_eq!(parts(&s, 2, -2), ("-2/9".into(), "0".into()));
}

#[test]
fn exact_residual_vanishes_through_the_order() {
    let f = catalog::cached("f").unwrap();
    let s = solve_series_in::<GaussRat>(f, 24).unwrap();
    let r = functional_residual(f, &s).unwrap();
    assert!(r.valuation_exceeds(24), "{r:?}");
    // dropping the last coefficient breaks it exactly at that order
    let mut t = s.clone();
    t.coeffs[24] = circlelab_manifold::Laurent::zero();
    let r = functional_residual(f, &t).unwrap();
    assert_eq!(r.valuation, Some(24));
}

#[test]
fn comparison_map_is_exact_too() {
    let m = catalog::cached("m").unwrap();
    let s = solve_series_in::<GaussRat>(m, 16).unwrap();
    assert!(functional_residual(m, &s).unwrap().valuation_exceeds(16));
    assert!(s.bandwidths().iter().all(|&b| b == 0));
}

#[test]
fn context_selects_the_field_and_caps_exact_order() {
    let f = catalog::cached("f").unwrap();
    assert!(matches!(solve_series(f, 8, &PrecisionContext::exact(), EXACT_ORDER_CAP).unwrap(), AnySeries::Exact(_)));
    let fl = PrecisionContext::new(15, false).unwrap();
    assert!(matches!(solve_series(f, 8, &fl, EXACT_ORDER_CAP).unwrap(), AnySeries::Float(_)));
    let e = solve_series(f, 100, &PrecisionContext::exact(), EXACT_ORDER_CAP);
    assert!(matches!(e, Err(ManifoldError::OrderOverflow { order: 100, cap: 64 })));
}

#[test]
fn non_skew_maps_are_refused() {
    for name in ["R", "g", "N"] {
        let map = catalog::cached(name).unwrap();
        assert!(matches!(solve_series_in::<Complex64>(map, 4), Err(ManifoldError::NotSkew(_))), "{name}");
    }
}

#[test]
fn float_and_modular_supports_agree_with_exact() {
    let f = catalog::cached("f").unwrap();
    let ex = solve_series_in::<GaussRat>(f, 20).unwrap();
    let fl = solve_series_in::<Complex64>(f, 20).unwrap();
    let md = solve_series_in::<GaussM61>(f, 20).unwrap();
    for j in 0..=20 {
        assert_eq!(ex.coeffs[j].mode_range(), md.coeffs[j].mode_range(), "j = {j}");
        for (k, c) in ex.coeffs[j].terms() {
            let v = c.to_c64().unwrap();
            assert!((fl.coeffs[j].coeff(k) - v).norm() <= 1e-9 * v.norm().max(1.0), "j = {j}, k = {k}");
        }
    }
}

#[test]
fn series_solves_the_map_numerically() {
    // h(z₀, w) lies on the stable manifold: p(h(z₀,w), w) = h(z₀³, w²)
    let f = catalog::cached("f").unwrap();
    let s = solve_series_in::<Complex64>(f, 24).unwrap();
    let w = c64(0.01, 0.005);
    for th in [0.3, 1.7, 4.0] {
        let z0 = Complex64::from_polar(1.0, th);
        let h = s.eval(z0, w).unwrap();
        let lhs = h * h * h + 2.0 * w * h * h;
        let rhs = s.eval(z0 * z0 * z0, w * w).unwrap();
        assert!((lhs - rhs).norm() < 1e-12, "{}", (lhs - rhs).norm());
    }
}

#[test]
fn growth_probe_separates_f_from_m() {
    let f = catalog::cached("f").unwrap();
    let sf = solve_series_in::<GaussM61>(f, 64).unwrap();
    let pf = analyticity_probe_with(&sf, &[1.0], 0.05, (8, 64)).unwrap();
    let ef = pf.fit.as_ref().unwrap().exponent;
    assert!(ef > 1.3 && ef < 1.9, "{ef}");
    let m = catalog::cached("m").unwrap();
    let sm = solve_series_in::<Complex64>(m, 64).unwrap();
    let pm = analyticity_probe(&sm, &[1.0, 1.1], 0.05).unwrap();
    assert!(pm.fit.as_ref().unwrap().exponent <= 1.1);
    // ρ_j(1.1)^{1/j} stays bounded for m
    assert!(pm.root_max[1].is_finite() && pm.root_max[1] < 10.0, "{:?}", pm.root_max);
}

#[test]
fn probe_refuses_short_series() {
    let m = catalog::cached("m").unwrap();
    let s = solve_series_in::<Complex64>(m, 8).unwrap();
    assert!(matches!(analyticity_probe(&s, &[1.1], 0.05), Err(ManifoldError::InvalidParams(_))));
}

#[test]
fn csv_and_json_outputs_parse_back() {
    let f = catalog::cached("f").unwrap();
    let s = solve_series_in::<GaussRat>(f, 6).unwrap();
    let mut buf = Vec::new();
    s.write_csv(&mut buf).unwrap();
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rd.headers().unwrap(), vec!["j", "mode", "coeff_re", "coeff_im"]);
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    let n_terms: usize = s.coeffs.iter().map(|c| c.terms().count()).sum();
    assert_eq!(rows.len(), n_terms);
    assert!(rows.iter().any(|r| &r[0] == "1" && &r[1] == "0" && &r[2] == "-2/3"));
    let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
    assert_eq!(v["order"], 6);
    assert_eq!(v["coeffs"][2]["lo"], -2);

    let p = analyticity_probe(&solve_series_in::<Complex64>(f, 16).unwrap(), &[1.05], 0.05).unwrap();
    let mut buf = Vec::new();
    p.write_csv(&mut buf).unwrap();
    let mut rd = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rd.headers().unwrap(), vec!["j", "bandwidth", "rho_r1.05"]);
    assert_eq!(rd.records().count(), 17);
}
