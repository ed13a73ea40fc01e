use circlelab_core::{ChartId, ChartPoint, Complex64};
use circlelab_maps::catalog::{self, f_map, r_map};
use circlelab_maps::{
    eval, eval_in_chart, jacobian, orbit, preimages, semiconjugacy_residual, to_chart, MapError, Terminal,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rand_c(rng: &mut StdRng, r: f64) -> Complex64 {
    c(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

#[test]
fn skew_f_jacobian_at_fixed_point() {
    let j = jacobian(&f_map(), &ChartPoint::real(ChartId::AffineZero, 1.0, 0.0)).unwrap();
    assert_eq!(j, [[c(3.0, 0.0), c(2.0, 0.0)], [c(0.0, 0.0), c(0.0, 0.0)]]);
}

#[test]
fn transverse_row_vanishes_on_the_line() {
    for m in catalog::all() {
        if m.a < 2 {
            continue;
        }
        let chart = m.zero_chart();
        for k in 0..8 {
            let z = Complex64::from_polar(1.0, 0.1 + 0.7 * k as f64);
            let j = jacobian(&m, &ChartPoint::new(chart, z, c(0.0, 0.0))).unwrap();
            assert!(j[1][0].norm() < 1e-14 && j[1][1].norm() < 1e-14, "{}: {j:?}", m.name);
        }
    }
}

#[test]
fn jacobian_matches_central_differences() {
    let mut rng = StdRng::seed_from_u64(11);
    let h = 1e-6;
    for m in catalog::all() {
        for cf in &m.charts {
            let mut done = 0;
            while done < 100 {
                let x = ChartPoint::new(cf.chart, rand_c(&mut rng, 0.9), rand_c(&mut rng, 0.9));
                let [_, d1, _, d2] = cf.formula.parts(x.c1, x.c2);
                if d1.norm() < 0.05 || d2.norm() < 0.05 {
                    continue;
                }
                let Ok(j) = jacobian(&m, &x) else { continue };
                let f = |a: Complex64, b: Complex64| cf.formula.eval(a, b);
                let fd = |da: Complex64, db: Complex64| {
                    let p = f(x.c1 + da, x.c2 + db);
                    let q = f(x.c1 - da, x.c2 - db);
                    ((p.0 - q.0) / (2.0 * h), (p.1 - q.1) / (2.0 * h))
                };
                let (a0, a1) = fd(c(h, 0.0), c(0.0, 0.0));
                let (b0, b1) = fd(c(0.0, 0.0), c(h, 0.0));
                let err = [(j[0][0] - a0), (j[1][0] - a1), (j[0][1] - b0), (j[1][1] - b1)]
                    .iter()
                    .map(|e| e.norm())
                    .fold(0.0, f64::max);
                let scale = 1.0f64.max(j.iter().flatten().map(|e| e.norm()).fold(0.0, f64::max));
                assert!(err <= 1e-6 * scale, "{} {}: {err}", m.name, cf.chart);
                done += 1;
            }
        }
    }
}

#[test]
fn transitions_round_trip() {
    let mut rng = StdRng::seed_from_u64(5);
    for m in catalog::all() {
        for t in &m.atlas.transitions {
            let mut done = 0;
            while done < 1000 {
                let x = ChartPoint::new(t.from, rand_c(&mut rng, 2.0), rand_c(&mut rng, 2.0));
                let Ok(y) = to_chart(&x, t.to, &m) else { continue };
                let Ok(back) = to_chart(&y, t.from, &m) else { continue };
                if y.max_abs() > 1e3 {
                    continue;
                }
                let scale = 1.0f64.max(x.max_abs()).max(y.max_abs());
                assert!(back.dist(&x) <= 1e-14 * scale * scale, "{} {} -> {}", m.name, t.from, t.to);
                done += 1;
            }
        }
    }
}

#[test]
fn singular_locus_is_refused() {
    let r = r_map();
    // pq -> physical divides by p + q
    let x = ChartPoint::new(ChartId::PqAtInfinity, c(0.3, 0.0), c(-0.3 + 1e-10, 0.0));
    assert!(to_chart(&x, ChartId::PhysicalZt, &r).is_err());
    let g = catalog::g_map();
    assert!(to_chart(&ChartPoint::real(ChartId::AffineZero, 0.0, 0.5), ChartId::BlowupZetaTau, &g).is_err());
    assert!(to_chart(&ChartPoint::real(ChartId::AffineZero, 0.0, 0.5), ChartId::AffineInfinity, &g).is_err());
}

#[test]
fn transition_examples() {
    let r = r_map();
    let y = to_chart(&ChartPoint::real(ChartId::PhysicalZt, 2.0, 0.0), ChartId::PqAtInfinity, &r).unwrap();
    assert_eq!(y, ChartPoint::real(ChartId::PqAtInfinity, 0.5, 0.0));
    let g = catalog::g_map();
    let y = to_chart(&ChartPoint::real(ChartId::AffineZero, 4.0, 0.5), ChartId::BlowupZetaTau, &g).unwrap();
    assert_eq!(y, ChartPoint::real(ChartId::BlowupZetaTau, 0.25, 2.0));
    let x = ChartPoint::real(ChartId::AffineZero, 0.3, 0.2);
    assert_eq!(to_chart(&x, ChartId::AffineZero, &g).unwrap(), x);
}

#[test]
fn orbit_examples() {
    let f = f_map();
    let z = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    let o = orbit(&f, &ChartPoint::new(ChartId::AffineZero, z, c(0.0, 0.0)), 8, 1e6);
    assert_eq!(o.terminal, Terminal::BudgetExhausted);
    assert_eq!(o.points.len(), 9);
    for p in &o.points {
        assert!((p.c1.norm() - 1.0).abs() < 1e-12 && p.c2 == c(0.0, 0.0));
    }
    for k in 0..o.n {
        assert_eq!(o.points[k + 1], eval_in_chart(&f, &o.points[k]).unwrap());
    }
    let r = r_map();
    let o = orbit(&r, &ChartPoint::real(ChartId::PhysicalZt, 0.5, 0.1), 50, 1e6);
    let last = o.points.last().unwrap();
    assert_eq!(last.chart, ChartId::PhysicalZt);
    assert!(last.c1.norm() < 1e-6 && (last.c2 - 1.0).norm() < 1e-6, "{last:?}");
    assert_eq!(
        eval(&f, &ChartPoint::real(ChartId::AffineZero, 1.0, 0.0)).unwrap(),
        ChartPoint::real(ChartId::AffineZero, 1.0, 0.0)
    );
}

#[test]
fn cylinder_is_invariant() {
    let r = r_map();
    let mut rng = StdRng::seed_from_u64(3);
    let mut done = 0;
    while done < 10_000 {
        let z = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let t: f64 = 1.0 - rng.gen::<f64>();
        let y = match eval_in_chart(&r, &ChartPoint::new(ChartId::PhysicalZt, z, c(t, 0.0))) {
            Ok(y) => y,
            Err(MapError::Indeterminacy { .. }) => continue,
            Err(e) => panic!("{e}"),
        };
        let y = to_chart(&y, ChartId::PhysicalZt, &r).unwrap();
        assert!((y.c1.norm() - 1.0).abs() <= 1e-12);
        assert!(y.c2.im.abs() <= 1e-12 && (-1e-12..=1.0 + 1e-12).contains(&y.c2.re));
        done += 1;
    }
}

#[test]
fn semiconjugacy_in_the_tube() {
    let mut rng = StdRng::seed_from_u64(9);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 1000 {
        let z = rand_c(&mut rng, 2.0);
        let t = Complex64::from_polar(0.1 * rng.gen::<f64>(), rng.gen_range(0.0..6.3));
        match semiconjugacy_residual(&ChartPoint::new(ChartId::PhysicalZt, z, t)) {
            Ok(r) => worst = worst.max(r),
            Err(_) => continue,
        }
        done += 1;
    }
    assert!(worst <= 1e-10, "{worst}");
}

#[test]
fn r_generic_preimage_count() {
    let r = r_map();
    let mut rng = StdRng::seed_from_u64(1);
    for _ in 0..100 {
        let y = ChartPoint::new(ChartId::PhysicalZt, rand_c(&mut rng, 1.0), rand_c(&mut rng, 1.0));
        let pre = preimages(&r, &y).unwrap();
        assert_eq!(pre.len(), 8, "{y:?}");
        for x in pre {
            let fx = to_chart(&eval_in_chart(&r, &x).unwrap(), ChartId::PhysicalZt, &r).unwrap();
            assert!(fx.dist(&y) <= 1e-9 * 1.0f64.max(y.max_abs()));
        }
    }
}

#[test]
fn user_map_from_json() {
    let json = f_map().to_json();
    let m = circlelab_maps::MapSpec::from_json(&json).unwrap();
    assert_eq!(m.b, 3);
    assert!(circlelab_maps::MapSpec::from_json("{\"name\": 3}").is_err());
}
