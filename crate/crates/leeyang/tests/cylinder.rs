use circlelab_leeyang::*;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

#[test]
fn cylinder_is_invariant() {
    let r = invariance_check(10_000, 3).unwrap();
    assert!(r.passes(1e-12), "{r:?}");
    assert!(r.t_range.0 >= 0.0 && r.t_range.1 <= 1.0);
}

#[test]
fn cylinder_map_examples() {
    let y = cyl_eval(CylinderPoint::new(0.0, 0.3).unwrap()).unwrap();
    assert!(y.theta.abs() < 1e-15 || (y.theta - TAU).abs() < 1e-15);
    let y = cyl_eval(CylinderPoint::new(PI / 3.0, 0.0).unwrap()).unwrap();
    assert!((y.theta - 4.0 * PI / 3.0).abs() < 1e-14);
    // the high-precision orbit agrees with f64 away from the singular points
    let x = CylinderPoint::new(1.0, 0.4).unwrap();
    let a = (0..3).fold(x, |y, _| cyl_step(y));
    let b = cyl_orbit_big(x, 3, 200);
    assert!(circ_diff(a.theta, b.theta).abs() < 1e-12 && (a.t - b.t).abs() < 1e-12);
}

#[test]
fn pulled_back_zeros_lie_on_the_circle_and_are_symmetric() {
    let levels = pullback_levels(&seed_curve(PI, 32), 3, &PullbackOptions { cap: None, rng_seed: 1 }).unwrap();
    for zs in &levels[1..] {
        assert_eq!(zs.failures, 0);
        assert!(zs.points.len() > zs.level * 32);
        assert!(zs.points.iter().all(|p| (p.z().norm() - 1.0).abs() <= 1e-8 && (0.0..=1.0).contains(&p.t)));
        assert!(verify_zero_set(zs, PI, 1e-8).passes());
        assert!(zs.conjugation_asymmetry() < 1e-9, "level {}", zs.level);
    }
}

#[test]
fn subsampling_is_deterministic() {
    let o = PullbackOptions { cap: Some(500), rng_seed: 9 };
    let a = pullback_levels(&seed_curve(PI, 32), 3, &o).unwrap();
    let b = pullback_levels(&seed_curve(PI, 32), 3, &o).unwrap();
    let last = a.last().unwrap();
    assert_eq!(last.points.len(), 500);
    assert!(last.dropped > 0);
    assert_eq!(last.thetas(), b.last().unwrap().thetas());
}

#[test]
fn leaves_keep_their_circular_order() {
    let th0 = [0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2];
    let leaves: Vec<Leaf> = th0.iter().map(|&t| holonomy_leaf(t, 0.05, 0.01, 1e-12).unwrap()).collect();
    assert!(leaves[0].samples.iter().all(|s| s.1.abs() < 1e-11));
    for i in 0..leaves[0].samples.len() {
        let arr: Vec<f64> = leaves.iter().map(|l| l.samples[i].1).collect();
        assert!(circular_order_preserved(&th0, &arr), "{arr:?}");
    }
    let l = holonomy_leaf(2.0, 1e-9, 0.01, 1e-13).unwrap();
    assert!((l.end().1 - 2.0).abs() < 1e-9);
}

#[test]
fn base_density_is_uniform() {
    let run = density_run(0.0, 10_000, &HolonomyOptions::default()).unwrap();
    assert!(run.histogram.masses().iter().all(|&m| m == 0.01));
    assert!(ks_uniform(&run.arrivals) <= 0.01);
    let total: f64 = run.histogram.masses().iter().sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn density_at_small_height_matches_the_zeros() {
    let run = density_run(0.05, 10_000, &HolonomyOptions::default()).unwrap();
    let h = &run.histogram;
    assert_eq!(h.failures, 0);
    assert!(run.order_preserved);
    assert!(h.masses().iter().all(|&m| m > 0.0));
    // S_10 ∩ {t = 0.05}: the lifted iterate is monotone, so there are exactly 4^10 zeros
    let z = zeros_on_circle(PI, 0.05, 10, 1).unwrap();
    assert_eq!(z.len(), 1 << 20);
    let tv = tv_distance(&histogram_masses(&z, h.bins.len()), &h.masses());
    assert!(tv < 0.1, "{tv}");
}

#[test]
fn csv_round_trips() {
    let h = density(0.02, 3200).unwrap();
    let mut buf = Vec::new();
    h.write_csv(&mut buf).unwrap();
    let back = DensityHistogram::read_csv(0.02, buf.as_slice()).unwrap();
    assert_eq!(back.bins, h.bins);

    let zs = pullback_zeros(&seed_curve(PI, 8)).unwrap();
    let mut buf = Vec::new();
    zs.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("level,theta,t\n"));
    assert_eq!(text.lines().count(), zs.points.len() + 1);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<(usize, f64, f64)> = rd.deserialize().collect::<Result<_, _>>().unwrap();
    assert!(rows.iter().zip(&zs.points).all(|(r, p)| r.0 == 1 && r.1 == p.theta && r.2 == p.t));
}
