use circlelab_manifold::{
    bullet_backward_invariance_check, distortion_check, distortion_check_with, tension_experiment, DistortionKind,
    DistortionOptions, ManifoldError,
};

#[test]
fn small_bullets_are_backward_invariant() {
    let r = bullet_backward_invariance_check(3, 0.05, 1000, 7).unwrap();
    assert!(r.success(), "{} violations", r.violations.len());
    assert_eq!(r.failures, 0);
    assert!(r.preimages_in_disc > 0);
}

#[test]
fn large_eps_report_is_produced() {
    // ε = 0.5 is outside the small-ε regime; whatever happens is reported
    let r = bullet_backward_invariance_check(3, 0.5, 200, 7).unwrap();
    assert_eq!(r.samples, 200);
    for v in &r.violations {
        assert!(v.preimage.0.norm() < 0.5 && v.preimage.1.norm() < 0.5);
    }
}

#[test]
fn vertical_distortion_is_uniform() {
    let opts = DistortionOptions { kind: DistortionKind::Vertical, ..Default::default() };
    let a = distortion_check_with(3, 0.05, 3, 500, &opts).unwrap();
    let b = distortion_check_with(3, 0.05, 4, 500, &opts).unwrap();
    assert_eq!(b.samples, 500);
    assert!(b.spread() < 10.0, "{b:?}");
    assert!(a.overlaps(&b));
}

#[test]
fn horizontal_distortion_inside_the_cone() {
    let a = distortion_check(3, 0.05, 3, 500).unwrap();
    let b = distortion_check(3, 0.05, 4, 500).unwrap();
    let (lo_a, hi_a) = a.cone_ratio_range.unwrap();
    let (lo_b, hi_b) = b.cone_ratio_range.unwrap();
    assert!(hi_b / lo_b < 10.0);
    assert!(lo_a <= hi_b && lo_b <= hi_a);
    // the same seed gives the same report
    let again = distortion_check(3, 0.05, 4, 500).unwrap();
    assert_eq!((again.ratio_min, again.ratio_max, again.attempts), (b.ratio_min, b.ratio_max, b.attempts));
}

#[test]
fn distortion_reports_no_survivors() {
    let opts = DistortionOptions { attempts_per_sample: 1, ..Default::default() };
    let e = distortion_check_with(3, 0.05, 40, 5, &opts);
    assert!(matches!(e, Err(ManifoldError::NoSurvivors { .. })), "{e:?}");
}

#[test]
fn preorbits_pull_apart() {
    let eps = 0.1;
    let mut prev = f64::INFINITY;
    let mut first = 0.0;
    for k in 2..=6 {
        let r = tension_experiment(eps, k).unwrap();
        assert!(r.n_k >= k);
        assert!(r.horizontal_proxy >= 0.5 * eps.powi(4), "k = {k}: {}", r.horizontal_proxy);
        assert!(r.vertical_proxy < prev, "k = {k}");
        if k == 2 {
            first = r.vertical_proxy;
        }
        prev = r.vertical_proxy;
    }
    assert!(first / prev >= 10.0);
}

#[test]
fn tension_rejects_large_eps() {
    assert!(matches!(tension_experiment(0.5, 2), Err(ManifoldError::InvalidParams(_))));
}
