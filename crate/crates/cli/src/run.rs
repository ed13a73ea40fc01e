use crate::config::{Command, Effective};
use crate::output::{svg_path, write_atomic};
use crate::svg::{render_svg, PlotKind};
use crate::CliError;
use circlelab_bottcher::{phi, sample_omega, search_region, validate_region};
use circlelab_core::{ChartId, ChartPoint, Complex64, CounterRng, PrecisionContext};
use circlelab_leeyang::{density_run, pullback_levels, seed_curve, verify_zero_set, HolonomyOptions, PullbackOptions};
use circlelab_manifold::series::EXACT_ORDER_CAP;
use circlelab_manifold::slice::default_thetas;
use circlelab_manifold::{
    analyticity_probe_with, bisect_slice_with, distortion_check_with, psi_contour, solve_series, solve_series_in,
    tension_experiment, ClassifyOptions, DistortionKind, DistortionOptions, GaussM61, ProbeReport, SliceOptions,
};
use circlelab_maps::{catalog, eval_in_chart, preimages, to_chart, MapError, MapSpec};
use std::path::Path;

/// What a run produced: the artifact bytes, the plot kind if it has one,
/// and a short summary for stderr.
pub struct Artifact {
    pub bytes: Vec<u8>,
    pub plot: Option<PlotKind>,
    pub summary: String,
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

pub fn load_map(name: &str) -> Result<MapSpec, CliError> {
    let p = Path::new(name);
    if name.ends_with(".json") && p.exists() {
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Usage(format!("cannot read map {name}: {e}")))?;
        return MapSpec::from_json(&text).map_err(|e| CliError::Usage(e.to_string()));
    }
    catalog::by_name(name).map_err(|e| match e {
        MapError::UnknownMap(_) => CliError::Usage(e.to_string()),
        e => domain(e),
    })
}

fn parse_chart(map: &MapSpec, chart: &Option<String>, default: ChartId) -> Result<ChartId, CliError> {
    match chart {
        None => Ok(default),
        Some(s) => {
            let c = ChartId::parse(s).ok_or_else(|| CliError::Usage(format!("unknown chart '{s}'")))?;
            if map.charts.iter().any(|f| f.chart == c) {
                Ok(c)
            } else {
                Err(CliError::Usage(format!("map {} has no chart {s}", map.name)))
            }
        }
    }
}

fn csv_bytes<F>(f: F) -> Result<Vec<u8>, CliError>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<(), csv::Error>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        f(&mut w).map_err(domain)?;
        w.flush().map_err(|e| CliError::Io(e.to_string()))?;
    }
    Ok(buf)
}

fn into_bytes<E: std::fmt::Display>(f: impl FnOnce(&mut Vec<u8>) -> Result<(), E>) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(domain)?;
    Ok(buf)
}

fn s(x: f64) -> String {
    x.to_string()
}

/// Run the one module operation the config names.
pub fn dispatch(eff: &Effective) -> Result<Artifact, CliError> {
    let map = load_map(&eff.map_name)?;
    let seed = eff.rng_seed;
    match &eff.command {
        Command::Phi(p) => {
            let (tol, n_max) = (p.tol.unwrap(), p.n_max.unwrap());
            let points: Vec<ChartPoint> = match (p.samples, p.z) {
                (Some(n), _) => {
                    let region = search_region(&map, p.k.unwrap(), 20_000, seed).map_err(domain)?;
                    let rng = CounterRng::new(seed);
                    (0..n).filter_map(|i| sample_omega(&map, &region, &rng, i)).collect()
                }
                (None, Some(z)) => {
                    let chart = parse_chart(&map, &p.chart, map.zero_chart())?;
                    vec![ChartPoint::new(chart, z.c64(), p.w.unwrap().c64())]
                }
                (None, None) => return Err(CliError::Usage("phi needs --z or --samples".into())),
            };
            let mut rows = Vec::new();
            for x in &points {
                rows.push((x, phi(&map, x, tol, n_max).map_err(domain)?));
            }
            let bytes = csv_bytes(|w| {
                w.write_record(["chart", "z_re", "z_im", "w_re", "w_im", "phi_re", "phi_im", "bound", "terms"])?;
                for (x, r) in &rows {
                    w.write_record([
                        x.chart.to_string(),
                        s(x.c1.re),
                        s(x.c1.im),
                        s(x.c2.re),
                        s(x.c2.im),
                        s(r.value.re),
                        s(r.value.im),
                        s(r.truncation_bound),
                        r.terms.to_string(),
                    ])?;
                }
                Ok(())
            })?;
            Ok(Artifact { bytes, plot: None, summary: format!("phi: {} points", rows.len()) })
        }
        Command::Region(p) => {
            let r = search_region(&map, p.k.unwrap(), p.samples.unwrap(), seed).map_err(domain)?;
            let rep = validate_region(&map, &r, p.samples.unwrap(), seed);
            let bytes = into_bytes(|b| rep.write_csv(b))?;
            Ok(Artifact { bytes, plot: None, summary: format!("region: {}", r.to_json().replace('\n', " ")) })
        }
        Command::Slice(p) => {
            let thetas = default_thetas(p.thetas.unwrap());
            let br = p.bracket.unwrap();
            let fiber = p.fiber.unwrap().c64();
            let sample = if p.method.as_deref() == Some("psi") {
                psi_contour(&map, fiber, &thetas, p.tol.unwrap(), p.psi_tol.unwrap(), (br.0, br.1))
            } else {
                let opts = SliceOptions {
                    bracket: (br.0, br.1),
                    classify: ClassifyOptions { budget: p.budget.unwrap(), ..Default::default() },
                    ..Default::default()
                };
                bisect_slice_with(&map, fiber, &thetas, p.tol.unwrap(), &opts)
            }
            .map_err(domain)?;
            let bytes = into_bytes(|b| sample.write_csv(b))?;
            let spread = sample.radii.iter().fold((f64::INFINITY, 0.0f64), |a, &r| (a.0.min(r), a.1.max(r)));
            Ok(Artifact {
                bytes,
                plot: Some(PlotKind::Slice),
                summary: format!("slice: {} angles, radius in [{}, {}]", thetas.len(), spread.0, spread.1),
            })
        }
        Command::Series(p) => {
            let ctx =
                if p.exact { PrecisionContext::exact() } else { PrecisionContext::new(15, false).map_err(domain)? };
            let series = solve_series(&map, p.order.unwrap(), &ctx, EXACT_ORDER_CAP).map_err(domain)?;
            let bytes = into_bytes(|b| series.write_csv(b))?;
            Ok(Artifact { bytes, plot: None, summary: format!("series: order {}", series.order()) })
        }
        Command::Probe(p) => {
            let order = p.order.unwrap();
            let window = (p.j_min.unwrap(), p.j_max.unwrap_or(order / 2));
            let radii = p.radii.clone().unwrap();
            let rep: ProbeReport = if p.field.as_deref() == Some("float") {
                let s = solve_series_in::<Complex64>(&map, order).map_err(domain)?;
                analyticity_probe_with(&s, &radii, p.w_max.unwrap(), window)
            } else {
                let s = solve_series_in::<GaussM61>(&map, order).map_err(domain)?;
                analyticity_probe_with(&s, &radii, p.w_max.unwrap(), window)
            }
            .map_err(domain)?;
            let bytes = into_bytes(|b| rep.write_csv(b))?;
            let fit = match &rep.fit {
                Some(f) => format!("exponent {:.4} over j in [{}, {}]", f.exponent, f.j_min, f.j_max),
                None => "no fit (too few nonzero coefficients)".into(),
            };
            Ok(Artifact { bytes, plot: Some(PlotKind::Probe), summary: format!("probe: {fit}") })
        }
        Command::Preimages(p) => {
            let chart = parse_chart(&map, &p.chart, map.charts[0].chart)?;
            let (Some(c1), Some(c2)) = (p.c1, p.c2) else {
                return Err(CliError::Usage("preimages needs --c1 and --c2".into()));
            };
            let y = ChartPoint::new(chart, c1.c64(), c2.c64());
            let pre = preimages(&map, &y).map_err(domain)?;
            let bytes = csv_bytes(|w| {
                w.write_record(["chart", "c1_re", "c1_im", "c2_re", "c2_im", "residual"])?;
                for x in &pre {
                    let res = eval_in_chart(&map, x)
                        .and_then(|fx| to_chart(&fx, chart, &map))
                        .map(|fx| fx.dist(&y))
                        .unwrap_or(f64::NAN);
                    w.write_record([x.chart.to_string(), s(x.c1.re), s(x.c1.im), s(x.c2.re), s(x.c2.im), s(res)])?;
                }
                Ok(())
            })?;
            Ok(Artifact { bytes, plot: None, summary: format!("preimages: {} found", pre.len()) })
        }
        Command::Distortion(p) => {
            let kind = if p.kind.as_deref() == Some("vertical") {
                DistortionKind::Vertical
            } else {
                DistortionKind::Horizontal
            };
            let opts = DistortionOptions { kind, seed, ..Default::default() };
            let rep = distortion_check_with(p.gamma.unwrap(), p.eps.unwrap(), p.n.unwrap(), p.samples.unwrap(), &opts)
                .map_err(domain)?;
            let bytes = csv_bytes(|w| {
                w.write_record([
                    "kind",
                    "gamma",
                    "eps",
                    "n",
                    "samples",
                    "attempts",
                    "ratio_min",
                    "ratio_max",
                    "spread",
                ])?;
                w.write_record([
                    p.kind.clone().unwrap(),
                    rep.gamma.to_string(),
                    s(rep.eps),
                    rep.n_used.to_string(),
                    rep.samples.to_string(),
                    rep.attempts.to_string(),
                    s(rep.ratio_min),
                    s(rep.ratio_max),
                    s(rep.spread()),
                ])
            })?;
            Ok(Artifact {
                bytes,
                plot: None,
                summary: format!("distortion: spread {:e} over {} samples", rep.spread(), rep.samples),
            })
        }
        Command::Tension(p) => {
            let eps = p.eps.unwrap();
            let mut reps = Vec::new();
            for &k in p.k.as_ref().unwrap() {
                reps.push(tension_experiment(eps, k).map_err(domain)?);
            }
            let bytes = csv_bytes(|w| {
                w.write_record(["k", "n_k", "preorbit", "index", "ln_p", "ln_q"])?;
                for r in &reps {
                    for (name, orbit) in [("vertical", &r.vertical), ("horizontal", &r.horizontal)] {
                        for (i, pt) in orbit.iter().enumerate() {
                            w.write_record([
                                r.k.to_string(),
                                r.n_k.to_string(),
                                name.to_string(),
                                i.to_string(),
                                s(pt.ln_p),
                                s(pt.ln_q),
                            ])?;
                        }
                    }
                }
                Ok(())
            })?;
            let summary = reps
                .iter()
                .map(|r| format!("k={} horizontal {:e} vertical {:e}", r.k, r.horizontal_proxy, r.vertical_proxy))
                .collect::<Vec<_>>()
                .join("; ");
            Ok(Artifact { bytes, plot: None, summary: format!("tension: {summary}") })
        }
        Command::LyZeros(p) => {
            let cap = p.cap.unwrap();
            let opts = PullbackOptions { cap: (cap > 0).then_some(cap), rng_seed: seed };
            let theta = p.seed_theta.unwrap();
            let levels =
                pullback_levels(&seed_curve(theta, p.seed_points.unwrap()), p.level.unwrap(), &opts).map_err(domain)?;
            let last = levels.last().unwrap();
            let v = verify_zero_set(last, theta, 1e-6);
            let bytes = into_bytes(|b| last.write_csv(b))?;
            Ok(Artifact {
                bytes,
                plot: Some(PlotKind::Zeros),
                summary: format!(
                    "ly-zeros: level {} with {} points ({} dropped, {} failed targets); forward error max {:e}, {} above 1e-6",
                    last.level, last.points.len(), last.dropped, last.failures, v.max_error, v.n_over
                ),
            })
        }
        Command::LyDensity(p) => {
            let run = density_run(p.t0.unwrap(), p.leaves.unwrap(), &HolonomyOptions::default()).map_err(domain)?;
            let bytes = into_bytes(|b| run.histogram.write_csv(b))?;
            Ok(Artifact {
                bytes,
                plot: Some(PlotKind::Density),
                summary: format!(
                    "ly-density: {} leaves, {} failed, circular order preserved: {}",
                    run.histogram.n_samples, run.histogram.failures, run.order_preserved
                ),
            })
        }
    }
}

/// Dispatch and write the artifacts.
pub fn execute(eff: &Effective) -> Result<String, CliError> {
    if let Some(n) = eff.threads {
        // fails only when a pool already exists, e.g. in tests
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let art = dispatch(eff)?;
    match &eff.output_path {
        Some(out) => {
            write_atomic(out, &art.bytes).map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
            if eff.emit_svg {
                let kind = art.plot.ok_or_else(|| CliError::Usage(format!("{} has no plot", eff.command.name())))?;
                let text = String::from_utf8_lossy(&art.bytes);
                let svg = render_svg(&text, kind).map_err(domain)?;
                let p = svg_path(out);
                write_atomic(&p, svg.as_bytes()).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            }
        }
        None => {
            if eff.emit_svg {
                return Err(CliError::Usage("--svg needs --out".into()));
            }
            use std::io::Write;
            std::io::stdout().write_all(&art.bytes).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(art.summary)
}
