//! Deterministic SVG plots of CSV artifacts on a fixed 800×800 canvas.
//!
//! Axis mappings (pixel y grows downward):
//! - slice: the point r·e^{iθ} at x = 400 + 250·Re, y = 400 − 250·Im, so the
//!   unit circle (drawn dashed) has radius 250 px; the curve is closed.
//! - density: bins over [0, 2π) on x ∈ [60, 740]; mass on y, the largest
//!   bin reaching y = 60 from the baseline y = 740.
//! - zeros: θ ∈ [0, 2π) on x ∈ [60, 740], t ∈ [0, 1] on y ∈ [740, 60].
//! - probe: ln j on x, ln(bandwidth + 1) on y, both scaled to [60, 740].
//! Coordinates are printed with two decimals, so equal input bytes give
//! equal output bytes.

use std::f64::consts::TAU;
use std::fmt::Write;
use std::str::FromStr;

pub const SIZE: f64 = 800.0;
const LO: f64 = 60.0;
const HI: f64 = 740.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    Slice,
    Density,
    Zeros,
    Probe,
}

impl FromStr for PlotKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "slice" => Ok(PlotKind::Slice),
            "density" => Ok(PlotKind::Density),
            "zeros" => Ok(PlotKind::Zeros),
            "probe" => Ok(PlotKind::Probe),
            _ => Err(format!("unknown plot kind '{s}'")),
        }
    }
}

impl PlotKind {
    fn columns(&self) -> &'static [&'static str] {
        match self {
            PlotKind::Slice => &["theta", "radius"],
            PlotKind::Density => &["bin_lo", "bin_hi", "mass"],
            PlotKind::Zeros => &["level", "theta", "t"],
            PlotKind::Probe => &["j", "bandwidth"],
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SvgError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("schema mismatch: expected columns {expected:?}, got {got:?}")]
    Schema { expected: Vec<String>, got: Vec<String> },
    #[error("bad value '{0}'")]
    Value(String),
}

/// The columns a kind needs, as f64 rows. Extra trailing columns are allowed
/// (the probe CSV carries one ρ column per radius).
fn read_columns(csv_text: &str, kind: PlotKind) -> Result<Vec<Vec<f64>>, SvgError> {
    let mut rd = csv::Reader::from_reader(csv_text.as_bytes());
    let head: Vec<String> = rd.headers()?.iter().map(String::from).collect();
    let want = kind.columns();
    if head.len() < want.len() || head.iter().zip(want).any(|(h, w)| h != w) {
        return Err(SvgError::Schema { expected: want.iter().map(|s| s.to_string()).collect(), got: head });
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let row = (0..want.len())
            .map(|i| rec[i].parse::<f64>().map_err(|_| SvgError::Value(rec[i].to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(rows)
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="400" y="30" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>"#
    );
    s
}

fn frame(s: &mut String) {
    let _ =
        writeln!(s, r#"<rect x="{LO}" y="{LO}" width="{w}" height="{w}" fill="none" stroke="black"/>"#, w = HI - LO);
}

fn lin(v: f64, a: f64, b: f64) -> f64 {
    if b > a {
        LO + (HI - LO) * (v - a) / (b - a)
    } else {
        0.5 * (LO + HI)
    }
}

pub fn render_svg(csv_text: &str, kind: PlotKind) -> Result<String, SvgError> {
    let rows = read_columns(csv_text, kind)?;
    let mut s;
    match kind {
        PlotKind::Slice => {
            s = header("stable manifold slice");
            let _ =
                writeln!(s, r#"<circle cx="400" cy="400" r="250" fill="none" stroke="gray" stroke-dasharray="4 4"/>"#);
            let pts: Vec<String> = rows
                .iter()
                .map(|r| format!("{:.2},{:.2}", 400.0 + 250.0 * r[1] * r[0].cos(), 400.0 - 250.0 * r[1] * r[0].sin()))
                .collect();
            let _ = writeln!(s, r#"<polygon points="{}" fill="none" stroke="blue"/>"#, pts.join(" "));
        }
        PlotKind::Density => {
            s = header("density on [0, 2π)");
            frame(&mut s);
            let top = rows.iter().map(|r| r[2]).fold(0.0, f64::max);
            for r in &rows {
                let (x0, x1) = (lin(r[0], 0.0, TAU), lin(r[1], 0.0, TAU));
                let h = if top > 0.0 { (HI - LO) * r[2] / top } else { 0.0 };
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="steelblue"/>"#,
                    x0,
                    HI - h,
                    (x1 - x0).max(0.0),
                    h
                );
            }
        }
        PlotKind::Zeros => {
            s = header("zeros on the cylinder");
            frame(&mut s);
            for r in &rows {
                let (x, y) = (lin(r[1], 0.0, TAU), HI + LO - lin(r[2], 0.0, 1.0));
                let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1" fill="black"/>"#);
            }
        }
        PlotKind::Probe => {
            s = header("Laurent bandwidth growth");
            frame(&mut s);
            let pts: Vec<(f64, f64)> =
                rows.iter().filter(|r| r[0] >= 1.0).map(|r| (r[0].ln(), (r[1].max(0.0) + 1.0).ln())).collect();
            let xmax = pts.iter().map(|p| p.0).fold(0.0, f64::max);
            let ymax = pts.iter().map(|p| p.1).fold(0.0, f64::max);
            for (x, y) in pts {
                let (px, py) = (lin(x, 0.0, xmax), HI + LO - lin(y, 0.0, ymax));
                let _ = writeln!(s, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="darkred"/>"#);
            }
        }
    }
    s.push_str("</svg>\n");
    Ok(s)
}
