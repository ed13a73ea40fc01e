//! Run configuration. Flags and the JSON file describe the same thing: the
//! file's `params` table is read first, then every flag given on the command
//! line overrides its key. `--dump-config` prints the effective config with
//! all defaults filled in; feeding it back with `--config` repeats the run.

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::CliError;

pub const SUBCOMMANDS: [&str; 10] =
    ["phi", "region", "slice", "series", "probe", "preimages", "distortion", "tension", "ly-zeros", "ly-density"];

#[derive(Debug, Parser)]
#[command(name = "circlelab", version, about = "Dynamics near superattracting invariant circles")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// JSON run config; flags given here override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the effective config as JSON and exit without running.
    #[arg(long, global = true)]
    pub dump_config: bool,
    /// Catalog name (R, g, f, m, N) or path to a map JSON file.
    #[arg(long = "map", global = true)]
    pub map_name: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long = "out", global = true)]
    pub output_path: Option<PathBuf>,
    /// Also render <out>.svg.
    #[arg(long = "svg", global = true)]
    pub emit_svg: bool,
    #[arg(long, global = true)]
    pub rng_seed: Option<u64>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

/// A complex number: "re", "re,im" on the command line, [re, im] in JSON.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cx(pub f64, pub f64);

impl FromStr for Cx {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|e| format!("bad number '{p}': {e}"));
        match parts.as_slice() {
            [re] => Ok(Cx(num(re)?, 0.0)),
            [re, im] => Ok(Cx(num(re)?, num(im)?)),
            _ => Err(format!("expected re or re,im, got '{s}'")),
        }
    }
}

impl fmt::Display for Cx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0, self.1)
    }
}

impl Serialize for Cx {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0, self.1].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cx {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Pair([f64; 2]),
            Real(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Pair([re, im]) => Ok(Cx(re, im)),
            Raw::Real(re) => Ok(Cx(re, 0.0)),
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl Cx {
    pub fn c64(&self) -> circlelab_core::Complex64 {
        circlelab_core::Complex64::new(self.0, self.1)
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

macro_rules! params {
    ($(#[$m:meta])* $name:ident { $($(#[$fm:meta])* $field:ident : $ty:ty = $default:expr),* $(,)? }) => {
        $(#[$m])*
        #[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(
                $(#[$fm])*
                #[arg(long)]
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }

        impl $name {
            /// Every unset key replaced by its default.
            pub fn resolved(&self) -> Self {
                $name { $($field: self.$field.clone().or_else(|| $default),)* }
            }
        }
    };
}

params!(PhiParams {
    /// Line coordinate of a single point.
    z: Cx = None,
    /// Transverse coordinate of the point.
    w: Cx = Some(Cx(0.0, 0.0)),
    /// Chart of the point; the map's zero chart by default.
    chart: String = None,
    tol: f64 = Some(1e-12),
    n_max: usize = Some(200),
    /// Evaluate at this many random points of a validated region instead.
    samples: usize = None,
    /// Bound K used when searching the region for --samples.
    k: f64 = Some(0.5),
});

params!(RegionParams { k: f64 = Some(0.5), samples: usize = Some(20_000) });

params!(SliceParams {
    fiber: Cx = Some(Cx(0.0, 0.0)),
    thetas: usize = Some(64),
    tol: f64 = Some(1e-6),
    /// Radial bracket "lo,hi".
    bracket: Cx = Some(Cx(0.8, 1.2)),
    /// bisect (orbit classification) or psi (level set ψ = 0).
    method: String = Some("bisect".into()),
    psi_tol: f64 = Some(1e-12),
    budget: usize = Some(200),
});

params!(ProbeParams {
    order: usize = Some(64),
    #[arg(value_delimiter = ',')]
    radii: Vec<f64> = Some(vec![1.0]),
    w_max: f64 = Some(0.05),
    j_min: usize = Some(8),
    j_max: usize = None,
    /// mod-p (exact Laurent supports) or float.
    field: String = Some("mod-p".into()),
});

params!(PreimageParams {
    c1: Cx = None,
    c2: Cx = None,
    /// Chart of the target; the map's first chart by default.
    chart: String = None,
});

params!(DistortionParams {
    gamma: u32 = Some(3),
    eps: f64 = Some(0.05),
    n: usize = Some(4),
    samples: usize = Some(500),
    /// horizontal or vertical.
    kind: String = Some("horizontal".into()),
});

params!(TensionParams {
    eps: f64 = Some(0.1),
    #[arg(value_delimiter = ',')]
    k: Vec<usize> = Some(vec![2, 3, 4, 5, 6]),
});

params!(ZerosParams {
    seed_theta: f64 = Some(std::f64::consts::PI),
    seed_points: usize = Some(64),
    level: usize = Some(8),
    /// Points kept per level; 0 keeps all.
    cap: usize = Some(50_000),
});

params!(DensityParams { t0: f64 = Some(0.05), leaves: usize = Some(10_000) });

/// Series parameters; `--exact` asks for exact rational coefficients.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesParams {
    #[arg(long)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[arg(long)]
    #[serde(default, skip_serializing_if = "is_false")]
    pub exact: bool,
}

impl SeriesParams {
    pub fn resolved(&self) -> Self {
        SeriesParams { order: self.order.or(Some(24)), exact: self.exact }
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Böttcher function φ at a point or on a validated region.
    Phi(PhiParams),
    /// Search and validate a forward-invariant region.
    Region(RegionParams),
    /// Slice of the local stable manifold at one fiber.
    Slice(SliceParams),
    /// Power series of the stable manifold of a skew product.
    Series(SeriesParams),
    /// Laurent-bandwidth growth of the series coefficients.
    Probe(ProbeParams),
    /// All preimages of a target point.
    Preimages(PreimageParams),
    /// Distortion ratios near p∞.
    Distortion(DistortionParams),
    /// Horizontal and vertical preorbits near p∞.
    Tension(TensionParams),
    /// Lee-Yang zeros pulled back to a lattice level.
    #[command(name = "ly-zeros")]
    LyZeros(ZerosParams),
    /// Holonomy pushforward density μ_t.
    #[command(name = "ly-density")]
    LyDensity(DensityParams),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Phi(_) => "phi",
            Command::Region(_) => "region",
            Command::Slice(_) => "slice",
            Command::Series(_) => "series",
            Command::Probe(_) => "probe",
            Command::Preimages(_) => "preimages",
            Command::Distortion(_) => "distortion",
            Command::Tension(_) => "tension",
            Command::LyZeros(_) => "ly-zeros",
            Command::LyDensity(_) => "ly-density",
        }
    }

    pub fn default_map(&self) -> &'static str {
        match self {
            Command::Phi(_) | Command::Region(_) => "g",
            Command::Slice(_) | Command::Series(_) | Command::Probe(_) => "f",
            _ => "R",
        }
    }

    fn params_json(&self) -> serde_json::Value {
        let v = match self {
            Command::Phi(p) => serde_json::to_value(p),
            Command::Region(p) => serde_json::to_value(p),
            Command::Slice(p) => serde_json::to_value(p),
            Command::Series(p) => serde_json::to_value(p),
            Command::Probe(p) => serde_json::to_value(p),
            Command::Preimages(p) => serde_json::to_value(p),
            Command::Distortion(p) => serde_json::to_value(p),
            Command::Tension(p) => serde_json::to_value(p),
            Command::LyZeros(p) => serde_json::to_value(p),
            Command::LyDensity(p) => serde_json::to_value(p),
        };
        v.expect("params serialize")
    }

    /// The same subcommand with its parameters read from `v`.
    fn with_params(&self, v: serde_json::Value) -> Result<Command, serde_json::Error> {
        fn de<T: DeserializeOwned>(v: serde_json::Value) -> Result<T, serde_json::Error> {
            serde_json::from_value(v)
        }
        Ok(match self {
            Command::Phi(_) => Command::Phi(de(v)?),
            Command::Region(_) => Command::Region(de(v)?),
            Command::Slice(_) => Command::Slice(de(v)?),
            Command::Series(_) => Command::Series(de(v)?),
            Command::Probe(_) => Command::Probe(de(v)?),
            Command::Preimages(_) => Command::Preimages(de(v)?),
            Command::Distortion(_) => Command::Distortion(de(v)?),
            Command::Tension(_) => Command::Tension(de(v)?),
            Command::LyZeros(_) => Command::LyZeros(de(v)?),
            Command::LyDensity(_) => Command::LyDensity(de(v)?),
        })
    }

    fn resolved(&self) -> Command {
        match self {
            Command::Phi(p) => Command::Phi(p.resolved()),
            Command::Region(p) => Command::Region(p.resolved()),
            Command::Slice(p) => Command::Slice(p.resolved()),
            Command::Series(p) => Command::Series(p.resolved()),
            Command::Probe(p) => Command::Probe(p.resolved()),
            Command::Preimages(p) => Command::Preimages(p.resolved()),
            Command::Distortion(p) => Command::Distortion(p.resolved()),
            Command::Tension(p) => Command::Tension(p.resolved()),
            Command::LyZeros(p) => Command::LyZeros(p.resolved()),
            Command::LyDensity(p) => Command::LyDensity(p.resolved()),
        }
    }
}

/// The JSON config file.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub subcommand: String,
    #[serde(default)]
    pub map_name: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub emit_svg: bool,
    #[serde(default)]
    pub rng_seed: Option<u64>,
    #[serde(default)]
    pub threads: Option<usize>,
}

/// Everything a run needs, defaults filled in.
#[derive(Debug, Clone)]
pub struct Effective {
    pub command: Command,
    pub map_name: String,
    pub output_path: Option<PathBuf>,
    pub emit_svg: bool,
    pub rng_seed: u64,
    pub threads: Option<usize>,
}

impl Effective {
    pub fn to_config(&self) -> RunConfig {
        let params = match self.command.params_json() {
            serde_json::Value::Object(m) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        RunConfig {
            subcommand: self.command.name().into(),
            map_name: Some(self.map_name.clone()),
            params,
            output_path: self.output_path.clone(),
            emit_svg: self.emit_svg,
            rng_seed: Some(self.rng_seed),
            threads: self.threads,
        }
    }
}

pub fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}

/// File config overlaid with the command-line flags.
pub fn effective(cli: &Cli) -> Result<Effective, CliError> {
    let file = match &cli.common.config {
        Some(p) => Some(load_config(p)?),
        None => None,
    };
    let name = cli.command.name();
    let mut params = serde_json::Map::new();
    if let Some(f) = &file {
        if f.subcommand != name {
            return Err(CliError::Usage(format!("config is for '{}', not '{name}'", f.subcommand)));
        }
        params.extend(f.params.clone());
    }
    if let serde_json::Value::Object(flags) = cli.command.params_json() {
        params.extend(flags);
    }
    let command = cli
        .command
        .with_params(serde_json::Value::Object(params))
        .map_err(|e| CliError::Usage(format!("params: {e}")))?
        .resolved();
    let c = &cli.common;
    let f = file.unwrap_or_default();
    let eff = Effective {
        command,
        map_name: c.map_name.clone().or(f.map_name).unwrap_or_else(|| cli.command.default_map().into()),
        output_path: c.output_path.clone().or(f.output_path),
        emit_svg: c.emit_svg || f.emit_svg,
        rng_seed: c.rng_seed.or(f.rng_seed).unwrap_or(0),
        threads: c.threads.or(f.threads),
    };
    validate(&eff)?;
    Ok(eff)
}

fn positive(name: &str, v: Option<f64>) -> Result<(), CliError> {
    match v {
        Some(x) if !(x > 0.0 && x.is_finite()) => {
            Err(CliError::Usage(format!("{name} must be a positive number, got {x}")))
        }
        _ => Ok(()),
    }
}

/// Schema-level checks: tolerances positive, enumerations known.
fn validate(e: &Effective) -> Result<(), CliError> {
    let one_of = |name: &str, v: &Option<String>, allowed: &[&str]| match v {
        Some(s) if !allowed.contains(&s.as_str()) => {
            Err(CliError::Usage(format!("{name} must be one of {}, got '{s}'", allowed.join(", "))))
        }
        _ => Ok(()),
    };
    if e.threads == Some(0) {
        return Err(CliError::Usage("threads must be at least 1".into()));
    }
    match &e.command {
        Command::Phi(p) => positive("tol", p.tol)?,
        Command::Slice(p) => {
            positive("tol", p.tol)?;
            positive("psi_tol", p.psi_tol)?;
            one_of("method", &p.method, &["bisect", "psi"])?;
        }
        Command::Probe(p) => {
            positive("w_max", p.w_max)?;
            one_of("field", &p.field, &["mod-p", "float"])?;
        }
        Command::Distortion(p) => {
            positive("eps", p.eps)?;
            one_of("kind", &p.kind, &["horizontal", "vertical"])?;
        }
        Command::Tension(p) => positive("eps", p.eps)?,
        _ => {}
    }
    Ok(())
}
