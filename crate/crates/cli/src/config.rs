//! Flag and config-file resolution into a validated run configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;
use serde_json::Value;
use spintunnel::angle::HamiltonianForm;
use spintunnel::spectral::SolverConfig;
use spintunnel::{Preset, SpinParams, Unit};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "SPINTUNNEL_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PresetKind {
    Lipkin,
    Mn12,
    Fe8,
}

impl PresetKind {
    fn name(self) -> &'static str {
        match self {
            PresetKind::Lipkin => "lipkin",
            PresetKind::Mn12 => "mn12",
            PresetKind::Fe8 => "fe8",
        }
    }

    /// Parameter names with their defaults.
    fn defaults(self) -> &'static [(&'static str, f64)] {
        match self {
            PresetKind::Lipkin => &[("chi", 1.0), ("Ns", 20.0)],
            PresetKind::Mn12 => &[("D", 0.6), ("S", 10.0), ("h", 0.0)],
            PresetKind::Fe8 => &[("D", 0.275), ("E", 0.046), ("S", 10.0)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FormArg {
    Full,
    Wigner,
    Closed,
}

impl From<FormArg> for HamiltonianForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Full => HamiltonianForm::FullSum,
            FormArg::Wigner => HamiltonianForm::WignerNumeric,
            FormArg::Closed => HamiltonianForm::LargeNClosed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitArg {
    Kelvin,
    Epsilon,
}

impl From<UnitArg> for Unit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Kelvin => Unit::Kelvin,
            UnitArg::Epsilon => Unit::Epsilon,
        }
    }
}

/// Flags shared by every model command.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Named model.
    #[arg(long, value_enum)]
    pub preset: Option<PresetKind>,
    /// Raw mode: coefficient of Jz.
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<f64>,
    /// Raw mode: coefficient of Jz².
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Raw mode: coefficient of J+² + J-².
    #[arg(long = "G", allow_hyphen_values = true)]
    pub g: Option<f64>,
    /// Raw mode: spin quantum number.
    #[arg(long = "j")]
    pub j: Option<f64>,
    /// Raw mode: energy unit.
    #[arg(long, value_enum)]
    pub unit: Option<UnitArg>,

    /// Lipkin coupling; `a:b:step` ranges are accepted by `sweep`.
    #[arg(long)]
    pub chi: Option<String>,
    /// Lipkin particle number (even).
    #[arg(long = "Ns")]
    pub ns: Option<String>,
    /// Axial anisotropy in Kelvin (Mn12, Fe8).
    #[arg(long = "D")]
    pub d: Option<String>,
    /// Rhombic anisotropy in Kelvin (Fe8).
    #[arg(long = "E")]
    pub e: Option<String>,
    /// Molecular spin (Mn12, Fe8).
    #[arg(long = "S")]
    pub s: Option<String>,
    /// Parallel field over the saturation field (Mn12).
    #[arg(long = "h")]
    pub h: Option<String>,

    /// Angle-Hamiltonian route; defaults to `closed` for presets and `full`
    /// for raw parameters.
    #[arg(long, value_enum)]
    pub form: Option<FormArg>,
    /// Plane-wave cutoff of the angle solver.
    #[arg(long)]
    pub nmax: Option<usize>,
    /// Sample points (per axis for `kernels`).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of eigenvalues written.
    #[arg(long)]
    pub count: Option<usize>,
    /// Output file; defaults to `$SPINTUNNEL_OUT_DIR/<command>_<model>.<ext>`
    /// when that variable is set, else stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON file with any of the above keys; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Keys accepted in a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    preset: Option<PresetKind>,
    #[serde(rename = "A")]
    a: Option<f64>,
    #[serde(rename = "B")]
    b: Option<f64>,
    #[serde(rename = "G")]
    g: Option<f64>,
    j: Option<f64>,
    unit: Option<UnitArg>,
    chi: Option<Value>,
    #[serde(rename = "Ns")]
    ns: Option<Value>,
    #[serde(rename = "D")]
    d: Option<Value>,
    #[serde(rename = "E")]
    e: Option<Value>,
    #[serde(rename = "S")]
    s: Option<Value>,
    h: Option<Value>,
    form: Option<FormArg>,
    nmax: Option<usize>,
    grid: Option<usize>,
    count: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
}

/// A user-facing configuration problem (exit code 2).
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

fn value_to_string(v: &Value) -> Result<String, ConfigError> {
    match v {
        Value::Number(n) => Ok(n.to_string()),
        Value::String(s) => Ok(s.clone()),
        other => config_err(format!("expected a number or range string, got {other}")),
    }
}

impl RunArgs {
    /// Flags layered over the config file, if any.
    pub fn merged(&self) -> Result<RunArgs, ConfigError> {
        let Some(path) = &self.config else {
            return Ok(self.clone());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let file: FileConfig = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))?;
        let s =
            |flag: &Option<String>, file: &Option<Value>| -> Result<Option<String>, ConfigError> {
                match (flag, file) {
                    (Some(f), _) => Ok(Some(f.clone())),
                    (None, Some(v)) => value_to_string(v).map(Some),
                    (None, None) => Ok(None),
                }
            };
        Ok(RunArgs {
            preset: self.preset.or(file.preset),
            a: self.a.or(file.a),
            b: self.b.or(file.b),
            g: self.g.or(file.g),
            j: self.j.or(file.j),
            unit: self.unit.or(file.unit),
            chi: s(&self.chi, &file.chi)?,
            ns: s(&self.ns, &file.ns)?,
            d: s(&self.d, &file.d)?,
            e: s(&self.e, &file.e)?,
            s: s(&self.s, &file.s)?,
            h: s(&self.h, &file.h)?,
            form: self.form.or(file.form),
            nmax: self.nmax.or(file.nmax),
            grid: self.grid.or(file.grid),
            count: self.count.or(file.count),
            out: self.out.clone().or(file.out),
            format: self.format.or(file.format),
            config: None,
        })
    }

    fn preset_values(&self) -> [(&'static str, &Option<String>); 6] {
        [
            ("chi", &self.chi),
            ("Ns", &self.ns),
            ("D", &self.d),
            ("E", &self.e),
            ("S", &self.s),
            ("h", &self.h),
        ]
    }
}

/// One value or an inclusive `a:b:step` range.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamSpec {
    Single(f64),
    Range(Vec<f64>),
}

pub fn parse_param(name: &str, text: &str) -> Result<ParamSpec, ConfigError> {
    let num = |t: &str| -> Result<f64, ConfigError> {
        let v: f64 = t
            .trim()
            .parse()
            .map_err(|_| ConfigError(format!("--{name}: '{t}' is not a number")))?;
        if v.is_finite() {
            Ok(v)
        } else {
            config_err(format!("--{name}: '{t}' is not finite"))
        }
    };
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(ParamSpec::Single(num(one)?)),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if step <= 0.0 || b < a {
                return config_err(format!(
                    "--{name}: range {text} needs start <= end and step > 0"
                ));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize + 1;
            if count > 100_000 {
                return config_err(format!("--{name}: range {text} has too many points"));
            }
            Ok(ParamSpec::Range(
                (0..count).map(|i| a + i as f64 * step).collect(),
            ))
        }
        _ => config_err(format!(
            "--{name}: expected a number or start:end:step, got '{text}'"
        )),
    }
}

/// Model selected on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Preset {
        kind: PresetKind,
        params: BTreeMap<&'static str, ParamSpec>,
    },
    Raw(SpinParams),
}

fn to_u32(name: &str, v: f64) -> Result<u32, ConfigError> {
    if v >= 0.0 && v.fract() == 0.0 && v <= f64::from(u32::MAX) {
        Ok(v as u32)
    } else {
        config_err(format!("{name} must be a non-negative integer, got {v}"))
    }
}

impl ModelSpec {
    pub fn from_args(args: &RunArgs) -> Result<Self, ConfigError> {
        let raw_given = [args.a, args.b, args.g, args.j].iter().any(Option::is_some);
        match (args.preset, raw_given) {
            (Some(_), true) => config_err("give either --preset or raw --A/--B/--G/--j, not both"),
            (None, false) => {
                config_err("a model is required: --preset {lipkin|mn12|fe8} or --A --B --G --j")
            }
            (None, true) => {
                if let Some((name, _)) = args.preset_values().iter().find(|(_, v)| v.is_some()) {
                    return config_err(format!("--{name} needs --preset"));
                }
                let Some(j) = args.j else {
                    return config_err("raw mode needs --j");
                };
                let p = SpinParams::new(
                    args.a.unwrap_or(0.0),
                    args.b.unwrap_or(0.0),
                    args.g.unwrap_or(0.0),
                    j,
                    args.unit.map_or(Unit::Kelvin, Unit::from),
                );
                let problems = p.validate();
                if !problems.is_empty() {
                    return config_err(format!("invalid spin parameters: {}", problems.join("; ")));
                }
                Ok(ModelSpec::Raw(p))
            }
            (Some(kind), false) => {
                if args.unit.is_some() {
                    return config_err("--unit applies to raw parameters only");
                }
                let allowed = kind.defaults();
                let mut params: BTreeMap<&'static str, ParamSpec> = allowed
                    .iter()
                    .map(|&(k, v)| (k, ParamSpec::Single(v)))
                    .collect();
                for (name, value) in args.preset_values() {
                    let Some(text) = value else { continue };
                    if !allowed.iter().any(|(k, _)| *k == name) {
                        return config_err(format!(
                            "--{name} does not apply to the {} preset",
                            kind.name()
                        ));
                    }
                    params.insert(name, parse_param(name, text)?);
                }
                Ok(ModelSpec::Preset { kind, params })
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Preset { kind, .. } => kind.name(),
            ModelSpec::Raw(_) => "raw",
        }
    }

    /// The one ranged parameter, if any.
    pub fn range(&self) -> Result<Option<(&'static str, Vec<f64>)>, ConfigError> {
        let ModelSpec::Preset { params, .. } = self else {
            return Ok(None);
        };
        let ranges: Vec<_> = params
            .iter()
            .filter_map(|(k, v)| match v {
                ParamSpec::Range(r) => Some((*k, r.clone())),
                ParamSpec::Single(_) => None,
            })
            .collect();
        match ranges.len() {
            0 => Ok(None),
            1 => Ok(ranges.into_iter().next()),
            _ => config_err("only one parameter may be given as a range"),
        }
    }

    /// The preset with `override_` (name, value) substituted.
    pub fn preset_with(&self, override_: Option<(&str, f64)>) -> Result<Preset, ConfigError> {
        let ModelSpec::Preset { kind, params } = self else {
            return config_err("this command needs --preset");
        };
        let get = |name: &str| -> Result<f64, ConfigError> {
            if let Some((k, v)) = override_ {
                if k == name {
                    return Ok(v);
                }
            }
            match params.get(name) {
                Some(ParamSpec::Single(v)) => Ok(*v),
                Some(ParamSpec::Range(_)) => config_err(format!(
                    "--{name}: ranges are only accepted by the sweep command"
                )),
                None => config_err(format!("missing --{name}")),
            }
        };
        let preset = match kind {
            PresetKind::Lipkin => Preset::Lipkin {
                chi: get("chi")?,
                ns: to_u32("Ns", get("Ns")?)?,
            },
            PresetKind::Mn12 => Preset::Mn12 {
                d: get("D")?,
                s: to_u32("S", get("S")?)?,
                h: get("h")?,
            },
            PresetKind::Fe8 => Preset::Fe8 {
                d: get("D")?,
                e: get("E")?,
                s: to_u32("S", get("S")?)?,
            },
        };
        preset.check().map_err(|e| ConfigError(e.to_string()))?;
        Ok(preset)
    }

    pub fn params(&self) -> Result<SpinParams, ConfigError> {
        match self {
            ModelSpec::Raw(p) => Ok(*p),
            ModelSpec::Preset { .. } => self
                .preset_with(None)?
                .to_spin_params()
                .map_err(|e| ConfigError(e.to_string())),
        }
    }
}

/// Fully resolved options of a model command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelSpec,
    pub form: HamiltonianForm,
    pub solver: SolverConfig,
    pub grid: Option<usize>,
    pub count: Option<usize>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn resolve(args: &RunArgs, command: &str) -> Result<Self, ConfigError> {
        let args = args.merged()?;
        let model = ModelSpec::from_args(&args)?;
        let form = match (args.form, &model) {
            (Some(FormArg::Closed), ModelSpec::Raw(_)) => {
                return config_err("--form closed is only defined for presets");
            }
            (Some(f), _) => f.into(),
            (None, ModelSpec::Preset { .. }) => HamiltonianForm::LargeNClosed,
            (None, ModelSpec::Raw(_)) => HamiltonianForm::FullSum,
        };
        let mut solver = SolverConfig::with_cutoff(args.nmax.unwrap_or(64));
        solver.eig_count = args.count;
        solver.validate().map_err(|e| ConfigError(e.to_string()))?;
        if args.grid == Some(0) || args.count == Some(0) {
            return config_err("--grid and --count must be positive");
        }
        let format = args.format.unwrap_or(Format::Csv);
        let out = args.out.or_else(|| {
            std::env::var_os(OUT_DIR_ENV).map(|dir| {
                Path::new(&dir).join(format!("{command}_{}.{}", model.name(), format.extension()))
            })
        });
        Ok(Self {
            model,
            form,
            solver,
            grid: args.grid,
            count: args.count,
            out,
            format,
        })
    }
}
