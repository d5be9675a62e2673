use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Characters,
    GaussSums,
    Pentagonal,
    ClassGroup,
    FareyArcs,
    MultiplierSample,
    WeaktypeFit,
    LemmaErrorScan,
    OperatorApply,
    RatioScan,
    SwCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

/// Coefficient stream of a multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    /// `a_n = 1`.
    Ones,
    /// `a_n = 1`, phase `n^k`.
    Power,
    /// A Dirichlet character (`--modulus`, `--character`).
    Character,
    /// Signs of Euler's pentagonal series.
    Pentagonal,
    /// Ideal counts of `Q(√D)` (`--disc`).
    IdealNorm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanKind {
    Theta,
    Euler,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Identity,
    Fractional,
    SteinWeiss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    Euclidean,
    Sup,
}

/// Run configuration, accepted as flags or as a JSON file (`--config`).
/// Flags override file values. Output location and thread count are not
/// part of the serialized config since they do not affect results.
#[derive(Debug, Clone, Default, PartialEq, Parser, Serialize, Deserialize)]
#[command(
    name = "multiplier-lab",
    version,
    about = "Multipliers, exponential sums and discrete fractional integrals",
    allow_negative_numbers = true
)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct RunConfig {
    #[arg(value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,

    /// JSON config file, or an artifact/sidecar that embeds one.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Artifact path; `-` writes to stdout.
    #[arg(short, long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, env = "MULTIPLIER_LAB_THREADS")]
    #[serde(skip)]
    pub threads: Option<usize>,

    /// Artifact format (default: from the output extension, else json).
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    /// Phase exponent `n^k`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    /// Position of the character in enumeration order (default: first
    /// primitive one).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub disc: Option<i64>,

    /// Grid size `G`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// Regularization override (default `G^{-2}`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_target: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_lo: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_hi: Option<f64>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,

    /// Farey level `j` (denominators up to `2^{j/2}`).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    /// Major-arc threshold as `num/den`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanKind>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moduli: Option<Vec<u64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_min: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_max: Option<u32>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_per_level: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub operator: Option<OperatorKind>,
    /// Lower corner of the input support box.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_lo: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_hi: Option<Vec<i64>>,
    /// Input values in row-major order (default: ones).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_lo: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_hi: Option<Vec<i64>>,

    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Factor dimensions `N_1,…,N_k` (default: all 1).
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<NormKind>,

    /// Box half-widths for ratio scans.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boxes: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub families: Option<Vec<String>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_scale: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_threshold: Option<f64>,
}

const MULTIPLIER: &[&str] = &["kind", "s", "k", "modulus", "character", "disc"];
const SW: &[&str] = &["alphas", "gamma", "delta", "p", "q", "dims", "norm"];

impl Command {
    /// Config keys the command reads, besides `command` and `format`.
    fn fields(self) -> Vec<&'static str> {
        let mut f: Vec<&'static str> = match self {
            Command::Characters | Command::GaussSums => vec!["modulus"],
            Command::Pentagonal => vec!["terms"],
            Command::ClassGroup => vec!["disc"],
            Command::FareyArcs => vec!["level", "threshold"],
            Command::MultiplierSample => [MULTIPLIER, &["grid", "epsilon"]].concat(),
            Command::WeaktypeFit => [MULTIPLIER, &["grid", "epsilon", "r-target", "alpha-lo", "alpha-hi"]].concat(),
            Command::LemmaErrorScan => vec![
                "scan",
                "moduli",
                "level-min",
                "level-max",
                "samples-per-level",
                "c1",
                "c2",
                "seed",
            ],
            Command::OperatorApply => [
                MULTIPLIER,
                SW,
                &["operator", "input-lo", "input-hi", "values", "window-lo", "window-hi"],
            ]
            .concat(),
            Command::RatioScan => [
                MULTIPLIER,
                SW,
                &["operator", "boxes", "families", "window-scale", "growth-threshold", "seed"],
            ]
            .concat(),
            Command::SwCheck => SW.to_vec(),
        };
        f.extend(["command", "format"]);
        f
    }
}

impl RunConfig {
    /// The serialized config as a JSON object (unset fields omitted).
    pub fn to_map(&self) -> Map<String, Value> {
        match serde_json::to_value(self).expect("config serializes") {
            Value::Object(m) => m,
            _ => unreachable!("config is a struct"),
        }
    }

    pub fn command(&self) -> Command {
        self.command.expect("resolved config has a command")
    }

    pub fn format(&self) -> Format {
        self.format.expect("resolved config has a format")
    }
}

/// Reads a config file. A file with a top-level `config` object (an artifact
/// or CSV sidecar) contributes that object.
fn load_file(path: &Path) -> CliResult<Map<String, Value>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: invalid JSON: {e}", path.display())))?;
    let value = match value {
        Value::Object(mut m) if m.get("config").is_some_and(Value::is_object) => m.remove("config").unwrap(),
        other => other,
    };
    match value {
        Value::Object(m) => Ok(m),
        _ => Err(CliError::usage(format!("{}: config must be a JSON object", path.display()))),
    }
}

/// Merges the config file under the flags, checks that every set field is
/// used by the command, and fills in the output format.
pub fn resolve(flags: RunConfig) -> CliResult<RunConfig> {
    let mut map = match &flags.config {
        Some(path) => load_file(path)?,
        None => Map::new(),
    };
    // Validates the file on its own so unknown keys are reported against it.
    serde_json::from_value::<RunConfig>(Value::Object(map.clone())).map_err(|e| CliError::usage(format!("config: {e}")))?;
    map.extend(flags.to_map());
    let mut cfg: RunConfig =
        serde_json::from_value(Value::Object(map)).map_err(|e| CliError::usage(format!("config: {e}")))?;
    cfg.output = flags.output;
    cfg.threads = flags.threads;
    let command = cfg
        .command
        .ok_or_else(|| CliError::usage("no command given (flag or `command` in the config file)"))?;
    let allowed = command.fields();
    let stray: Vec<String> = cfg.to_map().keys().filter(|k| !allowed.contains(&k.as_str())).cloned().collect();
    if !stray.is_empty() {
        let name = serde_json::to_value(command).unwrap();
        return Err(CliError::usage(format!(
            "{} does not use: {}",
            name.as_str().unwrap(),
            stray.iter().map(|k| format!("--{k}")).collect::<Vec<_>>().join(", ")
        )));
    }
    if cfg.output.is_none() {
        return Err(CliError::usage("missing --output"));
    }
    if cfg.format.is_none() {
        let csv = cfg
            .output
            .as_ref()
            .and_then(|p| p.extension())
            .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
        cfg.format = Some(if csv { Format::Csv } else { Format::Json });
    }
    if cfg.threads == Some(0) {
        return Err(CliError::usage("--threads must be >= 1"));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("multiplier-lab").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_parse_lists_and_negatives() {
        let c = parse(&["sw-check", "--alphas", "0.5,0.5", "--gamma", "-0.1", "--dims", "1,1", "-o", "x.json"]);
        assert_eq!(c.alphas, Some(vec![0.5, 0.5]));
        assert_eq!(c.gamma, Some(-0.1));
        let c = parse(&["class-group", "--disc", "-23", "-o", "x.json"]);
        assert_eq!(c.disc, Some(-23));
    }

    #[test]
    fn stray_fields_are_rejected() {
        let c = parse(&["class-group", "--disc", "-23", "--grid", "8", "-o", "x.json"]);
        let err = resolve(c).unwrap_err();
        assert!(err.to_string().contains("--grid"), "{err}");
    }

    #[test]
    fn format_follows_extension() {
        let c = resolve(parse(&["pentagonal", "-o", "a.CSV"])).unwrap();
        assert_eq!(c.format, Some(Format::Csv));
        let c = resolve(parse(&["pentagonal", "-o", "a.out"])).unwrap();
        assert_eq!(c.format, Some(Format::Json));
    }

    #[test]
    fn serialized_config_uses_kebab_keys() {
        let c = parse(&["weaktype-fit", "--r-target", "8", "--kind", "ideal-norm", "-o", "x"]);
        let m = c.to_map();
        assert_eq!(m["r-target"], 8.0);
        assert_eq!(m["kind"], "ideal-norm");
        assert_eq!(m["command"], "weaktype-fit");
        assert!(!m.contains_key("output"));
    }
}
