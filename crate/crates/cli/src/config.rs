//! Run configuration: flags, an optional key=value file, defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use sha2::{Digest, Sha256};

use polycld::engine::Method;
use polycld::mesh::MeshFormat;

use crate::RunArgs;

pub enum Failure {
    /// Bad flags or configuration; exit code 2.
    Usage(String),
    /// Validation, computation or I/O failure; exit code 1.
    Run(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub format: Option<MeshFormat>,
    pub method: Method,
    pub points: usize,
    pub r_min: Option<f64>,
    pub r_max: Option<f64>,
    pub auto_breakpoints: bool,
    pub samples: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub tolerance: f64,
    pub threads: Option<usize>,
}

const KEYS: [&str; 13] = [
    "input",
    "format",
    "method",
    "points",
    "r_min",
    "r_max",
    "auto_breakpoints",
    "samples",
    "seed",
    "output",
    "output_format",
    "tolerance",
    "threads",
];

pub fn parse_format(s: Option<&str>) -> Result<Option<MeshFormat>, Failure> {
    match s.map(|x| x.to_ascii_lowercase()) {
        None => Ok(None),
        Some(x) if x == "off" => Ok(Some(MeshFormat::Off)),
        Some(x) if x == "obj" => Ok(Some(MeshFormat::Obj)),
        Some(x) => Err(Failure::Usage(format!("unknown mesh format '{x}' (expected off or obj)"))),
    }
}

/// `key = value` lines; `#` starts a comment.
fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(Failure::Usage(format!("{}:{}: expected key = value", path.display(), i + 1)));
        };
        let k = k.trim().replace('-', "_");
        if !KEYS.contains(&k.as_str()) {
            return Err(Failure::Usage(format!("{}:{}: unknown key '{k}' (known: {})", path.display(), i + 1, KEYS.join(", "))));
        }
        out.insert(k, v.trim().to_string());
    }
    Ok(out)
}

fn parsed<T: FromStr>(file: &BTreeMap<String, String>, key: &str) -> Result<Option<T>, Failure> {
    file.get(key)
        .map(|v| v.parse::<T>().map_err(|_| Failure::Usage(format!("config key '{key}': cannot parse '{v}'"))))
        .transpose()
}

impl RunConfig {
    /// Flags win over the config file, which wins over defaults.
    pub fn resolve(args: RunArgs, threads: Option<usize>) -> Result<RunConfig, Failure> {
        let (file, base) = match &args.config {
            Some(p) => (read_config_file(p)?, p.parent().map(Path::to_path_buf).unwrap_or_default()),
            None => (BTreeMap::new(), PathBuf::new()),
        };
        let from_file = |key: &str| file.get(key).map(|v| base.join(v));
        let input = args
            .input
            .or_else(|| from_file("input"))
            .ok_or_else(|| Failure::Usage("no input mesh given (positional argument or 'input' in --config)".into()))?;
        let format = parse_format(args.format.as_deref().or(file.get("format").map(String::as_str)))?;
        let method = match args.method.as_deref().or(file.get("method").map(String::as_str)) {
            None => Method::Auto,
            Some(m) => Method::from_str(m).map_err(|e| Failure::Usage(e.to_string()))?,
        };
        let output_format = match args
            .output_format
            .as_deref()
            .or(file.get("output_format").map(String::as_str))
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            None | Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(x) => return Err(Failure::Usage(format!("unknown output format '{x}' (expected csv or json)"))),
        };
        let cfg = RunConfig {
            input,
            format,
            method,
            points: args.points.or(parsed(&file, "points")?).unwrap_or(400),
            r_min: args.r_min.or(parsed(&file, "r_min")?),
            r_max: args.r_max.or(parsed(&file, "r_max")?),
            auto_breakpoints: args.auto_breakpoints.or(parsed(&file, "auto_breakpoints")?).unwrap_or(true),
            samples: args.samples.or(parsed(&file, "samples")?).unwrap_or(1_000_000),
            seed: args.seed.or(parsed(&file, "seed")?).unwrap_or(1),
            output: args.output.or_else(|| from_file("output")),
            output_format,
            tolerance: args.tolerance.or(parsed(&file, "tolerance")?).unwrap_or(1e-6),
            threads: threads.or(parsed(&file, "threads")?),
        };
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<(), Failure> {
        let usage = |m: String| Err(Failure::Usage(m));
        if self.points == 0 {
            return usage("points must be at least 1".into());
        }
        for (name, v) in [("r_min", self.r_min), ("r_max", self.r_max)] {
            if let Some(v) = v {
                if !v.is_finite() || v < 0.0 {
                    return usage(format!("{name} must be a non-negative number, got {v}"));
                }
            }
        }
        if let (Some(lo), Some(hi)) = (self.r_min, self.r_max) {
            if hi <= lo {
                return usage(format!("r_max ({hi}) must exceed r_min ({lo})"));
            }
        }
        if self.r_max == Some(0.0) {
            return usage("r_max must be positive".into());
        }
        if self.samples == 0 {
            return usage("samples must be at least 1".into());
        }
        if !(self.tolerance > 0.0) {
            return usage(format!("tolerance must be positive, got {}", self.tolerance));
        }
        if self.threads == Some(0) {
            return usage("threads must be at least 1".into());
        }
        Ok(())
    }

    /// Settings that determine the output, in a fixed order. The output
    /// path and thread count are left out: neither changes the numbers.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_else(|| "auto".into());
        vec![
            ("input".into(), self.input.display().to_string()),
            (
                "format".into(),
                match self.format {
                    None => "auto",
                    Some(MeshFormat::Off) => "off",
                    Some(MeshFormat::Obj) => "obj",
                }
                .into(),
            ),
            ("method".into(), self.method.as_str().into()),
            ("points".into(), self.points.to_string()),
            ("r_min".into(), opt(self.r_min)),
            ("r_max".into(), opt(self.r_max)),
            ("auto_breakpoints".into(), self.auto_breakpoints.to_string()),
            ("samples".into(), self.samples.to_string()),
            ("seed".into(), self.seed.to_string()),
            (
                "output_format".into(),
                match self.output_format {
                    OutputFormat::Csv => "csv",
                    OutputFormat::Json => "json",
                }
                .into(),
            ),
            ("tolerance".into(), format!("{:e}", self.tolerance)),
        ]
    }

    /// SHA-256 of the `key=value` lines from [`RunConfig::pairs`].
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in self.pairs() {
            h.update(format!("{k}={v}\n").as_bytes());
        }
        hex::encode(h.finalize())
    }
}
