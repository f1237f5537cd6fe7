//! Run configuration: optional key=value file named by `PLEXUS_CONFIG`,
//! overridden by command-line flags.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use plexus::basis::DEFAULT_BIT_BUDGET;
use plexus::yang::SignatureMode;

pub const CONFIG_ENV: &str = "PLEXUS_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// Flags shared by every command. `None` means "not given on the command
/// line"; the config file and then the built-in defaults fill in.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct GlobalArgs {
    /// Stage for the stage-wise checks.
    #[arg(long, global = true)]
    pub stage: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Numeric tolerance (binary64 checks, slope fits).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Bit budget for materialized serial numbers.
    #[arg(long, global = true)]
    pub bit_budget: Option<u64>,
    /// Yang signature mode: 3-3-compact-i or alt.
    #[arg(long, global = true)]
    pub signature: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub stage: Option<usize>,
    pub seed: u64,
    pub tolerance: Option<f64>,
    pub bit_budget: u64,
    pub signature: SignatureMode,
    pub format: Format,
    pub sweep: Vec<u64>,
}

fn parse_file(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config line {}: expected key=value", i + 1))?;
        out.insert(k.trim().replace('-', "_"), v.trim().to_string());
    }
    Ok(out)
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("config: bad value `{v}` for {key}"))
}

pub fn parse_list(v: &str) -> Result<Vec<u64>, String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad sweep point `{s}`")))
        .collect()
}

impl RunConfig {
    pub fn resolve(args: &GlobalArgs) -> Result<RunConfig, String> {
        let file = match std::env::var_os(CONFIG_ENV) {
            Some(path) => {
                let path = Path::new(&path);
                let text = fs::read_to_string(path).map_err(|e| format!("config {}: {e}", path.display()))?;
                parse_file(&text)?
            }
            None => BTreeMap::new(),
        };
        for key in file.keys() {
            if !["stage", "seed", "tolerance", "bit_budget", "signature", "format", "sweep"].contains(&key.as_str()) {
                return Err(format!("config: unknown key `{key}`"));
            }
        }
        let get = |k: &str| file.get(k).map(String::as_str);

        let stage = match (args.stage, get("stage")) {
            (Some(s), _) => Some(s),
            (None, Some(v)) => Some(parse("stage", v)?),
            (None, None) => None,
        };
        let seed = match (args.seed, get("seed")) {
            (Some(s), _) => s,
            (None, Some(v)) => parse("seed", v)?,
            (None, None) => 0,
        };
        let tolerance = match (args.tolerance, get("tolerance")) {
            (Some(t), _) => Some(t),
            (None, Some(v)) => Some(parse("tolerance", v)?),
            (None, None) => None,
        };
        if let Some(t) = tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(format!("tolerance must be positive, got {t}"));
            }
        }
        let bit_budget = match (args.bit_budget, get("bit_budget")) {
            (Some(b), _) => b,
            (None, Some(v)) => parse("bit_budget", v)?,
            (None, None) => DEFAULT_BIT_BUDGET,
        };
        let signature = match args.signature.as_deref().or(get("signature")) {
            Some(v) => v.parse().map_err(|e: plexus::PlexusError| e.to_string())?,
            None => SignatureMode::default(),
        };
        let format = match (args.format, get("format")) {
            (Some(f), _) => f,
            (None, Some(v)) => v.parse()?,
            (None, None) => Format::Text,
        };
        let sweep = match get("sweep") {
            Some(v) => parse_list(v)?,
            None => Vec::new(),
        };
        Ok(RunConfig { stage, seed, tolerance, bit_budget, signature, format, sweep })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_syntax() {
        let m = parse_file("# comment\nseed = 7\nbit-budget=64\n").unwrap();
        assert_eq!(m["seed"], "7");
        assert_eq!(m["bit_budget"], "64");
        assert!(parse_file("nonsense").is_err());
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list("16, 64,256").unwrap(), vec![16, 64, 256]);
        assert!(parse_list("16,x").is_err());
    }
}
