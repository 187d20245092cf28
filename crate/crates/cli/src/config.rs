use std::fmt;
use std::path::Path;

use negbeta::beta::parse_rational;
use negbeta::interval::pow2;
use num_rational::BigRational;
use num_traits::Zero;

pub const CONFIG_ENV: &str = "NEGBETA_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub precision_bits: u32,
    pub tol: BigRational,
    pub max_depth: usize,
    pub u_depth: usize,
    pub output: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            precision_bits: 256,
            tol: pow2(-40),
            max_depth: 4096,
            u_depth: 256,
            output: OutputFormat::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Settings given on the command line; `None` leaves the file or default
/// value in place.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub precision_bits: Option<u32>,
    pub tol: Option<BigRational>,
    pub max_depth: Option<usize>,
    pub u_depth: Option<usize>,
    pub output: Option<OutputFormat>,
}

/// Reads a tolerance written as a decimal, a fraction, or `2^-k`.
pub fn parse_tol(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let tol = match s.strip_prefix("2^") {
        Some(e) => pow2(
            e.parse::<i64>()
                .map_err(|_| format!("bad exponent in {s:?}"))?,
        ),
        None => parse_rational(s).map_err(|e| e.to_string())?,
    };
    if tol <= BigRational::zero() {
        return Err(format!("tolerance must be positive, got {s:?}"));
    }
    Ok(tol)
}

fn parse_output(s: &str) -> Result<OutputFormat, String> {
    match s.to_ascii_lowercase().as_str() {
        "text" => Ok(OutputFormat::Text),
        "json" => Ok(OutputFormat::Json),
        _ => Err(format!("output must be text or json, got {s:?}")),
    }
}

impl Config {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: String| ConfigError(format!("config line {}: {m}", i + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim().replace('-', "_"), value.trim());
            let bad_int = |_| err(format!("{key}: not a non-negative integer: {value:?}"));
            match key.as_str() {
                "precision_bits" => self.precision_bits = value.parse().map_err(bad_int)?,
                "tol" => self.tol = parse_tol(value).map_err(err)?,
                "max_depth" => self.max_depth = value.parse().map_err(bad_int)?,
                "u_depth" => self.u_depth = value.parse().map_err(bad_int)?,
                "output" => self.output = parse_output(value).map_err(err)?,
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        self.apply_file_text(&text)
    }

    pub fn apply_overrides(&mut self, o: &Overrides) {
        if let Some(v) = o.precision_bits {
            self.precision_bits = v;
        }
        if let Some(v) = &o.tol {
            self.tol = v.clone();
        }
        if let Some(v) = o.max_depth {
            self.max_depth = v;
        }
        if let Some(v) = o.u_depth {
            self.u_depth = v;
        }
        if let Some(v) = o.output {
            self.output = v;
        }
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        if self.precision_bits < 32 {
            return Err(ConfigError(format!(
                "precision_bits must be at least 32, got {}",
                self.precision_bits
            )));
        }
        if self.tol <= BigRational::zero() {
            return Err(ConfigError("tol must be positive".into()));
        }
        if self.max_depth == 0 || self.u_depth == 0 {
            return Err(ConfigError("max_depth and u_depth must be positive".into()));
        }
        Ok(())
    }

    /// Defaults, then the config file (explicit path or environment), then
    /// command-line overrides.
    pub fn resolve(path: Option<&Path>, overrides: &Overrides) -> Result<Config, ConfigError> {
        let mut c = Config::default();
        let env_path = std::env::var_os(CONFIG_ENV);
        if let Some(p) = path.or(env_path.as_deref().map(Path::new)) {
            c.apply_file(p)?;
        }
        c.apply_overrides(overrides);
        c.check()?;
        Ok(c)
    }
}
