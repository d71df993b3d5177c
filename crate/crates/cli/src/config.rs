//! Run configuration: defaults, then a `key = value` file, then the
//! `ZX_PRECISION` environment variable, then command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use zx_core::precision::{DEFAULT_DIGITS, MIN_DIGITS};
use zx_core::zeros::{cached_find_zeros, find_zeros, import_zero_table, ZeroFormat, ZeroTable};
use zx_core::Precision;

pub const PRECISION_ENV: &str = "ZX_PRECISION";
pub const DEFAULT_SIEVE_LIMIT: u64 = 1_000_000;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroSource {
    Compute,
    Import(PathBuf),
    Cache(PathBuf),
}

impl ZeroSource {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "compute" {
            return Ok(ZeroSource::Compute);
        }
        match s.split_once(':') {
            Some(("import", p)) if !p.is_empty() => Ok(ZeroSource::Import(PathBuf::from(p))),
            Some(("cache", p)) if !p.is_empty() => Ok(ZeroSource::Cache(PathBuf::from(p))),
            _ => bail!("zero source must be `compute`, `import:<path>` or `cache:<path>`, got `{s}`"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub precision_digits: u32,
    pub sieve_limit: u64,
    pub zero_source: ZeroSource,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            precision_digits: DEFAULT_DIGITS,
            sieve_limit: DEFAULT_SIEVE_LIMIT,
            zero_source: ZeroSource::Compute,
            output_dir: PathBuf::from("."),
        }
    }
}

/// Settings given on the command line; `None` leaves the lower layers alone.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision_digits: Option<u32>,
    pub sieve_limit: Option<u64>,
    pub zero_source: Option<String>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(file: Option<&Path>, env_precision: Option<&str>, flags: &Overrides) -> Result<Self> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
            cfg.apply_file(&text)
                .with_context(|| format!("in config {}", path.display()))?;
        }
        if let Some(v) = env_precision {
            cfg.precision_digits = v
                .trim()
                .parse()
                .with_context(|| format!("{PRECISION_ENV}={v} is not an integer"))?;
        }
        if let Some(d) = flags.precision_digits {
            cfg.precision_digits = d;
        }
        if let Some(n) = flags.sieve_limit {
            cfg.sieve_limit = n;
        }
        if let Some(s) = &flags.zero_source {
            cfg.zero_source = ZeroSource::parse(s)?;
        }
        if let Some(p) = &flags.output_dir {
            cfg.output_dir = p.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_file(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key = value", i + 1);
            };
            let value = value.trim().trim_matches('"');
            match key.trim() {
                "precision_digits" => {
                    self.precision_digits = value.parse().with_context(|| format!("line {}", i + 1))?
                }
                "sieve_limit" => self.sieve_limit = value.parse().with_context(|| format!("line {}", i + 1))?,
                "zero_source" => self.zero_source = ZeroSource::parse(value)?,
                "output_dir" => self.output_dir = PathBuf::from(value),
                other => bail!("line {}: unknown key `{other}`", i + 1),
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        if self.precision_digits < MIN_DIGITS {
            bail!("precision_digits must be at least {MIN_DIGITS}, got {}", self.precision_digits);
        }
        Precision::new(self.precision_digits)?;
        if self.sieve_limit < 2 {
            bail!("sieve_limit must be at least 2");
        }
        match &self.zero_source {
            ZeroSource::Import(p) if !p.is_file() => bail!("zero file {} does not exist", p.display()),
            ZeroSource::Cache(p) => {
                if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    if !parent.is_dir() {
                        bail!("cache directory {} does not exist", parent.display());
                    }
                }
            }
            _ => {}
        }
        if self.output_dir.exists() && !self.output_dir.is_dir() {
            bail!("output path {} is not a directory", self.output_dir.display());
        }
        Ok(())
    }

    pub fn precision(&self) -> Precision {
        Precision::new(self.precision_digits).expect("validated")
    }

    pub fn output_path(&self, name: &str) -> Result<PathBuf> {
        fs::create_dir_all(&self.output_dir)
            .with_context(|| format!("creating {}", self.output_dir.display()))?;
        Ok(self.output_dir.join(name))
    }

    /// Zeros covering `(0, t_max]` from the configured source.
    pub fn zeros(&self, t_max: f64, tol: f64) -> Result<ZeroTable> {
        Ok(match &self.zero_source {
            ZeroSource::Compute => find_zeros(t_max, tol)?,
            ZeroSource::Cache(p) => cached_find_zeros(p, t_max, tol)?,
            ZeroSource::Import(p) => {
                let table = import_zero_table(p, ZeroFormat::PlainText)?;
                if table.t_max() < t_max {
                    return Err(zx_core::Error::OutOfCoverage {
                        hi: t_max,
                        t_max: table.t_max(),
                    }
                    .into());
                }
                table
            }
        })
    }
}
