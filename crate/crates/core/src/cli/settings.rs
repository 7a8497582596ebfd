//! Run settings shared by every subcommand.
//!
//! Values come from three layers: command-line flags, then an optional TOML
//! config file (`--config`), then built-in defaults. A run manifest stores the
//! fully resolved settings under `[config]` and can be passed back as `--config`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::data::GeneratorFamily;
use crate::error::{Error, Result};
use crate::experiments::{ClassicalFamily, PoolSpec, QuantumFamily, QuantumPool, Scalings};
use crate::kernels::{DEFAULT_Q_HI, DEFAULT_Q_LO};
use crate::statistics::FuseForm;

pub const DEFAULT_POOL: &str = "gaussian,laplace,quantum-product";
pub const DEFAULT_SCALINGS: &str = "0.001:1:5";
pub const DEFAULT_SIZES: &str = "10,20,30,40,50,60,70,80,90";

/// Every configurable value. `None` means "not set at this layer".
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    // data source
    pub gen: Option<String>,
    pub family: Option<String>,
    pub d: Option<f64>,
    pub dims: Option<usize>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub x: Option<PathBuf>,
    pub y: Option<PathBuf>,
    pub data: Option<PathBuf>,
    pub features: Option<Vec<String>>,
    pub label: Option<String>,
    pub positive_label: Option<String>,
    pub delimiter: Option<char>,
    pub standardize: Option<bool>,
    // kernel pool
    pub pool: Option<String>,
    pub bandwidths: Option<usize>,
    pub q_lo: Option<f64>,
    pub q_hi: Option<f64>,
    pub scalings: Option<String>,
    pub depth: Option<usize>,
    pub hybrid_p: Option<f64>,
    // test
    pub lambda: Option<f64>,
    pub fuse_form: Option<String>,
    pub alpha: Option<f64>,
    pub permutations: Option<usize>,
    pub seed: Option<u64>,
    pub keep_null: Option<bool>,
    // curves and sweeps
    pub sizes: Option<Vec<usize>>,
    pub reps: Option<usize>,
    pub sweep: Option<String>,
    pub grid: Option<Vec<f64>>,
    // output
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub plot: Option<bool>,
}

macro_rules! layer {
    ($top:expr, $bottom:expr, $($field:ident),* $(,)?) => {
        Settings { $($field: $top.$field.or($bottom.$field),)* }
    };
}

impl Settings {
    /// Values from `self` win over values from `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        layer!(
            self, lower, gen, family, d, dims, n, m, x, y, data, features, label,
            positive_label, delimiter, standardize, pool, bandwidths, q_lo, q_hi, scalings,
            depth, hybrid_p, lambda, fuse_form, alpha, permutations, seed, keep_null, sizes,
            reps, sweep, grid, out, format, plot,
        )
    }

    /// Reads a config file or a run manifest (whose `[config]` table is used).
    pub fn from_file(path: &Path) -> Result<Settings> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut table: toml::Table = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let table = match table.remove("config") {
            Some(toml::Value::Table(t)) => t,
            Some(_) => return Err(Error::Config("`config` must be a table".into())),
            None => table,
        };
        table
            .try_into()
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn source_kind(&self) -> Result<SourceKind> {
        match (&self.gen, &self.data, &self.x, &self.y) {
            (Some(_), None, None, None) => Ok(SourceKind::Generator),
            (None, Some(_), None, None) => Ok(SourceKind::Labeled),
            (None, None, Some(_), Some(_)) => Ok(SourceKind::TwoFiles),
            (None, None, None, None) => Err(Error::Config(
                "no data source: pass --gen, --data with --label, or --x and --y".into(),
            )),
            _ => Err(Error::Config(
                "choose exactly one data source: --gen, --data, or --x/--y".into(),
            )),
        }
    }

    pub fn generator_family(&self, value: &str) -> Result<GeneratorFamily> {
        match value {
            "gaussian" => Ok(GeneratorFamily::GaussianShift),
            "lognormal" | "log-normal" => Ok(GeneratorFamily::LogNormalShift),
            other => Err(Error::Config(format!(
                "unknown generator `{other}` (expected gaussian or lognormal)"
            ))),
        }
    }

    pub fn fuse_form_value(&self) -> Result<FuseForm> {
        match self.fuse_form.as_deref().unwrap_or("log-sum-exp") {
            "log-sum-exp" | "lse" => Ok(FuseForm::LogSumExp),
            "literal" => Ok(FuseForm::Literal),
            other => Err(Error::Config(format!(
                "unknown --fuse-form `{other}` (expected log-sum-exp or literal)"
            ))),
        }
    }

    pub fn delimiter_byte(&self) -> Result<u8> {
        let c = self.delimiter.unwrap_or(',');
        u8::try_from(c)
            .ok()
            .filter(u8::is_ascii)
            .ok_or_else(|| Error::Config(format!("delimiter `{c}` is not a single ASCII character")))
    }

    pub fn table_delimiter(&self) -> Result<u8> {
        match self.format.as_deref().unwrap_or("csv") {
            "csv" => Ok(b','),
            "tsv" => Ok(b'\t'),
            other => Err(Error::Config(format!("unknown --format `{other}` (expected csv or tsv)"))),
        }
    }

    /// Pool recipe from `--pool`, `--bandwidths`, `--scalings`, `--depth`, `--hybrid-p`.
    pub fn pool_spec(&self) -> Result<PoolSpec> {
        let mut classical = Vec::new();
        let mut quantum = None;
        for name in self.pool.as_deref().unwrap_or(DEFAULT_POOL).split(',') {
            match name.trim() {
                "gaussian" => classical.push(ClassicalFamily::Gaussian),
                "laplace" => classical.push(ClassicalFamily::Laplace),
                "quantum-product" | "quantum-entangled" if quantum.is_some() => {
                    return Err(Error::Config("--pool takes at most one quantum family".into()))
                }
                "quantum-product" => quantum = Some(QuantumFamily::Product),
                "quantum-entangled" => quantum = Some(QuantumFamily::Entangled),
                other => {
                    return Err(Error::Config(format!(
                        "unknown kernel family `{other}` in --pool"
                    )))
                }
            }
        }
        let bandwidth_count = self.bandwidths.unwrap_or(10);
        if !classical.is_empty() && bandwidth_count == 0 {
            return Err(Error::Config("--bandwidths must be at least 1".into()));
        }
        let quantum = match quantum {
            Some(family) => Some(QuantumPool {
                family,
                scalings: parse_scalings(self.scalings.as_deref().unwrap_or(DEFAULT_SCALINGS))?,
                depth: self.depth.unwrap_or(1),
            }),
            None => None,
        };
        let default_p = match (classical.is_empty(), quantum.is_some()) {
            (false, true) => 0.5,
            (true, _) => 1.0,
            (false, false) => 0.0,
        };
        let spec = PoolSpec {
            classical: crate::experiments::ClassicalPool {
                families: classical,
                bandwidth_count,
                q_lo: self.q_lo.unwrap_or(DEFAULT_Q_LO),
                q_hi: self.q_hi.unwrap_or(DEFAULT_Q_HI),
            },
            quantum,
            hybrid_p: self.hybrid_p.unwrap_or(default_p),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Fills every setting the command reads with its default, so the
    /// manifest records the complete configuration.
    pub fn resolved(mut self, command: Command) -> Result<Settings> {
        use Command::*;
        self.seed.get_or_insert(0);
        self.out.get_or_insert_with(|| PathBuf::from("out"));
        self.format.get_or_insert_with(|| "csv".into());
        if command == Gen {
            self.family.get_or_insert_with(|| "gaussian".into());
            self.d.get_or_insert(0.0);
            self.dims.get_or_insert(2);
            self.m.get_or_insert(500);
            return Ok(self);
        }
        if command == Report {
            return Ok(self);
        }
        match self.source_kind()? {
            SourceKind::Generator => {
                self.d.get_or_insert(0.0);
                self.dims.get_or_insert(2);
                self.standardize.get_or_insert(false);
            }
            SourceKind::Labeled => {
                if self.label.is_none() {
                    return Err(Error::Config("--data needs --label".into()));
                }
                self.positive_label.get_or_insert_with(|| "1".into());
                self.delimiter.get_or_insert(',');
                self.standardize.get_or_insert(true);
            }
            SourceKind::TwoFiles => {
                self.delimiter.get_or_insert(',');
                self.standardize.get_or_insert(true);
            }
        }
        let spec = self.pool_spec()?;
        self.pool.get_or_insert_with(|| DEFAULT_POOL.into());
        self.bandwidths.get_or_insert(10);
        self.q_lo.get_or_insert(DEFAULT_Q_LO);
        self.q_hi.get_or_insert(DEFAULT_Q_HI);
        if spec.quantum.is_some() {
            self.scalings.get_or_insert_with(|| DEFAULT_SCALINGS.into());
            self.depth.get_or_insert(1);
        }
        self.hybrid_p = Some(spec.hybrid_p);
        self.lambda.get_or_insert(1.0);
        self.fuse_form.get_or_insert_with(|| "log-sum-exp".into());
        self.alpha.get_or_insert(0.05);
        self.permutations.get_or_insert(2000);
        match command {
            Test => {
                if self.source_kind()? == SourceKind::Generator {
                    self.n.get_or_insert(50);
                }
                self.keep_null.get_or_insert(false);
            }
            Power | Sweep => {
                self.sizes.get_or_insert_with(|| parse_list(DEFAULT_SIZES).expect("valid default"));
                self.reps.get_or_insert(50);
                if command == Power {
                    self.plot.get_or_insert(false);
                }
                if command == Sweep {
                    match self.sweep.as_deref() {
                        Some("p") | Some("lambda") => {}
                        Some(other) => {
                            return Err(Error::Config(format!(
                                "unknown --sweep `{other}` (expected p or lambda)"
                            )))
                        }
                        None => return Err(Error::Config("sweep needs --sweep p|lambda".into())),
                    }
                    match &self.grid {
                        Some(g) if !g.is_empty() => {}
                        _ => return Err(Error::Config("sweep needs a non-empty --grid".into())),
                    }
                }
            }
            Gen | Report => unreachable!(),
        }
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceKind {
    Generator,
    Labeled,
    TwoFiles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Test,
    Power,
    Sweep,
    Gen,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Test => "test",
            Command::Power => "power",
            Command::Sweep => "sweep",
            Command::Gen => "gen",
            Command::Report => "report",
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Option<Vec<T>> {
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// `lo:hi:count` for a log grid, otherwise a comma-separated list.
pub fn parse_scalings(s: &str) -> Result<Scalings> {
    let bad = || Error::Config(format!("cannot parse --scalings `{s}` (use lo:hi:count or a list)"));
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let count = parts[2].trim().parse().map_err(|_| bad())?;
        let grid = Scalings::Grid { lo, hi, count };
        grid.values().map_err(|e| Error::Config(e.to_string()))?;
        Ok(grid)
    } else {
        let list: Vec<f64> = parse_list(s).ok_or_else(bad)?;
        if list.is_empty() || list.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(bad());
        }
        Ok(Scalings::List(list))
    }
}
