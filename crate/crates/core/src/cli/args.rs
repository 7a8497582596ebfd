//! Command-line flags. Every flag is optional so that unset flags fall through
//! to the config file and then to the defaults shown in the help text.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::settings::Settings;

#[derive(Debug, Parser)]
#[command(
    name = "hybrid-mmd",
    version,
    about = "Two-sample testing with fused classical and quantum kernel pools",
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandArgs,
}

#[derive(Debug, Subcommand)]
pub enum CommandArgs {
    /// Run one permutation test and print the verdict.
    Test(TestCmd),
    /// Estimate power and true-negative rate over a range of sample sizes.
    Power(PowerCmd),
    /// Power curves across a grid of hybrid weights or temperatures.
    Sweep(SweepCmd),
    /// Write a synthetic pair of groups to two delimited files.
    Gen(GenCmd),
    /// Draw curve tables as an SVG line chart.
    Report(ReportCmd),
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// TOML config file or a previous run's manifest.toml. Flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Synthetic generator: gaussian or lognormal.
    #[arg(long, value_name = "FAMILY")]
    pub gen: Option<String>,
    /// Per-coordinate mean shift of the second group [default: 0].
    #[arg(long)]
    pub d: Option<f64>,
    /// Dimension of generated data [default: 2].
    #[arg(long)]
    pub dims: Option<usize>,
    /// First group's CSV file.
    #[arg(long, value_name = "FILE", requires = "y")]
    pub x: Option<PathBuf>,
    /// Second group's CSV file.
    #[arg(long, value_name = "FILE", requires = "x")]
    pub y: Option<PathBuf>,
    /// One CSV file split into groups by --label.
    #[arg(long, value_name = "FILE")]
    pub data: Option<PathBuf>,
    /// Comma-separated feature columns, by header name or 0-based index [default: all but the label].
    #[arg(long, value_delimiter = ',', value_name = "COLS")]
    pub features: Option<Vec<String>>,
    /// Label column for --data.
    #[arg(long, value_name = "COL")]
    pub label: Option<String>,
    /// Label value of the second group; all other rows form the first [default: 1].
    #[arg(long, value_name = "VALUE")]
    pub positive_label: Option<String>,
    /// Field delimiter of input files [default: ,].
    #[arg(long, value_name = "CHAR")]
    pub delimiter: Option<char>,
    /// Standardize pooled columns to zero mean and unit variance [default: on for files, off for --gen].
    #[arg(long, overrides_with = "no_standardize")]
    pub standardize: bool,
    /// Use raw feature values.
    #[arg(long, overrides_with = "standardize")]
    pub no_standardize: bool,
}

#[derive(Debug, Args)]
pub struct PoolArgs {
    /// Kernel families: gaussian, laplace, and at most one of quantum-product, quantum-entangled [default: gaussian,laplace,quantum-product].
    #[arg(long, value_name = "LIST")]
    pub pool: Option<String>,
    /// Bandwidths per classical family [default: 10].
    #[arg(long, value_name = "COUNT")]
    pub bandwidths: Option<usize>,
    /// Lower distance quantile of the bandwidth grid [default: 0.05].
    #[arg(long, value_name = "Q")]
    pub q_lo: Option<f64>,
    /// Upper distance quantile of the bandwidth grid [default: 0.95].
    #[arg(long, value_name = "Q")]
    pub q_hi: Option<f64>,
    /// Quantum scaling parameters as lo:hi:count (log-spaced) or a comma list [default: 0.001:1:5].
    #[arg(long, value_name = "SPEC")]
    pub scalings: Option<String>,
    /// Layers of the entangled feature map [default: 1].
    #[arg(long)]
    pub depth: Option<usize>,
    /// Prior mass on the quantum kernels [default: 0.5 for mixed pools, else 0 or 1].
    #[arg(long, value_name = "P")]
    pub hybrid_p: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StatArgs {
    /// Fusion temperature [default: 1].
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Fusion formula: log-sum-exp or literal [default: log-sum-exp].
    #[arg(long, value_name = "FORM")]
    pub fuse_form: Option<String>,
    /// Significance level [default: 0.05].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Random permutations per test [default: 2000].
    #[arg(long, value_name = "B")]
    pub permutations: Option<usize>,
    /// Master seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Comma-separated per-group sample sizes [default: 10,20,...,90].
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub sizes: Option<Vec<usize>>,
    /// Monte-Carlo repetitions per sample size [default: 50].
    #[arg(long)]
    pub reps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output directory [default: out].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Table format: csv or tsv [default: csv].
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads [default: available parallelism].
    #[arg(long, env = "HYBRID_MMD_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TestCmd {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub source: SourceArgs,
    /// Rows per group for --gen [default: 50].
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub pool: PoolArgs,
    #[command(flatten)]
    pub stat: StatArgs,
    /// Also store all B + 1 permutation statistics in result.toml.
    #[arg(long)]
    pub keep_null: bool,
    /// Directory for result.toml and manifest.toml [default: print only].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Worker threads [default: available parallelism].
    #[arg(long, env = "HYBRID_MMD_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PowerCmd {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub pool: PoolArgs,
    #[command(flatten)]
    pub stat: StatArgs,
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Also draw power.svg.
    #[arg(long)]
    pub plot: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepCmd {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Swept parameter: p (hybrid weight) or lambda.
    #[arg(long, value_name = "PARAM")]
    pub sweep: Option<String>,
    /// Comma-separated values of the swept parameter.
    #[arg(long, value_delimiter = ',', value_name = "LIST")]
    pub grid: Option<Vec<f64>>,
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub pool: PoolArgs,
    #[command(flatten)]
    pub stat: StatArgs,
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenCmd {
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Distribution family: gaussian or lognormal [default: gaussian].
    #[arg(long)]
    pub family: Option<String>,
    /// Per-coordinate mean shift of the second group [default: 0].
    #[arg(long)]
    pub d: Option<f64>,
    /// Number of columns [default: 2].
    #[arg(long)]
    pub dims: Option<usize>,
    /// Rows per group [default: 500].
    #[arg(long)]
    pub m: Option<usize>,
    /// Seed [default: 0].
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory [default: out].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Table format: csv or tsv [default: csv].
    #[arg(long)]
    pub format: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReportCmd {
    /// Curve tables written by `power` or `sweep`.
    #[arg(required = true, value_name = "TABLE")]
    pub tables: Vec<PathBuf>,
    /// Chart title [default: none].
    #[arg(long)]
    pub title: Option<String>,
    /// Output directory [default: out].
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

impl SourceArgs {
    fn apply(self, s: &mut Settings) {
        s.gen = self.gen;
        s.d = self.d;
        s.dims = self.dims;
        s.x = self.x;
        s.y = self.y;
        s.data = self.data;
        s.features = self.features;
        s.label = self.label;
        s.positive_label = self.positive_label;
        s.delimiter = self.delimiter;
        s.standardize = match (self.standardize, self.no_standardize) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        };
    }
}

impl PoolArgs {
    fn apply(self, s: &mut Settings) {
        s.pool = self.pool;
        s.bandwidths = self.bandwidths;
        s.q_lo = self.q_lo;
        s.q_hi = self.q_hi;
        s.scalings = self.scalings;
        s.depth = self.depth;
        s.hybrid_p = self.hybrid_p;
    }
}

impl StatArgs {
    fn apply(self, s: &mut Settings) {
        s.lambda = self.lambda;
        s.fuse_form = self.fuse_form;
        s.alpha = self.alpha;
        s.permutations = self.permutations;
        s.seed = self.seed;
    }
}

impl CurveArgs {
    fn apply(self, s: &mut Settings) {
        s.sizes = self.sizes;
        s.reps = self.reps;
    }
}

impl OutputArgs {
    fn apply(self, s: &mut Settings) -> Option<usize> {
        s.out = self.out;
        s.format = self.format;
        self.workers
    }
}

/// Flag layer of the settings, the config file path, and the worker count.
pub struct FlagLayer {
    pub settings: Settings,
    pub config: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl TestCmd {
    pub fn into_layer(self) -> FlagLayer {
        let mut s = Settings::default();
        self.source.apply(&mut s);
        self.pool.apply(&mut s);
        self.stat.apply(&mut s);
        s.n = self.n;
        s.keep_null = self.keep_null.then_some(true);
        s.out = self.out;
        FlagLayer {
            settings: s,
            config: self.config.config,
            workers: self.workers,
        }
    }
}

impl PowerCmd {
    pub fn into_layer(self) -> FlagLayer {
        let mut s = Settings::default();
        self.source.apply(&mut s);
        self.pool.apply(&mut s);
        self.stat.apply(&mut s);
        self.curve.apply(&mut s);
        s.plot = self.plot.then_some(true);
        let workers = self.output.apply(&mut s);
        FlagLayer {
            settings: s,
            config: self.config.config,
            workers,
        }
    }
}

impl SweepCmd {
    pub fn into_layer(self) -> FlagLayer {
        let mut s = Settings {
            sweep: self.sweep,
            grid: self.grid,
            ..Default::default()
        };
        self.source.apply(&mut s);
        self.pool.apply(&mut s);
        self.stat.apply(&mut s);
        self.curve.apply(&mut s);
        let workers = self.output.apply(&mut s);
        FlagLayer {
            settings: s,
            config: self.config.config,
            workers,
        }
    }
}

impl GenCmd {
    pub fn into_layer(self) -> FlagLayer {
        let s = Settings {
            family: self.family,
            d: self.d,
            dims: self.dims,
            m: self.m,
            seed: self.seed,
            out: self.out,
            format: self.format,
            ..Default::default()
        };
        FlagLayer {
            settings: s,
            config: self.config.config,
            workers: None,
        }
    }
}
