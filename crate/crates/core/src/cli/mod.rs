//! The `hybrid-mmd` command line.
//!
//! | command  | writes |
//! |----------|--------|
//! | `test`   | verdict on stdout; `result.toml` + manifest with `--out` |
//! | `power`  | `power.csv` (`sample_size,power,stderr,tnr,tnr_stderr`), optional `power.svg` |
//! | `sweep`  | `sweep_{param}_{value}.csv` per grid value and `sweep_{param}.csv` in long form |
//! | `gen`    | `x.csv`, `y.csv` |
//! | `report` | `report.svg` drawn from existing tables |
//!
//! Every command except `report` resolves its settings from flags, then
//! `--config`, then defaults, and records them in `manifest.toml`. Exit codes:
//! 0 on success (whatever the verdict), 2 for configuration errors, 3 for data errors.

mod args;
mod manifest;
mod plot;
mod settings;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

use crate::data::{self, ColumnRef, CsvOptions, Dataset, GeneratorSpec};
use crate::error::{Error, Result};
use crate::experiments::{self, build_pool, PowerConfig, PowerCurve, Source};
use crate::rng::{self, purpose};
use crate::statistics::PooledGrams;
use crate::testing::{permutation_test, TestConfig, TestResult};

use args::{Cli, CommandArgs, FlagLayer, ReportCmd};
use manifest::{GroupSizes, RunManifest};
pub use plot::{render as render_svg, Series};
pub use settings::{Command, Settings};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;

/// Entry point of the binary.
pub fn main() -> i32 {
    run(std::env::args_os())
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_data_error() {
                EXIT_DATA
            } else {
                EXIT_CONFIG
            }
        }
    }
}

fn dispatch(cmd: CommandArgs) -> Result<()> {
    match cmd {
        CommandArgs::Test(a) => with_layer(Command::Test, a.into_layer(), cmd_test),
        CommandArgs::Power(a) => with_layer(Command::Power, a.into_layer(), cmd_power),
        CommandArgs::Sweep(a) => with_layer(Command::Sweep, a.into_layer(), cmd_sweep),
        CommandArgs::Gen(a) => with_layer(Command::Gen, a.into_layer(), cmd_gen),
        CommandArgs::Report(a) => cmd_report(a),
    }
}

fn with_layer(command: Command, layer: FlagLayer, f: fn(Settings) -> Result<()>) -> Result<()> {
    let file = match &layer.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    let settings = layer.settings.over(file).resolved(command)?;
    match layer.workers {
        Some(0) => Err(Error::Config("--workers must be at least 1".into())),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {w} workers: {e}")))?
            .install(|| f(settings)),
        None => f(settings),
    }
}

/// Validation failures of values that came from flags are configuration errors.
fn as_config(e: Error) -> Error {
    match e {
        Error::Validation(msg) => Error::Config(msg),
        other => other,
    }
}

fn test_config(s: &Settings, seed: u64) -> Result<TestConfig> {
    let cfg = TestConfig {
        alpha: s.alpha.expect("resolved"),
        permutations: s.permutations.expect("resolved"),
        lambda: s.lambda.expect("resolved"),
        form: s.fuse_form_value()?,
        seed,
        retain_null: s.keep_null.unwrap_or(false),
    };
    cfg.validate().map_err(as_config)?;
    Ok(cfg)
}

fn generator(s: &Settings, family: &str, size: usize, seed: u64) -> Result<GeneratorSpec> {
    let spec = GeneratorSpec {
        family: s.generator_family(family)?,
        dims: s.dims.expect("resolved"),
        shift: s.d.expect("resolved"),
        size,
        seed,
    };
    spec.validate().map_err(as_config)?;
    Ok(spec)
}

fn csv_options(s: &Settings, label: bool) -> Result<CsvOptions> {
    Ok(CsvOptions {
        features: s
            .features
            .as_ref()
            .map(|f| f.iter().map(|c| ColumnRef::parse(c)).collect()),
        label: if label {
            s.label.as_deref().map(ColumnRef::parse)
        } else {
            None
        },
        delimiter: s.delimiter_byte()?,
    })
}

/// Loads the two groups from files, standardizing the pooled sample if asked.
fn load_groups(s: &Settings, manifest: &mut RunManifest) -> Result<(Dataset, Dataset)> {
    let (x, y) = if let Some(path) = &s.data {
        manifest.add_input(path)?;
        let ds = data::load_csv(path, &csv_options(s, true)?)?;
        data::split_by_label(&ds, s.positive_label.as_deref().unwrap_or("1"))?
    } else {
        let (px, py) = (s.x.as_ref().expect("source"), s.y.as_ref().expect("source"));
        manifest.add_input(px)?;
        manifest.add_input(py)?;
        let opts = csv_options(s, false)?;
        (data::load_csv(px, &opts)?, data::load_csv(py, &opts)?)
    };
    if x.is_empty() || y.is_empty() {
        return Err(Error::InsufficientSamples { needed: 1, got: 0 });
    }
    manifest.groups = Some(GroupSizes { x: x.len(), y: y.len() });
    if !s.standardize.unwrap_or(true) {
        return Ok((x, y));
    }
    let pooled = Dataset::concat(&x, &y)?;
    let st = data::standardize(&pooled)?;
    if !st.constant_columns.is_empty() {
        eprintln!("warning: constant columns {:?} set to 0", st.constant_columns);
    }
    let (sx, sy) = st.dataset.split_at(x.len());
    Ok((sx.renamed(x.name()), sy.renamed(y.name())))
}

fn out_dir(s: &Settings) -> Result<PathBuf> {
    let dir = s.out.clone().expect("resolved");
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    Ok(dir)
}

fn table_name(s: &Settings, stem: &str) -> String {
    let ext = if s.format.as_deref() == Some("tsv") { "tsv" } else { "csv" };
    format!("{stem}.{ext}")
}

fn write_table(path: &Path, delimiter: u8, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_path(path)
        .map_err(|e| Error::io(path, e.into()))?;
    let io_err = |e: csv::Error| Error::io(path, e.into());
    w.write_record(header).map_err(io_err)?;
    for r in rows {
        w.write_record(r).map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Serialize)]
struct ResultRecord<'a> {
    manifest: &'a str,
    result: &'a TestResult,
}

fn cmd_test(s: Settings) -> Result<()> {
    let started = manifest::now();
    let seed = s.seed.expect("resolved");
    let mut manifest = RunManifest::new("test", s.clone(), started);
    let cfg = test_config(&s, rng::derive_seed(seed, &[purpose::PERMUTATIONS]))?;
    let (x, y) = match &s.gen {
        Some(family) => {
            let n = s.n.expect("resolved");
            let spec = generator(&s, family, n, rng::derive_seed(seed, &[purpose::GENERATE]))?;
            let groups = data::generate(&spec)?;
            manifest.groups = Some(GroupSizes { x: n, y: n });
            groups
        }
        None => load_groups(&s, &mut manifest)?,
    };
    let z = Dataset::concat(&x, &y)?;
    let pool = build_pool(&s.pool_spec()?, &z)?;
    let pooled = PooledGrams::build(&pool, &x, &y)?;
    let result = permutation_test(&pooled, &cfg)?;

    println!("groups        x = {}, y = {}", result.n, result.m);
    println!("kernels       {}", pool.len());
    println!("statistic     {}", result.statistic);
    println!("threshold     {}", result.threshold);
    println!("p-value       {}", result.p_value);
    println!(
        "decision      {} at alpha = {}",
        if result.reject { "reject H0 (distributions differ)" } else { "fail to reject H0" },
        result.alpha
    );

    if s.out.is_some() {
        let dir = out_dir(&s)?;
        let record = ResultRecord {
            manifest: manifest::FILE_NAME,
            result: &result,
        };
        let text = toml::to_string(&record).map_err(|e| Error::Config(format!("result: {e}")))?;
        let path = dir.join("result.toml");
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        manifest.outputs.push("result.toml".into());
        manifest.write(&dir)?;
    }
    Ok(())
}

fn power_config(s: &Settings, manifest: &mut RunManifest) -> Result<PowerConfig> {
    let source = match &s.gen {
        Some(family) => {
            let spec = generator(s, family, 2, 0)?;
            Source::Synthetic {
                family: spec.family,
                dims: spec.dims,
                shift: spec.shift,
            }
        }
        None => {
            let (x, y) = load_groups(s, manifest)?;
            Source::Groups { x, y }
        }
    };
    let test = test_config(s, 0)?;
    let cfg = PowerConfig {
        sample_sizes: s.sizes.clone().expect("resolved"),
        repetitions: s.reps.expect("resolved"),
        alpha: test.alpha,
        permutations: test.permutations,
        lambda: test.lambda,
        form: test.form,
        pool: s.pool_spec()?,
        source,
        seed: s.seed.expect("resolved"),
    };
    cfg.validate().map_err(as_config)?;
    Ok(cfg)
}

fn curve_series(name: String, curve: &PowerCurve) -> Series {
    Series {
        name,
        points: curve
            .points
            .iter()
            .map(|p| (p.sample_size as f64, p.estimate, p.stderr))
            .collect(),
    }
}

fn cmd_power(s: Settings) -> Result<()> {
    let mut manifest = RunManifest::new("power", s.clone(), manifest::now());
    let cfg = power_config(&s, &mut manifest)?;
    let power = experiments::estimate_power(&cfg)?;
    let tnr = experiments::estimate_type1(&cfg)?;

    let dir = out_dir(&s)?;
    let rows: Vec<Vec<String>> = power
        .points
        .iter()
        .zip(&tnr.points)
        .map(|(p, t)| {
            vec![
                p.sample_size.to_string(),
                p.estimate.to_string(),
                p.stderr.to_string(),
                t.estimate.to_string(),
                t.stderr.to_string(),
            ]
        })
        .collect();
    let name = table_name(&s, "power");
    write_table(
        &dir.join(&name),
        s.table_delimiter()?,
        &["sample_size", "power", "stderr", "tnr", "tnr_stderr"],
        &rows,
    )?;
    manifest.outputs.push(name);
    if s.plot == Some(true) {
        let svg = plot::render(
            &[curve_series("power".into(), &power), curve_series("TNR".into(), &tnr)],
            None,
            "sample size per group",
            "rate",
        );
        let path = dir.join("power.svg");
        fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
        manifest.outputs.push("power.svg".into());
    }
    for p in &power.points {
        println!("n = {:>4}  power = {:.3} ± {:.3}", p.sample_size, p.estimate, p.stderr);
    }
    manifest.write(&dir)
}

fn cmd_sweep(s: Settings) -> Result<()> {
    let mut manifest = RunManifest::new("sweep", s.clone(), manifest::now());
    let cfg = power_config(&s, &mut manifest)?;
    let param = s.sweep.clone().expect("resolved");
    let grid = s.grid.clone().expect("resolved");
    let curves = match param.as_str() {
        "p" => {
            if cfg.pool.quantum.is_none() || cfg.pool.classical.families.is_empty() {
                return Err(Error::Config(
                    "--sweep p needs both classical and quantum families in --pool".into(),
                ));
            }
            experiments::hybrid_sweep(&cfg, &grid).map_err(as_config)?
        }
        _ => experiments::lambda_sweep(&cfg, &grid).map_err(as_config)?,
    };

    let dir = out_dir(&s)?;
    let delimiter = s.table_delimiter()?;
    let mut long = Vec::new();
    for (value, curve) in &curves {
        let rows: Vec<Vec<String>> = curve
            .points
            .iter()
            .map(|p| vec![p.sample_size.to_string(), p.estimate.to_string(), p.stderr.to_string()])
            .collect();
        for r in &rows {
            let mut row = vec![param.clone(), value.to_string()];
            row.extend(r.iter().cloned());
            long.push(row);
        }
        let name = table_name(&s, &format!("sweep_{param}_{value}"));
        write_table(&dir.join(&name), delimiter, &["sample_size", "power", "stderr"], &rows)?;
        manifest.outputs.push(name);
        println!(
            "{param} = {value}: {}",
            curve.points.iter().map(|p| format!("{:.3}", p.estimate)).collect::<Vec<_>>().join(" ")
        );
    }
    let name = table_name(&s, &format!("sweep_{param}"));
    write_table(
        &dir.join(&name),
        delimiter,
        &["param", "value", "sample_size", "power", "stderr"],
        &long,
    )?;
    manifest.outputs.push(name);
    manifest.write(&dir)
}

fn cmd_gen(s: Settings) -> Result<()> {
    let mut manifest = RunManifest::new("gen", s.clone(), manifest::now());
    let family = s.family.clone().expect("resolved");
    let m = s.m.expect("resolved");
    let spec = generator(&s, &family, m, s.seed.expect("resolved"))?;
    let (x, y) = data::generate(&spec)?;
    let dir = out_dir(&s)?;
    let delimiter = s.table_delimiter()?;
    for (ds, stem) in [(&x, "x"), (&y, "y")] {
        let name = table_name(&s, stem);
        data::write_csv(ds, dir.join(&name), delimiter)?;
        manifest.outputs.push(name);
    }
    manifest.groups = Some(GroupSizes { x: m, y: m });
    println!("wrote {m} x {} rows per group to {}", spec.dims, dir.display());
    manifest.write(&dir)
}

/// Reads a `power` table or a long-form `sweep` table into chart series.
pub fn read_curve_table(path: &Path) -> Result<Vec<Series>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let delimiter = if text.lines().next().unwrap_or("").contains('\t') { b'\t' } else { b',' };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("{}: missing column `{name}`", path.display())))
    };
    let (ix, iy, ise) = (col("sample_size")?, col("power")?, col("stderr")?);
    let group = match (col("param"), col("value")) {
        (Ok(p), Ok(v)) => Some((p, v)),
        _ => None,
    };
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let mut series: Vec<Series> = Vec::new();
    for (row, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        let num = |i: usize| -> Result<f64> {
            let cell = rec.get(i).unwrap_or("");
            cell.trim().parse().map_err(|_| Error::Parse {
                row: row + 2,
                column: header[i].clone(),
                message: format!("`{cell}` is not a number"),
            })
        };
        let name = match group {
            Some((p, v)) => format!("{}={}", rec.get(p).unwrap_or(""), rec.get(v).unwrap_or("")),
            None => stem.clone(),
        };
        let point = (num(ix)?, num(iy)?, num(ise)?);
        match series.iter_mut().find(|s| s.name == name) {
            Some(s) => s.points.push(point),
            None => series.push(Series {
                name,
                points: vec![point],
            }),
        }
    }
    if series.is_empty() {
        return Err(Error::Schema(format!("{}: table has no rows", path.display())));
    }
    for s in &mut series {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    Ok(series)
}

fn cmd_report(a: ReportCmd) -> Result<()> {
    let started = manifest::now();
    let mut series = Vec::new();
    for t in &a.tables {
        series.extend(read_curve_table(t)?);
    }
    let dir = a.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let svg = plot::render(&series, a.title.as_deref(), "sample size per group", "power");
    let path = dir.join("report.svg");
    fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;

    let settings = Settings {
        out: Some(dir.clone()),
        ..Default::default()
    };
    let mut manifest = RunManifest::new("report", settings, started);
    for t in &a.tables {
        manifest.add_input(t)?;
    }
    manifest.outputs.push("report.svg".into());
    println!("wrote {} series to {}", series.len(), path.display());
    manifest.write(&dir)
}
