//! Delimited-text ingestion and export.

use std::fs::File;
use std::path::Path;

use super::Dataset;
use crate::error::{Error, Result};

/// A column addressed by header name or zero-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    Index(usize),
}

impl ColumnRef {
    /// Digits are read as a position, anything else as a header name.
    pub fn parse(s: &str) -> ColumnRef {
        let s = s.trim();
        match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        }
    }

    fn resolve(&self, header: Option<&[String]>, width: usize) -> Result<usize> {
        match self {
            ColumnRef::Name(name) => {
                let header = header.ok_or_else(|| {
                    Error::Schema(format!("column `{name}` requested but the file has no header"))
                })?;
                header
                    .iter()
                    .position(|h| h == name)
                    .ok_or_else(|| Error::Schema(format!("no column named `{name}`")))
            }
            ColumnRef::Index(i) if *i < width => Ok(*i),
            ColumnRef::Index(i) => Err(Error::Schema(format!(
                "column index {i} out of range for {width} columns"
            ))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CsvOptions {
    /// Feature columns; `None` selects every column except the label.
    pub features: Option<Vec<ColumnRef>>,
    pub label: Option<ColumnRef>,
    pub delimiter: u8,
}

impl Default for CsvOptions {
    fn default() -> Self {
        CsvOptions {
            features: None,
            label: None,
            delimiter: b',',
        }
    }
}

fn parse_number(s: &str) -> Option<f64> {
    s.trim().parse::<f64>().ok()
}

/// Loads numeric features (and optionally a label column) from a delimited file.
///
/// The first record is taken as a header when it has a non-numeric cell in a
/// column whose next cell is numeric (or when it is the only record).
pub fn load_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = ::csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(opts.delimiter)
        .trim(::csv::Trim::All)
        .from_reader(file);

    let mut records = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            row: i + 1,
            column: "-".into(),
            message: e.to_string(),
        })?;
        records.push(rec);
    }
    let first = records
        .first()
        .ok_or_else(|| Error::validation(format!("{} is empty", path.display())))?;
    let second = records.get(1);
    let has_header = first.iter().enumerate().any(|(j, cell)| {
        parse_number(cell).is_none()
            && second.is_none_or(|r| r.get(j).and_then(parse_number).is_some())
    });
    let header: Option<Vec<String>> =
        has_header.then(|| first.iter().map(str::to_string).collect());
    let data_start = usize::from(has_header);
    if records.len() <= data_start {
        return Err(Error::validation(format!(
            "{} has a header but no data rows",
            path.display()
        )));
    }
    let width = first.len();

    let label_col = opts
        .label
        .as_ref()
        .map(|c| c.resolve(header.as_deref(), width))
        .transpose()?;
    let feature_cols: Vec<usize> = match &opts.features {
        Some(cols) => cols
            .iter()
            .map(|c| c.resolve(header.as_deref(), width))
            .collect::<Result<_>>()?,
        None => (0..width).filter(|&j| Some(j) != label_col).collect(),
    };
    if feature_cols.is_empty() {
        return Err(Error::Schema("no feature columns selected".into()));
    }
    let column_name = |j: usize| match &header {
        Some(h) => h[j].clone(),
        None => j.to_string(),
    };

    let mut rows = Vec::with_capacity(records.len() - data_start);
    let mut labels = Vec::new();
    for (offset, rec) in records[data_start..].iter().enumerate() {
        let line = data_start + offset + 1;
        if rec.len() != width {
            return Err(Error::Parse {
                row: line,
                column: "-".into(),
                message: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        let mut row = Vec::with_capacity(feature_cols.len());
        for &j in &feature_cols {
            let cell = &rec[j];
            let v = parse_number(cell)
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    row: line,
                    column: column_name(j),
                    message: if cell.is_empty() {
                        "missing value".into()
                    } else {
                        format!("`{cell}` is not a finite number")
                    },
                })?;
            row.push(v);
        }
        rows.push(row);
        if let Some(l) = label_col {
            labels.push(rec[l].to_string());
        }
    }

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data".into());
    let mut ds = Dataset::from_rows(name, rows)?
        .with_columns(feature_cols.iter().map(|&j| column_name(j)).collect())?;
    if label_col.is_some() {
        ds = ds.with_labels(labels)?;
    }
    Ok(ds)
}

/// Writes `ds` with a header row. Numbers use the shortest representation
/// that parses back to the identical `f64`.
pub fn write_csv(ds: &Dataset, path: impl AsRef<Path>, delimiter: u8) -> Result<()> {
    let path = path.as_ref();
    let mut writer = ::csv::WriterBuilder::new()
        .delimiter(delimiter)
        .from_path(path)
        .map_err(|e| Error::io(path, e.into()))?;
    let mut header: Vec<String> = match ds.columns() {
        Some(c) => c.to_vec(),
        None => (0..ds.dims()).map(|j| format!("x{j}")).collect(),
    };
    if ds.labels().is_some() {
        header.push("label".into());
    }
    let io_err = |e: ::csv::Error| Error::io(path, e.into());
    writer.write_record(&header).map_err(io_err)?;
    for (i, row) in ds.rows().enumerate() {
        let mut fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        if let Some(labels) = ds.labels() {
            fields.push(labels[i].clone());
        }
        writer.write_record(&fields).map_err(io_err)?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

fn label_matches(label: &str, positive: &str) -> bool {
    if label == positive {
        return true;
    }
    matches!((parse_number(label), parse_number(positive)), (Some(a), Some(b)) if a == b)
}

/// Partitions rows into `(X, Y)`: `Y` holds rows whose label equals
/// `positive_label`, `X` holds the rest. Numeric labels compare by value.
pub fn split_by_label(ds: &Dataset, positive_label: &str) -> Result<(Dataset, Dataset)> {
    let labels = ds
        .labels()
        .ok_or_else(|| Error::validation("dataset has no label column"))?;
    let (pos, neg): (Vec<usize>, Vec<usize>) =
        (0..ds.len()).partition(|&i| label_matches(&labels[i], positive_label));
    if pos.is_empty() {
        return Err(Error::validation(format!(
            "label `{positive_label}` does not occur in {}",
            ds.name()
        )));
    }
    Ok((
        ds.select(&neg).renamed(format!("{}[!{positive_label}]", ds.name())),
        ds.select(&pos).renamed(format!("{}[{positive_label}]", ds.name())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn header_detection_and_selection() {
        let f = file("a,b,label\n1.5,2,x\n3,4e-1,y\n");
        let opts = CsvOptions {
            features: Some(vec![ColumnRef::parse("b"), ColumnRef::parse("0")]),
            label: Some(ColumnRef::parse("label")),
            ..Default::default()
        };
        let ds = load_csv(f.path(), &opts).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.row(1), &[0.4, 3.0]);
        assert_eq!(ds.columns().unwrap(), &["b".to_string(), "a".to_string()]);
        assert_eq!(ds.labels().unwrap(), &["x".to_string(), "y".to_string()]);
    }

    #[test]
    fn headerless_numeric_file() {
        let f = file("1,2\n3,4\n");
        let ds = load_csv(f.path(), &CsvOptions::default()).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.dims(), 2);
    }

    #[test]
    fn header_only_is_validation_error() {
        let f = file("a,b\n");
        assert!(matches!(
            load_csv(f.path(), &CsvOptions::default()),
            Err(Error::Validation(_))
        ));
        let empty = file("");
        assert!(matches!(
            load_csv(empty.path(), &CsvOptions::default()),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn missing_column_is_schema_error() {
        let f = file("a,b\n1,2\n");
        let opts = CsvOptions {
            features: Some(vec![ColumnRef::parse("c")]),
            ..Default::default()
        };
        assert!(matches!(load_csv(f.path(), &opts), Err(Error::Schema(_))));
    }

    #[test]
    fn bad_cell_reports_location() {
        let f = file("a,b\n1,2\n3,oops\n");
        match load_csv(f.path(), &CsvOptions::default()) {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
        let missing = file("a,b\n1,\n");
        assert!(matches!(
            load_csv(missing.path(), &CsvOptions::default()),
            Err(Error::Parse { row: 2, .. })
        ));
    }

    #[test]
    fn headerless_with_categorical_label() {
        let f = file("1,M\n2,B\n");
        let opts = CsvOptions {
            label: Some(ColumnRef::Index(1)),
            ..Default::default()
        };
        let ds = load_csv(f.path(), &opts).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.labels().unwrap()[0], "M");
    }

    #[test]
    fn semicolon_delimiter() {
        let f = file("a;b\n1;2\n");
        let opts = CsvOptions {
            delimiter: b';',
            ..Default::default()
        };
        assert_eq!(load_csv(f.path(), &opts).unwrap().row(0), &[1.0, 2.0]);
    }

    #[test]
    fn split_by_numeric_label() {
        let f = file("v,DEATH_EVENT\n1,0\n2,1\n3,0\n");
        let opts = CsvOptions {
            label: Some(ColumnRef::parse("DEATH_EVENT")),
            ..Default::default()
        };
        let ds = load_csv(f.path(), &opts).unwrap();
        let (x, y) = split_by_label(&ds, "1.0").unwrap();
        assert_eq!((x.len(), y.len()), (2, 1));
        assert!(split_by_label(&ds, "7").is_err());
    }

    #[test]
    fn single_label_leaves_empty_group() {
        let ds = Dataset::from_rows("d", vec![vec![1.0], vec![2.0]])
            .unwrap()
            .with_labels(vec!["a".into(), "a".into()])
            .unwrap();
        let (x, y) = split_by_label(&ds, "a").unwrap();
        assert!(x.is_empty());
        assert_eq!(y.len(), 2);
    }
}
