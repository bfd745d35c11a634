//! CSV ingestion of a single numeric column.

use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::stats::{SampledSeries, Transform};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    /// Zero-based.
    Index(usize),
}

impl FromStr for ColumnRef {
    type Err = std::convert::Infallible;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestSpec {
    pub path: PathBuf,
    pub column: ColumnRef,
    pub transform: Transform,
    pub delimiter: u8,
}

impl IngestSpec {
    pub fn new(path: impl Into<PathBuf>, column: ColumnRef) -> Self {
        IngestSpec {
            path: path.into(),
            column,
            transform: Transform::Identity,
            delimiter: b',',
        }
    }
}

/// Reads the requested column of a headed CSV. Row numbers in errors are
/// file line numbers, header included.
pub fn read_column<R: std::io::Read>(
    reader: R,
    column: &ColumnRef,
    delimiter: u8,
) -> Result<(String, Vec<f64>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let (idx, name) = match column {
        ColumnRef::Name(n) => match headers.iter().position(|h| h == n) {
            Some(i) => (i, n.clone()),
            None => {
                return Err(Error::Parse {
                    row: 1,
                    column: n.clone(),
                    message: format!(
                        "no such column; header has [{}]",
                        headers.iter().collect::<Vec<_>>().join(", ")
                    ),
                })
            }
        },
        ColumnRef::Index(i) => match headers.get(*i) {
            Some(h) => (*i, h.to_string()),
            None => {
                return Err(Error::Parse {
                    row: 1,
                    column: i.to_string(),
                    message: format!("header has only {} columns", headers.len()),
                })
            }
        },
    };
    let mut values = Vec::new();
    for (k, record) in rdr.records().enumerate() {
        let row = k + 2;
        let record = record?;
        let cell = record.get(idx).ok_or_else(|| Error::Parse {
            row,
            column: name.clone(),
            message: "missing cell".into(),
        })?;
        let v: f64 = cell.parse().map_err(|_| Error::Parse {
            row,
            column: name.clone(),
            message: format!("`{cell}` is not a number"),
        })?;
        values.push(v);
    }
    Ok((name, values))
}

pub fn ingest(spec: &IngestSpec) -> Result<SampledSeries> {
    let file = std::fs::File::open(&spec.path)?;
    let (name, raw) = read_column(file, &spec.column, spec.delimiter)?;
    SampledSeries::from_raw(raw, name, spec.transform)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DATA: &str = "time_s,rho,frac_a\n0,1.5,0.5\n0.2,1.25,0.5\n0.4,2,0.5\n";

    #[test]
    fn by_name_and_index() {
        let (n, v) = read_column(DATA.as_bytes(), &ColumnRef::Name("rho".into()), b',').unwrap();
        assert_eq!(n, "rho");
        assert_eq!(v, vec![1.5, 1.25, 2.0]);
        let (n, v) = read_column(DATA.as_bytes(), &"2".parse().unwrap(), b',').unwrap();
        assert_eq!(n, "frac_a");
        assert_eq!(v, vec![0.5; 3]);
    }

    #[test]
    fn non_numeric_cell_reports_row() {
        let bad = "a,b\n1,2\n3,x\n";
        match read_column(bad.as_bytes(), &ColumnRef::Name("b".into()), b',') {
            Err(Error::Parse { row, column, .. }) => {
                assert_eq!(row, 3);
                assert_eq!(column, "b");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn missing_column() {
        assert!(matches!(
            read_column(DATA.as_bytes(), &ColumnRef::Name("price".into()), b','),
            Err(Error::Parse { row: 1, .. })
        ));
    }

    #[test]
    fn semicolon_delimiter() {
        let d = "p;q\n1;10\n2;20\n";
        let (_, v) = read_column(d.as_bytes(), &ColumnRef::Name("q".into()), b';').unwrap();
        assert_eq!(v, vec![10.0, 20.0]);
    }
}
