//! CSV input: a header row, numeric feature cells, one label column.

use std::path::{Path, PathBuf};

use cart_elc_core::data::{discretize_label, DISCRETIZED_CLASS_NAMES};
use cart_elc_core::Dataset;

use crate::error::{CliError, Result};

/// Cell values read as missing.
pub const MISSING_TOKENS: [&str; 4] = ["", "NA", "NaN", "?"];

/// Feature names and cells, `None` where missing.
pub type FeatureCells = (Vec<String>, Vec<Vec<Option<f64>>>);

/// A parsed CSV file: header plus string cells.
#[derive(Debug, Clone)]
pub struct Table {
    pub path: PathBuf,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Which column holds the labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Last,
    Named(String),
}

impl LabelColumn {
    pub fn parse(s: &str) -> Self {
        if s == "last" {
            LabelColumn::Last
        } else {
            LabelColumn::Named(s.to_string())
        }
    }
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Input {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_bytes(path, &bytes)
    }

    pub fn from_bytes(path: &Path, bytes: &[u8]) -> Result<Self> {
        let parse_error = |message: String| CliError::Parse {
            path: path.to_path_buf(),
            message,
        };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(bytes);
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| parse_error(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if headers.is_empty() || headers.iter().all(String::is_empty) {
            return Err(parse_error("missing header row".into()));
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| parse_error(e.to_string()))?;
            rows.push(record.iter().map(str::to_string).collect());
        }
        if rows.is_empty() {
            return Err(CliError::Core(cart_elc_core::Error::EmptyDataset));
        }
        Ok(Self {
            path: path.to_path_buf(),
            headers,
            rows,
        })
    }

    pub fn column_index(&self, label: &LabelColumn) -> Result<usize> {
        match label {
            LabelColumn::Last => Ok(self.headers.len() - 1),
            LabelColumn::Named(name) => self
                .headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| CliError::Usage(format!("{}: no column named {name:?}", self.path.display()))),
        }
    }

    fn parse_error(&self, row: usize, column: usize, message: impl Into<String>) -> CliError {
        CliError::Parse {
            path: self.path.clone(),
            message: format!(
                "line {}, column {:?}: {}",
                row + 2,
                self.headers[column],
                message.into()
            ),
        }
    }

    fn cell(&self, row: usize, column: usize) -> Result<Option<f64>> {
        let raw = &self.rows[row][column];
        if MISSING_TOKENS.contains(&raw.as_str()) {
            return Ok(None);
        }
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Some(v)),
            _ => Err(self.parse_error(row, column, format!("{raw:?} is not a number"))),
        }
    }

    /// Numeric cells of every column except `skip`, one row per record.
    pub fn features(&self, skip: Option<usize>) -> Result<FeatureCells> {
        let columns: Vec<usize> = (0..self.headers.len()).filter(|&j| Some(j) != skip).collect();
        let names = columns.iter().map(|&j| self.headers[j].clone()).collect();
        let mut rows = Vec::with_capacity(self.rows.len());
        for i in 0..self.rows.len() {
            if self.rows[i].len() != self.headers.len() {
                return Err(CliError::Parse {
                    path: self.path.clone(),
                    message: format!(
                        "line {} has {} cells, expected {}",
                        i + 2,
                        self.rows[i].len(),
                        self.headers.len()
                    ),
                });
            }
            rows.push(columns.iter().map(|&j| self.cell(i, j)).collect::<Result<_>>()?);
        }
        Ok((names, rows))
    }

    /// Dataset whose classes are the distinct label strings, in order of
    /// first appearance.
    pub fn to_dataset(&self, label: &LabelColumn) -> Result<Dataset> {
        let column = self.column_index(label)?;
        let (names, rows) = self.features(Some(column))?;
        if names.is_empty() {
            return Err(CliError::Usage("no feature columns besides the label".into()));
        }
        let labelled = rows
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let y = &self.rows[i][column];
                if MISSING_TOKENS.contains(&y.as_str()) {
                    Err(self.parse_error(i, column, "missing label"))
                } else {
                    Ok((row, y.clone()))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset::from_labeled_rows(names, labelled)?)
    }

    /// Dataset with a numeric label column split at `threshold` into the
    /// classes `one` (below) and `two` (at or above).
    pub fn to_discretized_dataset(&self, label: &LabelColumn, threshold: f64) -> Result<Dataset> {
        let column = self.column_index(label)?;
        let (names, rows) = self.features(Some(column))?;
        let values = (0..self.rows.len())
            .map(|i| self.cell(i, column))
            .collect::<Result<Vec<_>>>()?;
        let labels = discretize_label(&values, threshold)?;
        let classes = DISCRETIZED_CLASS_NAMES.iter().map(|s| s.to_string()).collect();
        Ok(Dataset::new(names, rows, labels, classes)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str) -> Result<Table> {
        Table::from_bytes(Path::new("t.csv"), text.as_bytes())
    }

    #[test]
    fn missing_tokens_and_labels() {
        let t = table("a,b,y\n1,?,x\nNA,2,z\n,NaN,x\n").unwrap();
        let d = t.to_dataset(&LabelColumn::Last).unwrap();
        assert_eq!((d.n(), d.m()), (3, 2));
        assert_eq!(d.get(0, 1), None);
        assert_eq!(d.get(1, 0), None);
        assert_eq!(d.class_names(), &["x".to_string(), "z".to_string()]);
        assert_eq!(d.labels(), &[0, 1, 0]);

        let d = t.to_dataset(&LabelColumn::Named("a".into()));
        assert!(d.is_err());
    }

    #[test]
    fn named_label_column_in_the_middle() {
        let t = table("a,y,b\n1,p,2\n3,q,4\n").unwrap();
        let d = t.to_dataset(&LabelColumn::Named("y".into())).unwrap();
        assert_eq!(d.feature_names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(d.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn bad_cells_report_their_position() {
        let t = table("a,y\n1,p\nfoo,q\n").unwrap();
        let err = t.to_dataset(&LabelColumn::Last).unwrap_err().to_string();
        assert!(err.contains("line 3") && err.contains("\"a\""), "{err}");
        assert!(table("a,y\n").is_err());
        assert!(table("a,y\n1,p\n2\n").is_err());
    }

    #[test]
    fn discretized_labels() {
        let t = table("x,price\n1,20999\n2,21000\n3,5000\n").unwrap();
        let d = t.to_discretized_dataset(&LabelColumn::Last, 21000.0).unwrap();
        assert_eq!(d.labels(), &[0, 1, 0]);
        assert_eq!(d.class_names(), &["one".to_string(), "two".to_string()]);
    }
}
