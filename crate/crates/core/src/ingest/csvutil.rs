use std::fs::File;
use std::path::{Path, PathBuf};

use super::{IngestError, Location, Result};

/// A CSV file opened with its header indexed by trimmed column name.
pub(crate) struct HeaderedCsv {
    pub path: PathBuf,
    pub headers: Vec<String>,
    reader: csv::Reader<File>,
}

impl HeaderedCsv {
    pub fn open(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| IngestError::io(path, e))?;
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(file);
        let headers = reader
            .headers()
            .map_err(|source| IngestError::Csv {
                path: path.to_path_buf(),
                source,
            })?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        Ok(HeaderedCsv {
            path: path.to_path_buf(),
            headers,
            reader,
        })
    }

    pub fn column(&self, name: &str) -> Result<usize> {
        self.optional_column(name)
            .ok_or_else(|| IngestError::MissingColumn {
                path: self.path.clone(),
                column: name.to_string(),
            })
    }

    pub fn optional_column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    /// Visits every data row with its 1-based physical line number.
    pub fn for_each_row(
        &mut self,
        mut f: impl FnMut(&Row<'_>) -> Result<()>,
    ) -> Result<()> {
        let mut record = csv::StringRecord::new();
        loop {
            let more = self
                .reader
                .read_record(&mut record)
                .map_err(|source| IngestError::Csv {
                    path: self.path.clone(),
                    source,
                })?;
            if !more {
                return Ok(());
            }
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let row = Row {
                path: &self.path,
                headers: &self.headers,
                record: &record,
                line,
            };
            f(&row)?;
        }
    }
}

pub(crate) struct Row<'a> {
    pub path: &'a Path,
    headers: &'a [String],
    record: &'a csv::StringRecord,
    pub line: u64,
}

impl Row<'_> {
    pub fn location(&self) -> Location {
        Location::Line(self.line)
    }

    pub fn text(&self, idx: usize) -> &str {
        self.record.get(idx).unwrap_or("")
    }

    fn parse_error(&self, idx: usize) -> IngestError {
        IngestError::Parse {
            path: self.path.to_path_buf(),
            location: self.location(),
            column: self.headers.get(idx).cloned().unwrap_or_default(),
            value: self.text(idx).to_string(),
        }
    }

    pub fn number(&self, idx: usize) -> Result<f64> {
        self.text(idx).parse::<f64>().map_err(|_| self.parse_error(idx))
    }

    /// A number that may be blank; blank cells yield `None`.
    pub fn optional_number(&self, idx: usize) -> Result<Option<f64>> {
        if self.text(idx).is_empty() {
            Ok(None)
        } else {
            self.number(idx).map(Some)
        }
    }

    /// A non-negative integer; accepts `12` and `12.0`.
    pub fn index(&self, idx: usize) -> Result<u64> {
        let text = self.text(idx);
        if let Ok(v) = text.parse::<u64>() {
            return Ok(v);
        }
        match text.parse::<f64>() {
            Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
            _ => Err(self.parse_error(idx)),
        }
    }

    pub fn finite(&self, idx: usize) -> Result<f64> {
        let v = self.number(idx)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(IngestError::invalid(
                self.path,
                self.location(),
                format!("column `{}` must be finite, got {v}", self.headers[idx]),
            ))
        }
    }
}

/// Formats a float so that parsing the text gives back the same value.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub(crate) fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| IngestError::io(path, e))?;
    Ok(csv::WriterBuilder::new().from_writer(file))
}

pub(crate) fn write_row<I, S>(w: &mut csv::Writer<File>, path: &Path, fields: I) -> Result<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    w.write_record(fields).map_err(|source| IngestError::Csv {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn finish(mut w: csv::Writer<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| IngestError::io(path, e))
}
