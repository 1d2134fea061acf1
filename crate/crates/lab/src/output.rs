//! CSV and JSON writers. Floats use Rust's shortest round-trip formatting,
//! so output is byte-identical for identical inputs.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{LabError, Result};

/// Writes a header row plus one row per record.
pub fn write_csv<T: Serialize, W: Write>(writer: W, rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(true).from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| LabError::io("<csv>", e))?;
    Ok(())
}

/// [`write_csv`] into a string, for stdout and tests.
pub fn csv_string<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn write_csv_file<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| LabError::io(path, e))?;
    write_csv(std::io::BufWriter::new(file), rows)
}

/// Writes CSV to `path`, or to stdout when there is none.
pub fn emit_csv<T: Serialize>(path: Option<&Path>, rows: &[T]) -> Result<()> {
    match path {
        Some(p) => write_csv_file(p, rows),
        None => write_csv(std::io::stdout().lock(), rows),
    }
}

pub fn emit_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| LabError::Invariant(e.to_string()))?;
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| LabError::io(p, e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| LabError::io("<stdout>", e)),
    }
}

/// `results.csv` becomes `results.trials.csv`.
pub fn trials_path(summary: &Path) -> PathBuf {
    let stem = summary
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    summary.with_file_name(format!("{stem}.trials.csv"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        a: f64,
        b: Option<u64>,
        c: String,
    }

    #[test]
    fn header_quoting_and_empty_options() {
        let rows = [Row {
            a: 0.1,
            b: None,
            c: "{\"pmf\":[0.5,0.5]}".into(),
        }];
        let s = csv_string(&rows).unwrap();
        assert_eq!(s, "a,b,c\n0.1,,\"{\"\"pmf\"\":[0.5,0.5]}\"\n");
    }

    #[test]
    fn trials_file_name() {
        assert_eq!(
            trials_path(Path::new("out/run.csv")),
            PathBuf::from("out/run.trials.csv")
        );
    }
}
