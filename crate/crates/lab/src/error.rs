use std::path::PathBuf;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    /// Malformed or semantically invalid configuration. `line` and `column`
    /// are 1-based and present when the problem has a position in the file.
    #[error("config error{}: {message}", location(.path, .line, .column))]
    Config {
        path: Option<PathBuf>,
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] multidraw_core::Error),
    /// A computed identity that must hold did not.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

fn location(path: &Option<PathBuf>, line: &Option<usize>, column: &Option<usize>) -> String {
    let mut out = String::new();
    if let Some(p) = path {
        out.push_str(&format!(" in {}", p.display()));
    }
    if let (Some(l), Some(c)) = (line, column) {
        out.push_str(&format!(" at line {l}, column {c}"));
    }
    out
}

impl LabError {
    pub fn config(message: impl Into<String>) -> Self {
        LabError::Config {
            path: None,
            line: None,
            column: None,
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn from_json(err: serde_json::Error, path: Option<PathBuf>) -> Self {
        LabError::Config {
            path,
            line: Some(err.line()).filter(|&l| l > 0),
            column: Some(err.column()).filter(|&c| c > 0),
            message: strip_position(&err.to_string()),
        }
    }

    pub(crate) fn with_path(self, p: PathBuf) -> Self {
        match self {
            LabError::Config {
                path: None,
                line,
                column,
                message,
            } => LabError::Config {
                path: Some(p),
                line,
                column,
                message,
            },
            other => other,
        }
    }

    pub fn is_config(&self) -> bool {
        matches!(self, LabError::Config { .. } | LabError::Core(_))
    }

    /// One-line JSON description for machine consumers.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            LabError::Config {
                path,
                line,
                column,
                message,
            } => json!({
                "error": "config",
                "path": path.as_ref().map(|p| p.display().to_string()),
                "line": line,
                "column": column,
                "message": message,
            }),
            LabError::Core(e) => json!({"error": "config", "message": e.to_string()}),
            LabError::Io { path, source } => json!({
                "error": "io",
                "path": path.display().to_string(),
                "message": source.to_string(),
            }),
            LabError::Csv(e) => json!({"error": "csv", "message": e.to_string()}),
            LabError::Invariant(m) => json!({"error": "invariant", "message": m}),
        }
    }
}

// serde_json appends " at line X column Y", which is reported separately
fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
