//! Metadata headers and output sinks.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use catrand::Tolerances;
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub command: String,
    pub seed: u64,
    pub version: String,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

impl Metadata {
    pub fn new(command: &str, seed: u64, tolerances: Tolerances, deterministic: bool) -> Self {
        let timestamp_unix = if deterministic {
            None
        } else {
            SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs())
        };
        Self {
            command: command.to_string(),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances,
            timestamp_unix,
        }
    }

    /// `# key: value` lines for CSV output.
    pub fn csv_header(&self) -> String {
        let mut out = format!(
            "# command: {}\n# seed: {}\n# version: {}\n# tolerances: {}\n",
            self.command,
            self.seed,
            self.version,
            serde_json::to_string(&self.tolerances).expect("plain numbers")
        );
        if let Some(t) = self.timestamp_unix {
            out.push_str(&format!("# timestamp_unix: {t}\n"));
        }
        out
    }
}

/// One emitted document.
pub enum Document {
    Csv { name: String, body: String },
    Json(Value),
}

impl Document {
    fn render(&self, meta: &Metadata) -> String {
        match self {
            Document::Csv { body, .. } => format!("{}{body}", meta.csv_header()),
            Document::Json(report) => {
                let mut root = serde_json::Map::new();
                root.insert("metadata".into(), serde_json::to_value(meta).expect("serializable"));
                root.insert("report".into(), report.clone());
                format!("{}\n", serde_json::to_string_pretty(&Value::Object(root)).expect("serializable"))
            }
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Writes one document to `out` or stdout; several documents go to
/// `out/<name>.csv`, or are concatenated on stdout.
pub fn emit(docs: &[Document], meta: &Metadata, out: Option<&PathBuf>) -> Result<(), CliError> {
    match (out, docs) {
        (None, _) => {
            let mut stdout = std::io::stdout().lock();
            for d in docs {
                stdout.write_all(d.render(meta).as_bytes()).map_err(|e| CliError::Io(e.to_string()))?;
            }
            Ok(())
        }
        (Some(path), [single]) => std::fs::write(path, single.render(meta)).map_err(|e| io_error(path, e)),
        (Some(dir), many) => {
            std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
            for d in many {
                let name = match d {
                    Document::Csv { name, .. } => format!("{name}.csv"),
                    Document::Json(_) => format!("{}.json", meta.command),
                };
                let path = dir.join(name);
                std::fs::write(&path, d.render(meta)).map_err(|e| io_error(&path, e))?;
            }
            Ok(())
        }
    }
}
