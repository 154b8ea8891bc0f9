//! Atomic file output: CSV tables and JSON manifests.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::CliError;

/// Writes `bytes` to `path` through a temporary file in the same directory
/// followed by a rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)
        .map_err(|e| CliError::io(format!("creating temporary file in {}", dir.display()), e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(format!("syncing {}", path.display()), e))?;
    tmp.persist(path).map_err(|e| CliError::io(format!("renaming into {}", path.display()), e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("manifest types serialize");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// In-memory RFC 4180 table with a header row. Floats are written in their
/// shortest round-trip form.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    width: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        writer.write_record(header).expect("writing to memory");
        Self { writer, width: header.len() }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.width);
        self.writer.write_record(values.iter().map(|v| format_float(*v))).expect("writing to memory");
    }

    pub fn text_row(&mut self, values: &[String]) {
        debug_assert_eq!(values.len(), self.width);
        self.writer.write_record(values).expect("writing to memory");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("flushing to memory")
    }

    pub fn write(self, path: &Path) -> Result<(), CliError> {
        write_atomic(path, &self.into_bytes())
    }
}

/// Shortest decimal that parses back to the same `f64` (`Debug` switches to
/// exponent notation for very large and very small magnitudes).
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}
