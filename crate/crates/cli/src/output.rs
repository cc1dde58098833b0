//! Deterministic CSV, JSON and file output.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use mslab_core::constants::ScanRow;

use crate::error::{CliError, CliResult, ErrorKind};

pub const SCAN_CSV_HEADER: &str = "x,sum,main_term,error_term,ratio";

/// Writes `bytes` to a sibling temp file, syncs it, then renames over `path`.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let name = path
        .file_name()
        .ok_or_else(|| CliError::validation(format!("{} is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    {
        let mut f = File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Shortest representation that parses back to the same f64.
pub fn fmt_real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:?}")
    } else if v.is_nan() {
        "NaN".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.x,
            r.sum,
            fmt_real(r.main_term),
            fmt_real(r.error_term),
            fmt_real(r.ratio)
        ));
    }
    out
}

pub fn emit_scan_csv(rows: &[ScanRow], path: &Path) -> CliResult<()> {
    if rows.windows(2).any(|w| w[0].x >= w[1].x) {
        return Err(CliError::validation("scan rows must be strictly ascending in x"));
    }
    atomic_write(path, scan_csv(rows).as_bytes())
}

/// A numeric CSV table with a header row.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| CliError::validation("CSV input is empty"))?;
        let columns: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != columns.len() {
                return Err(CliError::validation(format!(
                    "CSV line {} has {} fields, header has {}",
                    i + 2,
                    cells.len(),
                    columns.len()
                )));
            }
            let row = cells
                .iter()
                .map(|c| {
                    c.trim().parse::<f64>().map_err(|_| {
                        CliError::validation(format!("CSV line {}: `{c}` is not a number", i + 2))
                    })
                })
                .collect::<CliResult<Vec<f64>>>()?;
            rows.push(row);
        }
        Ok(Table { columns, rows })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            CliError::new(ErrorKind::Io, format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn column(&self, name: &str) -> CliResult<Vec<f64>> {
        let idx = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| {
                CliError::validation(format!(
                    "field `{name}` not in CSV columns [{}]",
                    self.columns.join(", ")
                ))
            })?;
        Ok(self.rows.iter().map(|r| r[idx]).collect())
    }
}

/// The JSON summary printed (and for file-producing commands, written
/// beside the output).
#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub version: &'static str,
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    /// Only measured when MSLAB_TIMING=1 so that reruns stay byte-identical.
    pub wall_ms: Option<u64>,
    pub warnings: Vec<String>,
}

impl Summary {
    pub fn to_pretty(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("summary serializes");
        s.push('\n');
        s
    }
}

/// `<out>.summary.json` next to a data file.
pub fn summary_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".summary.json");
    out.with_file_name(name)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReportArtifact {
    pub csv_path: Option<PathBuf>,
    pub json_summary_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [0.1, 1.0 / 3.0, 1e-300, 123456789.0, -2.5e17] {
            assert_eq!(fmt_real(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_real(0.5), "0.5");
    }

    #[test]
    fn csv_single_and_empty() {
        assert_eq!(scan_csv(&[]), "x,sum,main_term,error_term,ratio\n");
        let row = ScanRow::new(10, 83, 80.5);
        let text = scan_csv(&[row]);
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().nth(1).unwrap().starts_with("10,83,80.5,2.5,"));
    }

    #[test]
    fn table_parse_and_lookup() {
        let t = Table::parse("x,ratio\n1,0.5\n10,0.25\n").unwrap();
        assert_eq!(t.column("ratio").unwrap(), vec![0.5, 0.25]);
        let err = t.column("nope").unwrap_err();
        assert!(err.message.contains("nope"));
        assert!(Table::parse("x,y\n1\n").is_err());
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a/b.txt");
        atomic_write(&p, b"one").unwrap();
        atomic_write(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }
}
