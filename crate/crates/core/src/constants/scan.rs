//! E(x) = Σ_{n≤x} f(n) − x·P(ln x) on geometric grids, with a JSON-lines
//! checkpoint so long scans can resume after interruption.

use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::main_term::{residue_main_term, Series};
use crate::arith::{short_interval_sum, summatory, SumKind, SummatoryResult};
use crate::error::{Error, Result};

/// One scan sample; serialized with the CSV column names.
pub type ScanRow = SummatoryResult;

fn sum_kind(series: Series) -> SumKind {
    match series {
        Series::D2 => SumKind::D2,
        Series::DCube => SumKind::DCube,
    }
}

pub fn error_term(x: u64, series: Series) -> Result<ScanRow> {
    if x < 2 {
        return Err(Error::InvalidInput(format!("x must be >= 2, got {x}")));
    }
    let sum = summatory(x, sum_kind(series))?;
    let main = residue_main_term(x as f64, series)?;
    Ok(ScanRow::new(x, sum, main))
}

/// x_i = round(x_from·(x_to/x_from)^{i/(points−1)}), endpoints exact.
pub fn geometric_grid(x_from: u64, x_to: u64, points: usize) -> Result<Vec<u64>> {
    if x_from < 10 || x_from >= x_to {
        return Err(Error::InvalidInput(format!(
            "need 10 <= from < to, got from = {x_from}, to = {x_to}"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 points, got {points}")));
    }
    let (la, lb) = ((x_from as f64).ln(), (x_to as f64).ln());
    let last = points - 1;
    let grid: Vec<u64> = (0..points)
        .map(|i| match i {
            0 => x_from,
            i if i == last => x_to,
            i => (la + (lb - la) * i as f64 / last as f64).exp().round() as u64,
        })
        .collect();
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(format!(
            "{points} points do not fit strictly between {x_from} and {x_to}"
        )));
    }
    Ok(grid)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanOutcome {
    pub rows: Vec<ScanRow>,
    /// Rows taken from an existing checkpoint.
    pub resumed: usize,
    pub warnings: Vec<String>,
}

/// Scan without a checkpoint.
pub fn scan_error_term(x_from: u64, x_to: u64, points: usize, series: Series) -> Result<Vec<ScanRow>> {
    Ok(scan_error_term_with_checkpoint(x_from, x_to, points, series, None)?.rows)
}

pub fn scan_error_term_with_checkpoint(
    x_from: u64,
    x_to: u64,
    points: usize,
    series: Series,
    checkpoint: Option<&Path>,
) -> Result<ScanOutcome> {
    let grid = geometric_grid(x_from, x_to, points)?;
    let mut warnings = Vec::new();
    let mut rows = match checkpoint {
        Some(path) => load_checkpoint(path, &grid, &mut warnings)?,
        None => Vec::new(),
    };
    let resumed = rows.len();
    let mut sink = match checkpoint {
        Some(path) => Some(open_checkpoint(path, &rows)?),
        None => None,
    };
    let mut record = |row: ScanRow, rows: &mut Vec<ScanRow>| -> Result<()> {
        if let Some(file) = sink.as_mut() {
            let mut line = serde_json::to_string(&row).map_err(|e| Error::Integrity(e.to_string()))?;
            line.push('\n');
            file.write_all(line.as_bytes())?;
            file.sync_data()?;
        }
        rows.push(row);
        Ok(())
    };

    let pending = &grid[resumed..];
    match series {
        Series::D2 => {
            // rows are independent; compute a batch in parallel, record in order
            let batch = rayon::current_num_threads().max(1);
            for chunk in pending.chunks(batch) {
                let done: Vec<ScanRow> = chunk
                    .par_iter()
                    .map(|&x| error_term(x, series))
                    .collect::<Result<_>>()?;
                for row in done {
                    record(row, &mut rows)?;
                }
            }
        }
        Series::DCube => {
            // running sum extended one interval at a time
            let (mut prev_x, mut acc) = match rows.last() {
                Some(r) => (r.x, r.sum),
                None => (0, 0),
            };
            for &x in pending {
                let add = short_interval_sum(prev_x, x - prev_x, SumKind::DCube)?;
                acc = acc
                    .checked_add(add)
                    .ok_or(Error::Overflow("d_cube running sum"))?;
                prev_x = x;
                let main = residue_main_term(x as f64, series)?;
                record(ScanRow::new(x, acc, main), &mut rows)?;
            }
        }
    }
    Ok(ScanOutcome {
        rows,
        resumed,
        warnings,
    })
}

/// Reads the completed rows of a checkpoint. A final line lacking its newline
/// is an interrupted write and is dropped; anything else that does not parse
/// or does not follow the grid is corruption.
fn load_checkpoint(path: &Path, grid: &[u64], warnings: &mut Vec<String>) -> Result<Vec<ScanRow>> {
    let mut text = String::new();
    match File::open(path) {
        Ok(f) => {
            BufReader::new(f).read_to_string(&mut text)?;
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    }
    let complete = match text.rfind('\n') {
        Some(i) => i + 1,
        None => 0,
    };
    if complete < text.len() {
        warnings.push(format!(
            "checkpoint {} ended in a partial line; it was discarded",
            path.display()
        ));
    }
    let mut rows: Vec<ScanRow> = Vec::new();
    for (i, line) in text[..complete].as_bytes().lines().enumerate() {
        let line = line?;
        let row: ScanRow = serde_json::from_str(&line).map_err(|e| {
            Error::Integrity(format!("checkpoint {} line {}: {e}", path.display(), i + 1))
        })?;
        match grid.get(i) {
            Some(&x) if x == row.x => rows.push(row),
            _ => {
                return Err(Error::Integrity(format!(
                    "checkpoint {} line {} has x = {} which is not grid point {} of this scan",
                    path.display(),
                    i + 1,
                    row.x,
                    i + 1
                )))
            }
        }
    }
    Ok(rows)
}

/// Rewrites the checkpoint to exactly `rows` (dropping any torn tail), then
/// reopens it for appending.
fn open_checkpoint(path: &Path, rows: &[ScanRow]) -> Result<File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("jsonl.tmp");
    {
        let mut f = File::create(&tmp)?;
        for row in rows {
            let line = serde_json::to_string(row).map_err(|e| Error::Integrity(e.to_string()))?;
            writeln!(f, "{line}")?;
        }
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(OpenOptions::new().append(true).open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_construction() {
        assert_eq!(geometric_grid(10_000, 1_000_000, 3).unwrap(), vec![10_000, 100_000, 1_000_000]);
        assert!(geometric_grid(5, 100, 3).is_err());
        assert!(geometric_grid(100, 100, 3).is_err());
        assert!(geometric_grid(10, 100, 1).is_err());
        assert!(geometric_grid(10, 12, 10).is_err());
    }

    #[test]
    fn error_term_at_ten() {
        let row = error_term(10, Series::D2).unwrap();
        assert_eq!(row.sum, 83);
        let main = residue_main_term(10.0, Series::D2).unwrap();
        assert_eq!(row.error_term, 83.0 - main);
        assert!(error_term(2, Series::D2).unwrap().ratio.is_finite());
    }

    #[test]
    fn dcube_incremental_matches_direct() {
        let rows = scan_error_term(10, 5000, 6, Series::DCube).unwrap();
        for r in rows {
            assert_eq!(r.sum, crate::arith::summatory_direct(r.x, SumKind::DCube).unwrap());
        }
    }
}
