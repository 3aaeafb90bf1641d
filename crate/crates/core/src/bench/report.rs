use std::fmt;
use std::str::FromStr;

use crate::bench::record::{format_sig6, BenchRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    /// One row per method and weight set.
    MethodWeights,
    /// One row per frame count and stacking method.
    FramesStacking,
    /// One row per method, weight set, stacking and frame count.
    Full,
}

impl GroupBy {
    pub const ALL: [GroupBy; 3] = [GroupBy::MethodWeights, GroupBy::FramesStacking, GroupBy::Full];

    pub fn name(self) -> &'static str {
        match self {
            GroupBy::MethodWeights => "method_weights",
            GroupBy::FramesStacking => "frames_stacking",
            GroupBy::Full => "full",
        }
    }

    pub fn key_columns(self) -> &'static [&'static str] {
        match self {
            GroupBy::MethodWeights => &["method", "weights"],
            GroupBy::FramesStacking => &["n_positive", "stacking"],
            GroupBy::Full => &["method", "weights", "stacking", "n_positive"],
        }
    }

    fn key(self, r: &BenchRecord) -> Vec<String> {
        match self {
            GroupBy::MethodWeights => vec![r.method.to_string(), r.weights.to_string()],
            GroupBy::FramesStacking => vec![r.n_positive.to_string(), r.stacking.to_string()],
            GroupBy::Full => vec![
                r.method.to_string(),
                r.weights.to_string(),
                r.stacking.to_string(),
                r.n_positive.to_string(),
            ],
        }
    }
}

impl fmt::Display for GroupBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GroupBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GroupBy::ALL
            .into_iter()
            .find(|g| g.name() == s.trim())
            .ok_or_else(|| Error::config(format!("unknown report mode {s:?}; expected method_weights, frames_stacking or full")))
    }
}

/// Averaged columns, in report order, and whether larger is better.
pub const METRIC_COLUMNS: [(&str, bool); 5] = [
    ("ms_ssim", true),
    ("psnr_db", true),
    ("ergas", false),
    ("runtime_s", false),
    ("peak_alloc_mb", false),
];

fn metric_values(r: &BenchRecord) -> [f64; 5] {
    [r.ms_ssim, r.psnr, r.ergas, r.runtime_s, r.peak_alloc_bytes as f64 / 1e6]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mark {
    Best,
    Worst,
    Plain,
}

impl Mark {
    pub fn symbol(self) -> &'static str {
        match self {
            Mark::Best => "*",
            Mark::Worst => "_",
            Mark::Plain => "",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupedRow {
    pub key: Vec<String>,
    pub count: usize,
    /// Means in [`METRIC_COLUMNS`] order.
    pub means: [f64; 5],
    pub marks: [Mark; 5],
}

impl GroupedRow {
    pub fn mean(&self, column: &str) -> Option<f64> {
        METRIC_COLUMNS.iter().position(|(c, _)| *c == column).map(|i| self.means[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupReport {
    pub group_by: GroupBy,
    pub rows: Vec<GroupedRow>,
}

/// Means every metric per group, groups in order of first appearance, and
/// marks each column's best (`*`) and worst (`_`) rows. Tied rows all get the
/// same mark; a column whose rows are all equal is marked best throughout.
pub fn group_report(records: &[BenchRecord], group_by: GroupBy) -> Result<GroupReport> {
    if records.is_empty() {
        return Err(Error::invalid("no records to group"));
    }
    let mut keys: Vec<Vec<String>> = Vec::new();
    let mut sums: Vec<([f64; 5], usize)> = Vec::new();
    for r in records {
        let key = group_by.key(r);
        let i = match keys.iter().position(|k| *k == key) {
            Some(i) => i,
            None => {
                keys.push(key);
                sums.push(([0.0; 5], 0));
                keys.len() - 1
            }
        };
        for (s, v) in sums[i].0.iter_mut().zip(metric_values(r)) {
            *s += v;
        }
        sums[i].1 += 1;
    }
    let mut rows: Vec<GroupedRow> = keys
        .into_iter()
        .zip(sums)
        .map(|(key, (s, count))| GroupedRow {
            key,
            count,
            means: s.map(|v| v / count as f64),
            marks: [Mark::Plain; 5],
        })
        .collect();
    for (c, &(_, higher_better)) in METRIC_COLUMNS.iter().enumerate() {
        let values = rows.iter().map(|r| r.means[c]);
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
        let (best, worst) = if higher_better { (hi, lo) } else { (lo, hi) };
        for row in &mut rows {
            let v = row.means[c];
            row.marks[c] = if v == best {
                Mark::Best
            } else if v == worst {
                Mark::Worst
            } else {
                Mark::Plain
            };
        }
    }
    Ok(GroupReport { group_by, rows })
}

impl GroupReport {
    /// Key columns, record count, then each mean followed by its mark column.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let err = |e: csv::Error| Error::Csv {
            path: "<report>".into(),
            reason: e.to_string(),
        };
        let mut header: Vec<String> = self.group_by.key_columns().iter().map(|s| s.to_string()).collect();
        header.push("records".into());
        for (c, _) in METRIC_COLUMNS {
            header.push(c.to_string());
            header.push(format!("{c}_mark"));
        }
        w.write_record(&header).map_err(err)?;
        for row in &self.rows {
            let mut cells = row.key.clone();
            cells.push(row.count.to_string());
            for (m, mark) in row.means.iter().zip(row.marks) {
                cells.push(format_sig6(*m));
                cells.push(mark.symbol().to_string());
            }
            w.write_record(&cells).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| err(e.into_error().into()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    /// Aligned plain-text table; `*` marks a column's best, `_` its worst.
    pub fn to_table(&self) -> String {
        let keys = self.group_by.key_columns().len();
        let mut header: Vec<String> = self.group_by.key_columns().iter().map(|s| s.to_string()).collect();
        header.push("records".into());
        // Trailing space keeps names above the digits, not the mark column.
        header.extend(METRIC_COLUMNS.iter().map(|(c, _)| format!("{c} ")));
        let mut cells: Vec<Vec<String>> = vec![header];
        for row in &self.rows {
            let mut line = row.key.clone();
            line.push(row.count.to_string());
            for (m, mark) in row.means.iter().zip(row.marks) {
                let sym = match mark {
                    Mark::Plain => " ",
                    m => m.symbol(),
                };
                line.push(format!("{}{sym}", format_sig6(*m)));
            }
            cells.push(line);
        }
        let widths: Vec<usize> = (0..cells[0].len())
            .map(|c| cells.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::from("# SSIM terms on BT.601 luma; PSNR and ERGAS on RGB. * best, _ worst.\n");
        for line in &cells {
            let mut text = String::new();
            for (c, cell) in line.iter().enumerate() {
                if c > 0 {
                    text.push_str("  ");
                }
                if c < keys {
                    text.push_str(&format!("{cell:<w$}", w = widths[c]));
                } else {
                    text.push_str(&format!("{cell:>w$}", w = widths[c]));
                }
            }
            out.push_str(text.trim_end());
            out.push('\n');
        }
        out
    }
}
