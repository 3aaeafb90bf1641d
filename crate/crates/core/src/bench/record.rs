use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fusion::{FusionConfig, FusionMethod, StackingMethod};
use crate::metrics::MetricReport;
use crate::weights::WeightSet;

pub const CSV_HEADER: [&str; 10] = [
    "scene",
    "method",
    "weights",
    "n_positive",
    "stacking",
    "ms_ssim",
    "psnr_db",
    "ergas",
    "runtime_s",
    "peak_alloc_bytes",
];

/// Rounds to 6 significant digits, the precision records are stored at.
pub fn quantize(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

/// Shortest text that parses back to `quantize(x)`.
pub fn format_sig6(x: f64) -> String {
    format!("{}", quantize(x))
}

/// Identity of a record for resuming: scene plus configuration.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecordKey {
    pub scene: String,
    pub method: FusionMethod,
    pub weights: WeightSet,
    pub n_positive: usize,
    pub stacking: StackingMethod,
}

impl RecordKey {
    pub fn new(scene: &str, cfg: &FusionConfig) -> Self {
        Self {
            scene: scene.to_string(),
            method: cfg.method,
            weights: cfg.weights.included(),
            n_positive: cfg.n_positive,
            stacking: cfg.stacking,
        }
    }
}

/// One scene x configuration result. Floats are held at the 6 significant
/// digits they are written with, so a CSV round trip is exact.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub scene: String,
    pub method: FusionMethod,
    pub weights: WeightSet,
    pub n_positive: usize,
    pub stacking: StackingMethod,
    pub ms_ssim: f64,
    pub psnr: f64,
    pub ergas: f64,
    pub runtime_s: f64,
    pub peak_alloc_bytes: u64,
}

impl BenchRecord {
    pub fn new(scene: &str, cfg: &FusionConfig, metrics: &MetricReport, runtime_s: f64, peak_alloc_bytes: u64) -> Self {
        Self {
            scene: scene.to_string(),
            method: cfg.method,
            weights: cfg.weights.included(),
            n_positive: cfg.n_positive,
            stacking: cfg.stacking,
            ms_ssim: quantize(metrics.ms_ssim),
            psnr: quantize(metrics.psnr),
            ergas: quantize(metrics.ergas),
            runtime_s: quantize(runtime_s),
            peak_alloc_bytes,
        }
    }

    pub fn key(&self) -> RecordKey {
        RecordKey {
            scene: self.scene.clone(),
            method: self.method,
            weights: self.weights,
            n_positive: self.n_positive,
            stacking: self.stacking,
        }
    }

    pub fn to_row(&self) -> [String; 10] {
        [
            self.scene.clone(),
            self.method.to_string(),
            self.weights.to_string(),
            self.n_positive.to_string(),
            self.stacking.to_string(),
            format_sig6(self.ms_ssim),
            format_sig6(self.psnr),
            format_sig6(self.ergas),
            format_sig6(self.runtime_s),
            self.peak_alloc_bytes.to_string(),
        ]
    }

    pub fn from_row(row: &csv::StringRecord) -> std::result::Result<Self, String> {
        if row.len() != CSV_HEADER.len() {
            return Err(format!("expected {} fields, got {}", CSV_HEADER.len(), row.len()));
        }
        let float = |i: usize| -> std::result::Result<f64, String> {
            let v: f64 = row[i].parse().map_err(|_| format!("{}: bad number {:?}", CSV_HEADER[i], &row[i]))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("{}: not finite", CSV_HEADER[i]))
            }
        };
        let text = |e: Error| e.to_string();
        Ok(Self {
            scene: row[0].to_string(),
            method: row[1].parse().map_err(text)?,
            weights: row[2].parse().map_err(text)?,
            n_positive: row[3].parse().map_err(|_| format!("n_positive: bad count {:?}", &row[3]))?,
            stacking: row[4].parse().map_err(text)?,
            ms_ssim: float(5)?,
            psnr: float(6)?,
            ergas: float(7)?,
            runtime_s: float(8)?,
            peak_alloc_bytes: row[9].parse().map_err(|_| format!("peak_alloc_bytes: bad count {:?}", &row[9]))?,
        })
    }
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

/// Writes header plus records.
pub fn write_records<W: Write>(out: W, records: &[BenchRecord]) -> Result<()> {
    let mut w = writer(out);
    let err = |e: csv::Error| Error::Csv {
        path: "<stream>".into(),
        reason: e.to_string(),
    };
    w.write_record(CSV_HEADER).map_err(err)?;
    for r in records {
        w.write_record(r.to_row()).map_err(err)?;
    }
    w.flush().map_err(|e| err(e.into()))?;
    Ok(())
}

/// Records that parsed, plus whether the file ended in a malformed row.
#[derive(Debug)]
pub struct ReadOutcome {
    pub records: Vec<BenchRecord>,
    pub truncated: Option<String>,
}

/// Reads a record CSV. A malformed row stops reading and is reported in
/// [`ReadOutcome::truncated`]; a wrong header is an error.
pub fn read_records(path: &Path) -> Result<ReadOutcome> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_records_from(BufReader::new(file), path)
}

pub fn read_records_from<R: std::io::Read>(input: R, path: &Path) -> Result<ReadOutcome> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut rows = rdr.records();
    let csv_err = |reason: String| Error::Csv {
        path: path.to_path_buf(),
        reason,
    };
    match rows.next() {
        None => {
            return Ok(ReadOutcome {
                records: Vec::new(),
                truncated: None,
            })
        }
        Some(Err(e)) => return Err(csv_err(e.to_string())),
        Some(Ok(h)) => {
            if h.iter().ne(CSV_HEADER) {
                return Err(csv_err(format!("unexpected header {:?}", h.iter().collect::<Vec<_>>())));
            }
        }
    }
    let mut records = Vec::new();
    for (i, row) in rows.enumerate() {
        let parsed = row.map_err(|e| e.to_string()).and_then(|r| BenchRecord::from_row(&r));
        match parsed {
            Ok(r) => records.push(r),
            Err(reason) => {
                return Ok(ReadOutcome {
                    records,
                    truncated: Some(format!("row {}: {reason}", i + 2)),
                })
            }
        }
    }
    Ok(ReadOutcome {
        records,
        truncated: None,
    })
}

/// Appends records to an open CSV, one flushed line each.
pub struct RecordWriter {
    inner: csv::Writer<File>,
    path: std::path::PathBuf,
}

impl RecordWriter {
    /// Opens `path` for appending. The header is written if the file is
    /// new or empty.
    pub fn append(path: &Path) -> Result<Self> {
        let file = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::io(path, e))?;
        let empty = file.metadata().map_err(|e| Error::io(path, e))?.len() == 0;
        let mut w = Self {
            inner: writer(file),
            path: path.to_path_buf(),
        };
        if empty {
            w.write_row(CSV_HEADER.map(String::from))?;
        }
        Ok(w)
    }

    fn write_row(&mut self, row: [String; 10]) -> Result<()> {
        let path = &self.path;
        let err = |reason: String| Error::Csv {
            path: path.clone(),
            reason,
        };
        self.inner.write_record(row).map_err(|e| err(e.to_string()))?;
        self.inner.flush().map_err(|e| err(e.to_string()))
    }

    pub fn push(&mut self, record: &BenchRecord) -> Result<()> {
        self.write_row(record.to_row())
    }
}
