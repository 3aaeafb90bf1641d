use std::collections::HashSet;
use std::path::{Path, PathBuf};

use log::{info, warn};

use crate::bench::measure::measure_fuse;
use crate::bench::record::{read_records, write_records, BenchRecord, RecordKey, RecordWriter};
use crate::bench::space::{enumerate_configs, SweepSpace};
use crate::error::{Error, Result};
use crate::imgcore::{load_scene, Scene};
use crate::metrics::MetricReport;

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub repeats: usize,
    /// Append-only record CSV. Existing rows are kept and their
    /// (scene, config) pairs are not run again.
    pub csv: Option<PathBuf>,
}

/// Counts of what a sweep did.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepSummary {
    pub scenes: usize,
    pub configs: usize,
    pub measured: usize,
    pub resumed: usize,
    pub skipped: usize,
    pub failed: usize,
}

/// Subdirectories of `dataset`, sorted by name, that load as scenes with a
/// ground truth. Others are skipped with a warning.
pub fn load_dataset(dataset: &Path) -> Result<Vec<Scene>> {
    let entries = std::fs::read_dir(dataset).map_err(|e| Error::io(dataset, e))?;
    let mut dirs = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dataset, e))?;
        if entry.file_type().map_err(|e| Error::io(entry.path(), e))?.is_dir() {
            dirs.push(entry.path());
        }
    }
    dirs.sort();
    let mut scenes = Vec::new();
    for dir in dirs {
        match load_scene(&dir) {
            Ok(scene) if scene.gt.is_some() => scenes.push(scene),
            Ok(_) => warn!("skipping {}: no ground truth", dir.display()),
            Err(e) => warn!("skipping {}: {e}", dir.display()),
        }
    }
    if scenes.is_empty() {
        return Err(Error::EmptyDataset {
            path: dataset.to_path_buf(),
        });
    }
    Ok(scenes)
}

/// Loads existing records for resuming. A malformed tail (an interrupted
/// write) is dropped and the file rewritten without it.
fn resume(path: &Path) -> Result<Vec<BenchRecord>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let outcome = read_records(path)?;
    if let Some(reason) = &outcome.truncated {
        warn!("{}: dropping malformed tail ({reason})", path.display());
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        write_records(std::io::BufWriter::new(file), &outcome.records)?;
    }
    Ok(outcome.records)
}

/// Runs every configuration of `space` on every scene of `dataset`.
///
/// Returns all records in the CSV (resumed ones first) or, without a CSV,
/// the newly measured ones.
pub fn run_sweep(dataset: &Path, space: &SweepSpace, opts: &SweepOptions) -> Result<(Vec<BenchRecord>, SweepSummary)> {
    if opts.repeats == 0 {
        return Err(Error::config("repeats must be at least 1"));
    }
    let configs = enumerate_configs(space)?;
    let scenes = load_dataset(dataset)?;
    let mut records = match &opts.csv {
        Some(p) => resume(p)?,
        None => Vec::new(),
    };
    let done: HashSet<RecordKey> = records.iter().map(BenchRecord::key).collect();
    let mut writer = opts.csv.as_deref().map(RecordWriter::append).transpose()?;
    let mut summary = SweepSummary {
        scenes: scenes.len(),
        configs: configs.len(),
        ..Default::default()
    };
    for scene in &scenes {
        let gt = scene.gt.as_ref().expect("dataset scenes have ground truth");
        let available = scene.frames.positives().count();
        for cfg in &configs {
            if done.contains(&RecordKey::new(&scene.id, cfg)) {
                summary.resumed += 1;
                continue;
            }
            if cfg.n_positive > available {
                warn!(
                    "scene {}: only {available} EV>=0 frames, {} {} needs {}; skipped",
                    scene.id,
                    cfg.method,
                    cfg.weights.included(),
                    cfg.n_positive
                );
                summary.skipped += 1;
                continue;
            }
            let result = measure_fuse(&scene.frames, cfg, opts.repeats)
                .and_then(|m| Ok((MetricReport::compute(&m.image, gt)?, m)));
            let (metrics, m) = match result {
                Ok(v) => v,
                Err(e @ Error::Measurement(_)) => return Err(e),
                Err(e) => {
                    warn!("scene {}: {} {} failed: {e}", scene.id, cfg.method, cfg.weights.included());
                    summary.failed += 1;
                    continue;
                }
            };
            let record = BenchRecord::new(&scene.id, cfg, &metrics, m.runtime_s, m.peak_alloc_bytes);
            if let Some(w) = writer.as_mut() {
                w.push(&record)?;
            }
            records.push(record);
            summary.measured += 1;
        }
        info!("scene {} done", scene.id);
    }
    Ok((records, summary))
}
