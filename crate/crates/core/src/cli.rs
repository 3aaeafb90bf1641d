//! The `fusionbench` command line: `fuse`, `bench`, `metrics` and `synth`.
//!
//! Standard output carries `key=value` lines; diagnostics go to standard
//! error. Exit codes: 0 success, 1 I/O or environment failure, 2 usage or
//! configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench::{self, GroupBy, SweepOptions, SweepSpace};
use crate::error::{Error, Result};
use crate::fusion::{FusionConfig, FusionMethod, StackingMethod};
use crate::imgcore::{load_image, load_scene, save_image, write_synthetic_dataset};
use crate::metrics::MetricReport;
use crate::weights::WeightSet;

const RULES: &str = concat!(
    "Legal combinations:\n",
    "  methods:   mertens, fast-yuv, ssf-rgb, ssf-yuv\n",
    "  weights:   '+'-joined letters C (contrast), S (saturation), E (exposure)\n",
    "  frames:    1 to 5 EV>=0 frames, fused with the single EV<0 frame\n",
    "  stacking:  mean, median, none\n",
    "Rules:\n",
    "  - the saturation weight (S) is only applicable to mertens and ssf-rgb\n",
    "  - mean/median stacking is only applicable when using more than 1 EV>=0 frame\n",
    "Exit codes: 0 success, 1 I/O failure, 2 usage or configuration error.",
);

#[derive(Debug, Parser)]
#[command(name = "fusionbench", version, about = "Exposure fusion and its benchmark harness", after_help = RULES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fuse one scene with one configuration.
    #[command(after_help = RULES)]
    Fuse(FuseArgs),
    /// Sweep configurations over a dataset and write records and a grouped report.
    #[command(after_help = RULES)]
    Bench(BenchArgs),
    /// Compare a test image against a reference.
    #[command(after_help = RULES)]
    Metrics(MetricsArgs),
    /// Generate a synthetic dataset of EV brackets with ground truth.
    #[command(after_help = RULES)]
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
struct FuseArgs {
    /// Scene directory holding ev_<label>.png frames.
    scene_dir: PathBuf,
    /// Fusion method: mertens, fast-yuv, ssf-rgb or ssf-yuv.
    #[arg(long, default_value = "mertens")]
    method: FusionMethod,
    /// Weight maps, e.g. C+S+E or C+E. Defaults to the method's full set.
    #[arg(long)]
    weights: Option<WeightSet>,
    /// Number of EV>=0 frames (1-5).
    #[arg(long, default_value_t = 1)]
    frames: usize,
    /// Stacking of the EV>=0 frames: mean, median or none.
    #[arg(long, default_value = "none")]
    stacking: StackingMethod,
    /// Pyramid depth for mertens and fast-yuv. Defaults to floor(log2(min(W, H))) - 2.
    #[arg(long)]
    depth: Option<usize>,
    /// Timed runs; the reported runtime is their median.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    repeats: u32,
    /// Output image (.png, .ppm or .pgm).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Dataset directory of scene folders, each with ev_<label>.png frames and gt.png.
    dataset: PathBuf,
    /// `full` or a space file of `key = value` lines (methods, frames, stackings, weights).
    #[arg(long, default_value = "full")]
    space: String,
    /// Timed runs per configuration (median reported).
    #[arg(long, default_value_t = bench::DEFAULT_REPEATS as u32, value_parser = clap::value_parser!(u32).range(1..))]
    repeats: u32,
    /// Record CSV; appended to and resumed from if it exists.
    #[arg(long, default_value = "runs.csv")]
    out: PathBuf,
    /// Grouping: method_weights, frames_stacking or full.
    #[arg(long, default_value = "method_weights")]
    report: GroupBy,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    /// Image under test.
    test: PathBuf,
    /// Reference image.
    reference: PathBuf,
}

#[derive(Debug, Args)]
struct SynthArgs {
    /// Number of scenes.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    scenes: u32,
    /// Frame size as WxH.
    #[arg(long, default_value = "480x640", value_parser = parse_size)]
    size: (usize, usize),
    /// Comma-separated EV labels.
    #[arg(long, default_value = "-24,0,1,2,3,4", value_delimiter = ',', allow_hyphen_values = true)]
    evs: Vec<i32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory; scene_000, scene_001, ... are created inside it.
    #[arg(long)]
    out: PathBuf,
}

fn parse_size(s: &str) -> std::result::Result<(usize, usize), String> {
    let (w, h) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected WxH, got {s:?}"))?;
    let dim = |v: &str| match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(format!("bad dimension {v:?} in {s:?}")),
    };
    Ok((dim(w)?, dim(h)?))
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli.command, &mut stdout) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    }
}

fn run(command: Command, out: &mut impl Write) -> Result<()> {
    match command {
        Command::Fuse(a) => cmd_fuse(a, out),
        Command::Bench(a) => cmd_bench(a, out),
        Command::Metrics(a) => cmd_metrics(a, out),
        Command::Synth(a) => cmd_synth(a, out),
    }
}

fn emit(out: &mut impl Write, lines: &[(&str, String)]) -> Result<()> {
    for (k, v) in lines {
        writeln!(out, "{k}={v}").map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

fn cmd_fuse(a: FuseArgs, out: &mut impl Write) -> Result<()> {
    let weights = a.weights.unwrap_or(a.method.full_weights());
    let mut cfg = FusionConfig::new(a.method, weights, a.frames, a.stacking)?;
    cfg.pyramid_depth = a.depth;
    cfg.validate()?;
    let scene = load_scene(&a.scene_dir)?;
    let m = bench::measure_fuse(&scene.frames, &cfg, a.repeats as usize)?;
    save_image(&m.image, &a.out)?;
    emit(
        out,
        &[
            ("out", a.out.display().to_string()),
            ("runtime_s", format!("{:.6}", m.runtime_s)),
            ("peak_alloc_bytes", m.peak_alloc_bytes.to_string()),
        ],
    )
}

/// `<out stem>_<mode>.csv` and `.txt` next to the record CSV.
fn report_paths(out: &Path, mode: GroupBy) -> (PathBuf, PathBuf) {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "runs".into());
    let base = out.with_file_name(format!("{stem}_{mode}"));
    (base.with_extension("csv"), base.with_extension("txt"))
}

fn cmd_bench(a: BenchArgs, out: &mut impl Write) -> Result<()> {
    let space = SweepSpace::from_arg(&a.space)?;
    let opts = SweepOptions {
        repeats: a.repeats as usize,
        csv: Some(a.out.clone()),
    };
    let (records, summary) = bench::run_sweep(&a.dataset, &space, &opts)?;
    let mut lines = vec![
        ("scenes", summary.scenes.to_string()),
        ("configs", summary.configs.to_string()),
        ("measured", summary.measured.to_string()),
        ("resumed", summary.resumed.to_string()),
        ("skipped", summary.skipped.to_string()),
        ("failed", summary.failed.to_string()),
        ("records", records.len().to_string()),
        ("records_csv", a.out.display().to_string()),
    ];
    if !records.is_empty() {
        let report = bench::group_report(&records, a.report)?;
        let (csv_path, txt_path) = report_paths(&a.out, a.report);
        std::fs::write(&csv_path, report.to_csv()?).map_err(|e| Error::io(&csv_path, e))?;
        std::fs::write(&txt_path, report.to_table()).map_err(|e| Error::io(&txt_path, e))?;
        lines.push(("report_csv", csv_path.display().to_string()));
        lines.push(("report_txt", txt_path.display().to_string()));
    }
    emit(out, &lines)
}

fn cmd_metrics(a: MetricsArgs, out: &mut impl Write) -> Result<()> {
    let test = load_image(&a.test)?;
    let reference = load_image(&a.reference)?;
    let m = MetricReport::compute(&test, &reference)?;
    if m.ergas_skipped > 0 {
        log::warn!("ERGAS skipped {} reference channel(s) with ~zero mean", m.ergas_skipped);
    }
    emit(
        out,
        &[
            ("ms_ssim", format!("{:.6}", m.ms_ssim)),
            ("psnr_db", format!("{:.6}", m.psnr)),
            ("ergas", format!("{:.6}", m.ergas)),
        ],
    )
}

fn cmd_synth(a: SynthArgs, out: &mut impl Write) -> Result<()> {
    let (w, h) = a.size;
    let dirs = write_synthetic_dataset(&a.out, a.scenes as usize, w, h, &a.evs, a.seed)?;
    emit(
        out,
        &[
            ("scenes", dirs.len().to_string()),
            ("out", a.out.display().to_string()),
        ],
    )
}
