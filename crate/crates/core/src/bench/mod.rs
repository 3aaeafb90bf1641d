//! Configuration sweeps with runtime and peak-allocation measurement.
//!
//! [`enumerate_configs`] expands a [`SweepSpace`] into legal
//! [`FusionConfig`](crate::fusion::FusionConfig)s, [`run_sweep`] measures
//! each one on every scene of a dataset and scores it against the scene's
//! ground truth, and [`group_report`] averages the resulting
//! [`BenchRecord`]s into grouped tables.

mod measure;
mod record;
mod report;
mod space;
mod sweep;

pub use self::measure::{measure_fuse, median, Measurement, DEFAULT_REPEATS};
pub use self::record::{
    format_sig6, quantize, read_records, read_records_from, write_records, BenchRecord, ReadOutcome, RecordKey,
    RecordWriter, CSV_HEADER,
};
pub use self::report::{group_report, GroupBy, GroupReport, GroupedRow, Mark, METRIC_COLUMNS};
pub use self::space::{enumerate_configs, SweepSpace, WeightPolicy};
pub use self::sweep::{load_dataset, run_sweep, SweepOptions, SweepSummary};
