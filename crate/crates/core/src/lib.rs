//! Exposure fusion of bracketed LDR frames, with the tooling to benchmark it.
//!
//! The crate covers the whole experiment loop:
//!
//! - [`imgcore`]: planar float images, BT.601 YUV, PNG/PNM I/O, EV-labelled
//!   frame sequences and a synthetic bracket generator.
//! - [`weights`]: contrast, saturation and well-exposedness maps and their
//!   normalized combination.
//! - [`pyramid`]: Gaussian and Laplacian pyramids.
//! - [`fusion`]: Mertens, Fast YUV and the two single-scale methods, plus
//!   frame selection and mean/median stacking.
//! - [`metrics`]: PSNR, SSIM, MS-SSIM and ERGAS.
//! - [`bench`]: sweeps over the configuration space with runtime and peak
//!   allocation measurements, CSV records and grouped reports.
//! - [`cli`]: the `fusionbench` command line.

pub mod alloc;
pub mod bench;
pub mod cli;
pub mod error;
pub mod filter;
pub mod fusion;
pub mod imgcore;
pub mod metrics;
pub mod pyramid;
pub mod weights;

pub use error::{Error, Result};
pub use fusion::{fuse, FusionConfig, FusionMethod, StackingMethod};
pub use imgcore::{ColorSpace, Frame, FrameSequence, Image};
pub use metrics::MetricReport;
pub use weights::{WeightConfig, WeightKind, WeightSet};

#[cfg(test)]
#[global_allocator]
static ALLOC: alloc::CountingAllocator = alloc::CountingAllocator;
