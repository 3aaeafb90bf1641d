use std::time::Instant;

use crate::alloc::{self, AllocScope};
use crate::error::{Error, Result};
use crate::fusion::{fuse, FusionConfig};
use crate::imgcore::{FrameSequence, Image};

pub const DEFAULT_REPEATS: usize = 10;

#[derive(Debug, Clone)]
pub struct Measurement {
    /// Output of the last timed run.
    pub image: Image,
    /// Median wall-clock seconds over the timed runs.
    pub runtime_s: f64,
    /// Largest allocation high-water mark of a single fuse call.
    pub peak_alloc_bytes: u64,
}

/// Runs [`fuse`] once untimed, then `repeats` timed times on this thread.
///
/// Peak allocation needs [`alloc::CountingAllocator`] as the global
/// allocator; without it this returns [`Error::Measurement`].
pub fn measure_fuse(seq: &FrameSequence, cfg: &FusionConfig, repeats: usize) -> Result<Measurement> {
    if repeats == 0 {
        return Err(Error::config("repeats must be at least 1"));
    }
    if !alloc::is_installed() {
        return Err(Error::Measurement(
            "allocation tracking is not installed; register fusionbench::alloc::CountingAllocator as #[global_allocator]"
                .into(),
        ));
    }
    drop(fuse(seq, cfg)?);
    let mut times = Vec::with_capacity(repeats);
    let mut peak = 0usize;
    let mut last = None;
    for _ in 0..repeats {
        drop(last.take());
        let scope = AllocScope::begin();
        let start = Instant::now();
        let out = fuse(seq, cfg)?;
        let elapsed = start.elapsed().as_secs_f64();
        peak = peak.max(scope.peak());
        times.push(elapsed);
        last = Some(out);
    }
    let runtime_s = median(&mut times);
    if !(runtime_s > 0.0 && runtime_s.is_finite()) {
        return Err(Error::Measurement(format!("clock reported a runtime of {runtime_s} s")));
    }
    if peak == 0 {
        return Err(Error::Measurement("fuse call allocated nothing".into()));
    }
    Ok(Measurement {
        image: last.expect("repeats >= 1"),
        runtime_s,
        peak_alloc_bytes: peak as u64,
    })
}

/// Median; the mean of the middle pair for even lengths.
pub fn median(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{FusionMethod, StackingMethod};
    use crate::imgcore::{random_radiance, synth_bracket, SceneSpec};
    use crate::weights::WeightSet;

    fn scene() -> FrameSequence {
        let spec = SceneSpec::new(random_radiance(48, 40, 1).unwrap());
        synth_bracket(&spec, &[-24, 0, 1, 2, 3], 1).unwrap()
    }

    #[test]
    fn measured_image_equals_direct_fuse() {
        let seq = scene();
        for m in FusionMethod::ALL {
            let cfg = FusionConfig::new(m, m.full_weights(), 2, StackingMethod::None).unwrap();
            let got = measure_fuse(&seq, &cfg, 1).unwrap();
            assert_eq!(got.image, fuse(&seq, &cfg).unwrap());
            assert!(got.runtime_s > 0.0);
            assert!(got.peak_alloc_bytes > 0);
        }
    }

    #[test]
    fn zero_repeats_rejected() {
        let cfg = FusionConfig::new(FusionMethod::Mertens, WeightSet::CSE, 1, StackingMethod::None).unwrap();
        assert!(matches!(measure_fuse(&scene(), &cfg, 0), Err(Error::Config(_))));
    }

    #[test]
    fn median_examples() {
        assert_eq!(median(&mut [3.0]), 3.0);
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
