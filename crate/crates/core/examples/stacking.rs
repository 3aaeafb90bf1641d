//! Stack the EV-positive frames before fusion and compare against fusing
//! them all.

use fusionbench::imgcore::synth_scene;
use fusionbench::{fuse, FusionConfig, FusionMethod, MetricReport, StackingMethod, WeightSet};

fn main() -> fusionbench::Result<()> {
    let (frames, gt) = synth_scene(320, 240, &[-24, 0, 1, 2, 3, 4], 5)?;
    println!("{:>2} {:<7} {:>8} {:>8} {:>8}", "n", "stack", "ms_ssim", "psnr_db", "ergas");
    for n in 1..=5 {
        for stacking in StackingMethod::ALL {
            let Ok(cfg) = FusionConfig::new(FusionMethod::Mertens, WeightSet::CSE, n, stacking) else {
                // Stacking a single frame is not a legal combination.
                continue;
            };
            let m = MetricReport::compute(&fuse(&frames, &cfg)?, &gt)?;
            println!("{n:>2} {:<7} {:>8.4} {:>8.2} {:>8.2}", stacking.name(), m.ms_ssim, m.psnr, m.ergas);
        }
    }
    Ok(())
}
