//! Peak heap allocation of one fuse call per method and per frame count.

use fusionbench::alloc::CountingAllocator;
use fusionbench::bench::measure_fuse;
use fusionbench::imgcore::synth_scene;
use fusionbench::{FusionConfig, FusionMethod, StackingMethod};

#[global_allocator]
static ALLOC: CountingAllocator = CountingAllocator;

fn main() -> fusionbench::Result<()> {
    let (frames, _) = synth_scene(480, 640, &[-24, 0, 1, 2, 3, 4], 8)?;
    let input_mb = 480.0 * 640.0 * 3.0 * 8.0 / 1e6;
    println!("one f64 RGB frame: {input_mb:.2} MB\n");

    println!("{:<9} {:>9} {:>9}", "method", "peak MB", "time ms");
    for method in FusionMethod::ALL {
        let cfg = FusionConfig::new(method, method.full_weights(), 3, StackingMethod::None)?;
        let m = measure_fuse(&frames, &cfg, 5)?;
        println!("{:<9} {:>9.2} {:>9.1}", method.name(), m.peak_alloc_bytes as f64 / 1e6, m.runtime_s * 1e3);
    }

    println!("\n{:>2} {:<7} {:>9}", "n", "stack", "peak MB");
    for n in 1..=5 {
        for stacking in [StackingMethod::None, StackingMethod::Mean, StackingMethod::Median] {
            let Ok(cfg) = FusionConfig::new(FusionMethod::Mertens, FusionMethod::Mertens.full_weights(), n, stacking) else {
                continue;
            };
            let m = measure_fuse(&frames, &cfg, 1)?;
            println!("{n:>2} {:<7} {:>9.2}", stacking.name(), m.peak_alloc_bytes as f64 / 1e6);
        }
    }
    Ok(())
}
