//! Fuse one scene with each method and score it against ground truth.
//!
//! ```bash
//! cargo run --release --example fuse_methods -- /tmp/fused
//! ```

use std::path::PathBuf;
use std::time::Instant;

use fusionbench::imgcore::{save_image, synth_scene};
use fusionbench::{fuse, FusionConfig, FusionMethod, MetricReport, StackingMethod};

fn main() -> fusionbench::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fusionbench-fused"));
    std::fs::create_dir_all(&out).map_err(|e| fusionbench::Error::Io { path: out.clone(), source: e })?;

    let (frames, gt) = synth_scene(480, 640, &[-24, 0, 1, 2, 3, 4], 11)?;
    println!("{:<9} {:<6} {:>8} {:>8} {:>8} {:>9}", "method", "maps", "ms_ssim", "psnr_db", "ergas", "time_ms");
    for method in FusionMethod::ALL {
        for weights in method.sweep_weight_sets() {
            let cfg = FusionConfig::new(method, weights, 3, StackingMethod::None)?;
            let start = Instant::now();
            let fused = fuse(&frames, &cfg)?;
            let ms = start.elapsed().as_secs_f64() * 1e3;
            let m = MetricReport::compute(&fused, &gt)?;
            println!(
                "{:<9} {:<6} {:>8.4} {:>8.2} {:>8.2} {:>9.1}",
                method.name(),
                weights.to_string(),
                m.ms_ssim,
                m.psnr,
                m.ergas,
                ms
            );
            if weights == method.full_weights() {
                save_image(&fused, out.join(format!("{method}.png")))?;
            }
        }
    }
    println!("full-weight results written to {}", out.display());
    Ok(())
}
