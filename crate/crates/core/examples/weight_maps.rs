//! Per-frame contrast, saturation and well-exposedness maps, and the
//! normalized weights that steer the blend.
//!
//! ```bash
//! cargo run --example weight_maps -- /tmp/weights
//! ```

use std::path::PathBuf;

use fusionbench::imgcore::{save_image, synth_scene};
use fusionbench::weights::{combine_weights, compute_kind_maps, normalize_weights, WeightMaps};
use fusionbench::{WeightConfig, WeightKind, WeightSet};

fn mean(img: &fusionbench::Image) -> f64 {
    img.data().iter().sum::<f64>() / img.data().len() as f64
}

fn main() -> fusionbench::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fusionbench-weights"));
    std::fs::create_dir_all(&out).map_err(|e| fusionbench::Error::Io { path: out.clone(), source: e })?;

    let (frames, _) = synth_scene(256, 192, &[-24, 0, 2, 4], 3)?;
    let cfg = WeightConfig::new(WeightSet::CSE)?;

    println!("{:>4}  {:>9}  {:>10}  {:>8}", "ev", "contrast", "saturation", "exposure");
    let mut combined = Vec::new();
    for f in frames.frames() {
        let kinds = compute_kind_maps(&f.image, &cfg)?;
        let m = |k| kinds.get(k).map(mean).unwrap_or(f64::NAN);
        println!(
            "{:>4}  {:>9.4}  {:>10.4}  {:>8.4}",
            f.ev,
            m(WeightKind::Contrast),
            m(WeightKind::Saturation),
            m(WeightKind::Exposure)
        );
        combined.push(combine_weights(kinds, &cfg)?);
    }

    let norm = normalize_weights(WeightMaps::new(combined)?)?;
    for (f, w) in frames.frames().iter().zip(norm.maps()) {
        println!("ev {:>3}: mean share {:.3}", f.ev, mean(w));
        save_image(w, out.join(format!("weight_ev_{}.pgm", f.ev)))?;
    }
    println!("normalized maps written to {}", out.display());
    Ok(())
}
