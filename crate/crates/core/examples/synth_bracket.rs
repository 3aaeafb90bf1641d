//! Render a synthetic EV bracket and its ground truth to disk.
//!
//! ```bash
//! cargo run --example synth_bracket -- /tmp/bracket
//! ```

use std::path::PathBuf;

use fusionbench::imgcore::{luma, random_radiance, save_scene, synth_bracket, EvGain, SceneSpec};

fn main() -> fusionbench::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("fusionbench-bracket"));

    let mut spec = SceneSpec::new(random_radiance(320, 240, 42)?);
    spec.ev_to_gain = EvGain::PowerOfTwo { evs_per_stop: 8.0 };
    spec.noise_sigma = 0.005;
    let evs = [-24, 0, 1, 2, 3, 4];
    let frames = synth_bracket(&spec, &evs, 42)?;
    let gt = spec.ground_truth();

    println!("{:>5}  {:>6}  {:>9}  {:>9}", "ev", "gain", "mean luma", "clipped %");
    for f in frames.frames() {
        let (r, g, b) = (f.image.plane(0), f.image.plane(1), f.image.plane(2));
        let n = f.image.pixel_count();
        let mean = (0..n).map(|i| luma(r[i], g[i], b[i])).sum::<f64>() / n as f64;
        let clipped = f.image.data().iter().filter(|&&v| v >= 1.0).count() as f64 / f.image.data().len() as f64;
        println!(
            "{:>5}  {:>6.3}  {:>9.3}  {:>9.1}",
            f.ev,
            spec.ev_to_gain.gain(f.ev)?,
            mean,
            100.0 * clipped
        );
    }

    save_scene(&out, &frames, Some(&gt))?;
    println!("wrote {} frames and gt.png to {}", frames.len(), out.display());
    Ok(())
}
