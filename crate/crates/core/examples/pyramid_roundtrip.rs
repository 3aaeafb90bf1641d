//! Decompose a frame into a Laplacian pyramid, inspect the bands, and
//! collapse it back.

use fusionbench::imgcore::{random_radiance, SceneSpec};
use fusionbench::pyramid::{collapse, default_depth, gaussian_pyramid, laplacian_pyramid};

fn main() -> fusionbench::Result<()> {
    let frame = SceneSpec::new(random_radiance(333, 250, 7)?).expose(0.5);
    let (w, h) = frame.dims();
    let depth = default_depth(w, h);

    let gauss = gaussian_pyramid(&frame, depth)?;
    let lap = laplacian_pyramid(&frame, depth)?;
    println!("{w}x{h}, depth {depth}");
    println!("{:>5}  {:>9}  {:>12}  {:>12}", "level", "size", "gauss mean", "band rms");
    for (i, (g, l)) in gauss.levels().iter().zip(lap.levels()).enumerate() {
        let mean = g.data().iter().sum::<f64>() / g.data().len() as f64;
        let rms = (l.data().iter().map(|v| v * v).sum::<f64>() / l.data().len() as f64).sqrt();
        println!("{i:>5}  {:>9}  {mean:>12.5}  {rms:>12.5}", format!("{}x{}", g.width(), g.height()));
    }

    let back = collapse(&lap)?;
    println!("reconstruction max error: {:.3e}", back.max_abs_diff(&frame)?);
    Ok(())
}
