//! Single-scale fusion: a two-band stand-in for the pyramid blend.
//!
//! Each frame is split into a base `B = G_base(I)` and a detail `D = I - B`.
//! Details are blended with the sharp normalized weights, bases with the
//! weights blurred by `G_weight`:
//!
//! ```text
//! out = sum_i ( W_i * D_i + G_weight(W_i) * B_i )
//! ```
//!
//! Both blurs are linear and preserve constants, so blurred weights still
//! sum to one and equal inputs come back unchanged.

use crate::error::Result;
use crate::filter::gauss_approx;
use crate::fusion::{check_method_inputs, normalized_weights, y_image, yuv_output, FusionMethod};
use crate::imgcore::{ColorSpace, Image};
use crate::weights::WeightConfig;

/// `(min(W, H) / 32, min(W, H) / 8)`.
pub fn default_ssf_sigmas(width: usize, height: usize) -> (f64, f64) {
    let m = width.min(height) as f64;
    (m / 32.0, m / 8.0)
}

fn resolve(inputs: &[&Image], base: Option<f64>, weight: Option<f64>) -> (f64, f64) {
    let (db, dw) = default_ssf_sigmas(inputs[0].width(), inputs[0].height());
    (base.unwrap_or(db), weight.unwrap_or(dw))
}

/// Adds one frame's two-band contribution for one plane into `out`.
fn add_two_band(out: &mut [f64], plane: &[f64], w: &[f64], m: &[f64], width: usize, height: usize, sigma_base: f64) {
    let base = gauss_approx(plane, width, height, sigma_base);
    for i in 0..out.len() {
        let b = base[i];
        out[i] += w[i] * (plane[i] - b) + m[i] * b;
    }
}

pub fn fuse_ssf_rgb(
    inputs: &[&Image],
    weights: &WeightConfig,
    sigma_base: Option<f64>,
    sigma_weight: Option<f64>,
) -> Result<Image> {
    check_method_inputs(FusionMethod::SsfRgb, inputs, weights)?;
    let (sb, sw) = resolve(inputs, sigma_base, sigma_weight);
    let (width, height) = inputs[0].dims();
    let maps = normalized_weights(inputs, weights, false)?;
    let mut out = Image::from_raw(width, height, ColorSpace::Rgb, vec![0.0; 3 * width * height]);
    for (img, w) in inputs.iter().zip(maps) {
        let m = gauss_approx(w.data(), width, height, sw);
        for c in 0..3 {
            add_two_band(out.plane_mut(c), img.plane(c), w.data(), &m, width, height, sb);
        }
    }
    out.clamp_in_place();
    Ok(out)
}

pub fn fuse_ssf_yuv(
    inputs: &[&Image],
    weights: &WeightConfig,
    sigma_base: Option<f64>,
    sigma_weight: Option<f64>,
) -> Result<Image> {
    check_method_inputs(FusionMethod::SsfYuv, inputs, weights)?;
    let (sb, sw) = resolve(inputs, sigma_base, sigma_weight);
    let (width, height) = inputs[0].dims();
    let maps = normalized_weights(inputs, weights, true)?;
    let mut y = vec![0.0; width * height];
    for (img, w) in inputs.iter().zip(maps) {
        let m = gauss_approx(w.data(), width, height, sw);
        let luma = y_image(img);
        add_two_band(&mut y, luma.data(), w.data(), &m, width, height, sb);
    }
    Ok(yuv_output(inputs, &y, width, height))
}
