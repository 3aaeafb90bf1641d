use std::borrow::Cow;

use crate::error::Result;
use crate::fusion::{check_method_inputs, normalized_weights, y_image, yuv_output, FusionMethod};
use crate::imgcore::Image;
use crate::pyramid::{collapse_owned, default_depth, gaussian_pyramid, laplacian_pyramid, Pyramid};
use crate::weights::WeightConfig;

/// Multiplies every channel of each Laplacian level by the matching
/// Gaussian weight level.
fn weight_levels(lap: &mut Pyramid, weights: &Pyramid) {
    for (level, w) in lap.levels_mut().iter_mut().zip(weights.levels()) {
        let wd = w.data();
        let n = level.pixel_count();
        for chunk in level.data_mut().chunks_exact_mut(n) {
            for (v, &wv) in chunk.iter_mut().zip(wd) {
                *v *= wv;
            }
        }
    }
}

fn accumulate(acc: &mut Pyramid, add: &Pyramid) {
    for (a, b) in acc.levels_mut().iter_mut().zip(add.levels()) {
        for (x, y) in a.data_mut().iter_mut().zip(b.data()) {
            *x += y;
        }
    }
}

/// `sum_i G(W_i)_k * L(I_i)_k` per level, built frame by frame so that only
/// one frame's pyramids are alive next to the accumulator.
fn blend<'a>(planes: impl Iterator<Item = (Cow<'a, Image>, Image)>, depth: usize) -> Result<Image> {
    let mut acc: Option<Pyramid> = None;
    for (img, weight) in planes {
        let wp = gaussian_pyramid(&weight, depth)?;
        drop(weight);
        let mut lp = laplacian_pyramid(&img, depth)?;
        drop(img);
        weight_levels(&mut lp, &wp);
        drop(wp);
        match acc.as_mut() {
            None => acc = Some(lp),
            Some(a) => accumulate(a, &lp),
        }
    }
    collapse_owned(acc.expect("at least two inputs"))
}

fn resolve_depth(depth: Option<usize>, img: &Image) -> usize {
    depth.unwrap_or_else(|| default_depth(img.width(), img.height()))
}

/// Multi-scale exposure fusion over all three RGB channels.
pub fn fuse_mertens(inputs: &[&Image], weights: &WeightConfig, depth: Option<usize>) -> Result<Image> {
    check_method_inputs(FusionMethod::Mertens, inputs, weights)?;
    let depth = resolve_depth(depth, inputs[0]);
    let maps = normalized_weights(inputs, weights, false)?;
    let pairs = inputs.iter().map(|img| Cow::Borrowed(*img)).zip(maps);
    let mut out = blend(pairs, depth)?;
    out.clamp_in_place();
    Ok(out)
}

/// Multi-scale fusion of the Y channel only; U and V come from the frame with
/// the strongest chroma at each pixel.
pub fn fuse_fast_yuv(inputs: &[&Image], weights: &WeightConfig, depth: Option<usize>) -> Result<Image> {
    check_method_inputs(FusionMethod::FastYuv, inputs, weights)?;
    let depth = resolve_depth(depth, inputs[0]);
    let maps = normalized_weights(inputs, weights, true)?;
    let pairs = inputs.iter().map(|img| Cow::Owned(y_image(img))).zip(maps);
    let y = blend(pairs, depth)?;
    Ok(yuv_output(inputs, y.data(), y.width(), y.height()))
}
