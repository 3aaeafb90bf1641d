//! Full-range BT.601 conversion between RGB and YUV (YCbCr with chroma
//! offset to 0.5).

use crate::error::{Error, Result};
use crate::imgcore::image::{ColorSpace, Image};

pub const KR: f64 = 0.299;
pub const KG: f64 = 0.587;
pub const KB: f64 = 0.114;
const U_SCALE: f64 = 1.772;
const V_SCALE: f64 = 1.402;

#[inline]
pub fn luma(r: f64, g: f64, b: f64) -> f64 {
    KR * r + KG * g + KB * b
}

/// Unclamped forward transform of one pixel.
#[inline]
pub fn rgb_to_yuv_px(r: f64, g: f64, b: f64) -> (f64, f64, f64) {
    let y = luma(r, g, b);
    (y, (b - y) / U_SCALE + 0.5, (r - y) / V_SCALE + 0.5)
}

/// Unclamped inverse of [`rgb_to_yuv_px`].
#[inline]
pub fn yuv_to_rgb_px(y: f64, u: f64, v: f64) -> (f64, f64, f64) {
    let r = y + V_SCALE * (v - 0.5);
    let b = y + U_SCALE * (u - 0.5);
    let g = (y - KR * r - KB * b) / KG;
    (r, g, b)
}

fn convert(
    img: &Image,
    from: ColorSpace,
    to: ColorSpace,
    px: fn(f64, f64, f64) -> (f64, f64, f64),
) -> Result<Image> {
    if img.color_space() != from {
        return Err(Error::invalid(format!(
            "expected a 3-channel {from} image, got {} channel(s) {}",
            img.channels(),
            img.color_space()
        )));
    }
    let n = img.pixel_count();
    let (a, b, c) = (img.plane(0), img.plane(1), img.plane(2));
    let mut out = vec![0.0; 3 * n];
    for i in 0..n {
        let (p, q, r) = px(a[i], b[i], c[i]);
        out[i] = p.clamp(0.0, 1.0);
        out[n + i] = q.clamp(0.0, 1.0);
        out[2 * n + i] = r.clamp(0.0, 1.0);
    }
    Ok(Image::from_raw(img.width(), img.height(), to, out))
}

pub fn rgb_to_yuv(img: &Image) -> Result<Image> {
    convert(img, ColorSpace::Rgb, ColorSpace::Yuv, rgb_to_yuv_px)
}

pub fn yuv_to_rgb(img: &Image) -> Result<Image> {
    convert(img, ColorSpace::Yuv, ColorSpace::Rgb, yuv_to_rgb_px)
}

/// Single-channel luminance plane: BT.601 luma for RGB, the Y plane for YUV,
/// the image itself for GRAY.
pub fn luma_plane(img: &Image) -> Vec<f64> {
    match img.color_space() {
        ColorSpace::Gray | ColorSpace::Yuv => img.plane(0).to_vec(),
        ColorSpace::Rgb => {
            let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
            r.iter()
                .zip(g)
                .zip(b)
                .map(|((&r, &g), &b)| luma(r, g, b))
                .collect()
        }
    }
}
