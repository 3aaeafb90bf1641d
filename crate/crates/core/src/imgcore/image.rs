use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ColorSpace {
    Rgb,
    Yuv,
    Gray,
}

impl fmt::Display for ColorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColorSpace::Rgb => "RGB",
            ColorSpace::Yuv => "YUV",
            ColorSpace::Gray => "GRAY",
        })
    }
}

/// Planar floating-point raster.
///
/// Samples are stored channel by channel, each channel a row-major
/// `width * height` plane. Nominal range is `[0, 1]`; band-pass pyramid
/// levels and intermediate results may leave that range, but every sample
/// is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    color_space: ColorSpace,
    data: Vec<f64>,
}

impl Image {
    /// Checked constructor. Rejects zero dimensions, a channel count that does
    /// not match the color space, a wrong buffer length, or non-finite samples.
    pub fn new(width: usize, height: usize, color_space: ColorSpace, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!("image dimensions must be positive, got {width}x{height}")));
        }
        let expected = width * height * channels_of(color_space);
        if data.len() != expected {
            return Err(Error::invalid(format!(
                "{color_space} {width}x{height} image needs {expected} samples, got {}",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample at index {i}")));
        }
        Ok(Self::from_raw(width, height, color_space, data))
    }

    pub fn filled(width: usize, height: usize, color_space: ColorSpace, value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::invalid("fill value must be finite"));
        }
        Self::new(width, height, color_space, vec![value; width * height * channels_of(color_space)])
    }

    /// Builds an image from a per-sample function `f(x, y, channel)`.
    pub fn from_fn(
        width: usize,
        height: usize,
        color_space: ColorSpace,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let channels = channels_of(color_space);
        let mut data = Vec::with_capacity(width * height * channels);
        for c in 0..channels {
            for y in 0..height {
                for x in 0..width {
                    data.push(f(x, y, c));
                }
            }
        }
        Self::new(width, height, color_space, data)
    }

    pub fn gray(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        Self::new(width, height, ColorSpace::Gray, data)
    }

    /// Unchecked constructor for buffers produced by the crate's own
    /// arithmetic, which never yields non-finite values from finite inputs.
    pub(crate) fn from_raw(width: usize, height: usize, color_space: ColorSpace, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), width * height * channels_of(color_space));
        debug_assert!(width > 0 && height > 0);
        Self {
            width,
            height,
            color_space,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn channels(&self) -> usize {
        channels_of(self.color_space)
    }

    pub fn color_space(&self) -> ColorSpace {
        self.color_space
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn plane(&self, c: usize) -> &[f64] {
        let n = self.pixel_count();
        &self.data[c * n..(c + 1) * n]
    }

    pub(crate) fn plane_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.pixel_count();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn planes(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.pixel_count())
    }

    pub fn get(&self, x: usize, y: usize, c: usize) -> f64 {
        self.data[c * self.pixel_count() + y * self.width + x]
    }

    /// Same width, height and color space.
    pub fn same_shape(&self, other: &Image) -> bool {
        self.width == other.width && self.height == other.height && self.color_space == other.color_space
    }

    /// Returns a copy with every sample clamped to `[0, 1]`.
    pub fn clamped(&self) -> Image {
        let mut out = self.clone();
        out.clamp_in_place();
        out
    }

    pub(crate) fn clamp_in_place(&mut self) {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
    }

    /// Largest absolute per-sample difference. Shapes must match.
    pub fn max_abs_diff(&self, other: &Image) -> Result<f64> {
        if self.width != other.width || self.height != other.height || self.channels() != other.channels() {
            return Err(Error::invalid(format!(
                "shape mismatch: {}x{}x{} vs {}x{}x{}",
                self.width,
                self.height,
                self.channels(),
                other.width,
                other.height,
                other.channels()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

pub fn channels_of(cs: ColorSpace) -> usize {
    match cs {
        ColorSpace::Gray => 1,
        ColorSpace::Rgb | ColorSpace::Yuv => 3,
    }
}

/// Returns an error unless all images share one shape.
pub(crate) fn check_same_shape(images: &[&Image]) -> Result<()> {
    let Some(first) = images.first() else {
        return Err(Error::invalid("empty image list"));
    };
    for (i, img) in images.iter().enumerate().skip(1) {
        if !img.same_shape(first) {
            return Err(Error::invalid(format!(
                "image {i} is {}x{} {}, expected {}x{} {}",
                img.width,
                img.height,
                img.color_space,
                first.width,
                first.height,
                first.color_space
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_construction() {
        assert!(Image::new(0, 4, ColorSpace::Gray, vec![]).is_err());
        assert!(Image::new(2, 2, ColorSpace::Rgb, vec![0.0; 4]).is_err());
        assert!(Image::new(1, 1, ColorSpace::Gray, vec![f64::NAN]).is_err());
        assert!(Image::new(1, 1, ColorSpace::Gray, vec![f64::INFINITY]).is_err());
        assert!(Image::new(2, 1, ColorSpace::Yuv, vec![0.5; 6]).is_ok());
    }

    #[test]
    fn planar_layout() {
        let img = Image::from_fn(3, 2, ColorSpace::Rgb, |x, y, c| (c * 100 + y * 10 + x) as f64).unwrap();
        assert_eq!(img.get(2, 1, 2), 212.0);
        assert_eq!(img.plane(1)[4], 111.0);
        assert_eq!(img.planes().count(), 3);
    }

    #[test]
    fn clamp_and_diff() {
        let img = Image::gray(2, 1, vec![-0.5, 1.5]).unwrap();
        let c = img.clamped();
        assert_eq!(c.data(), &[0.0, 1.0]);
        assert_eq!(img.max_abs_diff(&c).unwrap(), 0.5);
        let other = Image::filled(1, 1, ColorSpace::Gray, 0.0).unwrap();
        assert!(img.max_abs_diff(&other).is_err());
    }
}
