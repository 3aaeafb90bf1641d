//! Full-reference quality metrics: PSNR, SSIM, MS-SSIM and ERGAS.
//!
//! SSIM and MS-SSIM compare luma only. PSNR and ERGAS use every channel.

use log::warn;

use crate::error::{Error, Result};
use crate::imgcore::color::luma_plane;
use crate::imgcore::Image;

/// PSNR reported when the mean squared error is below [`PSNR_EXACT_BELOW`].
pub const PSNR_CAP: f64 = 99.0;
pub const PSNR_EXACT_BELOW: f64 = 1e-10;

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
const K1: f64 = 0.01;
const K2: f64 = 0.03;
const C1: f64 = K1 * K1;
const C2: f64 = K2 * K2;

pub const MS_SSIM_WEIGHTS: [f64; 5] = [0.0448, 0.2856, 0.3001, 0.2363, 0.1333];

/// Reference channels with a mean at or below this are left out of ERGAS.
pub const ERGAS_MIN_MEAN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricReport {
    pub ms_ssim: f64,
    pub psnr: f64,
    pub ergas: f64,
    /// Channels dropped from ERGAS because their reference mean was ~0.
    pub ergas_skipped: usize,
}

impl MetricReport {
    pub fn compute(test: &Image, reference: &Image) -> Result<Self> {
        let (ergas, ergas_skipped) = ergas_detailed(test, reference)?;
        Ok(Self {
            ms_ssim: ms_ssim(test, reference)?,
            psnr: psnr(test, reference)?,
            ergas,
            ergas_skipped,
        })
    }
}

fn check_pair(test: &Image, reference: &Image) -> Result<()> {
    if !test.same_shape(reference) {
        return Err(Error::invalid(format!(
            "metric inputs differ: {}x{} {} vs {}x{} {}",
            test.width(),
            test.height(),
            test.color_space(),
            reference.width(),
            reference.height(),
            reference.color_space()
        )));
    }
    Ok(())
}

pub fn mse(test: &Image, reference: &Image) -> Result<f64> {
    check_pair(test, reference)?;
    let sum: f64 = test.data().iter().zip(reference.data()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(sum / test.data().len() as f64)
}

/// Peak is 1.0.
pub fn psnr(test: &Image, reference: &Image) -> Result<f64> {
    let m = mse(test, reference)?;
    if m < PSNR_EXACT_BELOW {
        return Ok(PSNR_CAP);
    }
    Ok((10.0 * (1.0 / m).log10()).min(PSNR_CAP))
}

/// `100 * sqrt(mean_c (RMSE_c / mu_c)^2)` over reference channels with a
/// usable mean.
pub fn ergas(test: &Image, reference: &Image) -> Result<f64> {
    let (value, skipped) = ergas_detailed(test, reference)?;
    if skipped > 0 {
        warn!("ERGAS skipped {skipped} channel(s) with reference mean <= {ERGAS_MIN_MEAN}");
    }
    Ok(value)
}

/// ERGAS plus the number of skipped channels. Fails if every channel would
/// be skipped.
pub fn ergas_detailed(test: &Image, reference: &Image) -> Result<(f64, usize)> {
    check_pair(test, reference)?;
    let n = test.pixel_count() as f64;
    let mut acc = 0.0;
    let mut used = 0usize;
    for (t, r) in test.planes().zip(reference.planes()) {
        let mean = r.iter().sum::<f64>() / n;
        if mean <= ERGAS_MIN_MEAN {
            continue;
        }
        let sq: f64 = t.iter().zip(r).map(|(a, b)| (a - b) * (a - b)).sum();
        let rmse = (sq / n).sqrt();
        acc += (rmse / mean).powi(2);
        used += 1;
    }
    if used == 0 {
        return Err(Error::invalid("ERGAS undefined: every reference channel has zero mean"));
    }
    Ok((100.0 * (acc / used as f64).sqrt(), reference.channels() - used))
}

fn gaussian_window() -> [f64; SSIM_WINDOW] {
    let mut g = [0.0; SSIM_WINDOW];
    let c = (SSIM_WINDOW / 2) as f64;
    for (i, v) in g.iter_mut().enumerate() {
        let d = i as f64 - c;
        *v = (-(d * d) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
    }
    let s: f64 = g.iter().sum();
    g.map(|v| v / s)
}

/// Separable window filter without padding: output is
/// `(width - 10) x (height - 10)`.
fn filter_valid(src: &[f64], width: usize, height: usize, g: &[f64; SSIM_WINDOW]) -> Vec<f64> {
    let ow = width + 1 - SSIM_WINDOW;
    let oh = height + 1 - SSIM_WINDOW;
    let mut rows = vec![0.0; ow * height];
    for y in 0..height {
        let s = &src[y * width..(y + 1) * width];
        for x in 0..ow {
            rows[y * ow + x] = g.iter().zip(&s[x..x + SSIM_WINDOW]).map(|(k, v)| k * v).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for (k, &gk) in g.iter().enumerate() {
            let src_row = &rows[(y + k) * ow..(y + k + 1) * ow];
            for (o, v) in out[y * ow..(y + 1) * ow].iter_mut().zip(src_row) {
                *o += gk * v;
            }
        }
    }
    out
}

/// Mean SSIM and mean contrast-structure term of two planes.
fn ssim_terms(x: &[f64], y: &[f64], width: usize, height: usize) -> (f64, f64) {
    let g = gaussian_window();
    let mx = filter_valid(x, width, height, &g);
    let my = filter_valid(y, width, height, &g);
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(y).map(|(a, b)| a * b).collect();
    let sxx = filter_valid(&xx, width, height, &g);
    let syy = filter_valid(&yy, width, height, &g);
    let sxy = filter_valid(&xy, width, height, &g);
    let (mut ssim_sum, mut cs_sum) = (0.0, 0.0);
    for i in 0..mx.len() {
        let (a, b) = (mx[i], my[i]);
        let vx = sxx[i] - a * a;
        let vy = syy[i] - b * b;
        let cov = sxy[i] - a * b;
        let cs = (2.0 * cov + C2) / (vx + vy + C2);
        let l = (2.0 * a * b + C1) / (a * a + b * b + C1);
        ssim_sum += l * cs;
        cs_sum += cs;
    }
    let n = mx.len() as f64;
    (ssim_sum / n, cs_sum / n)
}

fn luma_pair(test: &Image, reference: &Image) -> Result<(Vec<f64>, Vec<f64>)> {
    check_pair(test, reference)?;
    let (w, h) = test.dims();
    if w.min(h) < SSIM_WINDOW {
        return Err(Error::invalid(format!(
            "SSIM needs both dimensions >= {SSIM_WINDOW}, got {w}x{h}"
        )));
    }
    Ok((luma_plane(test), luma_plane(reference)))
}

pub fn ssim(test: &Image, reference: &Image) -> Result<f64> {
    let (x, y) = luma_pair(test, reference)?;
    Ok(ssim_terms(&x, &y, test.width(), test.height()).0)
}

/// Number of MS-SSIM scales for a `width x height` input: the most (up to 5)
/// for which the coarsest level still fits the SSIM window.
pub fn ms_ssim_scales(width: usize, height: usize) -> usize {
    let mut m = width.min(height);
    let mut scales = 0;
    while scales < MS_SSIM_WEIGHTS.len() && m >= SSIM_WINDOW {
        scales += 1;
        m /= 2;
    }
    scales
}

/// 2x2 mean; odd trailing rows and columns are dropped.
fn downsample_mean(src: &[f64], width: usize, height: usize) -> (Vec<f64>, usize, usize) {
    let (w, h) = (width / 2, height / 2);
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        let r0 = &src[2 * y * width..];
        let r1 = &src[(2 * y + 1) * width..];
        for x in 0..w {
            out.push((r0[2 * x] + r0[2 * x + 1] + r1[2 * x] + r1[2 * x + 1]) / 4.0);
        }
    }
    (out, w, h)
}

/// Contrast-structure at every scale, luminance at the coarsest, combined
/// with the standard exponents renormalized to the usable scales. Negative
/// terms are clamped to zero before exponentiation.
pub fn ms_ssim(test: &Image, reference: &Image) -> Result<f64> {
    let (mut x, mut y) = luma_pair(test, reference)?;
    let (mut w, mut h) = test.dims();
    let scales = ms_ssim_scales(w, h);
    let total: f64 = MS_SSIM_WEIGHTS[..scales].iter().sum();
    let mut value = 1.0;
    for (s, &weight) in MS_SSIM_WEIGHTS[..scales].iter().enumerate() {
        let (full, cs) = ssim_terms(&x, &y, w, h);
        let term = if s + 1 == scales { full } else { cs };
        value *= term.max(0.0).powf(weight / total);
        if s + 1 < scales {
            let (nx, nw, nh) = downsample_mean(&x, w, h);
            let (ny, _, _) = downsample_mean(&y, w, h);
            (x, y, w, h) = (nx, ny, nw, nh);
        }
    }
    Ok(value)
}
