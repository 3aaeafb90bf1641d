//! Single-plane filters with replicate-edge padding.
//!
//! Every routine works on a row-major `width * height` slice and uses a fixed
//! summation order, so results are bit-reproducible.

const B0: f64 = 1.0 / 16.0;
const B1: f64 = 4.0 / 16.0;
const B2: f64 = 6.0 / 16.0;

#[inline]
fn clamp_idx(i: isize, n: usize) -> usize {
    i.clamp(0, n as isize - 1) as usize
}

fn binomial_row(src: &[f64], dst: &mut [f64]) {
    let n = src.len();
    let at = |i: isize| src[clamp_idx(i, n)];
    for (i, d) in dst.iter_mut().enumerate() {
        let i = i as isize;
        *d = B0 * at(i - 2) + B1 * at(i - 1) + B2 * at(i) + B1 * at(i + 1) + B0 * at(i + 2);
    }
}

/// Separable `[1, 4, 6, 4, 1] / 16` blur.
pub fn blur5(src: &[f64], width: usize, height: usize) -> Vec<f64> {
    debug_assert_eq!(src.len(), width * height);
    let mut tmp = vec![0.0; src.len()];
    for (s, d) in src.chunks_exact(width).zip(tmp.chunks_exact_mut(width)) {
        binomial_row(s, d);
    }
    let mut out = vec![0.0; src.len()];
    let row = |y: isize| {
        let y = clamp_idx(y, height);
        &tmp[y * width..(y + 1) * width]
    };
    for y in 0..height {
        let yi = y as isize;
        let (r0, r1, r2, r3, r4) = (row(yi - 2), row(yi - 1), row(yi), row(yi + 1), row(yi + 2));
        let dst = &mut out[y * width..(y + 1) * width];
        for x in 0..width {
            dst[x] = B0 * r0[x] + B1 * r1[x] + B2 * r2[x] + B1 * r3[x] + B0 * r4[x];
        }
    }
    out
}

/// Size of a plane after one halving step: `ceil(n / 2)`.
#[inline]
pub fn half(n: usize) -> usize {
    n.div_ceil(2)
}

/// Keeps even-indexed rows and columns.
pub fn decimate2(src: &[f64], width: usize, height: usize) -> Vec<f64> {
    let (cw, ch) = (half(width), half(height));
    let mut out = Vec::with_capacity(cw * ch);
    for y in (0..height).step_by(2) {
        let row = &src[y * width..(y + 1) * width];
        out.extend(row.iter().step_by(2));
    }
    debug_assert_eq!(out.len(), cw * ch);
    out
}

/// Blur then decimate: one Gaussian-pyramid REDUCE step.
pub fn reduce(src: &[f64], width: usize, height: usize) -> Vec<f64> {
    decimate2(&blur5(src, width, height), width, height)
}

fn expand_row(src: &[f64], dst: &mut [f64]) {
    let n = src.len();
    let at = |j: isize| src[clamp_idx(j, n)];
    for (i, d) in dst.iter_mut().enumerate() {
        let j = (i / 2) as isize;
        *d = if i % 2 == 0 {
            (at(j - 1) + 6.0 * at(j) + at(j + 1)) / 8.0
        } else {
            (at(j) + at(j + 1)) / 2.0
        };
    }
}

/// EXPAND step: zero-stuffing to `parent_w x parent_h` followed by the
/// binomial kernel scaled by 4, evaluated in polyphase form with replicate
/// padding on the coarse grid.
///
/// Constants map to constants, and the output always has exactly the
/// parent's dimensions, including odd ones.
pub fn expand(src: &[f64], width: usize, height: usize, parent_w: usize, parent_h: usize) -> Vec<f64> {
    debug_assert_eq!(src.len(), width * height);
    debug_assert_eq!(half(parent_w), width);
    debug_assert_eq!(half(parent_h), height);
    let mut wide = vec![0.0; parent_w * height];
    for (s, d) in src.chunks_exact(width).zip(wide.chunks_exact_mut(parent_w)) {
        expand_row(s, d);
    }
    let mut out = vec![0.0; parent_w * parent_h];
    let row = |y: isize| {
        let y = clamp_idx(y, height);
        &wide[y * parent_w..(y + 1) * parent_w]
    };
    for y in 0..parent_h {
        let j = (y / 2) as isize;
        let dst = &mut out[y * parent_w..(y + 1) * parent_w];
        if y % 2 == 0 {
            let (a, b, c) = (row(j - 1), row(j), row(j + 1));
            for x in 0..parent_w {
                dst[x] = (a[x] + 6.0 * b[x] + c[x]) / 8.0;
            }
        } else {
            let (a, b) = (row(j), row(j + 1));
            for x in 0..parent_w {
                dst[x] = (a[x] + b[x]) / 2.0;
            }
        }
    }
    out
}

/// `|4-neighbour Laplacian|`, kernel `[[0,1,0],[1,-4,1],[0,1,0]]`.
pub fn abs_laplacian(src: &[f64], width: usize, height: usize) -> Vec<f64> {
    let mut out = vec![0.0; src.len()];
    for y in 0..height {
        let up = y.saturating_sub(1);
        let down = (y + 1).min(height - 1);
        for x in 0..width {
            let left = x.saturating_sub(1);
            let right = (x + 1).min(width - 1);
            let c = src[y * width + x];
            let v = src[up * width + x] + src[down * width + x] + src[y * width + left] + src[y * width + right]
                - 4.0 * c;
            out[y * width + x] = v.abs();
        }
    }
    out
}

/// Radii of `n` box filters whose cascade matches a Gaussian of `sigma`.
pub fn box_radii_for_gauss(sigma: f64, n: usize) -> Vec<usize> {
    if sigma.is_nan() || sigma <= 0.0 {
        return vec![0; n];
    }
    let nf = n as f64;
    let ideal = (12.0 * sigma * sigma / nf + 1.0).sqrt();
    let mut lower = ideal.floor() as i64;
    if lower % 2 == 0 {
        lower -= 1;
    }
    let lower = lower.max(1);
    let upper = lower + 2;
    let lf = lower as f64;
    let m = ((12.0 * sigma * sigma - nf * lf * lf - 4.0 * nf * lf - 3.0 * nf) / (-4.0 * lf - 4.0)).round();
    let m = m.clamp(0.0, nf) as usize;
    (0..n)
        .map(|i| {
            let w = if i < m { lower } else { upper };
            ((w - 1) / 2) as usize
        })
        .collect()
}

fn box_rows(buf: &mut [f64], tmp: &mut Vec<f64>, width: usize, r: usize) {
    if r == 0 || width == 1 {
        return;
    }
    let norm = 1.0 / (2 * r + 1) as f64;
    tmp.resize(width, 0.0);
    for row in buf.chunks_exact_mut(width) {
        tmp.copy_from_slice(row);
        let at = |i: isize| tmp[clamp_idx(i, width)];
        let mut sum = 0.0;
        for k in -(r as isize)..=(r as isize) {
            sum += at(k);
        }
        for (x, d) in row.iter_mut().enumerate() {
            *d = sum * norm;
            let x = x as isize;
            sum += at(x + r as isize + 1) - at(x - r as isize);
        }
    }
}

fn box_cols(buf: &mut [f64], width: usize, height: usize, r: usize) {
    if r == 0 || height == 1 {
        return;
    }
    let norm = 1.0 / (2 * r + 1) as f64;
    let src = buf.to_vec();
    let row = |y: isize| {
        let y = clamp_idx(y, height);
        &src[y * width..(y + 1) * width]
    };
    let mut acc = vec![0.0; width];
    for k in -(r as isize)..=(r as isize) {
        for (a, v) in acc.iter_mut().zip(row(k)) {
            *a += v;
        }
    }
    for y in 0..height {
        let dst = &mut buf[y * width..(y + 1) * width];
        for (d, a) in dst.iter_mut().zip(&acc) {
            *d = a * norm;
        }
        let yi = y as isize;
        let (add, sub) = (row(yi + r as isize + 1), row(yi - r as isize));
        for x in 0..width {
            acc[x] += add[x] - sub[x];
        }
    }
}

/// Gaussian blur approximated by three cascaded box blurs of matched variance.
pub fn gauss_approx(src: &[f64], width: usize, height: usize, sigma: f64) -> Vec<f64> {
    let radii = box_radii_for_gauss(sigma, 3);
    let mut out = src.to_vec();
    let mut tmp = Vec::new();
    for &r in &radii {
        box_rows(&mut out, &mut tmp, width, r);
    }
    for &r in &radii {
        box_cols(&mut out, width, height, r);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(w: usize, h: usize) -> Vec<f64> {
        (0..w * h).map(|i| 0.1 * (i % w) as f64 + 0.03 * (i / w) as f64).collect()
    }

    #[test]
    fn constants_are_fixed_points() {
        let c = vec![0.7; 35];
        for v in blur5(&c, 7, 5) {
            assert!((v - 0.7).abs() < 1e-15);
        }
        for v in expand(&[0.7; 12], 4, 3, 7, 5) {
            assert!((v - 0.7).abs() < 1e-15);
        }
        for v in gauss_approx(&c, 7, 5, 3.0) {
            assert!((v - 0.7).abs() < 1e-12);
        }
    }

    #[test]
    fn decimate_keeps_even_samples() {
        let src: Vec<f64> = (0..15).map(f64::from).collect();
        assert_eq!(decimate2(&src, 5, 3), vec![0.0, 2.0, 4.0, 10.0, 12.0, 14.0]);
    }

    #[test]
    fn laplacian_examples() {
        let mut spike = vec![0.0; 9];
        spike[4] = 1.0;
        let l = abs_laplacian(&spike, 3, 3);
        assert_eq!(l[4], 4.0);
        for i in [1, 3, 5, 7] {
            assert_eq!(l[i], 1.0);
        }
        for i in [0, 2, 6, 8] {
            assert_eq!(l[i], 0.0);
        }
        let r = ramp(6, 5);
        let l = abs_laplacian(&r, 6, 5);
        for y in 1..4 {
            for x in 1..5 {
                assert!(l[y * 6 + x] < 1e-12);
            }
        }
    }

    #[test]
    fn box_radii_match_variance() {
        let achieved = |radii: Vec<usize>| -> f64 {
            radii
                .iter()
                .map(|&r| {
                    let w = (2 * r + 1) as f64;
                    (w * w - 1.0) / 12.0
                })
                .sum::<f64>()
                .sqrt()
        };
        // Odd widths only: small sigmas are matched coarsely.
        assert!((achieved(box_radii_for_gauss(1.0, 3)) - 1.0).abs() < 0.2);
        for sigma in [2.5, 4.0, 16.0, 40.0] {
            let got = achieved(box_radii_for_gauss(sigma, 3));
            assert!((got - sigma).abs() / sigma < 0.15, "sigma {sigma}: got {got}");
        }
        assert_eq!(box_radii_for_gauss(0.0, 3), vec![0, 0, 0]);
    }

    #[test]
    fn box_blur_matches_direct_sum() {
        let src: Vec<f64> = (0..40).map(|i| ((i * 37) % 11) as f64 / 11.0).collect();
        let mut fast = src.clone();
        let mut tmp = Vec::new();
        box_rows(&mut fast, &mut tmp, 8, 2);
        for y in 0..5 {
            for x in 0..8 {
                let want: f64 = (-2..=2)
                    .map(|k| src[y * 8 + clamp_idx(x as isize + k, 8)])
                    .sum::<f64>()
                    / 5.0;
                assert!((fast[y * 8 + x] - want).abs() < 1e-12);
            }
        }
        let mut fast = src.clone();
        box_cols(&mut fast, 8, 5, 3);
        for y in 0..5 {
            for x in 0..8 {
                let want: f64 = (-3..=3)
                    .map(|k| src[clamp_idx(y as isize + k, 5) * 8 + x])
                    .sum::<f64>()
                    / 7.0;
                assert!((fast[y * 8 + x] - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_pixel_blur_is_identity() {
        assert_eq!(gauss_approx(&[0.3], 1, 1, 5.0), vec![0.3]);
        assert_eq!(blur5(&[0.3], 1, 1), vec![0.3]);
    }
}
