//! Gaussian and Laplacian pyramids.
//!
//! Level 0 is full resolution; each further level is `ceil(n / 2)` in both
//! dimensions. REDUCE is the `[1, 4, 6, 4, 1] / 16` binomial blur followed by
//! keeping even rows and columns; EXPAND resamples back onto the parent's
//! exact grid, so odd sizes reconstruct exactly.

use crate::error::{Error, Result};
use crate::filter;
use crate::imgcore::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PyramidKind {
    Gaussian,
    Laplacian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    kind: PyramidKind,
    levels: Vec<Image>,
}

impl Pyramid {
    /// Validates the halving law and channel agreement across levels.
    pub fn new(kind: PyramidKind, levels: Vec<Image>) -> Result<Self> {
        let Some(first) = levels.first() else {
            return Err(Error::invalid("pyramid needs at least one level"));
        };
        for (k, pair) in levels.windows(2).enumerate() {
            let (parent, child) = (&pair[0], &pair[1]);
            if child.dims() != (filter::half(parent.width()), filter::half(parent.height())) {
                return Err(Error::invalid(format!(
                    "level {} is {}x{}, expected half of {}x{}",
                    k + 1,
                    child.width(),
                    child.height(),
                    parent.width(),
                    parent.height()
                )));
            }
            if child.color_space() != first.color_space() {
                return Err(Error::invalid("pyramid levels must share a color space"));
            }
        }
        Ok(Self { kind, levels })
    }

    pub fn kind(&self) -> PyramidKind {
        self.kind
    }

    pub fn levels(&self) -> &[Image] {
        &self.levels
    }

    pub(crate) fn levels_mut(&mut self) -> &mut [Image] {
        &mut self.levels
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn into_levels(self) -> Vec<Image> {
        self.levels
    }
}

/// `max(1, floor(log2(min(w, h))) - 2)`: the coarsest level keeps at least
/// four pixels along its short side.
pub fn default_depth(width: usize, height: usize) -> usize {
    let m = width.min(height).max(1);
    let log2 = (usize::BITS - 1 - m.leading_zeros()) as usize;
    log2.saturating_sub(2).max(1)
}

fn check_depth(img: &Image, depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(Error::invalid("pyramid depth must be at least 1"));
    }
    let min_dim = img.width().min(img.height());
    let fits = u32::try_from(depth - 1)
        .ok()
        .and_then(|s| 1usize.checked_shl(s))
        .is_some_and(|needed| needed <= min_dim);
    if !fits {
        return Err(Error::invalid(format!(
            "depth {depth} is too deep for a {}x{} image",
            img.width(),
            img.height()
        )));
    }
    Ok(())
}

fn reduce_image(img: &Image) -> Image {
    let (w, h) = img.dims();
    let (cw, ch) = (filter::half(w), filter::half(h));
    let mut data = Vec::with_capacity(cw * ch * img.channels());
    for plane in img.planes() {
        data.extend(filter::reduce(plane, w, h));
    }
    Image::from_raw(cw, ch, img.color_space(), data)
}

pub fn gaussian_pyramid(img: &Image, depth: usize) -> Result<Pyramid> {
    check_depth(img, depth)?;
    let mut levels = Vec::with_capacity(depth);
    levels.push(img.clone());
    for k in 1..depth {
        let next = reduce_image(&levels[k - 1]);
        levels.push(next);
    }
    Ok(Pyramid {
        kind: PyramidKind::Gaussian,
        levels,
    })
}

/// Subtracts `expand(coarse)` from `fine` in place.
fn subtract_expanded(fine: &mut Image, coarse: &Image) {
    let (pw, ph) = fine.dims();
    let (cw, ch) = coarse.dims();
    for c in 0..fine.channels() {
        let up = filter::expand(coarse.plane(c), cw, ch, pw, ph);
        for (f, u) in fine.plane_mut(c).iter_mut().zip(&up) {
            *f -= u;
        }
    }
}

fn add_expanded(fine: &mut Image, coarse: &Image) {
    let (pw, ph) = fine.dims();
    let (cw, ch) = coarse.dims();
    for c in 0..fine.channels() {
        let up = filter::expand(coarse.plane(c), cw, ch, pw, ph);
        for (f, u) in fine.plane_mut(c).iter_mut().zip(&up) {
            *f += u;
        }
    }
}

/// Band-pass levels `G_k - expand(G_{k+1})` with the Gaussian top level as
/// low-pass residual.
pub fn laplacian_pyramid(img: &Image, depth: usize) -> Result<Pyramid> {
    let mut levels = gaussian_pyramid(img, depth)?.levels;
    // Ascending order: G_{k+1} is still intact when level k is rewritten.
    for k in 0..levels.len() - 1 {
        let (head, tail) = levels.split_at_mut(k + 1);
        subtract_expanded(&mut head[k], &tail[0]);
    }
    Ok(Pyramid {
        kind: PyramidKind::Laplacian,
        levels,
    })
}

/// Reconstructs the image from a Laplacian pyramid. No clamping.
pub fn collapse(pyr: &Pyramid) -> Result<Image> {
    collapse_owned(pyr.clone())
}

/// [`collapse`] reusing the pyramid's buffers.
pub fn collapse_owned(pyr: Pyramid) -> Result<Image> {
    if pyr.kind != PyramidKind::Laplacian {
        return Err(Error::invalid("collapse expects a Laplacian pyramid"));
    }
    let mut levels = pyr.levels;
    while levels.len() > 1 {
        let coarse = levels.pop().expect("len > 1");
        let fine = levels.last_mut().expect("len >= 1");
        add_expanded(fine, &coarse);
    }
    Ok(levels.pop().expect("non-empty pyramid"))
}
