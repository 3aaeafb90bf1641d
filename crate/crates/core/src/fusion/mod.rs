//! Exposure fusion methods and the frame-selection / stacking front end.
//!
//! A [`FusionConfig`] is one point of the variable space: fusion method,
//! weight maps, number of EV-positive frames, and stacking method. [`fuse`]
//! selects the EV-negative frame plus the first `n_positive` EV-positive
//! frames, optionally stacks the positives into one image, and dispatches to
//! one of four methods:
//!
//! - [`fuse_mertens`]: multi-scale blend of all RGB channels.
//! - [`fuse_fast_yuv`]: multi-scale blend of Y only; chroma taken from the
//!   most colorful frame per pixel.
//! - [`fuse_ssf_rgb`]: single-scale two-band (detail + base) approximation
//!   of the pyramid blend.
//! - [`fuse_ssf_yuv`]: the single-scale blend on Y with Fast-YUV chroma.

mod pyramid_blend;
mod single_scale;
mod stack;

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result, StageExt};
use crate::imgcore::image::check_same_shape;
use crate::imgcore::{ColorSpace, FrameSequence, Image};
use crate::weights::{
    combine_weights, compute_kind_maps, normalize_weights, WeightConfig, WeightKind, WeightMaps, WeightSet,
};

pub use self::pyramid_blend::{fuse_fast_yuv, fuse_mertens};
pub use self::single_scale::{default_ssf_sigmas, fuse_ssf_rgb, fuse_ssf_yuv};
pub use self::stack::stack_frames;

/// Largest supported number of EV-positive frames.
pub const MAX_POSITIVE: usize = 5;

pub(crate) const RULE_SATURATION: &str = "the saturation weight (S) is only applicable to mertens and ssf-rgb";
pub(crate) const RULE_STACKING: &str =
    "mean/median stacking is only applicable when using more than 1 EV>=0 frame";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FusionMethod {
    Mertens,
    FastYuv,
    SsfRgb,
    SsfYuv,
}

impl FusionMethod {
    pub const ALL: [FusionMethod; 4] = [
        FusionMethod::Mertens,
        FusionMethod::FastYuv,
        FusionMethod::SsfRgb,
        FusionMethod::SsfYuv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FusionMethod::Mertens => "mertens",
            FusionMethod::FastYuv => "fast-yuv",
            FusionMethod::SsfRgb => "ssf-rgb",
            FusionMethod::SsfYuv => "ssf-yuv",
        }
    }

    pub fn is_yuv(self) -> bool {
        matches!(self, FusionMethod::FastYuv | FusionMethod::SsfYuv)
    }

    pub fn admits(self, kind: WeightKind) -> bool {
        kind != WeightKind::Saturation || !self.is_yuv()
    }

    /// The method's complete weight set.
    pub fn full_weights(self) -> WeightSet {
        if self.is_yuv() {
            WeightSet::CE
        } else {
            WeightSet::CSE
        }
    }

    /// Weight sets of the include/exclude protocol: everything, then each
    /// admissible map dropped in turn.
    pub fn sweep_weight_sets(self) -> Vec<WeightSet> {
        let full = self.full_weights();
        std::iter::once(full)
            .chain(full.kinds().map(|k| full.without(k)))
            .collect()
    }
}

impl fmt::Display for FusionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FusionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FusionMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config(format!("unknown method {s:?}; expected mertens, fast-yuv, ssf-rgb or ssf-yuv")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StackingMethod {
    Mean,
    Median,
    None,
}

impl StackingMethod {
    pub const ALL: [StackingMethod; 3] = [StackingMethod::Mean, StackingMethod::Median, StackingMethod::None];

    pub fn name(self) -> &'static str {
        match self {
            StackingMethod::Mean => "mean",
            StackingMethod::Median => "median",
            StackingMethod::None => "none",
        }
    }
}

impl fmt::Display for StackingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StackingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StackingMethod::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config(format!("unknown stacking {s:?}; expected mean, median or none")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FusionConfig {
    pub method: FusionMethod,
    pub weights: WeightConfig,
    pub n_positive: usize,
    pub stacking: StackingMethod,
    /// `None` picks [`crate::pyramid::default_depth`].
    pub pyramid_depth: Option<usize>,
    /// `None` picks `min(W, H) / 32`.
    pub ssf_sigma_base: Option<f64>,
    /// `None` picks `min(W, H) / 8`.
    pub ssf_sigma_weight: Option<f64>,
}

impl FusionConfig {
    pub fn new(method: FusionMethod, weights: WeightSet, n_positive: usize, stacking: StackingMethod) -> Result<Self> {
        let cfg = Self {
            method,
            weights: WeightConfig::new(weights)?,
            n_positive,
            stacking,
            pyramid_depth: None,
            ssf_sigma_base: None,
            ssf_sigma_weight: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.weights.validate()?;
        check_weights_for(self.method, &self.weights)?;
        if !(1..=MAX_POSITIVE).contains(&self.n_positive) {
            return Err(Error::config(format!(
                "number of EV>=0 frames must be in 1..={MAX_POSITIVE}, got {}",
                self.n_positive
            )));
        }
        if self.n_positive == 1 && self.stacking != StackingMethod::None {
            return Err(Error::config(RULE_STACKING));
        }
        if self.pyramid_depth == Some(0) {
            return Err(Error::config("pyramid depth must be at least 1"));
        }
        for s in [self.ssf_sigma_base, self.ssf_sigma_weight].into_iter().flatten() {
            if !(s.is_finite() && s >= 0.0) {
                return Err(Error::config(format!("SSF sigma must be >= 0, got {s}")));
            }
        }
        Ok(())
    }
}

pub(crate) fn check_weights_for(method: FusionMethod, weights: &WeightConfig) -> Result<()> {
    if weights.active().kinds().any(|k| !method.admits(k)) {
        return Err(Error::config(format!("{RULE_SATURATION} (method {method})")));
    }
    Ok(())
}

/// Shared precondition of the four methods: at least two equally sized RGB
/// frames and a weight set the method admits.
pub(crate) fn check_method_inputs(method: FusionMethod, inputs: &[&Image], weights: &WeightConfig) -> Result<()> {
    if inputs.len() < 2 {
        return Err(Error::invalid(format!("fusion needs at least 2 frames, got {}", inputs.len())));
    }
    check_same_shape(inputs)?;
    if inputs[0].color_space() != ColorSpace::Rgb {
        return Err(Error::invalid(format!(
            "fusion input must be RGB, got {}",
            inputs[0].color_space()
        )));
    }
    weights.validate()?;
    check_weights_for(method, weights)
}

/// Picks the EV-negative frame and the `n_positive` lowest non-negative
/// frames, and stacks the positives when the config asks for it.
///
/// Borrowed frames are returned as [`Cow::Borrowed`]; only a stacked image
/// is newly allocated.
pub fn prepare_inputs<'a>(seq: &'a FrameSequence, cfg: &FusionConfig) -> Result<Vec<Cow<'a, Image>>> {
    let mut negatives = seq.negatives();
    let negative = match (negatives.next(), negatives.next()) {
        (Some(f), None) => f,
        (None, _) => return Err(Error::invalid("sequence has no EV-negative frame")),
        (Some(_), Some(_)) => return Err(Error::invalid("sequence must contain exactly one EV-negative frame")),
    };
    let positives: Vec<&Image> = seq.positives().take(cfg.n_positive).map(|f| &f.image).collect();
    if positives.len() < cfg.n_positive {
        return Err(Error::invalid(format!(
            "config needs {} EV>=0 frames, sequence has {}",
            cfg.n_positive,
            positives.len()
        )));
    }
    if cfg.n_positive == 1 && cfg.stacking != StackingMethod::None {
        return Err(Error::config(RULE_STACKING));
    }
    let mut inputs = Vec::with_capacity(1 + positives.len());
    inputs.push(Cow::Borrowed(&negative.image));
    if cfg.stacking != StackingMethod::None {
        inputs.push(Cow::Owned(stack_frames(&positives, cfg.stacking)?));
    } else {
        inputs.extend(positives.into_iter().map(Cow::Borrowed));
    }
    Ok(inputs)
}

/// Runs one full configuration on a frame sequence. Errors carry the stage
/// (`config`, `prepare` or the method name) where they arose.
pub fn fuse(seq: &FrameSequence, cfg: &FusionConfig) -> Result<Image> {
    cfg.validate().stage("config")?;
    let inputs = prepare_inputs(seq, cfg).stage("prepare")?;
    let refs: Vec<&Image> = inputs.iter().map(|c| c.as_ref()).collect();
    fuse_images(&refs, cfg).stage(cfg.method.name())
}

/// Dispatches prepared inputs to the configured method.
pub fn fuse_images(inputs: &[&Image], cfg: &FusionConfig) -> Result<Image> {
    match cfg.method {
        FusionMethod::Mertens => fuse_mertens(inputs, &cfg.weights, cfg.pyramid_depth),
        FusionMethod::FastYuv => fuse_fast_yuv(inputs, &cfg.weights, cfg.pyramid_depth),
        FusionMethod::SsfRgb => fuse_ssf_rgb(inputs, &cfg.weights, cfg.ssf_sigma_base, cfg.ssf_sigma_weight),
        FusionMethod::SsfYuv => fuse_ssf_yuv(inputs, &cfg.weights, cfg.ssf_sigma_base, cfg.ssf_sigma_weight),
    }
}

/// Per-pixel chroma of the frame with the largest `|U - 0.5| + |V - 0.5|`;
/// ties go to the earliest frame. Returns `(U, V)`.
#[inline]
pub(crate) fn max_chroma_at(inputs: &[&Image], i: usize) -> (f64, f64) {
    let mut best = (0.5, 0.5);
    let mut best_score = f64::NEG_INFINITY;
    for img in inputs {
        let (_, u, v) =
            crate::imgcore::color::rgb_to_yuv_px(img.plane(0)[i], img.plane(1)[i], img.plane(2)[i]);
        let (u, v) = (u.clamp(0.0, 1.0), v.clamp(0.0, 1.0));
        let score = (u - 0.5).abs() + (v - 0.5).abs();
        if score > best_score {
            best_score = score;
            best = (u, v);
        }
    }
    best
}

/// Recombines a fused Y plane with max-chroma UV into a clamped RGB image.
pub(crate) fn yuv_output(inputs: &[&Image], y_plane: &[f64], width: usize, height: usize) -> Image {
    let n = width * height;
    let mut out = vec![0.0; 3 * n];
    for i in 0..n {
        let (u, v) = max_chroma_at(inputs, i);
        let y = y_plane[i].clamp(0.0, 1.0);
        let (r, g, b) = crate::imgcore::color::yuv_to_rgb_px(y, u, v);
        out[i] = r.clamp(0.0, 1.0);
        out[n + i] = g.clamp(0.0, 1.0);
        out[2 * n + i] = b.clamp(0.0, 1.0);
    }
    Image::from_raw(width, height, ColorSpace::Rgb, out)
}

/// Clamped BT.601 luma of an RGB frame as a GRAY image (the Y plane of its
/// YUV conversion).
pub(crate) fn y_image(img: &Image) -> Image {
    let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
    let data = (0..img.pixel_count())
        .map(|i| crate::imgcore::luma(r[i], g[i], b[i]).clamp(0.0, 1.0))
        .collect();
    Image::from_raw(img.width(), img.height(), ColorSpace::Gray, data)
}

/// Normalized combined weight map per input frame. RGB methods measure the
/// RGB frame; YUV methods measure its Y plane only.
pub(crate) fn normalized_weights(inputs: &[&Image], weights: &WeightConfig, on_luma: bool) -> Result<Vec<Image>> {
    let mut maps = Vec::with_capacity(inputs.len());
    for img in inputs {
        let kinds = if on_luma {
            compute_kind_maps(&y_image(img), weights)?
        } else {
            compute_kind_maps(img, weights)?
        };
        maps.push(combine_weights(kinds, weights)?);
    }
    Ok(normalize_weights(WeightMaps::new(maps)?)?.into_maps())
}
