//! Per-pixel quality measures and their combination.
//!
//! Three measures steer the fusion: contrast (`|Laplacian|` of luma),
//! saturation (per-pixel RGB standard deviation) and well-exposedness (a
//! Gaussian around mid-gray). They are combined multiplicatively with
//! per-measure exponents and normalized across frames so every pixel becomes
//! a convex combination.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::filter;
use crate::imgcore::color::luma_plane;
use crate::imgcore::{ColorSpace, Image};

/// Default well-exposedness spread.
pub const EXPOSURE_SIGMA: f64 = 0.2;

/// Sums below this fall back to uniform weights.
pub const UNIFORM_FALLBACK_BELOW: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum WeightKind {
    Contrast,
    Saturation,
    Exposure,
}

impl WeightKind {
    pub const ALL: [WeightKind; 3] = [WeightKind::Contrast, WeightKind::Saturation, WeightKind::Exposure];

    fn index(self) -> usize {
        self as usize
    }

    pub fn letter(self) -> char {
        match self {
            WeightKind::Contrast => 'C',
            WeightKind::Saturation => 'S',
            WeightKind::Exposure => 'E',
        }
    }
}

/// A subset of the three measures, written `C+S+E`, `C+E`, `E`, ...
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSet([bool; 3]);

impl WeightSet {
    pub const CSE: WeightSet = WeightSet([true, true, true]);
    pub const CE: WeightSet = WeightSet([true, false, true]);

    pub fn of(kinds: &[WeightKind]) -> Self {
        let mut set = [false; 3];
        for k in kinds {
            set[k.index()] = true;
        }
        WeightSet(set)
    }

    pub fn contains(&self, kind: WeightKind) -> bool {
        self.0[kind.index()]
    }

    pub fn without(mut self, kind: WeightKind) -> Self {
        self.0[kind.index()] = false;
        self
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn kinds(&self) -> impl Iterator<Item = WeightKind> + '_ {
        WeightKind::ALL.into_iter().filter(|k| self.contains(*k))
    }
}

impl fmt::Display for WeightSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<String> = self.kinds().map(|k| k.letter().to_string()).collect();
        f.write_str(&letters.join("+"))
    }
}

impl FromStr for WeightSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut set = [false; 3];
        for part in s.split('+') {
            let kind = match part.trim().to_ascii_uppercase().as_str() {
                "C" => WeightKind::Contrast,
                "S" => WeightKind::Saturation,
                "E" => WeightKind::Exposure,
                other => {
                    return Err(Error::config(format!(
                        "unknown weight {other:?} in {s:?}; use C, S, E joined by '+'"
                    )))
                }
            };
            if set[kind.index()] {
                return Err(Error::config(format!("weight {} listed twice in {s:?}", kind.letter())));
            }
            set[kind.index()] = true;
        }
        Ok(WeightSet(set))
    }
}

/// Which measures to use and their exponents `k` in `W = prod W_i^k_i`.
///
/// A kind whose exponent is 0 is treated exactly like an excluded kind: its
/// map is neither computed nor multiplied in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightConfig {
    included: WeightSet,
    exponents: [f64; 3],
    pub exposure_sigma: f64,
}

impl WeightConfig {
    pub fn new(included: WeightSet) -> Result<Self> {
        let cfg = Self {
            included,
            exponents: [1.0; 3],
            exposure_sigma: EXPOSURE_SIGMA,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_exponent(mut self, kind: WeightKind, k: f64) -> Result<Self> {
        self.exponents[kind.index()] = k;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.included.is_empty() {
            return Err(Error::config("at least one weight map must be included"));
        }
        for kind in WeightKind::ALL {
            let k = self.exponents[kind.index()];
            if !(0.0..=1.0).contains(&k) {
                return Err(Error::config(format!("exponent for {} must lie in [0, 1], got {k}", kind.letter())));
            }
        }
        if !(self.exposure_sigma.is_finite() && self.exposure_sigma > 0.0) {
            return Err(Error::config("exposure sigma must be positive"));
        }
        Ok(())
    }

    pub fn included(&self) -> WeightSet {
        self.included
    }

    pub fn exponent(&self, kind: WeightKind) -> f64 {
        self.exponents[kind.index()]
    }

    /// Kinds that actually contribute: included with a non-zero exponent.
    pub fn active(&self) -> WeightSet {
        let mut set = self.included;
        for kind in WeightKind::ALL {
            if self.exponents[kind.index()] == 0.0 {
                set = set.without(kind);
            }
        }
        set
    }
}

/// `|Laplacian|` of the luminance plane (BT.601 luma for RGB, Y for YUV).
pub fn contrast_weight(frame: &Image) -> Image {
    let (w, h) = frame.dims();
    let lum = luma_plane(frame);
    Image::from_raw(w, h, ColorSpace::Gray, filter::abs_laplacian(&lum, w, h))
}

/// Population standard deviation of R, G, B.
pub fn saturation_weight(frame: &Image) -> Result<Image> {
    if frame.color_space() != ColorSpace::Rgb {
        return Err(Error::invalid(format!(
            "saturation needs an RGB image, got {}",
            frame.color_space()
        )));
    }
    let (r, g, b) = (frame.plane(0), frame.plane(1), frame.plane(2));
    let data = (0..frame.pixel_count())
        .map(|i| {
            let mu = (r[i] + g[i] + b[i]) / 3.0;
            let (dr, dg, db) = (r[i] - mu, g[i] - mu, b[i] - mu);
            ((dr * dr + dg * dg + db * db) / 3.0).sqrt()
        })
        .collect();
    Ok(Image::from_raw(frame.width(), frame.height(), ColorSpace::Gray, data))
}

/// Product over channels of `exp(-(v - 0.5)^2 / (2 sigma^2))`.
pub fn exposure_weight(frame: &Image) -> Image {
    exposure_weight_with_sigma(frame, EXPOSURE_SIGMA)
}

pub fn exposure_weight_with_sigma(frame: &Image, sigma: f64) -> Image {
    let inv = 1.0 / (2.0 * sigma * sigma);
    let mut data = vec![1.0; frame.pixel_count()];
    for plane in frame.planes() {
        for (d, &v) in data.iter_mut().zip(plane) {
            let t = v - 0.5;
            *d *= (-t * t * inv).exp();
        }
    }
    Image::from_raw(frame.width(), frame.height(), ColorSpace::Gray, data)
}

/// Per-kind maps of one frame; only the active kinds need to be present.
#[derive(Debug, Clone, Default)]
pub struct KindMaps {
    maps: [Option<Image>; 3],
}

impl KindMaps {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, kind: WeightKind, map: Image) {
        self.maps[kind.index()] = Some(map);
    }

    pub fn with(mut self, kind: WeightKind, map: Image) -> Self {
        self.insert(kind, map);
        self
    }

    pub fn get(&self, kind: WeightKind) -> Option<&Image> {
        self.maps[kind.index()].as_ref()
    }

    fn take(&mut self, kind: WeightKind) -> Option<Image> {
        self.maps[kind.index()].take()
    }
}

/// Computes only the maps the config needs.
///
/// For RGB frames contrast runs on luma and exposure on all three channels;
/// for single-channel (Y) frames both run on that plane. Saturation needs RGB.
pub fn compute_kind_maps(frame: &Image, cfg: &WeightConfig) -> Result<KindMaps> {
    let mut maps = KindMaps::new();
    for kind in cfg.active().kinds() {
        let map = match kind {
            WeightKind::Contrast => contrast_weight(frame),
            WeightKind::Saturation => saturation_weight(frame)?,
            WeightKind::Exposure => exposure_weight_with_sigma(frame, cfg.exposure_sigma),
        };
        maps.insert(kind, map);
    }
    Ok(maps)
}

/// `W = prod_i W_i^k_i` over active kinds, in fixed C, S, E order.
///
/// Factors with `k = 1` are multiplied in directly; kinds with `k = 0` are
/// skipped rather than raised to zero, so excluding a kind and zeroing its
/// exponent give bit-identical results.
pub fn combine_weights(mut per_kind: KindMaps, cfg: &WeightConfig) -> Result<Image> {
    let mut acc: Option<Image> = None;
    for kind in cfg.active().kinds() {
        let mut map = per_kind
            .take(kind)
            .ok_or_else(|| Error::config(format!("weight map {} is required but was not computed", kind.letter())))?;
        if map.color_space() != ColorSpace::Gray {
            return Err(Error::invalid("weight maps must be single-channel"));
        }
        let k = cfg.exponent(kind);
        if k != 1.0 {
            for v in map.data_mut() {
                *v = v.powf(k);
            }
        }
        acc = Some(match acc {
            None => map,
            Some(mut a) => {
                if a.dims() != map.dims() {
                    return Err(Error::invalid("weight maps differ in size"));
                }
                for (x, y) in a.data_mut().iter_mut().zip(map.data()) {
                    *x *= y;
                }
                a
            }
        });
    }
    acc.ok_or_else(|| Error::config("no active weight map"))
}

/// One combined weight plane per frame.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMaps {
    maps: Vec<Image>,
    normalized: bool,
}

impl WeightMaps {
    pub fn new(maps: Vec<Image>) -> Result<Self> {
        let Some(first) = maps.first() else {
            return Err(Error::invalid("weight stack is empty"));
        };
        for m in &maps {
            if m.color_space() != ColorSpace::Gray || m.dims() != first.dims() {
                return Err(Error::invalid("weight maps must be single-channel and equally sized"));
            }
            if m.data().iter().any(|&v| v < 0.0) {
                return Err(Error::invalid("weight maps must be non-negative"));
            }
        }
        Ok(Self {
            maps,
            normalized: false,
        })
    }

    pub fn maps(&self) -> &[Image] {
        &self.maps
    }

    pub fn into_maps(self) -> Vec<Image> {
        self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }
}

/// Divides each frame's weight by the per-pixel sum over frames.
///
/// Where the sum is below [`UNIFORM_FALLBACK_BELOW`] every frame gets `1/N`.
pub fn normalize_weights(stack: WeightMaps) -> Result<WeightMaps> {
    let mut maps = stack.maps;
    let n = maps.len();
    if n == 0 {
        return Err(Error::invalid("weight stack is empty"));
    }
    let uniform = 1.0 / n as f64;
    let pixels = maps[0].pixel_count();
    for p in 0..pixels {
        let mut sum = 0.0;
        for m in maps.iter() {
            sum += m.data()[p];
        }
        if sum < UNIFORM_FALLBACK_BELOW {
            for m in maps.iter_mut() {
                m.data_mut()[p] = uniform;
            }
        } else {
            for m in maps.iter_mut() {
                m.data_mut()[p] /= sum;
            }
        }
    }
    Ok(WeightMaps { maps, normalized: true })
}
