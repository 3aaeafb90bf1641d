//! Synthetic exposure brackets.
//!
//! A [`SceneSpec`] holds a linear radiance image and a camera model
//! (EV-to-gain mapping, display gamma, additive noise). [`synth_bracket`]
//! renders one clipped, gamma-encoded frame per EV label.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::imgcore::frames::{Frame, FrameSequence};
use crate::imgcore::image::{ColorSpace, Image};
use crate::imgcore::io::save_scene;

/// Mapping from an EV label to a linear exposure multiplier.
#[derive(Debug, Clone, PartialEq)]
pub enum EvGain {
    /// `gain = 2^(ev / evs_per_stop)`.
    PowerOfTwo { evs_per_stop: f64 },
    /// Explicit per-label gains; unknown labels are a configuration error.
    Table(BTreeMap<i32, f64>),
}

impl Default for EvGain {
    /// Eight labels per stop, so `-24` is three stops under `0`.
    fn default() -> Self {
        EvGain::PowerOfTwo { evs_per_stop: 8.0 }
    }
}

impl EvGain {
    pub fn gain(&self, ev: i32) -> Result<f64> {
        match self {
            EvGain::PowerOfTwo { evs_per_stop } => Ok((f64::from(ev) / evs_per_stop).exp2()),
            EvGain::Table(t) => t
                .get(&ev)
                .copied()
                .ok_or_else(|| Error::config(format!("no gain configured for EV label {ev}"))),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            EvGain::PowerOfTwo { evs_per_stop } if !(evs_per_stop.is_finite() && *evs_per_stop > 0.0) => {
                Err(Error::config("evs_per_stop must be positive"))
            }
            EvGain::Table(t) => match t.iter().find(|(_, g)| !(g.is_finite() && **g > 0.0)) {
                Some((ev, g)) => Err(Error::config(format!("gain for EV {ev} must be positive, got {g}"))),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    /// Linear radiance, GRAY or RGB; may exceed 1.
    pub radiance: Image,
    pub ev_to_gain: EvGain,
    pub gamma: f64,
    pub noise_sigma: f64,
}

impl SceneSpec {
    pub fn new(radiance: Image) -> Self {
        Self {
            radiance,
            ev_to_gain: EvGain::default(),
            gamma: 2.2,
            noise_sigma: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.radiance.color_space() == ColorSpace::Yuv {
            return Err(Error::config("radiance must be GRAY or RGB"));
        }
        if self.radiance.data().iter().any(|&v| v < 0.0) {
            return Err(Error::config("radiance must be non-negative"));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::config(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::config(format!("noise sigma must be >= 0, got {}", self.noise_sigma)));
        }
        self.ev_to_gain.validate()
    }

    /// Noise-free tone curve of the radiance at the given gain, clipped to `[0, 1]`.
    pub fn expose(&self, gain: f64) -> Image {
        let inv_gamma = 1.0 / self.gamma;
        let data = self
            .radiance
            .data()
            .iter()
            .map(|&r| (r * gain).powf(inv_gamma).clamp(0.0, 1.0))
            .collect();
        Image::from_raw(self.radiance.width(), self.radiance.height(), self.radiance.color_space(), data)
    }

    /// The reference rendering: radiance tone-mapped at unit gain, no noise.
    pub fn ground_truth(&self) -> Image {
        self.expose(1.0)
    }
}

/// Renders one frame per EV label: `clamp((radiance * gain)^(1/gamma) + noise)`.
///
/// Noise is drawn from a ChaCha8 stream seeded with `seed`, frame by frame in
/// EV order, so output is reproducible across platforms.
pub fn synth_bracket(spec: &SceneSpec, evs: &[i32], seed: u64) -> Result<FrameSequence> {
    spec.validate()?;
    if evs.is_empty() {
        return Err(Error::invalid("EV list is empty"));
    }
    if evs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid(format!("EV list must be strictly ascending: {evs:?}")));
    }
    let gains = evs
        .iter()
        .map(|&ev| spec.ev_to_gain.gain(ev))
        .collect::<Result<Vec<_>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = if spec.noise_sigma > 0.0 {
        Some(Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::config(e.to_string()))?)
    } else {
        None
    };
    let mut frames = Vec::with_capacity(evs.len());
    for (&ev, &gain) in evs.iter().zip(&gains) {
        let mut img = spec.expose(gain);
        if let Some(noise) = &noise {
            for v in img.data_mut() {
                *v = (*v + noise.sample(&mut rng)).clamp(0.0, 1.0);
            }
        }
        frames.push(Frame::new(ev, img));
    }
    FrameSequence::new(frames)
}

/// A random RGB radiance map with a wide dynamic range: a bright sky band
/// over a dark foreground, a handful of lit and shadowed shapes, and fine
/// texture so contrast weights have something to respond to.
pub fn random_radiance(width: usize, height: usize, seed: u64) -> Result<Image> {
    if width == 0 || height == 0 {
        return Err(Error::invalid("scene size must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let horizon = rng.random_range(0.3..0.6) * height as f64;
    let sky: [f64; 3] = [rng.random_range(1.2..2.5), rng.random_range(1.5..2.8), rng.random_range(2.0..3.5)];
    let ground: [f64; 3] = [rng.random_range(0.03..0.15), rng.random_range(0.03..0.15), rng.random_range(0.02..0.1)];

    struct Blob {
        cx: f64,
        cy: f64,
        rx: f64,
        ry: f64,
        color: [f64; 3],
        rect: bool,
    }
    let scale = width.min(height) as f64;
    let blobs: Vec<Blob> = (0..rng.random_range(4..9))
        .map(|_| {
            let level = 2f64.powf(rng.random_range(-5.0..1.5));
            Blob {
                cx: rng.random_range(0.0..width as f64),
                cy: rng.random_range(0.0..height as f64),
                rx: rng.random_range(0.05..0.25) * scale,
                ry: rng.random_range(0.05..0.25) * scale,
                color: [
                    level * rng.random_range(0.2..1.0),
                    level * rng.random_range(0.2..1.0),
                    level * rng.random_range(0.2..1.0),
                ],
                rect: rng.random_bool(0.5),
            }
        })
        .collect();
    let fx = rng.random_range(0.15..0.6);
    let fy = rng.random_range(0.15..0.6);
    let phase = rng.random_range(0.0..std::f64::consts::TAU);

    Image::from_fn(width, height, ColorSpace::Rgb, |x, y, c| {
        let (xf, yf) = (x as f64, y as f64);
        let t = ((yf - horizon) / (0.05 * height as f64)).tanh() * 0.5 + 0.5;
        let mut v = sky[c] * (1.0 - t) + ground[c] * t;
        for b in &blobs {
            let (dx, dy) = ((xf - b.cx) / b.rx, (yf - b.cy) / b.ry);
            let inside = if b.rect {
                dx.abs() <= 1.0 && dy.abs() <= 1.0
            } else {
                dx * dx + dy * dy <= 1.0
            };
            if inside {
                v = b.color[c];
            }
        }
        let texture = 1.0 + 0.15 * (fx * xf + phase).sin() * (fy * yf).cos();
        v * texture
    })
}

/// A random scene rendered as an EV bracket plus its unit-gain ground
/// truth, using the default camera model.
pub fn synth_scene(width: usize, height: usize, evs: &[i32], seed: u64) -> Result<(FrameSequence, Image)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = SceneSpec::new(random_radiance(width, height, rng.random())?);
    let frames = synth_bracket(&spec, evs, rng.random())?;
    Ok((frames, spec.ground_truth()))
}

/// Writes `scenes` synthetic scene folders (`scene_000`, `scene_001`, ...)
/// under `out` and returns their paths. Scene `i` is seeded from `seed` and
/// `i`, so the output depends only on the arguments.
pub fn write_synthetic_dataset(
    out: &Path,
    scenes: usize,
    width: usize,
    height: usize,
    evs: &[i32],
    seed: u64,
) -> Result<Vec<PathBuf>> {
    if scenes == 0 {
        return Err(Error::invalid("need at least one scene"));
    }
    let mut dirs = Vec::with_capacity(scenes);
    for i in 0..scenes {
        let (frames, gt) = synth_scene(width, height, evs, seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64))?;
        let dir = out.join(format!("scene_{i:03}"));
        save_scene(&dir, &frames, Some(&gt))?;
        dirs.push(dir);
    }
    Ok(dirs)
}
