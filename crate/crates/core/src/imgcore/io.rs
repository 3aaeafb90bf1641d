//! 8-bit PNG / binary PNM reading and writing, plus the on-disk scene layout
//! `<scene>/ev_<label>.png` with an optional `<scene>/gt.png`.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use image::codecs::png::PngEncoder;
use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{DynamicImage, ExtendedColorType, ImageEncoder, ImageReader};

use crate::error::{Error, Result};
use crate::imgcore::frames::{Frame, FrameSequence};
use crate::imgcore::image::{ColorSpace, Image};

pub const GT_FILE: &str = "gt.png";

/// Maps an 8-bit code to a sample in `[0, 1]`.
#[inline]
pub fn code_to_sample(code: u8) -> f64 {
    f64::from(code) / 255.0
}

/// Clamps to `[0, 1]` and rounds to the nearest 8-bit code.
#[inline]
pub fn sample_to_code(v: f64) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let reader = ImageReader::open(path)
        .and_then(|r| r.with_guessed_format())
        .map_err(|e| Error::io(path, e))?;
    let decoded = reader.decode().map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        image::ImageError::Unsupported(u) => Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: u.to_string(),
        },
        other => Error::Decode {
            path: path.to_path_buf(),
            reason: other.to_string(),
        },
    })?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    match decoded {
        DynamicImage::ImageLuma8(buf) => {
            Image::gray(w, h, buf.into_raw().into_iter().map(code_to_sample).collect())
        }
        DynamicImage::ImageRgb8(buf) => {
            let raw = buf.into_raw();
            let n = w * h;
            let mut data = vec![0.0; 3 * n];
            for (i, px) in raw.chunks_exact(3).enumerate() {
                for c in 0..3 {
                    data[c * n + i] = code_to_sample(px[c]);
                }
            }
            Image::new(w, h, ColorSpace::Rgb, data)
        }
        other => Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: format!("{:?}; only 8-bit grayscale or RGB is supported", other.color()),
        }),
    }
}

enum FileKind {
    Png,
    Ppm,
    Pgm,
}

fn file_kind(path: &Path) -> Result<FileKind> {
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .unwrap_or_default();
    match ext.as_str() {
        "png" => Ok(FileKind::Png),
        "ppm" => Ok(FileKind::Ppm),
        "pgm" => Ok(FileKind::Pgm),
        _ => Err(Error::UnsupportedFormat {
            path: path.to_path_buf(),
            reason: format!("unknown extension {ext:?}; expected png, ppm or pgm"),
        }),
    }
}

/// Interleaved 8-bit codes for an RGB or GRAY image.
fn to_codes(img: &Image) -> Result<(Vec<u8>, ExtendedColorType)> {
    match img.color_space() {
        ColorSpace::Gray => Ok((img.data().iter().map(|&v| sample_to_code(v)).collect(), ExtendedColorType::L8)),
        ColorSpace::Rgb => {
            let n = img.pixel_count();
            let (r, g, b) = (img.plane(0), img.plane(1), img.plane(2));
            let mut out = Vec::with_capacity(3 * n);
            for i in 0..n {
                out.extend_from_slice(&[sample_to_code(r[i]), sample_to_code(g[i]), sample_to_code(b[i])]);
            }
            Ok((out, ExtendedColorType::Rgb8))
        }
        ColorSpace::Yuv => Err(Error::invalid("convert YUV images to RGB before saving")),
    }
}

pub fn save_image(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let kind = file_kind(path)?;
    let (codes, color) = to_codes(img)?;
    match (&kind, color) {
        (FileKind::Ppm, ExtendedColorType::L8) | (FileKind::Pgm, ExtendedColorType::Rgb8) => {
            return Err(Error::invalid(format!(
                "{}: PPM holds RGB and PGM holds grayscale images",
                path.display()
            )));
        }
        _ => {}
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let writer = BufWriter::new(file);
    let (w, h) = (img.width() as u32, img.height() as u32);
    let encoded = match kind {
        FileKind::Png => PngEncoder::new(writer).write_image(&codes, w, h, color),
        FileKind::Ppm => PnmEncoder::new(writer)
            .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
            .write_image(&codes, w, h, color),
        FileKind::Pgm => PnmEncoder::new(writer)
            .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
            .write_image(&codes, w, h, color),
    };
    encoded.map_err(|e| match e {
        image::ImageError::IoError(io) => Error::io(path, io),
        other => Error::Decode {
            path: path.to_path_buf(),
            reason: other.to_string(),
        },
    })
}

/// One scene directory: its EV bracket and optional ground truth.
#[derive(Debug, Clone)]
pub struct Scene {
    pub id: String,
    pub dir: PathBuf,
    pub frames: FrameSequence,
    pub gt: Option<Image>,
}

pub fn frame_file_name(ev: i32) -> String {
    format!("ev_{ev}.png")
}

fn parse_frame_name(name: &str) -> Option<i32> {
    name.strip_prefix("ev_")?.strip_suffix(".png")?.parse().ok()
}

/// Loads every `ev_<label>.png` in `dir` plus `gt.png` if present.
///
/// A scene without an EV-negative frame is rejected with
/// [`Error::MissingFrame`], since every fusion needs it.
pub fn load_scene(dir: impl AsRef<Path>) -> Result<Scene> {
    let dir = dir.as_ref();
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut labelled = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let name = entry.file_name();
        if let Some(ev) = name.to_str().and_then(parse_frame_name) {
            labelled.push((ev, entry.path()));
        }
    }
    if labelled.is_empty() {
        return Err(Error::MissingFrame {
            dir: dir.to_path_buf(),
            what: "EV frames (ev_<label>.png)".into(),
        });
    }
    if !labelled.iter().any(|(ev, _)| *ev < 0) {
        return Err(Error::MissingFrame {
            dir: dir.to_path_buf(),
            what: "negative-EV frame (e.g. ev_-24.png)".into(),
        });
    }
    let mut frames = Vec::with_capacity(labelled.len());
    for (ev, path) in labelled {
        frames.push(Frame::new(ev, load_image(&path)?));
    }
    let frames = FrameSequence::from_unsorted(frames)?;
    let gt_path = dir.join(GT_FILE);
    let gt = if gt_path.is_file() {
        let gt = load_image(&gt_path)?;
        if gt.dims() != frames.dims() {
            return Err(Error::invalid(format!(
                "{}: ground truth is {}x{}, frames are {}x{}",
                gt_path.display(),
                gt.width(),
                gt.height(),
                frames.dims().0,
                frames.dims().1
            )));
        }
        Some(gt)
    } else {
        None
    };
    let id = dir
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string());
    Ok(Scene {
        id,
        dir: dir.to_path_buf(),
        frames,
        gt,
    })
}

/// Writes a scene in the standard layout, creating `dir` if needed.
pub fn save_scene(dir: impl AsRef<Path>, frames: &FrameSequence, gt: Option<&Image>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for f in frames.frames() {
        save_image(&f.image, dir.join(frame_file_name(f.ev)))?;
    }
    if let Some(gt) = gt {
        save_image(gt, dir.join(GT_FILE))?;
    }
    Ok(())
}
