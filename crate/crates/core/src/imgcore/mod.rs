//! Image containers, color conversion, file I/O and synthetic brackets.

pub mod color;
pub mod frames;
pub mod image;
pub mod io;
pub mod synth;

pub use self::color::{luma, rgb_to_yuv, yuv_to_rgb};
pub use self::frames::{Frame, FrameSequence};
pub use self::image::{ColorSpace, Image};
pub use self::io::{load_image, load_scene, save_image, save_scene, Scene};
pub use self::synth::{random_radiance, synth_bracket, synth_scene, write_synthetic_dataset, EvGain, SceneSpec};
