use crate::error::{Error, Result};
use crate::imgcore::image::Image;

/// One capture of a bracket, tagged with its device EV label.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub image: Image,
    pub ev: i32,
}

impl Frame {
    pub fn new(ev: i32, image: Image) -> Self {
        Self { image, ev }
    }
}

/// Frames of one scene, sorted by strictly ascending EV, all the same shape.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameSequence {
    frames: Vec<Frame>,
}

impl FrameSequence {
    pub fn new(frames: Vec<Frame>) -> Result<Self> {
        if frames.is_empty() {
            return Err(Error::invalid("frame sequence is empty"));
        }
        let first = &frames[0].image;
        for (i, pair) in frames.windows(2).enumerate() {
            if pair[1].ev <= pair[0].ev {
                return Err(Error::invalid(format!(
                    "EV labels must be strictly ascending: {} follows {} at position {}",
                    pair[1].ev,
                    pair[0].ev,
                    i + 1
                )));
            }
            if !pair[1].image.same_shape(first) {
                return Err(Error::invalid(format!(
                    "frame ev {} is {}x{} {}, expected {}x{} {}",
                    pair[1].ev,
                    pair[1].image.width(),
                    pair[1].image.height(),
                    pair[1].image.color_space(),
                    first.width(),
                    first.height(),
                    first.color_space()
                )));
            }
        }
        Ok(Self { frames })
    }

    /// Sorts by EV before validating.
    pub fn from_unsorted(mut frames: Vec<Frame>) -> Result<Self> {
        frames.sort_by_key(|f| f.ev);
        Self::new(frames)
    }

    pub fn frames(&self) -> &[Frame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn evs(&self) -> Vec<i32> {
        self.frames.iter().map(|f| f.ev).collect()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.frames[0].image.dims()
    }

    pub fn get(&self, ev: i32) -> Option<&Frame> {
        self.frames.iter().find(|f| f.ev == ev)
    }

    pub fn negatives(&self) -> impl Iterator<Item = &Frame> {
        self.frames.iter().filter(|f| f.ev < 0)
    }

    /// Non-negative frames in ascending EV order.
    pub fn positives(&self) -> impl Iterator<Item = &Frame> {
        self.frames.iter().filter(|f| f.ev >= 0)
    }
}
