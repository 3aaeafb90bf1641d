use crate::error::{Error, Result};
use crate::fusion::StackingMethod;
use crate::imgcore::image::check_same_shape;
use crate::imgcore::Image;

/// Reduces several frames to one, per pixel and per channel.
///
/// Mean is a running mean, so equal inputs reproduce the input bit for bit.
/// Median of an even count is the average of the two middle values.
pub fn stack_frames(frames: &[&Image], method: StackingMethod) -> Result<Image> {
    if frames.is_empty() {
        return Err(Error::invalid("nothing to stack"));
    }
    check_same_shape(frames)?;
    let first = frames[0];
    let len = first.data().len();
    let data = match method {
        StackingMethod::None => {
            return Err(Error::invalid("stacking method None does not reduce frames"));
        }
        StackingMethod::Mean => {
            let mut acc = first.data().to_vec();
            for (k, f) in frames.iter().enumerate().skip(1) {
                let inv = 1.0 / (k + 1) as f64;
                for (m, &x) in acc.iter_mut().zip(f.data()) {
                    *m += (x - *m) * inv;
                }
            }
            acc
        }
        StackingMethod::Median => {
            let mut buf = vec![0.0; frames.len()];
            let mut out = Vec::with_capacity(len);
            for i in 0..len {
                for (b, f) in buf.iter_mut().zip(frames) {
                    *b = f.data()[i];
                }
                out.push(median_in_place(&mut buf));
            }
            out
        }
    };
    Ok(Image::from_raw(first.width(), first.height(), first.color_space(), data))
}

fn median_in_place(values: &mut [f64]) -> f64 {
    values.sort_unstable_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imgcore::ColorSpace;

    fn gray(vals: &[f64]) -> Vec<Image> {
        vals.iter().map(|&v| Image::filled(2, 2, ColorSpace::Gray, v).unwrap()).collect()
    }

    fn run(vals: &[f64], m: StackingMethod) -> f64 {
        let imgs = gray(vals);
        let refs: Vec<&Image> = imgs.iter().collect();
        stack_frames(&refs, m).unwrap().data()[0]
    }

    #[test]
    fn examples() {
        assert_eq!(run(&[0.2, 0.5, 0.9], StackingMethod::Median), 0.5);
        assert!((run(&[0.2, 0.4, 0.6, 0.8], StackingMethod::Median) - 0.5).abs() < 1e-15);
        assert!((run(&[0.2, 0.4, 0.6, 0.8], StackingMethod::Mean) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identical_frames_are_exact() {
        for v in [0.1, 0.3, 0.7, 1.0 / 3.0] {
            for n in 1..=5 {
                let vals = vec![v; n];
                assert_eq!(run(&vals, StackingMethod::Mean), v);
                assert_eq!(run(&vals, StackingMethod::Median), v);
            }
        }
    }

    #[test]
    fn errors() {
        assert!(stack_frames(&[], StackingMethod::Mean).is_err());
        let a = Image::filled(2, 2, ColorSpace::Rgb, 0.1).unwrap();
        let b = Image::filled(3, 2, ColorSpace::Rgb, 0.1).unwrap();
        assert!(stack_frames(&[&a, &b], StackingMethod::Median).is_err());
        assert!(stack_frames(&[&a, &a], StackingMethod::None).is_err());
    }
}
