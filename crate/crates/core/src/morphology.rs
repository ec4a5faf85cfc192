//! Binary erosion with a discrete ball element, and the seed-size rule that
//! scales the element to the lesion fraction.

use alloc::vec::Vec;

use crate::error::Error;
use crate::image::BinaryMask;
use crate::Result;

/// Discrete ball structuring element with an `E x E` footprint.
///
/// Offsets are the integer pairs with `dx^2 + dy^2 <= (E-1)^2 / 4`. For even
/// `E` the anchor sits on the top-left cell of the central 2x2, so the
/// integer footprint spans `E - 1` cells per axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallElement {
    size: usize,
    offsets: Vec<(i32, i32)>,
}

impl BallElement {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter("ball size must be >= 1"));
        }
        let r2 = ((size - 1) * (size - 1)) as f64 / 4.0;
        let reach = ((size - 1) / 2 + 1) as i32;
        let mut offsets = Vec::new();
        for dy in -reach..=reach {
            for dx in -reach..=reach {
                if (dx * dx + dy * dy) as f64 <= r2 {
                    offsets.push((dx, dy));
                }
            }
        }
        Ok(Self { size, offsets })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn offsets(&self) -> &[(i32, i32)] {
        &self.offsets
    }
}

/// Erosion seed size `E_n = round(1 + 40 * P_n)` where `P_n` is the fraction
/// of the brain covered by the lesion candidate; rounding is half-up.
///
/// `P_n` is a fraction, not a percentage: percentages would blow the element
/// up to thousands of pixels.
pub fn seed_size(lesion: &BinaryMask, brain: &BinaryMask) -> Result<usize> {
    if !lesion.same_dims(brain) {
        return Err(Error::DimensionMismatch {
            expected: (brain.width(), brain.height()),
            got: (lesion.width(), lesion.height()),
        });
    }
    let brain_area = brain.count();
    if brain_area == 0 {
        return Err(Error::EmptyBrain);
    }
    let overlap = lesion.and(brain)?.count();
    let fraction = overlap as f64 / brain_area as f64;
    Ok(seed_size_from_fraction(fraction))
}

/// The `round(1 + 40 * P)` rule on a precomputed fraction.
pub fn seed_size_from_fraction(fraction: f64) -> usize {
    libm::floor(1.0 + 40.0 * fraction + 0.5) as usize
}

/// Binary erosion: output pixel is true iff every element offset lands on a
/// true pixel; out-of-bounds counts as false.
pub fn erode(mask: &BinaryMask, elem: &BallElement) -> BinaryMask {
    let (w, h) = (mask.width(), mask.height());
    let mut out = BinaryMask::new(w, h);
    'pixels: for y in 0..h {
        for x in 0..w {
            for &(dx, dy) in elem.offsets() {
                let nx = x as i64 + dx as i64;
                let ny = y as i64 + dy as i64;
                if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                    continue 'pixels;
                }
                if !mask.get(nx as usize, ny as usize) {
                    continue 'pixels;
                }
            }
            out.set(x, y, true);
        }
    }
    out
}
