//! Image, mask, and histogram value types.
//!
//! All pixel data is row-major. An [`IntensityImage`] holds normalized
//! intensities in `[0, 1]`; background pixels removed scanner-side arrive as
//! exact zeros, and [`IntensityImage::brain_mask`] recovers the brain region
//! from them. No further skull stripping is attempted.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// Raw integer image as decoded from a file, before normalization.
///
/// Samples are carried in `u16` regardless of the nominal bit depth (the
/// clinical source data is 12-bit in 16-bit containers).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawImage {
    width: usize,
    height: usize,
    data: Vec<u16>,
}

impl RawImage {
    pub fn new(width: usize, height: usize, data: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::InvalidParameter("raw image dimensions"));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u16] {
        &self.data
    }

    /// Normalize to `[0, 1]` by the affine map `x -> (x - min) / (max - min)`
    /// over this image's own min and max (not the nominal bit-depth ceiling).
    pub fn normalize(&self) -> Result<IntensityImage> {
        let values: Vec<f64> = self.data.iter().map(|&v| f64::from(v)).collect();
        IntensityImage::from_normalized_values(self.width, self.height, values)
    }
}

/// A 2-D grid of intensities, normalized so min is 0 and max is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl IntensityImage {
    /// Build from values already in `[0, 1]` without rescaling.
    ///
    /// Used by synthetic generators whose output is normalized by
    /// construction.
    pub fn from_values(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(Error::InvalidParameter("image dimensions"));
        }
        if data.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0) {
            return Err(Error::InvalidParameter("intensity outside [0, 1]"));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Normalize arbitrary finite values to `[0, 1]`.
    ///
    /// Errors with [`Error::ConstantImage`] when max equals min; the caller
    /// decides whether a constant slice should be treated as all-zero.
    pub fn from_normalized_values(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 || values.len() != width * height {
            return Err(Error::InvalidParameter("image dimensions"));
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::InvalidParameter("non-finite intensity"));
            }
            min = min.min(v);
            max = max.max(v);
        }
        if max == min {
            return Err(Error::ConstantImage);
        }
        let scale = 1.0 / (max - min);
        let data = values.iter().map(|&v| (v - min) * scale).collect();
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Re-apply min/max normalization. Idempotent on non-constant images that
    /// are already normalized.
    pub fn renormalize(&self) -> Result<Self> {
        Self::from_normalized_values(self.width, self.height, self.data.clone())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn max_value(&self) -> f64 {
        self.data.iter().copied().fold(0.0, f64::max)
    }

    /// The brain region: every pixel with nonzero intensity. Background and
    /// noise removal happens scanner-side, so background pixels are exact
    /// zeros.
    pub fn brain_mask(&self) -> BinaryMask {
        let bits = self.data.iter().map(|&v| v > 0.0).collect();
        BinaryMask {
            width: self.width,
            height: self.height,
            bits,
        }
    }

    /// Nearest-neighbor resample to `new_width` x `new_height`.
    ///
    /// Output pixel `(x, y)` copies input pixel
    /// `(floor((x + 0.5) * sw), floor((y + 0.5) * sh))` where `sw`, `sh` are
    /// the dimension ratios; at an integer ratio `r` this picks the center
    /// sample `r*x + r/2` of each block.
    pub fn resize_nn(&self, new_width: usize, new_height: usize) -> Result<Self> {
        if new_width == 0 || new_height == 0 {
            return Err(Error::InvalidParameter("resize target dimensions"));
        }
        let sw = self.width as f64 / new_width as f64;
        let sh = self.height as f64 / new_height as f64;
        let mut data = Vec::with_capacity(new_width * new_height);
        for y in 0..new_height {
            let sy = nn_source(y, sh, self.height);
            for x in 0..new_width {
                let sx = nn_source(x, sw, self.width);
                data.push(self.data[sy * self.width + sx]);
            }
        }
        Ok(Self {
            width: new_width,
            height: new_height,
            data,
        })
    }
}

#[inline]
pub(crate) fn nn_source(out_idx: usize, scale: f64, in_dim: usize) -> usize {
    let src = libm::floor((out_idx as f64 + 0.5) * scale) as usize;
    src.min(in_dim - 1)
}

/// Per-pixel boolean mask over an image grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(Error::InvalidParameter("mask dimensions"));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.bits[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: bool) {
        self.bits[y * self.width + x] = value;
    }

    /// Number of set pixels.
    pub fn count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn same_dims(&self, other: &BinaryMask) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn and(&self, other: &BinaryMask) -> Result<BinaryMask> {
        if !self.same_dims(other) {
            return Err(Error::DimensionMismatch {
                expected: (self.width, self.height),
                got: (other.width, other.height),
            });
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a && b)
            .collect();
        Ok(BinaryMask {
            width: self.width,
            height: self.height,
            bits,
        })
    }

    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.same_dims(other)
            && self
                .bits
                .iter()
                .zip(&other.bits)
                .all(|(&a, &b)| !a || b)
    }

    /// Nearest-neighbor resample; same sampling rule as
    /// [`IntensityImage::resize_nn`], so masks stay binary.
    pub fn resize_nn(&self, new_width: usize, new_height: usize) -> Result<Self> {
        if new_width == 0 || new_height == 0 {
            return Err(Error::InvalidParameter("resize target dimensions"));
        }
        let sw = self.width as f64 / new_width as f64;
        let sh = self.height as f64 / new_height as f64;
        let mut bits = Vec::with_capacity(new_width * new_height);
        for y in 0..new_height {
            let sy = nn_source(y, sh, self.height);
            for x in 0..new_width {
                let sx = nn_source(x, sw, self.width);
                bits.push(self.bits[sy * self.width + sx]);
            }
        }
        Ok(Self {
            width: new_width,
            height: new_height,
            bits,
        })
    }
}

/// Which pixels feed a histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramDomain {
    /// Every pixel of the image.
    AllPixels,
    /// Only nonzero (brain) pixels.
    BrainOnly,
}

/// Fixed-bin intensity histogram over `[0, 1]` with normalized probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    counts: Vec<u64>,
    probabilities: Vec<f64>,
    edges: Vec<f64>,
}

impl Histogram {
    /// Histogram the image over uniform bins. Intensity 1.0 falls in the last
    /// bin. Errors with [`Error::EmptyDomain`] when a brain-only domain has no
    /// pixels.
    pub fn from_image(
        img: &IntensityImage,
        bin_count: usize,
        domain: HistogramDomain,
    ) -> Result<Self> {
        if bin_count < 2 {
            return Err(Error::InvalidParameter("bin_count must be >= 2"));
        }
        let mut counts = vec![0u64; bin_count];
        let mut total = 0u64;
        for &v in img.data() {
            if domain == HistogramDomain::BrainOnly && v == 0.0 {
                continue;
            }
            counts[Self::bin_index(v, bin_count)] += 1;
            total += 1;
        }
        if total == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(Self::from_counts(counts, total))
    }

    pub fn from_raw_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.len() < 2 {
            return Err(Error::InvalidParameter("bin_count must be >= 2"));
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyDomain);
        }
        Ok(Self::from_counts(counts, total))
    }

    fn from_counts(counts: Vec<u64>, total: u64) -> Self {
        let bin_count = counts.len();
        let probabilities = counts.iter().map(|&c| c as f64 / total as f64).collect();
        let edges = (0..=bin_count)
            .map(|i| i as f64 / bin_count as f64)
            .collect();
        Self {
            counts,
            probabilities,
            edges,
        }
    }

    #[inline]
    pub fn bin_index(value: f64, bin_count: usize) -> usize {
        debug_assert!((0.0..=1.0).contains(&value));
        ((value * bin_count as f64) as usize).min(bin_count - 1)
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `P(i)`: per-bin probabilities summing to 1.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Bin boundaries over `[0, 1]`, `bin_count + 1` entries, strictly
    /// increasing.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Lower edge of bin `i`.
    pub fn lower_edge(&self, i: usize) -> f64 {
        self.edges[i]
    }

    /// Center intensity of bin `i`; the representative value used by the
    /// threshold search.
    pub fn bin_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.counts.len() as f64
    }

    pub fn nonzero_bins(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image(width: usize, height: usize, data: Vec<f64>) -> IntensityImage {
        IntensityImage::from_values(width, height, data).unwrap()
    }

    #[test]
    fn normalize_affine_map() {
        let raw = RawImage::new(3, 1, vec![0, 2048, 4095]).unwrap();
        let img = raw.normalize().unwrap();
        assert_eq!(img.get(0, 0), 0.0);
        assert!((img.get(1, 0) - 2048.0 / 4095.0).abs() < 1e-15);
        assert_eq!(img.get(2, 0), 1.0);
    }

    #[test]
    fn normalize_identity_on_unit_range() {
        let data = vec![0.0, 0.25, 0.5, 1.0];
        let img = IntensityImage::from_normalized_values(4, 1, data.clone()).unwrap();
        assert_eq!(img.data(), data.as_slice());
    }

    #[test]
    fn normalize_constant_image_errors() {
        let raw = RawImage::new(2, 2, vec![7, 7, 7, 7]).unwrap();
        assert_eq!(raw.normalize().unwrap_err(), Error::ConstantImage);
    }

    #[test]
    fn normalize_is_idempotent() {
        let raw = RawImage::new(2, 2, vec![3, 99, 250, 17]).unwrap();
        let img = raw.normalize().unwrap();
        assert_eq!(img.renormalize().unwrap(), img);
    }

    #[test]
    fn brain_mask_zeros_and_half() {
        let img = image(2, 2, vec![0.0, 0.0, 0.5, 0.5]);
        let mask = img.brain_mask();
        assert_eq!(mask.bits(), &[false, false, true, true]);

        let all_zero = IntensityImage::from_values(2, 1, vec![0.0, 0.0]).unwrap();
        assert_eq!(all_zero.brain_mask().count(), 0);
    }

    #[test]
    fn histogram_two_bins_split() {
        let img = image(8, 1, vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]);
        let h = Histogram::from_image(&img, 2, HistogramDomain::AllPixels).unwrap();
        assert_eq!(h.counts(), &[4, 4]);
        assert_eq!(h.probabilities(), &[0.5, 0.5]);
    }

    #[test]
    fn histogram_constant_single_bin() {
        let img = image(4, 1, vec![0.3; 4]);
        let h = Histogram::from_image(&img, 10, HistogramDomain::AllPixels).unwrap();
        for (i, &c) in h.counts().iter().enumerate() {
            assert_eq!(c, if i == 3 { 4 } else { 0 });
        }
    }

    #[test]
    fn histogram_uniform_ramp_is_flat() {
        let n = 4096;
        let data: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        let img = image(n, 1, data);
        let h = Histogram::from_image(&img, 256, HistogramDomain::AllPixels).unwrap();
        // Count each bin by direct enumeration for the oracle.
        let mut direct = vec![0u64; 256];
        for i in 0..n {
            let v = i as f64 / (n - 1) as f64;
            direct[Histogram::bin_index(v, 256)] += 1;
        }
        assert_eq!(h.counts(), direct.as_slice());
        let max = h.counts().iter().max().unwrap();
        let min = h.counts().iter().min().unwrap();
        assert!(max / min.max(&1) <= 2, "max {max} min {min}");
    }

    #[test]
    fn histogram_brain_only_empty_errors() {
        let img = IntensityImage::from_values(2, 1, vec![0.0, 0.0]).unwrap();
        let err = Histogram::from_image(&img, 4, HistogramDomain::BrainOnly).unwrap_err();
        assert_eq!(err, Error::EmptyDomain);
    }

    #[test]
    fn histogram_top_value_lands_in_last_bin() {
        assert_eq!(Histogram::bin_index(1.0, 256), 255);
        assert_eq!(Histogram::bin_index(0.0, 256), 0);
    }

    #[test]
    fn resize_nn_integer_ratio_picks_center_sample() {
        let mut data = vec![0.0; 36];
        for (i, v) in data.iter_mut().enumerate() {
            *v = i as f64 / 35.0;
        }
        let img = image(6, 6, data);
        let small = img.resize_nn(2, 2).unwrap();
        for y in 0..2 {
            for x in 0..2 {
                assert_eq!(small.get(x, y), img.get(3 * x + 1, 3 * y + 1));
            }
        }
    }

    #[test]
    fn resize_nn_identity() {
        let img = image(3, 2, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
        assert_eq!(img.resize_nn(3, 2).unwrap(), img);
    }

    #[test]
    fn resize_nn_checkerboard_enumerated() {
        let bits = vec![
            true, false, true, false, //
            false, true, false, true, //
            true, false, true, false, //
            false, true, false, true,
        ];
        let mask = BinaryMask::from_bits(4, 4, bits).unwrap();
        let small = mask.resize_nn(2, 2).unwrap();
        // Direct evaluation of the sampling rule: sw = 2, src = 2*x + 1.
        for y in 0..2 {
            for x in 0..2 {
                assert_eq!(small.get(x, y), mask.get(2 * x + 1, 2 * y + 1));
            }
        }
    }
}
