//! Multilevel Otsu thresholding.
//!
//! Finds `n` thresholds over a histogram that minimize the weighted
//! within-class variance
//! `sigma_w^2 = sum_k q_k * sigma_k^2`
//! where `q_k` is the probability mass of class `k` and `sigma_k^2` its
//! intensity variance. The search is exact: a dynamic program over prefix
//! sums considers every strictly increasing placement of thresholds on bin
//! boundaries. Ties resolve to the lexicographically smallest threshold
//! tuple so results are reproducible.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::image::{BinaryMask, Histogram, IntensityImage};
use crate::Result;

/// Thresholds minimizing weighted within-class variance for one histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSet {
    thresholds: Vec<f64>,
    boundary_bins: Vec<usize>,
    wcv: f64,
}

impl ThresholdSet {
    /// Threshold intensities, strictly increasing. Each is the lower edge of
    /// the first bin of its upper class.
    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    /// Number of thresholds (`n`); classes number `n + 1`.
    pub fn len(&self) -> usize {
        self.thresholds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thresholds.is_empty()
    }

    /// Bin index where each upper class starts.
    pub fn boundary_bins(&self) -> &[usize] {
        &self.boundary_bins
    }

    /// Achieved weighted within-class variance.
    pub fn wcv(&self) -> f64 {
        self.wcv
    }

    /// Threshold for 1-based `level`.
    pub fn threshold_at_level(&self, level: usize) -> Result<f64> {
        if level == 0 || level > self.thresholds.len() {
            return Err(Error::InvalidParameter("threshold level out of range"));
        }
        Ok(self.thresholds[level - 1])
    }
}

/// Prefix-sum accumulators over weighted bin centers.
struct Prefix {
    p: Vec<f64>,
    pc: Vec<f64>,
    pc2: Vec<f64>,
}

impl Prefix {
    fn new(hist: &Histogram) -> Self {
        let bins = hist.bin_count();
        let mut p = vec![0.0; bins + 1];
        let mut pc = vec![0.0; bins + 1];
        let mut pc2 = vec![0.0; bins + 1];
        for i in 0..bins {
            let prob = hist.probabilities()[i];
            let c = hist.bin_center(i);
            p[i + 1] = p[i] + prob;
            pc[i + 1] = pc[i] + prob * c;
            pc2[i + 1] = pc2[i] + prob * c * c;
        }
        Self { p, pc, pc2 }
    }

    /// Weighted within-class variance contribution `q * sigma^2` of the class
    /// covering bins `[lo, hi)`. Clamped at zero: a pure class can round to a
    /// tiny negative.
    #[inline]
    fn class_cost(&self, lo: usize, hi: usize) -> f64 {
        let q = self.p[hi] - self.p[lo];
        if q <= 0.0 {
            return 0.0;
        }
        let s1 = self.pc[hi] - self.pc[lo];
        let s2 = self.pc2[hi] - self.pc2[lo];
        (s2 - s1 * s1 / q).max(0.0)
    }
}

/// Find the `n_thresholds` cut points that globally minimize the weighted
/// within-class variance of `hist`.
///
/// Requires at least `n_thresholds + 1` nonzero bins; fails with
/// [`Error::Infeasible`] otherwise.
pub fn multilevel_otsu(hist: &Histogram, n_thresholds: usize) -> Result<ThresholdSet> {
    if n_thresholds == 0 {
        return Err(Error::InvalidParameter("n_thresholds must be >= 1"));
    }
    let needed = n_thresholds + 1;
    let nonzero = hist.nonzero_bins();
    if nonzero < needed {
        return Err(Error::Infeasible {
            nonzero_bins: nonzero,
            needed,
        });
    }

    let bins = hist.bin_count();
    let prefix = Prefix::new(hist);
    let classes = n_thresholds + 1;

    // suffix[k][l]: minimal cost of covering bins [l, bins) with k classes,
    // each class at least one bin wide. choice[k][l]: smallest boundary
    // achieving it, which makes the reconstructed tuple lexicographically
    // smallest among optima.
    let mut suffix = vec![vec![f64::INFINITY; bins + 1]; classes + 1];
    let mut choice = vec![vec![0usize; bins + 1]; classes + 1];
    for l in 0..bins {
        suffix[1][l] = prefix.class_cost(l, bins);
    }
    for k in 2..=classes {
        // k classes need k bins, so the last valid start is bins - k.
        for l in 0..=bins.saturating_sub(k) {
            let mut best = f64::INFINITY;
            let mut best_b = 0;
            for b in (l + 1)..=(bins - (k - 1)) {
                let cost = prefix.class_cost(l, b) + suffix[k - 1][b];
                if cost < best {
                    best = cost;
                    best_b = b;
                }
            }
            suffix[k][l] = best;
            choice[k][l] = best_b;
        }
    }

    let mut boundary_bins = Vec::with_capacity(n_thresholds);
    let mut l = 0;
    for k in (2..=classes).rev() {
        let b = choice[k][l];
        boundary_bins.push(b);
        l = b;
    }

    let thresholds = boundary_bins.iter().map(|&b| hist.lower_edge(b)).collect();
    Ok(ThresholdSet {
        thresholds,
        boundary_bins,
        wcv: suffix[classes][0],
    })
}

/// Binarize at the 1-based `level`-th threshold: mask is true where intensity
/// is at or above it. Masks are nested: each level's mask contains the next.
pub fn apply_threshold_level(
    img: &IntensityImage,
    thresholds: &ThresholdSet,
    level: usize,
) -> Result<BinaryMask> {
    let t = thresholds.threshold_at_level(level)?;
    let bits = img.data().iter().map(|&v| v >= t).collect();
    BinaryMask::from_bits(img.width(), img.height(), bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::IntensityImage;
    use alloc::vec;

    fn hist_from_counts(counts: Vec<u64>) -> Histogram {
        Histogram::from_raw_counts(counts).unwrap()
    }

    #[test]
    fn two_spikes_single_threshold() {
        let mut counts = vec![0u64; 256];
        counts[51] = 500;
        counts[205] = 500;
        let ts = multilevel_otsu(&hist_from_counts(counts), 1).unwrap();
        assert_eq!(ts.len(), 1);
        let t = ts.thresholds()[0];
        assert!(t > 51.5 / 256.0 && t <= 205.0 / 256.0, "t = {t}");
        assert!(ts.wcv().abs() < 1e-12);
        // Lexicographic tie-break: earliest zero-cost boundary.
        assert_eq!(ts.boundary_bins(), &[52]);
    }

    #[test]
    fn uniform_eight_bins_cuts_midrange() {
        let ts = multilevel_otsu(&hist_from_counts(vec![10; 8]), 1).unwrap();
        // Exhaustive check over the 7 cut points: symmetric, so 4 is optimal
        // and the tie-break picks the smaller of {4} (cost is strictly convex
        // around the middle; 4 is the unique argmin for 8 bins).
        assert_eq!(ts.boundary_bins(), &[4]);
        assert!((ts.thresholds()[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn three_spikes_two_thresholds() {
        let mut counts = vec![0u64; 64];
        counts[5] = 100;
        counts[30] = 100;
        counts[60] = 100;
        let ts = multilevel_otsu(&hist_from_counts(counts), 2).unwrap();
        assert!(ts.wcv().abs() < 1e-12);
        let (t1, t2) = (ts.thresholds()[0], ts.thresholds()[1]);
        assert!(t1 > 5.5 / 64.0 && t1 <= 30.0 / 64.0);
        assert!(t2 > 30.5 / 64.0 && t2 <= 60.0 / 64.0);
    }

    #[test]
    fn infeasible_when_too_few_nonzero_bins() {
        let mut counts = vec![0u64; 16];
        counts[3] = 5;
        counts[9] = 5;
        let err = multilevel_otsu(&hist_from_counts(counts), 2).unwrap_err();
        assert!(matches!(err, Error::Infeasible { nonzero_bins: 2, needed: 3 }));
    }

    #[test]
    fn wcv_non_increasing_in_threshold_count() {
        let counts: Vec<u64> = (0..32).map(|i| 10 + (i * 7) % 23).collect();
        let hist = hist_from_counts(counts);
        let mut prev = f64::INFINITY;
        for n in 1..=6 {
            let ts = multilevel_otsu(&hist, n).unwrap();
            assert!(ts.wcv() <= prev + 1e-12, "n={n}");
            prev = ts.wcv();
        }
    }

    #[test]
    fn apply_level_masks_are_nested_and_match_direct_compare() {
        let data = vec![0.0, 0.1, 0.3, 0.35, 0.6, 0.62, 0.9, 0.95, 0.2, 0.7];
        let img = IntensityImage::from_values(10, 1, data.clone()).unwrap();
        let hist = Histogram::from_image(&img, 16, crate::image::HistogramDomain::AllPixels)
            .unwrap();
        let ts = multilevel_otsu(&hist, 3).unwrap();
        let mut prev: Option<BinaryMask> = None;
        for level in 1..=3 {
            let mask = apply_threshold_level(&img, &ts, level).unwrap();
            let t = ts.thresholds()[level - 1];
            for (i, &v) in data.iter().enumerate() {
                assert_eq!(mask.bits()[i], v >= t);
            }
            if let Some(p) = prev {
                assert!(mask.is_subset_of(&p));
            }
            prev = Some(mask);
        }
    }

    #[test]
    fn apply_level_out_of_range() {
        let img = IntensityImage::from_values(4, 1, vec![0.0, 0.2, 0.8, 1.0]).unwrap();
        let hist =
            Histogram::from_image(&img, 8, crate::image::HistogramDomain::AllPixels).unwrap();
        let ts = multilevel_otsu(&hist, 1).unwrap();
        assert!(apply_threshold_level(&img, &ts, 0).is_err());
        assert!(apply_threshold_level(&img, &ts, 2).is_err());
    }

    #[test]
    fn all_zero_image_gives_empty_mask() {
        let img = IntensityImage::from_values(3, 1, vec![0.0, 0.0, 0.0]).unwrap();
        let ts = ThresholdSet {
            thresholds: vec![0.5],
            boundary_bins: vec![128],
            wcv: 0.0,
        };
        let mask = apply_threshold_level(&img, &ts, 1).unwrap();
        assert_eq!(mask.count(), 0);
    }

    #[test]
    fn level_one_below_min_gives_full_mask() {
        let img = IntensityImage::from_values(3, 1, vec![0.5, 0.7, 1.0]).unwrap();
        let ts = ThresholdSet {
            thresholds: vec![0.25],
            boundary_bins: vec![64],
            wcv: 0.0,
        };
        let mask = apply_threshold_level(&img, &ts, 1).unwrap();
        assert_eq!(mask.count(), 3);
    }
}
