//! Histogram-peak clustering: every bin climbs to its nearest peak, the peak
//! basins partition the brain pixels, and the smallest basin is taken as the
//! lesion.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::image::{BinaryMask, Histogram, HistogramDomain, IntensityImage};
use crate::Result;

/// Result of climbing a histogram: peaks and the basin each bin drains into.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakClustering {
    peak_bins: Vec<usize>,
    assignment: Vec<usize>,
    cluster_sizes: Vec<u64>,
}

impl PeakClustering {
    /// Local-maximum bins, ascending.
    pub fn peak_bins(&self) -> &[usize] {
        &self.peak_bins
    }

    /// For each bin, the index into `peak_bins` of the peak it climbs to.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Pixels per basin, aligned with `peak_bins`.
    pub fn cluster_sizes(&self) -> &[u64] {
        &self.cluster_sizes
    }

    pub fn peak_count(&self) -> usize {
        self.peak_bins.len()
    }
}

/// From each bin, repeatedly step to the strictly greater neighbor (the
/// larger of the two; rightward when both are equal and greater) until a
/// local maximum. Plateaus resolve rightward, so a flat run belongs to its
/// rightmost bin.
pub fn climb(hist: &Histogram) -> PeakClustering {
    let counts = hist.counts();
    let bins = counts.len();

    // next[i]: one climbing step from bin i, or i itself at a peak.
    let mut next = vec![0usize; bins];
    for i in 0..bins {
        let c = counts[i];
        let left = if i > 0 { Some(counts[i - 1]) } else { None };
        let right = if i + 1 < bins { Some(counts[i + 1]) } else { None };
        let l_up = left.map(|l| l > c).unwrap_or(false);
        let r_up = right.map(|r| r > c).unwrap_or(false);
        next[i] = if l_up && r_up {
            if left.unwrap() > right.unwrap() {
                i - 1
            } else {
                i + 1
            }
        } else if l_up {
            i - 1
        } else if r_up {
            i + 1
        } else if right == Some(c) {
            // Plateau: walk right toward its rightmost bin.
            i + 1
        } else {
            i
        };
    }

    // Resolve each bin to its peak with path memoization.
    let mut peak_of = vec![usize::MAX; bins];
    let mut trail = Vec::new();
    for start in 0..bins {
        if peak_of[start] != usize::MAX {
            continue;
        }
        let mut i = start;
        trail.clear();
        while peak_of[i] == usize::MAX && next[i] != i {
            trail.push(i);
            i = next[i];
        }
        let peak = if next[i] == i { i } else { peak_of[i] };
        peak_of[start] = peak;
        for &j in &trail {
            peak_of[j] = peak;
        }
    }

    let mut peak_bins: Vec<usize> = peak_of.clone();
    peak_bins.sort_unstable();
    peak_bins.dedup();

    let assignment: Vec<usize> = peak_of
        .iter()
        .map(|p| peak_bins.binary_search(p).unwrap())
        .collect();

    let mut cluster_sizes = vec![0u64; peak_bins.len()];
    for (bin, &peak_idx) in assignment.iter().enumerate() {
        cluster_sizes[peak_idx] += counts[bin];
    }

    PeakClustering {
        peak_bins,
        assignment,
        cluster_sizes,
    }
}

/// Segment the brain by histogram-peak basins and return the smallest basin,
/// which is where small hyperintense lesions land.
///
/// Ties on basin population go to the basin with the higher mean intensity.
/// Fails with [`Error::SingleCluster`] when the histogram has only one peak
/// (the mask would cover the whole brain).
pub fn hillclimb_mask(img: &IntensityImage, bin_count: usize) -> Result<BinaryMask> {
    let hist = Histogram::from_image(img, bin_count, HistogramDomain::BrainOnly)?;
    let clustering = climb(&hist);
    if clustering.peak_count() < 2 {
        return Err(Error::SingleCluster);
    }

    // Mean brain intensity per basin for the tie-break.
    let mut sum = vec![0.0f64; clustering.peak_count()];
    let mut n = vec![0u64; clustering.peak_count()];
    for &v in img.data() {
        if v == 0.0 {
            continue;
        }
        let basin = clustering.assignment()[Histogram::bin_index(v, bin_count)];
        sum[basin] += v;
        n[basin] += 1;
    }

    let mut best: Option<usize> = None;
    for k in 0..clustering.peak_count() {
        let size = clustering.cluster_sizes()[k];
        let better = match best {
            None => true,
            Some(b) => {
                let best_size = clustering.cluster_sizes()[b];
                if size != best_size {
                    size < best_size
                } else {
                    let mean_k = if n[k] > 0 { sum[k] / n[k] as f64 } else { 0.0 };
                    let mean_b = if n[b] > 0 { sum[b] / n[b] as f64 } else { 0.0 };
                    mean_k > mean_b
                }
            }
        };
        if better {
            best = Some(k);
        }
    }
    let lesion_basin = best.expect("at least two peaks");

    let mut mask = BinaryMask::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            let v = img.get(x, y);
            if v > 0.0
                && clustering.assignment()[Histogram::bin_index(v, bin_count)] == lesion_basin
            {
                mask.set(x, y, true);
            }
        }
    }
    Ok(mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(counts: Vec<u64>) -> Histogram {
        Histogram::from_raw_counts(counts).unwrap()
    }

    #[test]
    fn monotone_increasing_single_peak_at_end() {
        let c = climb(&hist(vec![1, 2, 3, 4, 5]));
        assert_eq!(c.peak_bins(), &[4]);
        assert!(c.assignment().iter().all(|&p| p == 0));
    }

    #[test]
    fn three_bin_basin_split() {
        // counts [5, 1, 7]: bin 1 climbs to the larger neighbor 7.
        let c = climb(&hist(vec![5, 1, 7]));
        assert_eq!(c.peak_bins(), &[0, 2]);
        assert_eq!(c.assignment(), &[0, 1, 1]);
        assert_eq!(c.cluster_sizes(), &[5, 8]);
    }

    #[test]
    fn flat_histogram_single_rightmost_peak() {
        let c = climb(&hist(vec![3, 3, 3, 3]));
        assert_eq!(c.peak_bins(), &[3]);
        assert_eq!(c.cluster_sizes(), &[12]);
    }

    #[test]
    fn equal_greater_neighbors_step_right() {
        // counts [4, 1, 4]: both neighbors of bin 1 are greater and equal.
        let c = climb(&hist(vec![4, 1, 4]));
        assert_eq!(c.assignment()[1], 1, "middle bin must climb right");
    }

    #[test]
    fn basin_totals_cover_all_pixels() {
        let counts = vec![9, 2, 0, 7, 3, 3, 8, 1];
        let total: u64 = counts.iter().sum();
        let c = climb(&hist(counts));
        assert_eq!(c.cluster_sizes().iter().sum::<u64>(), total);
    }

    #[test]
    fn climbing_is_idempotent_within_basins() {
        let counts = vec![1, 5, 2, 2, 9, 4, 4, 4, 6, 1];
        let h = hist(counts);
        let c = climb(&h);
        for (bin, &basin) in c.assignment().iter().enumerate() {
            let peak = c.peak_bins()[basin];
            assert_eq!(c.assignment()[peak], basin, "bin {bin}");
        }
    }

    fn two_level_image(low_n: usize, high_n: usize) -> IntensityImage {
        let mut data = vec![0.3; low_n];
        data.extend(core::iter::repeat(0.9).take(high_n));
        IntensityImage::from_values(low_n + high_n, 1, data).unwrap()
    }

    #[test]
    fn small_bright_cluster_selected() {
        let img = two_level_image(90, 10);
        let mask = hillclimb_mask(&img, 16).unwrap();
        assert_eq!(mask.count(), 10);
        for x in 90..100 {
            assert!(mask.get(x, 0));
        }
    }

    #[test]
    fn one_peak_errors() {
        let img = two_level_image(50, 0);
        assert_eq!(hillclimb_mask(&img, 8).unwrap_err(), Error::SingleCluster);
    }

    #[test]
    fn equal_size_basins_pick_brighter() {
        let img = two_level_image(20, 20);
        let mask = hillclimb_mask(&img, 16).unwrap();
        assert_eq!(mask.count(), 20);
        assert!(mask.get(39, 0) && !mask.get(0, 0));
    }

    #[test]
    fn mask_is_subset_of_brain() {
        let mut data = vec![0.0; 30];
        for (i, v) in data.iter_mut().enumerate().skip(5) {
            *v = 0.2 + 0.025 * ((i * 13) % 20) as f64;
        }
        let img = IntensityImage::from_values(30, 1, data).unwrap();
        if let Ok(mask) = hillclimb_mask(&img, 8) {
            assert!(mask.is_subset_of(&img.brain_mask()));
        }
    }
}
