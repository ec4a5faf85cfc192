//! Fuzzy c-means clustering of brain-pixel intensities.
//!
//! Minimizes `J = sum_k sum_i u_ik^q * d^2(x_k, s_i)` by the alternating
//! update: memberships from fixed centroids, then centroids from fixed
//! memberships, until the objective change drops below tolerance. Distances
//! are squared scalar differences on intensities. Image fits run over brain
//! pixels only; background zeros would otherwise consume a cluster.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::image::{BinaryMask, IntensityImage};
use crate::Result;

/// How many jittered re-initializations to attempt after a centroid
/// collision before giving up.
const DEGENERATE_RETRIES: usize = 5;

/// A fitted fuzzy c-means model.
#[derive(Debug, Clone)]
pub struct FcmModel {
    cluster_count: usize,
    exponent: f64,
    centroids: Vec<f64>,
    /// Row-major memberships: `memberships[k * c + i]` is data point `k`'s
    /// degree in cluster `i`, clusters ordered like `centroids`.
    memberships: Vec<f64>,
    /// Flat pixel indices the membership rows describe (for image fits).
    pixel_indices: Vec<usize>,
    iterations_run: usize,
    final_objective: f64,
    converged: bool,
}

impl FcmModel {
    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    /// Centroid intensities, ascending.
    pub fn centroids(&self) -> &[f64] {
        &self.centroids
    }

    pub fn memberships(&self) -> &[f64] {
        &self.memberships
    }

    pub fn pixel_indices(&self) -> &[usize] {
        &self.pixel_indices
    }

    pub fn iterations_run(&self) -> usize {
        self.iterations_run
    }

    /// Objective value of the final (membership, centroid) state.
    pub fn final_objective(&self) -> f64 {
        self.final_objective
    }

    /// False when the iteration cap was reached before `|dJ| < tol`.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Hardened cluster of data row `k`: the argmax-membership cluster, ties
    /// toward the higher (brighter) cluster.
    pub fn hardened_cluster(&self, k: usize) -> usize {
        let c = self.cluster_count;
        let row = &self.memberships[k * c..(k + 1) * c];
        let mut best = 0;
        for i in 1..c {
            if row[i] >= row[best] {
                best = i;
            }
        }
        best
    }
}

/// Options for [`fcm_fit`].
#[derive(Debug, Clone, Copy)]
pub struct FcmOptions {
    /// Weighting exponent `q`; must exceed 1. The study uses 2.
    pub exponent: f64,
    /// Stop when `|J_t - J_{t-1}|` drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Seed for degenerate-restart jitter only; the base initialization is
    /// deterministic.
    pub rng_seed: u64,
}

impl Default for FcmOptions {
    fn default() -> Self {
        Self {
            exponent: 2.0,
            tolerance: 1e-6,
            max_iterations: 300,
            rng_seed: 0,
        }
    }
}

/// Fit `cluster_count` fuzzy clusters to the brain intensities of `img`.
pub fn fcm_fit(img: &IntensityImage, cluster_count: usize, opts: &FcmOptions) -> Result<FcmModel> {
    let mut pixel_indices = Vec::new();
    let mut values = Vec::new();
    for (idx, &v) in img.data().iter().enumerate() {
        if v > 0.0 {
            pixel_indices.push(idx);
            values.push(v);
        }
    }
    let mut model = fcm_fit_values(&values, cluster_count, opts)?;
    model.pixel_indices = pixel_indices;
    Ok(model)
}

/// Fit fuzzy clusters to an explicit data vector.
///
/// Initialization is deterministic: centroids start at evenly spaced
/// quantiles of the sorted data. A centroid collision triggers a jittered
/// restart (bounded, seeded); exhausting retries yields
/// [`Error::DegenerateCluster`].
pub fn fcm_fit_values(values: &[f64], cluster_count: usize, opts: &FcmOptions) -> Result<FcmModel> {
    if cluster_count < 1 {
        return Err(Error::InvalidParameter("cluster count must be >= 1"));
    }
    if !(opts.exponent > 1.0) {
        return Err(Error::InvalidParameter("exponent must be > 1"));
    }
    if !(opts.tolerance > 0.0) || opts.max_iterations == 0 {
        return Err(Error::InvalidParameter("tolerance/max_iterations"));
    }
    if values.is_empty() {
        return Err(Error::EmptyDomain);
    }

    let mut distinct = values.to_vec();
    distinct.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    if distinct.len() < cluster_count {
        return Err(Error::InvalidParameter(
            "more clusters than distinct intensities",
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let mut centroids = quantile_init(values, cluster_count);
    for _attempt in 0..=DEGENERATE_RETRIES {
        match fit_from(values, &centroids, opts) {
            FitOutcome::Done(state) => {
                return Ok(finalize(state, (0..values.len()).collect(), opts.exponent))
            }
            FitOutcome::Degenerate => {
                centroids = quantile_init(values, cluster_count);
                for c in centroids.iter_mut() {
                    *c = (*c + rng.random_range(-0.02..0.02)).clamp(0.0, 1.0);
                }
                centroids.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            }
        }
    }
    Err(Error::DegenerateCluster)
}

/// Evenly spaced quantiles of the data: centroid `i` at quantile
/// `(2i + 1) / (2c)`.
fn quantile_init(values: &[f64], c: usize) -> Vec<f64> {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    (0..c)
        .map(|i| {
            let q = (2 * i + 1) as f64 / (2 * c) as f64;
            let pos = q * (sorted.len() - 1) as f64;
            let lo = pos as usize;
            let hi = (lo + 1).min(sorted.len() - 1);
            let frac = pos - lo as f64;
            sorted[lo] * (1.0 - frac) + sorted[hi] * frac
        })
        .collect()
}

struct FitState {
    centroids: Vec<f64>,
    memberships: Vec<f64>,
    objective: f64,
    iterations: usize,
    converged: bool,
}

enum FitOutcome {
    Done(FitState),
    Degenerate,
}

fn fit_from(values: &[f64], init: &[f64], opts: &FcmOptions) -> FitOutcome {
    let c = init.len();
    let n = values.len();
    let q = opts.exponent;
    // Membership exponent on squared distances: (d2_i / d2_j)^(1/(q-1)).
    let inv_qm1 = 1.0 / (q - 1.0);
    let q2 = q == 2.0;

    let mut centroids = init.to_vec();
    let mut memberships = vec![0.0f64; n * c];
    let mut prev_objective = f64::INFINITY;
    let mut objective = f64::INFINITY;
    let mut converged = false;
    let mut iterations = 0;

    let mut d2 = vec![0.0f64; c];
    let mut num = vec![0.0f64; c];
    let mut den = vec![0.0f64; c];

    for iter in 1..=opts.max_iterations {
        iterations = iter;

        // Centroid step first from the second iteration on, so the loop
        // always ends right after a membership pass and the stored objective
        // matches the stored (u, s) pair.
        if iter > 1 {
            for i in 0..c {
                if den[i] > 0.0 {
                    centroids[i] = num[i] / den[i];
                }
            }
            for i in 0..c {
                for j in (i + 1)..c {
                    if centroids[i] == centroids[j] {
                        return FitOutcome::Degenerate;
                    }
                }
            }
        }

        // Membership update from current centroids, accumulating the
        // objective and centroid sums in the same pass.
        num.iter_mut().for_each(|v| *v = 0.0);
        den.iter_mut().for_each(|v| *v = 0.0);
        objective = 0.0;
        for (k, &x) in values.iter().enumerate() {
            let row = &mut memberships[k * c..(k + 1) * c];
            let mut zero_at = None;
            for i in 0..c {
                let d = x - centroids[i];
                d2[i] = d * d;
                if d2[i] == 0.0 {
                    zero_at = Some(i);
                }
            }
            if let Some(i0) = zero_at {
                // Coincident with a centroid: membership collapses there.
                for (i, r) in row.iter_mut().enumerate() {
                    *r = if i == i0 { 1.0 } else { 0.0 };
                }
            } else {
                // u_i = w_i / sum_j w_j with w_i = d2_i^(-1/(q-1)); for q = 2
                // that is a plain reciprocal.
                let mut total = 0.0;
                for i in 0..c {
                    let w = if q2 {
                        1.0 / d2[i]
                    } else {
                        libm::pow(d2[i], -inv_qm1)
                    };
                    row[i] = w;
                    total += w;
                }
                let inv = 1.0 / total;
                for r in row.iter_mut() {
                    *r *= inv;
                }
            }
            for i in 0..c {
                let uq = if q2 {
                    row[i] * row[i]
                } else {
                    libm::pow(row[i], q)
                };
                objective += uq * d2[i];
                num[i] += uq * x;
                den[i] += uq;
            }
        }

        if (prev_objective - objective).abs() < opts.tolerance {
            converged = true;
            break;
        }
        prev_objective = objective;
    }

    FitOutcome::Done(FitState {
        centroids,
        memberships,
        objective,
        iterations,
        converged,
    })
}

/// Sort centroids ascending and permute membership columns to match.
fn finalize(state: FitState, pixel_indices: Vec<usize>, exponent: f64) -> FcmModel {
    let c = state.centroids.len();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_unstable_by(|&a, &b| state.centroids[a].partial_cmp(&state.centroids[b]).unwrap());

    let centroids: Vec<f64> = order.iter().map(|&i| state.centroids[i]).collect();
    let n = state.memberships.len() / c;
    let mut memberships = vec![0.0f64; n * c];
    for k in 0..n {
        for (new_i, &old_i) in order.iter().enumerate() {
            memberships[k * c + new_i] = state.memberships[k * c + old_i];
        }
    }

    FcmModel {
        cluster_count: c,
        exponent,
        centroids,
        memberships,
        pixel_indices,
        iterations_run: state.iterations,
        final_objective: state.objective,
        converged: state.converged,
    }
}

/// How `fcm_mask` turns a selected rank into a mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FcmMaskMode {
    /// Union of all clusters with rank >= selected (the hyperintense tail).
    #[default]
    RankAtLeast,
    /// Exactly the selected cluster.
    Exact,
}

/// Mask of pixels whose hardened cluster has ascending rank at least
/// `selected` (1-based). With [`FcmMaskMode::Exact`], only rank == selected.
pub fn fcm_mask(
    model: &FcmModel,
    img: &IntensityImage,
    selected: usize,
    mode: FcmMaskMode,
) -> Result<BinaryMask> {
    if selected == 0 || selected > model.cluster_count() {
        return Err(Error::InvalidParameter("selected cluster out of range"));
    }
    let mut mask = BinaryMask::new(img.width(), img.height());
    let want = selected - 1;
    for (k, &pix) in model.pixel_indices().iter().enumerate() {
        let cluster = model.hardened_cluster(k);
        let keep = match mode {
            FcmMaskMode::RankAtLeast => cluster >= want,
            FcmMaskMode::Exact => cluster == want,
        };
        if keep {
            let (x, y) = (pix % img.width(), pix / img.width());
            mask.set(x, y, true);
        }
    }
    Ok(mask)
}
