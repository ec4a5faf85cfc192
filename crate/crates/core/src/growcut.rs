//! Growcut cellular automaton.
//!
//! Labeled cells attack their 8-neighbors each generation: attacker `p` takes
//! cell `q` when `g(|I_p - I_q|) * theta_p > theta_q`, with the attenuation
//! `g(d) = 1 - d / max(I)` over the global image maximum. Updates are
//! synchronous and double-buffered with a fixed attacker scan order, so runs
//! are deterministic. Seeds come from eroding a candidate mask
//! ([`make_seeds`]); strength thresholding of the final state extracts the
//! lesion.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::image::{BinaryMask, IntensityImage};
use crate::morphology::{erode, seed_size, BallElement};
use crate::Result;

/// Per-cell label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellLabel {
    None,
    Foreground,
    Background,
}

/// Initial label field: foreground and background seeds, everything else
/// neutral territory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedLabels {
    width: usize,
    height: usize,
    labels: Vec<CellLabel>,
}

impl SeedLabels {
    /// Build a seed field from explicit per-cell labels.
    ///
    /// Both seed classes must be non-empty for a valid run.
    pub fn from_labels(width: usize, height: usize, labels: Vec<CellLabel>) -> Result<Self> {
        if width == 0 || height == 0 || labels.len() != width * height {
            return Err(Error::InvalidParameter("seed label dimensions"));
        }
        let fg = labels.iter().any(|&l| l == CellLabel::Foreground);
        let bg = labels.iter().any(|&l| l == CellLabel::Background);
        if !fg || !bg {
            return Err(Error::EmptySeeds);
        }
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn labels(&self) -> &[CellLabel] {
        &self.labels
    }

    pub fn get(&self, x: usize, y: usize) -> CellLabel {
        self.labels[y * self.width + x]
    }
}

/// Seed construction from a candidate lesion mask.
///
/// Foreground seeds are the candidate (restricted to the brain) eroded by a
/// ball whose size follows the lesion fraction, background seeds are the
/// zero-intensity pixels, and the rest is neutral. Erosion that annihilates
/// the candidate yields [`Error::EmptySeeds`].
pub fn make_seeds(candidate: &BinaryMask, img: &IntensityImage) -> Result<SeedLabels> {
    let brain = img.brain_mask();
    if !candidate.same_dims(&brain) {
        return Err(Error::DimensionMismatch {
            expected: (brain.width(), brain.height()),
            got: (candidate.width(), candidate.height()),
        });
    }
    let within = candidate.and(&brain)?;
    let elem = BallElement::new(seed_size(candidate, &brain)?)?;
    let foreground = erode(&within, &elem);

    let mut labels = vec![CellLabel::None; img.len()];
    let mut fg_count = 0usize;
    let mut bg_count = 0usize;
    for (i, label) in labels.iter_mut().enumerate() {
        if foreground.bits()[i] {
            *label = CellLabel::Foreground;
            fg_count += 1;
        } else if !brain.bits()[i] {
            *label = CellLabel::Background;
            bg_count += 1;
        }
    }
    if fg_count == 0 || bg_count == 0 {
        return Err(Error::EmptySeeds);
    }
    Ok(SeedLabels {
        width: img.width(),
        height: img.height(),
        labels,
    })
}

/// Final automaton state: labels, strengths, and how it got there.
#[derive(Debug, Clone, PartialEq)]
pub struct AutomatonState {
    width: usize,
    height: usize,
    labels: Vec<CellLabel>,
    strength: Vec<f64>,
    iterations: usize,
    converged: bool,
}

impl AutomatonState {
    pub fn labels(&self) -> &[CellLabel] {
        &self.labels
    }

    /// Per-cell strength in `[0, 1]`.
    pub fn strength(&self) -> &[f64] {
        &self.strength
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// False when the iteration cap was hit before a fixed point.
    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn label_at(&self, x: usize, y: usize) -> CellLabel {
        self.labels[y * self.width + x]
    }

    pub fn strength_at(&self, x: usize, y: usize) -> f64 {
        self.strength[y * self.width + x]
    }
}

/// Attacker scan order: N, NE, E, SE, S, SW, W, NW.
const NEIGHBORS: [(i64, i64); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

/// Run the automaton to a fixed point (or `max_iter`).
///
/// Seed cells keep their label and full strength throughout; every other
/// cell's strength is non-decreasing, so the process terminates. The
/// strongest successful attacker wins each generation, ties resolving by
/// scan order.
pub fn growcut_run(
    img: &IntensityImage,
    seeds: &SeedLabels,
    max_iter: usize,
) -> Result<AutomatonState> {
    if seeds.width() != img.width() || seeds.height() != img.height() {
        return Err(Error::DimensionMismatch {
            expected: (img.width(), img.height()),
            got: (seeds.width(), seeds.height()),
        });
    }
    let (w, h) = (img.width(), img.height());
    let max_i = img.max_value();
    if max_i <= 0.0 {
        return Err(Error::DegenerateImage);
    }
    let inv_max = 1.0 / max_i;

    let mut labels: Vec<CellLabel> = seeds.labels().to_vec();
    let mut strength: Vec<f64> = seeds
        .labels()
        .iter()
        .map(|&l| if l == CellLabel::None { 0.0 } else { 1.0 })
        .collect();
    let is_seed: Vec<bool> = seeds.labels().iter().map(|&l| l != CellLabel::None).collect();

    let mut next_labels = labels.clone();
    let mut next_strength = strength.clone();
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        iterations += 1;
        let mut changed = false;

        for y in 0..h {
            for x in 0..w {
                let q = y * w + x;
                if is_seed[q] {
                    continue;
                }
                let iq = img.data()[q];
                let mut best_strength = strength[q];
                let mut best_label = labels[q];
                for &(dx, dy) in &NEIGHBORS {
                    let nx = x as i64 + dx;
                    let ny = y as i64 + dy;
                    if nx < 0 || ny < 0 || nx >= w as i64 || ny >= h as i64 {
                        continue;
                    }
                    let p = ny as usize * w + nx as usize;
                    if labels[p] == CellLabel::None {
                        continue;
                    }
                    let g = 1.0 - libm::fabs(img.data()[p] - iq) * inv_max;
                    let attack = g * strength[p];
                    if attack > best_strength {
                        best_strength = attack;
                        best_label = labels[p];
                    }
                }
                if best_strength > strength[q] || best_label != labels[q] {
                    changed = true;
                }
                next_strength[q] = best_strength;
                next_labels[q] = best_label;
            }
        }

        core::mem::swap(&mut labels, &mut next_labels);
        core::mem::swap(&mut strength, &mut next_strength);

        if !changed {
            converged = true;
            break;
        }
    }

    Ok(AutomatonState {
        width: w,
        height: h,
        labels,
        strength,
        iterations,
        converged,
    })
}

/// Pixels labeled foreground with strength at least `theta_min`.
pub fn strength_mask(state: &AutomatonState, theta_min: f64) -> BinaryMask {
    let mut mask = BinaryMask::new(state.width, state.height);
    for y in 0..state.height {
        for x in 0..state.width {
            let i = y * state.width + x;
            if state.labels[i] == CellLabel::Foreground && state.strength[i] >= theta_min {
                mask.set(x, y, true);
            }
        }
    }
    mask
}

/// The strength-threshold sweep values 0.9990, 0.9991, ..., 0.9999.
pub fn strength_sweep_thresholds() -> Vec<f64> {
    (0..10).map(|k| (9990 + k) as f64 / 10000.0).collect()
}
