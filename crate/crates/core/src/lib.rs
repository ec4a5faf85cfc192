//! Segmentation algorithms for ischemic stroke lesions in diffusion-weighted
//! MR slices, plus the evaluation machinery used to compare them.
//!
//! The crate is `no_std` (with `alloc`): everything here is pure computation
//! over in-memory buffers. File formats, the batch pipeline, and the CLI live
//! in the companion `strokeseg` crate.
//!
//! Segmenters produce a [`BinaryMask`] over a normalized [`IntensityImage`]:
//!
//! * [`otsu`] — multilevel Otsu thresholding (exact, via dynamic programming)
//! * [`fcm`] — fuzzy c-means clustering of brain intensities
//! * [`hillclimb`] — histogram peak climbing with automatic lesion selection
//! * [`growcut`] — cellular-automaton refinement seeded from a candidate mask
//!
//! [`registration`] aligns a higher-resolution FLAIR slice onto the DWI grid
//! so a FLAIR-derived mask can serve as the gold standard, and [`eval`] scores
//! predictions against it (confusion counts, parameter sweeps, leave-one-out
//! cross-validation).

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod fcm;
pub mod growcut;
pub mod hillclimb;
pub mod image;
pub mod morphology;
pub mod otsu;
pub mod phantom;
pub mod registration;

pub use error::Error;
pub use image::{BinaryMask, Histogram, HistogramDomain, IntensityImage, RawImage};
pub use registration::AffineTransform2D;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
