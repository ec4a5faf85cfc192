//! Error type shared by all algorithm modules.

use core::fmt;

/// Failure modes of the segmentation and evaluation routines.
///
/// Iteration limits are deliberately not errors: operations that can stop
/// early (`fcm_fit`, `growcut_run`, `register`) return their best state with a
/// `converged` flag instead.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Normalization is undefined because every pixel has the same value.
    ConstantImage,
    /// A histogram or clustering domain contains no pixels.
    EmptyDomain,
    /// Histogram has fewer nonzero bins than the requested class count needs.
    Infeasible { nonzero_bins: usize, needed: usize },
    /// A parameter is outside its documented range.
    InvalidParameter(&'static str),
    /// Two centroids collided exactly and jittered restarts did not separate them.
    DegenerateCluster,
    /// The histogram has a single peak, so peak selection cannot isolate a lesion.
    SingleCluster,
    /// The brain mask is empty, so the lesion fraction is undefined.
    EmptyBrain,
    /// Seed construction produced an empty label class.
    EmptySeeds,
    /// The transform's linear part is singular.
    SingularTransform,
    /// Registration requires non-constant images.
    DegenerateImage,
    /// Masks or images that must share dimensions do not.
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    /// The comparison region of interest contains no pixels.
    EmptyRoi,
    /// Phantom geometry violates its preconditions.
    BadGeometry(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ConstantImage => write!(f, "constant image: normalization undefined"),
            Error::EmptyDomain => write!(f, "domain contains no pixels"),
            Error::Infeasible {
                nonzero_bins,
                needed,
            } => write!(
                f,
                "infeasible threshold count: {nonzero_bins} nonzero bins, need {needed}"
            ),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::DegenerateCluster => write!(f, "degenerate cluster: coincident centroids"),
            Error::SingleCluster => write!(f, "single histogram peak: no lesion candidate"),
            Error::EmptyBrain => write!(f, "empty brain mask"),
            Error::EmptySeeds => write!(f, "seed construction left a label class empty"),
            Error::SingularTransform => write!(f, "singular transform"),
            Error::DegenerateImage => write!(f, "constant image cannot be registered"),
            Error::DimensionMismatch { expected, got } => write!(
                f,
                "dimension mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::EmptyRoi => write!(f, "region of interest contains no pixels"),
            Error::BadGeometry(what) => write!(f, "bad phantom geometry: {what}"),
        }
    }
}

impl core::error::Error for Error {}
