//! Synthetic DWI/FLAIR slice pairs with known lesion truth.
//!
//! The clinical dataset behind the study is private, so end-to-end runs use
//! phantoms: an elliptical "brain" on a zero background, a hyperintense
//! lesion disk, optional tissue texture, and a matching FLAIR rendering at
//! three times the resolution that can be pre-warped by a known affine to
//! exercise registration. Everything is deterministic for a given seed.

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Error;
use crate::image::{BinaryMask, IntensityImage};
use crate::registration::AffineTransform2D;
use crate::Result;

/// FLAIR renders at this multiple of the DWI grid.
pub const FLAIR_SCALE: usize = 3;

/// Smallest nonzero tissue intensity after noise clamping: half of one
/// 12-bit quantization step above zero keeps brain pixels nonzero through
/// file round-trips.
const MIN_TISSUE: f64 = 1.0 / 4095.0;

/// Brain ellipse semi-axes as fractions of the image dimensions.
const BRAIN_RX: f64 = 0.40;
const BRAIN_RY: f64 = 0.42;

/// A bright annular band inside the brain with an intensity ramp.
///
/// Real DWI brains are not flat: tissue classes spread intensity well above
/// the dominant mode. The band reproduces that spread so threshold- and
/// cluster-count presets tuned for clinical data behave sensibly on
/// phantoms. The ramp is quadratic toward its high end, which makes the
/// histogram counts rise monotonically toward the top of the band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextureBand {
    /// Inner edge, as a fraction of the elliptical brain radius.
    pub inner: f64,
    /// Outer edge, likewise; must exceed `inner` and stay below 1.
    pub outer: f64,
    /// Intensity at the outer edge.
    pub low: f64,
    /// Intensity at the inner edge.
    pub high: f64,
}

impl TextureBand {
    /// Band used by the shipped phantom datasets.
    pub fn standard() -> Self {
        Self {
            inner: 0.70,
            outer: 0.73,
            low: 0.46,
            high: 0.78,
        }
    }
}

/// Full phantom description.
#[derive(Debug, Clone)]
pub struct PhantomSpec {
    pub width: usize,
    pub height: usize,
    /// Lesion disk center in DWI pixel coordinates.
    pub lesion_center: (f64, f64),
    pub lesion_radius: f64,
    /// DWI lesion intensity; must exceed `brain_level`.
    pub lesion_level: f64,
    /// DWI brain-tissue base intensity.
    pub brain_level: f64,
    /// FLAIR counterparts of the two levels.
    pub flair_brain_level: f64,
    pub flair_lesion_level: f64,
    pub noise_sigma: f64,
    pub rng_seed: u64,
    /// Optional tissue texture, rendered in both modalities.
    pub texture: Option<TextureBand>,
    /// Optional pre-warp applied to the FLAIR rendering (in FLAIR pixel
    /// coordinates), simulating cross-modality misalignment.
    pub flair_warp: Option<AffineTransform2D>,
}

impl PhantomSpec {
    /// Plain phantom: flat brain, no texture, no FLAIR warp, FLAIR levels
    /// equal to the DWI levels.
    pub fn minimal(
        width: usize,
        height: usize,
        lesion_center: (f64, f64),
        lesion_radius: f64,
        lesion_level: f64,
        brain_level: f64,
        noise_sigma: f64,
        rng_seed: u64,
    ) -> Self {
        Self {
            width,
            height,
            lesion_center,
            lesion_radius,
            lesion_level,
            brain_level,
            flair_brain_level: brain_level,
            flair_lesion_level: lesion_level,
            noise_sigma,
            rng_seed,
            texture: None,
            flair_warp: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.width < 16 || self.height < 16 {
            return Err(Error::BadGeometry("image too small"));
        }
        if !(self.lesion_level > self.brain_level) {
            return Err(Error::BadGeometry("lesion level must exceed brain level"));
        }
        for level in [
            self.brain_level,
            self.lesion_level,
            self.flair_brain_level,
            self.flair_lesion_level,
        ] {
            if !(level > 0.0 && level <= 1.0) {
                return Err(Error::BadGeometry("levels must lie in (0, 1]"));
            }
        }
        if !(self.lesion_radius > 0.0) {
            return Err(Error::BadGeometry("lesion radius must be positive"));
        }
        if self.noise_sigma < 0.0 {
            return Err(Error::BadGeometry("negative noise sigma"));
        }
        if let Some(band) = &self.texture {
            if !(0.0 < band.inner && band.inner < band.outer && band.outer < 1.0) {
                return Err(Error::BadGeometry("texture band radii"));
            }
            if !(0.0 < band.low && band.low < band.high && band.high <= 1.0) {
                return Err(Error::BadGeometry("texture band levels"));
            }
        }
        // The lesion disk must fit inside the brain ellipse: conservative
        // check via the smaller semi-axis.
        let (cx, cy) = self.brain_center();
        let (ax, ay) = self.brain_axes();
        let dx = (self.lesion_center.0 - cx) / ax;
        let dy = (self.lesion_center.1 - cy) / ay;
        let rho = libm::sqrt(dx * dx + dy * dy);
        if rho + self.lesion_radius / ax.min(ay) > 1.0 {
            return Err(Error::BadGeometry("lesion disk outside brain ellipse"));
        }
        Ok(())
    }

    fn brain_center(&self) -> (f64, f64) {
        (
            (self.width as f64 - 1.0) / 2.0,
            (self.height as f64 - 1.0) / 2.0,
        )
    }

    fn brain_axes(&self) -> (f64, f64) {
        (BRAIN_RX * self.width as f64, BRAIN_RY * self.height as f64)
    }

    /// Noise-free tissue intensity at continuous DWI coordinates.
    fn tissue_level(&self, x: f64, y: f64, flair: bool) -> f64 {
        let (cx, cy) = self.brain_center();
        let (ax, ay) = self.brain_axes();
        let dx = (x - cx) / ax;
        let dy = (y - cy) / ay;
        let rho = libm::sqrt(dx * dx + dy * dy);
        if rho > 1.0 {
            return 0.0;
        }
        let lx = x - self.lesion_center.0;
        let ly = y - self.lesion_center.1;
        if lx * lx + ly * ly <= self.lesion_radius * self.lesion_radius {
            return if flair {
                self.flair_lesion_level
            } else {
                self.lesion_level
            };
        }
        if let Some(band) = &self.texture {
            if rho >= band.inner && rho <= band.outer {
                let u = (rho - band.inner) / (band.outer - band.inner);
                return band.high - (band.high - band.low) * u * u;
            }
        }
        if flair {
            self.flair_brain_level
        } else {
            self.brain_level
        }
    }
}

/// Generated phantom: DWI slice, FLAIR slice at 3x resolution, and the exact
/// lesion truth on the DWI grid.
#[derive(Debug, Clone)]
pub struct Phantom {
    pub dwi: IntensityImage,
    pub flair: IntensityImage,
    pub truth: BinaryMask,
}

/// Render a phantom. Bit-identical for identical specs.
pub fn make_phantom(spec: &PhantomSpec) -> Result<Phantom> {
    spec.validate()?;
    let (w, h) = (spec.width, spec.height);

    let dwi = render(spec, w, h, 0, false, None)?;
    let flair = render(
        spec,
        w * FLAIR_SCALE,
        h * FLAIR_SCALE,
        1,
        true,
        spec.flair_warp.as_ref(),
    )?;

    let mut truth = BinaryMask::new(w, h);
    let r2 = spec.lesion_radius * spec.lesion_radius;
    for y in 0..h {
        for x in 0..w {
            let dx = x as f64 - spec.lesion_center.0;
            let dy = y as f64 - spec.lesion_center.1;
            if dx * dx + dy * dy <= r2 {
                truth.set(x, y, true);
            }
        }
    }

    Ok(Phantom { dwi, flair, truth })
}

fn render(
    spec: &PhantomSpec,
    out_w: usize,
    out_h: usize,
    noise_stream: u64,
    flair: bool,
    warp: Option<&AffineTransform2D>,
) -> Result<IntensityImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    rng.set_stream(noise_stream);
    let noise = if spec.noise_sigma > 0.0 {
        Some(Normal::new(0.0, spec.noise_sigma).expect("validated sigma"))
    } else {
        None
    };

    let scale = if flair { FLAIR_SCALE as f64 } else { 1.0 };
    let mut data = Vec::with_capacity(out_w * out_h);
    for y in 0..out_h {
        for x in 0..out_w {
            // Sample position in this modality's pixel grid, optionally
            // pre-warped, then mapped to DWI anatomy coordinates. The FLAIR
            // mapping (p - 1) / 3 makes FLAIR pixel 3k+1 coincide with DWI
            // pixel k, matching the center-sample rule of the 3:1 resize.
            let (mut u, mut v) = (x as f64, y as f64);
            if let Some(t) = warp {
                let (wu, wv) = t.apply(u, v);
                u = wu;
                v = wv;
            }
            let (gx, gy) = if flair {
                ((u - 1.0) / scale, (v - 1.0) / scale)
            } else {
                (u, v)
            };
            let level = spec.tissue_level(gx, gy, flair);
            let value = if level == 0.0 {
                0.0
            } else if let Some(n) = &noise {
                (level + n.sample(&mut rng)).clamp(MIN_TISSUE, 1.0)
            } else {
                level
            };
            data.push(value);
        }
    }
    IntensityImage::from_values(out_w, out_h, data)
}
