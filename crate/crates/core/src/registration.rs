//! Intensity-based 2-D registration for gold-standard transfer.
//!
//! Finds the transform (translation, rigid, similarity, or affine) that
//! maximizes mutual information between a fixed image and a warped moving
//! image. Mutual information handles the DWI-to-FLAIR modality gap where
//! squared-error metrics fail. The search is a three-level coarse-to-fine
//! pyramid; at each level a finite-difference gradient ascent with step
//! halving climbs the metric. Everything is deterministic given the inputs.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::image::{BinaryMask, IntensityImage};
use crate::Result;

/// Joint-histogram bins per axis for the mutual-information metric.
const MI_BINS: usize = 32;

/// Minimum fraction of fixed pixels that must land inside the moving image
/// for a metric value to count.
const MIN_OVERLAP: f64 = 0.25;

/// Reject candidate steps whose linear part folds or nearly collapses.
const MIN_DET: f64 = 0.05;

/// Transform family searched by [`register`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformFamily {
    Translation,
    Rigid,
    Similarity,
    Affine,
}

/// 2x3 affine matrix `[a b tx; c d ty]` mapping fixed-image coordinates into
/// moving-image coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTransform2D {
    a: f64,
    b: f64,
    tx: f64,
    c: f64,
    d: f64,
    ty: f64,
}

impl AffineTransform2D {
    pub fn identity() -> Self {
        Self::from_rows([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])
    }

    pub fn from_rows(row0: [f64; 3], row1: [f64; 3]) -> Self {
        Self {
            a: row0[0],
            b: row0[1],
            tx: row0[2],
            c: row1[0],
            d: row1[1],
            ty: row1[2],
        }
    }

    pub fn translation(tx: f64, ty: f64) -> Self {
        Self::from_rows([1.0, 0.0, tx], [0.0, 1.0, ty])
    }

    /// Scaled rotation about `center`, then translation.
    pub fn similarity(scale: f64, angle: f64, tx: f64, ty: f64, center: (f64, f64)) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        let (m00, m01) = (scale * c, -scale * s);
        let (m10, m11) = (scale * s, scale * c);
        // p' = M (p - center) + center + t
        let ox = center.0 + tx - (m00 * center.0 + m01 * center.1);
        let oy = center.1 + ty - (m10 * center.0 + m11 * center.1);
        Self::from_rows([m00, m01, ox], [m10, m11, oy])
    }

    pub fn rigid(angle: f64, tx: f64, ty: f64, center: (f64, f64)) -> Self {
        Self::similarity(1.0, angle, tx, ty, center)
    }

    /// Row-major `[a, b, tx, c, d, ty]`.
    pub fn coefficients(&self) -> [f64; 6] {
        [self.a, self.b, self.tx, self.c, self.d, self.ty]
    }

    pub fn linear(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn translation_part(&self) -> (f64, f64) {
        (self.tx, self.ty)
    }

    #[inline]
    pub fn apply(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.a * x + self.b * y + self.tx,
            self.c * x + self.d * y + self.ty,
        )
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if libm::fabs(det) < 1e-12 {
            return Err(Error::SingularTransform);
        }
        let inv = 1.0 / det;
        let (a, b, c, d) = (self.d * inv, -self.b * inv, -self.c * inv, self.a * inv);
        Ok(Self {
            a,
            b,
            c,
            d,
            tx: -(a * self.tx + b * self.ty),
            ty: -(c * self.tx + d * self.ty),
        })
    }

    /// `self` then `other`: `(other * self)(p) = other(self(p))`.
    pub fn then(&self, other: &Self) -> Self {
        Self {
            a: other.a * self.a + other.b * self.c,
            b: other.a * self.b + other.b * self.d,
            tx: other.a * self.tx + other.b * self.ty + other.tx,
            c: other.c * self.a + other.d * self.c,
            d: other.c * self.b + other.d * self.d,
            ty: other.c * self.tx + other.d * self.ty + other.ty,
        }
    }

    /// Rotation angle of the linear part, radians.
    pub fn rotation_angle(&self) -> f64 {
        libm::atan2(self.c, self.a)
    }

    /// Isotropic scale estimate: sqrt of the determinant.
    pub fn scale(&self) -> f64 {
        libm::sqrt(libm::fabs(self.det()))
    }
}

/// Bilinear sample of `img` at continuous coordinates; `None` out of bounds.
pub fn sample_bilinear(img: &IntensityImage, u: f64, v: f64) -> Option<f64> {
    let (w, h) = (img.width(), img.height());
    if !(0.0..=(w - 1) as f64).contains(&u) || !(0.0..=(h - 1) as f64).contains(&v) {
        return None;
    }
    let x0 = libm::floor(u) as usize;
    let y0 = libm::floor(v) as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let fx = u - x0 as f64;
    let fy = v - y0 as f64;
    let d = img.data();
    let top = d[y0 * w + x0] * (1.0 - fx) + d[y0 * w + x1] * fx;
    let bot = d[y1 * w + x0] * (1.0 - fx) + d[y1 * w + x1] * fx;
    Some(top * (1.0 - fy) + bot * fy)
}

/// Pull-back warp of an intensity image: `out(p) = img(t(p))` with bilinear
/// sampling, zero out of bounds.
pub fn warp_image(
    img: &IntensityImage,
    t: &AffineTransform2D,
    out_dims: (usize, usize),
) -> Result<IntensityImage> {
    let (w, h) = out_dims;
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (u, v) = t.apply(x as f64, y as f64);
            data.push(sample_bilinear(img, u, v).unwrap_or(0.0));
        }
    }
    IntensityImage::from_values(w, h, data)
}

/// Pull-back warp of a mask with nearest-neighbor sampling: `out(p) =
/// mask(round(t(p)))`, false out of bounds.
pub fn warp_mask(
    mask: &BinaryMask,
    t: &AffineTransform2D,
    out_dims: (usize, usize),
) -> Result<BinaryMask> {
    if libm::fabs(t.det()) < 1e-12 {
        return Err(Error::SingularTransform);
    }
    let (w, h) = out_dims;
    let mut out = BinaryMask::new(w, h);
    for y in 0..h {
        for x in 0..w {
            let (u, v) = t.apply(x as f64, y as f64);
            let su = libm::round(u);
            let sv = libm::round(v);
            if su >= 0.0
                && sv >= 0.0
                && (su as usize) < mask.width()
                && (sv as usize) < mask.height()
                && mask.get(su as usize, sv as usize)
            {
                out.set(x, y, true);
            }
        }
    }
    Ok(out)
}

/// Outcome of [`register`].
#[derive(Debug, Clone)]
pub struct RegistrationResult {
    pub transform: AffineTransform2D,
    /// Mutual information achieved by the returned transform (full
    /// resolution).
    pub mi: f64,
    /// Mutual information of the identity transform, for judging whether
    /// registration actually helped.
    pub mi_identity: f64,
    /// False when the finest level stopped on its iteration cap rather than
    /// step exhaustion.
    pub converged: bool,
}

/// Mutual information of the joint intensity histogram between `fixed` and
/// the warped `moving`, natural log, hard 32x32 binning. Returns `None` when
/// the overlap is too small to trust.
pub fn mutual_information(
    fixed: &IntensityImage,
    moving: &IntensityImage,
    t: &AffineTransform2D,
) -> Option<f64> {
    let mut joint = [[0u32; MI_BINS]; MI_BINS];
    let mut total = 0u32;
    for y in 0..fixed.height() {
        for x in 0..fixed.width() {
            let (u, v) = t.apply(x as f64, y as f64);
            if let Some(m) = sample_bilinear(moving, u, v) {
                let bf = bin32(fixed.get(x, y));
                let bm = bin32(m);
                joint[bf][bm] += 1;
                total += 1;
            }
        }
    }
    if (total as f64) < MIN_OVERLAP * fixed.len() as f64 {
        return None;
    }
    let n = total as f64;
    let mut pf = [0.0f64; MI_BINS];
    let mut pm = [0.0f64; MI_BINS];
    let mut h_joint = 0.0;
    for (i, row) in joint.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let p = c as f64 / n;
                pf[i] += p;
                pm[j] += p;
                h_joint -= p * libm::log(p);
            }
        }
    }
    let mut h_f = 0.0;
    let mut h_m = 0.0;
    for i in 0..MI_BINS {
        if pf[i] > 0.0 {
            h_f -= pf[i] * libm::log(pf[i]);
        }
        if pm[i] > 0.0 {
            h_m -= pm[i] * libm::log(pm[i]);
        }
    }
    Some(h_f + h_m - h_joint)
}

#[inline]
fn bin32(v: f64) -> usize {
    ((v * MI_BINS as f64) as usize).min(MI_BINS - 1)
}

/// Box-average downsample by an integer factor.
fn downsample(img: &IntensityImage, factor: usize) -> IntensityImage {
    if factor <= 1 {
        return img.clone();
    }
    let w = img.width() / factor;
    let h = img.height() / factor;
    let mut data = Vec::with_capacity(w * h);
    let norm = 1.0 / (factor * factor) as f64;
    for y in 0..h {
        for x in 0..w {
            let mut acc = 0.0;
            for dy in 0..factor {
                for dx in 0..factor {
                    acc += img.get(x * factor + dx, y * factor + dy);
                }
            }
            data.push(acc * norm);
        }
    }
    IntensityImage::from_values(w, h, data).expect("averages stay in [0,1]")
}

/// Family-specific parameter vector; translations are in pixels of the
/// current pyramid level.
fn param_count(family: TransformFamily) -> usize {
    match family {
        TransformFamily::Translation => 2,
        TransformFamily::Rigid => 3,
        TransformFamily::Similarity => 4,
        TransformFamily::Affine => 6,
    }
}

fn param_scales(family: TransformFamily) -> &'static [f64] {
    match family {
        TransformFamily::Translation => &[1.0, 1.0],
        TransformFamily::Rigid => &[0.02, 1.0, 1.0],
        TransformFamily::Similarity => &[0.02, 0.02, 1.0, 1.0],
        TransformFamily::Affine => &[0.02, 0.02, 0.02, 0.02, 1.0, 1.0],
    }
}

fn params_to_transform(
    params: &[f64],
    family: TransformFamily,
    center: (f64, f64),
) -> AffineTransform2D {
    match family {
        TransformFamily::Translation => AffineTransform2D::translation(params[0], params[1]),
        TransformFamily::Rigid => {
            AffineTransform2D::rigid(params[0], params[1], params[2], center)
        }
        TransformFamily::Similarity => AffineTransform2D::similarity(
            libm::exp(params[0]),
            params[1],
            params[2],
            params[3],
            center,
        ),
        TransformFamily::Affine => {
            let (m00, m01) = (1.0 + params[0], params[1]);
            let (m10, m11) = (params[2], 1.0 + params[3]);
            let ox = center.0 + params[4] - (m00 * center.0 + m01 * center.1);
            let oy = center.1 + params[5] - (m10 * center.0 + m11 * center.1);
            AffineTransform2D::from_rows([m00, m01, ox], [m10, m11, oy])
        }
    }
}

/// Register `moving` onto `fixed`: maximize mutual information over the
/// family's parameters. The result maps fixed-image coordinates into
/// moving-image coordinates (a pull-back suitable for [`warp_mask`]).
pub fn register(
    fixed: &IntensityImage,
    moving: &IntensityImage,
    family: TransformFamily,
) -> Result<RegistrationResult> {
    if is_constant(fixed) || is_constant(moving) {
        return Err(Error::DegenerateImage);
    }

    let mi_identity = mutual_information(fixed, moving, &AffineTransform2D::identity())
        .unwrap_or(f64::NEG_INFINITY);

    let n = param_count(family);
    let scales = param_scales(family);
    let mut params = vec![0.0f64; n];
    let mut converged = true;

    let mut factors: Vec<usize> = Vec::new();
    for f in [4usize, 2, 1] {
        if fixed.width() / f >= 16 && fixed.height() / f >= 16 && moving.width() / f >= 16 {
            factors.push(f);
        }
    }
    if factors.is_empty() {
        factors.push(1);
    }

    let mut prev_factor: Option<usize> = None;
    for &factor in &factors {
        if let Some(pf) = prev_factor {
            let ratio = pf as f64 / factor as f64;
            // Translations live in level-local pixels.
            for (i, p) in params.iter_mut().enumerate() {
                if scales[i] == 1.0 {
                    *p *= ratio;
                }
            }
        }
        let fx = downsample(fixed, factor);
        let mv = downsample(moving, factor);
        let center = ((fx.width() as f64 - 1.0) / 2.0, (fx.height() as f64 - 1.0) / 2.0);
        let iters = match factor {
            4 => 80,
            2 => 60,
            _ => 40,
        };
        converged = ascend(&fx, &mv, family, center, &mut params, iters);
        prev_factor = Some(factor);
    }

    let full_center = (
        (fixed.width() as f64 - 1.0) / 2.0,
        (fixed.height() as f64 - 1.0) / 2.0,
    );
    let transform = params_to_transform(&params, family, full_center);
    let mi = mutual_information(fixed, moving, &transform).unwrap_or(f64::NEG_INFINITY);

    // Never return something worse than where we started.
    if mi < mi_identity {
        return Ok(RegistrationResult {
            transform: AffineTransform2D::identity(),
            mi: mi_identity,
            mi_identity,
            converged: false,
        });
    }
    Ok(RegistrationResult {
        transform,
        mi,
        mi_identity,
        converged,
    })
}

fn is_constant(img: &IntensityImage) -> bool {
    let first = img.data()[0];
    img.data().iter().all(|&v| v == first)
}

/// Gradient ascent on MI with finite-difference gradients and step halving.
/// Returns true when the step shrank below its floor (treated as converged).
fn ascend(
    fixed: &IntensityImage,
    moving: &IntensityImage,
    family: TransformFamily,
    center: (f64, f64),
    params: &mut [f64],
    max_iters: usize,
) -> bool {
    let scales = param_scales(family);
    let n = params.len();
    let eval = |p: &[f64]| -> f64 {
        let t = params_to_transform(p, family, center);
        if t.det() < MIN_DET {
            return f64::NEG_INFINITY;
        }
        mutual_information(fixed, moving, &t).unwrap_or(f64::NEG_INFINITY)
    };

    let mut step = 2.0;
    const STEP_MIN: f64 = 0.02;
    const STEP_MAX: f64 = 4.0;
    let mut current = eval(params);
    let mut probe = vec![0.0f64; n];

    for _ in 0..max_iters {
        if step < STEP_MIN {
            return true;
        }
        // Central differences; probe distance tracks the step so plateaus
        // seen at fine steps were already explored at coarse ones.
        let h = (0.5 * step).max(0.25);
        let mut grad = vec![0.0f64; n];
        let mut norm = 0.0;
        for i in 0..n {
            probe.copy_from_slice(params);
            probe[i] += h * scales[i];
            let up = eval(&probe);
            probe[i] -= 2.0 * h * scales[i];
            let down = eval(&probe);
            let g = if up.is_finite() && down.is_finite() {
                (up - down) / 2.0
            } else {
                0.0
            };
            grad[i] = g;
            norm += g * g;
        }
        norm = libm::sqrt(norm);
        if norm == 0.0 {
            step *= 0.5;
            continue;
        }
        probe.copy_from_slice(params);
        for i in 0..n {
            probe[i] += step * scales[i] * grad[i] / norm;
        }
        let candidate = eval(&probe);
        if candidate > current + 1e-12 {
            params.copy_from_slice(&probe);
            current = candidate;
            step = (step * 1.25).min(STEP_MAX);
        } else {
            step *= 0.5;
        }
    }
    step < STEP_MIN
}
