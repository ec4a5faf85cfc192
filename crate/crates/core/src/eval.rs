//! Segmentation scoring: confusion counts over a region of interest, the
//! derived accuracy/sensitivity/specificity, exhaustive parameter grids, and
//! leave-one-out cross-validation with the "sensitivity and specificity above
//! 90%" selection constraint.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::Error;
use crate::growcut::strength_sweep_thresholds;
use crate::image::BinaryMask;
use crate::Result;

/// Pixel-level confusion counts; lesion is the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_pos: u64,
    pub true_neg: u64,
    pub false_pos: u64,
    pub false_neg: u64,
}

impl ConfusionCounts {
    pub fn total(&self) -> u64 {
        self.true_pos + self.true_neg + self.false_pos + self.false_neg
    }
}

/// Count agreement between a prediction and the gold mask, restricted to the
/// region of interest.
pub fn compare(pred: &BinaryMask, gold: &BinaryMask, roi: &BinaryMask) -> Result<ConfusionCounts> {
    for m in [pred, gold] {
        if !m.same_dims(roi) {
            return Err(Error::DimensionMismatch {
                expected: (roi.width(), roi.height()),
                got: (m.width(), m.height()),
            });
        }
    }
    let mut counts = ConfusionCounts::default();
    let mut any = false;
    for i in 0..roi.bits().len() {
        if !roi.bits()[i] {
            continue;
        }
        any = true;
        match (pred.bits()[i], gold.bits()[i]) {
            (true, true) => counts.true_pos += 1,
            (false, false) => counts.true_neg += 1,
            (true, false) => counts.false_pos += 1,
            (false, true) => counts.false_neg += 1,
        }
    }
    if !any {
        return Err(Error::EmptyRoi);
    }
    Ok(counts)
}

/// Which specificity formula to report.
///
/// The standard definition is `TN / (TN + FP)`. The literal compatibility
/// mode reports `FP / (FP + TN)` instead, i.e. one minus the standard value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpecificityConvention {
    #[default]
    Standard,
    Literal,
}

/// Derived rates. A denominator of zero leaves the rate undefined rather
/// than silently zero.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metrics {
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
}

/// Accuracy, sensitivity, and specificity (standard convention).
pub fn metrics(c: &ConfusionCounts) -> Metrics {
    metrics_with(c, SpecificityConvention::Standard)
}

pub fn metrics_with(c: &ConfusionCounts, convention: SpecificityConvention) -> Metrics {
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            None
        } else {
            Some(num as f64 / den as f64)
        }
    };
    let specificity = match convention {
        SpecificityConvention::Standard => ratio(c.true_neg, c.true_neg + c.false_pos),
        SpecificityConvention::Literal => ratio(c.false_pos, c.false_pos + c.true_neg),
    };
    Metrics {
        accuracy: ratio(c.true_pos + c.true_neg, c.total()),
        sensitivity: ratio(c.true_pos, c.true_pos + c.false_neg),
        specificity,
    }
}

/// Segmentation method identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MethodId {
    Otsu,
    Fcm,
    HillClimb,
    OtsuGrowcut,
    FcmGrowcut,
    HillClimbGrowcut,
}

impl MethodId {
    pub const ALL: [MethodId; 6] = [
        MethodId::Otsu,
        MethodId::Fcm,
        MethodId::HillClimb,
        MethodId::OtsuGrowcut,
        MethodId::FcmGrowcut,
        MethodId::HillClimbGrowcut,
    ];

    pub fn uses_growcut(&self) -> bool {
        matches!(
            self,
            MethodId::OtsuGrowcut | MethodId::FcmGrowcut | MethodId::HillClimbGrowcut
        )
    }

    /// The method whose mask seeds the growcut variant (itself otherwise).
    pub fn base(&self) -> MethodId {
        match self {
            MethodId::OtsuGrowcut => MethodId::Otsu,
            MethodId::FcmGrowcut => MethodId::Fcm,
            MethodId::HillClimbGrowcut => MethodId::HillClimb,
            other => *other,
        }
    }

    pub fn parse(s: &str) -> Option<MethodId> {
        match s {
            "otsu" => Some(MethodId::Otsu),
            "fcm" => Some(MethodId::Fcm),
            "hillclimb" => Some(MethodId::HillClimb),
            "otsu+gc" => Some(MethodId::OtsuGrowcut),
            "fcm+gc" => Some(MethodId::FcmGrowcut),
            "hillclimb+gc" => Some(MethodId::HillClimbGrowcut),
            _ => None,
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            MethodId::Otsu => "otsu",
            MethodId::Fcm => "fcm",
            MethodId::HillClimb => "hillclimb",
            MethodId::OtsuGrowcut => "otsu+gc",
            MethodId::FcmGrowcut => "fcm+gc",
            MethodId::HillClimbGrowcut => "hillclimb+gc",
        };
        f.write_str(s)
    }
}

/// One point of a method's parameter grid.
///
/// `base` renders comma-separated and the growcut strength threshold, when
/// present, after a slash: `16,14/0.9991`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamTuple {
    pub base: Vec<u32>,
    pub theta: Option<f64>,
}

impl ParamTuple {
    pub fn new(base: Vec<u32>) -> Self {
        Self { base, theta: None }
    }

    pub fn with_theta(base: Vec<u32>, theta: f64) -> Self {
        Self {
            base,
            theta: Some(theta),
        }
    }
}

impl Eq for ParamTuple {}

impl Ord for ParamTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base.cmp(&other.base).then_with(|| {
            match (self.theta, other.theta) {
                (None, None) => Ordering::Equal,
                (None, Some(_)) => Ordering::Less,
                (Some(_), None) => Ordering::Greater,
                (Some(a), Some(b)) => a.total_cmp(&b),
            }
        })
    }
}

impl PartialOrd for ParamTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ParamTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.base.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        if let Some(t) = self.theta {
            write!(f, "/{t}")?;
        }
        Ok(())
    }
}

/// The per-method parameter grids from the study protocol.
///
/// Per image: 209 Otsu masks (levels 2..=20, every threshold), 464 FCM masks
/// (2..=30 clusters, every selected rank), 29 hill-climb masks (2..=30 bins);
/// growcut variants cross their base grid with 10 strength thresholds.
pub struct SweepGrid;

impl SweepGrid {
    pub fn base_tuples(method: MethodId) -> Vec<ParamTuple> {
        match method.base() {
            MethodId::Otsu => {
                let mut v = Vec::new();
                for n in 2..=20u32 {
                    for level in 1..=n {
                        v.push(ParamTuple::new(alloc::vec![n, level]));
                    }
                }
                v
            }
            MethodId::Fcm => {
                let mut v = Vec::new();
                for c in 2..=30u32 {
                    for selected in 1..=c {
                        v.push(ParamTuple::new(alloc::vec![c, selected]));
                    }
                }
                v
            }
            MethodId::HillClimb => (2..=30u32)
                .map(|bins| ParamTuple::new(alloc::vec![bins]))
                .collect(),
            _ => unreachable!("base() never returns a growcut variant"),
        }
    }

    /// The full grid: base tuples, crossed with the strength sweep for
    /// growcut variants.
    pub fn tuples(method: MethodId) -> Vec<ParamTuple> {
        let base = Self::base_tuples(method);
        if !method.uses_growcut() {
            return base;
        }
        let thetas = strength_sweep_thresholds();
        let mut v = Vec::with_capacity(base.len() * thetas.len());
        for b in &base {
            for &t in &thetas {
                v.push(ParamTuple::with_theta(b.base.clone(), t));
            }
        }
        v
    }
}

/// A parameter tuple with its (usually averaged) metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleScore {
    pub tuple: ParamTuple,
    pub metrics: Metrics,
}

/// Outcome of [`select_best`].
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub tuple: ParamTuple,
    /// False when no tuple met the sensitivity/specificity constraint and
    /// the returned tuple is the unconstrained accuracy argmax.
    pub feasible: bool,
}

const CONSTRAINT: f64 = 0.90;

fn meets_constraint(m: &Metrics) -> bool {
    matches!(m.sensitivity, Some(s) if s > CONSTRAINT)
        && matches!(m.specificity, Some(s) if s > CONSTRAINT)
}

/// Pick the accuracy-maximizing tuple among those with sensitivity and
/// specificity above 90%; ties break to higher sensitivity, then to the
/// lexicographically smaller tuple. With no feasible tuple, the
/// unconstrained accuracy argmax is returned flagged infeasible.
pub fn select_best(scores: &[TupleScore]) -> Option<Selection> {
    let pick = |feasible_only: bool| -> Option<&TupleScore> {
        let mut best: Option<&TupleScore> = None;
        for s in scores {
            let acc = match s.metrics.accuracy {
                Some(a) => a,
                None => continue,
            };
            if feasible_only && !meets_constraint(&s.metrics) {
                continue;
            }
            let better = match best {
                None => true,
                Some(b) => {
                    let bacc = b.metrics.accuracy.unwrap();
                    if acc != bacc {
                        acc > bacc
                    } else {
                        let sens = s.metrics.sensitivity.unwrap_or(f64::NEG_INFINITY);
                        let bsens = b.metrics.sensitivity.unwrap_or(f64::NEG_INFINITY);
                        if sens != bsens {
                            sens > bsens
                        } else {
                            s.tuple < b.tuple
                        }
                    }
                }
            };
            if better {
                best = Some(s);
            }
        }
        best
    };

    if let Some(s) = pick(true) {
        return Some(Selection {
            tuple: s.tuple.clone(),
            feasible: true,
        });
    }
    pick(false).map(|s| Selection {
        tuple: s.tuple.clone(),
        feasible: false,
    })
}

/// Average per-image metrics, unweighted. Any undefined constituent leaves
/// that metric undefined, which in turn fails the selection constraint.
pub fn mean_metrics(per_image: &[Metrics]) -> Metrics {
    fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
        let mut sum = 0.0;
        let mut n = 0usize;
        for v in values {
            sum += v?;
            n += 1;
        }
        if n == 0 {
            None
        } else {
            Some(sum / n as f64)
        }
    }
    Metrics {
        accuracy: mean(per_image.iter().map(|m| m.accuracy)),
        sensitivity: mean(per_image.iter().map(|m| m.sensitivity)),
        specificity: mean(per_image.iter().map(|m| m.specificity)),
    }
}

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

fn mean_std(values: &[f64]) -> Option<MeanStd> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Some(MeanStd {
        mean,
        std: libm::sqrt(var),
    })
}

/// Precomputed evaluation table: metrics of every (tuple, image) cell.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub method: MethodId,
    pub tuples: Vec<ParamTuple>,
    pub image_ids: Vec<String>,
    /// Row-major: `cells[t * image_ids.len() + i]`.
    pub cells: Vec<Metrics>,
}

impl SweepTable {
    pub fn cell(&self, tuple_idx: usize, image_idx: usize) -> &Metrics {
        &self.cells[tuple_idx * self.image_ids.len() + image_idx]
    }
}

/// One cross-validation fold.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub held_out: usize,
    pub selection: Selection,
    /// Metrics of the selected tuple on the held-out image.
    pub metrics: Metrics,
}

/// Per-metric mean and population std across feasible folds; `None` when no
/// fold's training selection was feasible (the dashed table row).
#[derive(Debug, Clone, Default)]
pub struct LoocvSummary {
    pub accuracy: Option<MeanStd>,
    pub sensitivity: Option<MeanStd>,
    pub specificity: Option<MeanStd>,
    pub feasible_folds: usize,
    pub total_folds: usize,
}

#[derive(Debug, Clone)]
pub struct LoocvReport {
    pub folds: Vec<FoldOutcome>,
    pub summary: LoocvSummary,
}

/// Leave-one-out cross-validation over a precomputed sweep table: each fold
/// selects the best tuple on the other images and evaluates it on the
/// held-out one.
pub fn loocv(table: &SweepTable) -> Result<LoocvReport> {
    let n_images = table.image_ids.len();
    if n_images < 2 {
        return Err(Error::InvalidParameter("loocv needs at least 2 images"));
    }
    if table.cells.len() != n_images * table.tuples.len() || table.tuples.is_empty() {
        return Err(Error::InvalidParameter("sweep table shape"));
    }

    let mut folds = Vec::with_capacity(n_images);
    for held in 0..n_images {
        let scores: Vec<TupleScore> = table
            .tuples
            .iter()
            .enumerate()
            .map(|(t, tuple)| {
                let others: Vec<Metrics> = (0..n_images)
                    .filter(|&i| i != held)
                    .map(|i| *table.cell(t, i))
                    .collect();
                TupleScore {
                    tuple: tuple.clone(),
                    metrics: mean_metrics(&others),
                }
            })
            .collect();
        let selection =
            select_best(&scores).ok_or(Error::InvalidParameter("no scored tuples"))?;
        let chosen = table
            .tuples
            .iter()
            .position(|t| *t == selection.tuple)
            .expect("selection comes from the table");
        folds.push(FoldOutcome {
            held_out: held,
            metrics: *table.cell(chosen, held),
            selection,
        });
    }

    let feasible: Vec<&FoldOutcome> = folds.iter().filter(|f| f.selection.feasible).collect();
    let collect = |get: fn(&Metrics) -> Option<f64>| -> Vec<f64> {
        feasible.iter().filter_map(|f| get(&f.metrics)).collect()
    };
    let summary = LoocvSummary {
        accuracy: mean_std(&collect(|m| m.accuracy)),
        sensitivity: mean_std(&collect(|m| m.sensitivity)),
        specificity: mean_std(&collect(|m| m.specificity)),
        feasible_folds: feasible.len(),
        total_folds: folds.len(),
    };
    Ok(LoocvReport { folds, summary })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn mask_of(bits: &[bool]) -> BinaryMask {
        BinaryMask::from_bits(bits.len(), 1, bits.to_vec()).unwrap()
    }

    fn full(n: usize) -> BinaryMask {
        mask_of(&vec![true; n])
    }

    #[test]
    fn compare_perfect_prediction() {
        let gold = mask_of(&[true, true, false, false]);
        let roi = full(4);
        let c = compare(&gold, &gold, &roi).unwrap();
        assert_eq!(c.true_pos, 2);
        assert_eq!(c.true_neg, 2);
        assert_eq!(c.false_pos + c.false_neg, 0);
    }

    #[test]
    fn compare_empty_prediction_counts_misses() {
        let mut gold_bits = vec![false; 100];
        for b in gold_bits.iter_mut().take(30) {
            *b = true;
        }
        let pred = mask_of(&vec![false; 100]);
        let c = compare(&pred, &mask_of(&gold_bits), &full(100)).unwrap();
        assert_eq!(c.false_neg, 30);
        assert_eq!(c.true_neg, 70);
        assert_eq!(c.true_pos + c.false_pos, 0);
    }

    #[test]
    fn compare_restricted_to_roi() {
        let pred = mask_of(&[true, true, false, false]);
        let gold = mask_of(&[true, false, true, false]);
        let roi = mask_of(&[true, true, false, false]);
        let c = compare(&pred, &gold, &roi).unwrap();
        assert_eq!(c.total(), 2);
        assert_eq!(c.true_pos, 1);
        assert_eq!(c.false_pos, 1);
    }

    #[test]
    fn compare_errors() {
        let a = full(4);
        let b = full(5);
        assert!(matches!(
            compare(&a, &a, &b).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
        let empty_roi = mask_of(&[false, false, false, false]);
        assert_eq!(compare(&a, &a, &empty_roi).unwrap_err(), Error::EmptyRoi);
    }

    #[test]
    fn metrics_worked_example() {
        let c = ConfusionCounts {
            true_pos: 50,
            true_neg: 40,
            false_pos: 5,
            false_neg: 5,
        };
        let m = metrics(&c);
        assert_eq!(m.accuracy, Some(0.90));
        assert!((m.sensitivity.unwrap() - 50.0 / 55.0).abs() < 1e-12);
        assert!((m.specificity.unwrap() - 40.0 / 45.0).abs() < 1e-12);
    }

    #[test]
    fn metrics_all_positive_prediction() {
        let c = ConfusionCounts {
            true_pos: 30,
            true_neg: 0,
            false_pos: 70,
            false_neg: 0,
        };
        let m = metrics(&c);
        assert_eq!(m.sensitivity, Some(1.0));
        assert_eq!(m.specificity, Some(0.0));
    }

    #[test]
    fn metrics_undefined_denominators_flagged() {
        let c = ConfusionCounts::default();
        let m = metrics(&c);
        assert_eq!(m.accuracy, None);
        assert_eq!(m.sensitivity, None);
        assert_eq!(m.specificity, None);
    }

    #[test]
    fn literal_specificity_is_complement() {
        let c = ConfusionCounts {
            true_pos: 10,
            true_neg: 80,
            false_pos: 20,
            false_neg: 5,
        };
        let standard = metrics_with(&c, SpecificityConvention::Standard)
            .specificity
            .unwrap();
        let literal = metrics_with(&c, SpecificityConvention::Literal)
            .specificity
            .unwrap();
        assert!((standard + literal - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_cardinalities() {
        assert_eq!(SweepGrid::tuples(MethodId::Otsu).len(), 209);
        assert_eq!(SweepGrid::tuples(MethodId::Fcm).len(), 464);
        assert_eq!(SweepGrid::tuples(MethodId::HillClimb).len(), 29);
        assert_eq!(SweepGrid::tuples(MethodId::OtsuGrowcut).len(), 2090);
        assert_eq!(SweepGrid::tuples(MethodId::FcmGrowcut).len(), 4640);
        assert_eq!(SweepGrid::tuples(MethodId::HillClimbGrowcut).len(), 290);
    }

    #[test]
    fn param_tuple_renders_like_the_tables() {
        assert_eq!(ParamTuple::new(vec![17, 10]).to_string(), "17,10");
        assert_eq!(
            ParamTuple::with_theta(vec![16, 14], 0.9991).to_string(),
            "16,14/0.9991"
        );
        assert_eq!(ParamTuple::with_theta(vec![22], 0.9995).to_string(), "22/0.9995");
    }

    fn score(base: Vec<u32>, acc: f64, sens: f64, spec: f64) -> TupleScore {
        TupleScore {
            tuple: ParamTuple::new(base),
            metrics: Metrics {
                accuracy: Some(acc),
                sensitivity: Some(sens),
                specificity: Some(spec),
            },
        }
    }

    #[test]
    fn select_best_single_feasible() {
        let scores = vec![score(vec![2, 1], 0.92, 0.95, 0.93)];
        let s = select_best(&scores).unwrap();
        assert!(s.feasible);
        assert_eq!(s.tuple, ParamTuple::new(vec![2, 1]));
    }

    #[test]
    fn select_best_filters_constraint() {
        let scores = vec![
            score(vec![1], 0.95, 0.89, 0.95), // higher accuracy, infeasible
            score(vec![2], 0.93, 0.92, 0.91),
        ];
        let s = select_best(&scores).unwrap();
        assert!(s.feasible);
        assert_eq!(s.tuple, ParamTuple::new(vec![2]));
    }

    #[test]
    fn select_best_tie_breaks_lexicographically() {
        let scores = vec![
            score(vec![5, 2], 0.95, 0.93, 0.94),
            score(vec![3, 7], 0.95, 0.93, 0.94),
        ];
        let s = select_best(&scores).unwrap();
        assert_eq!(s.tuple, ParamTuple::new(vec![3, 7]));
    }

    #[test]
    fn select_best_infeasible_fallback() {
        let scores = vec![
            score(vec![1], 0.80, 0.5, 0.99),
            score(vec![2], 0.85, 0.6, 0.95),
        ];
        let s = select_best(&scores).unwrap();
        assert!(!s.feasible);
        assert_eq!(s.tuple, ParamTuple::new(vec![2]));
    }

    fn uniform_table(cells: Vec<Metrics>, tuples: Vec<ParamTuple>, images: usize) -> SweepTable {
        SweepTable {
            method: MethodId::Otsu,
            tuples,
            image_ids: (0..images).map(|i| i.to_string()).collect(),
            cells,
        }
    }

    #[test]
    fn loocv_dominant_tuple_selected_everywhere() {
        let good = Metrics {
            accuracy: Some(0.97),
            sensitivity: Some(0.95),
            specificity: Some(0.96),
        };
        let bad = Metrics {
            accuracy: Some(0.91),
            sensitivity: Some(0.92),
            specificity: Some(0.93),
        };
        let tuples = vec![ParamTuple::new(vec![1]), ParamTuple::new(vec![2])];
        // Tuple 0 dominates on every image.
        let mut cells = Vec::new();
        cells.extend(vec![good; 2]);
        cells.extend(vec![bad; 2]);
        let report = loocv(&uniform_table(cells, tuples, 2)).unwrap();
        assert_eq!(report.folds.len(), 2);
        for fold in &report.folds {
            assert!(fold.selection.feasible);
            assert_eq!(fold.selection.tuple, ParamTuple::new(vec![1]));
        }
        let acc = report.summary.accuracy.unwrap();
        assert!((acc.mean - 0.97).abs() < 1e-12);
        assert!(acc.std.abs() < 1e-12);
    }

    #[test]
    fn loocv_population_std_over_two_folds() {
        let m = |a: f64| Metrics {
            accuracy: Some(a),
            sensitivity: Some(0.95),
            specificity: Some(0.95),
        };
        let tuples = vec![ParamTuple::new(vec![1])];
        let cells = vec![m(0.90), m(0.96)];
        let report = loocv(&uniform_table(cells, tuples, 2)).unwrap();
        let acc = report.summary.accuracy.unwrap();
        assert!((acc.mean - 0.93).abs() < 1e-12);
        // Population std of {0.90, 0.96} is 0.03.
        assert!((acc.std - 0.03).abs() < 1e-12);
    }

    #[test]
    fn loocv_all_infeasible_gives_empty_summary() {
        let weak = Metrics {
            accuracy: Some(0.85),
            sensitivity: Some(0.70),
            specificity: Some(0.99),
        };
        let tuples = vec![ParamTuple::new(vec![1])];
        let cells = vec![weak; 3];
        let report = loocv(&uniform_table(cells, tuples, 3)).unwrap();
        assert_eq!(report.summary.feasible_folds, 0);
        assert!(report.summary.accuracy.is_none());
        assert!(report.summary.sensitivity.is_none());
        assert!(report.summary.specificity.is_none());
        for fold in &report.folds {
            assert!(!fold.selection.feasible);
        }
    }

    #[test]
    fn compare_complement_symmetry() {
        // Complementing pred and gold inside the roi swaps TP<->TN, FP<->FN.
        let pred_bits = vec![true, false, true, true, false, false];
        let gold_bits = vec![true, true, false, true, false, true];
        let pred = mask_of(&pred_bits);
        let gold = mask_of(&gold_bits);
        let roi = full(6);
        let c = compare(&pred, &gold, &roi).unwrap();
        let not = |bits: &[bool]| mask_of(&bits.iter().map(|b| !b).collect::<Vec<_>>());
        let cc = compare(&not(&pred_bits), &not(&gold_bits), &roi).unwrap();
        assert_eq!(c.true_pos, cc.true_neg);
        assert_eq!(c.false_pos, cc.false_neg);
    }
}
