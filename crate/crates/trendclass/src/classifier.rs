//! Linear one-vs-all classification with soft-margin hinge loss, plus the
//! margin-sum committee that combines classifiers built on different trend
//! representations.
//!
//! The binary trainer minimizes
//!
//! ```text
//! J(w, b) = 1/2 ||w||^2 + C * sum_i max(0, 1 - y_i (w.x_i + b))
//! ```
//!
//! by epoch-based stochastic subgradient descent with a seeded shuffle per
//! epoch and step size `1/(lambda t)`, `lambda = 1/(C n)`. The bias is not
//! regularized, so the `1/(lambda t)` rate (which is justified by the
//! regularizer's curvature) does not apply to it; its step decays as `1/t`.
//! Training stops after [`MAX_EPOCHS`] epochs or as soon as an epoch fails
//! to lower the full objective by a relative [`STOP_TOLERANCE`], and the
//! best epoch-end iterate is returned, with the zero model as the baseline
//! candidate; the result therefore never scores worse than `C n`.
//! Everything is seeded and sequential, so identical inputs give bitwise
//! identical models.

use std::collections::HashSet;
use std::io::{Read, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, TrendLabel, TrendingTopic};
use crate::error::{Error, Result};
use crate::features::extract_features;
use crate::text::Vocabulary;

pub const MAX_EPOCHS: usize = 200;
pub const STOP_TOLERANCE: f64 = 1e-6;
/// Soft-margin penalty used throughout unless a caller overrides it.
pub const DEFAULT_PENALTY: f64 = 5.0;

/// How a trend is turned into a real vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepresentationKind {
    /// The fifteen social features, standardized by the model's scaler.
    Social,
    /// Raw term counts over the training vocabulary, not standardized.
    Bow,
}

/// Weights and bias of one binary margin function `w.x + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl LinearModel {
    pub fn margin(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.weights.len(),
                got: x.len(),
            });
        }
        Ok(dot(&self.weights, x) + self.bias)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..a.len() {
        acc += a[i] * b[i];
    }
    acc
}

/// Per-dimension standardization fit on training vectors. Dimensions whose
/// variance is indistinguishable from zero keep stddev 1 so constant
/// features map to 0 rather than exploding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scaler {
    mean: Vec<f64>,
    std: Vec<f64>,
}

impl Scaler {
    pub fn fit(xs: &[Vec<f64>]) -> Result<Scaler> {
        if xs.is_empty() {
            return Err(Error::DegenerateTraining("no vectors to fit".to_string()));
        }
        let dim = xs[0].len();
        for x in xs {
            if x.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: x.len(),
                });
            }
        }
        let n = xs.len() as f64;
        let mut mean = vec![0.0; dim];
        let mut std = vec![0.0; dim];
        for j in 0..dim {
            let mut sum = 0.0;
            for x in xs {
                sum += x[j];
            }
            mean[j] = sum / n;
        }
        for j in 0..dim {
            let mut sum_sq = 0.0;
            for x in xs {
                let d = x[j] - mean[j];
                sum_sq += d * d;
            }
            let sd = (sum_sq / n).sqrt();
            // Constant columns produce rounding dust, not signal; treat
            // anything below noise level as zero variance.
            std[j] = if sd <= 1e-9 * mean[j].abs().max(1.0) {
                1.0
            } else {
                sd
            };
        }
        Ok(Scaler { mean, std })
    }

    /// The do-nothing scaler used for representations that are not
    /// standardized.
    pub fn identity(dim: usize) -> Scaler {
        Scaler {
            mean: vec![0.0; dim],
            std: vec![1.0; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn transform(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                got: x.len(),
            });
        }
        Ok(x.iter()
            .enumerate()
            .map(|(j, v)| (v - self.mean[j]) / self.std[j])
            .collect())
    }
}

/// Full objective `1/2 ||w||^2 + C Σ hinge_i` at a point.
pub fn hinge_objective(xs: &[Vec<f64>], ys: &[f64], c: f64, w: &[f64], b: f64) -> f64 {
    let mut hinge_sum = 0.0;
    for i in 0..xs.len() {
        hinge_sum += (1.0 - ys[i] * (dot(w, &xs[i]) + b)).max(0.0);
    }
    0.5 * dot(w, w) + c * hinge_sum
}

/// Subgradient of the full objective. At points where every hinge term is
/// strictly active or strictly inactive this is the exact gradient.
pub fn hinge_gradient(xs: &[Vec<f64>], ys: &[f64], c: f64, w: &[f64], b: f64) -> (Vec<f64>, f64) {
    let mut grad_w = w.to_vec();
    let mut grad_b = 0.0;
    for i in 0..xs.len() {
        if 1.0 - ys[i] * (dot(w, &xs[i]) + b) > 0.0 {
            for j in 0..w.len() {
                grad_w[j] -= c * ys[i] * xs[i][j];
            }
            grad_b -= c * ys[i];
        }
    }
    (grad_w, grad_b)
}

fn check_training_input(xs: &[Vec<f64>], ys: &[f64], c: f64) -> Result<usize> {
    if xs.is_empty() {
        return Err(Error::DegenerateTraining("no examples".to_string()));
    }
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "{} vectors but {} labels",
            xs.len(),
            ys.len()
        )));
    }
    let dim = xs[0].len();
    for x in xs {
        if x.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: x.len(),
            });
        }
    }
    let (mut pos, mut neg) = (false, false);
    for &y in ys {
        if y == 1.0 {
            pos = true;
        } else if y == -1.0 {
            neg = true;
        } else {
            return Err(Error::DegenerateTraining(format!(
                "label {y} is not +1 or -1"
            )));
        }
    }
    if !(pos && neg) {
        return Err(Error::DegenerateTraining(
            "all labels belong to one class".to_string(),
        ));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("penalty C = {c}")));
    }
    Ok(dim)
}

/// Trains one binary hinge-loss model. `ys` entries must be +1 or -1 with
/// both classes present.
pub fn train_binary(xs: &[Vec<f64>], ys: &[f64], c: f64, seed: u64) -> Result<LinearModel> {
    let dim = check_training_input(xs, ys, c)?;
    let n = xs.len();
    let lambda = 1.0 / (c * n as f64);

    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut best_w = w.clone();
    let mut best_b = b;
    let mut best_objective = hinge_objective(xs, ys, c, &w, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    let mut t: u64 = 0;
    let mut previous = f64::INFINITY;

    for _ in 0..MAX_EPOCHS {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let eta = 1.0 / (lambda * t as f64);
            let active = ys[i] * (dot(&w, &xs[i]) + b) < 1.0;
            let shrink = 1.0 - eta * lambda;
            for wj in w.iter_mut() {
                *wj *= shrink;
            }
            if active {
                let step = eta * ys[i];
                for j in 0..dim {
                    w[j] += step * xs[i][j];
                }
                b += ys[i] / t as f64;
            }
        }
        let objective = hinge_objective(xs, ys, c, &w, b);
        if objective < best_objective {
            best_objective = objective;
            best_w.copy_from_slice(&w);
            best_b = b;
        }
        if previous - objective < STOP_TOLERANCE * previous.abs() {
            break;
        }
        previous = objective;
    }
    Ok(LinearModel {
        weights: best_w,
        bias: best_b,
    })
}

/// Margins of one trend against all four classes, plus the argmax decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    margins: [f64; 4],
    predicted: TrendLabel,
}

impl MarginReport {
    /// Builds a report from raw margins in canonical class order. Ties go to
    /// the earliest class in that order.
    pub fn from_margins(margins: [f64; 4]) -> MarginReport {
        let mut best = 0;
        for i in 1..margins.len() {
            if margins[i] > margins[best] {
                best = i;
            }
        }
        MarginReport {
            margins,
            predicted: TrendLabel::ALL[best],
        }
    }

    /// Margins in canonical class order.
    pub fn margins(&self) -> &[f64; 4] {
        &self.margins
    }

    pub fn margin(&self, label: TrendLabel) -> f64 {
        self.margins[label.index()]
    }

    pub fn predicted(&self) -> TrendLabel {
        self.predicted
    }
}

/// Four binary models sharing one representation and one scaler.
#[derive(Debug, Clone, PartialEq)]
pub struct OneVsAllModel {
    representation: RepresentationKind,
    scaler: Scaler,
    models: [LinearModel; 4],
    vocabulary: Option<Vocabulary>,
}

fn class_seed(seed: u64, class_index: usize) -> u64 {
    seed.wrapping_add((class_index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Trains the one-vs-all committee member on labeled trends. Every class
/// must appear at least once. `stopwords` only matters for the bag-of-words
/// representation, where the vocabulary is built from these same trends.
pub fn train_one_vs_all_trends(
    trends: &[&TrendingTopic],
    representation: RepresentationKind,
    c: f64,
    seed: u64,
    stopwords: &HashSet<String>,
) -> Result<OneVsAllModel> {
    if trends.is_empty() {
        return Err(Error::DegenerateTraining("no training trends".to_string()));
    }
    let mut labels = Vec::with_capacity(trends.len());
    for trend in trends {
        labels.push(
            trend
                .label()
                .ok_or_else(|| Error::UnlabeledTrend(trend.topic().to_string()))?,
        );
    }
    for class in TrendLabel::ALL {
        if !labels.contains(&class) {
            return Err(Error::MissingClass(class));
        }
    }

    let (raw, vocabulary) = match representation {
        RepresentationKind::Social => {
            let mut raw = Vec::with_capacity(trends.len());
            for trend in trends {
                raw.push(extract_features(trend)?.to_vec());
            }
            (raw, None)
        }
        RepresentationKind::Bow => {
            let vocab = Vocabulary::build(trends, stopwords);
            let raw = trends.iter().map(|t| vocab.vectorize(t)).collect();
            (raw, Some(vocab))
        }
    };

    let scaler = match representation {
        RepresentationKind::Social => Scaler::fit(&raw)?,
        RepresentationKind::Bow => Scaler::identity(raw[0].len()),
    };
    let xs: Vec<Vec<f64>> = raw
        .iter()
        .map(|x| scaler.transform(x))
        .collect::<Result<_>>()?;

    let mut models = Vec::with_capacity(4);
    for class in TrendLabel::ALL {
        let ys: Vec<f64> = labels
            .iter()
            .map(|&l| if l == class { 1.0 } else { -1.0 })
            .collect();
        models.push(train_binary(&xs, &ys, c, class_seed(seed, class.index()))?);
    }
    let models: [LinearModel; 4] = models.try_into().expect("exactly four classes");

    Ok(OneVsAllModel {
        representation,
        scaler,
        models,
        vocabulary,
    })
}

/// [`train_one_vs_all_trends`] over a whole corpus.
pub fn train_one_vs_all(
    corpus: &Corpus,
    representation: RepresentationKind,
    c: f64,
    seed: u64,
    stopwords: &HashSet<String>,
) -> Result<OneVsAllModel> {
    let trends: Vec<&TrendingTopic> = corpus.trends().iter().collect();
    train_one_vs_all_trends(&trends, representation, c, seed, stopwords)
}

impl OneVsAllModel {
    pub fn representation(&self) -> RepresentationKind {
        self.representation
    }

    pub fn scaler(&self) -> &Scaler {
        &self.scaler
    }

    /// Binary models in canonical class order.
    pub fn models(&self) -> &[LinearModel; 4] {
        &self.models
    }

    pub fn vocabulary(&self) -> Option<&Vocabulary> {
        self.vocabulary.as_ref()
    }

    fn representation_vector(&self, trend: &TrendingTopic) -> Result<Vec<f64>> {
        let raw = match self.representation {
            RepresentationKind::Social => extract_features(trend)?.to_vec(),
            RepresentationKind::Bow => self
                .vocabulary
                .as_ref()
                .ok_or_else(|| {
                    Error::CorruptModel("bag-of-words model without vocabulary".to_string())
                })?
                .vectorize(trend),
        };
        self.scaler.transform(&raw)
    }

    /// Margins of every class model on this trend.
    pub fn margins(&self, trend: &TrendingTopic) -> Result<MarginReport> {
        let x = self.representation_vector(trend)?;
        let mut margins = [0.0; 4];
        for class in TrendLabel::ALL {
            margins[class.index()] = self.models[class.index()].margin(&x)?;
        }
        Ok(MarginReport::from_margins(margins))
    }
}

/// Sums the margins of several reports class-wise and takes the argmax,
/// with the same earliest-class tie break as a single report.
pub fn committee_predict(reports: &[MarginReport]) -> Result<MarginReport> {
    if reports.is_empty() {
        return Err(Error::EmptyCommittee);
    }
    let mut sums = [0.0; 4];
    for report in reports {
        for (sum, margin) in sums.iter_mut().zip(&report.margins) {
            *sum += margin;
        }
    }
    Ok(MarginReport::from_margins(sums))
}

const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    version: u32,
    representation: RepresentationKind,
    classes: Vec<String>,
    scaler: Scaler,
    models: Vec<LinearModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vocabulary: Option<Vec<String>>,
}

/// Writes a model as a single JSON document.
pub fn save_model(model: &OneVsAllModel, mut writer: impl Write) -> Result<()> {
    let file = ModelFile {
        version: MODEL_FORMAT_VERSION,
        representation: model.representation,
        classes: TrendLabel::ALL
            .iter()
            .map(|l| l.as_str().to_string())
            .collect(),
        scaler: model.scaler.clone(),
        models: model.models.to_vec(),
        vocabulary: model.vocabulary.as_ref().map(|v| v.terms().to_vec()),
    };
    let json = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::InvalidArgument(format!("unserializable model: {e}")))?;
    writer.write_all(json.as_bytes())?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

/// Reads a model back. Rejects wrong versions, malformed payloads, and
/// internally inconsistent files.
pub fn load_model(mut reader: impl Read) -> Result<OneVsAllModel> {
    let mut raw = String::new();
    reader.read_to_string(&mut raw)?;
    let value: serde_json::Value =
        serde_json::from_str(&raw).map_err(|e| Error::CorruptModel(e.to_string()))?;
    let version = value
        .get("version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::CorruptModel("missing version field".to_string()))?;
    if version != u64::from(MODEL_FORMAT_VERSION) {
        return Err(Error::ModelVersion {
            expected: MODEL_FORMAT_VERSION,
            got: version.try_into().unwrap_or(u32::MAX),
        });
    }
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| Error::CorruptModel(e.to_string()))?;

    let expected: Vec<String> = TrendLabel::ALL
        .iter()
        .map(|l| l.as_str().to_string())
        .collect();
    if file.classes != expected {
        return Err(Error::CorruptModel(format!(
            "class list {:?} is not the canonical order",
            file.classes
        )));
    }
    let models: [LinearModel; 4] = file
        .models
        .try_into()
        .map_err(|v: Vec<_>| Error::CorruptModel(format!("{} models instead of 4", v.len())))?;
    let dim = file.scaler.dim();
    if file.scaler.std.len() != dim {
        return Err(Error::CorruptModel(
            "scaler arrays differ in length".to_string(),
        ));
    }
    if file.scaler.std.iter().any(|&s| !s.is_finite() || s <= 0.0) {
        return Err(Error::CorruptModel(
            "scaler stddev must be finite and positive".to_string(),
        ));
    }
    for m in &models {
        if m.weights.len() != dim {
            return Err(Error::CorruptModel(format!(
                "weight vector of length {} does not match scaler dimension {dim}",
                m.weights.len()
            )));
        }
    }
    let vocabulary = match (file.representation, file.vocabulary) {
        (RepresentationKind::Bow, Some(terms)) => {
            if terms.len() != dim {
                return Err(Error::CorruptModel(format!(
                    "vocabulary of {} terms does not match dimension {dim}",
                    terms.len()
                )));
            }
            Some(Vocabulary::from_terms(terms)?)
        }
        (RepresentationKind::Bow, None) => {
            return Err(Error::CorruptModel(
                "bag-of-words model without vocabulary".to_string(),
            ))
        }
        (RepresentationKind::Social, None) => None,
        (RepresentationKind::Social, Some(_)) => {
            return Err(Error::CorruptModel(
                "social-feature model with an unexpected vocabulary".to_string(),
            ))
        }
    };

    Ok(OneVsAllModel {
        representation: file.representation,
        scaler: file.scaler,
        models,
        vocabulary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Tweet;

    #[test]
    fn zero_model_objective_is_c_times_n() {
        let xs = vec![vec![1.0, 2.0], vec![-3.0, 0.5], vec![0.0, 0.0]];
        let ys = vec![1.0, -1.0, 1.0];
        let j = hinge_objective(&xs, &ys, 5.0, &[0.0, 0.0], 0.0);
        assert_eq!(j, 15.0);
    }

    #[test]
    fn gradient_matches_finite_differences_at_a_smooth_point() {
        let xs = vec![vec![1.0, -2.0], vec![0.5, 0.25], vec![-1.5, 1.0]];
        let ys = vec![1.0, -1.0, 1.0];
        let (c, w, b) = (2.5, vec![0.3, -0.7], 0.2);
        let (gw, gb) = hinge_gradient(&xs, &ys, c, &w, b);
        let h = 1e-6;
        for j in 0..2 {
            let mut wp = w.clone();
            let mut wm = w.clone();
            wp[j] += h;
            wm[j] -= h;
            let fd = (hinge_objective(&xs, &ys, c, &wp, b) - hinge_objective(&xs, &ys, c, &wm, b))
                / (2.0 * h);
            assert!((fd - gw[j]).abs() < 1e-5, "dim {j}: {fd} vs {}", gw[j]);
        }
        let fd = (hinge_objective(&xs, &ys, c, &w, b + h)
            - hinge_objective(&xs, &ys, c, &w, b - h))
            / (2.0 * h);
        assert!((fd - gb).abs() < 1e-5);
    }

    fn toy_separable() -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for _ in 0..10 {
            xs.push(vec![0.0, 0.0]);
            ys.push(-1.0);
            xs.push(vec![2.0, 2.0]);
            ys.push(1.0);
        }
        (xs, ys)
    }

    #[test]
    fn separable_toy_set_is_classified_perfectly() {
        let (xs, ys) = toy_separable();
        let model = train_binary(&xs, &ys, DEFAULT_PENALTY, 7).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            let m = model.margin(x).unwrap();
            assert!(m.signum() == *y, "margin {m} for label {y}");
        }
        let j = hinge_objective(&xs, &ys, DEFAULT_PENALTY, &model.weights, model.bias);
        assert!(j <= DEFAULT_PENALTY * xs.len() as f64);
    }

    #[test]
    fn training_is_deterministic_per_seed() {
        let (xs, ys) = toy_separable();
        let a = train_binary(&xs, &ys, 5.0, 42).unwrap();
        let b = train_binary(&xs, &ys, 5.0, 42).unwrap();
        assert_eq!(a, b);
        let c = train_binary(&xs, &ys, 5.0, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn degenerate_inputs_are_rejected() {
        let xs = vec![vec![1.0], vec![2.0]];
        assert!(matches!(
            train_binary(&xs, &[1.0, 1.0], 5.0, 0),
            Err(Error::DegenerateTraining(_))
        ));
        assert!(matches!(
            train_binary(&xs, &[1.0, 0.5], 5.0, 0),
            Err(Error::DegenerateTraining(_))
        ));
        let ragged = vec![vec![1.0], vec![2.0, 3.0]];
        assert!(matches!(
            train_binary(&ragged, &[1.0, -1.0], 5.0, 0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn all_zero_features_learn_the_majority_sign() {
        let xs = vec![vec![0.0, 0.0]; 9];
        let ys = vec![1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0];
        let model = train_binary(&xs, &ys, 5.0, 3).unwrap();
        assert!(model.bias > 0.0);
    }

    #[test]
    fn scaler_standardizes_and_guards_constant_columns() {
        let xs = vec![
            vec![1.0, 7.3, -2.0],
            vec![2.0, 7.3, 0.0],
            vec![3.0, 7.3, 2.0],
            vec![4.0, 7.3, 4.0],
        ];
        let scaler = Scaler::fit(&xs).unwrap();
        let transformed: Vec<Vec<f64>> = xs.iter().map(|x| scaler.transform(x).unwrap()).collect();
        for j in [0usize, 2] {
            let mean: f64 = transformed.iter().map(|x| x[j]).sum::<f64>() / 4.0;
            let var: f64 = transformed
                .iter()
                .map(|x| (x[j] - mean).powi(2))
                .sum::<f64>()
                / 4.0;
            assert!(mean.abs() < 1e-9);
            assert!((var - 1.0).abs() < 1e-9);
        }
        // Constant column: stddev pinned to 1, values map to ~0.
        for x in &transformed {
            assert!(x[1].abs() < 1e-9);
        }
    }

    #[test]
    fn argmax_prefers_earliest_class_on_ties() {
        let r = MarginReport::from_margins([1.0, 1.0, 0.5, 1.0]);
        assert_eq!(r.predicted(), TrendLabel::News);
        let r = MarginReport::from_margins([0.2, 0.9, 0.9, 0.1]);
        assert_eq!(r.predicted(), TrendLabel::OngoingEvent);
        let r = MarginReport::from_margins([-1.0, -0.5, -0.5, -2.0]);
        assert_eq!(r.predicted(), TrendLabel::OngoingEvent);
    }

    #[test]
    fn committee_sums_margins_class_wise() {
        let a = MarginReport::from_margins([1.2, 1.1, 0.6, 0.3]);
        let b = MarginReport::from_margins([0.5, 1.0, 1.2, 0.3]);
        assert_eq!(a.predicted(), TrendLabel::News);
        assert_eq!(b.predicted(), TrendLabel::Meme);
        let joint = committee_predict(&[a.clone(), b]).unwrap();
        assert_eq!(joint.predicted(), TrendLabel::OngoingEvent);
        assert_eq!(
            joint.margins(),
            &[1.2 + 0.5, 1.1 + 1.0, 0.6 + 1.2, 0.3 + 0.3]
        );

        let solo = committee_predict(std::slice::from_ref(&a)).unwrap();
        assert_eq!(solo, a);
        assert!(matches!(committee_predict(&[]), Err(Error::EmptyCommittee)));
    }

    fn labeled_corpus() -> Corpus {
        // Tiny but linearly separated: each class gets a telltale token and
        // facet so both representations can fit it.
        let mut trends = Vec::new();
        let specs: [(TrendLabel, &str, &str); 4] = [
            (
                TrendLabel::News,
                "quake",
                "breaking report on the quake now!",
            ),
            (TrendLabel::OngoingEvent, "derby", "watching the derby live"),
            (
                TrendLabel::Meme,
                "caturday",
                "RT @funny: caturday picture http://i.example/c",
            ),
            (
                TrendLabel::Commemorative,
                "moonday",
                "happy moonday to all #moonday",
            ),
        ];
        for (label, topic, base) in specs {
            for k in 0..6 {
                let tweets = (0..4)
                    .map(|i| {
                        Tweet::new(
                            format!("{base} {k}{i}"),
                            (i * 30) as i64,
                            format!("u{k}_{i}"),
                            "en",
                        )
                        .unwrap()
                    })
                    .collect();
                trends
                    .push(TrendingTopic::new(format!("{topic}{k}"), Some(label), tweets).unwrap());
            }
        }
        Corpus::new(trends).unwrap()
    }

    #[test]
    fn one_vs_all_fits_a_separable_corpus_with_both_representations() {
        let corpus = labeled_corpus();
        let stop = HashSet::new();
        for rep in [RepresentationKind::Social, RepresentationKind::Bow] {
            let model = train_one_vs_all(&corpus, rep, DEFAULT_PENALTY, 42, &stop).unwrap();
            let mut correct = 0;
            for trend in corpus.trends() {
                let report = model.margins(trend).unwrap();
                if Some(report.predicted()) == trend.label() {
                    correct += 1;
                }
            }
            assert_eq!(correct, corpus.len(), "representation {rep:?}");
        }
    }

    #[test]
    fn missing_class_is_named() {
        let corpus = labeled_corpus();
        let kept: Vec<&TrendingTopic> = corpus
            .trends()
            .iter()
            .filter(|t| t.label() != Some(TrendLabel::Commemorative))
            .collect();
        match train_one_vs_all_trends(&kept, RepresentationKind::Social, 5.0, 0, &HashSet::new()) {
            Err(Error::MissingClass(TrendLabel::Commemorative)) => {}
            other => panic!("expected missing commemorative, got {other:?}"),
        }
    }

    #[test]
    fn unlabeled_training_trend_is_rejected() {
        let tweets = vec![Tweet::new("hello there", 0, "u", "en").unwrap()];
        let unlabeled = TrendingTopic::new("mystery", None, tweets).unwrap();
        match train_one_vs_all_trends(
            &[&unlabeled],
            RepresentationKind::Social,
            5.0,
            0,
            &HashSet::new(),
        ) {
            Err(Error::UnlabeledTrend(topic)) => assert_eq!(topic, "mystery"),
            other => panic!("expected unlabeled error, got {other:?}"),
        }
    }

    #[test]
    fn model_files_round_trip_bitwise() {
        let corpus = labeled_corpus();
        let stop = HashSet::new();
        for rep in [RepresentationKind::Social, RepresentationKind::Bow] {
            let model = train_one_vs_all(&corpus, rep, 5.0, 11, &stop).unwrap();
            let mut buf = Vec::new();
            save_model(&model, &mut buf).unwrap();
            let loaded = load_model(buf.as_slice()).unwrap();
            assert_eq!(model, loaded);
            for trend in corpus.trends().iter().take(4) {
                let a = model.margins(trend).unwrap();
                let b = loaded.margins(trend).unwrap();
                for (x, y) in a.margins().iter().zip(b.margins()) {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
    }

    #[test]
    fn model_loader_rejects_bad_files() {
        let corpus = labeled_corpus();
        let model =
            train_one_vs_all(&corpus, RepresentationKind::Social, 5.0, 1, &HashSet::new()).unwrap();
        let mut buf = Vec::new();
        save_model(&model, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();

        let wrong_version = text.replace("\"version\": 1", "\"version\": 9");
        assert!(matches!(
            load_model(wrong_version.as_bytes()),
            Err(Error::ModelVersion {
                expected: 1,
                got: 9
            })
        ));

        assert!(matches!(
            load_model(&b"{ not json"[..]),
            Err(Error::CorruptModel(_))
        ));

        let truncated = text.replace("\"bias\"", "\"unknown_field\"");
        assert!(matches!(
            load_model(truncated.as_bytes()),
            Err(Error::CorruptModel(_))
        ));
    }
}
