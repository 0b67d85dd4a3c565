//! Agreement statistics, repeated train/test splitting, and the evaluation
//! protocol that ties them to the classifiers.
//!
//! Accuracy alone overstates performance on skewed class mixes, so reports
//! carry Cohen's kappa (observed accuracy corrected by the agreement two
//! independent raters with these marginals would reach by chance) next to
//! it. Fleiss' kappa generalizes that to many raters and is provided for
//! measuring annotator agreement on labeling experiments.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classifier::{
    committee_predict, train_one_vs_all_trends, MarginReport, OneVsAllModel, RepresentationKind,
};
use crate::corpus::{Corpus, TrendLabel, TrendingTopic};
use crate::error::{Error, Result};
use crate::text::stopwords;

/// Gold class by row, predicted class by column, both in canonical order.
pub type Confusion = [[u64; 4]; 4];

/// Cohen's kappa of a two-rater confusion matrix: `(P0 - Pc) / (1 - Pc)`
/// where `P0` is observed agreement and `Pc` the chance agreement of the
/// marginals. When chance agreement saturates at 1 the statistic is only
/// defined for perfect observed agreement.
pub fn cohen_kappa(confusion: &Confusion) -> Result<f64> {
    let total: u64 = confusion.iter().flatten().sum();
    if total == 0 {
        return Err(Error::DegenerateAgreement);
    }
    let n = total as f64;
    let mut observed = 0.0;
    let mut chance = 0.0;
    for (i, row) in confusion.iter().enumerate() {
        observed += row[i] as f64;
        let row_total: u64 = row.iter().sum();
        let col_total: u64 = confusion.iter().map(|r| r[i]).sum();
        chance += (row_total as f64 / n) * (col_total as f64 / n);
    }
    let p0 = observed / n;
    if 1.0 - chance <= 0.0 {
        // All mass in one class for both raters: agreement is perfect or
        // the statistic is undefined.
        return if p0 >= 1.0 {
            Ok(1.0)
        } else {
            Err(Error::DegenerateAgreement)
        };
    }
    Ok((p0 - chance) / (1.0 - chance))
}

/// Fleiss' kappa for `raters` raters. `ratings[i][j]` counts raters that
/// put subject `i` in category `j`; every row must sum to `raters`.
pub fn fleiss_kappa(ratings: &[Vec<u64>], raters: u64) -> Result<f64> {
    if ratings.is_empty() {
        return Err(Error::DegenerateAgreement);
    }
    if raters < 2 {
        return Err(Error::InvalidArgument(format!(
            "{raters} raters cannot agree or disagree"
        )));
    }
    let categories = ratings[0].len();
    if categories == 0 {
        return Err(Error::InvalidArgument("no categories".to_string()));
    }
    for (row, counts) in ratings.iter().enumerate() {
        if counts.len() != categories {
            return Err(Error::DimensionMismatch {
                expected: categories,
                got: counts.len(),
            });
        }
        let sum: u64 = counts.iter().sum();
        if sum != raters {
            return Err(Error::RowSum {
                row,
                expected: raters,
                got: sum,
            });
        }
    }
    let n = ratings.len() as f64;
    let r = raters as f64;
    // Per-subject agreement: fraction of rater pairs that agree.
    let mut p_bar = 0.0;
    let mut category_share = vec![0.0; categories];
    for counts in ratings {
        let mut pairs = 0.0;
        for (j, &c) in counts.iter().enumerate() {
            let c = c as f64;
            pairs += c * (c - 1.0);
            category_share[j] += c;
        }
        p_bar += pairs / (r * (r - 1.0));
    }
    p_bar /= n;
    let p_e: f64 = category_share.iter().map(|&s| (s / (n * r)).powi(2)).sum();
    if 1.0 - p_e <= 0.0 {
        return if p_bar >= 1.0 {
            Ok(1.0)
        } else {
            Err(Error::DegenerateAgreement)
        };
    }
    Ok((p_bar - p_e) / (1.0 - p_e))
}

/// One train/test partition, both sides sorted by original corpus index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainTestSplit {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Draws `repeats` independent random partitions of `corpus` with exactly
/// `train_size` training trends each, all from one seeded generator.
pub fn split_train_test(
    corpus: &Corpus,
    train_size: usize,
    repeats: usize,
    seed: u64,
) -> Result<Vec<TrainTestSplit>> {
    let n = corpus.len();
    if train_size == 0 || train_size >= n {
        return Err(Error::InvalidSplit {
            train_size,
            corpus_size: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut splits = Vec::with_capacity(repeats);
    for _ in 0..repeats {
        let mut indices: Vec<usize> = (0..n).collect();
        indices.shuffle(&mut rng);
        let (train, test) = indices.split_at(train_size);
        let mut train = train.to_vec();
        let mut test = test.to_vec();
        train.sort_unstable();
        test.sort_unstable();
        splits.push(TrainTestSplit { train, test });
    }
    Ok(splits)
}

/// Quality of a set of predictions against gold labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metrics {
    pub accuracy: f64,
    pub kappa: f64,
    /// Per-class precision; a class nobody predicted scores 0 and is listed
    /// in `empty_prediction_classes`.
    pub precision: BTreeMap<TrendLabel, f64>,
    pub empty_prediction_classes: Vec<TrendLabel>,
    pub confusion: Confusion,
}

/// Derives accuracy, kappa, and per-class precision from a confusion
/// matrix.
pub fn metrics_from_confusion(confusion: &Confusion) -> Result<Metrics> {
    let total: u64 = confusion.iter().flatten().sum();
    if total == 0 {
        return Err(Error::DegenerateAgreement);
    }
    let correct: u64 = (0..4).map(|i| confusion[i][i]).sum();
    let accuracy = correct as f64 / total as f64;
    let kappa = cohen_kappa(confusion)?;
    let mut precision = BTreeMap::new();
    let mut empty = Vec::new();
    for class in TrendLabel::ALL {
        let j = class.index();
        let predicted: u64 = (0..4).map(|r| confusion[r][j]).sum();
        if predicted == 0 {
            precision.insert(class, 0.0);
            empty.push(class);
        } else {
            precision.insert(class, confusion[j][j] as f64 / predicted as f64);
        }
    }
    Ok(Metrics {
        accuracy,
        kappa,
        precision,
        empty_prediction_classes: empty,
        confusion: *confusion,
    })
}

/// Scores committee predictions over labeled trends. A single model is the
/// one-member committee.
pub fn evaluate(models: &[&OneVsAllModel], trends: &[&TrendingTopic]) -> Result<Metrics> {
    if models.is_empty() {
        return Err(Error::EmptyCommittee);
    }
    if trends.is_empty() {
        return Err(Error::DegenerateAgreement);
    }
    let mut confusion = [[0u64; 4]; 4];
    for trend in trends {
        let gold = trend
            .label()
            .ok_or_else(|| Error::UnlabeledTrend(trend.topic().to_string()))?;
        let reports: Vec<MarginReport> = models
            .iter()
            .map(|m| m.margins(trend))
            .collect::<Result<_>>()?;
        let joint = committee_predict(&reports)?;
        confusion[gold.index()][joint.predicted().index()] += 1;
    }
    metrics_from_confusion(&confusion)
}

/// Per-repeat scores plus their summary. The summary metrics are means over
/// repeats; its confusion matrix is the pooled count over all repeats.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    #[serde(flatten)]
    pub overall: Metrics,
    pub per_repeat: Vec<Metrics>,
}

/// Averages repeat metrics field-wise and pools their confusion counts.
pub fn average_metrics(per_repeat: &[Metrics]) -> Result<EvalReport> {
    if per_repeat.is_empty() {
        return Err(Error::DegenerateAgreement);
    }
    let n = per_repeat.len() as f64;
    let accuracy = per_repeat.iter().map(|m| m.accuracy).sum::<f64>() / n;
    let kappa = per_repeat.iter().map(|m| m.kappa).sum::<f64>() / n;
    let mut precision = BTreeMap::new();
    for class in TrendLabel::ALL {
        let mean = per_repeat.iter().map(|m| m.precision[&class]).sum::<f64>() / n;
        precision.insert(class, mean);
    }
    let mut empty = Vec::new();
    for class in TrendLabel::ALL {
        if per_repeat
            .iter()
            .any(|m| m.empty_prediction_classes.contains(&class))
        {
            empty.push(class);
        }
    }
    let mut confusion = [[0u64; 4]; 4];
    for m in per_repeat {
        for (pooled_row, row) in confusion.iter_mut().zip(&m.confusion) {
            for (pooled, count) in pooled_row.iter_mut().zip(row) {
                *pooled += count;
            }
        }
    }
    Ok(EvalReport {
        overall: Metrics {
            accuracy,
            kappa,
            precision,
            empty_prediction_classes: empty,
            confusion,
        },
        per_repeat: per_repeat.to_vec(),
    })
}

/// Settings of [`run_protocol`].
#[derive(Debug, Clone)]
pub struct ProtocolOptions {
    /// Representations to train; two or more form a committee at test time.
    pub representations: Vec<RepresentationKind>,
    pub c: f64,
    pub seed: u64,
    pub train_size: usize,
    pub repeats: usize,
    /// Terms dropped when building bag-of-words vocabularies.
    pub stopwords: HashSet<String>,
}

impl Default for ProtocolOptions {
    fn default() -> ProtocolOptions {
        ProtocolOptions {
            representations: vec![RepresentationKind::Social],
            c: 5.0,
            seed: 42,
            train_size: 600,
            repeats: 10,
            stopwords: stopwords::defaults(),
        }
    }
}

fn repeat_seed(seed: u64, repeat: usize) -> u64 {
    seed.wrapping_add(((repeat + 1) as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Repeated random-split evaluation: for each split, trains one model per
/// requested representation on the training side and scores the committee
/// on the held-out side.
pub fn run_protocol(corpus: &Corpus, options: &ProtocolOptions) -> Result<EvalReport> {
    if options.representations.is_empty() {
        return Err(Error::EmptyCommittee);
    }
    let splits = split_train_test(corpus, options.train_size, options.repeats, options.seed)?;
    let trends = corpus.trends();
    let mut per_repeat = Vec::with_capacity(splits.len());
    for (r, split) in splits.iter().enumerate() {
        let train: Vec<&TrendingTopic> = split.train.iter().map(|&i| &trends[i]).collect();
        let test: Vec<&TrendingTopic> = split.test.iter().map(|&i| &trends[i]).collect();
        let mut models = Vec::with_capacity(options.representations.len());
        for &rep in &options.representations {
            models.push(train_one_vs_all_trends(
                &train,
                rep,
                options.c,
                repeat_seed(options.seed, r),
                &options.stopwords,
            )?);
        }
        let refs: Vec<&OneVsAllModel> = models.iter().collect();
        per_repeat.push(evaluate(&refs, &test)?);
    }
    average_metrics(&per_repeat)
}
