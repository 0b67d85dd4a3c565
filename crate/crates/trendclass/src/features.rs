//! The fifteen social features of a trend.
//!
//! Every feature is computed from tweet text plus the four stored metadata
//! fields, never from the language of the words, so the representation works
//! unchanged across languages. Indices are a fixed contract (CSV columns
//! `f0..f14`, model weight order):
//!
//! | idx | feature                  | idx | feature                    |
//! |-----|--------------------------|-----|----------------------------|
//! | 0   | retweet_depth_mean       | 8   | replies_ratio              |
//! | 1   | retweet_ratio            | 9   | spread_velocity            |
//! | 2   | hashtags_mean            | 10  | user_diversity             |
//! | 3   | length_mean              | 11  | retweeted_user_diversity   |
//! | 4   | exclamation_ratio        | 12  | hashtag_diversity          |
//! | 5   | question_ratio           | 13  | language_diversity         |
//! | 6   | links_mean               | 14  | vocabulary_diversity       |
//!
//! Diversities are Shannon indices over occurrence counts within the trend;
//! an empty population (say, a trend with no hashtags at all) scores 0, the
//! same as a single-symbol population.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{parse_tweet_syntax, topic_occurrences, TrendingTopic};
use crate::error::{Error, Result};
use crate::text;

pub const FEATURE_COUNT: usize = 15;

/// Feature identifiers in index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feature {
    RetweetDepthMean,
    RetweetRatio,
    HashtagsMean,
    LengthMean,
    ExclamationRatio,
    QuestionRatio,
    LinksMean,
    TopicRepetitionMean,
    RepliesRatio,
    SpreadVelocity,
    UserDiversity,
    RetweetedUserDiversity,
    HashtagDiversity,
    LanguageDiversity,
    VocabularyDiversity,
}

impl Feature {
    pub const ALL: [Feature; FEATURE_COUNT] = [
        Feature::RetweetDepthMean,
        Feature::RetweetRatio,
        Feature::HashtagsMean,
        Feature::LengthMean,
        Feature::ExclamationRatio,
        Feature::QuestionRatio,
        Feature::LinksMean,
        Feature::TopicRepetitionMean,
        Feature::RepliesRatio,
        Feature::SpreadVelocity,
        Feature::UserDiversity,
        Feature::RetweetedUserDiversity,
        Feature::HashtagDiversity,
        Feature::LanguageDiversity,
        Feature::VocabularyDiversity,
    ];

    pub fn index(self) -> usize {
        Feature::ALL.iter().position(|&f| f == self).unwrap()
    }

    /// Column name used in distribution reports.
    pub fn name(self) -> &'static str {
        match self {
            Feature::RetweetDepthMean => "retweet_depth_mean",
            Feature::RetweetRatio => "retweet_ratio",
            Feature::HashtagsMean => "hashtags_mean",
            Feature::LengthMean => "length_mean",
            Feature::ExclamationRatio => "exclamation_ratio",
            Feature::QuestionRatio => "question_ratio",
            Feature::LinksMean => "links_mean",
            Feature::TopicRepetitionMean => "topic_repetition_mean",
            Feature::RepliesRatio => "replies_ratio",
            Feature::SpreadVelocity => "spread_velocity",
            Feature::UserDiversity => "user_diversity",
            Feature::RetweetedUserDiversity => "retweeted_user_diversity",
            Feature::HashtagDiversity => "hashtag_diversity",
            Feature::LanguageDiversity => "language_diversity",
            Feature::VocabularyDiversity => "vocabulary_diversity",
        }
    }
}

/// The fifteen feature values of one trend, in index order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SocialFeatureVector([f64; FEATURE_COUNT]);

impl SocialFeatureVector {
    pub fn values(&self) -> &[f64; FEATURE_COUNT] {
        &self.0
    }

    pub fn get(&self, feature: Feature) -> f64 {
        self.0[feature.index()]
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.0.to_vec()
    }
}

/// Plain arithmetic mean; empty input has no mean.
pub fn arithmetic_mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyMean);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Tweets per second over the trend's observed time window. The window is
/// the span between the earliest and latest timestamp, floored at one
/// second so that instantaneous bursts stay finite.
pub fn spread_velocity(trend: &TrendingTopic) -> f64 {
    let mut min = i64::MAX;
    let mut max = i64::MIN;
    for tweet in trend.tweets() {
        min = min.min(tweet.timestamp());
        max = max.max(tweet.timestamp());
    }
    let window = (max - min).max(1);
    trend.tweets().len() as f64 / window as f64
}

/// Shannon diversity index `-Σ p_j ln p_j` over per-symbol counts, natural
/// log. Counts must be positive; an empty population scores 0. Summation
/// follows iteration order, so feed counts in a deterministic order.
pub fn shannon_index<I>(counts: I) -> Result<f64>
where
    I: IntoIterator<Item = u64>,
{
    let counts: Vec<u64> = counts.into_iter().collect();
    if counts.is_empty() {
        return Ok(0.0);
    }
    if counts.contains(&0) {
        return Err(Error::NonPositiveCount);
    }
    let total = counts.iter().sum::<u64>() as f64;
    let mut acc = 0.0;
    for &c in &counts {
        let p = c as f64 / total;
        acc += p * p.ln();
    }
    // `0.0 - acc` rather than `-acc`: a single-symbol population accumulates
    // +0.0 and must come out as +0.0, not -0.0.
    Ok(0.0 - acc)
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Computes all fifteen features of a trend.
///
/// Per-tweet facets are parsed from text with [`parse_tweet_syntax`];
/// diversity populations are accumulated into ordered maps so that sums run
/// in a fixed order and the result is bitwise reproducible regardless of
/// tweet order.
pub fn extract_features(trend: &TrendingTopic) -> Result<SocialFeatureVector> {
    let n = trend.tweets().len();
    let mut depth = Vec::with_capacity(n);
    let mut retweet = Vec::with_capacity(n);
    let mut hashtags_per_tweet = Vec::with_capacity(n);
    let mut length = Vec::with_capacity(n);
    let mut exclamation = Vec::with_capacity(n);
    let mut question = Vec::with_capacity(n);
    let mut links = Vec::with_capacity(n);
    let mut repetition = Vec::with_capacity(n);
    let mut replies = Vec::with_capacity(n);

    let mut users: BTreeMap<String, u64> = BTreeMap::new();
    let mut retweeted: BTreeMap<String, u64> = BTreeMap::new();
    let mut hashtags: BTreeMap<String, u64> = BTreeMap::new();
    let mut languages: BTreeMap<String, u64> = BTreeMap::new();
    let mut vocabulary: BTreeMap<String, u64> = BTreeMap::new();

    for tweet in trend.tweets() {
        let syntax = parse_tweet_syntax(tweet.text())?;
        depth.push(syntax.retweet_depth as f64);
        retweet.push(flag(syntax.is_retweet));
        hashtags_per_tweet.push(syntax.hashtags.len() as f64);
        length.push(syntax.char_length as f64);
        exclamation.push(flag(syntax.has_exclamation));
        question.push(flag(syntax.has_question));
        links.push(syntax.link_count as f64);
        repetition.push(topic_occurrences(tweet.text(), trend.topic()) as f64);
        replies.push(flag(syntax.is_reply));

        *users.entry(tweet.user().to_string()).or_insert(0) += 1;
        for user in syntax.retweeted_users {
            *retweeted.entry(user).or_insert(0) += 1;
        }
        for tag in syntax.hashtags {
            *hashtags.entry(tag).or_insert(0) += 1;
        }
        // The collector's language code is a population symbol as stored;
        // an empty code is its own symbol, not a skip.
        *languages.entry(tweet.language().to_string()).or_insert(0) += 1;
        for token in text::base_tokens(tweet.text()) {
            *vocabulary.entry(token).or_insert(0) += 1;
        }
    }

    Ok(SocialFeatureVector([
        arithmetic_mean(&depth)?,
        arithmetic_mean(&retweet)?,
        arithmetic_mean(&hashtags_per_tweet)?,
        arithmetic_mean(&length)?,
        arithmetic_mean(&exclamation)?,
        arithmetic_mean(&question)?,
        arithmetic_mean(&links)?,
        arithmetic_mean(&repetition)?,
        arithmetic_mean(&replies)?,
        spread_velocity(trend),
        shannon_index(users.into_values())?,
        shannon_index(retweeted.into_values())?,
        shannon_index(hashtags.into_values())?,
        shannon_index(languages.into_values())?,
        shannon_index(vocabulary.into_values())?,
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{TrendLabel, TrendingTopic, Tweet};

    const TOL: f64 = 1e-12;

    #[test]
    fn mean_of_indicator_values() {
        assert_eq!(arithmetic_mean(&[1.0, 1.0, 0.0, 0.0]).unwrap(), 0.5);
        assert_eq!(arithmetic_mean(&[0.0, 1.0, 0.0, 2.0, 0.0]).unwrap(), 0.6);
        assert!(matches!(arithmetic_mean(&[]), Err(Error::EmptyMean)));
    }

    #[test]
    fn velocity_is_count_over_window() {
        let tweets = vec![
            Tweet::new("a", 0, "u1", "en").unwrap(),
            Tweet::new("b", 5, "u2", "en").unwrap(),
            Tweet::new("c", 10, "u3", "en").unwrap(),
        ];
        let trend = TrendingTopic::new("t", None, tweets).unwrap();
        assert_eq!(spread_velocity(&trend), 0.3);
    }

    #[test]
    fn velocity_window_is_floored_at_one_second() {
        let tweets = vec![
            Tweet::new("a", 100, "u1", "en").unwrap(),
            Tweet::new("b", 100, "u2", "en").unwrap(),
        ];
        let trend = TrendingTopic::new("t", None, tweets).unwrap();
        assert_eq!(spread_velocity(&trend), 2.0);
    }

    #[test]
    fn velocity_uses_extreme_timestamps_not_first_and_last() {
        let tweets = vec![
            Tweet::new("a", 50, "u1", "en").unwrap(),
            Tweet::new("b", 0, "u2", "en").unwrap(),
            Tweet::new("c", 25, "u3", "en").unwrap(),
        ];
        let trend = TrendingTopic::new("t", None, tweets).unwrap();
        assert_eq!(spread_velocity(&trend), 3.0 / 50.0);
    }

    #[test]
    fn shannon_known_values() {
        // {3, 1}: -(3/4 ln 3/4 + 1/4 ln 1/4), worked out by hand.
        let h = shannon_index([3, 1]).unwrap();
        assert!((h - 0.5623351446188083).abs() < TOL, "h = {h}");

        // Uniform over 4 symbols: ln 4.
        let h = shannon_index([7, 7, 7, 7]).unwrap();
        assert!((h - 4.0_f64.ln()).abs() < TOL);

        // Single symbol: exactly +0.0.
        let h = shannon_index([9]).unwrap();
        assert_eq!(h.to_bits(), 0.0_f64.to_bits());

        // Empty population: 0 by definition.
        assert_eq!(shannon_index([]).unwrap(), 0.0);

        assert!(matches!(
            shannon_index([2, 0, 1]),
            Err(Error::NonPositiveCount)
        ));
    }

    /// Five tweets with hand-computed facets: depths [0,1,0,2,0], one reply
    /// with a question, one link with an exclamation, the tag #puzzle three
    /// times, distinct authors, all English.
    fn fixture() -> TrendingTopic {
        let texts = [
            "puzzle championship finals announced for saturday #puzzle",
            "RT @u1: puzzle championship finals announced for saturday #puzzle",
            "@u1 does the puzzle stream start at noon?",
            "RT @u2: RT @u1: puzzle championship finals announced for saturday #puzzle",
            "tickets sold out already for the puzzle finals! http://tix.example/p9",
        ];
        let tweets = texts
            .iter()
            .enumerate()
            .map(|(i, t)| Tweet::new(*t, 60 * i as i64, format!("u{}", i + 1), "en").unwrap())
            .collect();
        TrendingTopic::new("puzzle", Some(TrendLabel::News), tweets).unwrap()
    }

    #[test]
    fn fixture_features_match_hand_computation() {
        let v = extract_features(&fixture()).unwrap();

        assert_eq!(v.get(Feature::RetweetDepthMean), 0.6); // (0+1+0+2+0)/5
        assert_eq!(v.get(Feature::RetweetRatio), 0.4); // 2 of 5
        assert_eq!(v.get(Feature::HashtagsMean), 0.6); // 3 tags over 5 tweets
        assert_eq!(v.get(Feature::ExclamationRatio), 0.2);
        assert_eq!(v.get(Feature::QuestionRatio), 0.2);
        assert_eq!(v.get(Feature::LinksMean), 0.2);
        assert_eq!(v.get(Feature::RepliesRatio), 0.2);

        // "puzzle" occurs 2,2,1,2,1 times ("#puzzle" contains it).
        assert_eq!(v.get(Feature::TopicRepetitionMean), 8.0 / 5.0);

        // Lengths of the five texts, code points.
        let mean_len = (57.0 + 65.0 + 41.0 + 73.0 + 69.0) / 5.0;
        assert_eq!(v.get(Feature::LengthMean), mean_len);

        // 5 tweets over 240 seconds.
        assert_eq!(v.get(Feature::SpreadVelocity), 5.0 / 240.0);

        // Five distinct authors: ln 5.
        assert!((v.get(Feature::UserDiversity) - 5.0_f64.ln()).abs() < TOL);

        // Retweeted users {u1: 2, u2: 1}: ln 3 - (2/3) ln 2.
        let expected = 3.0_f64.ln() - (2.0 / 3.0) * 2.0_f64.ln();
        assert!((v.get(Feature::RetweetedUserDiversity) - expected).abs() < TOL);

        // One distinct hashtag, one language: zero diversity.
        assert_eq!(v.get(Feature::HashtagDiversity), 0.0);
        assert_eq!(v.get(Feature::LanguageDiversity), 0.0);

        // Vocabulary has many distinct tokens; just pin the invariants here,
        // the exact population is exercised in the tokenizer tests.
        assert!(v.get(Feature::VocabularyDiversity) > 0.0);
    }

    #[test]
    fn fixture_lengths_are_what_the_test_claims() {
        // Guards the arithmetic in the test above against fixture edits.
        let lens: Vec<usize> = fixture()
            .tweets()
            .iter()
            .map(|t| t.text().chars().count())
            .collect();
        assert_eq!(lens, vec![57, 65, 41, 73, 69]);
    }

    #[test]
    fn reordering_tweets_leaves_features_bitwise_identical() {
        let trend = fixture();
        let mut reversed: Vec<Tweet> = trend.tweets().to_vec();
        reversed.reverse();
        let reversed = TrendingTopic::new("puzzle", trend.label(), reversed).unwrap();

        let a = extract_features(&trend).unwrap();
        let b = extract_features(&reversed).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn duplicating_every_tweet_only_doubles_velocity() {
        let trend = fixture();
        let mut doubled: Vec<Tweet> = trend.tweets().to_vec();
        doubled.extend(trend.tweets().to_vec());
        let doubled = TrendingTopic::new("puzzle", trend.label(), doubled).unwrap();

        let a = extract_features(&trend).unwrap();
        let b = extract_features(&doubled).unwrap();
        for feature in Feature::ALL {
            let (x, y) = (a.get(feature), b.get(feature));
            if feature == Feature::SpreadVelocity {
                assert_eq!(y.to_bits(), (2.0 * x).to_bits());
            } else {
                assert_eq!(y.to_bits(), x.to_bits(), "{}", feature.name());
            }
        }
    }
}
