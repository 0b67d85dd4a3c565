//! Bag-of-words text representation: tokenization, term frequency vectors,
//! vocabularies, and per-class term summaries.
//!
//! Tokenization is whitespace splitting plus cleanup; there is no stemming
//! and no language detection. Mentions keep their `@` marker; hashtags lose
//! the `#` to edge-punctuation stripping, so `#sheen` and `sheen` collapse
//! to the same term.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::corpus::{Corpus, TrendLabel, TrendingTopic};
use crate::error::{Error, Result};

fn is_url(token: &str) -> bool {
    token.starts_with("http://") || token.starts_with("https://")
}

fn strip_edge_punctuation(token: &str) -> &str {
    let token = token.trim_end_matches(|c: char| !c.is_alphanumeric());
    // Keep a leading `@` so mentions survive as tokens; everything else
    // non-alphanumeric is stripped, which also drops the `#` of hashtags.
    token.trim_start_matches(|c: char| !c.is_alphanumeric() && c != '@')
}

/// Lowercased whitespace tokens with URLs removed and edge punctuation
/// stripped. Stopwords are retained; this is the population behind the
/// vocabulary-diversity feature.
pub fn base_tokens(text: &str) -> Vec<String> {
    text.split_whitespace()
        .filter_map(|raw| {
            let lower = raw.to_lowercase();
            if is_url(&lower) {
                return None;
            }
            let stripped = strip_edge_punctuation(&lower);
            // Re-check: stripping brackets can expose a URL, e.g. "(http://x)".
            if stripped.is_empty() || is_url(stripped) {
                return None;
            }
            Some(stripped.to_string())
        })
        .collect()
}

/// [`base_tokens`] minus stopwords; the retweet marker `rt` is always
/// dropped regardless of the stopword set.
pub fn tokenize_filtered(text: &str, stopwords: &HashSet<String>) -> Vec<String> {
    base_tokens(text)
        .into_iter()
        .filter(|t| t != "rt" && !stopwords.contains(t))
        .collect()
}

/// Sparse term frequencies; only positive counts are stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TermFrequencyVector {
    counts: BTreeMap<String, u64>,
}

impl TermFrequencyVector {
    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, term: &str) -> u64 {
        self.counts.get(term).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    fn add(&mut self, term: String) {
        *self.counts.entry(term).or_insert(0) += 1;
    }
}

/// Term frequencies summed over every tweet of the trend.
pub fn tf_vector(trend: &TrendingTopic, stopwords: &HashSet<String>) -> TermFrequencyVector {
    let mut tf = TermFrequencyVector::default();
    for tweet in trend.tweets() {
        for token in tokenize_filtered(tweet.text(), stopwords) {
            tf.add(token);
        }
    }
    tf
}

/// The `k` highest-aggregate-frequency terms over all trends carrying
/// `label`, as (term, count) pairs ordered by descending count with ties
/// broken lexicographically. A class with no trends yields an empty list.
pub fn top_terms(
    corpus: &Corpus,
    label: TrendLabel,
    k: usize,
    stopwords: &HashSet<String>,
) -> Vec<(String, u64)> {
    let mut totals: BTreeMap<String, u64> = BTreeMap::new();
    for trend in corpus.trends() {
        if trend.label() != Some(label) {
            continue;
        }
        for (term, count) in tf_vector(trend, stopwords).counts {
            *totals.entry(term).or_insert(0) += count;
        }
    }
    let mut ranked: Vec<(String, u64)> = totals.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked
}

/// Bidirectional term/index mapping for dense bag-of-words vectors.
/// Indices are assigned in first-occurrence order over a single-threaded
/// fold, so building is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    terms: Vec<String>,
    index: HashMap<String, usize>,
}

impl Vocabulary {
    /// Collects every filtered token of every tweet, in trend, tweet, and
    /// token order.
    pub fn build(trends: &[&TrendingTopic], stopwords: &HashSet<String>) -> Vocabulary {
        let mut vocab = Vocabulary::default();
        for trend in trends {
            for tweet in trend.tweets() {
                for token in tokenize_filtered(tweet.text(), stopwords) {
                    vocab.insert(token);
                }
            }
        }
        vocab
    }

    /// Rebuilds a vocabulary from an ordered term list (the model file
    /// format). Fails on duplicate terms.
    pub fn from_terms(terms: Vec<String>) -> Result<Vocabulary> {
        let mut vocab = Vocabulary::default();
        for term in terms {
            if vocab.index.contains_key(&term) {
                return Err(Error::CorruptModel(format!(
                    "duplicate vocabulary term {term:?}"
                )));
            }
            vocab.insert(term);
        }
        Ok(vocab)
    }

    fn insert(&mut self, term: String) {
        if !self.index.contains_key(&term) {
            self.index.insert(term.clone(), self.terms.len());
            self.terms.push(term);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in index order.
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn index_of(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    /// Dense term-count vector for a trend. Out-of-vocabulary tokens are
    /// ignored, so a trend sharing no terms with the vocabulary maps to the
    /// zero vector. Stopwords need no special handling here: they were never
    /// admitted into the vocabulary.
    pub fn vectorize(&self, trend: &TrendingTopic) -> Vec<f64> {
        let mut v = vec![0.0; self.terms.len()];
        for tweet in trend.tweets() {
            for token in base_tokens(tweet.text()) {
                if let Some(i) = self.index_of(&token) {
                    v[i] += 1.0;
                }
            }
        }
        v
    }
}

/// Stopword lists shipped with the crate plus loading of user extensions.
pub mod stopwords {
    use std::collections::HashSet;
    use std::io::BufRead;

    use crate::error::Result;

    const ENGLISH: &str = include_str!("../data/stopwords/en.txt");
    const SPANISH: &str = include_str!("../data/stopwords/es.txt");
    const PORTUGUESE: &str = include_str!("../data/stopwords/pt.txt");
    const DUTCH: &str = include_str!("../data/stopwords/nl.txt");

    /// Adds the words of a list (one per line, `#` comments allowed) to the
    /// set, lowercased.
    pub fn extend_from_str(set: &mut HashSet<String>, list: &str) {
        for line in list.lines() {
            let word = line.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            set.insert(word.to_lowercase());
        }
    }

    /// Adds the words of a reader in the same format.
    pub fn extend_from_reader(set: &mut HashSet<String>, reader: impl BufRead) -> Result<()> {
        for line in reader.lines() {
            let line = line?;
            let word = line.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            set.insert(word.to_lowercase());
        }
        Ok(())
    }

    /// The union of the shipped English, Spanish, Portuguese, and Dutch
    /// lists.
    pub fn defaults() -> HashSet<String> {
        let mut set = HashSet::new();
        for list in [ENGLISH, SPANISH, PORTUGUESE, DUTCH] {
            extend_from_str(&mut set, list);
        }
        set
    }
}
