//! Synthetic trend generator and distribution summaries.
//!
//! Real trend archives cannot ship with the crate, so tests and demos build
//! corpora from per-class behavioral profiles instead. The generator first
//! samples an intent (retweet chain, reply, hashtags, links, punctuation,
//! topic repetitions, target length) and then realizes it as tweet text
//! using the same surface syntax the parser understands, which keeps the
//! feature extractor honest: what the profile put in is what
//! [`parse_tweet_syntax`](crate::corpus::parse_tweet_syntax) reads back out.
//!
//! Token design keeps the populations collision free. Topic names are a
//! class slug plus digits, body words are pure ascii letters, hashtags use
//! letters and underscores only, link paths are hex, and usernames are a
//! letter plus digits, so a topic string can never appear by accident
//! inside a word, tag, link, or mention.
//!
//! Everything draws from one seeded ChaCha stream in a fixed order, so a
//! given (profiles, sizes, seed) triple produces bitwise identical corpora
//! on every platform.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, TrendLabel, TrendingTopic, Tweet, MAX_TWEET_CHARS};
use crate::error::{Error, Result};
use crate::features::{extract_features, FEATURE_COUNT};

/// First tweet of the first generated trend lands here (2011-03-13T07:06:40Z).
pub const BASE_EPOCH: i64 = 1_300_000_000;

/// Trend starts are spaced this far apart so generated corpora do not pile
/// every trend onto one instant.
const TREND_SPACING: i64 = 50_000;

/// Retweet chains deeper than this are vanishingly rare in the wild and
/// would eat the whole character budget.
const MAX_CHAIN_DEPTH: usize = 3;

/// How one class of trends behaves. All knobs are public so experiments can
/// start from [`default_profiles`] and bend single behaviors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassProfile {
    /// Probability that a tweet is a retweet (chain depth at least 1).
    pub retweet_prob: f64,
    /// Probability that a chain link is followed by another, up to depth 3.
    pub retweet_continue_prob: f64,
    /// Probability that a non-retweet opens with a reply mention.
    pub reply_prob: f64,
    /// Expected hashtags per tweet in [0, 3]; the integer part is certain,
    /// the fraction is a coin flip for one more.
    pub hashtag_rate: f64,
    pub exclamation_prob: f64,
    pub question_prob: f64,
    /// Probability that a tweet carries one link.
    pub link_prob: f64,
    /// Unnormalized weights for repeating the topic 1, 2, ... times per
    /// tweet; at most four entries.
    pub extra_topic_weights: Vec<f64>,
    /// Inclusive character target range; realized length lands at or just
    /// above the sampled target, capped at 280.
    pub length_range: (usize, usize),
    /// Inclusive seconds between consecutive tweets.
    pub gap_range: (u64, u64),
    /// Distinct authors and the Zipf skew of their activity.
    pub user_pool: usize,
    pub user_skew: f64,
    /// Distinct accounts that get retweeted, with their own skew. A tiny
    /// pool with high skew mimics one seed account everyone copies.
    pub retweeted_pool: usize,
    pub retweeted_skew: f64,
    pub languages: Vec<String>,
    pub language_skew: f64,
    /// Filler words, most frequent first.
    pub vocab_words: Vec<String>,
    pub vocab_skew: f64,
    /// Hashtag names without the `#`; may be empty only if `hashtag_rate`
    /// is zero.
    pub hashtag_tags: Vec<String>,
    pub hashtag_skew: f64,
}

impl ClassProfile {
    /// Checks every knob and names the offending field.
    pub fn validate(&self, class: TrendLabel) -> Result<()> {
        let bad = |field: &'static str, message: String| Error::InvalidProfile {
            class,
            field,
            message,
        };
        let prob = |field: &'static str, v: f64| -> Result<()> {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(bad(field, format!("{v} is not a probability")))
            }
        };
        let skew = |field: &'static str, v: f64| -> Result<()> {
            if (0.0..=4.0).contains(&v) {
                Ok(())
            } else {
                Err(bad(field, format!("{v} is outside [0, 4]")))
            }
        };
        prob("retweet_prob", self.retweet_prob)?;
        prob("retweet_continue_prob", self.retweet_continue_prob)?;
        prob("reply_prob", self.reply_prob)?;
        prob("exclamation_prob", self.exclamation_prob)?;
        prob("question_prob", self.question_prob)?;
        prob("link_prob", self.link_prob)?;
        if !(0.0..=3.0).contains(&self.hashtag_rate) {
            return Err(bad(
                "hashtag_rate",
                format!("{} is outside [0, 3]", self.hashtag_rate),
            ));
        }
        if self.extra_topic_weights.is_empty() || self.extra_topic_weights.len() > 4 {
            return Err(bad(
                "extra_topic_weights",
                format!("{} entries, need 1 to 4", self.extra_topic_weights.len()),
            ));
        }
        if self
            .extra_topic_weights
            .iter()
            .any(|w| !w.is_finite() || *w < 0.0)
        {
            return Err(bad(
                "extra_topic_weights",
                "weights must be finite and nonnegative".to_string(),
            ));
        }
        if self.extra_topic_weights.iter().sum::<f64>() <= 0.0 {
            return Err(bad(
                "extra_topic_weights",
                "weights must not all be zero".to_string(),
            ));
        }
        let (lo, hi) = self.length_range;
        if lo < 1 || lo > hi || hi > MAX_TWEET_CHARS {
            return Err(bad(
                "length_range",
                format!("({lo}, {hi}) is not within 1..=280 or not ordered"),
            ));
        }
        let (glo, ghi) = self.gap_range;
        if glo > ghi || ghi > 86_400 {
            return Err(bad(
                "gap_range",
                format!("({glo}, {ghi}) is not ordered or exceeds a day"),
            ));
        }
        for (field, pool) in [
            ("user_pool", self.user_pool),
            ("retweeted_pool", self.retweeted_pool),
        ] {
            if !(1..=9_999).contains(&pool) {
                return Err(bad(field, format!("{pool} accounts, need 1 to 9999")));
            }
        }
        skew("user_skew", self.user_skew)?;
        skew("retweeted_skew", self.retweeted_skew)?;
        skew("language_skew", self.language_skew)?;
        skew("vocab_skew", self.vocab_skew)?;
        skew("hashtag_skew", self.hashtag_skew)?;
        if self.languages.is_empty() || self.languages.len() > 20 {
            return Err(bad(
                "languages",
                format!("{} codes, need 1 to 20", self.languages.len()),
            ));
        }
        for code in &self.languages {
            let ok = !code.is_empty()
                && code.len() <= 8
                && code.bytes().all(|b| b.is_ascii_lowercase() || b == b'-');
            if !ok {
                return Err(bad("languages", format!("bad language code {code:?}")));
            }
        }
        if self.vocab_words.is_empty() || self.vocab_words.len() > 1_000 {
            return Err(bad(
                "vocab_words",
                format!("{} words, need 1 to 1000", self.vocab_words.len()),
            ));
        }
        for word in &self.vocab_words {
            let ok = !word.is_empty()
                && word.len() <= 30
                && word.bytes().all(|b| b.is_ascii_lowercase());
            if !ok {
                return Err(bad(
                    "vocab_words",
                    format!("{word:?} is not 1 to 30 ascii lowercase letters"),
                ));
            }
        }
        if self.hashtag_rate > 0.0 && self.hashtag_tags.is_empty() {
            return Err(bad(
                "hashtag_tags",
                "hashtag_rate is positive but no tags are given".to_string(),
            ));
        }
        if self.hashtag_tags.len() > 50 {
            return Err(bad(
                "hashtag_tags",
                format!("{} tags, need at most 50", self.hashtag_tags.len()),
            ));
        }
        for tag in &self.hashtag_tags {
            let ok = !tag.is_empty()
                && tag.len() <= 30
                && tag.bytes().all(|b| b.is_ascii_lowercase() || b == b'_');
            if !ok {
                return Err(bad(
                    "hashtag_tags",
                    format!("{tag:?} is not 1 to 30 of [a-z_]"),
                ));
            }
        }
        Ok(())
    }
}

fn words(list: &[&str]) -> Vec<String> {
    list.iter().map(|w| w.to_string()).collect()
}

/// Ready-made profiles giving the four classes their textbook signatures:
/// news bursts with exclamation marks and links, ongoing events are short
/// fast multilingual chatter, memes spread by retweeting a couple of seed
/// accounts, and commemoratives repeat the topic inside greetings and
/// remembrance hashtags.
pub fn default_profiles() -> BTreeMap<TrendLabel, ClassProfile> {
    let mut profiles = BTreeMap::new();
    profiles.insert(
        TrendLabel::News,
        ClassProfile {
            retweet_prob: 0.40,
            retweet_continue_prob: 0.25,
            reply_prob: 0.10,
            hashtag_rate: 0.35,
            exclamation_prob: 0.55,
            question_prob: 0.10,
            link_prob: 0.30,
            extra_topic_weights: vec![0.9, 0.1],
            length_range: (100, 230),
            gap_range: (1, 4),
            user_pool: 40,
            user_skew: 1.1,
            retweeted_pool: 12,
            retweeted_skew: 0.8,
            languages: words(&["en", "es", "pt", "nl"]),
            language_skew: 0.9,
            vocab_words: words(&[
                "breaking",
                "report",
                "confirmed",
                "officials",
                "police",
                "government",
                "crash",
                "earthquake",
                "storm",
                "update",
                "sources",
                "emergency",
                "statement",
                "president",
                "minister",
                "capital",
                "border",
                "protest",
                "economy",
                "market",
                "shares",
                "company",
                "announced",
                "launch",
                "court",
                "ruling",
                "verdict",
                "election",
                "votes",
                "campaign",
                "leader",
                "crisis",
                "talks",
                "deal",
                "agreement",
                "forces",
                "explosion",
                "rescue",
                "flood",
                "warning",
                "alert",
                "coverage",
                "developing",
                "footage",
                "scene",
                "witnesses",
                "toll",
                "rises",
                "spokesman",
                "agency",
                "media",
                "press",
                "headline",
                "nation",
                "security",
                "investigation",
                "injured",
                "evacuated",
                "damage",
                "response",
            ]),
            vocab_skew: 0.7,
            hashtag_tags: words(&["breaking", "news", "world", "update", "alert"]),
            hashtag_skew: 1.0,
        },
    );
    profiles.insert(
        TrendLabel::OngoingEvent,
        ClassProfile {
            retweet_prob: 0.15,
            retweet_continue_prob: 0.20,
            reply_prob: 0.12,
            hashtag_rate: 0.30,
            exclamation_prob: 0.25,
            question_prob: 0.20,
            link_prob: 0.10,
            extra_topic_weights: vec![0.85, 0.15],
            length_range: (45, 95),
            gap_range: (0, 1),
            user_pool: 40,
            user_skew: 1.1,
            retweeted_pool: 20,
            retweeted_skew: 0.5,
            languages: words(&["en", "es", "pt", "nl", "fr", "de", "it", "tr"]),
            language_skew: 0.3,
            vocab_words: words(&[
                "watching",
                "live",
                "stream",
                "tonight",
                "stadium",
                "crowd",
                "fans",
                "cheering",
                "goal",
                "score",
                "match",
                "game",
                "team",
                "coach",
                "players",
                "minutes",
                "leading",
                "tied",
                "overtime",
                "finals",
                "episode",
                "premiere",
                "award",
                "stage",
                "performance",
                "singing",
                "debate",
                "speech",
                "ceremony",
                "audience",
                "host",
                "voting",
                "results",
                "round",
                "winner",
                "lineup",
                "anthem",
                "whistle",
                "corner",
                "keeper",
                "defense",
                "offense",
                "halftime",
                "substitution",
                "bench",
                "captain",
                "derby",
                "venue",
                "tickets",
                "opening",
                "highlights",
                "replay",
                "commentary",
                "broadcast",
                "channel",
            ]),
            vocab_skew: 1.0,
            hashtag_tags: words(&["live", "match", "tonight", "final", "game_day"]),
            hashtag_skew: 1.0,
        },
    );
    profiles.insert(
        TrendLabel::Meme,
        ClassProfile {
            retweet_prob: 0.65,
            retweet_continue_prob: 0.45,
            reply_prob: 0.08,
            hashtag_rate: 0.60,
            exclamation_prob: 0.30,
            question_prob: 0.20,
            link_prob: 0.45,
            extra_topic_weights: vec![0.8, 0.2],
            length_range: (90, 200),
            gap_range: (0, 2),
            user_pool: 40,
            user_skew: 1.1,
            retweeted_pool: 2,
            retweeted_skew: 1.3,
            languages: words(&["en", "es"]),
            language_skew: 1.5,
            vocab_words: words(&[
                "lol",
                "lmao",
                "haha",
                "funny",
                "hilarious",
                "joke",
                "meme",
                "retweet",
                "follow",
                "followers",
                "tweet",
                "reply",
                "omg",
                "wow",
                "epic",
                "fail",
                "win",
                "winning",
                "love",
                "crazy",
                "random",
                "weird",
                "cool",
                "awesome",
                "silly",
                "facts",
                "relatable",
                "mood",
                "vibes",
                "literally",
                "honestly",
                "bestie",
                "crush",
                "single",
                "dating",
                "school",
                "teacher",
                "homework",
                "sleep",
                "hungry",
                "pizza",
                "coffee",
                "monday",
                "friday",
                "weekend",
                "bored",
                "chilling",
                "playlist",
                "song",
                "lyrics",
                "caption",
                "screenshot",
                "timeline",
                "trending",
                "ratio",
            ]),
            vocab_skew: 1.1,
            hashtag_tags: words(&["lol", "funny", "meme", "tag_game", "viral"]),
            hashtag_skew: 1.0,
        },
    );
    profiles.insert(
        TrendLabel::Commemorative,
        ClassProfile {
            retweet_prob: 0.18,
            retweet_continue_prob: 0.20,
            reply_prob: 0.15,
            hashtag_rate: 0.80,
            exclamation_prob: 0.35,
            question_prob: 0.45,
            link_prob: 0.10,
            extra_topic_weights: vec![0.35, 0.40, 0.25],
            length_range: (95, 210),
            gap_range: (2, 6),
            user_pool: 40,
            user_skew: 1.1,
            retweeted_pool: 15,
            retweeted_skew: 0.5,
            languages: words(&["en", "es", "pt", "nl"]),
            language_skew: 0.8,
            vocab_words: words(&[
                "happy",
                "birthday",
                "anniversary",
                "memories",
                "remember",
                "remembering",
                "honor",
                "honoring",
                "tribute",
                "legend",
                "legacy",
                "icon",
                "iconic",
                "celebrate",
                "celebrating",
                "celebration",
                "wishes",
                "wishing",
                "blessed",
                "grateful",
                "thankful",
                "beautiful",
                "amazing",
                "wonderful",
                "special",
                "years",
                "decade",
                "forever",
                "missed",
                "missing",
                "peace",
                "heaven",
                "angel",
                "heart",
                "soul",
                "inspiration",
                "inspired",
                "greatest",
                "king",
                "queen",
                "star",
                "shine",
                "shining",
                "light",
                "candle",
                "flowers",
                "prayers",
                "respect",
                "salute",
                "loved",
                "smile",
                "voice",
                "songs",
                "classic",
                "timeless",
                "generation",
                "childhood",
                "hero",
            ]),
            vocab_skew: 0.75,
            hashtag_tags: words(&["happy", "birthday", "rip", "memories", "legend"]),
            hashtag_skew: 1.0,
        },
    );
    profiles
}

/// Cumulative distribution table for sampling small categorical
/// distributions by binary search.
struct CumTable {
    cum: Vec<f64>,
}

impl CumTable {
    fn from_weights(weights: &[f64]) -> CumTable {
        let total: f64 = weights.iter().sum();
        let mut cum = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in weights {
            acc += w / total;
            cum.push(acc);
        }
        // Rounding can leave the last entry a hair under 1; pin it so every
        // draw lands inside the table.
        *cum.last_mut().expect("weights are never empty") = 1.0;
        CumTable { cum }
    }

    /// Ranks get weight `(rank + 1)^-skew`; skew 0 is uniform.
    fn zipf(count: usize, skew: f64) -> CumTable {
        let weights: Vec<f64> = (0..count).map(|i| ((i + 1) as f64).powf(-skew)).collect();
        CumTable::from_weights(&weights)
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> usize {
        let r = rng.gen::<f64>();
        self.cum.partition_point(|&c| c <= r)
    }
}

/// Per-class sampling tables, precomputed once per generation run.
struct ClassTables {
    user: CumTable,
    retweeted: CumTable,
    language: CumTable,
    vocab: CumTable,
    hashtag: Option<CumTable>,
    topic_count: CumTable,
}

impl ClassTables {
    fn new(profile: &ClassProfile) -> ClassTables {
        ClassTables {
            user: CumTable::zipf(profile.user_pool, profile.user_skew),
            retweeted: CumTable::zipf(profile.retweeted_pool, profile.retweeted_skew),
            language: CumTable::zipf(profile.languages.len(), profile.language_skew),
            vocab: CumTable::zipf(profile.vocab_words.len(), profile.vocab_skew),
            hashtag: (!profile.hashtag_tags.is_empty())
                .then(|| CumTable::zipf(profile.hashtag_tags.len(), profile.hashtag_skew)),
            topic_count: CumTable::from_weights(&profile.extra_topic_weights),
        }
    }
}

/// Everything a tweet is supposed to contain, decided before any text
/// exists. Kept separate from realization so tests can check that parsing
/// the text recovers exactly these facts.
#[derive(Debug, Clone)]
struct TweetDraft {
    /// Chain accounts, outermost first; empty means not a retweet.
    retweeted: Vec<String>,
    reply_to: Option<String>,
    /// Tag names without `#`, duplicates allowed.
    hashtags: Vec<String>,
    links: Vec<String>,
    exclamation: bool,
    question: bool,
    topic_count: usize,
    target_chars: usize,
}

fn draft_tweet(profile: &ClassProfile, tables: &ClassTables, rng: &mut ChaCha8Rng) -> TweetDraft {
    let mut retweeted = Vec::new();
    if rng.gen::<f64>() < profile.retweet_prob {
        retweeted.push(format!("v{}", tables.retweeted.sample(rng)));
        while retweeted.len() < MAX_CHAIN_DEPTH && rng.gen::<f64>() < profile.retweet_continue_prob
        {
            retweeted.push(format!("v{}", tables.retweeted.sample(rng)));
        }
    }
    let reply_to = if retweeted.is_empty() && rng.gen::<f64>() < profile.reply_prob {
        Some(format!("v{}", tables.retweeted.sample(rng)))
    } else {
        None
    };
    let mut tag_count = profile.hashtag_rate.floor() as usize;
    if rng.gen::<f64>() < profile.hashtag_rate.fract() {
        tag_count += 1;
    }
    let mut hashtags = Vec::with_capacity(tag_count);
    for _ in 0..tag_count {
        let table = tables.hashtag.as_ref().expect("validated: tags exist");
        hashtags.push(profile.hashtag_tags[table.sample(rng)].clone());
    }
    let mut links = Vec::new();
    if rng.gen::<f64>() < profile.link_prob {
        links.push(format!(
            "http://ex.am/{:06x}",
            rng.gen_range(0u32..0x0100_0000)
        ));
    }
    let exclamation = rng.gen::<f64>() < profile.exclamation_prob;
    let question = rng.gen::<f64>() < profile.question_prob;
    let topic_count = tables.topic_count.sample(rng) + 1;
    let target_chars = rng.gen_range(profile.length_range.0..=profile.length_range.1);
    TweetDraft {
        retweeted,
        reply_to,
        hashtags,
        links,
        exclamation,
        question,
        topic_count,
        target_chars,
    }
}

fn assembled_chars(prefix: &str, tokens: &[(String, bool)]) -> usize {
    let body: usize = tokens.iter().map(|(t, _)| t.chars().count()).sum();
    prefix.chars().count() + body + tokens.len().saturating_sub(1)
}

/// Turns a draft into text. Tokens marked droppable are filler; everything
/// the draft promised (topic copies, tags, links, punctuation carriers)
/// survives length trimming.
fn realize_tweet(
    draft: &TweetDraft,
    profile: &ClassProfile,
    tables: &ClassTables,
    topic: &str,
    rng: &mut ChaCha8Rng,
) -> String {
    let mut prefix = String::new();
    for user in &draft.retweeted {
        prefix.push_str("RT @");
        prefix.push_str(user);
        prefix.push_str(": ");
    }
    if let Some(user) = &draft.reply_to {
        prefix.push('@');
        prefix.push_str(user);
        prefix.push(' ');
    }

    let mut tokens: Vec<(String, bool)> = Vec::new();
    for _ in 0..draft.topic_count {
        tokens.push((topic.to_string(), false));
    }
    for tag in &draft.hashtags {
        tokens.push((format!("#{tag}"), false));
    }
    for link in &draft.links {
        tokens.push((link.clone(), false));
    }
    tokens.shuffle(rng);

    while assembled_chars(&prefix, &tokens) < draft.target_chars {
        let word = profile.vocab_words[tables.vocab.sample(rng)].clone();
        let pos = rng.gen_range(0..=tokens.len());
        tokens.insert(pos, (word, true));
    }

    if draft.exclamation {
        let last = tokens.last_mut().expect("topic token is always present");
        last.0.push('!');
        last.1 = false;
    }
    if draft.question {
        let first = tokens.first_mut().expect("topic token is always present");
        first.0.push('?');
        first.1 = false;
    }

    while assembled_chars(&prefix, &tokens) > MAX_TWEET_CHARS {
        match tokens.iter().rposition(|(_, droppable)| *droppable) {
            Some(idx) => {
                tokens.remove(idx);
            }
            None => break,
        }
    }

    let mut text = prefix;
    for (i, (token, _)) in tokens.iter().enumerate() {
        if i > 0 {
            text.push(' ');
        }
        text.push_str(token);
    }
    text
}

fn generate_trend(
    profile: &ClassProfile,
    tables: &ClassTables,
    label: TrendLabel,
    topic: &str,
    base_timestamp: i64,
    tweets_per_trend: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(TrendingTopic, Vec<TweetDraft>)> {
    let mut tweets = Vec::with_capacity(tweets_per_trend);
    let mut drafts = Vec::with_capacity(tweets_per_trend);
    let mut timestamp = base_timestamp;
    for k in 0..tweets_per_trend {
        if k > 0 {
            timestamp += rng.gen_range(profile.gap_range.0..=profile.gap_range.1) as i64;
        }
        let author = format!("u{}", tables.user.sample(rng));
        let language = profile.languages[tables.language.sample(rng)].clone();
        let draft = draft_tweet(profile, tables, rng);
        let text = realize_tweet(&draft, profile, tables, topic, rng);
        tweets.push(Tweet::new(text, timestamp, author, language)?);
        drafts.push(draft);
    }
    let trend = TrendingTopic::new(topic, Some(label), tweets)?;
    Ok((trend, drafts))
}

fn class_slug(label: TrendLabel) -> &'static str {
    match label {
        TrendLabel::News => "news",
        TrendLabel::OngoingEvent => "event",
        TrendLabel::Meme => "meme",
        TrendLabel::Commemorative => "comm",
    }
}

/// Generates `trends_per_class` labeled trends of `tweets_per_trend` tweets
/// for every class in `profiles`, deterministically from `seed`. All four
/// classes must have a profile.
pub fn generate_synthetic_corpus(
    profiles: &BTreeMap<TrendLabel, ClassProfile>,
    trends_per_class: usize,
    tweets_per_trend: usize,
    seed: u64,
) -> Result<Corpus> {
    if trends_per_class == 0 {
        return Err(Error::InvalidArgument(
            "trends_per_class must be at least 1".to_string(),
        ));
    }
    if tweets_per_trend == 0 {
        return Err(Error::InvalidArgument(
            "tweets_per_trend must be at least 1".to_string(),
        ));
    }
    for class in TrendLabel::ALL {
        let profile = profiles.get(&class).ok_or(Error::MissingClass(class))?;
        profile.validate(class)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trends = Vec::with_capacity(4 * trends_per_class);
    let mut trend_counter: i64 = 0;
    for class in TrendLabel::ALL {
        let profile = &profiles[&class];
        let tables = ClassTables::new(profile);
        for number in 0..trends_per_class {
            let topic = format!("{}{number:03}", class_slug(class));
            let base = BASE_EPOCH + trend_counter * TREND_SPACING;
            let (trend, _) = generate_trend(
                profile,
                &tables,
                class,
                &topic,
                base,
                tweets_per_trend,
                &mut rng,
            )?;
            trends.push(trend);
            trend_counter += 1;
        }
    }
    Corpus::new(trends)
}

/// Five-number summary of one feature over the trends of one class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuartileSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Linear-interpolation quantiles (the `h = (n - 1) p` convention) of an
/// unsorted, non-empty sample.
pub fn quartile_summary(values: &[f64]) -> Result<QuartileSummary> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("no values to summarize".to_string()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let quantile = |p: f64| -> f64 {
        let h = (sorted.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let frac = h - lo as f64;
        if frac == 0.0 {
            sorted[lo]
        } else {
            sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
        }
    };
    Ok(QuartileSummary {
        min: sorted[0],
        q1: quantile(0.25),
        median: quantile(0.5),
        q3: quantile(0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// Feature distributions of one class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassDistributions {
    pub label: TrendLabel,
    pub trend_count: usize,
    /// One summary per social feature, in feature index order.
    pub features: Vec<QuartileSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuartileReport {
    pub classes: Vec<ClassDistributions>,
}

/// Summarizes every social feature per class over a labeled corpus.
/// Classes appear in canonical order; classes with no trends are skipped.
pub fn analyze_distributions(corpus: &Corpus) -> Result<QuartileReport> {
    let mut by_class: BTreeMap<TrendLabel, Vec<Vec<f64>>> = BTreeMap::new();
    for trend in corpus.trends() {
        let label = trend
            .label()
            .ok_or_else(|| Error::UnlabeledTrend(trend.topic().to_string()))?;
        by_class
            .entry(label)
            .or_default()
            .push(extract_features(trend)?.to_vec());
    }
    let mut classes = Vec::new();
    for (label, vectors) in by_class {
        let mut features = Vec::with_capacity(FEATURE_COUNT);
        for j in 0..FEATURE_COUNT {
            let column: Vec<f64> = vectors.iter().map(|v| v[j]).collect();
            features.push(quartile_summary(&column)?);
        }
        classes.push(ClassDistributions {
            label,
            trend_count: vectors.len(),
            features,
        });
    }
    Ok(QuartileReport { classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_tweet_syntax, topic_occurrences};
    use crate::features::Feature;
    use crate::text::{stopwords, top_terms};

    #[test]
    fn generation_is_deterministic_per_seed() {
        let profiles = default_profiles();
        let a = generate_synthetic_corpus(&profiles, 3, 8, 42).unwrap();
        let b = generate_synthetic_corpus(&profiles, 3, 8, 42).unwrap();
        assert_eq!(a, b);
        let c = generate_synthetic_corpus(&profiles, 3, 8, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn topics_are_unique_and_sized_as_requested() {
        let corpus = generate_synthetic_corpus(&default_profiles(), 5, 7, 1).unwrap();
        assert_eq!(corpus.len(), 20);
        for trend in corpus.trends() {
            assert_eq!(trend.tweets().len(), 7);
            assert!(trend.label().is_some());
            let mut last = i64::MIN;
            for tweet in trend.tweets() {
                assert!(tweet.timestamp() >= last, "timestamps must not go back");
                last = tweet.timestamp();
            }
        }
        assert_eq!(corpus.trends()[0].topic(), "news000");
        assert_eq!(corpus.trends()[5].topic(), "event000");
        assert_eq!(corpus.trends()[10].topic(), "meme000");
        assert_eq!(corpus.trends()[15].topic(), "comm000");
    }

    #[test]
    fn realized_tweets_parse_back_to_their_drafts() {
        let profiles = default_profiles();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for class in TrendLabel::ALL {
            let profile = &profiles[&class];
            let tables = ClassTables::new(profile);
            let topic = format!("{}777", class_slug(class));
            let (trend, drafts) =
                generate_trend(profile, &tables, class, &topic, BASE_EPOCH, 300, &mut rng).unwrap();
            for (tweet, draft) in trend.tweets().iter().zip(&drafts) {
                let syntax = parse_tweet_syntax(tweet.text()).unwrap();
                assert_eq!(
                    syntax.retweet_depth,
                    draft.retweeted.len(),
                    "{}",
                    tweet.text()
                );
                assert_eq!(syntax.retweeted_users, draft.retweeted, "{}", tweet.text());
                assert_eq!(
                    syntax.is_reply,
                    draft.reply_to.is_some(),
                    "{}",
                    tweet.text()
                );
                let mut parsed_tags = syntax.hashtags.clone();
                parsed_tags.sort();
                let mut wanted: Vec<String> =
                    draft.hashtags.iter().map(|t| format!("#{t}")).collect();
                wanted.sort();
                assert_eq!(parsed_tags, wanted, "{}", tweet.text());
                assert_eq!(syntax.link_count, draft.links.len(), "{}", tweet.text());
                assert_eq!(
                    syntax.has_exclamation,
                    draft.exclamation,
                    "{}",
                    tweet.text()
                );
                assert_eq!(syntax.has_question, draft.question, "{}", tweet.text());
                assert_eq!(
                    topic_occurrences(tweet.text(), &topic),
                    draft.topic_count,
                    "{}",
                    tweet.text()
                );
                assert!(syntax.char_length <= MAX_TWEET_CHARS);
            }
        }
    }

    #[test]
    fn profile_validation_names_the_offending_field() {
        let base = &default_profiles()[&TrendLabel::News];
        let field_of = |p: &ClassProfile| match p.validate(TrendLabel::News) {
            Err(Error::InvalidProfile { field, .. }) => field,
            other => panic!("expected invalid profile, got {other:?}"),
        };

        let mut p = base.clone();
        p.retweet_prob = 1.5;
        assert_eq!(field_of(&p), "retweet_prob");

        let mut p = base.clone();
        p.length_range = (0, 100);
        assert_eq!(field_of(&p), "length_range");

        let mut p = base.clone();
        p.length_range = (10, 300);
        assert_eq!(field_of(&p), "length_range");

        let mut p = base.clone();
        p.vocab_words = vec!["Bad!".to_string()];
        assert_eq!(field_of(&p), "vocab_words");

        let mut p = base.clone();
        p.hashtag_tags.clear();
        assert_eq!(field_of(&p), "hashtag_tags");

        let mut p = base.clone();
        p.user_skew = 9.0;
        assert_eq!(field_of(&p), "user_skew");

        let mut p = base.clone();
        p.extra_topic_weights = vec![0.0, 0.0];
        assert_eq!(field_of(&p), "extra_topic_weights");

        let mut p = base.clone();
        p.gap_range = (5, 2);
        assert_eq!(field_of(&p), "gap_range");

        base.validate(TrendLabel::News).unwrap();
    }

    #[test]
    fn missing_profile_and_zero_sizes_are_rejected() {
        let mut profiles = default_profiles();
        profiles.remove(&TrendLabel::Meme);
        assert!(matches!(
            generate_synthetic_corpus(&profiles, 2, 2, 0),
            Err(Error::MissingClass(TrendLabel::Meme))
        ));
        let profiles = default_profiles();
        assert!(matches!(
            generate_synthetic_corpus(&profiles, 0, 2, 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            generate_synthetic_corpus(&profiles, 2, 0, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    fn class_medians(corpus: &Corpus, feature: Feature) -> BTreeMap<TrendLabel, f64> {
        let report = analyze_distributions(corpus).unwrap();
        report
            .classes
            .iter()
            .map(|c| (c.label, c.features[feature.index()].median))
            .collect()
    }

    #[test]
    fn class_medians_follow_their_profiles() {
        let corpus = generate_synthetic_corpus(&default_profiles(), 15, 40, 11).unwrap();

        let med = class_medians(&corpus, Feature::RetweetRatio);
        for class in [
            TrendLabel::News,
            TrendLabel::OngoingEvent,
            TrendLabel::Commemorative,
        ] {
            assert!(
                med[&TrendLabel::Meme] > med[&class],
                "retweet ratio: meme {} vs {class} {}",
                med[&TrendLabel::Meme],
                med[&class]
            );
        }

        let med = class_medians(&corpus, Feature::LengthMean);
        for class in [
            TrendLabel::News,
            TrendLabel::Meme,
            TrendLabel::Commemorative,
        ] {
            assert!(
                med[&TrendLabel::OngoingEvent] < med[&class],
                "length: {class}"
            );
        }

        let med = class_medians(&corpus, Feature::TopicRepetitionMean);
        for class in [TrendLabel::News, TrendLabel::OngoingEvent, TrendLabel::Meme] {
            assert!(
                med[&TrendLabel::Commemorative] > med[&class],
                "repetition: {class}"
            );
        }

        let med = class_medians(&corpus, Feature::RetweetedUserDiversity);
        for class in [
            TrendLabel::News,
            TrendLabel::OngoingEvent,
            TrendLabel::Commemorative,
        ] {
            assert!(
                med[&TrendLabel::Meme] < med[&class],
                "retweeted diversity: {class}"
            );
        }
    }

    #[test]
    fn quartiles_interpolate_linearly() {
        let s = quartile_summary(&[4.0, 1.0, 3.0, 2.0]).unwrap();
        assert_eq!(s.min, 1.0);
        assert_eq!(s.q1, 1.75);
        assert_eq!(s.median, 2.5);
        assert_eq!(s.q3, 3.25);
        assert_eq!(s.max, 4.0);

        let s = quartile_summary(&[7.5]).unwrap();
        assert_eq!(
            (s.min, s.q1, s.median, s.q3, s.max),
            (7.5, 7.5, 7.5, 7.5, 7.5)
        );

        let s = quartile_summary(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert_eq!(s.q1, 2.0);
        assert_eq!(s.median, 3.0);
        assert_eq!(s.q3, 4.0);

        assert!(matches!(
            quartile_summary(&[]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn analysis_orders_classes_canonically_and_is_coherent() {
        let corpus = generate_synthetic_corpus(&default_profiles(), 4, 10, 2).unwrap();
        let report = analyze_distributions(&corpus).unwrap();
        let labels: Vec<TrendLabel> = report.classes.iter().map(|c| c.label).collect();
        assert_eq!(labels, TrendLabel::ALL.to_vec());
        for class in &report.classes {
            assert_eq!(class.trend_count, 4);
            assert_eq!(class.features.len(), FEATURE_COUNT);
            for s in &class.features {
                assert!(s.min <= s.q1 && s.q1 <= s.median);
                assert!(s.median <= s.q3 && s.q3 <= s.max);
            }
        }
    }

    #[test]
    fn analysis_rejects_unlabeled_trends() {
        let tweets = vec![Tweet::new("hello", 0, "u", "en").unwrap()];
        let trend = TrendingTopic::new("mystery", None, tweets).unwrap();
        let corpus = Corpus::new(vec![trend]).unwrap();
        match analyze_distributions(&corpus) {
            Err(Error::UnlabeledTrend(t)) => assert_eq!(t, "mystery"),
            other => panic!("expected unlabeled error, got {other:?}"),
        }
    }

    #[test]
    fn filler_words_never_collide_with_stopwords() {
        let stop = stopwords::defaults();
        for (class, profile) in default_profiles() {
            for word in profile.vocab_words.iter().chain(&profile.hashtag_tags) {
                assert!(
                    !stop.contains(word.as_str()),
                    "{class}: {word:?} would be filtered as a stopword"
                );
                assert_ne!(word, "rt", "{class}: rt is always filtered");
            }
        }
    }

    #[test]
    fn commemorative_trends_lead_with_happy() {
        let corpus = generate_synthetic_corpus(&default_profiles(), 10, 60, 3).unwrap();
        let terms = top_terms(
            &corpus,
            TrendLabel::Commemorative,
            5,
            &stopwords::defaults(),
        );
        assert_eq!(terms.len(), 5);
        assert_eq!(terms[0].0, "happy", "top terms: {terms:?}");
        assert!(terms[0].1 > 0);
    }
}
