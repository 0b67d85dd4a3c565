//! Corpus model: tweets, trending topics, and the JSONL interchange format.
//!
//! A corpus is an ordered collection of trending topics; each topic carries
//! the earliest tweets observed for it plus an optional gold label. All
//! structural facets of a tweet (retweet chain, reply position, hashtags,
//! links) are recovered from the raw text by [`parse_tweet_syntax`]; nothing
//! depends on provider metadata beyond the four stored fields.
//!
//! Everything here is immutable after construction, so values can be shared
//! freely across threads.

use std::collections::HashSet;
use std::fmt;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Longest tweet accepted, counted in Unicode code points.
pub const MAX_TWEET_CHARS: usize = 280;

/// Longest username matched by the mention grammar.
const MAX_USERNAME_CHARS: usize = 15;

/// Trend type.
///
/// Declaration order is the canonical class order; it fixes CSV column
/// order, one-vs-all model order, and the deterministic tie break wherever
/// margins compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendLabel {
    News,
    OngoingEvent,
    Meme,
    Commemorative,
}

impl TrendLabel {
    pub const ALL: [TrendLabel; 4] = [
        TrendLabel::News,
        TrendLabel::OngoingEvent,
        TrendLabel::Meme,
        TrendLabel::Commemorative,
    ];

    /// Position in the canonical class order.
    pub fn index(self) -> usize {
        match self {
            TrendLabel::News => 0,
            TrendLabel::OngoingEvent => 1,
            TrendLabel::Meme => 2,
            TrendLabel::Commemorative => 3,
        }
    }

    /// Canonical lowercase name, as stored in corpus files.
    pub fn as_str(self) -> &'static str {
        match self {
            TrendLabel::News => "news",
            TrendLabel::OngoingEvent => "ongoing_event",
            TrendLabel::Meme => "meme",
            TrendLabel::Commemorative => "commemorative",
        }
    }

    /// Abbreviation used in report column names.
    pub fn short_code(self) -> &'static str {
        match self {
            TrendLabel::News => "N",
            TrendLabel::OngoingEvent => "OE",
            TrendLabel::Meme => "M",
            TrendLabel::Commemorative => "C",
        }
    }

    pub fn parse(s: &str) -> Result<TrendLabel> {
        match s {
            "news" => Ok(TrendLabel::News),
            "ongoing_event" => Ok(TrendLabel::OngoingEvent),
            "meme" => Ok(TrendLabel::Meme),
            "commemorative" => Ok(TrendLabel::Commemorative),
            other => Err(Error::UnknownLabel(other.to_string())),
        }
    }
}

impl fmt::Display for TrendLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One tweet as collected from the stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tweet {
    text: String,
    timestamp: i64,
    user: String,
    language: String,
}

impl Tweet {
    /// Validates and builds a tweet. The text must be non-empty and at most
    /// [`MAX_TWEET_CHARS`] code points; the timestamp must be non-negative
    /// epoch seconds. The language is whatever code the collector attached
    /// (possibly empty) and is never re-detected from the text.
    pub fn new(
        text: impl Into<String>,
        timestamp: i64,
        user: impl Into<String>,
        language: impl Into<String>,
    ) -> Result<Tweet> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::InvalidTweet("empty text".to_string()));
        }
        let chars = text.chars().count();
        if chars > MAX_TWEET_CHARS {
            return Err(Error::InvalidTweet(format!(
                "text is {chars} characters, limit is {MAX_TWEET_CHARS}"
            )));
        }
        if timestamp < 0 {
            return Err(Error::InvalidTweet(format!(
                "negative timestamp {timestamp}"
            )));
        }
        Ok(Tweet {
            text,
            timestamp,
            user: user.into(),
            language: language.into(),
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// Epoch seconds.
    pub fn timestamp(&self) -> i64 {
        self.timestamp
    }

    pub fn user(&self) -> &str {
        &self.user
    }

    /// Language code attached by the collector; may be empty.
    pub fn language(&self) -> &str {
        &self.language
    }
}

/// Structural facets recovered from tweet text alone.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TweetSyntax {
    /// Number of consecutive `RT @user:` prefixes at the start of the text.
    pub retweet_depth: usize,
    /// Equivalent to `retweet_depth >= 1`.
    pub is_retweet: bool,
    /// Users named in the retweet chain, outermost first; one entry per
    /// chain link, duplicates preserved.
    pub retweeted_users: Vec<String>,
    /// Every `@user` mention in text order, including chain and reply ones.
    pub mentioned_users: Vec<String>,
    /// True when the first non-whitespace character opens a `@user` mention.
    /// Mutually exclusive with `is_retweet`: a retweet prefix puts `R` in
    /// that position.
    pub is_reply: bool,
    /// Every `#tag` occurrence in text order, lowercased, `#` retained.
    pub hashtags: Vec<String>,
    /// Count of substrings starting `http://` or `https://`.
    pub link_count: usize,
    pub has_exclamation: bool,
    pub has_question: bool,
    /// Unicode code points in the raw text.
    pub char_length: usize,
}

fn is_username_char(c: u8) -> bool {
    c.is_ascii_alphanumeric() || c == b'_'
}

/// Reads a username (`[A-Za-z0-9_]{1,15}`) starting at `pos`; returns the
/// end offset, or None when no username character is present.
fn scan_username(bytes: &[u8], pos: usize) -> Option<usize> {
    let mut end = pos;
    while end < bytes.len() && end - pos < MAX_USERNAME_CHARS && is_username_char(bytes[end]) {
        end += 1;
    }
    (end > pos).then_some(end)
}

/// Matches one `RT @user:` / `RT @user ` chain link at `pos` (after any
/// leading ASCII whitespace) and returns (username, offset past the link).
fn scan_chain_link(bytes: &[u8], pos: usize) -> Option<(String, usize)> {
    let mut p = pos;
    while p < bytes.len() && bytes[p].is_ascii_whitespace() {
        p += 1;
    }
    if !bytes[p..].starts_with(b"RT @") {
        return None;
    }
    let name_start = p + 4;
    let name_end = scan_username(bytes, name_start)?;
    // The link must be delimited: a colon (consumed) or whitespace (left for
    // the next scan). `RT @user` at end of text is not a chain link.
    match bytes.get(name_end) {
        Some(b':') => {
            let name = std::str::from_utf8(&bytes[name_start..name_end])
                .expect("username bytes are ASCII")
                .to_string();
            Some((name, name_end + 1))
        }
        Some(c) if c.is_ascii_whitespace() => {
            let name = std::str::from_utf8(&bytes[name_start..name_end])
                .expect("username bytes are ASCII")
                .to_string();
            Some((name, name_end))
        }
        _ => None,
    }
}

/// Offset just past the retweet chain, 0 when the text is not a retweet.
fn retweet_chain_end(text: &str) -> (Vec<String>, usize) {
    let bytes = text.as_bytes();
    let mut users = Vec::new();
    let mut pos = 0;
    while let Some((name, next)) = scan_chain_link(bytes, pos) {
        users.push(name);
        pos = next;
    }
    (users, pos)
}

/// Text remaining after all leading `RT @user:` prefixes. Reparsing the
/// result yields retweet depth 0.
pub fn strip_retweet_prefix(text: &str) -> &str {
    let (_, end) = retweet_chain_end(text);
    &text[end..]
}

fn count_occurrences(haystack: &[u8], needle: &[u8]) -> usize {
    if needle.is_empty() || haystack.len() < needle.len() {
        return 0;
    }
    let mut count = 0;
    let mut pos = 0;
    while pos + needle.len() <= haystack.len() {
        if &haystack[pos..pos + needle.len()] == needle {
            count += 1;
            pos += needle.len();
        } else {
            pos += 1;
        }
    }
    count
}

/// Recovers all structural facets of a tweet from its raw text.
///
/// The grammar is fixed: usernames are `[A-Za-z0-9_]{1,15}`, the retweet
/// marker is the literal `RT`, hashtag tokens end at the first character
/// outside `[A-Za-z0-9_]`, links are substrings starting `http://` or
/// `https://`, and `!`/`?` are the ASCII marks, counted wherever they occur.
///
/// Fails only on empty text.
pub fn parse_tweet_syntax(text: &str) -> Result<TweetSyntax> {
    if text.is_empty() {
        return Err(Error::InvalidTweet("empty text".to_string()));
    }
    let bytes = text.as_bytes();

    let (retweeted_users, _) = retweet_chain_end(text);
    let retweet_depth = retweeted_users.len();

    // A retweet prefix puts `R` in first non-whitespace position, so this
    // can never hold together with retweet_depth >= 1.
    let is_reply = {
        let p = text.len() - text.trim_start().len();
        bytes.get(p) == Some(&b'@') && scan_username(bytes, p + 1).is_some()
    };

    let mut mentioned_users = Vec::new();
    let mut hashtags = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'@' => {
                let preceded_by_word =
                    i > 0 && (is_username_char(bytes[i - 1]) || bytes[i - 1] == b'@');
                if !preceded_by_word {
                    if let Some(end) = scan_username(bytes, i + 1) {
                        mentioned_users.push(text[i + 1..end].to_string());
                        i = end;
                        continue;
                    }
                }
                i += 1;
            }
            b'#' => {
                let mut end = i + 1;
                while end < bytes.len() && is_username_char(bytes[end]) {
                    end += 1;
                }
                if end > i + 1 {
                    hashtags.push(text[i..end].to_lowercase());
                    i = end;
                    continue;
                }
                i += 1;
            }
            _ => i += 1,
        }
    }

    Ok(TweetSyntax {
        retweet_depth,
        is_retweet: retweet_depth >= 1,
        retweeted_users,
        mentioned_users,
        is_reply,
        hashtags,
        link_count: count_occurrences(bytes, b"http://") + count_occurrences(bytes, b"https://"),
        has_exclamation: bytes.contains(&b'!'),
        has_question: bytes.contains(&b'?'),
        char_length: text.chars().count(),
    })
}

/// Non-overlapping, case-insensitive occurrences of `topic` in `text`.
/// An empty topic yields 0.
pub fn topic_occurrences(text: &str, topic: &str) -> usize {
    if topic.is_empty() {
        return 0;
    }
    let haystack = text.to_lowercase();
    let needle = topic.to_lowercase();
    haystack.matches(needle.as_str()).count()
}

/// A trending topic with the earliest tweets observed for it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrendingTopic {
    topic: String,
    label: Option<TrendLabel>,
    tweets: Vec<Tweet>,
}

impl TrendingTopic {
    /// Requires a non-empty topic string and at least one tweet.
    pub fn new(
        topic: impl Into<String>,
        label: Option<TrendLabel>,
        tweets: Vec<Tweet>,
    ) -> Result<TrendingTopic> {
        let topic = topic.into();
        if topic.is_empty() {
            return Err(Error::InvalidArgument("empty topic name".to_string()));
        }
        if tweets.is_empty() {
            return Err(Error::EmptyTrend(topic));
        }
        Ok(TrendingTopic {
            topic,
            label,
            tweets,
        })
    }

    pub fn topic(&self) -> &str {
        &self.topic
    }

    pub fn label(&self) -> Option<TrendLabel> {
        self.label
    }

    /// Tweets in collection order; never empty.
    pub fn tweets(&self) -> &[Tweet] {
        &self.tweets
    }
}

/// An ordered set of trending topics with unique topic names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    trends: Vec<TrendingTopic>,
}

impl Corpus {
    pub fn new(trends: Vec<TrendingTopic>) -> Result<Corpus> {
        let mut seen = HashSet::new();
        for trend in &trends {
            if !seen.insert(trend.topic()) {
                return Err(Error::DuplicateTopic(trend.topic().to_string()));
            }
        }
        Ok(Corpus { trends })
    }

    pub fn trends(&self) -> &[TrendingTopic] {
        &self.trends
    }

    pub fn len(&self) -> usize {
        self.trends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trends.is_empty()
    }
}

#[derive(Serialize, Deserialize)]
struct TweetRecord {
    text: String,
    timestamp: i64,
    user: String,
    lang: String,
}

#[derive(Serialize, Deserialize)]
struct TrendRecord {
    topic: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    tweets: Vec<TweetRecord>,
}

fn at_line<T>(line: usize, result: Result<T>) -> Result<T> {
    result.map_err(|e| Error::CorpusLine {
        line,
        message: e.to_string(),
    })
}

/// Reads a corpus from JSONL: one trend object per line, blank lines
/// skipped. Errors carry the 1-based line number.
pub fn load_corpus(reader: impl BufRead) -> Result<Corpus> {
    let mut trends = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TrendRecord = serde_json::from_str(&line).map_err(|e| Error::CorpusLine {
            line: lineno,
            message: e.to_string(),
        })?;
        let label = at_line(
            lineno,
            record.label.as_deref().map(TrendLabel::parse).transpose(),
        )?;
        let tweets = at_line(
            lineno,
            record
                .tweets
                .into_iter()
                .map(|t| Tweet::new(t.text, t.timestamp, t.user, t.lang))
                .collect::<Result<Vec<_>>>(),
        )?;
        if !seen.insert(record.topic.clone()) {
            return Err(Error::CorpusLine {
                line: lineno,
                message: Error::DuplicateTopic(record.topic).to_string(),
            });
        }
        trends.push(at_line(
            lineno,
            TrendingTopic::new(record.topic, label, tweets),
        )?);
    }
    Corpus::new(trends)
}

/// Writes a corpus as JSONL, one trend per line. `load_corpus` on the output
/// reproduces the input exactly.
pub fn save_corpus(corpus: &Corpus, mut writer: impl Write) -> Result<()> {
    for trend in corpus.trends() {
        let record = TrendRecord {
            topic: trend.topic().to_string(),
            label: trend.label().map(|l| l.as_str().to_string()),
            tweets: trend
                .tweets()
                .iter()
                .map(|t| TweetRecord {
                    text: t.text().to_string(),
                    timestamp: t.timestamp(),
                    user: t.user().to_string(),
                    lang: t.language().to_string(),
                })
                .collect(),
        };
        let json = serde_json::to_string(&record)
            .map_err(|e| Error::InvalidArgument(format!("unserializable trend: {e}")))?;
        writer.write_all(json.as_bytes())?;
        writer.write_all(b"\n")?;
    }
    writer.flush()?;
    Ok(())
}
