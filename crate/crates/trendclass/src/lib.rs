//! Early classification of trending topics.
//!
//! Given the first tweets of a just-emerged trend, this crate decides
//! whether the trend is breaking news, an ongoing (often broadcast) event,
//! a meme, or a commemorative. The decision uses fifteen language-agnostic
//! features of how the tweets spread (retweet chains, replies, hashtags,
//! links, arrival rate, and several diversity indices), optionally combined
//! with a bag-of-words model in a margin-sum committee.
//!
//! Module map:
//!
//! * [`corpus`] - tweet/trend data model, tweet syntax parser, JSONL I/O
//! * [`features`] - the fifteen social features of a trend
//! * [`text`] - tokenization, term frequencies, per-class vocabulary
//! * [`classifier`] - one-vs-all linear hinge-loss models and committees
//! * [`eval`] - agreement metrics and the repeated train/test protocol
//! * [`synth`] - synthetic corpus generator and distribution summaries

pub mod classifier;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod synth;
pub mod text;

pub use error::{Error, Result};
