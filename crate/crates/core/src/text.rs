//! Tokenization and emotion/polarity statistics over documents and corpora.

use std::collections::BTreeMap;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{AffectLabel, WordLexicon};
use crate::scalar::Scalar;

/// Lowercase word tokens of a text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    tokens: Vec<String>,
}

impl TokenStream {
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn total_tokens(&self) -> u64 {
        self.tokens.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(String::as_str)
    }
}

impl FromIterator<String> for TokenStream {
    fn from_iter<I: IntoIterator<Item = String>>(iter: I) -> Self {
        TokenStream {
            tokens: iter.into_iter().collect(),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphabetic() || c == '\''
}

/// Borrowed tokens: maximal runs of letters and apostrophes, with leading and
/// trailing apostrophes stripped. Not lowercased.
pub fn raw_tokens(text: &str) -> impl Iterator<Item = &str> {
    text.split(|c: char| !is_word_char(c))
        .map(|t| t.trim_matches('\''))
        .filter(|t| !t.is_empty())
}

/// Splits on every character that is neither alphabetic nor an apostrophe,
/// trims apostrophes at token edges, lowercases, drops empties.
pub fn tokenize(text: &str) -> TokenStream {
    raw_tokens(text).map(str::to_lowercase).collect()
}

/// Same count as `tokenize(text).total_tokens()` without allocating.
pub fn word_count(text: &str) -> u64 {
    raw_tokens(text).count() as u64
}

/// Token-level label occurrence counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffectCounts {
    per_label: [u64; 10],
    pub total_tokens: u64,
}

impl AffectCounts {
    pub fn get(&self, label: AffectLabel) -> u64 {
        self.per_label[label.index()]
    }

    /// Sum over the eight emotions; a token with two emotions counts twice.
    pub fn emotion_token_total(&self) -> u64 {
        AffectLabel::EMOTIONS.iter().map(|l| self.get(*l)).sum()
    }

    pub fn polarity_token_total(&self) -> u64 {
        self.get(AffectLabel::Positive) + self.get(AffectLabel::Negative)
    }

    pub fn per_label(&self) -> BTreeMap<AffectLabel, u64> {
        AffectLabel::ALL.iter().map(|l| (*l, self.get(*l))).collect()
    }

    pub fn from_label_counts(counts: impl IntoIterator<Item = (AffectLabel, u64)>, total_tokens: u64) -> Self {
        let mut c = AffectCounts {
            per_label: [0; 10],
            total_tokens,
        };
        for (l, n) in counts {
            c.per_label[l.index()] += n;
        }
        c
    }

    /// Adds one occurrence of a lowercased `token`.
    pub fn add_token(&mut self, lex: &WordLexicon, token: &str) {
        self.total_tokens += 1;
        for label in lex.lookup(token).iter() {
            self.per_label[label.index()] += 1;
        }
    }
}

impl Add for AffectCounts {
    type Output = AffectCounts;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl AddAssign for AffectCounts {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.per_label.iter_mut().zip(rhs.per_label) {
            *a += b;
        }
        self.total_tokens += rhs.total_tokens;
    }
}

impl Sum for AffectCounts {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(AffectCounts::default(), Add::add)
    }
}

/// Every token occurrence adds one to each of its labels.
pub fn count_affect(ts: &TokenStream, lex: &WordLexicon) -> AffectCounts {
    let mut counts = AffectCounts::default();
    for t in ts.iter() {
        counts.add_token(lex, t);
    }
    counts
}

/// `count_affect(&tokenize(text), lex)` without materializing the tokens.
pub fn count_text(text: &str, lex: &WordLexicon) -> AffectCounts {
    let mut counts = AffectCounts::default();
    for raw in raw_tokens(text) {
        if raw.chars().any(char::is_uppercase) {
            counts.add_token(lex, &raw.to_lowercase());
        } else {
            counts.add_token(lex, raw);
        }
    }
    counts
}

/// Counts with per-axis percentage distributions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffectProfile<S> {
    pub counts: AffectCounts,
    /// Eight emotion keys; all zero when the text has no emotion words.
    pub emotion_pct: BTreeMap<AffectLabel, S>,
    /// `positive` and `negative`; all zero when the text has no polarity words.
    pub polarity_pct: BTreeMap<AffectLabel, S>,
    pub emotion_empty: bool,
    pub polarity_empty: bool,
}

impl<S: Scalar> AffectProfile<S> {
    pub fn emotion(&self, label: AffectLabel) -> S {
        self.emotion_pct.get(&label).copied().unwrap_or_else(S::zero)
    }

    pub fn polarity(&self, label: AffectLabel) -> S {
        self.polarity_pct.get(&label).copied().unwrap_or_else(S::zero)
    }

    /// No emotion words and no polarity words.
    pub fn is_empty(&self) -> bool {
        self.emotion_empty && self.polarity_empty
    }
}

/// Percentages of each emotion among emotion-label occurrences, and of each
/// polarity among polarity-label occurrences. The two axes are independent.
pub fn profile<S: Scalar>(counts: &AffectCounts) -> AffectProfile<S> {
    let emo_total = counts.emotion_token_total();
    let pol_total = counts.polarity_token_total();
    AffectProfile {
        counts: *counts,
        emotion_pct: AffectLabel::EMOTIONS
            .iter()
            .map(|l| (*l, S::percentage(counts.get(*l), emo_total)))
            .collect(),
        polarity_pct: AffectLabel::POLARITIES
            .iter()
            .map(|l| (*l, S::percentage(counts.get(*l), pol_total)))
            .collect(),
        emotion_empty: emo_total == 0,
        polarity_empty: pol_total == 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("cannot compare emotion distributions: {0} profile has no emotion words")]
    EmptyProfile(&'static str),
}

/// Signed per-emotion percentage-point differences `a - b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiffProfile<S> {
    pub per_emotion_delta: BTreeMap<AffectLabel, S>,
}

impl<S: Scalar> DiffProfile<S> {
    pub fn delta(&self, label: AffectLabel) -> S {
        self.per_emotion_delta.get(&label).copied().unwrap_or_else(S::zero)
    }

    pub fn zero() -> Self {
        DiffProfile {
            per_emotion_delta: AffectLabel::EMOTIONS.iter().map(|l| (*l, S::zero())).collect(),
        }
    }
}

pub fn diff<S: Scalar>(a: &AffectProfile<S>, b: &AffectProfile<S>) -> Result<DiffProfile<S>, DiffError> {
    if a.emotion_empty {
        return Err(DiffError::EmptyProfile("first"));
    }
    if b.emotion_empty {
        return Err(DiffError::EmptyProfile("second"));
    }
    Ok(DiffProfile {
        per_emotion_delta: AffectLabel::EMOTIONS
            .iter()
            .map(|l| (*l, a.emotion(*l) - b.emotion(*l)))
            .collect(),
    })
}

/// Counts summed over documents in parallel. Integer addition keeps the
/// result independent of thread count and merge order.
pub fn corpus_counts(docs: &[TokenStream], lex: &WordLexicon) -> AffectCounts {
    docs.par_iter().map(|d| count_affect(d, lex)).sum()
}

pub fn corpus_profile<S: Scalar>(docs: &[TokenStream], lex: &WordLexicon) -> AffectProfile<S> {
    profile(&corpus_counts(docs, lex))
}
