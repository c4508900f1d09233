//! Word–emotion association lexicons at sense level and word level.
//!
//! The on-disk format is the tab-separated `word<TAB>label<TAB>flag` layout of
//! the distributed NRC lexicon: one line per (word, label) pair, `flag` is `0`
//! or `1`, blank lines and lines starting with `#` are ignored.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the eight basic emotions or one of the two polarities.
///
/// The derived ordering is the canonical (alphabetical) order used by the
/// lexicon file writer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AffectLabel {
    Anger,
    Anticipation,
    Disgust,
    Fear,
    Joy,
    Negative,
    Positive,
    Sadness,
    Surprise,
    Trust,
}

impl AffectLabel {
    pub const ALL: [AffectLabel; 10] = [
        AffectLabel::Anger,
        AffectLabel::Anticipation,
        AffectLabel::Disgust,
        AffectLabel::Fear,
        AffectLabel::Joy,
        AffectLabel::Negative,
        AffectLabel::Positive,
        AffectLabel::Sadness,
        AffectLabel::Surprise,
        AffectLabel::Trust,
    ];

    pub const EMOTIONS: [AffectLabel; 8] = [
        AffectLabel::Anger,
        AffectLabel::Anticipation,
        AffectLabel::Disgust,
        AffectLabel::Fear,
        AffectLabel::Joy,
        AffectLabel::Sadness,
        AffectLabel::Surprise,
        AffectLabel::Trust,
    ];

    pub const POLARITIES: [AffectLabel; 2] = [AffectLabel::Positive, AffectLabel::Negative];

    pub fn is_emotion(self) -> bool {
        !matches!(self, AffectLabel::Positive | AffectLabel::Negative)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AffectLabel::Anger => "anger",
            AffectLabel::Anticipation => "anticipation",
            AffectLabel::Disgust => "disgust",
            AffectLabel::Fear => "fear",
            AffectLabel::Joy => "joy",
            AffectLabel::Negative => "negative",
            AffectLabel::Positive => "positive",
            AffectLabel::Sadness => "sadness",
            AffectLabel::Surprise => "surprise",
            AffectLabel::Trust => "trust",
        }
    }

    /// Position in [`AffectLabel::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for AffectLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown affect label `{0}`")]
pub struct UnknownLabel(pub String);

impl FromStr for AffectLabel {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AffectLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| UnknownLabel(s.to_string()))
    }
}

/// A set of affect labels, stored as a 10-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(u16);

impl LabelSet {
    pub const fn empty() -> Self {
        LabelSet(0)
    }

    pub fn insert(&mut self, label: AffectLabel) {
        self.0 |= 1 << label.index();
    }

    pub fn remove(&mut self, label: AffectLabel) {
        self.0 &= !(1 << label.index());
    }

    pub fn contains(self, label: AffectLabel) -> bool {
        self.0 & (1 << label.index()) != 0
    }

    pub fn union(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 | other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Labels in canonical order.
    pub fn iter(self) -> impl Iterator<Item = AffectLabel> {
        AffectLabel::ALL.into_iter().filter(move |l| self.contains(*l))
    }
}

impl FromIterator<AffectLabel> for LabelSet {
    fn from_iter<I: IntoIterator<Item = AffectLabel>>(iter: I) -> Self {
        let mut set = LabelSet::empty();
        for l in iter {
            set.insert(l);
        }
        set
    }
}

impl<const N: usize> From<[AffectLabel; N]> for LabelSet {
    fn from(labels: [AffectLabel; N]) -> Self {
        labels.into_iter().collect()
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for LabelSet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for LabelSet {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let labels = Vec::<AffectLabel>::deserialize(deserializer)?;
        Ok(labels.into_iter().collect())
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: {source}")]
    UnknownLabel {
        line: usize,
        #[source]
        source: UnknownLabel,
    },
    #[error("line {line}: conflicting flags for ({word}, {label})")]
    Conflict {
        line: usize,
        word: String,
        label: AffectLabel,
    },
    #[error("invalid sense key: {0}")]
    InvalidSenseKey(String),
}

/// A word in one thesaurus sense.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawSenseKey")]
pub struct SenseKey {
    word: String,
    sense_id: String,
}

#[derive(Deserialize)]
struct RawSenseKey {
    word: String,
    sense_id: String,
}

impl TryFrom<RawSenseKey> for SenseKey {
    type Error = LexiconError;

    fn try_from(raw: RawSenseKey) -> Result<Self, Self::Error> {
        SenseKey::new(&raw.word, raw.sense_id)
    }
}

impl SenseKey {
    /// Lowercases `word`; rejects empty words and words containing whitespace.
    pub fn new(word: &str, sense_id: impl Into<String>) -> Result<Self, LexiconError> {
        if word.is_empty() || word.chars().any(char::is_whitespace) {
            return Err(LexiconError::InvalidSenseKey(format!("{word:?}")));
        }
        Ok(SenseKey {
            word: word.to_lowercase(),
            sense_id: sense_id.into(),
        })
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn sense_id(&self) -> &str {
        &self.sense_id
    }
}

impl fmt::Display for SenseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.word, self.sense_id)
    }
}

/// Yes-votes out of valid votes for one (sense, label) instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoteTally {
    pub yes: u32,
    pub total: u32,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SenseLexicon {
    entries: BTreeMap<SenseKey, LabelSet>,
    provenance: BTreeMap<SenseKey, [VoteTally; 10]>,
}

impl SenseLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts or replaces a sense. Tallies must satisfy `yes <= total`.
    pub fn insert(&mut self, key: SenseKey, labels: LabelSet, tallies: [VoteTally; 10]) {
        debug_assert!(tallies.iter().all(|t| t.yes <= t.total));
        self.provenance.insert(key.clone(), tallies);
        self.entries.insert(key, labels);
    }

    /// Inserts a sense without vote provenance.
    pub fn insert_labels(&mut self, key: SenseKey, labels: LabelSet) {
        self.entries.insert(key, labels);
    }

    pub fn get(&self, key: &SenseKey) -> Option<LabelSet> {
        self.entries.get(key).copied()
    }

    pub fn tallies(&self, key: &SenseKey) -> Option<&[VoteTally; 10]> {
        self.provenance.get(key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&SenseKey, LabelSet)> {
        self.entries.iter().map(|(k, v)| (k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Word-level lexicon: each word gets the union of its senses' labels.
    pub fn collapse_senses(&self) -> WordLexicon {
        let mut lex = WordLexicon::new();
        for (key, labels) in &self.entries {
            let slot = lex.entries.entry(key.word.clone()).or_default();
            *slot = slot.union(*labels);
        }
        lex
    }
}

/// Word → label set. Immutable once built; safe to share between threads.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordLexicon {
    entries: HashMap<String, LabelSet>,
}

pub const LEXICON_HEADER: &str = "# word\tlabel\tflag";

impl WordLexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets the label set of a word (lowercased). Empty words are ignored.
    pub fn insert(&mut self, word: &str, labels: LabelSet) {
        if word.is_empty() {
            return;
        }
        self.entries.insert(word.to_lowercase(), labels);
    }

    /// Labels of `token` after lowercasing; empty if the word is absent.
    pub fn lookup(&self, token: &str) -> LabelSet {
        let hit = if token.chars().any(char::is_uppercase) {
            self.entries.get(&token.to_lowercase())
        } else {
            self.entries.get(token)
        };
        hit.copied().unwrap_or_default()
    }

    pub fn contains_word(&self, word: &str) -> bool {
        self.entries.contains_key(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, LabelSet)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Words carrying `label`, unordered.
    pub fn words_with(&self, label: AffectLabel) -> impl Iterator<Item = &str> {
        self.entries
            .iter()
            .filter(move |(_, v)| v.contains(label))
            .map(|(k, _)| k.as_str())
    }

    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut flags: HashMap<(String, AffectLabel), bool> = HashMap::new();
        let mut lex = WordLexicon::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.strip_suffix('\r').unwrap_or(raw);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [word, label, flag] = fields[..] else {
                return Err(LexiconError::Parse {
                    line: line_no,
                    message: format!("expected 3 tab-separated fields, found {}", fields.len()),
                });
            };
            let word = word.trim();
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(LexiconError::Parse {
                    line: line_no,
                    message: format!("invalid word {word:?}"),
                });
            }
            let label: AffectLabel = label.trim().parse().map_err(|source| {
                LexiconError::UnknownLabel {
                    line: line_no,
                    source,
                }
            })?;
            let flag = match flag.trim() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(LexiconError::Parse {
                        line: line_no,
                        message: format!("flag must be 0 or 1, found {other:?}"),
                    })
                }
            };
            let word = word.to_lowercase();
            if let Some(prev) = flags.insert((word.clone(), label), flag) {
                if prev != flag {
                    return Err(LexiconError::Conflict {
                        line: line_no,
                        word,
                        label,
                    });
                }
            }
            let slot = lex.entries.entry(word).or_default();
            if flag {
                slot.insert(label);
            }
        }
        Ok(lex)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Header line, then ten explicit-flag lines per word; words ascending,
    /// labels in canonical order.
    pub fn to_tsv(&self) -> String {
        let mut words: Vec<&String> = self.entries.keys().collect();
        words.sort();
        let mut out = String::with_capacity(16 + words.len() * 10 * 16);
        out.push_str(LEXICON_HEADER);
        out.push('\n');
        for word in words {
            let labels = self.entries[word];
            for label in AffectLabel::ALL {
                out.push_str(word);
                out.push('\t');
                out.push_str(label.as_str());
                out.push('\t');
                out.push(if labels.contains(label) { '1' } else { '0' });
                out.push('\n');
            }
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), LexiconError> {
        let path = path.as_ref();
        fs::write(path, self.to_tsv()).map_err(|source| LexiconError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

impl FromIterator<(String, LabelSet)> for WordLexicon {
    fn from_iter<I: IntoIterator<Item = (String, LabelSet)>>(iter: I) -> Self {
        let mut lex = WordLexicon::new();
        for (w, l) in iter {
            lex.insert(&w, l);
        }
        lex
    }
}
