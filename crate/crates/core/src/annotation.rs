//! Sense lexicon construction from crowdsourced annotation sheets.
//!
//! Pipeline: frequency-based term selection, word-choice (Q1) question
//! generation, discarding sheets whose Q1 answer is wrong, per-label strict
//! majority vote, and sense-union collapse to a word-level lexicon.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{AffectLabel, LabelSet, LexiconError, SenseKey, SenseLexicon, VoteTally, WordLexicon};
use crate::scalar::Scalar;

/// Frequency threshold used when selecting terms for annotation.
pub const DEFAULT_FREQUENCY_THRESHOLD: u64 = 120_000;
pub const DEFAULT_MIN_VOTES: usize = 3;

#[derive(Debug, Error)]
pub enum AnnotationError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{file} line {line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },
    #[error("category `{category}`: {message}")]
    InvalidCategory { category: String, message: String },
    #[error("cannot build question for {sense}: {reason}")]
    Unsatisfiable { sense: SenseKey, reason: String },
    #[error("annotation by `{annotator}` refers to unknown sense {sense}")]
    UnknownSense { annotator: String, sense: SenseKey },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> AnnotationError + '_ {
    move |source| AnnotationError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A thesaurus category: a coarse sense shared by its member words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThesaurusCategory {
    category_id: String,
    members: Vec<String>,
}

impl ThesaurusCategory {
    pub fn new<S: AsRef<str>>(
        category_id: impl Into<String>,
        members: impl IntoIterator<Item = S>,
    ) -> Result<Self, AnnotationError> {
        let category_id = category_id.into();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for m in members {
            let w = m.as_ref().to_lowercase();
            if w.is_empty() || w.chars().any(char::is_whitespace) {
                return Err(AnnotationError::InvalidCategory {
                    category: category_id,
                    message: format!("invalid member {w:?}"),
                });
            }
            if !seen.insert(w.clone()) {
                return Err(AnnotationError::InvalidCategory {
                    category: category_id,
                    message: format!("duplicate member `{w}`"),
                });
            }
            out.push(w);
        }
        if out.is_empty() {
            return Err(AnnotationError::InvalidCategory {
                category: category_id,
                message: "no members".into(),
            });
        }
        Ok(ThesaurusCategory {
            category_id,
            members: out,
        })
    }

    pub fn id(&self) -> &str {
        &self.category_id
    }

    pub fn members(&self) -> &[String] {
        &self.members
    }

    pub fn contains(&self, word: &str) -> bool {
        self.members.iter().any(|m| m == word)
    }
}

/// Categories keyed by id.
#[derive(Debug, Clone, Default)]
pub struct Thesaurus {
    categories: BTreeMap<String, ThesaurusCategory>,
}

impl Thesaurus {
    pub fn new(categories: impl IntoIterator<Item = ThesaurusCategory>) -> Self {
        Thesaurus {
            categories: categories
                .into_iter()
                .map(|c| (c.category_id.clone(), c))
                .collect(),
        }
    }

    /// `category_id<TAB>word` per line; a category's members are the words in
    /// file order. Duplicate (category, word) lines are rejected.
    pub fn parse(text: &str) -> Result<Self, AnnotationError> {
        let mut grouped: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((cat, word)) = line.split_once('\t') else {
                return Err(AnnotationError::Parse {
                    file: "thesaurus".into(),
                    line: i + 1,
                    message: "expected `category<TAB>word`".into(),
                });
            };
            grouped
                .entry(cat.trim().to_string())
                .or_default()
                .push(word.trim().to_string());
        }
        let cats = grouped
            .into_iter()
            .map(|(id, members)| ThesaurusCategory::new(id, members))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Thesaurus::new(cats))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, AnnotationError> {
        let path = path.as_ref();
        Self::parse(&fs::read_to_string(path).map_err(io_err(path))?)
    }

    pub fn category(&self, id: &str) -> Option<&ThesaurusCategory> {
        self.categories.get(id)
    }

    /// Categories in ascending id order.
    pub fn categories(&self) -> impl Iterator<Item = &ThesaurusCategory> {
        self.categories.values()
    }
}

/// Corpus frequency table (`word<TAB>count` on disk).
#[derive(Debug, Clone, Default)]
pub struct FrequencyTable {
    counts: HashMap<String, u64>,
}

impl FrequencyTable {
    pub fn parse(text: &str) -> Result<Self, AnnotationError> {
        let mut counts = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let parsed = line
                .split_once('\t')
                .and_then(|(w, c)| Some((w.trim().to_lowercase(), c.trim().parse::<u64>().ok()?)));
            let Some((word, count)) = parsed else {
                return Err(AnnotationError::Parse {
                    file: "frequency".into(),
                    line: i + 1,
                    message: "expected `word<TAB>count`".into(),
                });
            };
            counts.insert(word, count);
        }
        Ok(FrequencyTable { counts })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, AnnotationError> {
        let path = path.as_ref();
        Self::parse(&fs::read_to_string(path).map_err(io_err(path))?)
    }

    pub fn get(&self, word: &str) -> u64 {
        self.counts.get(word).copied().unwrap_or(0)
    }
}

impl<S: Into<String>> FromIterator<(S, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (S, u64)>>(iter: I) -> Self {
        FrequencyTable {
            counts: iter.into_iter().map(|(w, c)| (w.into(), c)).collect(),
        }
    }
}

/// Every (word, category) pair whose word frequency is strictly above
/// `threshold`, ordered by category id then word.
pub fn select_terms(thesaurus: &Thesaurus, freq: &FrequencyTable, threshold: u64) -> Vec<SenseKey> {
    let mut keys = Vec::new();
    for cat in thesaurus.categories() {
        let mut words: Vec<&String> = cat.members.iter().filter(|w| freq.get(w) > threshold).collect();
        words.sort();
        keys.extend(
            words
                .into_iter()
                .map(|w| SenseKey::new(w, cat.category_id.clone()).expect("category members are valid words")),
        );
    }
    keys
}

/// Q1: "which word is closest in meaning to <target>?"
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceQuestion {
    pub target: SenseKey,
    pub correct: String,
    pub distractors: [String; 3],
}

impl ChoiceQuestion {
    /// The four options in a seed-dependent order, as shown to annotators.
    pub fn options(&self, seed: u64) -> [String; 4] {
        let mut opts = [
            self.correct.clone(),
            self.distractors[0].clone(),
            self.distractors[1].clone(),
            self.distractors[2].clone(),
        ];
        opts.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        opts
    }
}

/// Stable 64-bit FNV-1a, used to derive per-sense seeds.
fn fnv1a(bytes: impl IntoIterator<Item = u8>) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Seed for `sense` derived from a run-level seed; independent of the order
/// in which senses are processed.
pub fn sense_seed(base: u64, sense: &SenseKey) -> u64 {
    let key = sense
        .word()
        .bytes()
        .chain(std::iter::once(0))
        .chain(sense.sense_id().bytes());
    base ^ fnv1a(key)
}

/// Builds the word-choice question for `sense`. The near-synonym is drawn
/// from the sense's category, the three distractors uniformly without
/// replacement from words that do not occur in that category.
pub fn generate_question(
    sense: &SenseKey,
    thesaurus: &Thesaurus,
    seed: u64,
) -> Result<ChoiceQuestion, AnnotationError> {
    let unsat = |reason: &str| AnnotationError::Unsatisfiable {
        sense: sense.clone(),
        reason: reason.to_string(),
    };
    let category = thesaurus
        .category(sense.sense_id())
        .ok_or_else(|| unsat("category not in thesaurus"))?;
    let synonyms: Vec<&String> = category.members.iter().filter(|m| *m != sense.word()).collect();
    if synonyms.is_empty() {
        return Err(unsat("category has no near-synonym"));
    }
    let complement: Vec<&String> = thesaurus
        .categories()
        .filter(|c| c.category_id != category.category_id)
        .flat_map(|c| c.members.iter())
        .filter(|w| !category.contains(w))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if complement.len() < 3 {
        return Err(unsat("fewer than 3 words outside the category"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let correct = (*synonyms.choose(&mut rng).expect("non-empty")).clone();
    let picked: Vec<String> = complement
        .choose_multiple(&mut rng, 3)
        .map(|w| (*w).clone())
        .collect();
    Ok(ChoiceQuestion {
        target: sense.clone(),
        correct,
        distractors: [picked[0].clone(), picked[1].clone(), picked[2].clone()],
    })
}

/// Questions for every sense, each with its own derived seed.
pub fn generate_questions(
    senses: &[SenseKey],
    thesaurus: &Thesaurus,
    base_seed: u64,
) -> Result<BTreeMap<SenseKey, ChoiceQuestion>, AnnotationError> {
    senses
        .iter()
        .map(|s| Ok((s.clone(), generate_question(s, thesaurus, sense_seed(base_seed, s))?)))
        .collect()
}

/// One annotator's response sheet for one term sense.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawAnnotationRecord", into = "RawAnnotationRecord")]
pub struct RawAnnotation {
    pub annotator_id: String,
    pub sense: SenseKey,
    pub q1_choice: String,
    answers: LabelSet,
}

/// JSON-lines record layout.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnnotationRecord {
    annotator_id: String,
    sense: SenseKey,
    q1_choice: String,
    affect_answers: BTreeMap<AffectLabel, bool>,
}

impl TryFrom<RawAnnotationRecord> for RawAnnotation {
    type Error = String;

    fn try_from(r: RawAnnotationRecord) -> Result<Self, Self::Error> {
        if r.affect_answers.len() != AffectLabel::ALL.len() {
            let missing: Vec<&str> = AffectLabel::ALL
                .iter()
                .filter(|l| !r.affect_answers.contains_key(l))
                .map(|l| l.as_str())
                .collect();
            return Err(format!("missing affect answers: {}", missing.join(", ")));
        }
        Ok(RawAnnotation {
            annotator_id: r.annotator_id,
            sense: r.sense,
            q1_choice: r.q1_choice.to_lowercase(),
            answers: r.affect_answers.into_iter().filter(|(_, v)| *v).map(|(k, _)| k).collect(),
        })
    }
}

impl From<RawAnnotation> for RawAnnotationRecord {
    fn from(a: RawAnnotation) -> Self {
        RawAnnotationRecord {
            annotator_id: a.annotator_id,
            sense: a.sense,
            q1_choice: a.q1_choice,
            affect_answers: AffectLabel::ALL.iter().map(|l| (*l, a.answers.contains(*l))).collect(),
        }
    }
}

impl RawAnnotation {
    /// `yes` holds the labels answered "associated"; all others are "not associated".
    pub fn new(annotator_id: impl Into<String>, sense: SenseKey, q1_choice: &str, yes: LabelSet) -> Self {
        RawAnnotation {
            annotator_id: annotator_id.into(),
            sense,
            q1_choice: q1_choice.to_lowercase(),
            answers: yes,
        }
    }

    pub fn answer(&self, label: AffectLabel) -> bool {
        self.answers.contains(label)
    }

    pub fn yes_labels(&self) -> LabelSet {
        self.answers
    }
}

pub fn parse_annotations(text: &str) -> Result<Vec<RawAnnotation>, AnnotationError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| AnnotationError::Parse {
                file: "annotations".into(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn load_annotations(path: impl AsRef<Path>) -> Result<Vec<RawAnnotation>, AnnotationError> {
    let path = path.as_ref();
    parse_annotations(&fs::read_to_string(path).map_err(io_err(path))?)
}

pub fn write_annotations(annotations: &[RawAnnotation]) -> String {
    let mut out = String::new();
    for a in annotations {
        out.push_str(&serde_json::to_string(a).expect("annotation serializes"));
        out.push('\n');
    }
    out
}

pub fn parse_questions(text: &str) -> Result<BTreeMap<SenseKey, ChoiceQuestion>, AnnotationError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str::<ChoiceQuestion>(l)
                .map(|q| (q.target.clone(), q))
                .map_err(|e| AnnotationError::Parse {
                    file: "questions".into(),
                    line: i + 1,
                    message: e.to_string(),
                })
        })
        .collect()
}

pub fn write_questions(questions: &BTreeMap<SenseKey, ChoiceQuestion>) -> String {
    let mut out = String::new();
    for q in questions.values() {
        out.push_str(&serde_json::to_string(q).expect("question serializes"));
        out.push('\n');
    }
    out
}

/// Drops every sheet whose Q1 answer differs from the question's near-synonym.
/// Returns the kept sheets (input order preserved) and the discard count.
pub fn filter_gold(
    annotations: Vec<RawAnnotation>,
    questions: &BTreeMap<SenseKey, ChoiceQuestion>,
) -> Result<(Vec<RawAnnotation>, usize), AnnotationError> {
    let total = annotations.len();
    let mut kept = Vec::with_capacity(total);
    for a in annotations {
        let q = questions.get(&a.sense).ok_or_else(|| AnnotationError::UnknownSense {
            annotator: a.annotator_id.clone(),
            sense: a.sense.clone(),
        })?;
        if a.q1_choice == q.correct {
            kept.push(a);
        }
    }
    let discarded = total - kept.len();
    Ok((kept, discarded))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregationReport<S> {
    pub total_annotations: usize,
    pub discarded_q1: usize,
    /// Senses dropped for having fewer than `min_votes` valid sheets.
    pub excluded_senses: usize,
    /// Mean over the ten labels of the share of votes on the majority side.
    pub per_sense_agreement: BTreeMap<SenseKey, S>,
    /// Sense–label instances with exactly five valid votes.
    pub five_vote_instances: usize,
    pub full_agreement_fraction: S,
    pub four_of_five_fraction: S,
}

impl<S: Scalar> AggregationReport<S> {
    fn empty() -> Self {
        AggregationReport {
            total_annotations: 0,
            discarded_q1: 0,
            excluded_senses: 0,
            per_sense_agreement: BTreeMap::new(),
            five_vote_instances: 0,
            full_agreement_fraction: S::zero(),
            four_of_five_fraction: S::zero(),
        }
    }

    /// Share of input sheets discarded for a wrong Q1 answer.
    pub fn discard_fraction(&self) -> S {
        if self.total_annotations == 0 {
            S::zero()
        } else {
            S::from_count(self.discarded_q1 as u64) / S::from_count(self.total_annotations as u64)
        }
    }
}

/// Per (sense, label): associated iff yes-votes are a strict majority of the
/// sense's valid sheets. Senses with fewer than `min_votes` sheets are left
/// out of the lexicon and counted in `excluded_senses`.
pub fn majority_vote<S: Scalar>(valid: &[RawAnnotation], min_votes: usize) -> (SenseLexicon, AggregationReport<S>) {
    let min_votes = min_votes.max(1);
    let mut tallies: BTreeMap<&SenseKey, [VoteTally; 10]> = BTreeMap::new();
    for a in valid {
        let t = tallies.entry(&a.sense).or_default();
        for label in AffectLabel::ALL {
            let slot = &mut t[label.index()];
            slot.total += 1;
            if a.answer(label) {
                slot.yes += 1;
            }
        }
    }

    let mut report = AggregationReport::<S>::empty();
    report.total_annotations = valid.len();
    let mut unanimous = 0u64;
    let mut four_one = 0u64;
    let mut lexicon = SenseLexicon::new();

    for (sense, t) in tallies {
        let votes = t[0].total as usize;
        let mut majority_share = S::zero();
        for tally in &t {
            let side = tally.yes.max(tally.total - tally.yes);
            majority_share = majority_share + S::from_count(side.into()) / S::from_count(tally.total.into());
            if tally.total == 5 {
                report.five_vote_instances += 1;
                match side {
                    5 => unanimous += 1,
                    4 => four_one += 1,
                    _ => {}
                }
            }
        }
        report
            .per_sense_agreement
            .insert(sense.clone(), majority_share / S::from_count(AffectLabel::ALL.len() as u64));

        if votes < min_votes {
            report.excluded_senses += 1;
            continue;
        }
        let labels: LabelSet = AffectLabel::ALL
            .into_iter()
            .filter(|l| {
                let tally = t[l.index()];
                2 * tally.yes > tally.total
            })
            .collect();
        lexicon.insert(sense.clone(), labels, t);
    }

    if report.five_vote_instances > 0 {
        let n = S::from_count(report.five_vote_instances as u64);
        report.full_agreement_fraction = S::from_count(unanimous) / n;
        report.four_of_five_fraction = S::from_count(four_one) / n;
    }
    (lexicon, report)
}

/// Q1 filter, majority vote and sense collapse in one pass.
pub fn build_sense_lexicon<S: Scalar>(
    annotations: Vec<RawAnnotation>,
    questions: &BTreeMap<SenseKey, ChoiceQuestion>,
    min_votes: usize,
) -> Result<(SenseLexicon, AggregationReport<S>), AnnotationError> {
    let total = annotations.len();
    let (valid, discarded) = filter_gold(annotations, questions)?;
    let (senses, mut report) = majority_vote::<S>(&valid, min_votes);
    report.total_annotations = total;
    report.discarded_q1 = discarded;
    Ok((senses, report))
}

pub fn build_lexicon<S: Scalar>(
    annotations: Vec<RawAnnotation>,
    questions: &BTreeMap<SenseKey, ChoiceQuestion>,
    min_votes: usize,
) -> Result<(WordLexicon, AggregationReport<S>), AnnotationError> {
    let (senses, report) = build_sense_lexicon(annotations, questions, min_votes)?;
    Ok((senses.collapse_senses(), report))
}
