//! Two-corpus comparison: affect profiles of both sides, their difference,
//! and per-emotion salience rankings of the first side against the second.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::lexicon::{AffectLabel, WordLexicon};
use crate::salience::{salience_ranking, CorpusStats, SalienceEntry, SalienceError};
use crate::scalar::Scalar;
use crate::text::{diff, profile, raw_tokens, AffectCounts, AffectProfile, DiffProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("{0} corpus is empty")]
    EmptyCorpus(&'static str),
    #[error(transparent)]
    Salience(#[from] SalienceError),
}

/// Affect counts and term statistics of one corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusSummary {
    pub documents: usize,
    pub counts: AffectCounts,
    pub stats: CorpusStats,
}

impl CorpusSummary {
    /// Adds one document in a single tokenizing pass.
    pub fn add_text(&mut self, text: &str, lex: &WordLexicon) {
        self.documents += 1;
        for t in raw_tokens(text) {
            if t.chars().any(char::is_uppercase) {
                let t = t.to_lowercase();
                self.stats.add_token(&t);
                self.counts.add_token(lex, &t);
            } else {
                self.stats.add_token(t);
                self.counts.add_token(lex, t);
            }
        }
    }

    pub fn merge(mut self, other: CorpusSummary) -> Self {
        self.documents += other.documents;
        self.counts += other.counts;
        self.stats.merge(&other.stats);
        self
    }

    /// Per-document work runs in parallel; all merges are integer sums, so
    /// the result does not depend on scheduling.
    pub fn from_texts<'a, I>(texts: I, lex: &WordLexicon) -> Self
    where
        I: IntoParallelIterator<Item = &'a str>,
    {
        texts
            .into_par_iter()
            .fold(CorpusSummary::default, |mut acc, t| {
                acc.add_text(t, lex);
                acc
            })
            .reduce(CorpusSummary::default, CorpusSummary::merge)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison<S> {
    pub a: AffectProfile<S>,
    pub b: AffectProfile<S>,
    /// `None` when either side has no emotion words.
    pub diff: Option<DiffProfile<S>>,
    pub clouds: BTreeMap<AffectLabel, Vec<SalienceEntry<S>>>,
}

pub fn compare<S: Scalar>(
    a: &CorpusSummary,
    b: &CorpusSummary,
    lex: &WordLexicon,
    emotions: &[AffectLabel],
    top_n: usize,
) -> Result<Comparison<S>, AnalysisError> {
    if a.stats.total_tokens() == 0 {
        return Err(AnalysisError::EmptyCorpus("first"));
    }
    if b.stats.total_tokens() == 0 {
        return Err(AnalysisError::EmptyCorpus("second"));
    }
    let pa = profile::<S>(&a.counts);
    let pb = profile::<S>(&b.counts);
    let mut clouds = BTreeMap::new();
    for e in emotions {
        clouds.insert(*e, salience_ranking(*e, &a.stats, &b.stats, lex, top_n)?);
    }
    Ok(Comparison {
        diff: diff(&pa, &pb).ok(),
        a: pa,
        b: pb,
        clouds,
    })
}
