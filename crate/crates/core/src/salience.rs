//! Relative salience of a word across two corpora, and emotion-restricted
//! salience rankings used for word clouds.
//!
//! `salience(w | A, B) = f_A(w) / N_A - f_B(w) / N_B`, where `f` is the
//! occurrence count of `w` and `N` the total token count of the corpus.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{AffectLabel, WordLexicon};
use crate::scalar::Scalar;
use crate::text::TokenStream;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SalienceError {
    #[error("{0} corpus has no tokens")]
    EmptyCorpus(&'static str),
    #[error("top_n must be at least 1")]
    ZeroTopN,
}

/// Term frequencies over all tokens of a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    term_freq: HashMap<String, u64>,
    total_tokens: u64,
}

impl CorpusStats {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_token(&mut self, token: &str) {
        self.total_tokens += 1;
        match self.term_freq.get_mut(token) {
            Some(n) => *n += 1,
            None => {
                self.term_freq.insert(token.to_string(), 1);
            }
        }
    }

    pub fn add_stream(&mut self, ts: &TokenStream) {
        for t in ts.iter() {
            self.add_token(t);
        }
    }

    /// Associative and commutative.
    pub fn merge(&mut self, other: &CorpusStats) {
        self.total_tokens += other.total_tokens;
        for (w, n) in &other.term_freq {
            *self.term_freq.entry(w.clone()).or_insert(0) += n;
        }
    }

    pub fn freq(&self, word: &str) -> u64 {
        self.term_freq.get(word).copied().unwrap_or(0)
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = (&str, u64)> {
        self.term_freq.iter().map(|(w, n)| (w.as_str(), *n))
    }

    pub fn distinct_words(&self) -> usize {
        self.term_freq.len()
    }
}

pub fn build_stats(docs: &[TokenStream]) -> CorpusStats {
    let mut stats = CorpusStats::new();
    for d in docs {
        stats.add_stream(d);
    }
    stats
}

/// Rate of `word` in `a` minus its rate in `b`.
pub fn relative_salience<S: Scalar>(word: &str, a: &CorpusStats, b: &CorpusStats) -> Result<S, SalienceError> {
    if a.total_tokens == 0 {
        return Err(SalienceError::EmptyCorpus("first"));
    }
    if b.total_tokens == 0 {
        return Err(SalienceError::EmptyCorpus("second"));
    }
    let rate = |s: &CorpusStats| S::from_count(s.freq(word)) / S::from_count(s.total_tokens);
    Ok(rate(a) - rate(b))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SalienceEntry<S> {
    pub word: String,
    pub salience: S,
    pub emotion: AffectLabel,
}

/// Words associated with `emotion` that are more frequent (by rate) in `a`
/// than in `b`, by descending salience, ties alphabetical, at most `top_n`.
pub fn salience_ranking<S: Scalar>(
    emotion: AffectLabel,
    a: &CorpusStats,
    b: &CorpusStats,
    lex: &WordLexicon,
    top_n: usize,
) -> Result<Vec<SalienceEntry<S>>, SalienceError> {
    if top_n == 0 {
        return Err(SalienceError::ZeroTopN);
    }
    // Positive salience needs f_A > 0, so A's vocabulary covers every candidate.
    let mut entries = Vec::new();
    for (word, _) in a.vocabulary() {
        if !lex.lookup(word).contains(emotion) {
            continue;
        }
        let salience: S = relative_salience(word, a, b)?;
        if salience > S::zero() {
            entries.push(SalienceEntry {
                word: word.to_string(),
                salience,
                emotion,
            });
        }
    }
    // Empty A still has to fail even when no candidate exists.
    if entries.is_empty() {
        relative_salience::<S>("", a, b)?;
    }
    entries.sort_by(|x, y| {
        y.salience
            .partial_cmp(&x.salience)
            .unwrap_or(Ordering::Equal)
            .then_with(|| x.word.cmp(&y.word))
    });
    entries.truncate(top_n);
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::LabelSet;
    use crate::text::tokenize;
    use num_rational::Rational64;
    use proptest::prelude::*;

    fn stats(text: &str) -> CorpusStats {
        build_stats(&[tokenize(text)])
    }

    #[test]
    fn absent_word_has_zero_salience() {
        let a = stats("x y");
        let b = stats("z");
        assert_eq!(relative_salience::<f64>("w", &a, &b).unwrap(), 0.0);
    }

    #[test]
    fn direct_formula() {
        let mut a = stats(&"x ".repeat(98));
        a.add_token("w");
        a.add_token("w");
        let mut b = stats(&"y ".repeat(199));
        b.add_token("w");
        assert_eq!((a.total_tokens(), b.total_tokens()), (100, 200));
        assert_eq!(
            relative_salience::<Rational64>("w", &a, &b).unwrap(),
            Rational64::new(3, 200)
        );
        assert!((relative_salience::<f64>("w", &a, &b).unwrap() - 0.015).abs() < 1e-15);
    }

    #[test]
    fn empty_corpus_is_error() {
        let a = stats("x");
        let e = CorpusStats::new();
        assert_eq!(relative_salience::<f64>("x", &a, &e), Err(SalienceError::EmptyCorpus("second")));
        assert_eq!(relative_salience::<f64>("x", &e, &a), Err(SalienceError::EmptyCorpus("first")));
        let lex = WordLexicon::new();
        assert!(salience_ranking::<f64>(AffectLabel::Joy, &e, &a, &lex, 5).is_err());
    }

    #[test]
    fn build_stats_examples() {
        let s = build_stats(&[tokenize("a b a")]);
        assert_eq!((s.freq("a"), s.freq("b"), s.total_tokens()), (2, 1, 3));
        assert_eq!(build_stats(&[]), CorpusStats::new());
    }

    #[test]
    fn identical_corpora_rank_nothing() {
        let lex: WordLexicon = [("smile".to_string(), LabelSet::from([AffectLabel::Joy]))].into_iter().collect();
        let a = stats("smile smile now");
        assert!(salience_ranking::<f64>(AffectLabel::Joy, &a, &a, &lex, 10).unwrap().is_empty());
        assert_eq!(salience_ranking::<f64>(AffectLabel::Joy, &a, &a, &lex, 0), Err(SalienceError::ZeroTopN));
    }

    #[test]
    fn ranking_orders_by_salience_then_word() {
        let lex: WordLexicon = ["b", "a", "c", "d"]
            .iter()
            .map(|w| (w.to_string(), LabelSet::from([AffectLabel::Joy])))
            .collect();
        let a = stats("a b c c c d x x x x");
        let b = stats("d d d d d y");
        let r = salience_ranking::<f64>(AffectLabel::Joy, &a, &b, &lex, 10).unwrap();
        let words: Vec<_> = r.iter().map(|e| e.word.as_str()).collect();
        assert_eq!(words, ["c", "a", "b"]);
        let r = salience_ranking::<f64>(AffectLabel::Joy, &a, &b, &lex, 2).unwrap();
        assert_eq!(r.len(), 2);
    }

    fn arb_stats() -> impl Strategy<Value = CorpusStats> {
        proptest::collection::vec(0usize..6, 1..60).prop_map(|ix| {
            let mut s = CorpusStats::new();
            for i in ix {
                s.add_token(["w", "x", "y", "z", "v", "u"][i]);
            }
            s
        })
    }

    proptest! {
        #[test]
        fn antisymmetric_and_bounded(a in arb_stats(), b in arb_stats(), w in "[uvwxyz]") {
            let ab = relative_salience::<f64>(&w, &a, &b).unwrap();
            let ba = relative_salience::<f64>(&w, &b, &a).unwrap();
            prop_assert_eq!(ab, -ba);
            prop_assert!((-1.0..=1.0).contains(&ab));
        }

        #[test]
        fn doubling_a_corpus_keeps_salience(a in arb_stats(), b in arb_stats(), w in "[uvwxyz]") {
            let mut bb = b.clone();
            bb.merge(&b);
            prop_assert_eq!(
                relative_salience::<Rational64>(&w, &a, &b).unwrap(),
                relative_salience::<Rational64>(&w, &a, &bb).unwrap()
            );
        }

        #[test]
        fn merged_stats_equal_concatenation(docs in proptest::collection::vec("[a-c ]{0,12}", 0..6)) {
            let streams: Vec<_> = docs.iter().map(|d| tokenize(d)).collect();
            let mut merged = CorpusStats::new();
            for s in &streams {
                merged.merge(&build_stats(std::slice::from_ref(s)));
            }
            prop_assert_eq!(&merged, &build_stats(&[tokenize(&docs.join(" "))]));
            let mut rev = streams.clone();
            rev.reverse();
            prop_assert_eq!(build_stats(&rev), merged);
        }
    }
}
