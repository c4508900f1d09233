//! Emotion-word analytics for letters and mailboxes.
//!
//! * [`lexicon`]: word–emotion association lexicons, file format and lookup.
//! * [`annotation`]: building a lexicon from crowdsourced annotation sheets.
//! * [`text`]: tokenization, affect counts and percentage profiles.
//! * [`salience`]: relative salience of words across two corpora.
//! * [`mail`]: letter directories, mbox parsing, gender tagging and grouping.
//! * [`analysis`]: two-corpus comparisons combining the above.
//! * [`tracking`]: per-correspondent views of one person's mailbox.
//! * [`report`]: SVG figures and their JSON form.
//!
//! Ratios are computed in a generic [`Scalar`]; the aliases below fix the
//! common instantiations.

pub mod analysis;
pub mod annotation;
pub mod lexicon;
pub mod mail;
pub mod report;
pub mod salience;
pub mod scalar;
pub mod text;
pub mod tracking;

pub use lexicon::{AffectLabel, LabelSet, SenseKey, SenseLexicon, WordLexicon};
pub use scalar::Scalar;
pub use text::{tokenize, AffectCounts, TokenStream};

pub use num_rational::Rational64;

pub type Profile = text::AffectProfile<f64>;
pub type Profile32 = text::AffectProfile<f32>;
pub type ExactProfile = text::AffectProfile<Rational64>;

pub type Diff = text::DiffProfile<f64>;
pub type Diff32 = text::DiffProfile<f32>;
pub type ExactDiff = text::DiffProfile<Rational64>;

pub type Salience = salience::SalienceEntry<f64>;
pub type ExactSalience = salience::SalienceEntry<Rational64>;

pub type Report = annotation::AggregationReport<f64>;
pub type ExactReport = annotation::AggregationReport<Rational64>;

pub type Comparison = analysis::Comparison<f64>;
pub type ExactComparison = analysis::Comparison<Rational64>;
