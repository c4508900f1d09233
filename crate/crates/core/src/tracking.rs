//! Per-correspondent emotion tracking for one mailbox owner.
//!
//! Everything here is computed once from a snapshot of the mailbox; both the
//! CLI person mode and the dashboard API read from the same [`PersonalIndex`],
//! so their numbers agree exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use chrono::{DateTime, FixedOffset};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::{AffectLabel, WordLexicon};
use crate::mail::{Gender, MailMessage};
use crate::text::{count_text, diff, profile, AffectCounts, AffectProfile, DiffProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrackingError {
    #[error("address `{address}` does not occur in the mailbox")]
    UnknownAddress { address: String, suggestions: Vec<String> },
}

/// What the owner sent to (and received from) one peer.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondentSummary {
    pub peer_address: String,
    pub sent_count: usize,
    pub received_count: usize,
    /// `positive` and `negative` percentages over sent mail.
    pub polarity_pct: BTreeMap<AffectLabel, f64>,
    pub polarity_empty: bool,
    /// Sent-to-peer emotion percentages minus all-sent percentages; eight keys.
    pub emotion_diff: BTreeMap<AffectLabel, f64>,
    /// True when either side has no emotion words (the diff is then all zero).
    pub diff_empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimelinePoint {
    pub message_id: String,
    pub timestamp: DateTime<FixedOffset>,
    pub polarity_pct: BTreeMap<AffectLabel, f64>,
    pub emotion_pct: BTreeMap<AffectLabel, f64>,
    /// No emotion and no polarity words in the message.
    pub empty: bool,
}

/// Aggregate counts for one bucket of the anonymous export.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketCounts {
    pub message_count: u64,
    pub total_tokens: u64,
    pub labels: LabelCounts,
}

/// Label → count object with exactly the ten label keys.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelCounts {
    pub anger: u64,
    pub anticipation: u64,
    pub disgust: u64,
    pub fear: u64,
    pub joy: u64,
    pub negative: u64,
    pub positive: u64,
    pub sadness: u64,
    pub surprise: u64,
    pub trust: u64,
}

impl From<&AffectCounts> for LabelCounts {
    fn from(c: &AffectCounts) -> Self {
        use AffectLabel::*;
        LabelCounts {
            anger: c.get(Anger),
            anticipation: c.get(Anticipation),
            disgust: c.get(Disgust),
            fear: c.get(Fear),
            joy: c.get(Joy),
            negative: c.get(Negative),
            positive: c.get(Positive),
            sadness: c.get(Sadness),
            surprise: c.get(Surprise),
            trust: c.get(Trust),
        }
    }
}

fn bucket(message_count: usize, counts: &AffectCounts) -> BucketCounts {
    BucketCounts {
        message_count: message_count as u64,
        total_tokens: counts.total_tokens,
        labels: counts.into(),
    }
}

/// Optional owner demographics passed through the anonymous export.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Demographics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gender: Option<Gender>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub age: Option<u32>,
}

pub const EXPORT_SCHEMA: &str = "mailmood.anonymous.v1";

/// Frequencies only: no text, names, addresses or message ids.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnonymousExport {
    pub schema: String,
    #[serde(flatten)]
    pub demographics: Demographics,
    pub buckets: ExportBuckets,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExportBuckets {
    pub sent: BucketCounts,
    pub received: BucketCounts,
    pub all: BucketCounts,
}

#[derive(Debug, Clone)]
pub struct PersonalIndex {
    owner: String,
    summaries: Vec<CorrespondentSummary>,
    timelines: HashMap<String, Vec<TimelinePoint>>,
    known: BTreeSet<String>,
    sent: BucketCounts,
    received: BucketCounts,
    all: BucketCounts,
}

fn polarity_map(p: &AffectProfile<f64>) -> BTreeMap<AffectLabel, f64> {
    p.polarity_pct.clone()
}

impl PersonalIndex {
    /// `owner` is the mailbox holder; addresses are compared lowercased.
    pub fn build(messages: &[MailMessage], owner: &str, lex: &WordLexicon) -> Self {
        let owner = owner.trim().to_lowercase();
        let counts: Vec<AffectCounts> = messages.par_iter().map(|m| count_text(&m.body, lex)).collect();

        let mut known = BTreeSet::new();
        let mut all = AffectCounts::default();
        let mut sent_total = AffectCounts::default();
        let mut sent_n = 0usize;
        let mut recv_total = AffectCounts::default();
        let mut recv_n = 0usize;
        let mut per_peer_sent: BTreeMap<&str, (usize, AffectCounts, Vec<usize>)> = BTreeMap::new();
        let mut per_peer_recv: BTreeMap<&str, usize> = BTreeMap::new();

        for (i, (m, c)) in messages.iter().zip(&counts).enumerate() {
            known.insert(m.sender.clone());
            known.extend(m.recipients.iter().cloned());
            all += *c;
            if m.sender == owner {
                sent_n += 1;
                sent_total += *c;
                let peers: BTreeSet<&str> = m.recipients.iter().map(String::as_str).filter(|r| *r != owner).collect();
                for p in peers {
                    let e = per_peer_sent.entry(p).or_default();
                    e.0 += 1;
                    e.1 += *c;
                    e.2.push(i);
                }
            } else if m.recipients.iter().any(|r| *r == owner) {
                recv_n += 1;
                recv_total += *c;
                *per_peer_recv.entry(m.sender.as_str()).or_default() += 1;
            }
        }

        let baseline = profile::<f64>(&sent_total);
        let mut summaries = Vec::new();
        let mut timelines = HashMap::new();
        for (peer, (n, c, ix)) in &per_peer_sent {
            let p = profile::<f64>(c);
            let (emotion_diff, diff_empty) = match diff(&p, &baseline) {
                Ok(d) => (d.per_emotion_delta, false),
                Err(_) => (DiffProfile::<f64>::zero().per_emotion_delta, true),
            };
            summaries.push(CorrespondentSummary {
                peer_address: peer.to_string(),
                sent_count: *n,
                received_count: per_peer_recv.get(peer).copied().unwrap_or(0),
                polarity_pct: polarity_map(&p),
                polarity_empty: p.polarity_empty,
                emotion_diff,
                diff_empty,
            });
            let mut points: Vec<TimelinePoint> = ix
                .iter()
                .map(|&i| {
                    let p = profile::<f64>(&counts[i]);
                    TimelinePoint {
                        message_id: messages[i].message_id.clone(),
                        timestamp: messages[i].timestamp,
                        polarity_pct: polarity_map(&p),
                        emotion_pct: p.emotion_pct.clone(),
                        empty: p.is_empty(),
                    }
                })
                .collect();
            // stable: equal timestamps keep mailbox order
            points.sort_by_key(|p| p.timestamp);
            timelines.insert(peer.to_string(), points);
        }
        summaries.sort_by(|a, b| {
            b.sent_count
                .cmp(&a.sent_count)
                .then_with(|| a.peer_address.cmp(&b.peer_address))
        });

        PersonalIndex {
            owner,
            summaries,
            timelines,
            known,
            sent: bucket(sent_n, &sent_total),
            received: bucket(recv_n, &recv_total),
            all: bucket(messages.len(), &all),
        }
    }

    pub fn owner(&self) -> &str {
        &self.owner
    }

    /// One entry per peer the owner sent mail to, by sent count descending.
    pub fn summaries(&self) -> &[CorrespondentSummary] {
        &self.summaries
    }

    pub fn is_known(&self, address: &str) -> bool {
        self.known.contains(&address.to_lowercase())
    }

    /// Summary for a known address; an address that occurs in the mailbox but
    /// never received mail from the owner gets zero counts and an empty diff.
    pub fn correspondent(&self, address: &str) -> Result<CorrespondentSummary, TrackingError> {
        let address = address.trim().to_lowercase();
        if let Some(s) = self.summaries.iter().find(|s| s.peer_address == address) {
            return Ok(s.clone());
        }
        self.check_known(&address)?;
        Ok(CorrespondentSummary {
            received_count: 0,
            sent_count: 0,
            polarity_pct: AffectLabel::POLARITIES.iter().map(|l| (*l, 0.0)).collect(),
            polarity_empty: true,
            emotion_diff: DiffProfile::<f64>::zero().per_emotion_delta,
            diff_empty: true,
            peer_address: address,
        })
    }

    pub fn timeline(&self, address: &str) -> Result<Vec<TimelinePoint>, TrackingError> {
        let address = address.trim().to_lowercase();
        if let Some(t) = self.timelines.get(&address) {
            return Ok(t.clone());
        }
        self.check_known(&address)?;
        Ok(Vec::new())
    }

    fn check_known(&self, address: &str) -> Result<(), TrackingError> {
        if self.known.contains(address) {
            Ok(())
        } else {
            Err(TrackingError::UnknownAddress {
                address: address.to_string(),
                suggestions: self.suggest(address),
            })
        }
    }

    /// Up to five known addresses closest to `address` by shared prefix of
    /// the local part, then alphabetically.
    pub fn suggest(&self, address: &str) -> Vec<String> {
        suggest_addresses(address, self.known.iter().map(String::as_str))
    }

    pub fn anonymous_export(&self, demographics: Demographics) -> AnonymousExport {
        AnonymousExport {
            schema: EXPORT_SCHEMA.to_string(),
            demographics,
            buckets: ExportBuckets {
                sent: self.sent,
                received: self.received,
                all: self.all,
            },
        }
    }
}

pub fn suggest_addresses<'a>(address: &str, known: impl Iterator<Item = &'a str>) -> Vec<String> {
    let local = |a: &str| a.split('@').next().unwrap_or("").to_lowercase();
    let q = local(address);
    let mut scored: Vec<(usize, &str)> = known
        .map(|k| {
            let shared = local(k).chars().zip(q.chars()).take_while(|(a, b)| a == b).count();
            (shared, k)
        })
        .filter(|(s, _)| *s > 0)
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    scored.into_iter().take(5).map(|(_, k)| k.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("privacy violation at {path}: {reason}")]
pub struct PrivacyViolation {
    pub path: String,
    pub reason: String,
}

/// Deny-list check for the anonymous export: only the known keys may occur,
/// every leaf must be a number except `schema` and `gender`, and no string
/// anywhere may contain `@`.
pub fn check_anonymous_export(value: &serde_json::Value) -> Result<(), PrivacyViolation> {
    use serde_json::Value;
    const LABEL_KEYS: [&str; 10] = [
        "anger", "anticipation", "disgust", "fear", "joy", "negative", "positive", "sadness", "surprise", "trust",
    ];
    fn fail(path: &str, reason: impl Into<String>) -> Result<(), PrivacyViolation> {
        Err(PrivacyViolation {
            path: path.to_string(),
            reason: reason.into(),
        })
    }
    fn numeric_object(v: &Value, path: &str, keys: &[&str]) -> Result<(), PrivacyViolation> {
        let Value::Object(map) = v else {
            return fail(path, "expected object");
        };
        for (k, v) in map {
            let p = format!("{path}.{k}");
            if !keys.contains(&k.as_str()) {
                return fail(&p, "unexpected key");
            }
            if !v.is_u64() {
                return fail(&p, "expected non-negative integer");
            }
        }
        Ok(())
    }

    let Value::Object(root) = value else {
        return fail("$", "expected object");
    };
    for (k, v) in root {
        let p = format!("$.{k}");
        match (k.as_str(), v) {
            ("schema", Value::String(s)) if s == EXPORT_SCHEMA => {}
            ("gender", Value::String(s)) if ["female", "male", "untagged"].contains(&s.as_str()) => {}
            ("age", v) if v.is_u64() => {}
            ("buckets", Value::Object(buckets)) => {
                for (name, b) in buckets {
                    let bp = format!("{p}.{name}");
                    if !["sent", "received", "all"].contains(&name.as_str()) {
                        return fail(&bp, "unexpected bucket");
                    }
                    let Value::Object(fields) = b else {
                        return fail(&bp, "expected object");
                    };
                    for (fk, fv) in fields {
                        let fp = format!("{bp}.{fk}");
                        match fk.as_str() {
                            "message_count" | "total_tokens" if fv.is_u64() => {}
                            "labels" => numeric_object(fv, &fp, &LABEL_KEYS)?,
                            _ => return fail(&fp, "unexpected field"),
                        }
                    }
                }
            }
            _ => return fail(&p, "unexpected key or value"),
        }
    }
    if value.to_string().contains('@') {
        return fail("$", "contains '@'");
    }
    Ok(())
}
