use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use mailmood_core::analysis::{compare, CorpusSummary};
use mailmood_core::mail::{
    apply_roster, length_filter, parse_mailbox, Gender, GenderPairCorpora, MailMessage, Roster, GENDER_PAIRS,
};
use mailmood_core::report::{FigureData, PolarityBar, TimelineEntry};
use mailmood_core::tracking::PersonalIndex;
use mailmood_core::{AffectLabel, Comparison, WordLexicon};

use crate::compare::write_comparison;
use crate::config::Config;
use crate::figures::FigureWriter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Group {
    Pair(Gender, Gender),
    Sender(Gender),
    Recipient(Gender),
}

impl Group {
    pub fn name(self) -> String {
        let g = |g: Gender| if g == Gender::Female { "women" } else { "men" };
        match self {
            Group::Pair(s, r) => format!("{}-to-{}", g(s), g(r)),
            Group::Sender(s) => g(s).to_string(),
            Group::Recipient(r) => format!("to-{}", g(r)),
        }
    }

    fn messages<'a>(self, c: &'a GenderPairCorpora) -> Box<dyn Iterator<Item = &'a MailMessage> + 'a> {
        match self {
            Group::Pair(s, r) => Box::new(c.pair(s, r)),
            Group::Sender(s) => Box::new(c.by_sender(s)),
            Group::Recipient(r) => Box::new(c.to_recipient(r)),
        }
    }

    pub fn len(self, c: &GenderPairCorpora) -> usize {
        match self {
            Group::Pair(s, r) => c.pair_len(s, r),
            Group::Sender(s) => c.by_sender_len(s),
            Group::Recipient(r) => c.to_recipient_len(r),
        }
    }
}

use Gender::{Female as F, Male as M};

/// Minuend and subtrahend of each gender comparison, first minus second.
pub const COMPARISONS: [(Group, Group); 5] = [
    (Group::Sender(F), Group::Sender(M)),
    (Group::Recipient(F), Group::Recipient(M)),
    (Group::Pair(M, F), Group::Pair(M, M)),
    (Group::Pair(F, F), Group::Pair(F, M)),
    (Group::Pair(M, M), Group::Pair(F, F)),
];

pub fn comparison_name(a: Group, b: Group) -> String {
    format!("{}-vs-{}", a.name(), b.name())
}

pub fn load(path: &Path) -> Result<Vec<MailMessage>> {
    let parsed = parse_mailbox(path).with_context(|| format!("reading mailbox {}", path.display()))?;
    if parsed.malformed > 0 {
        eprintln!("warning: skipped {} malformed messages", parsed.malformed);
    }
    if parsed.missing_date > 0 {
        eprintln!("warning: {} messages without a Date header", parsed.missing_date);
    }
    Ok(parsed.messages)
}

/// Gender-pair grouping of the length-filtered mailbox.
pub fn group(messages: Vec<MailMessage>, roster: &Roster, cfg: &Config) -> GenderPairCorpora {
    let parsed = messages.len();
    let kept = length_filter(messages, cfg.length_bounds);
    println!(
        "messages: {parsed} parsed, {} within {}..={} words",
        kept.len(),
        cfg.length_bounds.min_words,
        cfg.length_bounds.max_words
    );
    let corpora = apply_roster(kept, roster);
    let dropped = corpora.dropped_untagged_sender + corpora.dropped_no_tagged_recipient;
    if dropped > 0 {
        eprintln!(
            "warning: dropped {dropped} messages with untagged parties ({} untagged sender, {} no tagged recipient)",
            corpora.dropped_untagged_sender, corpora.dropped_no_tagged_recipient
        );
    }
    corpora
}

pub fn gender_pair_comparisons(
    corpora: &GenderPairCorpora,
    lex: &WordLexicon,
    top_n: usize,
) -> Vec<(Group, Group, Result<Comparison>)> {
    let mut summaries: BTreeMap<Group, CorpusSummary> = BTreeMap::new();
    let pairs_and_senders = GENDER_PAIRS
        .iter()
        .map(|&(s, r)| Group::Pair(s, r))
        .chain([Group::Sender(F), Group::Sender(M)]);
    for g in pairs_and_senders {
        let bodies: Vec<&str> = g.messages(corpora).map(|m| m.body.as_str()).collect();
        summaries.insert(g, CorpusSummary::from_texts(bodies, lex));
    }
    // mail to a gender is the union of both pair corpora with that recipient
    for r in [F, M] {
        let merged = summaries[&Group::Pair(F, r)].clone().merge(summaries[&Group::Pair(M, r)].clone());
        summaries.insert(Group::Recipient(r), merged);
    }
    COMPARISONS
        .iter()
        .map(|&(a, b)| {
            let c = compare(&summaries[&a], &summaries[&b], lex, &AffectLabel::EMOTIONS, top_n)
                .with_context(|| comparison_name(a, b));
            (a, b, c)
        })
        .collect()
}

pub fn gender_pairs(cfg: &Config, mbox: &Path, roster: Option<&Path>) -> Result<()> {
    let Some(roster) = roster else {
        bail!("gender-pairs needs --roster");
    };
    let roster = Roster::load(roster).with_context(|| format!("loading roster {}", roster.display()))?;
    let lex = cfg.lexicon()?;
    let palette = cfg.palette()?;
    let corpora = group(load(mbox)?, &roster, cfg);

    println!("{:<18}{:>8}", "group", "size");
    for (s, r) in GENDER_PAIRS {
        println!("{:<18}{:>8}", Group::Pair(s, r).name(), corpora.pair_len(s, r));
    }
    for g in [F, M] {
        println!("{:<18}{:>8}", format!("by-{}", Group::Sender(g).name()), corpora.by_sender_len(g));
    }
    for g in [F, M] {
        println!("{:<18}{:>8}", Group::Recipient(g).name(), corpora.to_recipient_len(g));
    }

    let mut w = FigureWriter::new(&cfg.output_dir, "mailbox", palette)?;
    let mut failed = Vec::new();
    for (a, b, c) in gender_pair_comparisons(&corpora, &lex, cfg.top_n) {
        let name = comparison_name(a, b);
        match c {
            Ok(c) => {
                if c.diff.is_none() {
                    failed.push(name.clone());
                }
                write_comparison(&mut w, Some(&name), &a.name(), &b.name(), &c, false)?;
                print_deltas(&name, &c);
            }
            Err(e) => {
                eprintln!("warning: {e:#}; skipped");
                failed.push(name);
            }
        }
    }
    println!("{} files written to {}", w.written().len(), cfg.output_dir.display());
    if !failed.is_empty() {
        bail!("incomplete output for {}", failed.join(", "));
    }
    Ok(())
}

fn print_deltas(name: &str, c: &Comparison) {
    let Some(d) = &c.diff else { return };
    let cells: Vec<String> = AffectLabel::EMOTIONS
        .iter()
        .map(|l| format!("{} {:+.2}", l.as_str(), d.delta(*l)))
        .collect();
    println!("{name}: {}", cells.join(", "));
}

pub fn person(cfg: &Config, mbox: &Path, address: &str, peer: Option<&str>) -> Result<()> {
    let lex = cfg.lexicon()?;
    let palette = cfg.palette()?;
    let messages = load(mbox)?;
    let index = PersonalIndex::build(&messages, address, &lex);
    if !index.is_known(address.trim()) {
        bail!(
            "address {address} does not occur in {}; did you mean: {}",
            mbox.display(),
            index.suggest(address).join(", ")
        );
    }
    let peers: Vec<String> = match peer {
        Some(p) => {
            let s = index.correspondent(p).with_context(|| {
                format!("did you mean: {}", index.suggest(p).join(", "))
            })?;
            vec![s.peer_address]
        }
        None => index.summaries().iter().map(|s| s.peer_address.clone()).collect(),
    };

    let mut w = FigureWriter::new(&cfg.output_dir, "mailbox", palette)?;
    let bars: Vec<PolarityBar> = index
        .summaries()
        .iter()
        .map(|s| PolarityBar {
            label: s.peer_address.clone(),
            positive: s.polarity_pct[&AffectLabel::Positive],
            negative: s.polarity_pct[&AffectLabel::Negative],
        })
        .collect();
    w.write(&[], format!("Emails sent by {}", index.owner()), FigureData::PolarityBars(bars))?;

    println!(
        "{:<32}{:>6}{:>6}{:>10}{:>10}",
        "correspondent", "sent", "recv", "positive", "negative"
    );
    for s in index.summaries() {
        println!(
            "{:<32}{:>6}{:>6}{:>10.2}{:>10.2}",
            s.peer_address,
            s.sent_count,
            s.received_count,
            s.polarity_pct[&AffectLabel::Positive],
            s.polarity_pct[&AffectLabel::Negative]
        );
    }

    for p in &peers {
        let s = index.correspondent(p)?;
        w.write(
            &[p],
            format!("Emails sent by {} to {p} minus emails sent by {} to all", index.owner(), index.owner()),
            FigureData::DiffBar(s.emotion_diff.clone()),
        )?;
        let points: Vec<TimelineEntry> = index
            .timeline(p)?
            .into_iter()
            .map(|t| TimelineEntry {
                label: t.message_id,
                timestamp: t.timestamp,
                positive: t.polarity_pct[&AffectLabel::Positive],
                negative: t.polarity_pct[&AffectLabel::Negative],
                empty: t.empty,
            })
            .collect();
        w.write(&[p], format!("Emails sent by {} to {p}", index.owner()), FigureData::Timeline(points))?;
    }
    println!("{} files written to {}", w.written().len(), cfg.output_dir.display());
    Ok(())
}
