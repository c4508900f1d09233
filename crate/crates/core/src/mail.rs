//! Letter corpora and mailbox ingestion: mbox parsing, body-length filtering,
//! roster-based gender tagging and gender-pair grouping.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::{DateTime, FixedOffset, TimeZone, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::text::word_count;

#[derive(Debug, Error)]
pub enum MailError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: not valid UTF-8")]
    Encoding { path: PathBuf },
    #[error("no parseable messages ({malformed} malformed)")]
    NoMessages { malformed: usize },
    #[error("roster line {line}: {message}")]
    Roster { line: usize, message: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> MailError + '_ {
    move |source| MailError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusTag {
    Love,
    Hate,
    Suicide,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Letter {
    pub id: String,
    pub corpus_tag: CorpusTag,
    pub body: String,
    /// Set when the file had no non-whitespace content.
    pub empty: bool,
}

/// One letter per `.txt` file in `dir`, ordered by file name; the id is the
/// file stem. Other files are ignored.
pub fn load_letters(dir: impl AsRef<Path>, tag: CorpusTag) -> Result<Vec<Letter>, MailError> {
    let dir = dir.as_ref();
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err(dir))?
        .map(|e| e.map(|e| e.path()).map_err(io_err(dir)))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "txt"));
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let bytes = fs::read(&path).map_err(io_err(&path))?;
            let body = String::from_utf8(bytes).map_err(|_| MailError::Encoding { path: path.clone() })?;
            let id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            Ok(Letter {
                id,
                corpus_tag: tag,
                empty: body.trim().is_empty(),
                body,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MailMessage {
    pub message_id: String,
    pub sender: String,
    pub recipients: Vec<String>,
    pub timestamp: DateTime<FixedOffset>,
    pub body: String,
    pub body_word_count: u64,
}

impl MailMessage {
    pub fn new(
        message_id: impl Into<String>,
        sender: &str,
        recipients: impl IntoIterator<Item = impl AsRef<str>>,
        timestamp: DateTime<FixedOffset>,
        body: impl Into<String>,
    ) -> Self {
        let body = body.into();
        MailMessage {
            message_id: message_id.into(),
            sender: sender.trim().to_lowercase(),
            recipients: recipients
                .into_iter()
                .map(|r| r.as_ref().trim().to_lowercase())
                .collect(),
            timestamp,
            body_word_count: word_count(&body),
            body,
        }
    }
}

/// Stand-in timestamp for messages without a usable `Date` header.
pub fn epoch() -> DateTime<FixedOffset> {
    Utc.timestamp_opt(0, 0).unwrap().fixed_offset()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedMailbox {
    pub messages: Vec<MailMessage>,
    /// Messages skipped: no header/body separator, or a required header missing.
    pub malformed: usize,
    /// Messages given the epoch timestamp because `Date` was absent or unparseable.
    pub missing_date: usize,
}

/// Splits `Display Name <addr@host>` into (name, lowercase address).
pub fn split_address(raw: &str) -> (Option<String>, String) {
    let raw = raw.trim();
    if let (Some(open), Some(close)) = (raw.rfind('<'), raw.rfind('>')) {
        if open < close {
            let addr = raw[open + 1..close].trim().to_lowercase();
            let name = raw[..open].trim().trim_matches('"').trim();
            return ((!name.is_empty()).then(|| name.to_string()), addr);
        }
    }
    (None, raw.trim_matches('"').to_lowercase())
}

fn parse_date(raw: &str) -> Option<DateTime<FixedOffset>> {
    let raw = raw.trim();
    // drop a trailing zone comment such as "(PDT)"
    let raw = match raw.rfind('(') {
        Some(i) if raw.ends_with(')') => raw[..i].trim_end(),
        _ => raw,
    };
    DateTime::parse_from_rfc2822(raw)
        .or_else(|_| DateTime::parse_from_rfc3339(raw))
        .ok()
}

/// Header fields, with folded continuation lines joined. Names lowercased.
fn parse_headers<'a>(lines: &[&'a str]) -> HashMap<String, String> {
    let mut headers: HashMap<String, String> = HashMap::new();
    let mut last: Option<String> = None;
    for line in lines {
        if line.starts_with([' ', '\t']) {
            if let Some(v) = last.as_ref().and_then(|k| headers.get_mut(k)) {
                v.push(' ');
                v.push_str(line.trim());
            }
            continue;
        }
        if let Some((name, value)) = line.split_once(':') {
            let name = name.trim().to_ascii_lowercase();
            // first occurrence wins
            headers.entry(name.clone()).or_insert_with(|| value.trim().to_string());
            last = Some(name);
        }
    }
    headers
}

fn unescape_from(line: &str) -> &str {
    let stripped = line.trim_start_matches('>');
    if stripped.len() < line.len() && stripped.starts_with("From ") {
        &line[1..]
    } else {
        line
    }
}

enum Parsed {
    Message(MailMessage, bool),
    Malformed,
}

fn parse_message(lines: &[&str]) -> Parsed {
    let Some(blank) = lines.iter().position(|l| l.is_empty()) else {
        return Parsed::Malformed;
    };
    let headers = parse_headers(&lines[..blank]);
    let Some(message_id) = headers.get("message-id").filter(|v| !v.is_empty()) else {
        return Parsed::Malformed;
    };
    let sender = headers.get("from").map(|f| split_address(f).1).unwrap_or_default();
    if sender.is_empty() {
        return Parsed::Malformed;
    }
    let recipients: Vec<String> = headers
        .get("to")
        .map(|to| {
            to.split(',')
                .map(|r| split_address(r).1)
                .filter(|r| !r.is_empty())
                .collect()
        })
        .unwrap_or_default();
    if recipients.is_empty() {
        return Parsed::Malformed;
    }
    let date = headers.get("date").and_then(|d| parse_date(d));
    let mut body_lines: Vec<&str> = lines[blank + 1..].iter().map(|l| unescape_from(l)).collect();
    while body_lines.last().is_some_and(|l| l.trim().is_empty()) {
        body_lines.pop();
    }
    let msg = MailMessage::new(
        message_id.clone(),
        &sender,
        recipients,
        date.unwrap_or_else(epoch),
        body_lines.join("\n"),
    );
    Parsed::Message(msg, date.is_none())
}

/// Parses mbox text: each message starts at a line beginning with `From `,
/// headers run to the first blank line, the body follows. Body lines of the
/// form `>From `, `>>From `, … lose one `>`.
pub fn parse_mbox(text: &str) -> ParsedMailbox {
    let mut out = ParsedMailbox::default();
    let mut current: Option<Vec<&str>> = None;
    let flush = |block: Vec<&str>, out: &mut ParsedMailbox| match parse_message(&block) {
        Parsed::Message(m, missing_date) => {
            out.missing_date += usize::from(missing_date);
            out.messages.push(m);
        }
        Parsed::Malformed => out.malformed += 1,
    };
    for line in text.split('\n') {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.starts_with("From ") {
            if let Some(block) = current.take() {
                flush(block, &mut out);
            }
            current = Some(Vec::new());
        } else if let Some(block) = current.as_mut() {
            block.push(line);
        }
    }
    if let Some(block) = current.take() {
        flush(block, &mut out);
    }
    out
}

pub fn parse_mailbox(path: impl AsRef<Path>) -> Result<ParsedMailbox, MailError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(io_err(path))?;
    let text = String::from_utf8_lossy(&bytes);
    let parsed = parse_mbox(&text);
    if parsed.messages.is_empty() {
        return Err(MailError::NoMessages {
            malformed: parsed.malformed,
        });
    }
    Ok(parsed)
}

/// Canonical mbox writer; `parse_mbox(write_mbox(m))` yields `m` for any
/// message list produced by `parse_mbox`.
pub fn write_mbox(messages: &[MailMessage]) -> String {
    let mut out = String::new();
    for m in messages {
        out.push_str(&format!(
            "From {} {}\n",
            m.sender,
            m.timestamp.format("%a %b %e %H:%M:%S %Y")
        ));
        out.push_str(&format!("Message-ID: {}\n", m.message_id));
        out.push_str(&format!("Date: {}\n", m.timestamp.to_rfc2822()));
        out.push_str(&format!("From: {}\n", m.sender));
        out.push_str(&format!("To: {}\n", m.recipients.join(", ")));
        out.push('\n');
        if !m.body.is_empty() {
            for line in m.body.split('\n') {
                if line.trim_start_matches('>').starts_with("From ") {
                    out.push('>');
                }
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push('\n');
    }
    out
}

/// Inclusive body word-count bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthBounds {
    pub min_words: u64,
    pub max_words: u64,
}

impl Default for LengthBounds {
    fn default() -> Self {
        LengthBounds {
            min_words: 50,
            max_words: 200,
        }
    }
}

impl LengthBounds {
    pub fn contains(&self, words: u64) -> bool {
        (self.min_words..=self.max_words).contains(&words)
    }
}

/// Keeps messages whose body word count lies within `bounds` (inclusive).
pub fn length_filter(msgs: Vec<MailMessage>, bounds: LengthBounds) -> Vec<MailMessage> {
    msgs.into_iter()
        .filter(|m| bounds.contains(m.body_word_count))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gender {
    Female,
    Male,
    Untagged,
}

impl Gender {
    pub fn is_tagged(self) -> bool {
        self != Gender::Untagged
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Gender::Female => "female",
            Gender::Male => "male",
            Gender::Untagged => "untagged",
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Gender {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "female" | "f" => Ok(Gender::Female),
            "male" | "m" => Ok(Gender::Male),
            "untagged" | "" => Ok(Gender::Untagged),
            other => Err(format!("unknown gender {other:?}")),
        }
    }
}

/// Given names mapped to a gender. A name listed with two different genders
/// is ambiguous and resolves to untagged.
#[derive(Debug, Clone, Default)]
pub struct GivenNameTable {
    names: HashMap<String, Option<Gender>>,
}

impl GivenNameTable {
    pub fn get(&self, name: &str) -> Option<Gender> {
        self.names.get(&name.to_lowercase()).copied().flatten()
    }
}

impl<S: AsRef<str>> FromIterator<(S, Gender)> for GivenNameTable {
    fn from_iter<I: IntoIterator<Item = (S, Gender)>>(iter: I) -> Self {
        let mut names: HashMap<String, Option<Gender>> = HashMap::new();
        for (name, g) in iter {
            let key = name.as_ref().trim().to_lowercase();
            names
                .entry(key)
                .and_modify(|prev| {
                    if *prev != Some(g) {
                        *prev = None;
                    }
                })
                .or_insert(Some(g));
        }
        GivenNameTable { names }
    }
}

/// Gender of the first token of `display_name`; initials, unknown and
/// ambiguous names are untagged.
pub fn gender_from_name(display_name: &str, table: &GivenNameTable) -> Gender {
    let Some(first) = display_name.split_whitespace().next() else {
        return Gender::Untagged;
    };
    let first = first.trim_matches(|c: char| !c.is_alphanumeric());
    if first.chars().count() < 2 {
        return Gender::Untagged;
    }
    table.get(first).unwrap_or(Gender::Untagged)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RosterEntry {
    pub name: String,
    pub gender: Gender,
}

/// Address → (display name, gender).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Roster {
    entries: HashMap<String, RosterEntry>,
}

impl Roster {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, address: &str, name: impl Into<String>, gender: Gender) {
        self.entries.insert(
            address.trim().to_lowercase(),
            RosterEntry {
                name: name.into(),
                gender,
            },
        );
    }

    /// Untagged for addresses not on the roster.
    pub fn gender(&self, address: &str) -> Gender {
        self.entries
            .get(address)
            .map(|e| e.gender)
            .unwrap_or(Gender::Untagged)
    }

    pub fn get(&self, address: &str) -> Option<&RosterEntry> {
        self.entries.get(address)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Roster whose genders come from `gender_from_name` on each display name.
    pub fn from_names<'a>(people: impl IntoIterator<Item = (&'a str, &'a str)>, table: &GivenNameTable) -> Self {
        let mut r = Roster::new();
        for (addr, name) in people {
            r.insert(addr, name, gender_from_name(name, table));
        }
        r
    }

    /// `address<TAB>name<TAB>gender` lines; `#` comments and blank lines skipped.
    pub fn parse(text: &str) -> Result<Self, MailError> {
        let mut r = Roster::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            let [addr, name, gender] = fields[..] else {
                return Err(MailError::Roster {
                    line: i + 1,
                    message: format!("expected 3 tab-separated fields, found {}", fields.len()),
                });
            };
            if addr.trim().is_empty() {
                return Err(MailError::Roster {
                    line: i + 1,
                    message: "empty address".into(),
                });
            }
            let gender = gender.parse().map_err(|message| MailError::Roster { line: i + 1, message })?;
            r.insert(addr, name.trim(), gender);
        }
        Ok(r)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, MailError> {
        let path = path.as_ref();
        Self::parse(&fs::read_to_string(path).map_err(io_err(path))?)
    }
}

/// Messages grouped by (sender gender, recipient gender) and by sender gender.
///
/// A message enters pair `(s, r)` once per tagged recipient, and its sender's
/// corpus once if at least one recipient is tagged. Nothing involving only
/// untagged parties is kept.
#[derive(Debug, Clone, Default)]
pub struct GenderPairCorpora {
    messages: Vec<MailMessage>,
    pairs: BTreeMap<(Gender, Gender), Vec<usize>>,
    by_sender: BTreeMap<Gender, Vec<usize>>,
    pub dropped_untagged_sender: usize,
    pub dropped_no_tagged_recipient: usize,
}

pub const GENDER_PAIRS: [(Gender, Gender); 4] = [
    (Gender::Female, Gender::Female),
    (Gender::Female, Gender::Male),
    (Gender::Male, Gender::Female),
    (Gender::Male, Gender::Male),
];

impl GenderPairCorpora {
    pub fn messages(&self) -> &[MailMessage] {
        &self.messages
    }

    fn select<'a>(&'a self, ix: Option<&'a Vec<usize>>) -> impl Iterator<Item = &'a MailMessage> + 'a {
        ix.into_iter().flatten().map(move |&i| &self.messages[i])
    }

    pub fn pair(&self, sender: Gender, recipient: Gender) -> impl Iterator<Item = &MailMessage> {
        self.select(self.pairs.get(&(sender, recipient)))
    }

    pub fn pair_len(&self, sender: Gender, recipient: Gender) -> usize {
        self.pairs.get(&(sender, recipient)).map_or(0, Vec::len)
    }

    pub fn by_sender(&self, sender: Gender) -> impl Iterator<Item = &MailMessage> {
        self.select(self.by_sender.get(&sender))
    }

    pub fn by_sender_len(&self, sender: Gender) -> usize {
        self.by_sender.get(&sender).map_or(0, Vec::len)
    }

    /// Mail sent to recipients of `recipient` gender, from either sender gender,
    /// with the same once-per-recipient multiplicity as the pair corpora.
    pub fn to_recipient(&self, recipient: Gender) -> impl Iterator<Item = &MailMessage> {
        self.pair(Gender::Female, recipient)
            .chain(self.pair(Gender::Male, recipient))
    }

    pub fn to_recipient_len(&self, recipient: Gender) -> usize {
        self.pair_len(Gender::Female, recipient) + self.pair_len(Gender::Male, recipient)
    }
}

pub fn apply_roster(msgs: Vec<MailMessage>, roster: &Roster) -> GenderPairCorpora {
    let mut out = GenderPairCorpora::default();
    for m in msgs {
        let gs = roster.gender(&m.sender);
        if !gs.is_tagged() {
            out.dropped_untagged_sender += 1;
            continue;
        }
        let tagged: Vec<Gender> = m
            .recipients
            .iter()
            .map(|r| roster.gender(r))
            .filter(|g| g.is_tagged())
            .collect();
        if tagged.is_empty() {
            out.dropped_no_tagged_recipient += 1;
            continue;
        }
        let idx = out.messages.len();
        out.messages.push(m);
        for gr in tagged {
            out.pairs.entry((gs, gr)).or_default().push(idx);
        }
        out.by_sender.entry(gs).or_default().push(idx);
    }
    out
}
