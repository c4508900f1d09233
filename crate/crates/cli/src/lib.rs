//! The `mailmood` command: lexicon building, corpus comparison, mailbox
//! analysis and the local dashboard.

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use mailmood_core::mail::{Gender, Roster};
use mailmood_core::tracking::Demographics;
use mailmood_core::AffectLabel;

pub mod compare;
pub mod config;
pub mod figures;
pub mod lexicon_cmd;
pub mod mailbox;
pub mod serve;

use config::{Config, FileConfig};

#[derive(Debug, Parser)]
#[command(name = "mailmood", version, about = "Emotion-word analytics for letters and mailboxes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML file with defaults for any of the flags below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Word–emotion lexicon (`word<TAB>label<TAB>flag`)
    #[arg(long, global = true, env = "MAILMOOD_LEXICON")]
    pub lexicon: Option<PathBuf>,
    /// Output directory for figures
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub top_n: Option<usize>,
    #[arg(long, global = true)]
    pub min_votes: Option<usize>,
    #[arg(long, global = true)]
    pub min_words: Option<u64>,
    #[arg(long, global = true)]
    pub max_words: Option<u64>,
    /// Corpus frequency a term must exceed to be annotated
    #[arg(long, global = true)]
    pub threshold: Option<u64>,
    /// Palette overrides (`label<TAB>#RRGGBB`)
    #[arg(long, global = true)]
    pub palette: Option<PathBuf>,
    #[arg(long, global = true)]
    pub port: Option<u16>,
    /// Seed for word-choice question generation
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

impl GlobalArgs {
    fn as_file_config(&self) -> FileConfig {
        FileConfig {
            lexicon: self.lexicon.clone(),
            palette: self.palette.clone(),
            out: self.out.clone(),
            top_n: self.top_n,
            min_votes: self.min_votes,
            min_words: self.min_words,
            max_words: self.max_words,
            threshold: self.threshold,
            port: self.port,
            seed: self.seed,
        }
    }

    pub fn resolve(&self) -> Result<Config> {
        let file = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Config::resolve(self.as_file_config(), file)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a lexicon from annotation sheets
    #[command(subcommand)]
    Lexicon(LexiconCommand),
    /// Compare two directories of letters
    Compare {
        corpus_a: PathBuf,
        corpus_b: PathBuf,
        /// Restrict word clouds to these emotions (repeatable)
        #[arg(long = "emotion", value_parser = parse_emotion)]
        emotions: Vec<AffectLabel>,
    },
    /// Analyze an mbox file
    Mailbox {
        mbox: PathBuf,
        /// `address<TAB>name<TAB>gender` file
        #[arg(long)]
        roster: Option<PathBuf>,
        #[command(subcommand)]
        mode: MailboxMode,
    },
    /// Serve the dashboard API for one mailbox owner
    Serve {
        mbox: PathBuf,
        /// Mailbox owner's address
        #[arg(long)]
        me: String,
        /// Supplies the owner's gender when `--gender` is absent
        #[arg(long)]
        roster: Option<PathBuf>,
        /// Web UI bundle served under `/`
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        /// Owner gender passed through the anonymous export (f or m)
        #[arg(long, value_parser = parse_gender)]
        gender: Option<Gender>,
        /// Owner age passed through the anonymous export
        #[arg(long)]
        age: Option<u32>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LexiconCommand {
    Build {
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        thesaurus: PathBuf,
        #[arg(long)]
        freq: PathBuf,
        /// Word-choice questions (JSONL); generated from the seed when absent
        #[arg(long)]
        questions: Option<PathBuf>,
        /// Lexicon path; defaults to `<out>/lexicon.tsv`
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write the word-choice questions for the selected terms
    Questions {
        #[arg(long)]
        thesaurus: PathBuf,
        #[arg(long)]
        freq: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum MailboxMode {
    /// Compare mail by sender and recipient gender
    GenderPairs,
    /// Per-correspondent views of one person's sent mail
    Person {
        address: String,
        /// Only this correspondent's diff and timeline
        #[arg(long)]
        peer: Option<String>,
    },
}

fn parse_emotion(s: &str) -> Result<AffectLabel, String> {
    let l: AffectLabel = s.parse().map_err(|e| format!("{e}"))?;
    if l.is_emotion() {
        Ok(l)
    } else {
        Err(format!("{s} is a polarity, not an emotion"))
    }
}

fn parse_gender(s: &str) -> Result<Gender, String> {
    match s.parse::<Gender>() {
        Ok(g) if g.is_tagged() => Ok(g),
        _ => Err(format!("expected f or m, got {s:?}")),
    }
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = cli.global.resolve()?;
    match cli.command {
        Command::Lexicon(LexiconCommand::Build {
            annotations,
            thesaurus,
            freq,
            questions,
            output,
        }) => lexicon_cmd::build(&cfg, &annotations, &thesaurus, &freq, questions.as_deref(), output),
        Command::Lexicon(LexiconCommand::Questions { thesaurus, freq, output }) => {
            lexicon_cmd::questions(&cfg, &thesaurus, &freq, &output)
        }
        Command::Compare {
            corpus_a,
            corpus_b,
            emotions,
        } => compare::run(&cfg, &corpus_a, &corpus_b, &emotions),
        Command::Mailbox { mbox, roster, mode } => match mode {
            MailboxMode::GenderPairs => mailbox::gender_pairs(&cfg, &mbox, roster.as_deref()),
            MailboxMode::Person { address, peer } => mailbox::person(&cfg, &mbox, &address, peer.as_deref()),
        },
        Command::Serve {
            mbox,
            me,
            roster,
            static_dir,
            gender,
            age,
        } => {
            let gender = match (gender, roster) {
                (Some(g), _) => Some(g),
                (None, Some(r)) => Some(Roster::load(&r)?.gender(&me)).filter(|g| g.is_tagged()),
                (None, None) => None,
            };
            serve::serve(&cfg, &mbox, &me, static_dir, Demographics { gender, age })
        }
    }
}
