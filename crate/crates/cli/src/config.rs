//! Settings from flags, an optional TOML file and built-in defaults, in that
//! order of precedence.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mailmood_core::annotation::{DEFAULT_FREQUENCY_THRESHOLD, DEFAULT_MIN_VOTES};
use mailmood_core::mail::LengthBounds;
use mailmood_core::report::EmotionPalette;
use mailmood_core::WordLexicon;
use serde::Deserialize;

pub const DEFAULT_TOP_N: usize = 40;
pub const DEFAULT_PORT: u16 = 8080;
pub const DEFAULT_OUT: &str = "mailmood-out";

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub lexicon: Option<PathBuf>,
    pub palette: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub top_n: Option<usize>,
    pub min_votes: Option<usize>,
    pub min_words: Option<u64>,
    pub max_words: Option<u64>,
    pub threshold: Option<u64>,
    pub port: Option<u16>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub lexicon_path: Option<PathBuf>,
    pub palette_path: Option<PathBuf>,
    pub output_dir: PathBuf,
    pub top_n: usize,
    pub min_votes: usize,
    pub length_bounds: LengthBounds,
    pub threshold: u64,
    pub port: u16,
    pub seed: u64,
}

impl Config {
    /// `flags` takes precedence over `file` key by key.
    pub fn resolve(flags: FileConfig, file: FileConfig) -> Result<Self> {
        let cfg = Config {
            lexicon_path: flags.lexicon.or(file.lexicon),
            palette_path: flags.palette.or(file.palette),
            output_dir: flags.out.or(file.out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            top_n: flags.top_n.or(file.top_n).unwrap_or(DEFAULT_TOP_N),
            min_votes: flags.min_votes.or(file.min_votes).unwrap_or(DEFAULT_MIN_VOTES),
            length_bounds: LengthBounds {
                min_words: flags.min_words.or(file.min_words).unwrap_or(LengthBounds::default().min_words),
                max_words: flags.max_words.or(file.max_words).unwrap_or(LengthBounds::default().max_words),
            },
            threshold: flags.threshold.or(file.threshold).unwrap_or(DEFAULT_FREQUENCY_THRESHOLD),
            port: flags.port.or(file.port).unwrap_or(DEFAULT_PORT),
            seed: flags.seed.or(file.seed).unwrap_or(0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.top_n == 0 {
            bail!("--top-n must be at least 1");
        }
        if self.min_votes == 0 {
            bail!("--min-votes must be at least 1");
        }
        let b = self.length_bounds;
        if b.min_words > b.max_words {
            bail!("--min-words ({}) exceeds --max-words ({})", b.min_words, b.max_words);
        }
        Ok(())
    }

    pub fn lexicon(&self) -> Result<WordLexicon> {
        let Some(path) = &self.lexicon_path else {
            bail!("no lexicon: pass --lexicon or set MAILMOOD_LEXICON");
        };
        WordLexicon::load(path).with_context(|| format!("loading lexicon {}", path.display()))
    }

    pub fn palette(&self) -> Result<EmotionPalette> {
        match &self.palette_path {
            None => Ok(EmotionPalette::default()),
            Some(p) => EmotionPalette::load(p).with_context(|| format!("loading palette {}", p.display())),
        }
    }
}
