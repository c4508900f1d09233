use std::path::Path;

use anyhow::{bail, Context, Result};
use mailmood_core::analysis::{compare, CorpusSummary};
use mailmood_core::mail::{load_letters, CorpusTag};
use mailmood_core::report::FigureData;
use mailmood_core::text::AffectProfile;
use mailmood_core::{AffectLabel, Comparison, WordLexicon};

use crate::config::Config;
use crate::figures::FigureWriter;

fn corpus_name(dir: &Path) -> String {
    dir.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| dir.display().to_string())
}

pub fn summarize_dir(dir: &Path, lex: &WordLexicon) -> Result<CorpusSummary> {
    let letters = load_letters(dir, CorpusTag::Other).with_context(|| format!("loading letters from {}", dir.display()))?;
    let bodies: Vec<&str> = letters.iter().map(|l| l.body.as_str()).collect();
    Ok(CorpusSummary::from_texts(bodies, lex))
}

pub fn print_table(name_a: &str, name_b: &str, c: &Comparison) {
    let delta = |l: AffectLabel| c.diff.as_ref().map(|d| format!("{:+9.2}", d.delta(l)));
    println!("{:<14}{:>12}{:>12}{:>10}", "label", trunc(name_a), trunc(name_b), "delta");
    for l in AffectLabel::EMOTIONS {
        println!(
            "{:<14}{:>12.2}{:>12.2} {}",
            l.as_str(),
            c.a.emotion(l),
            c.b.emotion(l),
            delta(l).unwrap_or_else(|| format!("{:>9}", "n/a"))
        );
    }
    for l in AffectLabel::POLARITIES {
        let d = c.a.polarity(l) - c.b.polarity(l);
        println!(
            "{:<14}{:>12.2}{:>12.2} {:+9.2}",
            l.as_str(),
            c.a.polarity(l),
            c.b.polarity(l),
            d
        );
    }
}

fn trunc(s: &str) -> String {
    s.chars().take(11).collect()
}

fn pies(w: &mut FigureWriter, side: &str, name: &str, p: &AffectProfile<f64>) -> Result<()> {
    w.write(&[side], format!("Polarity words: {name}"), FigureData::PolarityPie(p.polarity_pct.clone()))?;
    w.write(&[side], format!("Emotion words: {name}"), FigureData::EmotionPie(p.emotion_pct.clone()))
}

/// Writes pies for both sides, the diff bar and one cloud per emotion.
pub fn write_comparison(
    w: &mut FigureWriter,
    qualifier: Option<&str>,
    name_a: &str,
    name_b: &str,
    c: &Comparison,
    with_pies: bool,
) -> Result<()> {
    let q: Vec<&str> = qualifier.into_iter().collect();
    if with_pies {
        pies(w, "a", name_a, &c.a)?;
        pies(w, "b", name_b, &c.b)?;
    }
    match &c.diff {
        Some(d) => w.write(
            &q,
            format!("Emotion words: {name_a} minus {name_b}"),
            FigureData::DiffBar(d.per_emotion_delta.clone()),
        )?,
        None => eprintln!("warning: no emotion words on one side of {name_a} vs {name_b}; diff bar skipped"),
    }
    for (emotion, entries) in &c.clouds {
        let mut cq = q.clone();
        cq.push(emotion.as_str());
        w.write(
            &cq,
            format!("{name_a} - {name_b}: relative salience of {emotion}"),
            FigureData::WordCloud(entries.clone()),
        )?;
    }
    Ok(())
}

pub fn run(cfg: &Config, dir_a: &Path, dir_b: &Path, emotions: &[AffectLabel]) -> Result<()> {
    let lex = cfg.lexicon()?;
    let palette = cfg.palette()?;
    let a = summarize_dir(dir_a, &lex)?;
    let b = summarize_dir(dir_b, &lex)?;
    for (s, d) in [(&a, dir_a), (&b, dir_b)] {
        if s.stats.total_tokens() == 0 {
            bail!("corpus {} is empty", d.display());
        }
    }
    let emotions = if emotions.is_empty() { &AffectLabel::EMOTIONS[..] } else { emotions };
    let c: Comparison = compare(&a, &b, &lex, emotions, cfg.top_n)?;
    let (name_a, name_b) = (corpus_name(dir_a), corpus_name(dir_b));

    let mut w = FigureWriter::new(&cfg.output_dir, "compare", palette)?;
    write_comparison(&mut w, None, &name_a, &name_b, &c, true)?;
    println!("{}: {} letters, {} tokens", name_a, a.documents, a.stats.total_tokens());
    println!("{}: {} letters, {} tokens", name_b, b.documents, b.stats.total_tokens());
    print_table(&name_a, &name_b, &c);
    println!("{} files written to {}", w.written().len(), cfg.output_dir.display());
    if c.diff.is_none() {
        bail!("difference undefined: a corpus has no emotion words");
    }
    Ok(())
}
