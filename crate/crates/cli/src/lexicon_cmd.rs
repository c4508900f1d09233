use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use mailmood_core::annotation::{
    build_lexicon, generate_questions, load_annotations, parse_questions, select_terms, write_questions,
    ChoiceQuestion, FrequencyTable, Thesaurus,
};
use mailmood_core::{ExactReport, Rational64, Scalar, SenseKey};

use crate::config::Config;

fn selected_terms(thesaurus: &Path, freq: &Path, threshold: u64) -> Result<(Thesaurus, Vec<SenseKey>)> {
    let th = Thesaurus::load(thesaurus).with_context(|| format!("loading thesaurus {}", thesaurus.display()))?;
    let fq = FrequencyTable::load(freq).with_context(|| format!("loading frequencies {}", freq.display()))?;
    let terms = select_terms(&th, &fq, threshold);
    Ok((th, terms))
}

fn pct(x: Rational64) -> String {
    format!("{:.1}%", x.as_f64() * 100.0)
}

pub fn print_report(report: &ExactReport) {
    println!("annotations: {}", report.total_annotations);
    println!("discarded: {}", pct(report.discard_fraction()));
    println!("excluded senses: {}", report.excluded_senses);
    println!("five-vote instances: {}", report.five_vote_instances);
    println!("agreement 5/5: {}", pct(report.full_agreement_fraction));
    println!("agreement 4/5: {}", pct(report.four_of_five_fraction));
}

pub fn build(
    cfg: &Config,
    annotations: &Path,
    thesaurus: &Path,
    freq: &Path,
    questions: Option<&Path>,
    output: Option<PathBuf>,
) -> Result<()> {
    let sheets = load_annotations(annotations).with_context(|| format!("loading annotations {}", annotations.display()))?;
    if sheets.is_empty() {
        bail!("no annotations in {}", annotations.display());
    }
    let (th, terms) = selected_terms(thesaurus, freq, cfg.threshold)?;
    let questions: BTreeMap<SenseKey, ChoiceQuestion> = match questions {
        None => generate_questions(&terms, &th, cfg.seed)?,
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading questions {}", p.display()))?;
            let qs = parse_questions(&text)?;
            let selected: BTreeSet<&SenseKey> = terms.iter().collect();
            if let Some(q) = qs.keys().find(|k| !selected.contains(k)) {
                bail!("question for {q}, which is not a selected term");
            }
            qs
        }
    };

    let (lexicon, report) = build_lexicon::<Rational64>(sheets, &questions, cfg.min_votes)?;
    let out = output.unwrap_or_else(|| cfg.output_dir.join("lexicon.tsv"));
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    lexicon.save(&out).with_context(|| format!("writing {}", out.display()))?;

    print_report(&report);
    println!("lexicon: {} words written to {}", lexicon.len(), out.display());
    Ok(())
}

pub fn questions(cfg: &Config, thesaurus: &Path, freq: &Path, output: &Path) -> Result<()> {
    let (th, terms) = selected_terms(thesaurus, freq, cfg.threshold)?;
    let qs = generate_questions(&terms, &th, cfg.seed)?;
    fs::write(output, write_questions(&qs)).with_context(|| format!("writing {}", output.display()))?;
    println!("{} questions written to {}", qs.len(), output.display());
    Ok(())
}
