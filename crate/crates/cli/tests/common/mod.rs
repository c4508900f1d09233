//! Fixture generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LABELS: [&str; 10] = [
    "anger",
    "anticipation",
    "disgust",
    "fear",
    "joy",
    "negative",
    "positive",
    "sadness",
    "surprise",
    "trust",
];

pub fn mailmood() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mailmood"));
    c.env_remove("MAILMOOD_LEXICON");
    c
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl From<Output> for Run {
    fn from(o: Output) -> Self {
        Run {
            code: o.status.code().unwrap_or(-1),
            stdout: String::from_utf8_lossy(&o.stdout).into_owned(),
            stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
        }
    }
}

pub fn run<I, S>(args: I) -> Run
where
    I: IntoIterator<Item = S>,
    S: AsRef<std::ffi::OsStr>,
{
    mailmood().args(args).output().expect("binary runs").into()
}

/// `word<TAB>label<TAB>1` lines for the associated labels only.
pub fn write_lexicon(path: &Path, entries: &[(&str, &[&str])]) {
    let mut out = String::new();
    for (w, labels) in entries {
        for l in *labels {
            writeln!(out, "{w}\t{l}\t1").unwrap();
        }
    }
    fs::write(path, out).unwrap();
}

pub fn write_letters(dir: &Path, texts: &[String]) {
    fs::create_dir_all(dir).unwrap();
    for (i, t) in texts.iter().enumerate() {
        fs::write(dir.join(format!("{i:04}.txt")), t).unwrap();
    }
}

/// Every file below `dir`, relative path → bytes.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

pub fn mbox_message(id: &str, from: &str, to: &[&str], minute: usize, body: &str) -> String {
    format!(
        "From {from} Mon Jan  1 00:00:00 2001\nMessage-ID: <{id}>\nFrom: {from}\nTo: {}\nDate: Mon, 1 Jan 2001 {:02}:{:02}:00 +0000\nSubject: note\n\n{body}\n\n",
        to.join(", "),
        (minute / 60) % 24,
        minute % 60,
    )
}

/// Annotation sheets with planted vote patterns.
pub struct AggregationFixture {
    pub annotations: PathBuf,
    pub thesaurus: PathBuf,
    pub freq: PathBuf,
    pub expected_tsv: String,
    pub total_sheets: usize,
    pub q1_failures: usize,
    pub five_vote_instances: usize,
    pub unanimous: usize,
    pub four_of_five: usize,
}

struct PlantedSense {
    word: String,
    category: String,
    votes: usize,
    yes: [usize; 10],
}

fn synonym(category: &str) -> String {
    format!("syn{category}")
}

/// 100 senses with five valid sheets whose 1000 sense–label instances are
/// 744 unanimous, 169 four-to-one and 87 three-to-two; 8 senses with four
/// sheets; 4 senses with two sheets (below the vote minimum); 60 sheets with
/// a wrong word-choice answer out of 600.
pub fn aggregation(dir: &Path) -> AggregationFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(744);
    let w = |i: usize| format!("w{i:03}");
    let mut senses: Vec<PlantedSense> = Vec::new();
    let mut push = |word: String, category: String, votes: usize| {
        senses.push(PlantedSense {
            word,
            category,
            votes,
            yes: [0; 10],
        })
    };
    for i in 0..80 {
        push(w(i), format!("c{i:03}a"), 5);
    }
    for i in 0..20 {
        push(w(i), format!("c{i:03}b"), 5);
    }
    for i in 80..88 {
        push(w(i), format!("c{i:03}a"), 4);
    }
    for i in 88..91 {
        push(w(i), format!("c{i:03}a"), 2);
    }
    push(w(0), "c000c".into(), 2);

    let mut kinds: Vec<u8> = [vec![0u8; 744], vec![1u8; 169], vec![2u8; 87]].concat();
    kinds.shuffle(&mut rng);
    let mut next = kinds.into_iter();
    for s in &mut senses {
        for y in &mut s.yes {
            *y = match s.votes {
                5 => {
                    let up = rng.gen_bool(0.5);
                    match next.next().unwrap() {
                        0 => if up { 5 } else { 0 },
                        1 => if up { 4 } else { 1 },
                        _ => if up { 3 } else { 2 },
                    }
                }
                v => rng.gen_range(0..=v),
            };
        }
    }

    let sheet = |annotator: &str, s: &PlantedSense, q1: &str, answers: &[bool; 10]| {
        let mut a = String::new();
        for (k, l) in LABELS.iter().enumerate() {
            if k > 0 {
                a.push(',');
            }
            write!(a, "\"{l}\":{}", answers[k]).unwrap();
        }
        format!(
            "{{\"annotator_id\":\"{annotator}\",\"sense\":{{\"word\":\"{}\",\"sense_id\":\"{}\"}},\"q1_choice\":\"{q1}\",\"affect_answers\":{{{a}}}}}",
            s.word, s.category
        )
    };

    let mut lines = Vec::new();
    for s in &senses {
        let mut answers = vec![[false; 10]; s.votes];
        for (k, &yes) in s.yes.iter().enumerate() {
            let mut who: Vec<usize> = (0..s.votes).collect();
            who.shuffle(&mut rng);
            for &a in &who[..yes] {
                answers[a][k] = true;
            }
        }
        for (a, ans) in answers.iter().enumerate() {
            lines.push(sheet(&format!("a{a}"), s, &synonym(&s.category), ans));
        }
    }
    let q1_failures = 60;
    for j in 0..q1_failures {
        let s = &senses[j % senses.len()];
        let wrong = synonym(&senses[(j + 1) % senses.len()].category);
        let ans: [bool; 10] = std::array::from_fn(|_| rng.gen_bool(0.5));
        lines.push(sheet(&format!("x{j}"), s, &wrong, &ans));
    }
    lines.shuffle(&mut rng);

    let mut thesaurus = String::new();
    let mut freq = String::new();
    let mut words = BTreeSet::new();
    for s in &senses {
        writeln!(thesaurus, "{}\t{}", s.category, s.word).unwrap();
        writeln!(thesaurus, "{}\t{}", s.category, synonym(&s.category)).unwrap();
        words.insert(s.word.clone());
    }
    thesaurus.push_str("crare\trareword\ncrare\tsyncrare\n");
    for (i, wd) in words.iter().enumerate() {
        writeln!(freq, "{wd}\t{}", 200_000 + i).unwrap();
    }
    freq.push_str("rareword\t120000\n");

    // word → union of strict-majority labels over senses with ≥3 sheets
    let mut expected: BTreeMap<&str, [bool; 10]> = BTreeMap::new();
    for s in senses.iter().filter(|s| s.votes >= 3) {
        let e = expected.entry(&s.word).or_insert([false; 10]);
        for k in 0..10 {
            e[k] |= 2 * s.yes[k] > s.votes;
        }
    }
    let mut expected_tsv = String::from("# word\tlabel\tflag\n");
    for (word, flags) in &expected {
        for (k, l) in LABELS.iter().enumerate() {
            writeln!(expected_tsv, "{word}\t{l}\t{}", u8::from(flags[k])).unwrap();
        }
    }

    let (mut unanimous, mut four) = (0, 0);
    for s in senses.iter().filter(|s| s.votes == 5) {
        for &y in &s.yes {
            match y.max(5 - y) {
                5 => unanimous += 1,
                4 => four += 1,
                _ => {}
            }
        }
    }

    fs::create_dir_all(dir).unwrap();
    let f = AggregationFixture {
        annotations: dir.join("annotations.jsonl"),
        thesaurus: dir.join("thesaurus.tsv"),
        freq: dir.join("freq.tsv"),
        expected_tsv,
        total_sheets: lines.len(),
        q1_failures,
        five_vote_instances: 1000,
        unanimous,
        four_of_five: four,
    };
    fs::write(&f.annotations, lines.join("\n") + "\n").unwrap();
    fs::write(&f.thesaurus, thesaurus).unwrap();
    fs::write(&f.freq, freq).unwrap();
    f
}

pub const JOY_WORDS: [&str; 5] = ["loving", "baby", "beautiful", "feeling", "smile"];
pub const FEAR_ORDER: [&str; 10] = [
    "hell",
    "kill",
    "broke",
    "worship",
    "sorrow",
    "afraid",
    "loneliness",
    "endless",
    "shaking",
    "devil",
];

pub struct LetterCorpora {
    pub lexicon: PathBuf,
    pub love: PathBuf,
    pub hate: PathBuf,
    pub suicide: PathBuf,
}

/// Love letters rich in the cited joy words, hate mail in anger and disgust
/// words, suicide notes with the cited fear words at strictly decreasing
/// frequencies.
pub fn letter_corpora(dir: &Path) -> LetterCorpora {
    fs::create_dir_all(dir).unwrap();
    let lexicon = dir.join("lexicon.tsv");
    write_lexicon(
        &lexicon,
        &[
            ("loving", &["joy", "positive", "trust"]),
            ("baby", &["joy", "positive"]),
            ("beautiful", &["joy", "positive"]),
            ("feeling", &["anticipation", "joy", "positive"]),
            ("smile", &["joy", "positive", "surprise", "trust"]),
            ("faithful", &["positive", "trust"]),
            ("hate", &["anger", "disgust", "fear", "negative", "sadness"]),
            ("ignorant", &["disgust", "negative"]),
            ("fraudulent", &["anger", "disgust", "negative"]),
            ("lying", &["anger", "disgust", "negative"]),
            ("hell", &["anger", "disgust", "fear", "negative", "sadness"]),
            ("kill", &["fear", "negative", "sadness"]),
            ("broke", &["fear", "negative", "sadness"]),
            ("worship", &["anticipation", "fear", "joy", "positive", "trust"]),
            ("sorrow", &["fear", "negative", "sadness"]),
            ("afraid", &["fear", "negative"]),
            ("loneliness", &["fear", "negative", "sadness"]),
            ("endless", &["anger", "fear", "negative", "sadness"]),
            ("shaking", &["fear", "negative"]),
            ("devil", &["anger", "fear", "negative", "sadness"]),
        ],
    );
    let love: Vec<String> = (0..12)
        .map(|i| {
            let extra = if i % 3 == 0 { " and I smile again" } else { "" };
            format!(
                "My loving baby, you are beautiful. This feeling when you smile is faithful and true.{extra}\n\
                 I think of you every day, my baby, and of our walks by the sea. Loving you is easy."
            )
        })
        .collect();
    let hate: Vec<String> = (0..12)
        .map(|i| {
            format!(
                "You are an ignorant and fraudulent fool. I hate your lying column number {i}.\n\
                 Stop lying to readers; your hate is plain. Smile all you want, baby, it changes nothing."
            )
        })
        .collect();
    let mut suicide = Vec::new();
    for (rank, word) in FEAR_ORDER.iter().enumerate() {
        let n = 2 * (FEAR_ORDER.len() - rank);
        let body = std::iter::repeat(*word).take(n).collect::<Vec<_>>().join(" and ");
        suicide.push(format!("I am tired. {body}. Goodbye to all of you."));
    }
    let (l, h, s) = (dir.join("love"), dir.join("hate"), dir.join("suicide"));
    write_letters(&l, &love);
    write_letters(&h, &hate);
    write_letters(&s, &suicide);
    LetterCorpora {
        lexicon,
        love: l,
        hate: h,
        suicide: s,
    }
}

pub const PIPELINE_LEXICON: [(&str, &[&str]); 4] = [
    ("happy", &["joy", "positive"]),
    ("sad", &["negative", "sadness"]),
    ("afraid", &["fear", "negative"]),
    ("trusty", &["positive", "trust"]),
];

const PIPELINE_WORDS: [&str; 7] = ["happy", "meeting", "sad", "trusty", "afraid", "report", "gas"];

/// Hand-counted group sizes of the pipeline mailbox.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSizes {
    pub parsed: usize,
    pub within_length: usize,
    pub women_to_women: usize,
    pub women_to_men: usize,
    pub men_to_women: usize,
    pub men_to_men: usize,
    pub by_women: usize,
    pub by_men: usize,
    pub to_women: usize,
    pub to_men: usize,
    pub dropped_untagged_sender: usize,
    pub dropped_no_tagged_recipient: usize,
}

pub struct PipelineMailbox {
    pub mbox: PathBuf,
    pub roster: PathBuf,
    pub lexicon: PathBuf,
    pub bodies: Vec<String>,
    pub ids: Vec<String>,
    pub expected: GroupSizes,
}

/// 200 messages from fourteen templates; sizes below are summed by hand from
/// the template table.
pub fn pipeline_mailbox(dir: &Path) -> PipelineMailbox {
    let (alice, carol, eve) = ("alice@corp.com", "carol@corp.com", "eve@corp.com");
    let (bob, dave, frank) = ("bob@corp.com", "dave@corp.com", "frank@corp.com");
    let (anon, outsider) = ("pat@corp.com", "vendor@outside.com");
    // (sender, recipients, body words, copies)
    let templates: [(&str, &[&str], usize, usize); 14] = [
        (alice, &[carol], 60, 20),             // ww +20
        (carol, &[bob], 100, 25),              // wm +25
        (bob, &[eve], 150, 30),                // mw +30
        (dave, &[frank], 200, 15),             // mm +15
        (eve, &[alice, dave], 80, 10),         // ww +10, wm +10
        (frank, &[bob, dave, anon], 120, 10),  // mm +20
        (anon, &[alice], 100, 10),             // untagged sender
        (carol, &[anon, outsider], 100, 10),   // no tagged recipient
        (alice, &[bob], 49, 10),               // too short
        (bob, &[carol], 201, 10),              // too long
        (eve, &[frank], 50, 10),               // wm +10
        (dave, &[alice, carol], 200, 20),      // mw +40
        (alice, &[eve], 10, 10),               // too short
        (frank, &[dave], 199, 10),             // mm +10
    ];
    let expected = GroupSizes {
        parsed: 200,
        within_length: 170,
        women_to_women: 30,
        women_to_men: 45,
        men_to_women: 70,
        men_to_men: 45,
        by_women: 65,
        by_men: 85,
        to_women: 100,
        to_men: 90,
        dropped_untagged_sender: 10,
        dropped_no_tagged_recipient: 10,
    };
    let mut msgs = Vec::new();
    for (t, (from, to, words, copies)) in templates.iter().enumerate() {
        for c in 0..*copies {
            let body: Vec<&str> = (0..*words)
                .map(|k| PIPELINE_WORDS[(t + c + 3 * k) % PIPELINE_WORDS.len()])
                .collect();
            msgs.push((format!("t{t:02}c{c:02}.{}@mail.corp.com", 1000 + t * 50 + c), *from, *to, body.join(" ")));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(200);
    msgs.shuffle(&mut rng);
    let mut text = String::new();
    for (i, (id, from, to, body)) in msgs.iter().enumerate() {
        text.push_str(&mbox_message(id, from, to, i, body));
    }
    fs::create_dir_all(dir).unwrap();
    let mbox = dir.join("pipeline.mbox");
    fs::write(&mbox, text).unwrap();
    let roster = dir.join("roster.tsv");
    fs::write(
        &roster,
        format!(
            "{alice}\tAlice Ames\tf\n{carol}\tCarol Cruz\tf\n{eve}\tEve Eng\tf\n\
             {bob}\tBob Burns\tm\n{dave}\tDave Dunn\tm\n{frank}\tFrank Fox\tm\n{anon}\tPat Poe\t\n"
        ),
    )
    .unwrap();
    let lexicon = dir.join("lexicon.tsv");
    write_lexicon(&lexicon, &PIPELINE_LEXICON);
    PipelineMailbox {
        mbox,
        roster,
        lexicon,
        bodies: msgs.iter().map(|m| m.3.clone()).collect(),
        ids: msgs.iter().map(|m| m.0.clone()).collect(),
        expected,
    }
}

/// `n` messages among `people` tagged addresses with random bodies of 50–200
/// words drawn from the lexicon words plus filler.
pub fn large_mailbox(dir: &Path, n: usize, lexicon_words: usize) -> (PathBuf, PathBuf, PathBuf) {
    let mut rng = ChaCha8Rng::seed_from_u64(50_000);
    let emotion_labels = ["anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"];
    let vocab: Vec<String> = (0..lexicon_words).map(|i| format!("lex{}", alpha(i))).collect();
    let filler: Vec<String> = (0..2000).map(|i| format!("fill{}", alpha(i))).collect();

    let mut lex = String::new();
    for w in &vocab {
        let e = emotion_labels[rng.gen_range(0..8)];
        let p = if rng.gen_bool(0.5) { "positive" } else { "negative" };
        writeln!(lex, "{w}\t{e}\t1\n{w}\t{p}\t1").unwrap();
    }
    let people: Vec<String> = (0..60).map(|i| format!("person{i}@corp.com")).collect();
    let mut roster = String::new();
    for (i, p) in people.iter().enumerate() {
        let g = match i % 3 {
            0 => "f",
            1 => "m",
            _ => "",
        };
        writeln!(roster, "{p}\tPerson {i}\t{g}").unwrap();
    }

    let mut text = String::with_capacity(n * 1100);
    for i in 0..n {
        let from = &people[rng.gen_range(0..people.len())];
        let k = rng.gen_range(1..=3);
        let to: Vec<&str> = (0..k).map(|_| people[rng.gen_range(0..people.len())].as_str()).collect();
        let len = rng.gen_range(40..=220);
        let body: Vec<&str> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    vocab[rng.gen_range(0..vocab.len())].as_str()
                } else {
                    filler[rng.gen_range(0..filler.len())].as_str()
                }
            })
            .collect();
        text.push_str(&mbox_message(&format!("{i}@bulk"), from, &to, i, &body.join(" ")));
    }
    fs::create_dir_all(dir).unwrap();
    let (m, r, l) = (dir.join("bulk.mbox"), dir.join("roster.tsv"), dir.join("lexicon.tsv"));
    fs::write(&m, text).unwrap();
    fs::write(&r, roster).unwrap();
    fs::write(&l, lex).unwrap();
    (m, r, l)
}

/// Base-26 letters, so generated words are purely alphabetic tokens.
pub fn alpha(mut i: usize) -> String {
    let mut s = Vec::new();
    loop {
        s.push(b'a' + (i % 26) as u8);
        i /= 26;
        if i == 0 {
            break;
        }
    }
    s.reverse();
    String::from_utf8(s).unwrap()
}
