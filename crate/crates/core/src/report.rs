//! Figure specifications, SVG rendering and JSON export.
//!
//! SVG output is byte-deterministic: coordinates are written with a fixed
//! number of decimals and all collections are iterated in a fixed order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use chrono::{DateTime, FixedOffset};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::lexicon::AffectLabel;
use crate::salience::SalienceEntry;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },
    #[error("palette line {line}: {message}")]
    Palette { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("figure JSON: {0}")]
    Json(#[from] serde_json::Error),
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ReportError {
    ReportError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

/// `#RRGGBB` colour per affect label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmotionPalette(BTreeMap<AffectLabel, String>);

impl Default for EmotionPalette {
    fn default() -> Self {
        use AffectLabel::*;
        EmotionPalette(
            [
                (Joy, "#FFD700"),
                (Trust, "#32CD32"),
                (Fear, "#006400"),
                (Surprise, "#00BFFF"),
                (Sadness, "#1E3A8A"),
                (Disgust, "#800080"),
                (Anger, "#DC143C"),
                (Anticipation, "#FF8C00"),
                (Positive, "#2E8B57"),
                (Negative, "#8B0000"),
            ]
            .into_iter()
            .map(|(l, c)| (l, c.to_string()))
            .collect(),
        )
    }
}

fn is_hex_colour(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit())
}

impl EmotionPalette {
    pub fn colour(&self, label: AffectLabel) -> &str {
        self.0.get(&label).map(String::as_str).unwrap_or("#808080")
    }

    /// Total over all ten labels, valid hex, pairwise distinct.
    pub fn validate(&self) -> Result<(), ReportError> {
        for l in AffectLabel::ALL {
            match self.0.get(&l) {
                None => return Err(invalid(format!("palette.{l}"), "missing colour")),
                Some(c) if !is_hex_colour(c) => {
                    return Err(invalid(format!("palette.{l}"), format!("{c:?} is not #RRGGBB")))
                }
                Some(_) => {}
            }
        }
        let mut seen: Vec<String> = self.0.values().map(|c| c.to_ascii_uppercase()).collect();
        seen.sort();
        seen.dedup();
        if seen.len() != self.0.len() {
            return Err(invalid("palette", "colours must be distinct"));
        }
        Ok(())
    }

    /// Overrides from `label<TAB>#RRGGBB` lines on top of the defaults.
    pub fn parse_overrides(text: &str) -> Result<Self, ReportError> {
        let mut p = EmotionPalette::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ReportError::Palette { line: i + 1, message };
            let (label, colour) = line
                .split_once('\t')
                .ok_or_else(|| err("expected `label<TAB>#RRGGBB`".into()))?;
            let label: AffectLabel = label.trim().parse().map_err(|e: crate::lexicon::UnknownLabel| err(e.to_string()))?;
            let colour = colour.trim();
            if !is_hex_colour(colour) {
                return Err(err(format!("{colour:?} is not #RRGGBB")));
            }
            p.0.insert(label, colour.to_string());
        }
        p.validate()?;
        Ok(p)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ReportError> {
        Self::parse_overrides(&fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureKind {
    PolarityPie,
    EmotionPie,
    DiffBar,
    WordCloud,
    Timeline,
    PolarityBars,
}

impl FigureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FigureKind::PolarityPie => "polarity_pie",
            FigureKind::EmotionPie => "emotion_pie",
            FigureKind::DiffBar => "diff_bar",
            FigureKind::WordCloud => "word_cloud",
            FigureKind::Timeline => "timeline",
            FigureKind::PolarityBars => "polarity_bars",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimelineEntry {
    pub label: String,
    pub timestamp: DateTime<FixedOffset>,
    pub positive: f64,
    pub negative: f64,
    pub empty: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolarityBar {
    pub label: String,
    pub positive: f64,
    pub negative: f64,
}

/// Payload per figure kind.
#[derive(Debug, Clone, PartialEq)]
pub enum FigureData {
    /// Percentages keyed by `positive`/`negative`; all zero for a text
    /// without polarity words.
    PolarityPie(BTreeMap<AffectLabel, f64>),
    /// Percentages keyed by the eight emotions.
    EmotionPie(BTreeMap<AffectLabel, f64>),
    /// Signed percentage-point differences keyed by the eight emotions.
    DiffBar(BTreeMap<AffectLabel, f64>),
    WordCloud(Vec<SalienceEntry<f64>>),
    Timeline(Vec<TimelineEntry>),
    PolarityBars(Vec<PolarityBar>),
}

impl FigureData {
    pub fn kind(&self) -> FigureKind {
        match self {
            FigureData::PolarityPie(_) => FigureKind::PolarityPie,
            FigureData::EmotionPie(_) => FigureKind::EmotionPie,
            FigureData::DiffBar(_) => FigureKind::DiffBar,
            FigureData::WordCloud(_) => FigureKind::WordCloud,
            FigureData::Timeline(_) => FigureKind::Timeline,
            FigureData::PolarityBars(_) => FigureKind::PolarityBars,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub title: String,
    pub data: FigureData,
    pub palette: EmotionPalette,
}

pub const PIE_TOLERANCE: f64 = 1e-6;
pub const CLOUD_MIN_PT: f64 = 12.0;
pub const CLOUD_MAX_PT: f64 = 48.0;

fn check_keys(field: &str, map: &BTreeMap<AffectLabel, f64>, keys: &[AffectLabel]) -> Result<(), ReportError> {
    if map.len() != keys.len() || !keys.iter().all(|k| map.contains_key(k)) {
        let names: Vec<&str> = keys.iter().map(|k| k.as_str()).collect();
        return Err(invalid(field, format!("keys must be exactly [{}]", names.join(", "))));
    }
    for (k, v) in map {
        if !v.is_finite() {
            return Err(invalid(format!("{field}.{k}"), "not finite"));
        }
    }
    Ok(())
}

fn check_pie(field: &str, map: &BTreeMap<AffectLabel, f64>, keys: &[AffectLabel]) -> Result<(), ReportError> {
    check_keys(field, map, keys)?;
    for (k, v) in map {
        if !(0.0..=100.0 + PIE_TOLERANCE).contains(v) {
            return Err(invalid(format!("{field}.{k}"), format!("{v} outside [0, 100]")));
        }
    }
    let sum: f64 = map.values().sum();
    // an all-zero pie stands for a text with no words on this axis
    if sum != 0.0 && (sum - 100.0).abs() > PIE_TOLERANCE {
        return Err(invalid(field, format!("percentages sum to {sum}, expected 100")));
    }
    Ok(())
}

fn check_pct(field: &str, v: f64) -> Result<(), ReportError> {
    if !(v.is_finite() && (0.0..=100.0 + PIE_TOLERANCE).contains(&v)) {
        return Err(invalid(field, format!("{v} outside [0, 100]")));
    }
    Ok(())
}

impl FigureSpec {
    pub fn new(title: impl Into<String>, data: FigureData) -> Self {
        FigureSpec {
            title: title.into(),
            data,
            palette: EmotionPalette::default(),
        }
    }

    pub fn with_palette(mut self, palette: EmotionPalette) -> Self {
        self.palette = palette;
        self
    }

    pub fn kind(&self) -> FigureKind {
        self.data.kind()
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        self.palette.validate()?;
        match &self.data {
            FigureData::PolarityPie(m) => check_pie("data", m, &[AffectLabel::Negative, AffectLabel::Positive]),
            FigureData::EmotionPie(m) => check_pie("data", m, &AffectLabel::EMOTIONS),
            FigureData::DiffBar(m) => check_keys("data", m, &AffectLabel::EMOTIONS),
            FigureData::WordCloud(entries) => {
                for (i, e) in entries.iter().enumerate() {
                    if !(e.salience.is_finite() && e.salience > 0.0) {
                        return Err(invalid(format!("data.entries[{i}].salience"), "must be positive and finite"));
                    }
                    if e.word.is_empty() {
                        return Err(invalid(format!("data.entries[{i}].word"), "empty"));
                    }
                }
                Ok(())
            }
            FigureData::Timeline(points) => {
                for (i, p) in points.iter().enumerate() {
                    check_pct(&format!("data.points[{i}].positive"), p.positive)?;
                    check_pct(&format!("data.points[{i}].negative"), p.negative)?;
                }
                Ok(())
            }
            FigureData::PolarityBars(bars) => {
                for (i, b) in bars.iter().enumerate() {
                    check_pct(&format!("data.bars[{i}].positive"), b.positive)?;
                    check_pct(&format!("data.bars[{i}].negative"), b.negative)?;
                }
                Ok(())
            }
        }
    }
}

/// Font size in points for a cloud entry: linear from 12 at the set's minimum
/// salience to 48 at its maximum; a set with a single distinct value renders at 48.
pub fn cloud_font_size(salience: f64, min: f64, max: f64) -> f64 {
    if max <= min {
        return CLOUD_MAX_PT;
    }
    CLOUD_MIN_PT + (CLOUD_MAX_PT - CLOUD_MIN_PT) * (salience - min) / (max - min)
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Fixed three-decimal formatting with `-0.000` normalized.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;

struct Svg {
    buf: String,
}

impl Svg {
    fn new(title: &str, height: f64) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            buf,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
            w = num(WIDTH),
            h = num(height)
        );
        let _ = writeln!(buf, "<title>{}</title>", escape(title));
        let _ = writeln!(buf, r##"<rect x="0.000" y="0.000" width="{}" height="{}" fill="#FFFFFF"/>"##, num(WIDTH), num(height));
        let _ = writeln!(
            buf,
            r##"<text x="{}" y="28.000" font-family="sans-serif" font-size="18.000" text-anchor="middle" fill="#000000">{}</text>"##,
            num(WIDTH / 2.0),
            escape(title)
        );
        Svg { buf }
    }

    fn line(&mut self, s: String) {
        self.buf.push_str(&s);
        self.buf.push('\n');
    }

    fn text(&mut self, x: f64, y: f64, size: f64, anchor: &str, fill: &str, content: &str) {
        self.line(format!(
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="{}" text-anchor="{anchor}" fill="{fill}">{}</text>"#,
            num(x),
            num(y),
            num(size),
            escape(content)
        ));
    }

    fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

fn render_pie(svg: &mut Svg, slices: &[(AffectLabel, f64)], palette: &EmotionPalette) {
    let (cx, cy, r) = (300.0, 270.0, 180.0);
    let total: f64 = slices.iter().map(|(_, v)| v).sum();
    let visible: Vec<&(AffectLabel, f64)> = slices.iter().filter(|(_, v)| *v > 0.0).collect();
    if total == 0.0 {
        svg.line(format!(
            r##"<circle cx="{}" cy="{}" r="{}" fill="#DDDDDD" stroke="#FFFFFF"/>"##,
            num(cx),
            num(cy),
            num(r)
        ));
        svg.text(cx, cy, 16.0, "middle", "#333333", "no words on this axis");
    } else if visible.len() == 1 {
        let (label, _) = visible[0];
        svg.line(format!(
            r#"<circle class="wedge" data-label="{label}" cx="{}" cy="{}" r="{}" fill="{}" stroke="{}"/>"#,
            num(cx),
            num(cy),
            num(r),
            palette.colour(*label),
            "#FFFFFF"
        ));
    } else {
        let mut angle = -std::f64::consts::FRAC_PI_2;
        for (label, v) in &visible {
            let sweep = std::f64::consts::TAU * v / total;
            let (x0, y0) = (cx + r * angle.cos(), cy + r * angle.sin());
            let end = angle + sweep;
            let (x1, y1) = (cx + r * end.cos(), cy + r * end.sin());
            let large = u8::from(sweep > std::f64::consts::PI);
            svg.line(format!(
                r##"<path class="wedge" data-label="{label}" d="M {} {} L {} {} A {} {} 0 {large} 1 {} {} Z" fill="{}" stroke="#FFFFFF"/>"##,
                num(cx),
                num(cy),
                num(x0),
                num(y0),
                num(r),
                num(r),
                num(x1),
                num(y1),
                palette.colour(*label)
            ));
            angle = end;
        }
    }
    // legend
    for (i, (label, v)) in slices.iter().enumerate() {
        let y = 110.0 + 28.0 * i as f64;
        svg.line(format!(
            r#"<rect x="540.000" y="{}" width="18.000" height="18.000" fill="{}"/>"#,
            num(y - 14.0),
            palette.colour(*label)
        ));
        svg.text(566.0, y, 14.0, "start", "#000000", &format!("{label} {}%", num(*v)));
    }
}

fn render_diff_bar(svg: &mut Svg, deltas: &BTreeMap<AffectLabel, f64>, palette: &EmotionPalette) {
    let (left, right, axis_y, half) = (80.0, 760.0, 260.0, 180.0);
    let max = deltas.values().fold(0.0f64, |m, v| m.max(v.abs()));
    let slot = (right - left) / AffectLabel::EMOTIONS.len() as f64;
    svg.line(format!(
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000"/>"##,
        num(left),
        num(axis_y),
        num(right),
        num(axis_y)
    ));
    for (i, label) in AffectLabel::EMOTIONS.iter().enumerate() {
        let v = deltas.get(label).copied().unwrap_or(0.0);
        let h = if max > 0.0 { half * v.abs() / max } else { 0.0 };
        let x = left + slot * i as f64 + slot * 0.15;
        let y = if v >= 0.0 { axis_y - h } else { axis_y };
        svg.line(format!(
            r#"<rect class="bar" data-label="{label}" data-value="{}" x="{}" y="{}" width="{}" height="{}" fill="{}"/>"#,
            num(v),
            num(x),
            num(y),
            num(slot * 0.7),
            num(h),
            palette.colour(*label)
        ));
        let cx = x + slot * 0.35;
        svg.text(cx, 470.0, 13.0, "middle", "#000000", label.as_str());
        let vy = if v >= 0.0 { y - 6.0 } else { y + h + 16.0 };
        svg.text(cx, vy, 12.0, "middle", "#000000", &num(v));
    }
}

/// Rows of words in descending salience; each row wraps at the canvas width.
fn render_cloud(svg: &mut Svg, entries: &[SalienceEntry<f64>], palette: &EmotionPalette) -> f64 {
    if entries.is_empty() {
        svg.text(WIDTH / 2.0, 120.0, 16.0, "middle", "#333333", "no salient words");
        return 200.0;
    }
    let mut sorted: Vec<&SalienceEntry<f64>> = entries.iter().collect();
    sorted.sort_by(|a, b| b.salience.total_cmp(&a.salience).then_with(|| a.word.cmp(&b.word)));
    let min = sorted.iter().map(|e| e.salience).fold(f64::INFINITY, f64::min);
    let max = sorted.iter().map(|e| e.salience).fold(f64::NEG_INFINITY, f64::max);
    let margin = 20.0;
    let gap = 14.0;
    let mut x = margin;
    let mut baseline = 60.0;
    let mut row_height: f64 = 0.0;
    let mut first_in_row = true;
    for e in sorted {
        let size = cloud_font_size(e.salience, min, max);
        let width = 0.6 * size * e.word.chars().count() as f64;
        if !first_in_row && x + width > WIDTH - margin {
            baseline += row_height + 8.0;
            x = margin;
            row_height = 0.0;
            first_in_row = true;
        }
        if first_in_row {
            baseline += size;
        }
        row_height = row_height.max(size);
        svg.line(format!(
            r#"<text class="word" data-salience="{}" x="{}" y="{}" font-family="sans-serif" font-size="{}" fill="{}">{}</text>"#,
            e.salience,
            num(x),
            num(baseline),
            num(size),
            palette.colour(e.emotion),
            escape(&e.word)
        ));
        x += width + gap;
        first_in_row = false;
    }
    baseline + 30.0
}

fn render_timeline(svg: &mut Svg, points: &[TimelineEntry], palette: &EmotionPalette) {
    let (left, right, top, bottom) = (70.0, 760.0, 60.0, 420.0);
    svg.line(format!(
        r##"<line x1="{l}" y1="{b}" x2="{r}" y2="{b}" stroke="#000000"/><line x1="{l}" y1="{t}" x2="{l}" y2="{b}" stroke="#000000"/>"##,
        l = num(left),
        r = num(right),
        t = num(top),
        b = num(bottom)
    ));
    for pct in [0.0, 50.0, 100.0] {
        let y = bottom - (bottom - top) * pct / 100.0;
        svg.text(left - 8.0, y + 4.0, 12.0, "end", "#000000", &format!("{}%", pct as u32));
    }
    if points.is_empty() {
        svg.text((left + right) / 2.0, 240.0, 16.0, "middle", "#333333", "no messages");
        return;
    }
    let step = if points.len() > 1 {
        (right - left - 40.0) / (points.len() - 1) as f64
    } else {
        0.0
    };
    let xs: Vec<f64> = (0..points.len()).map(|i| left + 20.0 + step * i as f64).collect();
    let y_of = |pct: f64| bottom - (bottom - top) * pct / 100.0;
    for (label, pick) in [
        (AffectLabel::Positive, (|p: &TimelineEntry| p.positive) as fn(&TimelineEntry) -> f64),
        (AffectLabel::Negative, |p: &TimelineEntry| p.negative),
    ] {
        let colour = palette.colour(label);
        let path: Vec<String> = points
            .iter()
            .zip(&xs)
            .filter(|(p, _)| !p.empty)
            .map(|(p, x)| format!("{},{}", num(*x), num(y_of(pick(p)))))
            .collect();
        if path.len() > 1 {
            svg.line(format!(
                r#"<polyline class="series" data-label="{label}" points="{}" fill="none" stroke="{colour}"/>"#,
                path.join(" ")
            ));
        }
        for (p, x) in points.iter().zip(&xs) {
            let (fill, value) = if p.empty { ("none", 0.0) } else { (colour, pick(p)) };
            svg.line(format!(
                r#"<circle class="point" data-label="{label}" data-id="{}" data-time="{}" cx="{}" cy="{}" r="4.000" fill="{fill}" stroke="{colour}"/>"#,
                escape(&p.label),
                p.timestamp.to_rfc3339(),
                num(*x),
                num(y_of(value))
            ));
        }
    }
    for (i, label) in [AffectLabel::Positive, AffectLabel::Negative].iter().enumerate() {
        let y = 470.0 + 18.0 * i as f64;
        svg.line(format!(
            r#"<rect x="{}" y="{}" width="12.000" height="12.000" fill="{}"/>"#,
            num(left),
            num(y - 10.0),
            palette.colour(*label)
        ));
        svg.text(left + 18.0, y, 12.0, "start", "#000000", label.as_str());
    }
}

fn render_polarity_bars(svg: &mut Svg, bars: &[PolarityBar], palette: &EmotionPalette) -> f64 {
    let (label_w, left, right) = (260.0, 270.0, 760.0);
    let row = 30.0;
    let mut y = 60.0;
    if bars.is_empty() {
        svg.text(WIDTH / 2.0, 120.0, 16.0, "middle", "#333333", "no correspondents");
        return 200.0;
    }
    for b in bars {
        svg.text(label_w, y + 17.0, 12.0, "end", "#000000", &b.label);
        let scale = (right - left) / 100.0;
        for (i, (lab, v)) in [(AffectLabel::Positive, b.positive), (AffectLabel::Negative, b.negative)]
            .iter()
            .enumerate()
        {
            svg.line(format!(
                r#"<rect class="bar" data-label="{lab}" data-value="{}" x="{}" y="{}" width="{}" height="11.000" fill="{}"/>"#,
                num(*v),
                num(left),
                num(y + 4.0 + 12.0 * i as f64),
                num(v * scale),
                palette.colour(*lab)
            ));
        }
        y += row;
    }
    y + 30.0
}

pub fn render_svg(spec: &FigureSpec) -> Result<String, ReportError> {
    spec.validate()?;
    let p = &spec.palette;
    let svg = match &spec.data {
        FigureData::PolarityPie(m) | FigureData::EmotionPie(m) => {
            let mut svg = Svg::new(&spec.title, HEIGHT);
            let slices: Vec<(AffectLabel, f64)> = m.iter().map(|(k, v)| (*k, *v)).collect();
            render_pie(&mut svg, &slices, p);
            svg
        }
        FigureData::DiffBar(m) => {
            let mut svg = Svg::new(&spec.title, HEIGHT);
            render_diff_bar(&mut svg, m, p);
            svg
        }
        FigureData::Timeline(points) => {
            let mut svg = Svg::new(&spec.title, HEIGHT + 20.0);
            render_timeline(&mut svg, points, p);
            svg
        }
        FigureData::WordCloud(entries) => {
            // the height depends on the layout, so render into a scratch body first
            let mut body = Svg { buf: String::new() };
            let h = render_cloud(&mut body, entries, p);
            let mut svg = Svg::new(&spec.title, h.max(200.0));
            svg.buf.push_str(&body.buf);
            svg
        }
        FigureData::PolarityBars(bars) => {
            let mut body = Svg { buf: String::new() };
            let h = render_polarity_bars(&mut body, bars, p);
            let mut svg = Svg::new(&spec.title, h.max(200.0));
            svg.buf.push_str(&body.buf);
            svg
        }
    };
    Ok(svg.finish())
}

fn pct_map(m: &BTreeMap<AffectLabel, f64>) -> Value {
    serde_json::to_value(m).expect("label map serializes")
}

/// `{"kind", "title", "data", "palette"}` with a kind-specific `data` object.
pub fn export_json(spec: &FigureSpec) -> String {
    let data = match &spec.data {
        FigureData::PolarityPie(m) | FigureData::EmotionPie(m) | FigureData::DiffBar(m) => pct_map(m),
        FigureData::WordCloud(entries) => json!({ "entries": entries }),
        FigureData::Timeline(points) => json!({ "points": points }),
        FigureData::PolarityBars(bars) => json!({ "bars": bars }),
    };
    let v = json!({
        "kind": spec.kind(),
        "title": spec.title,
        "data": data,
        "palette": spec.palette,
    });
    serde_json::to_string_pretty(&v).expect("figure serializes")
}

pub fn import_json(text: &str) -> Result<FigureSpec, ReportError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Envelope {
        kind: FigureKind,
        title: String,
        data: Value,
        palette: EmotionPalette,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Cloud {
        entries: Vec<SalienceEntry<f64>>,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Points {
        points: Vec<TimelineEntry>,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Bars {
        bars: Vec<PolarityBar>,
    }
    let env: Envelope = serde_json::from_str(text)?;
    let data = match env.kind {
        FigureKind::PolarityPie => FigureData::PolarityPie(serde_json::from_value(env.data)?),
        FigureKind::EmotionPie => FigureData::EmotionPie(serde_json::from_value(env.data)?),
        FigureKind::DiffBar => FigureData::DiffBar(serde_json::from_value(env.data)?),
        FigureKind::WordCloud => FigureData::WordCloud(serde_json::from_value::<Cloud>(env.data)?.entries),
        FigureKind::Timeline => FigureData::Timeline(serde_json::from_value::<Points>(env.data)?.points),
        FigureKind::PolarityBars => FigureData::PolarityBars(serde_json::from_value::<Bars>(env.data)?.bars),
    };
    let spec = FigureSpec {
        title: env.title,
        data,
        palette: env.palette,
    };
    spec.validate()?;
    Ok(spec)
}
