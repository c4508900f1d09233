use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use mailmood_core::report::{export_json, render_svg, EmotionPalette, FigureData, FigureSpec};

/// Writes `<command>-<kind>[-<qualifier>...]` as `.svg` and `.json`.
pub struct FigureWriter {
    dir: PathBuf,
    command: &'static str,
    palette: EmotionPalette,
    written: Vec<PathBuf>,
}

impl FigureWriter {
    pub fn new(dir: &Path, command: &'static str, palette: EmotionPalette) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        Ok(FigureWriter {
            dir: dir.to_path_buf(),
            command,
            palette,
            written: Vec::new(),
        })
    }

    pub fn write(&mut self, qualifiers: &[&str], title: impl Into<String>, data: FigureData) -> Result<()> {
        let spec = FigureSpec::new(title, data).with_palette(self.palette.clone());
        let mut stem = format!("{}-{}", self.command, spec.kind().as_str());
        for q in qualifiers {
            stem.push('-');
            stem.push_str(&file_safe(q));
        }
        let svg = render_svg(&spec).with_context(|| format!("rendering {stem}"))?;
        for (ext, body) in [("svg", svg), ("json", export_json(&spec))] {
            let path = self.dir.join(format!("{stem}.{ext}"));
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            self.written.push(path);
        }
        Ok(())
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

/// Keeps `[A-Za-z0-9._@-]`; anything else becomes `_`.
pub fn file_safe(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-' | '@') {
                c
            } else {
                '_'
            }
        })
        .collect()
}
