//! Per-script data files: language model, grammar and the morphological
//! GEV parameter table. One TOML file per script; the shipped defaults are
//! embedded and can be overridden by path.

use crate::gev::GevParams;
use crate::morphology::{Placement, ScriptGrammar, WordModel};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

pub const BENGALI_DATA: &str = include_str!("../data/bengali.toml");
pub const DEVANAGARI_DATA: &str = include_str!("../data/devanagari.toml");
pub const BENGALI_ENGRAMS: &str = include_str!("../data/bengali_engrams.toml");
pub const DEVANAGARI_ENGRAMS: &str = include_str!("../data/devanagari_engrams.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScriptKind {
    Bengali,
    Devanagari,
}

impl ScriptKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScriptKind::Bengali => "bengali",
            ScriptKind::Devanagari => "devanagari",
        }
    }

    /// Embedded script data file contents.
    pub fn default_data(self) -> &'static str {
        match self {
            ScriptKind::Bengali => BENGALI_DATA,
            ScriptKind::Devanagari => DEVANAGARI_DATA,
        }
    }

    /// Embedded engram inventory file contents.
    pub fn default_engrams(self) -> &'static str {
        match self {
            ScriptKind::Bengali => BENGALI_ENGRAMS,
            ScriptKind::Devanagari => DEVANAGARI_ENGRAMS,
        }
    }
}

impl fmt::Display for ScriptKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScriptKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bengali" | "bangla" => Ok(ScriptKind::Bengali),
            "devanagari" | "hindi" => Ok(ScriptKind::Devanagari),
            other => Err(Error::Config(format!("unknown script '{other}'"))),
        }
    }
}

/// The six GEV rows of the morphological parameter table.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GevTable {
    pub total_letters: GevParams,
    pub slant_deg: GevParams,
    pub skew_deg: GevParams,
    pub text_width_mm: GevParams,
    pub text_height_mm: GevParams,
    pub velocity: GevParams,
}

impl GevTable {
    fn validate(&self, file: &str) -> Result<()> {
        for (name, row) in [
            ("total_letters", &self.total_letters),
            ("slant_deg", &self.slant_deg),
            ("skew_deg", &self.skew_deg),
            ("text_width_mm", &self.text_width_mm),
            ("text_height_mm", &self.text_height_mm),
            ("velocity", &self.velocity),
        ] {
            GevParams::new(row.xi, row.sigma, row.mu, row.min, row.max).map_err(|e| {
                Error::Data { file: file.to_string(), message: format!("gev.{name}: {e}") }
            })?;
        }
        Ok(())
    }
}

/// Everything one script needs for name and morphology sampling.
#[derive(Debug, Clone)]
pub struct ScriptData {
    pub kind: ScriptKind,
    pub words: WordModel,
    pub grammar: ScriptGrammar,
    pub gev: GevTable,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScriptFile {
    script: String,
    words: RawWords,
    grammar: RawGrammar,
    gev: GevTable,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWords {
    count_percent: Vec<f64>,
    letters_percent: Vec<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrammar {
    vowels: Vec<String>,
    consonants: Vec<String>,
    vowel_to_consonant: f64,
    consonant_to_vowel: f64,
    restricted_final_vowels: Vec<String>,
    #[serde(default)]
    initial_only_vowels: Vec<String>,
    placement: BTreeMap<String, Placement>,
}

impl ScriptData {
    /// Parse and validate a script data file. `file` names the source in
    /// error messages; TOML errors carry line/column context.
    pub fn from_toml(kind: ScriptKind, text: &str, file: &str) -> Result<Self> {
        let raw: RawScriptFile = toml::from_str(text)
            .map_err(|e| Error::Data { file: file.to_string(), message: e.to_string() })?;
        let declared: ScriptKind = raw.script.parse()?;
        if declared != kind {
            return Err(Error::Data {
                file: file.to_string(),
                message: format!("file declares script '{declared}', expected '{kind}'"),
            });
        }
        let words = WordModel::from_percentages(&raw.words.count_percent, &raw.words.letters_percent)
            .map_err(|e| Error::Data { file: file.to_string(), message: e.to_string() })?;
        let grammar = ScriptGrammar::new(
            raw.grammar.vowels,
            raw.grammar.consonants,
            raw.grammar.vowel_to_consonant,
            raw.grammar.consonant_to_vowel,
            raw.grammar.restricted_final_vowels,
            raw.grammar.initial_only_vowels,
            raw.grammar.placement,
        )
        .map_err(|e| Error::Data { file: file.to_string(), message: e.to_string() })?;
        raw.gev.validate(file)?;
        Ok(ScriptData { kind, words, grammar, gev: raw.gev })
    }

    pub fn load(kind: ScriptKind, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(kind, &text, &path.display().to_string())
    }

    /// Shipped defaults, embedded in the binary.
    pub fn builtin(kind: ScriptKind) -> Self {
        Self::from_toml(kind, kind.default_data(), "<builtin>")
            .expect("embedded script data must be valid")
    }
}
