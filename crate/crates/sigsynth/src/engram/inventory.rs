//! Engram inventory files: one entry per (grapheme, form, variant) with the
//! grid node sequence and its speed minima. The file format round-trips
//! losslessly.

use super::LetterGrid;
use crate::morphology::SlotForm;
use crate::script::ScriptKind;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// Shape class stored in the inventory. Split vowels ship two shapes, the
/// part before the preceding consonant and the part after it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngramForm {
    Base,
    After,
    Before,
    Below,
    Above,
    SplitPre,
    SplitPost,
}

impl EngramForm {
    pub fn as_str(self) -> &'static str {
        match self {
            EngramForm::Base => "base",
            EngramForm::After => "after",
            EngramForm::Before => "before",
            EngramForm::Below => "below",
            EngramForm::Above => "above",
            EngramForm::SplitPre => "split_pre",
            EngramForm::SplitPost => "split_post",
        }
    }
}

impl From<SlotForm> for EngramForm {
    fn from(f: SlotForm) -> Self {
        match f {
            SlotForm::Independent => EngramForm::Base,
            SlotForm::ModAfter => EngramForm::After,
            SlotForm::ModBefore => EngramForm::Before,
            SlotForm::ModBelow => EngramForm::Below,
            SlotForm::ModAbove => EngramForm::Above,
            SlotForm::SplitPre => EngramForm::SplitPre,
            SlotForm::SplitPost => EngramForm::SplitPost,
        }
    }
}

/// One stored letter shape: an ordered grid node sequence with interior
/// speed minima (stroke limits).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterEngram {
    pub grapheme: String,
    pub form: EngramForm,
    pub variant: u32,
    /// Grid node indices in 1..=180.
    pub nodes: Vec<u16>,
    /// 0-based interior positions into `nodes` (the file stores them
    /// 1-based, matching how engrams are published and traced).
    pub minima: Vec<usize>,
    /// Shape reaches the upper line and can join a matra.
    pub headline: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    grapheme: String,
    form: EngramForm,
    variant: u32,
    nodes: Vec<u16>,
    minima: Vec<usize>,
    headline: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInventory {
    script: String,
    engram: Vec<RawEntry>,
}

/// All stored letter shapes of one script, keyed by (grapheme, form).
#[derive(Debug, Clone)]
pub struct EngramInventory {
    pub script: ScriptKind,
    entries: BTreeMap<(String, EngramForm), Vec<LetterEngram>>,
}

impl EngramInventory {
    pub fn from_toml(kind: ScriptKind, text: &str, file: &str) -> Result<Self> {
        let raw: RawInventory = toml::from_str(text)
            .map_err(|e| Error::Data { file: file.to_string(), message: e.to_string() })?;
        let declared: ScriptKind = raw.script.parse()?;
        if declared != kind {
            return Err(Error::Data {
                file: file.to_string(),
                message: format!("inventory declares script '{declared}', expected '{kind}'"),
            });
        }
        let mut entries: BTreeMap<(String, EngramForm), Vec<LetterEngram>> = BTreeMap::new();
        for (i, e) in raw.engram.into_iter().enumerate() {
            let ctx = |msg: String| Error::Data {
                file: file.to_string(),
                message: format!("engram #{} ({} {}): {}", i + 1, e.grapheme, e.form.as_str(), msg),
            };
            if e.nodes.is_empty() {
                return Err(ctx("empty node list".into()));
            }
            for &n in &e.nodes {
                LetterGrid::row_col(n).map_err(|err| ctx(err.to_string()))?;
            }
            let mut minima = Vec::with_capacity(e.minima.len());
            let mut prev = 0usize;
            for &m in &e.minima {
                if m <= 1 || m >= e.nodes.len() {
                    return Err(ctx(format!(
                        "minimum position {m} not interior to 1..{}",
                        e.nodes.len()
                    )));
                }
                if m <= prev {
                    return Err(ctx(format!("minima not strictly increasing at {m}")));
                }
                prev = m;
                minima.push(m - 1); // to 0-based
            }
            entries.entry((e.grapheme.clone(), e.form)).or_default().push(LetterEngram {
                grapheme: e.grapheme,
                form: e.form,
                variant: e.variant,
                nodes: e.nodes,
                minima,
                headline: e.headline,
            });
        }
        for list in entries.values_mut() {
            list.sort_by_key(|e| e.variant);
        }
        Ok(EngramInventory { script: kind, entries })
    }

    pub fn load(kind: ScriptKind, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(kind, &text, &path.display().to_string())
    }

    pub fn builtin(kind: ScriptKind) -> Self {
        Self::from_toml(kind, kind.default_engrams(), "<builtin>")
            .expect("embedded engram inventory must be valid")
    }

    /// Serializes back to the file format (minima 1-based again).
    pub fn to_toml_string(&self) -> String {
        let raw = RawInventory {
            script: self.script.as_str().to_string(),
            engram: self
                .entries
                .values()
                .flatten()
                .map(|e| RawEntry {
                    grapheme: e.grapheme.clone(),
                    form: e.form,
                    variant: e.variant,
                    nodes: e.nodes.clone(),
                    minima: e.minima.iter().map(|m| m + 1).collect(),
                    headline: e.headline,
                })
                .collect(),
        };
        toml::to_string(&raw).expect("inventory serializes")
    }

    /// All variants stored for a grapheme in a given form.
    pub fn variants(&self, grapheme: &str, form: EngramForm) -> Option<&[LetterEngram]> {
        self.entries.get(&(grapheme.to_string(), form)).map(|v| v.as_slice())
    }

    pub fn require(&self, grapheme: &str, form: EngramForm) -> Result<&[LetterEngram]> {
        self.variants(grapheme, form).ok_or_else(|| Error::InventoryGap {
            grapheme: grapheme.to_string(),
            form: form.as_str().to_string(),
        })
    }

    pub fn grapheme_count(&self) -> usize {
        let mut graphemes: Vec<&str> = self.entries.keys().map(|(g, _)| g.as_str()).collect();
        graphemes.sort_unstable();
        graphemes.dedup();
        graphemes.len()
    }

    pub fn entry_count(&self) -> usize {
        self.entries.values().map(|v| v.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_inventories_load_and_cover_the_minimum_set() {
        for kind in [ScriptKind::Bengali, ScriptKind::Devanagari] {
            let inv = EngramInventory::builtin(kind);
            assert!(inv.grapheme_count() >= 10, "{kind}: {} graphemes", inv.grapheme_count());
            for list in inv.entries.values() {
                assert!(list.len() >= 2, "{kind}: fewer than 2 variants for {:?}", list[0].grapheme);
            }
        }
    }

    #[test]
    fn paper_example_engram_is_present() {
        let inv = EngramInventory::builtin(ScriptKind::Bengali);
        let variants = inv.variants("\u{0994}", EngramForm::Base).unwrap(); // Bengali AU
        let v1 = &variants[0];
        assert_eq!(
            v1.nodes,
            [111, 112, 96, 95, 110, 141, 127, 97, 127, 143, 130, 115, 84, 67]
        );
        // 1-based positions {2,4,6,8,10,12} stored 0-based.
        assert_eq!(v1.minima, [1, 3, 5, 7, 9, 11]);
    }

    #[test]
    fn inventory_round_trips_losslessly() {
        let inv = EngramInventory::builtin(ScriptKind::Devanagari);
        let text = inv.to_toml_string();
        let again = EngramInventory::from_toml(ScriptKind::Devanagari, &text, "roundtrip").unwrap();
        assert_eq!(inv.entries, again.entries);
    }

    #[test]
    fn bad_minima_are_rejected_with_entry_context() {
        let text = r#"
script = "bengali"
[[engram]]
grapheme = "x"
form = "base"
variant = 1
nodes = [1, 2, 3]
minima = [3]
headline = false
"#;
        let err = EngramInventory::from_toml(ScriptKind::Bengali, text, "t.toml").unwrap_err();
        assert!(err.to_string().contains("not interior"), "{err}");
    }

    #[test]
    fn coverage_matches_grammar() {
        // Every grapheme the grammar can emit has the engram forms the
        // composer may request.
        use crate::morphology::Placement;
        use crate::script::ScriptData;
        for kind in [ScriptKind::Bengali, ScriptKind::Devanagari] {
            let data = ScriptData::builtin(kind);
            let inv = EngramInventory::builtin(kind);
            for c in &data.grammar.consonants {
                assert!(inv.variants(c, EngramForm::Base).is_some(), "{kind}: {c} base");
            }
            for v in &data.grammar.vowels {
                assert!(inv.variants(v, EngramForm::Base).is_some(), "{kind}: {v} base");
                if data.grammar.initial_only_vowels.contains(v) {
                    continue; // never takes a modifier form
                }
                match data.grammar.placement[v] {
                    Placement::After => {
                        assert!(inv.variants(v, EngramForm::After).is_some(), "{kind}: {v} after")
                    }
                    Placement::Before => {
                        assert!(inv.variants(v, EngramForm::Before).is_some(), "{kind}: {v} before")
                    }
                    Placement::Below => {
                        assert!(inv.variants(v, EngramForm::Below).is_some(), "{kind}: {v} below")
                    }
                    Placement::Above => {
                        assert!(inv.variants(v, EngramForm::Above).is_some(), "{kind}: {v} above")
                    }
                    Placement::Split => {
                        assert!(inv.variants(v, EngramForm::SplitPre).is_some(), "{kind}: {v} pre");
                        assert!(inv.variants(v, EngramForm::SplitPost).is_some(), "{kind}: {v} post");
                    }
                }
            }
        }
    }
}
