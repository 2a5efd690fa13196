//! Statistical language model for signer names and GEV-based sampling of
//! morphological parameters.
//!
//! A name is one to three words; each word is a vowel/consonant chain driven
//! by script-specific transition probabilities. A vowel following a consonant
//! turns into its modifier shape, placed after, before, below or above the
//! consonant, or split into a part before and a part after it.

use crate::gev::GevParams;
use crate::rng::{self};
use crate::script::GevTable;
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Placement class of a vowel modifier, as declared in the grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    After,
    Before,
    Below,
    Above,
    Split,
}

/// Resolved slot form: a split vowel occupies two slots (pre + post part).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotForm {
    /// Original (independent) shape: consonants, word-initial vowels and
    /// vowels following another vowel.
    Independent,
    ModAfter,
    ModBefore,
    ModBelow,
    ModAbove,
    SplitPre,
    SplitPost,
}

impl SlotForm {
    /// Whether this slot advances the horizontal cursor during composition.
    pub fn advances(self) -> bool {
        !matches!(self, SlotForm::ModBelow | SlotForm::ModAbove)
    }
}

/// One positioned grapheme of a word, in writing (left-to-right) order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionedGrapheme {
    pub grapheme: String,
    pub form: SlotForm,
    /// Index of the generated letter this slot belongs to (split vowels
    /// produce two slots with the same letter index).
    pub letter: usize,
}

/// A generated signature text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NameText {
    pub words: Vec<Vec<PositionedGrapheme>>,
}

impl NameText {
    /// Number of generated letters (split vowels count once).
    pub fn letter_count(&self) -> usize {
        self.words
            .iter()
            .map(|w| w.iter().map(|s| s.letter).max().map_or(0, |m| m + 1))
            .sum()
    }

    /// Graphemes in writing order, for display and logging.
    pub fn to_display_string(&self) -> String {
        self.words
            .iter()
            .map(|w| w.iter().map(|s| s.grapheme.as_str()).collect::<String>())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Letter sequence of one word in generation order: (grapheme, form of
    /// its primary slot).
    pub fn letters_of_word(&self, word: &[PositionedGrapheme]) -> Vec<(String, SlotForm)> {
        let n = word.iter().map(|s| s.letter).max().map_or(0, |m| m + 1);
        let mut out = vec![None; n];
        for slot in word {
            // The post part is the "primary" slot of a split vowel.
            if out[slot.letter].is_none() || slot.form == SlotForm::SplitPost {
                out[slot.letter] = Some((slot.grapheme.clone(), slot.form));
            }
        }
        out.into_iter().map(|o| o.expect("every letter has a slot")).collect()
    }
}

/// Word-count and letters-per-word distributions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordModel {
    /// P(1 word), P(2 words), P(3 words); sums to 1.
    pub word_count_probs: Vec<f64>,
    /// Per word index, P(1..=6 letters); each row sums to 1.
    pub letters_per_word: Vec<Vec<f64>>,
}

fn renormalize(v: &[f64], what: &str) -> Result<Vec<f64>> {
    if v.iter().any(|p| *p < 0.0 || !p.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what}: negative or non-finite entry")));
    }
    let sum: f64 = v.iter().sum();
    if sum <= 0.0 {
        return Err(Error::InvalidParameter(format!("{what}: all entries zero")));
    }
    Ok(v.iter().map(|p| p / sum).collect())
}

impl WordModel {
    /// Build from published percentage rows, renormalizing each row
    /// proportionally so it sums to 1 (the Devanagari word-count row sums
    /// to 98.00 as published).
    pub fn from_percentages(count: &[f64], letters: &[Vec<f64>]) -> Result<Self> {
        if count.len() != 3 {
            return Err(Error::InvalidParameter(format!(
                "word count row must have 3 entries, got {}",
                count.len()
            )));
        }
        if letters.len() != 3 || letters.iter().any(|r| r.len() != 6) {
            return Err(Error::InvalidParameter(
                "letters-per-word table must be 3 rows of 6 entries".into(),
            ));
        }
        Ok(WordModel {
            word_count_probs: renormalize(count, "word count probabilities")?,
            letters_per_word: letters
                .iter()
                .enumerate()
                .map(|(i, r)| renormalize(r, &format!("letters-per-word row {}", i + 1)))
                .collect::<Result<_>>()?,
        })
    }
}

/// Grapheme classes, transition probabilities and modifier placements.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScriptGrammar {
    pub vowels: Vec<String>,
    pub consonants: Vec<String>,
    /// P(consonant | vowel).
    pub p_consonant_after_vowel: f64,
    /// P(vowel | consonant).
    pub p_vowel_after_consonant: f64,
    pub restricted_final_vowels: BTreeSet<String>,
    /// Vowels that only appear word-initially (Devanagari first vowel).
    pub initial_only_vowels: BTreeSet<String>,
    pub placement: BTreeMap<String, Placement>,
}

impl ScriptGrammar {
    pub fn new(
        vowels: Vec<String>,
        consonants: Vec<String>,
        p_consonant_after_vowel: f64,
        p_vowel_after_consonant: f64,
        restricted_final_vowels: Vec<String>,
        initial_only_vowels: Vec<String>,
        placement: BTreeMap<String, Placement>,
    ) -> Result<Self> {
        if vowels.is_empty() || consonants.is_empty() {
            return Err(Error::InvalidGrammar("empty vowel or consonant list".into()));
        }
        for p in [p_consonant_after_vowel, p_vowel_after_consonant] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidGrammar(format!(
                    "transition probability {p} not in [0,1]"
                )));
            }
        }
        let vowel_set: BTreeSet<&str> = vowels.iter().map(|s| s.as_str()).collect();
        for v in &vowels {
            if !placement.contains_key(v) {
                return Err(Error::InvalidGrammar(format!("vowel '{v}' has no placement class")));
            }
        }
        for r in &restricted_final_vowels {
            if !vowel_set.contains(r.as_str()) {
                return Err(Error::InvalidGrammar(format!(
                    "restricted final vowel '{r}' is not in the vowel list"
                )));
            }
        }
        for i in &initial_only_vowels {
            if !vowel_set.contains(i.as_str()) {
                return Err(Error::InvalidGrammar(format!(
                    "initial-only vowel '{i}' is not in the vowel list"
                )));
            }
        }
        // Every word must be able to end: vowels minus restricted must be
        // non-empty, otherwise a final vowel could never be drawn.
        if restricted_final_vowels.len() >= vowels.len() {
            return Err(Error::InvalidGrammar("all vowels are restricted finals".into()));
        }
        Ok(ScriptGrammar {
            vowels,
            consonants,
            p_consonant_after_vowel,
            p_vowel_after_consonant,
            restricted_final_vowels: restricted_final_vowels.into_iter().collect(),
            initial_only_vowels: initial_only_vowels.into_iter().collect(),
            placement,
        })
    }

    /// Stationary probability of the vowel class under the two-state
    /// transition matrix; used for the first letter of a word (the source
    /// statistics do not state an initial-class distribution).
    pub fn stationary_vowel_prob(&self) -> f64 {
        let to_v = self.p_vowel_after_consonant;
        let to_c = self.p_consonant_after_vowel;
        if to_v + to_c == 0.0 {
            0.5
        } else {
            to_v / (to_v + to_c)
        }
    }

    pub fn is_vowel(&self, g: &str) -> bool {
        self.vowels.iter().any(|v| v == g)
    }
}

/// Morphological parameters of one signer, each drawn from its GEV row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MorphologyParams {
    pub total_letters: u32,
    pub slant_deg: f64,
    pub skew_deg: f64,
    pub text_width_mm: f64,
    pub text_height_mm: f64,
    pub velocity: f64,
}

fn categorical<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    // Guard against rounding: fall back to the last nonzero cell.
    probs.iter().rposition(|p| *p > 0.0).unwrap_or(probs.len() - 1)
}

#[derive(Clone, Copy, PartialEq)]
enum Class {
    Vowel,
    Consonant,
}

/// Draws a full signer name: word count, letters per word, grapheme chain
/// and resolved modifier placements.
pub fn sample_name<R: Rng + ?Sized>(
    grammar: &ScriptGrammar,
    words: &WordModel,
    rng: &mut R,
) -> Result<NameText> {
    if grammar.vowels.is_empty() || grammar.consonants.is_empty() {
        return Err(Error::InvalidGrammar("empty grapheme lists".into()));
    }
    let word_count = categorical(&words.word_count_probs, rng) + 1;
    let mut out = Vec::with_capacity(word_count);
    for w in 0..word_count {
        let letter_count = categorical(&words.letters_per_word[w], rng) + 1;
        out.push(sample_word(grammar, letter_count, rng));
    }
    Ok(NameText { words: out })
}

fn pick<'a, R: Rng + ?Sized>(list: &'a [String], rng: &mut R) -> &'a str {
    &list[rng.gen_range(0..list.len())]
}

fn sample_word<R: Rng + ?Sized>(
    grammar: &ScriptGrammar,
    letter_count: usize,
    rng: &mut R,
) -> Vec<PositionedGrapheme> {
    let mut slots: Vec<PositionedGrapheme> = Vec::with_capacity(letter_count + 2);
    // Writing-order index of the most recent consonant slot, for "before"
    // modifiers and split pre-parts.
    let mut last_consonant_slot: Option<usize> = None;
    let mut prev_class: Option<Class> = None;

    for letter in 0..letter_count {
        let is_last = letter + 1 == letter_count;
        let class = match prev_class {
            None => {
                if rng.gen::<f64>() < grammar.stationary_vowel_prob() {
                    Class::Vowel
                } else {
                    Class::Consonant
                }
            }
            Some(Class::Vowel) => {
                if rng.gen::<f64>() < grammar.p_consonant_after_vowel {
                    Class::Consonant
                } else {
                    Class::Vowel
                }
            }
            Some(Class::Consonant) => {
                if rng.gen::<f64>() < grammar.p_vowel_after_consonant {
                    Class::Vowel
                } else {
                    Class::Consonant
                }
            }
        };

        match class {
            Class::Consonant => {
                slots.push(PositionedGrapheme {
                    grapheme: pick(&grammar.consonants, rng).to_string(),
                    form: SlotForm::Independent,
                    letter,
                });
                last_consonant_slot = Some(slots.len() - 1);
                prev_class = Some(Class::Consonant);
            }
            Class::Vowel => {
                let grapheme = draw_vowel(grammar, letter == 0, is_last, rng);
                let modified = prev_class == Some(Class::Consonant);
                if !modified {
                    // Word-initial or after another vowel: original shape.
                    slots.push(PositionedGrapheme {
                        grapheme,
                        form: SlotForm::Independent,
                        letter,
                    });
                } else {
                    let placement = grammar.placement[&grapheme];
                    match placement {
                        Placement::After => slots.push(PositionedGrapheme {
                            grapheme,
                            form: SlotForm::ModAfter,
                            letter,
                        }),
                        Placement::Below => slots.push(PositionedGrapheme {
                            grapheme,
                            form: SlotForm::ModBelow,
                            letter,
                        }),
                        Placement::Above => slots.push(PositionedGrapheme {
                            grapheme,
                            form: SlotForm::ModAbove,
                            letter,
                        }),
                        Placement::Before => {
                            let at = last_consonant_slot.expect("modified vowel follows a consonant");
                            slots.insert(
                                at,
                                PositionedGrapheme {
                                    grapheme,
                                    form: SlotForm::ModBefore,
                                    letter,
                                },
                            );
                            last_consonant_slot = Some(at + 1);
                        }
                        Placement::Split => {
                            let at = last_consonant_slot.expect("modified vowel follows a consonant");
                            slots.insert(
                                at,
                                PositionedGrapheme {
                                    grapheme: grapheme.clone(),
                                    form: SlotForm::SplitPre,
                                    letter,
                                },
                            );
                            last_consonant_slot = Some(at + 1);
                            slots.push(PositionedGrapheme {
                                grapheme,
                                form: SlotForm::SplitPost,
                                letter,
                            });
                        }
                    }
                }
                prev_class = Some(Class::Vowel);
            }
        }
    }
    slots
}

fn draw_vowel<R: Rng + ?Sized>(
    grammar: &ScriptGrammar,
    word_initial: bool,
    is_last: bool,
    rng: &mut R,
) -> String {
    let pool: Vec<&String> = grammar
        .vowels
        .iter()
        .filter(|v| word_initial || !grammar.initial_only_vowels.contains(*v))
        .filter(|v| !is_last || !grammar.restricted_final_vowels.contains(*v))
        .collect();
    debug_assert!(!pool.is_empty());
    pool[rng.gen_range(0..pool.len())].clone()
}

/// Pure check of the generation rules over a produced name. Returns the list
/// of violations (empty = valid).
pub fn validate_name(name: &NameText, grammar: &ScriptGrammar) -> Vec<String> {
    let mut violations = Vec::new();
    for (wi, word) in name.words.iter().enumerate() {
        if word.is_empty() {
            violations.push(format!("word {wi} is empty"));
            continue;
        }
        let letters = name.letters_of_word(word);
        if let Some((last, _)) = letters.last() {
            if grammar.restricted_final_vowels.contains(last) {
                violations.push(format!("word {wi} ends in restricted vowel '{last}'"));
            }
        }
        for (li, (g, form)) in letters.iter().enumerate() {
            if grammar.is_vowel(g) {
                if li > 0 && grammar.initial_only_vowels.contains(g) {
                    violations.push(format!("word {wi}: initial-only vowel '{g}' at position {li}"));
                }
                // A modified vowel must carry the placement its grammar entry declares.
                let expected = grammar.placement.get(g);
                let ok = match form {
                    SlotForm::Independent => true,
                    SlotForm::ModAfter => expected == Some(&Placement::After),
                    SlotForm::ModBefore => expected == Some(&Placement::Before),
                    SlotForm::ModBelow => expected == Some(&Placement::Below),
                    SlotForm::ModAbove => expected == Some(&Placement::Above),
                    SlotForm::SplitPre | SlotForm::SplitPost => expected == Some(&Placement::Split),
                };
                if !ok {
                    violations.push(format!(
                        "word {wi}: vowel '{g}' placed as {form:?}, grammar says {expected:?}"
                    ));
                }
            } else if *form != SlotForm::Independent {
                violations.push(format!("word {wi}: consonant '{g}' in modifier form"));
            }
        }
        // Split vowels occupy exactly two slots.
        let mut split_slots: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
        for slot in word {
            if matches!(slot.form, SlotForm::SplitPre | SlotForm::SplitPost) {
                let e = split_slots.entry(slot.letter).or_insert((0, 0));
                if slot.form == SlotForm::SplitPre {
                    e.0 += 1;
                } else {
                    e.1 += 1;
                }
            }
        }
        for (letter, (pre, post)) in split_slots {
            if pre != 1 || post != 1 {
                violations.push(format!(
                    "word {wi}: split vowel at letter {letter} has {pre} pre / {post} post slots"
                ));
            }
        }
    }
    violations
}

/// Draws the six morphological parameters from their GEV rows; the letter
/// count is rounded to the nearest integer inside its bounds.
pub fn sample_morphology<R: Rng + ?Sized>(table: &GevTable, rng: &mut R) -> Result<MorphologyParams> {
    let letters_raw = table.total_letters.sample_truncated(rng)?;
    let lo = table.total_letters.min.ceil() as i64;
    let hi = table.total_letters.max.floor() as i64;
    let total_letters = (letters_raw.round() as i64).clamp(lo, hi) as u32;
    Ok(MorphologyParams {
        total_letters,
        slant_deg: table.slant_deg.sample_truncated(rng)?,
        skew_deg: table.skew_deg.sample_truncated(rng)?,
        text_width_mm: table.text_width_mm.sample_truncated(rng)?,
        text_height_mm: table.text_height_mm.sample_truncated(rng)?,
        velocity: table.velocity.sample_truncated(rng)?,
    })
}

/// A GEV table with every row collapsed to a fixed value; used by tests that
/// need exact parameter vectors.
pub fn degenerate_table(values: &MorphologyParams) -> GevTable {
    fn point(v: f64) -> GevParams {
        GevParams { xi: 0.0, sigma: 1e-9, mu: v, min: v - 1e-9, max: v + 1e-9 }
    }
    GevTable {
        total_letters: point(values.total_letters as f64),
        slant_deg: point(values.slant_deg),
        skew_deg: point(values.skew_deg),
        text_width_mm: point(values.text_width_mm),
        text_height_mm: point(values.text_height_mm),
        velocity: point(values.velocity),
    }
}

/// Sample name + morphology as one deterministic step (identity creation).
pub fn sample_signer_morphology(
    data: &crate::script::ScriptData,
    master_seed: u64,
    identity: u64,
) -> Result<(NameText, MorphologyParams)> {
    let mut r = rng::identity_stream(master_seed, identity, rng::Stage::Morphology);
    let name = sample_name(&data.grammar, &data.words, &mut r)?;
    let morph = sample_morphology(&data.gev, &mut r)?;
    Ok((name, morph))
}
