//! Matra insertion: horizontal headline segments over randomly chosen
//! contiguous character spans at the upper line row.
//!
//! Each inter-character junction is bridged independently with the
//! per-character probability; maximal runs of bridged junctions form one
//! matra, extended at both ends by an elongation draw.

use super::penup::{generate_penup_engram, PenUpModel};
use super::{EngramSequence, LetterGrid, Segment, SegmentKind};
use crate::geometry::Point;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatraPolicy {
    /// Probability that a junction between two headline-connected
    /// characters is bridged.
    pub per_character_prob: f64,
    /// Elongation added beyond each matra end, drawn uniformly (mm).
    pub elongation_range: (f64, f64),
}

impl MatraPolicy {
    pub fn never() -> Self {
        MatraPolicy { per_character_prob: 0.0, elongation_range: (0.0, 0.0) }
    }
}

fn draw_elongation<R: Rng + ?Sized>(range: (f64, f64), rng: &mut R) -> f64 {
    if range.1 > range.0 {
        rng.gen_range(range.0..range.1)
    } else {
        range.0
    }
}

/// Adds matra segments to a composed engram. Characters whose modifiers
/// finish above or below never bridge to the following character. Returns
/// the engram unchanged when nothing bridges.
pub fn apply_matra<R: Rng + ?Sized>(
    engram: &EngramSequence,
    policy: &MatraPolicy,
    penup: &PenUpModel,
    grid: &LetterGrid,
    rng: &mut R,
) -> EngramSequence {
    let mut out = engram.clone();
    if engram.letters.len() < 2 {
        return out;
    }
    let y = grid.upperline_y();

    // Bridged junction draws, per word, in letter order.
    let mut spans: Vec<(usize, usize)> = Vec::new(); // inclusive letter index ranges
    let mut run_start: Option<usize> = None;
    for i in 0..engram.letters.len() - 1 {
        let a = &engram.letters[i];
        let b = &engram.letters[i + 1];
        let bridgeable =
            a.word == b.word && a.connects_headline && b.connects_headline && !a.blocks_following;
        let bridged = bridgeable && rng.gen::<f64>() < policy.per_character_prob;
        if bridged {
            run_start.get_or_insert(i);
        } else if let Some(s) = run_start.take() {
            spans.push((s, i));
        }
    }
    if let Some(s) = run_start.take() {
        spans.push((s, engram.letters.len() - 1));
    }

    for (s, e) in spans {
        let x0 = engram.letters[s].x_min - draw_elongation(policy.elongation_range, rng);
        let x1 = engram.letters[e].x_max + draw_elongation(policy.elongation_range, rng);
        let start = Point::new(x0, y);
        let end = Point::new(x1, y);
        if let Some(last) = out.segments.iter().rev().find(|s| s.kind == SegmentKind::PenDown) {
            let from = *last.nodes.last().expect("pen-down segments are non-empty");
            out.segments.push(Segment::pen_up(generate_penup_engram(from, start, penup, rng)));
        }
        out.segments.push(Segment::pen_down(vec![start, end], Vec::new(), Vec::new()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engram::{compose_text_engram, EngramInventory, Spacing};
    use crate::morphology::{NameText, PositionedGrapheme, SlotForm};
    use crate::script::ScriptKind;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn word_of(graphemes: &[&str]) -> NameText {
        NameText {
            words: vec![graphemes
                .iter()
                .enumerate()
                .map(|(i, g)| PositionedGrapheme {
                    grapheme: g.to_string(),
                    form: SlotForm::Independent,
                    letter: i,
                })
                .collect()],
        }
    }

    fn composed(graphemes: &[&str]) -> (EngramSequence, LetterGrid, PenUpModel) {
        let inv = EngramInventory::builtin(ScriptKind::Devanagari);
        let grid = LetterGrid::new(2.0, 2.0).unwrap();
        let penup = PenUpModel::new(0.2, 1);
        let spacing = Spacing { letter_gap_mm: 3.0, word_gap_mm: 8.0 };
        let name = word_of(graphemes);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let seq = compose_text_engram(&name, &inv, &grid, spacing, &penup, &mut rng).unwrap();
        (seq, grid, penup)
    }

    #[test]
    fn zero_probability_is_a_no_op() {
        let (seq, grid, penup) = composed(&["क", "म", "र"]);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = apply_matra(&seq, &MatraPolicy::never(), &penup, &grid, &mut rng);
        assert_eq!(out, seq);
    }

    #[test]
    fn forced_matra_spans_the_word() {
        let (seq, grid, penup) = composed(&["क", "म", "र"]);
        let policy = MatraPolicy { per_character_prob: 1.0, elongation_range: (0.0, 0.0) };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let out = apply_matra(&seq, &policy, &penup, &grid, &mut rng);
        let added: Vec<&Segment> = out.segments[seq.segments.len()..]
            .iter()
            .filter(|s| s.kind == SegmentKind::PenDown)
            .collect();
        assert_eq!(added.len(), 1, "exactly one headline segment");
        let m = added[0];
        assert_eq!(m.nodes.len(), 2);
        assert!((m.nodes[0].y - grid.upperline_y()).abs() < 1e-12);
        assert!((m.nodes[0].x - seq.letters[0].x_min).abs() < 1e-9);
        assert!((m.nodes[1].x - seq.letters[2].x_max).abs() < 1e-9);
    }

    #[test]
    fn matra_count_matches_exhaustive_expectation() {
        // 4 letters -> 3 junctions, each bridged with p = 0.5. Enumerate the
        // 8 outcomes: expected number of maximal runs = p + 2 p (1-p) = 1.0.
        let p: f64 = 0.5;
        let mut expected = 0.0;
        for mask in 0u32..8 {
            let bits = [(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0];
            let mut runs = 0;
            for i in 0..3 {
                if bits[i] && (i == 0 || !bits[i - 1]) {
                    runs += 1;
                }
            }
            let prob: f64 = bits
                .iter()
                .map(|b| if *b { p } else { 1.0 - p })
                .product();
            expected += runs as f64 * prob;
        }
        assert!((expected - 1.0).abs() < 1e-12);

        let (seq, grid, penup) = composed(&["क", "म", "र", "ल"]);
        assert!(seq.letters.iter().all(|l| l.connects_headline && !l.blocks_following));
        let policy = MatraPolicy { per_character_prob: p, elongation_range: (0.0, 0.5) };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 10_000usize;
        let mut total = 0usize;
        for _ in 0..n {
            let out = apply_matra(&seq, &policy, &penup, &grid, &mut rng);
            total += out
                .segments
                .iter()
                .skip(seq.segments.len())
                .filter(|s| s.kind == SegmentKind::PenDown)
                .count();
        }
        let mean = total as f64 / n as f64;
        // Per-sample variance of the run count at p=0.5 is 0.5; 3 sigma of
        // the mean over 10^4 samples is ~0.021.
        assert!((mean - expected).abs() < 0.022, "mean matra count {mean} vs {expected}");
    }

    #[test]
    fn above_modifier_blocks_the_following_junction() {
        let inv = EngramInventory::builtin(ScriptKind::Devanagari);
        let grid = LetterGrid::new(2.0, 2.0).unwrap();
        let penup = PenUpModel::new(0.2, 1);
        let spacing = Spacing { letter_gap_mm: 3.0, word_gap_mm: 8.0 };
        // ka + above-modifier + ma: the junction ka->ma is blocked.
        let name = NameText {
            words: vec![vec![
                PositionedGrapheme { grapheme: "क".into(), form: SlotForm::Independent, letter: 0 },
                PositionedGrapheme { grapheme: "ए".into(), form: SlotForm::ModAbove, letter: 1 },
                PositionedGrapheme { grapheme: "म".into(), form: SlotForm::Independent, letter: 2 },
            ]],
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let seq = compose_text_engram(&name, &inv, &grid, spacing, &penup, &mut rng).unwrap();
        let policy = MatraPolicy { per_character_prob: 1.0, elongation_range: (0.0, 0.0) };
        let out = apply_matra(&seq, &policy, &penup, &grid, &mut rng);
        assert_eq!(out, seq, "blocked junction must not bridge");
    }
}
