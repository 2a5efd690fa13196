//! Letter engram concatenation: places each slot of the name left to right
//! on the writer's grid, chooses variants, detects contact points and links
//! consecutive pen-downs with pen-up engrams.

use super::inventory::{EngramForm, EngramInventory};
use super::penup::{generate_penup_engram, PenUpModel};
use super::{EngramSequence, LetterBox, LetterGrid, Segment};
use crate::geometry::Point;
use crate::morphology::NameText;
use crate::Result;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Gaps between letter boxes and between words, in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spacing {
    pub letter_gap_mm: f64,
    pub word_gap_mm: f64,
}

/// Picks one stored variant per slot, uniformly at random. The returned plan
/// can be replayed (and selectively swapped) when generating duplicates.
pub fn plan_variants<R: Rng + ?Sized>(
    name: &NameText,
    inventory: &EngramInventory,
    rng: &mut R,
) -> Result<Vec<usize>> {
    let mut plan = Vec::new();
    for word in &name.words {
        for slot in word {
            let variants = inventory.require(&slot.grapheme, EngramForm::from(slot.form))?;
            plan.push(rng.gen_range(0..variants.len()));
        }
    }
    Ok(plan)
}

/// Contact points: coordinates visited more than once, non-consecutively,
/// within one pen-down segment (self-intersections at node level and
/// junctions where two strokes share a node).
fn detect_contacts(nodes: &[Point]) -> Vec<Point> {
    let mut seen: HashMap<(u64, u64), usize> = HashMap::new();
    let mut contacts = Vec::new();
    for (i, p) in nodes.iter().enumerate() {
        let key = (p.x.to_bits(), p.y.to_bits());
        match seen.get(&key) {
            Some(&j) if i > j + 1 => {
                if !contacts.contains(p) {
                    contacts.push(*p);
                }
            }
            _ => {}
        }
        seen.insert(key, i);
    }
    contacts
}

/// Composes the signature engram with freshly drawn variants.
pub fn compose_text_engram<R: Rng + ?Sized>(
    name: &NameText,
    inventory: &EngramInventory,
    grid: &LetterGrid,
    spacing: Spacing,
    penup: &PenUpModel,
    rng: &mut R,
) -> Result<EngramSequence> {
    let plan = plan_variants(name, inventory, rng)?;
    compose_with_variants(name, inventory, grid, spacing, penup, &plan, rng)
}

/// Composes with an explicit variant plan (one entry per slot, flattened
/// across words in writing order).
pub fn compose_with_variants<R: Rng + ?Sized>(
    name: &NameText,
    inventory: &EngramInventory,
    grid: &LetterGrid,
    spacing: Spacing,
    penup: &PenUpModel,
    plan: &[usize],
    rng: &mut R,
) -> Result<EngramSequence> {
    let mut seq = EngramSequence::default();
    let mut cursor_x = 0.0f64;
    let mut slot_idx = 0usize;
    let mut prev_end: Option<Point> = None;

    for (wi, word) in name.words.iter().enumerate() {
        if wi > 0 {
            cursor_x += spacing.word_gap_mm - spacing.letter_gap_mm;
        }
        for slot in word {
            let form = EngramForm::from(slot.form);
            let variants = inventory.require(&slot.grapheme, form)?;
            let engram = &variants[plan[slot_idx].min(variants.len() - 1)];
            slot_idx += 1;

            let local: Vec<Point> = engram
                .nodes
                .iter()
                .map(|&n| grid.node_position(n))
                .collect::<Result<_>>()?;
            let (lo_x, hi_x) = local.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.x), hi.max(p.x))
            });

            let x_off = if slot.form.advances() {
                cursor_x - lo_x
            } else {
                // Above/below modifiers centre over the letter they attach to.
                match seq.letters.last() {
                    Some(lb) => 0.5 * (lb.x_min + lb.x_max) - 0.5 * (lo_x + hi_x),
                    None => cursor_x - lo_x,
                }
            };
            let nodes: Vec<Point> = local.iter().map(|p| Point::new(p.x + x_off, p.y)).collect();
            let contacts = detect_contacts(&nodes);
            let start = nodes[0];

            if let Some(end) = prev_end {
                seq.segments.push(Segment::pen_up(generate_penup_engram(end, start, penup, rng)));
            }
            prev_end = Some(*nodes.last().expect("non-empty engram"));
            seq.segments.push(Segment::pen_down(nodes, engram.minima.clone(), contacts));

            if slot.form.advances() {
                seq.letters.push(LetterBox {
                    word: wi,
                    x_min: lo_x + x_off,
                    x_max: hi_x + x_off,
                    connects_headline: engram.headline,
                    blocks_following: false,
                });
                cursor_x = hi_x + x_off + spacing.letter_gap_mm;
            } else if let Some(lb) = seq.letters.last_mut() {
                lb.blocks_following = true;
            }
        }
    }
    Ok(seq)
}
