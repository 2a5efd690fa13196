//! Report-only structural checks over a composed engram.

use super::{EngramSequence, LetterGrid, SegmentKind};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// Two consecutive segments share a kind, or the sequence starts pen-up.
    Alternation { index: usize },
    EmptyPenDown { segment: usize },
    /// Node coordinate non-finite or far outside the grid's vertical band.
    OutOfBounds { segment: usize, node: usize },
    LimitOutOfRange { segment: usize, value: usize },
    LimitsNotIncreasing { segment: usize },
    LimitOnPenUp { segment: usize },
    ContactOffSegment { segment: usize, contact: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Alternation { index } => write!(f, "segment {index}: alternation broken"),
            Violation::EmptyPenDown { segment } => write!(f, "segment {segment}: empty pen-down"),
            Violation::OutOfBounds { segment, node } => {
                write!(f, "segment {segment}: node {node} out of bounds")
            }
            Violation::LimitOutOfRange { segment, value } => {
                write!(f, "segment {segment}: stroke limit {value} out of range")
            }
            Violation::LimitsNotIncreasing { segment } => {
                write!(f, "segment {segment}: stroke limits not strictly increasing")
            }
            Violation::LimitOnPenUp { segment } => {
                write!(f, "segment {segment}: pen-up segment carries stroke limits")
            }
            Violation::ContactOffSegment { segment, contact } => {
                write!(f, "segment {segment}: contact {contact} not on the segment")
            }
        }
    }
}

/// Checks alternation, bounds, stroke-limit monotonicity and contact-point
/// membership. Returns all violations found (empty = valid).
pub fn validate_engram(engram: &EngramSequence, grid: &LetterGrid) -> Vec<Violation> {
    let mut out = Vec::new();
    // Vertical band of the grid plus two spacings of slack for pen-up tubes.
    let slack = 2.0 * grid.spacing();
    let y_lo = -slack;
    let y_hi = (LetterGrid::ROWS - 1) as f64 * grid.dy_mm + slack;

    let mut prev_kind: Option<SegmentKind> = None;
    for (si, seg) in engram.segments.iter().enumerate() {
        match (prev_kind, seg.kind) {
            (None, SegmentKind::PenUp) => out.push(Violation::Alternation { index: si }),
            (Some(k), kind) if k == kind => out.push(Violation::Alternation { index: si }),
            _ => {}
        }
        prev_kind = Some(seg.kind);

        if seg.kind == SegmentKind::PenDown && seg.nodes.is_empty() {
            out.push(Violation::EmptyPenDown { segment: si });
        }
        for (ni, p) in seg.nodes.iter().enumerate() {
            if !p.x.is_finite() || !p.y.is_finite() || p.y < y_lo || p.y > y_hi {
                out.push(Violation::OutOfBounds { segment: si, node: ni });
            }
        }
        if seg.kind == SegmentKind::PenUp && !seg.stroke_limits.is_empty() {
            out.push(Violation::LimitOnPenUp { segment: si });
            continue;
        }
        let mut prev_limit: Option<usize> = None;
        for &l in &seg.stroke_limits {
            if l == 0 || l + 1 >= seg.nodes.len() {
                out.push(Violation::LimitOutOfRange { segment: si, value: l });
            }
            if let Some(p) = prev_limit {
                if l <= p {
                    out.push(Violation::LimitsNotIncreasing { segment: si });
                }
            }
            prev_limit = Some(l);
        }
        for (ci, c) in seg.contact_points.iter().enumerate() {
            if !seg.nodes.iter().any(|n| n.dist(*c) < 1e-9) {
                out.push(Violation::ContactOffSegment { segment: si, contact: ci });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engram::{
        compose_text_engram, EngramInventory, PenUpModel, Segment, Spacing,
    };
    use crate::geometry::Point;
    use crate::morphology::{sample_name, validate_name};
    use crate::script::{ScriptData, ScriptKind};
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn composed_sample(seed: u64) -> (EngramSequence, LetterGrid) {
        let data = ScriptData::builtin(ScriptKind::Bengali);
        let inv = EngramInventory::builtin(ScriptKind::Bengali);
        let grid = LetterGrid::new(2.0, 2.0).unwrap();
        let penup = PenUpModel::new(0.2, 1);
        let spacing = Spacing { letter_gap_mm: 3.0, word_gap_mm: 8.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let name = sample_name(&data.grammar, &data.words, &mut rng).unwrap();
        assert!(validate_name(&name, &data.grammar).is_empty());
        let seq = compose_text_engram(&name, &inv, &grid, spacing, &penup, &mut rng).unwrap();
        (seq, grid)
    }

    #[test]
    fn composed_engrams_are_valid() {
        for seed in 0..50 {
            let (seq, grid) = composed_sample(seed);
            let report = validate_engram(&seq, &grid);
            assert!(report.is_empty(), "seed {seed}: {report:?}");
        }
    }

    #[test]
    fn non_monotone_limits_are_reported() {
        let (mut seq, grid) = composed_sample(1);
        seq.segments[0].stroke_limits = vec![5, 3];
        let report = validate_engram(&seq, &grid);
        assert!(report.iter().any(|v| matches!(v, Violation::LimitsNotIncreasing { .. })));
    }

    /// Every corruption class the fuzzer can produce must be detected.
    #[test]
    fn fuzzed_corruptions_are_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for round in 0..200 {
            let (mut seq, grid) = composed_sample(round % 10);
            let class = rng.gen_range(0..6);
            let seg_count = seq.segments.len();
            let pick = rng.gen_range(0..seg_count);
            let expected_kind: fn(&Violation) -> bool = match class {
                0 => {
                    // Break alternation by duplicating a segment.
                    let s = seq.segments[pick].clone();
                    seq.segments.insert(pick, s);
                    |v| matches!(v, Violation::Alternation { .. })
                }
                1 => {
                    // Out-of-band node.
                    let seg =
                        seq.segments.iter_mut().find(|s| !s.nodes.is_empty()).expect("nodes");
                    seg.nodes.push(Point::new(0.0, 1e6));
                    |v| matches!(v, Violation::OutOfBounds { .. })
                }
                2 => {
                    // Non-monotone limits on the first pen-down.
                    let seg = seq
                        .segments
                        .iter_mut()
                        .find(|s| s.kind == SegmentKind::PenDown)
                        .expect("pen-down");
                    seg.stroke_limits = vec![2, 1];
                    |v| matches!(v, Violation::LimitsNotIncreasing { .. })
                }
                3 => {
                    // Limit beyond the node list.
                    let seg = seq
                        .segments
                        .iter_mut()
                        .find(|s| s.kind == SegmentKind::PenDown)
                        .expect("pen-down");
                    seg.stroke_limits = vec![seg.nodes.len() + 3];
                    |v| matches!(v, Violation::LimitOutOfRange { .. })
                }
                4 => {
                    // Contact point off the segment.
                    let seg = seq
                        .segments
                        .iter_mut()
                        .find(|s| s.kind == SegmentKind::PenDown)
                        .expect("pen-down");
                    seg.contact_points.push(Point::new(-1e3, -1e3));
                    |v| matches!(v, Violation::ContactOffSegment { .. })
                }
                _ => {
                    // Stroke limit on a pen-up segment.
                    match seq.segments.iter_mut().find(|s| s.kind == SegmentKind::PenUp) {
                        Some(seg) => seg.stroke_limits = vec![1],
                        None => {
                            // Single-letter name: synthesize a trailing pen-up.
                            seq.segments.push(Segment {
                                kind: SegmentKind::PenUp,
                                nodes: vec![],
                                stroke_limits: vec![1],
                                contact_points: vec![],
                            });
                        }
                    }
                    |v| matches!(v, Violation::LimitOnPenUp { .. })
                }
            };
            let report = validate_engram(&seq, &grid);
            assert!(
                report.iter().any(expected_kind),
                "round {round} class {class}: corruption missed screening, report {report:?}"
            );
        }
    }
}
