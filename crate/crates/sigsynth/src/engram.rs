//! Cognitive action plan of a signature: letter engrams on the 15x12 grid,
//! composed into an alternating pen-down / pen-up segment sequence, with
//! matra (headline) insertion and curved pen-up guides.

mod compose;
mod inventory;
mod matra;
mod penup;
mod validate;

pub use compose::{compose_text_engram, compose_with_variants, plan_variants, Spacing};
pub use inventory::{EngramForm, EngramInventory, LetterEngram};
pub use matra::{apply_matra, MatraPolicy};
pub use penup::{generate_penup_engram, PenUpModel};
pub use validate::{validate_engram, Violation};

use crate::geometry::Point;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Writer-specific letter grid: 15 rows x 12 columns, baseline on row 10,
/// upper line on row 5, with per-writer node spacing in mm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LetterGrid {
    pub dx_mm: f64,
    pub dy_mm: f64,
}

impl LetterGrid {
    pub const ROWS: u16 = 15;
    pub const COLS: u16 = 12;
    pub const BASELINE_ROW: u16 = 10;
    pub const UPPERLINE_ROW: u16 = 5;
    pub const NODE_COUNT: u16 = Self::ROWS * Self::COLS;

    pub fn new(dx_mm: f64, dy_mm: f64) -> Result<Self> {
        if !(dx_mm > 0.0) || !(dy_mm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid spacing must be positive, got ({dx_mm}, {dy_mm})"
            )));
        }
        Ok(LetterGrid { dx_mm, dy_mm })
    }

    /// Row and column (both 1-based) of a node index in 1..=180.
    pub fn row_col(index: u16) -> Result<(u16, u16)> {
        if index < 1 || index > Self::NODE_COUNT {
            return Err(Error::InvalidParameter(format!(
                "grid node index {index} outside 1..={}",
                Self::NODE_COUNT
            )));
        }
        let row = (index - 1) / Self::COLS + 1;
        let col = (index - 1) % Self::COLS + 1;
        Ok((row, col))
    }

    pub fn index(row: u16, col: u16) -> u16 {
        (row - 1) * Self::COLS + col
    }

    /// Node position in the letter-box frame: x right, y up, row 15 at y=0.
    pub fn node_position(&self, index: u16) -> Result<Point> {
        let (row, col) = Self::row_col(index)?;
        Ok(Point::new(
            (col - 1) as f64 * self.dx_mm,
            (Self::ROWS - row) as f64 * self.dy_mm,
        ))
    }

    pub fn baseline_y(&self) -> f64 {
        (Self::ROWS - Self::BASELINE_ROW) as f64 * self.dy_mm
    }

    pub fn upperline_y(&self) -> f64 {
        (Self::ROWS - Self::UPPERLINE_ROW) as f64 * self.dy_mm
    }

    /// Mean node spacing, the unit for pen-up radii and filter inertia.
    pub fn spacing(&self) -> f64 {
        0.5 * (self.dx_mm + self.dy_mm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentKind {
    PenDown,
    PenUp,
}

/// One alternating piece of the plan. Pen-up segments hold only the guide
/// nodes between the surrounding pen-downs (their endpoints are implied),
/// and never carry stroke limits: the pen-up and the start of the next
/// pen-down share one speed cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub kind: SegmentKind,
    pub nodes: Vec<Point>,
    /// 0-based interior node positions marking speed minima (stroke limits).
    pub stroke_limits: Vec<usize>,
    /// Points the final trajectory must pass through (self-intersections and
    /// shared stroke junctions), in the same frame as `nodes`.
    pub contact_points: Vec<Point>,
}

impl Segment {
    pub fn pen_down(nodes: Vec<Point>, stroke_limits: Vec<usize>, contact_points: Vec<Point>) -> Self {
        Segment { kind: SegmentKind::PenDown, nodes, stroke_limits, contact_points }
    }

    pub fn pen_up(nodes: Vec<Point>) -> Self {
        Segment {
            kind: SegmentKind::PenUp,
            nodes,
            stroke_limits: Vec::new(),
            contact_points: Vec::new(),
        }
    }
}

/// Horizontal extent and headline connectivity of one advancing letter slot,
/// used for matra placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LetterBox {
    pub word: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub connects_headline: bool,
    /// An above/below modifier hangs on this letter, so it never connects
    /// to the following character (only to the previous one).
    pub blocks_following: bool,
}

/// The composed signature plan: segments in drawing order plus per-letter
/// metadata.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct EngramSequence {
    pub segments: Vec<Segment>,
    pub letters: Vec<LetterBox>,
}

impl EngramSequence {
    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn pen_down_segments(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter().filter(|s| s.kind == SegmentKind::PenDown)
    }

    /// Bounding box over all nodes (pen-down and pen-up).
    pub fn bounding_box(&self) -> Option<(Point, Point)> {
        let mut it = self.segments.iter().flat_map(|s| s.nodes.iter());
        let first = *it.next()?;
        let mut lo = first;
        let mut hi = first;
        for p in it {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    /// Applies a point transform to every node and contact point.
    pub fn transform(&mut self, f: impl Fn(Point) -> Point) {
        for seg in &mut self.segments {
            for p in &mut seg.nodes {
                *p = f(*p);
            }
            for p in &mut seg.contact_points {
                *p = f(*p);
            }
        }
        for lb in &mut self.letters {
            let a = f(Point::new(lb.x_min, 0.0)).x;
            let b = f(Point::new(lb.x_max, 0.0)).x;
            lb.x_min = a.min(b);
            lb.x_max = a.max(b);
        }
    }
}
