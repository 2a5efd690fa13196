//! Engram rasterization: consecutive nodes are linked with Bresenham lines
//! on a lattice of one tenth of the grid spacing per cell, then scaled back
//! to millimetres.

use super::{PenState, Trajectory};
use crate::engram::{EngramSequence, LetterGrid, SegmentKind};
use crate::geometry::Point;

/// Raster cells per grid spacing (sub-grid resolution).
pub const RASTER_SUBDIVISIONS: f64 = 10.0;

/// Integer Bresenham line including both endpoints.
pub fn bresenham(a: (i64, i64), b: (i64, i64)) -> Vec<(i64, i64)> {
    let (mut x, mut y) = a;
    let dx = (b.0 - a.0).abs();
    let dy = -(b.1 - a.1).abs();
    let sx = if a.0 < b.0 { 1 } else { -1 };
    let sy = if a.1 < b.1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::with_capacity((dx - dy) as usize + 1);
    loop {
        out.push((x, y));
        if (x, y) == b {
            return out;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

struct Builder {
    sx: f64,
    sy: f64,
    cells: Vec<(i64, i64)>,
    pen: Vec<PenState>,
    boundaries: Vec<usize>,
    pending_cut: bool,
}

impl Builder {
    fn to_cell(&self, p: Point) -> (i64, i64) {
        ((p.x / self.sx).round() as i64, (p.y / self.sy).round() as i64)
    }

    /// Appends the line from the current end to `cell`; intermediate points
    /// take `line_pen`, the target cell takes `target_pen`. Duplicate
    /// junction cells are dropped.
    fn line_to(&mut self, cell: (i64, i64), line_pen: PenState, target_pen: PenState) {
        if self.cells.is_empty() {
            self.push(cell, target_pen);
            return;
        }
        let from = *self.cells.last().expect("non-empty");
        let chain = bresenham(from, cell);
        for (i, c) in chain.iter().enumerate().skip(1) {
            let pen = if i + 1 == chain.len() { target_pen } else { line_pen };
            self.push(*c, pen);
        }
        // Zero-length line: the node coincides with the current end; it is
        // already in place, only the cut bookkeeping may still be pending.
        if chain.len() == 1 {
            self.flush_cut();
        }
    }

    fn push(&mut self, cell: (i64, i64), pen: PenState) {
        self.cells.push(cell);
        self.pen.push(pen);
        self.flush_cut();
    }

    fn flush_cut(&mut self) {
        if self.pending_cut && self.cells.len() > 1 {
            let idx = self.cells.len() - 1;
            if self.boundaries.last() != Some(&idx) {
                self.boundaries.push(idx);
            }
            self.pending_cut = false;
        }
    }

    fn cut_here(&mut self) {
        if self.cells.len() > 1 {
            let idx = self.cells.len() - 1;
            if self.boundaries.last() != Some(&idx) {
                self.boundaries.push(idx);
            }
        }
    }
}

/// Rasterizes an engram into a trajectory. Stroke limits become stroke
/// boundaries; a new stroke also starts at every pen lift, but not at pen
/// descents (Indic "harpoon" removal).
pub fn rasterize_engram(engram: &EngramSequence, grid: &LetterGrid) -> Trajectory {
    let mut b = Builder {
        sx: grid.dx_mm / RASTER_SUBDIVISIONS,
        sy: grid.dy_mm / RASTER_SUBDIVISIONS,
        cells: Vec::new(),
        pen: Vec::new(),
        boundaries: vec![0],
        pending_cut: false,
    };

    for seg in &engram.segments {
        match seg.kind {
            SegmentKind::PenDown => {
                if seg.nodes.is_empty() {
                    continue;
                }
                // Reaching the first node of a pen-down travels in the air.
                b.line_to(b.to_cell(seg.nodes[0]), PenState::Up, PenState::Down);
                let mut node_index = vec![0usize; seg.nodes.len()];
                node_index[0] = b.cells.len().saturating_sub(1);
                for (ni, node) in seg.nodes.iter().enumerate().skip(1) {
                    b.line_to(b.to_cell(*node), PenState::Down, PenState::Down);
                    node_index[ni] = b.cells.len() - 1;
                }
                for &limit in &seg.stroke_limits {
                    if limit < node_index.len() {
                        let idx = node_index[limit];
                        // Insert in order; limits are increasing already.
                        if b.boundaries.last().map_or(true, |&l| idx > l) {
                            b.boundaries.push(idx);
                        }
                    }
                }
            }
            SegmentKind::PenUp => {
                // The lift itself is a speed minimum: cut at the last
                // pen-down point.
                b.cut_here();
                for node in &seg.nodes {
                    b.line_to(b.to_cell(*node), PenState::Up, PenState::Up);
                }
            }
        }
    }

    let points: Vec<Point> =
        b.cells.iter().map(|(cx, cy)| Point::new(*cx as f64 * b.sx, *cy as f64 * b.sy)).collect();
    let mut boundaries = b.boundaries;
    if points.is_empty() {
        boundaries.clear();
    } else {
        let last = points.len() - 1;
        if boundaries.last() != Some(&last) {
            boundaries.push(last);
        }
        boundaries.dedup();
    }
    let traj = Trajectory { points, pen: b.pen, stroke_boundaries: boundaries };
    debug_assert!(traj.check_invariants());
    traj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engram::Segment;

    #[test]
    fn axis_aligned_line() {
        assert_eq!(bresenham((0, 0), (3, 0)), [(0, 0), (1, 0), (2, 0), (3, 0)]);
    }

    #[test]
    fn slope_three_fifths_matches_midpoint_rounding() {
        // Independent oracle: y(x) = round(3x/5) with ties toward the line.
        let chain = bresenham((0, 0), (5, 3));
        assert_eq!(chain, [(0, 0), (1, 1), (2, 1), (3, 2), (4, 2), (5, 3)]);
        assert_eq!(chain.len(), 6);
        for &(x, y) in &chain {
            assert!((y as f64 - 3.0 * x as f64 / 5.0).abs() <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn reverse_direction_is_supported() {
        let chain = bresenham((5, 3), (0, 0));
        assert_eq!(chain.first(), Some(&(5, 3)));
        assert_eq!(chain.last(), Some(&(0, 0)));
        assert_eq!(chain.len(), 6);
    }

    fn grid() -> LetterGrid {
        LetterGrid::new(10.0, 10.0).unwrap() // raster cell = 1 mm
    }

    #[test]
    fn single_node_segment_is_a_single_point() {
        let engram = EngramSequence {
            segments: vec![Segment::pen_down(vec![Point::new(2.0, 3.0)], vec![], vec![])],
            letters: vec![],
        };
        let traj = rasterize_engram(&engram, &grid());
        assert_eq!(traj.points.len(), 1);
        assert_eq!(traj.points[0], Point::new(2.0, 3.0));
        assert_eq!(traj.stroke_boundaries, vec![0]);
        assert_eq!(traj.stroke_count(), 0);
    }

    #[test]
    fn nodes_become_bresenham_chains_in_mm() {
        let engram = EngramSequence {
            segments: vec![Segment::pen_down(
                vec![Point::new(0.0, 0.0), Point::new(3.0, 0.0)],
                vec![],
                vec![],
            )],
            letters: vec![],
        };
        let traj = rasterize_engram(&engram, &grid());
        let xs: Vec<f64> = traj.points.iter().map(|p| p.x).collect();
        assert_eq!(xs, [0.0, 1.0, 2.0, 3.0]);
        assert!(traj.pen.iter().all(|s| *s == PenState::Down));
    }

    #[test]
    fn stroke_limits_and_pen_lifts_cut_strokes() {
        let engram = EngramSequence {
            segments: vec![
                Segment::pen_down(
                    vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(4.0, 4.0)],
                    vec![1], // limit at the corner node
                    vec![],
                ),
                Segment::pen_up(vec![Point::new(6.0, 5.0)]),
                Segment::pen_down(
                    vec![Point::new(8.0, 4.0), Point::new(8.0, 0.0)],
                    vec![],
                    vec![],
                ),
            ],
            letters: vec![],
        };
        let traj = rasterize_engram(&engram, &grid());
        // Strokes: [start..corner], [corner..lift], [lift..end] (the pen-up
        // merges with the second pen-down: no cut at the descent).
        assert_eq!(traj.stroke_count(), 3);
        let corner = traj.points.iter().position(|p| *p == Point::new(4.0, 0.0)).unwrap();
        assert_eq!(traj.stroke_boundaries[1], corner);
        let lift = traj.points.iter().position(|p| *p == Point::new(4.0, 4.0)).unwrap();
        assert_eq!(traj.stroke_boundaries[2], lift);
        // Last stroke spans in-air points and the final pen-down.
        assert!(traj.stroke_has_pen_up(2));
        let down_count = traj.pen.iter().filter(|s| **s == PenState::Down).count();
        assert!(down_count > 0 && down_count < traj.points.len());
        assert!(traj.check_invariants());
    }

    #[test]
    fn duplicate_junction_points_are_removed() {
        let engram = EngramSequence {
            segments: vec![Segment::pen_down(
                vec![Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(2.0, 0.0), Point::new(2.0, 2.0)],
                vec![],
                vec![],
            )],
            letters: vec![],
        };
        let traj = rasterize_engram(&engram, &grid());
        for w in traj.points.windows(2) {
            assert_ne!(w[0], w[1], "consecutive duplicate point");
        }
    }

    #[test]
    fn consecutive_spacing_bounded_by_cell_diagonal() {
        let engram = EngramSequence {
            segments: vec![Segment::pen_down(
                vec![Point::new(0.0, 0.0), Point::new(7.0, 3.0), Point::new(2.0, 9.0)],
                vec![1],
                vec![],
            )],
            letters: vec![],
        };
        let traj = rasterize_engram(&engram, &grid());
        let step = 2.0f64.sqrt() + 1e-12;
        for w in traj.points.windows(2) {
            assert!(w[0].dist(w[1]) <= step);
        }
    }
}
