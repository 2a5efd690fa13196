//! Pen-up engrams: guide nodes for the in-air movement between two
//! disconnected components. The intermediate area is a tube around the
//! chord, widened to d/3 for the rounded Indic style; source and sink
//! areas are discs of radius d/10 around the lift and descent points.

use crate::geometry::Point;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PenUpModel {
    /// Absolute floor for the tube radius, applied when the lift-to-descent
    /// distance is very small (default: one grid spacing / 10).
    pub r_floor_mm: f64,
    /// Number of guide nodes in the intermediate area (1 or 2).
    pub intermediate_nodes: u8,
    /// Variance hook scaling all guide offsets; 0 removes the guides and
    /// leaves a straight chord connection.
    pub offset_scale: f64,
}

impl PenUpModel {
    pub fn new(r_floor_mm: f64, intermediate_nodes: u8) -> Self {
        debug_assert!(intermediate_nodes == 1 || intermediate_nodes == 2);
        PenUpModel { r_floor_mm, intermediate_nodes, offset_scale: 1.0 }
    }

    /// Tube radius for a pen-up of length `d`: d/3 with an absolute floor.
    pub fn tube_radius(&self, d: f64) -> f64 {
        (d / 3.0).max(self.r_floor_mm)
    }
}

/// Uniform in [-1, 1], zero-centred so a half-entropy rng yields 0.
fn symmetric_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * rng.gen::<f64>() - 1.0
}

fn disc_offset<R: Rng + ?Sized>(radius: f64, rng: &mut R) -> Point {
    loop {
        let x = symmetric_unit(rng);
        let y = symmetric_unit(rng);
        if x * x + y * y <= 1.0 {
            return Point::new(x * radius, y * radius);
        }
    }
}

/// Guide nodes of one pen-up: a source point near the lift, one or two
/// points inside the tube, and a sink point near the descent. The polyline
/// through them deviates from the chord by at most the tube radius.
pub fn generate_penup_engram<R: Rng + ?Sized>(
    end_a: Point,
    start_b: Point,
    model: &PenUpModel,
    rng: &mut R,
) -> Vec<Point> {
    let chord = start_b - end_a;
    let d = chord.norm();
    if d == 0.0 || model.offset_scale <= 0.0 {
        return Vec::new();
    }
    let dir = chord.normalized();
    let perp = dir.perp();
    let r_tube = model.tube_radius(d) * model.offset_scale;
    let r_end = d / 10.0 * model.offset_scale;

    let mut nodes = Vec::with_capacity(4);
    nodes.push(end_a + disc_offset(r_end, rng));
    let ts: &[(f64, f64)] =
        if model.intermediate_nodes <= 1 { &[(0.35, 0.65)] } else { &[(0.22, 0.42), (0.58, 0.78)] };
    for &(lo, hi) in ts {
        let t = lo + (hi - lo) * rng.gen::<f64>();
        let s = symmetric_unit(rng) * r_tube;
        nodes.push(end_a + dir * (t * d) + perp * s);
    }
    nodes.push(start_b + disc_offset(r_end, rng));
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point_segment_distance;
    use crate::testutil::std_dev;

    /// Largest deviation of the guide nodes from the chord.
    fn max_chord_deviation(nodes: &[Point], end_a: Point, start_b: Point) -> f64 {
        nodes.iter().map(|p| point_segment_distance(*p, end_a, start_b)).fold(0.0, f64::max)
    }
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Rng whose f64 draws are all exactly 0.5: every offset collapses to 0.
    struct HalfRng;
    impl rand::RngCore for HalfRng {
        fn next_u32(&mut self) -> u32 {
            1 << 31
        }
        fn next_u64(&mut self) -> u64 {
            1 << 63
        }
        fn fill_bytes(&mut self, dest: &mut [u8]) {
            dest.fill(0);
        }
        fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
            dest.fill(0);
            Ok(())
        }
    }

    #[test]
    fn zero_offsets_lie_on_the_chord() {
        let model = PenUpModel::new(0.25, 2);
        let a = Point::new(0.0, 0.0);
        let b = Point::new(12.0, 5.0);
        let nodes = generate_penup_engram(a, b, &model, &mut HalfRng);
        assert_eq!(nodes.len(), 4);
        for p in &nodes {
            assert!(point_segment_distance(*p, a, b) < 1e-12);
        }
    }

    #[test]
    fn tube_radius_rule() {
        // d = 30 grid-tenths with a small floor: r = d/3 = 10 grid-tenths.
        let model = PenUpModel::new(1.0, 1);
        assert!((model.tube_radius(30.0) - 10.0).abs() < 1e-12);
        // Small d: the absolute floor wins.
        assert!((model.tube_radius(0.6) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deviation_bounded_by_tube_radius_and_nondegenerate() {
        let model = PenUpModel::new(0.25, 2);
        let a = Point::new(1.0, 2.0);
        let b = Point::new(9.0, -1.0);
        let r = model.tube_radius(a.dist(b));
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut deviations = Vec::new();
        for _ in 0..10_000 {
            let nodes = generate_penup_engram(a, b, &model, &mut rng);
            let dev = max_chord_deviation(&nodes, a, b);
            assert!(dev <= r + 1e-12, "deviation {dev} exceeds tube radius {r}");
            deviations.push(dev);
        }
        assert!(std_dev(&deviations) > 1e-3, "deviation distribution is degenerate");
    }

    #[test]
    fn one_node_mode_returns_three_points() {
        let model = PenUpModel::new(0.25, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let nodes =
            generate_penup_engram(Point::new(0.0, 0.0), Point::new(5.0, 0.0), &model, &mut rng);
        assert_eq!(nodes.len(), 3);
    }

    #[test]
    fn coincident_endpoints_yield_no_guides() {
        let model = PenUpModel::new(0.25, 1);
        let p = Point::new(3.0, 3.0);
        assert!(generate_penup_engram(p, p, &model, &mut ChaCha8Rng::seed_from_u64(9)).is_empty());
    }
}
