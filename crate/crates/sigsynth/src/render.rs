//! Offline signature rendering: a circular nib stamped along the pen-down
//! path, opacity falling with local speed, multiplicative grain noise, and
//! a binary PGM (P5) writer. This ink model is a documented substitute kept
//! behind a small interface.

use crate::kinematics::OnlineSignature;
use crate::motor::{PenState, Trajectory};
use crate::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Monotone nonincreasing map from local pen speed (mm/s) to ink opacity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpeedDarkness {
    /// Opacity at or below the slow knee.
    pub slow_opacity: f64,
    /// Opacity at or above the fast knee.
    pub fast_opacity: f64,
    /// Speed (mm/s) below which ink is fully dark.
    pub slow_speed: f64,
    /// Speed (mm/s) above which ink is lightest.
    pub fast_speed: f64,
}

impl Default for SpeedDarkness {
    fn default() -> Self {
        SpeedDarkness { slow_opacity: 0.95, fast_opacity: 0.45, slow_speed: 20.0, fast_speed: 220.0 }
    }
}

impl SpeedDarkness {
    pub fn opacity(&self, speed: f64) -> f64 {
        if speed <= self.slow_speed {
            self.slow_opacity
        } else if speed >= self.fast_speed {
            self.fast_opacity
        } else {
            let t = (speed - self.slow_speed) / (self.fast_speed - self.slow_speed);
            self.slow_opacity + t * (self.fast_opacity - self.slow_opacity)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InkModel {
    pub nib_radius_mm: f64,
    pub dpi: u32,
    /// Std of the multiplicative per-stamp grain noise; 0 disables it.
    pub grain_std: f64,
    pub speed_darkness: SpeedDarkness,
}

impl Default for InkModel {
    fn default() -> Self {
        InkModel {
            nib_radius_mm: 0.30,
            dpi: 600,
            grain_std: 0.05,
            speed_darkness: SpeedDarkness::default(),
        }
    }
}

/// Grayscale raster, 0 = black ink, 255 = white background.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureImage {
    pub width: u32,
    pub height: u32,
    pub dpi: u32,
    pub pixels: Vec<u8>,
}

impl SignatureImage {
    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[(y * self.width + x) as usize]
    }

    /// Binary PGM (P5) with a fixed header layout.
    pub fn to_pgm(&self) -> Vec<u8> {
        let header = format!("P5\n{} {}\n255\n", self.width, self.height);
        let mut out = Vec::with_capacity(header.len() + self.pixels.len());
        out.extend_from_slice(header.as_bytes());
        out.extend_from_slice(&self.pixels);
        out
    }
}

struct Canvas {
    img: SignatureImage,
    px_per_mm: f64,
    x0: f64,
    y1: f64,
    nib_px: f64,
}

impl Canvas {
    fn new(lo: (f64, f64), hi: (f64, f64), ink: &InkModel) -> Result<Canvas> {
        let px_per_mm = ink.dpi as f64 / 25.4;
        let margin = 2.0 * ink.nib_radius_mm;
        let w_mm = hi.0 - lo.0 + 2.0 * margin;
        let h_mm = hi.1 - lo.1 + 2.0 * margin;
        let width = (w_mm * px_per_mm).ceil() as u32 + 1;
        let height = (h_mm * px_per_mm).ceil() as u32 + 1;
        if width as u64 * height as u64 > 400_000_000 {
            return Err(Error::InvalidParameter(format!(
                "image {width}x{height} exceeds the sanity cap"
            )));
        }
        Ok(Canvas {
            img: SignatureImage {
                width,
                height,
                dpi: ink.dpi,
                pixels: vec![255u8; (width * height) as usize],
            },
            px_per_mm,
            x0: lo.0 - margin,
            y1: hi.1 + margin,
            nib_px: (ink.nib_radius_mm * px_per_mm).max(0.4),
        })
    }

    fn to_px(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) * self.px_per_mm, (self.y1 - y) * self.px_per_mm)
    }

    fn stamp(&mut self, x_mm: f64, y_mm: f64, opacity: f64) {
        let (cx, cy) = self.to_px(x_mm, y_mm);
        let r = self.nib_px;
        let value = (255.0 * (1.0 - opacity.clamp(0.0, 1.0))).round() as u8;
        let x_lo = (cx - r).floor().max(0.0) as i64;
        let x_hi = (cx + r).ceil().min(self.img.width as f64 - 1.0) as i64;
        let y_lo = (cy - r).floor().max(0.0) as i64;
        let y_hi = (cy + r).ceil().min(self.img.height as f64 - 1.0) as i64;
        for py in y_lo..=y_hi {
            for px in x_lo..=x_hi {
                let dx = px as f64 - cx;
                let dy = py as f64 - cy;
                if dx * dx + dy * dy <= r * r {
                    let idx = (py as u32 * self.img.width + px as u32) as usize;
                    self.img.pixels[idx] = self.img.pixels[idx].min(value);
                }
            }
        }
    }
}

fn grain<R: Rng + ?Sized>(std: f64, rng: &mut R) -> f64 {
    if std <= 0.0 {
        1.0
    } else {
        (1.0 + Normal::new(0.0, std).expect("valid std").sample(rng)).clamp(0.4, 1.6)
    }
}

/// Renders the offline image from a timed online signature (speed-dependent
/// opacity). Sub-pixel stamping along each pen-down sample pair keeps the
/// run continuous even when a sample step spans many pixels.
pub fn render_online<R: Rng + ?Sized>(
    sig: &OnlineSignature,
    ink: &InkModel,
    rng: &mut R,
) -> Result<SignatureImage> {
    let down: Vec<usize> = (0..sig.samples.len())
        .filter(|&i| sig.samples[i].pen == PenState::Down)
        .collect();
    if down.is_empty() {
        return Err(Error::DegenerateImage);
    }
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for &i in &down {
        let s = &sig.samples[i];
        lo = (lo.0.min(s.x), lo.1.min(s.y));
        hi = (hi.0.max(s.x), hi.1.max(s.y));
    }
    let mut canvas = Canvas::new(lo, hi, ink)?;
    let step_mm = 25.4 / ink.dpi as f64 * 0.7;

    for w in sig.samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.pen != PenState::Down || b.pen != PenState::Down {
            continue;
        }
        let dist = (b.x - a.x).hypot(b.y - a.y);
        let speed = dist * sig.fm_hz;
        let alpha = ink.speed_darkness.opacity(speed) * grain(ink.grain_std, rng);
        let n = (dist / step_mm).ceil().max(1.0) as usize;
        for k in 0..=n {
            let t = k as f64 / n as f64;
            canvas.stamp(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t, alpha);
        }
    }
    // Isolated pen-down samples (no down neighbour) still leave a dot.
    for &i in &down {
        let isolated = (i == 0 || sig.samples[i - 1].pen != PenState::Down)
            && (i + 1 >= sig.samples.len() || sig.samples[i + 1].pen != PenState::Down);
        if isolated {
            let s = &sig.samples[i];
            let alpha = ink.speed_darkness.slow_opacity * grain(ink.grain_std, rng);
            canvas.stamp(s.x, s.y, alpha);
        }
    }
    Ok(canvas.img)
}

/// Renders directly from a trajectory (no timing): constant slow-ink
/// opacity with grain.
pub fn render_trajectory<R: Rng + ?Sized>(
    traj: &Trajectory,
    ink: &InkModel,
    rng: &mut R,
) -> Result<SignatureImage> {
    let down: Vec<usize> =
        (0..traj.points.len()).filter(|&i| traj.pen[i] == PenState::Down).collect();
    if down.is_empty() {
        return Err(Error::DegenerateImage);
    }
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for &i in &down {
        let p = traj.points[i];
        lo = (lo.0.min(p.x), lo.1.min(p.y));
        hi = (hi.0.max(p.x), hi.1.max(p.y));
    }
    let mut canvas = Canvas::new(lo, hi, ink)?;
    let step_mm = 25.4 / ink.dpi as f64 * 0.7;
    for w in traj.points.windows(2).zip(traj.pen.windows(2)) {
        let ((pts, pens), _) = (w, ());
        if pens[0] != PenState::Down || pens[1] != PenState::Down {
            continue;
        }
        let dist = pts[0].dist(pts[1]);
        let alpha = ink.speed_darkness.slow_opacity * grain(ink.grain_std, rng);
        let n = (dist / step_mm).ceil().max(1.0) as usize;
        for k in 0..=n {
            let t = k as f64 / n as f64;
            canvas.stamp(pts[0].x + (pts[1].x - pts[0].x) * t, pts[0].y + (pts[1].y - pts[0].y) * t, alpha);
        }
    }
    Ok(canvas.img)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::OnlineSample;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn ink_quiet() -> InkModel {
        InkModel { grain_std: 0.0, ..InkModel::default() }
    }

    fn horizontal_stroke(len_mm: f64, n: usize, fm: f64) -> OnlineSignature {
        let samples = (0..n)
            .map(|i| OnlineSample {
                x: len_mm * i as f64 / (n - 1) as f64,
                y: 0.0,
                t: i as f64 / fm,
                pen: PenState::Down,
            })
            .collect();
        OnlineSignature { samples, fm_hz: fm }
    }

    #[test]
    fn single_point_renders_a_centred_disc() {
        let sig = OnlineSignature {
            samples: vec![OnlineSample { x: 1.0, y: 1.0, t: 0.0, pen: PenState::Down }],
            fm_hz: 100.0,
        };
        let ink = ink_quiet();
        let img = render_online(&sig, &ink, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        // Inked pixel count close to the disc area of the nib.
        let r_px = ink.nib_radius_mm * ink.dpi as f64 / 25.4;
        let area = std::f64::consts::PI * r_px * r_px;
        let inked = img.pixels.iter().filter(|p| **p < 255).count() as f64;
        assert!((inked - area).abs() / area < 0.25, "inked {inked} vs disc {area}");
        // Centred: centroid of ink at the canvas centre within a pixel.
        let (mut sx, mut sy, mut n) = (0.0, 0.0, 0.0);
        for y in 0..img.height {
            for x in 0..img.width {
                if img.get(x, y) < 255 {
                    sx += x as f64;
                    sy += y as f64;
                    n += 1.0;
                }
            }
        }
        assert!((sx / n - (img.width - 1) as f64 / 2.0).abs() < 1.5);
        assert!((sy / n - (img.height - 1) as f64 / 2.0).abs() < 1.5);
    }

    #[test]
    fn ten_millimetres_at_600dpi_is_236_pixels() {
        // Tiny nib so the run length is the path extent itself.
        let ink = InkModel { nib_radius_mm: 0.02, grain_std: 0.0, ..InkModel::default() };
        let sig = horizontal_stroke(10.0, 101, 100.0);
        let img = render_online(&sig, &ink, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let mut min_x = u32::MAX;
        let mut max_x = 0;
        for y in 0..img.height {
            for x in 0..img.width {
                if img.get(x, y) < 255 {
                    min_x = min_x.min(x);
                    max_x = max_x.max(x);
                }
            }
        }
        let run = (max_x - min_x) as f64;
        let expect = 10.0 * 600.0 / 25.4; // 236.2
        assert!((run - expect).abs() <= 1.5, "run {run} vs {expect}");
    }

    #[test]
    fn renders_are_deterministic_per_seed() {
        let ink = InkModel::default(); // grain on
        let sig = horizontal_stroke(5.0, 51, 100.0);
        let a = render_online(&sig, &ink, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = render_online(&sig, &ink, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        let c = render_online(&sig, &ink, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
        assert_ne!(a, c, "grain should vary with the seed");
    }

    #[test]
    fn fast_stroke_is_lighter_than_slow_stroke() {
        let ink = ink_quiet();
        // Same geometry; the slow one covers it in 4x the time.
        let slow = horizontal_stroke(10.0, 201, 50.0);
        let fast = horizontal_stroke(10.0, 51, 200.0);
        let mean_ink = |img: &SignatureImage| {
            let vals: Vec<f64> = img
                .pixels
                .iter()
                .filter(|p| **p < 255)
                .map(|p| 1.0 - *p as f64 / 255.0)
                .collect();
            vals.iter().sum::<f64>() / vals.len() as f64
        };
        let img_slow = render_online(&slow, &ink, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        let img_fast = render_online(&fast, &ink, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(
            mean_ink(&img_fast) < mean_ink(&img_slow),
            "fast {} !< slow {}",
            mean_ink(&img_fast),
            mean_ink(&img_slow)
        );
    }

    #[test]
    fn pen_up_leaves_no_ink() {
        let mut sig = horizontal_stroke(10.0, 101, 100.0);
        for s in sig.samples.iter_mut().skip(40).take(20) {
            s.pen = PenState::Up;
        }
        let ink = ink_quiet();
        let img = render_online(&sig, &ink, &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
        // A white gap exists strictly inside the run.
        let mid_y = img.height / 2;
        let row: Vec<u8> = (0..img.width).map(|x| img.get(x, mid_y)).collect();
        let first_ink = row.iter().position(|p| *p < 255).unwrap();
        let last_ink = row.iter().rposition(|p| *p < 255).unwrap();
        assert!(row[first_ink..last_ink].iter().any(|p| *p == 255), "no gap found");
    }

    #[test]
    fn no_pen_down_is_degenerate() {
        let mut sig = horizontal_stroke(10.0, 11, 100.0);
        for s in sig.samples.iter_mut() {
            s.pen = PenState::Up;
        }
        assert!(matches!(
            render_online(&sig, &ink_quiet(), &mut ChaCha8Rng::seed_from_u64(7)),
            Err(Error::DegenerateImage)
        ));
    }

    #[test]
    fn pgm_header_is_fixed_layout() {
        let img = SignatureImage { width: 3, height: 2, dpi: 600, pixels: vec![0, 255, 7, 8, 9, 10] };
        let bytes = img.to_pgm();
        assert!(bytes.starts_with(b"P5\n3 2\n255\n"));
        assert_eq!(bytes.len(), 11 + 6);
    }
}
