//! Identity creation (master signature) and genuine duplicate generation.
//!
//! Inter-personal variability enters at three levels: morphological (name,
//! slant, skew, spacing), cognitive (grid spacing, node jitter) and motor
//! (inertia, speed, lognormal shape). Intra-personal variability perturbs
//! the master's parameters under the writer's two stability knobs and
//! distorts the engram (jitter, sinusoid, per-segment affine and shift)
//! before the motor and kinematic stages rerun.

use crate::engram::{
    apply_matra, compose_with_variants, plan_variants, EngramForm, EngramInventory, EngramSequence,
    LetterGrid, MatraPolicy, PenUpModel, SegmentKind,
};
use crate::geometry::Point;
use crate::kinematics::{
    build_velocity_profile, max_feasible_sigma, sample_trajectory, OnlineSignature, TimingModel,
};
use crate::morphology::{MorphologyParams, NameText};
use crate::motor::{
    apply_inertial_filters, enforce_contact_points, rasterize_engram,
    triangularize_straight_strokes, MotorProfile, Trajectory,
};
use crate::rng::{self, Stage};
use crate::script::{ScriptData, ScriptKind};
use crate::{Error, Result};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Generation knobs with their default calibration. Every source of
/// intra-personal randomness has a hook here so it can be scaled or zeroed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Mean stability of static (morphological + cognitive) parameters.
    pub stability_static: f64,
    /// Mean stability of dynamic (motor + timing) parameters.
    pub stability_dynamic: f64,
    /// Node jitter radius as a fraction of the grid spacing.
    pub node_jitter_frac: f64,
    /// Radius reduction on the baseline and upper-line rows.
    pub jitter_line_reduction: f64,
    /// Probability of swapping a letter variant per duplicate.
    pub variant_swap_prob: f64,
    /// Mean per-junction matra bridging probability.
    pub matra_prob: f64,
    /// Matra end elongation, in grid column spacings.
    pub matra_elongation_frac: (f64, f64),
    /// Sinusoidal distortion amplitude bound, fraction of text height.
    pub sinusoid_amp_frac: f64,
    /// Per-segment affine scale half-range s (scales in [1-s, 1+s]).
    pub affine_scale_s: f64,
    /// Scale on the pen-down shift bounds ([0, 2dx] / [0, dy/2]).
    pub shift_scale: f64,
    /// Scale on pen-up guide offsets (0 collapses pen-ups onto the chord).
    pub penup_offset_scale: f64,
    /// Half-width of the per-stroke lognormal sigma window around the
    /// writer's base sigma.
    pub sigma_halfwidth: f64,
    pub dispersion_mean: f64,
    pub dispersion_std: f64,
    pub duration_sigma: f64,
    pub wrist_enabled: bool,
    /// Straight runs at least this many grid spacings long are bent.
    pub triangle_min_run_spacings: f64,
    /// Contact enforcement blend half-width, in trajectory points.
    pub contact_window: usize,
    pub grid_dx_bounds: (f64, f64),
    pub grid_dy_bounds: (f64, f64),
    pub fm_hz: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            stability_static: 0.06,
            stability_dynamic: 0.06,
            node_jitter_frac: 0.12,
            jitter_line_reduction: 0.5,
            variant_swap_prob: 0.15,
            matra_prob: 0.5,
            matra_elongation_frac: (0.0, 1.0),
            sinusoid_amp_frac: 0.05,
            affine_scale_s: 0.1,
            shift_scale: 1.0,
            penup_offset_scale: 1.0,
            sigma_halfwidth: 0.01,
            dispersion_mean: 0.32,
            dispersion_std: 0.06,
            duration_sigma: 0.15,
            wrist_enabled: false,
            triangle_min_run_spacings: 2.5,
            contact_window: 8,
            grid_dx_bounds: (0.6, 6.0),
            grid_dy_bounds: (0.6, 6.0),
            fm_hz: 100.0,
        }
    }
}

impl Settings {
    /// All variance hooks zeroed: duplicates become byte-identical to the
    /// master. Used by determinism tests.
    pub fn zero_variability(mut self) -> Self {
        self.stability_static = 0.0;
        self.stability_dynamic = 0.0;
        self.node_jitter_frac = 0.0;
        self.variant_swap_prob = 0.0;
        self.matra_prob = 0.0;
        self.matra_elongation_frac = (0.0, 0.0);
        self.sinusoid_amp_frac = 0.0;
        self.affine_scale_s = 0.0;
        self.shift_scale = 0.0;
        self.penup_offset_scale = 0.0;
        self.sigma_halfwidth = 0.0;
        self.dispersion_mean = 0.0;
        self.dispersion_std = 0.0;
        self.duration_sigma = 0.0;
        self
    }
}

/// Bounded parameter with its observed range, for stability perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedParam {
    pub value: f64,
    pub min: f64,
    pub max: f64,
}

impl BoundedParam {
    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// Everything that defines one synthetic person. Together with the master
/// seed it fully determines the master signature and every duplicate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignerIdentity {
    pub script: ScriptKind,
    pub index: u64,
    pub name: NameText,
    pub morphology: MorphologyParams,
    pub grid: LetterGrid,
    pub motor: MotorProfile,
    pub timing: TimingModel,
    pub stability_static: f64,
    pub stability_dynamic: f64,
    pub node_jitter_radius: f64,
    pub matra_policy: MatraPolicy,
    pub penup: PenUpModel,
    /// Base letter/word gaps and the bounded parameters duplicates perturb.
    pub slant: BoundedParam,
    pub skew: BoundedParam,
    pub letter_gap: BoundedParam,
    pub word_gap: BoundedParam,
    pub velocity: BoundedParam,
    /// Writer's base lognormal sigma; per-stroke draws live in a window
    /// around it.
    pub sigma_base: f64,
    /// Master variant choice per slot.
    pub variant_plan: Vec<usize>,
}

impl SignerIdentity {
    pub fn sigma_range(&self, sigma_halfwidth: f64, base: f64) -> (f64, f64) {
        let hi_cap = max_feasible_sigma();
        let lo = (base - sigma_halfwidth).max(0.02).min(hi_cap);
        let hi = (base + sigma_halfwidth).clamp(lo, hi_cap);
        (lo, hi)
    }
}

/// Creates a signer: name and morphology from the language model, grid
/// spacing from the text box, motor profile and stabilities. Deterministic
/// per (master_seed, index).
pub fn generate_identity(
    data: &ScriptData,
    inventory: &EngramInventory,
    settings: &Settings,
    master_seed: u64,
    index: u64,
) -> Result<SignerIdentity> {
    let (name, morphology) =
        crate::morphology::sample_signer_morphology(data, master_seed, index)?;
    let mut r = rng::identity_stream(master_seed, index, Stage::Identity);

    // Cognitive level: grid spacing from the sampled text box.
    let gap_letter_units = 1.0 + r.gen::<f64>(); // letters apart by 1..2 dx
    let gap_word_units = 3.0 + 2.0 * r.gen::<f64>(); // words apart by 3..5 dx
    let adv = advancing_slots(&name).max(1) as f64;
    let words = name.words.len().max(1) as f64;
    let units = adv * (f64::from(LetterGrid::COLS - 1) + gap_letter_units)
        + (words - 1.0) * (gap_word_units - gap_letter_units);
    let dx = (morphology.text_width_mm / units)
        .clamp(settings.grid_dx_bounds.0, settings.grid_dx_bounds.1);
    let dy = (morphology.text_height_mm / f64::from(LetterGrid::ROWS - 1))
        .clamp(settings.grid_dy_bounds.0, settings.grid_dy_bounds.1);
    let grid = LetterGrid::new(dx, dy)?;

    // Motor level.
    let motor = MotorProfile {
        velocity: morphology.velocity,
        inertia_finger: 3.0 + r.gen::<f64>(),
        inertia_forearm: 3.0 + r.gen::<f64>(),
        inertia_wrist: 3.0 + r.gen::<f64>(),
        beta: MotorProfile::BETA,
        wrist_enabled: settings.wrist_enabled,
        triangle_height_frac: 0.1 * r.gen::<f64>(),
        triangle_side: if r.gen::<bool>() { 1.0 } else { -1.0 },
    };
    let sigma_base = 0.03 + 0.06 * r.gen::<f64>();

    let stability_static = (settings.stability_static * (0.5 + r.gen::<f64>())).clamp(0.0, 1.0);
    let stability_dynamic = (settings.stability_dynamic * (0.5 + r.gen::<f64>())).clamp(0.0, 1.0);
    let node_jitter_radius = settings.node_jitter_frac * grid.spacing() * (0.5 + r.gen::<f64>());
    let matra_policy = MatraPolicy {
        per_character_prob: (settings.matra_prob * (0.6 + 0.8 * r.gen::<f64>())).clamp(0.0, 1.0),
        elongation_range: (
            settings.matra_elongation_frac.0 * dx,
            settings.matra_elongation_frac.1 * dx,
        ),
    };
    let penup = PenUpModel {
        r_floor_mm: grid.spacing() / 10.0,
        intermediate_nodes: if r.gen::<bool>() { 2 } else { 1 },
        offset_scale: settings.penup_offset_scale,
    };

    let timing = TimingModel {
        dispersion_mean: settings.dispersion_mean,
        dispersion_std: settings.dispersion_std,
        duration_sigma: settings.duration_sigma,
        ..TimingModel::for_velocity(morphology.velocity)
    };

    let mut variants_rng = rng::identity_stream(master_seed, index, Stage::Variants);
    let variant_plan = plan_variants(&name, inventory, &mut variants_rng)?;

    let gev = &data.gev;
    Ok(SignerIdentity {
        script: data.kind,
        index,
        name,
        morphology,
        grid,
        motor,
        timing,
        stability_static,
        stability_dynamic,
        node_jitter_radius,
        matra_policy,
        penup,
        slant: BoundedParam {
            value: morphology.slant_deg,
            min: gev.slant_deg.min,
            max: gev.slant_deg.max,
        },
        skew: BoundedParam {
            value: morphology.skew_deg,
            min: gev.skew_deg.min,
            max: gev.skew_deg.max,
        },
        letter_gap: BoundedParam {
            value: gap_letter_units * dx,
            min: 0.2 * dx,
            max: 4.0 * dx,
        },
        word_gap: BoundedParam { value: gap_word_units * dx, min: 1.0 * dx, max: 8.0 * dx },
        velocity: BoundedParam {
            value: morphology.velocity,
            min: gev.velocity.min,
            max: gev.velocity.max,
        },
        sigma_base,
        variant_plan,
    })
}

fn advancing_slots(name: &NameText) -> usize {
    name.words.iter().flat_map(|w| w.iter()).filter(|s| s.form.advances()).count()
}

/// One draw of p + u with u ~ N(0, (s * mp)^2), clamped to the bounds when
/// the perturbed value exceeds them.
pub fn perturb_parameter<R: Rng + ?Sized>(
    p: f64,
    range_mp: f64,
    stability_s: f64,
    bounds: (f64, f64),
    rng: &mut R,
) -> f64 {
    let sd = stability_s * range_mp;
    let u = if sd > 0.0 { Normal::new(0.0, sd).expect("valid sd").sample(rng) } else { 0.0 };
    (p + u).clamp(bounds.0, bounds.1)
}

fn perturb_bounded<R: Rng + ?Sized>(p: &BoundedParam, s: f64, rng: &mut R) -> f64 {
    perturb_parameter(p.value, p.range(), s, (p.min, p.max), rng)
}

/// Displaces every engram node uniformly inside a disc; nodes on the
/// baseline and upper-line rows use a reduced radius. Coincident nodes
/// (contact points) move together.
pub fn jitter_engram_nodes<R: Rng + ?Sized>(
    engram: &EngramSequence,
    grid: &LetterGrid,
    radius: f64,
    line_reduction: f64,
    rng: &mut R,
) -> EngramSequence {
    if radius <= 0.0 {
        return engram.clone();
    }
    let mut out = engram.clone();
    let tol = grid.dy_mm / 4.0;
    let on_line = |p: &Point| {
        (p.y - grid.baseline_y()).abs() < tol || (p.y - grid.upperline_y()).abs() < tol
    };
    let mut moved: std::collections::HashMap<(u64, u64), Point> = std::collections::HashMap::new();
    let mut displace = |p: Point, rng: &mut R| -> Point {
        let key = (p.x.to_bits(), p.y.to_bits());
        if let Some(d) = moved.get(&key) {
            return p + *d;
        }
        let r = if on_line(&p) { radius * line_reduction } else { radius };
        let d = loop {
            let x = 2.0 * rng.gen::<f64>() - 1.0;
            let y = 2.0 * rng.gen::<f64>() - 1.0;
            if x * x + y * y <= 1.0 {
                break Point::new(x * r, y * r);
            }
        };
        moved.insert(key, d);
        p + d
    };
    for seg in &mut out.segments {
        for p in &mut seg.nodes {
            *p = displace(*p, rng);
        }
        for p in &mut seg.contact_points {
            *p = displace(*p, rng);
        }
    }
    out
}

/// Per-sample sinusoidal distortion parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SinusoidParams {
    pub amplitude: Point,
    pub wavelength: Point,
    pub phase: Point,
}

impl SinusoidParams {
    pub fn identity() -> Self {
        SinusoidParams {
            amplitude: Point::new(0.0, 0.0),
            wavelength: Point::new(1.0, 1.0),
            phase: Point::new(0.0, 0.0),
        }
    }

    pub fn draw<R: Rng + ?Sized>(
        amp_bound: f64,
        text_width: f64,
        rng: &mut R,
    ) -> Self {
        SinusoidParams {
            amplitude: Point::new(amp_bound * rng.gen::<f64>(), amp_bound * rng.gen::<f64>()),
            wavelength: Point::new(
                text_width * (0.5 + 1.5 * rng.gen::<f64>()),
                text_width * (0.5 + 1.5 * rng.gen::<f64>()),
            ),
            phase: Point::new(
                std::f64::consts::TAU * rng.gen::<f64>(),
                std::f64::consts::TAU * rng.gen::<f64>(),
            ),
        }
    }
}

/// x' = x + Ax sin(2 pi x / Lx + px), y' = y + Ay sin(2 pi y / Ly + py),
/// applied to every node and contact point.
pub fn sinusoidal_transform(engram: &EngramSequence, params: &SinusoidParams) -> EngramSequence {
    let mut out = engram.clone();
    let f = |p: Point| -> Point {
        let dx = if params.wavelength.x > 0.0 {
            params.amplitude.x
                * (std::f64::consts::TAU * p.x / params.wavelength.x + params.phase.x).sin()
        } else {
            0.0
        };
        let dy = if params.wavelength.y > 0.0 {
            params.amplitude.y
                * (std::f64::consts::TAU * p.y / params.wavelength.y + params.phase.y).sin()
        } else {
            0.0
        };
        Point::new(p.x + dx, p.y + dy)
    };
    out.transform(f);
    out
}

/// Scales one segment about its centroid (used by the affine distortion).
fn scale_segment(seg: &mut crate::engram::Segment, sx: f64, sy: f64, shift: Point) {
    let n = seg.nodes.len().max(1) as f64;
    let cx = seg.nodes.iter().map(|p| p.x).sum::<f64>() / n;
    let cy = seg.nodes.iter().map(|p| p.y).sum::<f64>() / n;
    let f = |p: &mut Point| {
        p.x = cx + (p.x - cx) * sx + shift.x;
        p.y = cy + (p.y - cy) * sy + shift.y;
    };
    for p in &mut seg.nodes {
        f(p);
    }
    for p in &mut seg.contact_points {
        f(p);
    }
}

/// Per-pen-down affine distortion: x/y scales uniform in [1-s, 1+s] about
/// the segment centroid, a rightward shift in [0, 2dx] and a vertical shift
/// in [0, dy/2] (both scaled by the shift hook).
pub fn affine_and_shift<R: Rng + ?Sized>(
    engram: &EngramSequence,
    scale_s: f64,
    grid: &LetterGrid,
    shift_scale: f64,
    rng: &mut R,
) -> EngramSequence {
    let mut out = engram.clone();
    for seg in &mut out.segments {
        if seg.kind != SegmentKind::PenDown {
            continue;
        }
        let sx = 1.0 + scale_s * (2.0 * rng.gen::<f64>() - 1.0);
        let sy = 1.0 + scale_s * (2.0 * rng.gen::<f64>() - 1.0);
        let shift = Point::new(
            shift_scale * 2.0 * grid.dx_mm * rng.gen::<f64>(),
            shift_scale * 0.5 * grid.dy_mm * rng.gen::<f64>(),
        );
        scale_segment(seg, sx, sy, shift);
    }
    out
}

/// Shear by the slant angle about the baseline, then rotate by the skew
/// angle about the leftmost baseline point.
fn apply_slant_skew(engram: &mut EngramSequence, grid: &LetterGrid, slant_deg: f64, skew_deg: f64) {
    let base_y = grid.baseline_y();
    let tan_slant = slant_deg.to_radians().tan();
    let x0 = engram.bounding_box().map_or(0.0, |(lo, _)| lo.x);
    let (sin_k, cos_k) = skew_deg.to_radians().sin_cos();
    engram.transform(|p| {
        let sheared = Point::new(p.x + (p.y - base_y) * tan_slant, p.y);
        let rx = sheared.x - x0;
        let ry = sheared.y - base_y;
        Point::new(x0 + rx * cos_k - ry * sin_k, base_y + rx * sin_k + ry * cos_k)
    });
}

/// Realized per-sample parameters, recorded in the dataset manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMetadata {
    pub identity: u64,
    pub sample: u64,
    pub slant_deg: f64,
    pub skew_deg: f64,
    pub letter_gap_mm: f64,
    pub word_gap_mm: f64,
    pub velocity: f64,
    pub sigma_base: f64,
    pub stroke_count: usize,
    pub arc_length_mm: f64,
    pub duration_s: f64,
}

/// Everything produced for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleArtifacts {
    pub engram: EngramSequence,
    pub trajectory: Trajectory,
    pub online: OnlineSignature,
    pub metadata: SampleMetadata,
}

/// Sample index space: the master is its own reserved slot.
const MASTER_SLOT: u64 = u64::MAX;

/// Builds the master signature of an identity.
pub fn build_master(
    identity: &SignerIdentity,
    inventory: &EngramInventory,
    settings: &Settings,
    master_seed: u64,
) -> Result<SampleArtifacts> {
    synthesize(identity, inventory, settings, master_seed, MASTER_SLOT)
}

/// Generates one genuine duplicate: master parameters perturbed under the
/// writer's stabilities, engram distortions, then the motor + kinematics
/// pipeline.
pub fn generate_duplicate(
    identity: &SignerIdentity,
    inventory: &EngramInventory,
    settings: &Settings,
    master_seed: u64,
    sample_index: u64,
) -> Result<SampleArtifacts> {
    synthesize(identity, inventory, settings, master_seed, sample_index)
}

fn synthesize(
    identity: &SignerIdentity,
    inventory: &EngramInventory,
    settings: &Settings,
    master_seed: u64,
    slot: u64,
) -> Result<SampleArtifacts> {
    let is_master = slot == MASTER_SLOT;
    let stream = |stage: Stage| -> ChaCha8Rng {
        rng::sample_stream(master_seed, identity.index, slot, stage)
    };

    // Morphological level: static parameters perturbed per sample.
    let mut static_rng = stream(Stage::StaticPerturb);
    let s_stat = if is_master { 0.0 } else { identity.stability_static };
    let slant = perturb_bounded(&identity.slant, s_stat, &mut static_rng);
    let skew = perturb_bounded(&identity.skew, s_stat, &mut static_rng);
    let letter_gap = perturb_bounded(&identity.letter_gap, s_stat, &mut static_rng);
    let word_gap = perturb_bounded(&identity.word_gap, s_stat, &mut static_rng);

    // Variant swaps against the master plan.
    let mut plan = identity.variant_plan.clone();
    if !is_master && settings.variant_swap_prob > 0.0 {
        let mut vrng = stream(Stage::Variants);
        let mut slot_iter = identity.name.words.iter().flat_map(|w| w.iter());
        for choice in plan.iter_mut() {
            let slot_ref = slot_iter.next().expect("plan matches slots");
            let n = inventory
                .require(&slot_ref.grapheme, EngramForm::from(slot_ref.form))?
                .len();
            if n >= 2 && vrng.gen::<f64>() < settings.variant_swap_prob {
                let mut pick = vrng.gen_range(0..n - 1);
                if pick >= *choice {
                    pick += 1;
                }
                *choice = pick;
            }
        }
    }

    // Compose and matra re-draw.
    let spacing = crate::engram::Spacing { letter_gap_mm: letter_gap, word_gap_mm: word_gap };
    let mut compose_rng = stream(Stage::Compose);
    let mut engram = compose_with_variants(
        &identity.name,
        inventory,
        &identity.grid,
        spacing,
        &identity.penup,
        &plan,
        &mut compose_rng,
    )?;
    let mut matra_rng = stream(Stage::Matra);
    engram = apply_matra(
        &engram,
        &identity.matra_policy,
        &identity.penup,
        &identity.grid,
        &mut matra_rng,
    );

    // Cognitive distortions (duplicates only).
    if !is_master {
        let mut jrng = stream(Stage::Jitter);
        engram = jitter_engram_nodes(
            &engram,
            &identity.grid,
            identity.node_jitter_radius,
            settings.jitter_line_reduction,
            &mut jrng,
        );
        let mut srng = stream(Stage::Sinusoid);
        let sin = SinusoidParams::draw(
            settings.sinusoid_amp_frac * identity.morphology.text_height_mm,
            identity.morphology.text_width_mm,
            &mut srng,
        );
        engram = sinusoidal_transform(&engram, &sin);
        let mut arng = stream(Stage::Affine);
        engram = affine_and_shift(
            &engram,
            settings.affine_scale_s,
            &identity.grid,
            settings.shift_scale,
            &mut arng,
        );
    }
    apply_slant_skew(&mut engram, &identity.grid, slant, skew);

    // Motor level: dynamic parameters perturbed per sample.
    let mut dyn_rng = stream(Stage::DynamicPerturb);
    let s_dyn = if is_master { 0.0 } else { identity.stability_dynamic };
    let velocity = perturb_bounded(&identity.velocity, s_dyn, &mut dyn_rng);
    let sigma_cap = max_feasible_sigma();
    let sigma_base = perturb_parameter(
        identity.sigma_base,
        sigma_cap - 0.02,
        s_dyn,
        (0.02, sigma_cap),
        &mut dyn_rng,
    );
    let triangle_frac = perturb_parameter(
        identity.motor.triangle_height_frac,
        0.1,
        s_dyn,
        (0.0, 0.1),
        &mut dyn_rng,
    );
    let motor = MotorProfile {
        velocity,
        triangle_height_frac: triangle_frac,
        ..identity.motor
    };
    let timing = TimingModel {
        duration_a: TimingModel::for_velocity(velocity).duration_a,
        ..identity.timing
    };

    let contacts: Vec<Point> =
        engram.segments.iter().flat_map(|s| s.contact_points.iter().copied()).collect();

    let spacing_mm = identity.grid.spacing();
    let traj = rasterize_engram(&engram, &identity.grid);
    if traj.points.is_empty() {
        return Err(Error::InvalidInput("empty engram produced no trajectory".into()));
    }
    let traj = triangularize_straight_strokes(
        &traj,
        motor.triangle_height_frac,
        settings.triangle_min_run_spacings * spacing_mm,
        motor.triangle_side,
    );
    let traj = apply_inertial_filters(&traj, &motor, spacing_mm);
    let traj = enforce_contact_points(&traj, &contacts, settings.contact_window, spacing_mm)?;

    let mut timing_rng = stream(Stage::Timing);
    let sigma_range = identity.sigma_range(settings.sigma_halfwidth, sigma_base);
    let profile =
        build_velocity_profile(&traj, &timing, sigma_range, settings.fm_hz, &mut timing_rng)?;
    let online = sample_trajectory(&traj, &profile, settings.fm_hz)?;

    let metadata = SampleMetadata {
        identity: identity.index,
        sample: slot,
        slant_deg: slant,
        skew_deg: skew,
        letter_gap_mm: letter_gap,
        word_gap_mm: word_gap,
        velocity,
        sigma_base,
        stroke_count: traj.stroke_count(),
        arc_length_mm: traj.arc_length(),
        duration_s: profile.total_duration,
    };
    Ok(SampleArtifacts { engram, trajectory: traj, online, metadata })
}
