//! Calibration loop: tunes the variability knobs so the desk-scale
//! synthetic dataset reproduces a target EER vector. Static knobs are tuned
//! before dynamic ones (static variability shapes the engram every verifier
//! sees; dynamic parameters do not feed back into it).

use crate::config::RunConfig;
use crate::dataset::{generate_in_memory, to_protocol_dataset};
use crate::variability::Settings;
use crate::verify::Verifier;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Target EERs per T value, one row per verifier (the "eight EERs" of a
/// {2,5,8,10} grid). Lengths must match the evaluation T grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationTargets {
    pub t_values: Vec<usize>,
    pub dtw: Vec<f64>,
    pub manhattan: Vec<f64>,
}

impl CalibrationTargets {
    pub fn validate(&self) -> Result<()> {
        if self.t_values.is_empty()
            || self.dtw.len() != self.t_values.len()
            || self.manhattan.len() != self.t_values.len()
        {
            return Err(Error::Config(
                "calibration targets need one dtw and one manhattan EER per T value".into(),
            ));
        }
        Ok(())
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let t: CalibrationTargets = toml::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        t.validate()?;
        Ok(t)
    }
}

/// Measured EER vector for one settings candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredEers {
    pub dtw: Vec<f64>,
    pub manhattan: Vec<f64>,
}

/// Generates the desk-scale dataset under `settings` and measures pooled
/// EERs for both verifiers over the target T grid. Fixed seeds make the
/// measurement a deterministic function of the settings.
pub fn measure_eers(
    config: &RunConfig,
    settings: &Settings,
    t_values: &[usize],
) -> Result<MeasuredEers> {
    let mut cfg = config.clone();
    cfg.generation = settings.clone();
    let users = generate_in_memory(&cfg, config.calibrate.desk_users, config.calibrate.desk_samples)?;
    let dataset = to_protocol_dataset(&users);
    let mut out = MeasuredEers { dtw: Vec::new(), manhattan: Vec::new() };
    for verifier in [Verifier::Dtw, Verifier::Manhattan] {
        let matrix = crate::verify::pairwise_for_calibration(&dataset, verifier)?;
        for &t in t_values {
            let report = crate::verify::protocol_with_matrix(
                &dataset,
                &matrix,
                t,
                config.calibrate.repeats,
                verifier,
                config.evaluate.seed,
            )?;
            match verifier {
                Verifier::Dtw => out.dtw.push(report.pooled.eer),
                Verifier::Manhattan => out.manhattan.push(report.pooled.eer),
            }
        }
    }
    Ok(out)
}

fn loss(measured: &MeasuredEers, targets: &CalibrationTargets) -> f64 {
    let n = (targets.dtw.len() + targets.manhattan.len()) as f64;
    let sq = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>()
    };
    (sq(&measured.dtw, &targets.dtw) + sq(&measured.manhattan, &targets.manhattan)) / n
}

/// One tunable knob with its search interval.
struct Knob {
    bounds: (f64, f64),
    set: fn(&mut Settings, f64),
}

fn static_knobs() -> Vec<Knob> {
    vec![
        Knob { bounds: (0.0, 0.25), set: |s, v| s.stability_static = v },
        Knob { bounds: (0.0, 0.4), set: |s, v| s.node_jitter_frac = v },
        Knob { bounds: (0.0, 0.12), set: |s, v| s.sinusoid_amp_frac = v },
    ]
}

fn dynamic_knobs() -> Vec<Knob> {
    vec![Knob { bounds: (0.0, 0.25), set: |s, v| s.stability_dynamic = v }]
}

#[derive(Debug, Clone)]
pub struct CalibrationOutcome {
    pub best: Settings,
    pub best_loss: f64,
    /// Best-so-far loss after the initial evaluation and after each knob
    /// pass; nonincreasing by construction.
    pub trace: Vec<f64>,
    pub evaluations: u32,
}

/// Coordinate descent with a short golden-section line search per knob.
/// `iterations` counts full sweeps over the knob set; 0 just measures the
/// initial configuration.
pub fn calibrate(
    config: &RunConfig,
    targets: &CalibrationTargets,
    iterations: u32,
) -> Result<CalibrationOutcome> {
    targets.validate()?;
    let mut best = config.generation.clone();
    let mut evaluations = 0u32;
    let eval = |s: &Settings, evaluations: &mut u32| -> Result<f64> {
        *evaluations += 1;
        let measured = measure_eers(config, s, &targets.t_values)?;
        let l = loss(&measured, targets);
        if !l.is_finite() {
            return Err(Error::Protocol(format!("non-finite calibration loss {l}")));
        }
        Ok(l)
    };
    let mut best_loss = eval(&best, &mut evaluations)?;
    let mut trace = vec![best_loss];

    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    for _ in 0..iterations {
        // Static variability first, then dynamic.
        for knob in static_knobs().into_iter().chain(dynamic_knobs()) {
            let (mut a, mut b) = knob.bounds;
            let probe = |v: f64, evaluations: &mut u32| -> Result<(f64, Settings)> {
                let mut s = best.clone();
                (knob.set)(&mut s, v);
                Ok((eval(&s, evaluations)?, s))
            };
            let mut c = b - phi * (b - a);
            let mut d = a + phi * (b - a);
            let (mut fc, sc) = probe(c, &mut evaluations)?;
            let (mut fd, sd) = probe(d, &mut evaluations)?;
            let mut local_best = if fc < fd { (fc, sc, c) } else { (fd, sd, d) };
            for _ in 0..3 {
                if fc < fd {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - phi * (b - a);
                    let (f, s) = probe(c, &mut evaluations)?;
                    fc = f;
                    if fc < local_best.0 {
                        local_best = (fc, s, c);
                    }
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + phi * (b - a);
                    let (f, s) = probe(d, &mut evaluations)?;
                    fd = f;
                    if fd < local_best.0 {
                        local_best = (fd, s, d);
                    }
                }
            }
            if local_best.0 < best_loss {
                best_loss = local_best.0;
                best = local_best.1;
            }
            trace.push(best_loss);
        }
    }
    Ok(CalibrationOutcome { best, best_loss, trace, evaluations })
}
