//! Random-impostor evaluation protocol: per repeat, T randomly chosen
//! genuine references per user; the remaining genuine samples are test
//! samples. Genuine scores come from the user's own tests, impostor scores
//! from every other user's test samples, both against the nearest
//! reference.

use super::det::{compute_det_eer, DetCurve, ScoreSet};
use super::dtw::{dtw_distance, extract_features, FeatureSequence};
use super::histogram::{extract_histograms, manhattan_score, HistogramFeatures};
use crate::kinematics::OnlineSignature;
use crate::rng;
use crate::{Error, Result};
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verifier {
    Dtw,
    Manhattan,
}

impl Verifier {
    pub fn as_str(self) -> &'static str {
        match self {
            Verifier::Dtw => "dtw",
            Verifier::Manhattan => "manhattan",
        }
    }
}

impl FromStr for Verifier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dtw" => Ok(Verifier::Dtw),
            "manhattan" | "man" => Ok(Verifier::Manhattan),
            other => Err(Error::Config(format!("unknown verifier '{other}'"))),
        }
    }
}

/// Samples grouped by user, in a fixed order.
#[derive(Debug, Clone, Default)]
pub struct ProtocolDataset {
    pub users: Vec<Vec<OnlineSignature>>,
}

impl ProtocolDataset {
    pub fn sample_count(&self) -> usize {
        self.users.iter().map(|u| u.len()).sum()
    }
}

#[derive(Debug, Clone)]
pub struct ProtocolReport {
    pub verifier: Verifier,
    pub t_references: usize,
    pub repeats: usize,
    pub per_repeat_eer: Vec<f64>,
    pub eer_mean: f64,
    pub eer_std: f64,
    /// DET over the scores pooled across repeats.
    pub pooled: DetCurve,
    pub genuine_trials: u64,
    pub impostor_trials: u64,
}

enum Features {
    Dtw(Vec<FeatureSequence>),
    Manhattan(Vec<HistogramFeatures>),
}

impl Features {
    fn distance(&self, i: usize, j: usize) -> Result<f64> {
        match self {
            Features::Dtw(f) => dtw_distance(&f[i], &f[j]),
            Features::Manhattan(f) => manhattan_score(&f[i], &f[j]),
        }
    }
}

/// Symmetric pairwise distance matrix over all samples of the dataset,
/// reused by every repeat and T value.
pub(crate) struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}

pub(crate) fn pairwise_distances(
    dataset: &ProtocolDataset,
    verifier: Verifier,
) -> Result<DistanceMatrix> {
    let flat: Vec<&OnlineSignature> = dataset.users.iter().flatten().collect();
    let n = flat.len();
    let features = match verifier {
        Verifier::Dtw => {
            Features::Dtw(flat.iter().map(|s| extract_features(s)).collect::<Result<_>>()?)
        }
        Verifier::Manhattan => Features::Manhattan(
            flat.iter().map(|s| extract_histograms(s)).collect::<Result<_>>()?,
        ),
    };
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let mut row = vec![0.0; n];
            for j in i + 1..n {
                row[j] = features.distance(i, j)?;
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    let mut d = vec![0.0f64; n * n];
    for (i, row) in rows.iter().enumerate() {
        for j in i + 1..n {
            d[i * n + j] = row[j];
            d[j * n + i] = row[j];
        }
    }
    Ok(DistanceMatrix { n, d })
}

/// Runs the protocol. Reference sets are drawn per (repeat, user) from the
/// seed and are nested across T values (the first T entries of one
/// permutation), so growing T strictly grows the reference pool.
pub fn run_protocol(
    dataset: &ProtocolDataset,
    t_references: usize,
    repeats: usize,
    verifier: Verifier,
    seed: u64,
) -> Result<ProtocolReport> {
    let matrix = pairwise_distances(dataset, verifier)?;
    run_protocol_with_matrix(dataset, &matrix, t_references, repeats, verifier, seed)
}

/// Runs the protocol over a grid of T values, computing the pairwise
/// distance matrix only once.
pub fn run_protocol_grid(
    dataset: &ProtocolDataset,
    t_values: &[usize],
    repeats: usize,
    verifier: Verifier,
    seed: u64,
) -> Result<Vec<ProtocolReport>> {
    let matrix = pairwise_distances(dataset, verifier)?;
    t_values
        .iter()
        .map(|&t| run_protocol_with_matrix(dataset, &matrix, t, repeats, verifier, seed))
        .collect()
}

pub(crate) fn run_protocol_with_matrix(
    dataset: &ProtocolDataset,
    matrix: &DistanceMatrix,
    t_references: usize,
    repeats: usize,
    verifier: Verifier,
    seed: u64,
) -> Result<ProtocolReport> {
    let n_users = dataset.users.len();
    if n_users < 2 {
        return Err(Error::Protocol("at least two users are required".into()));
    }
    if t_references == 0 {
        return Err(Error::Protocol("T must be at least 1".into()));
    }
    for (u, samples) in dataset.users.iter().enumerate() {
        if samples.len() <= t_references {
            return Err(Error::Protocol(format!(
                "user {u} has {} samples, need more than T = {t_references}",
                samples.len()
            )));
        }
    }

    // Global index of each user's first sample.
    let mut base = Vec::with_capacity(n_users);
    let mut acc = 0usize;
    for u in &dataset.users {
        base.push(acc);
        acc += u.len();
    }

    let mut per_repeat_eer = Vec::with_capacity(repeats);
    let mut pooled = ScoreSet::default();
    let mut genuine_trials = 0u64;
    let mut impostor_trials = 0u64;

    for r in 0..repeats {
        // Per-user sample permutation, independent of T: references are the
        // first T entries, tests the rest.
        let perms: Vec<Vec<usize>> = (0..n_users)
            .map(|u| {
                let mut idx: Vec<usize> = (0..dataset.users[u].len()).collect();
                let mut prng = rng::stream(seed, &[r as u64, u as u64]);
                idx.shuffle(&mut prng);
                idx
            })
            .collect();

        let mut scores = ScoreSet::default();
        for u in 0..n_users {
            let refs: Vec<usize> =
                perms[u][..t_references].iter().map(|k| base[u] + k).collect();
            let min_to_refs = |global: usize| -> f64 {
                refs.iter().map(|&rf| matrix.get(global, rf)).fold(f64::INFINITY, f64::min)
            };
            // Genuine: this user's own test samples.
            for &k in &perms[u][t_references..] {
                scores.genuine.push(min_to_refs(base[u] + k));
                genuine_trials += 1;
            }
            // Impostor: the genuine test samples of all the remaining users.
            for v in 0..n_users {
                if v == u {
                    continue;
                }
                for &k in &perms[v][t_references..] {
                    scores.impostor.push(min_to_refs(base[v] + k));
                    impostor_trials += 1;
                }
            }
        }
        per_repeat_eer.push(compute_det_eer(&scores)?.eer);
        pooled.extend(&scores);
    }

    let eer_mean = per_repeat_eer.iter().sum::<f64>() / per_repeat_eer.len().max(1) as f64;
    let eer_std = (per_repeat_eer.iter().map(|e| (e - eer_mean) * (e - eer_mean)).sum::<f64>()
        / per_repeat_eer.len().max(1) as f64)
        .sqrt();
    Ok(ProtocolReport {
        verifier,
        t_references,
        repeats,
        per_repeat_eer,
        eer_mean,
        eer_std,
        pooled: compute_det_eer(&pooled)?,
        genuine_trials,
        impostor_trials,
    })
}
