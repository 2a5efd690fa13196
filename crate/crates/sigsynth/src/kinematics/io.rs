//! Online signature text files: a small header followed by one line per
//! sample, fixed 6-decimal formatting so files are bit-stable.

use super::{OnlineSample, OnlineSignature};
use crate::motor::PenState;
use crate::script::ScriptKind;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnlineHeader {
    pub user: u32,
    pub sample: u32,
    pub script: ScriptKind,
    pub seed: u64,
}

/// Renders the file contents. Layout:
///
/// ```text
/// user 3
/// sample 7
/// script bengali
/// fm 100.000000
/// seed 42
/// points 251
/// 12.345678 4.000000 0.000000 1
/// ...
/// ```
///
/// Pen flag: 1 = down, 0 = up. Coordinates in mm, time in seconds.
pub fn write_online_text(header: &OnlineHeader, sig: &OnlineSignature) -> String {
    let mut out = String::with_capacity(32 * sig.samples.len() + 128);
    let _ = writeln!(out, "user {}", header.user);
    let _ = writeln!(out, "sample {}", header.sample);
    let _ = writeln!(out, "script {}", header.script);
    let _ = writeln!(out, "fm {:.6}", sig.fm_hz);
    let _ = writeln!(out, "seed {}", header.seed);
    let _ = writeln!(out, "points {}", sig.samples.len());
    for s in &sig.samples {
        let pen = if s.pen == PenState::Down { 1 } else { 0 };
        let _ = writeln!(out, "{:.6} {:.6} {:.6} {}", s.x, s.y, s.t, pen);
    }
    out
}

fn parse_err(file: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Data { file: file.to_string(), message: format!("line {}: {}", line, msg.into()) }
}

/// Parses a signature file produced by [`write_online_text`].
pub fn read_online_text(text: &str, file: &str) -> Result<(OnlineHeader, OnlineSignature)> {
    let mut lines = text.lines().enumerate();
    let mut field = |name: &str| -> Result<String> {
        let (i, line) =
            lines.next().ok_or_else(|| parse_err(file, 0, format!("missing '{name}' header")))?;
        let (key, value) = line
            .split_once(' ')
            .ok_or_else(|| parse_err(file, i + 1, format!("expected '{name} <value>'")))?;
        if key != name {
            return Err(parse_err(file, i + 1, format!("expected header '{name}', got '{key}'")));
        }
        Ok(value.to_string())
    };

    let user: u32 =
        field("user")?.parse().map_err(|e| parse_err(file, 1, format!("bad user id: {e}")))?;
    let sample: u32 =
        field("sample")?.parse().map_err(|e| parse_err(file, 2, format!("bad sample id: {e}")))?;
    let script: ScriptKind = field("script")?.parse()?;
    let fm_hz: f64 =
        field("fm")?.parse().map_err(|e| parse_err(file, 4, format!("bad fm: {e}")))?;
    let seed: u64 =
        field("seed")?.parse().map_err(|e| parse_err(file, 5, format!("bad seed: {e}")))?;
    let count: usize =
        field("points")?.parse().map_err(|e| parse_err(file, 6, format!("bad count: {e}")))?;

    let mut samples = Vec::with_capacity(count);
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.split_ascii_whitespace();
        let mut next = |what: &str| {
            parts
                .next()
                .ok_or_else(|| parse_err(file, i + 1, format!("missing {what}")))
        };
        let x: f64 = next("x")?.parse().map_err(|e| parse_err(file, i + 1, format!("x: {e}")))?;
        let y: f64 = next("y")?.parse().map_err(|e| parse_err(file, i + 1, format!("y: {e}")))?;
        let t: f64 = next("t")?.parse().map_err(|e| parse_err(file, i + 1, format!("t: {e}")))?;
        let pen = match next("pen")? {
            "1" => PenState::Down,
            "0" => PenState::Up,
            other => return Err(parse_err(file, i + 1, format!("bad pen flag '{other}'"))),
        };
        samples.push(OnlineSample { x, y, t, pen });
    }
    if samples.len() != count {
        return Err(parse_err(
            file,
            0,
            format!("header says {count} points, file has {}", samples.len()),
        ));
    }
    Ok((OnlineHeader { user, sample, script, seed }, OnlineSignature { samples, fm_hz }))
}
