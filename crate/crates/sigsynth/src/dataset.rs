//! Dataset generation and persistence: online text files, PGM images and a
//! manifest that records every seed and realized parameter, so any sample
//! (or the whole dataset) can be regenerated bit-exactly.

use crate::config::RunConfig;
use crate::engram::EngramInventory;
use crate::kinematics::{read_online_text, write_online_text, OnlineHeader};
use crate::render::{render_online, InkModel};
use crate::rng::{self, Stage};
use crate::script::{ScriptData, ScriptKind};
use crate::variability::{
    build_master, generate_duplicate, generate_identity, SampleArtifacts, SampleMetadata,
    Settings, SignerIdentity,
};
use crate::verify::ProtocolDataset;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

pub const MANIFEST_FORMAT: &str = "sigsynth-manifest-v1";
pub const MANIFEST_FILE: &str = "manifest.toml";

/// TOML integers are i64; seeds use the full u64 range, so the manifest
/// stores them as strings.
mod u64_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Loaded script resources (data + engram inventory), respecting config
/// overrides.
pub struct ScriptResources {
    pub data: ScriptData,
    pub inventory: EngramInventory,
}

impl ScriptResources {
    pub fn load(config: &RunConfig) -> Result<Self> {
        let data = match &config.script_data {
            Some(p) => ScriptData::load(config.script, Path::new(p))?,
            None => ScriptData::builtin(config.script),
        };
        let inventory = match &config.engram_data {
            Some(p) => EngramInventory::load(config.script, Path::new(p))?,
            None => EngramInventory::builtin(config.script),
        };
        Ok(ScriptResources { data, inventory })
    }
}

/// One generated user held in memory.
pub struct GeneratedUser {
    pub identity: SignerIdentity,
    pub master: SampleArtifacts,
    pub samples: Vec<SampleArtifacts>,
}

/// Generates one user: identity, master and its genuine duplicates.
pub fn generate_user(
    res: &ScriptResources,
    settings: &Settings,
    master_seed: u64,
    user: u32,
    samples_per_user: u32,
) -> Result<GeneratedUser> {
    let identity =
        generate_identity(&res.data, &res.inventory, settings, master_seed, user as u64)?;
    let master = build_master(&identity, &res.inventory, settings, master_seed)?;
    let samples = (0..samples_per_user)
        .map(|s| generate_duplicate(&identity, &res.inventory, settings, master_seed, s as u64))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeneratedUser { identity, master, samples })
}

/// Generates the whole dataset in memory (no images), for evaluation runs.
pub fn generate_in_memory(config: &RunConfig, users: u32, samples: u32) -> Result<Vec<GeneratedUser>> {
    let res = ScriptResources::load(config)?;
    (0..users)
        .map(|u| generate_user(&res, &config.generation, config.seed, u, samples))
        .collect()
}

/// View of an in-memory dataset for the evaluation protocol.
pub fn to_protocol_dataset(users: &[GeneratedUser]) -> ProtocolDataset {
    ProtocolDataset {
        users: users
            .iter()
            .map(|u| u.samples.iter().map(|s| s.online.clone()).collect())
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestIdentity {
    pub index: u64,
    pub name: String,
    pub letters: usize,
    pub velocity: f64,
    pub text_width_mm: f64,
    pub text_height_mm: f64,
    pub grid_dx_mm: f64,
    pub grid_dy_mm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestSample {
    pub user: u32,
    pub sample: u32,
    #[serde(with = "u64_string")]
    pub seed: u64,
    pub online_file: Option<String>,
    pub image_file: Option<String>,
    pub sha256_online: Option<String>,
    pub sha256_image: Option<String>,
    pub metadata: SampleMetadata,
}

/// Everything needed to regenerate the dataset bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format: String,
    pub script: ScriptKind,
    #[serde(with = "u64_string")]
    pub master_seed: u64,
    pub users: u32,
    pub samples_per_user: u32,
    pub online: bool,
    pub images: bool,
    pub script_data: Option<String>,
    pub engram_data: Option<String>,
    pub settings: Settings,
    pub ink: InkModel,
    pub identities: Vec<ManifestIdentity>,
    pub samples: Vec<ManifestSample>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path)?;
        let m: Manifest = toml::from_str(&text)
            .map_err(|e| Error::Data { file: path.display().to_string(), message: e.to_string() })?;
        if m.format != MANIFEST_FORMAT {
            return Err(Error::Data {
                file: path.display().to_string(),
                message: format!("unsupported manifest format '{}'", m.format),
            });
        }
        Ok(m)
    }

    pub fn entry(&self, user: u32, sample: u32) -> Option<&ManifestSample> {
        self.samples.iter().find(|s| s.user == user && s.sample == sample)
    }

    /// RunConfig equivalent to the one that produced this manifest.
    pub fn to_config(&self, out_dir: &str) -> RunConfig {
        RunConfig {
            script: self.script,
            users: self.users,
            samples_per_user: self.samples_per_user,
            seed: self.master_seed,
            out_dir: out_dir.to_string(),
            online: self.online,
            images: self.images,
            script_data: self.script_data.clone(),
            engram_data: self.engram_data.clone(),
            generation: self.settings.clone(),
            ink: self.ink,
            ..RunConfig::default()
        }
    }
}

/// Hex SHA-256 digest, as stored in the manifest.
pub fn sha256_hex_bytes(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    hex_string(&h.finalize())
}

fn sha256_hex(bytes: &[u8]) -> String {
    sha256_hex_bytes(bytes)
}

/// Serializes a manifest to its TOML file form.
pub fn manifest_to_toml(m: &Manifest) -> Result<String> {
    toml::to_string_pretty(m).map_err(|e| Error::Config(e.to_string()))
}

fn hex_string(bytes: &[u8]) -> String {
    let mut s = String::with_capacity(bytes.len() * 2);
    for b in bytes {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

pub fn online_file_name(script: ScriptKind, user: u32, sample: u32) -> String {
    format!("{}_{:03}_{:02}.txt", script, user, sample)
}

pub fn image_file_name(script: ScriptKind, user: u32, sample: u32) -> String {
    format!("{}_{:03}_{:02}.pgm", script, user, sample)
}

/// Generates the dataset and writes it under `out_dir`: online files,
/// images (if enabled) and the manifest. Returns the manifest.
pub fn write_dataset(config: &RunConfig, out_dir: &Path) -> Result<Manifest> {
    config.validate()?;
    std::fs::create_dir_all(out_dir)?;
    let res = ScriptResources::load(config)?;
    let mut manifest = Manifest {
        format: MANIFEST_FORMAT.to_string(),
        script: config.script,
        master_seed: config.seed,
        users: config.users,
        samples_per_user: config.samples_per_user,
        online: config.online,
        images: config.images,
        script_data: config.script_data.clone(),
        engram_data: config.engram_data.clone(),
        settings: config.generation.clone(),
        ink: config.ink,
        identities: Vec::with_capacity(config.users as usize),
        samples: Vec::with_capacity((config.users * config.samples_per_user) as usize),
    };

    for user in 0..config.users {
        let gen = generate_user(&res, &config.generation, config.seed, user, config.samples_per_user)?;
        manifest.identities.push(ManifestIdentity {
            index: gen.identity.index,
            name: gen.identity.name.to_display_string(),
            letters: gen.identity.name.letter_count(),
            velocity: gen.identity.morphology.velocity,
            text_width_mm: gen.identity.morphology.text_width_mm,
            text_height_mm: gen.identity.morphology.text_height_mm,
            grid_dx_mm: gen.identity.grid.dx_mm,
            grid_dy_mm: gen.identity.grid.dy_mm,
        });
        for (s, art) in gen.samples.iter().enumerate() {
            let sample = s as u32;
            let seed = rng::derive_seed(config.seed, &[user as u64, sample as u64]);
            let mut entry = ManifestSample {
                user,
                sample,
                seed,
                online_file: None,
                image_file: None,
                sha256_online: None,
                sha256_image: None,
                metadata: art.metadata.clone(),
            };
            if config.online {
                let name = online_file_name(config.script, user, sample);
                let header = OnlineHeader {
                    user,
                    sample,
                    script: config.script,
                    seed,
                };
                let text = write_online_text(&header, &art.online);
                std::fs::write(out_dir.join(&name), text.as_bytes())?;
                entry.sha256_online = Some(sha256_hex(text.as_bytes()));
                entry.online_file = Some(name);
            }
            if config.images {
                let name = image_file_name(config.script, user, sample);
                let mut render_rng =
                    rng::sample_stream(config.seed, user as u64, sample as u64, Stage::Render);
                let img = render_online(&art.online, &config.ink, &mut render_rng)?;
                let bytes = img.to_pgm();
                std::fs::write(out_dir.join(&name), &bytes)?;
                entry.sha256_image = Some(sha256_hex(&bytes));
                entry.image_file = Some(name);
            }
            manifest.samples.push(entry);
        }
    }

    let manifest_text =
        toml::to_string_pretty(&manifest).map_err(|e| Error::Config(e.to_string()))?;
    std::fs::write(out_dir.join(MANIFEST_FILE), manifest_text)?;
    Ok(manifest)
}

/// Regenerates a dataset from its manifest into `out_dir` and returns the
/// new manifest; with the same settings and seeds the files (and hashes)
/// come out identical.
pub fn regenerate_from_manifest(manifest_path: &Path, out_dir: &Path) -> Result<Manifest> {
    let manifest = Manifest::load(manifest_path)?;
    let config = manifest.to_config(&out_dir.display().to_string());
    write_dataset(&config, out_dir)
}

/// Reads a generated dataset from disk into the evaluation protocol layout,
/// using the manifest for ordering.
pub fn load_protocol_dataset(dir: &Path) -> Result<(Manifest, ProtocolDataset)> {
    let manifest = Manifest::load(&dir.join(MANIFEST_FILE))?;
    let mut users: Vec<Vec<crate::kinematics::OnlineSignature>> =
        (0..manifest.users).map(|_| Vec::new()).collect();
    for entry in &manifest.samples {
        let name = entry.online_file.as_ref().ok_or_else(|| Error::Data {
            file: dir.display().to_string(),
            message: format!(
                "sample {}/{} has no online file (dataset written with online = false)",
                entry.user, entry.sample
            ),
        })?;
        let path: PathBuf = dir.join(name);
        let text = std::fs::read_to_string(&path)?;
        let (_, sig) = read_online_text(&text, &path.display().to_string())?;
        users[entry.user as usize].push(sig);
    }
    Ok((manifest, ProtocolDataset { users }))
}
