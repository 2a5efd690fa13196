//! Command-line front end: dataset generation, offline rendering,
//! verification runs and the calibration loop.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error, 4 protocol
//! error.

use clap::{Parser, Subcommand};
use sigsynth::calibrate::{calibrate, CalibrationTargets};
use sigsynth::config::{parse_config, RunConfig};
use sigsynth::dataset::{
    image_file_name, load_protocol_dataset, regenerate_from_manifest, write_dataset, Manifest,
    MANIFEST_FILE,
};
use sigsynth::kinematics::read_online_text;
use sigsynth::render::render_online;
use sigsynth::rng::{self, Stage};
use sigsynth::verify::{run_protocol_grid, Verifier};
use sigsynth::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sigsynth", about = "Bengali / Devanagari signature synthesizer", version)]
struct Cli {
    /// Configuration file (TOML); defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory override (also honours SIGSYNTH_OUT).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for distance computation (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Script override: bengali | devanagari.
    #[arg(long, global = true)]
    script: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset (online files, images, manifest).
    Generate,
    /// Render (or re-render) offline images for an existing dataset.
    Render {
        /// Dataset directory containing manifest.toml.
        #[arg(long)]
        dataset: PathBuf,
    },
    /// Evaluate a dataset: EER table and DET curves per verifier and T.
    Evaluate {
        #[arg(long)]
        dataset: PathBuf,
        /// Restrict to one verifier: dtw | manhattan (default: both).
        #[arg(long)]
        verifier: Option<String>,
        /// Reference counts; defaults to the config's evaluate.t_values.
        #[arg(long, value_delimiter = ',')]
        t: Vec<usize>,
        #[arg(long)]
        repeats: Option<usize>,
    },
    /// Tune variability knobs toward a target EER vector.
    Calibrate {
        /// TOML file with t_values, dtw and manhattan target EER rows.
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        iterations: Option<u32>,
    },
    /// Regenerate a dataset from its manifest (bit-exact).
    Regenerate {
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Pretty-print one manifest entry.
    Inspect {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        user: u32,
        #[arg(long)]
        sample: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig, Error> {
    let mut config = match &cli.config {
        Some(path) => parse_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(script) = &cli.script {
        config.script = script.parse()?;
    }
    if let Some(out) = &cli.out {
        config.out_dir = out.display().to_string();
    } else if let Ok(env_out) = std::env::var("SIGSYNTH_OUT") {
        if !env_out.is_empty() {
            config.out_dir = env_out;
        }
    }
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Generate => cmd_generate(cli),
        Command::Render { dataset } => cmd_render(dataset),
        Command::Evaluate { dataset, verifier, t, repeats } => {
            cmd_evaluate(cli, dataset, verifier.as_deref(), t, *repeats)
        }
        Command::Calibrate { targets, iterations } => cmd_calibrate(cli, targets, *iterations),
        Command::Regenerate { manifest } => cmd_regenerate(cli, manifest),
        Command::Inspect { dataset, user, sample } => cmd_inspect(dataset, *user, *sample),
    }
}

fn cmd_generate(cli: &Cli) -> Result<(), Error> {
    let config = effective_config(cli)?;
    let out_dir = PathBuf::from(&config.out_dir);
    std::fs::create_dir_all(&out_dir)?;
    std::fs::write(out_dir.join("effective_config.toml"), config.effective_toml())?;
    let manifest = write_dataset(&config, &out_dir)?;
    println!(
        "generated {} users x {} samples ({}) into {}",
        manifest.users,
        manifest.samples_per_user,
        manifest.script,
        out_dir.display()
    );
    println!(
        "files: {} online, {} images, manifest {}",
        manifest.samples.iter().filter(|s| s.online_file.is_some()).count(),
        manifest.samples.iter().filter(|s| s.image_file.is_some()).count(),
        out_dir.join(MANIFEST_FILE).display()
    );
    Ok(())
}

fn cmd_render(dataset_dir: &Path) -> Result<(), Error> {
    let manifest_path = dataset_dir.join(MANIFEST_FILE);
    let mut manifest = Manifest::load(&manifest_path)?;
    let mut rendered = 0usize;
    let mut entries = std::mem::take(&mut manifest.samples);
    for entry in &mut entries {
        let Some(online) = &entry.online_file else {
            return Err(Error::Data {
                file: manifest_path.display().to_string(),
                message: format!("sample {}/{} has no online file to render from", entry.user, entry.sample),
            });
        };
        let path = dataset_dir.join(online);
        let text = std::fs::read_to_string(&path)?;
        let (_, sig) = read_online_text(&text, &path.display().to_string())?;
        let mut render_rng = rng::sample_stream(
            manifest.master_seed,
            entry.user as u64,
            entry.sample as u64,
            Stage::Render,
        );
        let img = render_online(&sig, &manifest.ink, &mut render_rng)?;
        let name = image_file_name(manifest.script, entry.user, entry.sample);
        let bytes = img.to_pgm();
        std::fs::write(dataset_dir.join(&name), &bytes)?;
        entry.image_file = Some(name);
        entry.sha256_image = Some(sigsynth::dataset::sha256_hex_bytes(&bytes));
        rendered += 1;
    }
    manifest.samples = entries;
    manifest.images = true;
    let text = sigsynth::dataset::manifest_to_toml(&manifest)?;
    std::fs::write(&manifest_path, text)?;
    println!("rendered {rendered} images into {}", dataset_dir.display());
    Ok(())
}

fn cmd_evaluate(
    cli: &Cli,
    dataset_dir: &Path,
    verifier: Option<&str>,
    t_flags: &[usize],
    repeats_flag: Option<usize>,
) -> Result<(), Error> {
    let config = effective_config(cli)?;
    let (manifest, dataset) = load_protocol_dataset(dataset_dir)?;
    let t_values: Vec<usize> =
        if t_flags.is_empty() { config.evaluate.t_values.clone() } else { t_flags.to_vec() };
    let repeats = repeats_flag.unwrap_or(config.evaluate.repeats);
    let verifiers: Vec<Verifier> = match verifier {
        Some(v) => vec![v.parse()?],
        None => vec![Verifier::Dtw, Verifier::Manhattan],
    };

    let eval_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| dataset_dir.join("eval"));
    std::fs::create_dir_all(&eval_dir)?;

    let mut summary = String::from("script,t,verifier,eer_pooled,eer_mean,eer_std\n");
    let mut repeats_csv = String::from("script,verifier,t,repeat,eer\n");
    println!("script {}, {} users, T = {:?}, {} repeats", manifest.script, dataset.users.len(), t_values, repeats);
    for v in &verifiers {
        let reports = run_protocol_grid(&dataset, &t_values, repeats, *v, config.evaluate.seed)?;
        for report in &reports {
            println!(
                "  {:<9} T={:<2} EER {:.4} (pooled)  mean {:.4} +- {:.4}  [{} genuine / {} impostor trials]",
                v.as_str(),
                report.t_references,
                report.pooled.eer,
                report.eer_mean,
                report.eer_std,
                report.genuine_trials,
                report.impostor_trials,
            );
            summary.push_str(&format!(
                "{},{},{},{:.6},{:.6},{:.6}\n",
                manifest.script,
                report.t_references,
                v.as_str(),
                report.pooled.eer,
                report.eer_mean,
                report.eer_std
            ));
            for (r, e) in report.per_repeat_eer.iter().enumerate() {
                repeats_csv.push_str(&format!(
                    "{},{},{},{},{:.6}\n",
                    manifest.script,
                    v.as_str(),
                    report.t_references,
                    r,
                    e
                ));
            }
            let det_name = format!("det_{}_t{}.csv", v.as_str(), report.t_references);
            std::fs::write(eval_dir.join(det_name), report.pooled.to_csv())?;
        }
    }
    std::fs::write(eval_dir.join("eer_summary.csv"), summary)?;
    std::fs::write(eval_dir.join("eer_repeats.csv"), repeats_csv)?;
    println!("wrote CSV results to {}", eval_dir.display());
    Ok(())
}

fn cmd_calibrate(cli: &Cli, targets_path: &Path, iterations: Option<u32>) -> Result<(), Error> {
    let config = effective_config(cli)?;
    let targets = CalibrationTargets::load(targets_path)?;
    let iterations = iterations.unwrap_or(config.calibrate.iterations);
    let outcome = calibrate(&config, &targets, iterations)?;
    println!("calibration finished after {} evaluations", outcome.evaluations);
    println!("loss trace: {:?}", outcome.trace);
    println!("best loss: {:.6e}", outcome.best_loss);
    let mut tuned = config.clone();
    tuned.generation = outcome.best.clone();
    let out_dir = PathBuf::from(&config.out_dir);
    std::fs::create_dir_all(&out_dir)?;
    let path = out_dir.join("tuned_config.toml");
    std::fs::write(&path, tuned.effective_toml())?;
    println!("tuned configuration written to {}", path.display());
    Ok(())
}

fn cmd_regenerate(cli: &Cli, manifest_path: &Path) -> Result<(), Error> {
    let out_dir = cli
        .out
        .clone()
        .unwrap_or_else(|| manifest_path.parent().unwrap_or(Path::new(".")).join("regen"));
    let manifest = regenerate_from_manifest(manifest_path, &out_dir)?;
    println!(
        "regenerated {} samples into {}",
        manifest.samples.len(),
        out_dir.display()
    );
    Ok(())
}

fn cmd_inspect(dataset_dir: &Path, user: u32, sample: u32) -> Result<(), Error> {
    let manifest = Manifest::load(&dataset_dir.join(MANIFEST_FILE))?;
    let entry = manifest.entry(user, sample).ok_or_else(|| Error::Data {
        file: dataset_dir.display().to_string(),
        message: format!("no sample {user}/{sample} in the manifest"),
    })?;
    let identity = manifest.identities.iter().find(|i| i.index == user as u64);
    println!("dataset: {} ({} users x {})", manifest.script, manifest.users, manifest.samples_per_user);
    if let Some(id) = identity {
        println!(
            "identity {}: name '{}' ({} letters), velocity class {:.3}, text {:.1} x {:.1} mm, grid {:.3} x {:.3} mm",
            id.index, id.name, id.letters, id.velocity, id.text_width_mm, id.text_height_mm,
            id.grid_dx_mm, id.grid_dy_mm
        );
    }
    println!("sample {}/{}: seed {}", entry.user, entry.sample, entry.seed);
    let m = &entry.metadata;
    println!(
        "  slant {:.2} deg, skew {:.2} deg, gaps {:.2}/{:.2} mm, velocity {:.3}",
        m.slant_deg, m.skew_deg, m.letter_gap_mm, m.word_gap_mm, m.velocity
    );
    println!(
        "  {} strokes, arc length {:.1} mm, duration {:.2} s",
        m.stroke_count, m.arc_length_mm, m.duration_s
    );
    if let Some(f) = &entry.online_file {
        println!("  online: {f} (sha256 {})", entry.sha256_online.as_deref().unwrap_or("-"));
    }
    if let Some(f) = &entry.image_file {
        println!("  image:  {f} (sha256 {})", entry.sha256_image.as_deref().unwrap_or("-"));
    }
    Ok(())
}
