//! `pdisc`: generate data, train surrogates, discover equations and run
//! experiment grids.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use pde_discovery::data::io::{load_dataset, save_dataset};
use pde_discovery::data::{inject_noise, sample_scattered, PdeKind};
use pde_discovery::harness::{
    discover, emit_report, evolution_svg, format_equation, run_grid, ExperimentConfig, GridResult, Preset,
    ReportFormat,
};
use pde_discovery::regression::aggregate;
use pde_discovery::surrogate::{Checkpoint, Trainer};
use pde_discovery::{seed, Error};

#[derive(Parser)]
#[command(name = "pdisc", version, about = "Mesh-free PDE discovery from scattered samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a benchmark field at scattered points and add noise.
    Generate {
        #[arg(long)]
        pde: PdeKind,
        #[arg(long)]
        samples: usize,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the preset surrogate to a dataset.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        preset: PdeKind,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover an equation from a dataset and a trained surrogate.
    Discover {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        checkpoint: PathBuf,
        /// Defaults to the checkpoint's preset.
        #[arg(long)]
        preset: Option<PdeKind>,
        #[arg(long)]
        replicates: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Model JSON destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a success-rate grid described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-render a saved grid.
    Report {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, default_value = "markdown")]
        format: String,
    },
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_)
        | Error::UnknownPreset(_)
        | Error::UnknownFormat(_)
        | Error::InvalidParameter(_)
        | Error::InvalidDomain(_)
        | Error::UnsupportedOrder(_)
        | Error::BadSubsample { .. }
        | Error::TooManyColumns { .. } => 1,
        Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::ShapeMismatch(_) => 2,
        _ => 3,
    }
}

fn write_file(path: &Path, text: &str) -> pde_discovery::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text)?;
    Ok(())
}

fn generate(pde: PdeKind, samples: usize, noise: f64, seed_value: u64, out: &Path) -> pde_discovery::Result<()> {
    let preset = Preset::for_pde(pde);
    let sol = &preset.solution;
    let mut clean = sample_scattered(|p: &[f64]| sol.eval::<f64, f64>(p), &preset.domain, samples, seed_value)?;
    clean.pde = Some(pde);
    clean.parameters = sol.parameters();
    let ds = inject_noise(&clean, noise, seed::derive(seed_value, "noise"))?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    save_dataset(&ds, out)?;
    eprintln!("wrote {} samples of {pde} to {}", ds.len(), out.display());
    Ok(())
}

fn train(data: &Path, pde: PdeKind, epochs: Option<usize>, seed_value: u64, out: &Path) -> pde_discovery::Result<()> {
    let ds = load_dataset(data)?;
    let preset = Preset::for_pde(pde);
    if ds.dim() != pde.spatial_dim() + 1 {
        return Err(Error::Config(format!("{pde} expects {} input columns, data has {}", pde.spatial_dim() + 1, ds.dim())));
    }
    let mut cfg = preset.train.clone();
    cfg.seed = seed_value;
    if let Some(e) = epochs {
        cfg.epochs = e;
    }
    let epochs = cfg.epochs;
    let mut trainer = Trainer::new(&ds, &preset.hidden, cfg)?;
    trainer.run_to_end()?;
    let (params, trace) = trainer.finish();
    if let Some(w) = &trace.warning {
        eprintln!("warning: {w}");
    }
    eprintln!(
        "trained {epochs} epochs: train MSE {:.4e}, holdout MSE {:.4e}",
        trace.train.last().copied().unwrap_or(f64::NAN),
        trace.holdout.last().copied().unwrap_or(f64::NAN)
    );
    let ckpt = Checkpoint { preset: Some(pde.name().to_string()), epochs, seed: seed_value, params };
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    ckpt.save(out)
}

fn discover_cmd(
    data: &Path,
    checkpoint: &Path,
    preset: Option<PdeKind>,
    replicates: Option<usize>,
    seed_value: u64,
    out: Option<&Path>,
) -> pde_discovery::Result<()> {
    let ds = load_dataset(data)?;
    let ckpt = Checkpoint::<f64>::load(checkpoint)?;
    let pde = match (preset, &ckpt.preset) {
        (Some(p), _) => p,
        (None, Some(name)) => name.parse()?,
        (None, None) => return Err(Error::Config("checkpoint names no preset; pass --preset".into())),
    };
    let mut preset = Preset::for_pde(pde);
    if let Some(m) = replicates {
        preset.ensemble.replicates = m;
    }
    preset.validate()?;
    if ds.dim() != ckpt.params.input_dim() {
        return Err(Error::ShapeMismatch(format!(
            "data has {} inputs, surrogate expects {}",
            ds.dim(),
            ckpt.params.input_dim()
        )));
    }
    let (_, ens) = discover(&preset, &ckpt.params, &ds.coords, seed_value)?;
    let model = aggregate(&ens, preset.ensemble.inclusion_cutoff)?;
    let labels: Vec<String> = preset.terms().iter().map(|t| t.label()).collect();
    let doc = json!({
        "pde": pde,
        "terms": labels,
        "equation": format_equation(&model, &labels),
        "model": model,
        "inclusion_probability": ens.inclusion_probability,
        "coefficient_samples": ens.coefficient_samples,
        "replicates": ens.replicates.len(),
        "subsample_size": ens.subsample_size,
        "seed": ens.seed,
    });
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    eprintln!("{}", format_equation(&model, &labels));
    Ok(())
}

fn experiment(config: &Path, out: &Path) -> pde_discovery::Result<()> {
    let text = fs::read_to_string(config)?;
    let cfg = ExperimentConfig::from_json(&text)?;
    let grid = run_grid(&cfg)?;
    fs::create_dir_all(out)?;
    for (name, format) in [("grid.json", ReportFormat::Json), ("grid.csv", ReportFormat::Csv), ("grid.md", ReportFormat::Markdown)] {
        write_file(&out.join(name), &emit_report(&grid, format)?)?;
    }
    for cell in &grid.cells {
        for t in cell.trial_results.iter().filter(|t| !t.checkpoints.is_empty()) {
            let name = format!("evolution_n{}_noise{}_trial{}.svg", cell.n, cell.noise, t.trial);
            write_file(&out.join(name), &evolution_svg(&t.checkpoints, &grid.terms))?;
        }
    }
    print!("{}", emit_report(&grid, ReportFormat::Markdown)?);
    Ok(())
}

fn report(grid: &Path, format: &str) -> pde_discovery::Result<()> {
    let format: ReportFormat = format.parse()?;
    let grid: GridResult = serde_json::from_str(&fs::read_to_string(grid)?)?;
    print!("{}", emit_report(&grid, format)?);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate { pde, samples, noise, seed, out } => generate(*pde, *samples, *noise, *seed, out),
        Command::Train { data, preset, epochs, seed, out } => train(data, *preset, *epochs, *seed, out),
        Command::Discover { data, checkpoint, preset, replicates, seed, out } => {
            discover_cmd(data, checkpoint, *preset, *replicates, *seed, out.as_deref())
        }
        Command::Experiment { config, out } => experiment(config, out),
        Command::Report { grid, format } => report(grid, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
