use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, ValueEnum};
use devdan_core::harness::write_report;
use devdan_core::{prequential_run, DatasetSpec, ExperimentConfig, ProbitForm, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DatasetKind {
    Sea,
    Hyperplane,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Devdan,
    FixedAe,
    FixedDae,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbitArg {
    PreActivation,
    InputScaled,
}

/// Prequential test-then-train run of an evolving denoising autoencoder
/// (or a fixed-size baseline) over a data stream.
#[derive(Debug, Parser)]
#[command(name = "devdan", version)]
struct Args {
    /// TOML experiment file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,

    #[arg(long, value_enum)]
    dataset: Option<DatasetKind>,

    /// CSV stream to replay (implies --dataset csv).
    #[arg(long)]
    csv: Option<PathBuf>,

    /// Zero-based column holding the class label.
    #[arg(long)]
    label_col: Option<usize>,

    /// Number of classes in the CSV stream (inferred when omitted).
    #[arg(long)]
    classes: Option<usize>,

    /// The CSV file starts with a header row.
    #[arg(long)]
    header: bool,

    /// Stream length for the synthetic generators.
    #[arg(long)]
    samples: Option<usize>,

    /// SEA concept thresholds, one block per value.
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,

    /// Fraction of SEA labels flipped.
    #[arg(long)]
    noise: Option<f64>,

    /// Hyperplane input dimension.
    #[arg(long)]
    features: Option<usize>,

    /// Hyperplane per-sample weight drift.
    #[arg(long)]
    drift: Option<f64>,

    #[arg(long)]
    batch_size: Option<usize>,

    /// Masking-noise probability.
    #[arg(long)]
    corruption: Option<f64>,

    #[arg(long)]
    lr_gen: Option<f64>,

    #[arg(long)]
    lr_disc: Option<f64>,

    #[arg(long, value_enum)]
    variant: Option<VariantArg>,

    /// Hidden units of the fixed variants.
    #[arg(long)]
    hidden: Option<usize>,

    /// Closed form used for expected hidden activations.
    #[arg(long, value_enum)]
    probit: Option<ProbitArg>,

    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, default_value = "devdan-out")]
    out_dir: PathBuf,

    /// Report zero elapsed time so output files are reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,

    /// Also write per-step bias²/variance estimates to trace.csv.
    #[arg(long)]
    trace: bool,
}

fn build_config(args: &Args) -> Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };

    let kind = match (args.dataset, &args.csv) {
        (Some(DatasetKind::Csv), _) | (None, Some(_)) => Some(DatasetKind::Csv),
        (kind, _) => kind,
    };
    if let Some(kind) = kind {
        let same_kind = matches!(
            (kind, &cfg.dataset),
            (DatasetKind::Sea, DatasetSpec::Sea { .. })
                | (DatasetKind::Hyperplane, DatasetSpec::Hyperplane { .. })
                | (DatasetKind::Csv, DatasetSpec::Csv { .. })
        );
        if !same_kind {
            cfg.dataset = match kind {
                DatasetKind::Sea => DatasetSpec::default(),
                DatasetKind::Hyperplane => DatasetSpec::Hyperplane {
                    samples: 100_000,
                    features: 4,
                    drift: 0.001,
                },
                DatasetKind::Csv => {
                    let Some(path) = args.csv.clone() else {
                        bail!("--dataset csv needs --csv <PATH>");
                    };
                    DatasetSpec::Csv {
                        path,
                        label_column: 0,
                        classes: None,
                        header: false,
                    }
                }
            };
        }
    }

    match &mut cfg.dataset {
        DatasetSpec::Sea {
            samples,
            thresholds,
            noise,
        } => {
            override_with(samples, args.samples);
            override_with(thresholds, args.thresholds.clone());
            override_with(noise, args.noise);
        }
        DatasetSpec::Hyperplane {
            samples,
            features,
            drift,
        } => {
            override_with(samples, args.samples);
            override_with(features, args.features);
            override_with(drift, args.drift);
        }
        DatasetSpec::Csv {
            path,
            label_column,
            classes,
            header,
        } => {
            override_with(path, args.csv.clone());
            override_with(label_column, args.label_col);
            if args.classes.is_some() {
                *classes = args.classes;
            }
            *header |= args.header;
        }
    }

    override_with(&mut cfg.batch_size, args.batch_size);
    override_with(&mut cfg.corruption, args.corruption);
    override_with(&mut cfg.lr_generative, args.lr_gen);
    override_with(&mut cfg.lr_discriminative, args.lr_disc);
    override_with(&mut cfg.hidden, args.hidden);
    override_with(&mut cfg.seed, args.seed);
    override_with(
        &mut cfg.variant,
        args.variant.map(|v| match v {
            VariantArg::Devdan => Variant::Devdan,
            VariantArg::FixedAe => Variant::FixedAe,
            VariantArg::FixedDae => Variant::FixedDae,
        }),
    );
    override_with(
        &mut cfg.probit,
        args.probit.map(|p| match p {
            ProbitArg::PreActivation => ProbitForm::PreActivation,
            ProbitArg::InputScaled => ProbitForm::InputScaled,
        }),
    );
    if args.no_timing {
        cfg.timing = false;
    }
    cfg.trace |= args.trace;
    cfg.validate()?;
    Ok(cfg)
}

fn override_with<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn run(args: Args) -> Result<()> {
    let cfg = build_config(&args)?;
    log::info!(
        "running {} on {} (seed {})",
        cfg.variant.as_str(),
        cfg.dataset.name(),
        cfg.seed
    );
    let output = prequential_run(&cfg).context("prequential run failed")?;
    let paths = write_report(&output, &args.out_dir)
        .with_context(|| format!("writing report to {}", args.out_dir.display()))?;
    if let Some(state) = &output.final_state {
        let path = args.out_dir.join("network.json");
        state
            .to_checkpoint()
            .save(&path)
            .with_context(|| format!("writing {}", path.display()))?;
    }

    let s = &output.summary;
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{} on {}: CR {:.2} ± {:.2} %, HN {:.2} ± {:.2}, NoP {}, ET {:.2} s over {} timestamps",
        cfg.variant.as_str(),
        cfg.dataset.name(),
        100.0 * s.classification_rate.mean,
        100.0 * s.classification_rate.std,
        s.hidden_nodes.mean,
        s.hidden_nodes.std,
        s.final_parameters,
        s.total_seconds,
        s.timestamps,
    )?;
    writeln!(
        out,
        "events: {} grow, {} prune, {} prune skipped; report in {}",
        output.growth_events,
        output.prune_events,
        output.prune_skips,
        paths.summary.parent().unwrap_or(&args.out_dir).display()
    )?;
    Ok(())
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.downcast_ref::<io::Error>()
        .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
