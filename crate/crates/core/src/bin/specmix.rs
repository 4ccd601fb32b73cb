use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use specmix::classify::{binary_success_rate, classify, ClassifyParams};
use specmix::harness::{write_experiment, ExperimentConfig};
use specmix::oracle::{
    static_property_checks, static_spectrum, verify_perturbation_bounds,
    verify_separation_identity, StaticMoments, StaticSpectrum, VerificationReport,
};
use specmix::partition::{misclassification, partition, PartitionParams};
use specmix::popmodel::{normalize, sample, ModelSpec, SampleMatrix};
use specmix::rng::Substream;
use specmix::{Error, Result};

#[derive(Parser)]
#[command(
    name = "specmix",
    version,
    about = "Spectral separation of Bernoulli mixtures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a sample from a model file and write it as CSV.
    Gen {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a two-population sample with the singular vector threshold rule.
    Classify {
        #[arg(long)]
        input: PathBuf,
        /// Divergence assumed by the threshold.
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.5)]
        omega_min: f64,
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long)]
        block_size: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cluster a sample into k populations.
    Partition {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the static identities and the perturbation bounds for a
    /// two-population model; writes a JSON report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a parameter sweep and write records, summary and plot.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; overrides the config.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).map_err(|e| Error::io(p, e))?),
        None => Box::new(io::stdout().lock()),
    })
}

fn read_sample(path: &Path) -> Result<SampleMatrix> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    SampleMatrix::read_csv(io::BufReader::new(file))
}

fn write_labels(labels: &[usize], out: Option<&Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(output(out)?);
    w.write_record(["individual", "label"])?;
    for (i, l) in labels.iter().enumerate() {
        w.write_record([i.to_string(), l.to_string()])?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))?;
    Ok(())
}

#[derive(Serialize)]
struct VerifyOutput {
    moments: MomentsSummary,
    spectrum: StaticSpectrum,
    separation_residual: f64,
    static_checks: VerificationReport,
    trials: Vec<VerificationReport>,
    all_pass: bool,
}

#[derive(Serialize)]
struct MomentsSummary {
    a: f64,
    b: f64,
    c: f64,
    n1: usize,
    n2: usize,
    features: usize,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { config, seed, out } => {
            let model = ModelSpec::load(&config)?.build()?;
            sample(&model, seed).write_csv(output(out.as_deref())?)
        }
        Command::Classify {
            input,
            gamma,
            omega_min,
            rounds,
            block_size,
            seed,
            out,
        } => {
            let s = read_sample(&input)?;
            let mut params = ClassifyParams::with_defaults(
                s.individuals(),
                s.features(),
                gamma,
                omega_min,
                seed,
            )?;
            if let Some(r) = rounds {
                params.rounds = r;
                params.block_size = block_size.unwrap_or(s.features() / r);
            } else if let Some(b) = block_size {
                params.block_size = b;
            }
            let result = classify(&s, &params)?;
            if let Some(truth) = s.labels() {
                eprintln!(
                    "success rate {:.4}",
                    binary_success_rate(&result.labels, truth)
                );
            }
            write_labels(&result.labels, out.as_deref())
        }
        Command::Partition {
            input,
            k,
            seed,
            out,
        } => {
            let s = read_sample(&input)?;
            let mut params = PartitionParams::new(k, s.features())?;
            params.seed = seed;
            let result = partition(&s, &params)?;
            if let Some(truth) = s.labels() {
                if truth.iter().all(|&t| t < k) {
                    let m = misclassification(&result.labels, truth, k)?;
                    eprintln!("misclassification rate {:.4}", m.rate);
                }
            }
            write_labels(&result.labels, out.as_deref())
        }
        Command::Verify {
            config,
            seed,
            trials,
            out,
        } => {
            let model = ModelSpec::load(&config)?.build()?;
            let moments = StaticMoments::from_model(&model, true)?;
            let spectrum = static_spectrum(&moments)?;
            let residual =
                verify_separation_identity(&moments, &spectrum, moments.mean_divergence());
            let static_checks =
                VerificationReport::new(static_property_checks(&moments, &spectrum));
            let root = Substream::new(seed);
            let reports = (0..trials)
                .map(|t| {
                    let x = normalize(&sample(&model, root.child(t as u64).seed()))?;
                    verify_perturbation_bounds(&x, &model)
                })
                .collect::<Result<Vec<_>>>()?;
            let all_pass =
                residual <= 1e-8 && static_checks.all_pass && reports.iter().all(|r| r.all_pass);
            let report = VerifyOutput {
                moments: MomentsSummary {
                    a: moments.a,
                    b: moments.b,
                    c: moments.c,
                    n1: moments.n1,
                    n2: moments.n2,
                    features: moments.features,
                },
                spectrum,
                separation_residual: residual,
                static_checks,
                trials: reports,
                all_pass,
            };
            let mut w = output(out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &report)?;
            writeln!(w).map_err(|e| Error::Parse(e.to_string()))?;
            Ok(())
        }
        Command::Experiment {
            config,
            out,
            trials,
            seed,
        } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.base_seed = s;
            }
            cfg.validate()?;
            let dir = out
                .or_else(|| cfg.output.clone())
                .ok_or_else(|| Error::InvalidInput("no output directory given".into()))?;
            let files = write_experiment(&cfg, &dir)?;
            eprintln!("wrote {}", files.records.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_user_error() { 1 } else { 2 })
        }
    }
}
