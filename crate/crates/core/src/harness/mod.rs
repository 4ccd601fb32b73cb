//! Monte-Carlo experiments over the two-block model: configuration, the
//! trial runner, per-grid-point summaries and the success-rate plot.

mod config;
mod plot;
mod run;
mod summary;

use std::path::{Path, PathBuf};

pub use config::{ExperimentConfig, Method};
pub use plot::{emit_plot, render_points_csv, render_svg};
pub use run::{repeated_two_block, run_experiment, trial_seed, write_records, ExperimentRecord};
pub use summary::{summarize, write_summary, SummaryRow};

use crate::error::{Error, Result};

/// Files written by [`write_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentOutputs {
    pub records: PathBuf,
    pub summary: PathBuf,
    pub plot: PathBuf,
    pub points: PathBuf,
}

/// Runs the experiment and writes `records.csv`, `summary.csv`, `plot.svg`
/// and `plot_points.csv` into `dir`.
pub fn write_experiment(cfg: &ExperimentConfig, dir: &Path) -> Result<ExperimentOutputs> {
    let records = run_experiment(cfg)?;
    let summary = summarize(&records)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let out = ExperimentOutputs {
        records: dir.join("records.csv"),
        summary: dir.join("summary.csv"),
        plot: dir.join("plot.svg"),
        points: dir.join("plot_points.csv"),
    };
    let create = |p: &Path| std::fs::File::create(p).map_err(|e| Error::io(p, e));
    write_records(&records, create(&out.records)?)?;
    write_summary(&summary, create(&out.summary)?)?;
    emit_plot(&summary, &out.plot, &out.points)?;
    Ok(out)
}
