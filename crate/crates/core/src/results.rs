//! On-disk layout of a sweep:
//!
//! ```text
//! plan.json          echo of the experiment plan
//! timing_<s>.csv     aggregated solution set per timing
//! metrics.csv        s,hv,hv_norm,sp,sp_norm,rni
//! front.csv          exhaustive front with supported flags
//! recovery.csv       unsupported Pareto vectors recovered per timing
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::{recovery_to_csv, Campaign, ExperimentPlan, MetricsCurve, TimingResult};
use crate::pareto::{ParetoFront, SolutionSet};

pub const PLAN_FILE: &str = "plan.json";
pub const METRICS_FILE: &str = "metrics.csv";
pub const FRONT_FILE: &str = "front.csv";
pub const RECOVERY_FILE: &str = "recovery.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleRecord {
    /// `default` or the path the table was loaded from.
    pub source: String,
    /// `[s, A, B]` rows.
    pub breakpoints: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanRecord {
    pub instance: String,
    pub n: usize,
    pub schedule: ScheduleRecord,
    pub timings: Vec<f64>,
    pub grid: usize,
    pub samples: usize,
    pub seed: u64,
}

impl PlanRecord {
    pub fn new(plan: &ExperimentPlan, instance_source: &str, schedule_source: &str) -> Self {
        PlanRecord {
            instance: instance_source.to_string(),
            n: plan.instance.n(),
            schedule: ScheduleRecord {
                source: schedule_source.to_string(),
                breakpoints: plan
                    .schedule
                    .breakpoints()
                    .iter()
                    .map(|bp| [bp.s, bp.a, bp.b])
                    .collect(),
            },
            timings: plan.timings.clone(),
            grid: plan.omega_grid_size,
            samples: plan.samples_per_point,
            seed: plan.seed,
        }
    }
}

pub fn timing_file_name(s: f64) -> String {
    format!("timing_{s}.csv")
}

fn is_output_file(name: &str) -> bool {
    [PLAN_FILE, METRICS_FILE, FRONT_FILE, RECOVERY_FILE].contains(&name)
        || (name.starts_with("timing_") && name.ends_with(".csv"))
}

/// Writes a complete results directory.
///
/// An existing directory is refused unless `force` is set, in which case
/// previous output files in it are replaced.
pub fn write_results_dir(dir: &Path, record: &PlanRecord, campaign: &Campaign, force: bool) -> Result<()> {
    if dir.exists() {
        if !force {
            return Err(Error::OutputExists(dir.to_path_buf()));
        }
        for entry in fs::read_dir(dir)? {
            let entry = entry?;
            if entry.file_type()?.is_file() && entry.file_name().to_str().is_some_and(is_output_file) {
                fs::remove_file(entry.path())?;
            }
        }
    }
    fs::create_dir_all(dir)?;

    let mut plan = serde_json::to_string_pretty(record)?;
    plan.push('\n');
    fs::write(dir.join(PLAN_FILE), plan)?;

    for r in &campaign.results {
        let mut buf = Vec::new();
        r.aggregated.write_csv(record.n, &mut buf)?;
        fs::write(dir.join(timing_file_name(r.s)), buf)?;
    }
    fs::write(dir.join(METRICS_FILE), campaign.metrics.to_csv())?;

    let mut buf = Vec::new();
    campaign.front.write_csv(record.n, &mut buf)?;
    fs::write(dir.join(FRONT_FILE), buf)?;
    fs::write(dir.join(RECOVERY_FILE), recovery_to_csv(&campaign.recovery))?;
    Ok(())
}

fn open(path: PathBuf) -> Result<fs::File> {
    if !path.is_file() {
        return Err(Error::MissingInput(path));
    }
    Ok(fs::File::open(path)?)
}

fn relabel(path: &Path, e: Error) -> Error {
    match e {
        Error::Malformed { reason, .. } => Error::Malformed {
            path: path.to_path_buf(),
            reason,
        },
        other => other,
    }
}

pub fn read_plan(dir: &Path) -> Result<PlanRecord> {
    Ok(serde_json::from_reader(open(dir.join(PLAN_FILE))?)?)
}

pub fn read_timing(dir: &Path, s: f64) -> Result<SolutionSet> {
    let path = dir.join(timing_file_name(s));
    let mut set = SolutionSet::read_csv(open(path.clone())?).map_err(|e| relabel(&path, e))?;
    set.timing = Some(s);
    Ok(set)
}

/// Aggregated sets for every timing listed in `plan.json`.
pub fn read_timings(dir: &Path) -> Result<Vec<TimingResult>> {
    read_plan(dir)?
        .timings
        .into_iter()
        .map(|s| {
            Ok(TimingResult {
                s,
                aggregated: read_timing(dir, s)?,
                raw: None,
            })
        })
        .collect()
}

pub fn read_front(dir: &Path) -> Result<ParetoFront> {
    let path = dir.join(FRONT_FILE);
    ParetoFront::read_csv(open(path.clone())?).map_err(|e| relabel(&path, e))
}

pub fn read_metrics(dir: &Path) -> Result<MetricsCurve> {
    let path = dir.join(METRICS_FILE);
    if !path.is_file() {
        return Err(Error::MissingInput(path));
    }
    MetricsCurve::from_csv(&fs::read_to_string(&path)?).map_err(|e| relabel(&path, e))
}
