//! Weight sweep × timing grid sampling campaigns and their metric curves.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exec::{map_indexed, Execution};
use crate::ising::{objective_table, ObjectiveVector, ProblemInstance, ScalarizationWeights, SpinConfiguration};
use crate::pareto::{
    classify_supported, enumerate_pareto, hypervolume, nondominated_filter, reference_point, rni, spacing,
    ParetoFront, SolutionSet,
};
use crate::schedule::AnnealSchedule;
use crate::spectrum::{draw_samples, measurement_distribution, SampleKey, SPECTRUM_CAP};

pub const DEFAULT_OMEGA_GRID: usize = 101;
pub const DEFAULT_SAMPLES: usize = 1000;

/// `0, 0.1, …, 1`.
pub fn default_timings() -> Vec<f64> {
    (0..=10).map(|k| k as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub instance: ProblemInstance,
    pub schedule: AnnealSchedule,
    pub timings: Vec<f64>,
    pub omega_grid_size: usize,
    pub samples_per_point: usize,
    pub seed: u64,
    /// Keep the per-weight sample sets alongside the aggregates.
    pub keep_raw: bool,
}

impl ExperimentPlan {
    pub fn new(instance: ProblemInstance, schedule: AnnealSchedule) -> Self {
        ExperimentPlan {
            instance,
            schedule,
            timings: default_timings(),
            omega_grid_size: DEFAULT_OMEGA_GRID,
            samples_per_point: DEFAULT_SAMPLES,
            seed: 0,
            keep_raw: false,
        }
    }

    pub fn with_timings(mut self, timings: Vec<f64>) -> Self {
        self.timings = timings;
        self
    }

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.omega_grid_size = grid;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples_per_point = samples;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.timings.is_empty() {
            return Err(Error::Argument("no timings".into()));
        }
        if self.timings.iter().any(|s| !(0.0..=1.0).contains(s)) {
            return Err(Error::Argument(format!("timings must lie in [0, 1]: {:?}", self.timings)));
        }
        if self.timings.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Argument(format!(
                "timings must be strictly increasing: {:?}",
                self.timings
            )));
        }
        if self.omega_grid_size < 2 {
            return Err(Error::Argument("weight grid needs at least 2 points".into()));
        }
        if self.samples_per_point < 1 {
            return Err(Error::Argument("need at least one sample per point".into()));
        }
        if self.instance.m() != 2 {
            return Err(Error::UnsupportedDimension(self.instance.m()));
        }
        if self.instance.n() > SPECTRUM_CAP {
            return Err(Error::Capacity {
                what: "the spectrum solver",
                n: self.instance.n(),
                cap: SPECTRUM_CAP,
            });
        }
        if u32::try_from(self.timings.len()).is_err() || u32::try_from(self.omega_grid_size).is_err() {
            return Err(Error::Argument("grid too large".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingResult {
    pub s: f64,
    /// Union over every weight point, counts summed, ordered by configuration.
    pub aggregated: SolutionSet,
    /// Per-weight sets, when the plan asks for them.
    pub raw: Option<Vec<SolutionSet>>,
}

type Counts = BTreeMap<SpinConfiguration, u64>;

fn sample_cell(plan: &ExperimentPlan, timing: usize, g: usize) -> Result<Counts> {
    let s = plan.timings[timing];
    let omega = ScalarizationWeights::grid_point(g, plan.omega_grid_size)?;
    let annotate = |e: Error| Error::Cell {
        s,
        omega1: omega.values()[0],
        source: Box::new(e),
    };
    let dist = measurement_distribution(&plan.instance, &omega, &plan.schedule, s).map_err(annotate)?;
    let key = SampleKey::new(plan.seed, timing as u32, g as u32);
    let mut counts = Counts::new();
    for z in draw_samples(&dist, plan.samples_per_point, key) {
        *counts.entry(z).or_insert(0) += 1;
    }
    Ok(counts)
}

/// Samples every `(s, Ω)` cell of the plan and aggregates per timing.
///
/// Cell `(t, g)` draws from substream `(seed, t, g)`, so the output does not
/// depend on `mode`.
pub fn run_sweep(plan: &ExperimentPlan, mode: Execution) -> Result<Vec<TimingResult>> {
    plan.validate()?;
    let table = objective_table(&plan.instance)?;
    let grid = plan.omega_grid_size;
    let cells = map_indexed(plan.timings.len() * grid, mode, |k| sample_cell(plan, k / grid, k % grid));

    let mut cells = cells.into_iter();
    let mut results = Vec::with_capacity(plan.timings.len());
    for &s in &plan.timings {
        let mut total = Counts::new();
        let mut raw = plan.keep_raw.then(Vec::new);
        for counts in cells.by_ref().take(grid) {
            let counts = counts?;
            for (&z, &c) in &counts {
                *total.entry(z).or_insert(0) += c;
            }
            if let Some(raw) = raw.as_mut() {
                let mut set = SolutionSet::from_counts(&counts, &table);
                set.timing = Some(s);
                raw.push(set);
            }
        }
        let mut aggregated = SolutionSet::from_counts(&total, &table);
        aggregated.timing = Some(s);
        results.push(TimingResult { s, aggregated, raw });
    }
    Ok(results)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub s: f64,
    pub hv: f64,
    /// HV divided by its value at `s = 0`.
    pub hv_norm: Option<f64>,
    pub sp: Option<f64>,
    /// SP divided by its value at `s = 1`.
    pub sp_norm: Option<f64>,
    pub rni: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsCurve {
    pub rows: Vec<MetricsRow>,
}

impl MetricsCurve {
    pub fn row(&self, s: f64) -> Option<&MetricsRow> {
        self.rows.iter().find(|r| r.s == s)
    }

    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        let mut out = String::from("s,hv,hv_norm,sp,sp_norm,rni\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.s,
                r.hv,
                opt(r.hv_norm),
                opt(r.sp),
                opt(r.sp_norm),
                r.rni
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |reason: String| Error::Malformed {
            path: "metrics.csv".into(),
            reason,
        };
        let mut lines = text.lines();
        if lines.next() != Some("s,hv,hv_norm,sp,sp_norm,rni") {
            return Err(bad("unexpected header".into()));
        }
        let num = |t: &str| t.parse::<f64>().map_err(|_| bad(format!("bad number `{t}`")));
        let opt = |t: &str| if t.is_empty() { Ok(None) } else { num(t).map(Some) };
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(bad(format!("expected 6 columns in `{line}`")));
            }
            rows.push(MetricsRow {
                s: num(f[0])?,
                hv: num(f[1])?,
                hv_norm: opt(f[2])?,
                sp: opt(f[3])?,
                sp_norm: opt(f[4])?,
                rni: num(f[5])?,
            });
        }
        Ok(MetricsCurve { rows })
    }
}

/// Per-timing HV, SP and RNI.
///
/// The HV reference point and the RNI reference front come from the union
/// of all timings. Normalized values are absent when the anchor timing is
/// missing or its value is zero or undefined.
pub fn compute_metrics(results: &[TimingResult]) -> Result<MetricsCurve> {
    if results.is_empty() {
        return Err(Error::Argument("no timing results".into()));
    }
    let reference = reference_point(results.iter().map(|r| &r.aggregated))?;
    let union: Vec<ObjectiveVector> = results
        .iter()
        .flat_map(|r| r.aggregated.records.iter().map(|rec| rec.objectives.clone()))
        .collect();
    let reference_front = nondominated_filter(&union);

    let mut rows = Vec::with_capacity(results.len());
    for r in results {
        let distinct = r.aggregated.distinct_vectors();
        let sp = match spacing(&distinct) {
            Ok(v) => Some(v),
            Err(Error::UndefinedMetric(_)) => None,
            Err(e) => return Err(e),
        };
        rows.push(MetricsRow {
            s: r.s,
            hv: hypervolume(&distinct, &reference)?,
            hv_norm: None,
            sp,
            sp_norm: None,
            rni: rni(&r.aggregated, &reference_front)?,
        });
    }

    let hv_anchor = rows.iter().find(|r| r.s == 0.0).map(|r| r.hv).filter(|&v| v > 0.0);
    let sp_anchor = rows
        .iter()
        .find(|r| r.s == 1.0)
        .and_then(|r| r.sp)
        .filter(|&v| v > 0.0);
    for row in &mut rows {
        row.hv_norm = hv_anchor.map(|a| row.hv / a);
        row.sp_norm = sp_anchor.and_then(|a| row.sp.map(|sp| sp / a));
    }
    Ok(MetricsCurve { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryRow {
    pub s: f64,
    /// Distinct unsupported front vectors present in the timing's samples.
    pub distinct: usize,
    /// Total samples landing on them.
    pub samples: u64,
}

pub fn recovery_to_csv(rows: &[RecoveryRow]) -> String {
    let mut out = String::from("s,unsupported_distinct,unsupported_samples\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.s, r.distinct, r.samples));
    }
    out
}

/// Counts sampled unsupported Pareto vectors per timing. `front` must be classified.
pub fn unsupported_recovery_report(results: &[TimingResult], front: &ParetoFront) -> Result<Vec<RecoveryRow>> {
    if front.points.iter().any(|p| p.supported.is_none()) {
        return Err(Error::Argument("front has not been classified".into()));
    }
    let unsupported: Vec<&ObjectiveVector> = front.unsupported().map(|p| &p.objectives).collect();
    Ok(results
        .iter()
        .map(|r| {
            let by_vector = r.aggregated.counts_by_vector();
            let hits: Vec<u64> = unsupported.iter().filter_map(|v| by_vector.get(*v).copied()).collect();
            RecoveryRow {
                s: r.s,
                distinct: hits.len(),
                samples: hits.iter().sum(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterRow {
    pub objectives: ObjectiveVector,
    pub count: u64,
    pub is_pareto: bool,
    pub is_supported: bool,
}

/// Sampled objective vectors with their frequencies and front membership.
pub fn objective_scatter(set: &SolutionSet, front: &ParetoFront) -> Vec<ScatterRow> {
    let flags: BTreeMap<&ObjectiveVector, bool> = front
        .points
        .iter()
        .map(|p| (&p.objectives, p.supported == Some(true)))
        .collect();
    set.counts_by_vector()
        .into_iter()
        .map(|(v, count)| {
            let flag = flags.get(&v).copied();
            ScatterRow {
                objectives: v,
                count,
                is_pareto: flag.is_some(),
                is_supported: flag.unwrap_or(false),
            }
        })
        .collect()
}

pub fn scatter_to_csv(rows: &[ScatterRow]) -> String {
    let m = rows.first().map_or(2, |r| r.objectives.dim());
    let cols: Vec<String> = (1..=m).map(|k| format!("e{k}")).collect();
    let mut out = format!("{},count,is_pareto,is_supported\n", cols.join(","));
    for r in rows {
        for v in r.objectives.values() {
            out.push_str(&format!("{v},"));
        }
        out.push_str(&format!("{},{},{}\n", r.count, r.is_pareto, r.is_supported));
    }
    out
}

/// Everything a sweep produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub results: Vec<TimingResult>,
    pub metrics: MetricsCurve,
    pub front: ParetoFront,
    pub recovery: Vec<RecoveryRow>,
}

/// Sweep, metrics, the classified exhaustive front, and the recovery report.
pub fn run_campaign(plan: &ExperimentPlan, mode: Execution) -> Result<Campaign> {
    let results = run_sweep(plan, mode)?;
    let metrics = compute_metrics(&results)?;
    let front = classify_supported(&enumerate_pareto(&plan.instance)?)?;
    let recovery = unsupported_recovery_report(&results, &front)?;
    Ok(Campaign {
        results,
        metrics,
        front,
        recovery,
    })
}
