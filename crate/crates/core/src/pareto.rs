//! Dominance, exhaustive Pareto fronts, weighted-sum support, and the
//! HV / SP / RNI quality indicators. All objectives are minimized.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::ising::{objective_table, ObjectiveVector, ProblemInstance, SpinConfiguration};

/// `a` dominates `b`: no worse in every objective, strictly better in one.
/// Exact comparison.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::Argument(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(dominates_unchecked(a.values(), b.values()))
}

#[inline]
fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strict |= x < y;
    }
    strict
}

/// Distinct mutually non-dominated vectors of `set`, in ascending order.
pub fn nondominated_filter(set: &[ObjectiveVector]) -> Vec<ObjectiveVector> {
    let distinct: Vec<&ObjectiveVector> = set.iter().collect::<BTreeSet<_>>().into_iter().collect();
    match distinct.first().map(|v| v.dim()) {
        None => Vec::new(),
        Some(2) => {
            // Ascending (e1, e2): a point survives iff its e2 beats every earlier e2.
            let mut best = f64::INFINITY;
            let mut out = Vec::new();
            for v in distinct {
                if v.get(1) < best {
                    best = v.get(1);
                    out.push(v.clone());
                }
            }
            out
        }
        Some(_) => distinct
            .iter()
            .filter(|v| !distinct.iter().any(|u| dominates_unchecked(u.values(), v.values())))
            .map(|v| (*v).clone())
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionRecord {
    pub config: SpinConfiguration,
    pub objectives: ObjectiveVector,
    pub count: u64,
}

/// A multiset of sampled configurations with their objective vectors.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolutionSet {
    pub records: Vec<SolutionRecord>,
    /// Annealing time the samples were taken at, when known.
    pub timing: Option<f64>,
}

impl SolutionSet {
    pub fn new(records: Vec<SolutionRecord>) -> Self {
        SolutionSet { records, timing: None }
    }

    /// Builds a set from configuration counts, looking up objective vectors in `table`.
    pub fn from_counts(counts: &BTreeMap<SpinConfiguration, u64>, table: &[ObjectiveVector]) -> Self {
        SolutionSet::new(
            counts
                .iter()
                .map(|(&config, &count)| SolutionRecord {
                    config,
                    objectives: table[config.index()].clone(),
                    count,
                })
                .collect(),
        )
    }

    pub fn total_count(&self) -> u64 {
        self.records.iter().map(|r| r.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Distinct objective vectors, ascending.
    pub fn distinct_vectors(&self) -> Vec<ObjectiveVector> {
        self.records
            .iter()
            .map(|r| &r.objectives)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .cloned()
            .collect()
    }

    /// Sample counts summed per distinct objective vector.
    pub fn counts_by_vector(&self) -> BTreeMap<ObjectiveVector, u64> {
        let mut out = BTreeMap::new();
        for r in &self.records {
            *out.entry(r.objectives.clone()).or_insert(0) += r.count;
        }
        out
    }

    /// `config_bits,e1,…,eM,count`, one row per record.
    pub fn write_csv<W: Write>(&self, n: usize, mut out: W) -> Result<()> {
        let m = self.records.first().map_or(2, |r| r.objectives.dim());
        let cols: Vec<String> = (1..=m).map(|k| format!("e{k}")).collect();
        writeln!(out, "config_bits,{},count", cols.join(","))?;
        for r in &self.records {
            write!(out, "{}", r.config.bitstring(n))?;
            for v in r.objectives.values() {
                write!(out, ",{v}")?;
            }
            writeln!(out, ",{}", r.count)?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let m = headers.len().saturating_sub(2);
        let well_formed = m >= 1
            && &headers[0] == "config_bits"
            && &headers[headers.len() - 1] == "count"
            && (1..=m).all(|k| headers[k] == format!("e{k}"));
        if !well_formed {
            return Err(bad_csv(format!("unexpected header `{}`", headers.iter().collect::<Vec<_>>().join(","))));
        }
        let mut records = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let config = SpinConfiguration::from_bitstring(&row[0])
                .ok_or_else(|| bad_csv(format!("bad configuration `{}`", &row[0])))?;
            let objectives = (1..=m)
                .map(|k| row[k].parse::<f64>().map_err(|_| bad_csv(format!("bad value `{}`", &row[k]))))
                .collect::<Result<Vec<_>>>()?;
            let count = row[m + 1]
                .parse::<u64>()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| bad_csv(format!("bad count `{}`", &row[m + 1])))?;
            records.push(SolutionRecord {
                config,
                objectives: ObjectiveVector::new(objectives),
                count,
            });
        }
        Ok(SolutionSet::new(records))
    }
}

fn bad_csv(reason: String) -> Error {
    Error::Malformed {
        path: "<solution set>".into(),
        reason,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontPoint {
    pub objectives: ObjectiveVector,
    /// Smallest configuration word attaining `objectives`.
    pub config: SpinConfiguration,
    /// How many of the `2^N` configurations attain `objectives`.
    pub multiplicity: u64,
    pub supported: Option<bool>,
    /// For supported points, an `Ω₁` whose weighted sum this point minimizes.
    pub certificate: Option<f64>,
}

/// Mutually non-dominated points in ascending `e1` order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParetoFront {
    pub points: Vec<FrontPoint>,
}

impl ParetoFront {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn vectors(&self) -> Vec<ObjectiveVector> {
        self.points.iter().map(|p| p.objectives.clone()).collect()
    }

    pub fn unsupported(&self) -> impl Iterator<Item = &FrontPoint> {
        self.points.iter().filter(|p| p.supported == Some(false))
    }

    /// `config_bits,e1,…,eM,count,supported`; `count` is the multiplicity.
    pub fn write_csv<W: Write>(&self, n: usize, mut out: W) -> Result<()> {
        let m = self.points.first().map_or(2, |p| p.objectives.dim());
        let cols: Vec<String> = (1..=m).map(|k| format!("e{k}")).collect();
        writeln!(out, "config_bits,{},count,supported", cols.join(","))?;
        for p in &self.points {
            write!(out, "{}", p.config.bitstring(n))?;
            for v in p.objectives.values() {
                write!(out, ",{v}")?;
            }
            let flag = p.supported.map_or(String::new(), |b| b.to_string());
            writeln!(out, ",{},{flag}", p.multiplicity)?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() < 4 || &headers[headers.len() - 1] != "supported" {
            return Err(bad_csv("front file must end with a `supported` column".into()));
        }
        let m = headers.len() - 3;
        let mut points = Vec::new();
        for row in rdr.records() {
            let row = row?;
            let config = SpinConfiguration::from_bitstring(&row[0])
                .ok_or_else(|| bad_csv(format!("bad configuration `{}`", &row[0])))?;
            let objectives = (1..=m)
                .map(|k| row[k].parse::<f64>().map_err(|_| bad_csv(format!("bad value `{}`", &row[k]))))
                .collect::<Result<Vec<_>>>()?;
            let multiplicity = row[m + 1]
                .parse()
                .map_err(|_| bad_csv(format!("bad count `{}`", &row[m + 1])))?;
            let supported = match &row[m + 2] {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                other => return Err(bad_csv(format!("bad flag `{other}`"))),
            };
            points.push(FrontPoint {
                objectives: ObjectiveVector::new(objectives),
                config,
                multiplicity,
                supported,
                certificate: None,
            });
        }
        Ok(ParetoFront { points })
    }
}

/// Exhaustive front over all `2^N` configurations.
pub fn enumerate_pareto(instance: &ProblemInstance) -> Result<ParetoFront> {
    let table = objective_table(instance)?;
    let mut groups: BTreeMap<&ObjectiveVector, (SpinConfiguration, u64)> = BTreeMap::new();
    for (z, v) in table.iter().enumerate() {
        groups
            .entry(v)
            .and_modify(|g| g.1 += 1)
            .or_insert((SpinConfiguration(z as u64), 1));
    }
    let distinct: Vec<ObjectiveVector> = groups.keys().map(|v| (*v).clone()).collect();
    let points = nondominated_filter(&distinct)
        .into_iter()
        .map(|v| {
            let (config, multiplicity) = groups[&v];
            FrontPoint {
                objectives: v,
                config,
                multiplicity,
                supported: None,
                certificate: None,
            }
        })
        .collect();
    Ok(ParetoFront { points })
}

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Flags each point of a two-objective front as supported (on the
/// lower-left convex hull, collinear points included) or unsupported.
pub fn classify_supported(front: &ParetoFront) -> Result<ParetoFront> {
    if let Some(p) = front.points.iter().find(|p| p.objectives.dim() != 2) {
        return Err(Error::UnsupportedDimension(p.objectives.dim()));
    }
    let mut points = front.points.clone();
    points.sort_by(|a, b| a.objectives.cmp(&b.objectives));
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.objectives.get(0), p.objectives.get(1)))
        .collect();

    // Monotone chain lower hull; collinear points stay on the chain.
    let mut hull: Vec<usize> = Vec::new();
    for k in 0..xy.len() {
        while hull.len() >= 2 && cross(xy[hull[hull.len() - 2]], xy[hull[hull.len() - 1]], xy[k]) < 0.0 {
            hull.pop();
        }
        hull.push(k);
    }

    for p in points.iter_mut() {
        p.supported = Some(false);
        p.certificate = None;
    }
    if hull.len() == 1 {
        points[hull[0]].supported = Some(true);
        points[hull[0]].certificate = Some(0.5);
    }
    for edge in hull.windows(2) {
        let (p, q) = (xy[edge[0]], xy[edge[1]]);
        let (dx, dy) = (q.0 - p.0, p.1 - q.1);
        // Normal of the edge: Ω₁·dx = Ω₂·dy.
        let omega1 = dy / (dx + dy);
        for &k in edge {
            points[k].supported = Some(true);
            points[k].certificate.get_or_insert(omega1);
        }
    }
    Ok(ParetoFront { points })
}

/// Worst-case corner for hypervolume.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePoint(pub Vec<f64>);

impl ReferencePoint {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

/// Component-wise maximum over every vector of every set.
pub fn reference_point<'a, I>(sets: I) -> Result<ReferencePoint>
where
    I: IntoIterator<Item = &'a SolutionSet>,
{
    let mut worst: Option<Vec<f64>> = None;
    for r in sets.into_iter().flat_map(|s| &s.records) {
        match worst.as_mut() {
            None => worst = Some(r.objectives.values().to_vec()),
            Some(w) => {
                if w.len() != r.objectives.dim() {
                    return Err(Error::Argument("mixed objective dimensions".into()));
                }
                for (w, v) in w.iter_mut().zip(r.objectives.values()) {
                    *w = w.max(*v);
                }
            }
        }
    }
    worst
        .map(ReferencePoint)
        .ok_or_else(|| Error::Argument("no solutions to build a reference point from".into()))
}

/// Area dominated by `vectors` and bounded by `reference`.
///
/// Duplicates and dominated vectors are ignored; vectors outside the
/// reference box contribute nothing.
pub fn hypervolume(vectors: &[ObjectiveVector], reference: &ReferencePoint) -> Result<f64> {
    if reference.0.len() != 2 {
        return Err(Error::UnsupportedDimension(reference.0.len()));
    }
    if let Some(v) = vectors.iter().find(|v| v.dim() != 2) {
        return Err(Error::UnsupportedDimension(v.dim()));
    }
    let (r1, r2) = (reference.0[0], reference.0[1]);
    let inside: Vec<ObjectiveVector> = vectors
        .iter()
        .filter(|v| v.get(0) < r1 && v.get(1) < r2)
        .cloned()
        .collect();
    let front = nondominated_filter(&inside);
    let mut area = 0.0;
    for (k, v) in front.iter().enumerate() {
        let next_x = front.get(k + 1).map_or(r1, |u| u.get(0));
        area += (next_x - v.get(0)) * (r2 - v.get(1));
    }
    Ok(area)
}

/// Schott's spacing over nearest-neighbour L1 distances of the distinct vectors.
pub fn spacing(vectors: &[ObjectiveVector]) -> Result<f64> {
    let distinct: Vec<&ObjectiveVector> = vectors.iter().collect::<BTreeSet<_>>().into_iter().collect();
    let n = distinct.len();
    if n < 2 {
        return Err(Error::UndefinedMetric(format!(
            "spacing needs at least 2 distinct vectors, got {n}"
        )));
    }
    let l1 = |a: &ObjectiveVector, b: &ObjectiveVector| -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).sum()
    };
    let nearest: Vec<f64> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| l1(distinct[i], distinct[j]))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mean = nearest.iter().sum::<f64>() / n as f64;
    let var = nearest.iter().map(|d| (mean - d).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok(var.sqrt())
}

/// Fraction of sample occurrences whose vector belongs to `reference_front`.
pub fn rni(set: &SolutionSet, reference_front: &[ObjectiveVector]) -> Result<f64> {
    let total = set.total_count();
    if total == 0 {
        return Err(Error::Argument("RNI of an empty solution set".into()));
    }
    let members: HashSet<&ObjectiveVector> = reference_front.iter().collect();
    let hits: u64 = set
        .records
        .iter()
        .filter(|r| members.contains(&r.objectives))
        .map(|r| r.count)
        .sum();
    Ok(hits as f64 / total as f64)
}
