//! Multi-objective Ising instances.
//!
//! Spin convention used by every module: bit `i` of a configuration word
//! set to 0 means spin `i` points up (`σᶻ = +1`), set to 1 means down
//! (`σᶻ = −1`). Spin 0 is the least significant bit, so a configuration
//! word is also the index of its computational basis state.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest spin count a configuration word can hold.
pub const MAX_SPINS: usize = 63;

/// Largest spin count for which all `2^N` objective vectors are tabulated.
pub const ENUMERATION_CAP: usize = 20;

/// A computational basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SpinConfiguration(pub u64);

impl SpinConfiguration {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// `σᶻ` eigenvalue of spin `i`.
    #[inline]
    pub fn spin(self, i: usize) -> i8 {
        if self.0 >> i & 1 == 0 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn aligned(self, i: usize, j: usize) -> bool {
        (self.0 >> i ^ self.0 >> j) & 1 == 0
    }

    /// Global spin flip on `n` spins.
    pub fn flipped(self, n: usize) -> Self {
        SpinConfiguration(!self.0 & mask(n))
    }

    /// `n` characters, spin 0 first; `0` is up and `1` is down.
    pub fn bitstring(self, n: usize) -> String {
        (0..n)
            .map(|i| if self.0 >> i & 1 == 0 { '0' } else { '1' })
            .collect()
    }

    pub fn from_bitstring(s: &str) -> Option<Self> {
        if s.is_empty() || s.len() > MAX_SPINS {
            return None;
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return None,
            }
        }
        Some(SpinConfiguration(bits))
    }
}

pub(crate) fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Objective values `(E₁, …, E_M)` of one configuration.
///
/// Equality is exact floating-point equality, with `0.0 == -0.0`; hashing
/// and ordering are consistent with it. Values are always finite.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ObjectiveVector(Vec<f64>);

impl ObjectiveVector {
    pub fn new(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()));
        // Canonicalize signed zeros.
        ObjectiveVector(values.into_iter().map(|v| v + 0.0).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, m: usize) -> f64 {
        self.0[m]
    }

    /// `Σ_m Ω_m e_m`.
    pub fn weighted(&self, omega: &ScalarizationWeights) -> f64 {
        self.0
            .iter()
            .zip(omega.values())
            .map(|(e, w)| e * w)
            .sum()
    }
}

impl From<Vec<f64>> for ObjectiveVector {
    fn from(v: Vec<f64>) -> Self {
        ObjectiveVector::new(v)
    }
}

impl<const K: usize> From<[f64; K]> for ObjectiveVector {
    fn from(v: [f64; K]) -> Self {
        ObjectiveVector::new(v.to_vec())
    }
}

impl PartialEq for ObjectiveVector {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for ObjectiveVector {}

impl Hash for ObjectiveVector {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for v in &self.0 {
            (v + 0.0).to_bits().hash(state);
        }
    }
}

impl Ord for ObjectiveVector {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match (a + 0.0).total_cmp(&(b + 0.0)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for ObjectiveVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ObjectiveVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Linear weighted-sum coefficients: non-negative, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarizationWeights(Vec<f64>);

impl ScalarizationWeights {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        if omega.is_empty() {
            return Err(Error::Argument("empty weight vector".into()));
        }
        if omega.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Argument(format!(
                "weights must be finite and non-negative: {omega:?}"
            )));
        }
        let total: f64 = omega.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Argument(format!("weights sum to {total}, not 1")));
        }
        Ok(ScalarizationWeights(omega))
    }

    /// Two-objective weights `(Ω₁, 1 − Ω₁)`.
    pub fn two(omega1: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&omega1) {
            return Err(Error::Argument(format!("Ω₁ = {omega1} is outside [0, 1]")));
        }
        Self::new(vec![omega1, 1.0 - omega1])
    }

    /// The `g`-th of `grid` equally spaced two-objective weights, endpoints included.
    pub fn grid_point(g: usize, grid: usize) -> Result<Self> {
        if grid < 2 || g >= grid {
            return Err(Error::Argument(format!("grid point {g} of {grid}")));
        }
        Self::two(g as f64 / (grid - 1) as f64)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    /// Per-objective weights `w_{m,i,j}`.
    pub w: Vec<f64>,
}

/// Graph topology for instance generation.
#[derive(Debug, Clone, PartialEq)]
pub enum Topology {
    Complete,
    EdgeList(Vec<(usize, usize)>),
}

impl Topology {
    /// Parses `complete` or a comma-separated list of `i-j` pairs.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("complete") {
            return Ok(Topology::Complete);
        }
        let mut pairs = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| Error::Argument(format!("bad edge `{item}`, expected i-j")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Argument(format!("bad spin index in `{item}`")))
            };
            pairs.push((parse(a)?, parse(b)?));
        }
        if pairs.is_empty() {
            return Err(Error::Argument("empty edge list".into()));
        }
        Ok(Topology::EdgeList(pairs))
    }

    fn pairs(&self, n: usize) -> Vec<(usize, usize)> {
        match self {
            Topology::Complete => (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect(),
            Topology::EdgeList(pairs) => pairs
                .iter()
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect(),
        }
    }
}

/// A multi-objective Ising problem on `n` spins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct ProblemInstance {
    n: usize,
    m: usize,
    edges: Vec<Edge>,
    h: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    m: usize,
    edges: Vec<Edge>,
    h: Vec<f64>,
}

impl TryFrom<InstanceFile> for ProblemInstance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        ProblemInstance::new(f.n, f.m, f.edges, f.h)
    }
}

impl From<ProblemInstance> for InstanceFile {
    fn from(p: ProblemInstance) -> Self {
        InstanceFile {
            n: p.n,
            m: p.m,
            edges: p.edges,
            h: p.h,
        }
    }
}

impl ProblemInstance {
    /// Builds an instance, checking every structural invariant.
    pub fn new(n: usize, m: usize, edges: Vec<Edge>, h: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance(format!("n = {n}, need at least 2 spins")));
        }
        if n > MAX_SPINS {
            return Err(Error::Capacity {
                what: "a problem instance",
                n,
                cap: MAX_SPINS,
            });
        }
        if m < 2 {
            return Err(Error::InvalidInstance(format!("m = {m}, need at least 2 objectives")));
        }
        if h.len() != n {
            return Err(Error::InvalidInstance(format!(
                "{} longitudinal fields for {n} spins",
                h.len()
            )));
        }
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInstance("non-finite field".into()));
        }
        let mut seen = BTreeSet::new();
        for e in &edges {
            if !(e.i < e.j && e.j < n) {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) violates 0 <= i < j < {n}",
                    e.i, e.j
                )));
            }
            if !seen.insert((e.i, e.j)) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({}, {})", e.i, e.j)));
            }
            if e.w.len() != m {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) has {} weights, expected {m}",
                    e.i,
                    e.j,
                    e.w.len()
                )));
            }
            if e.w.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInstance(format!(
                    "edge ({}, {}) has a non-finite weight",
                    e.i, e.j
                )));
            }
        }
        let pairs: Vec<_> = edges.iter().map(|e| (e.i, e.j)).collect();
        let components = count_components(n, &pairs);
        if components != 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(ProblemInstance { n, m, edges, h })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    pub fn has_zero_fields(&self) -> bool {
        self.h.iter().all(|&x| x == 0.0)
    }

    /// Number of basis states, `2^N`.
    pub fn dimension(&self) -> usize {
        1usize << self.n
    }

    pub fn from_json<R: Read>(reader: R) -> Result<Self> {
        Ok(serde_json::from_reader(reader)?)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn write_json<W: Write>(&self, mut writer: W) -> Result<()> {
        writer.write_all(self.to_json().as_bytes())?;
        Ok(())
    }

    /// `Σ_edges |w_{m,i,j}|`, the bound on `|E_m|` when fields vanish.
    pub fn weight_norm(&self, m: usize) -> f64 {
        self.edges.iter().map(|e| e.w[m].abs()).sum()
    }
}

fn count_components(n: usize, pairs: &[(usize, usize)]) -> usize {
    let mut adjacency = vec![Vec::new(); n];
    for &(a, b) in pairs {
        adjacency[a].push(b);
        adjacency[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &u in &adjacency[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    components
}

/// Generates a two-objective conflict instance.
///
/// Per edge, in lexicographic `(i, j)` order, `w₁` is drawn from `[−1, 0]`
/// and `w₂` from `[0, 1]` using a ChaCha8 stream seeded with `seed`.
/// Longitudinal fields are zero.
pub fn generate_instance(n: usize, topology: &Topology, seed: u64) -> Result<ProblemInstance> {
    if n < 2 {
        return Err(Error::Argument(format!("n = {n}, need at least 2 spins")));
    }
    if n > MAX_SPINS {
        return Err(Error::Capacity {
            what: "instance generation",
            n,
            cap: MAX_SPINS,
        });
    }
    let mut pairs = topology.pairs(n);
    if let Some(&(i, j)) = pairs.iter().find(|&&(i, j)| i == j || j >= n) {
        return Err(Error::Argument(format!("edge ({i}, {j}) is invalid for n = {n}")));
    }
    pairs.sort_unstable();
    pairs.dedup();
    let components = count_components(n, &pairs);
    if components != 1 {
        return Err(Error::Disconnected { components });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = pairs
        .into_iter()
        .map(|(i, j)| {
            let w1 = rng.random_range(-1.0..=0.0);
            let w2 = rng.random_range(0.0..=1.0);
            Edge { i, j, w: vec![w1, w2] }
        })
        .collect();
    ProblemInstance::new(n, 2, edges, vec![0.0; n])
}

fn check_config(instance: &ProblemInstance, z: SpinConfiguration) -> Result<()> {
    if z.0 > mask(instance.n) {
        return Err(Error::Argument(format!(
            "configuration {} out of range for N = {}",
            z.0, instance.n
        )));
    }
    Ok(())
}

#[inline]
fn edge_energy(instance: &ProblemInstance, z: SpinConfiguration, m: usize) -> f64 {
    let mut acc = 0.0;
    for e in &instance.edges {
        if z.aligned(e.i, e.j) {
            acc += e.w[m];
        } else {
            acc -= e.w[m];
        }
    }
    -acc + 0.0
}

/// `E_m(z) = −Σ_{(i,j)} w_{m,i,j} z_i z_j` for the zero-based objective index `m`.
pub fn objective_energy(instance: &ProblemInstance, z: SpinConfiguration, m: usize) -> Result<f64> {
    if m >= instance.m {
        return Err(Error::Argument(format!(
            "objective index {m} out of range for M = {}",
            instance.m
        )));
    }
    check_config(instance, z)?;
    Ok(edge_energy(instance, z, m))
}

pub fn objective_vector(instance: &ProblemInstance, z: SpinConfiguration) -> Result<ObjectiveVector> {
    check_config(instance, z)?;
    Ok(ObjectiveVector::new(
        (0..instance.m).map(|m| edge_energy(instance, z, m)).collect(),
    ))
}

/// Objective vectors of all `2^N` basis states, indexed by configuration word.
pub fn objective_table(instance: &ProblemInstance) -> Result<Vec<ObjectiveVector>> {
    if instance.n > ENUMERATION_CAP {
        return Err(Error::Capacity {
            what: "exhaustive enumeration",
            n: instance.n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok((0..instance.dimension() as u64)
        .map(|z| {
            let z = SpinConfiguration(z);
            ObjectiveVector::new((0..instance.m).map(|m| edge_energy(instance, z, m)).collect())
        })
        .collect())
}

/// Weighted-sum couplings `W_{i,j} = Σ_m Ω_m w_{m,i,j}` plus the fields.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveCouplings {
    n: usize,
    couplings: Vec<(usize, usize, f64)>,
    h: Vec<f64>,
}

impl EffectiveCouplings {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn couplings(&self) -> &[(usize, usize, f64)] {
        &self.couplings
    }

    pub fn coupling(&self, i: usize, j: usize) -> Option<f64> {
        let (i, j) = (i.min(j), i.max(j));
        self.couplings
            .iter()
            .find(|&&(a, b, _)| a == i && b == j)
            .map(|&(_, _, w)| w)
    }

    pub fn fields(&self) -> &[f64] {
        &self.h
    }

    /// Classical energy `−Σ W_{i,j} z_i z_j − Σ h_i z_i`.
    #[inline]
    pub fn energy(&self, z: SpinConfiguration) -> f64 {
        let mut acc = 0.0;
        for &(i, j, w) in &self.couplings {
            if z.aligned(i, j) {
                acc += w;
            } else {
                acc -= w;
            }
        }
        for (i, &h) in self.h.iter().enumerate() {
            if h != 0.0 {
                acc += h * f64::from(z.spin(i));
            }
        }
        -acc + 0.0
    }
}

pub fn scalarize(instance: &ProblemInstance, omega: &ScalarizationWeights) -> Result<EffectiveCouplings> {
    if omega.dim() != instance.m {
        return Err(Error::Argument(format!(
            "{} weights for M = {} objectives",
            omega.dim(),
            instance.m
        )));
    }
    let couplings = instance
        .edges
        .iter()
        .map(|e| {
            let w = e.w.iter().zip(omega.values()).map(|(w, o)| w * o).sum();
            (e.i, e.j, w)
        })
        .collect();
    Ok(EffectiveCouplings {
        n: instance.n,
        couplings,
        h: instance.h.clone(),
    })
}
