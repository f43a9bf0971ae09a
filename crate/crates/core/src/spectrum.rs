//! Instantaneous ground states of `H(s) = A(s)·H_q + B(s)·H_c` and the
//! ideal mid-anneal measurement model built on them.
//!
//! `H_q = −Σ σˣ_i` couples every pair of basis states at Hamming distance
//! one with `−A(s)`, so the matrix is stored as its diagonal only; the
//! hypercube structure is implicit. Dense storage appears only inside the
//! eigensolver.
//!
//! With zero longitudinal fields the global spin flip commutes with `H(s)`.
//! For `A(s) > 0` the ground state is unique and strictly positive, hence
//! flip-symmetric, so it is found in the `2^(N−1)`-dimensional symmetric
//! sector. Instances with fields use the full `2^N` space.

use std::io::Write;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ising::{mask, scalarize, EffectiveCouplings, ProblemInstance, ScalarizationWeights, SpinConfiguration};
use crate::schedule::AnnealSchedule;

/// Largest spin count accepted by the dense eigensolver.
pub const SPECTRUM_CAP: usize = 14;

/// Relative energy window defining the classical ground manifold when `A(s) = 0`.
pub const MANIFOLD_REL_TOL: f64 = 1e-9;

/// Eigenpairs whose residual exceeds this fraction of `‖H‖` are rejected.
pub const RESIDUAL_REL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianMatrix {
    n: usize,
    a: f64,
    diagonal: Vec<f64>,
    flip_symmetric: bool,
}

impl HamiltonianMatrix {
    /// `A·H_q + B·H_c` for the given effective couplings.
    pub fn new(couplings: &EffectiveCouplings, a: f64, b: f64) -> Result<Self> {
        let n = couplings.n();
        if n > SPECTRUM_CAP {
            return Err(Error::Capacity {
                what: "the spectrum solver",
                n,
                cap: SPECTRUM_CAP,
            });
        }
        if !(a.is_finite() && b.is_finite()) || a < 0.0 || b < 0.0 {
            return Err(Error::Argument(format!("invalid schedule values A = {a}, B = {b}")));
        }
        let diagonal = (0..1u64 << n)
            .map(|z| b * couplings.energy(SpinConfiguration(z)))
            .collect();
        Ok(HamiltonianMatrix {
            n,
            a,
            diagonal,
            flip_symmetric: couplings.fields().iter().all(|&h| h == 0.0),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    /// Transverse-field strength `A(s)`.
    pub fn transverse(&self) -> f64 {
        self.a
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    /// Number of structurally nonzero off-diagonal pairs, `N·2^(N−1)`.
    pub fn off_diagonal_pairs(&self) -> usize {
        self.n << (self.n - 1)
    }

    /// `H·v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dimension());
        (0..self.dimension())
            .map(|z| {
                let hop: f64 = (0..self.n).map(|i| v[z ^ (1 << i)]).sum();
                self.diagonal[z] * v[z] - self.a * hop
            })
            .collect()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let dim = self.dimension();
        let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal));
        if self.a != 0.0 {
            for z in 0..dim {
                for i in 0..self.n {
                    m[(z, z ^ (1 << i))] = -self.a;
                }
            }
        }
        m
    }

    /// Gershgorin bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let diag = self.diagonal.iter().fold(0.0f64, |acc, d| acc.max(d.abs()));
        diag + self.n as f64 * self.a
    }

    /// Restriction to the flip-symmetric sector, in the orthonormal basis
    /// `(|z⟩ + |¬z⟩)/√2` for representatives `z < 2^(N−1)`.
    fn symmetric_sector(&self) -> DMatrix<f64> {
        let half = self.dimension() / 2;
        let rest = mask(self.n) ^ (1 << (self.n - 1));
        let mut m = DMatrix::zeros(half, half);
        for r in 0..half {
            m[(r, r)] = self.diagonal[r];
            for i in 0..self.n - 1 {
                m[(r, r ^ (1 << i))] -= self.a;
            }
            // Flipping the top spin leaves the sector's representative range;
            // its partner is the complement with the top bit cleared.
            m[(r, r ^ rest as usize)] -= self.a;
        }
        m
    }
}

pub fn build_hamiltonian(
    instance: &ProblemInstance,
    omega: &ScalarizationWeights,
    schedule: &AnnealSchedule,
    s: f64,
) -> Result<HamiltonianMatrix> {
    if instance.n() > SPECTRUM_CAP {
        return Err(Error::Capacity {
            what: "the spectrum solver",
            n: instance.n(),
            cap: SPECTRUM_CAP,
        });
    }
    let (a, b) = schedule.evaluate(s)?;
    HamiltonianMatrix::new(&scalarize(instance, omega)?, a, b)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub amplitudes: Vec<f64>,
    pub energy: f64,
}

impl GroundState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn min_amplitude(&self) -> f64 {
        self.amplitudes.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Lowest eigenpair, sign-fixed so that the amplitudes sum to a positive value.
///
/// With `A = 0` the matrix is diagonal and possibly degenerate; the state
/// returned is then the uniform superposition over the ground manifold.
pub fn ground_state(h: &HamiltonianMatrix) -> Result<GroundState> {
    if h.dimension() < 2 {
        return Err(Error::Argument("dimension must be at least 2".into()));
    }
    if h.a == 0.0 {
        return Ok(classical_ground_state(&h.diagonal));
    }

    let mut amplitudes = if h.flip_symmetric {
        let sector = lowest_eigenvector(h.symmetric_sector())?;
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let full_mask = mask(h.n) as usize;
        let mut v = vec![0.0; h.dimension()];
        for (r, &u) in sector.iter().enumerate() {
            v[r] = u * scale;
            v[r ^ full_mask] = u * scale;
        }
        v
    } else {
        lowest_eigenvector(h.to_dense())?
    };

    if amplitudes.iter().sum::<f64>() < 0.0 {
        amplitudes.iter_mut().for_each(|x| *x = -*x);
    }
    let hv = h.apply(&amplitudes);
    let energy: f64 = hv.iter().zip(&amplitudes).map(|(a, b)| a * b).sum();
    let residual = hv
        .iter()
        .zip(&amplitudes)
        .map(|(hx, x)| (hx - energy * x).powi(2))
        .sum::<f64>()
        .sqrt();
    if residual > RESIDUAL_REL_TOL * h.norm_bound().max(f64::MIN_POSITIVE) {
        return Err(Error::Numeric { residual });
    }
    Ok(GroundState { amplitudes, energy })
}

fn lowest_eigenvector(m: DMatrix<f64>) -> Result<Vec<f64>> {
    let eig = m
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::Numeric { residual: f64::NAN })?;
    let k = eig.eigenvalues.imin();
    Ok(eig.eigenvectors.column(k).iter().copied().collect())
}

/// Indices whose value lies within the relative manifold tolerance of the minimum.
pub fn ground_manifold(energies: &[f64]) -> Vec<usize> {
    let emin = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = MANIFOLD_REL_TOL * emin.abs();
    energies
        .iter()
        .enumerate()
        .filter(|&(_, &e)| e - emin <= tol)
        .map(|(z, _)| z)
        .collect()
}

fn classical_ground_state(diagonal: &[f64]) -> GroundState {
    let manifold = ground_manifold(diagonal);
    let amp = 1.0 / (manifold.len() as f64).sqrt();
    let mut amplitudes = vec![0.0; diagonal.len()];
    for &z in &manifold {
        amplitudes[z] = amp;
    }
    GroundState {
        amplitudes,
        energy: diagonal.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

/// Born-rule probabilities `|⟨z|ψ_GS(s)⟩|²` over the computational basis.
///
/// At `A(s) = 0` this is exactly uniform over the classical ground manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementDistribution {
    pub n: usize,
    pub s: f64,
    pub omega: ScalarizationWeights,
    pub probabilities: Vec<f64>,
}

impl MeasurementDistribution {
    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Debug dump: `index,bitstring,probability`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "index,bitstring,probability")?;
        for (z, p) in self.probabilities.iter().enumerate() {
            writeln!(out, "{z},{},{p}", SpinConfiguration(z as u64).bitstring(self.n))?;
        }
        Ok(())
    }
}

pub fn measurement_distribution(
    instance: &ProblemInstance,
    omega: &ScalarizationWeights,
    schedule: &AnnealSchedule,
    s: f64,
) -> Result<MeasurementDistribution> {
    let h = build_hamiltonian(instance, omega, schedule, s)?;
    let probabilities = if h.a == 0.0 {
        let manifold = ground_manifold(&h.diagonal);
        let p = 1.0 / manifold.len() as f64;
        let mut probabilities = vec![0.0; h.dimension()];
        for z in manifold {
            probabilities[z] = p;
        }
        probabilities
    } else {
        ground_state(&h)?.amplitudes.iter().map(|x| x * x).collect()
    };
    Ok(MeasurementDistribution {
        n: instance.n(),
        s,
        omega: omega.clone(),
        probabilities,
    })
}

/// Identifies an independent random substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SampleKey {
    pub seed: u64,
    pub timing_index: u32,
    pub omega_index: u32,
}

impl SampleKey {
    pub fn new(seed: u64, timing_index: u32, omega_index: u32) -> Self {
        SampleKey {
            seed,
            timing_index,
            omega_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(u64::from(self.timing_index) << 32 | u64::from(self.omega_index));
        rng
    }
}

/// `count` i.i.d. draws by inverse CDF. States with zero probability are never drawn.
pub fn draw_samples(dist: &MeasurementDistribution, count: usize, key: SampleKey) -> Vec<SpinConfiguration> {
    let mut cdf = Vec::with_capacity(dist.probabilities.len());
    let mut acc = 0.0;
    for &p in &dist.probabilities {
        acc += p;
        cdf.push(acc);
    }
    let last_positive = dist
        .probabilities
        .iter()
        .rposition(|&p| p > 0.0)
        .expect("distribution has positive mass");

    let mut rng = key.rng();
    (0..count)
        .map(|_| {
            let target = rng.random::<f64>() * acc;
            let z = cdf.partition_point(|&c| c <= target).min(last_positive);
            SpinConfiguration(z as u64)
        })
        .collect()
}
