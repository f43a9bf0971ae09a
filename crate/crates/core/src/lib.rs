//! Ideal mid-anneal measurement (MAM) sampling for multi-objective Ising
//! problems.
//!
//! A two-objective Ising instance is scalarized with weights `(Ω₁, 1 − Ω₁)`,
//! the instantaneous ground state of `H(s) = A(s)·H_q + B(s)·H_c` is computed
//! exactly, and computational-basis samples are drawn from it. Sweeping the
//! weights and the measurement time `s` shows how intermediate states reach
//! unsupported Pareto optima that the terminal state cannot.
//!
//! Data-parallel work (the `(s, Ω)` cells of a sweep) runs on rayon when the
//! `parallel` feature is enabled; see [`Execution`].

pub mod error;
pub mod exec;
pub mod experiment;
pub mod ising;
pub mod pareto;
pub mod results;
pub mod schedule;
pub mod spectrum;

pub use error::{Error, Result};
pub use exec::Execution;
pub use experiment::{
    compute_metrics, run_campaign, run_sweep, unsupported_recovery_report, Campaign, ExperimentPlan, MetricsCurve,
    TimingResult,
};
pub use ising::{
    generate_instance, objective_energy, objective_vector, scalarize, ObjectiveVector, ProblemInstance,
    ScalarizationWeights, SpinConfiguration, Topology,
};
pub use pareto::{
    classify_supported, dominates, enumerate_pareto, hypervolume, nondominated_filter, reference_point, rni, spacing,
    ParetoFront, ReferencePoint, SolutionRecord, SolutionSet,
};
pub use schedule::AnnealSchedule;
pub use spectrum::{
    build_hamiltonian, draw_samples, ground_state, measurement_distribution, GroundState, HamiltonianMatrix,
    MeasurementDistribution, SampleKey,
};
