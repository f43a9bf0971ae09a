mod common;

use std::fs;

use common::brute_scalarized;
use mamqa::experiment::{objective_scatter, run_campaign};
use mamqa::results::{self, PlanRecord};
use mamqa::{
    compute_metrics, generate_instance, run_sweep, AnnealSchedule, Execution, ExperimentPlan, ScalarizationWeights,
    Topology,
};

fn plan(n: usize, seed: u64) -> ExperimentPlan {
    ExperimentPlan::new(generate_instance(n, &Topology::Complete, seed).unwrap(), AnnealSchedule::linear())
        .with_seed(seed)
}

#[test]
fn s_zero_sampling_is_uniform_over_states() {
    let p = plan(5, 4).with_timings(vec![0.0]).with_grid(21).with_samples(500);
    let results = run_sweep(&p, Execution::Parallel).unwrap();
    let agg = &results[0].aggregated;
    assert_eq!(agg.records.len(), 32);
    let total = 21.0f64 * 500.0;
    let expected = total / 32.0;
    let sigma = (total * (1.0 / 32.0) * (31.0 / 32.0)).sqrt();
    for r in &agg.records {
        assert!((r.count as f64 - expected).abs() <= 5.0 * sigma, "{} vs {expected}", r.count);
    }
}

#[test]
fn s_one_samples_minimize_their_weighted_energy() {
    let mut p = plan(6, 9).with_timings(vec![1.0]).with_grid(101).with_samples(50);
    p.keep_raw = true;
    let results = run_sweep(&p, Execution::Parallel).unwrap();
    let raw = results[0].raw.as_ref().unwrap();
    for (g, set) in raw.iter().enumerate() {
        let w = ScalarizationWeights::grid_point(g, 101).unwrap();
        let energies: Vec<f64> = (0..64).map(|z| brute_scalarized(&p.instance, z, w.values())).collect();
        let emin = energies.iter().copied().fold(f64::INFINITY, f64::min);
        for r in &set.records {
            assert!((energies[r.config.index()] - emin).abs() <= 1e-9 * emin.abs());
        }
    }
}

#[test]
fn sweeps_are_deterministic_across_modes() {
    let p = plan(6, 2).with_grid(21).with_samples(200);
    let a = run_sweep(&p, Execution::Serial).unwrap();
    let b = run_sweep(&p, Execution::Parallel).unwrap();
    let c = run_sweep(&p, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    assert_eq!(b, c);
    let other = run_sweep(&p.clone().with_seed(3), Execution::Serial).unwrap();
    assert_ne!(a, other);
}

#[test]
fn capacity_errors_surface() {
    let p = plan(15, 1);
    let err = run_sweep(&p, Execution::Serial).unwrap_err();
    assert!(matches!(err, mamqa::Error::Capacity { cap: 14, .. }));
}

#[test]
fn metrics_reenter_from_exported_csv() {
    let p = plan(6, 5).with_grid(51).with_samples(300);
    let campaign = run_campaign(&p, Execution::Parallel).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let record = PlanRecord::new(&p, "instance.json", "default");
    results::write_results_dir(&out, &record, &campaign, false).unwrap();

    let reread = results::read_timings(&out).unwrap();
    assert_eq!(reread.len(), 11);
    let curve = compute_metrics(&reread).unwrap();
    assert_eq!(curve, campaign.metrics);
    assert_eq!(fs::read_to_string(out.join("metrics.csv")).unwrap(), curve.to_csv());
    assert_eq!(results::read_metrics(&out).unwrap(), campaign.metrics);
    assert_eq!(results::read_plan(&out).unwrap(), record);

    let front = results::read_front(&out).unwrap();
    assert_eq!(front.vectors(), campaign.front.vectors());

    // Normalization identities.
    assert_eq!(curve.row(0.0).unwrap().hv_norm, Some(1.0));
    if curve.row(1.0).unwrap().sp_norm.is_some() {
        assert_eq!(curve.row(1.0).unwrap().sp_norm, Some(1.0));
    }
    assert!(curve.rows.iter().all(|r| (0.0..=1.0).contains(&r.rni)));

    // Overwrite guard.
    assert!(matches!(
        results::write_results_dir(&out, &record, &campaign, false),
        Err(mamqa::Error::OutputExists(_))
    ));
    results::write_results_dir(&out, &record, &campaign, true).unwrap();
}

#[test]
fn recovery_report_endpoints() {
    // Find an instance with unsupported optima.
    let mut checked = 0;
    for seed in 0..40 {
        let p = plan(6, seed).with_timings(vec![0.0, 0.6, 1.0]).with_grid(101).with_samples(200);
        let front = mamqa::classify_supported(&mamqa::enumerate_pareto(&p.instance).unwrap()).unwrap();
        let unsupported = front.unsupported().count();
        if unsupported == 0 {
            continue;
        }
        let campaign = run_campaign(&p, Execution::Parallel).unwrap();
        let rec = &campaign.recovery;
        assert_eq!(rec[0].distinct, unsupported, "uniform sampling covers the whole front");
        assert_eq!((rec[2].distinct, rec[2].samples), (0, 0));

        // Every front vector shows up at s = 0; at s = 1 every Pareto row is supported.
        let start = objective_scatter(&campaign.results[0].aggregated, &campaign.front);
        assert_eq!(start.iter().filter(|r| r.is_pareto).count(), campaign.front.len());
        let end = objective_scatter(&campaign.results[2].aggregated, &campaign.front);
        assert!(end.iter().filter(|r| r.is_pareto).all(|r| r.is_supported));
        assert_eq!(end.iter().map(|r| r.count).sum::<u64>(), 101 * 200);

        checked += 1;
        if checked == 3 {
            break;
        }
    }
    assert_eq!(checked, 3);
}
