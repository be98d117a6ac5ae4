use std::f64::consts::FRAC_PI_2;

use dstrength::experiments::{decay_study, sweep_separable, write_csv, write_json, SweepConfig, SweepMode};
use dstrength::measures::{ds_qubit_qudit, OptimizerOptions};
use dstrength::states::{b92_state, probability_simplex_from_angles};
use dstrength::{BlochVector, Error, Spectrum};

fn random_cfg(seed: u64) -> SweepConfig {
    SweepConfig {
        seed,
        mode: SweepMode::Random { samples: 2000 },
        ..SweepConfig::grid(3, 5, 1.2)
    }
}

#[test]
fn random_sweeps_are_reproducible() {
    let a = sweep_separable(&random_cfg(1)).unwrap();
    let b = sweep_separable(&random_cfg(1)).unwrap();
    let c = sweep_separable(&random_cfg(2)).unwrap();
    assert_eq!(a.histogram, b.histogram);
    assert_eq!(a.best_value, b.best_value);
    assert_ne!(a.histogram, c.histogram);
    assert_eq!(a.histogram.total(), 2000);
}

#[test]
fn best_sweep_point_reproduces_its_value() {
    let r = sweep_separable(&SweepConfig::grid(2, 5, FRAC_PI_2)).unwrap();
    let p = r.best_params;
    let ds = ds_qubit_qudit(&p.state(), FRAC_PI_2).unwrap().value;
    assert!((ds - r.best_value).abs() < 1e-12);
    let probs = probability_simplex_from_angles(&p.prob_angles).unwrap();
    assert_eq!(probs, p.probs);
    let a: Vec<_> = p.a_angles.iter().map(|[t, f]| BlochVector::from_angles(*t, *f)).collect();
    assert!((a[0].dot(&BlochVector::Z) - 1.0).abs() < 1e-12);
}

#[test]
fn state_cap_truncates() {
    let cfg = SweepConfig {
        max_states: 100,
        ..SweepConfig::grid(2, 9, 1.0)
    };
    let r = sweep_separable(&cfg).unwrap();
    assert!(r.truncated);
    assert_eq!(r.states_evaluated, 100);
    assert_eq!(r.histogram.total(), 100);
}

#[test]
fn bad_configs_are_rejected() {
    assert!(matches!(sweep_separable(&SweepConfig::grid(5, 3, 1.0)), Err(Error::Range(_))));
    assert!(sweep_separable(&SweepConfig::grid(2, 3, 4.0)).is_err());
}

#[test]
fn decay_study_outputs_round_trip() {
    let study = decay_study(&b92_state(), &Spectrum::qubit(FRAC_PI_2).unwrap(), 4, &OptimizerOptions::default()).unwrap();
    assert!((study.ds - 0.5).abs() < 1e-12);
    let dir = std::env::temp_dir().join(format!("dstrength-exp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    write_csv(dir.join("decay.csv"), &study.table.rows).unwrap();
    write_json(dir.join("decay.json"), &study).unwrap();
    let csv = std::fs::read_to_string(dir.join("decay.csv")).unwrap();
    assert!(csv.starts_with("n,p_err,exponent,normalized_exponent,chernoff_bound\n"));
    assert_eq!(csv.lines().count(), 5);
    let back: dstrength::experiments::DecayStudy =
        serde_json::from_str(&std::fs::read_to_string(dir.join("decay.json")).unwrap()).unwrap();
    assert_eq!(back, study);
    std::fs::remove_dir_all(dir).unwrap();
}
