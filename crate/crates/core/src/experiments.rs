//! Numerical campaigns: the separable qubit-qubit sweep, the uniform pQC
//! limit, many-copy decay studies and the randomized property suite.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};
use std::path::Path;

use crate::discrimination::{chernoff_decay_check, DecayTable};
use crate::error::{Error, Result};
use crate::linalg::{commutator, frobenius, kron, CMatrix};
use crate::measures::{
    discriminating_strength, ds_qubit_qudit, rotate_local, DsMethod, MethodChoice, OptimizerOptions,
};
use crate::random::{haar_random_unitary, random_bipartite, random_bloch, random_density, rng_for, Channel};
use crate::states::{cq_state, ds_uniform_pqc, probability_simplex_from_angles, separable_unchecked};
use crate::types::{BipartiteState, BlochVector, PureState, Spectrum};

/// Bins of the DS/sin²λ histogram on `[0, 1]`.
pub const HISTOGRAM_BINS: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SweepMode {
    /// Uniform angle grids with gauge fixing.
    Grid,
    /// Independent random ensembles.
    Random { samples: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub ensemble_size: usize,
    /// Grid points per Bloch angle.
    pub resolution: usize,
    /// Grid points per probability angle on `(0, π/4]`; defaults to `resolution`.
    pub prob_resolution: Option<usize>,
    pub lambda: f64,
    pub seed: u64,
    pub max_states: usize,
    pub mode: SweepMode,
}

impl SweepConfig {
    pub fn grid(ensemble_size: usize, resolution: usize, lambda: f64) -> Self {
        Self {
            ensemble_size,
            resolution,
            prob_resolution: None,
            lambda,
            seed: 0,
            max_states: 10_000_000,
            mode: SweepMode::Grid,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(2..=4).contains(&self.ensemble_size) {
            return Err(Error::Range(format!(
                "ensemble size must be 2, 3 or 4, got {}",
                self.ensemble_size
            )));
        }
        if self.resolution < 2 {
            return Err(Error::Range(format!("resolution must be at least 2, got {}", self.resolution)));
        }
        if self.prob_resolution == Some(0) {
            return Err(Error::Range("probability resolution must be positive".into()));
        }
        if self.max_states == 0 {
            return Err(Error::Range("state cap must be positive".into()));
        }
        if !(self.lambda > 0.0 && self.lambda < PI) {
            return Err(Error::Range(format!("lambda = {} must lie in (0, pi)", self.lambda)));
        }
        if let SweepMode::Random { samples: 0 } = self.mode {
            return Err(Error::Range("random mode needs at least one sample".into()));
        }
        Ok(())
    }

    fn prob_res(&self) -> usize {
        self.prob_resolution.unwrap_or(self.resolution)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    fn empty() -> Self {
        Self {
            edges: (0..=HISTOGRAM_BINS).map(|k| k as f64 / HISTOGRAM_BINS as f64).collect(),
            counts: vec![0; HISTOGRAM_BINS],
        }
    }

    fn bin(v: f64) -> usize {
        ((v.max(0.0) * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1)
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// One point of the sweep. Angles are `(θ, φ)` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepParams {
    pub index: usize,
    pub prob_angles: Vec<f64>,
    pub probs: Vec<f64>,
    pub a_angles: Vec<[f64; 2]>,
    pub b_angles: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub histogram: Histogram,
    /// Largest DS/sin²λ seen.
    pub best_value: f64,
    pub best_params: SweepParams,
    pub states_evaluated: usize,
    /// Size of the full grid (or sample count) before the cap.
    pub states_available: usize,
    pub truncated: bool,
}

/// Axis values `θ_k = kπ/(r−1)` and `φ_k = 2πk/r`.
fn polar_grid(r: usize) -> Vec<f64> {
    (0..r).map(|k| PI * k as f64 / (r - 1) as f64).collect()
}

fn azimuth_grid(r: usize) -> Vec<f64> {
    (0..r).map(|k| 2.0 * PI * k as f64 / r as f64).collect()
}

/// Every grid direction, with a single azimuth at each pole.
fn sphere_grid(r: usize) -> Vec<[f64; 2]> {
    let thetas = polar_grid(r);
    let mut out = Vec::new();
    for (i, &t) in thetas.iter().enumerate() {
        if i == 0 || i == r - 1 {
            out.push([t, 0.0]);
        } else {
            out.extend(azimuth_grid(r).into_iter().map(|p| [t, p]));
        }
    }
    out
}

/// The gauge-fixed grid: `û_1 = v̂_1 = +ẑ`, `û_2` in the `xz` half-plane with
/// `x ≥ 0`, all other directions free.
struct SweepGrid {
    n: usize,
    prob_tuples: Vec<Vec<f64>>,
    u2: Vec<[f64; 2]>,
    free: Vec<[f64; 2]>,
    size: usize,
}

impl SweepGrid {
    fn new(cfg: &SweepConfig) -> Self {
        let n = cfg.ensemble_size;
        let pr = cfg.prob_res();
        let axis: Vec<f64> = (1..=pr).map(|k| FRAC_PI_4 * k as f64 / pr as f64).collect();
        let mut prob_tuples: Vec<Vec<f64>> = vec![vec![]];
        for _ in 0..n - 1 {
            prob_tuples = prob_tuples
                .into_iter()
                .flat_map(|t| {
                    axis.iter().map(move |&a| {
                        let mut t = t.clone();
                        t.push(a);
                        t
                    })
                })
                .collect();
        }
        let u2: Vec<[f64; 2]> = polar_grid(cfg.resolution).into_iter().map(|t| [t, 0.0]).collect();
        let free = sphere_grid(cfg.resolution);
        // free directions: û_3..û_N and v̂_2..v̂_N
        let free_slots = (n - 2) + (n - 1);
        let size = prob_tuples.len() * u2.len() * free.len().pow(free_slots as u32);
        Self {
            n,
            prob_tuples,
            u2,
            free,
            size,
        }
    }

    fn params(&self, index: usize) -> SweepParams {
        let mut rest = index;
        let mut take = |radix: usize| {
            let d = rest % radix;
            rest /= radix;
            d
        };
        let mut b_angles = vec![[0.0, 0.0]];
        for _ in 1..self.n {
            b_angles.push(self.free[take(self.free.len())]);
        }
        let mut a_angles = vec![[0.0, 0.0]];
        let u2 = self.u2[take(self.u2.len())];
        a_angles.push(u2);
        for _ in 2..self.n {
            a_angles.push(self.free[take(self.free.len())]);
        }
        let prob_angles = self.prob_tuples[take(self.prob_tuples.len())].clone();
        let probs = probability_simplex_from_angles(&prob_angles).expect("grid angles are in range");
        SweepParams {
            index,
            prob_angles,
            probs,
            a_angles,
            b_angles,
        }
    }
}

fn random_params(cfg: &SweepConfig, index: usize) -> SweepParams {
    let mut rng = rng_for(cfg.seed, index as u64);
    let n = cfg.ensemble_size;
    let prob_angles: Vec<f64> = (0..n - 1)
        .map(|_| FRAC_PI_4 * (1.0 - rng.gen::<f64>()))
        .collect();
    let probs = probability_simplex_from_angles(&prob_angles).expect("angles are in range");
    let mut angles = || -> Vec<[f64; 2]> {
        (0..n)
            .map(|_| {
                let (t, p) = random_bloch(&mut rng).angles();
                [t, p.rem_euclid(2.0 * PI)]
            })
            .collect()
    };
    let a_angles = angles();
    let b_angles = angles();
    SweepParams {
        index,
        prob_angles,
        probs,
        a_angles,
        b_angles,
    }
}

impl SweepParams {
    pub fn state(&self) -> BipartiteState {
        let dir = |v: &[f64; 2]| BlochVector::from_angles(v[0], v[1]);
        let a: Vec<BlochVector> = self.a_angles.iter().map(dir).collect();
        let b: Vec<BlochVector> = self.b_angles.iter().map(dir).collect();
        separable_unchecked(&self.probs, &a, &b)
    }
}

/// Sweeps separable two-qubit ensembles of size `N` and records DS/sin²λ.
/// Results do not depend on the number of worker threads.
pub fn sweep_separable(cfg: &SweepConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let (available, grid) = match cfg.mode {
        SweepMode::Grid => {
            let g = SweepGrid::new(cfg);
            (g.size, Some(g))
        }
        SweepMode::Random { samples } => (samples, None),
    };
    let count = available.min(cfg.max_states);
    let s2 = cfg.lambda.sin().powi(2);
    let params = |k: usize| match &grid {
        Some(g) => g.params(k),
        None => random_params(cfg, k),
    };

    type Acc = (Vec<u64>, f64, usize);
    let fold = |mut acc: Acc, k: usize| -> Result<Acc> {
        let v = ds_qubit_qudit(&params(k).state(), cfg.lambda)?.value / s2;
        acc.0[Histogram::bin(v)] += 1;
        if v > acc.1 || (v == acc.1 && k < acc.2) {
            acc.1 = v;
            acc.2 = k;
        }
        Ok(acc)
    };
    let merge = |a: Acc, b: Acc| -> Acc {
        let counts = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
        let (best, idx) = if b.1 > a.1 || (b.1 == a.1 && b.2 < a.2) {
            (b.1, b.2)
        } else {
            (a.1, a.2)
        };
        (counts, best, idx)
    };
    let init = || (vec![0u64; HISTOGRAM_BINS], f64::NEG_INFINITY, usize::MAX);
    let (counts, best_value, best_index) = (0..count)
        .into_par_iter()
        .try_fold(init, fold)
        .try_reduce(init, |a, b| Ok(merge(a, b)))?;

    let mut histogram = Histogram::empty();
    histogram.counts = counts;
    Ok(SweepResult {
        config: cfg.clone(),
        histogram,
        best_value,
        best_params: params(best_index),
        states_evaluated: count,
        states_available: available,
        truncated: count < available,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformPqcRow {
    pub d: usize,
    pub ds: f64,
    /// DS/sin²λ.
    pub normalized: f64,
    /// `|DS/sin²λ − 2/3|`.
    pub deviation: f64,
}

/// DS of uniform pQC states for growing ensemble size.
pub fn uniform_pqc_limit(d_list: &[usize], lambda: f64) -> Result<Vec<UniformPqcRow>> {
    if d_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("ensemble sizes must be strictly ascending".into()));
    }
    if !(lambda > 0.0 && lambda < PI) {
        return Err(Error::Range(format!("lambda = {lambda} must lie in (0, pi)")));
    }
    let s2 = lambda.sin().powi(2);
    d_list
        .iter()
        .map(|&d| {
            let ds = ds_uniform_pqc(d, lambda)?.value;
            Ok(UniformPqcRow {
                d,
                ds,
                normalized: ds / s2,
                deviation: (ds / s2 - 2.0 / 3.0).abs(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayStudy {
    pub ds: f64,
    pub method: DsMethod,
    pub table: DecayTable,
}

/// Many-copy discrimination of `ρ` against its rotation under the
/// DS-optimal Hamiltonian.
pub fn decay_study(
    state: &BipartiteState,
    spectrum: &Spectrum,
    n_max: usize,
    opts: &OptimizerOptions,
) -> Result<DecayStudy> {
    let ds = discriminating_strength(state, spectrum, MethodChoice::Auto, opts)?;
    let rotated = rotate_local(state, &ds.optimal_hamiltonian)?;
    let table = chernoff_decay_check(state.rho(), rotated.rho(), n_max)?;
    Ok(DecayStudy {
        ds: ds.value,
        method: ds.method,
        table,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub detail: String,
    pub params: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub checks: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl PropertyOutcome {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub seed: u64,
    pub trials: usize,
    pub properties: Vec<PropertyOutcome>,
}

impl PropertyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyOutcome::passed)
    }
}

/// Tolerances of the property checks.
pub const CQ_ZERO_TOL: f64 = 1e-6;
pub const CQ_COMMUTATOR_TOL: f64 = 1e-5;
pub const MONOTONICITY_TOL: f64 = 1e-6;
/// Points of the Schmidt grid for the pure-state monotonicity check.
pub const SCHMIDT_GRID: usize = 50;

fn matrix_json(m: &CMatrix) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::json!(rows)
}

fn state_json(st: &BipartiteState, spectrum: &Spectrum) -> serde_json::Value {
    serde_json::json!({
        "dims": [st.dim_a(), st.dim_b()],
        "spectrum": spectrum.values(),
        "matrix": matrix_json(st.matrix()),
    })
}

/// Qubit trials on even indices, qutrit trials on odd ones; `B` is a qubit.
fn trial_dims(trial: usize) -> (usize, usize) {
    (2 + trial % 2, 2)
}

fn random_spectrum<R: Rng>(dim: usize, rng: &mut R) -> Spectrum {
    if dim == 2 {
        return Spectrum::qubit(rng.gen_range(0.1..PI - 0.1)).expect("in range");
    }
    loop {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-2.0..2.0)).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        if let Ok(s) = Spectrum::new(v) {
            return s;
        }
    }
}

/// Randomized checks of the defining properties of DS:
/// 1. zero on CQ states (and a commuting optimal Hamiltonian there);
/// 2. invariance under local unitaries;
/// 3. monotonicity under channels on `B`;
/// 4. on pure qubit states, strict growth with the smaller Schmidt coefficient.
pub fn property_suite(seed: u64, trials: usize, opts: &OptimizerOptions) -> Result<PropertyReport> {
    if trials == 0 {
        return Err(Error::Range("need at least one trial".into()));
    }
    let stream = |prop: u64, trial: usize| rng_for(seed, prop * 1_000_000 + trial as u64);
    let ds = |st: &BipartiteState, sp: &Spectrum| discriminating_strength(st, sp, MethodChoice::Auto, opts);

    let mut cq = PropertyOutcome {
        name: "cq_zero".into(),
        checks: 0,
        counterexamples: vec![],
    };
    for t in 0..trials {
        let mut rng = stream(1, t);
        let (da, db) = trial_dims(t);
        let probs = crate::random::random_probabilities(da, &mut rng);
        let blocks: Vec<_> = (0..da).map(|_| random_density(db, db, &mut rng)).collect();
        let st = cq_state(&probs, &blocks)?;
        // hide the classical basis behind a random local unitary
        let w = haar_random_unitary(da, &mut rng);
        let st = st.apply_local_unitaries(&w, &CMatrix::identity(db, db))?;
        let sp = random_spectrum(da, &mut rng);
        let r = ds(&st, &sp)?;
        cq.checks += 1;
        let mut detail = None;
        if r.value > CQ_ZERO_TOL {
            detail = Some(format!("DS = {:.3e} on a CQ state", r.value));
        } else if r.value <= 1e-8 {
            let h = kron(&r.optimal_hamiltonian.matrix(), &CMatrix::identity(db, db));
            let c = frobenius(&commutator(st.matrix(), &h));
            if c > CQ_COMMUTATOR_TOL {
                detail = Some(format!("optimal Hamiltonian fails to commute: |[rho, H]| = {c:.3e}"));
            }
        }
        if let Some(detail) = detail {
            cq.counterexamples.push(Counterexample {
                trial: t,
                detail,
                params: state_json(&st, &sp),
            });
        }
    }

    let mut lu = PropertyOutcome {
        name: "local_unitary_invariance".into(),
        checks: 0,
        counterexamples: vec![],
    };
    let mut mono = PropertyOutcome {
        name: "channel_monotonicity".into(),
        checks: 0,
        counterexamples: vec![],
    };
    for t in 0..trials {
        let mut rng = stream(2, t);
        let (da, db) = trial_dims(t);
        let st = random_bipartite(da, db, &mut rng);
        let sp = random_spectrum(da, &mut rng);
        let base = ds(&st, &sp)?.value;

        let w = haar_random_unitary(da, &mut rng);
        let v = haar_random_unitary(db, &mut rng);
        let rotated = st.apply_local_unitaries(&w, &v)?;
        let after = ds(&rotated, &sp)?.value;
        let tol = if da == 2 { 1e-9 } else { 2.0 * opts.tolerance };
        lu.checks += 1;
        if (after - base).abs() > tol {
            lu.counterexamples.push(Counterexample {
                trial: t,
                detail: format!("DS changed from {base:.12} to {after:.12}"),
                params: serde_json::json!({
                    "state": state_json(&st, &sp),
                    "w_a": matrix_json(&w),
                    "v_b": matrix_json(&v),
                }),
            });
        }

        let ch = Channel::random(db, 2, &mut rng);
        let out = ch.apply_on_b(&st)?;
        let after = ds(&out, &sp)?.value;
        mono.checks += 1;
        if after > base + MONOTONICITY_TOL {
            let kraus: Vec<_> = ch.kraus().iter().map(matrix_json).collect();
            mono.counterexamples.push(Counterexample {
                trial: t,
                detail: format!("DS grew from {base:.12} to {after:.12}"),
                params: serde_json::json!({ "state": state_json(&st, &sp), "kraus": kraus }),
            });
        }
    }

    let mut pure = PropertyOutcome {
        name: "pure_schmidt_monotonicity".into(),
        checks: 0,
        counterexamples: vec![],
    };
    let lambda = 1.0;
    let s2 = f64::sin(lambda).powi(2);
    let mut previous: Option<(f64, f64)> = None;
    for k in 0..SCHMIDT_GRID {
        let q0 = 0.5 * k as f64 / (SCHMIDT_GRID - 1) as f64;
        let amps = nalgebra::DVector::from_vec(vec![
            crate::linalg::c(q0.sqrt(), 0.0),
            crate::linalg::c(0.0, 0.0),
            crate::linalg::c(0.0, 0.0),
            crate::linalg::c((1.0 - q0).sqrt(), 0.0),
        ]);
        let st = BipartiteState::from_pure(&PureState::bipartite(amps, 2, 2)?)?;
        let v = ds_qubit_qudit(&st, lambda)?.value;
        let expected = (1.0 - (1.0 - 2.0 * q0).powi(2)) * s2;
        pure.checks += 1;
        let grew = previous.is_none_or(|(_, pv)| v > pv);
        if !grew || (v - expected).abs() > 1e-10 {
            pure.counterexamples.push(Counterexample {
                trial: k,
                detail: format!("q0 = {q0}: DS = {v:.12}, expected {expected:.12}, previous {previous:?}"),
                params: serde_json::json!({ "q0": q0, "lambda": lambda }),
            });
        }
        previous = Some((q0, v));
    }

    Ok(PropertyReport {
        seed,
        trials,
        properties: vec![cq, lu, mono, pure],
    })
}

/// Writes `rows` as CSV with a header line.
pub fn write_csv<T: Serialize>(path: impl AsRef<Path>, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub count: u64,
}

impl SweepResult {
    pub fn histogram_rows(&self) -> Vec<HistogramRow> {
        self.histogram
            .counts
            .iter()
            .enumerate()
            .map(|(k, &count)| HistogramRow {
                bin_lo: self.histogram.edges[k],
                bin_hi: self.histogram.edges[k + 1],
                count,
            })
            .collect()
    }

    /// `{config, best_value, best_params, histogram}` plus counts.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "best_value": self.best_value,
            "best_params": self.best_params,
            "histogram": self.histogram,
            "states_evaluated": self.states_evaluated,
            "states_available": self.states_available,
            "truncated": self.truncated,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyRow {
    pub property: String,
    pub checks: usize,
    pub failures: usize,
    pub passed: bool,
}

impl PropertyReport {
    pub fn rows(&self) -> Vec<PropertyRow> {
        self.properties
            .iter()
            .map(|p| PropertyRow {
                property: p.name.clone(),
                checks: p.checks,
                failures: p.counterexamples.len(),
                passed: p.passed(),
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{b92_state, cq_state};
    use crate::types::DensityMatrix;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn grid_counts() {
        let cfg = SweepConfig::grid(2, 9, FRAC_PI_2);
        let g = SweepGrid::new(&cfg);
        assert_eq!(sphere_grid(9).len(), 7 * 9 + 2);
        assert_eq!(g.size, 9 * 9 * 65);
        let mut cfg = SweepConfig::grid(4, 3, 1.0);
        cfg.prob_resolution = Some(2);
        assert_eq!(SweepGrid::new(&cfg).size, 8 * 3 * 5usize.pow(5));
    }

    #[test]
    fn grid_decoding_is_gauge_fixed() {
        let mut cfg = SweepConfig::grid(3, 3, 1.0);
        cfg.prob_resolution = Some(2);
        let g = SweepGrid::new(&cfg);
        let mut seen = std::collections::HashSet::new();
        for k in 0..g.size {
            let p = g.params(k);
            assert_eq!(p.a_angles[0], [0.0, 0.0]);
            assert_eq!(p.b_angles[0], [0.0, 0.0]);
            assert_eq!(p.a_angles[1][1], 0.0);
            assert!(p.probs.windows(2).all(|w| w[0] <= w[1] + 1e-15));
            seen.insert(format!("{p:?}").replace(&format!("index: {k}"), ""));
        }
        assert_eq!(seen.len(), g.size);
    }

    #[test]
    fn n2_sweep_finds_b92() {
        let cfg = SweepConfig::grid(2, 9, FRAC_PI_2);
        let r = sweep_separable(&cfg).unwrap();
        assert_eq!(r.histogram.total() as usize, r.states_evaluated);
        assert!(!r.truncated);
        assert!(r.best_value <= 0.5 + 1e-9 && r.best_value >= 0.5 - 1e-9, "{}", r.best_value);
        let b = &r.best_params;
        assert_abs_diff_eq!(b.prob_angles[0], FRAC_PI_4, epsilon = 0.02);
        assert_abs_diff_eq!(b.a_angles[1][0], FRAC_PI_2, epsilon = 0.02);
        assert_abs_diff_eq!(b.b_angles[1][0], PI, epsilon = 0.02);
    }

    #[test]
    fn sweep_truncation_and_determinism() {
        let mut cfg = SweepConfig::grid(2, 5, 1.0);
        cfg.max_states = 100;
        let a = sweep_separable(&cfg).unwrap();
        assert!(a.truncated);
        assert_eq!(a.states_evaluated, 100);
        assert_eq!(a.histogram.total(), 100);
        let b = sweep_separable(&cfg).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn random_sweep_is_reproducible_and_bounded() {
        let mut cfg = SweepConfig::grid(4, 2, 0.7);
        cfg.mode = SweepMode::Random { samples: 2000 };
        cfg.seed = 5;
        let a = sweep_separable(&cfg).unwrap();
        let b = sweep_separable(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.best_value <= 0.5 + 1e-6);
        assert_eq!(a.states_evaluated, 2000);
        cfg.seed = 6;
        assert_ne!(sweep_separable(&cfg).unwrap().histogram, a.histogram);
    }

    #[test]
    fn sweep_rejects_bad_config() {
        assert!(sweep_separable(&SweepConfig::grid(5, 3, 1.0)).is_err());
        assert!(sweep_separable(&SweepConfig::grid(2, 1, 1.0)).is_err());
        assert!(sweep_separable(&SweepConfig::grid(2, 3, 0.0)).is_err());
        let mut cfg = SweepConfig::grid(2, 3, 1.0);
        cfg.max_states = 0;
        assert!(sweep_separable(&cfg).is_err());
    }

    #[test]
    fn uniform_limit_examples() {
        let rows = uniform_pqc_limit(&[6, 100, 1000, 10_000], 1.0).unwrap();
        assert!(rows[0].deviation <= 1e-12);
        assert!(rows[1].deviation <= 5e-3, "{:?}", rows[1]);
        assert!(rows[2].deviation <= 1e-3, "{:?}", rows[2]);
        assert!(rows[3].deviation <= 1e-4, "{:?}", rows[3]);
        assert!(uniform_pqc_limit(&[100, 6], 1.0).is_err());
    }

    #[test]
    fn decay_examples() {
        let opts = OptimizerOptions::default();
        let v = nalgebra::DVector::from_vec(vec![
            crate::linalg::c(std::f64::consts::FRAC_1_SQRT_2, 0.),
            crate::linalg::c(0., 0.),
            crate::linalg::c(0., 0.),
            crate::linalg::c(std::f64::consts::FRAC_1_SQRT_2, 0.),
        ]);
        let bell = BipartiteState::from_pure(&PureState::bipartite(v, 2, 2).unwrap()).unwrap();
        let s = decay_study(&bell, &Spectrum::qubit(FRAC_PI_2).unwrap(), 3, &opts).unwrap();
        assert_abs_diff_eq!(s.table.rows[0].p_err, 0.0, epsilon = 1e-12);
        assert!(s.table.rows[0].exponent.is_infinite());

        let b = [DensityMatrix::basis_projector(2, 0), DensityMatrix::basis_projector(2, 1)];
        let cq = cq_state(&[0.4, 0.6], &b).unwrap();
        let s = decay_study(&cq, &Spectrum::qubit(1.0).unwrap(), 4, &opts).unwrap();
        for row in &s.table.rows {
            assert_abs_diff_eq!(row.p_err, 0.5, epsilon = 1e-12);
            assert!(row.normalized_exponent.value() <= 1e-12);
        }

        let s = decay_study(&b92_state(), &Spectrum::qubit(1.0).unwrap(), 6, &opts).unwrap();
        let rate = s.table.chernoff.xi.value();
        for row in &s.table.rows {
            assert!(row.p_err <= row.chernoff_bound + 1e-12);
            assert!(row.exponent.value() >= rate - 1e-12);
        }
    }

    #[test]
    fn property_suite_passes() {
        let r = property_suite(3, 4, &OptimizerOptions::default()).unwrap();
        assert!(r.all_passed(), "{r:#?}");
        assert_eq!(r.properties.len(), 4);
        assert_eq!(r.properties[3].checks, SCHMIDT_GRID);
        assert!(property_suite(3, 0, &OptimizerOptions::default()).is_err());
    }

    #[test]
    fn csv_and_json_writers() {
        let dir = std::env::temp_dir().join(format!("dstrength-exp-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let rows = uniform_pqc_limit(&[4, 6], 1.0).unwrap();
        write_csv(dir.join("u.csv"), &rows).unwrap();
        let text = std::fs::read_to_string(dir.join("u.csv")).unwrap();
        assert!(text.starts_with("d,ds,normalized,deviation\n"));
        assert_eq!(text.lines().count(), 3);
        write_json(dir.join("u.json"), &rows).unwrap();
        let back: Vec<UniformPqcRow> =
            serde_json::from_str(&std::fs::read_to_string(dir.join("u.json")).unwrap()).unwrap();
        assert_eq!(back, rows);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
