//! Constructors for the separable families: classical-quantum (CQ),
//! pure quantum-classical (pQC), GB92/B92, general quantum-classical (QC)
//! qubit pairs and Bloch-form separable ensembles, together with their
//! closed-form DS.

use nalgebra::{DVector, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::linalg::{c, kron, CMatrix};
use crate::measures::{qubit_hamiltonian, DsMethod, DsResult};
use crate::types::{BipartiteState, BlochVector, DensityMatrix, PureState, NORM_TOL};

fn check_weights(p: &[f64], strict: bool) -> Result<()> {
    if p.is_empty() {
        return Err(Error::Contract("empty probability vector".into()));
    }
    let bad = |x: f64| if strict { !(x > 0.0) } else { !(x >= 0.0) };
    if p.iter().any(|&x| bad(x) || !x.is_finite()) {
        let what = if strict { "positive" } else { "non-negative" };
        return Err(Error::Precondition(format!("weights must be {what}, got {p:?}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > NORM_TOL {
        return Err(Error::Contract(format!("weights must sum to 1, got {sum:.15}")));
    }
    Ok(())
}

fn check_lengths(what: &str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension(format!("{what}: {a} weights but {b} entries")));
    }
    Ok(())
}

/// `Σ_j p_j |ψ_j⟩⟨ψ_j|_A ⊗ ρ_B^(j)` with strictly positive weights.
#[derive(Clone, Debug)]
pub struct SeparableEnsemble {
    weights: Vec<f64>,
    a_states: Vec<PureState>,
    b_states: Vec<DensityMatrix>,
}

impl SeparableEnsemble {
    pub fn new(weights: Vec<f64>, a_states: Vec<PureState>, b_states: Vec<DensityMatrix>) -> Result<Self> {
        check_weights(&weights, true)?;
        check_lengths("A states", weights.len(), a_states.len())?;
        check_lengths("B states", weights.len(), b_states.len())?;
        let da = a_states[0].len();
        let db = b_states[0].dim();
        if a_states.iter().any(|s| s.len() != da) || b_states.iter().any(|s| s.dim() != db) {
            return Err(Error::Dimension("ensemble members disagree on local dimensions".into()));
        }
        Ok(Self {
            weights,
            a_states,
            b_states,
        })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn a_states(&self) -> &[PureState] {
        &self.a_states
    }

    pub fn b_states(&self) -> &[DensityMatrix] {
        &self.b_states
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn assemble(&self) -> Result<BipartiteState> {
        let da = self.a_states[0].len();
        let db = self.b_states[0].dim();
        let mut rho = CMatrix::zeros(da * db, da * db);
        for ((p, a), b) in self.weights.iter().zip(&self.a_states).zip(&self.b_states) {
            let pa = DensityMatrix::from_pure(a);
            rho += kron(pa.matrix(), b.matrix()) * c(*p, 0.0);
        }
        BipartiteState::new(DensityMatrix::new(rho)?, da, db)
    }
}

/// `Σ_i p_i |i⟩⟨i|_A ⊗ ρ_B^(i)` in the computational basis of `A`.
pub fn cq_state(probs: &[f64], b_states: &[DensityMatrix]) -> Result<BipartiteState> {
    check_weights(probs, false)?;
    check_lengths("CQ blocks", probs.len(), b_states.len())?;
    let da = probs.len();
    let db = b_states[0].dim();
    if b_states.iter().any(|b| b.dim() != db) {
        return Err(Error::Dimension("B blocks disagree on dimension".into()));
    }
    let mut rho = CMatrix::zeros(da * db, da * db);
    for (i, (p, b)) in probs.iter().zip(b_states).enumerate() {
        let block = b.matrix() * c(*p, 0.0);
        rho.view_mut((i * db, i * db), (db, db)).copy_from(&block);
    }
    BipartiteState::new(DensityMatrix::new(rho)?, da, db)
}

/// `Σ_k p_k |ψ_k⟩⟨ψ_k|_A ⊗ |k⟩⟨k|_B` with qubit `A` states given as Bloch vectors.
pub fn pqc_state(
    probs: &[f64],
    a_bloch: &[BlochVector],
    dim_b: usize,
) -> Result<(SeparableEnsemble, BipartiteState)> {
    check_lengths("pQC directions", probs.len(), a_bloch.len())?;
    if probs.len() > dim_b {
        return Err(Error::Dimension(format!(
            "{} flags need dim_b >= {}, got {dim_b}",
            probs.len(),
            probs.len()
        )));
    }
    let a: Vec<PureState> = a_bloch.iter().map(PureState::from_bloch).collect();
    let b: Vec<DensityMatrix> = (0..probs.len()).map(|k| DensityMatrix::basis_projector(dim_b, k)).collect();
    let ens = SeparableEnsemble::new(probs.to_vec(), a, b)?;
    let state = ens.assemble()?;
    Ok((ens, state))
}

/// Second-moment matrix `M = Σ_j p_j r̂_j r̂_jᵀ`.
pub fn second_moment(probs: &[f64], dirs: &[BlochVector]) -> Matrix3<f64> {
    let mut m = Matrix3::zeros();
    for (p, r) in probs.iter().zip(dirs) {
        let v = Vector3::new(r.x, r.y, r.z);
        m += v * v.transpose() * *p;
    }
    m
}

/// Top eigenpair of a real symmetric 3×3 matrix.
fn top_eigen(m: &Matrix3<f64>) -> (f64, BlochVector) {
    let e = SymmetricEigen::new(*m);
    let k = e.eigenvalues.imax();
    let v = e.eigenvectors.column(k);
    (
        e.eigenvalues[k],
        BlochVector::normalize(v[0], v[1], v[2]).expect("eigenvectors are non-zero"),
    )
}

/// Closed-form pQC DS: `(1 − ξ_max(M)) sin²λ`.
pub fn ds_pqc_closed(probs: &[f64], a_bloch: &[BlochVector], lambda: f64) -> Result<DsResult> {
    check_lengths("pQC directions", probs.len(), a_bloch.len())?;
    check_weights(probs, false)?;
    let (xi, n) = top_eigen(&second_moment(probs, a_bloch));
    let s2 = lambda.sin().powi(2);
    Ok(DsResult {
        value: ((1.0 - xi) * s2).clamp(0.0, s2),
        optimal_hamiltonian: qubit_hamiltonian(&n, lambda)?,
        method: DsMethod::PqcClosedForm,
    })
}

/// Bloch vectors of `|0⟩, |+⟩, |×⟩`.
pub const GB92_DIRECTIONS: [BlochVector; 3] = [BlochVector::Z, BlochVector::X, BlochVector::Y];

/// Bloch vectors of `|0⟩, |+⟩`.
pub const B92_DIRECTIONS: [BlochVector; 2] = [BlochVector::Z, BlochVector::X];

pub fn gb92_state(p0: f64, p1: f64, p2: f64, dim_b: usize) -> Result<BipartiteState> {
    if dim_b < 3 {
        return Err(Error::Dimension(format!("GB92 needs dim_b >= 3, got {dim_b}")));
    }
    Ok(pqc_state(&[p0, p1, p2], &GB92_DIRECTIONS, dim_b)?.1)
}

/// Equal-weight GB92 state on a qutrit `B`.
pub fn ew_gb92_state() -> BipartiteState {
    let t = 1.0 / 3.0;
    gb92_state(t, t, 1.0 - 2.0 * t, 3).expect("valid by construction")
}

/// `½ (|0⟩⟨0| ⊗ |0⟩⟨0| + |+⟩⟨+| ⊗ |1⟩⟨1|)`.
pub fn b92_state() -> BipartiteState {
    pqc_state(&[0.5, 0.5], &B92_DIRECTIONS, 2).expect("valid by construction").1
}

/// Evenly spread unit vectors: regular-polyhedron vertices for
/// `d ∈ {2, 3, 4, 6, 8, 12, 20}`, a Fibonacci lattice otherwise.
pub fn uniform_sphere_directions(d: usize) -> Result<Vec<BlochVector>> {
    if d < 2 {
        return Err(Error::Range(format!("need at least two directions, got {d}")));
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw: Vec<[f64; 3]> = match d {
        2 => vec![[0., 0., 1.], [0., 0., -1.]],
        3 => (0..3)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / 3.0;
                [t.sin(), 0.0, t.cos()]
            })
            .collect(),
        4 => vec![[1., 1., 1.], [1., -1., -1.], [-1., 1., -1.], [-1., -1., 1.]],
        6 => vec![
            [1., 0., 0.],
            [-1., 0., 0.],
            [0., 1., 0.],
            [0., -1., 0.],
            [0., 0., 1.],
            [0., 0., -1.],
        ],
        8 => signs3().collect(),
        12 => {
            let mut v = Vec::new();
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    v.push([0.0, s1, s2 * phi]);
                    v.push([s1, s2 * phi, 0.0]);
                    v.push([s2 * phi, 0.0, s1]);
                }
            }
            v
        }
        20 => {
            let mut v: Vec<[f64; 3]> = signs3().collect();
            let ip = 1.0 / phi;
            for s1 in [1.0, -1.0] {
                for s2 in [1.0, -1.0] {
                    v.push([0.0, s1 * ip, s2 * phi]);
                    v.push([s1 * ip, s2 * phi, 0.0]);
                    v.push([s2 * phi, 0.0, s1 * ip]);
                }
            }
            v
        }
        _ => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..d)
                .map(|k| {
                    let z = 1.0 - (2 * k + 1) as f64 / d as f64;
                    let r = (1.0 - z * z).sqrt();
                    let t = golden * k as f64;
                    [r * t.cos(), r * t.sin(), z]
                })
                .collect()
        }
    };
    raw.into_iter()
        .map(|[x, y, z]| BlochVector::normalize(x, y, z))
        .collect()
}

fn signs3() -> impl Iterator<Item = [f64; 3]> {
    (0..8).map(|k| {
        let s = |b: usize| if k >> b & 1 == 0 { 1.0 } else { -1.0 };
        [s(0), s(1), s(2)]
    })
}

/// `(1/d) Σ_j |ψ_j⟩⟨ψ_j| ⊗ |j⟩⟨j|` over [`uniform_sphere_directions`].
pub fn uniform_pqc(d: usize, dim_b: usize) -> Result<BipartiteState> {
    let dirs = uniform_sphere_directions(d)?;
    let probs = vec![1.0 / d as f64; d];
    Ok(pqc_state(&probs, &dirs, dim_b)?.1)
}

/// DS of the uniform pQC state, evaluated through its second moment.
pub fn ds_uniform_pqc(d: usize, lambda: f64) -> Result<DsResult> {
    let dirs = uniform_sphere_directions(d)?;
    let probs = vec![1.0 / d as f64; d];
    ds_pqc_closed(&probs, &dirs, lambda)
}

/// `p τ_0 ⊗ |0⟩⟨0| + (1−p) τ_1 ⊗ |1⟩⟨1|` with
/// `τ_0 = (I + s0 σ_z)/2`, `τ_1 = (I + s1 (sinφ σ_x + cosφ σ_z))/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QcQubitParams {
    pub p: f64,
    pub s0: f64,
    pub s1: f64,
    pub phi: f64,
}

impl QcQubitParams {
    pub fn new(p: f64, s0: f64, s1: f64, phi: f64) -> Result<Self> {
        let unit = |x: f64| (0.0..=1.0).contains(&x);
        if !unit(p) || !unit(s0) || !unit(s1) || !(0.0..=PI).contains(&phi) {
            return Err(Error::Range(format!(
                "need p, s0, s1 in [0, 1] and phi in [0, pi], got p={p}, s0={s0}, s1={s1}, phi={phi}"
            )));
        }
        Ok(Self { p, s0, s1, phi })
    }

    /// The B92 point `p = ½, s0 = s1 = 1, φ = π/2`.
    pub fn b92() -> Self {
        Self {
            p: 0.5,
            s0: 1.0,
            s1: 1.0,
            phi: PI / 2.0,
        }
    }
}

fn qubit_mixed(s: f64, n: [f64; 3]) -> CMatrix {
    let sigma = crate::linalg::pauli_dot(n);
    (CMatrix::identity(2, 2) + sigma * c(s, 0.0)) * c(0.5, 0.0)
}

pub fn qc_qubit_qubit(params: &QcQubitParams) -> Result<BipartiteState> {
    let QcQubitParams { p, s0, s1, phi } = QcQubitParams::new(params.p, params.s0, params.s1, params.phi)?;
    let tau0 = DensityMatrix::new(qubit_mixed(s0, [0.0, 0.0, 1.0]))?;
    let tau1 = DensityMatrix::new(qubit_mixed(s1, [phi.sin(), 0.0, phi.cos()]))?;
    let b = [DensityMatrix::basis_projector(2, 0), DensityMatrix::basis_projector(2, 1)];
    let rho = kron(tau0.matrix(), b[0].matrix()) * c(p, 0.0) + kron(tau1.matrix(), b[1].matrix()) * c(1.0 - p, 0.0);
    BipartiteState::new(DensityMatrix::new(rho)?, 2, 2)
}

/// Non-zero entries of `W` for the QC qubit pair (`W_12 = W_23 = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QcWElements {
    pub w11: f64,
    pub w13: f64,
    pub w22: f64,
    pub w33: f64,
}

impl QcWElements {
    pub fn from_params(params: &QcQubitParams) -> Self {
        let QcQubitParams { p, s0, s1, phi } = *params;
        let r0 = (1.0 - s0 * s0).max(0.0).sqrt();
        let r1 = (1.0 - s1 * s1).max(0.0).sqrt();
        let c2 = (2.0 * phi).cos();
        Self {
            w22: p * r0 + (1.0 - p) * r1,
            w11: p * r0 + (1.0 - p) / 2.0 * (1.0 - c2 + r1 * (1.0 + c2)),
            w13: (1.0 - p) * (1.0 - r1) * phi.sin() * phi.cos(),
            w33: (1.0 + p) / 2.0 + (1.0 - p) / 2.0 * (c2 + r1 * (1.0 - c2)),
        }
    }

    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(self.w11, 0.0, self.w13, 0.0, self.w22, 0.0, self.w13, 0.0, self.w33)
    }

    /// `1 − W_22 − √((W_11 − W_33)² + 4 W_13²)`.
    pub fn f_w(&self) -> f64 {
        1.0 - self.w22 - ((self.w11 - self.w33).powi(2) + 4.0 * self.w13 * self.w13).sqrt()
    }
}

/// Closed-form DS of the QC qubit pair: `max(f_W, 0) sin²λ / 2`.
pub fn ds_qc_closed(params: &QcQubitParams, lambda: f64) -> Result<DsResult> {
    let params = QcQubitParams::new(params.p, params.s0, params.s1, params.phi)?;
    let w = QcWElements::from_params(&params);
    let (_, n) = top_eigen(&w.matrix());
    Ok(DsResult {
        value: w.f_w().max(0.0) * lambda.sin().powi(2) / 2.0,
        optimal_hamiltonian: qubit_hamiltonian(&n, lambda)?,
        method: DsMethod::QubitClosedForm,
    })
}

/// Largest ensemble size of [`separable_ensemble`].
pub const MAX_ENSEMBLE: usize = 4;

/// `Σ_j p_j (I + û_j·σ)/2 ⊗ (I + v̂_j·σ)/2` with `1 ≤ N ≤ 4` positive weights.
pub fn separable_ensemble(probs: &[f64], a_bloch: &[BlochVector], b_bloch: &[BlochVector]) -> Result<BipartiteState> {
    let n = probs.len();
    if !(1..=MAX_ENSEMBLE).contains(&n) {
        return Err(Error::Range(format!("ensemble size must be in 1..={MAX_ENSEMBLE}, got {n}")));
    }
    check_weights(probs, true)?;
    check_lengths("A directions", n, a_bloch.len())?;
    check_lengths("B directions", n, b_bloch.len())?;
    Ok(separable_unchecked(probs, a_bloch, b_bloch))
}

/// [`separable_ensemble`] without validation, for sweeps over pre-validated grids.
pub(crate) fn separable_unchecked(probs: &[f64], a_bloch: &[BlochVector], b_bloch: &[BlochVector]) -> BipartiteState {
    let mut rho = CMatrix::zeros(4, 4);
    for ((p, u), v) in probs.iter().zip(a_bloch).zip(b_bloch) {
        let psi = PureState::from_bloch(u).tensor(&PureState::from_bloch(v));
        let a: &DVector<Complex64> = psi.amplitudes();
        rho += a * a.adjoint() * c(*p, 0.0);
    }
    BipartiteState::new(DensityMatrix::from_trusted(rho), 2, 2).expect("2x2 by construction")
}

/// Mixed qubit density matrix `(I + r·σ)/2` from a Bloch vector of length ≤ 1.
pub fn qubit_state(r: [f64; 3]) -> Result<DensityMatrix> {
    let len = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if len > 1.0 + NORM_TOL {
        return Err(Error::Contract(format!("Bloch vector too long: {len}")));
    }
    DensityMatrix::new(qubit_mixed(1.0, r))
}

/// Weights from `N − 1` angles in `(0, π/4]`, non-decreasing:
/// `N = 2`: `{sin α, cos α}`; `N = 3`: `{sin α sin β, sin α cos β, cos α}`;
/// `N = 4`: `{sin α sin β sin γ, sin α sin β cos γ, sin α cos β, cos α}`;
/// each normalized by its sum.
pub fn probability_simplex_from_angles(angles: &[f64]) -> Result<Vec<f64>> {
    if angles.is_empty() || angles.len() > 3 {
        return Err(Error::Range(format!("need 1 to 3 angles, got {}", angles.len())));
    }
    if let Some(a) = angles.iter().find(|&&a| !(a > 0.0 && a <= FRAC_PI_4 + 1e-15)) {
        return Err(Error::Range(format!("angle {a} outside (0, pi/4]")));
    }
    // build from the innermost angle outwards
    let mut w = vec![1.0];
    for &a in angles.iter().rev() {
        let mut next: Vec<f64> = w.iter().map(|x| x * a.sin()).collect();
        next.push(a.cos());
        w = next;
    }
    let sum: f64 = w.iter().sum();
    Ok(w.into_iter().map(|x| x / sum).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{ds_general, ds_qubit_qudit, w_matrix, OptimizerOptions};
    use crate::random::{random_bloch, random_density, rng_from_seed};
    use crate::types::Spectrum;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn cq_examples() {
        let b = [DensityMatrix::basis_projector(2, 0), DensityMatrix::basis_projector(2, 1)];
        let st = cq_state(&[0.5, 0.5], &b).unwrap();
        assert_abs_diff_eq!(ds_qubit_qudit(&st, 1.0).unwrap().value, 0.0, epsilon = 1e-12);

        let prod = cq_state(&[1.0, 0.0], &b).unwrap();
        assert!(prod.rho().purity() > 1.0 - 1e-12);

        let mut rng = rng_from_seed(3);
        let b = [random_density(3, 3, &mut rng), random_density(3, 3, &mut rng)];
        let st = cq_state(&[1.0 / 3.0, 2.0 / 3.0], &b).unwrap();
        let ds = ds_general(&st, &Spectrum::qubit(1.0).unwrap(), &OptimizerOptions::general()).unwrap();
        assert!(ds.value < 1e-6, "{}", ds.value);

        assert!(matches!(cq_state(&[0.5, 0.5], &b[..1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn pqc_examples() {
        let (ens, st) = pqc_state(&[1.0], &[BlochVector::X], 2).unwrap();
        assert_eq!(ens.len(), 1);
        assert!(st.rho().purity() > 1.0 - 1e-12);
        assert_abs_diff_eq!(ds_qubit_qudit(&st, 1.0).unwrap().value, 0.0, epsilon = 1e-12);
        assert!(matches!(
            pqc_state(&[0.5, 0.5], &B92_DIRECTIONS, 1),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn pqc_w_equals_second_moment() {
        let mut rng = rng_from_seed(6);
        let dirs: Vec<BlochVector> = (0..3).map(|_| random_bloch(&mut rng)).collect();
        let p = [0.2, 0.5, 0.3];
        let (_, st) = pqc_state(&p, &dirs, 3).unwrap();
        let w = w_matrix(&st).unwrap();
        assert!((w.w - second_moment(&p, &dirs)).abs().max() < 1e-12);
    }

    #[test]
    fn pqc_closed_examples() {
        let lambda: f64 = 1.1;
        let s2 = lambda.sin().powi(2);
        let same = [BlochVector::X; 3];
        let r = ds_pqc_closed(&[0.2, 0.3, 0.5], &same, lambda).unwrap();
        assert_abs_diff_eq!(r.value, 0.0, epsilon = 1e-14);

        let t = 1.0 / 3.0;
        let r = ds_pqc_closed(&[t, t, t], &GB92_DIRECTIONS, lambda).unwrap();
        assert_abs_diff_eq!(r.value, 2.0 / 3.0 * s2, epsilon = 1e-14);

        let r = ds_pqc_closed(&[0.2, 0.45, 0.35], &GB92_DIRECTIONS, lambda).unwrap();
        assert_abs_diff_eq!(r.value, 0.55 * s2, epsilon = 1e-14);
    }

    #[test]
    fn gb92_examples() {
        assert!(matches!(gb92_state(1.0, 0.0, 0.0, 3), Err(Error::Precondition(_))));
        assert!(matches!(gb92_state(0.5, 0.25, 0.25, 2), Err(Error::Dimension(_))));
        let lambda: f64 = 0.9;
        let s2 = lambda.sin().powi(2);
        let ew = ds_qubit_qudit(&ew_gb92_state(), lambda).unwrap();
        assert_abs_diff_eq!(ew.value, 2.0 / 3.0 * s2, epsilon = 1e-12);

        let st = gb92_state(0.5, 0.25, 0.25, 3).unwrap();
        let closed = ds_pqc_closed(&[0.5, 0.25, 0.25], &GB92_DIRECTIONS, lambda).unwrap();
        assert_abs_diff_eq!(closed.value, 0.5 * s2, epsilon = 1e-14);
        let general = ds_general(&st, &Spectrum::qubit(lambda).unwrap(), &OptimizerOptions::general()).unwrap();
        assert_abs_diff_eq!(general.value, 0.5 * s2, epsilon = 1e-6);
    }

    #[test]
    fn b92_examples() {
        let st = b92_state();
        assert_abs_diff_eq!(ds_qubit_qudit(&st, FRAC_PI_2).unwrap().value, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(ds_qubit_qudit(&st, FRAC_PI_4).unwrap().value, 0.25, epsilon = 1e-12);

        let mut rng = rng_from_seed(2);
        let wa = crate::random::haar_random_unitary(2, &mut rng);
        let vb = crate::random::haar_random_unitary(2, &mut rng);
        let rotated = st.apply_local_unitaries(&wa, &vb).unwrap();
        assert_abs_diff_eq!(ds_qubit_qudit(&rotated, 1.0).unwrap().value, 0.5 * 1f64.sin().powi(2), epsilon = 1e-10);
    }

    #[test]
    fn sphere_directions_are_isotropic() {
        for d in [4, 6, 8, 12, 20] {
            let dirs = uniform_sphere_directions(d).unwrap();
            assert_eq!(dirs.len(), d);
            let m = second_moment(&vec![1.0 / d as f64; d], &dirs);
            assert!((m - Matrix3::identity() / 3.0).norm() <= 1e-12, "d = {d}");
        }
        let plane = second_moment(&[1.0 / 3.0; 3], &uniform_sphere_directions(3).unwrap());
        assert_abs_diff_eq!(plane[(1, 1)], 0.0, epsilon = 1e-15);
        assert!(uniform_sphere_directions(1).is_err());
    }

    #[test]
    fn icosahedron_vertices_are_equidistant() {
        let dirs = uniform_sphere_directions(12).unwrap();
        let mut dots: Vec<f64> = dirs[1..].iter().map(|v| v.dot(&dirs[0])).collect();
        dots.sort_by(f64::total_cmp);
        // antipode, then five at −1/√5, then five at +1/√5
        assert_abs_diff_eq!(dots[0], -1.0, epsilon = 1e-12);
        for d in &dots[1..6] {
            assert_abs_diff_eq!(*d, -1.0 / 5f64.sqrt(), epsilon = 1e-12);
        }
        for d in &dots[6..] {
            assert_abs_diff_eq!(*d, 1.0 / 5f64.sqrt(), epsilon = 1e-12);
        }
    }

    #[test]
    fn uniform_pqc_examples() {
        let lambda: f64 = 1.0;
        let s2 = lambda.sin().powi(2);
        let st = uniform_pqc(2, 2).unwrap();
        assert_abs_diff_eq!(ds_qubit_qudit(&st, lambda).unwrap().value, 0.0, epsilon = 1e-12);
        let st = uniform_pqc(6, 6).unwrap();
        assert_abs_diff_eq!(ds_qubit_qudit(&st, lambda).unwrap().value, 2.0 / 3.0 * s2, epsilon = 1e-12);
        assert!(matches!(uniform_pqc(6, 5), Err(Error::Dimension(_))));

        let d1000 = ds_uniform_pqc(1000, lambda).unwrap().value / s2;
        assert!((d1000 - 2.0 / 3.0).abs() <= 1e-3, "{d1000}");
        let d7 = uniform_pqc(7, 7).unwrap();
        assert_abs_diff_eq!(
            ds_qubit_qudit(&d7, lambda).unwrap().value,
            ds_uniform_pqc(7, lambda).unwrap().value,
            epsilon = 1e-12
        );
    }

    #[test]
    fn qc_examples() {
        let lambda: f64 = 1.2;
        let s2 = lambda.sin().powi(2);
        let b92 = QcQubitParams::b92();
        let w = QcWElements::from_params(&b92);
        assert_abs_diff_eq!(w.w22, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.w11, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w.w33, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(w.w13, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w.f_w(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ds_qc_closed(&b92, lambda).unwrap().value, s2 / 2.0, epsilon = 1e-15);

        let st = qc_qubit_qubit(&b92).unwrap();
        assert!((st.matrix() - b92_state().matrix()).iter().all(|z| z.norm() < 1e-12));

        let mixed = QcQubitParams::new(0.5, 0.0, 0.0, 1.0).unwrap();
        let w = QcWElements::from_params(&mixed);
        assert_abs_diff_eq!(w.w22, 1.0, epsilon = 1e-15);
        assert!(w.f_w() <= 1e-15);
        assert_eq!(ds_qc_closed(&mixed, lambda).unwrap().value, 0.0);

        let prod = QcQubitParams::new(1.0, 1.0, 0.3, 0.7).unwrap();
        assert_abs_diff_eq!(QcWElements::from_params(&prod).f_w(), 0.0, epsilon = 1e-15);
        let st = qc_qubit_qubit(&prod).unwrap();
        let general = ds_general(&st, &Spectrum::qubit(lambda).unwrap(), &OptimizerOptions::general()).unwrap();
        assert!(general.value < 1e-6);

        assert!(matches!(QcQubitParams::new(1.1, 0.0, 0.0, 0.0), Err(Error::Range(_))));
        assert!(matches!(QcQubitParams::new(0.5, 0.0, 0.0, 4.0), Err(Error::Range(_))));
    }

    #[test]
    fn qc_elements_match_numerical_w() {
        let grid = |k: usize| k as f64 / 4.0;
        for ip in 0..=4 {
            for i0 in 0..=4 {
                for i1 in 0..=4 {
                    for iphi in 0..=4 {
                        let par = QcQubitParams::new(grid(ip), grid(i0), grid(i1), PI * grid(iphi)).unwrap();
                        let st = qc_qubit_qubit(&par).unwrap();
                        let num = w_matrix(&st).unwrap();
                        let closed = QcWElements::from_params(&par).matrix();
                        assert!((num.w - closed).abs().max() < 1e-7, "{par:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn qc_closed_hamiltonian_attains_value() {
        let par = QcQubitParams::new(0.3, 0.8, 0.6, 1.1).unwrap();
        let r = ds_qc_closed(&par, 0.9).unwrap();
        let st = qc_qubit_qubit(&par).unwrap();
        let q = crate::measures::chernoff_at(&st, &r.optimal_hamiltonian).unwrap().q;
        assert_abs_diff_eq!(1.0 - q, r.value, epsilon = 1e-9);
    }

    #[test]
    fn separable_examples() {
        let lambda: f64 = 1.3;
        let s2 = lambda.sin().powi(2);
        let st = separable_ensemble(&[1.0], &[BlochVector::X], &[BlochVector::Y]).unwrap();
        assert_abs_diff_eq!(ds_qubit_qudit(&st, lambda).unwrap().value, 0.0, epsilon = 1e-12);

        let b92 = separable_ensemble(
            &[0.5, 0.5],
            &[BlochVector::from_angles(0.0, 0.0), BlochVector::from_angles(FRAC_PI_2, 0.0)],
            &[BlochVector::from_angles(0.0, 0.0), BlochVector::from_angles(PI, 0.0)],
        )
        .unwrap();
        assert_abs_diff_eq!(ds_qubit_qudit(&b92, lambda).unwrap().value, s2 / 2.0, epsilon = 1e-12);

        let mut rng = rng_from_seed(44);
        for _ in 0..50 {
            let p = crate::random::random_probabilities(4, &mut rng);
            let a: Vec<_> = (0..4).map(|_| random_bloch(&mut rng)).collect();
            let b: Vec<_> = (0..4).map(|_| random_bloch(&mut rng)).collect();
            let st = separable_ensemble(&p, &a, &b).unwrap();
            assert!(DensityMatrix::new(st.matrix().clone()).is_ok());
            assert!(ds_qubit_qudit(&st, lambda).unwrap().value <= s2 / 2.0 + 1e-4);
        }

        let five = [0.2; 5];
        let dirs = [BlochVector::Z; 5];
        assert!(matches!(separable_ensemble(&five, &dirs, &dirs), Err(Error::Range(_))));
        assert!(matches!(
            separable_ensemble(&[1.0, 0.0], &dirs[..2], &dirs[..2]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn simplex_examples() {
        let p = probability_simplex_from_angles(&[FRAC_PI_4]).unwrap();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-15);

        let a = PI / 8.0;
        let p = probability_simplex_from_angles(&[a]).unwrap();
        let norm = a.sin() + a.cos();
        assert_abs_diff_eq!(p[0], a.sin() / norm, epsilon = 1e-15);
        assert_abs_diff_eq!(p[0], 0.292_893, epsilon = 1e-6);

        // α = 3π/16, β = π/4 gives the (0.486, 0.514) split of the N = 3 optimum
        let p = probability_simplex_from_angles(&[3.0 * PI / 16.0, FRAC_PI_4]).unwrap();
        assert_abs_diff_eq!(p[0] + p[1], 0.486, epsilon = 1e-3);

        let p = probability_simplex_from_angles(&[FRAC_PI_4; 3]).unwrap();
        assert_eq!(p.len(), 4);
        assert!(p.windows(2).all(|w| w[0] <= w[1]));
        assert_abs_diff_eq!(p.iter().sum::<f64>(), 1.0, epsilon = 1e-15);

        assert!(probability_simplex_from_angles(&[0.0]).is_err());
        assert!(probability_simplex_from_angles(&[1.0]).is_err());
        assert!(probability_simplex_from_angles(&[0.1; 4]).is_err());
    }

    #[test]
    fn qubit_state_accepts_mixed_and_pure() {
        assert!(qubit_state([0.0, 0.0, 0.0]).is_ok());
        assert_abs_diff_eq!(qubit_state([0.0, 0.0, 1.0]).unwrap().purity(), 1.0, epsilon = 1e-14);
        assert!(qubit_state([1.0, 1.0, 0.0]).is_err());
    }
}
