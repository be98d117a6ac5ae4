//! Discriminating strength (DS) and local quantum uncertainty (LQU).
//!
//! For a bipartite state `ρ` and a fixed non-degenerate spectrum `Λ`, the DS is
//! `1 − max_U Q(ρ, R ρ R†)` with `R = U e^{iΛ} U† ⊗ I`, and the LQU is the
//! minimum over the same family of the Wigner–Yanase skew information.
//!
//! Several routes are provided: a multi-restart Nelder–Mead search over the
//! unitary group for arbitrary `dim_a`, an exhaustive permutation formula for
//! pure states, and closed forms for a qubit `A` built on the 3×3 matrix
//! `W_αβ = Tr[√ρ σ_α √ρ σ_β]`.

use itertools::Itertools;
use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::discrimination::{chernoff_overlap, ChernoffProfile, ChernoffResult};
use crate::error::{Error, Result};
use crate::linalg::{
    self, c, complete_basis, eig_hermitian_unchecked, hermiticity_defect, kron, paulis, pauli_dot,
    schmidt_decompose, CMatrix, Eigen,
};
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::random::{haar_random_unitary, rng_for};
use crate::types::{
    BipartiteState, BlochVector, DensityMatrix, LocalHamiltonian, PureState, SchmidtCoefficients,
    Spectrum,
};

/// Largest `dim_a` handled by exhaustive permutation search.
pub const MAX_PERMUTATION_DIM: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DsMethod {
    General,
    PurePermutation,
    QubitClosedForm,
    PqcClosedForm,
}

impl std::fmt::Display for DsMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DsMethod::General => "general",
            DsMethod::PurePermutation => "pure_permutation",
            DsMethod::QubitClosedForm => "qubit_closed_form",
            DsMethod::PqcClosedForm => "pqc_closed_form",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug)]
pub struct DsResult {
    pub value: f64,
    /// The Hamiltonian attaining the maximal overlap.
    pub optimal_hamiltonian: LocalHamiltonian,
    pub method: DsMethod,
}

/// Settings for the search over the unitary group.
#[derive(Clone, Debug)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub seed: u64,
    /// Initial Nelder–Mead simplex size in chart coordinates.
    pub step: f64,
    /// Convergence tolerance on the objective.
    pub tolerance: f64,
    /// Evaluation cap per Nelder–Mead run.
    pub max_evals: usize,
    /// Skip the qubit closed form even when `dim_a = 2`.
    pub force_general: bool,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 20,
            seed: 0,
            step: PI / 4.0,
            tolerance: 1e-8,
            max_evals: 20_000,
            force_general: false,
        }
    }
}

impl OptimizerOptions {
    pub fn general() -> Self {
        Self {
            force_general: true,
            ..Self::default()
        }
    }
}

/// `(R ⊗ I) ρ (R ⊗ I)†` with `R = e^{iH}`.
pub fn rotate_local(state: &BipartiteState, h: &LocalHamiltonian) -> Result<BipartiteState> {
    if h.dim() != state.dim_a() {
        return Err(Error::Dimension(format!(
            "Hamiltonian acts on dimension {}, subsystem A has {}",
            h.dim(),
            state.dim_a()
        )));
    }
    let r = kron(&h.rotation(), &CMatrix::identity(state.dim_b(), state.dim_b()));
    BipartiteState::new(state.rho().conjugate(&r), state.dim_a(), state.dim_b())
}

/// `Q(ρ, e^{iH} ρ e^{−iH})` for a given local Hamiltonian.
pub fn chernoff_at(state: &BipartiteState, h: &LocalHamiltonian) -> Result<ChernoffResult> {
    let rotated = rotate_local(state, h)?;
    chernoff_overlap(state.rho(), rotated.rho())
}

/// Coordinates on `U(d)` through `U = exp(iA)`, `A` traceless Hermitian in the
/// generalized Gell-Mann basis (`d² − 1` real coordinates).
pub(crate) struct UnitaryChart {
    dim: usize,
    generators: Vec<CMatrix>,
}

impl UnitaryChart {
    pub(crate) fn new(dim: usize) -> Self {
        let mut generators = Vec::with_capacity(dim * dim - 1);
        for j in 0..dim {
            for k in (j + 1)..dim {
                let mut s = CMatrix::zeros(dim, dim);
                s[(j, k)] = c(1.0, 0.0);
                s[(k, j)] = c(1.0, 0.0);
                generators.push(s);
                let mut a = CMatrix::zeros(dim, dim);
                a[(j, k)] = c(0.0, -1.0);
                a[(k, j)] = c(0.0, 1.0);
                generators.push(a);
            }
        }
        for l in 1..dim {
            let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
            let mut d = CMatrix::zeros(dim, dim);
            for m in 0..l {
                d[(m, m)] = c(norm, 0.0);
            }
            d[(l, l)] = c(-(l as f64) * norm, 0.0);
            generators.push(d);
        }
        Self { dim, generators }
    }

    pub(crate) fn coordinates(&self) -> usize {
        self.generators.len()
    }

    pub(crate) fn unitary(&self, x: &[f64]) -> CMatrix {
        let mut a = CMatrix::zeros(self.dim, self.dim);
        for (g, &xi) in self.generators.iter().zip(x) {
            a += g * c(xi, 0.0);
        }
        let eig = eig_hermitian_unchecked(&a);
        let n = self.dim;
        let phases: Vec<Complex64> = eig.values.iter().map(|&w| Complex64::from_polar(1.0, w)).collect();
        let scaled = CMatrix::from_fn(n, n, |i, j| eig.vectors[(i, j)] * phases[j]);
        scaled * eig.vectors.adjoint()
    }
}

/// Minimizes `objective(U)` over `U(dim)` with independent Nelder–Mead runs.
/// Restart 0 starts at the identity, the rest at seeded random points. The
/// best run wins, ties going to the lowest restart index.
pub(crate) fn minimize_over_unitaries(
    dim: usize,
    opts: &OptimizerOptions,
    objective: impl Fn(&CMatrix) -> f64 + Sync,
) -> (CMatrix, f64) {
    let chart = UnitaryChart::new(dim);
    let n = chart.coordinates();
    let nm = NelderMeadOptions {
        ftol: opts.tolerance,
        xtol: opts.tolerance.sqrt(),
        max_evals: opts.max_evals,
    };
    let descend = |base: &CMatrix| {
        let f = |x: &[f64]| objective(&(base * chart.unitary(x)));
        let first = nelder_mead(&f, &vec![0.0; n], opts.step, &nm);
        let polished = nelder_mead(&f, &first.x, 0.05, &nm);
        let best = if polished.fx <= first.fx { polished } else { first };
        (base * chart.unitary(&best.x), best.fx)
    };
    let runs: Vec<(CMatrix, f64)> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|k| {
            let base = if k == 0 {
                CMatrix::identity(dim, dim)
            } else {
                haar_random_unitary(dim, &mut rng_for(opts.seed, k as u64))
            };
            descend(&base)
        })
        .collect();
    let mut best = lowest(runs);
    if dim < 2 {
        return best;
    }
    // hop between eigenvalue assignments by swapping basis vectors
    loop {
        let hops: Vec<(CMatrix, f64)> = (0..dim)
            .tuple_combinations()
            .collect::<Vec<(usize, usize)>>()
            .into_par_iter()
            .map(|(i, j)| {
                let mut u = best.0.clone();
                u.swap_columns(i, j);
                descend(&u)
            })
            .collect();
        let hop = lowest(hops);
        if hop.1 < best.1 - opts.tolerance {
            best = hop;
        } else {
            return best;
        }
    }
}

/// First entry with the smallest value.
fn lowest(runs: Vec<(CMatrix, f64)>) -> (CMatrix, f64) {
    let mut best = 0;
    for (k, run) in runs.iter().enumerate() {
        if run.1 < runs[best].1 {
            best = k;
        }
    }
    runs.into_iter().nth(best).expect("at least one run")
}

fn check_spectrum(state: &BipartiteState, spectrum: &Spectrum) -> Result<()> {
    if spectrum.len() != state.dim_a() {
        return Err(Error::Dimension(format!(
            "spectrum has {} entries, subsystem A has dimension {}",
            spectrum.len(),
            state.dim_a()
        )));
    }
    Ok(())
}

/// Half the spread of a two-level spectrum; by shift invariance the qubit
/// problem only depends on this.
fn qubit_lambda(spectrum: &Spectrum) -> f64 {
    let v = spectrum.values();
    (v[0] - v[1]) / 2.0
}

/// Discriminating strength by direct search over `U(dim_a)`.
///
/// For `dim_a = 2` this delegates to [`ds_qubit_qudit`] unless
/// `opts.force_general` is set.
pub fn ds_general(state: &BipartiteState, spectrum: &Spectrum, opts: &OptimizerOptions) -> Result<DsResult> {
    check_spectrum(state, spectrum)?;
    if state.dim_a() == 2 && !opts.force_general {
        let r = ds_qubit_qudit(state, qubit_lambda(spectrum))?;
        return Ok(DsResult {
            optimal_hamiltonian: r.optimal_hamiltonian.with_spectrum(spectrum.clone())?,
            ..r
        });
    }

    let eig = eig_hermitian_unchecked(state.matrix());
    let support = eig.support();
    let values: Vec<f64> = support.iter().map(|&k| eig.values[k]).collect();
    let v_s = CMatrix::from_fn(state.dim(), support.len(), |i, j| eig.vectors[(i, support[j])]);
    let id_b = CMatrix::identity(state.dim_b(), state.dim_b());
    let lambda = spectrum.values();

    let rotation = |u: &CMatrix| -> CMatrix {
        let d = u.nrows();
        let scaled = CMatrix::from_fn(d, d, |i, j| u[(i, j)] * Complex64::from_polar(1.0, lambda[j]));
        scaled * u.adjoint()
    };
    let overlap = |u: &CMatrix| -> f64 {
        let r = kron(&rotation(u), &id_b);
        let m = v_s.adjoint() * r * &v_s;
        ChernoffProfile::rotated(&values, &m).minimize().q
    };
    let (u, neg_q) = minimize_over_unitaries(state.dim_a(), opts, |u| -overlap(u));
    Ok(DsResult {
        value: (1.0 + neg_q).clamp(0.0, 1.0),
        optimal_hamiltonian: LocalHamiltonian::new(spectrum.clone(), u)?,
        method: DsMethod::General,
    })
}

/// Pure-state DS from Schmidt coefficients:
/// `1 − max_π |Σ_k q_{π(k)} e^{iλ_k}|²`, by exhaustive enumeration.
///
/// The returned Hamiltonian is expressed in the Schmidt basis of `A`.
pub fn ds_pure(q: &SchmidtCoefficients, spectrum: &Spectrum) -> Result<DsResult> {
    let d = spectrum.len();
    if q.len() > d {
        return Err(Error::Dimension(format!(
            "{} Schmidt coefficients for a {d}-level spectrum",
            q.len()
        )));
    }
    if d > MAX_PERMUTATION_DIM {
        return Err(Error::Capacity(format!(
            "permutation search is capped at dim_a = {MAX_PERMUTATION_DIM}, got {d}"
        )));
    }
    let q = q.padded(d);
    let phases: Vec<Complex64> = spectrum.values().iter().map(|&l| Complex64::from_polar(1.0, l)).collect();
    let mut best: Option<(f64, Vec<usize>)> = None;
    for perm in (0..d).permutations(d) {
        let z: Complex64 = perm.iter().zip(&phases).map(|(&j, p)| p * q.values()[j]).sum();
        let v = z.norm_sqr();
        if best.as_ref().is_none_or(|(b, _)| v > *b) {
            best = Some((v, perm));
        }
    }
    let (overlap, perm) = best.expect("at least one permutation");
    let basis = permutation_basis(&perm);
    Ok(DsResult {
        value: (1.0 - overlap).clamp(0.0, 1.0),
        optimal_hamiltonian: LocalHamiltonian::new(spectrum.clone(), basis)?,
        method: DsMethod::PurePermutation,
    })
}

/// Column `k` is the basis vector `perm[k]`.
fn permutation_basis(perm: &[usize]) -> CMatrix {
    let d = perm.len();
    let mut u = CMatrix::zeros(d, d);
    for (k, &j) in perm.iter().enumerate() {
        u[(j, k)] = c(1.0, 0.0);
    }
    u
}

/// Pure-state DS of a bipartite vector; the optimal Hamiltonian is returned in
/// the computational basis.
pub fn ds_pure_state(psi: &PureState, spectrum: &Spectrum) -> Result<DsResult> {
    let schmidt = schmidt_decompose(psi)?;
    let r = ds_pure(&schmidt.coefficients, spectrum)?;
    let frame = complete_basis(&schmidt.basis_a);
    let basis = frame * r.optimal_hamiltonian.basis();
    Ok(DsResult {
        optimal_hamiltonian: LocalHamiltonian::new(spectrum.clone(), basis)?,
        ..r
    })
}

/// Pure-state DS for the harmonic spectrum with spacing `omega`.
///
/// With `q` sorted descending the optimal assignment pairs `q_1 → 0`,
/// `q_2 → +ω`, `q_3 → −ω`, `q_4 → +2ω`, … so no search is needed.
pub fn ds_pure_harmonic(q: &SchmidtCoefficients, omega: f64) -> Result<DsResult> {
    let d = q.len();
    if d < 2 {
        return Err(Error::Dimension("need at least two Schmidt coefficients".into()));
    }
    if !(omega > 0.0 && omega <= 2.0 * PI / d as f64) {
        return Err(Error::Range(format!(
            "omega = {omega} must lie in (0, 2*pi/{d}]"
        )));
    }
    if q.values().windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::Precondition("Schmidt coefficients must be sorted descending".into()));
    }
    let centre = d.div_ceil(2);
    // harmonic level of the i-th coefficient (0-based i)
    let level = |i: usize| -> i64 {
        if i % 2 == 1 {
            (i as i64 + 1) / 2
        } else {
            -(i as i64) / 2
        }
    };
    let z: Complex64 = q
        .values()
        .iter()
        .enumerate()
        .map(|(i, &qi)| Complex64::from_polar(qi, level(i) as f64 * omega))
        .sum();
    let spectrum = Spectrum::harmonic(d, omega)?;
    // spectrum index k carries level d − centre − k
    let mut perm = vec![0usize; d];
    for i in 0..d {
        let k = (d as i64 - centre as i64 - level(i)) as usize;
        perm[k] = i;
    }
    Ok(DsResult {
        value: (1.0 - z.norm_sqr()).clamp(0.0, 1.0),
        optimal_hamiltonian: LocalHamiltonian::new(spectrum, permutation_basis(&perm))?,
        method: DsMethod::PurePermutation,
    })
}

/// Real symmetric `W_αβ = Tr[√ρ (σ_α⊗I) √ρ (σ_β⊗I)]` of a qubit-qudit state.
#[derive(Clone, Debug, PartialEq)]
pub struct WMatrix {
    pub w: Matrix3<f64>,
}

/// Imaginary residue tolerated in the entries of `W`.
pub const W_IMAG_TOL: f64 = 1e-9;

impl WMatrix {
    pub fn new(w: Matrix3<f64>) -> Self {
        Self { w: (w + w.transpose()) * 0.5 }
    }

    /// Eigenvalues descending with matching unit eigenvectors.
    pub fn eigen(&self) -> ([f64; 3], [Vector3<f64>; 3]) {
        let e = SymmetricEigen::new(self.w);
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
        (
            idx.map(|k| e.eigenvalues[k]),
            idx.map(|k| e.eigenvectors.column(k).into_owned()),
        )
    }

    pub fn xi_max(&self) -> f64 {
        self.eigen().0[0]
    }

    /// Direction of the top eigenvector; the Hamiltonian `λ n̂·σ` along it
    /// maximizes the Chernoff overlap.
    pub fn top_direction(&self) -> BlochVector {
        let v = self.eigen().1[0];
        BlochVector::normalize(v[0], v[1], v[2]).expect("eigenvectors are non-zero")
    }

    /// `n̂ᵀ W n̂`.
    pub fn quadratic_form(&self, n: &BlochVector) -> f64 {
        let v = Vector3::new(n.x, n.y, n.z);
        v.dot(&(self.w * v))
    }
}

fn require_qubit(state: &BipartiteState) -> Result<()> {
    if state.dim_a() != 2 {
        return Err(Error::Dimension(format!(
            "closed form needs a qubit A, got dim_a = {}",
            state.dim_a()
        )));
    }
    Ok(())
}

pub fn w_matrix(state: &BipartiteState) -> Result<WMatrix> {
    require_qubit(state)?;
    let root = linalg::sqrtm(state.rho());
    let id_b = CMatrix::identity(state.dim_b(), state.dim_b());
    let ops: Vec<CMatrix> = paulis().iter().map(|s| kron(s, &id_b)).collect();
    let sandwiched: Vec<CMatrix> = ops.iter().map(|s| &root * s * &root).collect();
    let mut w = Matrix3::zeros();
    let mut residue = 0.0f64;
    for a in 0..3 {
        for b in 0..3 {
            let z = (&sandwiched[a] * &ops[b]).trace();
            w[(a, b)] = z.re;
            residue = residue.max(z.im.abs());
        }
    }
    if residue > W_IMAG_TOL {
        return Err(Error::Contract(format!(
            "W matrix has imaginary residue {residue:.3e}"
        )));
    }
    Ok(WMatrix::new(w))
}

/// `H = λ n̂·σ` as a [`LocalHamiltonian`] with spectrum `{λ, −λ}`.
pub(crate) fn qubit_hamiltonian(n: &BlochVector, lambda: f64) -> Result<LocalHamiltonian> {
    let eig = eig_hermitian_unchecked(&pauli_dot(n.to_array()));
    LocalHamiltonian::new(Spectrum::qubit(lambda)?, eig.vectors)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda < PI) {
        return Err(Error::Range(format!("lambda = {lambda} must lie in (0, pi)")));
    }
    Ok(())
}

/// Closed-form DS for a qubit `A`: `(1 − ξ_max(W)) sin²λ` with `Λ = {λ, −λ}`.
pub fn ds_qubit_qudit(state: &BipartiteState, lambda: f64) -> Result<DsResult> {
    require_qubit(state)?;
    check_lambda(lambda)?;
    let w = w_matrix(state)?;
    let (values, _) = w.eigen();
    let s2 = lambda.sin().powi(2);
    Ok(DsResult {
        value: ((1.0 - values[0]) * s2).clamp(0.0, s2),
        optimal_hamiltonian: qubit_hamiltonian(&w.top_direction(), lambda)?,
        method: DsMethod::QubitClosedForm,
    })
}

/// Wigner–Yanase skew information `Tr[HρH − √ρ H √ρ H]`.
pub fn skew_information(rho: &DensityMatrix, h: &CMatrix) -> Result<f64> {
    if h.nrows() != rho.dim() || !h.is_square() {
        return Err(Error::Dimension(format!(
            "observable is {}x{}, state has dimension {}",
            h.nrows(),
            h.ncols(),
            rho.dim()
        )));
    }
    let defect = hermiticity_defect(h);
    if defect > 1e-10 {
        return Err(Error::Contract(format!("observable is not Hermitian (defect {defect:.3e})")));
    }
    let root = linalg::sqrtm(rho);
    let m = rho.matrix();
    let first = (h * m * h).trace().re;
    let second = (&root * h * &root * h).trace().re;
    Ok(first - second)
}

#[derive(Clone, Debug)]
pub struct LquResult {
    pub value: f64,
    pub optimal_hamiltonian: LocalHamiltonian,
}

/// `½ Σ_ij (√c_i − √c_j)² |⟨i|H|j⟩|²` in the eigenbasis of `ρ`.
fn skew_in_eigenbasis(eig: &Eigen, h_full: &CMatrix) -> f64 {
    let k = eig.vectors.adjoint() * h_full * &eig.vectors;
    let roots: Vec<f64> = eig.values.iter().map(|&w| w.max(0.0).sqrt()).collect();
    let n = roots.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = roots[i] - roots[j];
            total += d * d * k[(i, j)].norm_sqr();
        }
    }
    total
}

/// Local quantum uncertainty: skew information minimized over `H = U Λ U†`.
/// A qubit `A` uses the closed form `λ²(1 − ξ_max(W))`.
pub fn lqu(state: &BipartiteState, spectrum: &Spectrum, opts: &OptimizerOptions) -> Result<LquResult> {
    check_spectrum(state, spectrum)?;
    if state.dim_a() == 2 && !opts.force_general {
        let lambda = qubit_lambda(spectrum);
        let w = w_matrix(state)?;
        let h = qubit_hamiltonian(&w.top_direction(), lambda)?;
        return Ok(LquResult {
            value: (lambda * lambda * (1.0 - w.xi_max())).max(0.0),
            optimal_hamiltonian: h.with_spectrum(spectrum.clone())?,
        });
    }
    let eig = eig_hermitian_unchecked(state.matrix());
    let id_b = CMatrix::identity(state.dim_b(), state.dim_b());
    let objective = |u: &CMatrix| {
        let h = LocalHamiltonian::new(spectrum.clone(), u.clone())
            .expect("chart produces unitaries")
            .matrix();
        skew_in_eigenbasis(&eig, &kron(&h, &id_b))
    };
    let (u, value) = minimize_over_unitaries(state.dim_a(), opts, objective);
    Ok(LquResult {
        value: value.max(0.0),
        optimal_hamiltonian: LocalHamiltonian::new(spectrum.clone(), u)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Report {
    pub s: Vec<f64>,
    pub values: Vec<f64>,
    pub argmin: f64,
}

/// Points of the `s` grid used by [`lemma1_check`].
pub const LEMMA1_GRID: usize = 101;

/// Evaluates `f(s) = Tr[ρ^s Θ ρ^(1−s) Θ]` on a uniform grid over `[0, 1]` and
/// reports where it is smallest. Values within rounding of the minimum are
/// treated as tied, and ties resolve to the point closest to `s = ½`.
pub fn lemma1_check(rho: &DensityMatrix, theta: &CMatrix) -> Result<Lemma1Report> {
    if theta.nrows() != rho.dim() || !theta.is_square() {
        return Err(Error::Dimension("operator and state sizes differ".into()));
    }
    if hermiticity_defect(theta) > 1e-10 {
        return Err(Error::Contract("operator is not Hermitian".into()));
    }
    let eig = eig_hermitian_unchecked(rho.matrix());
    let smallest = eig.values.last().copied().unwrap_or(0.0);
    if smallest <= 1e-10 {
        return Err(Error::Precondition(format!(
            "state must have full support (smallest eigenvalue {smallest:.3e})"
        )));
    }
    let s: Vec<f64> = (0..LEMMA1_GRID).map(|k| k as f64 / (LEMMA1_GRID - 1) as f64).collect();
    let values: Vec<f64> = s
        .iter()
        .map(|&si| {
            let a = eig.map(|w| w.powf(si));
            let b = eig.map(|w| w.powf(1.0 - si));
            (a * theta * b * theta).trace().re
        })
        .collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tie = 1e-12 * min.abs().max(1.0);
    let argmin = s
        .iter()
        .zip(&values)
        .filter(|(_, &v)| v <= min + tie)
        .map(|(&si, _)| si)
        .min_by(|a, b| (a - 0.5).abs().total_cmp(&(b - 0.5).abs()))
        .expect("non-empty grid");
    Ok(Lemma1Report { s, values, argmin })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmallLambdaRow {
    pub lambda: f64,
    pub ds: f64,
    pub lqu: f64,
    pub gap: f64,
}

/// DS and LQU side by side for the spectra `λ · shape`.
pub fn lqu_ds_small_lambda_check(
    state: &BipartiteState,
    shape: &Spectrum,
    lambdas: &[f64],
    opts: &OptimizerOptions,
) -> Result<Vec<SmallLambdaRow>> {
    lambdas
        .iter()
        .map(|&lambda| {
            let spectrum = shape.scaled(lambda)?;
            let ds = ds_general(state, &spectrum, opts)?.value;
            let l = lqu(state, &spectrum, opts)?.value;
            Ok(SmallLambdaRow {
                lambda,
                ds,
                lqu: l,
                gap: (ds - l).abs(),
            })
        })
        .collect()
}

/// Which DS route to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    /// Tightest applicable closed form, else the general search.
    Auto,
    General,
    Pure,
    Qubit,
}

/// Purity threshold above which a state is handled as a vector.
const PURE_TOL: f64 = 1e-10;

/// The dominant eigenvector when `ρ` is pure.
pub fn as_pure(state: &BipartiteState) -> Option<PureState> {
    let eig = eig_hermitian_unchecked(state.matrix());
    if eig.values[0] < 1.0 - PURE_TOL {
        return None;
    }
    let v = eig.vectors.column(0).clone_owned();
    PureState::normalized(v).ok()?.with_dims(state.dim_a(), state.dim_b()).ok()
}

/// DS through the selected route.
pub fn discriminating_strength(
    state: &BipartiteState,
    spectrum: &Spectrum,
    choice: MethodChoice,
    opts: &OptimizerOptions,
) -> Result<DsResult> {
    check_spectrum(state, spectrum)?;
    match choice {
        MethodChoice::General => ds_general(state, spectrum, &OptimizerOptions {
            force_general: true,
            ..opts.clone()
        }),
        MethodChoice::Qubit => {
            let r = ds_qubit_qudit(state, if state.dim_a() == 2 { qubit_lambda(spectrum) } else { 0.0 })?;
            Ok(DsResult {
                optimal_hamiltonian: r.optimal_hamiltonian.with_spectrum(spectrum.clone())?,
                ..r
            })
        }
        MethodChoice::Pure => {
            let psi = as_pure(state)
                .ok_or_else(|| Error::Precondition("state is not pure".into()))?;
            ds_pure_state(&psi, spectrum)
        }
        MethodChoice::Auto => {
            if state.dim_a() == 2 {
                discriminating_strength(state, spectrum, MethodChoice::Qubit, opts)
            } else if state.dim_a() <= MAX_PERMUTATION_DIM && as_pure(state).is_some() {
                discriminating_strength(state, spectrum, MethodChoice::Pure, opts)
            } else {
                ds_general(state, spectrum, opts)
            }
        }
    }
}
