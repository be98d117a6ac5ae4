//! Binary discrimination of two states: the quantum Chernoff overlap, the
//! Helstrom minimum error, Uhlmann fidelity and the trace norm.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eig_hermitian, eig_hermitian_unchecked, kron_power, CMatrix, Eigen};
use crate::optim::minimize_unit_interval;
use crate::types::DensityMatrix;

/// Tolerance (in `s`) of the golden-section refinement.
pub const S_TOL: f64 = 1e-10;
/// Largest Hilbert-space dimension `d^n` accepted by the Helstrom routines.
pub const MAX_TENSOR_DIM: usize = 4096;
/// Chernoff overlaps below this report an infinite decay rate.
pub const INFINITE_RATE_CUTOFF: f64 = 1e-300;

/// An error exponent that may be infinite (orthogonal states).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DecayRate {
    Finite(f64),
    Infinite,
}

impl DecayRate {
    pub fn from_probability(p: f64, n: usize) -> Self {
        if p < INFINITE_RATE_CUTOFF {
            DecayRate::Infinite
        } else {
            DecayRate::Finite(-p.ln() / n as f64)
        }
    }

    pub fn value(self) -> f64 {
        match self {
            DecayRate::Finite(x) => x,
            DecayRate::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, DecayRate::Infinite)
    }
}

impl std::fmt::Display for DecayRate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DecayRate::Finite(x) => write!(f, "{x}"),
            DecayRate::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for DecayRate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            DecayRate::Finite(x) => s.serialize_f64(*x),
            DecayRate::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for DecayRate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(x) => Ok(DecayRate::Finite(x)),
            Repr::Str(s) if s == "inf" => Ok(DecayRate::Infinite),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad decay rate {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChernoffResult {
    /// `Q = min_s Tr[ρ0^s ρ1^(1−s)]`.
    pub q: f64,
    pub s_star: f64,
    /// `ξ = −ln Q`.
    pub xi: DecayRate,
}

impl ChernoffResult {
    fn from_minimum(s_star: f64, q: f64) -> Self {
        let q = q.clamp(0.0, 1.0);
        let xi = if q < INFINITE_RATE_CUTOFF {
            DecayRate::Infinite
        } else if q >= 1.0 {
            DecayRate::Finite(0.0)
        } else {
            DecayRate::Finite(-q.ln())
        };
        Self { q, s_star, xi }
    }
}

/// `g(s) = Σ_ij a_i^s b_j^(1−s) |⟨a_i|b_j⟩|²` restricted to the two supports.
pub(crate) struct ChernoffProfile {
    ln_a: Vec<f64>,
    ln_b: Vec<f64>,
    /// Row-major `|⟨a_i|b_j⟩|²`.
    weights: Vec<f64>,
}

impl ChernoffProfile {
    pub(crate) fn new(a: &Eigen, b: &Eigen) -> Self {
        let sa = a.support();
        let sb = b.support();
        let mut weights = Vec::with_capacity(sa.len() * sb.len());
        for &i in &sa {
            let ai = a.vectors.column(i);
            for &j in &sb {
                weights.push(ai.dotc(&b.vectors.column(j)).norm_sqr());
            }
        }
        Self {
            ln_a: sa.iter().map(|&i| a.values[i].ln()).collect(),
            ln_b: sb.iter().map(|&j| b.values[j].ln()).collect(),
            weights,
        }
    }

    /// Profile of `(ρ, R ρ R†)` given `ρ`'s support eigenvalues and the matrix
    /// `M = V† R V` of the rotation in `ρ`'s support eigenbasis.
    pub(crate) fn rotated(support_values: &[f64], m: &CMatrix) -> Self {
        let r = support_values.len();
        let ln: Vec<f64> = support_values.iter().map(|v| v.ln()).collect();
        let mut weights = Vec::with_capacity(r * r);
        for i in 0..r {
            for j in 0..r {
                weights.push(m[(i, j)].norm_sqr());
            }
        }
        Self {
            ln_a: ln.clone(),
            ln_b: ln,
            weights,
        }
    }

    pub(crate) fn eval(&self, s: f64) -> f64 {
        let nb = self.ln_b.len();
        let yb: Vec<f64> = self.ln_b.iter().map(|lb| ((1.0 - s) * lb).exp()).collect();
        let mut total = 0.0;
        for (i, la) in self.ln_a.iter().enumerate() {
            let row = &self.weights[i * nb..(i + 1) * nb];
            let inner: f64 = row.iter().zip(&yb).map(|(w, y)| w * y).sum();
            if inner != 0.0 {
                total += (s * la).exp() * inner;
            }
        }
        total
    }

    pub(crate) fn minimize(&self) -> ChernoffResult {
        let (s, q) = minimize_unit_interval(|s| self.eval(s), S_TOL);
        ChernoffResult::from_minimum(s, q)
    }
}

fn same_dim(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<()> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::Dimension(format!(
            "states have dimensions {} and {}",
            rho0.dim(),
            rho1.dim()
        )));
    }
    Ok(())
}

/// Quantum Chernoff overlap `Q(ρ0, ρ1)` with its minimizing exponent.
pub fn chernoff_overlap(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<ChernoffResult> {
    same_dim(rho0, rho1)?;
    let a = eig_hermitian_unchecked(rho0.matrix());
    let b = eig_hermitian_unchecked(rho1.matrix());
    Ok(ChernoffProfile::new(&a, &b).minimize())
}

/// `Tr[ρ0^s ρ1^(1−s)]` at a fixed `s` (support-projector convention).
pub fn chernoff_profile(rho0: &DensityMatrix, rho1: &DensityMatrix, s: f64) -> Result<f64> {
    same_dim(rho0, rho1)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Range(format!("s = {s} must lie in [0, 1]")));
    }
    let a = eig_hermitian_unchecked(rho0.matrix());
    let b = eig_hermitian_unchecked(rho1.matrix());
    Ok(ChernoffProfile::new(&a, &b).eval(s))
}

/// Uhlmann fidelity `(Tr √(√ρ0 ρ1 √ρ0))²`.
pub fn fidelity(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    same_dim(rho0, rho1)?;
    let r = linalg::sqrtm(rho0);
    let inner = &r * rho1.matrix() * &r;
    let eig = eig_hermitian_unchecked(&inner);
    let root: f64 = eig.values.iter().map(|&w| w.max(0.0).sqrt()).sum();
    Ok((root * root).clamp(0.0, 1.0))
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    Ok(eig_hermitian(m)?.values.iter().map(|w| w.abs()).sum())
}

fn check_capacity(dim: usize, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Range("number of copies must be at least 1".into()));
    }
    let mut total: usize = 1;
    for _ in 0..n {
        total = total
            .checked_mul(dim)
            .filter(|&t| t <= MAX_TENSOR_DIM)
            .ok_or_else(|| {
                Error::Capacity(format!(
                    "{dim}^{n} exceeds the {MAX_TENSOR_DIM}-dimensional guard"
                ))
            })?;
    }
    Ok(total)
}

fn error_from_norm(norm: f64) -> f64 {
    (0.5 * (1.0 - 0.5 * norm)).clamp(0.0, 0.5)
}

/// Minimum error probability `½(1 − ½‖ρ0^⊗n − ρ1^⊗n‖₁)` for equal priors.
///
/// When both states are rank deficient enough, the trace norm is taken on the
/// Gram matrix of the two supports instead of the full `d^n` space.
pub fn helstrom_error(rho0: &DensityMatrix, rho1: &DensityMatrix, n: usize) -> Result<f64> {
    same_dim(rho0, rho1)?;
    let full = check_capacity(rho0.dim(), n)?;
    let a = eig_hermitian_unchecked(rho0.matrix());
    let b = eig_hermitian_unchecked(rho1.matrix());
    let ra = a.support().len().max(1).pow(n as u32);
    let rb = b.support().len().max(1).pow(n as u32);
    if ra + rb < full {
        Ok(error_from_norm(low_rank_trace_norm(&a, &b, n)))
    } else {
        helstrom_error_dense(rho0, rho1, n)
    }
}

/// Same quantity, always through explicit tensor powers built with `kron`.
pub fn helstrom_error_dense(rho0: &DensityMatrix, rho1: &DensityMatrix, n: usize) -> Result<f64> {
    same_dim(rho0, rho1)?;
    check_capacity(rho0.dim(), n)?;
    let diff = kron_power(rho0.matrix(), n) - kron_power(rho1.matrix(), n);
    Ok(error_from_norm(trace_norm(&linalg::hermitian_part(&diff))?))
}

/// `‖F F† − G G†‖₁` with `F = (V_a √a)^⊗n`, `G = (V_b √b)^⊗n`. With
/// `[F G] = Q R` the non-zero spectrum of `[F G] J [F G]†` equals that of
/// `R J R†`, `J = diag(I, −I)`. Working from `R` rather than the Gram matrix
/// keeps full precision when the two supports nearly coincide.
fn low_rank_trace_norm(a: &Eigen, b: &Eigen, n: usize) -> f64 {
    let factor = |e: &Eigen| {
        let s = e.support();
        CMatrix::from_fn(e.vectors.nrows(), s.len(), |i, k| {
            e.vectors[(i, s[k])] * e.values[s[k]].sqrt()
        })
    };
    let f = kron_power(&factor(a), n);
    let g = kron_power(&factor(b), n);
    let p = f.ncols();
    let mut m = CMatrix::zeros(f.nrows(), p + g.ncols());
    m.view_mut((0, 0), f.shape()).copy_from(&f);
    m.view_mut((0, p), g.shape()).copy_from(&g);
    let r = m.qr().r();
    let mut rj = r.clone();
    for mut col in rj.column_iter_mut().skip(p) {
        col.neg_mut();
    }
    let y = linalg::hermitian_part(&(rj * r.adjoint()));
    eig_hermitian_unchecked(&y).values.iter().map(|w| w.abs()).sum()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: usize,
    pub p_err: f64,
    /// `−ln P_err / n`.
    pub exponent: DecayRate,
    /// `−ln(2 P_err) / n`, zero for indistinguishable states.
    pub normalized_exponent: DecayRate,
    /// `½ Q^n`.
    pub chernoff_bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayTable {
    pub chernoff: ChernoffResult,
    pub rows: Vec<DecayRow>,
}

/// Slack allowed in `P_err ≤ ½ Q^n`.
pub const BOUND_TOL: f64 = 1e-10;

/// Finite-copy error exponents for `n = 1..=n_max`, alongside the asymptotic
/// rate. Fails with [`Error::Contract`] if `P_err ≤ ½ Q^n` is violated.
pub fn chernoff_decay_check(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    n_max: usize,
) -> Result<DecayTable> {
    same_dim(rho0, rho1)?;
    check_capacity(rho0.dim(), n_max)?;
    let chernoff = chernoff_overlap(rho0, rho1)?;
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let p_err = helstrom_error(rho0, rho1, n)?;
        let bound = 0.5 * chernoff.q.powi(n as i32);
        if p_err > bound + BOUND_TOL {
            return Err(Error::Contract(format!(
                "P_err = {p_err:.3e} exceeds Q^n/2 = {bound:.3e} at n = {n}"
            )));
        }
        rows.push(DecayRow {
            n,
            p_err,
            exponent: DecayRate::from_probability(p_err, n),
            normalized_exponent: DecayRate::from_probability((2.0 * p_err).min(1.0), n),
            chernoff_bound: bound,
        });
    }
    Ok(DecayTable { chernoff, rows })
}
