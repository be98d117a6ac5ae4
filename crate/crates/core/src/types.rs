//! Domain types shared by every module: density matrices, bipartite states,
//! pure states, Schmidt coefficients, Hamiltonian spectra and Bloch vectors.
//!
//! Constructors validate their invariants and return [`Error::Contract`] (or a
//! more specific variant) when an input is rejected. Once built, values are
//! immutable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Tolerance for Hermiticity, unit trace and positivity checks.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance on the norm of pure states and Bloch vectors.
pub const NORM_TOL: f64 = 1e-12;

/// A Hermitian, positive semidefinite, trace-one complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::Dimension(format!(
                "density matrix must be square and non-empty, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm = linalg::hermiticity_defect(&m);
        if herm > STATE_TOL {
            return Err(Error::Contract(format!(
                "matrix is not Hermitian (max defect {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::Contract(format!(
                "trace must be 1, got {:.12}{:+.3e}i",
                tr.re, tr.im
            )));
        }
        let m = linalg::hermitian_part(&m);
        let eig = linalg::eig_hermitian(&m)?;
        let smallest = eig.values.iter().copied().fold(f64::INFINITY, f64::min);
        if smallest < -STATE_TOL {
            return Err(Error::Contract(format!(
                "matrix is not positive semidefinite (smallest eigenvalue {smallest:.3e})"
            )));
        }
        Ok(Self { m })
    }

    /// Wraps a matrix known to be a valid state up to rounding (e.g. a unitary
    /// conjugation of a validated state). Only the Hermitian part is kept.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        Self {
            m: linalg::hermitian_part(&m),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let v = psi.amplitudes();
        Self::from_trusted(v * v.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::from_trusted(CMatrix::identity(dim, dim).unscale(dim as f64))
    }

    /// Diagonal state in the computational basis. `diag` must be a probability vector.
    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::new(CMatrix::from_diagonal(&v))
    }

    /// Projector onto the computational basis vector `index`.
    pub fn basis_projector(dim: usize, index: usize) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = Complex64::new(1.0, 0.0);
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    /// Conjugation `U ρ U†`.
    pub fn conjugate(&self, u: &CMatrix) -> Self {
        Self::from_trusted(u * &self.m * u.adjoint())
    }
}

/// A density matrix on `C^{dim_a} ⊗ C^{dim_b}`, subsystem A first.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    rho: DensityMatrix,
    dim_a: usize,
    dim_b: usize,
}

impl BipartiteState {
    pub fn new(rho: DensityMatrix, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a < 2 || dim_b < 1 {
            return Err(Error::Dimension(format!(
                "need dim_a >= 2 and dim_b >= 1, got ({dim_a}, {dim_b})"
            )));
        }
        if dim_a * dim_b != rho.dim() {
            return Err(Error::Dimension(format!(
                "{dim_a} x {dim_b} does not match matrix dimension {}",
                rho.dim()
            )));
        }
        Ok(Self { rho, dim_a, dim_b })
    }

    pub fn from_pure(psi: &PureState) -> Result<Self> {
        let (da, db) = psi.dims().ok_or_else(|| {
            Error::Dimension("pure state carries no bipartite dimensions".into())
        })?;
        Self::new(DensityMatrix::from_pure(psi), da, db)
    }

    pub fn product(a: &DensityMatrix, b: &DensityMatrix) -> Result<Self> {
        let m = linalg::kron(a.matrix(), b.matrix());
        Self::new(DensityMatrix::from_trusted(m), a.dim(), b.dim())
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn matrix(&self) -> &CMatrix {
        self.rho.matrix()
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    /// Applies `W_A ⊗ V_B` by conjugation.
    pub fn apply_local_unitaries(&self, w_a: &CMatrix, v_b: &CMatrix) -> Result<Self> {
        if w_a.nrows() != self.dim_a || v_b.nrows() != self.dim_b {
            return Err(Error::Dimension("local unitary size mismatch".into()));
        }
        let u = linalg::kron(w_a, v_b);
        Ok(Self {
            rho: self.rho.conjugate(&u),
            dim_a: self.dim_a,
            dim_b: self.dim_b,
        })
    }
}

/// A unit vector, optionally tagged with bipartite dimensions `(dim_a, dim_b)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
    dims: Option<(usize, usize)>,
}

impl PureState {
    pub fn new(amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm_sq = amplitudes.norm_squared();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!(
                "pure state must have unit norm, got |psi|^2 = {norm_sq:.15}"
            )));
        }
        Ok(Self {
            amplitudes,
            dims: None,
        })
    }

    pub fn bipartite(amplitudes: DVector<Complex64>, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a * dim_b != amplitudes.len() {
            return Err(Error::Dimension(format!(
                "{dim_a} x {dim_b} does not match vector length {}",
                amplitudes.len()
            )));
        }
        let mut psi = Self::new(amplitudes)?;
        psi.dims = Some((dim_a, dim_b));
        Ok(psi)
    }

    /// Rescales a non-zero vector to unit norm.
    pub fn normalized(amplitudes: DVector<Complex64>) -> Result<Self> {
        let n = amplitudes.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Contract("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.unscale(n))
    }

    pub fn with_dims(mut self, dim_a: usize, dim_b: usize) -> Result<Self> {
        if dim_a * dim_b != self.amplitudes.len() {
            return Err(Error::Dimension("dims do not match vector length".into()));
        }
        self.dims = Some((dim_a, dim_b));
        Ok(self)
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Self {
            amplitudes: v,
            dims: None,
        }
    }

    /// Qubit state with the given Bloch vector.
    pub fn from_bloch(n: &BlochVector) -> Self {
        let (theta, phi) = n.angles();
        let v = DVector::from_vec(vec![
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ]);
        Self {
            amplitudes: v,
            dims: None,
        }
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// `|ψ⟩ ⊗ |φ⟩` tagged with the factor dimensions.
    pub fn tensor(&self, other: &PureState) -> PureState {
        let v = self.amplitudes.kronecker(&other.amplitudes);
        PureState {
            amplitudes: v,
            dims: Some((self.len(), other.len())),
        }
    }
}

/// Squared Schmidt coefficients `q_j`, descending, zero-padded to `dim_a`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchmidtCoefficients(Vec<f64>);

impl SchmidtCoefficients {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if q.is_empty() {
            return Err(Error::Contract("no Schmidt coefficients".into()));
        }
        if q.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::Contract("Schmidt coefficients must be non-negative".into()));
        }
        let sum: f64 = q.iter().sum();
        if (sum - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!(
                "Schmidt coefficients must sum to 1, got {sum:.15}"
            )));
        }
        Ok(Self(q))
    }

    /// Same coefficients with trailing zeros appended up to `len`.
    pub fn padded(&self, len: usize) -> Self {
        let mut q = self.0.clone();
        if q.len() < len {
            q.resize(len, 0.0);
        }
        Self(q)
    }

    /// Copy sorted in descending order.
    pub fn sorted_desc(&self) -> Self {
        let mut q = self.0.clone();
        q.sort_by(|a, b| b.total_cmp(a));
        Self(q)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Non-degenerate spectrum `λ_1 > … > λ_d` with spread below 2π.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.len() < 2 {
            return Err(Error::Spectrum("need at least two eigenvalues".into()));
        }
        if lambdas.iter().any(|x| !x.is_finite()) {
            return Err(Error::Spectrum("eigenvalues must be finite".into()));
        }
        if lambdas.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Spectrum(
                "spectrum must be non-degenerate and strictly decreasing".into(),
            ));
        }
        let spread = lambdas[0] - lambdas[lambdas.len() - 1];
        if spread >= 2.0 * PI {
            return Err(Error::Spectrum(format!(
                "spread {spread} must be below 2*pi"
            )));
        }
        Ok(Self(lambdas))
    }

    /// `{λ, −λ}` for a qubit, `λ ∈ (0, π)`.
    pub fn qubit(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda < PI) {
            return Err(Error::Range(format!("lambda = {lambda} must lie in (0, pi)")));
        }
        Self::new(vec![lambda, -lambda])
    }

    /// Harmonic spectrum with spacing `omega`, centred as
    /// `{(d − c)ω, …, (1 − c)ω}` with `c = ⌊(d+1)/2⌋`, listed descending.
    pub fn harmonic(dim: usize, omega: f64) -> Result<Self> {
        let c = dim.div_ceil(2) as f64;
        let v = (1..=dim).rev().map(|k| (k as f64 - c) * omega).collect();
        Self::new(v)
    }

    pub fn shifted(&self, b: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|x| x + b).collect())
    }

    pub fn scaled(&self, f: f64) -> Result<Self> {
        if f <= 0.0 {
            return Err(Error::Range("spectrum scale factor must be positive".into()));
        }
        Self::new(self.0.iter().map(|x| x * f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `H = U Λ U†` on subsystem A.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalHamiltonian {
    spectrum: Spectrum,
    basis: CMatrix,
}

impl LocalHamiltonian {
    pub fn new(spectrum: Spectrum, basis: CMatrix) -> Result<Self> {
        if basis.nrows() != spectrum.len() || !basis.is_square() {
            return Err(Error::Dimension(format!(
                "basis is {}x{}, spectrum has {} entries",
                basis.nrows(),
                basis.ncols(),
                spectrum.len()
            )));
        }
        let defect = linalg::unitarity_defect(&basis);
        if defect > STATE_TOL {
            return Err(Error::Contract(format!(
                "basis is not unitary (defect {defect:.3e})"
            )));
        }
        Ok(Self { spectrum, basis })
    }

    /// The Hamiltonian diagonal in the computational basis.
    pub fn diagonal(spectrum: Spectrum) -> Self {
        let d = spectrum.len();
        Self {
            spectrum,
            basis: CMatrix::identity(d, d),
        }
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    /// `U f(Λ) U†`.
    fn spectral_map(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let diag = DVector::from_iterator(self.dim(), self.spectrum.values().iter().map(|&l| f(l)));
        let scaled = DMatrix::from_fn(self.dim(), self.dim(), |i, j| self.basis[(i, j)] * diag[j]);
        scaled * self.basis.adjoint()
    }

    pub fn matrix(&self) -> CMatrix {
        linalg::hermitian_part(&self.spectral_map(|l| Complex64::new(l, 0.0)))
    }

    /// `R = U exp(iΛ) U†`.
    pub fn rotation(&self) -> CMatrix {
        self.spectral_map(|l| Complex64::from_polar(1.0, l))
    }

    pub fn with_spectrum(&self, spectrum: Spectrum) -> Result<Self> {
        Self::new(spectrum, self.basis.clone())
    }
}

/// Unit vector on the Bloch sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const Z: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 1.0 };
    pub const X: BlochVector = BlochVector { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: BlochVector = BlochVector { x: 0.0, y: 1.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::Contract(format!(
                "Bloch vector must be a unit vector, got |n|^2 = {n2:.15}"
            )));
        }
        Ok(Self { x, y, z })
    }

    pub fn normalize(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Contract("cannot normalize a zero Bloch vector".into()));
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Polar angle `θ ∈ [0, π]`, azimuth `φ`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn angles(&self) -> (f64, f64) {
        let theta = self.z.clamp(-1.0, 1.0).acos();
        let phi = self.y.atan2(self.x);
        (theta, phi)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn neg(self) -> Self {
        Self {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }
}
