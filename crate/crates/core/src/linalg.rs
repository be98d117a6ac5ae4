//! Dense complex linear algebra: Hermitian eigendecomposition and the
//! functional calculus built on it, tensor products, partial traces and the
//! Schmidt decomposition.

use nalgebra::linalg::{SymmetricEigen, SVD};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{BipartiteState, BlochVector, DensityMatrix, PureState, SchmidtCoefficients};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Eigenvalues of a density matrix below this are treated as exactly zero
/// before any fractional power is taken.
pub const SUPPORT_CUTOFF: f64 = 1e-12;

const HERMITIAN_TOL: f64 = 1e-10;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
}

pub fn paulis() -> [CMatrix; 3] {
    [sigma_x(), sigma_y(), sigma_z()]
}

/// `n·σ` for a real 3-vector.
pub fn pauli_dot(n: [f64; 3]) -> CMatrix {
    let [sx, sy, sz] = paulis();
    sx * c(n[0], 0.0) + sy * c(n[1], 0.0) + sz * c(n[2], 0.0)
}

/// `max |m_ij − conj(m_ji)|`.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(M + M†)/2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).unscale(2.0)
}

/// `max |(U†U − I)_ij|`.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    let g = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - c(target, 0.0)).norm());
        }
    }
    worst
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Hermitian eigendecomposition `m = V diag(w) V†`, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigen {
    /// `V diag(f(w)) V†`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let fw: Vec<f64> = self.values.iter().map(|&w| f(w)).collect();
        let scaled = CMatrix::from_fn(n, n, |i, j| self.vectors[(i, j)] * fw[j]);
        hermitian_part(&(scaled * self.vectors.adjoint()))
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map(|w| w)
    }

    /// Indices of eigenvalues above [`SUPPORT_CUTOFF`].
    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len())
            .filter(|&k| self.values[k] > SUPPORT_CUTOFF)
            .collect()
    }
}

pub fn eig_hermitian(m: &CMatrix) -> Result<Eigen> {
    let defect = hermiticity_defect(m);
    if defect > HERMITIAN_TOL {
        return Err(Error::Contract(format!(
            "eigendecomposition needs a Hermitian matrix (defect {defect:.3e})"
        )));
    }
    Ok(eig_hermitian_unchecked(m))
}

pub(crate) fn eig_hermitian_unchecked(m: &CMatrix) -> Eigen {
    let n = m.nrows();
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep their original order
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Eigen { values, vectors }
}

/// `w ↦ w^s` on the support, `0` elsewhere (so `ρ^0` is the support projector).
#[inline]
pub(crate) fn support_pow(w: f64, s: f64) -> f64 {
    if w > SUPPORT_CUTOFF {
        w.powf(s)
    } else {
        0.0
    }
}

/// Fractional power `ρ^s`, `s ∈ [0, 1]`.
pub fn mat_pow(rho: &DensityMatrix, s: f64) -> Result<CMatrix> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Range(format!("exponent s = {s} must lie in [0, 1]")));
    }
    let eig = eig_hermitian_unchecked(rho.matrix());
    Ok(eig.map(|w| support_pow(w, s)))
}

pub fn sqrtm(rho: &DensityMatrix) -> CMatrix {
    eig_hermitian_unchecked(rho.matrix()).map(|w| support_pow(w, 0.5))
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// `n`-fold tensor power.
pub fn kron_power(a: &CMatrix, n: usize) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for _ in 0..n {
        out = kron(&out, a);
    }
    out
}

/// Traces out the second factor of a `(dim_a·dim_b)`-dimensional operator.
pub fn partial_trace_second(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    if m.nrows() != dim_a * dim_b || !m.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} operator is not on a {dim_a} x {dim_b} space",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(CMatrix::from_fn(dim_a, dim_a, |i, j| {
        (0..dim_b).map(|k| m[(i * dim_b + k, j * dim_b + k)]).sum()
    }))
}

/// Traces out the first factor.
pub fn partial_trace_first(m: &CMatrix, dim_a: usize, dim_b: usize) -> Result<CMatrix> {
    if m.nrows() != dim_a * dim_b || !m.is_square() {
        return Err(Error::Dimension(format!(
            "{}x{} operator is not on a {dim_a} x {dim_b} space",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(CMatrix::from_fn(dim_b, dim_b, |i, j| {
        (0..dim_a).map(|k| m[(k * dim_b + i, k * dim_b + j)]).sum()
    }))
}

/// Reduced state `ρ_A = Tr_B ρ`.
pub fn partial_trace_b(state: &BipartiteState) -> Result<DensityMatrix> {
    let m = partial_trace_second(state.matrix(), state.dim_a(), state.dim_b())?;
    Ok(DensityMatrix::from_trusted(m))
}

/// `ψ = Σ_j √q_j |a_j⟩|b_j⟩`, with `a_j`/`b_j` the columns of the two bases.
#[derive(Clone, Debug)]
pub struct SchmidtDecomposition {
    /// Length `dim_a`; entries beyond `min(dim_a, dim_b)` are zero.
    pub coefficients: SchmidtCoefficients,
    pub basis_a: CMatrix,
    pub basis_b: CMatrix,
}

impl SchmidtDecomposition {
    pub fn reconstruct(&self) -> DVector<Complex64> {
        let (da, k) = self.basis_a.shape();
        let db = self.basis_b.nrows();
        let mut v = DVector::zeros(da * db);
        for j in 0..k {
            let amp = self.coefficients.values()[j].sqrt();
            let term = self.basis_a.column(j).kronecker(&self.basis_b.column(j));
            v += term * c(amp, 0.0);
        }
        v
    }
}

pub fn schmidt_decompose(psi: &PureState) -> Result<SchmidtDecomposition> {
    let (da, db) = psi
        .dims()
        .ok_or_else(|| Error::Dimension("Schmidt decomposition needs bipartite dims".into()))?;
    let amps = psi.amplitudes();
    let cm = CMatrix::from_fn(da, db, |i, j| amps[i * db + j]);
    let svd = SVD::new(cm, true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let k = da.min(db);

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));

    let mut q: Vec<f64> = order.iter().map(|&j| svd.singular_values[j].powi(2)).collect();
    let total: f64 = q.iter().sum();
    q.iter_mut().for_each(|x| *x /= total);
    q.resize(da, 0.0);

    let mut basis_a = CMatrix::zeros(da, k);
    let mut basis_b = CMatrix::zeros(db, k);
    for (col, &j) in order.iter().enumerate() {
        let mut a = u.column(j).clone_owned();
        let mut b = v_t.row(j).transpose();
        if let Some(first) = a.iter().find(|z| z.norm() > 1e-12).copied() {
            let phase = first / first.norm();
            a *= phase.conj();
            b *= phase;
        }
        basis_a.set_column(col, &a);
        basis_b.set_column(col, &b);
    }
    Ok(SchmidtDecomposition {
        coefficients: SchmidtCoefficients::new(q)?,
        basis_a,
        basis_b,
    })
}

/// Extends orthonormal columns to a full unitary by Gram–Schmidt against the
/// computational basis.
pub fn complete_basis(partial: &CMatrix) -> CMatrix {
    let (d, k) = partial.shape();
    let mut cols: Vec<DVector<Complex64>> = partial.column_iter().map(|c| c.clone_owned()).collect();
    let mut e = 0;
    while cols.len() < d && e < d {
        let mut v = DVector::<Complex64>::zeros(d);
        v[e] = c(1.0, 0.0);
        for u in &cols {
            let proj = u.dotc(&v);
            v -= u * proj;
        }
        let n = v.norm();
        if n > 1e-8 {
            cols.push(v.unscale(n));
        }
        e += 1;
    }
    debug_assert!(cols.len() == d, "completed {} of {d} columns from {k}", cols.len());
    CMatrix::from_columns(&cols)
}

/// `(I + n·σ)/2`.
pub fn bloch_to_state(n: &BlochVector) -> DensityMatrix {
    let m = (CMatrix::identity(2, 2) + pauli_dot(n.to_array())).unscale(2.0);
    DensityMatrix::from_trusted(m)
}

/// Bloch vector `Tr[ρ σ]` of a qubit state.
pub fn bloch_of(rho: &DensityMatrix) -> [f64; 3] {
    let m = rho.matrix();
    paulis().map(|s| (m * s).trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::BlochVector;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn eig_of_identity_and_diagonal() {
        let e = eig_hermitian(&CMatrix::identity(2, 2)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert!(unitarity_defect(&e.vectors) < 1e-12);

        let d = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let e = eig_hermitian(d.matrix()).unwrap();
        assert_abs_diff_eq!(e.values[0], 0.7, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 0.3, epsilon = 1e-14);
    }

    #[test]
    fn eig_of_plus_projector() {
        let m = (CMatrix::identity(2, 2) + sigma_x()).unscale(2.0);
        let e = eig_hermitian(&m).unwrap();
        assert_abs_diff_eq!(e.values[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(e.values[1], 0.0, epsilon = 1e-14);
        // top eigenvector is |+> up to phase
        let v = e.vectors.column(0);
        let overlap = (v[0] + v[1]).norm() * FRAC_1_SQRT_2;
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
        assert!(max_abs_diff(&e.reconstruct(), &m) < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(eig_hermitian(&m), Err(Error::Contract(_))));
    }

    #[test]
    fn eig_ties_keep_index_order() {
        let m = CMatrix::from_diagonal(&DVector::from_vec(vec![c(0.5, 0.), c(0.5, 0.), c(0.9, 0.)]));
        let e = eig_hermitian(&m).unwrap();
        assert_eq!(e.values, vec![0.9, 0.5, 0.5]);
    }

    #[test]
    fn mat_pow_examples() {
        let d = DensityMatrix::diagonal(&[0.64, 0.36]).unwrap();
        let h = mat_pow(&d, 0.5).unwrap();
        assert_abs_diff_eq!(h[(0, 0)].re, 0.8, epsilon = 1e-14);
        assert_abs_diff_eq!(h[(1, 1)].re, 0.6, epsilon = 1e-14);
        assert!(max_abs_diff(&mat_pow(&d, 1.0).unwrap(), d.matrix()) < 1e-14);

        let p = DensityMatrix::basis_projector(2, 0);
        for s in [0.0, 0.5, 1.0] {
            assert!(max_abs_diff(&mat_pow(&p, s).unwrap(), p.matrix()) < 1e-14);
        }
        assert!(matches!(mat_pow(&d, 1.5), Err(Error::Range(_))));
        assert!(matches!(mat_pow(&d, -0.1), Err(Error::Range(_))));
    }

    #[test]
    fn sqrtm_squares_back() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[c(0.6, 0.), c(0.1, 0.2), c(0.1, -0.2), c(0.4, 0.)],
        );
        let rho = DensityMatrix::new(m).unwrap();
        let r = sqrtm(&rho);
        assert!(max_abs_diff(&(&r * &r), rho.matrix()) < 1e-12);
        assert!(max_abs_diff(&r, &mat_pow(&rho, 0.5).unwrap()) < 1e-14);
    }

    #[test]
    fn kron_examples() {
        assert_eq!(kron(&CMatrix::identity(2, 2), &CMatrix::identity(2, 2)), CMatrix::identity(4, 4));
        let z = kron(&sigma_z(), &CMatrix::identity(2, 2));
        let expect = [1.0, 1.0, -1.0, -1.0];
        for i in 0..4 {
            for j in 0..4 {
                let e = if i == j { expect[i] } else { 0.0 };
                assert_eq!(z[(i, j)], c(e, 0.0));
            }
        }
        let p = kron(
            DensityMatrix::basis_projector(2, 0).matrix(),
            DensityMatrix::basis_projector(2, 1).matrix(),
        );
        assert_eq!(&p, DensityMatrix::basis_projector(4, 1).matrix());
    }

    #[test]
    fn partial_trace_examples() {
        let psi = PureState::basis(2, 0).tensor(&PureState::basis(2, 0));
        let st = BipartiteState::from_pure(&psi).unwrap();
        let ra = partial_trace_b(&st).unwrap();
        assert!(max_abs_diff(ra.matrix(), DensityMatrix::basis_projector(2, 0).matrix()) < 1e-15);

        let bell = PureState::bipartite(
            DVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.), c(0., 0.), c(0., 0.), c(FRAC_1_SQRT_2, 0.)]),
            2,
            2,
        )
        .unwrap();
        let ra = partial_trace_b(&BipartiteState::from_pure(&bell).unwrap()).unwrap();
        assert!(max_abs_diff(ra.matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

        let bad = CMatrix::identity(5, 5);
        assert!(matches!(partial_trace_second(&bad, 2, 2), Err(Error::Dimension(_))));
    }

    #[test]
    fn schmidt_examples() {
        let prod = PureState::basis(2, 0).tensor(&PureState::basis(2, 0));
        let s = schmidt_decompose(&prod).unwrap();
        assert_eq!(s.coefficients.values().len(), 2);
        assert_abs_diff_eq!(s.coefficients.values()[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.coefficients.values()[1], 0.0, epsilon = 1e-14);

        let a = 0.9f64.sqrt();
        let b = 0.1f64.sqrt();
        let psi = PureState::bipartite(
            DVector::from_vec(vec![c(a, 0.), c(0., 0.), c(0., 0.), c(b, 0.)]),
            2,
            2,
        )
        .unwrap();
        let s = schmidt_decompose(&psi).unwrap();
        assert_abs_diff_eq!(s.coefficients.values()[0], 0.9, epsilon = 1e-12);
        assert_abs_diff_eq!(s.coefficients.values()[1], 0.1, epsilon = 1e-12);
        let back = s.reconstruct();
        let overlap = back.dotc(psi.amplitudes()).norm();
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn schmidt_pads_when_b_is_smaller() {
        // qutrit A, qubit B
        let v: Vec<Complex64> = (0..6).map(|k| c(1.0 + k as f64, 0.5 * k as f64)).collect();
        let psi = PureState::normalized(DVector::from_vec(v)).unwrap().with_dims(3, 2).unwrap();
        let s = schmidt_decompose(&psi).unwrap();
        assert_eq!(s.coefficients.len(), 3);
        assert_eq!(s.coefficients.values()[2], 0.0);
        assert_eq!(s.basis_a.ncols(), 2);
        let overlap = s.reconstruct().dotc(psi.amplitudes()).norm();
        assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-12);
        // first non-negligible entry of each A vector is real positive
        for j in 0..2 {
            let first = s.basis_a.column(j).iter().find(|z| z.norm() > 1e-12).copied().unwrap();
            assert!(first.re > 0.0 && first.im.abs() < 1e-12);
        }
    }

    #[test]
    fn bloch_projectors() {
        let z = bloch_to_state(&BlochVector::Z);
        assert!(max_abs_diff(z.matrix(), DensityMatrix::basis_projector(2, 0).matrix()) < 1e-15);

        let x = bloch_to_state(&BlochVector::X);
        let plus = CMatrix::from_element(2, 2, c(0.5, 0.0));
        assert!(max_abs_diff(x.matrix(), &plus) < 1e-15);

        let y = bloch_to_state(&BlochVector::Y);
        let cross = CMatrix::from_row_slice(2, 2, &[c(0.5, 0.), c(0., -0.5), c(0., 0.5), c(0.5, 0.)]);
        assert!(max_abs_diff(y.matrix(), &cross) < 1e-15);
        for rho in [z, x, y] {
            assert_abs_diff_eq!(rho.purity(), 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-14);
        }
        assert!(matches!(BlochVector::new(1.0, 1.0, 0.0), Err(Error::Contract(_))));
    }
}
