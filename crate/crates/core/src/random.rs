//! Seeded random matrices: Haar unitaries, random states and random channels.
//!
//! Every function takes the RNG explicitly; there is no global generator.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{kron, CMatrix};
use crate::types::{BipartiteState, BlochVector, DensityMatrix, PureState};

pub type StdRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> StdRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` derived from `seed`.
pub fn rng_for(seed: u64, stream: u64) -> StdRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` pushed into `Q`.
pub fn haar_random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = ginibre(d, d, rng);
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random pure state, uniform on the unit sphere of `C^d`.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> PureState {
    let v = DVector::from_fn(d, |_, _| complex_gaussian(rng));
    PureState::normalized(v).expect("gaussian vector is non-zero")
}

pub fn random_pure_bipartite<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> PureState {
    random_pure(dim_a * dim_b, rng)
        .with_dims(dim_a, dim_b)
        .expect("dims match by construction")
}

/// Random mixed state `G G† / Tr[G G†]` with `G` a `d × rank` Ginibre matrix.
pub fn random_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(d, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::from_trusted(m.unscale(tr))
}

/// Full-rank random bipartite state.
pub fn random_bipartite<R: Rng + ?Sized>(dim_a: usize, dim_b: usize, rng: &mut R) -> BipartiteState {
    let d = dim_a * dim_b;
    BipartiteState::new(random_density(d, d, rng), dim_a, dim_b).expect("dims match by construction")
}

pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let z: f64 = rng.sample(StandardNormal);
        if let Ok(v) = BlochVector::normalize(x, y, z) {
            return v;
        }
    }
}

/// Random point of the probability simplex (flat Dirichlet).
pub fn random_probabilities<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().max(1e-300).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// A completely positive trace-preserving map in Kraus form.
#[derive(Clone, Debug)]
pub struct Channel {
    kraus: Vec<CMatrix>,
}

impl Channel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let d = kraus
            .first()
            .ok_or_else(|| Error::Contract("channel needs at least one Kraus operator".into()))?
            .ncols();
        let mut sum = CMatrix::zeros(d, d);
        for k in &kraus {
            if k.ncols() != d {
                return Err(Error::Dimension("Kraus operators disagree on input dimension".into()));
            }
            sum += k.adjoint() * k;
        }
        let defect = (sum - CMatrix::identity(d, d))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect > 1e-10 {
            return Err(Error::Contract(format!(
                "Kraus operators are not trace preserving (defect {defect:.3e})"
            )));
        }
        Ok(Self { kraus })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![CMatrix::identity(d, d)],
        }
    }

    /// Stinespring dilation of a random isometry `C^d → C^d ⊗ C^env`.
    pub fn random<R: Rng + ?Sized>(d: usize, env: usize, rng: &mut R) -> Self {
        let u = haar_random_unitary(d * env, rng);
        let kraus = (0..env)
            .map(|k| CMatrix::from_fn(d, d, |i, j| u[(i * env + k, j)]))
            .collect();
        Self { kraus }
    }

    pub fn input_dim(&self) -> usize {
        self.kraus[0].ncols()
    }

    pub fn output_dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// `(id_A ⊗ Φ_B)[ρ]`.
    pub fn apply_on_b(&self, state: &BipartiteState) -> Result<BipartiteState> {
        if state.dim_b() != self.input_dim() {
            return Err(Error::Dimension("channel input does not match subsystem B".into()));
        }
        let id_a = CMatrix::identity(state.dim_a(), state.dim_a());
        let d_out = state.dim_a() * self.output_dim();
        let mut out = CMatrix::zeros(d_out, d_out);
        for k in &self.kraus {
            let kk = kron(&id_a, k);
            out += &kk * state.matrix() * kk.adjoint();
        }
        BipartiteState::new(DensityMatrix::from_trusted(out), state.dim_a(), self.output_dim())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;

    #[test]
    fn haar_unitaries_are_unitary() {
        let mut rng = rng_from_seed(11);
        for d in 1..=5 {
            for _ in 0..20 {
                let u = haar_random_unitary(d, &mut rng);
                assert!(unitarity_defect(&u) < 1e-10);
            }
        }
    }

    #[test]
    fn haar_dim_one_is_a_phase() {
        let mut rng = rng_from_seed(3);
        let u = haar_random_unitary(1, &mut rng);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn haar_is_reproducible() {
        let a = haar_random_unitary(2, &mut rng_from_seed(42));
        let b = haar_random_unitary(2, &mut rng_from_seed(42));
        assert_eq!(a, b);
    }

    #[test]
    fn haar_columns_have_unit_norm() {
        let mut rng = rng_from_seed(5);
        for _ in 0..100 {
            let u = haar_random_unitary(3, &mut rng);
            for col in u.column_iter() {
                assert!((col.norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn random_channels_are_trace_preserving() {
        let mut rng = rng_from_seed(9);
        let ch = Channel::random(3, 2, &mut rng);
        assert!(Channel::new(ch.kraus().to_vec()).is_ok());
        let st = random_bipartite(2, 3, &mut rng);
        let out = ch.apply_on_b(&st).unwrap();
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(DensityMatrix::new(out.matrix().clone()).is_ok());
    }

    #[test]
    fn streams_differ() {
        let a: f64 = rng_for(1, 0).gen();
        let b: f64 = rng_for(1, 1).gen();
        assert_ne!(a, b);
    }
}
