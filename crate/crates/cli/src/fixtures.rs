use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use clap::{Args, ValueEnum};

use dstrength::io::Metadata;
use dstrength::linalg::{c, CVector};
use dstrength::measures::rotate_local;
use dstrength::states::{b92_state, ew_gb92_state, gb92_state, qc_qubit_qubit, uniform_pqc, QcQubitParams};
use dstrength::{BipartiteState, LocalHamiltonian, PureState, Result, Spectrum};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Fixture {
    /// (|00⟩ + |11⟩)/√2.
    Bell,
    /// ½(|0⟩⟨0| ⊗ |0⟩⟨0| + |+⟩⟨+| ⊗ |1⟩⟨1|).
    B92,
    /// Equal-weight GB92 state on a qutrit B.
    EwGb92,
    /// Bell state after exp(−iλσ_z) on A (λ = π/2 by default).
    BellRotated,
    /// GB92 state with weights --p p0,p1,p2.
    Gb92,
    /// Qubit-qubit quantum-classical state (--p, --s0, --s1, --phi).
    Qc,
    /// Uniform pure quantum-classical state over --d directions.
    UniformPqc,
}

#[derive(Args, Clone, Debug)]
pub struct FixtureParams {
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,
    #[arg(long)]
    s0: Option<f64>,
    #[arg(long)]
    s1: Option<f64>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    /// Dimension of B for gb92 and uniform-pqc.
    #[arg(long)]
    dim_b: Option<usize>,
    #[arg(long)]
    lambda: Option<f64>,
}

fn bell() -> BipartiteState {
    let psi = PureState::bipartite(
        CVector::from_vec(vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(FRAC_1_SQRT_2, 0.0)]),
        2,
        2,
    )
    .expect("normalized");
    BipartiteState::from_pure(&psi).expect("bipartite")
}

fn meta(name: &str, description: String) -> Metadata {
    Metadata {
        name: Some(name.into()),
        description: Some(description),
    }
}

pub fn build(fixture: Fixture, p: &FixtureParams) -> Result<(BipartiteState, Metadata)> {
    Ok(match fixture {
        Fixture::Bell => (bell(), meta("bell", "(|00> + |11>)/sqrt(2)".into())),
        Fixture::B92 => (
            b92_state(),
            meta("b92", "(|0><0| x |0><0| + |+><+| x |1><1|)/2".into()),
        ),
        Fixture::EwGb92 => (
            ew_gb92_state(),
            meta("ew_gb92", "equal-weight |0>, |+>, |+i> flagged on a qutrit".into()),
        ),
        Fixture::BellRotated => {
            let lambda = p.lambda.unwrap_or(FRAC_PI_2);
            let h = LocalHamiltonian::diagonal(Spectrum::qubit(lambda)?);
            (
                rotate_local(&bell(), &h)?,
                meta("bell_rotated", format!("bell state after exp(-i {lambda} sigma_z) on A")),
            )
        }
        Fixture::Gb92 => {
            let t = 1.0 / 3.0;
            let w = p.p.clone().unwrap_or_else(|| vec![t, t, t]);
            let [p0, p1, p2] = <[f64; 3]>::try_from(w.as_slice()).map_err(|_| {
                dstrength::Error::Range(format!("gb92 needs three weights, got {}", w.len()))
            })?;
            let dim_b = p.dim_b.unwrap_or(3);
            (
                gb92_state(p0, p1, p2, dim_b)?,
                meta("gb92", format!("GB92 weights {p0}, {p1}, {p2} with dim_b = {dim_b}")),
            )
        }
        Fixture::Qc => {
            let d = QcQubitParams::b92();
            let weight = match p.p.as_deref() {
                None => d.p,
                Some([x]) => *x,
                Some(v) => {
                    return Err(dstrength::Error::Range(format!("qc needs one weight, got {}", v.len())))
                }
            };
            let params = QcQubitParams::new(
                weight,
                p.s0.unwrap_or(d.s0),
                p.s1.unwrap_or(d.s1),
                p.phi.unwrap_or(d.phi),
            )?;
            (
                qc_qubit_qubit(&params)?,
                meta(
                    "qc",
                    format!(
                        "quantum-classical qubit pair p = {}, s0 = {}, s1 = {}, phi = {}",
                        params.p, params.s0, params.s1, params.phi
                    ),
                ),
            )
        }
        Fixture::UniformPqc => {
            let d = p.d.unwrap_or(6);
            let dim_b = p.dim_b.unwrap_or(d);
            (
                uniform_pqc(d, dim_b)?,
                meta("uniform_pqc", format!("uniform pQC over {d} directions, dim_b = {dim_b}")),
            )
        }
    })
}
