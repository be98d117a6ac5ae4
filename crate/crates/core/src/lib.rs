//! Discriminating strength of bipartite quantum states.
//!
//! The crate computes the quantum Chernoff overlap, Helstrom error, fidelity,
//! skew information, local quantum uncertainty and the discriminating
//! strength (DS) of finite-dimensional bipartite states, along with the
//! separable state families and numerical experiments built on them.
//!
//! ```
//! use dstrength::measures::ds_qubit_qudit;
//! use dstrength::states::b92_state;
//!
//! let ds = ds_qubit_qudit(&b92_state(), std::f64::consts::FRAC_PI_2).unwrap();
//! assert!((ds.value - 0.5).abs() < 1e-12);
//! ```

pub mod discrimination;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod optim;
pub mod random;
pub mod states;
pub mod types;

pub use error::{Error, Result};
pub use types::{BipartiteState, BlochVector, DensityMatrix, LocalHamiltonian, PureState, SchmidtCoefficients, Spectrum};
