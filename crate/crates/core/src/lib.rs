//! Exact diagonalization and entanglement analysis for the spin-1/2 two-leg
//! ladder with four-spin ring exchange.
//!
//! The Hamiltonian is applied matrix-free on a fixed-magnetization sector of
//! bit-encoded configurations. Ground states come from a restarted Lanczos
//! solver, and the [`entanglement`] module turns them into reduced density
//! matrices, von Neumann entropies and Wootters concurrences. Closed forms for
//! the ferromagnetic Dicke state live in [`fm`], and [`sweep`] drives scans
//! over the coupling angle.
//!
//! ```
//! use ringladder::prelude::*;
//!
//! let spec = LadderSpec::periodic(4).unwrap();
//! let basis = std::sync::Arc::new(SectorBasis::build(spec.sites(), 0).unwrap());
//! let ham = LadderHamiltonian::new(spec, Couplings::from_theta(0.0), basis).unwrap();
//! let result = lowest_eigenpairs(&ham, &SolverConfig::default()).unwrap();
//! assert!(result.energies[0] < 0.0);
//! ```

pub mod basis;
pub mod eigensolver;
pub mod entanglement;
mod error;
pub mod fm;
pub mod hamiltonian;
pub mod lattice;
mod linalg;
pub mod sweep;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::basis::{SectorBasis, SpinConfig};
    pub use crate::eigensolver::{dense_oracle, lowest_eigenpairs, EigenResult, LinearOperator, SolverConfig};
    pub use crate::entanglement::{
        concurrence, reduced_density_matrix, rung_correlator, rung_entropy_from_z, rung_rdm_params,
        von_neumann_entropy, DensityMatrix, RungRdmParams,
    };
    pub use crate::fm::{fm_block_spectrum, fm_entropy, fm_entropy_asymptotic, fm_pair_concurrence, fm_state};
    pub use crate::hamiltonian::{LadderHamiltonian, StateVector};
    pub use crate::lattice::{Boundary, Couplings, LadderSpec, Plaquette};
    pub use crate::sweep::{run_sweep, solve_point, BlockFamily, BlockSpec, PairSelection, SweepConfig, SweepRecord};
    pub use crate::{Error, Result};
}
