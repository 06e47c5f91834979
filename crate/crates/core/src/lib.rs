//! Exact simulator and structural analyzer for a K-spin register dephasing
//! in an N-spin environment.
//!
//! The interaction couples register spin `i` to environment spin `j` with
//! strength `g_ij`; the K×N matrix of couplings fixes everything else in the
//! model. Couplings are exact rationals, so the structural questions (which
//! basis-state pairs keep their coherence, how the register space splits
//! into decoherence-free subspaces) are decided by exact arithmetic, never
//! by a float tolerance. Dynamics is closed form: decoherence rates and
//! density-matrix propagation evaluate phases from exact energy differences
//! converted to `f64` at the last step.
//!
//! Modules:
//! - [`model`]: rationals, the interaction matrix, basis-index conventions,
//!   state containers.
//! - [`spectrum`]: eigenvalues, row sums, and the signature vectors that
//!   decide coherence preservation.
//! - [`evolution`]: branch states, decoherence rates r_kk'(t), reduced
//!   density-matrix propagation, CSV emission.
//! - [`dfs`]: the signature partition, the two-bit pair cases with their row
//!   symmetries of G, conjugate subspaces, and the structural report.

pub mod dfs;
pub mod error;
pub mod evolution;
pub mod model;
pub mod spectrum;

pub use error::{Error, Result};
pub use model::{BasisIndex, EnvState, InteractionMatrix, Rational, RegisterDensity};
pub use num_complex::Complex64;
pub use spectrum::Signature;
