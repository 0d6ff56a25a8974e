//! # entmono-core
//!
//! Entanglement monotones induced by pure-state LOCC conversion.
//!
//! For a pure-state monotone `F` (a symmetric concave function `f` of the Schmidt
//! probability vector), the induced mixed-state quantity is the least value of `F` over
//! pure states that can be converted into `rho` by LOCC. It suffices to search states
//! `|phi>` whose Schmidt vector equals the weighted average `sum_i p_i lambda(psi_i)` over
//! some decomposition `{p_i, psi_i}` of `rho`, so the quantity becomes
//!
//! ```text
//! E_F(rho) = min over decompositions of f( sum_i p_i lambda(psi_i) )
//! ```
//!
//! while the convex roof minimises `sum_i p_i f(lambda(psi_i))` over the same set.
//! Concavity of `f` gives `E_F >= roof` ensemble by ensemble.
//!
//! ## Modules
//!
//! - [`states`]: pure and mixed bipartite states, Schmidt and spectral decompositions,
//!   majorization, seeded random fixtures.
//! - [`monotones`]: built-in pure-state monotones (`entropy`, `concurrence`, `avg_e`) and a
//!   sampled Schur-concavity check.
//! - [`decompositions`]: HJW ensembles from isometries and average Schmidt vectors.
//! - [`optimizer`]: random-restart coordinate search over isometries for both objectives.
//! - [`oracles`]: Wootters concurrence, the closed-form `3x3` family, sampling upper bound.
//! - [`locc`]: one-sided Kraus channels, conversion criteria, monotonicity harness.
//!
//! Conventions: Schmidt vectors hold probabilities (squared Schmidt coefficients), sorted
//! descending. Logarithms are natural. Basis index of `|i j>` is `i * d_b + j`.

#![forbid(unsafe_code)]

pub mod decompositions;
pub mod error;
pub mod locc;
pub mod monotones;
pub mod optimizer;
pub mod oracles;
pub mod states;

mod linalg;

pub use decompositions::{
    average_schmidt_vector, ensemble_reconstructs, hjw_ensemble, Ensemble, Isometry,
};
pub use error::{Error, Result};
pub use locc::{
    apply_channel_branches, nielsen_convertible, pure_to_ensemble_convertible,
    random_local_channel, strong_monotonicity_check, Branch, LocalChannel, MonotonicityReport,
    Side,
};
pub use monotones::{check_schur_concavity, eval_pure, MonotoneSpec, SchurReport};
pub use optimizer::{
    compare, minimize_convex_roof, minimize_ef, GapReport, Mode, SolverConfig, SolverResult,
};
pub use oracles::{
    brute_force_ef, theorem4_state, theorem4_value, wootters_concurrence, Theorem4Params,
};
pub use states::{
    eigendecompose, majorizes, random_density, random_local_unitary, random_pure,
    schmidt_decompose, DensityMatrix, Dims, LocalUnitary, PureState, SchmidtVector, SpectralData,
};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
