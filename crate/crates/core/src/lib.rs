//! Numerical construction, search, and certification of SIC-POVMs and
//! projective t-designs, together with the separable-state quantities
//! (symmetric-subspace states, partial transpose, birank, length bounds)
//! that hang off them.
//!
//! The crate is organized bottom-up:
//!
//! - [`tensor`]: dense complex linear algebra with explicit tensor-factor
//!   structure (states, operators, Kronecker products, symmetric-subspace
//!   projectors, partial transpose, tolerance-aware rank).
//! - [`metrics`]: certification of state sets — overlap conditions, frame
//!   potentials, design residuals, tightness bounds.
//! - [`wh`]: Weyl-Heisenberg displacement operators and fiducial orbits.
//! - [`search`]: seeded multi-restart projected gradient descent for SIC
//!   fiducials.
//! - [`sep`]: symmetric-subspace states, their partial-transpose closed
//!   form, biranks, and decomposition certificates for length bounds.
//! - [`fixtures`]: small exactly-known state sets used in tests and docs.

pub mod comb;
pub mod error;
pub mod fixtures;
pub mod metrics;
pub mod search;
pub mod sep;
pub mod tensor;
pub mod wh;

pub use error::{Error, Result};
pub use metrics::{
    certify, certify_with_cap, design_residual, design_residual_with_cap, fp_lower_bound,
    frame_potential, max_overlap_deviation, povm_completeness_check, sic_overlap_deviation,
    tight_bound, DesignReport, StateSet,
};
pub use search::{
    gradient, objective, search, SearchConfig, SearchResult, StepControl, CONVERGED_DEVIATION,
};
pub use sep::{
    birank, certificate_from_design, certificate_from_design_with_cap, length_lower_bound,
    rho2_gamma_closed_form, rho_t, rho_t_with_cap, Birank, DecompositionCertificate,
};
pub use tensor::{
    maximally_entangled_unnormalized, partial_transpose, rank_with_tolerance, symmetrizer,
    symmetrizer_with_cap, tensor_product, Operator, PureState, RawVector, Subsystem, Tolerance,
    DEFAULT_SIZE_CAP, STATE_NORM_TOL,
};
pub use wh::{displacement, orbit, Displacement};
