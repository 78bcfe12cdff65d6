//! Partial sums of the Tsallis entropy, classical and quantum, together with
//! the Ky Fan norms, partial fidelities and Fannes-type continuity bounds
//! that control them.
//!
//! * [`entropy`]: the α-logarithm, `η_α` and friends.
//! * [`classical`]: probability vectors, `G_(k)` and `H_α^(k)`.
//! * [`linalg`] / [`quantum`]: density operators, spectra, Ky Fan norms,
//!   `S_α^(k)`, partial traces, POVMs and partial fidelities.
//! * [`bounds`]: the continuity bounds, their checks and the stability
//!   function `δ(ξ)`.
//! * [`search`]: adversarial and maximization searches.
//! * [`sampling`]: seeded instance generators.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod classical;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod quantum;
pub mod sampling;
pub mod search;

pub use bounds::{
    check_classical, check_fidelity_variant, check_quantum, f_diff, fannes_bound, stability_delta,
    stability_inverse, BoundValue, InequalityCheck, Regime, Verdict, CHECK_TOL,
};
pub use classical::{
    gauge_k, instability_demo, kolmogorov, marginal, max_partial_bounds, partial_distance,
    partial_sum, Axis, JointDistribution, ProbVector,
};
pub use entropy::{binary_entropy, eta, eta_argmax, g_bound, q_log, Alpha, LIMIT_SWITCH};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
pub use num_complex::Complex64;
pub use quantum::{
    density_from_ensemble, eigenvalues_desc, entangled_pair, ky_fan_distance, ky_fan_norm,
    matrix_sqrt, partial_fidelity, partial_trace, povm_joint_probs, quantum_partial_sum,
    singular_values_desc, tens_preconditions, tensor, DensityOperator, PureEnsemble, RankOnePovm,
    Subsystem,
};
pub use search::{adversarial_search, maximize_partial_sum, AdversarialResult};
