//! Bounds, volumes and sampling for the set of natural frequencies at which
//! the all-to-all Kuramoto model
//!
//! ```text
//! dθ_i/dt = ω_i + Σ_j sin(θ_j − θ_i)
//! ```
//!
//! has a stable phase-locked state.
//!
//! * [`subspace`]: mean-zero vectors, projection and an orthonormal basis.
//! * [`points`]: boundary point families and the coupling constants `τ`.
//! * [`norms`] and [`polytope`]: gauges of the inscribed and circumscribed
//!   polytopes.
//! * [`membership`]: polytope and hull membership, the order-parameter
//!   locking test, and configuration stability.
//! * [`sampler`]: weighted Monte Carlo volumes.
//! * [`volumes`]: exact volumes and permutahedra.
//! * [`evs`]: extreme-value scaling and the synchronization transition.

pub mod error;
pub mod evs;
pub mod io;
pub mod lp;
pub mod membership;
pub mod norms;
pub mod points;
pub mod polytope;
pub mod rng;
pub mod sampler;
pub mod stats;
pub mod subspace;
pub mod volumes;

pub use error::{Error, Result};
pub use evs::{
    mmc_check, phase_transition_experiment, scaling_exponential, scaling_for, scaling_gaussian, scaling_generic,
    scaling_two_sided_exponential, FrequencyDistribution, ScalingSequence, TransitionCurve,
};
pub use membership::{
    eig_stability_oracle, hull_membership, in_polytope, jacobian, order_param_locking_test, rado_membership,
    stability_check, HullCertificate, HullOracle, JacobianMatrix, StabilityReport, Verdict,
};
pub use norms::{circ_norm_family, circ_norm_generic, greedy_l1_decompose, norm_for, spread, NormValue};
pub use points::{
    cs_points, db_points, frequency_from_configuration, tau, tau_general, CouplingConstant, VertexFamily,
};
pub use polytope::{PolytopeKind, PolytopeSpec};
pub use sampler::{
    estimate_regions, estimate_true_volume, poke_estimate, weight_tail_check, PokeSampler, Region, VolumeEstimate,
};
pub use subspace::{mean_zero_basis, project_mean_zero, FrequencyVector, MeanZeroBasis, PhaseConfiguration};
pub use volumes::{descent_count, exact_volume, postnikov_volume, unit_cs_volume_closed_form};
