//! Generalized oscillator algebras, phase operators, temporally stable
//! phase states, and mutually unbiased bases as explicit finite matrices.
//!
//! The crate realizes a one-parameter deformation of the harmonic
//! oscillator algebra, [a-, a+] = I + 2 kappa N, whose representation space
//! is finite (dimension d = 1 - 1/kappa) for kappa < 0 and infinite for
//! kappa >= 0, together with its s-level truncation in the style of the
//! Pegg-Barnett construction. On top of the representations it builds:
//!
//! - unitary phase operators and their eigenstate families, all temporally
//!   stable under evolution generated by the spectrum ([`phase`]);
//! - mutually unbiased bases in prime dimension obtained by quantizing the
//!   phase parameter, with overlaps controlled by generalized quadratic
//!   Gauss sums ([`mub`]);
//! - spectral maps for three exactly solvable systems -- harmonic
//!   oscillator, Poschl-Teller, Morse -- onto the algebra ([`potentials`]).
//!
//! All identities implemented here are exact up to double rounding; the
//! [`verify`] module runs the whole invariant suite over a built-in grid.

pub mod algebra;
pub mod error;
pub mod kappa;
pub mod linalg;
pub mod mub;
pub mod phase;
pub mod potentials;
pub mod tol;
pub mod verify;

pub use algebra::{
    commutator_residual, degeneracy_report, nilpotency_check, structure_value, CommutatorReport,
    DegeneracyReport, RepKind, Representation, StructureFunction,
};
pub use error::{Error, Result};
pub use kappa::{Dimension, KappaParam};
pub use mub::{
    build_mub_set, gauss_sum, mub_state_finite, mub_state_truncated, overlap_via_gauss_finite,
    overlap_via_gauss_truncated, pseudo_commutation_check, quantize_phi_finite,
    quantize_phi_truncated, GaussSumParams, MubBasis, MubRoute, MubSet,
};
pub use phase::{
    build_vs_us, build_weights, evolve, overlap, phase_operator, phase_operator_infinite_cutoff,
    phase_states, theta_phase_state, vs_phase_states, PhaseOperator, PhaseOperatorKind,
    PhaseState, StateLabel, WeightTable, WeylCandidatePair,
};
pub use potentials::{
    physical_phase_states, to_spectrum_params, truncation_order, weight_table, PhysicalStates,
    PotentialSpec, SpectrumParams,
};
pub use tol::{Tolerances, COMPOSITE_TOL, MATRIX_TOL};
