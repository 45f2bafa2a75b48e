//! States and observables in the van Hove energy basis.
//!
//! A kernel splits into a *singular* part `rho(omega)_{mm'}` living on the
//! energy grid (one complex block per grid point) and a *regular* part
//! `rho(omega, omega')_{mm'}` on the grid square. The split is structural:
//! the delta factor of the singular term is never sampled, the two arrays
//! are carried separately through every operation.

mod evolve;
mod kernel;
mod pointer;

pub use evolve::{
    decay_curve, expectation_at_time, oscillatory_t_max, weak_limit, DecayCurve, DecayPoint,
    ExpectationEvaluator,
};
pub use kernel::{
    validate_state, ConstraintViolation, SpectralError, SpectralKernel, StateConstraint,
    ValidationReport, VanHoveObservable, VanHoveState,
};
pub use pointer::{apply_pointer_basis, pointer_basis, PointerBasisResult};

/// Tolerance constants shared by the kernel constraints (see `validate_state`).
pub mod tol {
    /// Hermiticity defect allowed before Eq-style hermiticity is violated.
    pub const HERMITICITY: f64 = 1e-10;
    /// Slack on the nonnegativity of the singular diagonal.
    pub const POSITIVITY: f64 = 1e-10;
    /// Distance from 1 allowed for the trace pairing with the identity.
    pub const NORMALIZATION: f64 = 1e-10;
    /// Asymmetry beyond which a per-energy block is rejected as non-hermitian.
    pub const BLOCK_HERMITICITY: f64 = 1e-8;
    /// Imaginary residue allowed on expectation values before erroring.
    pub const IMAG_RESIDUE: f64 = 1e-8;
}
