//! Centralized numerical tolerances.
//!
//! Every threshold used for validation and for property checks lives here so
//! that the same numbers apply across modules and tests.

/// Max absolute entry deviation allowed when checking `M = M†`.
pub const HERMITICITY: f64 = 1e-12;

/// Allowed deviation of `Tr ρ` from 1 for a density matrix.
pub const UNIT_TRACE: f64 = 1e-12;

/// Smallest eigenvalue a density matrix may have (numerical PSD slack).
pub const PSD_SLACK: f64 = 1e-10;

/// Hermiticity gate on inputs to the eigensolver and matrix square root.
pub const EIG_INPUT: f64 = 1e-10;

/// Max-entry residual of `U diag(λ) U† − H` after eigendecomposition.
pub const EIG_RECONSTRUCT: f64 = 1e-9;

/// Max-entry residual of `(√H)² − H`.
pub const SQRT_RECONSTRUCT: f64 = 1e-8;

/// Projector idempotence check `M² = M`.
pub const PROJECTOR: f64 = 1e-12;

/// Agreement between the 16×16 operator path and the purity closed forms.
pub const DUAL_PATH: f64 = 1e-10;

/// Slack granted when asserting `lower ≤ C ≤ upper` on random states.
pub const BOUND_ORDER_SLACK: f64 = 1e-9;

/// `|bound − C|` on random pure states, where both bounds collapse to C.
pub const PURE_COLLAPSE: f64 = 1e-8;

/// Entrywise tolerance for Kronecker-product associativity.
pub const KRON_ASSOC: f64 = 1e-13;

/// Trace / Frobenius-norm preservation under subsystem permutation.
pub const PERMUTATION_INVARIANT: f64 = 1e-12;

/// Composition law `phase_damp(phase_damp(ρ,d₁),d₂) = phase_damp(ρ,d₁d₂)`.
pub const CHANNEL_SEMIGROUP: f64 = 1e-13;

/// Closed-form families (dephased singlet, Werner) against computed values.
pub const CLOSED_FORM: f64 = 1e-10;

/// Exact-input recovery: noiseless tomography and exact-rate estimation.
pub const EXACT_RECOVERY: f64 = 1e-10;

/// Eigenvalues of unit-scale Hermitian products below this are numerical
/// zeros and are truncated before square roots are taken. Without the
/// truncation, rounding noise of order 1e-15 turns into ~3e-8 after the
/// square root and dominates spectra that are exactly rank-deficient.
pub const SPECTRAL_NOISE_FLOOR: f64 = 1e-13;

/// How far `Tr H` may sit from 1 before density projection refuses the input.
pub const TRACE_SANITY: f64 = 0.5;

/// Band outside `[−ε, 1+ε]` at which a corrected trace estimate is flagged.
pub const CORRECTED_TRACE_EPS: f64 = 0.05;
