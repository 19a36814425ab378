//! Numerical tolerances shared by every module.

/// Norm conservation: `|Σ|amp|² − 1|` after any operation.
pub const TOL_NORM: f64 = 1e-10;

/// State and unitary equality (fidelity distance, matrix entries).
pub const TOL_EQ: f64 = 1e-9;

/// Outcomes below this probability carry no residual state.
pub const TOL_PROB: f64 = 1e-12;

/// Smallest squared norm that may be renormalized.
pub const TOL_ZERO_NORM: f64 = 1e-12;

/// Accepted deviation of `U†U` from the identity.
pub const TOL_UNITARY: f64 = 1e-9;

/// Relative tolerance for `M†M ∝ I` and for vanishing swap coefficients.
pub const TOL_REL: f64 = 1e-9;
