//! Exact state-vector simulation of teleportation and entanglement swapping
//! through non-maximally entangled two-qubit resources measured in a
//! matching entangled basis.
//!
//! The crate is organized bottom-up:
//!
//! - [`qcore`]: labelled pure states, tensor products, local unitaries,
//!   reduced density matrices, Schmidt form, entropy and fidelity
//! - [`ebasis`]: the `(ℓ, p)` family of entangled bases and resource states
//! - [`measure`]: projective pair measurements, exhaustive and seeded
//! - [`teleport`]: transfer matrices, faithfulness, corrections and regimes
//! - [`swap`]: entanglement swapping and its reliability analysis

pub mod ebasis;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod qcore;
pub mod swap;
pub mod teleport;
pub mod text;
pub mod tol;

pub use ebasis::{
    basis_entropy, expand_computational, general_basis, resource_state, BasisLabel, BasisParams,
    Computational, EntangledBasis,
};
pub use error::{Error, Result};
pub use linalg::{Complex, Mat2};
pub use measure::{project_all, sample, MeasurementOutcome};
pub use qcore::{
    apply_unitary, entropy, fidelity, make_state, reduced_density, schmidt, tensor, DensityMatrix,
    PureState, SchmidtForm,
};
pub use swap::{classify_swap, swap_run, SwapOutcome, SwapParams, SwapRegime, SwapReport};
pub use teleport::{
    classify, correction_unitary, is_faithful, run, transfer_matrices, Mode, OutcomeRecord,
    ProtocolParams, Regime, RegimeReport, Repetitions, RunReport, TransferMatrix,
};
pub use text::{format_complex, parse_complex};
