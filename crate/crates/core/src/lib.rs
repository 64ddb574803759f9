//! Construction and numerical auditing of entanglement witnesses.
//!
//! The crate covers, for small multipartite systems (total dimension in the
//! tens):
//!
//! - tensor-structured complex Hermitian operator algebra: partial
//!   transpose, eigendecomposition, kernel extraction, subspace
//!   intersection, Schmidt coefficients ([`operator`], [`space`]);
//! - constructors for a zoo of reference states: edge-state families on
//!   2x4 and 2x2x2, a two-qutrit bound-entangled family, isotropic states,
//!   pure bipartite states ([`states`]);
//! - witness operators built from negative partial-transpose eigenvectors,
//!   kernel projectors with a subtracted offset, and Schmidt-class
//!   witnesses, with evaluation and a product-state validation audit
//!   ([`witness`]);
//! - multi-start alternating-eigenvector minimization over pure product
//!   vectors, ratio minimization with a denominator floor, and a
//!   brute-force grid oracle ([`productopt`]);
//! - common-witness searches for pairs of states and lambda-segment scans
//!   with NPT/PPT classification ([`common`]);
//! - a plain-text matrix exchange format ([`textmat`]).
//!
//! All operations are pure functions of immutable inputs and safe to call
//! concurrently. Multi-start searches derive one RNG stream per restart
//! from (seed, index), so results are reproducible bit for bit regardless
//! of the parallel schedule.

pub mod common;
pub mod error;
pub mod operator;
pub mod productopt;
pub mod space;
pub mod states;
pub mod textmat;
pub mod witness;

pub use common::{
    common_edge_witness, common_npt_witness, common_schmidt_witness, decomposability_advice,
    lambda_scan, CommonMethod, CommonWitnessResult, DecomposabilityAdvice, OffsetMode, PtTag,
    ScanReport,
};
pub use error::{Error, Result};
pub use operator::{
    schmidt_coefficients, schmidt_rank, subspace_intersection, DensityState, Spectrum, Subspace,
    TensorOperator,
};
pub use productopt::{
    alternating_descent, grid_min_expectation, grid_min_ratio, grid_resolution_bound,
    min_product_expectation, min_ratio_product, product_expectation, OptConfig, OptResult,
    ProductVector,
};
pub use space::{basis_ket, product_ket, Ket, TensorSpace};
pub use states::{
    beta_literal_pair, convex_mix, delta_tri, horodecki_alpha, isotropic, max_entangled,
    mix_pair, pure_bipartite, tau, StateFamily,
};
pub use witness::{
    edge_witness, evaluate, realignment_diagnostic, schmidt_witness, validate_operator,
    validate_witness, w1_witness, witness_from_npt_eigvec, Decomposability, ValidationReport,
    Witness, WitnessKind,
};
