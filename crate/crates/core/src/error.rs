//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("tensor space needs non-empty dims with every factor >= 2, got {0:?}")]
    InvalidDims(Vec<usize>),

    #[error("subsystem index {index} out of range for {factors} factors")]
    SubsystemOutOfRange { index: usize, factors: usize },

    #[error("matrix is {rows}x{cols} but the space needs {total}x{total}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        total: usize,
    },

    #[error("not Hermitian: max asymmetry {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("trace {0} differs from 1 beyond tolerance")]
    NotUnitTrace(f64),

    #[error("not positive semidefinite: minimum eigenvalue {0:.6e}")]
    NotPsd(f64),

    #[error("tensor spaces differ: {0:?} vs {1:?}")]
    SpaceMismatch(Vec<usize>, Vec<usize>),

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("bipartite space required, got {0} factors")]
    NotBipartite(usize),

    #[error("coefficients not normalized: sum of squares is {0}")]
    NotNormalized(f64),

    #[error("weights must be nonnegative and sum to 1, got sum {0}")]
    BadWeights(f64),

    #[error("state is PPT: no negative partial-transpose eigenvector available")]
    NoNptEigenvector,

    #[error("operator has no negative eigenvalue, so it cannot be a witness")]
    NoNegativeEigenvalue,

    #[error("trace has imaginary residue {0:.3e} beyond tolerance")]
    NonRealTrace(f64),

    #[error("schmidt class must satisfy 2 <= class <= {m}, got {class}")]
    BadSchmidtClass { class: usize, m: usize },

    #[error("a mixed state needs a caller-supplied schmidt class: {0}")]
    MixedStateNeedsClass(String),

    #[error("ratio minimization infeasible: every sampled product state has denominator below {0:.1e}")]
    RatioInfeasible(f64),

    #[error("total dimension {total} exceeds the grid-oracle limit of {limit}")]
    GridTooLarge { total: usize, limit: usize },

    #[error("grid oracle needs at least 8 steps per angle, got {0}")]
    GridTooCoarse(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
