//! Unitary reflection groups and reflection cosets: specifications, full
//! enumeration, reflections, invariant degrees and stabilizers.

mod degrees;
mod element;
pub mod named;
mod spec;
mod stabilizer;
mod table;

pub use degrees::{a_zeta, eigenvalue_exponents, fixed_dim, molien_degrees, molien_series, reflections, Degrees};
pub use element::{Element, MonomialForm};
pub use spec::{CosetTwist, GroupKind, GroupSpec, RootSpec};
pub use stabilizer::{pointwise_stabilizer, setwise_and_pointwise_on, stabilizes, Parabolic, SetwiseStabilizer};
pub use table::{pack, unpack, Code, GroupTable, ModpView, DEFAULT_ELEMENT_CAP, MAX_ORBIT, MAX_RANK};

use crate::linalg::LinalgError;

#[derive(Debug, thiserror::Error)]
pub enum GroupError {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),
    #[error("spec parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unknown group name {0:?}")]
    UnknownGroup(String),
    #[error("{what} exceed the cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },
    #[error("orbit of the basis exceeds {0} vectors; the group is infinite or too large")]
    NotFinite(usize),
    #[error("twist does not normalize the group (generator {0})")]
    TwistNotNormalizing(usize),
    #[error("coset factors are required for a twisted group")]
    MissingFactors,
    #[error("eigenvalues are not roots of unity of order dividing {0}")]
    EigenvaluesOutOfRange(u32),
    #[error("Molien series mismatch: {0}")]
    MolienMismatch(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Convenience: enumerate a spec with the default cap.
pub fn enumerate(spec: &GroupSpec) -> Result<GroupTable, GroupError> {
    GroupTable::enumerate(spec)
}
