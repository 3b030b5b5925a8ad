use crate::lattice::{Basis, PicClass};

/// Errors raised by the toolkit. Verification failures are reported in
/// report structs, not through this type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("basis mismatch: {left} vs {right}")]
    BasisMismatch { left: Basis, right: Basis },
    #[error("expected a class in basis {expected}, got basis {found}")]
    WrongBasis { expected: Basis, found: Basis },
    #[error("{class} is not a {expected}")]
    WrongKind { class: String, expected: String },
    #[error("{0} is not integral")]
    NotIntegral(String),
    #[error("malformed class literal: {0}")]
    Parse(String),
    #[error("orbit of {seed} exceeded the cap of {cap} classes")]
    OrbitCap { seed: String, cap: usize },
    #[error(
        "enumeration mismatch for {kind}: {} classes only in the orbit {:?}, {} only among the Diophantine solutions {:?}",
        only_in_orbit.len(), only_in_orbit, only_in_solutions.len(), only_in_solutions
    )]
    EnumerationMismatch {
        kind: String,
        only_in_orbit: Vec<PicClass>,
        only_in_solutions: Vec<PicClass>,
    },
    #[error("{0} is not ample")]
    NotAmple(String),
    #[error("{0} is not in the effective cone E")]
    NotInEffectiveCone(String),
    #[error("{point} lies on the wall with center {center}")]
    OnWall { point: String, center: String },
    #[error("the segment lies inside the wall with center {center}")]
    SegmentInWall { center: String },
    #[error("the two classes must be distinct")]
    EqualClasses,
    #[error("rank {found} where {expected} is required")]
    RankDeficient { expected: usize, found: usize },
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("matrix is not an element of the Weyl group: {0}")]
    NotInWeylGroup(String),
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
