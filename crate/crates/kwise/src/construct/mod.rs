//! Coding-theoretic constructions of low-entropy d-wise independent sample
//! spaces: Hadamard matrices for d=2, the extended Hamming matrix for d=3,
//! BCH dual codes for general d, and the parity lifting that maps a d-wise
//! independent space to many pairwise independent bits.

mod bits;
mod field;
mod hadamard;
mod spaces;

pub use bits::BitMatrix;
pub use field::{FieldGF2m, MAX_DEGREE, MIN_DEGREE};
pub use hadamard::{paley_hadamard, sylvester_hadamard, HadamardMatrix, MAX_HADAMARD_ORDER};
pub use spaces::{
    bch_parity_check, dwise_space_from_code, extend_for_odd_d, hamming_parity_check,
    pairwise_space_from_hadamard, threewise_matrix, threewise_space, xor_lift, MAX_SPACE_RANK,
};

use crate::space::SpaceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("extension degree {0} outside supported range 2..=16")]
    UnsupportedDegree(u32),
    #[error("polynomial {poly:#x} is not primitive for GF(2^{m})")]
    NotPrimitive { m: u32, poly: u32 },
    #[error("order {order} exceeds the desk-scale cap {cap}")]
    OrderCap { order: u64, cap: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not congruent to 3 mod 4")]
    NotThreeModFour(u64),
    #[error("entry dimensions do not match the stated order")]
    BadDimensions,
    #[error("matrix entries must be +1 or -1")]
    NotSignMatrix,
    #[error("rows are not pairwise orthogonal")]
    NotOrthogonal,
    #[error("Hadamard order must be at least 2 to define variables")]
    OrderTooSmall,
    #[error("designed distance 2*{t}+1 exceeds code length 2^{m}-1")]
    DesignedDistanceTooLarge { m: u32, t: u32 },
    #[error("matrix rank {found} below required {expected} (m too small relative to t)")]
    RankDeficient { expected: usize, found: usize },
    #[error("rank {rank} exceeds materialization cap {cap} (2^rank support points)")]
    RankCap { rank: usize, cap: usize },
    #[error("columns {0:?} are linearly dependent over GF(2)")]
    DependentColumns(Vec<usize>),
    #[error("independence order {d} out of range for {n} columns/variables")]
    OrderOutOfRange { d: usize, n: usize },
    #[error("construction requires binary variables, got alphabet size {k}")]
    NonBinarySpace { k: usize },
    #[error("malformed matrix text: {0}")]
    MatrixParse(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}
