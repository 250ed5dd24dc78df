//! Gauss diagrams of long virtual knots: arrows between points of the line,
//! the text code, canonical form, RII and virtualization moves, writhe,
//! formal sums and the expansion of dashed/singular marks.

mod diagram;
mod formal;
pub mod random;

pub use diagram::{Arrow, Direction, GaussDiagram, Mark, R2Move, Strands};
pub(crate) use diagram::Endpoint;
pub use formal::FormalSum;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GaussError {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("index {index} appears {count} times (expected exactly 2)")]
    IndexCount { index: usize, count: usize },
    #[error("index {index} appears twice as {kind}")]
    DuplicateKind { index: usize, kind: char },
    #[error("index {index} has inconsistent sign or mark between its two tokens")]
    InconsistentToken { index: usize },
    #[error("arrow index {index} out of range for a diagram with {len} arrows")]
    ArrowOutOfRange { index: usize, len: usize },
    #[error("slot {slot} out of range (gaps are 0..={max})")]
    InvalidSlot { slot: usize, max: usize },
    #[error("endpoint positions do not form a perfect matching of 0..{0}")]
    BadPositions(usize),
    #[error("operation needs a classical diagram, found a marked arrow")]
    MarkedDiagram,
    #[error("arrows {0} and {1} do not form a cancelling RII pair")]
    NotR2Pair(usize, usize),
}
