use num_bigint::BigInt;

use crate::dyadic::ExceptionalClass;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("denominator {0} has a factor of 2; not a 2-adic integer")]
    EvenDenominator(BigInt),
    #[error("streamed point: carry propagation exceeded the digit budget")]
    StreamedUnderdetermined,
    #[error("operation needs unboundedly many digits; streamed points are rejected")]
    StreamedUnsupported,
    #[error("no digit repeat: the point is -1/3 or -2/3")]
    NoRepeat,
    #[error("construction requires a generic point; got class {0:?}")]
    ExceptionalPoint(ExceptionalClass),
    #[error("element {element} lies outside the level-{level} interval")]
    OutOfInterval { level: u32, element: BigInt },
    #[error("displacement {0} between orbit points is not an integer")]
    NonIntegerDisplacement(String),
    #[error("materialization would exceed the cap of {cap} elements (needs 2^{needed})")]
    CapExceeded { cap: u64, needed: u32 },
    #[error("permutation level {0} out of supported range 1..=126")]
    LevelOutOfRange(u32),
    #[error("cannot parse point literal {0:?}")]
    ParsePoint(String),
}
