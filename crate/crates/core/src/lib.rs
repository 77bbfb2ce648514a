//! Partial-MDS and sector-disk array codes whose local or global codes are
//! bandwidth-optimal regenerating codes, built on exact finite-field linear
//! algebra, together with exhaustive property certifiers, a repair-bandwidth
//! accounting harness, and closed-form field-size calculators.

pub mod code;
pub mod gabidulin;
pub mod gf;
pub mod global;
pub mod matrix;
pub mod mds;
pub mod pmds2;
pub mod registry;
pub mod sizes;
pub mod universal;
mod util;
pub mod verify;
pub mod yebarg;

pub use code::{ArrayCode, ArrayCodeword, PmdsParams, RepairTranscript};
pub use gf::{Field, FieldDescriptor, FieldElement, FiniteField};
pub use matrix::CodeMatrix;
pub use mds::LinearCode;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("field has no designated subfield")]
    NoSubfieldDesignated,
    #[error("modulus polynomial is not irreducible over GF({p})")]
    NotIrreducible { p: u64 },
    #[error("invalid field construction: {0}")]
    InvalidField(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix entries are not in the designated subfield")]
    EntriesNotInSubfield,
    #[error("duplicate locator")]
    DuplicateLocator,
    #[error("locators are linearly dependent over the designated subfield")]
    DependentLocators,
    #[error("code length exceeds the extension degree over the designated subfield")]
    LengthExceedsDegree,
    #[error("word is not a codeword")]
    WordNotInCode,
    #[error("erasure pattern is unrecoverable{}", row.map(|a| format!(" at row {a}")).unwrap_or_default())]
    Unrecoverable { row: Option<usize> },
    #[error("row index out of range")]
    RowOutOfRange,
    #[error("field too small: {0}")]
    FieldTooSmall(String),
    #[error("construction requires characteristic 2")]
    NotCharTwo,
    #[error("element order too small: {0}")]
    OrderTooSmall(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("transform matrix is singular")]
    SingularTransform,
    #[error("duplicate entry in the beta table")]
    DuplicateBeta,
    #[error("expected {expected} helpers, got {got}")]
    WrongHelperCount { expected: usize, got: usize },
    #[error("helper set contains the failed node")]
    HelperContainsFailed,
    #[error("invalid helper set: {0}")]
    InvalidHelpers(String),
    #[error("local code is not MDS")]
    LocalNotMds,
    #[error("search exhausted without finding a valid candidate: {0}")]
    SearchExhausted(String),
    #[error("row {0} of the locator matrix is linearly dependent over the subfield")]
    DependentRow(usize),
    #[error("grouping construction failed: {0}")]
    GroupingFailed(String),
    #[error("result too large to materialize: {0}")]
    TooLarge(String),
    #[error("not defined for this construction: {0}")]
    InvalidForConstruction(String),
    #[error("verification budget exhausted: {0}")]
    BudgetExceeded(String),
    #[error("unknown construction '{0}'")]
    UnknownConstruction(String),
    #[error("bad descriptor: {0}")]
    BadDescriptor(String),
    #[error("serialization error: {0}")]
    Serde(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
