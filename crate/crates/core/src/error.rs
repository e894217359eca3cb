//! Error types. Validation-style operations return reports (see
//! [`crate::report`]) instead of failing; the enums here are for hard
//! contract violations: malformed inputs, mismatched truncations, exhausted
//! stage budgets and the like.

use thiserror::Error;

use crate::horn::HornDescriptor;

/// Errors from constructing or querying simplicial sets and maps.
#[derive(Debug, Error)]
pub enum SsetError {
    #[error("duplicate simplex token `{0}`")]
    DuplicateToken(String),
    #[error("unknown simplex token `{0}`")]
    UnknownToken(String),
    #[error("simplex `{token}`: expected {expected} faces, got {got}")]
    WrongFaceCount {
        token: String,
        expected: usize,
        got: usize,
    },
    #[error("simplex `{token}`: face {index} missing or out of range")]
    BadFace { token: String, index: usize },
    #[error("simplex `{token}`: degeneracy {index} missing")]
    MissingDegeneracy { token: String, index: usize },
    #[error("level {level} exceeds truncation {truncation}")]
    LevelOutOfRange { level: usize, truncation: usize },
    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),
    #[error("map components must cover level {level}: expected {expected}, got {got}")]
    BadComponent {
        level: usize,
        expected: usize,
        got: usize,
    },
    #[error("maps are not composable")]
    NotComposable,
    #[error("subset is not closed under face and degeneracy operators")]
    SubsetNotClosed,
    #[error("invalid horn: {0}")]
    InvalidHorn(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Errors from the finite-category layer.
#[derive(Debug, Error)]
pub enum CategoryError {
    #[error("morphism `{0}` has out-of-range endpoint")]
    BadEndpoint(String),
    #[error("identity of object `{0}` is not an endomorphism")]
    BadIdentity(String),
    #[error("composite of `{0}` and `{1}` is missing or ill-typed")]
    BadComposite(String, String),
    #[error("unit law fails for morphism `{0}`")]
    UnitLaw(String),
    #[error("associativity fails on ({0}, {1}, {2})")]
    Associativity(String, String, String),
    #[error("morphism `{0}` has no two-sided inverse but the category is flagged groupoid")]
    MissingInverse(String),
    #[error("functor is not structure-preserving: {0}")]
    BadFunctor(String),
    #[error(transparent)]
    Sset(#[from] SsetError),
}

/// Errors from the levelwise colimit engine.
#[derive(Debug, Error)]
pub enum ColimitError {
    #[error("diagram edge `{0}` refers to a missing node")]
    DanglingEdge(String),
    #[error("diagram nodes disagree on truncation")]
    MixedTruncation,
    #[error("duplicate node name `{0}`")]
    DuplicateNode(String),
    #[error("maps do not form a parallel pair")]
    NotParallel,
    #[error("pushout legs do not share a source")]
    NotASpan,
    #[error("chain link {0} is not levelwise injective")]
    NonInjectiveLink(usize),
    #[error("chain links are not composable at position {0}")]
    BrokenChain(usize),
    #[error("empty chain")]
    EmptyChain,
    #[error("no mediating map: cocone disagrees on a colimit class ({0})")]
    NoMediating(String),
    #[error(transparent)]
    Sset(#[from] SsetError),
}

/// Errors from the algebraic-complex layer.
#[derive(Debug, Error)]
pub enum AlgError {
    #[error("modes differ: {0:?} vs {1:?}")]
    ModeMismatch(crate::horn::Mode, crate::horn::Mode),
    #[error("complex is not total: missing filler for {0}")]
    NotTotal(HornDescriptor),
    #[error("distinguished fillers conflict on {0}")]
    FillerConflict(HornDescriptor),
    #[error("split coequalizer data invalid: {0}")]
    InvalidSplit(String),
    #[error("staged complex was not built from the given input")]
    WrongBase,
    #[error("corrupted staged input: {0}")]
    CorruptStaged(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
    #[error(transparent)]
    Sset(#[from] SsetError),
}

/// Errors from the staged free construction and its extensions.
#[derive(Debug, Error)]
pub enum FreeError {
    #[error("stage budget exhausted: no distinguished filler for image horn {0}")]
    BudgetExhausted(HornDescriptor),
    #[error("cell cap exceeded: {have} simplices > cap {cap}")]
    CellCapExceeded { have: usize, cap: usize },
    #[error("horn {0} is not admitted in {1:?} mode")]
    NotAdmitted(HornDescriptor, crate::horn::Mode),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Sset(#[from] SsetError),
}

/// Errors from reading and writing the JSON presentation formats.
#[derive(Debug, Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("unknown schema `{0}` (expected sset/v1, algsset/v1 or diagram/v1)")]
    UnknownSchema(String),
    #[error("schema violation at {context}: {message}")]
    Schema { context: String, message: String },
    #[error("file reference `{0}` could not be read: {1}")]
    FileRef(String, String),
    #[error("simplicial identities violated:\n{0}")]
    Invalid(crate::report::ValidationReport),
    #[error("filler table defects:\n{0}")]
    Defects(crate::report::AlgDefects),
    #[error(transparent)]
    Sset(#[from] SsetError),
    #[error(transparent)]
    Colimit(#[from] ColimitError),
}
