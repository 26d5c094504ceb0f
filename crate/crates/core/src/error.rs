use alloc::string::String;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("empty subset")]
    EmptySubset,
    #[error("subset needs at least {needed} concepts, got {got}")]
    SubsetTooSmall { needed: usize, got: usize },
    #[error("class too large for exhaustive γ̂: {size} concepts (cap {cap})")]
    ClassTooLarge { size: usize, cap: usize },
    #[error("invalid concept class: {0}")]
    InvalidClass(String),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("input {input} outside domain of size {domain}")]
    InputOutOfRange { input: usize, domain: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("cannot parse class spec: {0}")]
    SpecParse(String),
    #[error("empty input set")]
    EmptyInputSet,
    #[error("wire clash: {0}")]
    WireClash(String),
    #[error("register of {qubits} qubits exceeds cap {cap}")]
    RegisterTooLarge { qubits: u32, cap: u32 },
    #[error("state support leaks {leak:e} probability outside the search set")]
    SupportLeak { leak: f64 },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error("basis vectors are linearly dependent")]
    LinearlyDependent,
    #[error("target concept is not a member of the class")]
    TargetNotInClass,
    #[error("oracle inconsistent with class")]
    OracleInconsistent,
    #[error("concept view is not 1-sensitive at input {input}")]
    NotOneSensitive { input: usize },
    #[error("memo tables do not match partition: {0}")]
    MemoMismatch(String),
    #[error("no separating δ in (0, 1/2]")]
    NoSeparatingDelta,
    #[error("VC dimension insufficient: need {needed}, class has {found}")]
    VcDimensionInsufficient { needed: usize, found: usize },
    #[error("learner does not match class spec: {0}")]
    SpecMismatch(String),
}

pub type Result<T> = core::result::Result<T, Error>;
