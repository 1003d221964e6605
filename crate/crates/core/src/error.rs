//! Error types for every module of the crate.

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("exponent k must be positive")]
    ZeroExponent,
    #[error("{p}^{k} exceeds the configured bound {bound}")]
    BoundExceeded { p: u32, k: u32, bound: u32 },
    #[error("{0} is not an odd prime power")]
    NotPrimePower(u32),
    #[error("zero has no square class")]
    ZeroInput,
    #[error("not a valid set of representatives for F_q*/{{±1}} containing 1")]
    InvalidRepresentativeSet,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("matrix does not have determinant 1")]
    BadDeterminant,
    #[error("elements belong to different fields")]
    FieldMismatch,
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycloError {
    #[error("division by zero in a cyclotomic field")]
    DivisionByZero,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TableError {
    #[error("character tables are built for q >= 5, got q = {0}")]
    UnsupportedQ(u32),
    #[error("subgroup data is not closed under multiplication")]
    NotSubgroup,
    #[error("character values do not match the subgroup size")]
    LengthMismatch,
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CmTypeError {
    #[error("CM type has {found} slots, expected q + 1 = {expected}")]
    WrongLength { expected: usize, found: usize },
    #[error("invalid CM type bit string: {0}")]
    BadBitString(String),
    #[error("signature {epsilon} out of range 0..={max}")]
    SignatureOutOfRange { epsilon: u32, max: u32 },
    #[error("exhaustive enumeration is limited to {max} slots, got {slots}")]
    TooManySlots { slots: usize, max: usize },
    #[error("Burnside and exhaustive orbit counts disagree for q = {q}, epsilon = {epsilon}")]
    CensusMismatch { q: u32, epsilon: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ColmezError {
    #[error("verification failed for CM type {cm_type} at class {class}, rho = {rho}: got {got}, expected {expected}")]
    VerificationFailure { cm_type: String, class: String, rho: u8, got: String, expected: String },
    #[error("identity {name} failed at class {class}")]
    IdentityFailure { name: String, class: String },
    #[error("exhaustive sweep over 2^{0} CM types is too large")]
    SweepTooLarge(u32),
    #[error(transparent)]
    CmType(#[from] CmTypeError),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeightError {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("character of discriminant {0} is even")]
    EvenCharacter(i64),
    #[error("signature {epsilon} out of range 0..={max}")]
    SignatureOutOfRange { epsilon: u32, max: u32 },
    #[error("average height check failed: {0}")]
    ConsistencyFailure(String),
}
