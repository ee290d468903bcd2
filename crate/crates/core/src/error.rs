use alloc::string::String;

/// Errors raised by the kernel. Mathematical failures (a violated axiom, a
/// residual that does not vanish) are report content, not errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("nonlinear-combination: product of two polynomials with unknown coefficients")]
    NonlinearCombination,
    #[error("unit-substitution: cannot substitute a non-invertible value for `{var}` carrying negative exponents")]
    UnitSubstitution { var: String },
    #[error("negative exponent on `{var}`, which is not a unit indeterminate")]
    NegativeExponent { var: String },
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("not-a-subspace: the smaller span is not contained in the larger one")]
    NotASubspace,
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("invalid algebra spec: {0}")]
    InvalidSpec(String),
    #[error("invalid window {lo}..{hi}")]
    InvalidWindow { lo: i64, hi: i64 },
    #[error("window-underflow: no entry for {key}")]
    WindowUnderflow { key: String },
    #[error("window-too-small: window {lo}..{hi} leaves no usable interior")]
    WindowTooSmall { lo: i64, hi: i64 },
    #[error("missing action of {family} at algebra index {i} on module index {m}")]
    MissingAction { family: String, i: i64, m: i64 },
    #[error("pattern gap: 0/1 pattern undefined at index {0}")]
    PatternGap(i64),
    #[error("invalid pattern value {value} at index {index}: entries must be 0 or 1")]
    PatternValue { index: i64, value: i64 },
}

pub type Result<T> = core::result::Result<T, Error>;
