use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown indeterminate `{0}`")]
    UnknownIndeterminate(String),
    #[error("no numeric value assigned to `{0}`")]
    MissingAssignment(String),
    #[error("no pairing declared between `{0}` and `{1}`")]
    UndeclaredPairing(String, String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("jet not present in context: {0}")]
    JetNotPresent(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("dimension {0} not supported here")]
    Dimension(usize),
    #[error("leading symbol is not a scalar multiple of |xi|^2")]
    NonScalarLeading,
    #[error("pole off +-i: {0}")]
    PoleOffAxis(String),
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("integrand not integrable: {0}")]
    NonIntegrable(String),
    #[error("xi'-odd term survived moment integration: {0}")]
    OddSurvivor(String),
    #[error("non-polynomial residue in xi: {0}")]
    NonPolynomial(String),
    #[error("second-jet indeterminate outside the pure-gravity block: {0}")]
    SecondJetResidual(String),
    #[error("density not expressible in the invariant basis: {0}")]
    Unrecognized(String),
}

pub type Result<T> = std::result::Result<T, Error>;
