//! Typed errors for every failure class in the library, grouped into three
//! broad categories used by the CLI exit-code mapping: parse errors (bad
//! files or flags), validation errors (structurally invalid models or
//! parameters), and computation errors (solver failures at runtime).

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every error the library can produce.
#[derive(Debug, Clone, Error)]
pub enum Error {
    // ---- parse-class errors -------------------------------------------
    /// A model file or CLI value could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),

    // ---- validation-class errors --------------------------------------
    /// Generic structural invalidity (shapes, duplicate labels, ...).
    #[error("validation error: {0}")]
    Validation(String),
    /// A probability vector does not sum to one (or has negative entries).
    #[error("not a distribution: {0}")]
    NotADistribution(String),
    /// A presentation's rows do not sum to one per state (and input).
    #[error("not stochastic: {0}")]
    NotStochastic(String),
    /// An operation requiring unifilarity received a non-unifilar model.
    #[error("not unifilar: {0}")]
    NotUnifilar(String),
    /// Two presentations that must share an alphabet do not.
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    /// A named model constructor received an unknown name.
    #[error("unknown model name: {0}")]
    UnknownName(String),
    /// A model parameter is outside its admissible range.
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    /// A target value is outside the achievable range.
    #[error("target out of range: {0}")]
    TargetOutOfRange(String),
    /// Degenerate parameters produce an invalid structure (e.g. absorbing).
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    /// Word distributions with different lengths or alphabets were combined.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    /// A trajectory is too short for the requested statistic.
    #[error("trajectory too short: {0}")]
    TooShort(String),

    // ---- computation-class errors --------------------------------------
    /// The support graph has more than one recurrent communicating class.
    #[error("multiple recurrent classes: {0}")]
    MultipleRecurrentClasses(String),
    /// An iterative scheme failed to reach tolerance. The best estimate,
    /// last level reached, and final residual are carried along.
    #[error("no convergence after level {terminal_l}: value {value}, residual {residual}")]
    NonConvergence {
        value: f64,
        terminal_l: usize,
        residual: f64,
    },
    /// The fidelity fixed-point iteration failed to reach tolerance.
    #[error(
        "fidelity iteration did not converge: residual {residual} after {iterations} iterations"
    )]
    FidelityNonConvergence {
        /// Last iterate, row-major.
        last: Vec<f64>,
        residual: f64,
        iterations: usize,
    },
    /// An overlap target matrix is not positive semidefinite.
    #[error("not positive semidefinite: {0}")]
    NotPsd(String),
    /// A channel-inversion draft could not resolve which minimized output
    /// state a product state belongs to.
    #[error("output-state correspondence ambiguous: {0}")]
    OutputStateCorrespondenceAmbiguous(String),
    /// Division by a zero output probability during inversion; impossible
    /// for consistent inputs and signals an internal inconsistency.
    #[error("zero divisor during inversion: {0}")]
    ZeroDivisor(String),
    /// A report lacked the excess-entropy field required by a classifier.
    #[error("missing excess entropy: {0}")]
    MissingE(String),
    /// I/O failure (file read/write), reported with its path.
    #[error("io error: {0}")]
    Io(String),
}

/// CLI exit-code class of an error: 1 = parse, 2 = validation, 3 = computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Validation,
    Computation,
}

impl Error {
    /// Which exit-code class this error belongs to.
    pub fn class(&self) -> ErrorClass {
        // Exhaustive on purpose: adding a variant forces choosing its class.
        match self {
            Error::Parse(_) | Error::Io(_) => ErrorClass::Parse,
            Error::Validation(_)
            | Error::NotADistribution(_)
            | Error::NotStochastic(_)
            | Error::NotUnifilar(_)
            | Error::AlphabetMismatch(_)
            | Error::UnknownName(_)
            | Error::ParamOutOfRange(_)
            | Error::TargetOutOfRange(_)
            | Error::DegenerateParameters(_)
            | Error::ShapeMismatch(_)
            | Error::TooShort(_) => ErrorClass::Validation,
            Error::MultipleRecurrentClasses(_)
            | Error::NonConvergence { .. }
            | Error::FidelityNonConvergence { .. }
            | Error::NotPsd(_)
            | Error::OutputStateCorrespondenceAmbiguous(_)
            | Error::ZeroDivisor(_)
            | Error::MissingE(_) => ErrorClass::Computation,
        }
    }

    /// Exit code for the CLI: parse 1, validation 2, computation 3.
    pub fn exit_code(&self) -> i32 {
        match self.class() {
            ErrorClass::Parse => 1,
            ErrorClass::Validation => 2,
            ErrorClass::Computation => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_error_class() {
        assert_eq!(Error::Parse("x".into()).exit_code(), 1);
        assert_eq!(Error::Io("x".into()).exit_code(), 1);
        assert_eq!(Error::Validation("x".into()).exit_code(), 2);
        assert_eq!(Error::NotStochastic("x".into()).exit_code(), 2);
        assert_eq!(Error::UnknownName("x".into()).exit_code(), 2);
        assert_eq!(
            Error::NonConvergence {
                value: 0.0,
                terminal_l: 0,
                residual: 1.0
            }
            .exit_code(),
            3
        );
        assert_eq!(Error::ZeroDivisor("x".into()).exit_code(), 3);
        assert_eq!(Error::MultipleRecurrentClasses("x".into()).exit_code(), 3);
    }
}
