use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("cannot merge proportional bases: {0}")]
    UnsupportedMerge(String),
    #[error("unsupported integrand shape: {0}")]
    UnsupportedForm(String),
    #[error("cofactor degree {degree} exceeds the maximum {max} for form {form}")]
    CofactorTooLarge { form: String, degree: usize, max: usize },
    #[error("no degeneracy case matches: {0}")]
    UnsupportedDegeneracy(String),
    #[error("no rule for {0}")]
    NoRuleForCase(String),
    #[error("rule {rule}: guard {guard} {detail}")]
    GuardViolated {
        rule: String,
        guard: String,
        detail: String,
    },
    #[error("rule {rule}: solved-for coefficient vanishes")]
    SolvedCoefficientZero { rule: String },
    #[error("template divides by zero: {0}")]
    ExceptionalParameters(String),
    #[error("no linear factor available to absorb the cofactor")]
    NoLinearFactor,
    #[error("step budget of {0} exhausted")]
    MaxStepsExceeded(usize),
    #[error("rule {rule} fails at {instantiation}")]
    CatalogDefect { rule: String, instantiation: String },
    #[error("syntax error at {pos}: expected {}", expected.join(" or "))]
    Syntax { pos: usize, expected: Vec<String> },
    #[error("exponent must be a rational literal: {0}")]
    SymbolicExponent(String),
    #[error("catalog: {0}")]
    Catalog(String),
    #[error("result document: {0}")]
    Document(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZeroPoly => "DivisionByZeroPoly",
            Error::BothZero => "BothZero",
            Error::UnsupportedMerge(_) => "UnsupportedMerge",
            Error::UnsupportedForm(_) => "UnsupportedForm",
            Error::CofactorTooLarge { .. } => "CofactorTooLarge",
            Error::UnsupportedDegeneracy(_) => "UnsupportedDegeneracy",
            Error::NoRuleForCase(_) => "NoRuleForCase",
            Error::GuardViolated { .. } => "GuardViolated",
            Error::SolvedCoefficientZero { .. } => "SolvedCoefficientZero",
            Error::ExceptionalParameters(_) => "ExceptionalParameters",
            Error::NoLinearFactor => "NoLinearFactor",
            Error::MaxStepsExceeded(_) => "MaxStepsExceeded",
            Error::CatalogDefect { .. } => "CatalogDefect",
            Error::Syntax { .. } => "SyntaxError",
            Error::SymbolicExponent(_) => "SymbolicExponent",
            Error::Catalog(_) => "CatalogError",
            Error::Document(_) => "DocumentError",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
