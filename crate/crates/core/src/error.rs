use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("numerator has negative exponents; a polynomial is required")]
    NotPolynomial,

    #[error("form is not integrable over the unit cube")]
    NotIntegrable,

    #[error("series is not summable: {0}")]
    NotSummable(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("numerator does not factor as x^(u-1) (1-x)^(v-1) Q in variable x{var}")]
    NotFactorable { var: usize },

    #[error("partial integration needs u + v <= N (got u = {u}, v = {v}, N = {pole_order})")]
    LemmaInapplicable { u: u32, v: u32, pole_order: u32 },

    #[error("permutation enumeration is limited to n <= {max} (got {n})")]
    EnumerationBound { n: usize, max: usize },

    #[error("argument out of range: {0}")]
    OutOfRange(String),
}

pub type Result<T> = std::result::Result<T, Error>;
