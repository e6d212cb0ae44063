use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{what} diverges at {name} = {value}")]
    Divergent {
        what: &'static str,
        name: &'static str,
        value: f64,
    },

    #[error("ODE index n must be nonzero")]
    ZeroIndex,

    #[error("rational division by zero")]
    DivisionByZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config: {0}")]
    Config(String),

    #[error("evaluation failed at lp = {lp}: {source}")]
    EvaluationFailed { lp: f64, source: Box<Error> },
}

impl Error {
    pub(crate) fn domain(name: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value,
            domain,
        }
    }
}
