use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("internal dimension {dim_internal} is smaller than the exposed dimension {dim_external}")]
    DimensionTooSmall {
        dim_internal: usize,
        dim_external: usize,
    },

    #[error("oracle dimension {dim} exceeds the ceiling {ceiling}")]
    OracleTooLarge { dim: usize, ceiling: usize },

    #[error("amplitude equations are singular (atomic pole in channel {channel} at delta_c = {delta_c})")]
    Pole { channel: usize, delta_c: f64 },

    #[error(
        "truncation did not converge below {ceiling} levels at delta_c = {delta_c} \
         (last T values {t_prev:.3e}, {t_last:.3e})"
    )]
    NotConverged {
        delta_c: f64,
        ceiling: usize,
        t_prev: f64,
        t_last: f64,
    },

    #[error("delta = {delta} is not within tolerance of the integer m = {m}")]
    NotDegenerate { delta: f64, m: usize },

    #[error("at grid point {index} (delta_c = {delta_c}): {source}")]
    AtGridPoint {
        index: usize,
        delta_c: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
