use thiserror::Error;

/// Failures raised by the antenna models and their numerical kernels.
///
/// Quantities carried in variants are converted to `f64` regardless of the
/// scalar type the failing computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no sign change over [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("no convergence after {iterations} iterations (bracket width {width})")]
    Convergence { iterations: usize, width: f64 },

    #[error("synthesis error: {0}")]
    Synthesis(String),

    #[error("feed offset a = {feed_offset} m is singular: 1 - cos(2 k0 (a + dL)) = {denominator}")]
    Singularity { feed_offset: f64, denominator: f64 },

    #[error("unknown model variant `{0}`")]
    UnknownVariant(String),

    #[error("outside model range: {0}")]
    ModelRange(String),

    #[error("no feed position reaches {target} ohm (edge value {edge} ohm)")]
    NoSolution { target: f64, edge: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
