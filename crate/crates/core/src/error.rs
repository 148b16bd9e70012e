use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// Finite-time blow-up of an integrated trajectory.
    #[error("blow-up detected at t = {time}")]
    BlowUp { time: f64 },

    /// A slope denominator vanished: the front steepens into a shock.
    #[error("gradient catastrophe at {at}")]
    GradientCatastrophe { at: f64 },

    #[error("no gradient catastrophe on this branch: {0}")]
    NoCatastrophe(String),

    #[error("solver failure at t = {t}: {reason}")]
    SolverFailure { t: f64, reason: String },

    #[error("integrator failure at t = {t}: {reason}")]
    Integrator { t: f64, reason: String },

    #[error("root finding failed: {0}")]
    Root(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
