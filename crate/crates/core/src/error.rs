use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("pitch {theta:.6} rad outside rotor limits [{min:.6}, {max:.6}]")]
    PitchOutOfLimits { theta: f64, min: f64, max: f64 },

    #[error("thrust target {target:.6} N outside rotor envelope [{min:.6}, {max:.6}] N")]
    OutOfEnvelope { target: f64, min: f64, max: f64 },

    #[error("no solidity in (0, 0.3) reproduces {thrust_ref:.6} N")]
    NoSolution { thrust_ref: f64 },

    #[error("empty range: start {start} > end {end}")]
    EmptyRange { start: f64, end: f64 },

    #[error("vehicle mass {mass_kg:.3} kg exceeds maximum take-off weight {mtow_kg:.3} kg")]
    Overweight { mass_kg: f64, mtow_kg: f64 },

    #[error("allocation jacobian is singular (condition number {condition:.3e})")]
    SingularJacobian { condition: f64 },

    #[error("bisection did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("numerical blow-up at t = {time_s:.6} s")]
    NumericalBlowup { time_s: f64 },

    #[error("no step found in channel `{channel}` at t = {step_time:.6} s")]
    StepNotFound { channel: String, step_time: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors that mean the requested design point cannot be met,
    /// as opposed to malformed input or a numerical failure.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::PitchOutOfLimits { .. }
                | Error::OutOfEnvelope { .. }
                | Error::NoSolution { .. }
                | Error::Overweight { .. }
        )
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::SingularJacobian { .. } | Error::NoConvergence { .. } | Error::NumericalBlowup { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
