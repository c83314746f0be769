//! Error-to-exit-code policy.
//!
//! Validation problems (bad arguments, schema violations, parameter
//! domain errors) exit 1. Numeric failures (overflow, infeasible or
//! unbounded geometry, unsupported degeneracies) exit 2. Usage errors
//! exit 64; those are handled at argument-parsing time.

use ethos::dynamics::DynamicsError;
use ethos::games::GameError;
use ethos::marker::MarkerError;
use ethos::polytope::PolytopeError;
use ethos::portrait::PortraitError;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numeric(m) => m,
        }
    }

    pub fn from_marker(e: MarkerError) -> Self {
        CliError::Validation(e.to_string())
    }

    pub fn from_game(e: GameError) -> Self {
        CliError::Validation(e.to_string())
    }

    pub fn from_polytope(e: PolytopeError) -> Self {
        match e {
            PolytopeError::EmptyIntersection | PolytopeError::Unbounded => {
                CliError::Numeric(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }

    pub fn from_dynamics(e: DynamicsError) -> Self {
        match e {
            DynamicsError::Overflow { .. } | DynamicsError::RepeatedEigenvalue => {
                CliError::Numeric(e.to_string())
            }
            other => CliError::Validation(other.to_string()),
        }
    }

    pub fn from_portrait(e: PortraitError) -> Self {
        match e {
            PortraitError::Dynamics(inner) => Self::from_dynamics(inner),
            other => CliError::Validation(other.to_string()),
        }
    }

    pub fn io(context: &str, e: std::io::Error) -> Self {
        CliError::Numeric(format!("{context}: {e}"))
    }
}
