use irvzone::approx::ApproxError;
use irvzone::census::CensusError;
use irvzone::families::FamilyError;
use irvzone::graph::GraphError;
use irvzone::irv::IrvError;
use irvzone::zone::{GadgetError, ZoneError};
use irvzone_geometry::GeoError;
use serde::Serialize;
use thiserror::Error;

/// Exit code for a completed run whose answer is "no".
pub const EXIT_VERDICT: i32 = 1;
/// Exit code for bad arguments or unreadable input.
pub const EXIT_USAGE: i32 = 2;
/// Exit code for a search that ran out of budget.
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input(_) => EXIT_USAGE,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Budget(_) => "budget",
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: String,
            exit_code: i32,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            error: Body<'a>,
        }
        serde_json::to_string(&Wrapper {
            error: Body {
                kind: self.kind(),
                message: self.to_string(),
                exit_code: self.exit_code(),
            },
        })
        .expect("plain data")
    }
}

impl From<ZoneError> for CliError {
    fn from(e: ZoneError) -> Self {
        match e {
            ZoneError::CapExceeded { .. }
            | ZoneError::BudgetExceeded { .. }
            | ZoneError::TooLarge { .. }
            | ZoneError::Irv(IrvError::Incomplete { .. }) => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<IrvError> for CliError {
    fn from(e: IrvError) -> Self {
        match e {
            IrvError::Incomplete { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ApproxError> for CliError {
    fn from(e: ApproxError) -> Self {
        match e {
            ApproxError::Irv(e) => e.into(),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::Graph { graph6, source } => match CliError::from(source) {
                CliError::Budget(m) => CliError::Budget(format!("graph {graph6}: {m}")),
                other => CliError::Input(format!("graph {graph6}: {other}")),
            },
            other => CliError::Input(other.to_string()),
        }
    }
}

macro_rules! input_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}

input_error!(GraphError, GadgetError, FamilyError, GeoError);
