//! Scenario-driven harness around the `radial-nls` library: configuration,
//! the analysis pipeline, diagnostics reports and their verification.

pub mod checks;
pub mod initial;
pub mod pipeline;
pub mod report;
pub mod scenario;
pub mod synthetic;

pub use checks::{verify_report, Check, Relation};
pub use pipeline::{analyze, run_scenario, simulate, Run};
pub use report::DiagnosticsReport;
pub use scenario::Scenario;

/// Exit codes of the command-line tool.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const FAILURES: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const ALARM: i32 = 3;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid scenario:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),

    #[error(transparent)]
    Numerics(#[from] radial_nls::Error),

    #[error("report incomplete: {0}")]
    Incomplete(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Incomplete(_) => exit::FAILURES,
            _ => exit::ALARM,
        }
    }
}
