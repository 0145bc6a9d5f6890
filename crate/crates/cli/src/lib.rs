//! Front end for `esd-core`: scenario files, presets and CSV output.

pub mod app;
pub mod commands;
pub mod csv;
pub mod presets;
pub mod scenario;

pub use scenario::{parse_scenario, ScenarioError, ScenarioFile};
