//! Scenario-driven front end for `qpflow-core`.

pub mod commands;
pub mod demo;
pub mod json;
pub mod scenario;

use std::fmt;

use serde_json::Value;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn math(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_MATH,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<qpflow_core::Error> for CliError {
    fn from(e: qpflow_core::Error) -> Self {
        match e {
            qpflow_core::Error::BoundTooLarge => CliError::input(e.to_string()),
            _ => CliError::math(e.to_string()),
        }
    }
}

/// Flags shared by every subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct Options {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub bound: Option<u32>,
    pub verify_sim: bool,
    pub flow: Option<String>,
    pub target: Option<String>,
    pub map: Option<String>,
    pub symmetry: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            seed: 0,
            samples: 1000,
            tol: qpflow_core::sim::DEFAULT_TOL,
            bound: None,
            verify_sim: false,
            flow: None,
            target: None,
            map: None,
            symmetry: None,
        }
    }
}

/// A command result: the JSON report, a plain-text rendering, and the exit
/// code to finish with.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub value: Value,
    pub text: String,
    pub code: i32,
}

impl Output {
    pub fn ok(value: Value, text: String) -> Self {
        Output { value, text, code: EXIT_OK }
    }
}
