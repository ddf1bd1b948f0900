use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 2;
pub const EXIT_TRACKING: u8 = 3;
pub const EXIT_INPUT: u8 = 4;

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub kind: Option<&'static str>,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl std::fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            kind: None,
            message: message.to_string(),
        }
    }
}

impl From<liouville_core::Error> for Failure {
    fn from(e: liouville_core::Error) -> Self {
        Failure {
            kind: Some(e.kind()),
            ..Failure::input(e)
        }
    }
}

#[derive(Serialize, Debug)]
pub struct Outcome {
    pub status: &'static str,
    pub exit_code: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Outcome {
    pub fn from_code(code: u8, error_kind: Option<&'static str>, error: Option<String>) -> Self {
        let status = match code {
            EXIT_OK => "ok",
            EXIT_NEGATIVE => "negative",
            EXIT_TRACKING => "tracking_failed",
            _ => "input_error",
        };
        Outcome {
            status,
            exit_code: code,
            error_kind,
            error,
        }
    }
}

#[derive(Serialize, Debug, Default)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Serialize, Debug)]
pub struct RunReport {
    pub command: String,
    pub config: Value,
    /// sha256 of every input file, keyed by path.
    pub inputs: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub result: Value,
    pub timings: Timings,
    pub artifacts: Vec<String>,
}

/// Input files read during a run, with their digests.
#[derive(Default)]
pub struct Inputs {
    pub digests: BTreeMap<String, String>,
}

impl Inputs {
    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let bytes = std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
        self.digests
            .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        String::from_utf8(bytes).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
    }
}
