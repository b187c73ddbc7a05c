use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

impl InputFile {
    pub fn hash(path: &Path, bytes: &[u8]) -> Self {
        InputFile {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Everything needed to replay a run: the command line, the seed and the
/// hashes of every file read. Only `elapsed_ms` varies between replays.
#[derive(Debug, Serialize)]
pub struct ExperimentReport {
    pub command: Vec<String>,
    pub seed: Option<u64>,
    pub inputs: Vec<InputFile>,
    pub results: serde_json::Value,
    pub elapsed_ms: u128,
}

/// What a command hands back to `main`.
pub struct Outcome {
    pub text: String,
    pub results: serde_json::Value,
    pub seed: Option<u64>,
}
