//! Run manifests: the full recipe of a run, embedded into its outputs.

use serde::{Deserialize, Serialize};

/// Everything that determined a run: command, inputs, flags, seed and tool
/// version. Two runs with identical manifests produce byte-identical
/// outputs — the engine has no other sources of nondeterminism.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_len: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<u64>,
    pub version: String,
}

impl RunManifest {
    pub fn new(command: impl Into<String>) -> RunManifest {
        RunManifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            ..RunManifest::default()
        }
    }

    pub fn input(mut self, path: impl Into<String>) -> RunManifest {
        self.inputs.push(path.into());
        self
    }
}
