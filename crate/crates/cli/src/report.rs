use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One JSON document per invocation. Everything except `timing_ms` is a
/// function of the command, its inputs and the seed.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub results: Value,
    pub timing_ms: f64,
    pub seed: Option<u64>,
    pub version: &'static str,
}

/// SHA-256 of the canonical JSON encoding of `inputs`.
pub fn digest(inputs: &Value) -> String {
    let bytes = serde_json::to_vec(inputs).expect("JSON values always serialize");
    let hash = Sha256::digest(&bytes);
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn render(&self, pretty: bool) -> String {
        let out = if pretty {
            serde_json::to_string_pretty(self)
        } else {
            serde_json::to_string(self)
        };
        out.expect("reports always serialize")
    }
}
