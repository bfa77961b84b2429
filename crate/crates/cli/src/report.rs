use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportDocument {
    pub schema_version: u32,
    pub command: String,
    pub input: Value,
    pub results: Value,
    pub version: String,
    /// SHA-256 of the compact serialization of `results`.
    pub hash: String,
}

impl ReportDocument {
    pub fn new(command: &str, input: Value, results: Value) -> Self {
        let hash = hex::encode(Sha256::digest(serde_json::to_vec(&results).expect("json value")));
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input,
            results,
            version: env!("CARGO_PKG_VERSION").to_string(),
            hash,
        }
    }

    pub fn to_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hash_depends_only_on_results() {
        let a = ReportDocument::new("x", json!({"a": 1}), json!({"b": [1, 2], "a": "3/2"}));
        let b = ReportDocument::new("y", json!(null), json!({"a": "3/2", "b": [1, 2]}));
        assert_eq!(a.hash, b.hash);
        let back: ReportDocument = serde_json::from_str(&a.to_pretty()).unwrap();
        assert_eq!(back, a);
    }
}
