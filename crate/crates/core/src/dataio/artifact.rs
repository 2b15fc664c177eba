//! JSON artifact envelope shared with the figure renderer.
//!
//! Every file is `{"schema_version": N, "kind": "...", "payload": {...}}`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// A result type that can be written as an artifact file.
pub trait ArtifactPayload: Serialize + DeserializeOwned {
    const KIND: &'static str;
}

#[derive(Debug, Serialize, Deserialize)]
struct Envelope<T> {
    schema_version: u32,
    kind: String,
    payload: T,
}

pub fn artifact_to_string<T: ArtifactPayload>(payload: &T) -> Result<String> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        kind: T::KIND.to_owned(),
        payload,
    };
    let mut s = serde_json::to_string_pretty(&env)?;
    s.push('\n');
    Ok(s)
}

/// Serialize `payload` into its envelope and write it to `path`. The parent
/// directory must already exist.
pub fn write_artifact<T: ArtifactPayload>(payload: &T, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = artifact_to_string(payload)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn artifact_from_str<T: ArtifactPayload>(text: &str) -> Result<T> {
    let env: Envelope<serde_json::Value> = serde_json::from_str(text)?;
    if env.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            env.schema_version
        )));
    }
    if env.kind != T::KIND {
        return Err(Error::Schema(format!(
            "artifact kind `{}` does not match expected `{}`",
            env.kind,
            T::KIND
        )));
    }
    Ok(serde_json::from_value(env.payload)?)
}

pub fn read_artifact<T: ArtifactPayload>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    artifact_from_str(&text)
}
