//! Run manifests: enough to replay a command and check its inputs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Written next to every output file as `<stem>.manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    /// Command-line arguments after the program name, without `--workers`.
    pub args: Vec<String>,
    pub seed: Option<u64>,
    pub version: String,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Drops `--workers N` and `--workers=N`, which never change outputs.
pub fn replayable_args(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--workers" {
            skip = true;
        } else if !a.starts_with("--workers=") {
            out.push(a.clone());
        }
    }
    out
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "output".into());
    output.with_file_name(format!("{stem}.manifest.json"))
}

pub fn write_output(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|source| CliError::Output {
            path: parent.to_path_buf(),
            source,
        })?;
    }
    std::fs::write(path, bytes).map_err(|source| CliError::Output {
        path: path.to_path_buf(),
        source,
    })
}

impl RunManifest {
    pub fn new(command: &str, args: &[String], seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            args: replayable_args(args),
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }

    /// Writes `outputs` and a manifest next to the first of them.
    pub fn write_with(mut self, outputs: &[(PathBuf, Vec<u8>)]) -> Result<PathBuf> {
        for (path, bytes) in outputs {
            write_output(path, bytes)?;
            self.outputs.push(path.display().to_string());
        }
        let target = manifest_path(&outputs[0].0);
        write_output(&target, &crate::json::to_bytes(&self))?;
        Ok(target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn workers_are_not_recorded() {
        let args: Vec<String> = ["cv", "--workers", "4", "--seed", "1", "--workers=2"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(replayable_args(&args), vec!["cv", "--seed", "1"]);
    }

    #[test]
    fn digest_and_paths() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(manifest_path(Path::new("out/tree.json")), Path::new("out/tree.manifest.json"));
    }
}
