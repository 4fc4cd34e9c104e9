// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

//! Declarative experiment runner for wind-control simulations.

pub mod bundled;
pub mod config;
pub mod error;
pub mod manifest;
pub mod runner;

use std::fs;
use std::path::Path;

pub use config::ExperimentConfig;
pub use error::{CliError, SchemaError};
pub use runner::{run, RunOptions, RunOutcome};

/// A config loaded from disk or from the bundled set.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    /// file stem, used as the default output directory
    pub name: String,
    pub config: ExperimentConfig,
}

/// Reads `spec` as a path, falling back to a bundled config name.
pub fn load(spec: &str) -> Result<LoadedConfig, CliError> {
    let path = Path::new(spec);
    let (name, text) = if path.exists() {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("run")
            .to_string();
        (name, text)
    } else if let Some(text) = bundled::find(spec) {
        (spec.trim_end_matches(".cfg").to_string(), text.to_string())
    } else {
        return Err(CliError::io(
            path,
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "no such file and no bundled config of that name",
            ),
        ));
    };
    let config = ExperimentConfig::parse(&text)?;
    Ok(LoadedConfig { name, config })
}
