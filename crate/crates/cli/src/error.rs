// Copyright 2026 windctl contributors
// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// A configuration problem, pointing at the offending field when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub field: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(field) = &self.field {
            write!(f, "field `{field}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for SchemaError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Schema(#[from] SchemaError),

    #[error("numerical guard tripped: {0}")]
    Guard(windcore::Error),

    #[error("computation failed: {0}")]
    Core(windcore::Error),

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<windcore::Error> for CliError {
    fn from(e: windcore::Error) -> Self {
        if e.is_numerical_guard() {
            CliError::Guard(e)
        } else {
            CliError::Core(e)
        }
    }
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for schema errors, 3 for numerical guards, 4 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Io { .. } => 4,
            CliError::Core(_) => 1,
        }
    }
}
