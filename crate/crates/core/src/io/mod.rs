//! Files the command line reads and writes: profile tables as CSV, meshes as
//! OBJ, run metadata as JSON, and job configurations as TOML.

mod config;
mod metadata;
mod obj;
mod profile_csv;

use thiserror::Error;

pub use config::{Job, JobConfig, Outputs, RelationSelector};
pub use metadata::{PieceMetadata, RunMetadata, METADATA_VERSION};
pub use obj::{obj_string, write_obj};
pub use profile_csv::{profile_csv_string, read_profile_csv, write_profile_csv, CSV_HEADER};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed profile table, line {line}: {reason}")]
    MalformedCsv { line: u64, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
