//! Configuration-driven pipelines and mesh/report export around
//! `toda-core`: PDE solves, Lax-pair diagnostics, frame integration, the
//! loop-group construction pipelines and the involution classification,
//! each driven by a JSON config and emitting deterministic artifacts.

pub mod config;
pub mod export;
pub mod pipeline;

pub use config::{Mode, PipelineConfig};
pub use pipeline::{run_pipeline, Summary};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Invalid configuration; the message names the offending field.
    #[error("config error: {0}")]
    Config(String),

    /// A homogeneous lift was requested as OBJ without a chart projection,
    /// or the chart is singular at the listed grid indices.
    #[error("unsupported representation: chart projection undefined at {indices:?}")]
    UnsupportedRepresentation { indices: Vec<(usize, usize)> },

    #[error(transparent)]
    Core(#[from] toda_core::Error),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
