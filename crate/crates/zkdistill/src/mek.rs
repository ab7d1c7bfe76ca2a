//! Loading step-function coefficients for the 10-to-2 MEK distiller.
//!
//! The file holds power-series coefficients in `ε`:
//! `{"acceptance": [...], "output_error": [...], "source": "..."}`.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;
use zkdistill_core::distillation::{mek_model, DistillationError, DistillationStepModel, MekParameters};

#[derive(Debug, Error)]
pub enum MekError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parsing MEK parameters: {0}")]
    Json(#[from] serde_json::Error),
    #[error("MEK parameters rejected: {0}")]
    Model(DistillationError),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MekFile {
    acceptance: Vec<f64>,
    output_error: Vec<f64>,
    source: String,
}

pub fn parse_mek_params(text: &str) -> Result<MekParameters, MekError> {
    let f: MekFile = serde_json::from_str(text)?;
    Ok(MekParameters { acceptance: f.acceptance, output_error: f.output_error, source: f.source })
}

pub fn load_mek_params(path: &Path) -> Result<MekParameters, MekError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| MekError::Io { path: path.display().to_string(), source })?;
    parse_mek_params(&text)
}

/// Loads, validates the anchors and builds the step model.
pub fn load_mek_model(path: &Path) -> Result<DistillationStepModel, MekError> {
    mek_model(&load_mek_params(path)?).map_err(MekError::Model)
}
