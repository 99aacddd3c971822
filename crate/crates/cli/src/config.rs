//! JSON run configuration. Every field is optional; command-line flags take
//! precedence over the file, and the file over built-in defaults.

use std::path::Path;

use polariton_core::network::RailNetwork;
use polariton_core::PhysicalParams;
use serde::Deserialize;

use crate::grid::parse_grid;
use crate::{CliError, Format};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridValue {
    Number(f64),
    List(Vec<f64>),
    Text(String),
}

impl GridValue {
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        match self {
            GridValue::Number(v) => Ok(vec![*v]),
            GridValue::List(v) => Ok(v.clone()),
            GridValue::Text(s) => parse_grid(s),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub db: Option<GridValue>,
    pub sign: Option<i8>,
    pub physical: Option<PhysicalParams>,
    pub z: Option<GridValue>,
    pub rperp: Option<GridValue>,
    pub k: Option<GridValue>,
    pub omega: Option<GridValue>,
    pub sep: Option<GridValue>,
    pub waist: Option<f64>,
    pub waist_photon: Option<f64>,
    pub waist_spin: Option<f64>,
    pub step: Option<f64>,
    pub half_width: Option<f64>,
    pub bracket: Option<[f64; 2]>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub tail_epsilon: Option<f64>,
    pub nodes: Option<usize>,
    pub loss_free: Option<bool>,
    pub network: Option<RailNetwork>,
    pub format: Option<Format>,
    pub timestamp: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}
