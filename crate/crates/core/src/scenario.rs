//! Scenario files: JSON parameter sets shared by every command-line
//! subcommand.
//!
//! ```json
//! { "version": 1, "model": { "named": "butterfly" }, "max_generation": 3,
//!   "rows": [-64, 64], "columns": [-32, 32], "axes": [{ "column": 0 }],
//!   "machine": "machines/right_mover.tm" }
//! ```
//!
//! Every field but `version` is optional. Named models are expanded to
//! explicit phase choices before anything runs, and [`Resolved::to_json`]
//! records the expanded parameters, so a run can be replayed exactly.
//! Relative paths are taken from the scenario file's directory.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::brackets::{PhaseChoices, Window};
use crate::trilaterals::{Axis, Scene, SceneWindow, BAND_ABOVE, BAND_BELOW};

pub const SCENARIO_VERSION: u32 = 1;

/// Default maximal generation of named models.
pub const DEFAULT_GENERATION: u32 = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("scenario JSON: {0}")]
    Json(String),
    #[error("scenario version {0} is not supported (expected {SCENARIO_VERSION})")]
    Version(u32),
    #[error("model has {bits} phase bits but max_generation is {generation}")]
    Generation { bits: usize, generation: u32 },
    #[error("`{0}` must be `lo:hi` with lo < hi")]
    Range(String),
    #[error("axis `{0}` must be `column` or `column@start_row`")]
    AxisSpec(String),
}

/// A model by name.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedModel {
    Butterfly,
    Sunset,
}

/// Phase choices, named or explicit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum Model {
    Named { named: NamedModel },
    Explicit { phase: u8, bits: Vec<bool> },
}

/// The parameters of a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_generation: Option<u32>,
    /// Half-open row range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rows: Option<[i64; 2]>,
    /// Half-open column range.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axes: Option<Vec<Axis>>,
    /// Turing machine file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine: Option<PathBuf>,
    /// Generation of the red triangle of `harp run`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triangle_generation: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_limit: Option<u64>,
    /// Tile grid file (JSON) for `tile verify` and `tile force`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<PathBuf>,
    /// Formula text or family name for `tiles expand`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    /// Overlay signals in `render`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signals: Option<bool>,
}

impl Scenario {
    /// An empty scenario of the current version.
    pub fn new() -> Scenario {
        Scenario { version: SCENARIO_VERSION, ..Default::default() }
    }

    /// Parses and checks the version.
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Json(e.to_string()))?;
        if s.version != SCENARIO_VERSION {
            return Err(ScenarioError::Version(s.version));
        }
        Ok(s)
    }

    /// Reads a scenario file, making its relative paths relative to the
    /// file's directory.
    pub fn load(path: &Path) -> Result<Scenario, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Json(format!("{}: {e}", path.display())))?;
        let mut s = Scenario::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut s.machine, &mut s.grid].into_iter().flatten() {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(s)
    }

    /// Expands the model and fills the defaults that do not depend on the
    /// command.
    pub fn resolve(&self) -> Result<Resolved, ScenarioError> {
        let (choices, generation) = match (&self.model, self.max_generation) {
            (Some(Model::Explicit { phase, bits }), g) => {
                let g = g.unwrap_or(bits.len() as u32);
                if bits.len() != g as usize {
                    return Err(ScenarioError::Generation { bits: bits.len(), generation: g });
                }
                (PhaseChoices::new(*phase, bits.clone()), g)
            }
            (Some(Model::Named { named }), g) => {
                let g = g.unwrap_or(DEFAULT_GENERATION);
                let c = match named {
                    NamedModel::Butterfly => PhaseChoices::butterfly(g),
                    NamedModel::Sunset => PhaseChoices::sunset(g),
                };
                (c, g)
            }
            (None, g) => {
                let g = g.unwrap_or(DEFAULT_GENERATION);
                (PhaseChoices::butterfly(g), g)
            }
        };
        let axes = self.axes.clone().unwrap_or_else(|| vec![Axis::full(0)]);
        let rows = match self.rows {
            Some([lo, hi]) => Window::new(lo, hi),
            None if axes.len() == 1 => {
                let apex = Scene::apex_of(&choices);
                Window::new(apex - BAND_ABOVE, apex + BAND_BELOW)
            }
            None => Window::new(-64, 64),
        };
        let columns = self.columns.map_or(Window::new(-32, 32), |[lo, hi]| Window::new(lo, hi));
        Ok(Resolved { scenario: self.clone(), choices, generation, axes, window: SceneWindow::new(rows, columns) })
    }
}

/// A scenario with its model expanded and defaults filled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolved {
    pub scenario: Scenario,
    pub choices: PhaseChoices,
    pub generation: u32,
    pub axes: Vec<Axis>,
    pub window: SceneWindow,
}

impl Resolved {
    /// The scenario with explicit choices, generation, window and axes.
    pub fn to_json(&self) -> String {
        let mut s = self.scenario.clone();
        s.model = Some(Model::Explicit { phase: self.choices.phase, bits: self.choices.bits.clone() });
        s.max_generation = Some(self.generation);
        s.rows = Some([self.window.rows.lo, self.window.rows.hi]);
        s.columns = Some([self.window.columns.lo, self.window.columns.hi]);
        s.axes = Some(self.axes.clone());
        serde_json::to_string_pretty(&s).expect("scenarios serialize") + "\n"
    }
}

/// Parses `lo:hi`.
pub fn parse_range(text: &str) -> Result<[i64; 2], ScenarioError> {
    let err = || ScenarioError::Range(text.to_string());
    let (a, b) = text.split_once(':').ok_or_else(err)?;
    let (lo, hi) = (a.trim().parse().map_err(|_| err())?, b.trim().parse().map_err(|_| err())?);
    if lo >= hi {
        return Err(err());
    }
    Ok([lo, hi])
}

/// Parses `column` or `column@start_row`.
pub fn parse_axis(text: &str) -> Result<Axis, ScenarioError> {
    let err = || ScenarioError::AxisSpec(text.to_string());
    match text.split_once('@') {
        Some((c, r)) => Ok(Axis { column: c.parse().map_err(|_| err())?, start_row: Some(r.parse().map_err(|_| err())?) }),
        None => Ok(Axis::full(text.parse().map_err(|_| err())?)),
    }
}
