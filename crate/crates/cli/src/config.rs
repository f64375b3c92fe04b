//! Scene files: one JSON document per scene.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spintensor::expr::{parse_expr, Expr, ParseError};
use spintensor::{DerivativeMode, Orientation};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid scene json at line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("in `{path}`: {source}")]
    Expr {
        path: String,
        #[source]
        source: ParseError,
    },
    #[error("invalid scene: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquipmentSpec {
    /// Pauli matrices and the constant spinor metric.
    CanonicalConstant,
    /// Canonical equipment seen from the spinor frame `S^a_i`, rows `a`.
    SpinTransform([[String; 2]; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub name: String,
    /// `frame[i][r] = Υ^i_r`
    pub frame: [[String; 4]; 4],
    /// Metric components in the frame.
    pub metric: [[String; 4]; 4],
    pub equipment: EquipmentSpec,
    pub sample_points: Vec<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub derivative_mode: DerivativeMode,
    #[serde(default)]
    pub orientation: Orientation,
}

/// A scene whose expressions have all been parsed.
#[derive(Debug, Clone)]
pub struct ParsedScene {
    pub frame: [[Expr; 4]; 4],
    pub metric: [[Expr; 4]; 4],
    pub spin_transform: Option<[[Expr; 2]; 2]>,
}

fn parse_at(path: String, text: &str) -> Result<Expr, ConfigError> {
    parse_expr(text).map_err(|source| ConfigError::Expr { path, source })
}

fn parse_grid<const N: usize>(field: &str, grid: &[[String; N]; N]) -> Result<[[Expr; N]; N], ConfigError> {
    let mut rows = Vec::with_capacity(N);
    for (i, row) in grid.iter().enumerate() {
        let mut cols = Vec::with_capacity(N);
        for (j, text) in row.iter().enumerate() {
            cols.push(parse_at(format!("{field}[{i}][{j}]"), text)?);
        }
        rows.push(<[Expr; N]>::try_from(cols).expect("row length"));
    }
    Ok(<[[Expr; N]; N]>::try_from(rows).expect("row count"))
}

impl SceneConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let scene: SceneConfig = serde_json::from_str(text).map_err(|e| ConfigError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        scene.validate()?;
        Ok(scene)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scene serializes")
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or_else(|| self.derivative_mode.default_tolerance())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.sample_points.is_empty() {
            return Err(ConfigError::Invalid("at least one sample point is required".into()));
        }
        if let Some(p) = self.sample_points.iter().find(|p| p.iter().any(|x| !x.is_finite())) {
            return Err(ConfigError::Invalid(format!("sample point {p:?} is not finite")));
        }
        if let Some(t) = self.tolerance {
            if !t.is_finite() || t <= 0.0 {
                return Err(ConfigError::Invalid(format!("tolerance must be positive, got {t}")));
            }
        }
        self.parse().map(|_| ())
    }

    pub fn parse(&self) -> Result<ParsedScene, ConfigError> {
        let spin_transform = match &self.equipment {
            EquipmentSpec::CanonicalConstant => None,
            EquipmentSpec::SpinTransform(s) => Some(parse_grid("equipment.spin-transform", s)?),
        };
        Ok(ParsedScene {
            frame: parse_grid("frame", &self.frame)?,
            metric: parse_grid("metric", &self.metric)?,
            spin_transform,
        })
    }
}
