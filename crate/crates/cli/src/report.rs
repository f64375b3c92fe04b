use std::fmt::Write as _;

use serde::Serialize;
use spintensor::frames::Residual;
use spintensor::spinor::PointSummary;
use spintensor::{DerivativeMode, IdentityReport, Orientation};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub point: [f64; 4],
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<PointSummary>,
}

impl PointReport {
    pub fn residuals(&self) -> &[Residual] {
        self.summary.as_ref().map(|s| s.residuals.as_slice()).unwrap_or(&[])
    }

    pub fn residual(&self, check: &str) -> Option<&Residual> {
        self.residuals().iter().find(|r| r.check == check)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SceneReport {
    pub name: String,
    pub derivative_mode: DerivativeMode,
    pub orientation: Orientation,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub points: Vec<PointReport>,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Orientation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corrupted_entry: Option<[usize; 3]>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub identities: Vec<IdentityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cubic_total_cases: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scenes: Vec<SceneReport>,
    pub overall_pass: bool,
}

impl RunReport {
    pub fn identity(&self, id: &str) -> Option<&IdentityReport> {
        self.identities.iter().find(|r| r.identity_id == id)
    }

    /// JSON with keys sorted at every level.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = serde_json::to_string_pretty(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let _ = write!(out, "spintensor {} {}", self.tool_version, self.command);
        if let Some(o) = self.orientation {
            let _ = write!(out, " (orientation {})", if o == Orientation::Right { "right" } else { "left" });
        }
        out.push('\n');
        if let Some([p, r, rb]) = self.corrupted_entry {
            let _ = writeln!(out, "  corrupted entry G^({r},{rb})_{p}");
        }
        for id in &self.identities {
            let _ = writeln!(
                out,
                "  {} {:<26} {:>4} cases, {} failures",
                verdict(id.passed),
                id.identity_id,
                id.total_cases,
                id.failures.len()
            );
            for f in id.failures.iter().take(8) {
                let _ = writeln!(out, "       {} at {:?}: lhs {} rhs {}", f.relation, f.index, f.lhs, f.rhs);
            }
            if id.failures.len() > 8 {
                let _ = writeln!(out, "       ... {} more", id.failures.len() - 8);
            }
        }
        for scene in &self.scenes {
            let _ = writeln!(
                out,
                "  {} scene {} ({:?}, tolerance {:e})",
                verdict(scene.passed),
                scene.name,
                scene.derivative_mode,
                scene.tolerance
            );
            if let Some(e) = &scene.error {
                let _ = writeln!(out, "       error: {e}");
            }
            for p in &scene.points {
                let _ = writeln!(out, "    {} point {:?}", verdict(p.passed), p.point);
                if let Some(e) = &p.error {
                    let _ = writeln!(out, "         error: {e}");
                }
                for r in p.residuals() {
                    let _ = writeln!(out, "         {} {:<34} {:.3e}", verdict(r.passed), r.check, r.max_residual);
                }
            }
        }
        let _ = writeln!(out, "overall: {}", verdict(self.overall_pass));
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Text => self.to_text(),
        }
    }
}
