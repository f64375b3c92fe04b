//! Runners behind the `spintensor` command: the exhaustive identity suite
//! on canonical equipment, and field-level scenes read from JSON files.

pub mod config;
pub mod report;

use std::str::FromStr;

use spintensor::frames::{FrameField, MetricField};
use spintensor::identities::{check_aux_contractions, check_cubic, check_derived, check_hermiticity, check_quadratic};
use spintensor::spinor::{analyze_point, EquipmentField};
use spintensor::{canonical_equipment, GaussianRational, Orientation, Scalar};
use thiserror::Error;

pub use config::{ConfigError, EquipmentSpec, SceneConfig};
pub use report::{Format, PointReport, RunReport, SceneReport, TOOL_VERSION};

/// One entry `G^{r rbar}_p` to negate, written `p,r,rbar`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorruptSpec {
    pub p: usize,
    pub r: usize,
    pub rbar: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorruptSpecError {
    #[error("corrupt spec must be `p,r,rbar` with p in 0..=3 and r, rbar in 1..=2, got `{0}`")]
    Syntax(String),
    #[error("entry G^({r},{rbar})_{p} is zero, so negating it changes nothing")]
    ZeroEntry { p: usize, r: usize, rbar: usize },
}

impl FromStr for CorruptSpec {
    type Err = CorruptSpecError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CorruptSpecError::Syntax(s.to_owned());
        let parts: Vec<usize> = s
            .split(',')
            .map(|t| t.trim().parse().map_err(|_| err()))
            .collect::<Result<_, _>>()?;
        match parts.as_slice() {
            &[p, r, rbar] if p <= 3 && (1..=2).contains(&r) && (1..=2).contains(&rbar) => Ok(Self { p, r, rbar }),
            _ => Err(err()),
        }
    }
}

/// Runs every exact identity check on the canonical equipment.
///
/// For the left orientation the equipment is the canonical one seen from a
/// frame with its third spatial vector reversed, so the volume tensor, the
/// orientation flag and the third slice of `G` change sign together.
pub fn run_verify_canonical(
    orientation: Orientation,
    corrupt: Option<CorruptSpec>,
) -> Result<RunReport, CorruptSpecError> {
    let right = canonical_equipment::<GaussianRational>(Orientation::Right);
    let mut eq = match orientation {
        Orientation::Right => right,
        Orientation::Left => right.reflect_spatial_axis(3),
    };
    if let Some(c) = corrupt {
        if eq.ivdw.get(&[c.p, c.r, c.rbar]).is_zero() {
            return Err(CorruptSpecError::ZeroEntry { p: c.p, r: c.r, rbar: c.rbar });
        }
        eq = eq.with_negated_ivdw_entry(c.p, c.r, c.rbar).expect("spec indices are in range");
    }
    let exact = "canonical equipment is exact";
    let mut identities = vec![
        check_hermiticity(&eq),
        check_quadratic(&eq).expect(exact),
        check_cubic(&eq).expect(exact),
    ];
    identities.extend(check_derived(&eq).expect(exact));
    identities.extend(check_aux_contractions(&eq).expect(exact));
    let cubic_total_cases = identities.iter().find(|r| r.identity_id == "cubic").map(|r| r.total_cases);
    let overall_pass = identities.iter().all(|r| r.passed);
    Ok(RunReport {
        tool_version: TOOL_VERSION.to_owned(),
        command: "verify-canonical".to_owned(),
        orientation: Some(orientation),
        corrupted_entry: corrupt.map(|c| [c.p, c.r, c.rbar]),
        identities,
        cubic_total_cases,
        scenes: Vec::new(),
        overall_pass,
    })
}

/// Evaluates the connection, spinor connection and every residual at each
/// sample point of the scene.
pub fn run_scene(config: &SceneConfig) -> Result<SceneReport, ConfigError> {
    config.validate()?;
    let parsed = config.parse()?;
    let mode = config.derivative_mode;
    let tol = config.tolerance();
    let frame = FrameField::new(parsed.frame, mode);
    let metric = MetricField::new(parsed.metric);
    let canonical = EquipmentField::canonical(config.orientation);
    let equipment = match &parsed.spin_transform {
        None => Ok(canonical),
        Some(s) => canonical.spin_frame_transform(s, &config.sample_points),
    };
    let mut report = SceneReport {
        name: config.name.clone(),
        derivative_mode: mode,
        orientation: config.orientation,
        tolerance: tol,
        error: None,
        points: Vec::new(),
        passed: false,
    };
    let equipment = match equipment {
        Ok(e) => e,
        Err(e) => {
            report.error = Some(e.to_string());
            return Ok(report);
        }
    };
    for pt in &config.sample_points {
        report.points.push(match analyze_point(&frame, &metric, &equipment, pt, tol) {
            Ok(summary) => PointReport {
                point: *pt,
                passed: summary.residuals.iter().all(|r| r.passed),
                error: None,
                summary: Some(summary),
            },
            Err(e) => PointReport {
                point: *pt,
                passed: false,
                error: Some(e.to_string()),
                summary: None,
            },
        });
    }
    report.passed = report.points.iter().all(|p| p.passed);
    Ok(report)
}

pub fn run_verify_scene(config: &SceneConfig) -> Result<RunReport, ConfigError> {
    let scene = run_scene(config)?;
    Ok(RunReport {
        tool_version: TOOL_VERSION.to_owned(),
        command: "verify-scene".to_owned(),
        orientation: None,
        corrupted_entry: None,
        identities: Vec::new(),
        cubic_total_cases: None,
        overall_pass: scene.passed,
        scenes: vec![scene],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupt_spec_parsing() {
        assert_eq!("3,1,2".parse::<CorruptSpec>().unwrap(), CorruptSpec { p: 3, r: 1, rbar: 2 });
        assert_eq!(" 0, 2 ,1".parse::<CorruptSpec>().unwrap(), CorruptSpec { p: 0, r: 2, rbar: 1 });
        for bad in ["4,1,1", "0,0,1", "0,1,3", "0,1", "a,b,c", "0,1,1,1"] {
            assert!(bad.parse::<CorruptSpec>().is_err(), "{bad}");
        }
    }
}
