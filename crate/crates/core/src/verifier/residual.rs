use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::norm_geometry::{axis_oriented_curvatures, NormParameter, ProfileJet};
use crate::profile_solver::WeingartenRelation;
use crate::singular_quadrature::ProfileSample;
use crate::surface_assembler::derivative;

/// Fewest samples a scan accepts.
pub const MIN_SAMPLES: usize = 32;
/// Above this `|u'|` the scan differentiates `α(u)` instead of `u(α)`.
pub const CHART_SWITCH: f64 = 10.0;

/// An `α` interval left out of the residual statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedZone {
    pub lower: f64,
    pub upper: f64,
    pub reason: String,
}

/// Residual statistics of one sample table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualStats {
    pub max: f64,
    pub rms: f64,
    /// Samples that entered `max` and `rms`.
    pub scanned: usize,
    pub excluded_zones: Vec<ExcludedZone>,
    /// Largest residual among excluded samples where one could be formed, so
    /// growth near the ends stays visible.
    pub excluded_max: Option<f64>,
}

/// Step of the central differences at distance `d` from the nearest end.
fn step_at(d: f64) -> f64 {
    (1e-4 * d).max(1e-6).min(0.25 * d)
}

/// `k₁ + λk₂ − μ` (or `k₂ − μ`) at one sample. `u''` is a five-point central
/// difference of `slope`; every first-order term uses the table's `u'`.
fn residual_at<S: Fn(f64) -> f64>(
    p: NormParameter,
    relation: &WeingartenRelation,
    slope: &S,
    s: &ProfileSample,
    h: f64,
) -> Option<f64> {
    if !(h > 0.0) || !s.du.is_finite() {
        return None;
    }
    let ddu = derivative(slope, s.alpha, h);
    let jet = if s.du.abs() <= CHART_SWITCH {
        ProfileJet::over_radius(s.alpha, s.u, s.du, ddu)
    } else {
        ProfileJet::over_axis(s.alpha, 1.0 / s.du, -ddu / s.du.powi(3))
    };
    let k = axis_oriented_curvatures(p, &jet).ok()?;
    let r = relation.residual(k);
    r.is_finite().then_some(r)
}

/// Scans a sample table, leaving out `α` within `epsilon` of either end of
/// the table. `slope` is `u'(α)` for the table's branch and `end_reasons`
/// labels the two zones.
pub fn scan_table<S: Fn(f64) -> f64>(
    p: NormParameter,
    relation: &WeingartenRelation,
    slope: S,
    samples: &[ProfileSample],
    epsilon: f64,
    end_reasons: [&str; 2],
) -> Result<ResidualStats, VerifyError> {
    if samples.len() < MIN_SAMPLES {
        return Err(VerifyError::TooFewSamples {
            found: samples.len(),
            needed: MIN_SAMPLES,
        });
    }
    let first = samples[0].alpha;
    let last = samples[samples.len() - 1].alpha;
    let zones = vec![
        ExcludedZone {
            lower: first,
            upper: first + epsilon,
            reason: end_reasons[0].to_string(),
        },
        ExcludedZone {
            lower: last - epsilon,
            upper: last,
            reason: end_reasons[1].to_string(),
        },
    ];
    let excluded = |a: f64| a < first + epsilon || a > last - epsilon;
    let (mut max, mut sum, mut scanned) = (0.0f64, 0.0, 0usize);
    let mut excluded_max: Option<f64> = None;
    for s in samples {
        let h = step_at((s.alpha - first).min(last - s.alpha));
        let r = residual_at(p, relation, &slope, s, h);
        if excluded(s.alpha) {
            if let Some(r) = r {
                excluded_max = Some(excluded_max.map_or(r.abs(), |m| m.max(r.abs())));
            }
            continue;
        }
        let r = r.ok_or(VerifyError::DegenerateSample { alpha: s.alpha })?;
        max = max.max(r.abs());
        sum += r * r;
        scanned += 1;
    }
    let rms = if scanned > 0 { (sum / scanned as f64).sqrt() } else { 0.0 };
    Ok(ResidualStats {
        max,
        rms,
        scanned,
        excluded_zones: zones,
        excluded_max,
    })
}
