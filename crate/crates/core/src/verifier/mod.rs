//! Checks of sampled profiles that do not reuse the solver's quadrature:
//! curvature residuals from finite differences on the table, a shooting
//! oracle for the second-order equation, and drift of the first integral.

mod oracle;
mod residual;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use oracle::{check_start, ode_oracle, ode_oracle_radius, OracleChart, OraclePoint, OracleRun, ShootingStart, Truncation, ORACLE_TOL};
pub use residual::{scan_table, ExcludedZone, ResidualStats, CHART_SWITCH, MIN_SAMPLES};

use crate::norm_geometry::{slope_weight, GeometryError, NormParameter};
use crate::profile_solver::{solve, ProfileBranch, SlopeLaw, SolveOptions, SolveRequest, SolverError};
use crate::BranchSign;
use crate::singular_quadrature::{EndpointKind, ProfileSample};
use crate::surface_assembler::{axis_numerics, AxisNumerics};

/// Version of the JSON report layout.
pub const REPORT_VERSION: u32 = 1;
/// Default half-width of the zones left out at the ends of a table.
pub const DEFAULT_EPSILON: f64 = 1e-3;
/// Steeper samples are too close to a cap for the oracle.
const STEEPEST: f64 = 1e4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("need at least {needed} samples, got {found}")]
    TooFewSamples { found: usize, needed: usize },
    #[error("curvature is undefined at sample α = {alpha}")]
    DegenerateSample { alpha: f64 },
    #[error("shooting start misses the first integral by {gap:e}")]
    InconsistentStart { gap: f64 },
    #[error("no branch of the request covers the table (α from {lower} to {upper})")]
    NoMatchingBranch { lower: f64, upper: f64 },
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Everything the verifier learned about one table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: u32,
    pub branch_id: String,
    pub samples: usize,
    pub epsilon: f64,
    pub residual_max: f64,
    pub residual_rms: f64,
    pub scanned: usize,
    pub excluded_zones: Vec<ExcludedZone>,
    pub excluded_residual_max: Option<f64>,
    /// `max |u'_table − u'(α)| / (1 + |u'|)`: the table against its own law.
    pub table_slope_dev: f64,
    /// `max |Δα|` between the table and the shooting oracle.
    pub oracle_max_dev: Option<f64>,
    pub oracle_points: usize,
    pub oracle_truncated: Option<Truncation>,
    pub first_integral_drift: f64,
    pub axis_limits: Option<AxisNumerics>,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report fields serialize")
    }
}

fn kind_reason(kind: EndpointKind) -> &'static str {
    match kind {
        EndpointKind::SimpleRoot => "cap",
        EndpointKind::DoubleRoot => "double root",
        EndpointKind::AxisZero => "axis",
        EndpointKind::SmoothCap => "fold",
        EndpointKind::Unbounded { .. } => "far field",
        EndpointKind::Regular => "table end",
    }
}

/// Residual statistics of a branch's own table.
pub fn residual_scan(branch: &ProfileBranch, epsilon: f64) -> Result<ResidualStats, VerifyError> {
    scan_table(
        branch.norm(),
        &branch.request.relation,
        |a| branch.slope_at(a),
        &branch.samples,
        epsilon,
        [
            kind_reason(branch.domain.lower_kind),
            kind_reason(branch.domain.upper_kind),
        ],
    )
}

/// `max |w(u') − w(α)|` over the samples: how far the table's slopes stray
/// from the first integral of `law`. This is the conserved expression's
/// error divided by its coefficient of `w`, which stays well scaled where
/// that coefficient (`α^λ`) is huge or tiny.
pub fn table_drift(p: NormParameter, law: SlopeLaw, samples: &[ProfileSample]) -> f64 {
    samples
        .iter()
        .filter(|s| s.alpha > 0.0 && !s.du.is_nan())
        .map(|s| (slope_weight(p, s.du) - law.weight(s.alpha)).abs())
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max)
}

pub fn first_integral_drift(branch: &ProfileBranch) -> f64 {
    table_drift(branch.norm(), branch.law, &branch.samples)
}

/// Compared points, largest `|Δα|` and truncation of the oracle runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub points: usize,
    pub max_dev: Option<f64>,
    pub truncated: Option<Truncation>,
}

/// Shoots from a mid-table sample toward both ends and compares. Steep
/// samples (`|u'| ≥ 1`) are checked on `α(u)` and flat ones on `u(α)`; the
/// deviation is `|Δα|` or `|Δu|` accordingly.
pub fn oracle_compare(
    req: &SolveRequest,
    samples: &[ProfileSample],
    epsilon: f64,
) -> Result<OracleComparison, VerifyError> {
    let (Some(first), Some(last)) = (samples.first(), samples.last()) else {
        return Err(VerifyError::TooFewSamples {
            found: 0,
            needed: MIN_SAMPLES,
        });
    };
    let (lo, hi) = (first.alpha + epsilon, last.alpha - epsilon);
    let inside = |s: &&ProfileSample| s.alpha > lo && s.alpha < hi && s.du.is_finite() && s.du != 0.0;
    let steep: Vec<&ProfileSample> = samples
        .iter()
        .filter(inside)
        .filter(|s| s.du.abs() >= 1.0 && s.du.abs() <= STEEPEST)
        .collect();
    let flat: Vec<&ProfileSample> = samples
        .iter()
        .filter(inside)
        .filter(|s| s.du.abs() < 1.0)
        .collect();
    let mut out = OracleComparison {
        points: 0,
        max_dev: None,
        truncated: None,
    };
    for (chart, set) in [(OracleChart::OverAxis, steep), (OracleChart::OverRadius, flat)] {
        if set.len() < 2 {
            continue;
        }
        let mid = set.len() / 2;
        let s0 = set[mid];
        let start = ShootingStart {
            u: s0.u,
            alpha: s0.alpha,
            d_alpha: 1.0 / s0.du,
        };
        let forward: Vec<&ProfileSample> = set[mid + 1..].to_vec();
        let backward: Vec<&ProfileSample> = set[..mid].iter().rev().copied().collect();
        for side in [forward, backward] {
            if side.is_empty() {
                continue;
            }
            let run = match chart {
                OracleChart::OverAxis => {
                    let targets: Vec<f64> = side.iter().map(|s| s.u).collect();
                    ode_oracle(req, start, &targets, ORACLE_TOL)?
                }
                OracleChart::OverRadius => {
                    let targets: Vec<f64> = side.iter().map(|s| s.alpha).collect();
                    ode_oracle_radius(req, start, &targets, ORACLE_TOL)?
                }
            };
            for (pt, s) in run.points.iter().zip(&side) {
                let dev = match chart {
                    OracleChart::OverAxis => (pt.alpha - s.alpha).abs(),
                    OracleChart::OverRadius => (pt.u - s.u).abs(),
                };
                out.max_dev = Some(out.max_dev.map_or(dev, |m: f64| m.max(dev)));
                out.points += 1;
            }
            out.truncated = out.truncated.or(run.truncated);
        }
    }
    Ok(out)
}

/// The branch of `req` whose domain holds the table, with the table's sign.
pub fn matching_branch(req: &SolveRequest, samples: &[ProfileSample]) -> Result<ProfileBranch, VerifyError> {
    let (lower, upper) = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => (a.alpha, b.alpha),
        _ => {
            return Err(VerifyError::TooFewSamples {
                found: 0,
                needed: MIN_SAMPLES,
            })
        }
    };
    let mid = samples[samples.len() / 2];
    let rising = samples.iter().filter(|s| s.du > 0.0).count();
    let sign = if 2 * rising >= samples.len() {
        BranchSign::Plus
    } else {
        BranchSign::Minus
    };
    let branches = solve(&req.with_sign(sign), &SolveOptions::with_samples(MIN_SAMPLES))?;
    branches
        .into_iter()
        .find(|b| {
            let d = &b.domain;
            let slack = 1e-9 * d.upper.clamp(1.0, 1e12);
            lower >= d.lower - slack && upper <= d.upper + slack && d.contains(mid.alpha)
        })
        .ok_or(VerifyError::NoMatchingBranch { lower, upper })
}

/// `max |u'_table − u'(α)| / (1 + |u'(α)|)` over samples with finite slope.
pub fn table_slope_deviation(branch: &ProfileBranch, samples: &[ProfileSample]) -> f64 {
    samples
        .iter()
        .filter(|s| s.du.is_finite())
        .map(|s| {
            let want = branch.slope_at(s.alpha);
            (s.du - want).abs() / (1.0 + want.abs())
        })
        .filter(|d| d.is_finite())
        .fold(0.0, f64::max)
}

fn report(
    branch: &ProfileBranch,
    samples: &[ProfileSample],
    epsilon: f64,
    branch_id: &str,
    end_reasons: [&str; 2],
) -> Result<VerificationReport, VerifyError> {
    let req = &branch.request;
    let stats = scan_table(
        req.norm,
        &req.relation,
        |a| branch.slope_at(a),
        samples,
        epsilon,
        end_reasons,
    )?;
    let oracle = oracle_compare(req, samples, epsilon)?;
    Ok(VerificationReport {
        version: REPORT_VERSION,
        branch_id: branch_id.to_string(),
        samples: samples.len(),
        epsilon,
        residual_max: stats.max,
        residual_rms: stats.rms,
        scanned: stats.scanned,
        excluded_zones: stats.excluded_zones,
        excluded_residual_max: stats.excluded_max,
        table_slope_dev: table_slope_deviation(branch, samples),
        oracle_max_dev: oracle.max_dev,
        oracle_points: oracle.points,
        oracle_truncated: oracle.truncated,
        first_integral_drift: table_drift(req.norm, branch.law, samples),
        axis_limits: None,
    })
}

/// Report for a table produced for `req`, e.g. one read back from disk.
pub fn verify_table(
    req: &SolveRequest,
    samples: &[ProfileSample],
    epsilon: f64,
) -> Result<VerificationReport, VerifyError> {
    let branch = matching_branch(req, samples)?;
    report(&branch, samples, epsilon, &branch_id(&branch), ["table end", "table end"])
}

pub fn branch_id(branch: &ProfileBranch) -> String {
    format!("{}{}", branch.tag.label(), branch.sign())
}

/// Full report for a solved branch, including axis limits when the branch
/// reaches the axis.
pub fn verify_branch(branch: &ProfileBranch, epsilon: f64) -> Result<VerificationReport, VerifyError> {
    let mut report = report(
        branch,
        &branch.samples,
        epsilon,
        &branch_id(branch),
        [
            kind_reason(branch.domain.lower_kind),
            kind_reason(branch.domain.upper_kind),
        ],
    )?;
    if branch.domain.lower_kind == EndpointKind::AxisZero && branch.domain.lower == 0.0 {
        report.axis_limits = axis_numerics(branch).ok();
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile_solver::{solve_constant_k2, solve_homogeneous};

    fn m2() -> NormParameter {
        NormParameter::new(2).unwrap()
    }

    #[test]
    fn sphere_report() {
        let b = solve_constant_k2(m2(), 0.5, BranchSign::Plus).unwrap();
        let r = verify_branch(&b, DEFAULT_EPSILON).unwrap();
        assert!(r.residual_max < 1e-8, "{r:?}");
        assert!(r.first_integral_drift < 1e-10);
        assert!(r.oracle_max_dev.unwrap() < 1e-6);
        assert!(r.table_slope_dev < 1e-12);
        let v = r.axis_limits.unwrap().verdict;
        assert!(v.u2_limit_exists && v.curvatures_extend);
        // The report is plain JSON with stable field order.
        let json = r.to_json();
        assert!(json.starts_with("{\n  \"version\": 1,"));
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.branch_id, r.branch_id);
        assert!((back.first_integral_drift - r.first_integral_drift).abs() < 1e-30);
    }

    #[test]
    fn homogeneous_outer_branch() {
        let b = solve_homogeneous(m2(), 1.0, 1.0, BranchSign::Plus).unwrap();
        let stats = residual_scan(&b, 1e-3).unwrap();
        assert!(stats.max < 1e-6, "{stats:?}");
        assert_eq!(stats.excluded_zones[0].reason, "cap");
    }

    #[test]
    fn table_reverify_matches_branch() {
        let b = solve_homogeneous(m2(), -1.5, 1.0, BranchSign::Minus).unwrap();
        let direct = verify_branch(&b, DEFAULT_EPSILON).unwrap();
        let again = verify_table(&b.request, &b.samples, DEFAULT_EPSILON).unwrap();
        assert_eq!(direct.residual_max, again.residual_max);
        assert_eq!(direct.branch_id, again.branch_id);
    }
}
