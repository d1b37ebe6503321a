use serde::{Deserialize, Serialize};

use super::limits::one_sided_limit;
use super::AssemblyError;
use crate::norm_geometry::NormParameter;
use crate::profile_solver::{CaseTag, ProfileBranch};

const THRESHOLD_TOL: f64 = 1e-12;

/// Whether a surface is regular where the profile meets the axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisVerdict {
    /// `lim_{α→0} u''(α)` exists.
    pub u2_limit_exists: bool,
    /// `k₁` and `k₂` extend continuously to `α = 0`.
    pub curvatures_extend: bool,
}

/// Analytic axis verdict for a piece whose domain starts at `α = 0`.
pub fn axis_smoothness(
    p: NormParameter,
    tag: CaseTag,
    lambda: f64,
) -> Result<AxisVerdict, AssemblyError> {
    use CaseTag::*;
    let odd = p.odd() as f64;
    let at_least_one = |x: f64| x >= 1.0 - THRESHOLD_TOL;
    let v = |u2, k| AxisVerdict {
        u2_limit_exists: u2,
        curvatures_extend: k,
    };
    Ok(match tag {
        UnitSphere | GenPosNegSphere | GenMidNegSphere | GenLowPosSphere => v(true, true),
        // Straight or arc profiles crossing the axis at an angle: a cone point.
        Cone | MeridianArcPositive => v(true, false),
        HomogeneousInner => v(at_least_one(odd * -lambda), at_least_one(-lambda)),
        DiffPosJoined | DiffPosCriticalInner | DiffPosSplitInner => v(p.m() >= 2, false),
        GenMidPosJoined | GenMidPosCriticalInner | GenMidPosSplitInner | GenMidNegDisk => {
            v(at_least_one(odd * -lambda), false)
        }
        GenLowPosDisk | GenLowPosJoined | GenLowPosCriticalInner | GenLowPosSplitInner => {
            v(true, true)
        }
        _ => return Err(AssemblyError::NoAxis(tag)),
    })
}

/// Numeric counterpart of [`AxisVerdict`] with the evidence behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisNumerics {
    /// Log-log slope `p` of `|u''(α)| ~ α^p` as `α → 0`.
    pub u2_exponent: f64,
    /// Extrapolated `lim u''`, when the exponent allows one.
    pub u2_limit: Option<f64>,
    pub k1_limit: Option<f64>,
    pub k2_limit: Option<f64>,
    pub verdict: AxisVerdict,
}

/// Exponents above this count as a finite `u''` limit.
const EXPONENT_FLOOR: f64 = -0.05;

/// Estimates the axis behavior of `branch` from its slope law alone.
pub fn axis_numerics(branch: &ProfileBranch) -> Result<AxisNumerics, AssemblyError> {
    if branch.domain.lower != 0.0 {
        return Err(AssemblyError::NoAxis(branch.tag));
    }
    let width = branch.domain.upper.min(1.0);
    let u2 = |a: f64| branch.second_slope_at(a);
    let (a1, a2) = (1e-5 * width, 1e-6 * width);
    let (v1, v2) = (u2(a1).abs(), u2(a2).abs());
    let u2_exponent = if v1 == 0.0 && v2 == 0.0 {
        f64::INFINITY
    } else if v1 == 0.0 || v2 == 0.0 {
        f64::NAN
    } else {
        (v1 / v2).ln() / (a1 / a2).ln()
    };
    let exists = u2_exponent > EXPONENT_FLOOR;
    let u2_limit = exists.then(|| one_sided_limit(u2, 1e-3 * width).value);

    let tail = |f: &dyn Fn(f64) -> f64| {
        let l = one_sided_limit(f, 1e-2 * width);
        // The sampled tail must already sit on the extrapolated value.
        let near = f(1e-8 * width);
        (l.value.is_finite() && (near - l.value).abs() < 1e-3).then_some(l.value)
    };
    let k1_limit = tail(&|a| branch.curvatures_at(a).k1);
    let k2_limit = tail(&|a| branch.curvatures_at(a).k2);
    Ok(AxisNumerics {
        u2_exponent,
        u2_limit,
        k1_limit,
        k2_limit,
        verdict: AxisVerdict {
            u2_limit_exists: exists,
            curvatures_extend: k1_limit.is_some() && k2_limit.is_some(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u32) -> NormParameter {
        NormParameter::new(v).unwrap()
    }

    #[test]
    fn homogeneous_thresholds() {
        let v = axis_smoothness(m(2), CaseTag::HomogeneousInner, -1.0).unwrap();
        assert_eq!(v, AxisVerdict { u2_limit_exists: true, curvatures_extend: true });
        let v = axis_smoothness(m(2), CaseTag::HomogeneousInner, -0.2).unwrap();
        assert_eq!(v, AxisVerdict { u2_limit_exists: false, curvatures_extend: false });
        let v = axis_smoothness(m(2), CaseTag::HomogeneousInner, -1.0 / 3.0).unwrap();
        assert!(v.u2_limit_exists && !v.curvatures_extend);
        let v = axis_smoothness(m(2), CaseTag::DiffPosJoined, -1.0).unwrap();
        assert_eq!(v, AxisVerdict { u2_limit_exists: true, curvatures_extend: false });
        assert!(axis_smoothness(m(2), CaseTag::GenPosPos, 1.0).is_err());
    }
}
