//! Shooting oracle: the relation as a second-order ODE for `α(u)`, integrated
//! with an embedded Dormand–Prince 5(4) pair.

use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::norm_geometry::NormParameter;
use crate::profile_solver::{slope_from_weight, SolveRequest};

/// Default local error tolerance of the oracle.
pub const ORACLE_TOL: f64 = 1e-10;
/// Smallest `|α'|` or `α` before integration stops.
const FLOOR: f64 = 1e-8;
const MAX_STEPS: usize = 200_000;

/// Initial point of a shooting run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootingStart {
    pub u: f64,
    pub alpha: f64,
    /// `dα/du`.
    pub d_alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    /// `α' → 0`: the tangent turned parallel to the profile's own axis,
    /// where `α(u)` stops being a graph.
    VerticalTangent,
    /// `α → 0`.
    AxisReached,
    /// `|α'|` or `α''` blew up (`u' → 0`).
    SlopeBlowup,
    /// The step size collapsed.
    StepUnderflow,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OraclePoint {
    pub u: f64,
    pub alpha: f64,
    pub d_alpha: f64,
}

/// Oracle solution at the requested heights, in request order; stops early
/// with a reason when the chart degenerates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRun {
    pub points: Vec<OraclePoint>,
    pub truncated: Option<Truncation>,
    pub steps: usize,
}

/// `α''` from `k₁ + λk₂ = μ` in the axis chart.
fn acceleration(p: NormParameter, lambda: f64, mu: f64, alpha: f64, da: f64) -> f64 {
    let q = p.odd() as f64;
    let two_m = p.two_m();
    let mag = da.abs();
    let a = mag.powf(two_m / q) + 1.0;
    let k1 = mu + lambda / alpha * a.powf(-1.0 / two_m);
    q * k1 * a.powf((two_m + 1.0) / two_m) * mag.powf((two_m - 2.0) / q)
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B_LOW: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Checks the start against the request's first integral.
pub fn check_start(req: &SolveRequest, start: &ShootingStart, tol: f64) -> Result<(), VerifyError> {
    let law = crate::profile_solver::classify(req)?.law;
    let w = law.weight(start.alpha);
    let want = slope_from_weight(req.norm, w).abs();
    let got = (1.0 / start.d_alpha).abs();
    let gap = (want - got).abs() / want.max(1.0);
    if !(gap <= tol) {
        return Err(VerifyError::InconsistentStart { gap });
    }
    Ok(())
}

/// `u''` from the relation in the radius chart, with curvatures taken for
/// the normal induced by increasing height.
fn radius_acceleration(p: NormParameter, lambda: f64, mu: f64, alpha: f64, du: f64) -> f64 {
    let q = p.odd() as f64;
    let two_m = p.two_m();
    let mag = du.abs();
    let a = 1.0 + mag.powf(two_m / q);
    let k2 = -a.powf(-1.0 / two_m) * du.signum() * mag.powf(1.0 / q) / alpha;
    let k1 = du.signum() * mu - lambda * k2;
    -q * k1 * a.powf((two_m + 1.0) / two_m) * mag.powf((two_m - 2.0) / q)
}

/// Which variable the oracle integrates over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleChart {
    /// `α(u)`; suited to steep profiles.
    OverAxis,
    /// `u(α)`; suited to flat profiles.
    OverRadius,
}

/// Dormand–Prince 5(4) from `(t0, y0)` to each of `targets` in turn.
/// Landed points, the event that stopped the run, and the step count.
type Dopri5Run = (Vec<(f64, [f64; 2])>, Option<Truncation>, usize);

fn dopri5<F, S>(
    f: F,
    t0: f64,
    y0: [f64; 2],
    targets: &[f64],
    tol: f64,
    stop: S,
) -> Dopri5Run
where
    F: Fn(f64, [f64; 2]) -> [f64; 2],
    S: Fn([f64; 2]) -> Option<Truncation>,
{
    let mut t = t0;
    let mut y = y0;
    let mut out = Vec::with_capacity(targets.len());
    let mut steps = 0usize;
    let mut h = 1e-3 * targets.first().map_or(1.0, |x| (x - t).abs()).max(1e-6);
    for &target in targets {
        let dir = (target - t).signum();
        while (target - t) * dir > 0.0 {
            if steps >= MAX_STEPS {
                return (out, Some(Truncation::StepUnderflow), steps);
            }
            let step = h.abs().min((target - t).abs()) * dir;
            let mut k = [[0.0; 2]; 7];
            k[0] = f(t, y);
            for s in 1..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    ys[0] += step * A[s][j] * kj[0];
                    ys[1] += step * A[s][j] * kj[1];
                }
                k[s] = f(t + C[s] * step, ys);
            }
            let mut high = y;
            let mut low = y;
            for s in 0..7 {
                high[0] += step * B[s] * k[s][0];
                high[1] += step * B[s] * k[s][1];
                low[0] += step * B_LOW[s] * k[s][0];
                low[1] += step * B_LOW[s] * k[s][1];
            }
            steps += 1;
            let scale = |i: usize| tol * (1.0 + y[i].abs().max(high[i].abs()));
            let err = ((high[0] - low[0]) / scale(0))
                .abs()
                .max(((high[1] - low[1]) / scale(1)).abs());
            if !err.is_finite() || !high[0].is_finite() || !high[1].is_finite() {
                h = step.abs() * 0.25;
                if h < 1e-14 * (1.0 + t.abs()) {
                    return (out, Some(Truncation::SlopeBlowup), steps);
                }
                continue;
            }
            if err <= 1.0 {
                t += step;
                y = high;
                if let Some(reason) = stop(y) {
                    return (out, Some(reason), steps);
                }
            }
            let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = step.abs() * factor;
            if h < 1e-14 * (1.0 + t.abs()) {
                return (out, Some(Truncation::StepUnderflow), steps);
            }
        }
        out.push((t, y));
    }
    (out, None, steps)
}

/// Integrates `α(u)` from `start` to each height in `targets`, which must be
/// monotone and on one side of `start.u`.
pub fn ode_oracle(
    req: &SolveRequest,
    start: ShootingStart,
    targets: &[f64],
    tol: f64,
) -> Result<OracleRun, VerifyError> {
    check_start(req, &start, 1e-8)?;
    let p = req.norm;
    let (lambda, mu) = req.relation.meridian_form();
    let (points, truncated, steps) = dopri5(
        |_, y| [y[1], acceleration(p, lambda, mu, y[0], y[1])],
        start.u,
        [start.alpha, start.d_alpha],
        targets,
        tol,
        |y| {
            if y[0] <= FLOOR {
                Some(Truncation::AxisReached)
            } else if y[1].abs() <= FLOOR {
                Some(Truncation::VerticalTangent)
            } else {
                None
            }
        },
    );
    Ok(OracleRun {
        points: points
            .into_iter()
            .map(|(u, y)| OraclePoint {
                u,
                alpha: y[0],
                d_alpha: y[1],
            })
            .collect(),
        truncated,
        steps,
    })
}

/// Integrates `u(α)` from `start` to each radius in `targets`.
/// Points come back as [`OraclePoint`]s with `d_alpha = 1/u'`.
pub fn ode_oracle_radius(
    req: &SolveRequest,
    start: ShootingStart,
    targets: &[f64],
    tol: f64,
) -> Result<OracleRun, VerifyError> {
    check_start(req, &start, 1e-8)?;
    let p = req.norm;
    let (lambda, mu) = req.relation.meridian_form();
    let (points, truncated, steps) = dopri5(
        |alpha, y| [y[1], radius_acceleration(p, lambda, mu, alpha, y[1])],
        start.alpha,
        [start.u, 1.0 / start.d_alpha],
        targets,
        tol,
        |y| (y[1].abs() >= 1.0 / FLOOR).then_some(Truncation::VerticalTangent),
    );
    Ok(OracleRun {
        points: points
            .into_iter()
            .map(|(alpha, y)| OraclePoint {
                u: y[0],
                alpha,
                d_alpha: 1.0 / y[1],
            })
            .collect(),
        truncated,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile_solver::WeingartenRelation;

    #[test]
    fn euclidean_circle() {
        // k₁ = 1 for m = 1: α(u) = 2 − √(1 − u²) on the inner half.
        let p = NormParameter::new(1).unwrap();
        let req = SolveRequest::new(p, WeingartenRelation::new(0.0, 1.0).unwrap(), 2.0);
        let alpha = |u: f64| 2.0 - (1.0 - u * u).sqrt();
        let d_alpha = |u: f64| u / (1.0 - u * u).sqrt();
        let start = ShootingStart {
            u: 0.3,
            alpha: alpha(0.3),
            d_alpha: d_alpha(0.3),
        };
        let targets: Vec<f64> = (1..=10).map(|i| 0.3 + 0.05 * i as f64).collect();
        let run = ode_oracle(&req, start, &targets, ORACLE_TOL).unwrap();
        assert_eq!(run.truncated, None);
        for pt in &run.points {
            assert!((pt.alpha - alpha(pt.u)).abs() < 1e-9, "{pt:?}");
        }
    }

    #[test]
    fn inconsistent_start_is_rejected() {
        let p = NormParameter::new(2).unwrap();
        let req = SolveRequest::new(p, WeingartenRelation::new(0.0, 1.0).unwrap(), 2.0);
        let start = ShootingStart {
            u: 0.0,
            alpha: 1.5,
            d_alpha: 10.0,
        };
        assert!(ode_oracle(&req, start, &[0.1], ORACLE_TOL).is_err());
    }
}
