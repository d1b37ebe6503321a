use serde::{Deserialize, Serialize};

use super::{
    DomainInterval, EndpointKind, Half, HalfMap, QuadratureError, QuadratureResult,
    SingularIntegrand,
};
use crate::BranchSign;

/// One row `(α, u(α), u'(α))` of a profile table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub alpha: f64,
    pub u: f64,
    pub du: f64,
}

/// The point `(α₀, u₀)` the table is pinned to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anchor {
    pub alpha: f64,
    pub u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub samples: usize,
    pub tol: f64,
    /// Closest approach to a double root, relative to the half width.
    pub double_root_gap: f64,
    /// Largest sampled `α` on an infinite domain, relative to the split point.
    pub unbounded_reach: f64,
    /// Smallest non-zero sampled `α` near the axis, relative to the half width.
    pub axis_reach: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            samples: 512,
            tol: super::DEFAULT_TOL,
            double_root_gap: 1e-4,
            unbounded_reach: 1e3,
            axis_reach: 1e-6,
        }
    }
}

impl TableOptions {
    pub fn with_samples(samples: usize) -> Self {
        Self {
            samples,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileTable {
    pub samples: Vec<ProfileSample>,
    /// Integral of the (unsigned) integrand from `lower` to `upper`.
    pub across: QuadratureResult,
}

struct Point {
    t: f64,
    s: f64,
    at_end: bool,
}

/// Tabulates `u(α) = u₀ ± ∫_{α₀}^{α} g`, graded toward singular ends.
///
/// Ends where the integral converges are included as samples; divergent ends
/// are approached up to the truncation limits of `options`.
pub fn profile_from_integral<N, D>(
    integrand: &SingularIntegrand<N, D>,
    domain: &DomainInterval,
    sign: BranchSign,
    anchor: Anchor,
    options: &TableOptions,
) -> Result<ProfileTable, QuadratureError>
where
    N: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let n = options.samples;
    if n < 2 {
        return Err(QuadratureError::TooFewSamples(n));
    }
    let gamma = integrand.exponent;
    let c = domain.split_point();
    let halves = Half::both(domain, gamma, integrand);
    let n_lower = (n - 1) / 2;
    let counts = [n_lower, n - 1 - n_lower];

    let mut primitive: [Vec<(f64, f64, bool)>; 2] = [Vec::new(), Vec::new()];
    for (i, half) in halves.iter().enumerate() {
        let mut acc = 0.0;
        let mut prev = half.split_param();
        for p in sample_points(half, counts[i], c, options) {
            let r = half.integrate(integrand, prev, p.s, options.tol);
            if !r.converged {
                return Err(QuadratureError::ToleranceNotReached {
                    best: r.value,
                    error: r.error,
                });
            }
            acc += r.value;
            prev = p.s;
            primitive[i].push((p.t, acc, p.at_end));
        }
    }

    let end_value = |i: usize| -> Result<Option<f64>, QuadratureError> {
        let half = &halves[i];
        let Some(reach) = half.end_param() else {
            return Ok(None);
        };
        if let Some(&(_, g, true)) = primitive[i].last() {
            return Ok(Some(g));
        }
        let r = half.integrate(integrand, half.split_param(), reach, options.tol);
        if !r.converged {
            return Err(QuadratureError::ToleranceNotReached {
                best: r.value,
                error: r.error,
            });
        }
        Ok(Some(r.value))
    };
    let lower_end = end_value(0)?;
    let upper_end = end_value(1)?;
    let g_mid = integrand.eval(c);
    let across = match (lower_end, upper_end) {
        (Some(lo), Some(hi)) => QuadratureResult::Finite {
            value: hi - lo,
            error_estimate: options.tol * (hi.abs() + lo.abs()),
        },
        _ => QuadratureResult::Divergent {
            sign: if g_mid < 0.0 { -1 } else { 1 },
        },
    };

    let g_anchor = if anchor.alpha == domain.lower {
        lower_end.ok_or(QuadratureError::AnchorAtDivergentEnd(anchor.alpha))?
    } else if anchor.alpha == domain.upper {
        upper_end.ok_or(QuadratureError::AnchorAtDivergentEnd(anchor.alpha))?
    } else if domain.contains(anchor.alpha) {
        let i = usize::from(anchor.alpha > c);
        let half = &halves[i];
        let delta = match half.map {
            HalfMap::Power { end, .. } => (anchor.alpha - end).abs(),
            _ => f64::INFINITY,
        };
        let s = half.param_of(anchor.alpha, delta);
        let r = half.integrate(integrand, half.split_param(), s, options.tol);
        r.value
    } else {
        return Err(QuadratureError::AnchorOutside(anchor.alpha));
    };

    let sg = sign.value();
    let row = |t: f64, g: f64, at_end: bool, kind: EndpointKind| -> Result<ProfileSample, QuadratureError> {
        let du = if at_end {
            end_slope(integrand, t, kind, sg)?
        } else {
            sg * integrand.eval(t)
        };
        Ok(ProfileSample {
            alpha: t,
            u: anchor.u + sg * (g - g_anchor),
            du,
        })
    };

    let mut samples = Vec::with_capacity(n);
    for &(t, g, at_end) in primitive[0].iter().rev() {
        samples.push(row(t, g, at_end, domain.lower_kind)?);
    }
    samples.push(row(c, 0.0, false, EndpointKind::Regular)?);
    for &(t, g, at_end) in &primitive[1] {
        samples.push(row(t, g, at_end, domain.upper_kind)?);
    }
    Ok(ProfileTable { samples, across })
}

fn end_slope<N, D>(
    integrand: &SingularIntegrand<N, D>,
    t: f64,
    kind: EndpointKind,
    sign: f64,
) -> Result<f64, QuadratureError>
where
    N: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    match kind {
        EndpointKind::SimpleRoot => Ok(sign * (integrand.numerator)(t).signum() * f64::INFINITY),
        _ => {
            let g = integrand.eval(t);
            if g.is_finite() {
                Ok(sign * g)
            } else if matches!(kind, EndpointKind::AxisZero | EndpointKind::SmoothCap) {
                Ok(0.0)
            } else {
                Err(QuadratureError::NonFinite(t))
            }
        }
    }
}

/// Sample points of one half, ordered from the split point outward.
fn sample_points(half: &Half, count: usize, c: f64, options: &TableOptions) -> Vec<Point> {
    let mut out = Vec::with_capacity(count);
    let nf = count as f64;
    match half.map {
        HalfMap::Power { end, dir, span, .. } if half.divergent => {
            for j in 1..=count {
                let delta = span * options.double_root_gap.powf(j as f64 / nf);
                out.push(Point {
                    t: end + dir * delta,
                    s: half.param_of(end + dir * delta, delta),
                    at_end: false,
                });
            }
        }
        HalfMap::Power { end, dir, span, .. } => {
            let grading = match half.kind {
                EndpointKind::SimpleRoot | EndpointKind::SmoothCap => 2.0,
                EndpointKind::AxisZero if count >= 2 => {
                    (options.axis_reach.ln() / (1.0 / nf).ln()).max(1.0)
                }
                _ => 1.0,
            };
            for j in 1..=count {
                let sigma = (count - j) as f64 / nf;
                let delta = span * sigma.powf(grading);
                let t = if j == count { end } else { end + dir * delta };
                out.push(Point {
                    t,
                    s: half.param_of(t, delta),
                    at_end: j == count,
                });
            }
        }
        HalfMap::Reciprocal { .. } | HalfMap::Log { .. } => {
            for j in 1..=count {
                let t = c * options.unbounded_reach.powf(j as f64 / nf);
                out.push(Point {
                    t,
                    s: half.param_of(t, f64::INFINITY),
                    at_end: false,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_integrand_three_samples() {
        let g = SingularIntegrand::new(|_| 1.0, |_| 1.0, 0.75);
        let d = DomainInterval::new(0.0, 1.0, EndpointKind::Regular, EndpointKind::Regular).unwrap();
        let t = profile_from_integral(
            &g,
            &d,
            BranchSign::Plus,
            Anchor { alpha: 0.0, u: 0.0 },
            &TableOptions::with_samples(3),
        )
        .unwrap();
        let want = [(0.0, 0.0, 1.0), (0.5, 0.5, 1.0), (1.0, 1.0, 1.0)];
        assert_eq!(t.samples.len(), 3);
        for (s, w) in t.samples.iter().zip(want) {
            assert!((s.alpha - w.0).abs() < 1e-15);
            assert!((s.u - w.1).abs() < 1e-15);
            assert!((s.du - w.2).abs() < 1e-15);
        }
        assert!((t.across.value().unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn anchor_outside_rejected() {
        let g = SingularIntegrand::new(|_| 1.0, |_| 1.0, 0.75);
        let d = DomainInterval::new(0.0, 1.0, EndpointKind::Regular, EndpointKind::Regular).unwrap();
        let r = profile_from_integral(
            &g,
            &d,
            BranchSign::Plus,
            Anchor { alpha: 2.0, u: 0.0 },
            &TableOptions::with_samples(8),
        );
        assert_eq!(r, Err(QuadratureError::AnchorOutside(2.0)));
    }

    #[test]
    fn divergent_anchor_rejected() {
        let g = SingularIntegrand::new(|_| 1.0, |t: f64| (1.0 - t).powi(2), 0.75);
        let d = DomainInterval::new(0.0, 1.0, EndpointKind::Regular, EndpointKind::DoubleRoot).unwrap();
        let r = profile_from_integral(
            &g,
            &d,
            BranchSign::Plus,
            Anchor { alpha: 1.0, u: 0.0 },
            &TableOptions::with_samples(8),
        );
        assert_eq!(r, Err(QuadratureError::AnchorAtDivergentEnd(1.0)));
    }
}
