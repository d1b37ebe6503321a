//! Improper integrals of the form `∫ N(t) / D(t)^γ dt` whose denominator
//! vanishes at the interval ends, plus root bracketing for locating those
//! ends.
//!
//! Every interval is split at an interior point and each half is integrated in
//! a variable `s` that removes the endpoint singularity: `t = root ± L·s^k`
//! with `k = 1/(1−γ)` at simple roots and `t = c·s^{−1/p}` at convergent
//! infinite ends. Divergence is decided from the endpoint kind alone.

pub(crate) mod gauss_kronrod;
mod probe;
mod roots;
mod table;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use probe::{probe_endpoint, EndpointProbe, Side};
pub use roots::{bracket_roots, bracket_roots_with, Conditioning, Root, RootSearch};
pub use table::{profile_from_integral, Anchor, ProfileSample, ProfileTable, TableOptions};

use crate::serde_ext;

/// Default relative tolerance of [`integrate_singular`].
pub const DEFAULT_TOL: f64 = 1e-10;

const MAX_PANELS: usize = 4000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("at least 8 probes are required, got {0}")]
    TooFewProbes(usize),
    #[error("invalid interval ({lower}, {upper})")]
    InvalidInterval { lower: f64, upper: f64 },
    #[error("tolerance not reached: best estimate {best} with error {error}")]
    ToleranceNotReached { best: f64, error: f64 },
    #[error("anchor {0} lies outside the domain closure")]
    AnchorOutside(f64),
    #[error("anchor {0} sits on an endpoint where the integral diverges")]
    AnchorAtDivergentEnd(f64),
    #[error("a profile table needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("integrand is not finite at t = {0}")]
    NonFinite(f64),
}

/// Behavior of the integrand at one end of a [`DomainInterval`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EndpointKind {
    /// Simple zero of the denominator; the slope of the profile blows up but
    /// the integral converges.
    SimpleRoot,
    /// Double zero of the denominator; never integrated across.
    DoubleRoot,
    /// `α → 0` on the rotation axis, where the integrand tends to zero.
    AxisZero,
    /// Finite end where the integrand tends to zero away from the axis.
    SmoothCap,
    /// `α → ∞` with integrand decaying like `α^{−decay}`.
    Unbounded { decay: f64 },
    /// The integrand is smooth up to this end.
    Regular,
}

impl EndpointKind {
    /// Analytic divergence test for blow-up exponent `gamma`.
    pub fn is_divergent(&self, gamma: f64) -> bool {
        match *self {
            EndpointKind::DoubleRoot => 2.0 * gamma >= 1.0 - 1e-12,
            EndpointKind::Unbounded { decay } => decay <= 1.0 + 1e-12,
            _ => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            EndpointKind::SimpleRoot => "simple-root",
            EndpointKind::DoubleRoot => "double-root",
            EndpointKind::AxisZero => "axis",
            EndpointKind::SmoothCap => "smooth-cap",
            EndpointKind::Unbounded { .. } => "unbounded",
            EndpointKind::Regular => "regular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainInterval {
    pub lower: f64,
    #[serde(with = "serde_ext::extended_f64")]
    pub upper: f64,
    pub lower_kind: EndpointKind,
    pub upper_kind: EndpointKind,
}

impl DomainInterval {
    pub fn new(
        lower: f64,
        upper: f64,
        lower_kind: EndpointKind,
        upper_kind: EndpointKind,
    ) -> Result<Self, QuadratureError> {
        if !(lower >= 0.0 && lower < upper && lower.is_finite()) {
            return Err(QuadratureError::InvalidInterval { lower, upper });
        }
        if upper.is_infinite() != matches!(upper_kind, EndpointKind::Unbounded { .. }) {
            return Err(QuadratureError::InvalidInterval { lower, upper });
        }
        Ok(Self {
            lower,
            upper,
            lower_kind,
            upper_kind,
        })
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lower && x < self.upper
    }

    /// Characteristic length: the width, or the lower end for infinite
    /// intervals.
    pub fn length_scale(&self) -> f64 {
        if self.upper.is_finite() {
            self.upper - self.lower
        } else {
            self.split_point()
        }
    }

    /// Interior point where the two halves meet.
    pub fn split_point(&self) -> f64 {
        if self.upper.is_finite() {
            0.5 * (self.lower + self.upper)
        } else if self.lower > 0.0 {
            2.0 * self.lower
        } else {
            1.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum QuadratureResult {
    Finite { value: f64, error_estimate: f64 },
    Divergent { sign: i8 },
}

impl QuadratureResult {
    pub fn value(&self) -> Option<f64> {
        match self {
            QuadratureResult::Finite { value, .. } => Some(*value),
            QuadratureResult::Divergent { .. } => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, QuadratureResult::Finite { .. })
    }
}

/// `N(t) / D(t)^γ` with `D > 0` inside the interval.
#[derive(Clone, Copy)]
pub struct SingularIntegrand<N, D> {
    pub numerator: N,
    pub denominator: D,
    pub exponent: f64,
}

impl<N: Fn(f64) -> f64, D: Fn(f64) -> f64> SingularIntegrand<N, D> {
    pub fn new(numerator: N, denominator: D, exponent: f64) -> Self {
        Self {
            numerator,
            denominator,
            exponent,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.numerator)(t) / (self.denominator)(t).powf(self.exponent)
    }
}

/// Integral of the integrand from `domain.lower` to `domain.upper`.
pub fn integrate_singular<N, D>(
    integrand: &SingularIntegrand<N, D>,
    domain: &DomainInterval,
    tol: f64,
) -> Result<QuadratureResult, QuadratureError>
where
    N: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let gamma = integrand.exponent;
    let c = domain.split_point();
    if domain.lower_kind.is_divergent(gamma) || domain.upper_kind.is_divergent(gamma) {
        let g = integrand.eval(c);
        return Ok(QuadratureResult::Divergent {
            sign: if g < 0.0 { -1 } else { 1 },
        });
    }
    let mut value = 0.0;
    let mut error = 0.0;
    for half in Half::both(domain, gamma, integrand) {
        let reach = half.end_param().expect("convergent end");
        let r = half.integrate(integrand, half.split_param(), reach, tol);
        if !r.converged {
            return Err(QuadratureError::ToleranceNotReached {
                best: r.value,
                error: r.error,
            });
        }
        // Each half runs from the split point outward.
        value += half.orientation() * r.value;
        error += r.error;
    }
    Ok(QuadratureResult::Finite {
        value,
        error_estimate: error,
    })
}

/// Change of variables on one half of a domain.
#[derive(Debug, Clone, Copy)]
enum HalfMap {
    /// `t = end + dir·span·s^k`, `s ∈ [0, 1]`, split point at `s = 1`.
    Power { end: f64, dir: f64, span: f64, k: f64 },
    /// `t = start·s^{−1/p}`, split point at `s = 1`, `t → ∞` as `s → 0`.
    Reciprocal { start: f64, p: f64 },
    /// `t = start·e^s`, split point at `s = 0`; the far end is not reachable.
    Log { start: f64 },
}

/// Linear-plus-quadratic model `a·δ + b·δ²` of the denominator close to a
/// simple root, so the root position never enters through cancellation.
#[derive(Debug, Clone, Copy)]
struct RootModel {
    below: f64,
    a: f64,
    b: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Half {
    map: HalfMap,
    kind: EndpointKind,
    divergent: bool,
    model: Option<RootModel>,
}

impl Half {
    fn both<N, D>(domain: &DomainInterval, gamma: f64, integrand: &SingularIntegrand<N, D>) -> [Half; 2]
    where
        N: Fn(f64) -> f64,
        D: Fn(f64) -> f64,
    {
        let c = domain.split_point();
        let lower = Half::finite(domain.lower, c, domain.lower_kind, gamma, integrand);
        let upper = match domain.upper_kind {
            EndpointKind::Unbounded { decay } => {
                let divergent = domain.upper_kind.is_divergent(gamma);
                Half {
                    map: if divergent {
                        HalfMap::Log { start: c }
                    } else {
                        HalfMap::Reciprocal {
                            start: c,
                            p: decay - 1.0,
                        }
                    },
                    kind: domain.upper_kind,
                    divergent,
                    model: None,
                }
            }
            kind => Half::finite(domain.upper, c, kind, gamma, integrand),
        };
        [lower, upper]
    }

    fn finite<N, D>(end: f64, c: f64, kind: EndpointKind, gamma: f64, integrand: &SingularIntegrand<N, D>) -> Half
    where
        N: Fn(f64) -> f64,
        D: Fn(f64) -> f64,
    {
        let dir = if c > end { 1.0 } else { -1.0 };
        let span = (c - end).abs();
        let k = match kind {
            EndpointKind::SimpleRoot => 1.0 / (1.0 - gamma),
            EndpointKind::AxisZero => 2.0,
            _ => 1.0,
        };
        let model = (kind == EndpointKind::SimpleRoot).then(|| {
            let d0 = 1e-6 * span;
            let (t1, t2) = (end + dir * d0, end + dir * 2.0 * d0);
            // Offsets as actually represented, not as requested.
            let (x1, x2) = ((t1 - end).abs(), (t2 - end).abs());
            let (y1, y2) = ((integrand.denominator)(t1), (integrand.denominator)(t2));
            let b = (y2 / x2 - y1 / x1) / (x2 - x1);
            RootModel {
                below: d0,
                a: y1 / x1 - b * x1,
                b,
            }
        });
        Half {
            map: HalfMap::Power { end, dir, span, k },
            kind,
            divergent: kind.is_divergent(gamma),
            model,
        }
    }

    /// Converts a split-to-end integral into its share of the lower-to-upper
    /// integral: `−1` on the lower half, `+1` on the upper half.
    fn orientation(&self) -> f64 {
        match self.map {
            HalfMap::Power { dir, .. } => -dir,
            HalfMap::Reciprocal { .. } | HalfMap::Log { .. } => 1.0,
        }
    }

    fn split_param(&self) -> f64 {
        match self.map {
            HalfMap::Power { .. } | HalfMap::Reciprocal { .. } => 1.0,
            HalfMap::Log { .. } => 0.0,
        }
    }

    fn end_param(&self) -> Option<f64> {
        if self.divergent {
            return None;
        }
        match self.map {
            HalfMap::Power { .. } | HalfMap::Reciprocal { .. } => Some(0.0),
            HalfMap::Log { .. } => None,
        }
    }

    /// `(t, dt/ds, distance from the end)`.
    fn point(&self, s: f64) -> (f64, f64, f64) {
        match self.map {
            HalfMap::Power { end, dir, span, k } => {
                let delta = span * s.powf(k);
                (end + dir * delta, dir * span * k * s.powf(k - 1.0), delta)
            }
            HalfMap::Reciprocal { start, p } => {
                let t = start * s.powf(-1.0 / p);
                (t, -t / (p * s), f64::INFINITY)
            }
            HalfMap::Log { start } => {
                let t = start * s.exp();
                (t, t, f64::INFINITY)
            }
        }
    }

    /// Parameter of a sample at distance `delta` from a finite end (or at `t`
    /// for infinite ends).
    fn param_of(&self, t: f64, delta: f64) -> f64 {
        match self.map {
            HalfMap::Power { span, k, .. } => (delta / span).powf(1.0 / k),
            HalfMap::Reciprocal { start, p } => (start / t).powf(p),
            HalfMap::Log { start } => (t / start).ln(),
        }
    }

    /// `g(t(s))·dt/ds`.
    fn pulled_back<N, D>(&self, integrand: &SingularIntegrand<N, D>, s: f64) -> f64
    where
        N: Fn(f64) -> f64,
        D: Fn(f64) -> f64,
    {
        let (t, jac, delta) = self.point(s);
        if jac == 0.0 {
            return 0.0;
        }
        let den = match (self.model, self.map) {
            (Some(m), _) if delta < m.below => delta * (m.a + m.b * delta),
            (Some(m), HalfMap::Power { end, .. }) => {
                // `t` is `end ± delta` rounded; move D back to the nominal node.
                let actual = (t - end).abs();
                (integrand.denominator)(t) + (m.a + 2.0 * m.b * delta) * (delta - actual)
            }
            _ => (integrand.denominator)(t),
        };
        (integrand.numerator)(t) / den.powf(integrand.exponent) * jac
    }

    fn integrate<N, D>(
        &self,
        integrand: &SingularIntegrand<N, D>,
        from: f64,
        to: f64,
        tol: f64,
    ) -> gauss_kronrod::Adaptive
    where
        N: Fn(f64) -> f64,
        D: Fn(f64) -> f64,
    {
        let g = |s: f64| self.pulled_back(integrand, s);
        gauss_kronrod::integrate(&g, from, to, tol, MAX_PANELS)
    }
}
