//! Numerical integrability test for one end of a domain, independent of the
//! endpoint's declared kind.

use serde::{Deserialize, Serialize};

use super::gauss_kronrod;
use super::{DomainInterval, SingularIntegrand};

/// Shells integrated toward a finite end; the last is `2^{-32}` of the span.
const FINITE_LEVELS: usize = 32;
/// Shells integrated toward an infinite end.
const INFINITE_LEVELS: usize = 48;
/// `growth` above `−SLACK` counts as divergent.
pub const SLACK: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// Outcome of [`probe_endpoint`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EndpointProbe {
    /// `log₂` of the ratio of the last two shell integrals. Negative when the
    /// shells shrink geometrically, zero for logarithmic growth.
    pub growth: f64,
    pub divergent: bool,
}

/// Integrates dyadic shells `[δ/2, δ]` toward the end (or `[R, 2R]` out to
/// infinity) and reads off how fast their contributions shrink.
pub fn probe_endpoint<N, D>(integrand: &SingularIntegrand<N, D>, domain: &DomainInterval, side: Side) -> EndpointProbe
where
    N: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let c = domain.split_point();
    let shell = |a: f64, b: f64| gauss_kronrod::integrate(&|t| integrand.eval(t), a, b, 1e-12, 200).value.abs();
    let shells: Vec<f64> = match (side, domain.upper.is_finite()) {
        (Side::Upper, false) => (0..INFINITE_LEVELS)
            .map(|k| {
                let r = c * 2f64.powi(k as i32);
                shell(r, 2.0 * r)
            })
            .collect(),
        _ => {
            let (end, dir) = match side {
                Side::Lower => (domain.lower, 1.0),
                Side::Upper => (domain.upper, -1.0),
            };
            let span = (c - end).abs();
            (1..=FINITE_LEVELS)
                .map(|k| {
                    let d = span * 2f64.powi(-(k as i32));
                    let (a, b) = (end + dir * 0.5 * d, end + dir * d);
                    shell(a.min(b), a.max(b))
                })
                .collect()
        }
    };
    let n = shells.len();
    let (prev, last) = (shells[n - 2], shells[n - 1]);
    let growth = if last == 0.0 {
        f64::NEG_INFINITY
    } else {
        (last / prev).log2()
    };
    EndpointProbe {
        growth,
        divergent: growth > -SLACK,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::singular_quadrature::EndpointKind;

    #[test]
    fn power_laws() {
        // (1 − t)^{−a} at t = 1: finite for a < 1.
        for (a, divergent) in [(0.5, false), (0.9, false), (1.0, true), (1.5, true)] {
            let g = SingularIntegrand::new(|_| 1.0, |t: f64| 1.0 - t, a);
            let d = DomainInterval::new(0.0, 1.0, EndpointKind::Regular, EndpointKind::SimpleRoot).unwrap();
            let p = probe_endpoint(&g, &d, Side::Upper);
            assert_eq!(p.divergent, divergent, "{a}: {p:?}");
            assert!((p.growth - (a - 1.0)).abs() < 1e-3, "{p:?}");
        }
        // t^{−p} at infinity: finite for p > 1.
        for (p, divergent) in [(0.5, true), (1.0, true), (1.1, false)] {
            let g = SingularIntegrand::new(move |t: f64| t.powf(-p), |_| 1.0, 1.0);
            let d = DomainInterval::new(1.0, f64::INFINITY, EndpointKind::Regular, EndpointKind::Unbounded { decay: p })
                .unwrap();
            assert_eq!(probe_endpoint(&g, &d, Side::Upper).divergent, divergent, "{p}");
        }
    }
}
