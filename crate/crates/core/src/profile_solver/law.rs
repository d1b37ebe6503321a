use serde::{Deserialize, Serialize};

use crate::norm_geometry::NormParameter;
use crate::singular_quadrature::gauss_kronrod::kronrod15;

/// The first integral of a relation, solved for the slope weight
/// `w = ((α')^{2m/(2m−1)} + 1)^{−1/2m}` as a function of the radius `α`.
///
/// Every profile then satisfies `|u'(α)| = w^{2m−1} / (1 − w^{2m})^{(2m−1)/2m}`
/// on the set where `0 < w < 1`. In the axis orientation the curvatures are
/// `k₁ = −w'(α)` and `k₂ = −w(α)/α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum SlopeLaw {
    /// `w = offset + rate·α` (constant `k₁`, constant `k₂`, and spheres).
    Linear { offset: f64, rate: f64 },
    /// `w = (reference/α)^λ` (homogeneous relations).
    Power { reference: f64, lambda: f64 },
    /// `w = α·(constant − μ·ln α)` (`λ = −1`).
    Logarithmic { constant: f64, mu: f64 },
    /// `w = constant·α^{−λ} − μα/(λ+1)`.
    General { constant: f64, lambda: f64, mu: f64 },
}

impl SlopeLaw {
    pub fn weight(&self, a: f64) -> f64 {
        match *self {
            SlopeLaw::Linear { offset, rate } => offset + rate * a,
            SlopeLaw::Power { reference, lambda } => (reference / a).powf(lambda),
            SlopeLaw::Logarithmic { .. } if a == 0.0 => 0.0,
            SlopeLaw::Logarithmic { constant, mu } => a * (constant - mu * a.ln()),
            SlopeLaw::General {
                constant,
                lambda,
                mu,
            } => constant * a.powf(-lambda) - mu * a / (lambda + 1.0),
        }
    }

    /// `1 − w(t)` for `t` near a point `root` where `w = 1`, computed as
    /// `−∫_root^t w'` so that no cancellation occurs next to the root.
    pub fn unit_gap_near(&self, root: f64, t: f64) -> f64 {
        -kronrod15(&|s| self.weight_derivative(s), root, t).value
    }

    pub fn weight_derivative(&self, a: f64) -> f64 {
        match *self {
            SlopeLaw::Linear { rate, .. } => rate,
            SlopeLaw::Power { lambda, .. } => -lambda * self.weight(a) / a,
            SlopeLaw::Logarithmic { constant, mu } => constant - mu * a.ln() - mu,
            SlopeLaw::General {
                constant,
                lambda,
                mu,
            } => -lambda * constant * a.powf(-lambda - 1.0) - mu / (lambda + 1.0),
        }
    }

    /// The conserved expression evaluated at `(α, w)`; equals
    /// [`invariant_target`](Self::invariant_target) along a solution.
    pub fn invariant(&self, a: f64, w: f64) -> f64 {
        match *self {
            SlopeLaw::Linear { rate, .. } => w - rate * a,
            SlopeLaw::Power { lambda, .. } => a.powf(lambda) * w,
            SlopeLaw::Logarithmic { mu, .. } => w / a + mu * a.ln(),
            SlopeLaw::General { lambda, mu, .. } => {
                a.powf(lambda) * w + mu * a.powf(lambda + 1.0) / (lambda + 1.0)
            }
        }
    }

    pub fn invariant_target(&self) -> f64 {
        match *self {
            SlopeLaw::Linear { offset, .. } => offset,
            SlopeLaw::Power { reference, lambda } => reference.powf(lambda),
            SlopeLaw::Logarithmic { constant, .. } => constant,
            SlopeLaw::General { constant, .. } => constant,
        }
    }

    /// Positive radii where `w = 0`.
    pub fn weight_zeros(&self) -> Vec<f64> {
        let z = match *self {
            SlopeLaw::Linear { offset, rate } if rate != 0.0 => -offset / rate,
            SlopeLaw::Linear { .. } | SlopeLaw::Power { .. } => f64::NAN,
            SlopeLaw::Logarithmic { constant, mu } => (constant / mu).exp(),
            SlopeLaw::General {
                constant,
                lambda,
                mu,
            } => {
                let base = constant * (lambda + 1.0) / mu;
                if base > 0.0 {
                    base.powf(1.0 / (lambda + 1.0))
                } else {
                    f64::NAN
                }
            }
        };
        if z > 0.0 && z.is_finite() {
            vec![z]
        } else {
            Vec::new()
        }
    }

    /// A positive multiple of `1 − w(t)` in the algebraic form whose roots
    /// bound the admissible radii.
    pub fn unit_crossing(&self, t: f64) -> f64 {
        match *self {
            SlopeLaw::General {
                constant,
                lambda,
                mu,
            } => {
                let l1 = lambda + 1.0;
                if lambda > 0.0 {
                    l1 * t.powf(lambda) - constant * l1 + mu * t.powf(l1)
                } else if lambda > -1.0 {
                    l1 - constant * l1 * t.powf(-lambda) + mu * t
                } else {
                    let omega = -l1;
                    omega - t * (constant * omega * t.powf(omega) + mu)
                }
            }
            _ => 1.0 - self.weight(t),
        }
    }

    /// Decay exponent of `|u'|` as `α → ∞`, where the law admits an infinite
    /// domain.
    pub fn decay_at_infinity(&self, p: NormParameter) -> Option<f64> {
        match *self {
            SlopeLaw::Power { lambda, .. } if lambda > 0.0 => Some(p.odd() as f64 * lambda),
            SlopeLaw::Linear { rate: 0.0, .. } => Some(0.0),
            _ => None,
        }
    }
}

/// `|u'| = w^{2m−1} / (1 − w^{2m})^{(2m−1)/2m}`.
pub fn slope_from_weight(p: NormParameter, w: f64) -> f64 {
    let q = p.odd() as i32;
    w.powi(q) / (1.0 - w.powi(q + 1)).powf(p.blowup_exponent())
}

/// `d|u'|/dw = (2m−1)·w^{2m−2}·(1 − w^{2m})^{−(2m−1)/2m − 1}`.
pub fn slope_weight_derivative(p: NormParameter, w: f64) -> f64 {
    let q = p.odd() as i32;
    q as f64 * w.powi(q - 1) * (1.0 - w.powi(q + 1)).powf(-p.blowup_exponent() - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norm_geometry::slope_weight;

    fn m(v: u32) -> NormParameter {
        NormParameter::new(v).unwrap()
    }

    #[test]
    fn slope_inverts_weight() {
        for mm in [1, 2, 3] {
            for w in [0.1, 0.5, 0.9, 0.999] {
                let s = slope_from_weight(m(mm), w);
                assert!((slope_weight(m(mm), s) - w).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn derivatives_match_differences() {
        let laws = [
            SlopeLaw::Linear { offset: 0.3, rate: -0.7 },
            SlopeLaw::Power { reference: 1.5, lambda: -0.4 },
            SlopeLaw::Logarithmic { constant: 0.5, mu: 1.0 },
            SlopeLaw::General { constant: 0.2, lambda: 1.0, mu: -1.0 },
            SlopeLaw::General { constant: -0.1, lambda: -3.0, mu: 1.0 },
        ];
        for law in laws {
            let a = 0.8;
            let h = 1e-6;
            let fd = (law.weight(a + h) - law.weight(a - h)) / (2.0 * h);
            assert!((fd - law.weight_derivative(a)).abs() < 1e-8, "{law:?}");
            let w = law.weight(a);
            assert!((law.invariant(a, w) - law.invariant_target()).abs() < 1e-14);
            let s = law.unit_crossing(a);
            assert_eq!(s.signum(), (1.0 - w).signum(), "{law:?}");
        }
        let d = slope_weight_derivative(m(2), 0.6);
        let fd = (slope_from_weight(m(2), 0.6 + 1e-6) - slope_from_weight(m(2), 0.6 - 1e-6)) / 2e-6;
        assert!((d - fd).abs() < 1e-7);
    }

    #[test]
    fn unit_gap_at_double_root() {
        // 1 − t(1 − ln t) = (t−1)²/2 − (t−1)³/6 + …
        // w' = c − μ(1 + ln t) cancels near the root, so ~1e-10 relative is the floor.
        let law = SlopeLaw::Logarithmic { constant: 1.0, mu: 1.0 };
        for step in [1e-3_f64, 1e-6, 1e-9] {
            let d = (1.0 + step) - 1.0;
            let want = d * d / 2.0 - d * d * d / 6.0 + d.powi(4) / 12.0 - d.powi(5) / 20.0;
            let got = law.unit_gap_near(1.0, 1.0 + d);
            assert!((got - want).abs() <= 1e-9 * want, "{d}: {got} vs {want}");
        }
    }

    #[test]
    fn zeros() {
        assert_eq!(SlopeLaw::Linear { offset: 2.0, rate: -1.0 }.weight_zeros(), vec![2.0]);
        assert!(SlopeLaw::Linear { offset: 0.0, rate: 1.0 }.weight_zeros().is_empty());
        let z = SlopeLaw::Logarithmic { constant: 0.5, mu: 1.0 }.weight_zeros();
        assert!((z[0] - 0.5f64.exp()).abs() < 1e-15);
        let g = SlopeLaw::General { constant: 1.0, lambda: 1.0, mu: 1.0 };
        assert!((g.weight_zeros()[0] - 2f64.sqrt()).abs() < 1e-15);
    }
}
