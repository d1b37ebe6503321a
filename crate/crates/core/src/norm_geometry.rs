//! The rotationally symmetric norm, its Birkhoff–Gauss map on surfaces of
//! revolution, and the resulting principal curvatures.
//!
//! All fractional powers with denominator `2m − 1` use the real odd root, so
//! profiles with negative slope are handled without complex arithmetic.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("norm exponent m must be at least 1, got {0}")]
    InvalidExponent(u32),
    #[error("odd-root power needs an odd positive denominator, got {0}")]
    EvenDenominator(u32),
    #[error("zero raised to the negative power {p}/{q}")]
    ZeroToNegativePower { p: i32, q: u32 },
    #[error("profile derivative must be non-zero")]
    ZeroDerivative,
    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),
    #[error("profile slope vector must be non-zero")]
    ZeroTangent,
}

/// The exponent `m` of `Φ(x) = (x₁² + x₂²)ᵐ + x₃²ᵐ`.
///
/// `m = 1` is the Euclidean norm and is kept for cross-checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NormParameter {
    m: u32,
}

impl NormParameter {
    pub fn new(m: u32) -> Result<Self, GeometryError> {
        if m == 0 {
            return Err(GeometryError::InvalidExponent(m));
        }
        Ok(Self { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn two_m(&self) -> f64 {
        2.0 * self.m as f64
    }

    /// `2m − 1`, the odd denominator of every fractional exponent.
    pub fn odd(&self) -> u32 {
        2 * self.m - 1
    }

    /// `(2m − 1)/2m`, the blow-up exponent of the profile integrands.
    pub fn blowup_exponent(&self) -> f64 {
        (2.0 * self.m as f64 - 1.0) / (2.0 * self.m as f64)
    }
}

/// `Φ(x) = (x₁² + x₂²)ᵐ + x₃²ᵐ`; the unit sphere is `Φ = 1`.
pub fn phi(p: NormParameter, x: [f64; 3]) -> f64 {
    let m = p.m() as i32;
    (x[0] * x[0] + x[1] * x[1]).powi(m) + (x[2] * x[2]).powi(m)
}

/// The norm itself, `Φ(x)^{1/2m}`.
pub fn norm(p: NormParameter, x: [f64; 3]) -> f64 {
    phi(p, x).powf(1.0 / p.two_m())
}

/// `sign(x)^p · |x|^{p/q}` for odd `q`.
pub fn signed_odd_root_pow(x: f64, p: i32, q: u32) -> Result<f64, GeometryError> {
    if q.is_multiple_of(2) {
        return Err(GeometryError::EvenDenominator(q));
    }
    if x == 0.0 && p < 0 {
        return Err(GeometryError::ZeroToNegativePower { p, q });
    }
    Ok(odd_pow(x, p, q))
}

/// Unchecked variant of [`signed_odd_root_pow`] for inner loops.
#[inline]
pub(crate) fn odd_pow(x: f64, p: i32, q: u32) -> f64 {
    let mag = x.abs().powf(p as f64 / q as f64);
    if x < 0.0 && p % 2 != 0 {
        -mag
    } else {
        mag
    }
}

/// Which coordinate plays the role of the curve parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// `β(u) = u`; the profile is the radius `α(u)` over the axis.
    GraphOverAxis,
    /// `α(u) = u`; the profile is the height `β(u)` over the radius.
    GraphOverRadius,
}

/// Second-order jet of a profile at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileJet {
    pub chart: Chart,
    /// `α` or `β` at the point.
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    /// Distance to the axis (`α`, which equals `u` in the radius chart).
    pub radius: f64,
}

impl ProfileJet {
    /// Jet of `α(u)` with `β(u) = u`.
    pub fn over_axis(alpha: f64, d_alpha: f64, dd_alpha: f64) -> Self {
        Self {
            chart: Chart::GraphOverAxis,
            value: alpha,
            d1: d_alpha,
            d2: dd_alpha,
            radius: alpha,
        }
    }

    /// Jet of `β(u)` with `α(u) = u`, taken at radius `u`.
    pub fn over_radius(u: f64, beta: f64, d_beta: f64, dd_beta: f64) -> Self {
        Self {
            chart: Chart::GraphOverRadius,
            value: beta,
            d1: d_beta,
            d2: dd_beta,
            radius: u,
        }
    }

    fn validate(&self) -> Result<(), GeometryError> {
        if self.d1 == 0.0 {
            return Err(GeometryError::ZeroDerivative);
        }
        if !(self.radius > 0.0) {
            return Err(GeometryError::NonPositiveRadius(self.radius));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BirkhoffFrame {
    /// Unit Birkhoff normal, `Φ(eta) = 1`.
    pub eta: [f64; 3],
    /// `(α′)^{2m/(2m−1)} + (β′)^{2m/(2m−1)}`.
    pub a: f64,
}

/// Birkhoff normal of the rotational surface `(α cos v, α sin v, β)` for the
/// tangent slopes `(α′, β′)` at angle `v`.
pub fn birkhoff_normal(
    p: NormParameter,
    d_alpha: f64,
    d_beta: f64,
    v: f64,
) -> Result<BirkhoffFrame, GeometryError> {
    if d_alpha == 0.0 && d_beta == 0.0 {
        return Err(GeometryError::ZeroTangent);
    }
    let q = p.odd();
    let two_m = 2 * p.m() as i32;
    let a = odd_pow(d_alpha, two_m, q) + odd_pow(d_beta, two_m, q);
    assert!(a > 0.0, "A must be positive for a non-zero tangent");
    let scale = a.powf(-1.0 / p.two_m());
    let rb = odd_pow(d_beta, 1, q);
    let ra = odd_pow(d_alpha, 1, q);
    Ok(BirkhoffFrame {
        eta: [-scale * rb * v.cos(), -scale * rb * v.sin(), scale * ra],
        a,
    })
}

/// Meridian (`k1`) and parallel (`k2`) curvature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrincipalCurvatures {
    pub k1: f64,
    pub k2: f64,
}

impl PrincipalCurvatures {
    /// Curvatures for the opposite Birkhoff normal.
    pub fn flipped(self) -> Self {
        Self {
            k1: -self.k1,
            k2: -self.k2,
        }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Self {
            k1: self.k1 * factor,
            k2: self.k2 * factor,
        }
    }
}

/// Principal curvatures in the jet's own chart orientation.
///
/// In the radius chart the normal is the one induced by increasing radius; use
/// [`axis_oriented_curvatures`] to compare with the axis chart.
pub fn principal_curvatures(
    p: NormParameter,
    jet: &ProfileJet,
) -> Result<PrincipalCurvatures, GeometryError> {
    jet.validate()?;
    Ok(match jet.chart {
        Chart::GraphOverAxis => axis_chart(p, jet.radius, jet.d1, jet.d2),
        Chart::GraphOverRadius => radius_chart(p, jet.radius, jet.d1, jet.d2),
    })
}

/// Curvatures with respect to the normal induced by increasing height `x₃`.
///
/// A radius-chart jet with `β′ < 0` traverses the meridian downward, so its
/// curvatures are negated.
pub fn axis_oriented_curvatures(
    p: NormParameter,
    jet: &ProfileJet,
) -> Result<PrincipalCurvatures, GeometryError> {
    let k = principal_curvatures(p, jet)?;
    Ok(match jet.chart {
        Chart::GraphOverRadius if jet.d1 < 0.0 => k.flipped(),
        _ => k,
    })
}

pub(crate) fn axis_chart(p: NormParameter, alpha: f64, da: f64, dda: f64) -> PrincipalCurvatures {
    let q = p.odd();
    let two_m = p.two_m();
    let a = odd_pow(da, 2 * p.m() as i32, q) + 1.0;
    let k1 = a.powf(-(two_m + 1.0) / two_m) * odd_pow(da, -(2 * p.m() as i32 - 2), q) * dda
        / q as f64;
    let k2 = -a.powf(-1.0 / two_m) / alpha;
    PrincipalCurvatures { k1, k2 }
}

pub(crate) fn radius_chart(p: NormParameter, u: f64, db: f64, ddb: f64) -> PrincipalCurvatures {
    let q = p.odd();
    let two_m = p.two_m();
    let a = 1.0 + odd_pow(db, 2 * p.m() as i32, q);
    let k1 = -a.powf(-(two_m + 1.0) / two_m) * odd_pow(db, -(2 * p.m() as i32 - 2), q) * ddb
        / q as f64;
    let k2 = -a.powf(-1.0 / two_m) * odd_pow(db, 1, q) / u;
    PrincipalCurvatures { k1, k2 }
}

/// `k₁ + λ k₂ − μ`.
pub fn weingarten_residual(k: PrincipalCurvatures, lambda: f64, mu: f64) -> f64 {
    k.k1 + lambda * k.k2 - mu
}

/// `((α′)^{2m/(2m−1)} + 1)^{−1/2m}` written in terms of `u′ = 1/α′`.
///
/// This is the quantity the first integrals pin down; it lies in `[0, 1)`.
pub fn slope_weight(p: NormParameter, du: f64) -> f64 {
    if du.is_infinite() {
        return 1.0;
    }
    let r = odd_pow(du, 2 * p.m() as i32, p.odd());
    (r / (1.0 + r)).powf(1.0 / p.two_m())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(v: u32) -> NormParameter {
        NormParameter::new(v).unwrap()
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi(m(2), [1.0, 0.0, 0.0]), 1.0);
        assert_eq!(phi(m(2), [0.0, 0.0, 1.0]), 1.0);
        assert_eq!(phi(m(2), [1.0, 1.0, 1.0]), 5.0);
    }

    #[test]
    fn odd_roots() {
        assert_eq!(signed_odd_root_pow(-1.0, 1, 3).unwrap(), -1.0);
        assert_eq!(signed_odd_root_pow(-1.0, 4, 3).unwrap(), 1.0);
        assert!((signed_odd_root_pow(8.0, 2, 3).unwrap() - 4.0).abs() < 1e-14);
        assert!(matches!(
            signed_odd_root_pow(0.0, -2, 3),
            Err(GeometryError::ZeroToNegativePower { .. })
        ));
        assert!(signed_odd_root_pow(2.0, 1, 4).is_err());
    }

    #[test]
    fn rejects_m_zero() {
        assert!(NormParameter::new(0).is_err());
    }

    #[test]
    fn normal_examples() {
        let f = birkhoff_normal(m(2), 1.0, 1.0, 0.0).unwrap();
        let s = 2f64.powf(-0.25);
        assert!((f.a - 2.0).abs() < 1e-15);
        assert!((f.eta[0] + s).abs() < 1e-15 && f.eta[1].abs() < 1e-15);
        assert!((f.eta[2] - s).abs() < 1e-15);
        assert!((phi(m(2), f.eta) - 1.0).abs() < 1e-12);

        let f = birkhoff_normal(m(2), 1.0, 0.0, 0.0).unwrap();
        assert_eq!(f.a, 1.0);
        assert_eq!(f.eta, [0.0, 0.0, 1.0]);

        let f = birkhoff_normal(m(3), -1.0, 1.0, std::f64::consts::FRAC_PI_2).unwrap();
        let s = 2f64.powf(-1.0 / 6.0);
        assert!((f.a - 2.0).abs() < 1e-15);
        assert!(f.eta[0].abs() < 1e-15);
        assert!((f.eta[1] + s).abs() < 1e-15);
        assert!((f.eta[2] + s).abs() < 1e-15);
        assert!((phi(m(3), f.eta) - 1.0).abs() < 1e-12);

        assert!(birkhoff_normal(m(2), 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn cylinder_and_sphere_curvatures() {
        let k = principal_curvatures(m(2), &ProfileJet::over_axis(1.0, 1.0, 0.0)).unwrap();
        assert_eq!(k.k1, 0.0);
        assert!((k.k2 + 2f64.powf(-0.25)).abs() < 1e-15);

        let a = 2f64.powf(-0.25);
        let dd = -6.0 * 2f64.powf(0.25);
        let k = principal_curvatures(m(2), &ProfileJet::over_axis(a, -1.0, dd)).unwrap();
        assert!((k.k1 + 1.0).abs() < 1e-14 && (k.k2 + 1.0).abs() < 1e-14);

        let jet = ProfileJet::over_radius(a, a, -1.0, dd);
        let raw = principal_curvatures(m(2), &jet).unwrap();
        assert!((raw.k1 - 1.0).abs() < 1e-14 && (raw.k2 - 1.0).abs() < 1e-14);
        let k = axis_oriented_curvatures(m(2), &jet).unwrap();
        assert!((k.k1 + 1.0).abs() < 1e-14 && (k.k2 + 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_derivative_rejected() {
        let r = principal_curvatures(m(2), &ProfileJet::over_axis(1.0, 0.0, 1.0));
        assert_eq!(r, Err(GeometryError::ZeroDerivative));
        let r = principal_curvatures(m(2), &ProfileJet::over_axis(-1.0, 1.0, 1.0));
        assert!(matches!(r, Err(GeometryError::NonPositiveRadius(_))));
    }

    #[test]
    fn residual_examples() {
        let k = PrincipalCurvatures { k1: -1.0, k2: -1.0 };
        assert_eq!(weingarten_residual(k, 1.0, -2.0), 0.0);
        let k = PrincipalCurvatures { k1: 0.0, k2: -0.84 };
        assert!((weingarten_residual(k, 0.5, 0.0) + 0.42).abs() < 1e-15);
        let k = PrincipalCurvatures { k1: 1.0, k2: 123.0 };
        assert_eq!(weingarten_residual(k, 0.0, 1.0), 0.0);
    }

    #[test]
    fn slope_weight_limits() {
        assert_eq!(slope_weight(m(2), 0.0), 0.0);
        assert_eq!(slope_weight(m(2), f64::INFINITY), 1.0);
        // u' = 1 gives A = 2.
        assert!((slope_weight(m(2), 1.0) - 2f64.powf(-0.25)).abs() < 1e-15);
    }
}
