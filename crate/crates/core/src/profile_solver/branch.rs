use serde::{Deserialize, Serialize};

use super::law::{slope_from_weight, slope_weight_derivative, SlopeLaw};
use super::taxonomy::CaseTag;
use super::{SolveOptions, SolveRequest, SolverError};
use crate::norm_geometry::{NormParameter, PrincipalCurvatures};
use crate::singular_quadrature::{
    probe_endpoint, profile_from_integral, Anchor, DomainInterval, EndpointKind, EndpointProbe,
    ProfileSample, QuadratureResult, Side, SingularIntegrand,
};
use crate::BranchSign;

/// Radial extent sampled for the cone, whose domain is unbounded.
const CONE_REACH: f64 = 1.0;

/// One signed branch `u(α)` on one admissible interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileBranch {
    pub request: SolveRequest,
    pub tag: CaseTag,
    pub law: SlopeLaw,
    pub domain: DomainInterval,
    /// The point the additive height constant refers to. For closed-form
    /// branches this is the center of the arc and may lie outside the domain.
    pub anchor: Anchor,
    /// `∫ |u'| dα` over the whole domain.
    pub height_span: QuadratureResult,
    pub samples: Vec<ProfileSample>,
}

/// Which end of a domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Lower,
    Upper,
}

impl ProfileBranch {
    pub fn norm(&self) -> NormParameter {
        self.request.norm
    }

    pub fn sign(&self) -> BranchSign {
        self.request.sign
    }

    pub fn weight_at(&self, alpha: f64) -> f64 {
        self.law.weight(alpha)
    }

    /// `u'(α)` from the first integral, accurate up to the ends where `w = 1`.
    pub fn slope_at(&self, alpha: f64) -> f64 {
        let p = self.norm();
        let w = self.law.weight(alpha);
        let defect = unit_defect(p, self.law, &self.domain, alpha);
        self.sign().value() * w.powi(p.odd() as i32) / defect.powf(p.blowup_exponent())
    }

    /// `u''(α)` by the chain rule through the weight.
    pub fn second_slope_at(&self, alpha: f64) -> f64 {
        let w = self.law.weight(alpha);
        self.sign().value() * slope_weight_derivative(self.norm(), w) * self.law.weight_derivative(alpha)
    }

    /// Curvatures for the normal induced by increasing height.
    pub fn curvatures_at(&self, alpha: f64) -> PrincipalCurvatures {
        PrincipalCurvatures {
            k1: -self.law.weight_derivative(alpha),
            k2: -self.law.weight(alpha) / alpha,
        }
    }

    pub fn end(&self, end: End) -> f64 {
        match end {
            End::Lower => self.domain.lower,
            End::Upper => self.domain.upper,
        }
    }

    pub fn end_kind(&self, end: End) -> EndpointKind {
        match end {
            End::Lower => self.domain.lower_kind,
            End::Upper => self.domain.upper_kind,
        }
    }

    /// The table row at `end`, when the profile reaches it at finite height.
    pub fn end_sample(&self, end: End) -> Option<ProfileSample> {
        let s = match end {
            End::Lower => self.samples.first(),
            End::Upper => self.samples.last(),
        }?;
        (s.alpha == self.end(end)).then_some(*s)
    }

    /// Numerical integrability of `u'` at both ends of the domain.
    pub fn probe_ends(&self) -> [EndpointProbe; 2] {
        let (p, law, domain) = (self.norm(), self.law, self.domain);
        let q = p.odd() as i32;
        let integrand = SingularIntegrand::new(
            |t: f64| law.weight(t).powi(q),
            |t: f64| unit_defect(p, law, &domain, t),
            p.blowup_exponent(),
        );
        [Side::Lower, Side::Upper].map(|side| probe_endpoint(&integrand, &domain, side))
    }

    /// Moves the branch by `dz` along the axis.
    pub fn shifted(&self, dz: f64) -> Self {
        let mut out = self.clone();
        out.request.height += dz;
        out.anchor.u += dz;
        for s in &mut out.samples {
            s.u += dz;
        }
        out
    }

    /// The other sign, reflected through the anchor height.
    pub fn mirrored(&self) -> Self {
        let mut out = self.clone();
        out.request.sign = self.sign().flipped();
        let u0 = self.anchor.u;
        for s in &mut out.samples {
            s.u = 2.0 * u0 - s.u;
            s.du = -s.du;
        }
        out
    }
}

/// `1 − w^{2m}` from an accurate `1 − w` near the roots of `w = 1`.
fn unit_defect(p: NormParameter, law: SlopeLaw, domain: &DomainInterval, t: f64) -> f64 {
    let reach = 0.25 * domain.length_scale();
    let gap = [
        (domain.lower, domain.lower_kind),
        (domain.upper, domain.upper_kind),
    ]
    .into_iter()
    .find(|&(r, k)| {
        matches!(k, EndpointKind::SimpleRoot | EndpointKind::DoubleRoot)
            && (t - r).abs() < reach.min(0.25 * r)
    })
    .map_or_else(|| 1.0 - law.weight(t), |(r, _)| law.unit_gap_near(r, t));
    -(p.two_m() * (-gap).ln_1p()).exp_m1()
}

fn anchor_end(tag: CaseTag, domain: &DomainInterval) -> End {
    if domain.lower_kind == EndpointKind::SimpleRoot {
        End::Lower
    } else if domain.upper_kind == EndpointKind::SimpleRoot || tag.prefers_upper_anchor() {
        End::Upper
    } else {
        End::Lower
    }
}

/// Linear part `(offset, rate)` when the weight is affine in `α`.
fn affine(law: SlopeLaw) -> Option<(f64, f64)> {
    match law {
        SlopeLaw::Linear { offset, rate } => Some((offset, rate)),
        SlopeLaw::General {
            constant: 0.0,
            lambda,
            mu,
        } => Some((0.0, -mu / (lambda + 1.0))),
        _ => None,
    }
}

fn smoothstep(s: f64) -> f64 {
    s * s * (3.0 - 2.0 * s)
}

pub(crate) fn build_branch(
    request: &SolveRequest,
    tag: CaseTag,
    law: SlopeLaw,
    domain: DomainInterval,
    options: &SolveOptions,
) -> Result<ProfileBranch, SolverError> {
    let p = request.norm;
    let sg = request.sign.value();
    let n = options.table.samples.max(2);
    if let Some((offset, rate)) = affine(law) {
        let end_slope = |alpha: f64, kind: EndpointKind| match kind {
            EndpointKind::SimpleRoot => sg * f64::INFINITY,
            _ => sg * slope_from_weight(p, offset + rate * alpha),
        };
        let c = request.height;
        if rate == 0.0 {
            let slope = sg * slope_from_weight(p, offset);
            let samples = (0..n)
                .map(|j| {
                    let alpha = CONE_REACH * j as f64 / (n - 1) as f64;
                    ProfileSample {
                        alpha,
                        u: c + slope * alpha,
                        du: slope,
                    }
                })
                .collect();
            return Ok(ProfileBranch {
                request: *request,
                tag,
                law,
                domain,
                anchor: Anchor { alpha: 0.0, u: c },
                height_span: QuadratureResult::Divergent { sign: 1 },
                samples,
            });
        }
        let two_m = p.two_m();
        let arc = |alpha: f64| (1.0 - (offset + rate * alpha).powf(two_m)).max(0.0).powf(1.0 / two_m);
        let height = |alpha: f64| c - sg / rate * arc(alpha);
        let (lo, hi) = (domain.lower, domain.upper);
        let samples = (0..n)
            .map(|j| {
                let alpha = if j == 0 {
                    lo
                } else if j == n - 1 {
                    hi
                } else {
                    lo + (hi - lo) * smoothstep(j as f64 / (n - 1) as f64)
                };
                let du = if j == 0 {
                    end_slope(alpha, domain.lower_kind)
                } else if j == n - 1 {
                    end_slope(alpha, domain.upper_kind)
                } else {
                    sg * slope_from_weight(p, offset + rate * alpha)
                };
                ProfileSample {
                    alpha,
                    u: height(alpha),
                    du,
                }
            })
            .collect();
        return Ok(ProfileBranch {
            request: *request,
            tag,
            law,
            domain,
            anchor: Anchor {
                alpha: (1.0 - offset) / rate,
                u: c,
            },
            height_span: QuadratureResult::Finite {
                value: ((arc(lo) - arc(hi)) / rate).abs(),
                error_estimate: 0.0,
            },
            samples,
        });
    }

    let q = p.odd() as i32;
    let denominator = |t: f64| unit_defect(p, law, &domain, t);
    let integrand = SingularIntegrand::new(
        |t: f64| law.weight(t).powi(q),
        denominator,
        p.blowup_exponent(),
    );
    let anchor = Anchor {
        alpha: match anchor_end(tag, &domain) {
            End::Lower => domain.lower,
            End::Upper => domain.upper,
        },
        u: request.height,
    };
    let table = profile_from_integral(&integrand, &domain, request.sign, anchor, &options.table)?;
    Ok(ProfileBranch {
        request: *request,
        tag,
        law,
        domain,
        anchor,
        height_span: table.across,
        samples: table.samples,
    })
}
