use serde::{Deserialize, Serialize};

use super::law::SlopeLaw;
use super::relation::RelationForm;
use super::taxonomy::CaseTag;
use super::{SolveRequest, SolverError};
use crate::norm_geometry::NormParameter;
use crate::serde_ext;
use crate::singular_quadrature::{
    bracket_roots_with, Conditioning, DomainInterval, EndpointKind, RootSearch,
};

const BOUNDARY_TOL: f64 = 1e-12;
const NEAR_BOUNDARY: f64 = 1e-6;
const PROBES: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "warning", rename_all = "kebab-case")]
pub enum ClassificationWarning {
    /// The constant sits exactly on a taxonomy boundary; a double root was
    /// placed at its analytic location.
    AtBoundary { boundary: f64 },
    /// The constant is within `1e-6` (relative) of a boundary.
    NearBoundary { boundary: f64, distance: f64 },
    /// A simple root whose slope is nearly flat.
    IllConditionedRoot { location: f64, slope: f64 },
}

impl std::fmt::Display for ClassificationWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassificationWarning::AtBoundary { boundary } => {
                write!(f, "constant on the taxonomy boundary {boundary}")
            }
            ClassificationWarning::NearBoundary { boundary, distance } => write!(
                f,
                "constant within {distance:.1e} (relative) of the taxonomy boundary {boundary}"
            ),
            ClassificationWarning::IllConditionedRoot { location, slope } => write!(
                f,
                "ill-conditioned domain endpoint at {location} (slope {slope:.1e})"
            ),
        }
    }
}

/// One admissible interval with its label.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedPiece {
    pub tag: CaseTag,
    pub domain: DomainInterval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub law: SlopeLaw,
    /// Lengths of the normalized problem are multiplied by this.
    #[serde(with = "serde_ext::extended_f64")]
    pub length_scale: f64,
    pub pieces: Vec<ClassifiedPiece>,
    pub warnings: Vec<ClassificationWarning>,
}

impl Classification {
    pub fn tags(&self) -> Vec<CaseTag> {
        self.pieces.iter().map(|p| p.tag).collect()
    }
}

/// The slope law of the request in its own units.
pub(crate) fn law_of(req: &SolveRequest) -> SlopeLaw {
    let (lambda, mu) = (req.relation.lambda(), req.relation.mu());
    let c = req.constant;
    match req.relation.form() {
        RelationForm::K1Zero => SlopeLaw::Linear {
            offset: c,
            rate: 0.0,
        },
        RelationForm::K2Const => SlopeLaw::Linear {
            offset: 0.0,
            rate: -mu,
        },
        RelationForm::K1Const => SlopeLaw::Linear {
            offset: c,
            rate: -mu,
        },
        RelationForm::Homogeneous => SlopeLaw::Power {
            reference: c,
            lambda,
        },
        RelationForm::InhomLambdaMinus1 => SlopeLaw::Logarithmic { constant: c, mu },
        RelationForm::InhomGeneral => SlopeLaw::General {
            constant: c,
            lambda,
            mu,
        },
    }
}

/// Rescales `law` so that `|μ| = 1` (or the reference radius is 1); returns
/// the rescaled law and the length unit.
pub fn normalize(law: SlopeLaw) -> (SlopeLaw, f64) {
    match law {
        SlopeLaw::Linear { offset, rate } => {
            if rate == 0.0 {
                (law, 1.0)
            } else {
                (
                    SlopeLaw::Linear {
                        offset,
                        rate: rate.signum(),
                    },
                    1.0 / rate.abs(),
                )
            }
        }
        SlopeLaw::Power { reference, lambda } => (
            SlopeLaw::Power {
                reference: 1.0,
                lambda,
            },
            reference,
        ),
        SlopeLaw::Logarithmic { constant, mu } => (
            SlopeLaw::Logarithmic {
                constant: constant / mu.abs() + mu.signum() * mu.abs().ln(),
                mu: mu.signum(),
            },
            1.0 / mu.abs(),
        ),
        SlopeLaw::General {
            constant,
            lambda,
            mu,
        } => (
            SlopeLaw::General {
                constant: constant * mu.abs().powf(lambda),
                lambda,
                mu: mu.signum(),
            },
            1.0 / mu.abs(),
        ),
    }
}

fn no_surface(reason: &str) -> SolverError {
    SolverError::NoSurface {
        reason: reason.to_string(),
    }
}

fn relative_gap(c: f64, boundary: f64) -> f64 {
    (c - boundary).abs() / boundary.abs().max(f64::MIN_POSITIVE)
}

/// A taxonomy boundary of a normalized law: the constant where a double
/// root appears, and where that root sits.
#[derive(Debug, Clone, Copy)]
struct Boundary {
    constant: f64,
    root: f64,
}

fn boundary_of(law: SlopeLaw) -> Option<Boundary> {
    match law {
        SlopeLaw::Logarithmic { mu, .. } if mu > 0.0 => Some(Boundary {
            constant: 1.0,
            root: 1.0,
        }),
        SlopeLaw::General { lambda, mu, .. } if mu > 0.0 && lambda > -1.0 && lambda < 0.0 => {
            let nu = -lambda;
            Some(Boundary {
                constant: 1.0 / ((lambda + 1.0) * nu.powf(nu)),
                root: nu,
            })
        }
        SlopeLaw::General { lambda, mu, .. } if mu > 0.0 && lambda < -1.0 => {
            let omega = -(lambda + 1.0);
            Some(Boundary {
                constant: -1.0 / (omega * (omega + 1.0).powf(omega + 1.0)),
                root: omega + 1.0,
            })
        }
        SlopeLaw::General { lambda, mu, .. } if mu < 0.0 && lambda > 0.0 => Some(Boundary {
            constant: lambda.powf(lambda) / (lambda + 1.0),
            root: lambda,
        }),
        _ => None,
    }
}

fn law_constant(law: SlopeLaw) -> f64 {
    match law {
        SlopeLaw::Linear { offset, .. } => offset,
        SlopeLaw::Power { reference, .. } => reference,
        SlopeLaw::Logarithmic { constant, .. } | SlopeLaw::General { constant, .. } => constant,
    }
}

/// Tags the admissible pieces must carry, in increasing `α`.
fn expected_tags(
    form: RelationForm,
    law: SlopeLaw,
    p: NormParameter,
) -> Result<Vec<CaseTag>, SolverError> {
    use CaseTag::*;
    let c = law_constant(law);
    let on = |b: Option<Boundary>| b.is_some_and(|b| relative_gap(c, b.constant) <= BOUNDARY_TOL);
    let below = |b: Option<Boundary>| b.is_some_and(|b| c < b.constant);
    let boundary = boundary_of(law);
    let tags = match (form, law) {
        (RelationForm::K1Zero, _) => {
            if !(c > 0.0 && c < 1.0) {
                return Err(no_surface("cone slope weight must satisfy 0 < c₁ < 1"));
            }
            vec![Cone]
        }
        (RelationForm::K2Const, _) => vec![UnitSphere],
        (RelationForm::K1Const, SlopeLaw::Linear { rate, .. }) => {
            if rate < 0.0 {
                if c <= 0.0 {
                    return Err(no_surface("c₁ ≤ 0 with μ > 0"));
                }
                vec![MeridianArcPositive]
            } else {
                if c >= 1.0 {
                    return Err(no_surface("c₁ ≥ 1 with μ < 0"));
                }
                vec![MeridianArcNegative]
            }
        }
        (RelationForm::Homogeneous, SlopeLaw::Power { lambda, .. }) => {
            if !(c > 0.0) {
                return Err(no_surface("c₂ ≤ 0"));
            }
            if lambda < 0.0 {
                vec![HomogeneousInner]
            } else if p.odd() as f64 * lambda > 1.0 + BOUNDARY_TOL {
                vec![HomogeneousOuterBounded]
            } else {
                vec![HomogeneousOuterUnbounded]
            }
        }
        (RelationForm::InhomLambdaMinus1, SlopeLaw::Logarithmic { mu, .. }) => {
            if mu < 0.0 {
                vec![DiffNeg]
            } else if on(boundary) {
                vec![DiffPosCriticalInner, DiffPosCriticalOuter]
            } else if below(boundary) {
                vec![DiffPosJoined]
            } else {
                vec![DiffPosSplitInner, DiffPosSplitOuter]
            }
        }
        (RelationForm::InhomGeneral, SlopeLaw::General { lambda, mu, .. }) => {
            let pos = mu > 0.0;
            if lambda > 0.0 {
                if pos {
                    if c <= 0.0 {
                        return Err(no_surface("c₁ ≤ 0 with λ > 0, μ > 0"));
                    }
                    vec![GenPosPos]
                } else if c == 0.0 {
                    vec![GenPosNegSphere]
                } else if c < 0.0 {
                    vec![GenPosNegShell]
                } else if below(boundary) && !on(boundary) {
                    vec![GenPosNegBand]
                } else {
                    return Err(no_surface("c₁ ≥ λ^λ/(λ+1)"));
                }
            } else if lambda > -1.0 {
                if pos {
                    if c <= 0.0 {
                        return Err(no_surface("c₁ ≤ 0 with −1 < λ < 0, μ > 0"));
                    }
                    if on(boundary) {
                        vec![GenMidPosCriticalInner, GenMidPosCriticalOuter]
                    } else if below(boundary) {
                        vec![GenMidPosJoined]
                    } else {
                        vec![GenMidPosSplitInner, GenMidPosSplitOuter]
                    }
                } else if c == 0.0 {
                    vec![GenMidNegSphere]
                } else if c > 0.0 {
                    vec![GenMidNegDisk]
                } else {
                    vec![GenMidNegShell]
                }
            } else if pos {
                if c == 0.0 {
                    vec![GenLowPosSphere]
                } else if c > 0.0 {
                    vec![GenLowPosDisk]
                } else if on(boundary) {
                    vec![GenLowPosCriticalInner, GenLowPosCriticalOuter]
                } else if below(boundary) {
                    vec![GenLowPosJoined]
                } else {
                    vec![GenLowPosSplitInner, GenLowPosSplitOuter]
                }
            } else {
                if c <= 0.0 {
                    return Err(no_surface("c₁ ≤ 0 with λ < −1, μ < 0"));
                }
                vec![GenLowNeg]
            }
        }
        _ => unreachable!("law does not match relation form"),
    };
    Ok(tags)
}

/// Roots of `w = 1` in the normalized variable.
fn unit_roots(
    law: SlopeLaw,
    warnings: &mut Vec<ClassificationWarning>,
) -> Result<Vec<(f64, EndpointKind)>, SolverError> {
    match law {
        SlopeLaw::Linear { offset, rate } => {
            let x = (1.0 - offset) / rate;
            Ok(if rate != 0.0 && x > 0.0 {
                vec![(x, EndpointKind::SimpleRoot)]
            } else {
                Vec::new()
            })
        }
        SlopeLaw::Power { .. } => Ok(vec![(1.0, EndpointKind::SimpleRoot)]),
        _ => {
            let c = law_constant(law);
            if let Some(b) = boundary_of(law) {
                if relative_gap(c, b.constant) <= BOUNDARY_TOL {
                    warnings.push(ClassificationWarning::AtBoundary {
                        boundary: b.constant,
                    });
                    return Ok(vec![(b.root, EndpointKind::DoubleRoot)]);
                }
                let gap = relative_gap(c, b.constant);
                if gap <= NEAR_BOUNDARY {
                    warnings.push(ClassificationWarning::NearBoundary {
                        boundary: b.constant,
                        distance: gap,
                    });
                }
            }
            let roots = bracket_roots_with(
                |t| law.unit_crossing(t),
                RootSearch::new(0.0, f64::INFINITY, PROBES),
            )?;
            Ok(roots
                .into_iter()
                .map(|r| {
                    if r.conditioning == Conditioning::Ill {
                        warnings.push(ClassificationWarning::IllConditionedRoot {
                            location: r.location,
                            slope: r.slope,
                        });
                    }
                    let kind = if r.multiplicity == 2 {
                        EndpointKind::DoubleRoot
                    } else {
                        EndpointKind::SimpleRoot
                    };
                    (r.location, kind)
                })
                .collect())
        }
    }
}

/// Admissible intervals `0 < w < 1` of a normalized law.
fn admissible(
    law: SlopeLaw,
    p: NormParameter,
    warnings: &mut Vec<ClassificationWarning>,
) -> Result<Vec<(f64, f64, EndpointKind, EndpointKind)>, SolverError> {
    let mut cuts: Vec<(f64, EndpointKind)> = law
        .weight_zeros()
        .into_iter()
        .map(|z| (z, EndpointKind::SmoothCap))
        .collect();
    cuts.extend(unit_roots(law, warnings)?);
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut ends = vec![(0.0, EndpointKind::AxisZero)];
    ends.extend(cuts);
    let decay = law.decay_at_infinity(p);
    ends.push((
        f64::INFINITY,
        EndpointKind::Unbounded {
            decay: decay.unwrap_or(f64::NAN),
        },
    ));

    let mut out = Vec::new();
    for pair in ends.windows(2) {
        let ((a, ka), (b, kb)) = (pair[0], pair[1]);
        if !(b > a) {
            continue;
        }
        let probe = if b.is_finite() { 0.5 * (a + b) } else { 2.0 * a + 1.0 };
        let w = law.weight(probe);
        if !(w > 0.0 && w < 1.0) {
            continue;
        }
        if b.is_infinite() && decay.is_none() {
            return Err(SolverError::Inconsistent(
                "admissible set is unbounded but the law has no decay at infinity".into(),
            ));
        }
        out.push((a, b, ka, kb));
    }
    Ok(out)
}

/// Labels the request and finds its admissible radii.
pub fn classify(req: &SolveRequest) -> Result<Classification, SolverError> {
    req.validate()?;
    let law = law_of(req);
    let (unit_law, scale) = normalize(law);
    let tags = expected_tags(req.relation.form(), unit_law, req.norm)?;
    let mut warnings = Vec::new();
    let found = admissible(unit_law, req.norm, &mut warnings)?;
    if found.len() != tags.len() {
        return Err(SolverError::Inconsistent(format!(
            "expected {} admissible interval(s) for {}, found {}",
            tags.len(),
            tags.iter().map(|t| t.label()).collect::<Vec<_>>().join(", "),
            found.len()
        )));
    }
    let pieces = tags
        .into_iter()
        .zip(found)
        .map(|(tag, (a, b, ka, kb))| {
            Ok(ClassifiedPiece {
                tag,
                domain: DomainInterval::new(a * scale, b * scale, ka, kb)?,
            })
        })
        .collect::<Result<Vec<_>, SolverError>>()?;
    Ok(Classification {
        law,
        length_scale: scale,
        pieces,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile_solver::{SolveRequest, WeingartenRelation};

    fn req(m: u32, lambda: f64, mu: f64, c: f64) -> SolveRequest {
        SolveRequest::new(
            NormParameter::new(m).unwrap(),
            WeingartenRelation::new(lambda, mu).unwrap(),
            c,
        )
    }

    #[test]
    fn normalization_preserves_weight() {
        let laws = [
            SlopeLaw::Logarithmic { constant: 0.7, mu: 2.5 },
            SlopeLaw::Logarithmic { constant: 0.7, mu: -0.4 },
            SlopeLaw::General { constant: 0.3, lambda: 1.5, mu: -3.0 },
            SlopeLaw::General { constant: -0.3, lambda: -2.5, mu: 0.5 },
            SlopeLaw::Power { reference: 2.0, lambda: 0.5 },
            SlopeLaw::Linear { offset: 0.4, rate: -4.0 },
        ];
        for law in laws {
            let (unit, scale) = normalize(law);
            for a in [0.1, 0.5, 1.3] {
                assert!((law.weight(a) - unit.weight(a / scale)).abs() < 1e-13, "{law:?}");
            }
        }
    }

    #[test]
    fn homogeneous_threshold() {
        let c = classify(&req(2, 0.5, 0.0, 1.0)).unwrap();
        assert_eq!(c.tags(), vec![CaseTag::HomogeneousOuterBounded]);
        let d = c.pieces[0].domain;
        assert_eq!((d.lower, d.upper), (1.0, f64::INFINITY));
        assert_eq!(d.lower_kind, EndpointKind::SimpleRoot);
        assert_eq!(d.upper_kind, EndpointKind::Unbounded { decay: 1.5 });
        let c = classify(&req(2, 1.0 / 3.0, 0.0, 1.0)).unwrap();
        assert_eq!(c.tags(), vec![CaseTag::HomogeneousOuterUnbounded]);
    }

    #[test]
    fn band_roots() {
        let c = classify(&req(2, 1.0, -1.0, 0.2)).unwrap();
        assert_eq!(c.tags(), vec![CaseTag::GenPosNegBand]);
        let d = c.pieces[0].domain;
        let s = 0.6f64.sqrt();
        assert!((d.lower - (1.0 - s)).abs() < 1e-13);
        assert!((d.upper - (1.0 + s)).abs() < 1e-13);
        let e = classify(&req(2, 1.0, -1.0, 0.6)).unwrap_err();
        assert_eq!(e, no_surface("c₁ ≥ λ^λ/(λ+1)"));
    }

    #[test]
    fn log_cases() {
        let c = classify(&req(2, -1.0, 1.0, 0.5)).unwrap();
        assert_eq!(c.tags(), vec![CaseTag::DiffPosJoined]);
        assert!((c.pieces[0].domain.upper - 0.5f64.exp()).abs() < 1e-14);
        let c = classify(&req(2, -1.0, 1.0, 1.0)).unwrap();
        assert_eq!(c.pieces.len(), 2);
        assert_eq!(c.pieces[0].domain.upper, 1.0);
        assert_eq!(c.pieces[1].domain.lower_kind, EndpointKind::DoubleRoot);
        let c = classify(&req(2, -1.0, -1.0, 1.0)).unwrap();
        let d = c.pieces[0].domain;
        assert!((d.lower - (-1f64).exp()).abs() < 1e-15);
        assert!((d.upper - 1.0).abs() < 1e-13);
    }
}
