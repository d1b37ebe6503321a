//! Representative requests, one per case tag.
#![allow(dead_code)]

use normweingarten::norm_geometry::NormParameter;
use normweingarten::profile_solver::{CaseTag, SolveRequest, WeingartenRelation};

pub fn norm(m: u32) -> NormParameter {
    NormParameter::new(m).unwrap()
}

pub fn request(m: u32, lambda: f64, mu: f64, c: f64) -> SolveRequest {
    SolveRequest::new(norm(m), WeingartenRelation::new(lambda, mu).unwrap(), c)
}

/// `1/((λ+1)(−λ)^{−λ})`, the double-root constant for `−1 < λ < 0`, `μ = 1`.
pub fn mid_boundary(lambda: f64) -> f64 {
    let nu = -lambda;
    1.0 / ((lambda + 1.0) * nu.powf(nu))
}

/// `−1/(ω(ω+1)^{ω+1})` with `ω = −(λ+1)`, the double-root constant for
/// `λ < −1`, `μ = 1`.
pub fn low_boundary(lambda: f64) -> f64 {
    let omega = -(lambda + 1.0);
    -1.0 / (omega * (omega + 1.0).powf(omega + 1.0))
}

/// `(tags, request)` pairs covering every case tag.
pub fn matrix(m: u32) -> Vec<(Vec<CaseTag>, SolveRequest)> {
    use CaseTag::*;
    let homog_bounded = if m == 2 { 0.5 } else { 0.4 };
    vec![
        (vec![Cone], request(m, 0.0, 0.0, 0.5)),
        (
            vec![UnitSphere],
            SolveRequest::new(norm(m), WeingartenRelation::constant_k2(-1.0).unwrap(), 0.0),
        ),
        (vec![MeridianArcPositive], request(m, 0.0, 1.0, 2.0)),
        (vec![MeridianArcNegative], request(m, 0.0, -1.0, -2.0)),
        (vec![HomogeneousOuterBounded], request(m, homog_bounded, 0.0, 1.0)),
        (vec![HomogeneousOuterUnbounded], request(m, 0.1, 0.0, 1.0)),
        (vec![HomogeneousInner], request(m, -1.5, 0.0, 1.0)),
        (vec![DiffPosJoined], request(m, -1.0, 1.0, 0.5)),
        (vec![DiffPosCriticalInner, DiffPosCriticalOuter], request(m, -1.0, 1.0, 1.0)),
        (vec![DiffPosSplitInner, DiffPosSplitOuter], request(m, -1.0, 1.0, 1.5)),
        (vec![DiffNeg], request(m, -1.0, -1.0, 1.0)),
        (vec![GenPosPos], request(m, 1.0, 1.0, 0.5)),
        (vec![GenPosNegSphere], request(m, 2.0, -1.0, 0.0)),
        (vec![GenPosNegBand], request(m, 1.0, -1.0, 0.2)),
        (vec![GenPosNegShell], request(m, 1.0, -1.0, -0.2)),
        (vec![GenMidPosJoined], request(m, -0.5, 1.0, 1.0)),
        (
            vec![GenMidPosCriticalInner, GenMidPosCriticalOuter],
            request(m, -0.5, 1.0, mid_boundary(-0.5)),
        ),
        (vec![GenMidPosSplitInner, GenMidPosSplitOuter], request(m, -0.5, 1.0, 4.0)),
        (vec![GenMidNegSphere], request(m, -0.5, -1.0, 0.0)),
        (vec![GenMidNegDisk], request(m, -0.5, -1.0, 0.5)),
        (vec![GenMidNegShell], request(m, -0.5, -1.0, -0.5)),
        (vec![GenLowPosSphere], request(m, -3.0, 1.0, 0.0)),
        (vec![GenLowPosDisk], request(m, -3.0, 1.0, 0.1)),
        (vec![GenLowPosJoined], request(m, -3.0, 1.0, -0.1)),
        (
            vec![GenLowPosCriticalInner, GenLowPosCriticalOuter],
            request(m, -3.0, 1.0, low_boundary(-3.0)),
        ),
        (vec![GenLowPosSplitInner, GenLowPosSplitOuter], request(m, -3.0, 1.0, -0.01)),
        (vec![GenLowNeg], request(m, -3.0, -1.0, 0.5)),
    ]
}
