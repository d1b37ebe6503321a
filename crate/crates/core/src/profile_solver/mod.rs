//! Classification of relations and integration constants, and sampled
//! profile branches.
//!
//! Every admissible profile is written as a graph `u(α)` over the radius. The
//! relation integrates once to a [`SlopeLaw`] `w(α)`, and the profile is
//! `u(α) = u₀ ± ∫ w^{2m−1} / (1 − w^{2m})^{(2m−1)/2m} dα` on each interval
//! where `0 < w < 1`.

mod branch;
mod classify;
mod law;
mod relation;
mod taxonomy;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use branch::{End, ProfileBranch};
pub use classify::{classify, normalize, Classification, ClassificationWarning, ClassifiedPiece};
pub use law::{slope_from_weight, slope_weight_derivative, SlopeLaw};
pub use relation::{RelationForm, WeingartenRelation};
pub use taxonomy::CaseTag;


use crate::norm_geometry::NormParameter;
use crate::singular_quadrature::{QuadratureError, TableOptions};
use crate::BranchSign;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("invalid constant: {0}")]
    InvalidConstant(String),
    #[error("no surface: {reason}")]
    NoSurface { reason: String },
    #[error("classification is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Everything needed to produce the branches of one solution family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub norm: NormParameter,
    pub relation: WeingartenRelation,
    /// The integration constant of the relation's first integral:
    /// the slope weight for `k₁ = 0`, the reference radius for homogeneous
    /// relations, and the additive constant `c₁` otherwise. Ignored for
    /// constant `k₂`.
    pub constant: f64,
    /// Additive height constant; where it is pinned depends on the case.
    pub height: f64,
    pub sign: BranchSign,
}

impl SolveRequest {
    pub fn new(norm: NormParameter, relation: WeingartenRelation, constant: f64) -> Self {
        Self {
            norm,
            relation,
            constant,
            height: 0.0,
            sign: BranchSign::Plus,
        }
    }

    pub fn with_height(mut self, height: f64) -> Self {
        self.height = height;
        self
    }

    pub fn with_sign(mut self, sign: BranchSign) -> Self {
        self.sign = sign;
        self
    }

    pub(crate) fn validate(&self) -> Result<(), SolverError> {
        if !self.height.is_finite() {
            return Err(SolverError::InvalidConstant("height must be finite".into()));
        }
        if self.relation.form() == RelationForm::K2Const {
            return Ok(());
        }
        if !self.constant.is_finite() {
            return Err(SolverError::InvalidConstant(format!(
                "constant must be finite, got {}",
                self.constant
            )));
        }
        if self.relation.form() == RelationForm::Homogeneous && self.constant <= 0.0 {
            return Err(SolverError::InvalidConstant(format!(
                "reference radius must be positive, got {}",
                self.constant
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    pub table: TableOptions,
}

impl SolveOptions {
    pub fn with_samples(samples: usize) -> Self {
        Self {
            table: TableOptions::with_samples(samples),
        }
    }
}

/// One branch per admissible interval, all with the request's sign and
/// height constant.
pub fn solve(req: &SolveRequest, options: &SolveOptions) -> Result<Vec<ProfileBranch>, SolverError> {
    let cls = classify(req)?;
    cls.pieces
        .iter()
        .map(|piece| branch::build_branch(req, piece.tag, cls.law, piece.domain, options))
        .collect()
}

fn single(req: &SolveRequest) -> Result<ProfileBranch, SolverError> {
    let mut branches = solve(req, &SolveOptions::default())?;
    if branches.len() != 1 {
        return Err(SolverError::Inconsistent(format!(
            "expected one branch, found {}",
            branches.len()
        )));
    }
    Ok(branches.remove(0))
}

/// `k₂ = −1`: the unit sphere of the norm, centered at height `center`.
pub fn solve_constant_k2(
    p: NormParameter,
    center: f64,
    sign: BranchSign,
) -> Result<ProfileBranch, SolverError> {
    let relation = WeingartenRelation::constant_k2(-1.0)?;
    single(&SolveRequest::new(p, relation, 0.0).with_height(center).with_sign(sign))
}

/// `k₁ = μ`, with weight `w = c₁ − μα` and arc center at height `center`.
pub fn solve_constant_k1(
    p: NormParameter,
    mu: f64,
    c1: f64,
    center: f64,
    sign: BranchSign,
) -> Result<ProfileBranch, SolverError> {
    if mu == 0.0 {
        return Err(SolverError::InvalidRelation("constant k1 needs μ ≠ 0".into()));
    }
    let relation = WeingartenRelation::new(0.0, mu)?;
    single(&SolveRequest::new(p, relation, c1).with_height(center).with_sign(sign))
}

/// `k₁ + λk₂ = 0` with reference radius `c2 > 0`.
pub fn solve_homogeneous(
    p: NormParameter,
    lambda: f64,
    c2: f64,
    sign: BranchSign,
) -> Result<ProfileBranch, SolverError> {
    if lambda == 0.0 {
        return Err(SolverError::InvalidRelation("homogeneous relation needs λ ≠ 0".into()));
    }
    let relation = WeingartenRelation::new(lambda, 0.0)?;
    single(&SolveRequest::new(p, relation, c2).with_sign(sign))
}

/// `k₁ − k₂ = μ`.
pub fn solve_inhom_lambda_minus1(
    p: NormParameter,
    mu: f64,
    c1: f64,
    sign: BranchSign,
) -> Result<Vec<ProfileBranch>, SolverError> {
    if mu == 0.0 {
        return Err(SolverError::InvalidRelation("inhomogeneous relation needs μ ≠ 0".into()));
    }
    let relation = WeingartenRelation::new(-1.0, mu)?;
    solve(&SolveRequest::new(p, relation, c1).with_sign(sign), &SolveOptions::default())
}

/// `k₁ + λk₂ = μ` with `λ ∉ {0, −1}`.
pub fn solve_inhom_general(
    p: NormParameter,
    lambda: f64,
    mu: f64,
    c1: f64,
    sign: BranchSign,
) -> Result<Vec<ProfileBranch>, SolverError> {
    let relation = WeingartenRelation::new(lambda, mu)?;
    if relation.form() != RelationForm::InhomGeneral {
        return Err(SolverError::InvalidRelation(format!(
            "{relation} is not of the general inhomogeneous form"
        )));
    }
    solve(&SolveRequest::new(p, relation, c1).with_sign(sign), &SolveOptions::default())
}
