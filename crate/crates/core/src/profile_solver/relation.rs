use serde::{Deserialize, Serialize};

use super::SolverError;
use crate::norm_geometry::PrincipalCurvatures;

/// Which special form a relation takes; selects the first integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationForm {
    /// `k₁ = 0`.
    K1Zero,
    /// `k₂ = μ`, which forces `μ < 0`.
    K2Const,
    /// `k₁ = μ ≠ 0`.
    K1Const,
    /// `k₁ + λk₂ = 0`, `λ ≠ 0`.
    Homogeneous,
    /// `k₁ − k₂ = μ ≠ 0`.
    InhomLambdaMinus1,
    /// `k₁ + λk₂ = μ` with `λ ∉ {0, −1}`, `μ ≠ 0`.
    InhomGeneral,
}

/// `k₁ + λ·k₂ = μ`, or `k₂ = μ` for [`RelationForm::K2Const`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeingartenRelation {
    form: RelationForm,
    lambda: f64,
    mu: f64,
}

impl WeingartenRelation {
    /// `k₁ + λk₂ = μ`; the form is read off the coefficients.
    pub fn new(lambda: f64, mu: f64) -> Result<Self, SolverError> {
        if !lambda.is_finite() || !mu.is_finite() {
            return Err(SolverError::InvalidRelation("coefficients must be finite".into()));
        }
        let form = if lambda == 0.0 && mu == 0.0 {
            RelationForm::K1Zero
        } else if lambda == 0.0 {
            RelationForm::K1Const
        } else if mu == 0.0 {
            RelationForm::Homogeneous
        } else if lambda == -1.0 {
            RelationForm::InhomLambdaMinus1
        } else {
            RelationForm::InhomGeneral
        };
        Ok(Self { form, lambda, mu })
    }

    /// `k₂ = μ`; only negative values admit a surface.
    pub fn constant_k2(mu: f64) -> Result<Self, SolverError> {
        if !(mu < 0.0) || !mu.is_finite() {
            return Err(SolverError::InvalidRelation(format!(
                "constant k2 must be negative, got {mu}"
            )));
        }
        Ok(Self {
            form: RelationForm::K2Const,
            lambda: 0.0,
            mu,
        })
    }

    pub fn form(&self) -> RelationForm {
        self.form
    }

    /// `λ`; zero for the constant-`k₂` form.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn residual(&self, k: PrincipalCurvatures) -> f64 {
        match self.form {
            RelationForm::K2Const => k.k2 - self.mu,
            _ => k.k1 + self.lambda * k.k2 - self.mu,
        }
    }

    /// Coefficients `(λ, μ)` of an equivalent `k₁ + λk₂ = μ` relation.
    ///
    /// Constant `k₂ = μ` profiles also have `k₁ = μ`, so they read as `(0, μ)`.
    pub fn meridian_form(&self) -> (f64, f64) {
        match self.form {
            RelationForm::K2Const => (0.0, self.mu),
            _ => (self.lambda, self.mu),
        }
    }

    /// The same relation for the opposite normal: `μ ↦ −μ`.
    pub fn reversed(&self) -> Self {
        Self {
            mu: -self.mu,
            ..*self
        }
    }
}

impl std::fmt::Display for WeingartenRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.form {
            RelationForm::K2Const => write!(f, "k2 = {}", self.mu),
            _ => write!(f, "k1 + {}*k2 = {}", self.lambda, self.mu),
        }
    }
}
