use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::norm_geometry::NormParameter;
use crate::profile_solver::{
    classify, Classification, RelationForm, SolveOptions, SolveRequest, SolverError,
    WeingartenRelation,
};
use crate::surface_assembler::{mesh::DEFAULT_SEGMENTS, GlueRecipe};
use crate::verifier::DEFAULT_EPSILON;
use crate::BranchSign;

pub const DEFAULT_M: u32 = 2;
pub const DEFAULT_SAMPLES: usize = 512;
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationSelector {
    /// `k₁ + λk₂ = μ`.
    #[default]
    Linear,
    /// `k₂ = μ`.
    K2Const,
}

/// A job as written in a config file or on the command line. Every key is
/// optional; [`JobConfig::overlay`] merges layers and [`JobConfig::resolve`]
/// fills in defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct JobConfig {
    pub m: Option<u32>,
    pub relation: Option<RelationSelector>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub height: Option<f64>,
    /// `plus`/`+` or `minus`/`-`.
    pub sign: Option<String>,
    pub samples: Option<usize>,
    pub epsilon: Option<f64>,
    pub tol: Option<f64>,
    pub recipe: Option<String>,
    pub segments: Option<usize>,
    pub profile: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub obj: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

macro_rules! overlay_fields {
    ($base:ident, $top:ident; $($f:ident),*) => {
        JobConfig { $($f: $top.$f.or($base.$f)),* }
    };
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outputs {
    pub csv: Option<PathBuf>,
    pub obj: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub report: Option<PathBuf>,
}

/// A validated job.
#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub request: SolveRequest,
    pub options: SolveOptions,
    pub epsilon: f64,
    pub tol: f64,
    pub recipe: Option<GlueRecipe>,
    pub segments: usize,
    pub profile: Option<PathBuf>,
    pub outputs: Outputs,
}

fn parse_sign(text: &str) -> Result<BranchSign, IoError> {
    match text {
        "+" | "plus" => Ok(BranchSign::Plus),
        "-" | "minus" => Ok(BranchSign::Minus),
        other => Err(IoError::Config(format!("sign must be plus or minus, got {other:?}"))),
    }
}

fn positive(name: &str, v: f64) -> Result<f64, IoError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(IoError::Config(format!("{name} must be positive, got {v}")))
    }
}

impl JobConfig {
    pub fn from_toml(text: &str) -> Result<Self, IoError> {
        toml::from_str(text).map_err(|e| IoError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, IoError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Keys set in `top` win over those in `self`.
    pub fn overlay(self, top: JobConfig) -> JobConfig {
        let base = self;
        overlay_fields!(base, top;
            m, relation, lambda, mu, c1, c2, height, sign, samples, epsilon, tol,
            recipe, segments, profile, csv, obj, json, report)
    }

    pub fn resolve(&self) -> Result<Job, IoError> {
        let norm = NormParameter::new(self.m.unwrap_or(DEFAULT_M))
            .map_err(|e| IoError::Config(e.to_string()))?;
        let relation = match self.relation.unwrap_or_default() {
            RelationSelector::K2Const => WeingartenRelation::constant_k2(self.mu.unwrap_or(-1.0)),
            RelationSelector::Linear => {
                let mu = self
                    .mu
                    .ok_or_else(|| IoError::Config("mu is required for a linear relation".into()))?;
                WeingartenRelation::new(self.lambda.unwrap_or(0.0), mu)
            }
        }
        .map_err(|e| IoError::Config(e.to_string()))?;
        let constant = match relation.form() {
            RelationForm::K2Const => self.c1.unwrap_or(0.0),
            RelationForm::Homogeneous => self
                .c2
                .or(self.c1)
                .ok_or_else(|| IoError::Config("c2 (reference radius) is required".into()))?,
            _ => self
                .c1
                .ok_or_else(|| IoError::Config("c1 is required".into()))?,
        };
        let sign = self.sign.as_deref().map(parse_sign).transpose()?.unwrap_or(BranchSign::Plus);
        let request = SolveRequest::new(norm, relation, constant)
            .with_height(self.height.unwrap_or(0.0))
            .with_sign(sign);
        let samples = self.samples.unwrap_or(DEFAULT_SAMPLES);
        if samples < 8 {
            return Err(IoError::Config(format!("samples must be at least 8, got {samples}")));
        }
        let recipe = self
            .recipe
            .as_deref()
            .map(|r| {
                GlueRecipe::from_label(r).ok_or_else(|| IoError::Config(format!("unknown recipe {r:?}")))
            })
            .transpose()?;
        Ok(Job {
            request,
            options: SolveOptions::with_samples(samples),
            epsilon: positive("epsilon", self.epsilon.unwrap_or(DEFAULT_EPSILON))?,
            tol: positive("tol", self.tol.unwrap_or(DEFAULT_TOL))?,
            recipe,
            segments: self.segments.unwrap_or(DEFAULT_SEGMENTS).max(3),
            profile: self.profile.clone(),
            outputs: Outputs {
                csv: self.csv.clone(),
                obj: self.obj.clone(),
                json: self.json.clone(),
                report: self.report.clone(),
            },
        })
    }
}

impl Job {
    /// The taxonomy of the request; run before any solving.
    pub fn classify(&self) -> Result<Classification, SolverError> {
        classify(&self.request)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_beat_file_beat_defaults() {
        let file = JobConfig::from_toml("m = 3\nlambda = 1.0\nmu = -1.0\nc1 = 0.2\nsamples = 64\n").unwrap();
        let flags = JobConfig {
            c1: Some(0.3),
            ..Default::default()
        };
        let job = file.overlay(flags).resolve().unwrap();
        assert_eq!(job.request.norm.m(), 3);
        assert_eq!(job.request.constant, 0.3);
        assert_eq!(job.options.table.samples, 64);
        assert_eq!(job.epsilon, DEFAULT_EPSILON);
        assert_eq!(job.segments, DEFAULT_SEGMENTS);
    }

    #[test]
    fn homogeneous_reads_c2() {
        let cfg = JobConfig::from_toml("lambda = 0.5\nmu = 0.0\nc2 = 1.5\n").unwrap();
        assert_eq!(cfg.resolve().unwrap().request.constant, 1.5);
    }

    #[test]
    fn bad_files_are_rejected() {
        assert!(JobConfig::from_toml("lamda = 1.0\n").is_err());
        assert!(JobConfig::from_toml("m = \"two\"\n").is_err());
        let no_mu = JobConfig::from_toml("lambda = 1.0\nc1 = 0.1\n").unwrap();
        assert!(no_mu.resolve().is_err());
        let sphere = JobConfig::from_toml("relation = \"k2-const\"\nsign = \"-\"\n").unwrap();
        assert_eq!(sphere.resolve().unwrap().request.sign, BranchSign::Minus);
        let recipe = JobConfig::from_toml("mu = 1.0\nc1 = 1.0\nrecipe = \"nope\"\n").unwrap();
        assert!(recipe.resolve().is_err());
    }
}
