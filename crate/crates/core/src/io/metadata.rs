use serde::{Deserialize, Serialize};

use crate::profile_solver::{CaseTag, ClassificationWarning, ProfileBranch, SolveRequest};
use crate::singular_quadrature::{Anchor, DomainInterval, QuadratureResult};
use crate::surface_assembler::{AssembledSurface, CoincidenceFlag, GlueRecipe, Topology};
use crate::BranchSign;

pub const METADATA_VERSION: u32 = 1;

/// One generated branch; `height_span` is `∫|u'|dα` over the whole domain
/// with its quadrature error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceMetadata {
    pub tag: CaseTag,
    pub sign: BranchSign,
    pub lambda: f64,
    pub mu: f64,
    pub constant: f64,
    pub height: f64,
    pub domain: DomainInterval,
    pub anchor: Anchor,
    pub height_span: QuadratureResult,
    pub samples: usize,
}

impl From<&ProfileBranch> for PieceMetadata {
    fn from(b: &ProfileBranch) -> Self {
        Self {
            tag: b.tag,
            sign: b.sign(),
            lambda: b.request.relation.lambda(),
            mu: b.request.relation.mu(),
            constant: b.request.constant,
            height: b.request.height,
            domain: b.domain,
            anchor: b.anchor,
            height_span: b.height_span,
            samples: b.samples.len(),
        }
    }
}

/// What a `generate` run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub version: u32,
    pub m: u32,
    pub lambda: f64,
    pub mu: f64,
    pub constant: f64,
    pub height: f64,
    pub recipe: Option<GlueRecipe>,
    pub topology: Option<Topology>,
    pub period: Option<f64>,
    pub flags: Vec<CoincidenceFlag>,
    pub warnings: Vec<ClassificationWarning>,
    pub pieces: Vec<PieceMetadata>,
}

impl RunMetadata {
    pub fn for_branches(
        req: &SolveRequest,
        branches: &[ProfileBranch],
        warnings: Vec<ClassificationWarning>,
    ) -> Self {
        Self {
            version: METADATA_VERSION,
            m: req.norm.m(),
            lambda: req.relation.lambda(),
            mu: req.relation.mu(),
            constant: req.constant,
            height: req.height,
            recipe: None,
            topology: None,
            period: None,
            flags: Vec::new(),
            warnings,
            pieces: branches.iter().map(PieceMetadata::from).collect(),
        }
    }

    pub fn for_surface(
        req: &SolveRequest,
        surface: &AssembledSurface,
        warnings: Vec<ClassificationWarning>,
    ) -> Self {
        let branches: Vec<_> = surface.pieces.iter().map(|p| p.branch.clone()).collect();
        Self {
            recipe: surface.recipe,
            topology: Some(surface.topology),
            period: surface.period,
            flags: surface.flags.clone(),
            ..Self::for_branches(req, &branches, warnings)
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("metadata serializes")
    }
}
