//! Gluing profile branches into complete profiles of rotational surfaces.
//!
//! Two kinds of joints occur:
//!
//! * a **cap**, where `w = 1` and `u' = ±∞`: the `+` and `−` branches of one
//!   family meet and the profile turns back in `α`. Smoothness is judged in
//!   the inverse chart `α̂(u)`.
//! * a **fold**, where `w = 0` and `u' = 0`: a family with constant `c` and
//!   `μ` meets the family with `−c` and `−μ`, whose weight is exactly `−w`.
//!   Smoothness is judged on `u''(α)` from both sides.

mod axis;
mod limits;
pub mod mesh;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use axis::{axis_numerics, axis_smoothness, AxisNumerics, AxisVerdict};
pub use limits::{derivative, one_sided_limit, OneSided};

use crate::norm_geometry::NormParameter;
use crate::profile_solver::{
    solve, CaseTag, End, ProfileBranch, SlopeLaw, SolveOptions, SolveRequest, SolverError,
    WeingartenRelation,
};
use crate::singular_quadrature::{EndpointKind, ProfileSample};
use crate::BranchSign;

/// `u` values closer than this count as joined.
pub const JOIN_TOL: f64 = 1e-10;
/// First-derivative limits closer than this count as matching.
pub const SLOPE_TOL: f64 = 1e-8;
/// Second-derivative limits closer than this (relative to `max(1, |u''|)`)
/// count as matching.
pub const SECOND_TOL: f64 = 1e-4;
/// Curvature jumps above this are reported.
pub const CURVATURE_JUMP: f64 = 1e-3;
/// Height offsets below this are treated as a numerical coincidence.
pub const COINCIDENCE_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AssemblyError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("recipe {recipe} needs a {expected} piece, got {found}")]
    WrongPiece {
        recipe: GlueRecipe,
        expected: CaseTag,
        found: CaseTag,
    },
    #[error("gluing mismatch: {0}")]
    GluingMismatch(String),
    #[error("{0} has no simple root to cap")]
    NoSimpleRoot(CaseTag),
    #[error("not periodic: {0}")]
    NotPeriodic(String),
    #[error("{0} does not reach the axis")]
    NoAxis(CaseTag),
}

/// How pieces are joined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GlueRecipe {
    /// The two signs of one family joined at its simple root(s).
    Cap,
    /// `λ = −1`: axis piece and closing piece, with the same sign on both
    /// sides of the fold. `u''` matches but `k₁` jumps.
    DiffSphereMirrored,
    /// `λ = −1`: axis piece and closing piece, curvature-continuous.
    DiffSphere,
    /// `λ = −1` at the double-root constant: two divergent ends.
    DiffCritical,
    /// `λ = −1`, split constant: a periodic profile.
    DiffPeriodic,
    /// `λ > 0`: a periodic profile.
    GenPosPeriodic,
    /// `−1 < λ < 0`: axis to axis.
    GenMidSphere,
    /// `−1 < λ < 0` at the double-root constant.
    GenMidCritical,
    /// `−1 < λ < 0`: a periodic profile.
    GenMidPeriodic,
    /// `λ < −1`: axis to axis.
    GenLowSphere,
    /// `λ < −1` at the double-root constant.
    GenLowCritical,
    /// `λ < −1`: a periodic profile.
    GenLowPeriodic,
    /// Constant `k₁`: two arcs closing into a torus.
    ArcTorus,
}

impl std::fmt::Display for GlueRecipe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Order and direction in which the four branches of a fold recipe are
/// traversed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pattern {
    /// Axis, fold, cap, fold, axis; curvature-continuous.
    AxisToAxis,
    /// Like `AxisToAxis` with the closing piece's signs swapped.
    AxisToAxisMirrored,
    /// Fold, cap, fold, cap, fold: one period.
    Period,
}

impl GlueRecipe {
    pub const ALL: [GlueRecipe; 13] = [
        GlueRecipe::Cap,
        GlueRecipe::DiffSphereMirrored,
        GlueRecipe::DiffSphere,
        GlueRecipe::DiffCritical,
        GlueRecipe::DiffPeriodic,
        GlueRecipe::GenPosPeriodic,
        GlueRecipe::GenMidSphere,
        GlueRecipe::GenMidCritical,
        GlueRecipe::GenMidPeriodic,
        GlueRecipe::GenLowSphere,
        GlueRecipe::GenLowCritical,
        GlueRecipe::GenLowPeriodic,
        GlueRecipe::ArcTorus,
    ];

    pub fn label(self) -> &'static str {
        match self {
            GlueRecipe::Cap => "cap",
            GlueRecipe::DiffSphereMirrored => "diff-sphere-mirrored",
            GlueRecipe::DiffSphere => "diff-sphere",
            GlueRecipe::DiffCritical => "diff-critical",
            GlueRecipe::DiffPeriodic => "diff-periodic",
            GlueRecipe::GenPosPeriodic => "gen-pos-periodic",
            GlueRecipe::GenMidSphere => "gen-mid-sphere",
            GlueRecipe::GenMidCritical => "gen-mid-critical",
            GlueRecipe::GenMidPeriodic => "gen-mid-periodic",
            GlueRecipe::GenLowSphere => "gen-low-sphere",
            GlueRecipe::GenLowCritical => "gen-low-critical",
            GlueRecipe::GenLowPeriodic => "gen-low-periodic",
            GlueRecipe::ArcTorus => "arc-torus",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|r| r.label() == label)
    }

    /// Tags of the piece with `μ > 0` and of the piece with `μ < 0`.
    pub fn fold_tags(self) -> Option<(CaseTag, CaseTag)> {
        use CaseTag::*;
        Some(match self {
            GlueRecipe::Cap => return None,
            GlueRecipe::DiffSphereMirrored | GlueRecipe::DiffSphere => (DiffPosJoined, DiffNeg),
            GlueRecipe::DiffCritical => (DiffPosCriticalOuter, DiffNeg),
            GlueRecipe::DiffPeriodic => (DiffPosSplitOuter, DiffNeg),
            GlueRecipe::GenPosPeriodic => (GenPosPos, GenPosNegShell),
            GlueRecipe::GenMidSphere => (GenMidPosJoined, GenMidNegShell),
            GlueRecipe::GenMidCritical => (GenMidPosCriticalOuter, GenMidNegShell),
            GlueRecipe::GenMidPeriodic => (GenMidPosSplitOuter, GenMidNegShell),
            GlueRecipe::GenLowSphere => (GenLowPosJoined, GenLowNeg),
            GlueRecipe::GenLowCritical => (GenLowPosCriticalOuter, GenLowNeg),
            GlueRecipe::GenLowPeriodic => (GenLowPosSplitOuter, GenLowNeg),
            GlueRecipe::ArcTorus => (MeridianArcPositive, MeridianArcNegative),
        })
    }

    fn pattern(self) -> Pattern {
        match self {
            GlueRecipe::DiffSphereMirrored => Pattern::AxisToAxisMirrored,
            GlueRecipe::DiffPeriodic
            | GlueRecipe::GenPosPeriodic
            | GlueRecipe::GenMidPeriodic
            | GlueRecipe::GenLowPeriodic
            | GlueRecipe::ArcTorus => Pattern::Period,
            _ => Pattern::AxisToAxis,
        }
    }
}

/// Direction in which a piece is traversed along the profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Traversal {
    /// `α` increasing.
    Outward,
    /// `α` decreasing.
    Inward,
}

impl Traversal {
    fn value(self) -> f64 {
        match self {
            Traversal::Outward => 1.0,
            Traversal::Inward => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedPiece {
    pub branch: ProfileBranch,
    pub traversal: Traversal,
}

impl OrientedPiece {
    /// `±1`: the profile normal agrees (`+1`) or disagrees with the normal
    /// induced by increasing height on this piece.
    pub fn orientation(&self) -> f64 {
        self.branch.sign().value() * self.traversal.value()
    }

    /// `μ` as seen with the profile's own normal.
    pub fn effective_mu(&self) -> f64 {
        self.orientation() * self.branch.request.relation.meridian_form().1
    }

    pub fn start(&self) -> End {
        match self.traversal {
            Traversal::Outward => End::Lower,
            Traversal::Inward => End::Upper,
        }
    }

    pub fn finish(&self) -> End {
        match self.traversal {
            Traversal::Outward => End::Upper,
            Traversal::Inward => End::Lower,
        }
    }

    /// Samples in traversal order.
    pub fn ordered_samples(&self) -> Vec<ProfileSample> {
        let mut s = self.branch.samples.clone();
        if self.traversal == Traversal::Inward {
            s.reverse();
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JunctionKind {
    Fold,
    Cap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Smoothness {
    C1,
    C2,
    /// `C²` profile whose meridian curvature (with the profile normal)
    /// jumps.
    C2WithCurvatureJump,
    Singular,
}

/// Where two consecutive pieces meet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Junction {
    pub alpha_star: f64,
    pub kind: JunctionKind,
    /// Piece indices; for the closing joint of a period `right` is `0`.
    pub left: usize,
    pub right: usize,
    pub u_gap: f64,
    /// One-sided limits of `u'` (fold) or `dα̂/du` (cap).
    pub first: [OneSided; 2],
    /// One-sided limits of `u''` (fold) or `d²α̂/du²` (cap).
    pub second: [OneSided; 2],
    /// `k₁` on each side with the profile normal.
    pub k1: [f64; 2],
    pub smoothness: Smoothness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    Disk,
    SphereLike,
    Torus,
    PeriodicTube,
    OpenAnnulus,
    Cone,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisPoint {
    pub piece: usize,
    pub u: f64,
    pub verdict: AxisVerdict,
}

/// Numerical coincidences the profile may exhibit; never a proof.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "flag", rename_all = "kebab-case")]
pub enum CoincidenceFlag {
    /// One period shifts by less than the tolerance: the profile may close
    /// into a torus.
    MayBeTorus { shift: f64 },
    /// Both axis points land at the same height.
    PolesCoincide { gap: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssembledSurface {
    pub recipe: Option<GlueRecipe>,
    pub pieces: Vec<OrientedPiece>,
    pub junctions: Vec<Junction>,
    pub topology: Topology,
    pub axis_points: Vec<AxisPoint>,
    /// Height gained over one traversal of a profile meant to repeat.
    pub period: Option<f64>,
    pub flags: Vec<CoincidenceFlag>,
}

impl AssembledSurface {
    pub fn norm(&self) -> NormParameter {
        self.pieces[0].branch.norm()
    }

    /// The profile polyline `(α, u)` in traversal order without repeated
    /// junction points.
    pub fn profile(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for piece in &self.pieces {
            for s in piece.ordered_samples() {
                if let Some(&(a, u)) = out.last() {
                    if a == s.alpha && (u - s.u).abs() <= JOIN_TOL {
                        continue;
                    }
                }
                out.push((s.alpha, s.u));
            }
        }
        if self.topology == Topology::Torus && out.len() > 1 {
            let (a0, u0) = out[0];
            let &(a1, u1) = out.last().expect("non-empty");
            if a0 == a1 && (u0 - u1).abs() <= JOIN_TOL {
                out.pop();
            }
        }
        out
    }

    pub fn is_closed_loop(&self) -> bool {
        self.topology == Topology::Torus
    }

    /// A single branch as a surface with boundary.
    pub fn single(branch: &ProfileBranch) -> Result<Self, AssemblyError> {
        let piece = OrientedPiece {
            branch: branch.clone(),
            traversal: Traversal::Outward,
        };
        let topology = if branch.tag == CaseTag::Cone {
            Topology::Cone
        } else if branch.domain.lower_kind == EndpointKind::AxisZero {
            Topology::Disk
        } else {
            Topology::OpenAnnulus
        };
        let pieces = vec![piece];
        let axis_points = axis_points(&pieces)?;
        Ok(Self {
            recipe: None,
            pieces,
            junctions: Vec::new(),
            topology,
            axis_points,
            period: None,
            flags: Vec::new(),
        })
    }
}

fn end_u(piece: &OrientedPiece, end: End) -> Result<f64, AssemblyError> {
    piece
        .branch
        .end_sample(end)
        .map(|s| s.u)
        .ok_or_else(|| {
            AssemblyError::GluingMismatch(format!(
                "{} does not reach its {:?} end at finite height",
                piece.branch.tag, end
            ))
        })
}

/// Shifts each piece after the first so consecutive pieces meet.
fn chain(mut pieces: Vec<OrientedPiece>) -> Result<Vec<OrientedPiece>, AssemblyError> {
    for i in 1..pieces.len() {
        let target = end_u(&pieces[i - 1], pieces[i - 1].finish())?;
        let here = end_u(&pieces[i], pieces[i].start())?;
        pieces[i].branch = pieces[i].branch.shifted(target - here);
    }
    Ok(pieces)
}

/// Analyzes the joint where `left` finishes and `right` starts; `right_shift`
/// is added to `right`'s heights (one period for the closing joint).
fn junction(
    pieces: &[OrientedPiece],
    li: usize,
    ri: usize,
    right_shift: f64,
) -> Result<Junction, AssemblyError> {
    let (left, right) = (&pieces[li], &pieces[ri]);
    let lend = left.finish();
    let rend = right.start();
    let alpha_star = left.branch.end(lend);
    let other = right.branch.end(rend);
    if (alpha_star - other).abs() > JOIN_TOL * alpha_star.abs().max(1.0) {
        return Err(AssemblyError::GluingMismatch(format!(
            "pieces meet at different radii {alpha_star} and {other}"
        )));
    }
    let u_gap = (end_u(left, lend)? - (end_u(right, rend)? + right_shift)).abs();
    let kind = match (left.branch.end_kind(lend), right.branch.end_kind(rend)) {
        (EndpointKind::SmoothCap, EndpointKind::SmoothCap) => JunctionKind::Fold,
        (EndpointKind::SimpleRoot, EndpointKind::SimpleRoot) => JunctionKind::Cap,
        (a, b) => {
            return Err(AssemblyError::GluingMismatch(format!(
                "cannot join a {} end to a {} end",
                a.name(),
                b.name()
            )))
        }
    };

    // Direction from the joint into each piece's domain.
    let inward = |end: End| match end {
        End::Lower => 1.0,
        End::Upper => -1.0,
    };
    let h0 = |piece: &OrientedPiece| 1e-2 * (piece.branch.domain.upper - piece.branch.domain.lower).min(1.0);

    let side = |piece: &OrientedPiece, end: End| -> (OneSided, OneSided) {
        let b = &piece.branch;
        let dir = inward(end);
        let slope = |a: f64| b.slope_at(a);
        let u2 = |a: f64| derivative(&slope, a, 1e-3 * (a - alpha_star).abs());
        match kind {
            JunctionKind::Fold => (
                one_sided_limit(|d| slope(alpha_star + dir * d), h0(piece)),
                one_sided_limit(|d| u2(alpha_star + dir * d), h0(piece)),
            ),
            JunctionKind::Cap => (
                one_sided_limit(|d| 1.0 / slope(alpha_star + dir * d), h0(piece)),
                one_sided_limit(
                    |d| {
                        let a = alpha_star + dir * d;
                        -u2(a) / slope(a).powi(3)
                    },
                    h0(piece),
                ),
            ),
        }
    };
    let (lf, ls) = side(left, lend);
    let (rf, rs) = side(right, rend);
    let k1 = [
        left.orientation() * left.branch.curvatures_at(alpha_star).k1,
        right.orientation() * right.branch.curvatures_at(alpha_star).k1,
    ];
    let scale = ls.value.abs().max(rs.value.abs()).max(1.0);
    let smoothness = if u_gap > JOIN_TOL || (lf.value - rf.value).abs() > SLOPE_TOL {
        Smoothness::Singular
    } else if (ls.value - rs.value).abs() > SECOND_TOL * scale {
        Smoothness::C1
    } else if (k1[0] - k1[1]).abs() > CURVATURE_JUMP {
        Smoothness::C2WithCurvatureJump
    } else {
        Smoothness::C2
    };
    Ok(Junction {
        alpha_star,
        kind,
        left: li,
        right: ri,
        u_gap,
        first: [lf, rf],
        second: [ls, rs],
        k1,
        smoothness,
    })
}

fn axis_points(pieces: &[OrientedPiece]) -> Result<Vec<AxisPoint>, AssemblyError> {
    let mut out = Vec::new();
    for (i, piece) in pieces.iter().enumerate() {
        let b = &piece.branch;
        if b.domain.lower_kind != EndpointKind::AxisZero {
            continue;
        }
        // Only the ends of the whole profile can sit on the axis.
        let first_start = i == 0 && piece.start() == End::Lower;
        let last_finish = i + 1 == pieces.len() && piece.finish() == End::Lower;
        if !(first_start || last_finish) {
            continue;
        }
        out.push(AxisPoint {
            piece: i,
            u: end_u(piece, End::Lower)?,
            verdict: axis_smoothness(b.norm(), b.tag, b.request.relation.lambda())?,
        });
    }
    Ok(out)
}

fn piece(branch: &ProfileBranch, sign: BranchSign, traversal: Traversal) -> OrientedPiece {
    OrientedPiece {
        branch: if branch.sign() == sign {
            branch.clone()
        } else {
            branch.mirrored()
        },
        traversal,
    }
}

/// Joins the two signs of `branch` at its simple root(s).
pub fn cap(branch: &ProfileBranch) -> Result<AssembledSurface, AssemblyError> {
    use BranchSign::{Minus, Plus};
    let lower = branch.domain.lower_kind == EndpointKind::SimpleRoot;
    let upper = branch.domain.upper_kind == EndpointKind::SimpleRoot;
    let pieces = match (lower, upper) {
        (_, true) => vec![
            piece(branch, Plus, Traversal::Outward),
            piece(branch, Minus, Traversal::Inward),
        ],
        (true, false) => vec![
            piece(branch, Minus, Traversal::Inward),
            piece(branch, Plus, Traversal::Outward),
        ],
        (false, false) => return Err(AssemblyError::NoSimpleRoot(branch.tag)),
    };
    let pieces = chain(pieces)?;
    let junctions = vec![junction(&pieces, 0, 1, 0.0)?];
    let axis_points = axis_points(&pieces)?;
    let periodic = lower && upper;
    let period = if periodic {
        Some(end_u(&pieces[1], pieces[1].finish())? - end_u(&pieces[0], pieces[0].start())?)
    } else {
        None
    };
    let topology = if axis_points.len() == 2 {
        Topology::SphereLike
    } else {
        Topology::OpenAnnulus
    };
    Ok(AssembledSurface {
        recipe: Some(GlueRecipe::Cap),
        pieces,
        junctions,
        topology,
        axis_points,
        period,
        flags: Vec::new(),
    })
}

fn check_piece(recipe: GlueRecipe, expected: CaseTag, found: CaseTag) -> Result<(), AssemblyError> {
    if expected != found {
        return Err(AssemblyError::WrongPiece {
            recipe,
            expected,
            found,
        });
    }
    Ok(())
}

fn negated(law: SlopeLaw) -> SlopeLaw {
    match law {
        SlopeLaw::Linear { offset, rate } => SlopeLaw::Linear {
            offset: -offset,
            rate: -rate,
        },
        SlopeLaw::Power { .. } => law,
        SlopeLaw::Logarithmic { constant, mu } => SlopeLaw::Logarithmic {
            constant: -constant,
            mu: -mu,
        },
        SlopeLaw::General {
            constant,
            lambda,
            mu,
        } => SlopeLaw::General {
            constant: -constant,
            lambda,
            mu: -mu,
        },
    }
}

/// Joins a `μ > 0` piece and the matching `μ < 0` piece at their common fold.
pub fn fold(
    recipe: GlueRecipe,
    first: &ProfileBranch,
    second: &ProfileBranch,
) -> Result<AssembledSurface, AssemblyError> {
    use BranchSign::{Minus, Plus};
    use Traversal::{Inward, Outward};
    let (t1, t2) = recipe
        .fold_tags()
        .ok_or_else(|| AssemblyError::GluingMismatch("the cap recipe joins one branch".into()))?;
    check_piece(recipe, t1, first.tag)?;
    check_piece(recipe, t2, second.tag)?;
    if first.norm() != second.norm() {
        return Err(AssemblyError::GluingMismatch("pieces use different norms".into()));
    }
    if negated(first.law) != second.law {
        return Err(AssemblyError::GluingMismatch(
            "the second piece must use c₁* = −c₁ and the opposite μ".into(),
        ));
    }
    let pattern = recipe.pattern();
    let pieces = match pattern {
        Pattern::AxisToAxis => vec![
            piece(first, Plus, Outward),
            piece(second, Minus, Outward),
            piece(second, Plus, Inward),
            piece(first, Minus, Inward),
        ],
        Pattern::AxisToAxisMirrored => vec![
            piece(first, Plus, Outward),
            piece(second, Plus, Outward),
            piece(second, Minus, Inward),
            piece(first, Minus, Inward),
        ],
        Pattern::Period => vec![
            piece(first, Minus, Inward),
            piece(first, Plus, Outward),
            piece(second, Minus, Outward),
            piece(second, Plus, Inward),
        ],
    };
    let pieces = chain(pieces)?;
    let junctions = (1..pieces.len())
        .map(|i| junction(&pieces, i - 1, i, 0.0))
        .collect::<Result<Vec<_>, _>>()?;
    let axis_points = axis_points(&pieces)?;
    let mut flags = Vec::new();
    let mut surface = AssembledSurface {
        recipe: Some(recipe),
        pieces,
        junctions,
        topology: Topology::OpenAnnulus,
        axis_points,
        period: None,
        flags: Vec::new(),
    };
    match pattern {
        Pattern::Period => {
            let last = surface.pieces.len() - 1;
            let shift = end_u(&surface.pieces[last], surface.pieces[last].finish())?
                - end_u(&surface.pieces[0], surface.pieces[0].start())?;
            surface.period = Some(shift);
            if recipe == GlueRecipe::ArcTorus {
                surface.junctions.push(junction(&surface.pieces, last, 0, shift)?);
                surface.topology = Topology::Torus;
            } else if shift.abs() < COINCIDENCE_TOL {
                flags.push(CoincidenceFlag::MayBeTorus { shift });
            }
        }
        Pattern::AxisToAxis | Pattern::AxisToAxisMirrored => {
            if surface.axis_points.len() == 2 {
                surface.topology = Topology::SphereLike;
                let gap = surface.axis_points[1].u - surface.axis_points[0].u;
                if pattern == Pattern::AxisToAxis && gap.abs() < COINCIDENCE_TOL {
                    flags.push(CoincidenceFlag::PolesCoincide { gap });
                }
            }
        }
    }
    surface.flags = flags;
    Ok(surface)
}

/// Dispatches on the recipe: one branch for [`GlueRecipe::Cap`], two for the
/// fold recipes.
pub fn glue(recipe: GlueRecipe, branches: &[ProfileBranch]) -> Result<AssembledSurface, AssemblyError> {
    match (recipe, branches) {
        (GlueRecipe::Cap, [b]) => cap(b),
        (_, [a, b]) if recipe != GlueRecipe::Cap => fold(recipe, a, b),
        _ => Err(AssemblyError::GluingMismatch(format!(
            "recipe {recipe} cannot join {} branch(es)",
            branches.len()
        ))),
    }
}

/// Repeats a profile with a period shift, after checking that its ends
/// join like an interior junction.
pub fn extend_periodic(surface: &AssembledSurface) -> Result<AssembledSurface, AssemblyError> {
    if surface.topology == Topology::Torus || surface.topology == Topology::PeriodicTube {
        return Ok(surface.clone());
    }
    let period = surface
        .period
        .ok_or_else(|| AssemblyError::NotPeriodic("the profile has no period".into()))?;
    let last = surface.pieces.len() - 1;
    let closing = junction(&surface.pieces, last, 0, period)?;
    if matches!(closing.smoothness, Smoothness::Singular | Smoothness::C1) {
        return Err(AssemblyError::NotPeriodic(format!(
            "end derivatives differ ({:?})",
            closing.smoothness
        )));
    }
    let mut out = surface.clone();
    out.junctions.push(closing);
    if period.abs() < COINCIDENCE_TOL {
        out.topology = Topology::Torus;
        if !out.flags.iter().any(|f| matches!(f, CoincidenceFlag::MayBeTorus { .. })) {
            out.flags.push(CoincidenceFlag::MayBeTorus { shift: period });
        }
    } else {
        out.topology = Topology::PeriodicTube;
    }
    Ok(out)
}

/// Inputs for building a fold recipe from scratch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldInput {
    pub norm: NormParameter,
    pub lambda: f64,
    /// `μ > 0` of the first piece.
    pub mu: f64,
    /// Constant of the first piece; the second uses its negative.
    pub constant: f64,
    pub height: f64,
}

/// The two pieces a fold recipe needs.
pub fn fold_pieces(
    recipe: GlueRecipe,
    input: &FoldInput,
    options: &SolveOptions,
) -> Result<(ProfileBranch, ProfileBranch), AssemblyError> {
    let (t1, t2) = recipe
        .fold_tags()
        .ok_or_else(|| AssemblyError::GluingMismatch("the cap recipe joins one branch".into()))?;
    if !(input.mu > 0.0) {
        return Err(AssemblyError::GluingMismatch("the first piece needs μ > 0".into()));
    }
    let pick = |lambda: f64, mu: f64, c: f64, tag: CaseTag| -> Result<ProfileBranch, AssemblyError> {
        let req = SolveRequest::new(input.norm, WeingartenRelation::new(lambda, mu)?, c)
            .with_height(input.height);
        let found = solve(&req, options)?;
        let tags: Vec<_> = found.iter().map(|b| b.tag).collect();
        found
            .into_iter()
            .find(|b| b.tag == tag)
            .ok_or(AssemblyError::WrongPiece {
                recipe,
                expected: tag,
                found: tags[0],
            })
    };
    let first = pick(input.lambda, input.mu, input.constant, t1)?;
    let second = pick(input.lambda, -input.mu, -input.constant, t2)?;
    Ok((first, second))
}

/// Solves and glues a fold recipe.
pub fn assemble_fold(
    recipe: GlueRecipe,
    input: &FoldInput,
    options: &SolveOptions,
) -> Result<AssembledSurface, AssemblyError> {
    let (a, b) = fold_pieces(recipe, input, options)?;
    fold(recipe, &a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(lambda: f64, constant: f64) -> FoldInput {
        FoldInput {
            norm: NormParameter::new(2).unwrap(),
            lambda,
            mu: 1.0,
            constant,
            height: 0.0,
        }
    }

    fn opts() -> SolveOptions {
        SolveOptions::with_samples(64)
    }

    #[test]
    fn labels_round_trip() {
        for r in GlueRecipe::ALL {
            assert_eq!(GlueRecipe::from_label(r.label()), Some(r));
        }
    }

    #[test]
    fn mirrored_sphere_jumps_in_curvature_only() {
        let s = assemble_fold(GlueRecipe::DiffSphereMirrored, &input(-1.0, 0.5), &opts()).unwrap();
        assert_eq!(s.topology, Topology::SphereLike);
        let folds: Vec<_> = s.junctions.iter().filter(|j| j.kind == JunctionKind::Fold).collect();
        assert_eq!(folds.len(), 2);
        for j in folds {
            assert_eq!(j.smoothness, Smoothness::C2WithCurvatureJump);
            assert!((j.k1[0] + j.k1[1]).abs() < 1e-12);
        }
        let s = assemble_fold(GlueRecipe::DiffSphere, &input(-1.0, 0.5), &opts()).unwrap();
        assert!(s.junctions.iter().all(|j| j.smoothness == Smoothness::C2));
    }

    #[test]
    fn arcs_close_into_a_torus() {
        let s = assemble_fold(GlueRecipe::ArcTorus, &input(0.0, 2.0), &opts()).unwrap();
        assert_eq!(s.topology, Topology::Torus);
        assert!(s.period.unwrap().abs() < 1e-12);
        assert_eq!(s.junctions.len(), 4);
        let mesh = s.mesh(24);
        assert!(mesh.is_closed());
        assert_eq!(mesh.euler_characteristic(), 0);
    }

    #[test]
    fn periodic_profile_extends() {
        let s = assemble_fold(GlueRecipe::DiffPeriodic, &input(-1.0, 1.5), &opts()).unwrap();
        assert_eq!(s.topology, Topology::OpenAnnulus);
        let e = extend_periodic(&s).unwrap();
        assert_eq!(e.topology, Topology::PeriodicTube);
        assert_eq!(e.junctions.len(), 4);
    }

    #[test]
    fn wrong_piece_is_rejected() {
        let err = assemble_fold(GlueRecipe::DiffCritical, &input(-1.0, 0.5), &opts()).unwrap_err();
        assert!(matches!(err, AssemblyError::WrongPiece { .. }), "{err}");
    }
}
