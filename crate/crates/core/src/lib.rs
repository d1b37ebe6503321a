//! Rotational surfaces whose Birkhoff principal curvatures satisfy
//! `k₁ + λ·k₂ = μ` in the normed space `‖x‖ = ((x₁²+x₂²)ᵐ + x₃²ᵐ)^{1/2m}`.
//!
//! The crate is organized bottom-up:
//!
//! * [`norm_geometry`] evaluates the norm, the Birkhoff normal and the
//!   principal curvatures of a profile jet.
//! * [`singular_quadrature`] integrates the profile integrals, whose
//!   integrands blow up at the domain ends.
//! * [`profile_solver`] classifies a relation and its integration constant
//!   and produces sampled profile branches.
//! * [`surface_assembler`] glues branches into complete surfaces and
//!   judges their smoothness.
//! * [`verifier`] re-checks branches independently.
//! * [`io`] reads and writes profiles, reports, meshes and job files.

// `!(x > 0.0)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use serde::{Deserialize, Serialize};

pub mod io;
pub mod norm_geometry;
pub mod profile_solver;
pub mod singular_quadrature;
pub mod surface_assembler;
pub mod verifier;
mod serde_ext;

/// Which of the two mirror-image branches `u₊`, `u₋` is meant; the sign of
/// `u'` on the branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSign {
    Plus,
    Minus,
}

impl BranchSign {
    pub fn value(self) -> f64 {
        match self {
            BranchSign::Plus => 1.0,
            BranchSign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            BranchSign::Plus => BranchSign::Minus,
            BranchSign::Minus => BranchSign::Plus,
        }
    }
}

impl std::fmt::Display for BranchSign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BranchSign::Plus => "+",
            BranchSign::Minus => "-",
        })
    }
}

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/norm.md")]
    mod norm {}
    #[doc = include_str!("../../../book/src/taxonomy.md")]
    mod taxonomy {}
    #[doc = include_str!("../../../book/src/quadrature.md")]
    mod quadrature {}
    #[doc = include_str!("../../../book/src/gluing.md")]
    mod gluing {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
