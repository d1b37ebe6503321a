use serde::{Deserialize, Serialize};

/// Label of one admissible piece of a solution family.
///
/// Families whose admissible set splits into two intervals get one tag per
/// interval (`…Inner` for the piece touching the axis side, `…Outer` for the
/// other).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    /// `k₁ = 0`: a straight profile through the axis.
    Cone,
    /// `k₂ = μ < 0`: a translate of the scaled unit sphere.
    UnitSphere,
    MeridianArcPositive,
    MeridianArcNegative,
    HomogeneousOuterBounded,
    HomogeneousOuterUnbounded,
    HomogeneousInner,
    DiffPosJoined,
    DiffPosCriticalInner,
    DiffPosCriticalOuter,
    DiffPosSplitInner,
    DiffPosSplitOuter,
    DiffNeg,
    GenPosPos,
    GenPosNegSphere,
    GenPosNegBand,
    GenPosNegShell,
    GenMidPosJoined,
    GenMidPosCriticalInner,
    GenMidPosCriticalOuter,
    GenMidPosSplitInner,
    GenMidPosSplitOuter,
    GenMidNegSphere,
    GenMidNegDisk,
    GenMidNegShell,
    GenLowPosSphere,
    GenLowPosDisk,
    GenLowPosJoined,
    GenLowPosCriticalInner,
    GenLowPosCriticalOuter,
    GenLowPosSplitInner,
    GenLowPosSplitOuter,
    GenLowNeg,
}

impl CaseTag {
    pub const ALL: [CaseTag; 33] = [
        CaseTag::Cone,
        CaseTag::UnitSphere,
        CaseTag::MeridianArcPositive,
        CaseTag::MeridianArcNegative,
        CaseTag::HomogeneousOuterBounded,
        CaseTag::HomogeneousOuterUnbounded,
        CaseTag::HomogeneousInner,
        CaseTag::DiffPosJoined,
        CaseTag::DiffPosCriticalInner,
        CaseTag::DiffPosCriticalOuter,
        CaseTag::DiffPosSplitInner,
        CaseTag::DiffPosSplitOuter,
        CaseTag::DiffNeg,
        CaseTag::GenPosPos,
        CaseTag::GenPosNegSphere,
        CaseTag::GenPosNegBand,
        CaseTag::GenPosNegShell,
        CaseTag::GenMidPosJoined,
        CaseTag::GenMidPosCriticalInner,
        CaseTag::GenMidPosCriticalOuter,
        CaseTag::GenMidPosSplitInner,
        CaseTag::GenMidPosSplitOuter,
        CaseTag::GenMidNegSphere,
        CaseTag::GenMidNegDisk,
        CaseTag::GenMidNegShell,
        CaseTag::GenLowPosSphere,
        CaseTag::GenLowPosDisk,
        CaseTag::GenLowPosJoined,
        CaseTag::GenLowPosCriticalInner,
        CaseTag::GenLowPosCriticalOuter,
        CaseTag::GenLowPosSplitInner,
        CaseTag::GenLowPosSplitOuter,
        CaseTag::GenLowNeg,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseTag::Cone => "cone",
            CaseTag::UnitSphere => "unit-sphere",
            CaseTag::MeridianArcPositive => "meridian-arc-positive",
            CaseTag::MeridianArcNegative => "meridian-arc-negative",
            CaseTag::HomogeneousOuterBounded => "homogeneous-outer-bounded",
            CaseTag::HomogeneousOuterUnbounded => "homogeneous-outer-unbounded",
            CaseTag::HomogeneousInner => "homogeneous-inner",
            CaseTag::DiffPosJoined => "diff-pos-joined",
            CaseTag::DiffPosCriticalInner => "diff-pos-critical-inner",
            CaseTag::DiffPosCriticalOuter => "diff-pos-critical-outer",
            CaseTag::DiffPosSplitInner => "diff-pos-split-inner",
            CaseTag::DiffPosSplitOuter => "diff-pos-split-outer",
            CaseTag::DiffNeg => "diff-neg",
            CaseTag::GenPosPos => "gen-pos-pos",
            CaseTag::GenPosNegSphere => "gen-pos-neg-sphere",
            CaseTag::GenPosNegBand => "gen-pos-neg-band",
            CaseTag::GenPosNegShell => "gen-pos-neg-shell",
            CaseTag::GenMidPosJoined => "gen-mid-pos-joined",
            CaseTag::GenMidPosCriticalInner => "gen-mid-pos-critical-inner",
            CaseTag::GenMidPosCriticalOuter => "gen-mid-pos-critical-outer",
            CaseTag::GenMidPosSplitInner => "gen-mid-pos-split-inner",
            CaseTag::GenMidPosSplitOuter => "gen-mid-pos-split-outer",
            CaseTag::GenMidNegSphere => "gen-mid-neg-sphere",
            CaseTag::GenMidNegDisk => "gen-mid-neg-disk",
            CaseTag::GenMidNegShell => "gen-mid-neg-shell",
            CaseTag::GenLowPosSphere => "gen-low-pos-sphere",
            CaseTag::GenLowPosDisk => "gen-low-pos-disk",
            CaseTag::GenLowPosJoined => "gen-low-pos-joined",
            CaseTag::GenLowPosCriticalInner => "gen-low-pos-critical-inner",
            CaseTag::GenLowPosCriticalOuter => "gen-low-pos-critical-outer",
            CaseTag::GenLowPosSplitInner => "gen-low-pos-split-inner",
            CaseTag::GenLowPosSplitOuter => "gen-low-pos-split-outer",
            CaseTag::GenLowNeg => "gen-low-neg",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.label() == label)
    }

    /// Pieces whose admissible interval starts on the rotation axis.
    pub fn touches_axis(self) -> bool {
        matches!(
            self,
            CaseTag::Cone
                | CaseTag::UnitSphere
                | CaseTag::HomogeneousInner
                | CaseTag::DiffPosJoined
                | CaseTag::DiffPosCriticalInner
                | CaseTag::DiffPosSplitInner
                | CaseTag::GenPosNegSphere
                | CaseTag::GenMidPosJoined
                | CaseTag::GenMidPosCriticalInner
                | CaseTag::GenMidPosSplitInner
                | CaseTag::GenMidNegSphere
                | CaseTag::GenMidNegDisk
                | CaseTag::GenLowPosSphere
                | CaseTag::GenLowPosDisk
                | CaseTag::GenLowPosJoined
                | CaseTag::GenLowPosCriticalInner
                | CaseTag::GenLowPosSplitInner
        )
    }

    /// Where the additive height constant is pinned when neither end is a
    /// simple root.
    pub(crate) fn prefers_upper_anchor(self) -> bool {
        matches!(
            self,
            CaseTag::DiffPosJoined
                | CaseTag::DiffPosCriticalOuter
                | CaseTag::GenMidPosCriticalOuter
                | CaseTag::GenLowPosCriticalOuter
        )
    }
}

impl std::fmt::Display for CaseTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for t in CaseTag::ALL {
            assert_eq!(CaseTag::from_label(t.label()), Some(t));
            let json = serde_json::to_string(&t).unwrap();
            assert_eq!(json, format!("\"{}\"", t.label()));
        }
        let mut labels: Vec<_> = CaseTag::ALL.iter().map(|t| t.label()).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), 33);
    }
}
