//! Garment fit vocabulary.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GarmentKind {
    Top,
    Bottom,
}

/// Fit category. Slim/Regular/Loose describe tops, Tapered/Straight describe
/// bottoms; the ordering here is the one-hot order used by [`crate::cond_kernel::FitLabel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitClass {
    Slim,
    Regular,
    Loose,
    Tapered,
    Straight,
}

impl FitClass {
    pub const ALL: [FitClass; 5] = [
        FitClass::Slim,
        FitClass::Regular,
        FitClass::Loose,
        FitClass::Tapered,
        FitClass::Straight,
    ];

    pub fn kind(self) -> GarmentKind {
        match self {
            FitClass::Slim | FitClass::Regular | FitClass::Loose => GarmentKind::Top,
            FitClass::Tapered | FitClass::Straight => GarmentKind::Bottom,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            FitClass::Slim => "slim",
            FitClass::Regular => "regular",
            FitClass::Loose => "loose",
            FitClass::Tapered => "tapered",
            FitClass::Straight => "straight",
        }
    }
}

impl GarmentKind {
    /// Fits belonging to this kind, in vocabulary order.
    pub fn fits(self) -> &'static [FitClass] {
        match self {
            GarmentKind::Top => &[FitClass::Slim, FitClass::Regular, FitClass::Loose],
            GarmentKind::Bottom => &[FitClass::Tapered, FitClass::Straight],
        }
    }
}

impl fmt::Display for FitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown fit `{0}` (expected slim, regular, loose, tapered or straight)")]
pub struct UnknownFit(pub String);

impl FromStr for FitClass {
    type Err = UnknownFit;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FitClass::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownFit(s.to_string()))
    }
}
