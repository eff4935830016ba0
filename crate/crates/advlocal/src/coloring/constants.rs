//! Named distance and size constants of the coloring schemas, with a
//! profile that shrinks or overrides them for small instances.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Environment variable naming a JSON profile used when none is given.
pub const PROFILE_ENV: &str = "ADVLOCAL_COLORING_PROFILE";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Constant {
    /// Ruling-set spacing of the O(Δ²)-coloring clusters: 100α²·log Δ.
    ClusterRadius,
    /// Base of the degree buckets: palette of bucket i has base^i colors.
    BucketBase,
    /// Degree from which a cluster counts as high-degree: Δ^(10α).
    HighDegree,
    /// Interior volume below which a high-degree cluster is broken: Δ^(9α-2).
    InteriorVolume,
    /// Spacing of color-bit holders inside a cluster: α.
    HolderSpacing,
    /// Spacing of relay layers in the root reduction: (2α+22)·log Δ.
    RelaySpacing,
    /// Spacing of path markers in the root fix: 2α+10.
    MarkerSpacing,
    /// Components of the 2/3-colored subgraph up to this diameter get no advice: 4000Δ⁹.
    SmallDiameter,
    /// Ruling-set spacing inside large components: 2000Δ⁹.
    RulingSpacing,
    /// Radius around a ruling node holding its candidates: 600Δ⁹.
    CandidateRadius,
    /// Pairwise spacing of candidates: 50Δ³.
    CandidateSpacing,
    /// Reach of the second selection from a candidate: 20Δ³.
    ShiftReach,
    /// Radius of the ball a decoder reads around a group: 30Δ³.
    GroupRadius,
    /// Number of candidates per ruling node: 12Δ⁶.
    CandidateCount,
}

impl Constant {
    pub const ALL: [Constant; 14] = [
        Constant::ClusterRadius,
        Constant::BucketBase,
        Constant::HighDegree,
        Constant::InteriorVolume,
        Constant::HolderSpacing,
        Constant::RelaySpacing,
        Constant::MarkerSpacing,
        Constant::SmallDiameter,
        Constant::RulingSpacing,
        Constant::CandidateRadius,
        Constant::CandidateSpacing,
        Constant::ShiftReach,
        Constant::GroupRadius,
        Constant::CandidateCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Constant::ClusterRadius => "cluster_radius",
            Constant::BucketBase => "bucket_base",
            Constant::HighDegree => "high_degree",
            Constant::InteriorVolume => "interior_volume",
            Constant::HolderSpacing => "holder_spacing",
            Constant::RelaySpacing => "relay_spacing",
            Constant::MarkerSpacing => "marker_spacing",
            Constant::SmallDiameter => "small_diameter",
            Constant::RulingSpacing => "ruling_spacing",
            Constant::CandidateRadius => "candidate_radius",
            Constant::CandidateSpacing => "candidate_spacing",
            Constant::ShiftReach => "shift_reach",
            Constant::GroupRadius => "group_radius",
            Constant::CandidateCount => "candidate_count",
        }
    }

    pub fn from_name(s: &str) -> Option<Constant> {
        Constant::ALL.into_iter().find(|c| c.name() == s)
    }

    /// Unscaled value at composability radius `alpha` and maximum degree `delta`.
    pub fn base_value(self, alpha: usize, delta: usize) -> f64 {
        let a = alpha as f64;
        let d = delta.max(2) as f64;
        let lg = d.log2();
        match self {
            Constant::ClusterRadius => 100.0 * a * a * lg,
            Constant::BucketBase => d,
            Constant::HighDegree => d.powf(10.0 * a),
            Constant::InteriorVolume => d.powf(9.0 * a - 2.0),
            Constant::HolderSpacing => a,
            Constant::RelaySpacing => (2.0 * a + 22.0) * lg,
            Constant::MarkerSpacing => 2.0 * a + 10.0,
            Constant::SmallDiameter => 4000.0 * d.powi(9),
            Constant::RulingSpacing => 2000.0 * d.powi(9),
            Constant::CandidateRadius => 600.0 * d.powi(9),
            Constant::CandidateSpacing => 50.0 * d.powi(3),
            Constant::ShiftReach => 20.0 * d.powi(3),
            Constant::GroupRadius => 30.0 * d.powi(3),
            Constant::CandidateCount => 12.0 * d.powi(6),
        }
    }
}

/// A global multiplier applied to every constant, plus explicit values that
/// replace individual constants. Active values are rounded up and at least 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoringConstants {
    #[serde(default = "unit")]
    pub scale: f64,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
}

fn unit() -> f64 {
    1.0
}

impl Default for ColoringConstants {
    fn default() -> Self {
        ColoringConstants { scale: 1.0, overrides: BTreeMap::new() }
    }
}

impl ColoringConstants {
    pub fn from_json(text: &str) -> Result<ColoringConstants> {
        let c: ColoringConstants = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<ColoringConstants> {
        ColoringConstants::from_json(&std::fs::read_to_string(path)?)
    }

    /// The profile named by [`PROFILE_ENV`], or the unscaled constants.
    pub fn from_env() -> Result<ColoringConstants> {
        match std::env::var_os(PROFILE_ENV) {
            Some(p) => ColoringConstants::load(Path::new(&p)),
            None => Ok(ColoringConstants::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidParams(format!("profile scale {} is not positive", self.scale)));
        }
        for (k, v) in &self.overrides {
            if Constant::from_name(k).is_none() {
                return Err(Error::InvalidParams(format!("unknown constant {k}")));
            }
            if !(*v >= 1.0) {
                return Err(Error::InvalidParams(format!("constant {k} = {v} must be at least 1")));
            }
        }
        Ok(())
    }

    pub fn with(mut self, c: Constant, value: f64) -> ColoringConstants {
        self.overrides.insert(c.name().to_string(), value);
        self
    }

    /// Active value, saturating far below `usize::MAX` so that sums of a
    /// few constants cannot overflow.
    pub fn get(&self, c: Constant, alpha: usize, delta: usize) -> usize {
        const CAP: f64 = (1u64 << 52) as f64;
        let v = match self.overrides.get(c.name()) {
            Some(&v) => v,
            None => self.scale * c.base_value(alpha, delta),
        };
        if v.is_nan() || v >= CAP {
            CAP as usize
        } else {
            v.ceil().max(1.0) as usize
        }
    }

    /// Every active value, by name.
    pub fn active(&self, alpha: usize, delta: usize) -> BTreeMap<String, usize> {
        Constant::ALL.into_iter().map(|c| (c.name().to_string(), self.get(c, alpha, delta))).collect()
    }

    /// Small-instance profile for the 3-coloring schema on graphs with a few
    /// hundred nodes and Δ ≤ 5.
    pub fn three_coloring_desk() -> ColoringConstants {
        ColoringConstants::default()
            .with(Constant::SmallDiameter, 10.0)
            .with(Constant::RulingSpacing, 26.0)
            .with(Constant::CandidateRadius, 4.0)
            .with(Constant::CandidateSpacing, 3.0)
            .with(Constant::ShiftReach, 4.0)
            .with(Constant::GroupRadius, 10.0)
            .with(Constant::CandidateCount, 6.0)
    }

    /// Small-instance profile for the O(Δ²)-coloring clusters.
    pub fn clustering_desk(cluster_radius: usize, holder_spacing: usize) -> ColoringConstants {
        ColoringConstants::default()
            .with(Constant::ClusterRadius, cluster_radius as f64)
            .with(Constant::HolderSpacing, holder_spacing as f64)
    }
}
