//! Weighted symmetric Chamfer distance between normalized clouds, and
//! ranking of a query against database entries.
//!
//! Chamfer distance here is the sum of the two directed weighted means of
//! squared nearest-neighbour distances. It is symmetric and non-negative but
//! not a metric: the triangle inequality can fail. Rotation is never
//! normalized away.

mod nn;

pub use nn::NearestNeighborIndex;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SdrError};
use crate::generalization::normalize_points;
use crate::geometry::Point;
use crate::store::round_sig;

/// Points with non-negative weights (Rydberg densities, or 1.0).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCloud {
    points: Vec<Point>,
    weights: Vec<f64>,
}

impl WeightedCloud {
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(SdrError::invalid("weighted cloud has no points"));
        }
        if points.len() != weights.len() {
            return Err(SdrError::DimensionMismatch {
                expected: points.len(),
                actual: weights.len(),
            });
        }
        if weights.iter().any(|w| !(0.0..=1.0).contains(w)) {
            return Err(SdrError::invalid("weights must lie in [0, 1]"));
        }
        if !weights.iter().any(|&w| w > 0.0) {
            return Err(SdrError::invalid("at least one weight must be positive"));
        }
        if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(SdrError::invalid("cloud contains a non-finite coordinate"));
        }
        Ok(WeightedCloud { points, weights })
    }

    /// Every weight 1.
    pub fn uniform(points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1.0; n])
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Same weights, points passed through [`normalize_points`].
    pub fn normalized(&self) -> Self {
        WeightedCloud {
            points: normalize_points(&self.points),
            weights: self.weights.clone(),
        }
    }

    /// Same points, all weights reset to 1.
    pub fn unweighted(&self) -> Self {
        WeightedCloud {
            points: self.points.clone(),
            weights: vec![1.0; self.points.len()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMode {
    #[default]
    Geometry,
    DensityWeighted,
}

impl MatchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchMode::Geometry => "geometry",
            MatchMode::DensityWeighted => "density_weighted",
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatchMode {
    type Err = SdrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometry" => Ok(MatchMode::Geometry),
            "density_weighted" | "density-weighted" => Ok(MatchMode::DensityWeighted),
            other => Err(SdrError::invalid(format!(
                "unknown match mode '{other}' (expected geometry or density_weighted)"
            ))),
        }
    }
}

/// Weighted mean over `from` of squared distance to the nearest point of `to`.
/// Weights are divided by their maximum first, so a cloud with all weights
/// equal sums exactly like an unweighted one.
fn directed(from: &WeightedCloud, to: &NearestNeighborIndex) -> f64 {
    let w_max = from.weights.iter().copied().fold(0.0, f64::max);
    let mut num = 0.0;
    let mut den = 0.0;
    for (p, &w) in from.points.iter().zip(&from.weights) {
        let w = w / w_max;
        num += w * to.nearest(*p).1;
        den += w;
    }
    num / den
}

/// Symmetric weighted Chamfer distance.
pub fn chamfer(a: &WeightedCloud, b: &WeightedCloud) -> f64 {
    let ia = NearestNeighborIndex::new(&a.points).expect("non-empty by construction");
    let ib = NearestNeighborIndex::new(&b.points).expect("non-empty by construction");
    directed(a, &ib) + directed(b, &ia)
}

/// [`chamfer`] with weights dropped in geometry mode.
pub fn chamfer_with_mode(a: &WeightedCloud, b: &WeightedCloud, mode: MatchMode) -> f64 {
    match mode {
        MatchMode::Geometry => chamfer(&a.unweighted(), &b.unweighted()),
        MatchMode::DensityWeighted => chamfer(a, b),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedEntry {
    pub id: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchResult {
    pub mode: MatchMode,
    /// Ascending by distance, ties by id.
    pub ranking: Vec<RankedEntry>,
}

impl MatchResult {
    pub fn best(&self) -> &RankedEntry {
        &self.ranking[0]
    }

    /// Keep the first `k` entries (at least one).
    pub fn truncate(&mut self, k: usize) {
        self.ranking.truncate(k.max(1));
    }

    /// `{"mode": ..., "ranking": [{"id": ..., "distance": ...}, ...]}` with
    /// distances rounded to [`DISTANCE_DIGITS`] significant digits.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": self.mode.as_str(),
            "ranking": self
                .ranking
                .iter()
                .map(|e| serde_json::json!({
                    "id": e.id,
                    "distance": round_sig(e.distance, DISTANCE_DIGITS),
                }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Significant digits of serialized Chamfer distances.
pub const DISTANCE_DIGITS: usize = 12;

/// A database entry prepared for matching; `cloud` is already normalized.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub id: String,
    pub cloud: WeightedCloud,
    /// Whether `cloud` carries evolved densities rather than unit weights.
    pub has_densities: bool,
}

/// Rank `candidates` against `query`, which is normalized first.
pub fn rank(query: &WeightedCloud, candidates: &[Candidate], mode: MatchMode) -> Result<MatchResult> {
    if candidates.is_empty() {
        return Err(SdrError::EmptyDatabase);
    }
    if mode == MatchMode::DensityWeighted {
        if let Some(c) = candidates.iter().find(|c| !c.has_densities) {
            return Err(SdrError::invalid(format!(
                "entry '{}' has no densities; density_weighted matching needs an evolved database",
                c.id
            )));
        }
    }
    let q = query.normalized();
    let mut ranking: Vec<RankedEntry> = candidates
        .par_iter()
        .map(|c| RankedEntry {
            id: c.id.clone(),
            distance: chamfer_with_mode(&q, &c.cloud, mode),
        })
        .collect();
    ranking.sort_by(|a, b| a.distance.total_cmp(&b.distance).then_with(|| a.id.cmp(&b.id)));
    Ok(MatchResult { mode, ranking })
}

/// Rank every entry of `db` against `query`.
pub fn match_query(query: &WeightedCloud, db: &crate::store::Database, mode: MatchMode) -> Result<MatchResult> {
    if db.is_empty() {
        return Err(SdrError::EmptyDatabase);
    }
    rank(query, &db.candidates(mode)?, mode)
}
