use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::{AtomRegister, HardwareProfile};
use crate::error::{Result, SdrError};
use crate::evolution::EvolutionResult;
use crate::generalization::DotCloud;
use crate::geometry::Point;
use crate::rydberg::WaveformSet;

pub const FORMAT_VERSION: u64 = 1;

/// Significant digits kept for normalized dot coordinates.
pub const DOT_DIGITS: usize = 9;

/// Round to `digits` significant decimal digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
        .parse()
        .unwrap_or(x)
}

fn check_version(v: u64) -> Result<()> {
    if v != FORMAT_VERSION {
        return Err(SdrError::UnsupportedVersion(v));
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub(crate) fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("document types always serialize");
    s.push('\n');
    s
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| SdrError::io(path, e))
}

pub(crate) fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| SdrError::io(path, e))
}

fn pairs(points: &[Point], digits: Option<usize>) -> Vec<[f64; 2]> {
    points
        .iter()
        .map(|p| match digits {
            Some(d) => [round_sig(p.x, d), round_sig(p.y, d)],
            None => [p.x, p.y],
        })
        .collect()
}

fn points(pairs: &[[f64; 2]]) -> Vec<Point> {
    pairs.iter().map(|&[x, y]| Point::new(x, y)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct DotCloudDoc {
    version: u64,
    source: String,
    epsilon: f64,
    width: usize,
    height: usize,
    points: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polyline_ids: Option<Vec<usize>>,
}

impl DotCloudDoc {
    fn from_cloud(c: &DotCloud) -> Self {
        DotCloudDoc {
            version: FORMAT_VERSION,
            source: c.source.clone(),
            epsilon: c.epsilon,
            width: c.width,
            height: c.height,
            points: pairs(&c.points, Some(DOT_DIGITS)),
            polyline_ids: Some(c.source_polyline_ids.clone()),
        }
    }

    fn into_cloud(self) -> Result<DotCloud> {
        check_version(self.version)?;
        let pts = points(&self.points);
        if pts.is_empty() {
            return Err(SdrError::invalid("dot cloud has no points"));
        }
        if pts.iter().any(|p| !(0.0..=1.0).contains(&p.x) || !(0.0..=1.0).contains(&p.y)) {
            return Err(SdrError::invalid("dot coordinates must lie in [0, 1]"));
        }
        for (i, p) in pts.iter().enumerate() {
            if pts[..i].contains(p) {
                return Err(SdrError::invalid(format!("dot {i} duplicates an earlier dot")));
            }
        }
        let ids = match self.polyline_ids {
            Some(ids) if ids.len() == pts.len() => ids,
            Some(ids) => {
                return Err(SdrError::DimensionMismatch {
                    expected: pts.len(),
                    actual: ids.len(),
                })
            }
            None => vec![0; pts.len()],
        };
        Ok(DotCloud {
            points: pts,
            source_polyline_ids: ids,
            epsilon: self.epsilon,
            source: self.source,
            width: self.width,
            height: self.height,
        })
    }
}

/// Dot coordinates are written with [`DOT_DIGITS`] significant digits.
pub fn dot_cloud_to_json(cloud: &DotCloud) -> String {
    to_pretty(&DotCloudDoc::from_cloud(cloud))
}

pub fn dot_cloud_from_json(text: &str) -> Result<DotCloud> {
    serde_json::from_str::<DotCloudDoc>(text)?.into_cloud()
}

pub fn save_dot_cloud(path: &Path, cloud: &DotCloud) -> Result<()> {
    write_text(path, &dot_cloud_to_json(cloud))
}

pub fn load_dot_cloud(path: &Path) -> Result<DotCloud> {
    dot_cloud_from_json(&read_text(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RegisterDoc {
    version: u64,
    profile: HardwareProfile,
    positions_um: Vec<[f64; 2]>,
    alpha: Vec<f64>,
    provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sources: Option<Vec<Vec<usize>>>,
}

pub fn register_to_json(reg: &AtomRegister) -> String {
    to_pretty(&RegisterDoc {
        version: FORMAT_VERSION,
        profile: reg.profile.clone(),
        positions_um: pairs(&reg.positions, None),
        alpha: reg.local_scale.clone(),
        provenance: reg.provenance.clone(),
        sources: Some(reg.sources.clone()),
    })
}

pub fn register_from_json(text: &str) -> Result<AtomRegister> {
    let doc: RegisterDoc = serde_json::from_str(text)?;
    check_version(doc.version)?;
    if doc.alpha.len() != doc.positions_um.len() {
        return Err(SdrError::DimensionMismatch {
            expected: doc.positions_um.len(),
            actual: doc.alpha.len(),
        });
    }
    doc.profile.validate()?;
    let n = doc.positions_um.len();
    Ok(AtomRegister {
        positions: points(&doc.positions_um),
        local_scale: doc.alpha,
        profile: doc.profile,
        provenance: doc.provenance,
        sources: doc.sources.unwrap_or_else(|| (0..n).map(|i| vec![i]).collect()),
    })
}

pub fn save_register(path: &Path, reg: &AtomRegister) -> Result<()> {
    write_text(path, &register_to_json(reg))
}

pub fn load_register(path: &Path) -> Result<AtomRegister> {
    register_from_json(&read_text(path)?)
}

pub fn waveforms_to_json(w: &WaveformSet) -> String {
    to_pretty(w)
}

pub fn waveforms_from_json(text: &str) -> Result<WaveformSet> {
    Ok(serde_json::from_str(text)?)
}

pub fn load_waveforms(path: &Path) -> Result<WaveformSet> {
    waveforms_from_json(&read_text(path)?)
}

pub fn save_waveforms(path: &Path, w: &WaveformSet) -> Result<()> {
    write_text(path, &waveforms_to_json(w))
}

/// The persisted part of an [`EvolutionResult`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionSummary {
    pub densities: Vec<f64>,
    pub norm_drift: f64,
    pub steps: usize,
}

impl From<&EvolutionResult> for EvolutionSummary {
    fn from(r: &EvolutionResult) -> Self {
        EvolutionSummary {
            densities: r.densities.clone(),
            norm_drift: r.norm_drift,
            steps: r.step_count,
        }
    }
}

pub fn evolution_to_json(s: &EvolutionSummary) -> String {
    to_pretty(s)
}

pub fn evolution_from_json(text: &str) -> Result<EvolutionSummary> {
    Ok(serde_json::from_str(text)?)
}

/// A dot cloud together with the register it was embedded as and the
/// per-atom Rydberg densities after evolution. Serialized as a superset of
/// both the dot-cloud and the evolution-result documents.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedRecord {
    pub cloud: DotCloud,
    pub positions_um: Vec<Point>,
    pub alpha: Vec<f64>,
    pub evolution: EvolutionSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct EvolvedDoc {
    #[serde(flatten)]
    dots: DotCloudDoc,
    positions_um: Vec<[f64; 2]>,
    alpha: Vec<f64>,
    #[serde(flatten)]
    evolution: EvolutionSummary,
}

pub fn evolved_to_json(r: &EvolvedRecord) -> String {
    to_pretty(&EvolvedDoc {
        dots: DotCloudDoc::from_cloud(&r.cloud),
        positions_um: pairs(&r.positions_um, None),
        alpha: r.alpha.clone(),
        evolution: r.evolution.clone(),
    })
}

pub fn save_evolved(path: &Path, r: &EvolvedRecord) -> Result<()> {
    write_text(path, &evolved_to_json(r))
}

pub fn evolved_from_json(text: &str) -> Result<EvolvedRecord> {
    let doc: EvolvedDoc = serde_json::from_str(text)?;
    let n = doc.positions_um.len();
    if doc.evolution.densities.len() != n || doc.alpha.len() != n {
        return Err(SdrError::DimensionMismatch {
            expected: n,
            actual: doc.evolution.densities.len(),
        });
    }
    Ok(EvolvedRecord {
        cloud: doc.dots.into_cloud()?,
        positions_um: points(&doc.positions_um),
        alpha: doc.alpha,
        evolution: doc.evolution,
    })
}

/// Either kind of matchable document.
#[derive(Debug, Clone, PartialEq)]
pub enum EntryDocument {
    Dots(DotCloud),
    Evolved(EvolvedRecord),
}

impl EntryDocument {
    pub fn cloud(&self) -> &DotCloud {
        match self {
            EntryDocument::Dots(c) => c,
            EntryDocument::Evolved(r) => &r.cloud,
        }
    }
}

/// Parse an evolved document when it carries densities, else a dot cloud.
pub fn entry_from_json(text: &str) -> Result<EntryDocument> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    if v.get("densities").is_some() && v.get("positions_um").is_some() {
        Ok(EntryDocument::Evolved(evolved_from_json(text)?))
    } else {
        Ok(EntryDocument::Dots(dot_cloud_from_json(text)?))
    }
}

pub fn load_entry(path: &Path) -> Result<EntryDocument> {
    entry_from_json(&read_text(path)?)
}
