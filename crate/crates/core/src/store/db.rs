use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::formats::{
    dot_cloud_to_json, entry_from_json, evolved_to_json, to_pretty, write_text, EntryDocument,
    EvolutionSummary, EvolvedRecord,
};
use crate::embedding::HardwareProfile;
use crate::error::{Result, SdrError};
use crate::generalization::{normalize_points, DotCloud};
use crate::imaging::ImageFormat;
use crate::matching::{Candidate, MatchMode, WeightedCloud};
use crate::pipeline::{encode_file, simulate_cloud, EncodeConfig, SimulateConfig};

pub const SCHEMA_VERSION: u64 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";
pub const ENTRIES_DIR: &str = "entries";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryKind {
    Dots,
    Evolved,
}

impl EntryKind {
    fn suffix(self) -> &'static str {
        match self {
            EntryKind::Dots => "dots.json",
            EntryKind::Evolved => "evolved.json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub id: String,
    pub kind: EntryKind,
    /// Relative to the database root, `/`-separated.
    pub file: String,
    pub atom_count: usize,
    pub epsilon: f64,
    /// SHA-256 of the entry file, lowercase hex.
    pub checksum: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkippedInput {
    pub file: String,
    pub reason: String,
}

/// Contents of `manifest.json`. Only `created_unix` varies between
/// otherwise identical builds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u64,
    pub created_unix: u64,
    pub profile: HardwareProfile,
    pub encode: EncodeConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateConfig>,
    pub entries: Vec<ManifestEntry>,
    pub skipped: Vec<SkippedInput>,
}

/// One validated entry with its parsed document.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedEntry {
    pub meta: ManifestEntry,
    pub document: EntryDocument,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Database {
    pub root: PathBuf,
    pub manifest: Manifest,
    pub entries: Vec<LoadedEntry>,
}

impl Database {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Normalized clouds for matching. Geometry mode uses the dot geometry
    /// of every entry; density-weighted mode uses atom positions weighted by
    /// densities and needs every entry to be evolved.
    pub fn candidates(&self, mode: MatchMode) -> Result<Vec<Candidate>> {
        self.entries
            .iter()
            .map(|e| {
                let id = e.meta.id.clone();
                match (&e.document, mode) {
                    (doc, MatchMode::Geometry) => Ok(Candidate {
                        id,
                        cloud: WeightedCloud::uniform(normalize_points(&doc.cloud().points))?,
                        has_densities: matches!(doc, EntryDocument::Evolved(_)),
                    }),
                    (EntryDocument::Evolved(r), MatchMode::DensityWeighted) => Ok(Candidate {
                        id,
                        cloud: density_cloud(r)?.normalized(),
                        has_densities: true,
                    }),
                    (EntryDocument::Dots(_), MatchMode::DensityWeighted) => Err(SdrError::invalid(format!(
                        "entry '{id}' has no densities; density_weighted matching needs an evolved database"
                    ))),
                }
            })
            .collect()
    }
}

/// Atom positions weighted by their densities (clamped into [0, 1]).
pub fn density_cloud(r: &EvolvedRecord) -> Result<WeightedCloud> {
    WeightedCloud::new(
        r.positions_um.clone(),
        r.evolution.densities.iter().map(|d| d.clamp(0.0, 1.0)).collect(),
    )
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Produces the evolved record for a database entry.
pub trait EntryEvolver: Sync {
    fn evolve(&self, cloud: &DotCloud, profile: &HardwareProfile, cfg: &SimulateConfig) -> Result<EvolvedRecord>;
}

/// Embeds and evolves with the default schedule.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimulationEvolver;

impl EntryEvolver for SimulationEvolver {
    fn evolve(&self, cloud: &DotCloud, profile: &HardwareProfile, cfg: &SimulateConfig) -> Result<EvolvedRecord> {
        let sim = simulate_cloud(cloud, profile, cfg, None)?;
        Ok(EvolvedRecord {
            cloud: cloud.clone(),
            positions_um: sim.register.positions.clone(),
            alpha: sim.register.local_scale.clone(),
            evolution: EvolutionSummary::from(&sim.result),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOptions {
    pub profile: HardwareProfile,
    pub encode: EncodeConfig,
    pub evolve_entries: bool,
    pub simulate: SimulateConfig,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            profile: HardwareProfile::default(),
            encode: EncodeConfig::default(),
            evolve_entries: false,
            simulate: SimulateConfig::default(),
        }
    }
}

/// Image files (PGM or PNG by extension) directly inside `dir`, sorted by
/// file name.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = std::fs::read_dir(dir).map_err(|e| SdrError::io(dir, e))?;
    let mut files = Vec::new();
    for entry in rd {
        let path = entry.map_err(|e| SdrError::io(dir, e))?.path();
        if path.is_file() && ImageFormat::from_path(&path).is_some() {
            files.push(path);
        }
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// [`build_database_with`] using [`SimulationEvolver`] and no progress output.
pub fn build_database(images: &Path, out: &Path, opts: &BuildOptions) -> Result<Database> {
    build_database_with(images, out, opts, &SimulationEvolver, &|_| {})
}

/// Encode every image in `images` (and evolve it when requested), write one
/// entry file per success plus `manifest.json` under `out`, and return the
/// freshly loaded database. Failing images are recorded as skipped; the
/// build fails only when nothing succeeds.
pub fn build_database_with(
    images: &Path,
    out: &Path,
    opts: &BuildOptions,
    evolver: &dyn EntryEvolver,
    progress: &(dyn Fn(&str) + Sync),
) -> Result<Database> {
    opts.profile.validate()?;
    let files = list_images(images)?;
    let entries_dir = out.join(ENTRIES_DIR);
    std::fs::create_dir_all(&entries_dir).map_err(|e| SdrError::io(&entries_dir, e))?;

    let outcomes: Vec<Result<(String, EntryKind, usize, f64, String)>> = files
        .par_iter()
        .map(|path| {
            let cloud = encode_file(path, &opts.encode)?;
            let res = if opts.evolve_entries {
                let rec = evolver.evolve(&cloud, &opts.profile, &opts.simulate)?;
                let n = rec.positions_um.len();
                (cloud.source.clone(), EntryKind::Evolved, n, cloud.epsilon, evolved_to_json(&rec))
            } else {
                let n = cloud.len();
                (cloud.source.clone(), EntryKind::Dots, n, cloud.epsilon, dot_cloud_to_json(&cloud))
            };
            progress(&format!("encoded {}", path.display()));
            Ok(res)
        })
        .collect();

    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    let mut seen = HashSet::new();
    for (path, outcome) in files.iter().zip(outcomes) {
        let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        match outcome {
            Err(e) => {
                progress(&format!("skipped {name}: {e}"));
                skipped.push(SkippedInput { file: name, reason: e.to_string() });
            }
            Ok((id, ..)) if !seen.insert(id.clone()) => {
                skipped.push(SkippedInput { file: name, reason: format!("duplicate entry id '{id}'") });
            }
            Ok((_, _, n, _, _)) if n > opts.profile.max_atoms => {
                skipped.push(SkippedInput {
                    file: name,
                    reason: format!("{n} atoms exceed the device limit of {}", opts.profile.max_atoms),
                });
            }
            Ok((id, kind, atom_count, epsilon, text)) => {
                let file = format!("{ENTRIES_DIR}/{id}.{}", kind.suffix());
                write_text(&out.join(&file), &text)?;
                entries.push(ManifestEntry {
                    checksum: sha256_hex(text.as_bytes()),
                    id,
                    kind,
                    file,
                    atom_count,
                    epsilon,
                });
            }
        }
    }
    if entries.is_empty() {
        return Err(SdrError::NoEntries { skipped: skipped.len() });
    }
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        created_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        profile: opts.profile.clone(),
        encode: opts.encode.clone(),
        simulate: opts.evolve_entries.then(|| opts.simulate.clone()),
        entries,
        skipped,
    };
    write_text(&out.join(MANIFEST_FILE), &to_pretty(&manifest))?;
    load_database(out)
}

/// Read `manifest.json` and validate every entry: unique ids, file present,
/// checksum, parseable document of the declared kind, and atom counts.
pub fn load_database(root: &Path) -> Result<Database> {
    let manifest_path = root.join(MANIFEST_FILE);
    let text = std::fs::read_to_string(&manifest_path).map_err(|e| SdrError::io(&manifest_path, e))?;
    let raw: serde_json::Value = serde_json::from_str(&text)?;
    let version = raw
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| SdrError::Database("manifest lacks schema_version".into()))?;
    if version != SCHEMA_VERSION {
        return Err(SdrError::UnsupportedVersion(version));
    }
    let manifest: Manifest = serde_json::from_value(raw)?;
    manifest.profile.validate()?;

    let mut ids = HashSet::new();
    let mut entries = Vec::with_capacity(manifest.entries.len());
    for meta in &manifest.entries {
        if !ids.insert(meta.id.as_str()) {
            return Err(SdrError::Database(format!("duplicate entry id '{}'", meta.id)));
        }
        if meta.file.split('/').any(|c| c == ".." || c.is_empty()) {
            return Err(SdrError::Database(format!("entry '{}' has an unsafe path", meta.id)));
        }
        let path = root.join(&meta.file);
        let bytes = std::fs::read(&path).map_err(|e| SdrError::io(&path, e))?;
        if sha256_hex(&bytes) != meta.checksum {
            return Err(SdrError::ChecksumMismatch(meta.id.clone()));
        }
        let text = String::from_utf8(bytes)
            .map_err(|_| SdrError::Database(format!("entry '{}' is not UTF-8", meta.id)))?;
        let document = entry_from_json(&text)?;
        let (kind, count) = match &document {
            EntryDocument::Dots(c) => (EntryKind::Dots, c.len()),
            EntryDocument::Evolved(r) => (EntryKind::Evolved, r.positions_um.len()),
        };
        if kind != meta.kind {
            return Err(SdrError::Database(format!("entry '{}' is not of kind {:?}", meta.id, meta.kind)));
        }
        if count != meta.atom_count {
            return Err(SdrError::Database(format!(
                "entry '{}' holds {count} atoms but the manifest records {}",
                meta.id, meta.atom_count
            )));
        }
        if count > manifest.profile.max_atoms {
            return Err(SdrError::Database(format!(
                "entry '{}' has {count} atoms, above the profile limit {}",
                meta.id, manifest.profile.max_atoms
            )));
        }
        entries.push(LoadedEntry { meta: meta.clone(), document });
    }
    Ok(Database {
        root: root.to_path_buf(),
        manifest,
        entries,
    })
}
