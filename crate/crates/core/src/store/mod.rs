//! On-disk formats and match databases.
//!
//! Every document is UTF-8 JSON with LF line endings. A database is a
//! directory holding `manifest.json` and an `entries/` folder with one
//! `<id>.dots.json` or `<id>.evolved.json` per entry, each guarded by a
//! SHA-256 checksum in the manifest.

mod db;
mod formats;

pub use db::{
    build_database, build_database_with, density_cloud, list_images, load_database, sha256_hex,
    BuildOptions, Database, EntryEvolver, EntryKind, LoadedEntry, Manifest, ManifestEntry,
    SimulationEvolver, SkippedInput, ENTRIES_DIR, MANIFEST_FILE, SCHEMA_VERSION,
};
pub use formats::{
    dot_cloud_from_json, dot_cloud_to_json, entry_from_json, evolution_from_json, evolution_to_json,
    evolved_from_json, evolved_to_json, load_dot_cloud, load_entry, load_register, load_waveforms,
    register_from_json, register_to_json, round_sig, save_dot_cloud, save_evolved, save_register, save_waveforms,
    waveforms_from_json, waveforms_to_json, EntryDocument, EvolutionSummary, EvolvedRecord,
    DOT_DIGITS, FORMAT_VERSION,
};
pub(crate) use formats::{read_text, write_text};
