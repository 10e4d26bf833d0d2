use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use sdr_core::embedding::HardwareProfile;
use sdr_core::generalization::DotCloud;
use sdr_core::matching::{match_query, MatchMode};
use sdr_core::pipeline::{EncodeConfig, SimulateConfig};
use sdr_core::store::{
    build_database, build_database_with, load_database, load_entry, sha256_hex, BuildOptions, EntryDocument,
    EntryEvolver, EntryKind, EvolvedRecord, SimulationEvolver, MANIFEST_FILE,
};
use sdr_core::{Result, SdrError};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/silhouettes").join(format!("{name}.pgm"))
}

fn image_dir(names: &[&str]) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for n in names {
        std::fs::copy(fixture(n), dir.path().join(format!("{n}.pgm"))).unwrap();
    }
    dir
}

fn opts(budget: usize) -> BuildOptions {
    BuildOptions {
        encode: EncodeConfig { budget, ..EncodeConfig::default() },
        ..BuildOptions::default()
    }
}

struct Counting(AtomicUsize);

impl EntryEvolver for Counting {
    fn evolve(&self, cloud: &DotCloud, p: &HardwareProfile, c: &SimulateConfig) -> Result<EvolvedRecord> {
        self.0.fetch_add(1, Ordering::SeqCst);
        SimulationEvolver.evolve(cloud, p, c)
    }
}

#[test]
fn three_images_give_three_entries_within_budget() {
    let imgs = image_dir(&["cup", "key", "wrench"]);
    let out = tempfile::tempdir().unwrap();
    let db = build_database(imgs.path(), out.path(), &opts(21)).unwrap();
    assert_eq!(db.len(), 3);
    let ids: Vec<_> = db.manifest.entries.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids, ["cup", "key", "wrench"]);
    for e in &db.entries {
        assert!(e.meta.atom_count <= 21);
        assert_eq!(e.meta.kind, EntryKind::Dots);
        let text = std::fs::read(out.path().join(&e.meta.file)).unwrap();
        assert_eq!(sha256_hex(&text), e.meta.checksum);
        assert!(text.ends_with(b"\n"));
        assert!(!text.contains(&b'\r'));
    }
    assert!(db.manifest.skipped.is_empty());
}

#[test]
fn corrupt_image_is_skipped_not_fatal() {
    let imgs = image_dir(&["house"]);
    std::fs::write(imgs.path().join("broken.pgm"), b"P5\n10 10\n255\nshort").unwrap();
    let out = tempfile::tempdir().unwrap();
    let db = build_database(imgs.path(), out.path(), &opts(21)).unwrap();
    assert_eq!(db.len(), 1);
    assert_eq!(db.manifest.skipped.len(), 1);
    assert_eq!(db.manifest.skipped[0].file, "broken.pgm");
}

#[test]
fn only_failures_is_an_error() {
    let imgs = tempfile::tempdir().unwrap();
    std::fs::write(imgs.path().join("broken.pgm"), b"garbage").unwrap();
    let out = tempfile::tempdir().unwrap();
    let err = build_database(imgs.path(), out.path(), &opts(21)).unwrap_err();
    assert!(matches!(err, SdrError::NoEntries { skipped: 1 }), "{err}");
}

#[test]
fn rebuild_is_identical_except_timestamp() {
    let imgs = image_dir(&["arrow", "nut", "star"]);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    build_database(imgs.path(), a.path(), &opts(21)).unwrap();
    build_database(imgs.path(), b.path(), &opts(21)).unwrap();
    let strip = |p: &Path| {
        let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p.join(MANIFEST_FILE)).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("created_unix");
        v
    };
    assert_eq!(strip(a.path()), strip(b.path()));
    for name in ["arrow", "nut", "star"] {
        let f = format!("entries/{name}.dots.json");
        assert_eq!(std::fs::read(a.path().join(&f)).unwrap(), std::fs::read(b.path().join(&f)).unwrap());
    }
}

#[test]
fn tampered_entry_fails_checksum_naming_the_id() {
    let imgs = image_dir(&["bolt", "hammer"]);
    let out = tempfile::tempdir().unwrap();
    build_database(imgs.path(), out.path(), &opts(21)).unwrap();
    let f = out.path().join("entries/hammer.dots.json");
    let mut text = std::fs::read_to_string(&f).unwrap();
    text = text.replacen("\"source\"", "\"source\" ", 1);
    std::fs::write(&f, text).unwrap();
    match load_database(out.path()) {
        Err(SdrError::ChecksumMismatch(id)) => assert_eq!(id, "hammer"),
        other => panic!("expected checksum mismatch, got {other:?}"),
    }
}

fn edit_manifest(root: &Path, f: impl FnOnce(&mut serde_json::Value)) {
    let p = root.join(MANIFEST_FILE);
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    f(&mut v);
    std::fs::write(&p, serde_json::to_string_pretty(&v).unwrap()).unwrap();
}

#[test]
fn duplicate_ids_and_unknown_versions_are_rejected() {
    let imgs = image_dir(&["bolt", "hammer"]);
    let out = tempfile::tempdir().unwrap();
    build_database(imgs.path(), out.path(), &opts(21)).unwrap();
    edit_manifest(out.path(), |v| {
        let entries = v["entries"].as_array_mut().unwrap();
        let mut dup = entries[0].clone();
        dup["file"] = entries[1]["file"].clone();
        dup["checksum"] = entries[1]["checksum"].clone();
        entries.push(dup);
    });
    let err = load_database(out.path()).unwrap_err();
    assert!(matches!(err, SdrError::Database(ref m) if m.contains("duplicate")), "{err}");

    edit_manifest(out.path(), |v| v["schema_version"] = 2.into());
    assert!(matches!(load_database(out.path()), Err(SdrError::UnsupportedVersion(2))));
}

#[test]
fn missing_entry_file_is_an_error() {
    let imgs = image_dir(&["bolt"]);
    let out = tempfile::tempdir().unwrap();
    build_database(imgs.path(), out.path(), &opts(21)).unwrap();
    std::fs::remove_file(out.path().join("entries/bolt.dots.json")).unwrap();
    assert!(load_database(out.path()).is_err());
}

#[test]
fn evolver_untouched_without_evolve_flag() {
    let imgs = image_dir(&["cup", "key"]);
    let out = tempfile::tempdir().unwrap();
    let counter = Counting(AtomicUsize::new(0));
    build_database_with(imgs.path(), out.path(), &opts(21), &counter, &|_| {}).unwrap();
    assert_eq!(counter.0.load(Ordering::SeqCst), 0);
}

#[test]
fn evolved_build_round_trips_and_matches_by_density() {
    let imgs = image_dir(&["arrow", "hammer", "screwdriver"]);
    let out = tempfile::tempdir().unwrap();
    let counter = Counting(AtomicUsize::new(0));
    let mut o = opts(11);
    o.evolve_entries = true;
    o.simulate = SimulateConfig { duration: 0.3, dt: 1e-2, ..SimulateConfig::default() };
    let db = build_database_with(imgs.path(), out.path(), &o, &counter, &|_| {}).unwrap();
    assert_eq!(counter.0.load(Ordering::SeqCst), 3);
    assert_eq!(db.manifest.simulate.as_ref().unwrap(), &o.simulate);
    for e in &db.entries {
        assert_eq!(e.meta.kind, EntryKind::Evolved);
        let doc = load_entry(&out.path().join(&e.meta.file)).unwrap();
        assert_eq!(doc, e.document);
        match &doc {
            EntryDocument::Evolved(r) => {
                assert_eq!(r.positions_um.len(), e.meta.atom_count);
                assert_eq!(r.evolution.densities.len(), e.meta.atom_count);
                assert!(r.evolution.densities.iter().all(|d| (0.0..=1.0).contains(d)));
            }
            EntryDocument::Dots(_) => panic!("expected an evolved entry"),
        }
    }
    let reloaded = load_database(out.path()).unwrap();
    assert_eq!(reloaded.entries, db.entries);

    let EntryDocument::Evolved(query) = &db.entries[1].document else { unreachable!() };
    let cloud = sdr_core::store::density_cloud(query).unwrap();
    let r = match_query(&cloud, &db, MatchMode::DensityWeighted).unwrap();
    assert_eq!(r.best().id, "hammer");
    assert!(r.best().distance < 1e-12);
}
