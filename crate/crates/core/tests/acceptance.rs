//! End-to-end acceptance suite. Runs every criterion, prints one PASS or
//! FAIL line for each and exits non-zero if any failed.

mod common;

use std::f64::consts::{SQRT_2, TAU};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use common::{constant_waves, ground, random_spec, spec};
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdr_core::evolution::{evolve, evolve_observed, exact_reference, EvolveOptions};
use sdr_core::generalization::rdp_simplify;
use sdr_core::geometry::Point;
use sdr_core::imaging::Polyline;
use sdr_core::matching::{chamfer, rank, MatchMode, WeightedCloud};
use sdr_core::pipeline::{encode_image, EncodeConfig};
use sdr_core::rydberg::BasisMode;
use sdr_core::store::{build_database, BuildOptions, EntryDocument};
use sdr_core::synth;
use serde_json::Value;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/silhouettes")
}

fn fixture_files() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(fixtures_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "pgm"))
        .collect();
    v.sort();
    v
}

fn sdr(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_sdr"))
        .args(args)
        .env_remove("SDR_CONFIG")
        .output()
        .expect("spawn sdr")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

// 1 ------------------------------------------------------------------------

fn atom_budget() -> Check {
    let files = fixture_files();
    ensure!(files.len() >= 10, "only {} fixtures", files.len());
    let mut in_range = 0;
    let mut counts = Vec::new();
    let mut slowest = Duration::ZERO;
    for f in &files {
        let t = Instant::now();
        let o = sdr(&["encode", "--input", s(f), "--budget", "30", "--json"]);
        let took = t.elapsed();
        slowest = slowest.max(took);
        ensure!(o.status.success(), "{} failed: {}", f.display(), String::from_utf8_lossy(&o.stdout));
        ensure!(took < Duration::from_secs(2), "{} took {took:?}", f.display());
        let v: Value = serde_json::from_slice(&o.stdout).map_err(|e| e.to_string())?;
        let n = v["atoms"].as_u64().unwrap();
        ensure!(n <= 30, "{} produced {n} dots", f.display());
        if (9..=21).contains(&n) {
            in_range += 1;
        }
        counts.push(format!("{}={n}", f.file_stem().unwrap().to_string_lossy()));
    }
    let frac = in_range as f64 / files.len() as f64;
    ensure!(frac >= 0.7, "{in_range}/{} in 9..=21 ({})", files.len(), counts.join(" "));
    Ok(format!(
        "{in_range}/{} fixtures in 9..=21, slowest {:.0} ms [{}]",
        files.len(),
        slowest.as_secs_f64() * 1e3,
        counts.join(" ")
    ))
}

// 2 ------------------------------------------------------------------------

fn resolution_independence() -> Check {
    let shape = synth::triangle();
    let cfg = EncodeConfig { budget: 3, ..EncodeConfig::default() };
    let enc = |n: usize| encode_image(&shape.rasterize(n).unwrap(), "triangle", &cfg).map_err(|e| e.to_string());
    let (small, large) = (enc(128)?, enc(512)?);
    ensure!(small.len() == large.len(), "{} dots at 128 vs {} at 512", small.len(), large.len());
    // Pair every coarse dot with its nearest fine dot; the pairing must be a
    // bijection and each coordinate must agree to two coarse pixels.
    let tol = 2.0 / 128.0;
    let mut used = vec![false; large.len()];
    let mut worst: f64 = 0.0;
    for p in &small.points {
        let (j, q) = large
            .points
            .iter()
            .enumerate()
            .min_by(|a, b| p.dist_sq(*a.1).total_cmp(&p.dist_sq(*b.1)))
            .unwrap();
        ensure!(!used[j], "two coarse dots map to fine dot {j}");
        used[j] = true;
        worst = worst.max((p.x - q.x).abs()).max((p.y - q.y).abs());
    }
    ensure!(worst <= tol, "coordinates differ by {worst:.5} > {tol:.5}");
    Ok(format!("{} dots at both sizes, worst coordinate gap {worst:.5} <= {tol:.5}", small.len()))
}

// 3 ------------------------------------------------------------------------

/// Recursive RDP oracle. Every interior point of each span is measured and
/// the keep/drop predicate is checked exhaustively at that level: a span is
/// collapsed only when every interior point is within epsilon.
/// Exact non-negative rational used to compare squared distances on the
/// integer lattice.
#[derive(Clone, Copy, Debug)]
struct Ratio(i128, i128);

impl PartialEq for Ratio {
    fn eq(&self, o: &Self) -> bool {
        self.0 * o.1 == o.0 * self.1
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        (self.0 * o.1).partial_cmp(&(o.0 * self.1))
    }
}

/// Squared distance to the closed segment, by projection onto the line.
fn float_dist_sq(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let l2 = dx * dx + dy * dy;
    let t = if l2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / l2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.x + t * dx, a.y + t * dy);
    (p.x - cx).powi(2) + (p.y - cy).powi(2)
}

/// Squared distance to the closed segment for integer points, as an exact
/// fraction: |p - (a + t(b - a))|^2 with t = num/den clamped to [0, 1].
fn lattice_dist_sq(p: Point, a: Point, b: Point) -> Ratio {
    let i = |v: f64| v as i128;
    let (px, py, ax, ay, bx, by) = (i(p.x), i(p.y), i(a.x), i(a.y), i(b.x), i(b.y));
    let (dx, dy) = (bx - ax, by - ay);
    let l2 = dx * dx + dy * dy;
    let num = ((px - ax) * dx + (py - ay) * dy).clamp(0, l2);
    if l2 == 0 {
        return Ratio((px - ax).pow(2) + (py - ay).pow(2), 1);
    }
    // Closest point is a + (num / l2)(b - a); scale everything by l2.
    let ex = (px - ax) * l2 - num * dx;
    let ey = (py - ay) * l2 - num * dy;
    Ratio(ex * ex + ey * ey, l2 * l2)
}

fn rdp_oracle<K: PartialOrd + Copy>(
    pts: &[Point],
    dist_sq: &dyn Fn(Point, Point, Point) -> K,
    eps_sq: K,
    first: usize,
    last: usize,
    keep: &mut [bool],
) {
    if last <= first + 1 {
        return;
    }
    let d: Vec<K> = (first + 1..last).map(|i| dist_sq(pts[i], pts[first], pts[last])).collect();
    if d.iter().all(|&x| x <= eps_sq) {
        return;
    }
    // First interior point not beaten by any other.
    let pos = (0..d.len()).find(|&i| d.iter().all(|&x| x <= d[i])).unwrap();
    let split = first + 1 + pos;
    keep[split] = true;
    rdp_oracle(pts, dist_sq, eps_sq, first, split, keep);
    rdp_oracle(pts, dist_sq, eps_sq, split, last, keep);
}

fn oracle_simplify<K: PartialOrd + Copy>(
    pts: &[Point],
    dist_sq: &dyn Fn(Point, Point, Point) -> K,
    eps_sq: K,
) -> Vec<Point> {
    let mut keep = vec![false; pts.len()];
    keep[0] = true;
    keep[pts.len() - 1] = true;
    rdp_oracle(pts, dist_sq, eps_sq, 0, pts.len() - 1, &mut keep);
    pts.iter().zip(&keep).filter(|(_, &k)| k).map(|(p, _)| *p).collect()
}

fn rdp_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut dropped = 0usize;
    for case in 0..500 {
        let n = rng.gen_range(2..=40);
        let lattice = case % 5 == 0;
        let pts: Vec<Point> = (0..n)
            .map(|_| {
                if lattice {
                    Point::new(rng.gen_range(0..20) as f64, rng.gen_range(0..20) as f64)
                } else {
                    Point::new(rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))
                }
            })
            .collect();
        let (got, want) = if lattice {
            let k = rng.gen_range(0..8) as i128;
            let eps = k as f64 + 0.5;
            let got = rdp_simplify(&Polyline::open(pts.clone()), eps).map_err(|e| e.to_string())?;
            (got, oracle_simplify(&pts, &lattice_dist_sq, Ratio((2 * k + 1).pow(2), 4)))
        } else {
            let eps: f64 = rng.gen_range(0.0..30.0);
            let got = rdp_simplify(&Polyline::open(pts.clone()), eps).map_err(|e| e.to_string())?;
            (got, oracle_simplify(&pts, &float_dist_sq, eps * eps))
        };
        ensure!(got.points == want, "case {case}: {} points vs oracle {}", got.points.len(), want.len());
        dropped += n - want.len();
    }
    Ok(format!("500 polylines identical to the oracle ({dropped} points dropped in total)"))
}

// 4 ------------------------------------------------------------------------

fn rabi() -> Check {
    let start = Instant::now();
    let omega = TAU * 2.5;
    let mut worst: f64 = 0.0;
    for k in 1..=20 {
        let t = 0.05 * k as f64;
        let sp = spec(&[(10.0, 10.0)], constant_waves(omega, 0.0, t), BasisMode::Full, 0.0);
        let r = evolve(&sp, &ground(&sp), &EvolveOptions::default()).map_err(|e| e.to_string())?;
        let expect = (omega * t / 2.0).sin().powi(2);
        worst = worst.max((r.densities[0] - expect).abs());
    }
    let took = start.elapsed();
    ensure!(worst <= 1e-6, "max deviation {worst:e}");
    ensure!(took < Duration::from_secs(1), "took {took:?}");
    Ok(format!("20 times, max |P_r - sin^2| = {worst:.2e}, {:.0} ms", took.as_secs_f64() * 1e3))
}

// 5 ------------------------------------------------------------------------

fn blockade_pair() -> Check {
    let omega = TAU * 2.5;
    let sp = spec(&[(20.0, 20.0), (24.0, 20.0)], constant_waves(omega, 0.0, 4.0), BasisMode::Full, 0.0);
    let v = sp.v_matrix.get(0, 1);

    // 4x4 exact diagonalization, basis |gg>, |rg>, |gr>, |rr>.
    let h = omega / 2.0;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        0.0, h,   h,   0.0,
        h,   0.0, 0.0, h,
        h,   0.0, 0.0, h,
        0.0, h,   h,   v,
    ]);
    let eig = SymmetricEigen::new(m);
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&a, &b| eig.eigenvectors[(0, b)].abs().total_cmp(&eig.eigenvectors[(0, a)].abs()));
    let oracle = (eig.eigenvalues[idx[0]] - eig.eigenvalues[idx[1]]).abs();

    let mut max_rr: f64 = 0.0;
    let mut trace = Vec::new();
    evolve_observed(&sp, &ground(&sp), &EvolveOptions::default(), &mut |t, psi| {
        max_rr = max_rr.max(psi[3].norm_sqr());
        trace.push((t, psi[0].norm_sqr()));
    })
    .map_err(|e| e.to_string())?;
    ensure!(max_rr < 0.01, "P(rr) reached {max_rr}");

    // Every local minimum of P(gg), refined by a parabola through its
    // neighbours; the minima are one period apart.
    let mut minima = Vec::new();
    for i in 1..trace.len() - 1 {
        let (y0, y1, y2) = (trace[i - 1].1, trace[i].1, trace[i + 1].1);
        if y1 < y0 && y1 <= y2 && y1 < 0.5 {
            let step = trace[i].0 - trace[i - 1].0;
            minima.push(trace[i].0 + 0.5 * step * (y0 - y2) / (y0 - 2.0 * y1 + y2));
        }
    }
    ensure!(minima.len() >= 3, "only {} minima", minima.len());
    let periods = (minima.len() - 1) as f64;
    let measured = TAU * periods / (minima[minima.len() - 1] - minima[0]);
    let target = SQRT_2 * omega;
    let vs_oracle = (measured / oracle - 1.0).abs();
    let vs_sqrt2 = (measured / target - 1.0).abs();
    ensure!(vs_oracle < 0.02, "measured {measured:.4} vs oracle {oracle:.4}");
    ensure!(vs_sqrt2 < 0.02, "measured {measured:.4} vs sqrt2*omega {target:.4}");
    Ok(format!(
        "max P(rr) {max_rr:.2e}; frequency {measured:.4} rad/us over {} periods, oracle {oracle:.4} ({:.2}%), sqrt2*omega {target:.4} ({:.2}%)",
        minima.len() - 1,
        vs_oracle * 100.0,
        vs_sqrt2 * 100.0
    ))
}

// 6 ------------------------------------------------------------------------

fn propagator_oracle() -> Check {
    let start = Instant::now();
    let duration = 0.3;
    let mut worst_inf: f64 = 0.0;
    let mut worst_drift: f64 = 0.0;
    for i in 0..20u64 {
        let n = 1 + (i as usize % 8);
        let sp = random_spec(100 + i, n, duration);
        let g = ground(&sp);
        let r = evolve(&sp, &g, &EvolveOptions::default()).map_err(|e| e.to_string())?;
        let e = exact_reference(&sp, &g, duration, 1e-3).map_err(|e| e.to_string())?;
        let infidelity = 1.0 - r.final_state.fidelity(&e);
        worst_inf = worst_inf.max(infidelity);
        worst_drift = worst_drift.max(r.norm_drift);
        ensure!(infidelity <= 1e-6, "spec {i} (N={n}): infidelity {infidelity:e}");
        ensure!(r.norm_drift <= 1e-6, "spec {i} (N={n}): norm drift {:e}", r.norm_drift);
    }
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!(
        "20 specs, worst infidelity {worst_inf:.2e}, worst drift {worst_drift:.2e}, {:.1} s",
        took.as_secs_f64()
    ))
}

// 7 ------------------------------------------------------------------------

fn blockade_basis() -> Check {
    let omega = 15.7;
    let mut worst: f64 = 0.0;
    let mut per_n = Vec::new();
    for n in 2..=8usize {
        // Ring of diameter 7.6 um: every pair sits inside the blockade radius.
        let r = 3.8;
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|k| {
                let a = TAU * k as f64 / n as f64;
                (30.0 + r * a.cos(), 30.0 + r * a.sin())
            })
            .collect();
        let full = spec(&pts, constant_waves(omega, 3.0, 1.0), BasisMode::Full, 0.0);
        let rb = full.register.profile.blockade_radius(omega);
        ensure!(2.0 * r < rb, "ring wider than the blockade radius {rb}");
        let blk = spec(&pts, constant_waves(omega, 3.0, 1.0), BasisMode::Blockade, rb);
        ensure!(blk.dim() == n + 1, "blockade basis has {} states", blk.dim());
        let a = evolve(&full, &ground(&full), &EvolveOptions::default()).map_err(|e| e.to_string())?;
        let b = evolve(&blk, &ground(&blk), &EvolveOptions::default()).map_err(|e| e.to_string())?;
        let diff = a
            .densities
            .iter()
            .zip(&b.densities)
            .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        worst = worst.max(diff);
        per_n.push(format!("N={n} {diff:.2e} (diameter {:.2} R_b)", 2.0 * r / rb));
    }
    let summary = per_n.join(", ");
    ensure!(worst < 1e-2, "max density difference {worst:.3e}: {summary}");
    Ok(format!("max density difference {worst:.2e}: {summary}"))
}

// 8 ------------------------------------------------------------------------

fn brute_chamfer(a: &[Point], b: &[Point]) -> f64 {
    let directed = |from: &[Point], to: &[Point]| {
        let mut total = 0.0;
        for p in from {
            let mut best = f64::INFINITY;
            for q in to {
                let d = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
                if d < best {
                    best = d;
                }
            }
            total += best;
        }
        total / from.len() as f64
    };
    directed(a, b) + directed(b, a)
}

fn chamfer_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cloud = |rng: &mut ChaCha8Rng| -> Vec<Point> {
        let n = rng.gen_range(1..=256);
        (0..n).map(|_| Point::new(rng.gen(), rng.gen())).collect()
    };
    for i in 0..200 {
        let (pa, pb) = (cloud(&mut rng), cloud(&mut rng));
        let a = WeightedCloud::uniform(pa.clone()).map_err(|e| e.to_string())?;
        let b = WeightedCloud::uniform(pb.clone()).map_err(|e| e.to_string())?;
        let fast = chamfer(&a, &b);
        let slow = brute_chamfer(&pa, &pb);
        ensure!(fast == slow, "pair {i}: {fast} vs brute force {slow}");
        ensure!(fast >= 0.0, "pair {i}: negative distance");
        ensure!(chamfer(&b, &a) == fast, "pair {i}: asymmetric");
        ensure!(chamfer(&a, &a) == 0.0 && chamfer(&b, &b) == 0.0, "pair {i}: non-zero self-distance");
    }
    Ok("200 pairs equal to brute force; self-distance, symmetry and non-negativity hold".into())
}

// 9 ------------------------------------------------------------------------

fn self_match() -> Check {
    let out = tempfile::tempdir().map_err(|e| e.to_string())?;
    let db = build_database(&fixtures_dir(), out.path(), &BuildOptions::default()).map_err(|e| e.to_string())?;
    let candidates = db.candidates(MatchMode::Geometry).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for entry in &db.entries {
        let EntryDocument::Dots(cloud) = &entry.document else {
            return Err("expected dot entries".into());
        };
        let id = &entry.meta.id;
        let variants: [(&str, f64, f64, f64); 3] =
            [("identity", 1.0, 0.0, 0.0), ("translated", 1.0, 0.31, -0.17), ("scaled", 2.5, 0.0, 0.0)];
        for (label, k, tx, ty) in variants {
            let pts = cloud.points.iter().map(|p| Point::new(k * p.x + tx, k * p.y + ty)).collect();
            let q = WeightedCloud::uniform(pts).map_err(|e| e.to_string())?;
            let r = rank(&q, &candidates, MatchMode::Geometry).map_err(|e| e.to_string())?;
            ensure!(&r.best().id == id, "{label} {id} ranked {} first", r.best().id);
            if label == "identity" {
                ensure!(r.best().distance < 1e-12, "{id} self-distance {}", r.best().distance);
                worst = worst.max(r.best().distance);
            }
        }
    }
    Ok(format!(
        "{} entries rank themselves first (worst self-distance {worst:.1e}), also when translated and scaled",
        db.len()
    ))
}

// 10 -----------------------------------------------------------------------

fn end_to_end_run(root: &Path, images: &Path, query: &Path) -> std::result::Result<Vec<(String, Vec<u8>)>, String> {
    let run = |args: &[&str]| -> std::result::Result<Vec<u8>, String> {
        let o = sdr(args);
        if !o.status.success() {
            return Err(format!("{args:?} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)));
        }
        Ok(o.stdout)
    };
    let db = root.join("db");
    let dots = root.join("query.dots.json");
    let evolved = root.join("query.evolved.json");
    let common = ["--budget", "14", "--basis", "full", "--seed", "2024", "--json"];
    let mut outputs = Vec::new();
    let mut build = vec!["db-build", "--images", s(images), "--out", s(&db), "--evolve"];
    build.extend(common);
    outputs.push(("db-build".to_string(), run(&build)?));
    outputs.push((
        "encode".to_string(),
        run(&["encode", "--input", s(query), "--out", s(&dots), "--budget", "14", "--json"])?,
    ));
    let mut sim = vec!["simulate", "--dots", s(&dots), "--out", s(&evolved), "--shots", "100"];
    sim.extend(["--basis", "full", "--seed", "2024", "--json"]);
    let sim_out = run(&sim)?;
    let atoms = serde_json::from_slice::<Value>(&sim_out).map_err(|e| e.to_string())?["atoms"].as_u64().unwrap();
    if atoms > 14 {
        return Err(format!("query has {atoms} atoms"));
    }
    outputs.push(("simulate".to_string(), sim_out));
    for mode in ["geometry", "density_weighted"] {
        let m = run(&["match", "--query", s(&evolved), "--db", s(&db), "--mode", mode, "--top", "10", "--json"])?;
        let v: Value = serde_json::from_slice(&m).map_err(|e| e.to_string())?;
        let stem = query.file_stem().unwrap().to_string_lossy();
        if v["ranking"][0]["id"] != *stem {
            return Err(format!("{mode} match put {} first", v["ranking"][0]["id"]));
        }
        outputs.push((format!("match {mode}"), m));
    }
    for f in ["query.dots.json", "query.evolved.json"] {
        outputs.push((f.to_string(), std::fs::read(root.join(f)).map_err(|e| e.to_string())?));
    }
    let mut entries: Vec<_> = std::fs::read_dir(db.join("entries")).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for e in entries {
        outputs.push((e.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&e).unwrap()));
    }
    let mut manifest: Value =
        serde_json::from_slice(&std::fs::read(db.join("manifest.json")).unwrap()).map_err(|e| e.to_string())?;
    manifest.as_object_mut().unwrap().remove("created_unix");
    outputs.push(("manifest".to_string(), manifest.to_string().into_bytes()));
    Ok(outputs)
}

fn end_to_end() -> Check {
    let start = Instant::now();
    let images = tempfile::tempdir().map_err(|e| e.to_string())?;
    for f in fixture_files().iter().take(10) {
        std::fs::copy(f, images.path().join(f.file_name().unwrap())).map_err(|e| e.to_string())?;
    }
    let query = fixture_files()[4].clone();
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    let first = end_to_end_run(a.path(), images.path(), &query)?;
    let second = end_to_end_run(b.path(), images.path(), &query)?;
    let took = start.elapsed();
    ensure!(first.len() == second.len(), "different number of artifacts");
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        // Output paths differ between the two runs; compare with them removed.
        let strip = |bytes: &[u8], root: &Path| String::from_utf8_lossy(bytes).replace(s(root), "<root>");
        ensure!(strip(x, a.path()) == strip(y, b.path()), "{name} differs between runs");
    }
    ensure!(took < Duration::from_secs(300), "took {took:?}");
    Ok(format!(
        "10-entry evolved database, query {} matched first in both modes, {} artifacts identical across two runs, {:.1} s",
        query.file_stem().unwrap().to_string_lossy(),
        first.len(),
        took.as_secs_f64()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("atom budget on fixtures", atom_budget),
        ("resolution independence", resolution_independence),
        ("RDP oracle equivalence", rdp_equivalence),
        ("Rabi analytic check", rabi),
        ("blockade suppression", blockade_pair),
        ("propagator oracle", propagator_oracle),
        ("blockade-basis consistency", blockade_basis),
        ("Chamfer oracle", chamfer_oracle),
        ("self-match", self_match),
        ("desk-scale end-to-end", end_to_end),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} acceptance criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} acceptance criteria passed", criteria.len());
}
