use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};

use super::config::Config;
use super::svg::{density_svg, dots_svg};
use super::*;
use crate::error::Result;
use crate::evolution::{encode_state_dump, format_bitstring, sample_bitstrings};
use crate::matching::{match_query, WeightedCloud};
use crate::pipeline::{encode_file, simulate_cloud};
use crate::store::{
    build_database_with, density_cloud, load_database, load_entry, load_waveforms,
    save_dot_cloud, save_evolved, save_register, write_text, BuildOptions, EntryDocument, EvolutionSummary,
    EvolvedRecord, SimulationEvolver,
};

pub(super) fn emit_error_json(code: i32, kind: &str, message: &str) {
    println!(
        "{}",
        json!({"error": {"code": code, "kind": kind, "message": message.trim_end()}})
    );
}

pub(super) fn dispatch(cli: Cli) -> i32 {
    let json_mode = cli.json;
    match execute(cli) {
        Ok(v) => {
            println!("{v}");
            0
        }
        Err(e) => {
            let (code, kind) = classify(&e);
            if json_mode {
                emit_error_json(code, kind, &e.to_string());
            }
            eprintln!("sdr: error: {e}");
            code
        }
    }
}

/// Human-readable progress on standard error, suppressed by `--json`.
struct Say(bool);

impl Say {
    fn line(&self, msg: &str) {
        if !self.0 {
            eprintln!("{msg}");
        }
    }
}

fn execute(cli: Cli) -> Result<Value> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(SdrError::invalid("--threads must be at least 1"));
        }
        // A pool that is already initialised (repeated in-process runs) keeps
        // its size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut cfg = Config::resolve(cli.config.as_deref())?;
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    let say = Say(cli.json);
    match cli.command {
        Command::Encode(a) => encode(&mut cfg, a, &say),
        Command::Simulate(a) => simulate(&mut cfg, a, &say),
        Command::Match(a) => run_match(&cfg, a, &say),
        Command::DbBuild(a) => db_build(&mut cfg, a, &say),
        Command::DbVerify(a) => db_verify(a, &say),
    }
}

fn apply_encode(cfg: &mut Config, f: &EncodeFlags) {
    if let Some(v) = f.budget {
        cfg.budget = v;
    }
    if let Some(v) = f.threshold {
        cfg.threshold = v;
        cfg.absolute_threshold = None;
    }
    if let Some(v) = f.absolute_threshold {
        cfg.absolute_threshold = Some(v);
    }
    if let Some(v) = f.spacing {
        cfg.spacing = v;
    }
    if let Some(v) = f.eps_min {
        cfg.eps_range.min = v;
    }
    if let Some(v) = f.eps_max {
        cfg.eps_range.max = v;
    }
    if let Some(v) = f.thinning {
        cfg.thinning = v;
    }
}

fn apply_profile(cfg: &mut Config, f: &ProfileFlags) {
    let p = &mut cfg.profile;
    let set = |dst: &mut f64, v: Option<f64>| {
        if let Some(v) = v {
            *dst = v;
        }
    };
    set(&mut p.area_width, f.area_width);
    set(&mut p.area_height, f.area_height);
    set(&mut p.min_spacing, f.min_spacing);
    set(&mut p.c6, f.c6);
    set(&mut p.omega_max, f.omega_max);
    set(&mut p.delta_abs_max, f.delta_abs_max);
    set(&mut p.t_max, f.t_max);
    if let Some(v) = f.max_atoms {
        p.max_atoms = v;
    }
}

fn apply_simulate(cfg: &mut Config, f: &SimulateFlags) {
    if let Some(v) = f.duration {
        cfg.duration = v;
    }
    if let Some(v) = f.dt {
        cfg.dt = v;
    }
    if let Some(v) = f.method {
        cfg.method = v;
    }
    if let Some(v) = f.basis {
        cfg.basis = v;
    }
    if let Some(v) = f.alpha {
        cfg.alpha = v;
    }
    if f.strict {
        cfg.strict = true;
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn encode(cfg: &mut Config, a: EncodeArgs, say: &Say) -> Result<Value> {
    apply_encode(cfg, &a.encode);
    let cloud = encode_file(&a.input, &cfg.encode())?;
    if let Some(out) = &a.out {
        save_dot_cloud(out, &cloud)?;
    }
    if let Some(plot) = &a.plot {
        write_text(plot, &dots_svg(&cloud.points, &cloud.source))?;
    }
    say.line(&format!(
        "{}: {} dots at epsilon {:.4} px",
        cloud.source,
        cloud.len(),
        cloud.epsilon
    ));
    Ok(json!({
        "source": cloud.source,
        "atoms": cloud.len(),
        "epsilon": cloud.epsilon,
        "width": cloud.width,
        "height": cloud.height,
        "out": a.out.as_deref().map(path_str),
    }))
}

fn simulate(cfg: &mut Config, a: SimulateArgs, say: &Say) -> Result<Value> {
    apply_simulate(cfg, &a.simulate);
    apply_profile(cfg, &a.profile);
    let cloud = load_entry(&a.dots)?.cloud().clone();
    let waves = a.waveforms.as_deref().map(load_waveforms).transpose()?;
    let sim = simulate_cloud(&cloud, &cfg.profile, &cfg.simulate(), waves)?;
    let summary = EvolutionSummary::from(&sim.result);
    let record = EvolvedRecord {
        cloud: cloud.clone(),
        positions_um: sim.register.positions.clone(),
        alpha: sim.register.local_scale.clone(),
        evolution: summary.clone(),
    };
    if let Some(out) = &a.out {
        save_evolved(out, &record)?;
    }
    if let Some(out) = &a.register_out {
        save_register(out, &sim.register)?;
    }
    if let Some(out) = &a.state_out {
        std::fs::write(out, encode_state_dump(&sim.result.final_state)).map_err(|e| SdrError::io(out, e))?;
    }
    if let Some(plot) = &a.plot {
        let area = (cfg.profile.area_width, cfg.profile.area_height);
        write_text(plot, &density_svg(&sim.register.positions, &summary.densities, area, &cloud.source))?;
    }
    let n = sim.register.len();
    let mut samples = BTreeMap::new();
    if a.shots > 0 {
        for b in sample_bitstrings(&sim.result.final_state, a.shots, cfg.seed) {
            *samples.entry(format_bitstring(b, n)).or_insert(0usize) += 1;
        }
    }
    say.line(&format!(
        "{}: {} atoms, {} basis states, {} steps, norm drift {:.2e}",
        cloud.source,
        n,
        sim.result.final_state.dim(),
        summary.steps,
        summary.norm_drift
    ));
    let mut v = json!({
        "source": cloud.source,
        "atoms": n,
        "dim": sim.result.final_state.dim(),
        "densities": summary.densities,
        "norm_drift": summary.norm_drift,
        "steps": summary.steps,
        "out": a.out.as_deref().map(path_str),
    });
    if a.shots > 0 {
        v["seed"] = json!(cfg.seed);
        v["samples"] = json!(samples);
    }
    Ok(v)
}

fn run_match(cfg: &Config, a: MatchArgs, say: &Say) -> Result<Value> {
    let mode = a.mode.unwrap_or(cfg.match_mode);
    let db = load_database(&a.db)?;
    let query = match (load_entry(&a.query)?, mode) {
        (doc, MatchMode::Geometry) => WeightedCloud::uniform(doc.cloud().points.clone())?,
        (EntryDocument::Evolved(r), MatchMode::DensityWeighted) => density_cloud(&r)?,
        (EntryDocument::Dots(_), MatchMode::DensityWeighted) => {
            return Err(SdrError::invalid(format!(
                "{} holds a dot cloud without densities; density_weighted matching needs an evolved result written by `sdr simulate --out`",
                a.query.display()
            )))
        }
    };
    let mut result = match_query(&query, &db, mode)?;
    result.truncate(a.top);
    let best = result.best();
    say.line(&format!("best match: {} (chamfer {:.6e})", best.id, best.distance));
    Ok(result.to_json())
}

fn db_build(cfg: &mut Config, a: DbBuildArgs, say: &Say) -> Result<Value> {
    apply_encode(cfg, &a.encode);
    apply_simulate(cfg, &a.simulate);
    apply_profile(cfg, &a.profile);
    let opts = BuildOptions {
        profile: cfg.profile.clone(),
        encode: cfg.encode(),
        evolve_entries: a.evolve,
        simulate: cfg.simulate(),
    };
    let quiet = say.0;
    let progress = move |msg: &str| {
        if !quiet {
            eprintln!("{msg}");
        }
    };
    let db = build_database_with(&a.images, &a.out, &opts, &SimulationEvolver, &progress)?;
    say.line(&format!(
        "wrote {} entries to {} ({} skipped)",
        db.len(),
        a.out.display(),
        db.manifest.skipped.len()
    ));
    Ok(json!({
        "out": path_str(&a.out),
        "entries": db.len(),
        "evolved": a.evolve,
        "skipped": db.manifest.skipped,
    }))
}

fn db_verify(a: DbVerifyArgs, say: &Say) -> Result<Value> {
    let db = load_database(&a.db)?;
    say.line(&format!("{}: {} entries verified", a.db.display(), db.len()));
    Ok(json!({
        "db": path_str(&a.db),
        "schema_version": db.manifest.schema_version,
        "entries": db.len(),
        "ok": true,
    }))
}
