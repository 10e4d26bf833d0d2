//! C ABI over `sdr-core`.
//!
//! Every fallible function returns an [`SdrStatus`]. On failure a message is
//! stored per thread and can be read with [`sdr_last_error`]. Objects cross
//! the boundary as opaque handles that the caller releases with the matching
//! `*_free` function; passing NULL to a `*_free` function is a no-op.
//!
//! Output arrays are caller-allocated. Functions that fill them take a
//! capacity and return `SDR_STATUS_BUFFER_TOO_SMALL` when it is insufficient.
//! Point arrays are interleaved `x0, y0, x1, y1, ...`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use sdr_core::cli::classify;
use sdr_core::embedding::HardwareProfile;
use sdr_core::evolution::Method;
use sdr_core::generalization::{DotCloud, EpsRange};
use sdr_core::geometry::Point;
use sdr_core::imaging::GrayImage;
use sdr_core::matching::{chamfer, match_query, MatchMode, MatchResult, WeightedCloud};
use sdr_core::pipeline::{encode_file, encode_image, simulate_cloud, EncodeConfig, SimulateConfig};
use sdr_core::rydberg::BasisMode;
use sdr_core::store::{
    density_cloud, load_database, load_dot_cloud, save_dot_cloud, save_evolved, Database, EvolutionSummary,
    EvolvedRecord,
};
use sdr_core::SdrError;

/// Result of every fallible call. Values 1 to 7 match the `sdr` command's
/// exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdrStatus {
    Ok = 0,
    Internal = 1,
    Input = 2,
    Budget = 3,
    Hardware = 4,
    NormDrift = 5,
    EmptyDatabase = 6,
    NoEntries = 7,
    NullArgument = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdrMethod {
    Krylov = 0,
    Rk4 = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdrBasis {
    Full = 0,
    Blockade = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdrMatchMode {
    Geometry = 0,
    DensityWeighted = 1,
}

/// Encoding parameters. Start from [`sdr_encode_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SdrEncodeOptions {
    pub budget: usize,
    /// Relative edge threshold in (0, 1].
    pub threshold: f64,
    /// Resampling spacing, pixels.
    pub spacing: f64,
    pub eps_min: f64,
    pub eps_max: f64,
}

/// Simulation parameters. Start from [`sdr_simulate_options_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SdrSimulateOptions {
    /// Microseconds.
    pub duration: f64,
    /// Microseconds.
    pub dt: f64,
    pub method: SdrMethod,
    pub basis: SdrBasis,
    pub alpha: f64,
    pub strict: bool,
}

/// An encoded dot cloud.
pub struct SdrDotCloud(DotCloud);

/// An embedded and evolved register.
pub struct SdrSimulation(EvolvedRecord);

/// A loaded match database.
pub struct SdrDatabase(Database);

/// A ranking with NUL-terminated ids.
pub struct SdrMatchResult {
    ids: Vec<CString>,
    distances: Vec<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &SdrError) -> SdrStatus {
    match classify(e).0 {
        2 => SdrStatus::Input,
        3 => SdrStatus::Budget,
        4 => SdrStatus::Hardware,
        5 => SdrStatus::NormDrift,
        6 => SdrStatus::EmptyDatabase,
        7 => SdrStatus::NoEntries,
        _ => SdrStatus::Internal,
    }
}

struct Failure(SdrStatus, String);

impl From<SdrError> for Failure {
    fn from(e: SdrError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SdrStatus::NullArgument, format!("{what} is NULL"))
}

/// Run `f`, turning errors and panics into a status plus the thread's last
/// error message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SdrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SdrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            SdrStatus::Panic
        }
    }
}

unsafe fn path_arg(p: *const c_char) -> Result<PathBuf, Failure> {
    if p.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SdrStatus::Input, "path is not valid UTF-8".into()))?;
    Ok(PathBuf::from(s))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn points_arg(xy: *const f64, n: usize, what: &str) -> Result<Vec<Point>, Failure> {
    if xy.is_null() {
        return Err(null(what));
    }
    let flat = std::slice::from_raw_parts(xy, 2 * n);
    Ok(flat.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect())
}

unsafe fn copy_out(src: &[f64], out: *mut f64, capacity: usize) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output buffer"));
    }
    if capacity < src.len() {
        return Err(Failure(
            SdrStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", src.len()),
        ));
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    Ok(())
}

fn flatten(points: &[Point]) -> Vec<f64> {
    points.iter().flat_map(|p| [p.x, p.y]).collect()
}

fn encode_config(opts: Option<&SdrEncodeOptions>) -> EncodeConfig {
    let mut cfg = EncodeConfig::default();
    if let Some(o) = opts {
        cfg.budget = o.budget;
        cfg.threshold = o.threshold;
        cfg.spacing = o.spacing;
        cfg.eps_range = EpsRange { min: o.eps_min, max: o.eps_max };
    }
    cfg
}

fn ranking(r: MatchResult) -> SdrMatchResult {
    SdrMatchResult {
        ids: r
            .ranking
            .iter()
            .map(|e| CString::new(e.id.replace('\0', " ")).unwrap_or_default())
            .collect(),
        distances: r.ranking.iter().map(|e| e.distance).collect(),
    }
}

/// Message for the last failure on the calling thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sdr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sdr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn sdr_encode_options_default() -> SdrEncodeOptions {
    let cfg = EncodeConfig::default();
    SdrEncodeOptions {
        budget: cfg.budget,
        threshold: cfg.threshold,
        spacing: cfg.spacing,
        eps_min: cfg.eps_range.min,
        eps_max: cfg.eps_range.max,
    }
}

#[no_mangle]
pub extern "C" fn sdr_simulate_options_default() -> SdrSimulateOptions {
    let cfg = SimulateConfig::default();
    SdrSimulateOptions {
        duration: cfg.duration,
        dt: cfg.dt,
        method: match cfg.method {
            Method::Krylov => SdrMethod::Krylov,
            Method::Rk4 => SdrMethod::Rk4,
        },
        basis: match cfg.basis {
            BasisMode::Full => SdrBasis::Full,
            BasisMode::Blockade => SdrBasis::Blockade,
        },
        alpha: cfg.alpha,
        strict: cfg.strict,
    }
}

/// Encode a PGM or PNG file. `opts` may be NULL for defaults.
///
/// # Safety
/// `path` must be a NUL-terminated string, `opts` NULL or valid, `out` a
/// valid pointer to write the new handle to.
#[no_mangle]
pub unsafe extern "C" fn sdr_encode_file(
    path: *const c_char,
    opts: *const SdrEncodeOptions,
    out: *mut *mut SdrDotCloud,
) -> SdrStatus {
    guard(|| {
        let path = path_arg(path)?;
        let cloud = encode_file(&path, &encode_config(opts.as_ref()))?;
        put(out, SdrDotCloud(cloud))
    })
}

/// Encode a row-major 8-bit grayscale buffer of `width * height` bytes.
///
/// # Safety
/// `pixels` must point to `width * height` readable bytes; other pointers as
/// for [`sdr_encode_file`].
#[no_mangle]
pub unsafe extern "C" fn sdr_encode_gray(
    pixels: *const u8,
    width: usize,
    height: usize,
    opts: *const SdrEncodeOptions,
    out: *mut *mut SdrDotCloud,
) -> SdrStatus {
    guard(|| {
        if pixels.is_null() {
            return Err(null("pixels"));
        }
        let n = width
            .checked_mul(height)
            .ok_or_else(|| Failure(SdrStatus::Input, "image dimensions overflow".into()))?;
        let img = GrayImage::new(width, height, std::slice::from_raw_parts(pixels, n).to_vec())?;
        let cloud = encode_image(&img, "buffer", &encode_config(opts.as_ref()))?;
        put(out, SdrDotCloud(cloud))
    })
}

/// Load a dot cloud JSON document.
///
/// # Safety
/// As for [`sdr_encode_file`].
#[no_mangle]
pub unsafe extern "C" fn sdr_dots_load(path: *const c_char, out: *mut *mut SdrDotCloud) -> SdrStatus {
    guard(|| {
        let path = path_arg(path)?;
        put(out, SdrDotCloud(load_dot_cloud(&path)?))
    })
}

/// Write a dot cloud JSON document.
///
/// # Safety
/// `cloud` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sdr_dots_save(cloud: *const SdrDotCloud, path: *const c_char) -> SdrStatus {
    guard(|| {
        let cloud = ref_arg(cloud, "cloud")?;
        save_dot_cloud(&path_arg(path)?, &cloud.0)?;
        Ok(())
    })
}

/// Number of dots, 0 for NULL.
///
/// # Safety
/// `cloud` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_dots_len(cloud: *const SdrDotCloud) -> usize {
    cloud.as_ref().map_or(0, |c| c.0.len())
}

/// RDP tolerance in pixels that produced the cloud, NaN for NULL.
///
/// # Safety
/// `cloud` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_dots_epsilon(cloud: *const SdrDotCloud) -> f64 {
    cloud.as_ref().map_or(f64::NAN, |c| c.0.epsilon)
}

/// Copy the dots as interleaved normalized coordinates. `capacity` counts
/// doubles and must be at least `2 * sdr_dots_len(cloud)`.
///
/// # Safety
/// `cloud` must be a live handle and `out_xy` writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn sdr_dots_copy_points(
    cloud: *const SdrDotCloud,
    out_xy: *mut f64,
    capacity: usize,
) -> SdrStatus {
    guard(|| copy_out(&flatten(&ref_arg(cloud, "cloud")?.0.points), out_xy, capacity))
}

/// # Safety
/// `cloud` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sdr_dots_free(cloud: *mut SdrDotCloud) {
    if !cloud.is_null() {
        drop(Box::from_raw(cloud));
    }
}

/// Unweighted symmetric Chamfer distance between two raw point sets, with no
/// normalization applied.
///
/// # Safety
/// `a_xy` and `b_xy` must hold `2 * a_len` and `2 * b_len` doubles;
/// `out_distance` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_chamfer(
    a_xy: *const f64,
    a_len: usize,
    b_xy: *const f64,
    b_len: usize,
    out_distance: *mut f64,
) -> SdrStatus {
    guard(|| {
        let a = WeightedCloud::uniform(points_arg(a_xy, a_len, "a_xy")?)?;
        let b = WeightedCloud::uniform(points_arg(b_xy, b_len, "b_xy")?)?;
        if out_distance.is_null() {
            return Err(null("out_distance"));
        }
        *out_distance = chamfer(&a, &b);
        Ok(())
    })
}

/// Embed `cloud` on the default hardware profile and evolve it under the
/// default adiabatic schedule. `opts` may be NULL for defaults.
///
/// # Safety
/// `cloud` must be a live handle, `opts` NULL or valid, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_simulate(
    cloud: *const SdrDotCloud,
    opts: *const SdrSimulateOptions,
    out: *mut *mut SdrSimulation,
) -> SdrStatus {
    guard(|| {
        let cloud = &ref_arg(cloud, "cloud")?.0;
        let mut cfg = SimulateConfig::default();
        if let Some(o) = opts.as_ref() {
            cfg.duration = o.duration;
            cfg.dt = o.dt;
            cfg.method = match o.method {
                SdrMethod::Krylov => Method::Krylov,
                SdrMethod::Rk4 => Method::Rk4,
            };
            cfg.basis = match o.basis {
                SdrBasis::Full => BasisMode::Full,
                SdrBasis::Blockade => BasisMode::Blockade,
            };
            cfg.alpha = o.alpha;
            cfg.strict = o.strict;
        }
        let sim = simulate_cloud(cloud, &HardwareProfile::default(), &cfg, None)?;
        put(
            out,
            SdrSimulation(EvolvedRecord {
                cloud: cloud.clone(),
                positions_um: sim.register.positions.clone(),
                alpha: sim.register.local_scale.clone(),
                evolution: EvolutionSummary::from(&sim.result),
            }),
        )
    })
}

/// Number of atoms in the register, 0 for NULL.
///
/// # Safety
/// `sim` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_simulation_atom_count(sim: *const SdrSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.0.positions_um.len())
}

/// Relative norm change over the run, NaN for NULL.
///
/// # Safety
/// `sim` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_simulation_norm_drift(sim: *const SdrSimulation) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| s.0.evolution.norm_drift)
}

/// Copy the final Rydberg densities, one per atom.
///
/// # Safety
/// `sim` must be a live handle and `out` writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn sdr_simulation_copy_densities(
    sim: *const SdrSimulation,
    out: *mut f64,
    capacity: usize,
) -> SdrStatus {
    guard(|| copy_out(&ref_arg(sim, "sim")?.0.evolution.densities, out, capacity))
}

/// Copy atom positions in micrometres, interleaved.
///
/// # Safety
/// `sim` must be a live handle and `out_xy` writable for `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn sdr_simulation_copy_positions(
    sim: *const SdrSimulation,
    out_xy: *mut f64,
    capacity: usize,
) -> SdrStatus {
    guard(|| copy_out(&flatten(&ref_arg(sim, "sim")?.0.positions_um), out_xy, capacity))
}

/// Write the evolved record JSON, the same document `sdr simulate --out`
/// produces.
///
/// # Safety
/// `sim` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sdr_simulation_save(sim: *const SdrSimulation, path: *const c_char) -> SdrStatus {
    guard(|| {
        let sim = ref_arg(sim, "sim")?;
        save_evolved(&path_arg(path)?, &sim.0)?;
        Ok(())
    })
}

/// # Safety
/// `sim` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sdr_simulation_free(sim: *mut SdrSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Open and verify a database directory.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_db_open(path: *const c_char, out: *mut *mut SdrDatabase) -> SdrStatus {
    guard(|| {
        let path = path_arg(path)?;
        put(out, SdrDatabase(load_database(&path)?))
    })
}

/// Number of entries, 0 for NULL.
///
/// # Safety
/// `db` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_db_len(db: *const SdrDatabase) -> usize {
    db.as_ref().map_or(0, |d| d.0.len())
}

/// Rank every entry by geometry against a dot cloud.
///
/// # Safety
/// `db` and `query` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_db_match_dots(
    db: *const SdrDatabase,
    query: *const SdrDotCloud,
    out: *mut *mut SdrMatchResult,
) -> SdrStatus {
    guard(|| {
        let db = &ref_arg(db, "db")?.0;
        let q = WeightedCloud::uniform(ref_arg(query, "query")?.0.points.clone())?;
        put(out, ranking(match_query(&q, db, MatchMode::Geometry)?))
    })
}

/// Rank every entry against a simulation result. Geometry mode compares the
/// dot clouds; density-weighted mode compares atom positions weighted by
/// densities and needs an evolved database.
///
/// # Safety
/// `db` and `query` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_db_match_simulation(
    db: *const SdrDatabase,
    query: *const SdrSimulation,
    mode: SdrMatchMode,
    out: *mut *mut SdrMatchResult,
) -> SdrStatus {
    guard(|| {
        let db = &ref_arg(db, "db")?.0;
        let rec = &ref_arg(query, "query")?.0;
        let result = match mode {
            SdrMatchMode::Geometry => {
                match_query(&WeightedCloud::uniform(rec.cloud.points.clone())?, db, MatchMode::Geometry)?
            }
            SdrMatchMode::DensityWeighted => match_query(&density_cloud(rec)?, db, MatchMode::DensityWeighted)?,
        };
        put(out, ranking(result))
    })
}

/// # Safety
/// `db` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sdr_db_free(db: *mut SdrDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Number of ranked entries, 0 for NULL.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_match_len(result: *const SdrMatchResult) -> usize {
    result.as_ref().map_or(0, |r| r.ids.len())
}

/// Id at `rank` (0 is the best match), or NULL when out of range. The string
/// lives as long as `result`.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_match_id(result: *const SdrMatchResult, rank: usize) -> *const c_char {
    result
        .as_ref()
        .and_then(|r| r.ids.get(rank))
        .map_or(std::ptr::null(), |s| s.as_ptr())
}

/// Distance at `rank`, NaN when out of range.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_match_distance(result: *const SdrMatchResult, rank: usize) -> f64 {
    result
        .as_ref()
        .and_then(|r| r.distances.get(rank).copied())
        .unwrap_or(f64::NAN)
}

/// # Safety
/// `result` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sdr_match_free(result: *mut SdrMatchResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
