//! End-to-end stages shared by the CLI, the database builder and the FFI:
//! image to dot cloud, and dot cloud to evolved register.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::embedding::{embed, AtomRegister, EmbedOptions, HardwareProfile};
use crate::error::{Result, SdrError};
use crate::evolution::{evolve, EvolutionResult, EvolveOptions, Method, QuantumState};
use crate::generalization::{resample_equidistant, simplify_to_budget, DotCloud, EpsRange};
use crate::imaging::{
    load_image, remove_staircase, sobel_magnitude, suppress_non_maxima, thin_edges, threshold_edges, trace_contours, GrayImage, ImageFormat, Polyline,
    Threshold,
};
use crate::rydberg::{default_adiabatic_waveforms, enumerate_basis, BasisMode, HamiltonianSpec, WaveformSet};

/// Image-to-dots parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncodeConfig {
    /// Edge threshold as a fraction of the strongest Sobel response.
    pub threshold: f64,
    /// Absolute Sobel magnitude threshold; overrides `threshold` when set.
    pub absolute_threshold: Option<f64>,
    /// Equidistant resampling spacing in pixels.
    pub spacing: f64,
    /// Maximum number of dots.
    pub budget: usize,
    pub eps_range: EpsRange,
    /// Traced chains with fewer edge pixels are discarded as speckle.
    pub min_chain: usize,
    pub thinning: Thinning,
}

/// How the thresholded Sobel band is reduced to one-pixel-wide edges before
/// tracing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thinning {
    /// Trace the raw band.
    None,
    /// Non-maximum suppression across the gradient direction, then removal
    /// of the staircase pixels it leaves on diagonal edges.
    #[default]
    NonMaxima,
    /// Zhang-Suen skeleton of the band.
    ZhangSuen,
}

impl std::str::FromStr for Thinning {
    type Err = SdrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Thinning::None),
            "non_maxima" | "non-maxima" | "nms" => Ok(Thinning::NonMaxima),
            "zhang_suen" | "zhang-suen" => Ok(Thinning::ZhangSuen),
            other => Err(SdrError::invalid(format!(
                "unknown thinning '{other}' (expected none, non_maxima or zhang_suen)"
            ))),
        }
    }
}

impl Default for EncodeConfig {
    fn default() -> Self {
        EncodeConfig {
            threshold: 0.25,
            absolute_threshold: None,
            spacing: 3.0,
            budget: 30,
            eps_range: EpsRange::default(),
            min_chain: 1,
            thinning: Thinning::default(),
        }
    }
}

impl EncodeConfig {
    pub fn threshold(&self) -> Threshold {
        match self.absolute_threshold {
            Some(a) => Threshold::Absolute(a),
            None => Threshold::Relative(self.threshold),
        }
    }
}

/// Traced, filtered and resampled edge chains of an image.
pub fn edge_polylines(img: &GrayImage, cfg: &EncodeConfig) -> Result<Vec<Polyline>> {
    let grad = sobel_magnitude(img);
    let band = threshold_edges(&grad, cfg.threshold())?;
    let edges = match cfg.thinning {
        Thinning::None => band,
        Thinning::NonMaxima => remove_staircase(&suppress_non_maxima(img, &grad, &band)),
        Thinning::ZhangSuen => thin_edges(&band),
    };
    trace_contours(&edges)
        .into_iter()
        .filter(|l| l.len() >= cfg.min_chain.max(1))
        .map(|l| resample_equidistant(&l, cfg.spacing))
        .collect()
}

pub fn encode_image(img: &GrayImage, source: &str, cfg: &EncodeConfig) -> Result<DotCloud> {
    let lines = edge_polylines(img, cfg)?;
    if lines.is_empty() {
        return Err(SdrError::invalid(format!("no edges found in {source}")));
    }
    simplify_to_budget(&lines, cfg.budget, cfg.eps_range, img.width(), img.height(), source)
}

/// Load an image (format from the extension) and encode it; the source id
/// is the file stem.
pub fn encode_file(path: &Path, cfg: &EncodeConfig) -> Result<DotCloud> {
    let format = ImageFormat::from_path(path)
        .ok_or_else(|| SdrError::invalid(format!("unsupported image extension: {}", path.display())))?;
    let img = load_image(path, format)?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    encode_image(&img, &id, cfg)
}

/// Dots-to-evolution parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    /// Microseconds.
    pub duration: f64,
    /// Microseconds.
    pub dt: f64,
    pub method: Method,
    pub basis: BasisMode,
    /// Uniform local-detuning weight α_j.
    pub alpha: f64,
    /// Fail on spacing violations instead of merging atoms.
    pub strict: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig {
            duration: 1.0,
            dt: 1e-3,
            method: Method::Krylov,
            basis: BasisMode::Full,
            alpha: 1.0,
            strict: false,
        }
    }
}

/// Everything produced by one simulation run.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub register: AtomRegister,
    pub waves: WaveformSet,
    pub result: EvolutionResult,
}

/// Embed, build the Hamiltonian over the configured basis (blockade radius
/// at the peak Rabi frequency of the schedule) and evolve from all-ground.
pub fn simulate_cloud(
    cloud: &DotCloud,
    profile: &HardwareProfile,
    cfg: &SimulateConfig,
    waves: Option<WaveformSet>,
) -> Result<Simulation> {
    let register = embed(cloud, profile, EmbedOptions { alpha: cfg.alpha, strict: cfg.strict })?;
    let waves = match waves {
        Some(w) => w,
        None => default_adiabatic_waveforms(profile, cfg.duration)?,
    };
    waves.validate(profile)?;
    let peak = waves.omega.samples().iter().map(|s| s.1.abs()).fold(0.0, f64::max);
    let radius = if peak > 0.0 { profile.blockade_radius(peak) } else { 0.0 };
    let basis = enumerate_basis(&register, cfg.basis, radius)?;
    let spec = HamiltonianSpec::new(register.clone(), waves.clone(), basis)?;
    let opts = EvolveOptions { dt: cfg.dt, method: cfg.method, ..Default::default() };
    let result = evolve(&spec, &QuantumState::ground(spec.basis.clone()), &opts)?;
    Ok(Simulation { register, waves, result })
}
