//! Schrödinger-equation integration under the Rydberg Hamiltonian.
//!
//! The default propagator freezes H at the midpoint of every step and
//! applies exp(−iHdt) with an adaptive Lanczos expansion; a classical RK4
//! integrator is available for comparison. Neither renormalizes the state:
//! the norm drift is reported and a run is aborted once it exceeds the
//! configured tolerance.

mod exact;
mod krylov;
mod state;

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use exact::exact_reference;
pub use state::{
    decode_state_dump, encode_state_dump, format_bitstring, rydberg_densities, sample_bitstrings,
    QuantumState,
};

use crate::error::{Result, SdrError};
use crate::rydberg::{DriveValues, HamiltonianSpec};
use krylov::Lanczos;
use state::norm_sqr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    #[default]
    Krylov,
    Rk4,
}

impl std::str::FromStr for Method {
    type Err = SdrError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "krylov" => Ok(Method::Krylov),
            "rk4" => Ok(Method::Rk4),
            other => Err(SdrError::invalid(format!("unknown method `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    /// µs
    pub dt: f64,
    pub method: Method,
    /// Abort once |1 − ‖ψ‖²| exceeds this.
    pub max_norm_drift: f64,
    pub krylov_max_dim: usize,
    pub krylov_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            dt: 1e-3,
            method: Method::Krylov,
            max_norm_drift: 1e-4,
            krylov_max_dim: 30,
            krylov_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionResult {
    pub final_state: QuantumState,
    pub densities: Vec<f64>,
    pub norm_drift: f64,
    pub step_count: usize,
    /// Seconds.
    pub wall_time: f64,
}

/// Step boundaries covering `[0, duration]`, with a short final step when
/// `duration` is not a multiple of `dt`.
fn step_times(duration: f64, dt: f64) -> Vec<(f64, f64)> {
    let full = (duration / dt + 1e-9).floor() as usize;
    let mut steps: Vec<(f64, f64)> = (0..full).map(|n| (n as f64 * dt, dt)).collect();
    let covered = full as f64 * dt;
    let rest = duration - covered;
    if rest > 1e-12 * duration.max(1.0) {
        steps.push((covered, rest));
    }
    steps
}

/// Split a step in halves when the Krylov space is too small for it.
const MAX_SPLIT_DEPTH: u32 = 10;

fn krylov_step(
    spec: &HamiltonianSpec,
    drive: &DriveValues,
    psi: &mut [Complex64],
    tau: f64,
    opts: &EvolveOptions,
    lanczos: &mut Lanczos,
    depth: u32,
) -> Result<()> {
    let apply = |x: &[Complex64], y: &mut [Complex64]| spec.apply_frozen(drive, x, y);
    let backup = psi.to_vec();
    match lanczos.expm_apply(&apply, psi, tau, opts.krylov_max_dim, opts.krylov_tol) {
        Ok(_) => Ok(()),
        Err(_) if depth < MAX_SPLIT_DEPTH => {
            psi.copy_from_slice(&backup);
            krylov_step(spec, drive, psi, tau / 2.0, opts, lanczos, depth + 1)?;
            krylov_step(spec, drive, psi, tau / 2.0, opts, lanczos, depth + 1)
        }
        Err(nc) => Err(SdrError::invalid(format!(
            "krylov expansion did not converge (error estimate {:.2e}); reduce dt",
            nc.error_estimate
        ))),
    }
}

fn rk4_step(spec: &HamiltonianSpec, t: f64, psi: &mut [Complex64], dt: f64, scratch: &mut [Vec<Complex64>; 5]) {
    let minus_i = Complex64::new(0.0, -1.0);
    let [k1, k2, k3, k4, tmp] = scratch;
    let deriv = |t: f64, x: &[Complex64], out: &mut [Complex64]| {
        spec.apply(t, x, out);
        for o in out.iter_mut() {
            *o *= minus_i;
        }
    };
    deriv(t, psi, k1);
    for ((y, p), k) in tmp.iter_mut().zip(psi.iter()).zip(k1.iter()) {
        *y = p + k * (dt / 2.0);
    }
    deriv(t + dt / 2.0, tmp, k2);
    for ((y, p), k) in tmp.iter_mut().zip(psi.iter()).zip(k2.iter()) {
        *y = p + k * (dt / 2.0);
    }
    deriv(t + dt / 2.0, tmp, k3);
    for ((y, p), k) in tmp.iter_mut().zip(psi.iter()).zip(k3.iter()) {
        *y = p + k * dt;
    }
    deriv(t + dt, tmp, k4);
    for (i, p) in psi.iter_mut().enumerate() {
        *p += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
    }
}

pub fn evolve(spec: &HamiltonianSpec, initial: &QuantumState, opts: &EvolveOptions) -> Result<EvolutionResult> {
    evolve_observed(spec, initial, opts, &mut |_, _| {})
}

/// As [`evolve`], calling `observe(t, ψ(t))` at t = 0 and after every step.
pub fn evolve_observed(
    spec: &HamiltonianSpec,
    initial: &QuantumState,
    opts: &EvolveOptions,
    observe: &mut dyn FnMut(f64, &[Complex64]),
) -> Result<EvolutionResult> {
    let start = Instant::now();
    let duration = spec.waves.duration;
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(SdrError::invalid(format!("dt {} must be positive", opts.dt)));
    }
    if opts.dt > duration {
        return Err(SdrError::invalid(format!(
            "dt {} exceeds the duration {duration}",
            opts.dt
        )));
    }
    if initial.dim() != spec.dim() {
        return Err(SdrError::DimensionMismatch {
            expected: spec.dim(),
            actual: initial.dim(),
        });
    }
    initial.check_normalized(1e-6)?;

    let mut psi = initial.amplitudes().to_vec();
    observe(0.0, &psi);
    let mut lanczos = Lanczos::default();
    let zero = Complex64::new(0.0, 0.0);
    let mut scratch: [Vec<Complex64>; 5] = std::array::from_fn(|_| match opts.method {
        Method::Rk4 => vec![zero; spec.dim()],
        Method::Krylov => Vec::new(),
    });

    let steps = step_times(duration, opts.dt);
    let mut drift = 0.0;
    for &(t, h) in &steps {
        match opts.method {
            Method::Krylov => {
                let drive = spec.drive_at(t + h / 2.0);
                krylov_step(spec, &drive, &mut psi, h, opts, &mut lanczos, 0)?;
            }
            Method::Rk4 => rk4_step(spec, t, &mut psi, h, &mut scratch),
        }
        drift = (1.0 - norm_sqr(&psi)).abs();
        if !(drift <= opts.max_norm_drift) {
            return Err(SdrError::NormDrift {
                drift,
                tolerance: opts.max_norm_drift,
                time: t + h,
            });
        }
        observe(t + h, &psi);
    }

    let final_state = QuantumState::from_raw(psi, spec.basis.clone());
    let densities = rydberg_densities(&final_state);
    Ok(EvolutionResult {
        densities,
        final_state,
        norm_drift: drift,
        step_count: steps.len(),
        wall_time: start.elapsed().as_secs_f64(),
    })
}

/// ⟨ψ|H(t)|ψ⟩
pub fn energy(spec: &HamiltonianSpec, t: f64, psi: &[Complex64]) -> f64 {
    let mut h = vec![Complex64::new(0.0, 0.0); psi.len()];
    spec.apply(t, psi, &mut h);
    psi.iter().zip(&h).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_schedule() {
        let s = step_times(1.0, 0.25);
        assert_eq!(s.len(), 4);
        let s = step_times(1.0, 0.3);
        assert_eq!(s.len(), 4);
        assert!((s[3].1 - 0.1).abs() < 1e-12);
        assert!((s.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() < 1e-12);
        let s = step_times(4.0, 1e-3);
        assert_eq!(s.len(), 4000);
    }
}
