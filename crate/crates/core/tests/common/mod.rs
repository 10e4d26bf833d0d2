#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sdr_core::embedding::{AtomRegister, HardwareProfile};
use sdr_core::evolution::QuantumState;
use sdr_core::geometry::Point;
use sdr_core::rydberg::{enumerate_basis, BasisMode, HamiltonianSpec, Waveform, WaveformSet};

pub fn register(pts: &[(f64, f64)]) -> AtomRegister {
    AtomRegister {
        positions: pts.iter().map(|&(x, y)| Point::new(x, y)).collect(),
        local_scale: vec![1.0; pts.len()],
        profile: HardwareProfile::default(),
        provenance: "test".into(),
        sources: (0..pts.len()).map(|i| vec![i]).collect(),
    }
}

pub fn constant_waves(omega: f64, delta: f64, duration: f64) -> WaveformSet {
    WaveformSet {
        omega: Waveform::constant(omega),
        delta_g: Waveform::constant(delta),
        delta_l: Waveform::constant(0.0),
        phi: Waveform::constant(0.0),
        duration,
    }
}

pub fn spec(pts: &[(f64, f64)], waves: WaveformSet, mode: BasisMode, radius: f64) -> HamiltonianSpec {
    let reg = register(pts);
    let basis = enumerate_basis(&reg, mode, radius).unwrap();
    HamiltonianSpec::new(reg, waves, basis).unwrap()
}

pub fn ground(spec: &HamiltonianSpec) -> QuantumState {
    QuantumState::ground(spec.basis.clone())
}

/// Random register with pairwise spacing ≥ 4 µm inside a 30 µm box.
pub fn random_positions(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = Vec::new();
    while pts.len() < n {
        let p = (rng.gen_range(0.0..30.0), rng.gen_range(0.0..30.0));
        if pts.iter().all(|q: &(f64, f64)| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt() >= 4.0) {
            pts.push(p);
        }
    }
    pts
}

/// Random piecewise-linear schedule with a handful of knots.
pub fn random_waves(rng: &mut ChaCha8Rng, duration: f64) -> WaveformSet {
    let knots = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| {
        let k = rng.gen_range(2..5);
        let v: Vec<(f64, f64)> = (0..k)
            .map(|i| (duration * i as f64 / (k - 1) as f64, rng.gen_range(lo..hi)))
            .collect();
        Waveform::new(v).unwrap()
    };
    WaveformSet {
        omega: knots(rng, 0.0, 15.7),
        delta_g: knots(rng, -30.0, 30.0),
        delta_l: knots(rng, -10.0, 10.0),
        phi: knots(rng, -1.0, 1.0),
        duration,
    }
}

pub fn random_spec(seed: u64, n: usize, duration: f64) -> HamiltonianSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = random_positions(&mut rng, n);
    let mut reg = register(&pts);
    reg.local_scale = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
    let waves = random_waves(&mut rng, duration);
    let basis = enumerate_basis(&reg, BasisMode::Full, 0.0).unwrap();
    HamiltonianSpec::new(reg, waves, basis).unwrap()
}

pub fn basis_arc(spec: &HamiltonianSpec) -> Arc<sdr_core::rydberg::BasisSpec> {
    spec.basis.clone()
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
