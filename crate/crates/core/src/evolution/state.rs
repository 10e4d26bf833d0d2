use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Result, SdrError};
use crate::rydberg::BasisSpec;

/// Amplitudes indexed in basis order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    amplitudes: Vec<Complex64>,
    basis: Arc<BasisSpec>,
}

impl QuantumState {
    pub fn new(amplitudes: Vec<Complex64>, basis: Arc<BasisSpec>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(SdrError::DimensionMismatch {
                expected: basis.dim(),
                actual: amplitudes.len(),
            });
        }
        let s = QuantumState { amplitudes, basis };
        s.check_normalized(1e-6)?;
        Ok(s)
    }

    /// Skips the normalization check; used for integrator output whose
    /// drift is reported separately.
    pub(crate) fn from_raw(amplitudes: Vec<Complex64>, basis: Arc<BasisSpec>) -> Self {
        QuantumState { amplitudes, basis }
    }

    /// Every atom in |g⟩.
    pub fn ground(basis: Arc<BasisSpec>) -> Self {
        Self::basis_state(basis, 0).expect("the empty configuration is always in the basis")
    }

    pub fn basis_state(basis: Arc<BasisSpec>, state: u64) -> Result<Self> {
        let idx = basis
            .index_of(state)
            .ok_or_else(|| SdrError::invalid(format!("state {state:#b} is not in the basis")))?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.dim()];
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(QuantumState { amplitudes, basis })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn basis(&self) -> &Arc<BasisSpec> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > tol {
            return Err(SdrError::invalid(format!("state norm² {n} is not 1 within {tol}")));
        }
        Ok(())
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &QuantumState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }

    pub fn probability(&self, state: u64) -> f64 {
        self.basis
            .index_of(state)
            .map_or(0.0, |i| self.amplitudes[i].norm_sqr())
    }
}

pub(crate) fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}

/// ⟨n_j⟩ for every atom.
pub fn rydberg_densities(state: &QuantumState) -> Vec<f64> {
    let n = state.basis.n_atoms;
    let mut out = vec![0.0; n];
    for (amp, &s) in state.amplitudes.iter().zip(&state.basis.states) {
        let p = amp.norm_sqr();
        if p == 0.0 {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            if s >> j & 1 == 1 {
                *o += p;
            }
        }
    }
    out
}

/// Independent projective measurements in the computational basis. The
/// generator is ChaCha8 seeded from `seed`, so results are identical on
/// every platform.
pub fn sample_bitstrings(state: &QuantumState, shots: usize, seed: u64) -> Vec<u64> {
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut acc = 0.0;
    for a in &state.amplitudes {
        acc += a.norm_sqr();
        cumulative.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..shots)
        .map(|_| {
            let u = rng.gen::<f64>() * acc;
            let i = cumulative.partition_point(|&c| c <= u).min(state.dim() - 1);
            state.basis.states[i]
        })
        .collect()
}

/// Render a configuration with atom 0 first: `'1'` = Rydberg.
pub fn format_bitstring(state: u64, n_atoms: usize) -> String {
    (0..n_atoms)
        .map(|j| if state >> j & 1 == 1 { '1' } else { '0' })
        .collect()
}

const DUMP_MAGIC: &[u8; 8] = b"SDRSTATE";
const DUMP_VERSION: u32 = 1;

/// Little-endian dump: magic, version u32, dimension u32, then
/// interleaved (re, im) f64 pairs in basis order.
pub fn encode_state_dump(state: &QuantumState) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + 16 * state.dim());
    out.extend_from_slice(DUMP_MAGIC);
    out.extend_from_slice(&DUMP_VERSION.to_le_bytes());
    out.extend_from_slice(&(state.dim() as u32).to_le_bytes());
    for a in &state.amplitudes {
        out.extend_from_slice(&a.re.to_le_bytes());
        out.extend_from_slice(&a.im.to_le_bytes());
    }
    out
}

pub fn decode_state_dump(bytes: &[u8]) -> Result<Vec<Complex64>> {
    let bad = |m: &str| SdrError::invalid(format!("state dump: {m}"));
    if bytes.len() < 16 || &bytes[..8] != DUMP_MAGIC {
        return Err(bad("missing SDRSTATE header"));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if version != DUMP_VERSION {
        return Err(SdrError::UnsupportedVersion(u64::from(version)));
    }
    let dim = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    let body = &bytes[16..];
    if body.len() != dim * 16 {
        return Err(bad("length does not match dimension"));
    }
    Ok(body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect())
}
