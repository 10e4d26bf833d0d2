use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{BasisSpec, WaveformSet};
use crate::embedding::{interaction_matrix, AtomRegister, InteractionMatrix};
use crate::error::{Result, SdrError};
use crate::evolution::QuantumState;

/// Largest basis that may be materialized densely (test oracles only).
pub const DENSE_LIMIT: usize = 1 << 10;

const PAR_THRESHOLD: usize = 1 << 12;

/// Waveform values frozen at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveValues {
    pub omega: f64,
    pub delta_g: f64,
    pub delta_l: f64,
    pub phi: f64,
}

/// Immutable description of H(t) for one register, schedule and basis.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    pub register: AtomRegister,
    pub waves: WaveformSet,
    pub basis: Arc<BasisSpec>,
    pub v_matrix: InteractionMatrix,
    /// Σ_{j<k ∈ b} V_jk per basis state.
    interaction: Vec<f64>,
    /// Σ_{j ∈ b} α_j per basis state.
    alpha_sum: Vec<f64>,
}

impl HamiltonianSpec {
    pub fn new(register: AtomRegister, waves: WaveformSet, basis: BasisSpec) -> Result<Self> {
        if basis.n_atoms != register.len() {
            return Err(SdrError::DimensionMismatch {
                expected: register.len(),
                actual: basis.n_atoms,
            });
        }
        if register.local_scale.len() != register.len() {
            return Err(SdrError::invalid("one local scale per atom is required"));
        }
        let v_matrix = interaction_matrix(&register)?;
        let n = register.len();
        let mut interaction = Vec::with_capacity(basis.dim());
        let mut alpha_sum = Vec::with_capacity(basis.dim());
        for &s in &basis.states {
            let mut e = 0.0;
            let mut a = 0.0;
            for j in 0..n {
                if s >> j & 1 == 1 {
                    a += register.local_scale[j];
                    for k in j + 1..n {
                        if s >> k & 1 == 1 {
                            e += v_matrix.get(j, k);
                        }
                    }
                }
            }
            interaction.push(e);
            alpha_sum.push(a);
        }
        Ok(HamiltonianSpec {
            register,
            waves,
            basis: Arc::new(basis),
            v_matrix,
            interaction,
            alpha_sum,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn n_atoms(&self) -> usize {
        self.basis.n_atoms
    }

    pub fn drive_at(&self, t: f64) -> DriveValues {
        DriveValues {
            omega: self.waves.omega.eval(t),
            delta_g: self.waves.delta_g.eval(t),
            delta_l: self.waves.delta_l.eval(t),
            phi: self.waves.phi.eval(t),
        }
    }

    /// Recompute V from the register and compare with the cached matrix.
    pub fn check_consistency(&self) -> Result<()> {
        if interaction_matrix(&self.register)? == self.v_matrix {
            Ok(())
        } else {
            Err(SdrError::invalid("cached interaction matrix is stale"))
        }
    }

    /// Diagonal element for basis index `i`.
    #[inline]
    pub fn diagonal(&self, i: usize, drive: &DriveValues) -> f64 {
        let pop = f64::from(self.basis.states[i].count_ones());
        self.interaction[i] - drive.delta_g * pop - drive.delta_l * self.alpha_sum[i]
    }

    /// `out = H ψ` for the given frozen drive values.
    pub fn apply_frozen(&self, drive: &DriveValues, psi: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(psi.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        let half = 0.5 * drive.omega;
        // e^{iφ} multiplies |g⟩⟨r|: it feeds a ground bit from an excited one.
        let lower = Complex64::from_polar(half, drive.phi);
        let raise = lower.conj();
        let n = self.n_atoms();
        let basis = &*self.basis;
        let row = |i: usize| -> Complex64 {
            let mut acc = psi[i] * self.diagonal(i, drive);
            if half != 0.0 {
                let s = basis.states[i];
                for j in 0..n {
                    let flipped = s ^ (1 << j);
                    if let Some(k) = basis.index_of(flipped) {
                        let c = if s >> j & 1 == 1 { raise } else { lower };
                        acc += c * psi[k];
                    }
                }
            }
            acc
        };
        if out.len() >= PAR_THRESHOLD {
            out.par_iter_mut().enumerate().for_each(|(i, o)| *o = row(i));
        } else {
            for (i, o) in out.iter_mut().enumerate() {
                *o = row(i);
            }
        }
    }

    /// `out = H(t) ψ`.
    pub fn apply(&self, t: f64, psi: &[Complex64], out: &mut [Complex64]) {
        self.apply_frozen(&self.drive_at(t), psi, out);
    }
}

/// H(t)|ψ⟩ for a normalized state in this spec's basis.
pub fn apply_hamiltonian(spec: &HamiltonianSpec, t: f64, state: &QuantumState) -> Result<Vec<Complex64>> {
    if state.dim() != spec.dim() {
        return Err(SdrError::DimensionMismatch {
            expected: spec.dim(),
            actual: state.dim(),
        });
    }
    state.check_normalized(1e-6)?;
    let mut out = vec![Complex64::new(0.0, 0.0); spec.dim()];
    spec.apply(t, state.amplitudes(), &mut out);
    Ok(out)
}

/// Dense H with frozen drive values, built column by column from the
/// matrix-free operator.
pub fn dense_hamiltonian(spec: &HamiltonianSpec, drive: &DriveValues) -> Result<DMatrix<Complex64>> {
    let dim = spec.dim();
    if dim > DENSE_LIMIT {
        return Err(SdrError::BasisTooLarge(format!(
            "{dim} states exceed the dense limit of {DENSE_LIMIT}"
        )));
    }
    Ok(materialize(dim, |x, y| spec.apply_frozen(drive, x, y)))
}

fn materialize(dim: usize, apply: impl Fn(&[Complex64], &mut [Complex64])) -> DMatrix<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let mut m = DMatrix::from_element(dim, dim, zero);
    let mut e = vec![zero; dim];
    let mut col = vec![zero; dim];
    for c in 0..dim {
        e[c] = Complex64::new(1.0, 0.0);
        apply(&e, &mut col);
        e[c] = zero;
        for (r, v) in col.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    m
}

/// max |H − H†| over all entries of an arbitrary linear operator.
pub fn hermiticity_deviation(dim: usize, apply: impl Fn(&[Complex64], &mut [Complex64])) -> Result<f64> {
    if dim > DENSE_LIMIT {
        return Err(SdrError::BasisTooLarge(format!(
            "{dim} states exceed the dense limit of {DENSE_LIMIT}"
        )));
    }
    let m = materialize(dim, apply);
    let mut dev: f64 = 0.0;
    for r in 0..dim {
        for c in 0..dim {
            dev = dev.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    Ok(dev)
}

pub fn hermiticity_check(spec: &HamiltonianSpec, t: f64) -> Result<f64> {
    let drive = spec.drive_at(t);
    hermiticity_deviation(spec.dim(), |x, y| spec.apply_frozen(&drive, x, y))
}
