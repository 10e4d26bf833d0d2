//! Drive schedules and the time-dependent Rydberg Hamiltonian
//!
//! ```text
//! H(t) = Ω(t)/2 Σ_j (e^{iφ(t)} |g_j⟩⟨r_j| + h.c.) + Σ_{j<k} V_jk n_j n_k
//!        − Σ_j [Δ_g(t) + α_j Δ_l(t)] n_j
//! ```
//!
//! applied matrix-free over either the full 2^N product basis or the
//! blockade-restricted basis of independent sets. Bit `j` of a basis state
//! is 1 when atom `j` is in |r⟩.

mod basis;
mod hamiltonian;
mod waveform;

pub use basis::{enumerate_basis, BasisMode, BasisSpec, MAX_BLOCKADE_STATES, MAX_FULL_ATOMS};
pub use hamiltonian::{
    apply_hamiltonian, dense_hamiltonian, hermiticity_check, hermiticity_deviation, DriveValues,
    HamiltonianSpec, DENSE_LIMIT,
};
pub use waveform::{default_adiabatic_waveforms, Waveform, WaveformSet};
