use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::QuantumState;
use crate::error::{Result, SdrError};
use crate::rydberg::{dense_hamiltonian, DriveValues, HamiltonianSpec, DENSE_LIMIT};

/// Offset of the two Gauss-Legendre nodes from the interval midpoint, as a
/// fraction of the interval.
const NODE_OFFSET: f64 = 0.288_675_134_594_812_9;
/// Commutator-free Magnus weights, (3 ∓ 2√3) / 12.
const W_SMALL: f64 = -0.038_675_134_594_812_88;
const W_LARGE: f64 = 0.538_675_134_594_812_9;

/// Dense reference propagator.
///
/// Every `sample_dt` interval is further cut at waveform knots so each piece
/// sees a smooth drive. The schedule is sampled at two Gauss points inside
/// each piece and the interval is propagated by two exponentials of weighted
/// Gauss-point Hamiltonians (fourth-order commutator-free Magnus). Each
/// exponential acts on the state through a Taylor series of the dense
/// matrix, sub-stepped so every series argument has 1-norm at most one and
/// summed to machine precision. Only for bases of at most [`DENSE_LIMIT`]
/// states.
pub fn exact_reference(
    spec: &HamiltonianSpec,
    initial: &QuantumState,
    duration: f64,
    sample_dt: f64,
) -> Result<QuantumState> {
    if spec.dim() > DENSE_LIMIT {
        return Err(SdrError::BasisTooLarge(format!(
            "{} states exceed the dense limit of {DENSE_LIMIT}",
            spec.dim()
        )));
    }
    if !(sample_dt > 0.0) || !(duration >= 0.0) {
        return Err(SdrError::invalid("sample interval and duration must be positive"));
    }
    if initial.dim() != spec.dim() {
        return Err(SdrError::DimensionMismatch {
            expected: spec.dim(),
            actual: initial.dim(),
        });
    }
    let mut psi = DVector::from_column_slice(initial.amplitudes());
    let mut cache: Option<(DriveValues, DMatrix<Complex64>)> = None;
    let mut matrix_at = |d: DriveValues| -> Result<DMatrix<Complex64>> {
        if let Some((k, m)) = &cache {
            if *k == d {
                return Ok(m.clone());
            }
        }
        let m = dense_hamiltonian(spec, &d)?;
        cache = Some((d, m.clone()));
        Ok(m)
    };
    let w = &spec.waves;
    let mut knots: Vec<f64> = [&w.omega, &w.delta_g, &w.delta_l, &w.phi]
        .iter()
        .flat_map(|wf| wf.samples().iter().map(|&(t, _)| t))
        .filter(|&t| t > 0.0 && t < duration)
        .collect();
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut pieces = Vec::new();
    let mut t = 0.0;
    let mut k = 0usize;
    let mut next_knot = 0usize;
    while t < duration - 1e-12 * duration.max(1.0) {
        let next = ((k + 1) as f64 * sample_dt).min(duration);
        while next_knot < knots.len() && knots[next_knot] <= t {
            next_knot += 1;
        }
        while next_knot < knots.len() && knots[next_knot] < next {
            pieces.push((t, knots[next_knot]));
            t = knots[next_knot];
            next_knot += 1;
        }
        pieces.push((t, next));
        t = next;
        k += 1;
    }
    for (t, next) in pieces {
        let h = next - t;
        let mid = t + h / 2.0;
        let d1 = spec.drive_at(mid - NODE_OFFSET * h);
        let d2 = spec.drive_at(mid + NODE_OFFSET * h);
        if d1 == d2 {
            let m = matrix_at(d1)?;
            psi = expm_action(&m, h, psi);
        } else {
            let a = matrix_at(d1)?;
            let b = dense_hamiltonian(spec, &d2)?;
            let first = &a * Complex64::from(W_LARGE) + &b * Complex64::from(W_SMALL);
            let second = &a * Complex64::from(W_SMALL) + &b * Complex64::from(W_LARGE);
            psi = expm_action(&first, h, psi);
            psi = expm_action(&second, h, psi);
        }
    }
    Ok(QuantumState::from_raw(
        psi.iter().copied().collect(),
        initial.basis().clone(),
    ))
}

/// exp(−i·h·m)·v by a sub-stepped Taylor series.
fn expm_action(m: &DMatrix<Complex64>, h: f64, mut v: DVector<Complex64>) -> DVector<Complex64> {
    let norm1 = (0..m.ncols())
        .map(|c| m.column(c).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let substeps = (norm1 * h.abs()).ceil().max(1.0) as usize;
    let scale = Complex64::new(0.0, -h / substeps as f64);
    for _ in 0..substeps {
        let mut term = v.clone();
        let mut sum = v.clone();
        for j in 1..60 {
            term = m * &term * (scale / j as f64);
            sum += &term;
            if term.norm() <= 1e-17 * sum.norm() {
                break;
            }
        }
        v = sum;
    }
    v
}
