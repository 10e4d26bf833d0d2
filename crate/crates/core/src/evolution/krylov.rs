//! Lanczos approximation of exp(−iHτ)v for Hermitian H.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NotConverged {
    pub error_estimate: f64,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// exp(−iTτ)e₁ for the symmetric tridiagonal T with diagonal `alpha` and
/// off-diagonal `beta`.
fn expm_tridiagonal(alpha: &[f64], beta: &[f64], tau: f64) -> Vec<Complex64> {
    let m = alpha.len();
    let mut t = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        t[(i, i)] = alpha[i];
        if i + 1 < m {
            t[(i, i + 1)] = beta[i];
            t[(i + 1, i)] = beta[i];
        }
    }
    let eig = SymmetricEigen::new(t);
    let u = &eig.eigenvectors;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(l, &lam)| Complex64::from_polar(u[(0, l)], -lam * tau))
        .collect();
    (0..m)
        .map(|i| (0..m).map(|l| phases[l] * u[(i, l)]).sum())
        .collect()
}

/// Reusable Krylov basis storage.
#[derive(Debug, Default)]
pub(crate) struct Lanczos {
    basis: Vec<Vec<Complex64>>,
    w: Vec<Complex64>,
}

impl Lanczos {
    /// Overwrite `v` with exp(−iHτ)v. The subspace grows until the a
    /// posteriori error estimate β_m·|[exp(−iT_mτ)e₁]_m|·‖v‖ drops below
    /// `tol`, up to `max_dim` vectors.
    pub fn expm_apply(
        &mut self,
        apply: &dyn Fn(&[Complex64], &mut [Complex64]),
        v: &mut [Complex64],
        tau: f64,
        max_dim: usize,
        tol: f64,
    ) -> Result<usize, NotConverged> {
        let dim = v.len();
        let beta0 = norm(v);
        if beta0 == 0.0 {
            return Ok(0);
        }
        while self.basis.len() < max_dim.min(dim) + 1 {
            self.basis.push(Vec::new());
        }
        for b in self.basis.iter_mut() {
            b.resize(dim, ZERO);
        }
        self.w.resize(dim, ZERO);

        for (q, x) in self.basis[0].iter_mut().zip(v.iter()) {
            *q = x / beta0;
        }
        let mut alpha = Vec::with_capacity(max_dim);
        let mut beta: Vec<f64> = Vec::with_capacity(max_dim);
        let mut last_err = f64::INFINITY;
        for k in 0..max_dim.min(dim) {
            let (head, tail) = self.basis.split_at_mut(k + 1);
            let qk = &head[k];
            apply(qk, &mut self.w);
            let a = dot(qk, &self.w).re;
            for (w, q) in self.w.iter_mut().zip(qk) {
                *w -= q * a;
            }
            if k > 0 {
                let b = beta[k - 1];
                for (w, q) in self.w.iter_mut().zip(&head[k - 1]) {
                    *w -= q * b;
                }
            }
            // Full reorthogonalization keeps the small basis orthonormal.
            for q in head.iter() {
                let c = dot(q, &self.w);
                for (w, qi) in self.w.iter_mut().zip(q) {
                    *w -= qi * c;
                }
            }
            alpha.push(a);
            let b = norm(&self.w);
            let y = expm_tridiagonal(&alpha, &beta, tau);
            let err = b * y[k].norm() * beta0;
            let exhausted = k + 1 == dim;
            if err <= tol || b == 0.0 || exhausted {
                v.fill(ZERO);
                for (coef, q) in y.iter().zip(head.iter()) {
                    let c = coef * beta0;
                    for (x, qi) in v.iter_mut().zip(q) {
                        *x += qi * c;
                    }
                }
                return Ok(k + 1);
            }
            last_err = err;
            beta.push(b);
            for (q, w) in tail[0].iter_mut().zip(&self.w) {
                *q = w / b;
            }
        }
        Err(NotConverged {
            error_estimate: last_err,
        })
    }
}
