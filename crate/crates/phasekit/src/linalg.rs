//! Small helpers for dense complex matrices.
//!
//! Everything in this crate works at desk scale (dimensions in the tens),
//! so plain `ndarray` dense arithmetic is all that is needed.

use ndarray::Array2;
use num_complex::Complex64;

/// Conjugate transpose.
pub fn dagger(m: &Array2<Complex64>) -> Array2<Complex64> {
    m.t().mapv(|z| z.conj())
}

/// Identity matrix.
pub fn identity(n: usize) -> Array2<Complex64> {
    Array2::from_diag_elem(n, Complex64::new(1.0, 0.0))
}

/// Max entry modulus.
pub fn max_abs(m: &Array2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max entry modulus of `a - b`.
pub fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Commutator [a, b] = ab - ba.
pub fn commutator(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    a.dot(b) - b.dot(a)
}

/// k-th matrix power by repeated multiplication (k is small here).
pub fn matrix_power(m: &Array2<Complex64>, k: usize) -> Array2<Complex64> {
    let n = m.nrows();
    let mut acc = identity(n);
    for _ in 0..k {
        acc = acc.dot(m);
    }
    acc
}

/// ||m^dagger m - I||_max, zero exactly for unitary m.
pub fn unitarity_residual(m: &Array2<Complex64>) -> f64 {
    let n = m.nrows();
    max_abs_diff(&dagger(m).dot(m), &identity(n))
}

/// Inner product <a|b> with the physics convention (conjugate-linear in a).
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Outer product |a><b| as a dense matrix.
pub fn outer(a: &[Complex64], b: &[Complex64]) -> Array2<Complex64> {
    let mut m = Array2::zeros((a.len(), b.len()));
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            m[(i, j)] = x * y.conj();
        }
    }
    m
}

/// e^{i theta} on the unit circle.
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}
