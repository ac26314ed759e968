//! Small dense complex linear-algebra helpers shared across modules.

use num_complex::Complex64;

use crate::{CMatrix, CVector};

#[cfg(test)]
pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Outer product |v⟩⟨v|.
pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Largest elementwise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest elementwise deviation from Hermiticity, max |m - m†|.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Largest elementwise deviation of m†m from the identity.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    let n = m.ncols();
    max_abs_diff(&(m.adjoint() * m), &CMatrix::identity(n, n))
}

/// Eigenvalues of a Hermitian matrix, ascending. The input is symmetrized
/// first so that ~1e-15 asymmetries cannot push the solver off the real axis.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut evs: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    evs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    evs
}

/// Rescale `v` so its first component of modulus > `tol` becomes real
/// nonnegative. Returns the phase factor that was divided out.
pub fn canonicalize_phase(v: &mut CVector, tol: f64) -> Complex64 {
    let lead = v.iter().find(|z| z.norm() > tol).copied();
    match lead {
        Some(z) => {
            let phase = z / z.norm();
            for x in v.iter_mut() {
                *x /= phase;
            }
            phase
        }
        None => C_ONE,
    }
}

/// Kronecker product in row-major index convention (index = i1·n2 + i2).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}
