//! Entanglement quantifiers and separability classifiers built on the
//! partial transpose: negativity, logarithmic negativity, the PPT test, and
//! the two-qubit absolute-separability criterion.

use crate::qstate::{partial_transpose, schmidt, DensityMatrix, Ket};
use crate::{linalg, Error, Result};

/// Eigenvalues within this of zero count as zero when classifying signs,
/// so states on the separability boundary get a reproducible negativity.
const EIGENVALUE_CLAMP: f64 = 1e-12;

/// Negativity N(ρ): the sum of moduli of the negative eigenvalues of ρ^Γ,
/// equivalently (‖ρ^Γ‖₁ − 1)/2. Zero iff ρ is PPT; at most (min(d1,d2) − 1)/2.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let pt = partial_transpose(rho);
    let sum: f64 = linalg::hermitian_eigenvalues(&pt)
        .iter()
        .filter(|&&ev| ev < -EIGENVALUE_CLAMP)
        .map(|ev| -ev)
        .sum();
    // An empty f64 sum is −0.0; adding +0.0 makes PPT states report exactly 0.
    sum + 0.0
}

/// Negativity of a pure state from its Schmidt coefficients, Σ_{i<j} c_i c_j.
pub fn pure_negativity(phi: &Ket) -> f64 {
    let sum: f64 = schmidt(phi).coefficients().iter().sum();
    ((sum * sum - 1.0) / 2.0).max(0.0)
}

/// Logarithmic negativity ln(2N(ρ) + 1) = ln ‖ρ^Γ‖₁.
pub fn log_negativity(rho: &DensityMatrix) -> f64 {
    (2.0 * negativity(rho) + 1.0).ln()
}

/// Whether ρ^Γ is positive within `tol`, i.e. ρ has positive partial transpose.
pub fn is_ppt(rho: &DensityMatrix, tol: f64) -> bool {
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    let pt = partial_transpose(rho);
    linalg::hermitian_eigenvalues(&pt)[0] >= -tol
}

/// Two-qubit absolute separability: with eigenvalues of ρ sorted
/// λ1 ≥ λ2 ≥ λ3 ≥ λ4, the state stays separable under every global unitary
/// iff λ3 + 2√(λ2 λ4) − λ1 ≥ 0.
pub fn absolutely_separable_2q(rho: &DensityMatrix) -> Result<bool> {
    let dims = rho.dims();
    if dims.d1 != 2 || dims.d2 != 2 {
        return Err(Error::DimensionMismatch(format!(
            "absolute-separability criterion needs dims (2,2), got ({},{})",
            dims.d1, dims.d2
        )));
    }
    let mut evs = linalg::hermitian_eigenvalues(rho.matrix());
    evs.reverse();
    for ev in evs.iter_mut() {
        *ev = ev.max(0.0);
    }
    Ok(evs[2] + 2.0 * (evs[1] * evs[3]).sqrt() - evs[0] >= 0.0)
}
