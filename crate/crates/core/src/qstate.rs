//! Bipartite states on C^{d1} ⊗ C^{d2} and the linear-algebra primitives the
//! rest of the crate consumes: tensor products, partial transposition, trace
//! norm, and Schmidt decomposition.
//!
//! Joint indices are row-major throughout: amplitude (i1, i2) lives at
//! `i1 * d2 + i2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, C_ONE};
use crate::{CMatrix, CVector, Error, Result};

/// Tolerance for normalization, Hermiticity, and trace checks on construction.
pub(crate) const VALIDATION_TOL: f64 = 1e-10;
/// Schmidt coefficients at or below this are treated as exact zeros.
pub(crate) const SCHMIDT_CUTOFF: f64 = 1e-12;

/// Dimensions of a bipartite Hilbert space C^{d1} ⊗ C^{d2}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteDims {
    pub d1: usize,
    pub d2: usize,
}

impl BipartiteDims {
    pub fn new(d1: usize, d2: usize) -> Self {
        assert!(d1 >= 1 && d2 >= 1, "subsystem dimensions must be positive");
        Self { d1, d2 }
    }

    /// Total dimension D = d1 · d2.
    pub fn total(&self) -> usize {
        self.d1 * self.d2
    }

    /// Smaller factor dimension, the maximal Schmidt rank.
    pub fn min_dim(&self) -> usize {
        self.d1.min(self.d2)
    }
}

/// Normalized pure state. Single-system kets are represented with `d2 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    dims: BipartiteDims,
    amplitudes: CVector,
}

impl Ket {
    /// Wraps an amplitude vector, rejecting wrong lengths and norms away
    /// from 1. Amplitudes are stored as given (no phase convention applied).
    pub fn new(dims: BipartiteDims, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector has length {}, dims ({},{}) require {}",
                amplitudes.len(),
                dims.d1,
                dims.d2,
                dims.total()
            )));
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { dims, amplitudes })
    }

    /// Single-system computational basis state |i⟩ in dimension d.
    pub fn computational(d: usize, i: usize) -> Result<Self> {
        if i >= d {
            return Err(Error::OutOfRange {
                name: "basis index".into(),
                value: i as f64,
                range: format!("0..{d}"),
            });
        }
        let mut amplitudes = CVector::zeros(d);
        amplitudes[i] = C_ONE;
        Ok(Self { dims: BipartiteDims::new(d, 1), amplitudes })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// Amplitudes reshaped to the d1 × d2 matrix A with A[i1, i2] = ⟨i1 i2|ψ⟩.
    pub fn amplitude_matrix(&self) -> CMatrix {
        let (d1, d2) = (self.dims.d1, self.dims.d2);
        CMatrix::from_fn(d1, d2, |i1, i2| self.amplitudes[i1 * d2 + i2])
    }

    /// Overlap ⟨self|other⟩ (conjugate on the left argument).
    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Tensor product of two single-system kets, row-major joint indexing.
pub fn tensor(a: &Ket, b: &Ket) -> Result<Ket> {
    if a.dims.d2 != 1 || b.dims.d2 != 1 {
        return Err(Error::DimensionMismatch(
            "tensor() takes single-system kets (d2 = 1)".into(),
        ));
    }
    let dims = BipartiteDims::new(a.dims.d1, b.dims.d1);
    let amplitudes = CVector::from_fn(dims.total(), |i, _| {
        a.amplitudes[i / dims.d2] * b.amplitudes[i % dims.d2]
    });
    Ket::new(dims, amplitudes)
}

/// Mixed (or pure) bipartite state: Hermitian, unit-trace, positive D × D matrix.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dims: BipartiteDims,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positivity (smallest eigenvalue
    /// ≥ −1e-10) before wrapping.
    pub fn new(dims: BipartiteDims, matrix: CMatrix) -> Result<Self> {
        let d = dims.total();
        if matrix.nrows() != d || matrix.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}×{}, dims ({},{}) require {}×{}",
                matrix.nrows(),
                matrix.ncols(),
                dims.d1,
                dims.d2,
                d,
                d
            )));
        }
        let deviation = linalg::hermiticity_deviation(&matrix);
        if deviation > VALIDATION_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > VALIDATION_TOL || trace.im.abs() > VALIDATION_TOL {
            return Err(Error::NotDensityMatrix(format!("trace is {trace}, expected 1")));
        }
        let min_eig = linalg::hermitian_eigenvalues(&matrix)[0];
        if min_eig < -VALIDATION_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "smallest eigenvalue {min_eig:.3e} is negative"
            )));
        }
        Ok(Self { dims, matrix })
    }

    /// |ψ⟩⟨ψ| for a normalized ket; always a valid density matrix.
    pub fn pure(ket: &Ket) -> Self {
        Self { dims: ket.dims, matrix: linalg::projector(&ket.amplitudes) }
    }

    /// I / D.
    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let d = dims.total();
        Self { dims, matrix: CMatrix::identity(d, d).scale(1.0 / d as f64) }
    }

    /// Skips validation; for internal construction of provably valid states.
    pub(crate) fn new_unchecked(dims: BipartiteDims, matrix: CMatrix) -> Self {
        Self { dims, matrix }
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }
}

/// Partial transpose ρ^Γ on the second factor:
/// entry ((i1,i2),(j1,j2)) moves to ((i1,j2),(j1,i2)).
pub fn partial_transpose(rho: &DensityMatrix) -> CMatrix {
    let BipartiteDims { d1, d2 } = rho.dims;
    let m = &rho.matrix;
    let mut out = CMatrix::zeros(d1 * d2, d1 * d2);
    for i1 in 0..d1 {
        for j1 in 0..d1 {
            for i2 in 0..d2 {
                for j2 in 0..d2 {
                    out[(i1 * d2 + j2, j1 * d2 + i2)] = m[(i1 * d2 + i2, j1 * d2 + j2)];
                }
            }
        }
    }
    out
}

/// Trace norm ‖m‖₁ = Σ|λ_i| of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> Result<f64> {
    let deviation = linalg::hermiticity_deviation(m);
    if deviation > 1e-8 {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(linalg::hermitian_eigenvalues(m).iter().map(|ev| ev.abs()).sum())
}

/// Schmidt decomposition |ψ⟩ = Σ_i c_i |l_i⟩|r_i⟩ with c_i ≥ 0 descending.
#[derive(Clone, Debug)]
pub struct SchmidtForm {
    dims: BipartiteDims,
    coefficients: Vec<f64>,
    left_basis: Vec<CVector>,
    right_basis: Vec<CVector>,
}

impl SchmidtForm {
    /// Coefficients √p_i, descending; length min(d1, d2), trailing zeros kept.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn left_basis(&self) -> &[CVector] {
        &self.left_basis
    }

    pub fn right_basis(&self) -> &[CVector] {
        &self.right_basis
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// Number of coefficients above the zero cutoff.
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c > 0.0).count()
    }

    /// Σ_i c_i |l_i⟩|r_i⟩, equal to the source ket up to global phase.
    pub fn reconstruct(&self) -> Result<Ket> {
        let mut amplitudes = CVector::zeros(self.dims.total());
        for ((&c, l), r) in
            self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis)
        {
            for i1 in 0..self.dims.d1 {
                for i2 in 0..self.dims.d2 {
                    amplitudes[i1 * self.dims.d2 + i2] += c * l[i1] * r[i2];
                }
            }
        }
        Ket::new(self.dims, amplitudes)
    }
}

/// Schmidt decomposition via SVD of the amplitude matrix. Each left vector's
/// leading entry is made real nonnegative, with the compensating phase pushed
/// into the paired right vector, so reconstruction is exact rather than
/// up-to-phase per term.
pub fn schmidt(phi: &Ket) -> SchmidtForm {
    let a = phi.amplitude_matrix();
    let svd = a.svd(true, true);
    let u = svd.u.expect("svd with vectors requested");
    let v_t = svd.v_t.expect("svd with vectors requested");
    let k = svd.singular_values.len();

    let mut coefficients = Vec::with_capacity(k);
    let mut left_basis = Vec::with_capacity(k);
    let mut right_basis = Vec::with_capacity(k);
    for i in 0..k {
        let s = svd.singular_values[i];
        coefficients.push(if s > SCHMIDT_CUTOFF { s } else { 0.0 });
        let mut l = CVector::from_fn(phi.dims.d1, |r, _| u[(r, i)]);
        let mut r = CVector::from_fn(phi.dims.d2, |c, _| v_t[(i, c)]);
        let phase = linalg::canonicalize_phase(&mut l, SCHMIDT_CUTOFF);
        r *= phase;
        left_basis.push(l);
        right_basis.push(r);
    }
    SchmidtForm { dims: phi.dims, coefficients, left_basis, right_basis }
}

/// Maximally entangled state (1/√d) Σ_{i<d} |a_i⟩|b_i⟩ of Schmidt rank d.
///
/// `local_bases`, when given, supplies the families {|a_i⟩}, {|b_i⟩} as matrix
/// columns (at least d of them, orthonormal); the default is computational.
/// The returned ket's first nonzero amplitude is made real nonnegative.
pub fn max_entangled(
    dims: BipartiteDims,
    d: usize,
    local_bases: Option<(&CMatrix, &CMatrix)>,
) -> Result<Ket> {
    if d == 0 || d > dims.min_dim() {
        return Err(Error::DimensionMismatch(format!(
            "Schmidt rank {} exceeds min factor dimension {}",
            d,
            dims.min_dim()
        )));
    }
    let weight = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut amplitudes = CVector::zeros(dims.total());
    match local_bases {
        None => {
            for i in 0..d {
                amplitudes[i * dims.d2 + i] = weight;
            }
        }
        Some((a, b)) => {
            if a.nrows() != dims.d1 || b.nrows() != dims.d2 || a.ncols() < d || b.ncols() < d
            {
                return Err(Error::DimensionMismatch(
                    "local basis shapes incompatible with dims and Schmidt rank".into(),
                ));
            }
            for m in [a, b] {
                let gram = m.adjoint() * m;
                let dev = linalg::max_abs_diff(
                    &gram,
                    &CMatrix::identity(m.ncols(), m.ncols()),
                );
                if dev > VALIDATION_TOL {
                    return Err(Error::NotOrthonormal { deviation: dev });
                }
            }
            for i in 0..d {
                for i1 in 0..dims.d1 {
                    for i2 in 0..dims.d2 {
                        amplitudes[i1 * dims.d2 + i2] += weight * a[(i1, i)] * b[(i2, i)];
                    }
                }
            }
        }
    }
    linalg::canonicalize_phase(&mut amplitudes, SCHMIDT_CUTOFF);
    Ket::new(dims, amplitudes)
}

/// Generalized Bell state |ψ_jk⟩ = (1/√d) Σ_m ω_d^{mk} |m⟩|m ⊕ j⟩ on C^d ⊗ C^d,
/// with ω_d = exp(i 2π/d) and ⊕ addition mod d.
pub fn generalized_bell(d: usize, j: usize, k: usize) -> Result<Ket> {
    if j >= d || k >= d {
        return Err(Error::OutOfRange {
            name: "generalized Bell index".into(),
            value: j.max(k) as f64,
            range: format!("0..{d}"),
        });
    }
    let weight = 1.0 / (d as f64).sqrt();
    let mut amplitudes = CVector::zeros(d * d);
    for m in 0..d {
        let angle = 2.0 * std::f64::consts::PI * (m * k) as f64 / d as f64;
        amplitudes[m * d + (m + j) % d] = Complex64::from_polar(weight, angle);
    }
    linalg::canonicalize_phase(&mut amplitudes, SCHMIDT_CUTOFF);
    Ket::new(BipartiteDims::new(d, d), amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C_ZERO;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bell_psi0() -> Ket {
        let w = 1.0 / 2f64.sqrt();
        Ket::new(
            BipartiteDims::new(2, 2),
            CVector::from_column_slice(&[c(w, 0.), C_ZERO, C_ZERO, c(w, 0.)]),
        )
        .unwrap()
    }

    #[test]
    fn tensor_of_computational_states() {
        let zero = Ket::computational(2, 0).unwrap();
        let one = Ket::computational(2, 1).unwrap();
        let t = tensor(&zero, &zero).unwrap();
        assert_eq!(t.amplitudes().as_slice(), &[C_ONE, C_ZERO, C_ZERO, C_ZERO]);
        let t = tensor(&one, &zero).unwrap();
        assert_abs_diff_eq!(t.amplitudes()[2].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn tensor_is_bilinear() {
        let w = 1.0 / 2f64.sqrt();
        let plus = Ket::new(
            BipartiteDims::new(2, 1),
            CVector::from_column_slice(&[c(w, 0.), c(w, 0.)]),
        )
        .unwrap();
        let one = Ket::computational(2, 1).unwrap();
        let t = tensor(&plus, &one).unwrap();
        let expect = [C_ZERO, c(w, 0.), C_ZERO, c(w, 0.)];
        for (got, want) in t.amplitudes().iter().zip(expect) {
            assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-15);
            assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-15);
        }
    }

    #[test]
    fn tensor_rejects_bipartite_input() {
        let bell = bell_psi0();
        let one = Ket::computational(2, 1).unwrap();
        assert!(tensor(&bell, &one).is_err());
    }

    #[test]
    fn ket_validation() {
        let dims = BipartiteDims::new(2, 2);
        let v = CVector::from_column_slice(&[C_ONE, C_ONE, C_ZERO, C_ZERO]);
        assert!(matches!(Ket::new(dims, v), Err(Error::NotNormalized { .. })));
        let v = CVector::from_column_slice(&[C_ONE, C_ZERO]);
        assert!(matches!(Ket::new(dims, v), Err(Error::DimensionMismatch(_))));
        assert!(Ket::computational(3, 3).is_err());
    }

    #[test]
    fn inner_conjugates_left_argument() {
        let i_ket = Ket::new(
            BipartiteDims::new(2, 1),
            CVector::from_column_slice(&[c(0., 1.), C_ZERO]),
        )
        .unwrap();
        let zero = Ket::computational(2, 0).unwrap();
        let ov = i_ket.inner(&zero);
        assert_abs_diff_eq!(ov.im, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn partial_transpose_fixes_product_and_mixed_states() {
        let zero2 = tensor(
            &Ket::computational(2, 0).unwrap(),
            &Ket::computational(2, 0).unwrap(),
        )
        .unwrap();
        let rho = DensityMatrix::pure(&zero2);
        assert_eq!(linalg::max_abs_diff(&partial_transpose(&rho), rho.matrix()), 0.0);

        let mixed = DensityMatrix::maximally_mixed(BipartiteDims::new(2, 3));
        assert_eq!(
            linalg::max_abs_diff(&partial_transpose(&mixed), mixed.matrix()),
            0.0
        );
    }

    #[test]
    fn partial_transpose_of_bell_state() {
        let rho = DensityMatrix::pure(&bell_psi0());
        let pt = partial_transpose(&rho);
        let evs = linalg::hermitian_eigenvalues(&pt);
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (got, want) in evs.iter().zip(expect) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let bell = bell_psi0();
        let rho = DensityMatrix::pure(&bell);
        let once = partial_transpose(&rho);
        let dims = rho.dims();
        let wrapped = DensityMatrix::new_unchecked(dims, once.clone());
        let twice = partial_transpose(&wrapped);
        assert_eq!(linalg::max_abs_diff(&twice, rho.matrix()), 0.0);
    }

    #[test]
    fn trace_norm_examples() {
        let id4 = CMatrix::identity(4, 4);
        assert_abs_diff_eq!(trace_norm(&id4).unwrap(), 4.0, epsilon = 1e-12);

        let pt = partial_transpose(&DensityMatrix::pure(&bell_psi0()));
        assert_abs_diff_eq!(trace_norm(&pt).unwrap(), 2.0, epsilon = 1e-12);

        let dims = BipartiteDims::new(2, 2);
        let mix = DensityMatrix::pure(&bell_psi0()).matrix().scale(0.7)
            + DensityMatrix::maximally_mixed(dims).matrix().scale(0.3);
        assert_abs_diff_eq!(trace_norm(&mix).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn trace_norm_rejects_non_hermitian() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = c(0.5, 0.);
        assert!(matches!(trace_norm(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn density_matrix_validation() {
        let dims = BipartiteDims::new(2, 2);
        let mut m = CMatrix::identity(4, 4).scale(0.25);
        m[(0, 1)] = c(0.3, 0.1);
        assert!(matches!(DensityMatrix::new(dims, m), Err(Error::NotHermitian { .. })));

        let m = CMatrix::identity(4, 4).scale(0.5);
        assert!(matches!(
            DensityMatrix::new(dims, m),
            Err(Error::NotDensityMatrix(_))
        ));

        // Hermitian, unit trace, but indefinite.
        let mut m = CMatrix::identity(4, 4).scale(0.25);
        m[(0, 0)] = c(0.75, 0.);
        m[(1, 1)] = c(-0.25, 0.);
        m[(0, 1)] = c(0.0, 0.);
        assert!(matches!(
            DensityMatrix::new(dims, m),
            Err(Error::NotDensityMatrix(_))
        ));

        let ok = DensityMatrix::new(dims, CMatrix::identity(4, 4).scale(0.25));
        assert!(ok.is_ok());
    }

    #[test]
    fn schmidt_of_product_and_bell_states() {
        let zero2 = tensor(
            &Ket::computational(2, 0).unwrap(),
            &Ket::computational(2, 0).unwrap(),
        )
        .unwrap();
        let sf = schmidt(&zero2);
        assert_abs_diff_eq!(sf.coefficients()[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sf.coefficients()[1], 0.0, epsilon = 1e-12);
        assert_eq!(sf.rank(), 1);

        let sf = schmidt(&bell_psi0());
        let w = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(sf.coefficients()[0], w, epsilon = 1e-12);
        assert_abs_diff_eq!(sf.coefficients()[1], w, epsilon = 1e-12);
        assert_eq!(sf.rank(), 2);
    }

    #[test]
    fn schmidt_reorders_descending() {
        let (a, b) = (0.6, 0.8);
        let ket = Ket::new(
            BipartiteDims::new(2, 2),
            CVector::from_column_slice(&[c(a, 0.), C_ZERO, C_ZERO, c(b, 0.)]),
        )
        .unwrap();
        let sf = schmidt(&ket);
        assert_abs_diff_eq!(sf.coefficients()[0], 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(sf.coefficients()[1], 0.6, epsilon = 1e-12);
        let rec = sf.reconstruct().unwrap();
        for (got, want) in rec.amplitudes().iter().zip(ket.amplitudes().iter()) {
            assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-10);
            assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-10);
        }
    }

    #[test]
    fn schmidt_reconstructs_complex_rectangular_ket() {
        let dims = BipartiteDims::new(2, 3);
        let raw = [
            c(0.1, 0.2),
            c(-0.3, 0.1),
            c(0.4, -0.2),
            c(0.0, 0.5),
            c(0.3, 0.3),
            c(-0.2, -0.1),
        ];
        let mut v = CVector::from_column_slice(&raw);
        v /= Complex64::new(v.norm(), 0.0);
        let ket = Ket::new(dims, v).unwrap();
        let sf = schmidt(&ket);
        let rec = sf.reconstruct().unwrap();
        for (got, want) in rec.amplitudes().iter().zip(ket.amplitudes().iter()) {
            assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-10);
            assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-10);
        }
        let sq: f64 = sf.coefficients().iter().map(|v| v * v).sum();
        assert_abs_diff_eq!(sq, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn max_entangled_computational() {
        let ket = max_entangled(BipartiteDims::new(2, 2), 2, None).unwrap();
        let w = 1.0 / 2f64.sqrt();
        assert_abs_diff_eq!(ket.amplitudes()[0].re, w, epsilon = 1e-15);
        assert_abs_diff_eq!(ket.amplitudes()[3].re, w, epsilon = 1e-15);
        assert_abs_diff_eq!(ket.amplitudes()[1].norm(), 0.0, epsilon = 1e-15);

        let ket = max_entangled(BipartiteDims::new(3, 3), 3, None).unwrap();
        let w = 1.0 / 3f64.sqrt();
        for (i, amp) in ket.amplitudes().iter().enumerate() {
            let want = if i % 4 == 0 { w } else { 0.0 };
            assert_abs_diff_eq!(amp.re, want, epsilon = 1e-15);
        }
    }

    #[test]
    fn max_entangled_embeds_lower_rank() {
        let ket = max_entangled(BipartiteDims::new(2, 3), 2, None).unwrap();
        let sf = schmidt(&ket);
        assert_eq!(sf.rank(), 2);
        assert!(max_entangled(BipartiteDims::new(2, 3), 3, None).is_err());
    }

    #[test]
    fn max_entangled_in_custom_bases() {
        // Rotated qubit basis {(|0⟩+|1⟩)/√2, (|0⟩−|1⟩)/√2} on both factors.
        let w = 1.0 / 2f64.sqrt();
        let h = CMatrix::from_row_slice(2, 2, &[c(w, 0.), c(w, 0.), c(w, 0.), c(-w, 0.)]);
        let ket = max_entangled(BipartiteDims::new(2, 2), 2, Some((&h, &h))).unwrap();
        // (|++⟩ + |−−⟩)/√2 = (|00⟩ + |11⟩)/√2.
        for (got, want) in ket.amplitudes().iter().zip(bell_psi0().amplitudes().iter()) {
            assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-12);
            assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-12);
        }

        let skew =
            CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0.5, 0.), c(0., 0.), c(1., 0.)]);
        assert!(matches!(
            max_entangled(BipartiteDims::new(2, 2), 2, Some((&skew, &skew))),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn generalized_bell_reproduces_qubit_bell_basis() {
        let w = 1.0 / 2f64.sqrt();
        let cases = [
            ((0, 0), [c(w, 0.), C_ZERO, C_ZERO, c(w, 0.)]),
            ((1, 0), [C_ZERO, c(w, 0.), c(w, 0.), C_ZERO]),
            ((1, 1), [C_ZERO, c(w, 0.), c(-w, 0.), C_ZERO]),
            ((0, 1), [c(w, 0.), C_ZERO, C_ZERO, c(-w, 0.)]),
        ];
        for ((j, k), want) in cases {
            let ket = generalized_bell(2, j, k).unwrap();
            for (got, want) in ket.amplitudes().iter().zip(want) {
                assert_abs_diff_eq!(got.re, want.re, epsilon = 1e-12);
                assert_abs_diff_eq!(got.im, want.im, epsilon = 1e-12);
            }
        }
        assert!(generalized_bell(2, 2, 0).is_err());
    }

    #[test]
    fn generalized_bell_qutrit_basis_is_orthonormal_and_maximally_entangled() {
        let mut states = Vec::new();
        for j in 0..3 {
            for k in 0..3 {
                states.push(generalized_bell(3, j, k).unwrap());
            }
        }
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let ov = a.inner(b);
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(ov.re, want, epsilon = 1e-12);
                assert_abs_diff_eq!(ov.im, 0.0, epsilon = 1e-12);
            }
        }
        let w = 1.0 / 3f64.sqrt();
        for s in &states {
            for coeff in schmidt(s).coefficients() {
                assert_abs_diff_eq!(*coeff, w, epsilon = 1e-12);
            }
        }
    }
}
