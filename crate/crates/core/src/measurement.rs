//! Projective-basis algebra: the non-selective measurement channel
//! ρ ↦ Σ_j Π_j ρ Π_j, its mixed-unitary realization, the convexity upper
//! bound on output entanglement, detection of maximally entangled bases, and
//! the reduction of any maximally entangled two-qubit basis to the Bell basis
//! by local unitaries.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::Matrix3;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entanglement::{negativity, pure_negativity};
use crate::linalg::{self, C_ONE};
use crate::qstate::{schmidt, BipartiteDims, DensityMatrix, Ket};
use crate::{CMatrix, CVector, Error, Result};

/// Tolerance for the orthonormality check on basis construction.
const GRAM_TOL: f64 = 1e-10;
/// Tolerance at which `bell_reduction` accepts its input as maximally
/// entangled and its intermediate rotation as orthogonal.
const REDUCTION_TOL: f64 = 1e-8;

/// Complete orthonormal basis {|ψ_j⟩} of the joint space; the projectors
/// Π_j = |ψ_j⟩⟨ψ_j| define a von Neumann measurement.
#[derive(Clone, Debug)]
pub struct ProjectiveBasis {
    dims: BipartiteDims,
    states: Vec<Ket>,
}

impl ProjectiveBasis {
    /// Validates completeness (D states of matching dims) and orthonormality
    /// (Gram matrix within 1e-10 of the identity).
    pub fn new(dims: BipartiteDims, states: Vec<Ket>) -> Result<Self> {
        let d = dims.total();
        if states.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "basis has {} states, dims ({},{}) require {}",
                states.len(),
                dims.d1,
                dims.d2,
                d
            )));
        }
        for s in &states {
            if s.dims() != dims {
                return Err(Error::DimensionMismatch(
                    "basis state dims differ from basis dims".into(),
                ));
            }
        }
        let mut deviation: f64 = 0.0;
        for (j, a) in states.iter().enumerate() {
            for (k, b) in states.iter().enumerate() {
                let want = if j == k { C_ONE } else { Complex64::ZERO };
                deviation = deviation.max((a.inner(b) - want).norm());
            }
        }
        if deviation > GRAM_TOL {
            return Err(Error::NotOrthonormal { deviation });
        }
        Ok(Self { dims, states })
    }

    /// Basis from the columns of a D×D unitary.
    pub fn from_unitary_columns(dims: BipartiteDims, u: &CMatrix) -> Result<Self> {
        let d = dims.total();
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}×{}, expected {}×{}",
                u.nrows(),
                u.ncols(),
                d,
                d
            )));
        }
        let states = (0..d)
            .map(|j| Ket::new(dims, CVector::from_fn(d, |r, _| u[(r, j)])))
            .collect::<Result<Vec<_>>>()?;
        Self::new(dims, states)
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn states(&self) -> &[Ket] {
        &self.states
    }

    /// Serializes to the JSON interchange format: a dims header plus one
    /// [re, im] pair per amplitude per state.
    pub fn to_json(&self) -> String {
        let file = BasisJson {
            dims: self.dims,
            states: self
                .states
                .iter()
                .map(|k| k.amplitudes().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("basis serialization cannot fail")
    }

    /// Parses and re-validates a basis from [`ProjectiveBasis::to_json`] output.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: BasisJson = serde_json::from_str(text)?;
        let d = file.dims.total();
        let states = file
            .states
            .into_iter()
            .map(|amps| {
                if amps.len() != d {
                    return Err(Error::DimensionMismatch(format!(
                        "state has {} amplitudes, dims require {}",
                        amps.len(),
                        d
                    )));
                }
                Ket::new(
                    file.dims,
                    CVector::from_fn(d, |i, _| Complex64::new(amps[i][0], amps[i][1])),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.dims, states)
    }
}

#[derive(Serialize, Deserialize)]
struct BasisJson {
    dims: BipartiteDims,
    states: Vec<Vec<[f64; 2]>>,
}

fn check_dims(basis: &ProjectiveBasis, rho: &DensityMatrix) -> Result<()> {
    if basis.dims() != rho.dims() {
        return Err(Error::DimensionMismatch(format!(
            "basis dims ({},{}) do not match state dims ({},{})",
            basis.dims().d1,
            basis.dims().d2,
            rho.dims().d1,
            rho.dims().d2
        )));
    }
    Ok(())
}

/// Non-selective measurement: ρ′ = Σ_j ⟨ψ_j|ρ|ψ_j⟩ |ψ_j⟩⟨ψ_j|, the state held
/// by an observer who knows the measurement happened but not its result.
pub fn apply_nonselective(
    basis: &ProjectiveBasis,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    check_dims(basis, rho)?;
    let d = basis.dims.total();
    let mut out = CMatrix::zeros(d, d);
    for ket in &basis.states {
        let v = ket.amplitudes();
        let p = v.dotc(&(rho.matrix() * v)).re.max(0.0);
        if p > 0.0 {
            out += linalg::projector(v).scale(p);
        }
    }
    Ok(DensityMatrix::new_unchecked(basis.dims, out))
}

/// Negativity change ΔN = N(ρ′) − N(ρ) caused by the non-selective channel.
pub fn gain(basis: &ProjectiveBasis, rho: &DensityMatrix) -> Result<f64> {
    Ok(negativity(&apply_nonselective(basis, rho)?) - negativity(rho))
}

/// Upper bound on the output negativity for every input: since ρ′ is a
/// mixture of the basis projectors and negativity is convex,
/// N(ρ′) ≤ max_j N(|ψ_j⟩⟨ψ_j|).
pub fn convexity_bound(basis: &ProjectiveBasis) -> f64 {
    basis
        .states
        .iter()
        .map(pure_negativity)
        .fold(0.0, f64::max)
}

/// The unitary U = Σ_j ω_D^j Π_j, ω_D = exp(i2π/D), whose powers realize the
/// channel as a uniform mixture of unitaries.
pub fn dephasing_unitary(basis: &ProjectiveBasis) -> CMatrix {
    let d = basis.dims.total();
    let mut u = CMatrix::zeros(d, d);
    for (j, ket) in basis.states.iter().enumerate() {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / d as f64);
        u += linalg::projector(ket.amplitudes()) * w;
    }
    u
}

/// The channel as (1/D) Σ_{i<D} U^i ρ (U^i)†; identical to
/// [`apply_nonselective`] because Σ_i ω_D^{i(j−k)} = D δ_{jk}.
pub fn mixed_unitary_channel(
    basis: &ProjectiveBasis,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    check_dims(basis, rho)?;
    let d = basis.dims.total();
    let u = dephasing_unitary(basis);
    let mut acc = rho.matrix().clone();
    let mut power = u.clone();
    for _ in 1..d {
        acc += &power * rho.matrix() * power.adjoint();
        power *= &u;
    }
    Ok(DensityMatrix::new_unchecked(basis.dims, acc.scale(1.0 / d as f64)))
}

/// Whether every member has all Schmidt coefficients within `tol` of 1/√d1;
/// requires equal factor dimensions.
pub fn is_max_entangled_basis(basis: &ProjectiveBasis, tol: f64) -> Result<bool> {
    let dims = basis.dims;
    if dims.d1 != dims.d2 {
        return Err(Error::DimensionMismatch(format!(
            "maximally entangled basis needs equal factors, got ({},{})",
            dims.d1, dims.d2
        )));
    }
    let target = 1.0 / (dims.d1 as f64).sqrt();
    Ok(basis.states.iter().all(|s| {
        schmidt(s)
            .coefficients()
            .iter()
            .all(|c| (c - target).abs() <= tol)
    }))
}

/// The four Bell states (|00⟩±|11⟩)/√2, (|01⟩±|10⟩)/√2 in the order
/// ψ0 = +, ψ1 = (01+10), ψ2 = (01−10), ψ3 = (00−11).
pub fn bell_basis() -> ProjectiveBasis {
    let w = FRAC_1_SQRT_2;
    real_basis(BipartiteDims::new(2, 2), &[
        vec![(0, w), (3, w)],
        vec![(1, w), (2, w)],
        vec![(1, w), (2, -w)],
        vec![(0, w), (3, -w)],
    ])
}

/// Two-qutrit basis whose non-selective measurement is an LOCC operation:
/// four Bell states on the {|0⟩,|1⟩} ⊗ {|0⟩,|1⟩} block plus the five
/// computational products involving |2⟩.
pub fn qutrit_locc_basis() -> ProjectiveBasis {
    let w = FRAC_1_SQRT_2;
    real_basis(BipartiteDims::new(3, 3), &[
        vec![(0, w), (4, w)],
        vec![(0, w), (4, -w)],
        vec![(1, w), (3, w)],
        vec![(1, w), (3, -w)],
        vec![(2, 1.0)],
        vec![(5, 1.0)],
        vec![(6, 1.0)],
        vec![(7, 1.0)],
        vec![(8, 1.0)],
    ])
}

/// All d² generalized Bell states as a basis, ordered by (j, k)
/// lexicographically.
pub fn generalized_bell_basis(d: usize) -> Result<ProjectiveBasis> {
    let mut states = Vec::with_capacity(d * d);
    for j in 0..d {
        for k in 0..d {
            states.push(crate::qstate::generalized_bell(d, j, k)?);
        }
    }
    ProjectiveBasis::new(BipartiteDims::new(d, d), states)
}

fn real_basis(dims: BipartiteDims, entries: &[Vec<(usize, f64)>]) -> ProjectiveBasis {
    let d = dims.total();
    let states = entries
        .iter()
        .map(|spec| {
            let mut v = CVector::zeros(d);
            for &(i, x) in spec {
                v[i] = Complex64::new(x, 0.0);
            }
            Ket::new(dims, v).expect("hard-coded basis states are normalized")
        })
        .collect();
    ProjectiveBasis::new(dims, states).expect("hard-coded bases are orthonormal")
}

/// Amplitude matrices of a maximally entangled two-qubit basis, re-expressed
/// in the Schmidt bases of its first member and phase-fixed to Hermitian
/// form: √2 α^(j) = e^{iη_j} H^(j) with H^(j) Hermitian, unitary, traceless
/// for j ≥ 1, while α^(0) is the diagonal of Schmidt coefficients.
#[derive(Clone, Debug)]
pub struct AlphaMatrices {
    /// Columns: Schmidt basis of the first member on the left factor.
    pub left_basis: CMatrix,
    /// Columns: Schmidt basis of the first member on the right factor.
    pub right_basis: CMatrix,
    /// diag(c0, c1), both entries 1/√2 for an exactly maximally entangled ψ0.
    pub alpha0: CMatrix,
    /// Hermitian representatives H^(1), H^(2), H^(3).
    pub hermitian: Vec<CMatrix>,
    /// Phases η_j with √2 α^(j) = e^{iη_j} H^(j).
    pub phases: Vec<f64>,
}

/// Extracts [`AlphaMatrices`] from a maximally entangled two-qubit basis.
/// Each H^(j) has its sign fixed so that the largest-magnitude component of
/// its Bloch vector is positive.
pub fn alpha_matrices(basis: &ProjectiveBasis) -> Result<AlphaMatrices> {
    let dims = basis.dims;
    if dims.d1 != 2 || dims.d2 != 2 {
        return Err(Error::DimensionMismatch(format!(
            "reduction is defined for dims (2,2), got ({},{})",
            dims.d1, dims.d2
        )));
    }
    if !is_max_entangled_basis(basis, REDUCTION_TOL)? {
        return Err(Error::NotMaximallyEntangled { tol: REDUCTION_TOL });
    }

    let sf = schmidt(&basis.states[0]);
    let la = CMatrix::from_fn(2, 2, |r, c| sf.left_basis()[c][r]);
    let lb = CMatrix::from_fn(2, 2, |r, c| sf.right_basis()[c][r]);
    let aligned =
        |a: &CMatrix| -> CMatrix { la.adjoint() * a * lb.conjugate() };

    let alpha0 = aligned(&basis.states[0].amplitude_matrix());
    let mut hermitian = Vec::with_capacity(3);
    let mut phases = Vec::with_capacity(3);
    for state in &basis.states[1..] {
        let m = aligned(&state.amplitude_matrix()).scale(SQRT_2);
        // A traceless 2×2 unitary M has eigenvalues ±e^{iη}, so −det M
        // = e^{2iη} and e^{−iη} M is Hermitian.
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        let mut eta = (-det).arg() / 2.0;
        let mut h = m * Complex64::from_polar(1.0, -eta);
        let n = bloch_vector(&h);
        let lead = (0..3).max_by(|&a, &b| n[a].abs().partial_cmp(&n[b].abs()).unwrap());
        if n[lead.unwrap()] < 0.0 {
            h = -h;
            eta += PI;
        }
        hermitian.push(h);
        phases.push(eta);
    }
    Ok(AlphaMatrices { left_basis: la, right_basis: lb, alpha0, hermitian, phases })
}

/// Bloch components of a (near-)Hermitian traceless 2×2 matrix H = n·σ,
/// symmetrized so small Hermiticity violations cancel.
fn bloch_vector(h: &CMatrix) -> [f64; 3] {
    [
        (h[(1, 0)].re + h[(0, 1)].re) / 2.0,
        (h[(1, 0)].im - h[(0, 1)].im) / 2.0,
        (h[(0, 0)].re - h[(1, 1)].re) / 2.0,
    ]
}

/// Pair of single-qubit/qudit unitaries acting as u1 ⊗ u2.
#[derive(Clone, Debug)]
pub struct LocalUnitaryPair {
    pub u1: CMatrix,
    pub u2: CMatrix,
}

impl LocalUnitaryPair {
    pub fn identity(dims: BipartiteDims) -> Self {
        Self {
            u1: CMatrix::identity(dims.d1, dims.d1),
            u2: CMatrix::identity(dims.d2, dims.d2),
        }
    }

    /// (u1 ⊗ u2)|ψ⟩.
    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        let dims = ket.dims();
        if self.u1.nrows() != dims.d1 || self.u2.nrows() != dims.d2 {
            return Err(Error::DimensionMismatch(
                "local unitary sizes do not match ket dims".into(),
            ));
        }
        Ket::new(dims, linalg::kron(&self.u1, &self.u2) * ket.amplitudes())
    }
}

/// Finds local unitaries (u1, u2) mapping a maximally entangled two-qubit
/// basis onto the Bell basis, up to per-state phases and a permutation.
///
/// The first member is Schmidt-aligned to (|00⟩+|11⟩)/√2; the remaining
/// members then define, through their Hermitian representatives, an
/// orthogonal 3×3 matrix of Bloch vectors, which is lifted from SO(3) to
/// SU(2) by quaternion extraction. An input that already equals the Bell
/// basis short-circuits to the identity pair.
pub fn bell_reduction(basis: &ProjectiveBasis) -> Result<LocalUnitaryPair> {
    let bell = bell_basis();
    if unordered_projector_residual(basis.states(), bell.states()) < 1e-12 {
        return Ok(LocalUnitaryPair::identity(basis.dims));
    }

    let aligned = alpha_matrices(basis)?;
    let columns: Vec<[f64; 3]> = aligned.hermitian.iter().map(bloch_vector).collect();
    let mut r0 = Matrix3::from_fn(|r, c| columns[c][r]);

    let orth = (r0.transpose() * r0 - Matrix3::identity()).abs().max();
    if orth > REDUCTION_TOL {
        return Err(Error::Degenerate(format!(
            "Bloch vectors are not orthonormal (deviation {orth:.3e})"
        )));
    }
    if r0.determinant() < 0.0 {
        // A reflection differs from a rotation by flipping one member's
        // sign, which is an invisible global phase on that member.
        for r in 0..3 {
            r0[(r, 0)] = -r0[(r, 0)];
        }
    }

    let u = su2_from_rotation(&r0);
    Ok(LocalUnitaryPair {
        u1: u.adjoint() * aligned.left_basis.adjoint(),
        u2: u.transpose() * aligned.right_basis.adjoint(),
    })
}

/// Largest projector mismatch between `(u1 ⊗ u2)` images of the basis and the
/// Bell basis under the best unordered matching; < 1e-8 certifies a
/// successful reduction.
pub fn bell_residual(basis: &ProjectiveBasis, pair: &LocalUnitaryPair) -> Result<f64> {
    let transformed = basis
        .states
        .iter()
        .map(|s| pair.apply(s))
        .collect::<Result<Vec<_>>>()?;
    Ok(unordered_projector_residual(&transformed, bell_basis().states()))
}

/// Greedy unordered matching of projectors |a_j⟩⟨a_j| to |b_k⟩⟨b_k|; returns
/// the largest elementwise residual among matched pairs. Projectors make the
/// comparison insensitive to the states' global phases.
fn unordered_projector_residual(a: &[Ket], b: &[Ket]) -> f64 {
    let pb: Vec<CMatrix> = b.iter().map(|k| linalg::projector(k.amplitudes())).collect();
    let mut used = vec![false; pb.len()];
    let mut worst: f64 = 0.0;
    for ket in a {
        let pa = linalg::projector(ket.amplitudes());
        let mut best = f64::INFINITY;
        let mut best_k = 0;
        for (k, q) in pb.iter().enumerate() {
            if used[k] {
                continue;
            }
            let r = linalg::max_abs_diff(&pa, q);
            if r < best {
                best = r;
                best_k = k;
            }
        }
        used[best_k] = true;
        worst = worst.max(best);
    }
    worst
}

/// Lifts R ∈ SO(3) to U ∈ SU(2) with U σ_m U† = Σ_k R_{km} σ_k, using
/// quaternion extraction; the ±U ambiguity is resolved by making the first
/// nonzero quaternion component positive.
fn su2_from_rotation(r: &Matrix3<f64>) -> CMatrix {
    let t = r.trace();
    let (mut w, mut x, mut y, mut z);
    if t >= r[(0, 0)] && t >= r[(1, 1)] && t >= r[(2, 2)] {
        let s = (1.0 + t).sqrt();
        w = s / 2.0;
        x = (r[(2, 1)] - r[(1, 2)]) / (2.0 * s);
        y = (r[(0, 2)] - r[(2, 0)]) / (2.0 * s);
        z = (r[(1, 0)] - r[(0, 1)]) / (2.0 * s);
    } else if r[(0, 0)] >= r[(1, 1)] && r[(0, 0)] >= r[(2, 2)] {
        let s = (1.0 + r[(0, 0)] - r[(1, 1)] - r[(2, 2)]).sqrt();
        x = s / 2.0;
        w = (r[(2, 1)] - r[(1, 2)]) / (2.0 * s);
        y = (r[(0, 1)] + r[(1, 0)]) / (2.0 * s);
        z = (r[(0, 2)] + r[(2, 0)]) / (2.0 * s);
    } else if r[(1, 1)] >= r[(2, 2)] {
        let s = (1.0 - r[(0, 0)] + r[(1, 1)] - r[(2, 2)]).sqrt();
        y = s / 2.0;
        w = (r[(0, 2)] - r[(2, 0)]) / (2.0 * s);
        x = (r[(0, 1)] + r[(1, 0)]) / (2.0 * s);
        z = (r[(1, 2)] + r[(2, 1)]) / (2.0 * s);
    } else {
        let s = (1.0 - r[(0, 0)] - r[(1, 1)] + r[(2, 2)]).sqrt();
        z = s / 2.0;
        w = (r[(1, 0)] - r[(0, 1)]) / (2.0 * s);
        x = (r[(0, 2)] + r[(2, 0)]) / (2.0 * s);
        y = (r[(1, 2)] + r[(2, 1)]) / (2.0 * s);
    }
    let norm = (w * w + x * x + y * y + z * z).sqrt();
    w /= norm;
    x /= norm;
    y /= norm;
    z /= norm;
    let lead = [w, x, y, z].into_iter().find(|c| c.abs() > 1e-12).unwrap_or(1.0);
    if lead < 0.0 {
        w = -w;
        x = -x;
        y = -y;
        z = -z;
    }
    // U = wI − i(xσ1 + yσ2 + zσ3).
    CMatrix::from_row_slice(2, 2, &[
        Complex64::new(w, -z),
        Complex64::new(-y, -x),
        Complex64::new(y, -x),
        Complex64::new(w, z),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement::negativity;
    use crate::qstate::{generalized_bell, max_entangled, tensor};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn computational_basis(dims: BipartiteDims) -> ProjectiveBasis {
        let d = dims.total();
        ProjectiveBasis::from_unitary_columns(dims, &CMatrix::identity(d, d)).unwrap()
    }

    fn fixed_mixed_state() -> DensityMatrix {
        let dims = BipartiteDims::new(2, 2);
        let bell = DensityMatrix::pure(&generalized_bell(2, 0, 0).unwrap());
        let p01 = DensityMatrix::pure(
            &tensor(
                &Ket::computational(2, 0).unwrap(),
                &Ket::computational(2, 1).unwrap(),
            )
            .unwrap(),
        );
        DensityMatrix::new(dims, bell.matrix().scale(0.6) + p01.matrix().scale(0.4))
            .unwrap()
    }

    #[test]
    fn basis_validation_rejects_non_orthonormal_sets() {
        let dims = BipartiteDims::new(2, 2);
        let states = vec![
            Ket::computational(4, 0).unwrap(),
            Ket::computational(4, 0).unwrap(),
            Ket::computational(4, 2).unwrap(),
            Ket::computational(4, 3).unwrap(),
        ];
        // Re-wrap the dim-4 single-system kets as (2,2) bipartite states.
        let states: Vec<Ket> = states
            .into_iter()
            .map(|k| Ket::new(dims, k.amplitudes().clone()).unwrap())
            .collect();
        assert!(matches!(
            ProjectiveBasis::new(dims, states),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn computational_dephasing_keeps_the_diagonal() {
        let rho = fixed_mixed_state();
        let basis = computational_basis(rho.dims());
        let out = apply_nonselective(&basis, &rho).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { rho.matrix()[(i, j)] } else { Complex64::ZERO };
                assert_abs_diff_eq!(out.matrix()[(i, j)].re, want.re, epsilon = 1e-14);
                assert_abs_diff_eq!(out.matrix()[(i, j)].im, want.im, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn bell_measurement_of_product_state() {
        let zero2 = tensor(
            &Ket::computational(2, 0).unwrap(),
            &Ket::computational(2, 0).unwrap(),
        )
        .unwrap();
        let out = apply_nonselective(&bell_basis(), &DensityMatrix::pure(&zero2)).unwrap();
        let mut want = CMatrix::zeros(4, 4);
        want[(0, 0)] = c(0.5, 0.);
        want[(3, 3)] = c(0.5, 0.);
        assert!(linalg::max_abs_diff(out.matrix(), &want) < 1e-14);
        assert_eq!(negativity(&out), 0.0);
    }

    #[test]
    fn channel_is_trace_preserving_idempotent_and_unital() {
        let rho = fixed_mixed_state();
        let basis = bell_basis();
        let once = apply_nonselective(&basis, &rho).unwrap();
        assert_abs_diff_eq!(once.matrix().trace().re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(once.matrix().trace().im, 0.0, epsilon = 1e-12);
        let twice = apply_nonselective(&basis, &once).unwrap();
        assert!(linalg::max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(rho.dims());
        let out = apply_nonselective(&basis, &mixed).unwrap();
        assert!(linalg::max_abs_diff(out.matrix(), mixed.matrix()) < 1e-14);

        assert!(linalg::hermitian_eigenvalues(once.matrix())[0] > -1e-10);
    }

    #[test]
    fn gain_is_nonpositive_in_protected_cases() {
        // Maximally entangled input: negativity is already maximal.
        let phi = max_entangled(BipartiteDims::new(2, 2), 2, None).unwrap();
        let rho = DensityMatrix::pure(&phi);
        assert!(gain(&computational_basis(rho.dims()), &rho).unwrap() <= 0.0);

        // Bell-basis measurement never gains on any two-qubit state.
        assert!(gain(&bell_basis(), &fixed_mixed_state()).unwrap() <= 1e-10);
        assert!(gain(&bell_basis(), &rho).unwrap() <= 1e-10);
    }

    #[test]
    fn convexity_bound_examples() {
        let dims = BipartiteDims::new(2, 2);
        assert_eq!(convexity_bound(&computational_basis(dims)), 0.0);
        assert_abs_diff_eq!(convexity_bound(&bell_basis()), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn mixed_unitary_channel_matches_projective_channel() {
        let rho = fixed_mixed_state();
        for basis in [bell_basis(), computational_basis(rho.dims())] {
            let a = apply_nonselective(&basis, &rho).unwrap();
            let b = mixed_unitary_channel(&basis, &rho).unwrap();
            assert!(linalg::max_abs_diff(a.matrix(), b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn dephasing_unitary_is_unitary() {
        for basis in [bell_basis(), qutrit_locc_basis()] {
            let u = dephasing_unitary(&basis);
            assert!(linalg::unitarity_deviation(&u) < 1e-12);
        }
    }

    #[test]
    fn maximally_entangled_basis_detection() {
        assert!(is_max_entangled_basis(&bell_basis(), 1e-10).unwrap());
        assert!(
            !is_max_entangled_basis(&computational_basis(BipartiteDims::new(2, 2)), 1e-10)
                .unwrap()
        );

        let dims = BipartiteDims::new(3, 3);
        let mut states = Vec::new();
        for j in 0..3 {
            for k in 0..3 {
                states.push(generalized_bell(3, j, k).unwrap());
            }
        }
        let gen_bell = ProjectiveBasis::new(dims, states).unwrap();
        assert!(is_max_entangled_basis(&gen_bell, 1e-10).unwrap());

        let rect = computational_basis(BipartiteDims::new(2, 3));
        assert!(is_max_entangled_basis(&rect, 1e-10).is_err());
    }

    #[test]
    fn qutrit_locc_basis_member_negativities() {
        let basis = qutrit_locc_basis();
        for (j, state) in basis.states().iter().enumerate() {
            let n = negativity(&DensityMatrix::pure(state));
            let want = if j < 4 { 0.5 } else { 0.0 };
            assert_abs_diff_eq!(n, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn basis_json_round_trip() {
        let basis = bell_basis();
        let text = basis.to_json();
        let back = ProjectiveBasis::from_json(&text).unwrap();
        assert_eq!(back.dims(), basis.dims());
        for (a, b) in back.states().iter().zip(basis.states()) {
            assert!((a.inner(b).norm() - 1.0).abs() < 1e-12);
        }

        assert!(ProjectiveBasis::from_json("{\"bogus\":1}").is_err());
        let mut truncated: BasisJson = serde_json::from_str(&text).unwrap();
        truncated.states[0][3] = [0.0, 0.0];
        let bad = serde_json::to_string(&truncated).unwrap();
        assert!(ProjectiveBasis::from_json(&bad).is_err());
    }

    #[test]
    fn su2_lift_satisfies_the_adjoint_convention() {
        // Fixed quaternion (normalized), its rotation matrix, and the lift.
        let (w, x, y, z) = (0.3, -0.5, 0.6, 0.55);
        let norm = (w * w + x * x + y * y + z * z) as f64;
        let (w, x, y, z) = {
            let n = norm.sqrt();
            (w / n, x / n, y / n, z / n)
        };
        let r = Matrix3::new(
            1.0 - 2.0 * (y * y + z * z),
            2.0 * (x * y - w * z),
            2.0 * (x * z + w * y),
            2.0 * (x * y + w * z),
            1.0 - 2.0 * (x * x + z * z),
            2.0 * (y * z - w * x),
            2.0 * (x * z - w * y),
            2.0 * (y * z + w * x),
            1.0 - 2.0 * (x * x + y * y),
        );
        let u = su2_from_rotation(&r);
        assert!(linalg::unitarity_deviation(&u) < 1e-12);

        let paulis = [
            CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]),
            CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]),
            CMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]),
        ];
        for m in 0..3 {
            let lhs = &u * &paulis[m] * u.adjoint();
            let mut rhs = CMatrix::zeros(2, 2);
            for k in 0..3 {
                rhs += paulis[k].map(|v| v * Complex64::new(r[(k, m)], 0.0));
            }
            assert!(linalg::max_abs_diff(&lhs, &rhs) < 1e-12);
        }
    }

    #[test]
    fn bell_reduction_of_bell_basis_is_identity() {
        let pair = bell_reduction(&bell_basis()).unwrap();
        assert!(linalg::max_abs_diff(&pair.u1, &CMatrix::identity(2, 2)) < 1e-12);
        assert!(linalg::max_abs_diff(&pair.u2, &CMatrix::identity(2, 2)) < 1e-12);
    }

    fn rotated_bell_basis(
        theta: f64,
        phi: f64,
        perm: [usize; 4],
        phases: [f64; 4],
    ) -> ProjectiveBasis {
        let v1 = CMatrix::from_row_slice(2, 2, &[
            c(theta.cos(), 0.),
            c(-theta.sin(), 0.),
            c(theta.sin(), 0.),
            c(theta.cos(), 0.),
        ]);
        let v2 = CMatrix::from_row_slice(2, 2, &[
            c(phi.cos(), 0.),
            c(0., -phi.sin()),
            c(0., -phi.sin()),
            c(phi.cos(), 0.),
        ]);
        let pair = LocalUnitaryPair { u1: v1, u2: v2 };
        let bell = bell_basis();
        let states: Vec<Ket> = perm
            .iter()
            .zip(phases)
            .map(|(&p, ph)| {
                let rotated = pair.apply(&bell.states()[p]).unwrap();
                let amps = rotated.amplitudes() * Complex64::from_polar(1.0, ph);
                Ket::new(rotated.dims(), amps).unwrap()
            })
            .collect();
        ProjectiveBasis::new(BipartiteDims::new(2, 2), states).unwrap()
    }

    #[test]
    fn bell_reduction_inverts_local_rotations() {
        let basis = rotated_bell_basis(0.7, 0.4, [0, 1, 2, 3], [0.0; 4]);
        let pair = bell_reduction(&basis).unwrap();
        assert!(linalg::unitarity_deviation(&pair.u1) < 1e-10);
        assert!(linalg::unitarity_deviation(&pair.u2) < 1e-10);
        assert!(bell_residual(&basis, &pair).unwrap() < 1e-8);
    }

    #[test]
    fn bell_reduction_handles_phases_and_permutations() {
        let basis = rotated_bell_basis(1.1, -0.6, [2, 0, 3, 1], [0.3, 1.7, -2.2, 0.9]);
        let pair = bell_reduction(&basis).unwrap();
        assert!(bell_residual(&basis, &pair).unwrap() < 1e-8);
    }

    #[test]
    fn bell_reduction_rejects_unentangled_bases() {
        let basis = computational_basis(BipartiteDims::new(2, 2));
        assert!(matches!(
            bell_reduction(&basis),
            Err(Error::NotMaximallyEntangled { .. })
        ));
    }

    #[test]
    fn alpha_matrices_are_trace_orthonormal_and_hermitian() {
        let basis = rotated_bell_basis(0.9, 0.25, [1, 3, 0, 2], [0.4, -0.8, 1.2, 2.0]);
        let a = alpha_matrices(&basis).unwrap();
        let mut alphas = vec![a.alpha0.clone()];
        for (h, eta) in a.hermitian.iter().zip(&a.phases) {
            assert!(linalg::hermiticity_deviation(h) < 1e-10);
            alphas.push(h.map(|v| v * Complex64::from_polar(FRAC_1_SQRT_2, *eta)));
        }
        for (i, x) in alphas.iter().enumerate() {
            for (j, y) in alphas.iter().enumerate() {
                let tr = (x * y.adjoint()).trace();
                let want = if i == j { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(tr.re, want, epsilon = 1e-10);
                assert_abs_diff_eq!(tr.im, 0.0, epsilon = 1e-10);
            }
        }
    }
}
