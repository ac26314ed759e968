//! Constructive recipes for entanglement gain: an input state that gains
//! under a given measurement, a measurement that gains on a given state, and
//! the closed-form two-qubit theory of the optimal measurement.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::linalg;
use crate::measurement::ProjectiveBasis;
use crate::qstate::{schmidt, BipartiteDims, Ket};
use crate::{CMatrix, CVector, Error, Result};

/// Coefficients equal within this are treated as degenerate when testing the
/// "not maximally entangled" hypotheses of the constructions.
const DEGENERACY_TOL: f64 = 1e-8;

/// Admissible range (0, upper) of the mixing parameter ε in
/// [`state_for_measurement`]; every ε inside guarantees strict gain.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EpsilonWindow {
    /// Exclusive lower edge, always 0.
    pub lower: f64,
    /// Exclusive upper edge.
    pub upper: f64,
}

impl EpsilonWindow {
    pub fn midpoint(&self) -> f64 {
        (self.lower + self.upper) / 2.0
    }

    pub fn contains(&self, eps: f64) -> bool {
        self.lower < eps && eps < self.upper
    }
}

/// Input state |φ⟩ ∝ |ψ0⟩ − ε|Φ⟩ that strictly gains negativity under the
/// non-selective measurement along `basis`.
///
/// ψ0 is the first basis state and must have at least two nonzero, not all
/// equal Schmidt coefficients; Φ is maximally entangled on ψ0's Schmidt
/// subspace. Every ε in the returned window guarantees gain; `epsilon`
/// defaults to the window midpoint.
pub fn state_for_measurement(
    basis: &ProjectiveBasis,
    epsilon: Option<f64>,
) -> Result<(Ket, EpsilonWindow)> {
    let psi0 = &basis.states()[0];
    let sf = schmidt(psi0);
    let rank = sf.rank();
    if rank < 2 {
        return Err(Error::HypothesisViolation(
            "first basis state is a product state".into(),
        ));
    }
    let coeffs = &sf.coefficients()[..rank];
    if coeffs[0] - coeffs[rank - 1] <= DEGENERACY_TOL {
        return Err(Error::MaximallyEntangledInput);
    }

    let d = rank as f64;
    let sqrt_d = d.sqrt();
    let coeff_sum: f64 = coeffs.iter().sum();
    let beta = coeff_sum / sqrt_d;
    let n_psi0 = (coeff_sum * coeff_sum - 1.0) / 2.0;
    let n_phi = (d - 1.0) / 2.0;
    let delta_n = n_phi - n_psi0;
    let min_p = coeffs[rank - 1] * coeffs[rank - 1];
    let upper = (sqrt_d * min_p)
        .min(2.0 * beta * delta_n / (d * (1.0 - beta * beta) + delta_n));
    let window = EpsilonWindow { lower: 0.0, upper };

    let eps = epsilon.unwrap_or_else(|| window.midpoint());
    if !window.contains(eps) {
        return Err(Error::OutOfRange {
            name: "epsilon".into(),
            value: eps,
            range: format!("(0, {upper:.6e})"),
        });
    }

    let dims = psi0.dims();
    let mut amplitudes = CVector::zeros(dims.total());
    for i in 0..rank {
        let w = coeffs[i] - eps / sqrt_d;
        let (l, r) = (&sf.left_basis()[i], &sf.right_basis()[i]);
        for i1 in 0..dims.d1 {
            for i2 in 0..dims.d2 {
                amplitudes[i1 * dims.d2 + i2] += w * l[i1] * r[i2];
            }
        }
    }
    let norm = amplitudes.norm();
    Ok((Ket::new(dims, amplitudes.unscale(norm))?, window))
}

/// Measurement basis whose non-selective channel strictly gains on |φ⟩: the
/// first two members are (|φ⟩ ± |Φ⟩)/√(2 ± 2⟨φ|Φ⟩) with Φ maximally
/// entangled (rank d1) on φ's Schmidt bases, completed arbitrarily. The
/// channel output is ½|φ⟩⟨φ| + ½|Φ⟩⟨Φ| with negativity
/// ½[N(φ) + (d1−1)/2].
pub fn measurement_for_state(phi: &Ket) -> Result<ProjectiveBasis> {
    let dims = phi.dims();
    if dims.d1 > dims.d2 {
        return Err(Error::DimensionMismatch(format!(
            "construction needs d1 ≤ d2, got ({},{})",
            dims.d1, dims.d2
        )));
    }
    let d = dims.d1;
    let target = 1.0 / (d as f64).sqrt();
    let sf = schmidt(phi);
    let max_dev = sf
        .coefficients()
        .iter()
        .map(|c| (c - target).abs())
        .fold(0.0, f64::max);
    if max_dev <= DEGENERACY_TOL {
        return Err(Error::MaximallyEntangledInput);
    }

    let mut phi_max = CVector::zeros(dims.total());
    for i in 0..d {
        let (l, r) = (&sf.left_basis()[i], &sf.right_basis()[i]);
        for i1 in 0..dims.d1 {
            for i2 in 0..dims.d2 {
                phi_max[i1 * dims.d2 + i2] += target * l[i1] * r[i2];
            }
        }
    }
    let overlap = sf.coefficients().iter().sum::<f64>() * target;
    let psi0 = (phi.amplitudes() + &phi_max).unscale((2.0 + 2.0 * overlap).sqrt());
    let psi1 = (phi.amplitudes() - &phi_max).unscale((2.0 - 2.0 * overlap).sqrt());
    complete_basis(dims, &[Ket::new(dims, psi0)?, Ket::new(dims, psi1)?])
}

/// Extends orthonormal `partial` states to a full projective basis by
/// Gram–Schmidt over the computational vectors.
pub fn complete_basis(dims: BipartiteDims, partial: &[Ket]) -> Result<ProjectiveBasis> {
    let d = dims.total();
    if partial.len() > d {
        return Err(Error::DimensionMismatch(format!(
            "{} partial states exceed dimension {}",
            partial.len(),
            d
        )));
    }
    let mut accepted: Vec<CVector> = Vec::with_capacity(d);
    for ket in partial {
        if ket.dims() != dims {
            return Err(Error::DimensionMismatch(
                "partial state dims differ from basis dims".into(),
            ));
        }
        accepted.push(ket.amplitudes().clone());
    }
    for k in 0..d {
        if accepted.len() == d {
            break;
        }
        let mut v = CVector::zeros(d);
        v[k] = Complex64::ONE;
        for _ in 0..2 {
            for u in &accepted {
                let ov = u.dotc(&v);
                v -= u * ov;
            }
        }
        let norm = v.norm();
        if norm > 1e-6 {
            accepted.push(v.unscale(norm));
        }
    }
    if accepted.len() != d {
        return Err(Error::Degenerate(
            "could not complete the basis from computational vectors".into(),
        ));
    }
    let states = accepted
        .into_iter()
        .map(|v| Ket::new(dims, v))
        .collect::<Result<Vec<_>>>()?;
    ProjectiveBasis::new(dims, states)
}

/// The (N_i, N_b) parameterization of a two-qubit gain instance: input
/// negativity and the negativity of the measurement.
#[derive(Clone, Copy, Debug)]
pub struct TwoQubitGainModel {
    n_i: f64,
    n_b: f64,
}

impl TwoQubitGainModel {
    pub fn new(n_i: f64, n_b: f64) -> Result<Self> {
        for (name, v) in [("n_i", n_i), ("n_b", n_b)] {
            if !(0.0..=0.5).contains(&v) {
                return Err(Error::OutOfRange {
                    name: name.into(),
                    value: v,
                    range: "[0, 1/2]".into(),
                });
            }
        }
        Ok(Self { n_i, n_b })
    }

    pub fn n_i(&self) -> f64 {
        self.n_i
    }

    pub fn n_b(&self) -> f64 {
        self.n_b
    }
}

/// Closed-form output negativity of the optimal-family two-qubit channel:
/// N_f = N_b √(1−4N_i²) √(1−4N_b²) + 4 N_i N_b².
pub fn predict_final_negativity_2q(model: &TwoQubitGainModel) -> f64 {
    let (n_i, n_b) = (model.n_i, model.n_b);
    let si = (1.0 - 4.0 * n_i * n_i).max(0.0).sqrt();
    let sb = (1.0 - 4.0 * n_b * n_b).max(0.0).sqrt();
    n_b * si * sb + 4.0 * n_i * n_b * n_b
}

/// Strict gain condition N_i < N_b < 1/2 (boundaries excluded).
pub fn gain_condition_2q(model: &TwoQubitGainModel) -> bool {
    model.n_i < model.n_b && model.n_b < 0.5
}

/// Measurement negativity maximizing the gain for input negativity `n_i`,
/// with the resulting maximal gain: (√(2N_i+1)/(2√2), 1/4 − N_i/2).
pub fn optimal_measurement_2q(n_i: f64) -> Result<(f64, f64)> {
    if !(0.0..=0.5).contains(&n_i) {
        return Err(Error::OutOfRange {
            name: "n_i".into(),
            value: n_i,
            range: "[0, 1/2]".into(),
        });
    }
    let n_b_max = (2.0 * n_i + 1.0).sqrt() / (2.0 * SQRT_2);
    Ok((n_b_max, 0.25 - n_i / 2.0))
}

/// Lower bound |⟨q, m q⟩| on the output negativity when the first d basis
/// states |ψ_j⟩ = Σ_i α_{ji}|ii⟩ act on the Schmidt subspace of the input
/// Σ_i q_i|ii⟩, via (m)_{ii′} = Σ_{k<k′} Σ_j α_{ji} α*_{ji′} α_{jk} α*_{jk′}.
/// Exact for two qubits.
pub fn neg_lower_bound_qudit(alpha: &CMatrix, q: &[f64]) -> Result<f64> {
    let d = alpha.nrows();
    if alpha.ncols() != d || q.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "block matrix is {}×{} with {} Schmidt coefficients",
            alpha.nrows(),
            alpha.ncols(),
            q.len()
        )));
    }
    let deviation = linalg::unitarity_deviation(alpha);
    if deviation > 1e-8 {
        return Err(Error::NotOrthonormal { deviation });
    }
    for &x in q {
        if x < 0.0 {
            return Err(Error::OutOfRange {
                name: "q".into(),
                value: x,
                range: "[0, 1]".into(),
            });
        }
    }
    let sq: f64 = q.iter().map(|x| x * x).sum();
    if (sq - 1.0).abs() > 1e-8 {
        return Err(Error::NotNormalized { norm: sq.sqrt() });
    }

    let mut total = Complex64::ZERO;
    for i in 0..d {
        for ip in 0..d {
            let mut m = Complex64::ZERO;
            for k in 0..d {
                for kp in (k + 1)..d {
                    for j in 0..d {
                        m += alpha[(j, i)]
                            * alpha[(j, ip)].conj()
                            * alpha[(j, k)]
                            * alpha[(j, kp)].conj();
                    }
                }
            }
            total += m * (q[i] * q[ip]);
        }
    }
    Ok(total.norm())
}

/// The Schmidt-basis ket a|00⟩ + √(1−a²)|11⟩ of input negativity a√(1−a²).
pub fn schmidt_ket_2q(a: f64) -> Result<Ket> {
    if !(0.0..=1.0).contains(&a) {
        return Err(Error::OutOfRange {
            name: "a".into(),
            value: a,
            range: "[0, 1]".into(),
        });
    }
    let b = (1.0 - a * a).sqrt();
    let mut v = CVector::zeros(4);
    v[0] = Complex64::new(a, 0.0);
    v[3] = Complex64::new(b, 0.0);
    Ket::new(BipartiteDims::new(2, 2), v)
}

/// The candidate-optimal two-qubit basis: {b|00⟩+√(1−b²)|11⟩,
/// √(1−b²)|00⟩−b|11⟩, c|01⟩+√(1−c²)|10⟩, √(1−c²)|01⟩−c|10⟩}. Only the two
/// {|00⟩,|11⟩}-block members touch a Schmidt-aligned input, so c is free.
pub fn parametric_basis_2q(b: f64, c: f64) -> Result<ProjectiveBasis> {
    for (name, v) in [("b", b), ("c", c)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::OutOfRange {
                name: name.into(),
                value: v,
                range: "[0, 1]".into(),
            });
        }
    }
    let (sb, sc) = ((1.0 - b * b).sqrt(), (1.0 - c * c).sqrt());
    let dims = BipartiteDims::new(2, 2);
    let entries: [[(usize, f64); 2]; 4] = [
        [(0, b), (3, sb)],
        [(0, sb), (3, -b)],
        [(1, c), (2, sc)],
        [(1, sc), (2, -c)],
    ];
    let states = entries
        .iter()
        .map(|pair| {
            let mut v = CVector::zeros(4);
            for &(i, x) in pair {
                v[i] = Complex64::new(x, 0.0);
            }
            Ket::new(dims, v)
        })
        .collect::<Result<Vec<_>>>()?;
    ProjectiveBasis::new(dims, states)
}

/// Inverse of N = a√(1−a²) on the branch a ∈ [0, 1/√2]:
/// a = √((1 − √(1−4N²))/2).
pub fn schmidt_param_from_negativity(n: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&n) {
        return Err(Error::OutOfRange {
            name: "negativity".into(),
            value: n,
            range: "[0, 1/2]".into(),
        });
    }
    let root = (1.0 - 4.0 * n * n).max(0.0).sqrt();
    Ok(((1.0 - root) / 2.0).sqrt())
}
