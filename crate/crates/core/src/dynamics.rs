//! Dephasing open-system model that realizes a non-selective measurement
//! asymptotically: exact solved propagator, negativity trajectories, decay
//! rate extraction, and the no-finite-time-projection witness.

use num_complex::Complex64;

use crate::measurement::ProjectiveBasis;
use crate::qstate::DensityMatrix;
use crate::{CMatrix, CVector, Error, Result};

/// Dephasing model in a fixed measurement basis: the coherence between basis
/// states n and m decays as e^{−|λ_n−λ_m| t} and rotates as e^{i t (γ_n−γ_m)},
/// while basis populations stay put. The t → ∞ limit is the non-selective
/// measurement along the basis.
#[derive(Clone, Debug)]
pub struct ArakiZurekModel {
    basis: ProjectiveBasis,
    lambdas: Vec<f64>,
    gammas: Vec<f64>,
    basis_matrix: CMatrix,
}

impl ArakiZurekModel {
    /// Couplings must be pairwise distinct so every coherence decays.
    pub fn new(basis: ProjectiveBasis, lambdas: Vec<f64>, gammas: Vec<f64>) -> Result<Self> {
        let d = basis.states().len();
        if lambdas.len() != d || gammas.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "{} couplings and {} phases for {} basis states",
                lambdas.len(),
                gammas.len(),
                d
            )));
        }
        for i in 0..d {
            for j in (i + 1)..d {
                if lambdas[i] == lambdas[j] {
                    return Err(Error::Precondition(format!(
                        "couplings must be pairwise distinct, λ[{i}] = λ[{j}] = {}",
                        lambdas[i]
                    )));
                }
            }
        }
        let total = basis.dims().total();
        let mut basis_matrix = CMatrix::zeros(total, d);
        for (n, state) in basis.states().iter().enumerate() {
            basis_matrix.set_column(n, state.amplitudes());
        }
        Ok(Self {
            basis,
            lambdas,
            gammas,
            basis_matrix,
        })
    }

    /// Default two-qubit model: basis {b|00⟩+√(1−b²)|11⟩, √(1−b²)|00⟩−b|11⟩,
    /// |01⟩, |10⟩}, couplings (0, 1, 2.5, 4), phases (0, 0, 2, −2).
    pub fn two_qubit_default(b: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&b) {
            return Err(Error::OutOfRange {
                name: "b".into(),
                value: b,
                range: "[0, 1]".into(),
            });
        }
        let dims = crate::qstate::BipartiteDims::new(2, 2);
        let sb = (1.0 - b * b).sqrt();
        let entries: [&[(usize, f64)]; 4] = [
            &[(0, b), (3, sb)],
            &[(0, sb), (3, -b)],
            &[(1, 1.0)],
            &[(2, 1.0)],
        ];
        let states = entries
            .iter()
            .map(|pairs| {
                let mut v = CVector::zeros(4);
                for &(i, x) in *pairs {
                    v[i] = Complex64::new(x, 0.0);
                }
                crate::qstate::Ket::new(dims, v)
            })
            .collect::<Result<Vec<_>>>()?;
        let basis = ProjectiveBasis::new(dims, states)?;
        Self::new(basis, vec![0.0, 1.0, 2.5, 4.0], vec![0.0, 0.0, 2.0, -2.0])
    }

    pub fn basis(&self) -> &ProjectiveBasis {
        &self.basis
    }

    pub fn couplings(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn phases(&self) -> &[f64] {
        &self.gammas
    }

    /// Coupling gap λ0 − λ1 of the first two basis states; its magnitude is
    /// the decay rate of the coherence they share (−1 for the default model).
    pub fn mu(&self) -> f64 {
        self.lambdas[0] - self.lambdas[1]
    }
}

/// State at time `t`: populations in the measurement basis are preserved,
/// coherences are damped and rotated element-wise.
pub fn evolve(model: &ArakiZurekModel, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if t < 0.0 {
        return Err(Error::OutOfRange {
            name: "t".into(),
            value: t,
            range: "[0, ∞)".into(),
        });
    }
    if rho0.dims() != model.basis.dims() {
        return Err(Error::DimensionMismatch(
            "state dims differ from model basis dims".into(),
        ));
    }
    let b = &model.basis_matrix;
    let tilde = b.adjoint() * rho0.matrix() * b;
    let d = tilde.nrows();
    let mut damped = CMatrix::zeros(d, d);
    for n in 0..d {
        for m in 0..d {
            let decay = (-(model.lambdas[n] - model.lambdas[m]).abs() * t).exp();
            let phase = t * (model.gammas[n] - model.gammas[m]);
            damped[(n, m)] = tilde[(n, m)] * Complex64::from_polar(decay, phase);
        }
    }
    DensityMatrix::new(rho0.dims(), b * damped * b.adjoint())
}

/// Largest coherence magnitude of `rho` in the model's measurement basis.
pub fn max_coherence(model: &ArakiZurekModel, rho: &DensityMatrix) -> f64 {
    let b = &model.basis_matrix;
    let tilde = b.adjoint() * rho.matrix() * b;
    let mut max = 0.0f64;
    for n in 0..tilde.nrows() {
        for m in 0..tilde.ncols() {
            if n != m {
                max = max.max(tilde[(n, m)].norm());
            }
        }
    }
    max
}

/// Sampled time evolution with the per-time negativity.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    negativities: Vec<f64>,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn negativities(&self) -> &[f64] {
        &self.negativities
    }
}

fn check_sorted_nonnegative(times: &[f64]) -> Result<()> {
    if times.first().is_some_and(|&t| t < 0.0) || times.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Precondition(
            "times must be sorted and nonnegative".into(),
        ));
    }
    Ok(())
}

pub fn negativity_trajectory(
    model: &ArakiZurekModel,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<Trajectory> {
    check_sorted_nonnegative(times)?;
    let mut states = Vec::with_capacity(times.len());
    let mut negativities = Vec::with_capacity(times.len());
    for &t in times {
        let state = evolve(model, rho0, t)?;
        negativities.push(crate::entanglement::negativity(&state));
        states.push(state);
    }
    Ok(Trajectory {
        times: times.to_vec(),
        states,
        negativities,
    })
}

/// Fraction of the initial residual below which samples are dropped from the
/// rate fit (the flat tail carries no slope information).
const TRANSIENT_FLOOR: f64 = 0.05;

/// Exponential approach rate of the negativity to its final value: the
/// negated least-squares slope of ln(N_∞ − N_t) against t over the transient
/// samples. N_∞ is taken as the last trajectory value.
pub fn fit_convergence_rate(traj: &Trajectory) -> Result<f64> {
    let n_inf = *traj
        .negativities
        .last()
        .ok_or_else(|| Error::Precondition("empty trajectory".into()))?;
    let r0 = n_inf - traj.negativities[0];
    let mut points = Vec::new();
    for (&t, &n) in traj.times.iter().zip(&traj.negativities) {
        let r = n_inf - n;
        if r > 1e-13 && r >= TRANSIENT_FLOOR * r0 {
            points.push((t, r.ln()));
        }
    }
    if points.len() < 10 {
        return Err(Error::NoTransient);
    }
    let n = points.len() as f64;
    let t_mean = points.iter().map(|p| p.0).sum::<f64>() / n;
    let y_mean = points.iter().map(|p| p.1).sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for &(t, y) in &points {
        cov += (t - t_mean) * (y - y_mean);
        var += (t - t_mean) * (t - t_mean);
    }
    Ok(-cov / var)
}

/// Numerical witness that the evolution is never exactly projective at finite
/// time: checks that the largest coherence stays above
/// e^{−(λ_max−λ_min)·t_max}·initial/2 at every sampled time. Requires the
/// input to carry coherence ≥ 1e-3 in the measurement basis.
pub fn never_projective_check(
    model: &ArakiZurekModel,
    rho0: &DensityMatrix,
    times: &[f64],
) -> Result<bool> {
    check_sorted_nonnegative(times)?;
    let initial = max_coherence(model, rho0);
    if initial < 1e-3 {
        return Err(Error::Precondition(
            "input carries no coherence in the measurement basis".into(),
        ));
    }
    let t_max = times.last().copied().unwrap_or(0.0);
    let spread = model.lambdas.iter().cloned().fold(f64::MIN, f64::max)
        - model.lambdas.iter().cloned().fold(f64::MAX, f64::min);
    let floor = (-spread * t_max).exp() * initial / 2.0;
    for &t in times {
        let state = evolve(model, rho0, t)?;
        if max_coherence(model, &state) <= floor {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Closed-form negativity of the default model started from |00⟩⟨00|:
/// N(ρ_t) = b√(1−b²)·|2b²−1|·(1−e^{−|μ|t}).
pub fn closed_form_negativity(b: f64, mu: f64, t: f64) -> f64 {
    b * (1.0 - b * b).sqrt() * (2.0 * b * b - 1.0).abs() * (1.0 - (-mu.abs() * t).exp())
}
