//! Haar-random sampling of pure states and measurement bases, with the
//! statistical experiments built on them: gain probability, gain scatter,
//! negativity histograms, and mean statistical distance.
//!
//! Determinism contract: every trial reseeds a ChaCha generator with the
//! configured seed and a trial-specific stream number, so results are
//! bit-for-bit reproducible and independent of how trials are scheduled
//! across threads. Stream layouts are documented per operation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entanglement::{negativity, pure_negativity};
use crate::measurement::{apply_nonselective, ProjectiveBasis};
use crate::qstate::{BipartiteDims, DensityMatrix, Ket};
use crate::{CMatrix, CVector, Error, Result};

/// Output negativity must exceed the input by more than this to count as a
/// gain event; separates true gain from eigensolver noise.
pub const GAIN_THRESHOLD: f64 = 1e-12;

/// Parameters of a sampling experiment on a d×d bipartite system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub d: usize,
    pub trials: usize,
    pub bins: usize,
}

impl SamplerConfig {
    pub fn new(d: usize, trials: usize, seed: u64) -> Self {
        Self {
            seed,
            d,
            trials,
            bins: 1000,
        }
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims::new(self.d, self.d)
    }

    /// Largest attainable negativity (d−1)/2, the histogram range.
    pub fn negativity_cap(&self) -> f64 {
        (self.d as f64 - 1.0) / 2.0
    }

    fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::OutOfRange {
                name: "d".into(),
                value: self.d as f64,
                range: "[2, ∞)".into(),
            });
        }
        if self.trials < 1 {
            return Err(Error::OutOfRange {
                name: "trials".into(),
                value: self.trials as f64,
                range: "[1, ∞)".into(),
            });
        }
        if self.bins < 2 {
            return Err(Error::OutOfRange {
                name: "bins".into(),
                value: self.bins as f64,
                range: "[2, ∞)".into(),
            });
        }
        Ok(())
    }
}

/// Generator for one trial: fixed seed, trial-specific stream.
fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn ginibre(n: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-distributed pure state: normalized vector of i.i.d. complex
/// Gaussians.
pub fn haar_ket(dims: BipartiteDims, rng: &mut impl Rng) -> Ket {
    let n = dims.total();
    let mut v = CVector::zeros(n);
    for i in 0..n {
        v[i] = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    let norm = v.norm();
    Ket::new(dims, v.unscale(norm)).expect("normalized Gaussian vector is a valid ket")
}

/// Haar-distributed unitary: QR factorization of a Ginibre matrix with the
/// R-diagonal phases pushed into Q.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = ginibre(n, rng).qr();
    let mut u = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d.unscale(d.norm())
        } else {
            Complex64::ONE
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Haar-distributed projective basis: the columns of a Haar unitary.
pub fn haar_basis(dims: BipartiteDims, rng: &mut impl Rng) -> ProjectiveBasis {
    let u = haar_unitary(dims.total(), rng);
    ProjectiveBasis::from_unitary_columns(dims, &u).expect("Haar unitary columns are orthonormal")
}

/// Hilbert–Schmidt-distributed mixed state ρ = GG†/tr(GG†) for Ginibre G.
pub fn random_density(dims: BipartiteDims, rng: &mut impl Rng) -> DensityMatrix {
    let g = ginibre(dims.total(), rng);
    let m = &g * g.adjoint();
    let trace: f64 = (0..dims.total()).map(|i| m[(i, i)].re).sum();
    DensityMatrix::new(dims, m.unscale(trace)).expect("Wishart matrix is a valid density matrix")
}

/// One trial of the random-state/random-basis experiment: input and output
/// negativity for a Haar ket measured along a Haar basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GainSample {
    pub n_i: f64,
    pub n_f: f64,
}

impl GainSample {
    pub fn gain(&self) -> f64 {
        self.n_f - self.n_i
    }
}

/// Trial i draws the ket and then the basis from stream i.
fn sample_trial(config: &SamplerConfig, stream: u64) -> GainSample {
    let mut rng = trial_rng(config.seed, stream);
    let dims = config.dims();
    let phi = haar_ket(dims, &mut rng);
    let basis = haar_basis(dims, &mut rng);
    let out = apply_nonselective(&basis, &DensityMatrix::pure(&phi))
        .expect("sampled dims always match");
    GainSample {
        n_i: pure_negativity(&phi),
        n_f: negativity(&out),
    }
}

/// Gain scatter of `trials` independent (state, basis) pairs, in trial
/// order (streams 0..trials).
pub fn gain_scatter(config: &SamplerConfig) -> Result<Vec<GainSample>> {
    config.validate()?;
    Ok((0..config.trials)
        .into_par_iter()
        .map(|i| sample_trial(config, i as u64))
        .collect())
}

/// Estimated probability that a random measurement increases the negativity
/// of a random pure state, with a 95% Wilson confidence interval.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct GainProbability {
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub events: u64,
    pub trials: usize,
}

pub fn gain_probability(config: &SamplerConfig) -> Result<GainProbability> {
    config.validate()?;
    if config.trials < 10_000 {
        return Err(Error::Precondition(
            "gain probability estimation needs at least 10^4 trials".into(),
        ));
    }
    let events: u64 = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let s = sample_trial(config, i as u64);
            u64::from(s.n_f > s.n_i + GAIN_THRESHOLD)
        })
        .sum();

    let n = config.trials as f64;
    let p = events as f64 / n;
    let z = 1.959963984540054_f64;
    let denom = 1.0 + z * z / n;
    let center = (p + z * z / (2.0 * n)) / denom;
    let half = z * ((p * (1.0 - p) + z * z / (4.0 * n)) / n).sqrt() / denom;
    Ok(GainProbability {
        estimate: p,
        ci_low: (center - half).max(0.0),
        ci_high: (center + half).min(1.0),
        events,
        trials: config.trials,
    })
}

/// Uniform histogram over [0, max] with fixed bin count.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    max: f64,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    pub fn new(max: f64, bins: usize) -> Result<Self> {
        if !(max > 0.0) {
            return Err(Error::OutOfRange {
                name: "max".into(),
                value: max,
                range: "(0, ∞)".into(),
            });
        }
        if bins < 2 {
            return Err(Error::OutOfRange {
                name: "bins".into(),
                value: bins as f64,
                range: "[2, ∞)".into(),
            });
        }
        Ok(Self {
            max,
            counts: vec![0; bins],
            total: 0,
        })
    }

    /// Values outside [0, max] land in the edge bins.
    pub fn record(&mut self, value: f64) {
        let bins = self.counts.len();
        let idx = ((value.max(0.0) / self.max) * bins as f64) as usize;
        self.counts[idx.min(bins - 1)] += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.counts.len() != other.counts.len() || self.max != other.max {
            return Err(Error::BinningMismatch);
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.total += other.total;
        Ok(())
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Left and right edge of bin k.
    pub fn bin_range(&self, k: usize) -> (f64, f64) {
        let w = self.max / self.counts.len() as f64;
        (k as f64 * w, (k + 1) as f64 * w)
    }

    /// Normalized frequencies; all zero while the histogram is empty.
    pub fn frequencies(&self) -> Vec<f64> {
        if self.total == 0 {
            return vec![0.0; self.counts.len()];
        }
        let t = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / t).collect()
    }
}

/// L1 distance Σ|p_k − q_k| between normalized histograms (0 for identical,
/// 2 for disjoint); both must share the binning.
pub fn statistical_distance(p: &Histogram, q: &Histogram) -> Result<f64> {
    if p.bins() != q.bins() || p.max != q.max {
        return Err(Error::BinningMismatch);
    }
    Ok(p.frequencies()
        .iter()
        .zip(q.frequencies())
        .map(|(a, b)| (a - b).abs())
        .sum())
}

/// Overlap Σ min(p_k, q_k) between normalized histograms (1 for identical,
/// 0 for disjoint).
pub fn overlap(p: &Histogram, q: &Histogram) -> Result<f64> {
    if p.bins() != q.bins() || p.max != q.max {
        return Err(Error::BinningMismatch);
    }
    Ok(p.frequencies()
        .iter()
        .zip(q.frequencies())
        .map(|(a, b)| a.min(b))
        .sum())
}

/// Post-measurement negativity histograms: conditional on one fixed input,
/// unconditional over random inputs, plus the input-negativity histogram of
/// the same random inputs.
#[derive(Clone, Debug)]
pub struct Distributions {
    pub conditional: Histogram,
    pub unconditional: Histogram,
    pub inputs: Histogram,
}

/// Stream layout: 0 draws the fixed input when none is supplied; streams
/// 1..=trials drive the conditional bases; streams trials+1..=2·trials drive
/// the unconditional (input, basis) pairs.
pub fn negativity_distributions(
    config: &SamplerConfig,
    input: Option<&Ket>,
) -> Result<Distributions> {
    config.validate()?;
    let dims = config.dims();
    let phi = match input {
        Some(ket) => {
            if ket.dims() != dims {
                return Err(Error::DimensionMismatch(format!(
                    "input is {}×{}, config wants {}×{}",
                    ket.dims().d1,
                    ket.dims().d2,
                    dims.d1,
                    dims.d2
                )));
            }
            ket.clone()
        }
        None => haar_ket(dims, &mut trial_rng(config.seed, 0)),
    };

    let conditional_values: Vec<f64> = (0..config.trials)
        .into_par_iter()
        .map(|j| {
            let mut rng = trial_rng(config.seed, 1 + j as u64);
            let basis = haar_basis(dims, &mut rng);
            let out = apply_nonselective(&basis, &DensityMatrix::pure(&phi))
                .expect("sampled dims always match");
            negativity(&out)
        })
        .collect();

    let offset = 1 + config.trials as u64;
    let unconditional_values: Vec<(f64, f64)> = (0..config.trials)
        .into_par_iter()
        .map(|j| {
            let s = sample_trial(config, offset + j as u64);
            (s.n_i, s.n_f)
        })
        .collect();

    let cap = config.negativity_cap();
    let mut conditional = Histogram::new(cap, config.bins)?;
    let mut unconditional = Histogram::new(cap, config.bins)?;
    let mut inputs = Histogram::new(cap, config.bins)?;
    for v in conditional_values {
        conditional.record(v);
    }
    for (n_i, n_f) in unconditional_values {
        inputs.record(n_i);
        unconditional.record(n_f);
    }
    Ok(Distributions {
        conditional,
        unconditional,
        inputs,
    })
}

/// Mean over random inputs of the L1 distance between the conditional
/// post-measurement histogram of that input and the pooled histogram over
/// all inputs. `trials` counts both the inputs and the bases per input.
/// Stream layout: input i draws from stream i·(trials+1), its bases from
/// streams i·(trials+1)+1+j.
pub fn mean_statistical_distance(config: &SamplerConfig) -> Result<f64> {
    config.validate()?;
    let dims = config.dims();
    let cap = config.negativity_cap();
    let stride = config.trials as u64 + 1;

    let conditionals: Vec<Histogram> = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(config.seed, i as u64 * stride);
            let phi = haar_ket(dims, &mut rng);
            let rho = DensityMatrix::pure(&phi);
            let mut hist =
                Histogram::new(cap, config.bins).expect("config validated");
            for j in 0..config.trials {
                let mut basis_rng =
                    trial_rng(config.seed, i as u64 * stride + 1 + j as u64);
                let basis = haar_basis(dims, &mut basis_rng);
                let out = apply_nonselective(&basis, &rho)
                    .expect("sampled dims always match");
                hist.record(negativity(&out));
            }
            hist
        })
        .collect();

    let mut pooled = Histogram::new(cap, config.bins)?;
    for hist in &conditionals {
        pooled.merge(hist)?;
    }
    let sum: f64 = conditionals
        .iter()
        .map(|hist| statistical_distance(hist, &pooled).expect("shared binning"))
        .sum();
    Ok(sum / config.trials as f64)
}
