//! Positivity of candidate metrics and the biorthogonal spectral representation
//! `Θ = Σ_n t_n |ψ_n⟩⟩⟨⟨ψ_n|`.
//!
//! Right eigenvectors `ψ_n` of `H` carry unit norm and a positive first
//! nonzero component; left eigenvectors `ψ̃_n` (eigenvectors of `Hᵀ`) are
//! scaled so that `ψ̃_nᵀ ψ_n = 1`. With that convention `Θ ψ_n = t_n ψ̃_n`,
//! hence `t_n = ψ_nᵀ Θ ψ_n`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::closedform::{basis_family, combine, MetricParams};
use crate::error::{Error, Result};
use crate::hamiltonian::{validate_size, HamiltonianSpec, REALITY_TOL};
use crate::linalg::{eigs_general, eigs_symmetric, inverse_iteration, Matrix, SYMMETRY_TOL};

/// A metric counts as positive when its smallest eigenvalue exceeds this.
pub const POSITIVITY_MARGIN: f64 = 1e-10;
/// Smallest eigenvalues within this band of zero are flagged as near the boundary.
pub const BOUNDARY_BAND: f64 = 1e-8;
/// Relative intertwining residual accepted by [`weights_from_theta`].
pub const MEMBERSHIP_TOL: f64 = 1e-8;
/// Eigenvalues closer than this are treated as degenerate.
const DEGENERACY_GAP: f64 = 1e-9;

#[derive(Debug, Clone, Serialize)]
pub struct BiorthogonalSystem {
    pub n: usize,
    pub lambda: f64,
    /// Ascending.
    pub energies: Vec<f64>,
    pub right_vectors: Vec<Vec<f64>>,
    pub left_vectors: Vec<Vec<f64>>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn fix_sign(v: &mut [f64]) {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * scale) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub fn biorthogonal_system(spec: &HamiltonianSpec) -> Result<BiorthogonalSystem> {
    let lambda = spec.lambda();
    if !(lambda.abs() < 1.0) {
        return Err(Error::SpectralDegeneracy(format!(
            "coupling {lambda} lies outside (-1, 1)"
        )));
    }
    let h = spec.matrix();
    let ht = h.transpose();
    let eigenvalues = eigs_general(&h)?;
    if let Some(z) = eigenvalues.iter().find(|z| z.im.abs() > REALITY_TOL) {
        return Err(Error::SpectralDegeneracy(format!("complex eigenvalue {z}")));
    }
    let mut energies: Vec<f64> = eigenvalues.iter().map(|z| z.re).collect();
    energies.sort_by(f64::total_cmp);
    if let Some(w) = energies.windows(2).find(|w| w[1] - w[0] < DEGENERACY_GAP) {
        return Err(Error::SpectralDegeneracy(format!(
            "eigenvalues {} and {} coincide",
            w[0], w[1]
        )));
    }

    let mut right_vectors = Vec::with_capacity(energies.len());
    let mut left_vectors = Vec::with_capacity(energies.len());
    for &e in &energies {
        let mut right = inverse_iteration(&h, e)?;
        fix_sign(&mut right);
        let left = inverse_iteration(&ht, e)?;
        let overlap = dot(&left, &right);
        if overlap.abs() < 1e-14 {
            return Err(Error::SpectralDegeneracy(format!(
                "vanishing left-right overlap at E = {e}"
            )));
        }
        left_vectors.push(left.iter().map(|x| x / overlap).collect());
        right_vectors.push(right);
    }
    Ok(BiorthogonalSystem {
        n: spec.n(),
        lambda,
        energies,
        right_vectors,
        left_vectors,
    })
}

impl BiorthogonalSystem {
    /// Largest `|ψ̃_mᵀ ψ_n − δ_mn|`.
    pub fn biorthogonality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (m, left) in self.left_vectors.iter().enumerate() {
            for (n, right) in self.right_vectors.iter().enumerate() {
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((dot(left, right) - target).abs());
            }
        }
        worst
    }

    /// Largest relative residual of `Hψ = Eψ` and `Hᵀψ̃ = Eψ̃`.
    pub fn eigen_residual(&self) -> f64 {
        let h = HamiltonianSpec::float(self.n, self.lambda)
            .expect("validated on construction")
            .matrix();
        let ht = h.transpose();
        let rel = |m: &Matrix<f64>, v: &[f64], e: f64| {
            let mv = m.mul_vec(v).expect("sizes agree");
            let num = mv.iter().zip(v).fold(0.0f64, |acc, (a, b)| acc.max((a - e * b).abs()));
            let den = v.iter().fold(0.0f64, |acc, x| acc.max(x.abs())) * e.abs().max(1.0);
            num / den
        };
        self.energies
            .iter()
            .enumerate()
            .map(|(i, &e)| rel(&h, &self.right_vectors[i], e).max(rel(&ht, &self.left_vectors[i], e)))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralWeights {
    pub t: Vec<f64>,
}

impl SpectralWeights {
    pub fn new(t: Vec<f64>) -> Self {
        Self { t }
    }

    pub fn all_positive(&self, margin: f64) -> bool {
        self.t.iter().all(|&t| t > margin)
    }
}

/// `Θ = Σ_n t_n ψ̃_n ψ̃_nᵀ`.
pub fn theta_from_weights(system: &BiorthogonalSystem, weights: &SpectralWeights) -> Result<Matrix<f64>> {
    let n = system.n;
    if weights.t.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: weights.t.len(),
        });
    }
    let mut theta = Matrix::<f64>::zeros(n, n);
    for (left, &t) in system.left_vectors.iter().zip(&weights.t) {
        for i in 0..n {
            for k in 0..n {
                theta[(i, k)] += t * left[i] * left[k];
            }
        }
    }
    Ok(theta)
}

/// Spectral weights of a metric: `t_n = ψ_nᵀ Θ ψ_n`.
pub fn weights_from_theta(system: &BiorthogonalSystem, theta: &Matrix<f64>) -> Result<SpectralWeights> {
    let n = theta.ensure_square()?;
    if n != system.n {
        return Err(Error::SizeMismatch {
            expected: system.n,
            actual: n,
        });
    }
    let spec = HamiltonianSpec::float(system.n, system.lambda)?;
    let scale = theta.max_abs().max(1.0);
    let residual = theta.intertwining_residual(&spec.matrix())?.max_abs();
    if residual > MEMBERSHIP_TOL * scale || theta.max_asymmetry() > SYMMETRY_TOL * scale {
        return Err(Error::NonMember(residual));
    }
    let t = system
        .right_vectors
        .iter()
        .map(|psi| dot(psi, &theta.mul_vec(psi).expect("sizes agree")))
        .collect();
    Ok(SpectralWeights { t })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub positive: bool,
    pub min_eigenvalue: f64,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub near_boundary: bool,
}

/// Eigenvalue-based positivity verdict for a symmetric matrix.
pub fn positivity(theta: &Matrix<f64>) -> Result<PositivityReport> {
    let scale = theta.max_abs().max(1.0);
    let eigenvalues = eigs_symmetric(theta, SYMMETRY_TOL * scale, false)?.values;
    let min_eigenvalue = eigenvalues.first().copied().unwrap_or(f64::NAN);
    Ok(PositivityReport {
        positive: min_eigenvalue > POSITIVITY_MARGIN,
        min_eigenvalue,
        near_boundary: min_eigenvalue.abs() <= BOUNDARY_BAND * scale,
        eigenvalues,
    })
}

/// Left-hand sides of the closed-form positivity inequalities; the metric
/// is positive iff every value is strictly positive.
///
/// * `N = 2`, `|λ| < 1`: `α_1` and `α_1²(1 − λ²) − α_2²`.
/// * `N = 4`, `λ = 0`: `2α_1 − 2α_4 + α_3 − α_2 ± √5(α_3 − α_2)` and
///   `2α_1 + 2α_4 + α_3 + α_2 ± √5(α_2 + α_3)`, which are twice the
///   eigenvalues of `Θ`.
pub fn closed_form_inequalities(n: usize, lambda: f64, params: &MetricParams) -> Result<Vec<f64>> {
    if params.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: params.len(),
        });
    }
    let a = params.alpha();
    match n {
        2 if lambda.abs() < 1.0 => Ok(vec![a[0], a[0] * a[0] * (1.0 - lambda * lambda) - a[1] * a[1]]),
        4 if lambda == 0.0 => {
            let r5 = 5f64.sqrt();
            let odd = 2.0 * a[0] - 2.0 * a[3] + a[2] - a[1];
            let even = 2.0 * a[0] + 2.0 * a[3] + a[2] + a[1];
            Ok(vec![
                odd + r5 * (a[2] - a[1]),
                odd - r5 * (a[2] - a[1]),
                even + r5 * (a[1] + a[2]),
                even - r5 * (a[1] + a[2]),
            ])
        }
        _ => Err(Error::InvalidArgument(format!(
            "closed-form positivity is available for N = 2 with |λ| < 1 and N = 4 with λ = 0, not N = {n}, λ = {lambda}"
        ))),
    }
}

pub fn positivity_closed_form(n: usize, lambda: f64, params: &MetricParams) -> Result<bool> {
    Ok(closed_form_inequalities(n, lambda, params)?.iter().all(|&v| v > 0.0))
}

/// Whether a closed-form inequality set exists for `(n, λ)`.
pub fn has_closed_form(n: usize, lambda: f64) -> bool {
    (n == 2 && lambda.abs() < 1.0) || (n == 4 && lambda == 0.0)
}

/// `α` uniform on `[−1, 1]^N`, divided by `α_1` when `α_1 > 0`.
pub fn sample_alpha<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut alpha: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    if alpha[0] > 0.0 {
        let a1 = alpha[0];
        alpha.iter_mut().for_each(|x| *x /= a1);
    }
    alpha
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleRecord {
    pub index: usize,
    pub alpha: Vec<f64>,
    pub positive: bool,
    pub min_eigenvalue: f64,
    pub near_boundary: bool,
    /// Verdict of the closed-form inequalities, where available.
    pub closed_form: Option<bool>,
    /// Smallest |inequality value|, where available.
    pub closed_form_margin: Option<f64>,
    /// Verdict of the spectral-weight criterion.
    pub weights_positive: Option<bool>,
}

impl SampleRecord {
    /// Closed-form and eigenvalue verdicts agree, or the sample sits within `margin` of the boundary.
    pub fn closed_form_agrees(&self, margin: f64) -> Option<bool> {
        let cf = self.closed_form?;
        let near = self.closed_form_margin.unwrap_or(0.0) <= margin || self.min_eigenvalue.abs() <= margin;
        Some(near || cf == self.positive)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionSample {
    pub n: usize,
    pub lambda: f64,
    pub seed: u64,
    pub fraction_positive: f64,
    pub samples: Vec<SampleRecord>,
}

fn evaluate_sample(
    index: usize,
    alpha: Vec<f64>,
    lambda: f64,
    family: &[crate::closedform::MetricBasisElement],
    system: Option<&BiorthogonalSystem>,
) -> Result<SampleRecord> {
    let n = alpha.len();
    let params = MetricParams::new(alpha);
    let theta = combine(family, lambda, &params)?;
    let report = positivity(&theta)?;
    let (closed_form, closed_form_margin) = if has_closed_form(n, lambda) {
        let values = closed_form_inequalities(n, lambda, &params)?;
        let margin = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        (Some(values.iter().all(|&v| v > 0.0)), Some(margin))
    } else {
        (None, None)
    };
    let weights_positive = match system {
        Some(s) => Some(weights_from_theta(s, &theta)?.all_positive(POSITIVITY_MARGIN)),
        None => None,
    };
    Ok(SampleRecord {
        index,
        alpha: params.alpha().to_vec(),
        positive: report.positive,
        min_eigenvalue: report.min_eigenvalue,
        near_boundary: report.near_boundary,
        closed_form,
        closed_form_margin,
        weights_positive,
    })
}

/// Seeded exploration of the positivity region in `α`-space at fixed `λ`.
pub fn sample_positivity_region(n: usize, lambda: f64, seed: u64, count: usize) -> Result<RegionSample> {
    validate_size(n)?;
    if count == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let family = basis_family(n)?;
    let spec = HamiltonianSpec::float(n, lambda)?;
    let system = biorthogonal_system(&spec).ok();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas: Vec<Vec<f64>> = (0..count).map(|_| sample_alpha(&mut rng, n)).collect();

    let eval = |(i, alpha): (usize, Vec<f64>)| evaluate_sample(i, alpha, lambda, &family, system.as_ref());
    #[cfg(feature = "parallel")]
    let samples: Result<Vec<SampleRecord>> = {
        use rayon::prelude::*;
        alphas.into_par_iter().enumerate().map(eval).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let samples: Result<Vec<SampleRecord>> = alphas.into_iter().enumerate().map(eval).collect();
    let samples = samples?;

    let positives = samples.iter().filter(|s| s.positive).count();
    Ok(RegionSample {
        n,
        lambda,
        seed,
        fraction_positive: positives as f64 / count as f64,
        samples,
    })
}
