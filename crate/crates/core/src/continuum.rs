//! Lattice bookkeeping and continuum-limit checks.
//!
//! `H⁽ᴺ⁾` is read as `h²` times a discretized Schrödinger operator on
//! `[−1, 1]` with `h = 2/(N+1)` and the interior points `x_k = −1 + k h`.
//! A matrix eigenvalue is then `F = h²E`, and with `2 cos ε = 2 − F` the
//! free motion away from the middle bond is `ψ_k ∝ sin(kε)` on the left and
//! `ψ_k ∝ sin((N+1−k)ε)` on the right.
//!
//! The matching condition at the origin relates one-sided values and
//! derivatives:
//!
//! ```text
//! h/2 [−(1+λ)  F+1 ] [ψ_R′(0)]   [1+λ  F−1] [ψ_R(0)]
//!     [−(F+1)  1−λ ] [ψ_L′(0)] = [F−1  1−λ] [ψ_L(0)]
//! ```
//!
//! The one-sided data are read off the free-motion sine fitted to each half
//! of a computed eigenvector, evaluated at the midpoint `x = 0` of the
//! central bond.

use serde::Serialize;

use crate::analysis::{positivity, PositivityReport};
use crate::closedform::ansatz_lambda0;
use crate::error::{Error, Result};
use crate::hamiltonian::{validate_size, HamiltonianSpec, REALITY_TOL};
use crate::linalg::{eigs_general, inverse_iteration, Matrix, Ring};

/// Relative growth tolerated between consecutive central amplitudes.
pub const AMPLITUDE_TOLERANCE: f64 = 0.10;
/// Smallest size accepted by the matching-condition analysis.
pub const MIN_MATCHING_SIZE: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeGrid {
    n: usize,
}

impl LatticeGrid {
    pub fn new(n: usize) -> Result<Self> {
        validate_size(n)?;
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        2.0 / (self.n as f64 + 1.0)
    }

    /// `x_k` for `k = 0..=n+1`; the endpoints are exactly `∓1`.
    pub fn point(&self, k: usize) -> f64 {
        if k == 0 {
            -1.0
        } else if k == self.n + 1 {
            1.0
        } else {
            -1.0 + k as f64 * self.h()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..=self.n + 1).map(|k| self.point(k)).collect()
    }
}

/// One eigenstate prepared for the matching-condition analysis.
#[derive(Debug, Clone, Serialize)]
pub struct MatchingData {
    pub n: usize,
    pub lambda: f64,
    pub h: f64,
    /// Continuum energy `E = F/h²`.
    pub energy: f64,
    /// Matrix eigenvalue `F = h²E`.
    pub f: f64,
    /// `ε ∈ (0, π)` with `2 cos ε = 2 − F`.
    pub epsilon: f64,
    /// Eigenvector on the interior points, scaled to `max |ψ_k| = 1`.
    pub psi: Vec<f64>,
    pub psi_left: f64,
    pub dpsi_left: f64,
    pub psi_right: f64,
    pub dpsi_right: f64,
}

fn least_squares_amplitude(values: &[f64], shape: &[f64]) -> f64 {
    let num: f64 = values.iter().zip(shape).map(|(v, s)| v * s).sum();
    let den: f64 = shape.iter().map(|s| s * s).sum();
    num / den
}

/// Ascending real eigenvalue number `state` of `H`, with its eigenvector.
fn real_eigenpair(spec: &HamiltonianSpec, state: usize) -> Result<(f64, Vec<f64>)> {
    let n = spec.n();
    if state >= n {
        return Err(Error::InvalidArgument(format!("state {state} does not exist for N = {n}")));
    }
    let h = spec.matrix();
    let eigenvalues = eigs_general(&h)?;
    let z = eigenvalues[state];
    if z.im.abs() > REALITY_TOL {
        return Err(Error::SpectralDegeneracy(format!("state {state} has complex energy {z}")));
    }
    let mut psi = inverse_iteration(&h, z.re)?;
    let peak = psi.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
    psi.iter_mut().for_each(|x| *x /= peak);
    Ok((z.re, psi))
}

pub fn matching_data(spec: &HamiltonianSpec, state: usize) -> Result<MatchingData> {
    let (n, lambda) = (spec.n(), spec.lambda());
    if !(lambda.abs() < 1.0) {
        return Err(Error::CouplingDomain(lambda));
    }
    if n < MIN_MATCHING_SIZE {
        return Err(Error::InvalidArgument(format!(
            "matching analysis needs N ≥ {MIN_MATCHING_SIZE}, got {n}"
        )));
    }
    let grid = LatticeGrid::new(n)?;
    let h = grid.h();
    let (f, psi) = real_eigenpair(spec, state)?;
    let k_mid = n / 2;
    let epsilon = (1.0 - f / 2.0).clamp(-1.0, 1.0).acos();

    let left_shape: Vec<f64> = (1..=k_mid).map(|k| (k as f64 * epsilon).sin()).collect();
    let right_shape: Vec<f64> = (k_mid + 1..=n).map(|k| ((n + 1 - k) as f64 * epsilon).sin()).collect();
    let a = least_squares_amplitude(&psi[..k_mid], &left_shape);
    let b = least_squares_amplitude(&psi[k_mid..], &right_shape);

    let theta = epsilon * (k_mid as f64 + 0.5);
    let (sin_t, cos_t) = theta.sin_cos();
    Ok(MatchingData {
        n,
        lambda,
        h,
        energy: f / (h * h),
        f,
        epsilon,
        psi,
        psi_left: a * sin_t,
        dpsi_left: a * epsilon / h * cos_t,
        psi_right: b * sin_t,
        dpsi_right: -b * epsilon / h * cos_t,
    })
}

impl MatchingData {
    /// Both sides of the matching condition, `(lhs, rhs)`.
    pub fn sides(&self) -> ([f64; 2], [f64; 2]) {
        let (l, f) = (self.lambda, self.f);
        let half_h = self.h / 2.0;
        let lhs = [
            half_h * (-(1.0 + l) * self.dpsi_right + (f + 1.0) * self.dpsi_left),
            half_h * (-(f + 1.0) * self.dpsi_right + (1.0 - l) * self.dpsi_left),
        ];
        let rhs = [
            (1.0 + l) * self.psi_right + (f - 1.0) * self.psi_left,
            (f - 1.0) * self.psi_right + (1.0 - l) * self.psi_left,
        ];
        (lhs, rhs)
    }

    /// `‖lhs − rhs‖_∞ / max(‖lhs‖_∞, ‖rhs‖_∞)`.
    pub fn residual(&self) -> f64 {
        let (lhs, rhs) = self.sides();
        let inf = |v: [f64; 2]| v[0].abs().max(v[1].abs());
        let diff = inf([lhs[0] - rhs[0], lhs[1] - rhs[1]]);
        let scale = inf(lhs).max(inf(rhs));
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    /// `(|ψ_K| + |ψ_{K+1}|) / max |ψ|`.
    pub fn central_amplitude(&self) -> f64 {
        central_amplitude(&self.psi)
    }
}

fn central_amplitude(psi: &[f64]) -> f64 {
    let k = psi.len() / 2;
    let peak = psi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    (psi[k - 1].abs() + psi[k].abs()) / peak
}

/// Relative residual of the matching condition for one eigenstate (0 = ground state).
pub fn matching_residual(spec: &HamiltonianSpec, state: usize) -> Result<f64> {
    Ok(matching_data(spec, state)?.residual())
}

/// The two central relations
///
/// ```text
/// (1+λ) ψ_{K+1} − 2cos ε ψ_K + ψ_{K−1}
/// ψ_{K+2} − 2cos ε ψ_{K+1} + (1−λ) ψ_K
/// ```
///
/// evaluated on `psi` (1-based `ψ_k` is `psi[k−1]`).
pub fn central_relations<T: Ring>(psi: &[T], lambda: &T, two_cos_eps: &T) -> Result<[T; 2]> {
    let n = psi.len();
    if n < 4 || n % 2 != 0 {
        return Err(Error::Dimension(n));
    }
    let k = n / 2;
    let one = T::one();
    let (pkm1, pk, pk1, pk2) = (&psi[k - 2], &psi[k - 1], &psi[k], &psi[k + 1]);
    let a = (one.clone() + lambda.clone()) * pk1.clone() - two_cos_eps.clone() * pk.clone() + pkm1.clone();
    let b = pk2.clone() - two_cos_eps.clone() * pk1.clone() + (one - lambda.clone()) * pk.clone();
    Ok([a, b])
}

/// Largest absolute value of the central relations for a computed eigenpair.
pub fn central_relations_residual(spec: &HamiltonianSpec, state: usize) -> Result<f64> {
    let (f, psi) = real_eigenpair(spec, state)?;
    let [a, b] = central_relations(&psi, &spec.lambda(), &(2.0 - f))?;
    Ok(a.abs().max(b.abs()))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::SizeMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::InvalidArgument("a slope needs at least two points".into()));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidArgument("log-log fit needs positive data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("log-log fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    pub residual: f64,
    pub central_amplitude: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceSweep {
    pub lambda: f64,
    pub state: usize,
    pub rows: Vec<ConvergenceRow>,
    /// Fitted order of the residual in `h`.
    pub slope: Option<f64>,
}

fn map_sizes<T: Send>(sizes: &[usize], f: impl Fn(usize) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        sizes.par_iter().map(|&n| f(n)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        sizes.iter().map(|&n| f(n)).collect()
    }
}

/// Matching residual and central amplitude of one state over several sizes.
pub fn convergence_sweep(lambda: f64, sizes: &[usize], state: usize) -> Result<ConvergenceSweep> {
    if sizes.is_empty() {
        return Err(Error::InvalidArgument("no sizes given".into()));
    }
    let rows = map_sizes(sizes, |n| {
        let data = matching_data(&HamiltonianSpec::float(n, lambda)?, state)?;
        Ok(ConvergenceRow {
            n,
            h: data.h,
            residual: data.residual(),
            central_amplitude: data.central_amplitude(),
        })
    })?;
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let rs: Vec<f64> = rows.iter().map(|r| r.residual).collect();
    let slope = fit_loglog_slope(&hs, &rs).ok();
    Ok(ConvergenceSweep {
        lambda,
        state,
        rows,
        slope,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct OpaqueWallReport {
    pub lambda: f64,
    pub sizes: Vec<usize>,
    /// Ground-state `(|ψ_K| + |ψ_{K+1}|) / max |ψ|` per size.
    pub amplitudes: Vec<f64>,
    pub strictly_decreasing: bool,
    /// Decreasing overall, never growing by more than [`AMPLITUDE_TOLERANCE`] between sizes.
    pub decreasing_within_tolerance: bool,
}

/// Ground-state amplitude next to the middle bond as `N` grows.
pub fn opaque_wall_check(lambda: f64, sizes: &[usize]) -> Result<OpaqueWallReport> {
    if lambda == 0.0 {
        return Err(Error::InvalidArgument(
            "the opaque-wall limit is undefined for λ = 0 (free motion)".into(),
        ));
    }
    if !(lambda.abs() < 1.0) {
        return Err(Error::CouplingDomain(lambda));
    }
    if sizes.is_empty() || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("sizes must be non-empty and increasing".into()));
    }
    let amplitudes = map_sizes(sizes, |n| {
        let (_, psi) = real_eigenpair(&HamiltonianSpec::float(n, lambda)?, 0)?;
        Ok(central_amplitude(&psi))
    })?;
    let strictly_decreasing = amplitudes.windows(2).all(|w| w[1] < w[0]);
    let decreasing_within_tolerance = amplitudes
        .windows(2)
        .all(|w| w[1] <= w[0] * (1.0 + AMPLITUDE_TOLERANCE))
        && (amplitudes.len() < 2 || amplitudes[amplitudes.len() - 1] < amplitudes[0]);
    Ok(OpaqueWallReport {
        lambda,
        sizes: sizes.to_vec(),
        amplitudes,
        strictly_decreasing,
        decreasing_within_tolerance,
    })
}

/// Parameters `(F, K)` of the two-parameter free-motion metric `e^{−F}(cosh K − P sinh K)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MostafazadehParams {
    pub f_m: f64,
    pub k_m: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MostafazadehMetric {
    pub theta: Matrix<f64>,
    pub report: PositivityReport,
}

/// `e^{−F_m}(cosh K_m · M_1(0) − sinh K_m · M_N(0))`, with `M_N(0)` the lattice parity.
pub fn mostafazadeh_lattice_metric(n: usize, params: MostafazadehParams) -> Result<MostafazadehMetric> {
    let MostafazadehParams { f_m, k_m } = params;
    if !f_m.is_finite() || !k_m.is_finite() {
        return Err(Error::InvalidArgument("Mostafazadeh parameters must be finite".into()));
    }
    let identity = ansatz_lambda0(n, 1)?;
    let parity = ansatz_lambda0(n, n)?;
    let scale = (-f_m).exp();
    let (c, s) = (k_m.cosh(), k_m.sinh());
    let theta = Matrix::from_fn(n, n, |i, k| {
        scale * (c * identity[(i, k)] as f64 - s * parity[(i, k)] as f64)
    });
    let report = positivity(&theta)?;
    Ok(MostafazadehMetric { theta, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{exact, ExactScalar};
    use crate::oracle::verify_membership;

    #[test]
    fn grid_endpoints() {
        let g = LatticeGrid::new(6).unwrap();
        assert_eq!(g.point(0), -1.0);
        assert_eq!(g.point(7), 1.0);
        assert_eq!(g.points().len(), 8);
        assert!((g.h() - 2.0 / 7.0).abs() < 1e-16);
        assert!(LatticeGrid::new(5).is_err());
    }

    #[test]
    fn central_relations_are_eigen_rows() {
        for (n, state, lambda) in [(8, 0, 0.5), (12, 3, -0.2), (20, 1, 0.7)] {
            let spec = HamiltonianSpec::float(n, lambda).unwrap();
            assert!(central_relations_residual(&spec, state).unwrap() < 1e-12);
        }
    }

    #[test]
    fn central_relations_exact_rows() {
        let lambda = exact(2, 5);
        let f = exact(3, 7);
        let psi: Vec<ExactScalar> = (1..=6).map(|k| exact(k * k - 3, k + 1)).collect();
        let h = HamiltonianSpec::exact(6, lambda.clone()).unwrap().exact_matrix().unwrap();
        let hpsi = h.mul_vec(&psi).unwrap();
        let two = exact(2, 1);
        let [a, b] = central_relations(&psi, &lambda, &(two - f.clone())).unwrap();
        assert_eq!(a, -(hpsi[2].clone() - f.clone() * psi[2].clone()));
        assert_eq!(b, -(hpsi[3].clone() - f * psi[3].clone()));
    }

    #[test]
    fn matching_data_consistency() {
        let d = matching_data(&HamiltonianSpec::float(40, 0.5).unwrap(), 0).unwrap();
        assert!((d.f - d.h * d.h * d.energy).abs() < 1e-15);
        assert!((2.0 * d.epsilon.cos() - (2.0 - d.f)).abs() < 1e-12);
        // Independent NumPy evaluation of the same construction.
        assert!((d.residual() - 0.111_970_668_742_904_8).abs() < 1e-9);
    }

    #[test]
    fn matching_rejects_bad_input() {
        assert!(matching_residual(&HamiltonianSpec::float(6, 0.5).unwrap(), 0).is_err());
        assert!(matching_residual(&HamiltonianSpec::float(40, 1.0).unwrap(), 0).is_err());
        assert!(matching_residual(&HamiltonianSpec::float(40, 0.5).unwrap(), 40).is_err());
    }

    #[test]
    fn residual_shrinks_with_h() {
        let sweep = convergence_sweep(0.5, &[40, 80, 160], 0).unwrap();
        assert!(sweep.rows.windows(2).all(|w| w[1].residual < w[0].residual));
        assert!(sweep.slope.unwrap() > 1.0);
    }

    #[test]
    fn slope_fit() {
        let x = [0.1, 0.05, 0.025];
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v * v).collect();
        assert!((fit_loglog_slope(&x, &y).unwrap() - 2.0).abs() < 1e-12);
        assert!(fit_loglog_slope(&[1.0], &[1.0]).is_err());
        assert!(fit_loglog_slope(&[1.0, 2.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn opaque_wall_amplitude_decays() {
        let r = opaque_wall_check(0.5, &[20, 40, 80, 160]).unwrap();
        assert!(r.strictly_decreasing && r.decreasing_within_tolerance);
        let r = opaque_wall_check(0.9, &[20, 40]).unwrap();
        assert!(r.amplitudes[1] < r.amplitudes[0]);
        assert!(opaque_wall_check(0.0, &[20, 40]).is_err());
        assert!(opaque_wall_check(0.5, &[40, 20]).is_err());
    }

    #[test]
    fn mostafazadeh_examples() {
        let m = mostafazadeh_lattice_metric(4, MostafazadehParams { f_m: 0.0, k_m: 0.0 }).unwrap();
        assert_eq!(m.theta, Matrix::identity(4));
        let m = mostafazadeh_lattice_metric(4, MostafazadehParams { f_m: 0.0, k_m: 1.0 }).unwrap();
        let e = std::f64::consts::E;
        for (got, want) in m.report.eigenvalues.iter().zip([1.0 / e, 1.0 / e, e, e]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!(m.report.positive);
        let spec = HamiltonianSpec::float(4, 0.0).unwrap();
        let (ok, res) = verify_membership(&m.theta, &spec, 0.0).unwrap();
        assert!(ok, "residual {res}");
    }
}
