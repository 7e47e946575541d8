//! The tridiagonal lattice Hamiltonians `H⁽ᴺ⁾(λ)` and their spectra.
//!
//! `H` has 2 on the diagonal and −1 on both off-diagonals, except for the
//! middle bond: with `K = N/2` (1-based), entry `(K, K+1)` is `−1−λ` and
//! entry `(K+1, K)` is `−1+λ`. Only even sizes are defined.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigs_general, to_f64, ExactScalar, IntPolynomial, Matrix, Ring};

/// Imaginary parts up to this size count as real.
pub const REALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Coupling {
    Exact(ExactScalar),
    Float(f64),
}

/// Size and coupling of one member of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    n: usize,
    lambda: Coupling,
}

pub fn validate_size(n: usize) -> Result<()> {
    if n >= 2 && n % 2 == 0 {
        Ok(())
    } else {
        Err(Error::Dimension(n))
    }
}

impl HamiltonianSpec {
    pub fn exact(n: usize, lambda: ExactScalar) -> Result<Self> {
        validate_size(n)?;
        Ok(Self {
            n,
            lambda: Coupling::Exact(lambda),
        })
    }

    pub fn float(n: usize, lambda: f64) -> Result<Self> {
        validate_size(n)?;
        if !lambda.is_finite() {
            return Err(Error::InvalidArgument(format!("coupling must be finite, got {lambda}")));
        }
        Ok(Self {
            n,
            lambda: Coupling::Float(lambda),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Middle index `K = N/2`.
    pub fn k(&self) -> usize {
        self.n / 2
    }

    pub fn coupling(&self) -> &Coupling {
        &self.lambda
    }

    pub fn lambda(&self) -> f64 {
        match &self.lambda {
            Coupling::Exact(x) => to_f64(x),
            Coupling::Float(x) => *x,
        }
    }

    pub fn lambda_exact(&self) -> Option<&ExactScalar> {
        match &self.lambda {
            Coupling::Exact(x) => Some(x),
            Coupling::Float(_) => None,
        }
    }

    /// `φ ∈ (0, π)` with `cos φ = λ`, defined only for `|λ| < 1`.
    pub fn phi(&self) -> Option<f64> {
        let lambda = self.lambda();
        (lambda.abs() < 1.0).then(|| lambda.acos())
    }

    pub fn matrix(&self) -> Matrix<f64> {
        tridiagonal_model(self.n, &self.lambda())
    }

    pub fn exact_matrix(&self) -> Option<Matrix<ExactScalar>> {
        self.lambda_exact().map(|x| tridiagonal_model(self.n, x))
    }
}

fn tridiagonal_model<T: Ring>(n: usize, lambda: &T) -> Matrix<T> {
    let k = n / 2;
    let two = T::one() + T::one();
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            two.clone()
        } else if i + 1 == k && j == k {
            -T::one() - lambda.clone()
        } else if i == k && j + 1 == k {
            -T::one() + lambda.clone()
        } else if i.abs_diff(j) == 1 {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// `H⁽ᴺ⁾(λ)` over any scalar ring; exact whenever `λ` is.
pub fn build_hamiltonian<T: Ring>(n: usize, lambda: &T) -> Result<Matrix<T>> {
    validate_size(n)?;
    Ok(tridiagonal_model(n, lambda))
}

/// `H⁽ᴺ⁾` with polynomial entries in the symbol `λ`.
pub fn symbolic_hamiltonian(n: usize) -> Result<Matrix<IntPolynomial>> {
    build_hamiltonian(n, &IntPolynomial::lambda())
}

/// Closed-form energies for `N = 2` and `N = 4`, ascending.
pub fn closed_form_spectrum(n: usize, lambda: f64) -> Result<Vec<f64>> {
    validate_size(n)?;
    if !(lambda.abs() < 1.0) {
        return Err(Error::CouplingDomain(lambda));
    }
    let l2 = lambda * lambda;
    let mut values = match n {
        2 => {
            let s = (1.0 - l2).sqrt();
            vec![2.0 - s, 2.0 + s]
        }
        4 => {
            let inner = (5.0 - 6.0 * l2 + l2 * l2).sqrt();
            let mut v = Vec::with_capacity(4);
            for outer in [-1.0, 1.0] {
                let r = 0.5 * (6.0 - 2.0 * l2 + outer * 2.0 * inner).max(0.0).sqrt();
                v.push(2.0 - r);
                v.push(2.0 + r);
            }
            v
        }
        _ => return Err(Error::UnsupportedSize(n)),
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub lambda: f64,
    /// Sorted by real part.
    pub eigenvalues: Vec<Complex64>,
    pub all_real: bool,
    pub max_imag: f64,
}

impl SpectrumReport {
    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }
}

/// Numerical spectrum of `H⁽ᴺ⁾(λ)`.
pub fn spectrum(n: usize, lambda: f64) -> Result<SpectrumReport> {
    let h = HamiltonianSpec::float(n, lambda)?.matrix();
    let eigenvalues = eigs_general(&h)?;
    let max_imag = eigenvalues.iter().fold(0.0, |m: f64, z| m.max(z.im.abs()));
    Ok(SpectrumReport {
        lambda,
        eigenvalues,
        all_real: max_imag <= REALITY_TOL,
        max_imag,
    })
}

/// One [`SpectrumReport`] per grid point, in grid order.
pub fn reality_scan(n: usize, lambdas: &[f64]) -> Result<Vec<SpectrumReport>> {
    validate_size(n)?;
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        lambdas.par_iter().map(|&l| spectrum(n, l)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        lambdas.iter().map(|&l| spectrum(n, l)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{exact, exact_int};

    #[test]
    fn two_by_two_exact() {
        let h = build_hamiltonian(2, &exact(1, 2)).unwrap();
        assert_eq!(h.row(0), &[exact_int(2), exact(-3, 2)]);
        assert_eq!(h.row(1), &[exact(-1, 2), exact_int(2)]);
    }

    #[test]
    fn six_by_six_pattern() {
        let h = symbolic_hamiltonian(6).unwrap();
        assert_eq!(h[(2, 3)], IntPolynomial::from_i64s(&[-1, -1]));
        assert_eq!(h[(3, 2)], IntPolynomial::from_i64s(&[-1, 1]));
        assert_eq!(h[(1, 2)], IntPolynomial::constant(-1));
        assert_eq!(h[(0, 2)], IntPolynomial::constant(0));
        assert_eq!(h[(5, 5)], IntPolynomial::constant(2));
    }

    #[test]
    fn free_case_is_symmetric() {
        let h = build_hamiltonian(4, &0.0).unwrap();
        assert!(h.is_symmetric());
        assert_eq!(h[(1, 2)], -1.0);
    }

    #[test]
    fn odd_and_zero_sizes_rejected() {
        assert_eq!(build_hamiltonian(3, &0.0).unwrap_err(), Error::Dimension(3));
        assert!(HamiltonianSpec::float(0, 0.0).is_err());
    }

    #[test]
    fn phi_parametrization() {
        let spec = HamiltonianSpec::float(4, 0.6).unwrap();
        assert!((spec.phi().unwrap().cos() - 0.6).abs() < 1e-12);
        assert!(HamiltonianSpec::float(4, 1.2).unwrap().phi().is_none());
        assert_eq!(spec.k(), 2);
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(closed_form_spectrum(2, 0.0).unwrap(), vec![1.0, 3.0]);
        let v = closed_form_spectrum(2, 0.6).unwrap();
        assert!((v[0] - 1.2).abs() < 1e-15 && (v[1] - 2.8).abs() < 1e-15);
        let s5 = 5f64.sqrt();
        let want = [2.0 - (s5 + 1.0) / 2.0, 2.0 - (s5 - 1.0) / 2.0, 2.0 + (s5 - 1.0) / 2.0, 2.0 + (s5 + 1.0) / 2.0];
        for (a, b) in closed_form_spectrum(4, 0.0).unwrap().iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_form_errors() {
        assert_eq!(closed_form_spectrum(6, 0.1).unwrap_err(), Error::UnsupportedSize(6));
        assert!(matches!(closed_form_spectrum(4, 1.0), Err(Error::CouplingDomain(_))));
    }

    #[test]
    fn closed_form_near_exceptional_point() {
        let v = closed_form_spectrum(4, 1.0 - 1e-12).unwrap();
        for (a, b) in v.iter().zip([1.0, 1.0, 3.0, 3.0]) {
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn complexification_beyond_one() {
        let r = spectrum(4, 1.2).unwrap();
        assert!(!r.all_real);
        assert!(r.max_imag > 1e-3);
        let scan = reality_scan(4, &[-0.9, 0.0, 0.9]).unwrap();
        assert!(scan.iter().all(|r| r.all_real));
        assert_eq!(scan[2].lambda, 0.9);
    }

    #[test]
    fn free_six_spectrum() {
        let r = spectrum(6, 0.0).unwrap();
        for (k, z) in r.eigenvalues.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / 7.0).cos();
            assert!((z.re - want).abs() < 1e-12);
        }
    }
}
