//! Brute-force metric space: every real symmetric `Θ` with `Θ·H = Hᵀ·Θ`,
//! obtained as the exact kernel of the vectorized intertwining operator.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;
use crate::linalg::{null_space, rank_of_vectors, ExactScalar, Matrix};

/// Flat numbering of the upper-triangle positions `(i, k)`, `i ≤ k`, in the
/// order `(0,0), (0,1), …, (0,n−1), (1,1), …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetricUnknowns {
    n: usize,
}

impl SymmetricUnknowns {
    pub fn new(n: usize) -> Self {
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.n * (self.n + 1) / 2
    }

    /// Flat index of `(i, k)`; order of the arguments does not matter.
    pub fn index(&self, i: usize, k: usize) -> usize {
        let (i, k) = if i <= k { (i, k) } else { (k, i) };
        i * self.n - i * i.saturating_sub(1) / 2 + (k - i)
    }

    pub fn position(&self, flat: usize) -> (usize, usize) {
        let mut rest = flat;
        for i in 0..self.n {
            let len = self.n - i;
            if rest < len {
                return (i, i + rest);
            }
            rest -= len;
        }
        panic!("flat index {flat} out of range for n = {}", self.n);
    }

    pub fn vectorize(&self, theta: &Matrix<ExactScalar>) -> Vec<ExactScalar> {
        (0..self.count())
            .map(|f| {
                let (i, k) = self.position(f);
                theta[(i, k)].clone()
            })
            .collect()
    }

    pub fn to_matrix(&self, v: &[ExactScalar]) -> Matrix<ExactScalar> {
        Matrix::from_fn(self.n, self.n, |i, k| v[self.index(i, k)].clone())
    }
}

/// Coefficient matrix `A` of `A·vec(Θ_upper) = 0`, one row per entry of
/// `Θ·H − Hᵀ·Θ` (row-major), one column per symmetric unknown.
pub fn intertwining_system(h: &Matrix<ExactScalar>) -> Result<Matrix<ExactScalar>> {
    let n = h.ensure_square()?;
    let unknowns = SymmetricUnknowns::new(n);
    let mut a: Matrix<ExactScalar> = Matrix::zeros(n * n, unknowns.count());
    for r in 0..n {
        for c in 0..n {
            let row = r * n + c;
            // (ΘH)_rc = Σ_m Θ_rm H_mc ; (HᵀΘ)_rc = Σ_m H_mr Θ_mc
            for m in 0..n {
                let hmc = &h[(m, c)];
                if !hmc.is_zero() {
                    let col = unknowns.index(r, m);
                    a[(row, col)] = a[(row, col)].clone() + hmc.clone();
                }
                let hmr = &h[(m, r)];
                if !hmr.is_zero() {
                    let col = unknowns.index(m, c);
                    a[(row, col)] = a[(row, col)].clone() - hmr.clone();
                }
            }
        }
    }
    Ok(a)
}

/// Complete linear space of real symmetric metrics-to-be for one `(N, λ)`.
#[derive(Debug, Clone)]
pub struct MetricSolutionSpace {
    pub n: usize,
    pub lambda: ExactScalar,
    /// Canonical reduced-echelon basis, each element symmetric.
    pub basis: Vec<Matrix<ExactScalar>>,
}

impl MetricSolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn vectorized(&self) -> Vec<Vec<ExactScalar>> {
        let u = SymmetricUnknowns::new(self.n);
        self.basis.iter().map(|b| u.vectorize(b)).collect()
    }

    /// Whether `theta` lies in the span of the basis.
    pub fn contains(&self, theta: &Matrix<ExactScalar>) -> bool {
        let u = SymmetricUnknowns::new(self.n);
        let mut vectors = self.vectorized();
        let before = rank_of_vectors(&vectors);
        vectors.push(u.vectorize(theta));
        theta.is_symmetric() && rank_of_vectors(&vectors) == before
    }
}

pub fn solve_metric_space(spec: &HamiltonianSpec) -> Result<MetricSolutionSpace> {
    let lambda = spec
        .lambda_exact()
        .ok_or_else(|| Error::InvalidArgument("the exact oracle needs an exact coupling".into()))?
        .clone();
    let h = spec.exact_matrix().expect("exact coupling");
    let system = intertwining_system(&h)?;
    let unknowns = SymmetricUnknowns::new(spec.n());
    let basis = null_space(&system)
        .iter()
        .map(|v| unknowns.to_matrix(v))
        .collect();
    Ok(MetricSolutionSpace {
        n: spec.n(),
        lambda,
        basis,
    })
}

/// Outcome of an exact membership test.
#[derive(Debug, Clone)]
pub struct ExactMembership {
    pub member: bool,
    pub residual: Matrix<ExactScalar>,
}

pub fn verify_membership_exact(
    theta: &Matrix<ExactScalar>,
    spec: &HamiltonianSpec,
) -> Result<ExactMembership> {
    let h = spec
        .exact_matrix()
        .ok_or_else(|| Error::InvalidArgument("exact membership needs an exact coupling".into()))?;
    check_size(theta, spec.n())?;
    let residual = theta.intertwining_residual(&h)?;
    Ok(ExactMembership {
        member: residual.is_zero_matrix(),
        residual,
    })
}

/// Floating membership test; returns `(max|ΘH − HᵀΘ| ≤ tol, max|ΘH − HᵀΘ|)`.
pub fn verify_membership(theta: &Matrix<f64>, spec: &HamiltonianSpec, tol: f64) -> Result<(bool, f64)> {
    check_size(theta, spec.n())?;
    let residual = theta.intertwining_residual(&spec.matrix())?.max_abs();
    Ok((residual <= tol, residual))
}

fn check_size<T: Clone>(theta: &Matrix<T>, n: usize) -> Result<()> {
    let size = theta.ensure_square()?;
    if size != n {
        return Err(Error::SizeMismatch {
            expected: n,
            actual: size,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{exact, exact_int};

    #[test]
    fn unknown_index_is_bijective() {
        for n in 1..9 {
            let u = SymmetricUnknowns::new(n);
            for f in 0..u.count() {
                let (i, k) = u.position(f);
                assert!(i <= k);
                assert_eq!(u.index(i, k), f);
                assert_eq!(u.index(k, i), f);
            }
        }
    }

    #[test]
    fn two_by_two_free_forces_equal_diagonal() {
        let spec = HamiltonianSpec::exact(2, exact_int(0)).unwrap();
        let space = solve_metric_space(&spec).unwrap();
        assert_eq!(space.dimension(), 2);
        assert!(space.contains(&Matrix::identity(2)));
        assert!(space.contains(&Matrix::exchange(2)));
        let bad = Matrix::from_rows(vec![vec![exact_int(1), exact_int(0)], vec![exact_int(0), exact_int(2)]]).unwrap();
        assert!(!space.contains(&bad));
    }

    #[test]
    fn identity_hamiltonian_gives_zero_system() {
        let a = intertwining_system(&Matrix::identity(3)).unwrap();
        assert!(a.is_zero_matrix());
        assert_eq!(null_space(&a).len(), 6);
    }

    #[test]
    fn four_by_four_system_shape() {
        let spec = HamiltonianSpec::exact(4, exact(1, 3)).unwrap();
        let a = intertwining_system(&spec.exact_matrix().unwrap()).unwrap();
        assert_eq!((a.rows(), a.cols()), (16, 10));
        assert_eq!(solve_metric_space(&spec).unwrap().dimension(), 4);
    }

    #[test]
    fn basis_satisfies_intertwining() {
        let spec = HamiltonianSpec::exact(6, exact(1, 2)).unwrap();
        let space = solve_metric_space(&spec).unwrap();
        assert_eq!(space.dimension(), 6);
        for b in &space.basis {
            assert!(b.is_symmetric());
            assert!(verify_membership_exact(b, &spec).unwrap().member);
        }
    }

    #[test]
    fn diagonal_metric_is_member() {
        let lambda = exact(2, 7);
        for n in [2, 4, 6, 8] {
            let spec = HamiltonianSpec::exact(n, lambda.clone()).unwrap();
            let theta = Matrix::from_fn(n, n, |i, k| {
                if i != k {
                    exact_int(0)
                } else if i < n / 2 {
                    exact_int(1) - lambda.clone()
                } else {
                    exact_int(1) + lambda.clone()
                }
            });
            assert!(verify_membership_exact(&theta, &spec).unwrap().member);
        }
    }

    #[test]
    fn identity_not_member_off_free_point() {
        let spec = HamiltonianSpec::exact(4, exact(1, 2)).unwrap();
        let m = verify_membership_exact(&Matrix::identity(4), &spec).unwrap();
        assert!(!m.member);
        // Only the middle bond breaks symmetry.
        assert_eq!(m.residual[(1, 2)], exact(-1, 1));
        assert_eq!(m.residual[(2, 1)], exact(1, 1));
        assert_eq!(m.residual[(0, 1)], exact_int(0));
        let (ok, res) = verify_membership(&Matrix::identity(4), &HamiltonianSpec::float(4, 0.5).unwrap(), 1e-9).unwrap();
        assert!(!ok && (res - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_member_at_free_point() {
        let spec = HamiltonianSpec::exact(4, exact_int(0)).unwrap();
        assert!(verify_membership_exact(&Matrix::identity(4), &spec).unwrap().member);
    }

    #[test]
    fn size_mismatch_rejected() {
        let spec = HamiltonianSpec::float(4, 0.1).unwrap();
        assert!(verify_membership(&Matrix::identity(2), &spec, 1e-9).is_err());
    }
}
