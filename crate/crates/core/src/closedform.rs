//! Recurrent closed-form construction of the metric basis `M_j⁽ᴺ⁾(λ)`.
//!
//! Every basis element is encoded by a sparse incidence matrix `S_j⁽ᴺ⁾`
//! holding, at each occupied position, the degree `d` of the polynomial
//!
//! ```text
//! P_{2m}    = (1 − λ²)^m
//! P_{2m+1}± = (1 ± λ)(1 − λ²)^m
//! ```
//!
//! that sits there. The sign of an odd-degree entry is fixed by its position:
//! `−` above the antidiagonal (`i + k < N + 1`), `+` below it. The
//! antidiagonal itself only ever carries even degrees.
//!
//! The family at size `N = 2K` is grown from the family at `N − 2` by
//! embedding each predecessor one step in from the border and attaching new
//! corner entries:
//!
//! * `j < K`: predecessor `S_j`, attach `1` along the corner antidiagonals
//!   `i + k = j + 1` and `i + k = 2N + 1 − j`;
//! * `j = K`: predecessor `S_{K−1}` with every degree raised by one and
//!   columns reflected left-right, attach `1` along the same corner
//!   antidiagonals;
//! * `j > K`: predecessor `S_{j−2}`, attach `0` along the corner diagonals
//!   `k − i = j − 1` and `i − k = j − 1`.
//!
//! Incidence indices are 1-based throughout, matching the usual display of
//! these matrices.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::validate_size;
use crate::linalg::{ExactScalar, IntPolynomial, Matrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Minus,
    Plus,
    None,
}

/// `P_degree` with its sign superscript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedPolynomial {
    degree: u32,
    sign: Sign,
}

impl SignedPolynomial {
    pub fn new(degree: u32, sign: Sign) -> Result<Self> {
        if degree % 2 == 1 && sign == Sign::None {
            return Err(Error::MissingSign(degree));
        }
        Ok(Self { degree, sign })
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn polynomial(&self) -> IntPolynomial {
        let base = IntPolynomial::from_i64s(&[1, 0, -1]).pow(self.degree / 2);
        if self.degree % 2 == 0 {
            return base;
        }
        let linear = match self.sign {
            Sign::Minus => IntPolynomial::from_i64s(&[1, -1]),
            Sign::Plus => IntPolynomial::from_i64s(&[1, 1]),
            Sign::None => unreachable!("rejected in SignedPolynomial::new"),
        };
        linear * base
    }
}

/// `P_degree^(sign)`; the sign is ignored for even degrees.
pub fn poly_p(degree: u32, sign: Sign) -> Result<IntPolynomial> {
    SignedPolynomial::new(degree, sign).map(|p| p.polynomial())
}

/// Memoizes `P_d^(±)` while a family is assembled.
#[derive(Debug, Default)]
struct PolyCache(HashMap<(u32, Sign), IntPolynomial>);

impl PolyCache {
    fn get(&mut self, degree: u32, sign: Sign) -> Result<IntPolynomial> {
        let key = (degree, if degree % 2 == 0 { Sign::None } else { sign });
        if let Some(p) = self.0.get(&key) {
            return Ok(p.clone());
        }
        let p = poly_p(key.0, key.1)?;
        self.0.insert(key, p.clone());
        Ok(p)
    }
}

/// Sign carried by odd-degree entries at 1-based position `(i, k)`.
pub fn position_sign(n: usize, i: usize, k: usize) -> Sign {
    match (i + k).cmp(&(n + 1)) {
        std::cmp::Ordering::Less => Sign::Minus,
        std::cmp::Ordering::Greater => Sign::Plus,
        std::cmp::Ordering::Equal => Sign::None,
    }
}

/// Sparse degree pattern `S_j⁽ᴺ⁾`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    n: usize,
    j: usize,
    entries: BTreeMap<(usize, usize), u32>,
}

impl IncidenceMatrix {
    pub fn from_entries(n: usize, j: usize, entries: impl IntoIterator<Item = ((usize, usize), u32)>) -> Self {
        Self {
            n,
            j,
            entries: entries.into_iter().collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn degree(&self, i: usize, k: usize) -> Option<u32> {
        self.entries.get(&(i, k)).copied()
    }

    /// `((i, k), degree)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), u32)> + '_ {
        self.entries.iter().map(|(&pos, &d)| (pos, d))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.entries.values().copied().max()
    }

    /// 0/1 occupancy pattern (0-based matrix).
    pub fn occupancy(&self) -> Matrix<i64> {
        let mut m = Matrix::filled(self.n, self.n, 0);
        for &(i, k) in self.entries.keys() {
            m[(i - 1, k - 1)] = 1;
        }
        m
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries
            .iter()
            .all(|(&(i, k), d)| self.entries.get(&(k, i)) == Some(d))
    }

    /// Invariance under reflection through the antidiagonal.
    pub fn is_persymmetric(&self) -> bool {
        let n = self.n;
        self.entries
            .iter()
            .all(|(&(i, k), d)| self.entries.get(&(n + 1 - k, n + 1 - i)) == Some(d))
    }

    /// Copy of `self` placed one step in from the border of an `(n+2)`-sized matrix.
    fn embedded(&self, j: usize) -> Self {
        Self {
            n: self.n + 2,
            j,
            entries: self.entries.iter().map(|(&(i, k), &d)| ((i + 1, k + 1), d)).collect(),
        }
    }

    fn incremented(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|(&pos, &d)| (pos, d + 1)).collect(),
            ..self.clone()
        }
    }

    /// Left-right reflection: column `k` goes to column `n + 1 − k`.
    fn reflected_lr(&self) -> Self {
        let n = self.n;
        Self {
            entries: self.entries.iter().map(|(&(i, k), &d)| ((i, n + 1 - k), d)).collect(),
            ..self.clone()
        }
    }

    fn attach(&mut self, positions: impl IntoIterator<Item = (usize, usize)>, degree: u32) -> Result<()> {
        for pos in positions {
            if self.entries.insert(pos, degree).is_some() {
                return Err(Error::Construction(format!(
                    "position {pos:?} of S_{} (N = {}) attached twice",
                    self.j, self.n
                )));
            }
        }
        Ok(())
    }
}

/// 0/1 pattern of `M_j⁽ᴺ⁾(0)`: position `(i, k)` is occupied iff
/// `i − k ∈ {j−1, j−3, …, 1−j}` and `N+1−i−k ∈ {N−j, N−j−2, …, j−N}`.
pub fn ansatz_lambda0(n: usize, j: usize) -> Result<Matrix<i64>> {
    validate_size(n)?;
    if j == 0 || j > n {
        return Err(Error::IndexRange { j, n });
    }
    let (n_i, j_i) = (n as i64, j as i64);
    Ok(Matrix::from_fn(n, n, |r, c| {
        let (i, k) = (r as i64 + 1, c as i64 + 1);
        let diff = i - k;
        let anti = n_i + 1 - i - k;
        let in_diff = diff.abs() <= j_i - 1 && (j_i - 1 - diff) % 2 == 0;
        let in_anti = anti.abs() <= n_i - j_i && (n_i - j_i - anti) % 2 == 0;
        i64::from(in_diff && in_anti)
    }))
}

fn base_family() -> Vec<IncidenceMatrix> {
    vec![
        IncidenceMatrix::from_entries(2, 1, [((1, 1), 1), ((2, 2), 1)]),
        IncidenceMatrix::from_entries(2, 2, [((1, 2), 0), ((2, 1), 0)]),
    ]
}

/// Positions `(i, k)` with `i + k = sum` and `|i − k| ≤ half_width`, inside an `n × n` matrix.
fn antidiagonal_segment(n: usize, sum: usize, half_width: usize) -> Vec<(usize, usize)> {
    (1..=n)
        .filter_map(|i| {
            let k = sum.checked_sub(i)?;
            (k >= 1 && k <= n && i.abs_diff(k) <= half_width).then_some((i, k))
        })
        .collect()
}

fn grow(prev: &[IncidenceMatrix]) -> Result<Vec<IncidenceMatrix>> {
    let n = prev[0].n + 2;
    let k_mid = n / 2;
    let mut next = Vec::with_capacity(n);
    for j in 1..=n {
        let s = if j < k_mid {
            let mut s = prev[j - 1].embedded(j);
            s.attach(antidiagonal_segment(n, j + 1, j - 1), 1)?;
            s.attach(antidiagonal_segment(n, 2 * n + 1 - j, j - 1), 1)?;
            s
        } else if j == k_mid {
            let predecessor = prev[k_mid - 2].incremented().reflected_lr();
            let mut s = predecessor.embedded(j);
            s.attach(antidiagonal_segment(n, k_mid + 1, k_mid - 1), 1)?;
            s.attach(antidiagonal_segment(n, 3 * k_mid + 1, k_mid - 1), 1)?;
            s
        } else {
            let mut s = prev[j - 3].embedded(j);
            let count = n + 1 - j;
            s.attach((1..=count).map(|i| (i, i + j - 1)), 0)?;
            s.attach((1..=count).map(|k| (k + j - 1, k)), 0)?;
            s
        };
        next.push(s);
    }
    Ok(next)
}

fn check_family(family: &[IncidenceMatrix]) -> Result<()> {
    for s in family {
        if s.occupancy() != ansatz_lambda0(s.n, s.j)? {
            return Err(Error::Construction(format!(
                "occupancy of S_{} (N = {}) differs from the free-motion pattern",
                s.j, s.n
            )));
        }
        if !s.is_symmetric() || !s.is_persymmetric() {
            return Err(Error::Construction(format!(
                "S_{} (N = {}) lost its (per)symmetry",
                s.j, s.n
            )));
        }
    }
    Ok(())
}

/// All `N` incidence matrices `S_1⁽ᴺ⁾ … S_N⁽ᴺ⁾`, built by recurrence from `N = 2`.
pub fn incidence_family(n: usize) -> Result<Vec<IncidenceMatrix>> {
    validate_size(n)?;
    let mut family = base_family();
    check_family(&family)?;
    while family[0].n < n {
        family = grow(&family)?;
        check_family(&family)?;
    }
    Ok(family)
}

/// `M_j⁽ᴺ⁾(λ)` as a matrix of polynomials in `λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricBasisElement {
    pub n: usize,
    pub j: usize,
    pub matrix: Matrix<IntPolynomial>,
}

impl MetricBasisElement {
    pub fn eval_exact(&self, lambda: &ExactScalar) -> Matrix<ExactScalar> {
        self.matrix.map(|p| p.eval_exact(lambda))
    }

    pub fn eval_f64(&self, lambda: f64) -> Matrix<f64> {
        self.matrix.map(|p| p.eval_f64(lambda))
    }

    /// Integer matrix `M_j(0)`.
    pub fn at_zero(&self) -> Matrix<i64> {
        self.matrix.map(|p| {
            use num_traits::ToPrimitive;
            p.constant_term().to_i64().unwrap_or(i64::MAX)
        })
    }
}

fn assemble_with(cache: &mut PolyCache, s: &IncidenceMatrix) -> Result<MetricBasisElement> {
    let n = s.n;
    let mut matrix = Matrix::filled(n, n, IntPolynomial::zero());
    for ((i, k), degree) in s.entries() {
        let sign = position_sign(n, i, k);
        if sign == Sign::None && degree % 2 == 1 {
            return Err(Error::Construction(format!(
                "odd degree {degree} on the antidiagonal at ({i}, {k}) of S_{} (N = {n})",
                s.j
            )));
        }
        matrix[(i - 1, k - 1)] = cache.get(degree, sign)?;
    }
    Ok(MetricBasisElement { n, j: s.j, matrix })
}

/// Expands an incidence matrix into its polynomial matrix using the sign rule.
pub fn assemble_basis_element(s: &IncidenceMatrix) -> Result<MetricBasisElement> {
    assemble_with(&mut PolyCache::default(), s)
}

/// `M_1⁽ᴺ⁾(λ) … M_N⁽ᴺ⁾(λ)`.
pub fn basis_family(n: usize) -> Result<Vec<MetricBasisElement>> {
    let mut cache = PolyCache::default();
    incidence_family(n)?
        .iter()
        .map(|s| assemble_with(&mut cache, s))
        .collect()
}

/// Expansion coefficients `α_1 … α_N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricParams {
    alpha: Vec<f64>,
}

impl MetricParams {
    pub fn new(alpha: Vec<f64>) -> Self {
        Self { alpha }
    }

    /// `α = e_j` (1-based).
    pub fn unit(n: usize, j: usize) -> Self {
        Self::new((1..=n).map(|t| if t == j { 1.0 } else { 0.0 }).collect())
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if len == n {
        Ok(())
    } else {
        Err(Error::SizeMismatch {
            expected: n,
            actual: len,
        })
    }
}

/// `Θ = Σ_j α_j M_j⁽ᴺ⁾(λ)` from an already built family.
pub fn combine(family: &[MetricBasisElement], lambda: f64, params: &MetricParams) -> Result<Matrix<f64>> {
    let n = family.first().map_or(0, |m| m.n);
    check_len(family.len(), params.len())?;
    let mut theta = Matrix::<f64>::zeros(n, n);
    for (m, &a) in family.iter().zip(params.alpha()) {
        if a != 0.0 {
            theta = theta.add(&m.eval_f64(lambda).scale(&a))?;
        }
    }
    Ok(theta)
}

/// `Θ⁽ᴺ⁾(λ) = Σ_j α_j M_j⁽ᴺ⁾(λ)`, symmetric by construction.
pub fn assemble_theta(n: usize, lambda: f64, params: &MetricParams) -> Result<Matrix<f64>> {
    validate_size(n)?;
    check_len(n, params.len())?;
    combine(&basis_family(n)?, lambda, params)
}

/// Exact counterpart of [`assemble_theta`].
pub fn assemble_theta_exact(n: usize, lambda: &ExactScalar, alpha: &[ExactScalar]) -> Result<Matrix<ExactScalar>> {
    validate_size(n)?;
    check_len(n, alpha.len())?;
    let mut theta = Matrix::<ExactScalar>::zeros(n, n);
    for (m, a) in basis_family(n)?.iter().zip(alpha) {
        if !a.is_zero() {
            theta = theta.add(&m.eval_exact(lambda).scale(a))?;
        }
    }
    Ok(theta)
}

/// `M_j(λ)(i, k) = M_j(−λ)(N+1−k, N+1−i)` for every position, as polynomials.
pub fn symmetry_check(element: &MetricBasisElement) -> bool {
    let n = element.n;
    (0..n).all(|i| (0..n).all(|k| element.matrix[(i, k)] == element.matrix[(n - 1 - k, n - 1 - i)].reflect()))
}

/// Exact `M_j·H − Hᵀ·M_j` with `λ` kept symbolic.
pub fn symbolic_residual(element: &MetricBasisElement) -> Result<Matrix<IntPolynomial>> {
    let h = crate::hamiltonian::symbolic_hamiltonian(element.n)?;
    element.matrix.intertwining_residual(&h)
}

impl MetricBasisElement {
    pub fn is_unit_free(&self) -> bool {
        self.matrix.iter().all(|p| p.is_zero() || p.is_one())
    }
}
