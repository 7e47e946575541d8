//! Exact rank and right-kernel computation.
//!
//! Rows are first scaled to integers, then brought to echelon form with
//! Bareiss fraction-free elimination: every update is divided exactly by the
//! previous pivot, which keeps entry growth polynomial in the input bit size.
//! The kernel basis is read off the reduced echelon form, so it is canonical
//! (one vector per free column, free columns in increasing order).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::Matrix;
use super::scalar::ExactScalar;

struct Echelon {
    /// Integer echelon rows, `rank` of them.
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn integer_rows(a: &Matrix<ExactScalar>) -> Vec<Vec<BigInt>> {
    (0..a.rows())
        .map(|i| {
            let row = a.row(i);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect()
}

fn bareiss(a: &Matrix<ExactScalar>) -> Echelon {
    let mut rows = integer_rows(a);
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let cols = a.cols();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        // Smallest nonzero magnitude as pivot; ties go to the lowest row.
        let Some(p) = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by(|&x, &y| rows[x][c].abs().cmp(&rows[y][c].abs()))
        else {
            continue;
        };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for k in c + 1..cols {
                let num = &pivot * &row[k] - &factor * &pivot_row[k];
                debug_assert!((&num % &prev).is_zero(), "inexact Bareiss division");
                row[k] = num / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}

/// Exact rank of `a`.
pub fn rank(a: &Matrix<ExactScalar>) -> usize {
    bareiss(a).pivots.len()
}

/// Exact basis of the right kernel `{v : a·v = 0}`, as column vectors.
///
/// The basis has `cols − rank` elements; element `t` has a 1 in the `t`-th
/// free column and zeros in every other free column.
pub fn null_space(a: &Matrix<ExactScalar>) -> Vec<Vec<ExactScalar>> {
    let cols = a.cols();
    let Echelon { rows, pivots } = bareiss(a);

    // Reduced echelon form over the rationals.
    let mut reduced: Vec<Vec<BigRational>> = rows
        .into_iter()
        .zip(&pivots)
        .map(|(row, &c)| {
            let pivot = BigRational::from_integer(row[c].clone());
            row.into_iter()
                .map(|x| BigRational::from_integer(x) / &pivot)
                .collect()
        })
        .collect();
    for r in (0..reduced.len()).rev() {
        let c = pivots[r];
        let (above, rest) = reduced.split_at_mut(r);
        let pivot_row = &rest[0];
        for row in above.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for k in c..cols {
                if !pivot_row[k].is_zero() {
                    row[k] = &row[k] - &factor * &pivot_row[k];
                }
            }
        }
    }

    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = vec![BigRational::zero(); cols];
            v[free] = BigRational::one();
            for (row, &c) in reduced.iter().zip(&pivots) {
                v[c] = -row[free].clone();
            }
            v
        })
        .collect()
}

/// Rank of a family of equally-sized vectors (stacked as rows).
pub fn rank_of_vectors(vectors: &[Vec<ExactScalar>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    match Matrix::from_rows(vectors.to_vec()) {
        Ok(m) => rank(&m),
        Err(_) => 0,
    }
}
