//! Exact and floating linear algebra shared by the gluing-system code.

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::ops::{Div, Mul, Sub};

use crate::scalar::Real;

/// Field operations needed by exact elimination.
pub trait Field:
    Clone + PartialEq + PartialOrd + Zero + One + Signed + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
}

impl<T> Field for T where
    T: Clone + PartialEq + PartialOrd + Zero + One + Signed + Sub<Output = T> + Mul<Output = T> + Div<Output = T>
{
}

/// Incremental row echelon basis: rows are offered one at a time and kept
/// only if they are independent of everything kept so far.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    width: usize,
    // (pivot column, normalized row)
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(width: usize) -> Self {
        EchelonBasis { width, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the basis and keeps it if a nonzero remainder
    /// survives. Returns whether the row was independent.
    pub fn insert(&mut self, row: &[F]) -> bool {
        assert_eq!(row.len(), self.width, "row width mismatch");
        let mut r = row.to_vec();
        for (pivot, basis_row) in &self.rows {
            if !r[*pivot].is_zero() {
                let factor = r[*pivot].clone();
                for (x, b) in r.iter_mut().zip(basis_row) {
                    if !b.is_zero() {
                        *x = x.clone() - factor.clone() * b.clone();
                    }
                }
            }
        }
        // largest magnitude entry as pivot
        let mut best: Option<usize> = None;
        for (j, x) in r.iter().enumerate() {
            if !x.is_zero() && best.is_none_or(|b| x.abs() > r[b].abs()) {
                best = Some(j);
            }
        }
        let Some(pivot) = best else { return false };
        let scale = r[pivot].clone();
        for x in r.iter_mut() {
            *x = x.clone() / scale.clone();
        }
        // keep the basis fully reduced in the new pivot column
        for (_, basis_row) in self.rows.iter_mut() {
            if !basis_row[pivot].is_zero() {
                let factor = basis_row[pivot].clone();
                for (b, x) in basis_row.iter_mut().zip(&r) {
                    *b = b.clone() - factor.clone() * x.clone();
                }
            }
        }
        self.rows.push((pivot, r));
        true
    }
}

pub fn to_rational_row(row: &[i64]) -> Vec<BigRational> {
    row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
}

/// Rank over the rationals of an integer matrix.
pub fn rational_rank(rows: &[Vec<i64>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else { return 0 };
    let mut basis = EchelonBasis::<BigRational>::new(width);
    for row in rows {
        basis.insert(&to_rational_row(row));
    }
    basis.rank()
}

/// Greedily picks up to `limit` rows, visiting them in `order`, that are
/// linearly independent over the rationals.
pub fn select_independent(rows: &[Vec<i64>], order: &[usize], limit: usize) -> Vec<usize> {
    let Some(width) = rows.first().map(Vec::len) else { return Vec::new() };
    let mut basis = EchelonBasis::<BigRational>::new(width);
    let mut chosen = Vec::new();
    for &i in order {
        if chosen.len() == limit {
            break;
        }
        if basis.insert(&to_rational_row(&rows[i])) {
            chosen.push(i);
        }
    }
    chosen
}

/// Outcome of a complex least-squares solve.
#[derive(Clone, Debug)]
pub struct LeastSquares<T: Real> {
    pub solution: Vec<Complex<T>>,
    /// Smallest over largest singular value.
    pub conditioning: T,
}

/// Minimizes `‖A x − b‖₂` for a tall (or square) complex matrix via SVD.
///
/// Returns `None` when `A` is numerically rank deficient, i.e. the ratio of
/// extreme singular values falls below `rank_tolerance`.
pub fn complex_least_squares<T: Real>(
    a: &[Vec<Complex<T>>],
    b: &[Complex<T>],
    rank_tolerance: T,
) -> Option<LeastSquares<T>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if m == 0 || n == 0 || m < n {
        return None;
    }
    let mat = DMatrix::<Complex<T>>::from_fn(m, n, |i, j| a[i][j]);
    let rhs = DVector::<Complex<T>>::from_fn(m, |i, _| b[i]);
    let svd = mat.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(T::zero(), |x, y| if y > x { y } else { x });
    let smin = sv.iter().copied().fold(T::infinity(), |x, y| if y < x { y } else { x });
    if !(smax > T::zero()) {
        return None;
    }
    let conditioning = smin / smax;
    if !(conditioning > rank_tolerance) {
        return None;
    }
    let x = svd.solve(&rhs, T::zero()).ok()?;
    Some(LeastSquares { solution: x.iter().copied().collect(), conditioning })
}

/// Inverse of a square complex matrix, `None` if singular.
pub fn complex_inverse(a: &[Vec<Complex<f64>>]) -> Option<Vec<Vec<Complex<f64>>>> {
    let n = a.len();
    let mat = DMatrix::<Complex<f64>>::from_fn(n, n, |i, j| a[i][j]);
    let inv = mat.try_inverse()?;
    Some((0..n).map(|i| (0..n).map(|j| inv[(i, j)]).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_integer_matrices() {
        assert_eq!(rational_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rational_rank(&[vec![1, 2], vec![2, 5]]), 2);
        assert_eq!(rational_rank(&[vec![0, 0, 0]]), 0);
        assert_eq!(rational_rank(&[]), 0);
    }

    #[test]
    fn select_prefers_given_order() {
        let rows = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(select_independent(&rows, &[2, 0, 1], 2), vec![2, 0]);
        assert_eq!(select_independent(&rows, &[0, 1, 2], 2), vec![0, 1]);
    }

    #[test]
    fn least_squares_recovers_consistent_solution() {
        let c = |re: f64, im: f64| Complex::new(re, im);
        let a = vec![vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(2.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, -1.0)]];
        let x = [c(0.5, 0.25), c(-1.0, 2.0)];
        let b: Vec<_> = a.iter().map(|r| r[0] * x[0] + r[1] * x[1]).collect();
        let ls = complex_least_squares(&a, &b, 1e-12).unwrap();
        for (u, v) in ls.solution.iter().zip(&x) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn least_squares_flags_rank_deficiency() {
        let c = |re: f64| Complex::new(re, 0.0);
        let a = vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)]];
        assert!(complex_least_squares(&a, &[c(1.0), c(2.0)], 1e-10).is_none());
    }
}
