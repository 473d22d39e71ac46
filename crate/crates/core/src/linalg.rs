//! Dense linear algebra used by the matrix Riccati path.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::{Error, Result};

/// Circulant matrix with `a[i][j] = col[(i - j) mod n]`.
pub fn circulant(col: &[f64]) -> DMatrix<f64> {
    let n = col.len();
    DMatrix::from_fn(n, n, |i, j| col[(i + n - j) % n])
}

/// Largest deviation of `a` from the circulant generated by its first column.
pub fn circulant_deviation(a: &DMatrix<f64>) -> f64 {
    let col: Vec<f64> = a.column(0).iter().copied().collect();
    let c = circulant(&col);
    (a - c).amax()
}

fn norm_one(a: &DMatrix<f64>) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(a * tau)` by scaling and squaring with a truncated Taylor series.
///
/// The scaled argument has 1-norm at most 1/2, where 30 Taylor terms are far
/// past double precision; summation stops once a term no longer changes the sum.
pub fn matrix_exponential(a: &DMatrix<f64>, tau: f64) -> Result<DMatrix<f64>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "matrix exponential needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if !tau.is_finite() || tau < 0.0 {
        return Err(Error::invalid("tau", tau, "finite tau >= 0"));
    }
    let n = a.nrows();
    let scaled = a * tau;
    let norm = norm_one(&scaled);
    if !norm.is_finite() {
        return Err(Error::invalid("tau * |A|", norm, "finite"));
    }
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = scaled * 2f64.powi(-squarings);

    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=30 {
        term = &term * &b / k as f64;
        sum += &term;
        if term.amax() <= f64::EPSILON * 1e-3 * sum.amax() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    Ok(sum)
}

/// `a * b^{-1}` through an LU factorisation of `b^T` with partial pivoting.
///
/// Fails when the smallest pivot magnitude drops below `pivot_threshold`.
pub fn right_divide(a: &DMatrix<f64>, b: &DMatrix<f64>, pivot_threshold: f64) -> Result<DMatrix<f64>> {
    if !b.is_square() || a.ncols() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot divide {}x{} by {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let lu = b.transpose().lu();
    let min_pivot = lu.u().diagonal().iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    if min_pivot.is_nan() || min_pivot < pivot_threshold {
        return Err(Error::SingularMatrix {
            pivot: min_pivot,
            threshold: pivot_threshold,
        });
    }
    let xt = lu.solve(&a.transpose()).ok_or(Error::SingularMatrix {
        pivot: min_pivot,
        threshold: pivot_threshold,
    })?;
    Ok(xt.transpose())
}

/// `det(lambda I - a)` for real `a` and complex `lambda`.
pub fn characteristic_determinant(a: &DMatrix<f64>, lambda: Complex64) -> Result<Complex64> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
    }
    let n = a.nrows();
    let shifted = DMatrix::<Complex64>::from_fn(n, n, |i, j| {
        let diag = if i == j { lambda } else { Complex64::new(0.0, 0.0) };
        diag - a[(i, j)]
    });
    Ok(shifted.lu().determinant())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circulant_layout() {
        let a = circulant(&[1.0, 2.0, 3.0]);
        assert_eq!(a.row(0).iter().copied().collect::<Vec<_>>(), vec![1.0, 3.0, 2.0]);
        assert_eq!(a.row(1).iter().copied().collect::<Vec<_>>(), vec![2.0, 1.0, 3.0]);
        assert_eq!(circulant_deviation(&a), 0.0);
        let mut b = a.clone();
        b[(0, 1)] += 0.5;
        assert_eq!(circulant_deviation(&b), 0.5);
    }

    #[test]
    fn exponential_of_zero_is_identity() {
        let z = DMatrix::<f64>::zeros(4, 4);
        assert_eq!(matrix_exponential(&z, 3.0).unwrap(), DMatrix::identity(4, 4));
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(matrix_exponential(&a, 0.0).unwrap(), DMatrix::identity(2, 2));
    }

    #[test]
    fn exponential_rotation() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let e = matrix_exponential(&a, 2.5).unwrap();
        let expect = DMatrix::from_row_slice(2, 2, &[2.5f64.cos(), -(2.5f64.sin()), 2.5f64.sin(), 2.5f64.cos()]);
        assert!((e - expect).amax() < 1e-14);
    }

    #[test]
    fn exponential_rejects_rectangular() {
        assert!(matrix_exponential(&DMatrix::<f64>::zeros(2, 3), 1.0).is_err());
    }

    #[test]
    fn right_divide_inverts() {
        let b = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, 3.0]);
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 4.0, 5.0]);
        let x = right_divide(&a, &b, 1e-12).unwrap();
        assert!((&x * &b - &a).amax() < 1e-14);
        let singular = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert!(matches!(right_divide(&a, &singular, 1e-12), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn determinant_of_diagonal() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0]));
        let d = characteristic_determinant(&a, Complex64::new(3.0, 0.0)).unwrap();
        assert!((d - Complex64::new(2.0, 0.0)).norm() < 1e-15);
    }
}
