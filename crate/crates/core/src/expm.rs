//! General-purpose dense matrix exponential, used as a verification oracle.
//!
//! Scaling-and-squaring with a truncated Taylor series: the input is scaled
//! by 2^{-s} until its 1-norm is at most 1/2, the series is summed to an
//! order whose a-priori remainder bound is below 1e-15, and the result is
//! squared s times. Deliberately knows nothing about the closed-form
//! exponentials in [`crate::generator`]; the two must agree entrywise.

use ndarray::Array2;

use crate::{Error, Result};

/// Largest matrix dimension the oracle accepts. It exists to verify small
/// closed forms, not to be a production exponential.
pub const MAX_DIM: usize = 16;

// Scale until the 1-norm is at most this.
const SCALE_TARGET: f64 = 0.5;
// Remainder bound the series order is chosen against.
const SERIES_REMAINDER: f64 = 1e-15;
const MAX_ORDER: usize = 32;

/// Matrix exponential of a finite square matrix with dimension ≤ [`MAX_DIM`].
///
/// Deterministic; the truncation remainder is below 1e-14 in max-abs norm.
pub fn expm_oracle(m: &Array2<f64>) -> Result<Array2<f64>> {
    let (rows, cols) = m.dim();
    if rows != cols {
        return Err(Error::InvalidArgument(format!(
            "matrix exponential needs a square matrix, got {rows}x{cols}"
        )));
    }
    if rows == 0 || rows > MAX_DIM {
        return Err(Error::InvalidArgument(format!(
            "matrix dimension {rows} outside 1..={MAX_DIM}"
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(
            "matrix has non-finite entries".into(),
        ));
    }

    let norm = one_norm(m);
    let squarings = if norm <= SCALE_TARGET {
        0
    } else {
        (norm / SCALE_TARGET).log2().ceil() as u32
    };
    let scaled = m.mapv(|x| x / f64::powi(2.0, squarings as i32));

    let order = series_order(SCALE_TARGET)
        .ok_or_else(|| Error::Resource("no Taylor order meets the remainder bound".into()))?;

    // Horner-free forward sum: term_k = scaled^k / k!.
    let mut result = Array2::<f64>::eye(rows);
    let mut term = Array2::<f64>::eye(rows);
    for k in 1..=order {
        term = term.dot(&scaled) / k as f64;
        result += &term;
    }

    for _ in 0..squarings {
        result = result.dot(&result);
    }
    Ok(result)
}

// Smallest order n with sum_{k>n} theta^k/k! <= SERIES_REMAINDER, bounding the
// tail by the first omitted term times a geometric factor.
fn series_order(theta: f64) -> Option<usize> {
    let mut term = 1.0;
    for n in 1..=MAX_ORDER {
        term *= theta / n as f64;
        let tail = term / (1.0 - theta / (n as f64 + 2.0));
        if tail <= SERIES_REMAINDER {
            return Some(n);
        }
    }
    None
}

// Maximum absolute column sum.
fn one_norm(m: &Array2<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        worst = worst.max(m.column(j).iter().map(|x| x.abs()).sum());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn zero_matrix_gives_identity() {
        let m = Array2::<f64>::zeros((3, 3));
        let e = expm_oracle(&m).unwrap();
        assert_eq!(e, Array2::eye(3));
    }

    #[test]
    fn diagonal_matrix_exponentiates_entrywise() {
        let m = Array2::from_diag(&ndarray::arr1(&[0.3, -1.2, 2.5]));
        let e = expm_oracle(&m).unwrap();
        for (i, &d) in [0.3f64, -1.2, 2.5].iter().enumerate() {
            assert!((e[[i, i]] - d.exp()).abs() < 1e-13);
        }
        assert!((e[[0, 1]]).abs() < 1e-15);
    }

    #[test]
    fn antisymmetric_2x2_gives_rotation() {
        let w = 1.3;
        let m = array![[0.0, -w], [w, 0.0]];
        let e = expm_oracle(&m).unwrap();
        assert!((e[[0, 0]] - w.cos()).abs() < 1e-14);
        assert!((e[[0, 1]] + w.sin()).abs() < 1e-14);
        assert!((e[[1, 0]] - w.sin()).abs() < 1e-14);
        assert!((e[[1, 1]] - w.cos()).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(expm_oracle(&Array2::<f64>::zeros((2, 3))).is_err());
        assert!(expm_oracle(&Array2::<f64>::zeros((17, 17))).is_err());
        let mut m = Array2::<f64>::zeros((2, 2));
        m[[0, 0]] = f64::NAN;
        assert!(expm_oracle(&m).is_err());
    }

    #[test]
    fn exp_of_sum_for_commuting_matrices() {
        // exp(A) exp(A) = exp(2A) when everything commutes with itself.
        let m = array![[0.1, 0.7, 0.0], [0.7, 0.0, -0.2], [0.0, -0.2, 0.4]];
        let e1 = expm_oracle(&m).unwrap();
        let e2 = expm_oracle(&m.mapv(|x| 2.0 * x)).unwrap();
        let prod = e1.dot(&e1);
        for i in 0..3 {
            for j in 0..3 {
                assert!((prod[[i, j]] - e2[[i, j]]).abs() < 1e-12);
            }
        }
    }
}
