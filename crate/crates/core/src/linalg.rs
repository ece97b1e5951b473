//! Spectral radius and induced-norm bounds for Jacobians.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::Matrix;

/// Above this dimension the spectral radius comes from power iteration.
pub const DENSE_EIGEN_LIMIT: usize = 50;

const POWER_RESTARTS: u64 = 4;
const POWER_MAX_ITER: usize = 20_000;

/// Largest absolute row sum, `max_j Σ_i |m_ji|` (the induced max-norm).
pub fn max_abs_row_sum(m: &Matrix) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest absolute column sum, `max_j Σ_i |m_ij|` (the induced 1-norm).
pub fn max_abs_col_sum(m: &Matrix) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `min{max row sum, max column sum}`, an upper bound for every eigenvalue
/// modulus.
pub fn eigen_bound(m: &Matrix) -> f64 {
    max_abs_row_sum(m).min(max_abs_col_sum(m))
}

/// `max |λ|` over the eigenvalues of a square matrix.
///
/// Matrices up to [`DENSE_EIGEN_LIMIT`] use a real Schur decomposition;
/// larger ones use power iteration with a two-term recurrence fit, which
/// also resolves dominant complex pairs and `±λ` pairs, restarted from
/// several random vectors.
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteMatrix);
    }
    if m.nrows() == 0 {
        return Ok(0.0);
    }
    if m.nrows() <= DENSE_EIGEN_LIMIT {
        Ok(dense_spectral_radius(m))
    } else {
        Ok(power_spectral_radius(m))
    }
}

pub(crate) fn dense_spectral_radius(m: &Matrix) -> f64 {
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| libm::hypot(z.re, z.im))
        .fold(0.0, f64::max)
}

pub(crate) fn power_spectral_radius(m: &Matrix) -> f64 {
    let n = m.nrows();
    let mut best = 0.0f64;
    for restart in 0..POWER_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(0x005e_ed0f_5bec);
        rng.set_stream(restart);
        let mut v = nalgebra::DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let nv = v.norm();
        if nv == 0.0 {
            continue;
        }
        v /= nv;
        best = best.max(power_run(m, v));
    }
    best
}

fn power_run(m: &Matrix, mut v: nalgebra::DVector<f64>) -> f64 {
    let mut estimate = 0.0;
    let mut stable = 0;
    for _ in 0..POWER_MAX_ITER {
        let y1 = m * &v;
        let n1 = y1.norm();
        if n1 == 0.0 {
            return 0.0;
        }
        let y2 = m * &y1;
        let next = two_term_radius(&v, &y1, &y2).unwrap_or(n1);
        if (next - estimate).abs() <= 1e-13 * next.max(1.0) {
            stable += 1;
            if stable >= 5 {
                return next;
            }
        } else {
            stable = 0;
        }
        estimate = next;
        v = y1 / n1;
    }
    estimate
}

/// Fits `y2 ≈ a·y1 + b·y0` by least squares and returns the largest root
/// modulus of `z² − a·z − b`. `None` when `y0` and `y1` are parallel (a
/// single dominant real eigenvalue, where `‖y1‖` is the answer).
fn two_term_radius(
    y0: &nalgebra::DVector<f64>,
    y1: &nalgebra::DVector<f64>,
    y2: &nalgebra::DVector<f64>,
) -> Option<f64> {
    let g00 = y0.dot(y0);
    let g01 = y0.dot(y1);
    let g11 = y1.dot(y1);
    let det = g00 * g11 - g01 * g01;
    if det <= 1e-12 * g00 * g11 {
        return None;
    }
    let r0 = y0.dot(y2);
    let r1 = y1.dot(y2);
    let b = (g11 * r0 - g01 * r1) / det;
    let a = (g00 * r1 - g01 * r0) / det;
    let disc = a * a + 4.0 * b;
    if disc >= 0.0 {
        let s = libm::sqrt(disc);
        Some(((a + s) / 2.0).abs().max(((a - s) / 2.0).abs()))
    } else {
        Some(libm::sqrt(-b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert!((spectral_radius(&Matrix::identity(3, 3)).unwrap() - 1.0).abs() < 1e-12);
        let d = Matrix::from_diagonal(&nalgebra::DVector::from_vec(alloc::vec![2.0, -3.0]));
        assert!((spectral_radius(&d).unwrap() - 3.0).abs() < 1e-12);
        let rot = Matrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        assert!((spectral_radius(&rot).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(spectral_radius(&Matrix::zeros(0, 0)).unwrap(), 0.0);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, f64::NAN, 0.0, 1.0]);
        assert_eq!(spectral_radius(&m), Err(Error::NonFiniteMatrix));
    }

    #[test]
    fn row_and_column_sums() {
        let m = Matrix::from_row_slice(2, 2, &[1.0, -4.0, 0.5, 0.5]);
        assert_eq!(max_abs_row_sum(&m), 5.0);
        assert_eq!(max_abs_col_sum(&m), 4.5);
        assert_eq!(eigen_bound(&m), 4.5);
    }

    fn block_test_matrix(n: usize, top: &[f64; 4], seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Matrix::zeros(n, n);
        m[(0, 0)] = top[0];
        m[(0, 1)] = top[1];
        m[(1, 0)] = top[2];
        m[(1, 1)] = top[3];
        for i in 2..n {
            for j in 2..n {
                m[(i, j)] = rng.random_range(-1.0..1.0) / (n as f64);
            }
        }
        // Couple the blocks one way so the spectrum is unchanged.
        for j in 2..n {
            m[(0, j)] = rng.random_range(-0.5..0.5);
        }
        m
    }

    #[test]
    fn power_iteration_agrees_with_schur() {
        // Dominant complex pair 1.5·e^{±0.7i}, dominant real and a ± pair.
        let (s, c) = (libm::sin(0.7), libm::cos(0.7));
        let cases = [
            [1.5 * c, -1.5 * s, 1.5 * s, 1.5 * c],
            [2.5, 0.3, 0.0, 0.4],
            [0.0, 1.0, 1.44, 0.0],
        ];
        for (k, top) in cases.iter().enumerate() {
            let m = block_test_matrix(60, top, k as u64);
            let dense = dense_spectral_radius(&m);
            let power = power_spectral_radius(&m);
            assert!((dense - power).abs() < 1e-6, "case {k}: {dense} vs {power}");
        }
    }
}
