//! Dense complex matrices and the factorization kernels the generalized
//! inverses are built from.

mod matrix;
mod qr;
mod svd;

pub use matrix::{Matrix, C64};
pub use qr::{pivoted_qr, PivotedQrFactors};
pub use svd::{singular_values, svd, SvdFactors};

use crate::error::{Error, Result};

/// Thresholds shared by rank decisions and residual verdicts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    /// Singular values `<= rank_rtol * max(m, n) * sigma_max` count as zero.
    pub rank_rtol: f64,
    pub residual_atol: f64,
    pub residual_rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rank_rtol: f64::EPSILON,
            residual_atol: 1e-9,
            residual_rtol: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(rank_rtol: f64, residual_atol: f64, residual_rtol: f64) -> Result<Self> {
        for (name, v) in [
            ("rank_rtol", rank_rtol),
            ("residual_atol", residual_atol),
            ("residual_rtol", residual_rtol),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(Tolerance {
            rank_rtol,
            residual_atol,
            residual_rtol,
        })
    }

    pub fn with_residual_rtol(self, residual_rtol: f64) -> Result<Self> {
        Self::new(self.rank_rtol, self.residual_atol, residual_rtol)
    }

    fn rank_cutoff(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.rank_rtol * rows.max(cols) as f64 * sigma_max
    }
}

pub fn conj_transpose(a: &Matrix) -> Matrix {
    a.conj_transpose()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    a.matmul(b)
}

pub fn power(a: &Matrix, l: usize) -> Result<Matrix> {
    a.power(l)
}

fn rank_of(sigma: &[f64], rows: usize, cols: usize, tol: &Tolerance) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let cutoff = tol.rank_cutoff(rows, cols, smax);
    sigma.iter().take_while(|&&s| s > cutoff).count()
}

pub fn numerical_rank(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    let s = singular_values(a)?;
    Ok(rank_of(&s, a.rows(), a.cols(), tol))
}

/// Rank of the power `base^exp`, where `base_norm` is `||base||_2`.
///
/// Rounding in a computed `exp`-fold product is of order `exp * eps *
/// ||base||^exp`, which can dwarf the largest singular value of the exact
/// power (a nilpotent base gives pure noise). The cutoff is therefore taken
/// relative to `max(sigma_max, exp * base_norm^exp)`.
pub(crate) fn power_rank(power: &Matrix, base_norm: f64, exp: usize, tol: &Tolerance) -> Result<usize> {
    let s = singular_values(power)?;
    let smax = s.first().copied().unwrap_or(0.0);
    let scale = smax.max(exp as f64 * base_norm.powi(exp as i32));
    if scale == 0.0 {
        return Ok(0);
    }
    let cutoff = tol.rank_cutoff(power.rows(), power.cols(), scale);
    Ok(s.iter().take_while(|&&v| v > cutoff).count())
}

/// Whether the computed power `base^exp` is indistinguishable from zero,
/// judged with Frobenius norms (cheap upper bounds of the spectral norms).
pub(crate) fn power_is_negligible(power: &Matrix, base: &Matrix, exp: usize, tol: &Tolerance) -> bool {
    if exp == 0 {
        return false;
    }
    let bound = exp as f64 * base.frobenius_norm().powi(exp as i32);
    power.frobenius_norm() <= tol.rank_cutoff(power.rows(), power.cols(), bound)
}

/// Largest singular value; zero for empty matrices.
pub fn spectral_norm(a: &Matrix) -> Result<f64> {
    Ok(singular_values(a)?.first().copied().unwrap_or(0.0))
}

/// Moore-Penrose inverse from the SVD truncated at the numerical rank.
pub fn pinv(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let f = svd(a)?;
    Ok(pinv_from_svd(&f, a.rows(), a.cols(), tol))
}

/// Pseudoinverse truncated at a rank fixed by the caller, for products whose
/// rounding noise would fool the default cutoff.
pub(crate) fn pinv_with_rank(a: &Matrix, rank: usize) -> Result<Matrix> {
    let f = svd(a)?;
    Ok(pinv_truncated(&f, a.rows(), a.cols(), rank.min(f.sigma.len())))
}

pub(crate) fn pinv_from_svd(f: &SvdFactors, rows: usize, cols: usize, tol: &Tolerance) -> Matrix {
    pinv_truncated(f, rows, cols, rank_of(&f.sigma, rows, cols, tol))
}

fn pinv_truncated(f: &SvdFactors, rows: usize, cols: usize, r: usize) -> Matrix {
    // V_r * diag(1/sigma) * U_r^*
    let vs = Matrix::from_fn(cols, r, |i, j| f.v[(i, j)] / f.sigma[j]);
    let ur = f.u.block(0, rows, 0, r);
    &vs * &ur.conj_transpose()
}

/// Inverse of a square matrix, or `None` when it is numerically singular
/// under the rank cutoff.
pub fn try_inverse(a: &Matrix, tol: &Tolerance) -> Result<Option<Matrix>> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op: "inverse",
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    let f = svd(a)?;
    if rank_of(&f.sigma, n, n, tol) < n {
        return Ok(None);
    }
    Ok(Some(pinv_from_svd(&f, n, n, tol)))
}
