//! One-sided (Hestenes) Jacobi SVD for complex matrices.
//!
//! The input is oriented so that the Jacobi rotations act on the shorter
//! dimension; the left factor is then completed to a full unitary basis with
//! a Householder QR.

use super::matrix::{Matrix, C64};
use super::qr::householder_complete;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 80;

/// Full SVD `a = u * diag(sigma) * v^*` with `u`, `v` square unitary and
/// `sigma` non-increasing of length `min(rows, cols)`.
#[derive(Clone, Debug)]
pub struct SvdFactors {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl SvdFactors {
    /// `u * diag(sigma) * v^*`, rebuilt from the factors.
    pub fn reconstruct(&self) -> Matrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let us = Matrix::from_fn(m, n, |i, j| {
            if j < self.sigma.len() {
                self.u[(i, j)] * self.sigma[j]
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &us * &self.v.conj_transpose()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }
}

/// Scalars the Jacobi sweep can run on. Real input takes the `f64` path,
/// which is several times cheaper than complex arithmetic.
trait Field: Copy + Send + Sync + std::ops::Mul<Output = Self> + std::ops::Sub<Output = Self> + std::ops::Add<Output = Self> {
    const ZERO: Self;
    const ONE: Self;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> f64;
    fn scale(self, s: f64) -> Self;
    /// `conj(z / |z|)` for `z != 0`.
    fn unit_phase_conj(self, abs: f64) -> Self;
    fn to_c64(self) -> C64;
}

impl Field for f64 {
    const ZERO: Self = 0.0;
    const ONE: Self = 1.0;
    fn conj(self) -> Self {
        self
    }
    fn norm_sqr(self) -> f64 {
        self * self
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn unit_phase_conj(self, _abs: f64) -> Self {
        self.signum()
    }
    fn to_c64(self) -> C64 {
        C64::new(self, 0.0)
    }
}

impl Field for C64 {
    const ZERO: Self = C64::new(0.0, 0.0);
    const ONE: Self = C64::new(1.0, 0.0);
    fn conj(self) -> Self {
        C64::conj(&self)
    }
    fn norm_sqr(self) -> f64 {
        C64::norm_sqr(&self)
    }
    fn scale(self, s: f64) -> Self {
        C64::scale(&self, s)
    }
    fn unit_phase_conj(self, abs: f64) -> Self {
        C64::conj(&(self / abs))
    }
    fn to_c64(self) -> C64 {
        self
    }
}

fn dot<T: Field>(x: &[T], y: &[T]) -> T {
    // x^* y
    x.iter().zip(y).fold(T::ZERO, |acc, (a, b)| acc + a.conj() * *b)
}

fn norm_sqr<T: Field>(x: &[T]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Applies `[x, y] <- [c x - s y', s x + c y']` with `y' = y * phase`.
fn rotate<T: Field>(x: &mut [T], y: &mut [T], c: f64, s: f64, phase: T) {
    for (a, b) in x.iter_mut().zip(y.iter_mut()) {
        let bp = *b * phase;
        let na = a.scale(c) - bp.scale(s);
        *b = a.scale(s) + bp.scale(c);
        *a = na;
    }
}

/// Rotated columns and accumulated right rotations (both stored by column).
struct Jacobi<T> {
    cols: Vec<Vec<T>>,
    v: Option<Vec<Vec<T>>>,
}

impl<T: Field> Jacobi<T> {
    fn new(cols: Vec<Vec<T>>, want_v: bool) -> Self {
        let q = cols.len();
        let v = want_v.then(|| {
            (0..q)
                .map(|j| {
                    let mut e = vec![T::ZERO; q];
                    e[j] = T::ONE;
                    e
                })
                .collect()
        });
        Jacobi { cols, v }
    }

    fn run(&mut self) -> Result<()> {
        let q = self.cols.len();
        if q < 2 {
            return Ok(());
        }
        let p = self.cols[0].len();
        let tol = f64::EPSILON * (p as f64).sqrt().max(1.0);
        for _ in 0..MAX_SWEEPS {
            // Norms are refreshed every sweep and updated in closed form
            // after each rotation.
            let mut norms: Vec<f64> = self.cols.iter().map(|c| norm_sqr(c)).collect();
            let mut rotated = false;
            for i in 0..q - 1 {
                for j in i + 1..q {
                    let (alpha, beta) = (norms[i], norms[j]);
                    if alpha <= f64::MIN_POSITIVE || beta <= f64::MIN_POSITIVE {
                        continue;
                    }
                    let (left, right) = self.cols.split_at_mut(j);
                    let (ci, cj) = (&mut left[i], &mut right[0]);
                    let gamma = dot(ci, cj);
                    let g = gamma.norm_sqr().sqrt();
                    if g <= tol * (alpha.sqrt() * beta.sqrt()) {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma.unit_phase_conj(g);
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    rotate(ci, cj, c, s, phase);
                    let (na, nb) = (alpha - t * g, beta + t * g);
                    // Fall back to explicit norms under heavy cancellation.
                    norms[i] = if na > 1e-4 * alpha { na } else { norm_sqr(ci) };
                    norms[j] = if nb > 1e-4 * beta { nb } else { norm_sqr(cj) };
                    if let Some(v) = self.v.as_mut() {
                        let (vl, vr) = v.split_at_mut(j);
                        rotate(&mut vl[i], &mut vr[0], c, s, phase);
                    }
                }
            }
            if !rotated {
                return Ok(());
            }
        }
        Err(Error::Convergence { sweeps: MAX_SWEEPS })
    }

    fn into_complex(self) -> Rotated {
        let conv = |cols: Vec<Vec<T>>| -> Vec<Vec<C64>> {
            cols.into_iter()
                .map(|c| c.into_iter().map(Field::to_c64).collect())
                .collect()
        };
        Rotated {
            cols: conv(self.cols),
            v: self.v.map(conv),
        }
    }
}

struct Rotated {
    cols: Vec<Vec<C64>>,
    v: Option<Vec<Vec<C64>>>,
}

/// Runs Jacobi on the columns of `b`, in real arithmetic when `b` is real.
fn jacobi_columns(b: &Matrix, want_v: bool) -> Result<Rotated> {
    let q = b.cols();
    if b.is_real() {
        let cols = (0..q).map(|j| b.column(j).iter().map(|z| z.re).collect()).collect();
        let mut jac = Jacobi::<f64>::new(cols, want_v);
        jac.run()?;
        Ok(jac.into_complex())
    } else {
        let cols = (0..q).map(|j| b.column(j)).collect();
        let mut jac = Jacobi::<C64>::new(cols, want_v);
        jac.run()?;
        Ok(jac.into_complex())
    }
}

fn oriented(a: &Matrix) -> (Matrix, bool) {
    if a.rows() >= a.cols() {
        (a.clone(), false)
    } else {
        (a.conj_transpose(), true)
    }
}

/// Singular values only, non-increasing.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    let (b, _) = oriented(a);
    let jac = jacobi_columns(&b, false)?;
    let mut s: Vec<f64> = jac.cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

/// Full singular value decomposition.
pub fn svd(a: &Matrix) -> Result<SvdFactors> {
    let (b, transposed) = oriented(a);
    let (p, q) = b.shape();
    let jac = jacobi_columns(&b, true)?;
    let vcols = jac.v.expect("requested right factor");

    let norms: Vec<f64> = jac.cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let sigma: Vec<f64> = order.iter().map(|&j| norms[j]).collect();

    // Columns with a zero norm carry no direction; the basis completion
    // supplies those.
    let kept = sigma.iter().take_while(|&&s| s > f64::MIN_POSITIVE).count();
    let mut left = Matrix::zeros(p, kept);
    for (jj, &j) in order.iter().take(kept).enumerate() {
        let inv = 1.0 / norms[j];
        for i in 0..p {
            left[(i, jj)] = jac.cols[j][i] * inv;
        }
    }
    let u_full = householder_complete(&left);
    let right = Matrix::from_fn(q, q, |i, jj| vcols[order[jj]][i]);

    Ok(if transposed {
        SvdFactors { u: right, sigma, v: u_full }
    } else {
        SvdFactors { u: u_full, sigma, v: right }
    })
}
