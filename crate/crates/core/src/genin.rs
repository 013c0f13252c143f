//! Index, Drazin, core-EP, weighted Drazin and the pseudoinverse-only
//! formulas for the W-weighted core-EP inverse.

use crate::dense::{pinv_with_rank, power_is_negligible, power_rank, spectral_norm, Matrix, Tolerance};
use crate::error::{Error, Result};

/// An `m x n` matrix `A` with an `n x m` weight `W`, with both indices cached.
#[derive(Clone, Debug)]
pub struct WeightedPair {
    a: Matrix,
    w: Matrix,
    aw: Matrix,
    wa: Matrix,
    k_aw: usize,
    k_wa: usize,
}

impl WeightedPair {
    pub fn new(a: Matrix, w: Matrix, tol: &Tolerance) -> Result<Self> {
        if a.rows() != w.cols() || a.cols() != w.rows() {
            return Err(Error::DimensionMismatch {
                op: "weighted pair",
                left: a.shape(),
                right: w.shape(),
            });
        }
        let aw = &a * &w;
        let wa = &w * &a;
        let k_aw = index(&aw, tol)?;
        let k_wa = index(&wa, tol)?;
        Ok(WeightedPair { a, w, aw, wa, k_aw, k_wa })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn w(&self) -> &Matrix {
        &self.w
    }

    /// `A W`, `m x m`.
    pub fn aw(&self) -> &Matrix {
        &self.aw
    }

    /// `W A`, `n x n`.
    pub fn wa(&self) -> &Matrix {
        &self.wa
    }

    pub fn m(&self) -> usize {
        self.a.rows()
    }

    pub fn n(&self) -> usize {
        self.a.cols()
    }

    pub fn k_aw(&self) -> usize {
        self.k_aw
    }

    pub fn k_wa(&self) -> usize {
        self.k_wa
    }

    /// `max(ind(AW), ind(WA))`.
    pub fn k(&self) -> usize {
        self.k_aw.max(self.k_wa)
    }

    /// `W A W`, `n x m`.
    pub fn waw(&self) -> Matrix {
        &self.wa * &self.w
    }
}

/// The power `l >= k` used by the formula-based representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentChoice {
    l: usize,
}

impl ExponentChoice {
    /// `l` defaults to the pair's `k`.
    pub fn for_pair(pair: &WeightedPair, l: Option<usize>) -> Result<Self> {
        let k = pair.k();
        let l = l.unwrap_or(k);
        if l < k {
            return Err(Error::ExponentTooSmall { l, k });
        }
        Ok(ExponentChoice { l })
    }

    pub fn get(self) -> usize {
        self.l
    }

    fn checked(self, pair: &WeightedPair) -> Result<usize> {
        if self.l < pair.k() {
            return Err(Error::ExponentTooSmall { l: self.l, k: pair.k() });
        }
        Ok(self.l)
    }
}

fn require_square(a: &Matrix, op: &'static str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            op,
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Ok(())
}

/// Smallest `k >= 0` with `rank(a^k) = rank(a^(k+1))`.
///
/// Ranks of powers are cut relative to the rounding level of the power, so
/// a nilpotent matrix is recognized even though its high powers come out as
/// noise rather than exact zeros.
pub fn index(a: &Matrix, tol: &Tolerance) -> Result<usize> {
    require_square(a, "index")?;
    let n = a.rows();
    let norm = spectral_norm(a)?;
    let mut prev = n;
    for k in 0..n {
        let r = power_rank(&a.power(k + 1)?, norm, k + 1, tol)?;
        if r == prev {
            return Ok(k);
        }
        prev = r;
    }
    Ok(n)
}

/// Rank of `base^exp`, which is also the rank every pseudoinverted factor
/// in the formulas below must have once `exp` reaches the index.
pub(crate) fn stable_rank(power: &Matrix, base: &Matrix, exp: usize, tol: &Tolerance) -> Result<usize> {
    power_rank(power, spectral_norm(base)?, exp, tol)
}

/// Drazin inverse `A^k (A^(2k+1))^+ A^k` with `k = ind(A)`.
pub fn drazin(a: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let k = index(a, tol)?;
    drazin_with_index(a, k, tol)
}

pub(crate) fn drazin_with_index(a: &Matrix, k: usize, tol: &Tolerance) -> Result<Matrix> {
    require_square(a, "drazin")?;
    let ak = a.power(k)?;
    if power_is_negligible(&ak, a, k, tol) {
        return Ok(Matrix::zeros(a.rows(), a.cols()));
    }
    let r = stable_rank(&ak, a, k, tol)?;
    let inner = pinv_with_rank(&(&(&ak * &ak) * a), r)?;
    Ok(&(&ak * &inner) * &ak)
}

/// Core-EP inverse `A^l (A^(l+1))^+`. Without `l`, uses `max(ind(A), 1)`.
pub fn core_ep(a: &Matrix, l: Option<usize>, tol: &Tolerance) -> Result<Matrix> {
    let k = index(a, tol)?;
    core_ep_with_index(a, k, l, tol)
}

pub(crate) fn core_ep_with_index(
    a: &Matrix,
    k: usize,
    l: Option<usize>,
    tol: &Tolerance,
) -> Result<Matrix> {
    require_square(a, "core_ep")?;
    let l = match l {
        Some(l) if l < k => return Err(Error::ExponentTooSmall { l, k }),
        Some(l) => l,
        None => k.max(1),
    };
    let al = a.power(l)?;
    if power_is_negligible(&al, a, l, tol) {
        return Ok(Matrix::zeros(a.rows(), a.cols()));
    }
    let r = stable_rank(&al, a, l, tol)?;
    let al1 = &al * a;
    Ok(&al * &pinv_with_rank(&al1, r)?)
}

/// `A [(WA)^core-EP]^2`, the defining product form.
pub fn wcep_def(p: &WeightedPair, tol: &Tolerance) -> Result<Matrix> {
    let c = core_ep_with_index(p.wa(), p.k_wa(), None, tol)?;
    Ok(&(p.a() * &c) * &c)
}

/// Two-pseudoinverse form `[W (AW)^(l+1) ((AW)^l)^+]^+`
/// (labelled `eq13` on the command line).
pub fn wcep_two_pinv(p: &WeightedPair, l: ExponentChoice, tol: &Tolerance) -> Result<Matrix> {
    let l = l.checked(p)?;
    let aw = p.a() * p.w();
    let aw_l = aw.power(l)?;
    if power_is_negligible(&aw_l, &aw, l, tol) {
        return Ok(Matrix::zeros(p.m(), p.n()));
    }
    let r = stable_rank(&aw_l, &aw, l, tol)?;
    let aw_l1 = &aw_l * &aw;
    let inner = &(p.w() * &aw_l1) * &pinv_with_rank(&aw_l, r)?;
    pinv_with_rank(&inner, r)
}

/// Single-pseudoinverse form on the `AW` side, `(AW)^l [W (AW)^(l+1)]^+`
/// (labelled `eq28`). Cheaper when `m < n`.
pub fn wcep_aw_pinv(p: &WeightedPair, l: ExponentChoice, tol: &Tolerance) -> Result<Matrix> {
    let l = l.checked(p)?;
    let aw = p.a() * p.w();
    let aw_l = aw.power(l)?;
    if power_is_negligible(&aw_l, &aw, l, tol) {
        return Ok(Matrix::zeros(p.m(), p.n()));
    }
    let r = stable_rank(&aw_l, &aw, l, tol)?;
    let aw_l1 = &aw_l * &aw;
    let lhs = p.w() * &aw_l1;
    Ok(&aw_l * &pinv_with_rank(&lhs, r)?)
}

/// Single-pseudoinverse form on the `WA` side, `A (WA)^l [(WA)^(l+2)]^+`
/// (labelled `eq29`). Cheaper when `m >= n`.
pub fn wcep_wa_pinv(p: &WeightedPair, l: ExponentChoice, tol: &Tolerance) -> Result<Matrix> {
    let l = l.checked(p)?;
    let wa = p.w() * p.a();
    let wa2 = &wa * &wa;
    let wa_l = wa.power(l)?;
    if power_is_negligible(&wa_l, &wa, l, tol) {
        return Ok(Matrix::zeros(p.m(), p.n()));
    }
    let r = stable_rank(&wa_l, &wa, l, tol)?;
    let wa_l2 = &wa_l * &wa2;
    Ok(&(p.a() * &wa_l) * &pinv_with_rank(&wa_l2, r)?)
}

/// W-weighted Drazin inverse `A [(WA)^D]^2`.
pub fn weighted_drazin(p: &WeightedPair, tol: &Tolerance) -> Result<Matrix> {
    let d = drazin_with_index(p.wa(), p.k_wa(), tol)?;
    Ok(&(p.a() * &d) * &d)
}
