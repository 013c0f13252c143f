//! Residual characterization of the W-weighted core-EP inverse and checks of
//! its range, projector and outer-inverse properties.
//!
//! Subspace comparisons work on orthonormal bases taken from the SVD of each
//! generator. Because every matrix compared here is itself a computed result,
//! ranks inside this module use the verification tolerance `residual_rtol`
//! (relative to each generator's largest singular value) rather than the much
//! tighter factorization cutoff.

use crate::dense::{pinv, singular_values, spectral_norm, svd, Matrix, Tolerance};
use crate::error::{Error, Result};
use crate::genin::{drazin_with_index, wcep_def, weighted_drazin, WeightedPair};

/// Spectral-norm defects of the three characterizing equations
/// `X W (AW)^(k+1) = (AW)^k`, `AW X W X = X`, `(WAW X)^* = WAW X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResidualReport {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    /// `r1 / (1 + ||(AW)^k||)`
    pub r1_rel: f64,
    /// `r2 / (1 + ||X||)`
    pub r2_rel: f64,
    /// `r3 / (1 + ||WAW X||)`
    pub r3_rel: f64,
    pub pass: bool,
}

impl ResidualReport {
    pub fn absolute(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }

    pub fn relative(&self) -> [f64; 3] {
        [self.r1_rel, self.r2_rel, self.r3_rel]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubspaceCompareResult {
    pub equal: bool,
    pub rank_lhs: usize,
    pub rank_rhs: usize,
    pub rank_union: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceMode {
    /// Column spaces.
    Range,
    /// Null spaces, compared through the row spaces.
    Nullspace,
}

/// Computes the three residuals with `k = p.k()`.
///
/// The verdict requires every relative residual to be at most
/// `residual_rtol`, and every absolute residual to be at most
/// `residual_atol` times the norm-product bound of the terms it is formed
/// from (for `r1`: `||X|| ||W|| ||AW||^(k+1) + ||AW||^k`, and so on).
pub fn residuals(p: &WeightedPair, x: &Matrix, tol: &Tolerance) -> Result<ResidualReport> {
    if x.shape() != (p.m(), p.n()) {
        return Err(Error::DimensionMismatch {
            op: "residuals",
            left: x.shape(),
            right: (p.m(), p.n()),
        });
    }
    let aw = p.aw();
    let awk = aw.power(p.k())?;
    let awk1 = &awk * aw;
    let xw = x * p.w();

    let r1 = spectral_norm(&(&(&xw * &awk1) - &awk))?;
    let r2 = spectral_norm(&(&(&(aw * &xw) * x) - x))?;
    let t = &p.waw() * x;
    let r3 = spectral_norm(&(&t.conj_transpose() - &t))?;

    let n_awk = spectral_norm(&awk)?;
    let n_x = spectral_norm(x)?;
    let n_t = spectral_norm(&t)?;
    let n_w = spectral_norm(p.w())?;
    let n_aw = spectral_norm(aw)?;
    let k = p.k() as i32;

    let rel = [r1 / (1.0 + n_awk), r2 / (1.0 + n_x), r3 / (1.0 + n_t)];
    // Norm products bound the size of every term, and so its rounding error.
    let scales = [
        n_x * n_w * n_aw.powi(k + 1) + n_aw.powi(k),
        n_aw * n_x * n_w * n_x + n_x,
        2.0 * n_w * n_aw * n_x,
    ];
    let abs = [r1, r2, r3];
    let pass = rel.iter().all(|&r| r <= tol.residual_rtol)
        && abs.iter().zip(&scales).all(|(&r, &s)| r <= tol.residual_atol * s);

    Ok(ResidualReport {
        r1,
        r2,
        r3,
        r1_rel: rel[0],
        r2_rel: rel[1],
        r3_rel: rel[2],
        pass,
    })
}

/// True iff `x` passes the residual verdict; malformed input counts as a fail.
pub fn check_wcep_axioms(p: &WeightedPair, x: &Matrix, tol: &Tolerance) -> bool {
    residuals(p, x, tol).map(|r| r.pass).unwrap_or(false)
}

/// Four Penrose residuals of `x` as a pseudoinverse of `a`, each relative to
/// `1 + ||reference||`: `AXA - A`, `XAX - X`, `(AX)^* - AX`, `(XA)^* - XA`.
pub fn penrose_residuals(a: &Matrix, x: &Matrix) -> Result<[f64; 4]> {
    let ax = a.matmul(x)?;
    let xa = x.matmul(a)?;
    let e1 = spectral_norm(&(&(&ax * a) - a))? / (1.0 + spectral_norm(a)?);
    let e2 = spectral_norm(&(&(&xa * x) - x))? / (1.0 + spectral_norm(x)?);
    let e3 = spectral_norm(&(&ax.conj_transpose() - &ax))? / (1.0 + spectral_norm(&ax)?);
    let e4 = spectral_norm(&(&xa.conj_transpose() - &xa))? / (1.0 + spectral_norm(&xa)?);
    Ok([e1, e2, e3, e4])
}

/// Counts `sigma > rtol * max(sigma_max, floor)`. The floor is the size of
/// the factors a generator was multiplied from, below which a computed
/// product cannot be told apart from rounding noise.
fn rank_cut(sigma: &[f64], rtol: f64, floor: f64) -> usize {
    let scale = sigma.first().copied().unwrap_or(0.0).max(floor);
    if scale == 0.0 {
        return 0;
    }
    sigma.iter().take_while(|&&s| s > rtol * scale).count()
}

/// `exp * ||base||^exp`, the rounding scale of a computed power.
fn power_floor(base: &Matrix, exp: usize) -> Result<f64> {
    if exp == 0 {
        return Ok(0.0);
    }
    Ok(exp as f64 * spectral_norm(base)?.powi(exp as i32))
}

/// Orthonormal basis of the column space at the verification tolerance.
fn range_basis(g: &Matrix, floor: f64, tol: &Tolerance) -> Result<Matrix> {
    let f = svd(g)?;
    let r = rank_cut(&f.sigma, tol.residual_rtol, floor);
    Ok(f.u.block(0, g.rows(), 0, r))
}

/// Orthonormal basis of the null space at the verification tolerance.
fn null_basis(g: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let f = svd(g)?;
    let r = rank_cut(&f.sigma, tol.residual_rtol, 0.0);
    Ok(f.v.block(0, g.cols(), r, g.cols()))
}

fn union_rank(b1: &Matrix, b2: &Matrix, tol: &Tolerance) -> Result<usize> {
    if b1.cols() + b2.cols() == 0 {
        return Ok(0);
    }
    let s = singular_values(&b1.hstack(b2)?)?;
    Ok(rank_cut(&s, tol.residual_rtol, 0.0))
}

fn oriented<'a>(g: &'a Matrix, mode: SubspaceMode) -> std::borrow::Cow<'a, Matrix> {
    match mode {
        SubspaceMode::Range => std::borrow::Cow::Borrowed(g),
        SubspaceMode::Nullspace => std::borrow::Cow::Owned(g.conj_transpose()),
    }
}

/// A generator together with its rounding floor (see [`rank_cut`]).
type Gen<'a> = (&'a Matrix, f64);

fn compare((g1, f1): Gen, (g2, f2): Gen, mode: SubspaceMode, tol: &Tolerance) -> Result<SubspaceCompareResult> {
    let (d1, d2) = match mode {
        SubspaceMode::Range => (g1.rows(), g2.rows()),
        SubspaceMode::Nullspace => (g1.cols(), g2.cols()),
    };
    if d1 != d2 {
        return Err(Error::DimensionMismatch {
            op: "subspace_equal",
            left: g1.shape(),
            right: g2.shape(),
        });
    }
    let b1 = range_basis(&oriented(g1, mode), f1, tol)?;
    let b2 = range_basis(&oriented(g2, mode), f2, tol)?;
    let rank_union = union_rank(&b1, &b2, tol)?;
    let (rank_lhs, rank_rhs) = (b1.cols(), b2.cols());
    Ok(SubspaceCompareResult {
        equal: rank_lhs == rank_rhs && rank_rhs == rank_union,
        rank_lhs,
        rank_rhs,
        rank_union,
    })
}

/// Compares column spaces (`Range`) or null spaces (`Nullspace`) of two
/// generators by the rank of the concatenated bases.
pub fn subspace_equal(
    g1: &Matrix,
    g2: &Matrix,
    mode: SubspaceMode,
    tol: &Tolerance,
) -> Result<SubspaceCompareResult> {
    compare((g1, 0.0), (g2, 0.0), mode, tol)
}

/// `R(sub) ⊆ R(sup)` in range mode; row space of `sub` inside the row space
/// of `sup` in null-space mode.
pub fn subspace_contained(sub: &Matrix, sup: &Matrix, mode: SubspaceMode, tol: &Tolerance) -> Result<bool> {
    contained((sub, 0.0), (sup, 0.0), mode, tol)
}

fn contained(sub: Gen, sup: Gen, mode: SubspaceMode, tol: &Tolerance) -> Result<bool> {
    let c = compare(sub, sup, mode, tol)?;
    Ok(c.rank_union == c.rank_rhs)
}

fn defect_ok(lhs: &Matrix, rhs: &Matrix, scale: f64, tol: &Tolerance) -> Result<bool> {
    Ok(spectral_norm(&(lhs - rhs))? <= tol.residual_rtol * (1.0 + scale))
}

/// `R(X) = R((AW)^k)` and `N(X) = N([(WA)^k]^*)`.
pub fn check_range_null(p: &WeightedPair, x: &Matrix, tol: &Tolerance) -> Result<bool> {
    let awk = p.aw().power(p.k())?;
    let wak_h = p.wa().power(p.k())?.conj_transpose();
    let (fa, fw) = (power_floor(p.aw(), p.k())?, power_floor(p.wa(), p.k())?);
    Ok(compare((x, 0.0), (&awk, fa), SubspaceMode::Range, tol)?.equal
        && compare((x, 0.0), (&wak_h, fw), SubspaceMode::Nullspace, tol)?.equal)
}

fn direct_sum_holds(mat: &Matrix, tol: &Tolerance) -> Result<bool> {
    let dim = mat.rows();
    let range = range_basis(mat, 0.0, tol)?;
    let null = null_basis(mat, tol)?;
    if range.cols() + null.cols() != dim {
        return Ok(false);
    }
    Ok(union_rank(&range, &null, tol)? == dim)
}

/// `R(XW) ⊕ N(XW) = C^m` and `R(WX) ⊕ N(WX) = C^n`.
pub fn check_direct_sum(p: &WeightedPair, x: &Matrix, tol: &Tolerance) -> Result<bool> {
    Ok(direct_sum_holds(&(x * p.w()), tol)? && direct_sum_holds(&(p.w() * x), tol)?)
}

/// `WAW X` is an orthogonal projector onto `R((WA)^k)` and `W X WA` a
/// (generally oblique) projector onto the same space.
pub fn check_projectors(p: &WeightedPair, x: &Matrix, tol: &Tolerance) -> Result<bool> {
    let wak = p.wa().power(p.k())?;
    let floor = power_floor(p.wa(), p.k())?;
    let orth = &p.waw() * x;
    let obl = &(p.w() * x) * p.wa();
    for (proj, hermitian) in [(&orth, true), (&obl, false)] {
        let s = spectral_norm(proj)?;
        let scale = (1.0 + s) * (1.0 + s);
        if !defect_ok(&(proj * proj), proj, scale - 1.0, tol)? {
            return Ok(false);
        }
        if hermitian && !defect_ok(&proj.conj_transpose(), proj, s, tol)? {
            return Ok(false);
        }
        if !compare((proj, 0.0), (&wak, floor), SubspaceMode::Range, tol)?.equal {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both projector relations with the weighted Drazin inverse:
/// `X = A^{D,W} (WA)^k [(WA)^k]^+` and `A^{D,W} = X WA (WA)^D`.
pub fn check_drazin_relation(p: &WeightedPair, tol: &Tolerance) -> Result<bool> {
    let x = wcep_def(p, tol)?;
    let xd = weighted_drazin(p, tol)?;
    let wak = p.wa().power(p.k())?;
    let orth = &wak * &pinv(&wak, tol)?;
    let oblique = p.wa() * &drazin_with_index(p.wa(), p.k_wa(), tol)?;
    let sx = spectral_norm(&x)?;
    let sd = spectral_norm(&xd)?;
    Ok(defect_ok(&(&xd * &orth), &x, sx, tol)? && defect_ok(&(&x * &oblique), &xd, sd, tol)?)
}

/// `X` is the inverse of `WAW` along `D = A (WA)^k [(WA)^k]^*`:
/// `X B D = D = D B X` with `B = WAW`, and both the row and column spaces of
/// `X` inside those of `D`.
pub fn check_inverse_along(p: &WeightedPair, tol: &Tolerance) -> Result<bool> {
    let x = wcep_def(p, tol)?;
    let b = p.waw();
    let wak = p.wa().power(p.k())?;
    let d = &(p.a() * &wak) * &wak.conj_transpose();
    let sd = spectral_norm(&d)?;
    let floor = spectral_norm(p.a())? * power_floor(p.wa(), 2 * p.k())?;
    Ok(defect_ok(&(&(&x * &b) * &d), &d, sd, tol)?
        && defect_ok(&(&(&d * &b) * &x), &d, sd, tol)?
        && contained((&x, 0.0), (&d, floor), SubspaceMode::Nullspace, tol)?
        && contained((&x, 0.0), (&d, floor), SubspaceMode::Range, tol)?)
}

/// `X` is the `((AW)^k, [(WA)^k]^*)`-inverse of `WAW`:
/// `X WAW B = B`, `C WAW X = C`, `R(X) ⊆ R(B)` and the row space of `X`
/// inside that of `C`.
pub fn check_bc_inverse(p: &WeightedPair, tol: &Tolerance) -> Result<bool> {
    let x = wcep_def(p, tol)?;
    let waw = p.waw();
    let b = p.aw().power(p.k())?;
    let c = p.wa().power(p.k())?.conj_transpose();
    let sb = spectral_norm(&b)?;
    let sc = spectral_norm(&c)?;
    Ok(defect_ok(&(&(&x * &waw) * &b), &b, sb, tol)?
        && defect_ok(&(&(&c * &waw) * &x), &c, sc, tol)?
        && contained((&x, 0.0), (&b, power_floor(p.aw(), p.k())?), SubspaceMode::Range, tol)?
        && contained((&x, 0.0), (&c, power_floor(p.wa(), p.k())?), SubspaceMode::Nullspace, tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::C64;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn e2() -> WeightedPair {
        let a = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]);
        let w = Matrix::from_rows(&[[1.0, 0.0, 0.0], [0.0, 0.0, 0.0]]);
        WeightedPair::new(a, w, &tol()).unwrap()
    }

    fn e2_solution() -> Matrix {
        Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
    }

    fn invertible_pair() -> (WeightedPair, Matrix) {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]);
        let inv = Matrix::from_rows(&[[0.6, -0.2], [-0.2, 0.4]]);
        (WeightedPair::new(a, Matrix::identity(2), &tol()).unwrap(), inv)
    }

    #[test]
    fn exact_fixture_has_zero_residuals() {
        let r = residuals(&e2(), &e2_solution(), &tol()).unwrap();
        assert_eq!(r.absolute(), [0.0, 0.0, 0.0]);
        assert!(r.pass);
    }

    #[test]
    fn axioms_examples() {
        assert!(check_wcep_axioms(&e2(), &e2_solution(), &tol()));
        let zero = Matrix::zeros(3, 2);
        assert!(!check_wcep_axioms(&e2(), &zero, &tol()));
        let r = residuals(&e2(), &zero, &tol()).unwrap();
        assert!((r.r1 - 1.0).abs() < 1e-15);

        let (p, inv) = invertible_pair();
        assert!(check_wcep_axioms(&p, &inv, &tol()));
    }

    #[test]
    fn perturbation_fails() {
        let mut e = Matrix::zeros(3, 2);
        e[(1, 1)] = C64::new(1.0, 0.0);
        let x = &e2_solution() + &e.scale_real(1e-3);
        let r = residuals(&e2(), &x, &tol()).unwrap();
        assert!(!r.pass);
        assert!(r.relative().iter().any(|&v| v > 10.0 * tol().residual_rtol));
    }

    #[test]
    fn residuals_reject_wrong_shape() {
        assert!(matches!(
            residuals(&e2(), &Matrix::zeros(2, 3), &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(!check_wcep_axioms(&e2(), &Matrix::zeros(2, 3), &tol()));
    }

    #[test]
    fn subspace_examples() {
        let i2 = Matrix::identity(2);
        let r = subspace_equal(&i2, &i2.scale_real(2.0), SubspaceMode::Range, &tol()).unwrap();
        assert!(r.equal);
        assert_eq!((r.rank_lhs, r.rank_rhs, r.rank_union), (2, 2, 2));

        let e1 = Matrix::from_rows(&[[1.0], [0.0]]);
        let e2c = Matrix::from_rows(&[[0.0], [1.0]]);
        let r = subspace_equal(&e1, &e2c, SubspaceMode::Range, &tol()).unwrap();
        assert!(!r.equal);
        assert_eq!(r.rank_union, 2);

        let p = e2();
        let awk = p.aw().power(p.k()).unwrap();
        assert!(subspace_equal(&e2_solution(), &awk, SubspaceMode::Range, &tol()).unwrap().equal);

        assert!(subspace_equal(&e1, &Matrix::zeros(3, 1), SubspaceMode::Range, &tol()).is_err());
    }

    #[test]
    fn nullspace_mode() {
        // N([1 0]) = span(e2) = N([2 0; 0 0])
        let a = Matrix::from_rows(&[[1.0, 0.0]]);
        let b = Matrix::from_rows(&[[2.0, 0.0], [0.0, 0.0]]);
        assert!(subspace_equal(&a, &b, SubspaceMode::Nullspace, &tol()).unwrap().equal);
        let c = Matrix::from_rows(&[[0.0, 1.0]]);
        assert!(!subspace_equal(&a, &c, SubspaceMode::Nullspace, &tol()).unwrap().equal);
        assert!(subspace_contained(&a, &Matrix::identity(2), SubspaceMode::Nullspace, &tol()).unwrap());
        assert!(!subspace_contained(&Matrix::identity(2), &a, SubspaceMode::Nullspace, &tol()).unwrap());
    }

    #[test]
    fn property_checks_on_fixtures() {
        let p = e2();
        let x = e2_solution();
        assert!(check_range_null(&p, &x, &tol()).unwrap());
        assert!(check_direct_sum(&p, &x, &tol()).unwrap());
        assert!(check_projectors(&p, &x, &tol()).unwrap());
        assert!(check_drazin_relation(&p, &tol()).unwrap());
        assert!(check_inverse_along(&p, &tol()).unwrap());
        assert!(check_bc_inverse(&p, &tol()).unwrap());

        let (p, inv) = invertible_pair();
        assert!(check_range_null(&p, &inv, &tol()).unwrap());
        assert!(check_direct_sum(&p, &inv, &tol()).unwrap());
        assert!(check_projectors(&p, &inv, &tol()).unwrap());
        assert!(check_drazin_relation(&p, &tol()).unwrap());
        assert!(check_inverse_along(&p, &tol()).unwrap());
        assert!(check_bc_inverse(&p, &tol()).unwrap());
    }

    #[test]
    fn property_checks_reject_wrong_candidate() {
        let p = e2();
        // Same range as the solution but wrong null space.
        let bad = Matrix::from_rows(&[[1.0, 1.0], [0.0, 0.0], [0.0, 0.0]]);
        assert!(!check_range_null(&p, &bad, &tol()).unwrap());
        assert!(!check_projectors(&p, &bad, &tol()).unwrap());
    }

    #[test]
    fn penrose_on_exact_pinv() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [0.0, 0.0]]);
        let x = Matrix::from_rows(&[[0.5, 0.0], [0.5, 0.0]]);
        assert!(penrose_residuals(&a, &x).unwrap().iter().all(|&e| e < 1e-15));
        let wrong = Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]);
        assert!(penrose_residuals(&a, &wrong).unwrap().iter().any(|&e| e > 0.1));
    }
}
