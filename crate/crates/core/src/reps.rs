//! Decomposition-based representations of the W-weighted core-EP inverse.
//!
//! The weighted core-EP inverse is the outer inverse of `WAW` whose range and
//! null space are those of `G = A (WA)^k [(WA)^k]^+`. Any full-rank
//! factorization `G = U V` then gives `X = U (V WAW U)^-1 V`; the SVD,
//! pivoted-QR and GAS forms below are instances of that identity, plus the
//! canonical form built from separate SVDs of `A` and `W`.

use crate::dense::{numerical_rank, pinv_with_rank, pivoted_qr, power_is_negligible, spectral_norm, svd, try_inverse, Matrix, Tolerance};
use crate::error::{Error, Result};
use crate::genin::{core_ep, stable_rank, WeightedPair};

/// Relative threshold for the structural checks on caller-supplied GAS
/// factors (vanishing off-diagonal blocks, nilpotent products).
pub const GAS_STRUCTURE_RTOL: f64 = 1e-8;

/// `G = U V` with `U` of full column rank `s` and `V` of full row rank `s`.
#[derive(Clone, Debug)]
pub struct FullRankFactors {
    pub u: Matrix,
    pub v: Matrix,
    pub s: usize,
}

/// Generator whose column space and null space prescribe an outer inverse.
#[derive(Clone, Debug)]
pub struct RangeNullSpec {
    pub g: Matrix,
}

/// Factors of a simultaneous block decomposition
/// `A = P diag(A11, A22) Q^-1`, `W = Q diag(W11, W22) P^-1`
/// with `A11`, `W11` invertible and `A22 W22`, `W22 A22` nilpotent.
#[derive(Clone, Debug)]
pub struct GasFactors {
    pub p: Matrix,
    pub q: Matrix,
    pub r1: usize,
    pub r2: usize,
}

/// Which of the two equivalent pivoted-QR forms to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum QrVariant {
    /// `Q1 (R1 P^* WAW Q1)^-1 R1 P^*`.
    #[default]
    RFactor,
    /// `Q1 (Q1^* G WAW Q1)^-1 Q1^* G`.
    Projected,
}

/// Compact-SVD full-rank factorization: `u = U_s diag(sigma)`, `v = V_s^*`.
pub fn full_rank_decompose(g: &Matrix, tol: &Tolerance) -> Result<FullRankFactors> {
    let f = svd(g)?;
    let s = numerical_rank_from(&f.sigma, g, tol);
    if s == 0 {
        return Err(Error::ZeroMatrix);
    }
    let u = Matrix::from_fn(g.rows(), s, |i, j| f.u[(i, j)] * f.sigma[j]);
    let v = f.v.block(0, g.cols(), 0, s).conj_transpose();
    Ok(FullRankFactors { u, v, s })
}

fn numerical_rank_from(sigma: &[f64], g: &Matrix, tol: &Tolerance) -> usize {
    let smax = sigma.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    let cutoff = tol.rank_rtol * g.rows().max(g.cols()) as f64 * smax;
    sigma.iter().take_while(|&&s| s > cutoff).count()
}

/// `A^(2)_{T,S} = U (V A U)^-1 V` for `T = R(U)`, `S = N(V)`.
pub fn outer_inverse_ts(a: &Matrix, f: &FullRankFactors, tol: &Tolerance) -> Result<Matrix> {
    if f.u.rows() != a.cols() || f.v.cols() != a.rows() || f.u.cols() != f.v.rows() {
        return Err(Error::DimensionMismatch {
            op: "outer_inverse_ts",
            left: f.v.shape(),
            right: f.u.shape(),
        });
    }
    let inner = &(&f.v * a) * &f.u;
    let inv = try_inverse(&inner, tol)?.ok_or(Error::OuterInverseMissing)?;
    Ok(&(&f.u * &inv) * &f.v)
}

/// `G = A (WA)^k [(WA)^k]^+`.
pub fn wcep_generator(p: &WeightedPair, tol: &Tolerance) -> Result<RangeNullSpec> {
    let wak = p.wa().power(p.k())?;
    if power_is_negligible(&wak, p.wa(), p.k(), tol) {
        return Ok(RangeNullSpec {
            g: Matrix::zeros(p.m(), p.n()),
        });
    }
    let r = stable_rank(&wak, p.wa(), p.k(), tol)?;
    let g = &(p.a() * &wak) * &pinv_with_rank(&wak, r)?;
    Ok(RangeNullSpec { g })
}

/// Full-rank representation `U (V WAW U)^-1 V` with `G = U V`.
pub fn wcep_full_rank(p: &WeightedPair, tol: &Tolerance) -> Result<Matrix> {
    let g = wcep_generator(p, tol)?.g;
    let f = match full_rank_decompose(&g, tol) {
        Ok(f) => f,
        Err(Error::ZeroMatrix) => return Ok(Matrix::zeros(p.m(), p.n())),
        Err(e) => return Err(e),
    };
    outer_inverse_ts(&p.waw(), &f, tol).map_err(|e| match e {
        Error::OuterInverseMissing => Error::SingularInner("full-rank representation"),
        e => e,
    })
}

/// Canonical form from the SVDs of `A` and `W`:
/// `U1 [S1 H1 (core-EP of S2 R1 S1 H1)^2, 0; 0, 0] S^*`.
pub fn wcep_svd_canonical(p: &WeightedPair, tol: &Tolerance) -> Result<Matrix> {
    let (m, n) = (p.m(), p.n());
    let fa = svd(p.a())?;
    let fw = svd(p.w())?;
    let r = numerical_rank_from(&fa.sigma, p.a(), tol);
    let s = numerical_rank_from(&fw.sigma, p.w(), tol);
    if r == 0 || s == 0 {
        return Ok(Matrix::zeros(m, n));
    }
    // A = U1 diag(S1, 0) V1^*,  W = S diag(S2, 0) T^*
    let u1 = &fa.u;
    let v1 = &fa.v;
    let big_s = &fw.u;
    let big_t = &fw.v;
    let sigma1 = Matrix::from_diag(r, r, &fa.sigma[..r]);
    let sigma2 = Matrix::from_diag(s, s, &fw.sigma[..s]);

    let r1 = (&big_t.conj_transpose() * u1).block(0, s, 0, r);
    let h1 = (&v1.conj_transpose() * big_s).block(0, r, 0, s);
    let s1h1 = &sigma1 * &h1;
    let inner = &(&sigma2 * &r1) * &s1h1;
    let c = core_ep(&inner, None, tol)?;
    let top = &(&s1h1 * &c) * &c;

    let u1r = u1.block(0, m, 0, r);
    let ss = big_s.block(0, n, 0, s);
    Ok(&(&u1r * &top) * &ss.conj_transpose())
}

impl GasFactors {
    /// Checks shapes, invertibility of `P`, `Q`, `A11`, `W11`, the vanishing
    /// off-diagonal blocks and nilpotency of `A22 W22` and `W22 A22`.
    pub fn validate(&self, pair: &WeightedPair, tol: &Tolerance) -> Result<()> {
        let (m, n) = (pair.m(), pair.n());
        let bad = |msg: String| Err(Error::InvalidGas(msg));
        if self.p.shape() != (m, m) || self.q.shape() != (n, n) {
            return bad(format!(
                "P must be {m}x{m} and Q {n}x{n}, got {:?} and {:?}",
                self.p.shape(),
                self.q.shape()
            ));
        }
        if self.r1 != self.r2 {
            return bad(format!(
                "invertible blocks must have equal size, got r1 = {} and r2 = {}",
                self.r1, self.r2
            ));
        }
        let r = self.r1;
        if r > m.min(n) {
            return bad(format!("block size {r} exceeds min(m, n) = {}", m.min(n)));
        }
        let p_inv = try_inverse(&self.p, tol)?.ok_or(Error::InvalidGas("P is singular".into()))?;
        let q_inv = try_inverse(&self.q, tol)?.ok_or(Error::InvalidGas("Q is singular".into()))?;

        let ab = &(&p_inv * pair.a()) * &self.q;
        let wb = &(&q_inv * pair.w()) * &self.p;
        let a_scale = spectral_norm(&ab)?;
        let w_scale = spectral_norm(&wb)?;
        let off_diag = |blk: &Matrix, rows: usize, cols: usize, scale: f64, name: &str| -> Result<()> {
            let upper = blk.block(0, r, r, cols);
            let lower = blk.block(r, rows, 0, r);
            let limit = GAS_STRUCTURE_RTOL * scale.max(f64::MIN_POSITIVE);
            if upper.max_abs() > limit || lower.max_abs() > limit {
                return Err(Error::InvalidGas(format!("{name} is not block diagonal in this basis")));
            }
            Ok(())
        };
        off_diag(&ab, m, n, a_scale, "P^-1 A Q")?;
        off_diag(&wb, n, m, w_scale, "Q^-1 W P")?;

        let a11 = ab.block(0, r, 0, r);
        let w11 = wb.block(0, r, 0, r);
        if numerical_rank(&a11, tol)? < r || numerical_rank(&w11, tol)? < r {
            return bad("A11 or W11 is singular".into());
        }
        let a22 = ab.block(r, m, r, n);
        let w22 = wb.block(r, n, r, m);
        let scale = (a_scale * w_scale).max(f64::MIN_POSITIVE);
        for (name, prod) in [("A22 W22", &a22 * &w22), ("W22 A22", &w22 * &a22)] {
            let d = prod.rows();
            if d == 0 {
                continue;
            }
            let pd = spectral_norm(&prod.power(d)?)?;
            if pd > GAS_STRUCTURE_RTOL * scale.powi(d as i32) {
                return Err(Error::InvalidGas(format!("{name} is not nilpotent")));
            }
        }
        Ok(())
    }
}

/// GAS representation `P1 (L1^* WAW P1)^-1 L1^*`, with `P1`, `L1` the leading
/// `r1` columns of `P` and `Q`. The factors are validated first.
pub fn wcep_gas(p: &WeightedPair, g: &GasFactors, tol: &Tolerance) -> Result<Matrix> {
    g.validate(p, tol)?;
    let r = g.r1;
    if r == 0 {
        return Ok(Matrix::zeros(p.m(), p.n()));
    }
    let p1 = g.p.block(0, p.m(), 0, r);
    let l1h = g.q.block(0, p.n(), 0, r).conj_transpose();
    let inner = &(&l1h * &p.waw()) * &p1;
    let inv = try_inverse(&inner, tol)?
        .ok_or_else(|| Error::InvalidGas("L1^* WAW P1 is singular".into()))?;
    Ok(&(&p1 * &inv) * &l1h)
}

/// Pivoted-QR representation built from `G P = Q R`.
pub fn wcep_qr(p: &WeightedPair, variant: QrVariant, tol: &Tolerance) -> Result<Matrix> {
    let g = wcep_generator(p, tol)?.g;
    let (m, n) = (p.m(), p.n());
    let f = pivoted_qr(&g, tol);
    let s = f.numerical_rank;
    if s == 0 {
        return Ok(Matrix::zeros(m, n));
    }
    let q1 = f.q.block(0, m, 0, s);
    let waw = p.waw();
    let (left, right) = match variant {
        QrVariant::RFactor => {
            let r1 = f.r.block(0, s, 0, n);
            let r1pt = &r1 * &f.permutation_matrix().conj_transpose();
            (&r1pt * &waw, r1pt)
        }
        QrVariant::Projected => {
            let q1g = &q1.conj_transpose() * &g;
            (&q1g * &waw, q1g)
        }
    };
    let inner = &left * &q1;
    let inv = try_inverse(&inner, tol)?.ok_or(Error::SingularInner("QR representation"))?;
    Ok(&(&q1 * &inv) * &right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genin::wcep_def;

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

    fn invertible() -> Matrix {
        Matrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]])
    }

    #[test]
    fn full_rank_examples() {
        let ones = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        let f = full_rank_decompose(&ones, &tol()).unwrap();
        assert_eq!(f.s, 1);
        assert!((&f.u * &f.v).max_abs_diff(&ones) < 1e-15);

        let f = full_rank_decompose(&Matrix::identity(3), &tol()).unwrap();
        assert_eq!(f.s, 3);
        assert!((&f.u * &f.v).max_abs_diff(&Matrix::identity(3)) < 1e-15);

        let e = Matrix::from_rows(&[[1.0], [0.0], [0.0]]).hstack(&Matrix::zeros(3, 1)).unwrap();
        let f = full_rank_decompose(&e, &tol()).unwrap();
        assert_eq!(f.s, 1);
        assert_eq!(f.u.shape(), (3, 1));
        assert!((f.u[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert!(f.u[(1, 0)].norm() + f.u[(2, 0)].norm() < 1e-15);
        assert!((&f.u * &f.v).max_abs_diff(&e) < 1e-15);

        assert!(matches!(
            full_rank_decompose(&Matrix::zeros(2, 2), &tol()),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn outer_inverse_examples() {
        let id = FullRankFactors { u: Matrix::identity(2), v: Matrix::identity(2), s: 2 };
        let x = outer_inverse_ts(&Matrix::identity(2), &id, &tol()).unwrap();
        assert!(x.max_abs_diff(&Matrix::identity(2)) < 1e-15);

        let e1 = FullRankFactors {
            u: Matrix::from_rows(&[[1.0], [0.0]]),
            v: Matrix::from_rows(&[[1.0, 0.0]]),
            s: 1,
        };
        let d = Matrix::from_rows(&[[2.0, 0.0], [0.0, 3.0]]);
        let x = outer_inverse_ts(&d, &e1, &tol()).unwrap();
        assert!(x.max_abs_diff(&Matrix::from_rows(&[[0.5, 0.0], [0.0, 0.0]])) < 1e-15);

        let j2 = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(outer_inverse_ts(&j2, &e1, &tol()), Err(Error::OuterInverseMissing)));

        assert!(matches!(
            outer_inverse_ts(&Matrix::zeros(3, 3), &e1, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn generator_examples() {
        let g = wcep_generator(&e2(), &tol()).unwrap().g;
        assert!(g.max_abs_diff(&e2_solution()) < 1e-15);

        let a = invertible();
        let p = WeightedPair::new(a.clone(), Matrix::identity(3), &tol()).unwrap();
        assert!(wcep_generator(&p, &tol()).unwrap().g.max_abs_diff(&a) < 1e-14);

        let p = WeightedPair::new(Matrix::from_rows(&[[1.0, 2.0]]), Matrix::zeros(2, 1), &tol()).unwrap();
        assert_eq!(wcep_generator(&p, &tol()).unwrap().g, Matrix::zeros(1, 2));
    }

    #[test]
    fn e2_every_representation() {
        let p = e2();
        let x = e2_solution();
        assert!(wcep_full_rank(&p, &tol()).unwrap().max_abs_diff(&x) < 1e-15);
        assert!(wcep_svd_canonical(&p, &tol()).unwrap().max_abs_diff(&x) < 1e-15);
        assert!(wcep_qr(&p, QrVariant::RFactor, &tol()).unwrap().max_abs_diff(&x) < 1e-15);
        assert!(wcep_qr(&p, QrVariant::Projected, &tol()).unwrap().max_abs_diff(&x) < 1e-15);
        let gas = GasFactors { p: Matrix::identity(3), q: Matrix::identity(2), r1: 1, r2: 1 };
        assert!(wcep_gas(&p, &gas, &tol()).unwrap().max_abs_diff(&x) < 1e-15);
    }

    #[test]
    fn identity_weight_gives_inverse() {
        let a = invertible();
        let p = WeightedPair::new(a.clone(), Matrix::identity(3), &tol()).unwrap();
        let inv = try_inverse(&a, &tol()).unwrap().unwrap();
        assert!(wcep_full_rank(&p, &tol()).unwrap().max_abs_diff(&inv) < 1e-13);
        assert!(wcep_svd_canonical(&p, &tol()).unwrap().max_abs_diff(&inv) < 1e-13);
        assert!(wcep_qr(&p, QrVariant::RFactor, &tol()).unwrap().max_abs_diff(&inv) < 1e-13);
        let gas = GasFactors { p: Matrix::identity(3), q: Matrix::identity(3), r1: 3, r2: 3 };
        assert!(wcep_gas(&p, &gas, &tol()).unwrap().max_abs_diff(&inv) < 1e-13);
    }

    #[test]
    fn svd_canonical_diagonal() {
        let a = Matrix::from_rows(&[[2.0, 0.0], [0.0, 0.0]]);
        let p = WeightedPair::new(a, Matrix::identity(2), &tol()).unwrap();
        let x = wcep_svd_canonical(&p, &tol()).unwrap();
        assert!(x.max_abs_diff(&Matrix::from_rows(&[[0.5, 0.0], [0.0, 0.0]])) < 1e-15);
    }

    #[test]
    fn zero_weight_is_zero_everywhere() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
        let p = WeightedPair::new(a, Matrix::zeros(2, 3), &tol()).unwrap();
        let z = Matrix::zeros(3, 2);
        assert_eq!(wcep_full_rank(&p, &tol()).unwrap(), z);
        assert_eq!(wcep_svd_canonical(&p, &tol()).unwrap(), z);
        assert_eq!(wcep_qr(&p, QrVariant::RFactor, &tol()).unwrap(), z);
    }

    #[test]
    fn gas_diag_example() {
        let d = Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.0]]);
        let p = WeightedPair::new(d.clone(), d.clone(), &tol()).unwrap();
        let gas = GasFactors { p: Matrix::identity(2), q: Matrix::identity(2), r1: 1, r2: 1 };
        let x = wcep_gas(&p, &gas, &tol()).unwrap();
        assert!(x.max_abs_diff(&d) < 1e-15);
        assert!(x.max_abs_diff(&wcep_def(&p, &tol()).unwrap()) < 1e-15);
    }

    #[test]
    fn gas_validation_failures() {
        let p = e2();
        let singular = GasFactors {
            p: Matrix::from_rows(&[[1.0, 1.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0]]),
            q: Matrix::identity(2),
            r1: 1,
            r2: 1,
        };
        assert!(matches!(wcep_gas(&p, &singular, &tol()), Err(Error::InvalidGas(_))));

        // Wrong block split: the invertible block of A would be 2x2, but W's is singular.
        let too_big = GasFactors { p: Matrix::identity(3), q: Matrix::identity(2), r1: 2, r2: 2 };
        assert!(matches!(wcep_gas(&p, &too_big, &tol()), Err(Error::InvalidGas(_))));

        let unequal = GasFactors { p: Matrix::identity(3), q: Matrix::identity(2), r1: 1, r2: 0 };
        assert!(matches!(wcep_gas(&p, &unequal, &tol()), Err(Error::InvalidGas(_))));

        let shape = GasFactors { p: Matrix::identity(2), q: Matrix::identity(2), r1: 1, r2: 1 };
        assert!(matches!(wcep_gas(&p, &shape, &tol()), Err(Error::InvalidGas(_))));

        // A = I2 with W = J2: A22 W22 = [0] at r = 1 but W is not block diagonal.
        let a = Matrix::identity(2);
        let w = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        let q = WeightedPair::new(a, w, &tol()).unwrap();
        let gas = GasFactors { p: Matrix::identity(2), q: Matrix::identity(2), r1: 1, r2: 1 };
        assert!(matches!(wcep_gas(&q, &gas, &tol()), Err(Error::InvalidGas(_))));
    }

    #[test]
    fn gas_rejects_non_nilpotent_tail() {
        // A = W = I2 split at r = 1 leaves A22 W22 = [1].
        let p = WeightedPair::new(Matrix::identity(2), Matrix::identity(2), &tol()).unwrap();
        let gas = GasFactors { p: Matrix::identity(2), q: Matrix::identity(2), r1: 1, r2: 1 };
        let err = wcep_gas(&p, &gas, &tol()).unwrap_err();
        assert!(err.to_string().contains("nilpotent"), "{err}");
    }
}
