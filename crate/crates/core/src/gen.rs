//! Seeded random instances with a prescribed index.
//!
//! A pair is assembled from its block decomposition:
//! `A = P diag(C, N_a) Q^-1` and `W = Q diag(D, N_w) P^-1`, where `C`, `D` are
//! invertible `r x r` blocks and `N_a N_w`, `N_w N_a` are nilpotent of index
//! exactly `t`. Dense factors are uniform `[0, 1)` samples shifted along the
//! diagonal so that they stay well conditioned; `P` and `Q` are deliberately
//! not unitary, so the core-EP and Drazin inverses of `AW` differ.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::{try_inverse, Matrix, Tolerance, C64};
use crate::error::{Error, Result};
use crate::genin::{index, WeightedPair};
use crate::reps::GasFactors;

/// A generated pair together with the block factors it was built from.
#[derive(Clone, Debug)]
pub struct RandomInstance {
    pub pair: WeightedPair,
    pub gas: GasFactors,
}

/// Builder for [`RandomInstance`]s.
#[derive(Clone, Copy, Debug)]
pub struct RandomPairBuilder {
    m: usize,
    n: usize,
    target_index: usize,
    seed: u64,
    complex: bool,
}

impl RandomPairBuilder {
    pub fn new(m: usize, n: usize, target_index: usize, seed: u64) -> Self {
        RandomPairBuilder {
            m,
            n,
            target_index,
            seed,
            complex: false,
        }
    }

    /// Draw imaginary parts as well as real parts.
    pub fn complex(mut self, yes: bool) -> Self {
        self.complex = yes;
        self
    }

    pub fn build(&self, tol: &Tolerance) -> Result<RandomInstance> {
        let (m, n, t) = (self.m, self.n, self.target_index);
        if m == 0 || n == 0 {
            return Err(Error::InvalidShape(format!("dimensions must be positive, got {m}x{n}")));
        }
        if t == 0 || t > m.min(n) {
            return Err(Error::Infeasible(format!(
                "target index {t} must lie in 1..={} for a {m}x{n} pair",
                m.min(n)
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut draw = Sampler {
            rng: &mut rng,
            complex: self.complex,
        };

        let r = m.min(n) - t;
        let sc = r.max(1) as f64;
        let p = draw.shifted(m, (m as f64).sqrt());
        let q = draw.shifted(n, (n as f64).sqrt());
        let c = draw.shifted(r, sc);
        let d = draw.shifted(r, sc);

        // Strictly upper triangular with a nonzero superdiagonal: index t.
        let mut tblk = Matrix::zeros(t, t);
        for i in 0..t {
            for j in i + 1..t {
                tblk[(i, j)] = draw.entry().scale(sc / 2.0);
            }
            if i + 1 < t {
                tblk[(i, i + 1)] = C64::new((0.5 + 0.5 * draw.rng.gen::<f64>()) * sc / 2.0, 0.0);
            }
        }
        let sdiag: Vec<f64> = (0..t).map(|_| (0.5 + 0.5 * draw.rng.gen::<f64>()) * sc / 2.0).collect();
        let sblk = Matrix::from_diag(t, t, &sdiag);

        let mut na = Matrix::zeros(m - r, n - r);
        na.set_block(0, 0, &tblk);
        let mut nw = Matrix::zeros(n - r, m - r);
        nw.set_block(0, 0, &sblk);

        let p_inv = try_inverse(&p, tol)?.ok_or(Error::SingularInner("generated P"))?;
        let q_inv = try_inverse(&q, tol)?.ok_or(Error::SingularInner("generated Q"))?;
        let a = &(&p * &c.block_diag(&na)) * &q_inv;
        let w = &(&q * &d.block_diag(&nw)) * &p_inv;

        let pair = WeightedPair::new(a, w, tol)?;
        if pair.k() != t {
            return Err(Error::Infeasible(format!(
                "generated pair has numerical index {} instead of {t}",
                pair.k()
            )));
        }
        Ok(RandomInstance {
            pair,
            gas: GasFactors { p, q, r1: r, r2: r },
        })
    }
}

struct Sampler<'a> {
    rng: &'a mut ChaCha8Rng,
    complex: bool,
}

impl Sampler<'_> {
    fn entry(&mut self) -> C64 {
        let re = self.rng.gen::<f64>();
        let im = if self.complex { self.rng.gen::<f64>() } else { 0.0 };
        C64::new(re, im)
    }

    fn uniform(&mut self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| self.entry())
    }

    /// Uniform square matrix plus `shift * I`.
    fn shifted(&mut self, dim: usize, shift: f64) -> Matrix {
        let mut u = self.uniform(dim, dim);
        for i in 0..dim {
            u[(i, i)] += shift;
        }
        u
    }
}

/// Real `m x n` pair with `max(ind(AW), ind(WA)) = target_index`,
/// deterministic in `seed`.
pub fn gen_random_pair(m: usize, n: usize, target_index: usize, seed: u64) -> Result<WeightedPair> {
    Ok(RandomPairBuilder::new(m, n, target_index, seed)
        .build(&Tolerance::default())?
        .pair)
}

/// Square `n x n` matrix of index `target_index` (0 gives an invertible
/// matrix), built as `P diag(C, N) P^-1` with `N` a nilpotent Jordan-like
/// block of size `target_index`.
pub fn gen_square_with_index(n: usize, target_index: usize, seed: u64) -> Result<Matrix> {
    if n == 0 || target_index > n {
        return Err(Error::Infeasible(format!(
            "index {target_index} is not attainable for a {n}x{n} matrix"
        )));
    }
    let tol = Tolerance::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = Sampler {
        rng: &mut rng,
        complex: false,
    };
    let r = n - target_index;
    let p = draw.shifted(n, (n as f64).sqrt());
    let c = draw.shifted(r, r.max(1) as f64);
    let mut nil = Matrix::zeros(target_index, target_index);
    for i in 0..target_index.saturating_sub(1) {
        nil[(i, i + 1)] = C64::new(0.5 + 0.5 * draw.rng.gen::<f64>(), 0.0);
    }
    let p_inv = try_inverse(&p, &tol)?.ok_or(Error::SingularInner("generated P"))?;
    let a = &(&p * &c.block_diag(&nil)) * &p_inv;
    let k = index(&a, &tol)?;
    if k != target_index {
        return Err(Error::Infeasible(format!(
            "generated matrix has numerical index {k} instead of {target_index}"
        )));
    }
    Ok(a)
}

/// Uniform `[0, 1)` matrix of the given shape and rank: a product of
/// `rows x rank` and `rank x cols` uniform factors (full rank when `rank`
/// is at least `min(rows, cols)`).
pub fn random_matrix(rows: usize, cols: usize, rank: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = Sampler {
        rng: &mut rng,
        complex: false,
    };
    if rank >= rows.min(cols) {
        return draw.uniform(rows, cols);
    }
    let left = draw.uniform(rows, rank);
    let right = draw.uniform(rank, cols);
    &left * &right
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genin::wcep_def;
    use crate::verify::check_wcep_axioms;

    #[test]
    fn deterministic_for_fixed_seed() {
        let a = gen_random_pair(4, 3, 1, 7).unwrap();
        let b = gen_random_pair(4, 3, 1, 7).unwrap();
        assert_eq!(a.a(), b.a());
        assert_eq!(a.w(), b.w());
        let c = gen_random_pair(4, 3, 1, 8).unwrap();
        assert_ne!(a.a(), c.a());
    }

    #[test]
    fn prescribed_index_is_met() {
        assert_eq!(gen_random_pair(5, 5, 1, 1).unwrap().k(), 1);
        for (m, n, t) in [(6, 4, 2), (3, 7, 3), (4, 4, 4), (9, 12, 3)] {
            let p = gen_random_pair(m, n, t, 11).unwrap();
            assert_eq!(p.k(), t, "{m}x{n}");
            assert_eq!(p.k_aw(), t);
            assert_eq!(p.k_wa(), t);
        }
    }

    #[test]
    fn infeasible_targets() {
        assert!(matches!(gen_random_pair(3, 2, 3, 0), Err(Error::Infeasible(_))));
        assert!(matches!(gen_random_pair(3, 2, 0, 0), Err(Error::Infeasible(_))));
        assert!(gen_square_with_index(2, 3, 0).is_err());
    }

    #[test]
    fn complex_instances_verify() {
        let tol = Tolerance::default();
        let inst = RandomPairBuilder::new(6, 5, 2, 3).complex(true).build(&tol).unwrap();
        assert!(!inst.pair.a().is_real());
        inst.gas.validate(&inst.pair, &tol).unwrap();
        let x = wcep_def(&inst.pair, &tol).unwrap();
        assert!(check_wcep_axioms(&inst.pair, &x, &tol));
    }

    #[test]
    fn square_generator_index() {
        let tol = Tolerance::default();
        for t in 0..=3 {
            let a = gen_square_with_index(6, t, 5).unwrap();
            assert_eq!(index(&a, &tol).unwrap(), t);
        }
    }

    #[test]
    fn random_matrix_rank() {
        let tol = Tolerance::default();
        let a = random_matrix(7, 4, 2, 9);
        assert_eq!(crate::dense::numerical_rank(&a, &tol).unwrap(), 2);
        let b = random_matrix(3, 5, 9, 9);
        assert_eq!(crate::dense::numerical_rank(&b, &tol).unwrap(), 3);
    }
}
