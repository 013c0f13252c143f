//! Householder QR, with optional column pivoting by largest remaining norm.

use super::matrix::{Matrix, C64};
use super::Tolerance;

/// `q * r = a * P`, where `P` moves column `perm[j]` of `a` to position `j`.
#[derive(Clone, Debug)]
pub struct PivotedQrFactors {
    pub q: Matrix,
    pub r: Matrix,
    pub perm: Vec<usize>,
    pub numerical_rank: usize,
}

impl PivotedQrFactors {
    pub fn permutation_matrix(&self) -> Matrix {
        let n = self.perm.len();
        let mut p = Matrix::zeros(n, n);
        for (j, &src) in self.perm.iter().enumerate() {
            p[(src, j)] = C64::new(1.0, 0.0);
        }
        p
    }
}

struct Householder {
    q: Matrix,
    r: Matrix,
    perm: Vec<usize>,
}

fn factor(a: &Matrix, pivot: bool) -> Householder {
    let (m, n) = a.shape();
    let mut r = a.clone();
    let mut q = Matrix::identity(m);
    let mut perm: Vec<usize> = (0..n).collect();
    let zero = C64::new(0.0, 0.0);

    for j in 0..m.min(n) {
        if pivot {
            let tail_norm = |r: &Matrix, c: usize| -> f64 { (j..m).map(|i| r[(i, c)].norm_sqr()).sum() };
            let mut best = j;
            let mut best_norm = tail_norm(&r, j);
            for c in j + 1..n {
                let nc = tail_norm(&r, c);
                if nc > best_norm {
                    best = c;
                    best_norm = nc;
                }
            }
            if best != j {
                for i in 0..m {
                    let tmp = r[(i, j)];
                    r[(i, j)] = r[(i, best)];
                    r[(i, best)] = tmp;
                }
                perm.swap(j, best);
            }
        }

        let mut v: Vec<C64> = (j..m).map(|i| r[(i, j)]).collect();
        let xnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 { C64::new(1.0, 0.0) } else { v[0] / v[0].norm() };
        let alpha = -phase * xnorm;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;

        // R <- H R on the trailing block
        for c in j + 1..n {
            let w: C64 = v.iter().enumerate().map(|(t, vt)| vt.conj() * r[(j + t, c)]).sum();
            let w = w * beta;
            for (t, vt) in v.iter().enumerate() {
                r[(j + t, c)] -= w * vt;
            }
        }
        r[(j, j)] = alpha;
        for i in j + 1..m {
            r[(i, j)] = zero;
        }

        // Q <- Q H
        for i in 0..m {
            let w: C64 = v.iter().enumerate().map(|(t, vt)| q[(i, j + t)] * vt).sum();
            let w = w * beta;
            for (t, vt) in v.iter().enumerate() {
                q[(i, j + t)] -= w * vt.conj();
            }
        }
    }
    Householder { q, r, perm }
}

/// Column-pivoted QR with numerical rank read off the diagonal of `r`:
/// the count of `|r_ii| > rank_rtol * max(m, n) * |r_00|`.
pub fn pivoted_qr(a: &Matrix, tol: &Tolerance) -> PivotedQrFactors {
    let (m, n) = a.shape();
    let Householder { q, r, perm } = factor(a, true);
    let r00 = if m.min(n) > 0 { r[(0, 0)].norm() } else { 0.0 };
    let cutoff = tol.rank_rtol * m.max(n) as f64 * r00;
    let numerical_rank = if r00 == 0.0 {
        0
    } else {
        (0..m.min(n)).take_while(|&i| r[(i, i)].norm() > cutoff).count()
    };
    PivotedQrFactors { q, r, perm, numerical_rank }
}

/// Extends the orthonormal columns of `left` (p x k) to a p x p unitary whose
/// first k columns are exactly `left`.
pub(crate) fn householder_complete(left: &Matrix) -> Matrix {
    let (p, k) = left.shape();
    if k == p {
        return left.clone();
    }
    let q = factor(left, false).q;
    let mut out = q;
    out.set_block(0, 0, left);
    out
}
