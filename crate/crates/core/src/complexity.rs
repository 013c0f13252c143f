//! Flop-count model for the three pseudoinverse formulas.
//!
//! A product of a `p x q` by a `q x r` matrix costs `p*q*r`; a power `M^l`
//! of a `d x d` matrix costs `d^3 log2(l)`, with `log2(x) = 0` for `x <= 1`.
//! The pseudoinverse cost is left to a [`PinvCostModel`].

use crate::method::Method;

/// Flop count of the pseudoinverse of a `p x q` matrix.
#[derive(Clone, Copy, Debug, Default)]
pub enum PinvCostModel {
    #[default]
    /// `max(p, q) * min(p, q)^2`, which is the cost of one product of that
    /// shape; square matrices give `m^3`.
    LowerBound,
    /// `c * min(p, q)^2 * max(p, q)`.
    SvdBased { c: f64 },
    /// Caller-supplied cost function.
    Custom(fn(usize, usize) -> f64),
}

impl PinvCostModel {
    pub const DEFAULT_SVD_COEFFICIENT: f64 = 21.0;

    pub fn svd_based() -> Self {
        PinvCostModel::SvdBased {
            c: Self::DEFAULT_SVD_COEFFICIENT,
        }
    }

    pub fn eval(&self, p: usize, q: usize) -> f64 {
        let (lo, hi) = (p.min(q) as f64, p.max(q) as f64);
        match *self {
            PinvCostModel::LowerBound => hi * lo * lo,
            PinvCostModel::SvdBased { c } => c * lo * lo * hi,
            PinvCostModel::Custom(f) => f(p, q),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostTerm {
    pub label: &'static str,
    pub flops: f64,
    pub is_pinv: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostBreakdown {
    pub terms: Vec<CostTerm>,
    pub total: f64,
}

impl CostBreakdown {
    fn from_terms(terms: Vec<CostTerm>) -> Self {
        let total = terms.iter().map(|t| t.flops).sum();
        CostBreakdown { terms, total }
    }

    /// Everything except the pseudoinverse rows.
    pub fn non_pinv_part(&self) -> f64 {
        self.terms.iter().filter(|t| !t.is_pinv).map(|t| t.flops).sum()
    }

    pub fn pinv_part(&self) -> f64 {
        self.terms.iter().filter(|t| t.is_pinv).map(|t| t.flops).sum()
    }
}

fn log2_floor0(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        x.log2()
    }
}

fn mul(p: usize, q: usize, r: usize) -> f64 {
    p as f64 * q as f64 * r as f64
}

fn term(label: &'static str, flops: f64) -> CostTerm {
    CostTerm {
        label,
        flops,
        is_pinv: false,
    }
}

fn pinv_term(label: &'static str, flops: f64) -> CostTerm {
    CostTerm {
        label,
        flops,
        is_pinv: true,
    }
}

/// `X = (AW)^l [W (AW)^(l+1)]^+`; total `3m^2n + m^3 + m^3 log l + pinv(n, m)`.
pub fn cost_aw_pinv(m: usize, n: usize, l: usize, model: PinvCostModel) -> CostBreakdown {
    let m3 = mul(m, m, m);
    CostBreakdown::from_terms(vec![
        term("AW", mul(m, n, m)),
        term("(AW)^l", m3 * log2_floor0(l as f64)),
        term("(AW)^(l+1)", m3),
        term("W(AW)^(l+1)", mul(n, m, m)),
        pinv_term("[W(AW)^(l+1)]^+", model.eval(n, m)),
        term("X", mul(m, m, n)),
    ])
}

/// `X = A (WA)^l [(WA)^(l+2)]^+`; total `3mn^2 + 2n^3 + n^3 log(l-1) + pinv(n)`.
///
/// The power row is charged `n^3 log2(l - 1)` because `(WA)^2` is already
/// available when `(WA)^l` is formed.
pub fn cost_wa_pinv(m: usize, n: usize, l: usize, model: PinvCostModel) -> CostBreakdown {
    let n3 = mul(n, n, n);
    CostBreakdown::from_terms(vec![
        term("WA", mul(n, m, n)),
        term("(WA)^2", n3),
        term("(WA)^l", n3 * log2_floor0(l as f64 - 1.0)),
        term("(WA)^(l+2)", n3),
        pinv_term("[(WA)^(l+2)]^+", model.eval(n, n)),
        term("X", 2.0 * mul(m, n, n)),
    ])
}

/// `X = [W (AW)^(l+1) ((AW)^l)^+]^+`; total
/// `3m^2n + m^3 + m^3 log l + pinv(m) + pinv(n, m)`.
pub fn cost_two_pinv(m: usize, n: usize, l: usize, model: PinvCostModel) -> CostBreakdown {
    let m3 = mul(m, m, m);
    CostBreakdown::from_terms(vec![
        term("AW", mul(m, n, m)),
        term("(AW)^l", m3 * log2_floor0(l as f64)),
        term("(AW)^(l+1)", m3),
        pinv_term("((AW)^l)^+", model.eval(m, m)),
        term("W(AW)^(l+1)((AW)^l)^+", 2.0 * mul(n, m, m)),
        pinv_term("X", model.eval(n, m)),
    ])
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recommendation {
    /// [`Method::AwPinv`] or [`Method::WaPinv`].
    pub method: Method,
    pub aw_cost: CostBreakdown,
    pub wa_cost: CostBreakdown,
}

/// Picks the `AW` formula when `m < n` and the `WA` formula otherwise. The
/// costs are attached for reference and never change the verdict.
pub fn recommend(m: usize, n: usize, l: usize, model: PinvCostModel) -> Recommendation {
    Recommendation {
        method: if m < n { Method::AwPinv } else { Method::WaPinv },
        aw_cost: cost_aw_pinv(m, n, l, model),
        wa_cost: cost_wa_pinv(m, n, l, model),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aw_formula_examples() {
        let c = cost_aw_pinv(100, 200, 4, PinvCostModel::LowerBound);
        assert_eq!(c.non_pinv_part(), 9_000_000.0);
        assert_eq!(c.pinv_part(), 200.0 * 100.0 * 100.0);
        assert_eq!(c.terms.len(), 6);
        assert_eq!(cost_aw_pinv(1, 1, 1, PinvCostModel::svd_based()).non_pinv_part(), 4.0);
        let big = cost_aw_pinv(500, 1000, 3, PinvCostModel::LowerBound);
        assert!(big.total > c.total);
    }

    #[test]
    fn wa_formula_examples() {
        let c = cost_wa_pinv(100, 200, 5, PinvCostModel::LowerBound);
        assert_eq!(c.non_pinv_part(), 44_000_000.0);
        assert_eq!(cost_wa_pinv(1, 1, 2, PinvCostModel::LowerBound).non_pinv_part(), 5.0);
        assert_eq!(cost_wa_pinv(1, 1, 1, PinvCostModel::LowerBound).non_pinv_part(), 5.0);
        let svd = PinvCostModel::svd_based();
        assert!(cost_wa_pinv(100, 200, 4, svd).total > cost_aw_pinv(100, 200, 4, svd).total);
    }

    #[test]
    fn two_pinv_adds_square_pinv() {
        let lb = PinvCostModel::LowerBound;
        let d = cost_two_pinv(100, 200, 4, lb).total - cost_aw_pinv(100, 200, 4, lb).total;
        assert_eq!(d, 1e6);
        assert_eq!(
            cost_two_pinv(1, 1, 1, lb).non_pinv_part(),
            cost_aw_pinv(1, 1, 1, lb).non_pinv_part()
        );
    }

    #[test]
    fn models() {
        assert_eq!(PinvCostModel::LowerBound.eval(7, 7), 343.0);
        assert_eq!(PinvCostModel::svd_based().eval(2, 3), 21.0 * 4.0 * 3.0);
        fn flat(_: usize, _: usize) -> f64 {
            1.0
        }
        let c = cost_two_pinv(3, 4, 2, PinvCostModel::Custom(flat));
        assert_eq!(c.pinv_part(), 2.0);
    }

    #[test]
    fn recommendation_rule() {
        let lb = PinvCostModel::LowerBound;
        assert_eq!(recommend(100, 200, 4, lb).method, Method::AwPinv);
        assert_eq!(recommend(200, 100, 4, lb).method, Method::WaPinv);
        assert_eq!(recommend(100, 100, 4, lb).method, Method::WaPinv);
    }

    #[test]
    fn doubling_m_scales_cubic_terms_by_eight() {
        let lb = PinvCostModel::LowerBound;
        let a = cost_aw_pinv(10, 40, 8, lb);
        let b = cost_aw_pinv(20, 40, 8, lb);
        for label in ["(AW)^l", "(AW)^(l+1)"] {
            let fa = a.terms.iter().find(|t| t.label == label).unwrap().flops;
            let fb = b.terms.iter().find(|t| t.label == label).unwrap().flops;
            assert_eq!(fb, 8.0 * fa);
        }
    }
}
