//! The interchangeable ways of computing the weighted core-EP inverse, under
//! the short labels used on the command line and in benchmark tables.

use std::fmt;
use std::str::FromStr;

use crate::dense::{Matrix, Tolerance};
use crate::error::{Error, Result};
use crate::genin::{self, ExponentChoice, WeightedPair};
use crate::reps::{self, QrVariant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    /// `A [(WA)^core-EP]^2`.
    CoreEpSquare,
    /// `[W (AW)^(l+1) ((AW)^l)^+]^+`.
    TwoPinv,
    /// `(AW)^l [W (AW)^(l+1)]^+`.
    AwPinv,
    /// `A (WA)^l [(WA)^(l+2)]^+`.
    WaPinv,
    SvdCanonical,
    FullRank,
    Qr,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::CoreEpSquare,
        Method::TwoPinv,
        Method::AwPinv,
        Method::WaPinv,
        Method::SvdCanonical,
        Method::FullRank,
        Method::Qr,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::CoreEpSquare => "def",
            Method::TwoPinv => "eq13",
            Method::AwPinv => "eq28",
            Method::WaPinv => "eq29",
            Method::SvdCanonical => "svd",
            Method::FullRank => "fullrank",
            Method::Qr => "qr",
        }
    }

    /// Whether the method takes a power exponent `l >= k`.
    pub fn uses_exponent(self) -> bool {
        matches!(self, Method::TwoPinv | Method::AwPinv | Method::WaPinv)
    }

    /// Runs the method. `l` defaults to `k` and is ignored by methods that
    /// take no exponent.
    pub fn compute(self, p: &WeightedPair, l: Option<usize>, tol: &Tolerance) -> Result<Matrix> {
        let exponent = || ExponentChoice::for_pair(p, l);
        match self {
            Method::CoreEpSquare => genin::wcep_def(p, tol),
            Method::TwoPinv => genin::wcep_two_pinv(p, exponent()?, tol),
            Method::AwPinv => genin::wcep_aw_pinv(p, exponent()?, tol),
            Method::WaPinv => genin::wcep_wa_pinv(p, exponent()?, tol),
            Method::SvdCanonical => reps::wcep_svd_canonical(p, tol),
            Method::FullRank => reps::wcep_full_rank(p, tol),
            Method::Qr => reps::wcep_qr(p, QrVariant::RFactor, tol),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let m = match s.trim() {
            "def" | "core-ep-square" => Method::CoreEpSquare,
            "eq13" | "two-pinv" => Method::TwoPinv,
            "eq28" | "aw-pinv" => Method::AwPinv,
            "eq29" | "wa-pinv" => Method::WaPinv,
            "svd" => Method::SvdCanonical,
            "fullrank" | "full-rank" => Method::FullRank,
            "qr" => Method::Qr,
            other => {
                let known: Vec<&str> = Method::ALL.iter().map(|m| m.label()).collect();
                return Err(Error::Config(format!(
                    "unknown method '{other}', expected one of {}",
                    known.join(", ")
                )));
            }
        };
        Ok(m)
    }
}
