//! Selection among the five solver paths.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, WmpError};
use crate::matrix::{DensePolyMatrix, EffMatrix, EffPrimeMatrix, PolyMatrix};
use crate::polynomial::{normalized_result, wmp_polynomial, PinvResult};
use crate::rational::{wmp_rational, RatMatrix};
use crate::ring::GcdBudget;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Recursion over the rational-function field.
    Rational,
    /// Fraction-free recursion on dense polynomial matrices.
    PolyDense,
    /// Fraction-free recursion on `Eff` (dense coefficient matrices).
    Eff,
    /// Fraction-free recursion on `Eff'` (triplet coefficient matrices).
    EffPrime,
    /// Fraction-free recursion on `Ef` (matrices of sparse polynomials).
    #[default]
    Ef,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Rational,
        Algorithm::PolyDense,
        Algorithm::Eff,
        Algorithm::EffPrime,
        Algorithm::Ef,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Rational => "rational",
            Algorithm::PolyDense => "poly-dense",
            Algorithm::Eff => "eff",
            Algorithm::EffPrime => "eff-prime",
            Algorithm::Ef => "ef",
        }
    }

    /// `X = Z / Y` with `Y` monic. The rational path writes its result over the
    /// least common denominator of the entries. The budget does not apply to it.
    pub fn solve(self, a: &PolyMatrix, m: &PolyMatrix, n: &PolyMatrix, budget: GcdBudget) -> Result<PinvResult> {
        match self {
            Algorithm::Rational => {
                let r = |p: &PolyMatrix| RatMatrix::from_poly_matrix(p);
                let x = wmp_rational(&r(a), &r(m), &r(n))?;
                let (z, y) = x.to_common_denominator()?;
                normalized_result(z, y)
            }
            Algorithm::PolyDense => wmp_polynomial::<DensePolyMatrix>(a, m, n, budget),
            Algorithm::Eff => wmp_polynomial::<EffMatrix>(a, m, n, budget),
            Algorithm::EffPrime => wmp_polynomial::<EffPrimeMatrix>(a, m, n, budget),
            Algorithm::Ef => wmp_polynomial::<PolyMatrix>(a, m, n, budget),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = WmpError;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| WmpError::Schema(format!("unknown algorithm `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("dense".parse::<Algorithm>().is_err());
        assert_eq!(Algorithm::default(), Algorithm::Ef);
    }
}
