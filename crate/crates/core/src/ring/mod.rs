//! Exact scalar arithmetic: Gaussian rationals, multi-indices, sparse multivariate
//! polynomials, GCD-based cancellation and rational functions.

mod gauss;
mod gcd;
mod modgcd;
mod monomial;
mod poly;
#[cfg(test)]
mod properties;
mod ratfn;

use std::fmt;

pub use gauss::{format_rational, parse_rational, GaussianRational};
pub use gcd::{gcd_with_budget, GcdBudget, GcdOutcome};
pub use monomial::MultiIndex;
pub use poly::Poly;
pub use ratfn::RationalFn;

use crate::error::{Result, WmpError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Complex variables; `conj(s_i)` is carried as the extra variable `s_{2p+1-i}`.
    Complex,
    /// Real variables; conjugation is the identity on scalars.
    Real,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Complex => "complex",
            Mode::Real => "real",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = WmpError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(Mode::Complex),
            "real" => Ok(Mode::Real),
            other => Err(WmpError::Schema(format!("unknown mode {other:?}"))),
        }
    }
}

/// The variable set a polynomial lives over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarSpace {
    p: usize,
    mode: Mode,
}

impl VarSpace {
    pub fn new(p: usize, mode: Mode) -> Result<Self> {
        if p == 0 {
            return Err(WmpError::Schema("variable count p must be at least 1".into()));
        }
        Ok(Self { p, mode })
    }

    pub fn complex(p: usize) -> Self {
        Self::new(p, Mode::Complex).expect("p >= 1")
    }

    pub fn real(p: usize) -> Self {
        Self::new(p, Mode::Real).expect("p >= 1")
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn total_vars(&self) -> usize {
        match self.mode {
            Mode::Complex => 2 * self.p,
            Mode::Real => self.p,
        }
    }

    /// Index of the variable holding the conjugate of variable `var`.
    pub fn conj_partner(&self, var: usize) -> usize {
        match self.mode {
            Mode::Complex => 2 * self.p - 1 - var,
            Mode::Real => var,
        }
    }

    pub fn var_name(&self, var: usize) -> String {
        match self.mode {
            Mode::Real => format!("s{}", var + 1),
            Mode::Complex if var < self.p => format!("s{}", var + 1),
            Mode::Complex => format!("conj(s{})", 2 * self.p - var),
        }
    }

    /// Expands values of the `p` independent variables into a full evaluation point,
    /// binding each conjugate variable to the conjugate value.
    pub fn conjugate_consistent_point(&self, values: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        if values.len() != self.p {
            return Err(WmpError::dim(format!(
                "expected {} independent values, got {}",
                self.p,
                values.len()
            )));
        }
        Ok(match self.mode {
            Mode::Real => {
                if values.iter().any(|v| !v.is_real()) {
                    return Err(WmpError::dim("real mode requires real evaluation values"));
                }
                values.to_vec()
            }
            Mode::Complex => {
                let mut pt = values.to_vec();
                pt.extend(values.iter().rev().map(|v| v.conj()));
                pt
            }
        })
    }

    pub(crate) fn ensure_same(&self, other: &VarSpace) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(WmpError::VarSpace {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for VarSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(p={})", self.mode.as_str(), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_vars_by_mode() {
        assert_eq!(VarSpace::complex(2).total_vars(), 4);
        assert_eq!(VarSpace::real(2).total_vars(), 2);
        assert!(VarSpace::new(0, Mode::Real).is_err());
        assert_eq!(VarSpace::complex(2).conj_partner(0), 3);
        assert_eq!(VarSpace::complex(2).var_name(2), "conj(s2)");
    }

    #[test]
    fn conjugate_point_layout() {
        let vs = VarSpace::complex(2);
        let pt = vs
            .conjugate_consistent_point(&[GaussianRational::from_ints(1, 2), GaussianRational::from_ints(3, 4)])
            .unwrap();
        assert_eq!(pt[3], GaussianRational::from_ints(1, -2));
        assert_eq!(pt[2], GaussianRational::from_ints(3, -4));
    }
}
