use std::fmt;

use super::gauss::GaussianRational;
use super::gcd::{gcd_with_budget, GcdBudget};
use super::poly::Poly;
use super::VarSpace;
use crate::error::{Result, WmpError};

/// Quotient of two polynomials kept in canonical form: common factors cancelled
/// and the denominator's leading coefficient equal to 1.
///
/// Equality is decided by cross-multiplication, so two values are equal whenever
/// they denote the same rational function (even if one of them could not be
/// fully reduced under a GCD budget).
#[derive(Clone, Debug)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        Self::new_with_budget(num, den, GcdBudget::UNLIMITED)
    }

    pub fn new_with_budget(num: Poly, den: Poly, budget: GcdBudget) -> Result<Self> {
        num.space().ensure_same(&den.space())?;
        if den.is_zero() {
            return Err(WmpError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.space()));
        }
        let g = gcd_with_budget(&num, &den, budget)?.gcd;
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff().expect("nonzero").clone();
        if lc.is_one() {
            return Ok(Self { num, den });
        }
        let inv = lc.recip().expect("nonzero");
        Ok(Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    pub fn zero(space: VarSpace) -> Self {
        Self {
            num: Poly::zero(space),
            den: Poly::one(space),
        }
    }

    pub fn one(space: VarSpace) -> Self {
        Self::from_poly(Poly::one(space))
    }

    pub fn from_poly(p: Poly) -> Self {
        let space = p.space();
        Self {
            num: p,
            den: Poly::one(space),
        }
    }

    pub fn constant(space: VarSpace, c: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(space, c))
    }

    pub fn space(&self) -> VarSpace {
        self.num.space()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone()).expect("nonzero den");
        }
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        Self::new(num, &self.den * &other.den).expect("nonzero den")
    }

    /// Sum of many terms, cancelling once at the end.
    pub fn sum<'a>(space: VarSpace, items: impl IntoIterator<Item = &'a RationalFn>) -> RationalFn {
        let mut num = Poly::zero(space);
        let mut den = Poly::one(space);
        for r in items {
            if r.is_zero() {
                continue;
            }
            if r.den == den {
                num = &num + &r.num;
            } else if r.den.is_one() {
                num = &num + &(&r.num * &den);
            } else {
                num = &(&num * &r.den) + &(&r.num * &den);
                den = &den * &r.den;
            }
        }
        Self::new(num, den).expect("nonzero den")
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFn {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.space());
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_poly(&self.num * &other.num);
        }
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero den")
    }

    pub fn mul_poly(&self, p: &Poly) -> RationalFn {
        self.mul(&Self::from_poly(p.clone()))
    }

    pub fn inv(&self) -> Result<RationalFn> {
        if self.is_zero() {
            return Err(WmpError::ZeroDenominator);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RationalFn) -> Result<RationalFn> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn conj(&self) -> RationalFn {
        // Conjugation can change which term leads, so renormalize the unit.
        Self::new(self.num.conj(), self.den.conj()).expect("nonzero den")
    }

    pub fn eval(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(WmpError::ZeroDenominator);
        }
        Ok(&self.num.eval(point)? / &d)
    }

    /// Cross-multiplication identity `n1 * d2 == n2 * d1`.
    pub fn equivalent(&self, other: &RationalFn) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        (self.num == other.num && self.den == other.den) || self.equivalent(other)
    }
}

impl Eq for RationalFn {}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
