//! Multivariate GCD.
//!
//! The modular algorithm is tried first. If it cannot certify a result, a
//! polynomial is viewed as univariate in a chosen main variable with
//! coefficients in the remaining variables. Contents are computed recursively and
//! the primitive parts are fed to a pseudo-remainder Euclidean loop. All
//! intermediate polynomials are kept with Gaussian-integer coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::GaussianRational;
use super::monomial::MultiIndex;
use super::poly::Poly;
use crate::error::{Result, WmpError};

/// Upper bound on the coefficient multiplications a single GCD may spend.
///
/// When the budget runs out only the monomial content is cancelled; the resulting
/// fraction stays correct but may not be in lowest terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GcdBudget {
    pub max_work: Option<u64>,
}

impl GcdBudget {
    pub const UNLIMITED: GcdBudget = GcdBudget { max_work: None };

    pub fn limited(max_work: u64) -> Self {
        GcdBudget {
            max_work: Some(max_work),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdOutcome {
    /// Monic common divisor.
    pub gcd: Poly,
    /// False when the budget was exhausted and only the monomial gcd was taken.
    pub complete: bool,
}

struct Exhausted;

struct Work {
    used: u64,
    limit: Option<u64>,
}

impl Work {
    fn charge(&mut self, n: usize) -> Result<(), Exhausted> {
        self.used = self.used.saturating_add(n as u64);
        match self.limit {
            Some(l) if self.used > l => Err(Exhausted),
            _ => Ok(()),
        }
    }
}

type Step<T> = std::result::Result<T, Exhausted>;

pub fn gcd_with_budget(a: &Poly, b: &Poly, budget: GcdBudget) -> Result<GcdOutcome> {
    a.space().ensure_same(&b.space())?;
    if a.is_zero() && b.is_zero() {
        return Err(WmpError::UndefinedGcd);
    }
    let mut work = Work {
        used: 0,
        limit: budget.max_work,
    };
    match gcd_inner(a, b, &mut work) {
        Ok(g) => Ok(GcdOutcome {
            gcd: g,
            complete: true,
        }),
        Err(Exhausted) => Ok(GcdOutcome {
            gcd: monomial_gcd(a, b),
            complete: false,
        }),
    }
}

impl Poly {
    /// Monic greatest common divisor over the coefficient field.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        gcd_with_budget(self, other, GcdBudget::UNLIMITED).map(|o| o.gcd)
    }
}

fn monomial_gcd(a: &Poly, b: &Poly) -> Poly {
    let space = a.space();
    let m = match (a.monomial_content(), b.monomial_content()) {
        (Some(x), Some(y)) => x.meet(&y),
        (Some(x), None) => x,
        (None, Some(y)) => y,
        (None, None) => MultiIndex::zero(space.total_vars()),
    };
    Poly::monomial(space, m, GaussianRational::one())
}

fn gcd_inner(a: &Poly, b: &Poly, work: &mut Work) -> Step<Poly> {
    let space = a.space();
    if a.is_zero() {
        return Ok(b.monic());
    }
    if b.is_zero() {
        return Ok(a.monic());
    }
    if a.is_constant() || b.is_constant() {
        return Ok(Poly::one(space));
    }
    let ma = a.monomial_content().expect("nonzero");
    let mb = b.monomial_content().expect("nonzero");
    let mg = ma.meet(&mb);
    let a1 = a.shift_down(&ma).integer_primitive().1;
    let b1 = b.shift_down(&mb).integer_primitive().1;
    let g = gcd_no_monomial(&a1, &b1, work)?;
    Ok(g.mul_monomial(&mg, &GaussianRational::one()))
}

/// Both inputs nonzero, integer-primitive and free of monomial content.
fn gcd_no_monomial(a: &Poly, b: &Poly, work: &mut Work) -> Step<Poly> {
    let space = a.space();
    if a.is_constant() || b.is_constant() {
        return Ok(Poly::one(space));
    }
    let am = a.monic();
    if am == b.monic() {
        return Ok(am);
    }
    let (small, big) = if a.num_terms() <= b.num_terms() {
        (a, b)
    } else {
        (b, a)
    };
    work.charge(small.num_terms() * big.num_terms())?;
    if big.div_exact(small).is_some() {
        return Ok(small.monic());
    }

    let nvars = space.total_vars();
    let in_a: Vec<bool> = (0..nvars).map(|v| a.uses_var(v)).collect();
    let in_b: Vec<bool> = (0..nvars).map(|v| b.uses_var(v)).collect();

    // A variable occurring in only one argument cannot occur in the gcd.
    for v in 0..nvars {
        if in_a[v] != in_b[v] {
            let (with_v, without_v) = if in_a[v] { (a, b) } else { (b, a) };
            let mut coeffs: Vec<Poly> = with_v
                .to_univariate(v)
                .into_iter()
                .filter(|c| !c.is_zero())
                .collect();
            coeffs.sort_by_key(|c| c.num_terms());
            let mut g = without_v.clone();
            for c in &coeffs {
                g = gcd_inner(&g, c, work)?;
                if g.is_constant() {
                    return Ok(Poly::one(space));
                }
            }
            return Ok(g.monic());
        }
    }

    let mut exhausted = false;
    let modular = super::modgcd::modular_gcd(a, b, |n| {
        exhausted = work.charge(n).is_err();
        !exhausted
    });
    if exhausted {
        return Err(Exhausted);
    }
    if let Some(g) = modular {
        return Ok(g);
    }

    let main = (0..nvars)
        .filter(|&v| in_a[v])
        .min_by_key(|&v| {
            let da = a.degree_in(v);
            let db = b.degree_in(v);
            (da.max(db), da.min(db))
        })
        .expect("non-constant polynomial uses a variable");

    let ua = a.to_univariate(main);
    let ub = b.to_univariate(main);
    let ca = content(&ua, work)?;
    let cb = content(&ub, work)?;
    let c = gcd_inner(&ca, &cb, work)?;
    let pa = divide_coeffs(&ua, &ca);
    let pb = divide_coeffs(&ub, &cb);
    let g = primitive_prs(pa, pb, work)?;
    let g = Poly::from_univariate(space, main, &g);
    Ok((&c * &g).monic())
}

/// Gcd of the coefficients of a univariate view.
fn content(coeffs: &[Poly], work: &mut Work) -> Step<Poly> {
    let space = coeffs[0].space();
    let mut nz: Vec<&Poly> = coeffs.iter().filter(|c| !c.is_zero()).collect();
    if nz.iter().any(|c| c.is_constant()) {
        return Ok(Poly::one(space));
    }
    nz.sort_by_key(|c| c.num_terms());
    let mut g = nz[0].monic();
    for c in &nz[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_inner(&g, c, work)?;
    }
    Ok(g)
}

fn divide_coeffs(coeffs: &[Poly], by: &Poly) -> Vec<Poly> {
    if by.is_one() {
        return coeffs.to_vec();
    }
    coeffs
        .iter()
        .map(|c| c.div_exact(by).expect("content divides every coefficient"))
        .collect()
}

fn trim(u: &mut Vec<Poly>) {
    while u.len() > 1 && u.last().is_some_and(|c| c.is_zero()) {
        u.pop();
    }
}

fn is_zero_uni(u: &[Poly]) -> bool {
    u.iter().all(|c| c.is_zero())
}

/// Rescales all coefficients by one rational so they become Gaussian integers with
/// no common rational-integer factor.
fn integer_normalize(u: &mut [Poly]) {
    let mut lcm = BigInt::one();
    for c in u.iter() {
        for (_, a) in c.terms() {
            lcm = lcm.lcm(&a.denom_lcm());
        }
    }
    let mut g = BigInt::zero();
    for c in u.iter() {
        for (_, a) in c.terms() {
            g = g.gcd((a.re() * &lcm).numer());
            g = g.gcd((a.im() * &lcm).numer());
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() {
        return;
    }
    let k = BigRational::new(lcm, g);
    if k.is_one() {
        return;
    }
    let k = GaussianRational::real(k);
    for c in u.iter_mut() {
        *c = c.scale(&k);
    }
}

/// Pseudo-remainder of `a` by `b` (both univariate views, `b` nonzero).
fn prem(a: &[Poly], b: &[Poly], work: &mut Work) -> Step<Vec<Poly>> {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while !is_zero_uni(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        let shift = dr - db;
        let cost: usize = r[..dr].iter().map(|c| c.num_terms() * lcb.num_terms()).sum::<usize>()
            + b[..db].iter().map(|c| c.num_terms() * lcr.num_terms()).sum::<usize>();
        work.charge(cost)?;
        let mut next = Vec::with_capacity(dr);
        for k in 0..dr {
            let mut t = if lcb.is_one() { r[k].clone() } else { &r[k] * lcb };
            if k >= shift {
                let bk = &b[k - shift];
                if !bk.is_zero() {
                    t = &t - &(&lcr * bk);
                }
            }
            next.push(t);
        }
        r = next;
        trim(&mut r);
        integer_normalize(&mut r);
    }
    Ok(r)
}

/// Euclidean loop on primitive parts; inputs are primitive in the main variable.
fn primitive_prs(mut a: Vec<Poly>, mut b: Vec<Poly>, work: &mut Work) -> Step<Vec<Poly>> {
    let space = a[0].space();
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.len() == 1 {
            return Ok(vec![Poly::one(space)]);
        }
        let mut r = prem(&a, &b, work)?;
        if is_zero_uni(&r) {
            integer_normalize(&mut b);
            return Ok(b);
        }
        if r.len() == 1 {
            return Ok(vec![Poly::one(space)]);
        }
        let c = content(&r, work)?;
        r = divide_coeffs(&r, &c);
        integer_normalize(&mut r);
        a = b;
        b = r;
    }
}
