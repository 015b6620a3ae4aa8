//! Sparse multivariate polynomials with Gaussian-rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::gauss::GaussianRational;
use super::monomial::MultiIndex;
use super::{Mode, VarSpace};
use crate::error::{Result, WmpError};

/// A polynomial stored as its nonzero terms in ascending graded-lex order.
///
/// The zero polynomial has no terms. The number of terms is the size `e_a` of the
/// polynomial's effective structure.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    space: VarSpace,
    terms: Vec<(MultiIndex, GaussianRational)>,
}

impl Poly {
    pub fn zero(space: VarSpace) -> Self {
        Self {
            space,
            terms: Vec::new(),
        }
    }

    pub fn one(space: VarSpace) -> Self {
        Self::constant(space, GaussianRational::one())
    }

    pub fn constant(space: VarSpace, c: GaussianRational) -> Self {
        Self::monomial(space, MultiIndex::zero(space.total_vars()), c)
    }

    pub fn from_int(space: VarSpace, c: i64) -> Self {
        Self::constant(space, GaussianRational::from_int(c))
    }

    /// The variable `s_{var+1}`.
    pub fn var(space: VarSpace, var: usize) -> Self {
        Self::monomial(
            space,
            MultiIndex::var(space.total_vars(), var, 1),
            GaussianRational::one(),
        )
    }

    pub fn monomial(space: VarSpace, exp: MultiIndex, c: GaussianRational) -> Self {
        debug_assert_eq!(exp.len(), space.total_vars());
        if c.is_zero() {
            Self::zero(space)
        } else {
            Self {
                space,
                terms: vec![(exp, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates and drops zeros.
    pub fn from_terms(
        space: VarSpace,
        terms: impl IntoIterator<Item = (MultiIndex, GaussianRational)>,
    ) -> Result<Self> {
        let n = space.total_vars();
        let mut acc: BTreeMap<MultiIndex, GaussianRational> = BTreeMap::new();
        for (exp, c) in terms {
            if exp.len() != n {
                return Err(WmpError::dim(format!(
                    "exponent vector of length {} in a space with {} variables",
                    exp.len(),
                    n
                )));
            }
            if space.mode() == Mode::Real && !c.is_real() {
                return Err(WmpError::Schema(
                    "complex coefficient in a real-mode polynomial".into(),
                ));
            }
            *acc.entry(exp).or_default() += &c;
        }
        Ok(Self {
            space,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    /// Builds from terms already sorted ascending, distinct and nonzero.
    pub(crate) fn from_sorted_unchecked(
        space: VarSpace,
        terms: Vec<(MultiIndex, GaussianRational)>,
    ) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Self { space, terms }
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> &[(MultiIndex, GaussianRational)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(MultiIndex, GaussianRational)> {
        self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(e, _)| e.is_constant())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_constant() && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Constant coefficient if the polynomial is constant.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.as_slice() {
            [] => Some(GaussianRational::zero()),
            [(e, c)] if e.is_constant() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn coeff(&self, exp: &MultiIndex) -> GaussianRational {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exp))
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<&(MultiIndex, GaussianRational)> {
        self.terms.last()
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.terms.last().map(|(_, c)| c)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(e, _)| e.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e.get(var)).max().unwrap_or(0)
    }

    /// Per-variable maximum exponents.
    pub fn degree_vector(&self) -> MultiIndex {
        let mut acc = MultiIndex::zero(self.space.total_vars());
        for (e, _) in &self.terms {
            acc = acc.join(e);
        }
        acc
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Option<MultiIndex> {
        let mut it = self.terms.iter();
        let first = it.next()?.0.clone();
        Some(it.fold(first, |acc, (e, _)| acc.meet(e)))
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.iter().any(|(e, _)| e.get(var) > 0)
    }

    fn check_space(&self, other: &Poly) {
        assert_eq!(
            self.space, other.space,
            "polynomials over different variable spaces"
        );
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.space.ensure_same(&other.space)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.space.ensure_same(&other.space)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.space.ensure_same(&other.space)?;
        Ok(self * other)
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        self.check_space(other);
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate_other {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(e, c)| {
            (e.clone(), if negate_other { -c } else { c.clone() })
        }));
        Poly {
            space: self.space,
            terms: out,
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.space);
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            space: self.space,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Multiplies by the monomial `c * S^exp`; graded-lex order is preserved.
    pub fn mul_monomial(&self, exp: &MultiIndex, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.space);
        }
        Poly {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.add(exp), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.space);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Conjugation: conjugates every coefficient and reverses every exponent vector
    /// in complex mode; the identity in real mode.
    pub fn conj(&self) -> Poly {
        match self.space.mode() {
            Mode::Real => self.clone(),
            Mode::Complex => {
                let mut terms: Vec<_> = self
                    .terms
                    .iter()
                    .map(|(e, c)| (e.reversed(), c.conj()))
                    .collect();
                terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                Poly {
                    space: self.space,
                    terms,
                }
            }
        }
    }

    /// Exact substitution of `point` (one value per variable, conjugate variables included).
    pub fn eval(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        if point.len() != self.space.total_vars() {
            return Err(WmpError::dim(format!(
                "evaluation point has {} values, expected {}",
                point.len(),
                self.space.total_vars()
            )));
        }
        let degs = self.degree_vector();
        let powers: Vec<Vec<GaussianRational>> = point
            .iter()
            .zip(degs.exponents())
            .map(|(v, &d)| {
                let mut pw = Vec::with_capacity(d as usize + 1);
                pw.push(GaussianRational::one());
                for k in 1..=d as usize {
                    let next = &pw[k - 1] * v;
                    pw.push(next);
                }
                pw
            })
            .collect();
        let mut acc = GaussianRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (var, &k) in e.exponents().iter().enumerate() {
                if k > 0 {
                    t = &t * &powers[var][k as usize];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Scales so the leading coefficient (graded-lex) is 1. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.recip().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// Returns `(k, q)` with `q = k * self` having Gaussian-integer coefficients whose
    /// real and imaginary parts share no common integer factor. `k` is a nonzero rational.
    pub fn integer_primitive(&self) -> (BigRational, Poly) {
        if self.is_zero() {
            return (BigRational::one(), self.clone());
        }
        let mut lcm = BigInt::one();
        for (_, c) in &self.terms {
            lcm = lcm.lcm(&c.denom_lcm());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let re = c.re() * &lcm;
            let im = c.im() * &lcm;
            g = g.gcd(re.numer());
            g = g.gcd(im.numer());
        }
        let k = BigRational::new(lcm, g);
        if k.is_one() {
            return (k, self.clone());
        }
        let kk = GaussianRational::real(k.clone());
        (k, self.scale(&kk))
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        self.check_space(divisor);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(self.clone());
        }
        let (lead_e, lead_c) = divisor.leading_term().expect("nonzero");
        let lead_inv = lead_c.recip().expect("nonzero");
        if divisor.is_monomial() {
            let mut terms = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                terms.push((e.checked_sub(lead_e)?, c * &lead_inv));
            }
            return Some(Poly {
                space: self.space,
                terms,
            });
        }
        // Quick rejections: degree vectors and term counts.
        let dv = divisor.degree_vector();
        if !dv.divides(&self.degree_vector()) {
            return None;
        }
        let (self_lead, _) = self.leading_term().expect("nonzero");
        self_lead.checked_sub(lead_e)?;
        let (self_low, _) = &self.terms[0];
        self_low.checked_sub(&divisor.terms[0].0)?;

        // Both sides become Gaussian-integer primitive, so by Gauss's lemma the
        // quotient exists over Q(i) only if it exists over Z[i].
        let (ka, a) = self.integer_primitive();
        let (kd, d) = divisor.integer_primitive();
        let ca = int_parts(&a).expect("integral");
        let cd = int_parts(&d).expect("integral");
        let content = cd.iter().fold((BigInt::zero(), BigInt::zero()), |g, c| gauss_gcd(&g, c));
        let cd: Vec<_> = cd.iter().map(|c| gauss_div(c, &content)).collect();
        let q = div_exact_integral(&a, &ca, &d, &cd)?;
        let unit = GaussianRational::new(
            BigRational::from_integer(content.0.clone()),
            BigRational::from_integer(content.1.clone()),
        );
        let factor = &GaussianRational::real(kd / ka) * &unit.recip().expect("nonzero");
        Some(if factor.is_one() { q } else { q.scale(&factor) })
    }

    /// Divides every exponent vector by the monomial `m` (which must divide each term).
    pub(crate) fn shift_down(&self, m: &MultiIndex) -> Poly {
        Poly {
            space: self.space,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.checked_sub(m).expect("monomial divides"), c.clone()))
                .collect(),
        }
    }

    /// Splits into coefficients of powers of `var`: `self = sum_k coeffs[k] * s_var^k`.
    pub(crate) fn to_univariate(&self, var: usize) -> Vec<Poly> {
        let deg = self.degree_in(var) as usize;
        let mut parts: Vec<Vec<(MultiIndex, GaussianRational)>> = vec![Vec::new(); deg + 1];
        for (e, c) in &self.terms {
            let k = e.get(var) as usize;
            let mut e2 = e.clone();
            e2.set(var, 0);
            parts[k].push((e2, c.clone()));
        }
        parts
            .into_iter()
            .map(|mut t| {
                // Removing one variable can reorder terms of equal total degree.
                t.sort_unstable_by(|a, b| a.0.cmp(&b.0));
                Poly {
                    space: self.space,
                    terms: t,
                }
            })
            .collect()
    }

    pub(crate) fn from_univariate(space: VarSpace, var: usize, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut e2 = e.clone();
                e2.set(var, k as u32);
                terms.push((e2, a.clone()));
            }
        }
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { space, terms }
    }

    /// Human-readable rendering, leading term first.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .exponents()
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(v, &x)| {
                    let name = self.space.var_name(v);
                    if x == 1 {
                        name
                    } else {
                        format!("{name}^{x}")
                    }
                })
                .collect();
            let (neg, mag) = if c.is_real() && c.re().is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", mag, mono.join("*")));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        self.merge(rhs, true)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            space: self.space,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        self.check_space(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.space);
        }
        let (small, big) = if self.terms.len() <= rhs.terms.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        if small.terms.len() == 1 {
            let (e, c) = &small.terms[0];
            return big.mul_monomial(e, c);
        }
        if let Some(p) = mul_small_ints(small, big).or_else(|| mul_big_ints(small, big)) {
            return p;
        }
        // Clear denominators, multiply over Z[i], rescale once.
        let (ks, s) = small.integer_primitive();
        let (kb, b) = big.integer_primitive();
        let p = mul_small_ints(&s, &b)
            .or_else(|| mul_big_ints(&s, &b))
            .expect("integral factors");
        p.scale(&GaussianRational::real((ks * kb).recip()))
    }
}

fn int_parts(p: &Poly) -> Option<Vec<(BigInt, BigInt)>> {
    p.terms
        .iter()
        .map(|(_, c)| c.is_gaussian_integer().then(|| (c.re().to_integer(), c.im().to_integer())))
        .collect()
}

/// `a / b` in `Z[i]`, assuming `b` divides `a`.
fn gauss_div(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    let norm = &b.0 * &b.0 + &b.1 * &b.1;
    let nr = &a.0 * &b.0 + &a.1 * &b.1;
    let ni = &a.1 * &b.0 - &a.0 * &b.1;
    (nr / &norm, ni / norm)
}

/// Euclid in `Z[i]` with rounded quotients.
fn gauss_gcd(a: &(BigInt, BigInt), b: &(BigInt, BigInt)) -> (BigInt, BigInt) {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !(b.0.is_zero() && b.1.is_zero()) {
        let norm = &b.0 * &b.0 + &b.1 * &b.1;
        let nr = &a.0 * &b.0 + &a.1 * &b.1;
        let ni = &a.1 * &b.0 - &a.0 * &b.1;
        let twice = &norm + &norm;
        let round = |x: BigInt| (&x + &x + &norm).div_floor(&twice);
        let (qr, qi) = (round(nr), round(ni));
        let r = (&a.0 - (&qr * &b.0 - &qi * &b.1), &a.1 - (&qr * &b.1 + &qi * &b.0));
        a = b;
        b = r;
    }
    a
}

/// Long division over `Z[i]` by a divisor with unit Gaussian content; `None` on a
/// remainder.
fn div_exact_integral(a: &Poly, ca: &[(BigInt, BigInt)], d: &Poly, cd: &[(BigInt, BigInt)]) -> Option<Poly> {
    let (lead_e, _) = d.leading_term().expect("nonzero");
    let (lr, li) = cd.last().expect("nonzero").clone();
    let norm = &lr * &lr + &li * &li;
    let mut rem: BTreeMap<MultiIndex, (BigInt, BigInt)> =
        a.terms.iter().map(|(e, _)| e.clone()).zip(ca.iter().cloned()).collect();
    let lower: Vec<_> = d.terms[..d.terms.len() - 1].iter().map(|(e, _)| e).zip(cd).collect();
    let mut quot = Vec::new();
    while let Some((e, (cr, ci))) = rem.pop_last() {
        let qe = e.checked_sub(lead_e)?;
        let (nr, ni) = (&cr * &lr + &ci * &li, &ci * &lr - &cr * &li);
        let (qr, rr) = nr.div_rem(&norm);
        let (qi, ri) = ni.div_rem(&norm);
        if !rr.is_zero() || !ri.is_zero() {
            return None;
        }
        for (de, (dr, di)) in &lower {
            let key = de.add(&qe);
            let slot = rem.entry(key.clone()).or_default();
            slot.0 -= &qr * dr - &qi * di;
            slot.1 -= &qr * di + &qi * dr;
            if slot.0.is_zero() && slot.1.is_zero() {
                rem.remove(&key);
            }
        }
        quot.push((qe, GaussianRational::new(BigRational::from_integer(qr), BigRational::from_integer(qi))));
    }
    quot.reverse();
    Some(Poly { space: a.space, terms: quot })
}

fn small_parts(p: &Poly) -> Option<Vec<(i64, i64)>> {
    use num_traits::ToPrimitive;
    p.terms
        .iter()
        .map(|(_, c)| {
            if !c.is_gaussian_integer() {
                return None;
            }
            Some((c.re().numer().to_i64()?, c.im().numer().to_i64()?))
        })
        .collect()
}

/// Product for coefficients fitting in `i64`, accumulated in `i128`; `None` on overflow.
fn mul_small_ints(a: &Poly, b: &Poly) -> Option<Poly> {
    let (ca, cb) = (small_parts(a)?, small_parts(b)?);
    let mut acc: HashMap<MultiIndex, (i128, i128)> = HashMap::with_capacity(a.terms.len() * b.terms.len() / 2 + 1);
    for ((ea, _), &(ar, ai)) in a.terms.iter().zip(&ca) {
        for ((eb, _), &(br, bi)) in b.terms.iter().zip(&cb) {
            let (ar, ai, br, bi) = (ar as i128, ai as i128, br as i128, bi as i128);
            let re = (ar * br).checked_sub(ai * bi)?;
            let im = (ar * bi).checked_add(ai * br)?;
            let slot = acc.entry(ea.add(eb)).or_insert((0, 0));
            slot.0 = slot.0.checked_add(re)?;
            slot.1 = slot.1.checked_add(im)?;
        }
    }
    let mut terms: Vec<_> = acc
        .into_iter()
        .filter(|(_, c)| *c != (0, 0))
        .map(|(e, (re, im))| {
            let part = |v: i128| BigRational::from_integer(BigInt::from(v));
            (e, GaussianRational::new(part(re), part(im)))
        })
        .collect();
    terms.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    Some(Poly { space: a.space, terms })
}

/// Product over Gaussian integers with `BigInt` parts.
fn mul_big_ints(a: &Poly, b: &Poly) -> Option<Poly> {
    let integral = |p: &Poly| p.terms.iter().all(|(_, c)| c.is_gaussian_integer());
    if !integral(a) || !integral(b) {
        return None;
    }
    let parts = |p: &Poly| -> Vec<(BigInt, BigInt)> {
        p.terms.iter().map(|(_, c)| (c.re().to_integer(), c.im().to_integer())).collect()
    };
    let (ca, cb) = (parts(a), parts(b));
    let mut acc: HashMap<MultiIndex, (BigInt, BigInt)> = HashMap::with_capacity(a.terms.len() * b.terms.len() / 2 + 1);
    for ((ea, _), (ar, ai)) in a.terms.iter().zip(&ca) {
        for ((eb, _), (br, bi)) in b.terms.iter().zip(&cb) {
            let slot = acc.entry(ea.add(eb)).or_default();
            slot.0 += ar * br;
            if !ai.is_zero() || !bi.is_zero() {
                slot.0 -= ai * bi;
                slot.1 += ar * bi + ai * br;
            }
        }
    }
    let mut terms: Vec<_> = acc
        .into_iter()
        .filter(|(_, (re, im))| !re.is_zero() || !im.is_zero())
        .map(|(e, (re, im))| (e, GaussianRational::new(BigRational::from_integer(re), BigRational::from_integer(im))))
        .collect();
    terms.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    Some(Poly { space: a.space, terms })
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &'a Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn vs() -> VarSpace {
        VarSpace::real(2)
    }
    fn x() -> Poly {
        Poly::var(vs(), 0)
    }
    fn y() -> Poly {
        Poly::var(vs(), 1)
    }
    fn c(v: i64) -> Poly {
        Poly::from_int(vs(), v)
    }

    #[test]
    fn add_cancels_exactly() {
        let a = &x() + &c(1);
        let b = &(-&x()) + &c(2);
        assert_eq!(&a + &b, c(3));
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn mul_expands() {
        let a = &x() + &c(1);
        let b = &x() - &c(1);
        assert_eq!(&a * &b, &(&x() * &x()) - &c(1));
        let xy = &x() * &y();
        assert_eq!(xy.terms()[0].0, MultiIndex::from_slice(&[1, 1]));
    }

    #[test]
    fn example_entries() {
        // (1 - 3x) * (8 + 5x - y) = 8 - 19x - 15x^2 - y + 3xy
        let a = &c(1) - &(&c(3) * &x());
        let b = &(&c(8) + &(&c(5) * &x())) - &y();
        let expected = Poly::from_terms(
            vs(),
            vec![
                (MultiIndex::from_slice(&[0, 0]), GaussianRational::from_int(8)),
                (MultiIndex::from_slice(&[1, 0]), GaussianRational::from_int(-19)),
                (MultiIndex::from_slice(&[2, 0]), GaussianRational::from_int(-15)),
                (MultiIndex::from_slice(&[0, 1]), GaussianRational::from_int(-1)),
                (MultiIndex::from_slice(&[1, 1]), GaussianRational::from_int(3)),
            ],
        )
        .unwrap();
        assert_eq!(&a * &b, expected);
        // (1 - 3x) + (5 + 9x - 10y) = 6 + 6x - 10y
        let d = &(&c(5) + &(&c(9) * &x())) - &(&c(10) * &y());
        assert_eq!(&a + &d, &(&c(6) + &(&c(6) * &x())) - &(&c(10) * &y()));
    }

    #[test]
    fn conj_reverses_and_conjugates() {
        let s = VarSpace::complex(1);
        let is1 = Poly::monomial(s, MultiIndex::from_slice(&[1, 0]), GaussianRational::i());
        let expected = Poly::monomial(
            s,
            MultiIndex::from_slice(&[0, 1]),
            -GaussianRational::i(),
        );
        assert_eq!(is1.conj(), expected);
        let t = Poly::monomial(s, MultiIndex::from_slice(&[9, 10]), GaussianRational::from_int(4));
        assert_eq!(t.conj().terms()[0].0, MultiIndex::from_slice(&[10, 9]));
        assert_eq!(Poly::from_int(s, 10).conj(), Poly::from_int(s, 10));
    }

    #[test]
    fn exact_division() {
        let a = &x() + &y();
        let b = &x() - &c(2);
        let p = &a * &b;
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        assert_eq!(p.div_exact(&(&y() + &c(5))), None);
        assert_eq!(c(6).div_exact(&c(4)), Some(Poly::constant(vs(), GaussianRational::from_frac(3, 2))));
    }

    #[test]
    fn eval_substitutes() {
        let a = &c(1) - &(&c(3) * &x());
        let pt = [GaussianRational::from_int(1), GaussianRational::from_int(7)];
        assert_eq!(a.eval(&pt).unwrap(), GaussianRational::from_int(-2));
        assert!(Poly::zero(vs()).eval(&pt).unwrap().is_zero());
        assert!(a.eval(&pt[..1]).is_err());
    }

    #[test]
    fn mismatched_spaces_error() {
        let a = Poly::one(VarSpace::real(1));
        assert!(a.checked_add(&c(1)).is_err());
        assert!(a.checked_mul(&c(1)).is_err());
    }

    #[test]
    fn integer_primitive_clears() {
        let p = Poly::from_terms(
            vs(),
            vec![
                (MultiIndex::from_slice(&[1, 0]), GaussianRational::from_frac(2, 3)),
                (MultiIndex::from_slice(&[0, 0]), GaussianRational::from_frac(4, 9)),
            ],
        )
        .unwrap();
        let (_, q) = p.integer_primitive();
        assert_eq!(q, &(&c(3) * &x()) + &c(2));
    }

    #[test]
    fn univariate_roundtrip() {
        let p = &(&(&x() * &x()) * &y()) + &(&y() + &c(3));
        let u = p.to_univariate(1);
        assert_eq!(u.len(), 2);
        assert_eq!(Poly::from_univariate(vs(), 1, &u), p);
    }
}
