//! Modular multivariate GCD: images modulo word-size primes are computed by dense
//! evaluation and Newton interpolation (Brown's algorithm), combined by Chinese
//! remaindering, and the lifted candidate is accepted only after exact trial
//! division over the Gaussian rationals.
//!
//! Gaussian-integer coefficients are mapped to `Z_p` for primes `p = 1 mod 4`
//! through a square root of `-1`, and recovered from the combined residue by
//! reducing a two-dimensional lattice.

use std::collections::HashMap;
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::gauss::GaussianRational;
use super::poly::Poly;
use super::MultiIndex;

const MAX_PRIMES: usize = 120;

#[derive(Clone, Copy)]
struct Fp {
    p: u64,
}

impl Fp {
    fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    fn reduce(self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("residue fits")
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let f = Fp { p: n };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = f.pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = f.mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primes below `2^62`, descending; the second list keeps those `= 1 mod 4`
/// together with a square root of `-1`.
fn primes() -> &'static (Vec<u64>, Vec<(u64, u64)>) {
    static PRIMES: OnceLock<(Vec<u64>, Vec<(u64, u64)>)> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut any = Vec::new();
        let mut gauss = Vec::new();
        let mut n = (1u64 << 62) - 1;
        while any.len() < MAX_PRIMES || gauss.len() < MAX_PRIMES {
            if is_prime(n) {
                if any.len() < MAX_PRIMES {
                    any.push(n);
                }
                if n % 4 == 1 && gauss.len() < MAX_PRIMES {
                    let f = Fp { p: n };
                    let root = (2..)
                        .map(|z| f.pow(z, (n - 1) / 4))
                        .find(|&r| f.mul(r, r) == n - 1)
                        .expect("p = 1 mod 4 has a square root of -1");
                    gauss.push((n, root));
                }
            }
            n -= 2;
        }
        (any, gauss)
    })
}

// ---------- dense univariate polynomials over Z_p (index = degree) ----------

fn utrim(mut u: Vec<u64>) -> Vec<u64> {
    while u.last() == Some(&0) {
        u.pop();
    }
    u
}

fn ueval(f: Fp, u: &[u64], x: u64) -> u64 {
    u.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

fn umul(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    utrim(out)
}

/// Quotient and remainder; `b` nonzero.
fn udivrem(f: Fp, a: &[u64], b: &[u64]) -> (Vec<u64>, Vec<u64>) {
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), utrim(r));
    }
    let inv = f.inv(*b.last().expect("nonzero divisor"));
    let mut q = vec![0; r.len() - b.len() + 1];
    for k in (0..q.len()).rev() {
        let c = f.mul(r[k + b.len() - 1], inv);
        q[k] = c;
        if c != 0 {
            for (j, &y) in b.iter().enumerate() {
                r[k + j] = f.sub(r[k + j], f.mul(c, y));
            }
        }
    }
    (utrim(q), utrim(r))
}

fn umonic(f: Fp, u: Vec<u64>) -> Vec<u64> {
    match u.last() {
        None => u,
        Some(&lc) => {
            let inv = f.inv(lc);
            u.into_iter().map(|c| f.mul(c, inv)).collect()
        }
    }
}

fn ugcd(f: Fp, a: &[u64], b: &[u64]) -> Vec<u64> {
    let (mut a, mut b) = (utrim(a.to_vec()), utrim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = udivrem(f, &a, &b);
        a = b;
        b = r;
    }
    umonic(f, a)
}

// ---------- sparse multivariate polynomials over Z_p ----------

type Exps = Vec<u32>;
type MP = HashMap<Exps, u64>;

fn mp_lead(a: &MP) -> Option<(&Exps, u64)> {
    a.iter().max_by(|x, y| x.0.cmp(y.0)).map(|(e, &c)| (e, c))
}

fn mp_scale(f: Fp, a: &MP, c: u64) -> MP {
    if c == 0 {
        return MP::new();
    }
    a.iter().map(|(e, &x)| (e.clone(), f.mul(x, c))).collect()
}

fn mp_monic(f: Fp, a: &MP) -> MP {
    match mp_lead(a) {
        None => MP::new(),
        Some((_, lc)) => mp_scale(f, a, f.inv(lc)),
    }
}

fn mp_uses(a: &MP, v: usize) -> bool {
    a.keys().any(|e| e[v] > 0)
}

fn mp_eval(f: Fp, a: &MP, v: usize, x: u64) -> MP {
    let maxd = a.keys().map(|e| e[v]).max().unwrap_or(0) as usize;
    let mut pw = Vec::with_capacity(maxd + 1);
    let mut acc = 1;
    for _ in 0..=maxd {
        pw.push(acc);
        acc = f.mul(acc, x);
    }
    let mut out = MP::new();
    for (e, &c) in a {
        let t = f.mul(c, pw[e[v] as usize]);
        if t == 0 {
            continue;
        }
        let mut k = e.clone();
        k[v] = 0;
        let slot = out.entry(k).or_insert(0);
        *slot = f.add(*slot, t);
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Coefficients in `Z_p[x_v]` of every monomial in the other variables.
fn mp_groups(a: &MP, v: usize) -> HashMap<Exps, Vec<u64>> {
    let mut g: HashMap<Exps, Vec<u64>> = HashMap::new();
    for (e, &c) in a {
        let d = e[v] as usize;
        let mut k = e.clone();
        k[v] = 0;
        let u = g.entry(k).or_default();
        if u.len() <= d {
            u.resize(d + 1, 0);
        }
        u[d] = c;
    }
    g
}

fn mp_from_groups(g: HashMap<Exps, Vec<u64>>, v: usize) -> MP {
    let mut out = MP::new();
    for (k, u) in g {
        for (d, c) in u.into_iter().enumerate() {
            if c != 0 {
                let mut e = k.clone();
                e[v] = d as u32;
                out.insert(e, c);
            }
        }
    }
    out
}

fn mp_content(f: Fp, a: &MP, v: usize) -> Vec<u64> {
    let mut g: Vec<u64> = Vec::new();
    for u in mp_groups(a, v).values() {
        g = if g.is_empty() { umonic(f, utrim(u.clone())) } else { ugcd(f, &g, u) };
        if g.len() == 1 {
            break;
        }
    }
    g
}

fn mp_div_univariate(f: Fp, a: &MP, v: usize, u: &[u64]) -> MP {
    if u.len() == 1 {
        return mp_scale(f, a, f.inv(u[0]));
    }
    let g = mp_groups(a, v)
        .into_iter()
        .map(|(k, w)| (k, udivrem(f, &w, u).0))
        .collect();
    mp_from_groups(g, v)
}

fn mp_mul_univariate(f: Fp, a: &MP, v: usize, u: &[u64]) -> MP {
    let g = mp_groups(a, v)
        .into_iter()
        .map(|(k, w)| (k, umul(f, &w, u)))
        .collect();
    mp_from_groups(g, v)
}

/// Leading coefficient in `Z_p[x_v]` with respect to lex order on the other variables.
fn mp_lead_univariate(a: &MP, v: usize) -> Vec<u64> {
    let g = mp_groups(a, v);
    let key = g.keys().max().expect("nonzero").clone();
    utrim(g[&key].clone())
}

fn mp_degree(a: &MP, v: usize) -> usize {
    a.keys().map(|e| e[v] as usize).max().unwrap_or(0)
}

/// Monic gcd over `Z_p` in the variables `0..nv` (all other exponents are zero).
fn pgcd(f: Fp, a: &MP, b: &MP, nv: usize) -> Option<MP> {
    if a.is_empty() {
        return Some(mp_monic(f, b));
    }
    if b.is_empty() {
        return Some(mp_monic(f, a));
    }
    let v = nv - 1;
    if nv == 1 {
        let ua = mp_groups(a, 0).into_values().next().expect("one group");
        let ub = mp_groups(b, 0).into_values().next().expect("one group");
        let g = ugcd(f, &ua, &ub);
        let width = a.keys().next().expect("nonzero").len();
        let mut out = MP::new();
        for (d, c) in g.into_iter().enumerate() {
            if c != 0 {
                let mut e = vec![0; width];
                e[0] = d as u32;
                out.insert(e, c);
            }
        }
        return Some(out);
    }
    if !mp_uses(a, v) && !mp_uses(b, v) {
        return pgcd(f, a, b, nv - 1);
    }
    let ca = mp_content(f, a, v);
    let cb = mp_content(f, b, v);
    let c = ugcd(f, &ca, &cb);
    let a = mp_div_univariate(f, a, v, &ca);
    let b = mp_div_univariate(f, b, v, &cb);
    let la = mp_lead_univariate(&a, v);
    let lb = mp_lead_univariate(&b, v);
    let g = ugcd(f, &la, &lb);
    let bound = (g.len() - 1) + mp_degree(&a, v).min(mp_degree(&b, v));

    let mut interp: Option<(MP, Exps)> = None;
    let mut basis: Vec<u64> = vec![1];
    let mut points = 0usize;
    let mut alpha = 0u64;
    while alpha < f.p.min(1 << 20) {
        alpha += 1;
        let ga = ueval(f, &g, alpha);
        if ga == 0 || ueval(f, &la, alpha) == 0 || ueval(f, &lb, alpha) == 0 {
            continue;
        }
        let ia = mp_eval(f, &a, v, alpha);
        let ib = mp_eval(f, &b, v, alpha);
        let h = mp_scale(f, &mp_monic(f, &pgcd(f, &ia, &ib, nv - 1)?), ga);
        let lm = mp_lead(&h).expect("nonzero image").0.clone();
        let restart = match &interp {
            None => true,
            Some((_, cur)) => lm < *cur,
        };
        if restart {
            interp = Some((h, lm));
            basis = vec![f.neg(alpha), 1];
            points = 1;
        } else if lm == interp.as_ref().expect("set").1 {
            let (cpoly, _) = interp.as_mut().expect("set");
            let at = mp_eval(f, cpoly, v, alpha);
            let mut diff = h;
            for (e, x) in at {
                let slot = diff.entry(e).or_insert(0);
                *slot = f.sub(*slot, x);
            }
            diff.retain(|_, x| *x != 0);
            if !diff.is_empty() {
                let w = f.inv(ueval(f, &basis, alpha));
                let corr = mp_mul_univariate(f, &diff, v, &basis.iter().map(|&x| f.mul(x, w)).collect::<Vec<_>>());
                for (e, x) in corr {
                    let slot = cpoly.entry(e).or_insert(0);
                    *slot = f.add(*slot, x);
                }
                cpoly.retain(|_, x| *x != 0);
            }
            basis = umul(f, &basis, &[f.neg(alpha), 1]);
            points += 1;
        } else {
            continue;
        }
        if points > bound {
            let (cpoly, _) = interp.take().expect("set");
            let cc = mp_content(f, &cpoly, v);
            let pp = mp_div_univariate(f, &cpoly, v, &cc);
            return Some(mp_monic(f, &mp_mul_univariate(f, &pp, v, &c)));
        }
    }
    None
}

// ---------- lifting ----------

fn gauss_parts(c: &GaussianRational) -> (BigInt, BigInt) {
    debug_assert!(c.is_gaussian_integer());
    (c.re().to_integer(), c.im().to_integer())
}

fn image(f: Fp, iota: u64, a: &Poly) -> MP {
    let mut out = MP::new();
    for (e, c) in a.terms() {
        let (re, im) = gauss_parts(c);
        let mut r = f.reduce(&re);
        if !im.is_zero() {
            r = f.add(r, f.mul(f.reduce(&im), iota));
        }
        if r != 0 {
            out.insert(e.exponents().to_vec(), r);
        }
    }
    out
}

fn symmetric(r: &BigInt, m: &BigInt) -> BigInt {
    let half: BigInt = m >> 1;
    if r > &half {
        r - m
    } else {
        r.clone()
    }
}

fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // nearest integer to a / b, b > 0
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * two))
}

/// Smallest `(x, y)` with `x + y * iota = r (mod m)`.
fn gauss_reconstruct(r: &BigInt, m: &BigInt, iota: &BigInt) -> (BigInt, BigInt) {
    let dot = |a: &(BigInt, BigInt), b: &(BigInt, BigInt)| &a.0 * &b.0 + &a.1 * &b.1;
    let mut u = (m.clone(), BigInt::zero());
    let mut v = (-iota.clone(), BigInt::one());
    if dot(&u, &u) < dot(&v, &v) {
        std::mem::swap(&mut u, &mut v);
    }
    // Lagrange reduction: |v| <= |u| throughout.
    loop {
        let q = round_div(&dot(&u, &v), &dot(&v, &v));
        let w = (&u.0 - &q * &v.0, &u.1 - &q * &v.1);
        if dot(&w, &w) >= dot(&v, &v) {
            u = w;
            break;
        }
        u = v;
        v = w;
    }
    // Babai rounding of the target (r, 0) in the basis (v, u).
    let det = &v.0 * &u.1 - &v.1 * &u.0;
    let (t0, t1) = (r.clone(), BigInt::zero());
    let sign = if det.is_negative() { -BigInt::one() } else { BigInt::one() };
    let det_abs = det.abs();
    let cx = round_div(&(&sign * (&t0 * &u.1 - &t1 * &u.0)), &det_abs);
    let cy = round_div(&(&sign * (&v.0 * &t1 - &v.1 * &t0)), &det_abs);
    let x = &t0 - &cx * &v.0 - &cy * &u.0;
    let y = &t1 - &cx * &v.1 - &cy * &u.1;
    (x, y)
}

fn crt(r1: &BigInt, m1: &BigInt, r2: u64, p: u64) -> BigInt {
    let f = Fp { p };
    let m1p = f.reduce(m1);
    let r1p = f.reduce(r1);
    let t = f.mul(f.sub(r2, r1p), f.inv(m1p));
    r1 + m1 * BigInt::from(t)
}

/// Outcome of the modular attempt: the monic gcd, or `None` when no candidate
/// could be certified within the prime budget.
pub(crate) fn modular_gcd(a: &Poly, b: &Poly, mut charge: impl FnMut(usize) -> bool) -> Option<Poly> {
    let space = a.space();
    let nv = space.total_vars();
    let integral = |p: &Poly| p.terms().iter().all(|(_, c)| c.is_gaussian_integer());
    if !integral(a) || !integral(b) {
        return None;
    }
    let complex = a.terms().iter().chain(b.terms()).any(|(_, c)| !c.im().is_zero());
    let lead = |p: &Poly| {
        p.terms()
            .iter()
            .max_by(|x, y| x.0.exponents().cmp(y.0.exponents()))
            .map(|(_, c)| gauss_parts(c))
            .expect("nonzero")
    };
    let (la, lb) = (lead(a), lead(b));
    let gamma = la.clone();

    let table = primes();
    let prime_list: Vec<(u64, u64)> = if complex {
        table.1.clone()
    } else {
        table.0.iter().map(|&p| (p, 0)).collect()
    };

    let mut modulus = BigInt::one();
    let mut iota_m = BigInt::zero();
    let mut residues: HashMap<Exps, BigInt> = HashMap::new();
    let mut lm: Option<Exps> = None;
    let mut previous: Option<Poly> = None;

    for &(p, iota) in &prime_list {
        if !charge(a.num_terms() + b.num_terms()) {
            return None;
        }
        let f = Fp { p };
        let to_p = |(re, im): &(BigInt, BigInt)| f.add(f.reduce(re), f.mul(f.reduce(im), iota));
        if to_p(&la) == 0 || to_p(&lb) == 0 {
            continue;
        }
        let Some(h) = pgcd(f, &image(f, iota, a), &image(f, iota, b), nv) else {
            continue;
        };
        let h = mp_scale(f, &mp_monic(f, &h), to_p(&gamma));
        let lead_e = mp_lead(&h).expect("nonzero").0.clone();
        if lead_e.iter().all(|&x| x == 0) {
            return Some(Poly::one(space));
        }
        match &lm {
            Some(cur) if lead_e > *cur => continue,
            Some(cur) if lead_e == *cur => {
                let keys: Vec<Exps> = residues.keys().chain(h.keys()).cloned().collect();
                let mut next = HashMap::new();
                for k in keys {
                    if next.contains_key(&k) {
                        continue;
                    }
                    let r1 = residues.get(&k).cloned().unwrap_or_default();
                    let r2 = h.get(&k).copied().unwrap_or(0);
                    next.insert(k, crt(&r1, &modulus, r2, p));
                }
                residues = next;
                if complex {
                    iota_m = crt(&iota_m, &modulus, iota, p);
                }
                modulus *= BigInt::from(p);
            }
            _ => {
                lm = Some(lead_e);
                residues = h.into_iter().map(|(k, r)| (k, BigInt::from(r))).collect();
                modulus = BigInt::from(p);
                iota_m = BigInt::from(iota);
                previous = None;
                continue;
            }
        }

        let mut terms = Vec::with_capacity(residues.len());
        for (k, r) in &residues {
            let (re, im) = if complex {
                gauss_reconstruct(r, &modulus, &iota_m)
            } else {
                (symmetric(r, &modulus), BigInt::zero())
            };
            if re.sign() == Sign::NoSign && im.is_zero() {
                continue;
            }
            terms.push((
                MultiIndex::from_slice(k),
                GaussianRational::new(BigRational::from_integer(re), BigRational::from_integer(im)),
            ));
        }
        let candidate = Poly::from_terms(space, terms).expect("valid terms");
        if previous.as_ref() == Some(&candidate) && !candidate.is_zero() {
            let g = candidate.monic();
            if a.div_exact(&g).is_some() && b.div_exact(&g).is_some() {
                return Some(g);
            }
        }
        previous = Some(candidate);
    }
    None
}
