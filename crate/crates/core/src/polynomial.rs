//! Fraction-free column partitioning: `X_i = Z_i / Y_i` and `N_i^{-1} = N̄_i / N̲_i`
//! with polynomial numerators and denominators, over any [`PolyStructure`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Result, WmpError};
use crate::matrix::{PolyMatrix, PolyStructure};
use crate::rational::{Branch, RatMatrix};
use crate::ring::{gcd_with_budget, GaussianRational, GcdBudget, Poly};

/// Intermediate quantities of one fraction-free step.
#[derive(Clone, Debug)]
pub struct PolyStepTrace {
    pub d: PolyMatrix,
    pub c: PolyMatrix,
    pub v: PolyMatrix,
    pub w: Poly,
    pub phi: PolyMatrix,
    pub psi: Poly,
    /// `Δ̄_i`, zero-`C` branch only.
    pub delta_over: Option<Poly>,
    /// `Δ̲_i`, zero-`C` branch only.
    pub delta_under: Option<Poly>,
    pub theta: PolyMatrix,
    pub psi_row: PolyMatrix,
    pub branch: Branch,
    /// False when the GCD budget ran out and only a partial factor was cancelled.
    pub cancel_complete: bool,
}

/// One step of the recursion for `N̄_i / N̲_i`.
#[derive(Clone, Debug)]
pub struct NInvTrace {
    pub h_under: Poly,
    pub f_over: PolyMatrix,
    /// `Ē_{i-1} = H̲_i N̄_{i-1} + F̄_i F̄_i*` before the exact division.
    pub e_over: PolyMatrix,
    pub n_over: PolyMatrix,
    pub n_under: Poly,
}

#[derive(Clone, Debug)]
pub struct PinvResult {
    pub z: PolyMatrix,
    pub y: Poly,
    pub x: RatMatrix,
}

/// Every `(Z_i, Y_i)` plus the traces of both recursions.
#[derive(Clone, Debug)]
pub struct PolyRun {
    pub zy: Vec<(PolyMatrix, Poly)>,
    pub traces: Vec<PolyStepTrace>,
    pub ninv: Vec<NInvTrace>,
}

fn nonzero_or(p: Poly, what: &str) -> Result<Poly> {
    if p.is_zero() {
        Err(WmpError::WeightNotPositiveDefinite(what.to_string()))
    } else {
        Ok(p)
    }
}

/// `(Z_1, Y_1) = (a1* M, a1* M a1)`, or `(0, 1)` when `a1 = 0`.
pub fn zy_init<S: PolyStructure>(a1: &S, m: &S) -> Result<(S, Poly)> {
    let space = a1.space();
    if a1.is_zero() {
        return Ok((S::zeros(space, 1, a1.rows()), Poly::one(space)));
    }
    let z = a1.conj_transpose().mul(m)?;
    let y = nonzero_or(z.mul(a1)?.to_scalar()?, "a1* M a1")?;
    Ok((z, y))
}

pub struct PolyStepInputs<'a, S> {
    pub z_prev: &'a S,
    pub y_prev: &'a Poly,
    pub a_prev: &'a S,
    pub a_i: &'a S,
    pub m: &'a S,
    pub n_prev: &'a S,
    pub l_i: &'a S,
    pub n_ii: &'a Poly,
    pub nbar_prev: &'a S,
    pub nunder_prev: &'a Poly,
}

pub fn zy_step<S: PolyStructure>(inp: &PolyStepInputs<'_, S>, budget: GcdBudget) -> Result<(S, Poly, PolyStepTrace)> {
    let space = inp.z_prev.space();
    let (z, y, nu) = (inp.z_prev, inp.y_prev, inp.nunder_prev);
    let k = z.rows();

    let d = z.mul(inp.a_i)?;
    let c = inp.a_i.scale(y)?.sub(&inp.a_prev.mul(&d)?)?;
    let nbar_l = inp.nbar_prev.mul(inp.l_i)?;
    let phi = S::identity(space, k).scale(y)?.sub(&z.mul(inp.a_prev)?)?.mul(&nbar_l)?;
    let psi = nonzero_or(y * nu, "psi")?;

    let (v, w, delta_over, delta_under, branch) = if !c.is_zero() {
        let cs_m = c.conj_transpose().mul(inp.m)?;
        let w = cs_m.mul(&c)?.to_scalar()?;
        (cs_m.scale(y)?, w, None, None, Branch::NonzeroC)
    } else {
        let ys = y.conj();
        let ds = d.conj_transpose();
        let ls = inp.l_i.conj_transpose();
        let ysy = &ys * y;
        let dnd = ds.mul(inp.n_prev)?.mul(&d)?.to_scalar()?;
        let dl = ds.mul(inp.l_i)?.to_scalar()?;
        let ld = ls.mul(&d)?.to_scalar()?;
        let lphi = ls.mul(&phi)?.to_scalar()?;
        let cross = &(y * &dl) + &(&ys * &ld);
        let delta_over = &(&(&(inp.n_ii * nu) * &ysy) + &(nu * &dnd)) - &(&(nu * &cross) + &(&ys * &lphi));
        let delta_under = &ysy * nu;
        let v = ds.mul(inp.n_prev)?.sub(&ls.scale(&ys)?)?.mul(z)?.scale(nu)?;
        (v, delta_over.clone(), Some(delta_over), Some(delta_under), Branch::ZeroC)
    };
    let w = nonzero_or(w, "W")?;

    let theta = z.scale(&(nu * &w))?.sub(&d.scale(nu)?.add(&phi)?.mul(&v)?)?;
    let psi_row = v.scale(&psi)?;
    let z_new = theta.vjoin(&psi_row)?;
    let y_new = &psi * &w;
    let (z_new, y_new, complete) = cancel_common(&z_new, &y_new, budget)?;

    let trace = PolyStepTrace {
        d: d.to_poly_matrix(),
        c: c.to_poly_matrix(),
        v: v.to_poly_matrix(),
        w,
        phi: phi.to_poly_matrix(),
        psi,
        delta_over,
        delta_under,
        theta: theta.to_poly_matrix(),
        psi_row: psi_row.to_poly_matrix(),
        branch,
        cancel_complete: complete,
    };
    Ok((z_new, y_new, trace))
}

/// Removes `gcd(Y, Z_11, Z_12, ...)` and the joint integer content from `(Z, Y)`.
/// The boolean is false when the budget forced a partial cancellation.
pub fn cancel_common<S: PolyStructure>(z: &S, y: &Poly, budget: GcdBudget) -> Result<(S, Poly, bool)> {
    if y.is_zero() {
        return Err(WmpError::ZeroDenominator);
    }
    let zm = z.to_poly_matrix();
    let (zm, y, complete) = match cancel_by_combination(&zm, y, budget)? {
        Some(done) => done,
        None => cancel_entrywise(&zm, y, budget)?,
    };
    let (zm, y) = primitive_together(zm, y);
    Ok((S::from_poly_matrix(&zm), y, complete))
}

/// Any common divisor of `Y` and every entry divides `Y` and `sum_j r_j Z_j`, so
/// `g = gcd(Y, sum_j r_j Z_j)` is the full gcd once it divides every entry.
/// `None` when some entry leaves a remainder.
fn cancel_by_combination(zm: &PolyMatrix, y: &Poly, budget: GcdBudget) -> Result<Option<(PolyMatrix, Poly, bool)>> {
    let space = y.space();
    let mut mix = Poly::zero(space);
    let mut r: i64 = 1;
    for e in zm.entries() {
        mix = &mix + &e.scale(&GaussianRational::from_int(r));
        r = (r * 37 + 11) % 101 + 1;
    }
    let out = gcd_with_budget(y, &mix, budget)?;
    let g = out.gcd;
    if g.is_constant() {
        return Ok(Some((zm.clone(), y.clone(), out.complete)));
    }
    let g = g.integer_primitive().1;
    Ok(match (zm.div_exact(&g), y.div_exact(&g)) {
        (Some(zq), Some(yq)) => Some((zq, yq, out.complete)),
        _ => None,
    })
}

fn cancel_entrywise(zm: &PolyMatrix, y: &Poly, budget: GcdBudget) -> Result<(PolyMatrix, Poly, bool)> {
    let mut entries: Vec<&Poly> = zm.entries().iter().filter(|e| !e.is_zero()).collect();
    entries.sort_by_key(|e| e.num_terms());
    let mut g = y.clone();
    let mut complete = true;
    for e in entries {
        if g.is_constant() {
            break;
        }
        let out = gcd_with_budget(&g, e, budget)?;
        complete &= out.complete;
        g = out.gcd;
    }
    if g.is_constant() {
        return Ok((zm.clone(), y.clone(), complete));
    }
    let g = g.integer_primitive().1;
    Ok(match (zm.div_exact(&g), y.div_exact(&g)) {
        (Some(zq), Some(yq)) => (zq, yq, complete),
        _ => (zm.clone(), y.clone(), complete),
    })
}

/// Scales `(Z, Y)` by one rational so that all coefficients are Gaussian integers
/// with no common integer factor and `Y` leads with a positive real part (or a
/// positive imaginary part when the real part is zero).
fn primitive_together(z: PolyMatrix, y: Poly) -> (PolyMatrix, Poly) {
    let coeffs = || {
        z.entries()
            .iter()
            .chain(std::iter::once(&y))
            .flat_map(|p| p.terms().iter().map(|(_, c)| c))
    };
    let mut lcm = BigInt::one();
    for c in coeffs() {
        lcm = lcm.lcm(&c.denom_lcm());
    }
    let mut gcd = BigInt::zero();
    for c in coeffs() {
        for part in [c.re(), c.im()] {
            let v = part.numer() * (&lcm / part.denom());
            gcd = gcd.gcd(&v);
        }
    }
    if gcd.is_zero() {
        return (z, y);
    }
    let lead = y.leading_coeff().expect("nonzero");
    let negative = lead.re().is_negative() || (lead.re().is_zero() && lead.im().is_negative());
    let mut factor = BigRational::new(lcm, gcd);
    if negative {
        factor = -factor;
    }
    if factor.is_one() {
        return (z, y);
    }
    let f = GaussianRational::real(factor);
    (z.scale_const(&f), y.scale(&f))
}

/// `(N̄_i, N̲_i)` from level `i-1`, divided exactly by `N̲_{i-1}` so that the pair
/// stays `(adj N_i, det N_i)`.
pub fn nbar_step<S: PolyStructure>(nbar_prev: &S, nunder_prev: &Poly, l_i: &S, n_ii: &Poly) -> Result<(S, Poly, NInvTrace)> {
    let nu = nunder_prev;
    let nbar_l = nbar_prev.mul(l_i)?;
    let quad = l_i.conj_transpose().mul(&nbar_l)?.to_scalar()?;
    let h = nonzero_or(&(n_ii * nu) - &quad, "Schur numerator n_ii N̲ - l* N̄ l")?;
    let f = nbar_l.neg();
    let fs = f.conj_transpose();
    let e = nbar_prev.scale(&h)?.add(&f.mul(&fs)?)?;
    let corner = S::from_scalar(&(nu * nu));
    let full = e.hjoin(&f.scale(nu)?)?.vjoin(&fs.scale(nu)?.hjoin(&corner)?)?;
    let (n_over, n_under) = match full.div_exact(nu) {
        Some(q) => (q, h.clone()),
        None => (full, nu * &h),
    };
    let trace = NInvTrace {
        h_under: h,
        f_over: f.to_poly_matrix(),
        e_over: e.to_poly_matrix(),
        n_over: n_over.to_poly_matrix(),
        n_under: n_under.clone(),
    };
    Ok((n_over, n_under, trace))
}

/// `N̄_k / N̲_k` for every leading principal submatrix of `N`.
pub fn ninv_polynomial<S: PolyStructure>(n: &S) -> Result<Vec<NInvTrace>> {
    let space = n.space();
    if n.rows() != n.cols() {
        return Err(WmpError::dim("N must be square"));
    }
    if n.rows() == 0 {
        return Ok(Vec::new());
    }
    let n11 = nonzero_or(n.entry(0, 0), "n11")?;
    let one = S::identity(space, 1);
    let mut out = vec![NInvTrace {
        h_under: n11.clone(),
        f_over: PolyMatrix::zeros(space, 0, 1),
        e_over: PolyMatrix::zeros(space, 0, 0),
        n_over: one.to_poly_matrix(),
        n_under: n11.clone(),
    }];
    let mut nbar = one;
    let mut nunder = n11;
    for i in 1..n.rows() {
        let l = n.block(0..i, i..i + 1)?;
        let (nb, nu, trace) = nbar_step(&nbar, &nunder, &l, &n.entry(i, i))?;
        nbar = nb;
        nunder = nu;
        out.push(trace);
    }
    Ok(out)
}

fn check_inputs(a: &PolyMatrix, m: &PolyMatrix, n: &PolyMatrix) -> Result<()> {
    let (rows, cols) = (a.rows(), a.cols());
    if (m.rows(), m.cols()) != (rows, rows) || (n.rows(), n.cols()) != (cols, cols) {
        return Err(WmpError::dim(format!(
            "A is {rows}x{cols} but M is {}x{} and N is {}x{}",
            m.rows(),
            m.cols(),
            n.rows(),
            n.cols()
        )));
    }
    a.space().ensure_same(&m.space())?;
    a.space().ensure_same(&n.space())?;
    for (name, w) in [("M", m), ("N", n)] {
        if let Some((row, col)) = w.hermitian_violation() {
            return Err(WmpError::NotHermitian {
                name: name.into(),
                row,
                col,
            });
        }
    }
    Ok(())
}

/// Runs the fraction-free recursion in structure `S`, keeping every `(Z_i, Y_i)`.
pub fn wmp_polynomial_run<S: PolyStructure>(
    a: &PolyMatrix,
    m: &PolyMatrix,
    n: &PolyMatrix,
    budget: GcdBudget,
) -> Result<PolyRun> {
    check_inputs(a, m, n)?;
    let space = a.space();
    let (rows, cols) = (a.rows(), a.cols());
    if cols == 0 {
        return Ok(PolyRun {
            zy: vec![(PolyMatrix::zeros(space, 0, rows), Poly::one(space))],
            traces: Vec::new(),
            ninv: Vec::new(),
        });
    }
    let (sa, sm, sn) = (S::from_poly_matrix(a), S::from_poly_matrix(m), S::from_poly_matrix(n));
    let ninv = ninv_polynomial(&sn)?;
    let (z1, y1) = zy_init(&sa.column(0)?, &sm)?;
    let (z1, y1, _) = cancel_common(&z1, &y1, budget)?;
    let mut zy = vec![(z1.to_poly_matrix(), y1.clone())];
    let (mut z, mut y) = (z1, y1);
    let mut traces = Vec::new();
    for i in 1..cols {
        let nbar_prev = S::from_poly_matrix(&ninv[i - 1].n_over);
        let (z_new, y_new, trace) = zy_step(
            &PolyStepInputs {
                z_prev: &z,
                y_prev: &y,
                a_prev: &sa.leading_columns(i)?,
                a_i: &sa.column(i)?,
                m: &sm,
                n_prev: &sn.block(0..i, 0..i)?,
                l_i: &sn.block(0..i, i..i + 1)?,
                n_ii: &sn.entry(i, i),
                nbar_prev: &nbar_prev,
                nunder_prev: &ninv[i - 1].n_under,
            },
            budget,
        )?;
        zy.push((z_new.to_poly_matrix(), y_new.clone()));
        traces.push(trace);
        z = z_new;
        y = y_new;
    }
    Ok(PolyRun { zy, traces, ninv })
}

pub fn wmp_polynomial<S: PolyStructure>(
    a: &PolyMatrix,
    m: &PolyMatrix,
    n: &PolyMatrix,
    budget: GcdBudget,
) -> Result<PinvResult> {
    let run = wmp_polynomial_run::<S>(a, m, n, budget)?;
    let (z, y) = run.zy.into_iter().last().expect("nonempty");
    normalized_result(z, y)
}

/// Scales `(Z, Y)` so that `Y` is monic and attaches the entry-wise quotient.
pub fn normalized_result(z: PolyMatrix, y: Poly) -> Result<PinvResult> {
    let lc = y.leading_coeff().ok_or(WmpError::ZeroDenominator)?.clone();
    let inv = lc.recip().expect("nonzero");
    let (z, y) = (z.scale_const(&inv), y.scale(&inv));
    let x = RatMatrix::from_quotient(&z, &y)?;
    Ok(PinvResult { z, y, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{DensePolyMatrix, EffMatrix, EffPrimeMatrix};
    use crate::ring::VarSpace;

    fn vs() -> VarSpace {
        VarSpace::real(1)
    }

    fn consts(rows: usize, cols: usize, vals: &[i64]) -> PolyMatrix {
        PolyMatrix::from_fn(vs(), rows, cols, |i, j| Poly::from_int(vs(), vals[i * cols + j]))
    }

    #[test]
    fn identity_case() {
        let i2 = PolyMatrix::identity(vs(), 2);
        let r = wmp_polynomial::<PolyMatrix>(&i2, &i2, &i2, GcdBudget::UNLIMITED).unwrap();
        assert_eq!(r.z, i2);
        assert!(r.y.is_one());
    }

    #[test]
    fn init_branches() {
        let m = PolyMatrix::identity(vs(), 2);
        let (z, y) = zy_init(&PolyMatrix::zeros(vs(), 2, 1), &m).unwrap();
        assert!(z.is_zero() && y.is_one());
        let (z, y) = zy_init(&consts(2, 1, &[1, 0]), &m).unwrap();
        assert_eq!(z, consts(1, 2, &[1, 0]));
        assert!(y.is_one());
    }

    #[test]
    fn nbar_diagonal() {
        let n = consts(2, 2, &[2, 0, 0, 3]);
        let t = ninv_polynomial(&n).unwrap();
        assert_eq!(t[1].n_over, consts(2, 2, &[3, 0, 0, 2]));
        assert_eq!(t[1].n_under, Poly::from_int(vs(), 6));
        let i3 = PolyMatrix::identity(vs(), 3);
        for tr in ninv_polynomial(&EffMatrix::from_poly_matrix(&i3)).unwrap() {
            assert!(tr.n_under.is_one());
        }
    }

    #[test]
    fn cancel_removes_shared_factor() {
        let x = Poly::var(vs(), 0);
        let z0 = PolyMatrix::from_fn(vs(), 1, 2, |_, j| &x + &Poly::from_int(vs(), j as i64 + 1));
        let z = z0.scale(&x).unwrap();
        let (zc, yc, complete) = cancel_common(&z, &(&x * &(&x + &x)), GcdBudget::UNLIMITED).unwrap();
        assert!(complete);
        assert_eq!(zc, z0);
        assert_eq!(yc, x.scale(&GaussianRational::from_int(2)));
        let (zu, yu, _) = cancel_common(&z0, &Poly::one(vs()), GcdBudget::UNLIMITED).unwrap();
        assert_eq!((zu, yu), (z0, Poly::one(vs())));
    }

    #[test]
    fn duplicate_column_all_structures() {
        let a = consts(2, 2, &[1, 1, 2, 2]);
        let i2 = PolyMatrix::identity(vs(), 2);
        let b = GcdBudget::UNLIMITED;
        let r = wmp_polynomial::<PolyMatrix>(&a, &i2, &i2, b).unwrap();
        assert!(r.y.is_one());
        assert_eq!(r.z, consts(2, 2, &[1, 2, 1, 2]).scale_const(&GaussianRational::from_frac(1, 10)));
        assert_eq!(wmp_polynomial::<EffMatrix>(&a, &i2, &i2, b).unwrap().z, r.z);
        assert_eq!(wmp_polynomial::<EffPrimeMatrix>(&a, &i2, &i2, b).unwrap().z, r.z);
        assert_eq!(wmp_polynomial::<DensePolyMatrix>(&a, &i2, &i2, b).unwrap().z, r.z);
    }
}

#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::*;
    use crate::matrix::EffMatrix;
    use crate::strategies::{matrix, nonzero_poly, pd_matrix, space};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn cancel_common_preserves_the_quotient(
            (z, y, f) in space().prop_flat_map(|s| (matrix(s, 2, 2), nonzero_poly(s), nonzero_poly(s)))
        ) {
            let (zf, yf) = (z.scale(&f).unwrap(), &y * &f);
            let (z2, y2, complete) = cancel_common(&zf, &yf, GcdBudget::UNLIMITED).unwrap();
            prop_assert!(complete);
            prop_assert_eq!(z2.scale(&yf).unwrap(), zf.scale(&y2).unwrap());
            prop_assert!(y2.total_degree() <= y.total_degree());
        }

        #[test]
        fn ninv_levels_give_adjugate_and_determinant(
            n in space().prop_flat_map(|s| (1usize..=3).prop_flat_map(move |k| pd_matrix(s, k)))
        ) {
            let levels = ninv_polynomial::<EffMatrix>(&EffMatrix::from_poly_matrix(&n)).unwrap();
            prop_assert_eq!(levels.len(), n.rows());
            for (k, level) in levels.iter().enumerate() {
                let nk = n.block(0..k + 1, 0..k + 1).unwrap();
                let lhs = nk.mul(&level.n_over).unwrap();
                let rhs = PolyMatrix::identity(n.space(), k + 1).scale(&level.n_under).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
