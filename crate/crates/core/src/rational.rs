//! Column partitioning over the field of rational functions.

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;

use crate::error::{Result, WmpError};
use crate::matrix::{CoeffMatrix, ConstMatrix, PolyMatrix};
use crate::ring::{GaussianRational, Poly, RationalFn, VarSpace};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMatrix {
    space: VarSpace,
    rows: usize,
    cols: usize,
    entries: Vec<RationalFn>,
}

impl RatMatrix {
    pub fn new(space: VarSpace, rows: usize, cols: usize, entries: Vec<RationalFn>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(WmpError::dim(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            space.ensure_same(&e.space())?;
        }
        Ok(Self {
            space,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_fn(
        space: VarSpace,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RationalFn,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            space,
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(space: VarSpace, rows: usize, cols: usize) -> Self {
        Self::from_fn(space, rows, cols, |_, _| RationalFn::zero(space))
    }

    pub fn identity(space: VarSpace, n: usize) -> Self {
        Self::from_fn(space, n, n, |i, j| {
            if i == j {
                RationalFn::one(space)
            } else {
                RationalFn::zero(space)
            }
        })
    }

    pub fn from_poly_matrix(a: &PolyMatrix) -> Self {
        Self::from_fn(a.space(), a.rows(), a.cols(), |i, j| RationalFn::from_poly(a.get(i, j).clone()))
    }

    /// `Z / y` entry-wise, each entry canonicalized.
    pub fn from_quotient(z: &PolyMatrix, y: &Poly) -> Result<Self> {
        let entries: Result<Vec<_>> = z
            .entries()
            .par_iter()
            .map(|e| RationalFn::new(e.clone(), y.clone()))
            .collect();
        Self::new(z.space(), z.rows(), z.cols(), entries?)
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFn {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[RationalFn] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(RationalFn::is_zero)
    }

    fn check_shape(&self, other: &Self, op: &str) -> Result<()> {
        self.space.ensure_same(&other.space)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(WmpError::dim(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&RationalFn, &RationalFn) -> RationalFn + Sync) -> Self {
        Self {
            space: self.space,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .par_iter()
                .zip(other.entries.par_iter())
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "sum")?;
        Ok(self.zip_with(other, RationalFn::add))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "difference")?;
        Ok(self.zip_with(other, RationalFn::sub))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        if self.cols != other.rows {
            return Err(WmpError::dim(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let n = other.cols;
        let entries = (0..self.rows * n)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let products: Vec<RationalFn> = (0..self.cols)
                    .map(|k| self.get(i, k).mul(other.get(k, j)))
                    .collect();
                RationalFn::sum(self.space, &products)
            })
            .collect();
        Ok(Self {
            space: self.space,
            rows: self.rows,
            cols: n,
            entries,
        })
    }

    pub fn scale(&self, s: &RationalFn) -> Self {
        Self {
            space: self.space,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.par_iter().map(|a| a.mul(s)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            space: self.space,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(RationalFn::neg).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.space, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Self> {
        if rows.end > self.rows || cols.end > self.cols {
            return Err(WmpError::dim(format!(
                "block {rows:?}x{cols:?} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(self.space, rows.len(), cols.len(), |i, j| {
            self.get(rows.start + i, cols.start + j).clone()
        }))
    }

    pub fn vjoin(&self, bottom: &Self) -> Result<Self> {
        self.space.ensure_same(&bottom.space)?;
        if self.cols != bottom.cols {
            return Err(WmpError::dim("vertical join with different column counts"));
        }
        let mut entries = self.entries.clone();
        entries.extend(bottom.entries.iter().cloned());
        Ok(Self {
            space: self.space,
            rows: self.rows + bottom.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn hjoin(&self, right: &Self) -> Result<Self> {
        self.space.ensure_same(&right.space)?;
        if self.rows != right.rows {
            return Err(WmpError::dim("horizontal join with different row counts"));
        }
        Ok(Self::from_fn(self.space, self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                right.get(i, j - self.cols).clone()
            }
        }))
    }

    /// The single entry of a 1x1 matrix.
    pub fn to_scalar(&self) -> Result<RationalFn> {
        if (self.rows, self.cols) != (1, 1) {
            return Err(WmpError::dim(format!("expected 1x1, got {}x{}", self.rows, self.cols)));
        }
        Ok(self.entries[0].clone())
    }

    pub fn eval(&self, point: &[GaussianRational]) -> Result<ConstMatrix> {
        let mut vals = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            vals.push((k / self.cols, k % self.cols, e.eval(point)?));
        }
        Ok(ConstMatrix::from_entries(self.rows, self.cols, vals))
    }

    /// Writes the matrix as `Z / y` with one common denominator `y` (the lcm of
    /// all entry denominators).
    pub fn to_common_denominator(&self) -> Result<(PolyMatrix, Poly)> {
        let mut den = Poly::one(self.space);
        for e in &self.entries {
            if e.den() != &den && !e.den().is_one() {
                let g = den.gcd(e.den())?;
                den = &den * &e.den().div_exact(&g).expect("gcd divides");
            }
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.num() * &den.div_exact(e.den()).expect("lcm is a multiple"))
            .collect();
        Ok((PolyMatrix::new(self.space, self.rows, self.cols, entries)?, den))
    }

    /// First `(row, col)` where `M* != M`, if any.
    pub fn hermitian_violation(&self) -> Option<(usize, usize)> {
        if self.rows != self.cols {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if self.get(i, j) != &self.get(j, i).conj() {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    NonzeroC,
    ZeroC,
}

/// Intermediate quantities of one partitioning step.
#[derive(Clone, Debug)]
pub struct StepTrace {
    pub d: RatMatrix,
    pub c: RatMatrix,
    pub b_star: RatMatrix,
    /// Only present on the zero-`c` branch.
    pub delta: Option<RationalFn>,
    pub branch: Branch,
}

/// Every intermediate inverse `X_1, ..., X_n` plus the step traces for `i >= 2`.
#[derive(Clone, Debug)]
pub struct RationalRun {
    pub xs: Vec<RatMatrix>,
    pub traces: Vec<StepTrace>,
}

impl RationalRun {
    pub fn result(&self) -> &RatMatrix {
        self.xs.last().expect("at least one column")
    }
}

pub(crate) fn check_hermitian(name: &str, m: &RatMatrix) -> Result<()> {
    match m.hermitian_violation() {
        None => Ok(()),
        Some((row, col)) => Err(WmpError::NotHermitian {
            name: name.to_string(),
            row,
            col,
        }),
    }
}

fn nonzero_or(r: RationalFn, what: &str) -> Result<RationalFn> {
    if r.is_zero() {
        Err(WmpError::WeightNotPositiveDefinite(what.to_string()))
    } else {
        Ok(r)
    }
}

/// `X_1 = (a1* M a1)^{-1} a1* M`, or `a1*` when `a1 = 0`.
pub fn x1_init(a1: &RatMatrix, m: &RatMatrix) -> Result<RatMatrix> {
    let a1s = a1.conj_transpose();
    if a1.is_zero() {
        return Ok(a1s);
    }
    let a1s_m = a1s.mul(m)?;
    let s = nonzero_or(a1s_m.mul(a1)?.to_scalar()?, "a1* M a1")?;
    Ok(a1s_m.scale(&s.inv()?))
}

/// Inputs of one partitioning step at column `i`.
pub struct StepInputs<'a> {
    pub x_prev: &'a RatMatrix,
    pub a_prev: &'a RatMatrix,
    pub a_i: &'a RatMatrix,
    pub m: &'a RatMatrix,
    pub n_prev: &'a RatMatrix,
    pub l_i: &'a RatMatrix,
    pub n_ii: &'a RationalFn,
    pub ninv_prev: &'a RatMatrix,
}

pub fn partition_step(inp: &StepInputs<'_>) -> Result<(RatMatrix, StepTrace)> {
    let space = inp.x_prev.space();
    let d = inp.x_prev.mul(inp.a_i)?;
    let c = inp.a_i.sub(&inp.a_prev.mul(&d)?)?;
    let k = inp.x_prev.rows();
    let xa = inp.x_prev.mul(inp.a_prev)?;
    let t = RatMatrix::identity(space, k).sub(&xa)?.mul(&inp.ninv_prev.mul(inp.l_i)?)?;
    let (b_star, delta, branch) = if !c.is_zero() {
        let cs_m = c.conj_transpose().mul(inp.m)?;
        let w = nonzero_or(cs_m.mul(&c)?.to_scalar()?, "c* M c")?;
        (cs_m.scale(&w.inv()?), None, Branch::NonzeroC)
    } else {
        let ds = d.conj_transpose();
        let ls = inp.l_i.conj_transpose();
        let dl = ds.mul(inp.l_i)?.add(&ls.mul(&d)?)?;
        let delta = inp
            .n_ii
            .add(&ds.mul(inp.n_prev)?.mul(&d)?.to_scalar()?)
            .sub(&dl.to_scalar()?)
            .sub(&ls.mul(&t)?.to_scalar()?);
        let delta = nonzero_or(delta, "delta")?;
        let b = ds.mul(inp.n_prev)?.sub(&ls)?.mul(inp.x_prev)?.scale(&delta.inv()?);
        (b, Some(delta), Branch::ZeroC)
    };
    let top = inp.x_prev.sub(&d.add(&t)?.mul(&b_star)?)?;
    let x = top.vjoin(&b_star)?;
    Ok((
        x,
        StepTrace {
            d,
            c,
            b_star,
            delta,
            branch,
        },
    ))
}

/// Algorithm over rational functions; returns every `X_i`.
pub fn wmp_rational_run(a: &RatMatrix, m: &RatMatrix, n: &RatMatrix) -> Result<RationalRun> {
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
    check_hermitian("M", m)?;
    check_hermitian("N", n)?;
    if cols == 0 {
        return Ok(RationalRun {
            xs: vec![RatMatrix::zeros(a.space(), 0, rows)],
            traces: Vec::new(),
        });
    }
    let ninv = ninv_rational(n)?;
    let mut xs = vec![x1_init(&a.block(0..rows, 0..1)?, m)?];
    let mut traces = Vec::new();
    for i in 1..cols {
        let a_prev = a.block(0..rows, 0..i)?;
        let a_i = a.block(0..rows, i..i + 1)?;
        let n_prev = n.block(0..i, 0..i)?;
        let l_i = n.block(0..i, i..i + 1)?;
        let (x, trace) = partition_step(&StepInputs {
            x_prev: xs.last().expect("nonempty"),
            a_prev: &a_prev,
            a_i: &a_i,
            m,
            n_prev: &n_prev,
            l_i: &l_i,
            n_ii: n.get(i, i),
            ninv_prev: &ninv[i - 1],
        })?;
        xs.push(x);
        traces.push(trace);
    }
    Ok(RationalRun { xs, traces })
}

pub fn wmp_rational(a: &RatMatrix, m: &RatMatrix, n: &RatMatrix) -> Result<RatMatrix> {
    let mut run = wmp_rational_run(a, m, n)?;
    Ok(run.xs.pop().expect("nonempty"))
}

/// `N_i^{-1}` from `N_{i-1}^{-1}` by the block inverse with Schur complement
/// `n_ii - l* N_{i-1}^{-1} l`.
pub fn ninv_step(ninv_prev: &RatMatrix, l_i: &RatMatrix, n_ii: &RationalFn) -> Result<RatMatrix> {
    let t = ninv_prev.mul(l_i)?;
    let schur = n_ii.sub(&l_i.conj_transpose().mul(&t)?.to_scalar()?);
    let schur = nonzero_or(schur, "Schur complement n_ii - l* N^-1 l")?;
    let h = schur.inv()?;
    let f = t.scale(&h.neg());
    let e = ninv_prev.add(&f.mul(&f.conj_transpose())?.scale(&schur))?;
    let h_block = RatMatrix::from_fn(ninv_prev.space(), 1, 1, |_, _| h.clone());
    e.hjoin(&f)?.vjoin(&f.conj_transpose().hjoin(&h_block)?)
}

/// `N_1^{-1}, ..., N_n^{-1}` for the leading principal submatrices of `N`.
pub fn ninv_rational(n: &RatMatrix) -> Result<Vec<RatMatrix>> {
    if n.rows() != n.cols() {
        return Err(WmpError::dim("N must be square"));
    }
    if n.rows() == 0 {
        return Ok(Vec::new());
    }
    let n11 = nonzero_or(n.get(0, 0).clone(), "n11")?;
    let mut out = vec![RatMatrix::from_fn(n.space(), 1, 1, |_, _| n11.inv().expect("nonzero"))];
    for i in 1..n.rows() {
        let next = ninv_step(out.last().expect("nonempty"), &n.block(0..i, i..i + 1)?, n.get(i, i))?;
        out.push(next);
    }
    Ok(out)
}
