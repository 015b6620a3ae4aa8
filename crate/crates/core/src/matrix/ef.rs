//! `Ef`: a matrix whose entries are sparse scalar polynomials.

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;

use super::constant::{CoeffMatrix, ConstMatrix};
use crate::error::{Result, WmpError};
use crate::ring::{GaussianRational, Poly, VarSpace};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    space: VarSpace,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

/// Entry count above which products are computed in parallel.
const PAR_THRESHOLD: usize = 16;

impl PolyMatrix {
    pub fn new(space: VarSpace, rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self> {
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
        mut f: impl FnMut(usize, usize) -> Poly,
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
        Self::from_fn(space, rows, cols, |_, _| Poly::zero(space))
    }

    pub fn identity(space: VarSpace, n: usize) -> Self {
        Self::from_fn(space, n, n, |i, j| {
            if i == j {
                Poly::one(space)
            } else {
                Poly::zero(space)
            }
        })
    }

    pub fn from_scalar(p: &Poly) -> Self {
        Self {
            space: p.space(),
            rows: 1,
            cols: 1,
            entries: vec![p.clone()],
        }
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

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Poly> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly + Sync + Send) -> Self {
        Self {
            space: self.space,
            rows: self.rows,
            cols: self.cols,
            entries: if self.entries.len() >= PAR_THRESHOLD {
                self.entries.par_iter().map(f).collect()
            } else {
                self.entries.iter().map(f).collect()
            },
        }
    }

    /// `ef_A`: total number of nonzero coefficients over all entries.
    pub fn ef(&self) -> usize {
        self.entries.iter().map(Poly::num_terms).sum()
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

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "sum")?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "difference")?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&Poly, &Poly) -> Poly) -> Self {
        Self {
            space: self.space,
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        if self.cols != other.rows {
            return Err(WmpError::dim(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let cell = |idx: usize| {
            let (i, j) = (idx / n, idx % n);
            let mut acc = Poly::zero(self.space);
            for t in 0..k {
                let a = self.get(i, t);
                let b = other.get(t, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        };
        let entries = if m * n * k >= PAR_THRESHOLD {
            (0..m * n).into_par_iter().map(cell).collect()
        } else {
            (0..m * n).map(cell).collect()
        };
        Ok(Self {
            space: self.space,
            rows: m,
            cols: n,
            entries,
        })
    }

    pub fn scale(&self, s: &Poly) -> Result<Self> {
        self.space.ensure_same(&s.space())?;
        if s.is_one() {
            return Ok(self.clone());
        }
        Ok(self.map(|a| a * s))
    }

    pub fn scale_const(&self, c: &GaussianRational) -> Self {
        self.map(|a| a.scale(c))
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.space, self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.space, self.cols, self.rows, |i, j| self.get(j, i).clone())
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
            return Err(WmpError::dim(format!(
                "vertical join of {} and {} columns",
                self.cols, bottom.cols
            )));
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
            return Err(WmpError::dim(format!(
                "horizontal join of {} and {} rows",
                self.rows, right.rows
            )));
        }
        Ok(Self::from_fn(self.space, self.rows, self.cols + right.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                right.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Exact division of every entry, `None` if some entry is not divisible.
    pub fn div_exact(&self, d: &Poly) -> Option<Self> {
        if d.is_one() {
            return Some(self.clone());
        }
        let entries: Option<Vec<Poly>> = self.entries.iter().map(|e| e.div_exact(d)).collect();
        Some(Self {
            space: self.space,
            rows: self.rows,
            cols: self.cols,
            entries: entries?,
        })
    }

    /// Evaluates every entry at `point` (a full point over all `total_vars` variables).
    pub fn eval(&self, point: &[GaussianRational]) -> Result<ConstMatrix> {
        let mut vals = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            vals.push((k / self.cols, k % self.cols, e.eval(point)?));
        }
        Ok(ConstMatrix::from_entries(self.rows, self.cols, vals))
    }

    /// Componentwise maximum exponent over all entries.
    pub fn degree_vector(&self) -> Vec<u32> {
        let mut out = vec![0; self.space.total_vars()];
        for e in &self.entries {
            for (t, d) in out.iter_mut().enumerate() {
                *d = (*d).max(e.degree_in(t));
            }
        }
        out
    }

    /// First `(row, col)` where `M* != M`, if any.
    pub fn hermitian_violation(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
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

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).pretty()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
