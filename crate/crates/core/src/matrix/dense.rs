//! Dense polynomial matrices: one constant coefficient matrix for every slot of
//! the degree box `[0, Q_1] x ... x [0, Q_k]`, zero slots included.

use std::ops::Range;

use super::constant::{CoeffMatrix, ConstMatrix};
use super::ef::PolyMatrix;
use crate::error::{Result, WmpError};
use crate::ring::{GaussianRational, Mode, MultiIndex, Poly, VarSpace};

#[derive(Clone, PartialEq, Debug)]
pub struct DensePolyMatrix {
    space: VarSpace,
    rows: usize,
    cols: usize,
    /// Per-variable degree bound `Q_j`.
    bounds: Vec<u32>,
    blocks: Vec<ConstMatrix>,
    /// `nonzero[k]` caches `!blocks[k].is_zero()`.
    nonzero: Vec<bool>,
}

fn box_len(bounds: &[u32]) -> usize {
    bounds.iter().map(|&b| b as usize + 1).product()
}

fn position(bounds: &[u32], e: &[u32]) -> Option<usize> {
    let mut pos = 0;
    for (&b, &x) in bounds.iter().zip(e) {
        if x > b {
            return None;
        }
        pos = pos * (b as usize + 1) + x as usize;
    }
    Some(pos)
}

fn exponents(bounds: &[u32], mut pos: usize) -> Vec<u32> {
    let mut e = vec![0; bounds.len()];
    for t in (0..bounds.len()).rev() {
        let r = bounds[t] as usize + 1;
        e[t] = (pos % r) as u32;
        pos /= r;
    }
    e
}

impl DensePolyMatrix {
    fn empty_box(space: VarSpace, rows: usize, cols: usize, bounds: Vec<u32>) -> Self {
        let len = box_len(&bounds);
        Self {
            space,
            rows,
            cols,
            bounds,
            blocks: vec![ConstMatrix::zeros(rows, cols); len],
            nonzero: vec![false; len],
        }
    }

    pub fn zeros(space: VarSpace, rows: usize, cols: usize) -> Self {
        Self::empty_box(space, rows, cols, vec![0; space.total_vars()])
    }

    pub fn identity(space: VarSpace, n: usize) -> Self {
        let mut out = Self::zeros(space, n, n);
        out.blocks[0] = ConstMatrix::identity(n);
        out.nonzero[0] = n > 0;
        out
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

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    /// Number of stored coefficient slots, zero slots included.
    pub fn box_size(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_zero(&self) -> bool {
        !self.nonzero.iter().any(|&b| b)
    }

    fn set_block(&mut self, pos: usize, block: ConstMatrix) {
        self.nonzero[pos] = !block.is_zero();
        self.blocks[pos] = block;
    }

    fn block_at(&self, e: &[u32]) -> Option<&ConstMatrix> {
        position(&self.bounds, e).filter(|&p| self.nonzero[p]).map(|p| &self.blocks[p])
    }

    /// Shrinks the box to the actual per-variable degrees.
    fn trimmed(self) -> Self {
        let mut tight = vec![0u32; self.bounds.len()];
        for (pos, &nz) in self.nonzero.iter().enumerate() {
            if nz {
                for (t, x) in exponents(&self.bounds, pos).into_iter().enumerate() {
                    tight[t] = tight[t].max(x);
                }
            }
        }
        if tight == self.bounds {
            return self;
        }
        let mut out = Self::empty_box(self.space, self.rows, self.cols, tight);
        for (pos, block) in self.blocks.into_iter().enumerate() {
            if self.nonzero[pos] {
                let e = exponents(&self.bounds, pos);
                let p = position(&out.bounds, &e).expect("inside tight box");
                out.set_block(p, block);
            }
        }
        out
    }

    pub fn from_poly_matrix(a: &PolyMatrix) -> Self {
        let mut out = Self::empty_box(a.space(), a.rows(), a.cols(), a.degree_vector());
        let mut buckets: Vec<Vec<(usize, usize, GaussianRational)>> = vec![Vec::new(); out.blocks.len()];
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for (e, c) in a.get(i, j).terms() {
                    let p = position(&out.bounds, e.exponents()).expect("inside degree box");
                    buckets[p].push((i, j, c.clone()));
                }
            }
        }
        for (p, b) in buckets.into_iter().enumerate() {
            if !b.is_empty() {
                out.set_block(p, ConstMatrix::from_entries(a.rows(), a.cols(), b));
            }
        }
        out
    }

    pub fn to_poly_matrix(&self) -> PolyMatrix {
        let mut terms: Vec<Vec<(MultiIndex, GaussianRational)>> = vec![Vec::new(); self.rows * self.cols];
        for (pos, block) in self.blocks.iter().enumerate() {
            if !self.nonzero[pos] {
                continue;
            }
            let e = MultiIndex::from_slice(&exponents(&self.bounds, pos));
            for (i, j, v) in block.entries() {
                terms[i * self.cols + j].push((e.clone(), v));
            }
        }
        let entries = terms
            .into_iter()
            .map(|t| Poly::from_terms(self.space, t).expect("valid terms"))
            .collect();
        PolyMatrix::new(self.space, self.rows, self.cols, entries).expect("consistent shape")
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

    /// Builds a matrix over `bounds` by visiting every slot of the box.
    fn over_box(
        &self,
        rows: usize,
        cols: usize,
        bounds: Vec<u32>,
        f: impl Fn(&[u32]) -> Option<ConstMatrix>,
    ) -> Self {
        let mut out = Self::empty_box(self.space, rows, cols, bounds);
        for pos in 0..out.blocks.len() {
            let e = exponents(&out.bounds, pos);
            if let Some(b) = f(&e) {
                out.set_block(pos, b);
            }
        }
        out.trimmed()
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let bounds: Vec<u32> = self.bounds.iter().zip(&other.bounds).map(|(a, b)| *a.max(b)).collect();
        self.over_box(self.rows, self.cols, bounds, |e| {
            match (self.block_at(e), other.block_at(e)) {
                (Some(a), Some(b)) => Some(if negate { a.sub(b) } else { a.add(b) }),
                (Some(a), None) => Some(a.clone()),
                (None, Some(b)) => Some(if negate { b.scale(&-GaussianRational::one()) } else { b.clone() }),
                (None, None) => None,
            }
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "sum")?;
        Ok(self.merge(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_shape(other, "difference")?;
        Ok(self.merge(other, true))
    }

    pub fn neg(&self) -> Self {
        let minus = -GaussianRational::one();
        let mut out = self.clone();
        for b in &mut out.blocks {
            *b = b.scale(&minus);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        if self.cols != other.rows {
            return Err(WmpError::dim(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let bounds: Vec<u32> = self.bounds.iter().zip(&other.bounds).map(|(a, b)| a + b).collect();
        let mut out = Self::empty_box(self.space, self.rows, other.cols, bounds);
        for pa in 0..self.blocks.len() {
            if !self.nonzero[pa] {
                continue;
            }
            let ea = exponents(&self.bounds, pa);
            for pb in 0..other.blocks.len() {
                if !other.nonzero[pb] {
                    continue;
                }
                let eb = exponents(&other.bounds, pb);
                let e: Vec<u32> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                let p = position(&out.bounds, &e).expect("inside product box");
                out.blocks[p].add_mul_assign(&self.blocks[pa], &other.blocks[pb]);
            }
        }
        for p in 0..out.blocks.len() {
            out.nonzero[p] = !out.blocks[p].is_zero();
        }
        Ok(out.trimmed())
    }

    pub fn scale(&self, s: &Poly) -> Result<Self> {
        self.space.ensure_same(&s.space())?;
        let sd = s.degree_vector();
        let bounds: Vec<u32> = self.bounds.iter().zip(sd.exponents()).map(|(a, b)| a + b).collect();
        let mut out = Self::empty_box(self.space, self.rows, self.cols, bounds);
        for (j, c) in s.terms() {
            for pa in 0..self.blocks.len() {
                if !self.nonzero[pa] {
                    continue;
                }
                let e: Vec<u32> = exponents(&self.bounds, pa)
                    .iter()
                    .zip(j.exponents())
                    .map(|(x, y)| x + y)
                    .collect();
                let p = position(&out.bounds, &e).expect("inside scaled box");
                out.blocks[p] = out.blocks[p].add(&self.blocks[pa].scale(c));
            }
        }
        for p in 0..out.blocks.len() {
            out.nonzero[p] = !out.blocks[p].is_zero();
        }
        Ok(out.trimmed())
    }

    pub fn conj_transpose(&self) -> Self {
        let complex = self.space.mode() == Mode::Complex;
        let bounds: Vec<u32> = if complex {
            self.bounds.iter().rev().copied().collect()
        } else {
            self.bounds.clone()
        };
        let mut out = Self::empty_box(self.space, self.cols, self.rows, bounds);
        for (pos, block) in self.blocks.iter().enumerate() {
            if !self.nonzero[pos] {
                continue;
            }
            let mut e = exponents(&self.bounds, pos);
            if complex {
                e.reverse();
            }
            let p = position(&out.bounds, &e).expect("inside reversed box");
            out.set_block(p, block.conj_transpose());
        }
        out
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly {
        let terms = (0..self.blocks.len())
            .filter(|&p| self.nonzero[p])
            .map(|p| (MultiIndex::from_slice(&exponents(&self.bounds, p)), self.blocks[p].get(i, j)))
            .collect::<Vec<_>>();
        Poly::from_terms(self.space, terms).expect("valid terms")
    }

    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Self> {
        if rows.end > self.rows || cols.end > self.cols {
            return Err(WmpError::dim(format!(
                "block {rows:?}x{cols:?} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let (r, c) = (rows.len(), cols.len());
        Ok(self.over_box(r, c, self.bounds.clone(), |e| {
            self.block_at(e).map(|b| b.block(rows.clone(), cols.clone()))
        }))
    }

    fn join(
        &self,
        other: &Self,
        rows: usize,
        cols: usize,
        f: impl Fn(&ConstMatrix, &ConstMatrix) -> ConstMatrix,
    ) -> Self {
        let bounds: Vec<u32> = self.bounds.iter().zip(&other.bounds).map(|(a, b)| *a.max(b)).collect();
        let za = ConstMatrix::zeros(self.rows, self.cols);
        let zb = ConstMatrix::zeros(other.rows, other.cols);
        self.over_box(rows, cols, bounds, |e| {
            let a = self.block_at(e);
            let b = other.block_at(e);
            if a.is_none() && b.is_none() {
                None
            } else {
                Some(f(a.unwrap_or(&za), b.unwrap_or(&zb)))
            }
        })
    }

    pub fn vjoin(&self, bottom: &Self) -> Result<Self> {
        self.space.ensure_same(&bottom.space)?;
        if self.cols != bottom.cols {
            return Err(WmpError::dim(format!(
                "vertical join of {} and {} columns",
                self.cols, bottom.cols
            )));
        }
        Ok(self.join(bottom, self.rows + bottom.rows, self.cols, |a, b| a.vjoin(b)))
    }

    pub fn hjoin(&self, right: &Self) -> Result<Self> {
        self.space.ensure_same(&right.space)?;
        if self.rows != right.rows {
            return Err(WmpError::dim(format!(
                "horizontal join of {} and {} rows",
                self.rows, right.rows
            )));
        }
        Ok(self.join(right, self.rows, self.cols + right.cols, |a, b| a.hjoin(b)))
    }
}
