//! Effective sparse structures: a polynomial matrix stored as the nonzero
//! coefficient matrices `A_J` keyed by multi-index.

use std::collections::BTreeMap;
use std::ops::Range;

use super::constant::{CoeffMatrix, ConstMatrix, SpTriples};
use super::ef::PolyMatrix;
use crate::error::{Result, WmpError};
use crate::ring::{GaussianRational, Mode, MultiIndex, Poly, VarSpace};

/// `Eff_A = {(J, A_J) : A_J != 0}`, generic over the coefficient storage.
#[derive(Clone, PartialEq, Debug)]
pub struct EffStruct<C> {
    space: VarSpace,
    rows: usize,
    cols: usize,
    coeffs: BTreeMap<MultiIndex, C>,
}

/// Eff with dense coefficient matrices.
pub type EffMatrix = EffStruct<ConstMatrix>;
/// Eff′: coefficient matrices as sorted triples.
pub type EffPrimeMatrix = EffStruct<SpTriples>;

impl<C: CoeffMatrix> EffStruct<C> {
    pub fn zeros(space: VarSpace, rows: usize, cols: usize) -> Self {
        Self {
            space,
            rows,
            cols,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn identity(space: VarSpace, n: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        if n > 0 {
            coeffs.insert(MultiIndex::zero(space.total_vars()), C::identity(n));
        }
        Self {
            space,
            rows: n,
            cols: n,
            coeffs,
        }
    }

    /// Builds from `(J, A_J)` pairs, summing repeated indices and pruning zeros.
    pub fn from_coeffs(
        space: VarSpace,
        rows: usize,
        cols: usize,
        pairs: impl IntoIterator<Item = (MultiIndex, C)>,
    ) -> Result<Self> {
        let mut coeffs: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (j, a) in pairs {
            if j.len() != space.total_vars() {
                return Err(WmpError::dim("multi-index length does not match the variable space"));
            }
            if (a.rows(), a.cols()) != (rows, cols) {
                return Err(WmpError::dim("coefficient matrix shape mismatch"));
            }
            accumulate(&mut coeffs, j, a);
        }
        Ok(Self::pruned(space, rows, cols, coeffs))
    }

    fn pruned(space: VarSpace, rows: usize, cols: usize, mut coeffs: BTreeMap<MultiIndex, C>) -> Self {
        coeffs.retain(|_, a| !a.is_zero());
        Self {
            space,
            rows,
            cols,
            coeffs,
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

    /// `e_A = |Ind_A|`.
    pub fn e(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &BTreeMap<MultiIndex, C> {
        &self.coeffs
    }

    pub fn indices(&self) -> impl Iterator<Item = &MultiIndex> {
        self.coeffs.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn from_poly_matrix(a: &PolyMatrix) -> Self {
        let mut buckets: BTreeMap<MultiIndex, Vec<(usize, usize, GaussianRational)>> = BTreeMap::new();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for (e, c) in a.get(i, j).terms() {
                    buckets.entry(e.clone()).or_default().push((i, j, c.clone()));
                }
            }
        }
        let coeffs = buckets
            .into_iter()
            .map(|(e, v)| (e, C::from_entries(a.rows(), a.cols(), v)))
            .collect();
        Self::pruned(a.space(), a.rows(), a.cols(), coeffs)
    }

    pub fn to_poly_matrix(&self) -> PolyMatrix {
        let mut terms: Vec<Vec<(MultiIndex, GaussianRational)>> = vec![Vec::new(); self.rows * self.cols];
        for (e, a) in &self.coeffs {
            for (i, j, v) in a.entries() {
                terms[i * self.cols + j].push((e.clone(), v));
            }
        }
        let entries = terms
            .into_iter()
            .map(|t| Poly::from_sorted_unchecked(self.space, t))
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

    /// Coefficient-wise merge: keep `A_K`, `B_K`, or `A_K ± B_K`, dropping zeros.
    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut coeffs = self.coeffs.clone();
        for (k, b) in &other.coeffs {
            match coeffs.get_mut(k) {
                Some(a) => *a = if negate { a.sub(b) } else { a.add(b) },
                None => {
                    let b = if negate {
                        b.scale(&-GaussianRational::one())
                    } else {
                        b.clone()
                    };
                    coeffs.insert(k.clone(), b);
                }
            }
        }
        Self::pruned(self.space, self.rows, self.cols, coeffs)
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
        Self {
            space: self.space,
            rows: self.rows,
            cols: self.cols,
            coeffs: self.coeffs.iter().map(|(k, a)| (k.clone(), a.scale(&minus))).collect(),
        }
    }

    /// `C_K = sum over I + J = K of A_I B_J`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.space.ensure_same(&other.space)?;
        if self.cols != other.rows {
            return Err(WmpError::dim(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let k = i.add(j);
                match acc.get_mut(&k) {
                    Some(c) => c.add_mul_assign(a, b),
                    None => {
                        acc.insert(k, a.mul(b));
                    }
                }
            }
        }
        Ok(Self::pruned(self.space, self.rows, other.cols, acc))
    }

    /// Product with a scalar polynomial.
    pub fn scale(&self, s: &Poly) -> Result<Self> {
        self.space.ensure_same(&s.space())?;
        if s.is_one() {
            return Ok(self.clone());
        }
        let mut acc: BTreeMap<MultiIndex, C> = BTreeMap::new();
        for (j, c) in s.terms() {
            for (i, a) in &self.coeffs {
                accumulate(&mut acc, i.add(j), a.scale(c));
            }
        }
        Ok(Self::pruned(self.space, self.rows, self.cols, acc))
    }

    /// `TE`: transpose and conjugate every coefficient matrix, reverse every index.
    pub fn conj_transpose(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, a)| match self.space.mode() {
                Mode::Complex => (k.reversed(), a.conj_transpose()),
                Mode::Real => (k.clone(), a.transpose()),
            })
            .collect();
        Self {
            space: self.space,
            rows: self.cols,
            cols: self.rows,
            coeffs,
        }
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly {
        let terms = self
            .coeffs
            .iter()
            .map(|(k, a)| (k.clone(), a.get(i, j)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Poly::from_sorted_unchecked(self.space, terms)
    }

    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Self> {
        if rows.end > self.rows || cols.end > self.cols {
            return Err(WmpError::dim(format!(
                "block {rows:?}x{cols:?} of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, a)| (k.clone(), a.block(rows.clone(), cols.clone())))
            .collect();
        Ok(Self::pruned(self.space, rows.len(), cols.len(), coeffs))
    }

    /// Vertical join as a three-way union over the two index sets: matching
    /// indices stack both coefficient matrices, unmatched ones are padded with zeros.
    pub fn vjoin(&self, bottom: &Self) -> Result<Self> {
        self.space.ensure_same(&bottom.space)?;
        if self.cols != bottom.cols {
            return Err(WmpError::dim(format!(
                "vertical join of {} and {} columns",
                self.cols, bottom.cols
            )));
        }
        let top_zero = C::zeros(self.rows, self.cols);
        let bottom_zero = C::zeros(bottom.rows, bottom.cols);
        Ok(self.union_join(bottom, self.rows + bottom.rows, self.cols, |a, b| {
            a.unwrap_or(&top_zero).vjoin(b.unwrap_or(&bottom_zero))
        }))
    }

    pub fn hjoin(&self, right: &Self) -> Result<Self> {
        self.space.ensure_same(&right.space)?;
        if self.rows != right.rows {
            return Err(WmpError::dim(format!(
                "horizontal join of {} and {} rows",
                self.rows, right.rows
            )));
        }
        let left_zero = C::zeros(self.rows, self.cols);
        let right_zero = C::zeros(right.rows, right.cols);
        Ok(self.union_join(right, self.rows, self.cols + right.cols, |a, b| {
            a.unwrap_or(&left_zero).hjoin(b.unwrap_or(&right_zero))
        }))
    }

    fn union_join(
        &self,
        other: &Self,
        rows: usize,
        cols: usize,
        join: impl Fn(Option<&C>, Option<&C>) -> C,
    ) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, a) in &self.coeffs {
            coeffs.insert(k.clone(), join(Some(a), other.coeffs.get(k)));
        }
        for (k, b) in &other.coeffs {
            if !self.coeffs.contains_key(k) {
                coeffs.insert(k.clone(), join(None, Some(b)));
            }
        }
        Self {
            space: self.space,
            rows,
            cols,
            coeffs,
        }
    }

    /// Number of nonzero entries of every coefficient matrix.
    pub fn s_per_coeff(&self) -> Vec<(MultiIndex, usize)> {
        self.coeffs.iter().map(|(k, a)| (k.clone(), a.nnz())).collect()
    }
}

fn accumulate<C: CoeffMatrix>(acc: &mut BTreeMap<MultiIndex, C>, k: MultiIndex, a: C) {
    match acc.get_mut(&k) {
        Some(c) => *c = c.add(&a),
        None => {
            acc.insert(k, a);
        }
    }
}
