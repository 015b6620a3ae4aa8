//! Constant coefficient matrices: dense storage and sorted triples.

use std::ops::Range;

use crate::ring::GaussianRational;

/// Storage for the constant matrix `A_J` attached to one multi-index.
pub trait CoeffMatrix: Clone + PartialEq + std::fmt::Debug + Send + Sync {
    fn zeros(rows: usize, cols: usize) -> Self;
    fn identity(n: usize) -> Self;
    /// Builds from `(i, j, value)` entries; zeros are dropped, duplicates summed.
    fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, GaussianRational)>,
    ) -> Self;
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn is_zero(&self) -> bool;
    /// Number of nonzero entries.
    fn nnz(&self) -> usize;
    /// Nonzero entries in row-major order.
    fn entries(&self) -> Vec<(usize, usize, GaussianRational)>;
    fn get(&self, i: usize, j: usize) -> GaussianRational;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &GaussianRational) -> Self;
    fn conj_transpose(&self) -> Self;
    fn transpose(&self) -> Self;
    fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Self;
    fn vjoin(&self, bottom: &Self) -> Self;
    fn hjoin(&self, right: &Self) -> Self;

    /// `self += a * b`.
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }
}

/// Dense row-major constant matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConstMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

impl ConstMatrix {
    pub fn data(&self) -> &[GaussianRational] {
        &self.data
    }

    fn at(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }
}

impl CoeffMatrix for ConstMatrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![GaussianRational::zero(); rows * cols],
        }
    }

    fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = GaussianRational::one();
        }
        m
    }

    fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, GaussianRational)>,
    ) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, j, v) in entries {
            m.data[i * cols + j] += &v;
        }
        m
    }

    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    fn nnz(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    fn entries(&self) -> Vec<(usize, usize, GaussianRational)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, v)| (k / self.cols, k % self.cols, v.clone()))
            .collect()
    }

    fn get(&self, i: usize, j: usize) -> GaussianRational {
        self.at(i, j).clone()
    }

    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows, other.cols);
        out.add_mul_assign(self, other);
        out
    }

    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        debug_assert_eq!(a.cols, b.rows);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let aik = a.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bkj = b.at(k, j);
                    if !bkj.is_zero() {
                        self.data[i * b.cols + j] += &(aik * bkj);
                    }
                }
            }
        }
    }

    fn scale(&self, c: &GaussianRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    fn conj_transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.at(i, j).conj();
            }
        }
        out
    }

    fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.at(i, j).clone();
            }
        }
        out
    }

    fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.clone() {
            for j in cols.clone() {
                data.push(self.at(i, j).clone());
            }
        }
        Self {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    fn vjoin(&self, bottom: &Self) -> Self {
        debug_assert_eq!(self.cols, bottom.cols);
        let mut data = self.data.clone();
        data.extend(bottom.data.iter().cloned());
        Self {
            rows: self.rows + bottom.rows,
            cols: self.cols,
            data,
        }
    }

    fn hjoin(&self, right: &Self) -> Self {
        debug_assert_eq!(self.rows, right.rows);
        let cols = self.cols + right.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.data[i * self.cols..(i + 1) * self.cols].iter().cloned());
            data.extend(right.data[i * right.cols..(i + 1) * right.cols].iter().cloned());
        }
        Self {
            rows: self.rows,
            cols,
            data,
        }
    }
}

/// Sparse constant matrix as row-major sorted `(i, j, value)` triples with no zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SpTriples {
    rows: usize,
    cols: usize,
    triples: Vec<(usize, usize, GaussianRational)>,
}

impl SpTriples {
    pub fn triples(&self) -> &[(usize, usize, GaussianRational)] {
        &self.triples
    }

    /// Start offset of every row in `triples` (length `rows + 1`).
    fn row_starts(&self) -> Vec<usize> {
        let mut starts = vec![0; self.rows + 1];
        for (i, _, _) in &self.triples {
            starts[i + 1] += 1;
        }
        for r in 0..self.rows {
            starts[r + 1] += starts[r];
        }
        starts
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let (a, b) = (&self.triples, &other.triples);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut p, mut q) = (0, 0);
        while p < a.len() || q < b.len() {
            let ord = match (a.get(p), b.get(q)) {
                (Some(x), Some(y)) => (x.0, x.1).cmp(&(y.0, y.1)),
                (Some(_), None) => std::cmp::Ordering::Less,
                _ => std::cmp::Ordering::Greater,
            };
            match ord {
                std::cmp::Ordering::Less => {
                    out.push(a[p].clone());
                    p += 1;
                }
                std::cmp::Ordering::Greater => {
                    let (i, j, v) = &b[q];
                    out.push((*i, *j, if negate { -v } else { v.clone() }));
                    q += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = if negate { &a[p].2 - &b[q].2 } else { &a[p].2 + &b[q].2 };
                    if !v.is_zero() {
                        out.push((a[p].0, a[p].1, v));
                    }
                    p += 1;
                    q += 1;
                }
            }
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            triples: out,
        }
    }
}

impl CoeffMatrix for SpTriples {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            triples: Vec::new(),
        }
    }

    fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            triples: (0..n).map(|i| (i, i, GaussianRational::one())).collect(),
        }
    }

    fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, GaussianRational)>,
    ) -> Self {
        let mut v: Vec<_> = entries.into_iter().collect();
        v.sort_by_key(|&(i, j, _)| (i, j));
        let mut triples: Vec<(usize, usize, GaussianRational)> = Vec::with_capacity(v.len());
        for (i, j, x) in v {
            match triples.last_mut() {
                Some(last) if last.0 == i && last.1 == j => last.2 += &x,
                _ => triples.push((i, j, x)),
            }
        }
        triples.retain(|t| !t.2.is_zero());
        Self {
            rows,
            cols,
            triples,
        }
    }

    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn is_zero(&self) -> bool {
        self.triples.is_empty()
    }

    fn nnz(&self) -> usize {
        self.triples.len()
    }

    fn entries(&self) -> Vec<(usize, usize, GaussianRational)> {
        self.triples.clone()
    }

    fn get(&self, i: usize, j: usize) -> GaussianRational {
        self.triples
            .binary_search_by(|t| (t.0, t.1).cmp(&(i, j)))
            .map(|k| self.triples[k].2.clone())
            .unwrap_or_default()
    }

    fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    /// Sorted join on the contraction index: every `(i, k, a)` meets the triples of
    /// row `k` of `other`; results are gathered in an `m x p` accumulator.
    fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let starts = other.row_starts();
        let width = other.cols;
        let mut acc: Vec<Option<GaussianRational>> = vec![None; self.rows * width];
        for (i, k, a) in &self.triples {
            for (_, j, b) in &other.triples[starts[*k]..starts[k + 1]] {
                let t = a * b;
                match &mut acc[i * width + j] {
                    Some(x) => *x += &t,
                    slot => *slot = Some(t),
                }
            }
        }
        let triples = acc
            .into_iter()
            .enumerate()
            .filter_map(|(pos, v)| match v {
                Some(v) if !v.is_zero() => Some((pos / width, pos % width, v)),
                _ => None,
            })
            .collect();
        Self {
            rows: self.rows,
            cols: width,
            triples,
        }
    }

    fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            triples: self
                .triples
                .iter()
                .map(|(i, j, v)| (*i, *j, v * c))
                .collect(),
        }
    }

    fn conj_transpose(&self) -> Self {
        Self::from_entries(
            self.cols,
            self.rows,
            self.triples.iter().map(|(i, j, v)| (*j, *i, v.conj())),
        )
    }

    fn transpose(&self) -> Self {
        Self::from_entries(
            self.cols,
            self.rows,
            self.triples.iter().map(|(i, j, v)| (*j, *i, v.clone())),
        )
    }

    fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self {
            rows: rows.len(),
            cols: cols.len(),
            triples: self
                .triples
                .iter()
                .filter(|(i, j, _)| rows.contains(i) && cols.contains(j))
                .map(|(i, j, v)| (i - r0, j - c0, v.clone()))
                .collect(),
        }
    }

    fn vjoin(&self, bottom: &Self) -> Self {
        let mut triples = self.triples.clone();
        triples.extend(
            bottom
                .triples
                .iter()
                .map(|(i, j, v)| (i + self.rows, *j, v.clone())),
        );
        Self {
            rows: self.rows + bottom.rows,
            cols: self.cols,
            triples,
        }
    }

    fn hjoin(&self, right: &Self) -> Self {
        Self::from_entries(
            self.rows,
            self.cols + right.cols,
            self.triples.iter().cloned().chain(
                right
                    .triples
                    .iter()
                    .map(|(i, j, v)| (*i, j + self.cols, v.clone())),
            ),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    fn sample<C: CoeffMatrix>() -> (C, C) {
        let a = C::from_entries(2, 3, vec![(0, 0, g(1)), (0, 2, g(2)), (1, 1, g(-3))]);
        let b = C::from_entries(3, 2, vec![(0, 1, g(4)), (1, 0, g(5)), (2, 0, g(1)), (2, 1, g(1))]);
        (a, b)
    }

    #[test]
    fn triples_match_dense() {
        let (da, db) = sample::<ConstMatrix>();
        let (sa, sb) = sample::<SpTriples>();
        assert_eq!(da.mul(&db).entries(), sa.mul(&sb).entries());
        assert_eq!(da.conj_transpose().entries(), sa.conj_transpose().entries());
        assert_eq!(
            da.vjoin(&da).hjoin(&db.transpose().vjoin(&db.transpose())).entries(),
            sa.vjoin(&sa).hjoin(&sb.transpose().vjoin(&sb.transpose())).entries()
        );
        assert!(sa.sub(&sa).is_zero());
        assert_eq!(sa.block(0..2, 1..3).entries(), da.block(0..2, 1..3).entries());
    }

    #[test]
    fn triples_stay_sorted() {
        let t = SpTriples::from_entries(3, 3, vec![(2, 0, g(1)), (0, 2, g(1)), (0, 1, g(0)), (2, 0, g(-1))]);
        assert_eq!(t.triples(), &[(0, 2, g(1))]);
    }
}
