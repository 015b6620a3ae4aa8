//! Polynomial matrices in four representations sharing one operation algebra:
//! dense degree box, Eff, Eff′ and Ef.

mod constant;
mod dense;
mod eff;
mod ef;
mod stats;

use std::fmt::Debug;
use std::ops::Range;

pub use constant::{CoeffMatrix, ConstMatrix, SpTriples};
pub use dense::DensePolyMatrix;
pub use eff::{EffMatrix, EffPrimeMatrix, EffStruct};
pub use ef::PolyMatrix;
pub use stats::{structure_stats, StructureStats};

use crate::error::{Result, WmpError};
use crate::ring::{Poly, VarSpace};

/// The operation algebra (`+`, `-`, `Mul`, `Muls`, `TE`, joins) that the polynomial
/// recursion is written against.
pub trait PolyStructure: Clone + Debug + Send + Sync + Sized {
    fn from_poly_matrix(a: &PolyMatrix) -> Self;
    fn to_poly_matrix(&self) -> PolyMatrix;
    fn zeros(space: VarSpace, rows: usize, cols: usize) -> Self;
    fn identity(space: VarSpace, n: usize) -> Self;
    fn space(&self) -> VarSpace;
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    /// `Muls`: product with a scalar polynomial.
    fn scale(&self, s: &Poly) -> Result<Self>;
    fn neg(&self) -> Self;
    /// `TE`: conjugate transpose.
    fn conj_transpose(&self) -> Self;
    fn entry(&self, i: usize, j: usize) -> Poly;
    fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Self>;
    fn vjoin(&self, bottom: &Self) -> Result<Self>;
    fn hjoin(&self, right: &Self) -> Result<Self>;

    fn from_scalar(p: &Poly) -> Self {
        Self::from_poly_matrix(&PolyMatrix::from_scalar(p))
    }

    /// The single entry of a 1x1 matrix.
    fn to_scalar(&self) -> Result<Poly> {
        if (self.rows(), self.cols()) != (1, 1) {
            return Err(WmpError::dim(format!(
                "expected a 1x1 matrix, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(self.entry(0, 0))
    }

    fn column(&self, j: usize) -> Result<Self> {
        self.block(0..self.rows(), j..j + 1)
    }

    fn leading_columns(&self, k: usize) -> Result<Self> {
        self.block(0..self.rows(), 0..k)
    }

    /// Exact division of every entry by `d`.
    fn div_exact(&self, d: &Poly) -> Option<Self> {
        if d.is_one() {
            return Some(self.clone());
        }
        self.to_poly_matrix().div_exact(d).map(|m| Self::from_poly_matrix(&m))
    }
}

macro_rules! delegate_structure {
    ($ty:ty) => {
        impl PolyStructure for $ty {
            fn from_poly_matrix(a: &PolyMatrix) -> Self {
                <$ty>::from_poly_matrix(a)
            }
            fn to_poly_matrix(&self) -> PolyMatrix {
                <$ty>::to_poly_matrix(self)
            }
            fn zeros(space: VarSpace, rows: usize, cols: usize) -> Self {
                <$ty>::zeros(space, rows, cols)
            }
            fn identity(space: VarSpace, n: usize) -> Self {
                <$ty>::identity(space, n)
            }
            fn space(&self) -> VarSpace {
                <$ty>::space(self)
            }
            fn rows(&self) -> usize {
                <$ty>::rows(self)
            }
            fn cols(&self) -> usize {
                <$ty>::cols(self)
            }
            fn is_zero(&self) -> bool {
                <$ty>::is_zero(self)
            }
            fn add(&self, other: &Self) -> Result<Self> {
                <$ty>::add(self, other)
            }
            fn sub(&self, other: &Self) -> Result<Self> {
                <$ty>::sub(self, other)
            }
            fn mul(&self, other: &Self) -> Result<Self> {
                <$ty>::mul(self, other)
            }
            fn scale(&self, s: &Poly) -> Result<Self> {
                <$ty>::scale(self, s)
            }
            fn neg(&self) -> Self {
                <$ty>::neg(self)
            }
            fn conj_transpose(&self) -> Self {
                <$ty>::conj_transpose(self)
            }
            fn entry(&self, i: usize, j: usize) -> Poly {
                <$ty>::entry(self, i, j)
            }
            fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Self> {
                <$ty>::block(self, rows, cols)
            }
            fn vjoin(&self, bottom: &Self) -> Result<Self> {
                <$ty>::vjoin(self, bottom)
            }
            fn hjoin(&self, right: &Self) -> Result<Self> {
                <$ty>::hjoin(self, right)
            }
        }
    };
}

delegate_structure!(DensePolyMatrix);
delegate_structure!(EffMatrix);
delegate_structure!(EffPrimeMatrix);

impl PolyStructure for PolyMatrix {
    fn from_poly_matrix(a: &PolyMatrix) -> Self {
        a.clone()
    }
    fn to_poly_matrix(&self) -> PolyMatrix {
        self.clone()
    }
    fn zeros(space: VarSpace, rows: usize, cols: usize) -> Self {
        PolyMatrix::zeros(space, rows, cols)
    }
    fn identity(space: VarSpace, n: usize) -> Self {
        PolyMatrix::identity(space, n)
    }
    fn space(&self) -> VarSpace {
        PolyMatrix::space(self)
    }
    fn rows(&self) -> usize {
        PolyMatrix::rows(self)
    }
    fn cols(&self) -> usize {
        PolyMatrix::cols(self)
    }
    fn is_zero(&self) -> bool {
        PolyMatrix::is_zero(self)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        PolyMatrix::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        PolyMatrix::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        PolyMatrix::mul(self, other)
    }
    fn scale(&self, s: &Poly) -> Result<Self> {
        PolyMatrix::scale(self, s)
    }
    fn neg(&self) -> Self {
        PolyMatrix::neg(self)
    }
    fn conj_transpose(&self) -> Self {
        PolyMatrix::conj_transpose(self)
    }
    fn entry(&self, i: usize, j: usize) -> Poly {
        self.get(i, j).clone()
    }
    fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Result<Self> {
        PolyMatrix::block(self, rows, cols)
    }
    fn vjoin(&self, bottom: &Self) -> Result<Self> {
        PolyMatrix::vjoin(self, bottom)
    }
    fn hjoin(&self, right: &Self) -> Result<Self> {
        PolyMatrix::hjoin(self, right)
    }
    fn from_scalar(p: &Poly) -> Self {
        PolyMatrix::from_scalar(p)
    }
    fn div_exact(&self, d: &Poly) -> Option<Self> {
        PolyMatrix::div_exact(self, d)
    }
}
