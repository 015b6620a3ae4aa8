//! Proptest generators shared by the unit tests.

use proptest::prelude::*;

use crate::matrix::PolyMatrix;
use crate::ring::{GaussianRational, Mode, MultiIndex, Poly, VarSpace};

pub fn space() -> impl Strategy<Value = VarSpace> {
    prop_oneof![
        Just(VarSpace::real(1)),
        Just(VarSpace::real(2)),
        Just(VarSpace::complex(1)),
        Just(VarSpace::complex(2)),
    ]
}

pub fn coeff(space: VarSpace) -> impl Strategy<Value = GaussianRational> {
    let complex = space.mode() == Mode::Complex;
    (-7i64..=7, -7i64..=7, 1i64..=4).prop_map(move |(re, im, den)| {
        let im = if complex { im } else { 0 };
        &GaussianRational::from_ints(re, im) * &GaussianRational::from_frac(1, den)
    })
}

/// Up to `terms` terms with exponents below 3.
pub fn poly_with(space: VarSpace, terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..3, space.total_vars()), coeff(space)), 0..=terms).prop_map(
        move |ts| Poly::from_terms(space, ts.into_iter().map(|(e, c)| (MultiIndex::from_slice(&e), c))).expect("valid"),
    )
}

pub fn poly(space: VarSpace) -> impl Strategy<Value = Poly> {
    poly_with(space, 4)
}

pub fn nonzero_poly(space: VarSpace) -> impl Strategy<Value = Poly> {
    poly(space).prop_filter("nonzero", |p| !p.is_zero())
}

pub fn matrix(space: VarSpace, rows: usize, cols: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(poly_with(space, 3), rows * cols)
        .prop_map(move |e| PolyMatrix::new(space, rows, cols, e).expect("shape"))
}

/// Integer-coefficient matrix with entries of degree at most one in each variable.
pub fn small_int_matrix(space: VarSpace, rows: usize, cols: usize) -> impl Strategy<Value = PolyMatrix> {
    let complex = space.mode() == Mode::Complex;
    let term = (prop::collection::vec(0u32..2, space.total_vars()), -4i64..=4, -4i64..=4);
    prop::collection::vec(prop::collection::vec(term, 0..3), rows * cols).prop_map(move |cells| {
        let entries = cells
            .into_iter()
            .map(|ts| {
                let ts = ts.into_iter().map(|(e, re, im)| {
                    (MultiIndex::from_slice(&e), GaussianRational::from_ints(re, if complex { im } else { 0 }))
                });
                Poly::from_terms(space, ts).expect("valid")
            })
            .collect();
        PolyMatrix::new(space, rows, cols, entries).expect("shape")
    })
}

/// `B* B + I` for a random `B`; Hermitian and positive definite at conjugate-consistent points.
pub fn pd_matrix(space: VarSpace, n: usize) -> impl Strategy<Value = PolyMatrix> {
    small_int_matrix(space, n, n).prop_map(move |b| {
        b.conj_transpose().mul(&b).unwrap().add(&PolyMatrix::identity(space, n)).unwrap()
    })
}

/// A full conjugate-consistent point with small Gaussian-rational values.
pub fn point(space: VarSpace) -> impl Strategy<Value = Vec<GaussianRational>> {
    prop::collection::vec(coeff(VarSpace::complex(1)), space.p()).prop_map(move |vals| {
        let vals: Vec<_> = match space.mode() {
            Mode::Real => vals.into_iter().map(|v| GaussianRational::real(v.re().clone())).collect(),
            Mode::Complex => vals,
        };
        space.conjugate_consistent_point(&vals).expect("p values")
    })
}
