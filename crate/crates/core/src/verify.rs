//! Verification: the four weighted Penrose equations checked exactly, a numeric
//! evaluation oracle, Hermitian checks and the sparsity ratios `sp1`, `sp2`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, WmpError};
use crate::matrix::{structure_stats, CoeffMatrix, ConstMatrix, PolyMatrix, StructureStats};
use crate::rational::RatMatrix;
use crate::ring::{format_rational, GaussianRational, Poly, VarSpace};

/// Outcome of the four Penrose equations `AXA = A`, `XAX = X`, `(MAX)* = MAX`, `(NXA)* = NXA`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PenroseReport {
    pub eq1: bool,
    pub eq2: bool,
    pub eq3: bool,
    pub eq4: bool,
}

impl PenroseReport {
    pub fn all(&self) -> bool {
        self.eq1 && self.eq2 && self.eq3 && self.eq4
    }
}

fn check_shapes(a: &PolyMatrix, m: &PolyMatrix, n: &PolyMatrix, x_rows: usize, x_cols: usize) -> Result<()> {
    let (rows, cols) = (a.rows(), a.cols());
    if m.rows() != rows || m.cols() != rows {
        return Err(WmpError::Dimension(format!("M is {}x{}, expected {rows}x{rows}", m.rows(), m.cols())));
    }
    if n.rows() != cols || n.cols() != cols {
        return Err(WmpError::Dimension(format!("N is {}x{}, expected {cols}x{cols}", n.rows(), n.cols())));
    }
    if x_rows != cols || x_cols != rows {
        return Err(WmpError::Dimension(format!("X is {x_rows}x{x_cols}, expected {cols}x{rows}")));
    }
    Ok(())
}

/// Penrose equations for `X = Z / Y` in fraction-free form:
/// `AZA = YA`, `ZAZ = YZ`, `Y (MAZ)* = Y* MAZ`, `Y (NZA)* = Y* NZA`.
pub fn penrose_check_zy(a: &PolyMatrix, m: &PolyMatrix, n: &PolyMatrix, z: &PolyMatrix, y: &Poly) -> Result<PenroseReport> {
    check_shapes(a, m, n, z.rows(), z.cols())?;
    if y.is_zero() {
        return Err(WmpError::ZeroDenominator);
    }
    let ys = y.conj();
    let az = a.mul(z)?;
    let za = z.mul(a)?;
    let checks: Vec<Box<dyn Fn() -> Result<bool> + Sync>> = vec![
        Box::new(|| Ok(az.mul(a)? == a.scale(y)?)),
        Box::new(|| Ok(za.mul(z)? == z.scale(y)?)),
        Box::new(|| {
            let maz = m.mul(&az)?;
            Ok(maz.conj_transpose().scale(y)? == maz.scale(&ys)?)
        }),
        Box::new(|| {
            let nza = n.mul(&za)?;
            Ok(nza.conj_transpose().scale(y)? == nza.scale(&ys)?)
        }),
    ];
    let out: Result<Vec<bool>> = checks.par_iter().map(|c| c()).collect();
    let out = out?;
    Ok(PenroseReport {
        eq1: out[0],
        eq2: out[1],
        eq3: out[2],
        eq4: out[3],
    })
}

/// Penrose equations for a rational candidate, reduced over one common denominator.
pub fn penrose_check(a: &PolyMatrix, m: &PolyMatrix, n: &PolyMatrix, x: &RatMatrix) -> Result<PenroseReport> {
    check_shapes(a, m, n, x.rows(), x.cols())?;
    let (z, y) = x.to_common_denominator()?;
    penrose_check_zy(a, m, n, &z, &y)
}

/// True iff `M* = M` structurally.
pub fn hermitian_check(m: &PolyMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(WmpError::Dimension(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    Ok(m.hermitian_violation().is_none())
}

fn to_dmatrix(c: &ConstMatrix) -> DMatrix<Complex64> {
    DMatrix::from_row_iterator(c.rows(), c.cols(), c.data().iter().map(GaussianRational::to_complex64))
}

/// Hermitian part of a numerically evaluated weight.
fn hermitian(c: &ConstMatrix) -> DMatrix<Complex64> {
    let w = to_dmatrix(c);
    (&w + w.adjoint()).map(|v| v * 0.5)
}

enum Definiteness {
    Positive,
    Negative,
    Indefinite,
}

fn definiteness(w: &DMatrix<Complex64>) -> (Definiteness, SymmetricEigen<Complex64, nalgebra::Dyn>) {
    let eig = w.clone().symmetric_eigen();
    let scale = eig.eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tol = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let kind = if scale > 0.0 && eig.eigenvalues.iter().all(|&v| v > tol) {
        Definiteness::Positive
    } else if scale > 0.0 && eig.eigenvalues.iter().all(|&v| v < -tol) {
        Definiteness::Negative
    } else {
        Definiteness::Indefinite
    };
    (kind, eig)
}

/// `W^{t}` for a positive definite Hermitian `W` given by its eigendecomposition.
fn hermitian_power(eig: &SymmetricEigen<Complex64, nalgebra::Dyn>, t: f64) -> DMatrix<Complex64> {
    let q = &eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(v.powf(t), 0.0)));
    q * d * q.adjoint()
}

/// Weight factors for the oracle. Scaling a weight by `-1` leaves every Penrose
/// equation unchanged, so negative definite weights are accepted after a sign flip.
fn weight_roots(name: &str, w: &ConstMatrix) -> Result<SymmetricEigen<Complex64, nalgebra::Dyn>> {
    let h = hermitian(w);
    match definiteness(&h) {
        (Definiteness::Positive, eig) => Ok(eig),
        (Definiteness::Negative, _) => Ok(definiteness(&(-h)).1),
        (Definiteness::Indefinite, _) => Err(WmpError::OracleUnavailable(format!(
            "{name} is not definite at the evaluation point"
        ))),
    }
}

fn pinv(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    if a.is_empty() {
        return DMatrix::zeros(a.ncols(), a.nrows());
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let tol = 1e-12 * smax;
    let u = svd.u.expect("requested");
    let vt = svd.v_t.expect("requested");
    let inv = svd
        .singular_values
        .map(|s| if s > tol && s > 0.0 { Complex64::new(1.0 / s, 0.0) } else { Complex64::new(0.0, 0.0) });
    vt.adjoint() * DMatrix::from_diagonal(&inv) * u.adjoint()
}

/// Weighted pseudoinverse of the matrices evaluated at `point` (a full point over
/// all `total_vars` variables), via `N^{-1/2} (M^{1/2} A N^{-1/2})^+ M^{1/2}`.
pub fn numeric_oracle(a: &PolyMatrix, m: &PolyMatrix, n: &PolyMatrix, point: &[GaussianRational]) -> Result<DMatrix<Complex64>> {
    check_shapes(a, m, n, a.cols(), a.rows())?;
    let ae = to_dmatrix(&a.eval(point)?);
    let me = weight_roots("M", &m.eval(point)?)?;
    let ne = weight_roots("N", &n.eval(point)?)?;
    let m_half = hermitian_power(&me, 0.5);
    let n_inv_half = hermitian_power(&ne, -0.5);
    Ok(&n_inv_half * pinv(&(&m_half * &ae * &n_inv_half)) * m_half)
}

/// Numeric value of a constant matrix.
pub fn to_numeric(c: &ConstMatrix) -> DMatrix<Complex64> {
    to_dmatrix(c)
}

/// `||X - O||_F / ||O||_F`, or the absolute error when the oracle value is zero.
pub fn relative_error(x: &DMatrix<Complex64>, oracle: &DMatrix<Complex64>) -> f64 {
    let diff = (x - oracle).norm();
    let scale = oracle.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// A random full evaluation point whose conjugate slots hold the conjugate values.
pub fn random_point<R: Rng + ?Sized>(space: VarSpace, rng: &mut R) -> Vec<GaussianRational> {
    let part = |rng: &mut R| BigRational::new(BigInt::from(rng.gen_range(-40i64..=40)), BigInt::from(rng.gen_range(1i64..=13)));
    let values: Vec<GaussianRational> = (0..space.p())
        .map(|_| match space.mode() {
            crate::ring::Mode::Real => GaussianRational::real(part(rng)),
            crate::ring::Mode::Complex => GaussianRational::new(part(rng), part(rng)),
        })
        .collect();
    space.conjugate_consistent_point(&values).expect("p values")
}

/// Samples `points` conjugate-consistent points and reports whether the Hermitian
/// part of `w` is positive definite at each; a non-definite sample yields a warning.
pub fn weight_spot_check<R: Rng + ?Sized>(name: &str, w: &PolyMatrix, points: usize, rng: &mut R) -> Vec<String> {
    let mut warnings = Vec::new();
    for _ in 0..points {
        let pt = random_point(w.space(), rng);
        let Ok(val) = w.eval(&pt) else { continue };
        if !matches!(definiteness(&hermitian(&val)).0, Definiteness::Positive) {
            let shown: Vec<String> = pt.iter().map(ToString::to_string).collect();
            warnings.push(format!("{name} is not positive definite at ({})", shown.join(", ")));
        }
    }
    warnings
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparsityReport {
    #[serde(serialize_with = "ser_rational")]
    pub sp1: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub sp2: BigRational,
    pub nonzero_entries: usize,
    pub cells: usize,
    pub nonzero_coefficients: usize,
    /// `prod_j (deg_j + 1) * m * n`.
    #[serde(serialize_with = "ser_bigint")]
    pub coefficient_slots: BigInt,
    /// Degree in each variable of the (conjugate-extended) set.
    pub degrees: Vec<u32>,
    pub stats: StructureStats,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

impl SparsityReport {
    pub fn sp1_f64(&self) -> f64 {
        ratio_f64(&self.sp1)
    }

    pub fn sp2_f64(&self) -> f64 {
        ratio_f64(&self.sp2)
    }
}

fn ratio_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// `sp1` = nonzero entries / (m n); `sp2` = nonzero coefficients / (prod_j (deg_j + 1) m n).
pub fn sparsity(a: &PolyMatrix) -> SparsityReport {
    let stats = structure_stats(a);
    let degrees = a.degree_vector();
    let cells = a.rows() * a.cols();
    let nonzero = a.entries().iter().filter(|e| !e.is_zero()).count();
    let slots = degrees.iter().fold(BigInt::one(), |acc, &d| acc * BigInt::from(d + 1)) * BigInt::from(cells);
    let ratio = |num: usize, den: BigInt| {
        if num == 0 || den.is_zero() {
            BigRational::zero()
        } else {
            BigRational::new(BigInt::from(num), den)
        }
    };
    SparsityReport {
        sp1: ratio(nonzero, BigInt::from(cells)),
        sp2: ratio(a.ef(), slots.clone()),
        nonzero_entries: nonzero,
        cells,
        nonzero_coefficients: a.ef(),
        coefficient_slots: slots,
        degrees,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::VarSpace;
    use crate::sample;

    fn consts(rows: usize, cols: usize, vals: &[i64]) -> PolyMatrix {
        let vs = VarSpace::real(1);
        PolyMatrix::from_fn(vs, rows, cols, |i, j| Poly::from_int(vs, vals[i * cols + j]))
    }

    #[test]
    fn identity_passes() {
        let i = consts(2, 2, &[1, 0, 0, 1]);
        let rep = penrose_check(&i, &i, &i, &RatMatrix::from_poly_matrix(&i)).unwrap();
        assert!(rep.all());
    }

    #[test]
    fn idempotent_diagonal() {
        let a = consts(2, 2, &[1, 0, 0, 0]);
        let i = consts(2, 2, &[1, 0, 0, 1]);
        assert!(penrose_check(&a, &i, &i, &RatMatrix::from_poly_matrix(&a)).unwrap().all());
        let wrong = consts(2, 2, &[2, 0, 0, 0]);
        let rep = penrose_check(&a, &i, &i, &RatMatrix::from_poly_matrix(&wrong)).unwrap();
        assert!(!rep.eq1 && !rep.eq2 && rep.eq3 && rep.eq4);
    }

    #[test]
    fn shape_mismatch() {
        let a = consts(2, 1, &[1, 1]);
        let i = consts(2, 2, &[1, 0, 0, 1]);
        assert!(penrose_check(&a, &i, &i, &RatMatrix::from_poly_matrix(&a)).is_err());
    }

    #[test]
    fn oracle_rank_one_column() {
        let a = consts(2, 1, &[1, 1]);
        let i2 = consts(2, 2, &[1, 0, 0, 1]);
        let i1 = consts(1, 1, &[1]);
        let x = numeric_oracle(&a, &i2, &i1, &[GaussianRational::zero()]).unwrap();
        assert!((x[(0, 0)].re - 0.5).abs() < 1e-12 && (x[(0, 1)].re - 0.5).abs() < 1e-12);
        let id = numeric_oracle(&i2, &i2, &i2, &[GaussianRational::zero()]).unwrap();
        assert!((id - DMatrix::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn oracle_rejects_indefinite_weight() {
        let a = consts(2, 2, &[1, 0, 0, 1]);
        let bad = consts(2, 2, &[1, 0, 0, -1]);
        let err = numeric_oracle(&a, &bad, &a, &[GaussianRational::zero()]).unwrap_err();
        assert!(matches!(err, WmpError::OracleUnavailable(_)));
        let neg = consts(2, 2, &[-2, 0, 0, -1]);
        assert!(numeric_oracle(&a, &neg, &a, &[GaussianRational::zero()]).is_ok());
    }

    #[test]
    fn sparsity_of_sample() {
        let rep = sparsity(&sample::a());
        assert_eq!(rep.sp1, BigRational::one());
        assert_eq!(rep.sp2, BigRational::new(26.into(), 36.into()));
        assert_eq!((rep.nonzero_coefficients, rep.coefficient_slots.clone()), (26, BigInt::from(36)));
        let zero = sparsity(&PolyMatrix::zeros(VarSpace::real(1), 2, 2));
        assert!(zero.sp1.is_zero() && zero.sp2.is_zero());
    }

    #[test]
    fn hermitian_inputs() {
        assert!(hermitian_check(&sample::m()).unwrap());
        assert!(hermitian_check(&sample::n()).unwrap());
        assert!(!hermitian_check(&sample::a()).unwrap());
        assert!(hermitian_check(&consts(1, 2, &[1, 2])).is_err());
        let vs = VarSpace::complex(1);
        let x = Poly::var(vs, 0);
        let z = Poly::zero(vs);
        let off = PolyMatrix::new(vs, 2, 2, vec![z.clone(), x.clone(), x.conj(), z]).unwrap();
        assert!(hermitian_check(&off).unwrap());
    }
}

#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::*;
    use crate::strategies::{matrix, space};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn sparsity_ratios_lie_in_unit_interval(
            a in space().prop_flat_map(|s| (1usize..=3, 1usize..=3).prop_flat_map(move |(r, c)| matrix(s, r, c)))
        ) {
            let rep = sparsity(&a);
            let (zero, one) = (BigRational::zero(), BigRational::one());
            prop_assert!(rep.sp1 >= zero && rep.sp1 <= one);
            prop_assert!(rep.sp2 >= zero && rep.sp2 <= one);
            prop_assert!(rep.sp2 <= rep.sp1);
        }
    }
}
