//! A worked two-variable problem over `S = (x, y, conj(y), conj(x))`, with the
//! published inverse `X = Z / Y`.

use crate::matrix::PolyMatrix;
use crate::ring::{Poly, VarSpace};

pub fn space() -> VarSpace {
    VarSpace::complex(2)
}

struct Vars {
    x: Poly,
    y: Poly,
    xb: Poly,
}

impl Vars {
    fn new() -> Self {
        let s = space();
        Vars {
            x: Poly::var(s, 0),
            y: Poly::var(s, 1),
            xb: Poly::var(s, 3),
        }
    }
}

/// `c + a*x + b*y + e*conj(x)`.
fn lin(c: i64, a: i64, b: i64, e: i64) -> Poly {
    let v = Vars::new();
    let k = |n: i64| Poly::from_int(space(), n);
    &(&(&k(c) + &(&k(a) * &v.x)) + &(&k(b) * &v.y)) + &(&k(e) * &v.xb)
}

fn matrix(rows: Vec<Vec<Poly>>) -> PolyMatrix {
    let n = rows.len();
    let m = rows[0].len();
    PolyMatrix::new(space(), n, m, rows.into_iter().flatten().collect()).expect("well-formed")
}

pub fn a() -> PolyMatrix {
    matrix(vec![
        vec![lin(1, -3, 0, 0), lin(5, 9, -10, 0), lin(16, 8, 2, 0)],
        vec![lin(-7, 9, -8, 0), lin(8, 5, -1, 0), lin(4, 2, 3, 0)],
        vec![lin(7, -1, -8, 0), lin(16, -2, -6, 0), lin(-3, -2, -4, 0)],
    ])
}

pub fn m() -> PolyMatrix {
    matrix(vec![
        vec![lin(-20, -1, 0, -1), lin(-8, -7, 0, -4), lin(-16, -6, 0, -8)],
        vec![lin(-8, -4, 0, -7), lin(-20, 7, 0, 7), lin(0, 10, 0, -2)],
        vec![lin(-16, -8, 0, -6), lin(0, -2, 0, 10), lin(-14, 7, 0, 7)],
    ])
}

pub fn n() -> PolyMatrix {
    matrix(vec![
        vec![lin(16, 7, 0, 7), lin(7, -6, 0, -2), lin(6, -10, 0, -3)],
        vec![lin(7, -2, 0, -6), lin(-6, -10, 0, -10), lin(-12, -8, 0, -6)],
        vec![lin(6, -3, 0, -10), lin(-12, -6, 0, -8), lin(18, -3, 0, -3)],
    ])
}

/// Published denominator `60x^3 - 5yx^2 - 540x^2 + 51yx + 779x - 42y - 435`.
pub fn printed_y() -> Poly {
    let v = Vars::new();
    let k = |n: i64| Poly::from_int(space(), n);
    let x2 = &v.x * &v.x;
    let x3 = &x2 * &v.x;
    [
        &k(60) * &x3,
        &k(-5) * &(&v.y * &x2),
        &k(-540) * &x2,
        &k(51) * &(&v.y * &v.x),
        &k(779) * &v.x,
        &k(-42) * &v.y,
        k(-435),
    ]
    .iter()
    .fold(Poly::zero(space()), |acc, t| &acc + t)
}

/// `c2*x^2 + c1*x + c0 + cy*y + cyx*y*x`.
fn quad(c2: i64, c1: i64, c0: i64, cy: i64, cyx: i64) -> Poly {
    let v = Vars::new();
    let k = |n: i64| Poly::from_int(space(), n);
    [
        &k(c2) * &(&v.x * &v.x),
        &k(c1) * &v.x,
        k(c0),
        &k(cy) * &v.y,
        &k(cyx) * &(&v.y * &v.x),
    ]
    .iter()
    .fold(Poly::zero(space()), |acc, t| &acc + t)
}

/// Published numerator matrix.
pub fn printed_z() -> PolyMatrix {
    matrix(vec![
        vec![quad(-5, 51, -42, 0, 0), quad(-3, 8, -13, 0, 0), quad(-3, 33, -4, 0, 0)],
        vec![quad(-30, 71, 15, 0, 0), quad(42, -33, 15, 1, -5), quad(-18, -63, 105, 10, 0)],
        vec![quad(-20, 38, -24, 0, 0), quad(36, -58, 34, 4, -4), quad(-24, 42, -23, -2, 1)],
    ])
}

/// The matrix whose ordinary inverse equals the published `Z / Y`.
pub fn printed_x_source() -> PolyMatrix {
    matrix(vec![
        vec![lin(9, -6, 1, 0), lin(1, -3, 0, 0), lin(3, 3, 0, 0)],
        vec![lin(5, -6, 0, 0), lin(-2, 1, 0, 0), lin(-10, 0, 0, 0)],
        vec![lin(-2, -4, 0, 0), lin(-4, 4, 0, 0), lin(1, -5, 0, 0)],
    ])
}

/// The 8-term polynomial `4s1^9 s2^10 + s2^3 + s1^2 s2^2 + 3s1^3 s2 + s2 + 2s1^2 + 3s1 + 10`
/// over two real variables.
pub fn eight_term() -> Poly {
    use crate::ring::{GaussianRational, MultiIndex};
    let t = |a: u32, b: u32, c: i64| (MultiIndex::from_slice(&[a, b]), GaussianRational::from_int(c));
    Poly::from_terms(
        VarSpace::real(2),
        vec![t(9, 10, 4), t(0, 3, 1), t(2, 2, 1), t(3, 1, 3), t(0, 1, 1), t(2, 0, 2), t(1, 0, 3), t(0, 0, 10)],
    )
    .expect("valid terms")
}
