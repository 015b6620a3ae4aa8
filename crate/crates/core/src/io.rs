//! JSON file formats: polynomial term lists, matrices, problems, results and
//! inverse traces. Writers are canonical (entries by `(i, j)`, terms in graded-lex
//! order); readers accept any order.

use serde::{Deserialize, Serialize};

use crate::error::{Result, WmpError};
use crate::matrix::PolyMatrix;
use crate::polynomial::{NInvTrace, PinvResult};
use crate::rational::RatMatrix;
use crate::ring::{format_rational, GaussianRational, Mode, MultiIndex, Poly, RationalFn, VarSpace};
use crate::verify::PenroseReport;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub re: String,
    #[serde(default = "zero_text")]
    pub im: String,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub mode: Mode,
    pub p: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<EntryJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatEntryJson {
    pub i: usize,
    pub j: usize,
    pub num: Vec<TermJson>,
    pub den: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatMatrixJson {
    pub mode: Mode,
    pub p: usize,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<RatEntryJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemJson {
    pub mode: Mode,
    pub p: usize,
    #[serde(rename = "A")]
    pub a: MatrixJson,
    #[serde(rename = "M")]
    pub m: MatrixJson,
    #[serde(rename = "N")]
    pub n: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultJson {
    #[serde(rename = "Z")]
    pub z: MatrixJson,
    #[serde(rename = "Y")]
    pub y: Vec<TermJson>,
    #[serde(rename = "X", default, skip_serializing_if = "Option::is_none")]
    pub x: Option<RatMatrixJson>,
    pub algorithm: String,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NInvStepJson {
    pub k: usize,
    #[serde(rename = "N_over")]
    pub n_over: MatrixJson,
    #[serde(rename = "N_under")]
    pub n_under: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NInvJson {
    pub mode: Mode,
    pub p: usize,
    pub steps: Vec<NInvStepJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueJson {
    pub re: String,
    pub im: String,
}

impl From<&GaussianRational> for ValueJson {
    fn from(c: &GaussianRational) -> Self {
        ValueJson {
            re: format_rational(c.re()),
            im: format_rational(c.im()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointError {
    pub point: Vec<ValueJson>,
    /// `None` when the oracle is unavailable at the point.
    pub max_rel_err: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub eq1: bool,
    pub eq2: bool,
    pub eq3: bool,
    pub eq4: bool,
    pub oracle_points: Vec<PointError>,
}

impl VerifyJson {
    pub fn new(report: PenroseReport, oracle_points: Vec<PointError>) -> Self {
        VerifyJson {
            eq1: report.eq1,
            eq2: report.eq2,
            eq3: report.eq3,
            eq4: report.eq4,
            oracle_points,
        }
    }
}

fn schema(msg: impl Into<String>) -> WmpError {
    WmpError::Schema(msg.into())
}

fn space_of(mode: Mode, p: usize) -> Result<VarSpace> {
    VarSpace::new(p, mode)
}

// ---------- polynomials ----------

pub fn coeff_to_json(exp: &[u32], c: &GaussianRational) -> TermJson {
    TermJson {
        exp: exp.to_vec(),
        re: format_rational(c.re()),
        im: format_rational(c.im()),
    }
}

pub fn poly_to_json(p: &Poly) -> Vec<TermJson> {
    p.terms().iter().map(|(e, c)| coeff_to_json(e.exponents(), c)).collect()
}

pub fn poly_from_json(space: VarSpace, terms: &[TermJson]) -> Result<Poly> {
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        if t.exp.len() != space.total_vars() {
            return Err(schema(format!(
                "exponent vector {:?} has length {}, expected {} for {space}",
                t.exp,
                t.exp.len(),
                space.total_vars()
            )));
        }
        let c = GaussianRational::parse_parts(&t.re, &t.im).map_err(|e| schema(e.to_string()))?;
        if space.mode() == Mode::Real && !c.is_real() {
            return Err(schema(format!("complex coefficient {c} in real mode")));
        }
        out.push((MultiIndex::from_slice(&t.exp), c));
    }
    Poly::from_terms(space, out).map_err(|e| schema(e.to_string()))
}

// ---------- matrices ----------

pub fn matrix_to_json(a: &PolyMatrix) -> MatrixJson {
    let space = a.space();
    let mut entries = Vec::new();
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let e = a.get(i, j);
            if !e.is_zero() {
                entries.push(EntryJson {
                    i,
                    j,
                    terms: poly_to_json(e),
                });
            }
        }
    }
    MatrixJson {
        mode: space.mode(),
        p: space.p(),
        rows: a.rows(),
        cols: a.cols(),
        entries,
    }
}

fn check_cell(i: usize, j: usize, rows: usize, cols: usize, seen: &mut [bool]) -> Result<usize> {
    if i >= rows || j >= cols {
        return Err(schema(format!("entry ({i}, {j}) outside a {rows}x{cols} matrix")));
    }
    let k = i * cols + j;
    if std::mem::replace(&mut seen[k], true) {
        return Err(schema(format!("entry ({i}, {j}) given twice")));
    }
    Ok(k)
}

pub fn matrix_from_json(m: &MatrixJson) -> Result<PolyMatrix> {
    let space = space_of(m.mode, m.p)?;
    let mut entries = vec![Poly::zero(space); m.rows * m.cols];
    let mut seen = vec![false; m.rows * m.cols];
    for e in &m.entries {
        let k = check_cell(e.i, e.j, m.rows, m.cols, &mut seen)?;
        entries[k] = poly_from_json(space, &e.terms)?;
    }
    PolyMatrix::new(space, m.rows, m.cols, entries)
}

pub fn rat_matrix_to_json(x: &RatMatrix) -> RatMatrixJson {
    let space = x.space();
    let mut entries = Vec::new();
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            let e = x.get(i, j);
            if !e.is_zero() {
                entries.push(RatEntryJson {
                    i,
                    j,
                    num: poly_to_json(e.num()),
                    den: poly_to_json(e.den()),
                });
            }
        }
    }
    RatMatrixJson {
        mode: space.mode(),
        p: space.p(),
        rows: x.rows(),
        cols: x.cols(),
        entries,
    }
}

pub fn rat_matrix_from_json(m: &RatMatrixJson) -> Result<RatMatrix> {
    let space = space_of(m.mode, m.p)?;
    let mut entries = vec![RationalFn::zero(space); m.rows * m.cols];
    let mut seen = vec![false; m.rows * m.cols];
    for e in &m.entries {
        let k = check_cell(e.i, e.j, m.rows, m.cols, &mut seen)?;
        let num = poly_from_json(space, &e.num)?;
        let den = poly_from_json(space, &e.den)?;
        entries[k] = RationalFn::new(num, den).map_err(|_| schema(format!("zero denominator at ({}, {})", e.i, e.j)))?;
    }
    RatMatrix::new(space, m.rows, m.cols, entries)
}

// ---------- problems and results ----------

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub a: PolyMatrix,
    pub m: PolyMatrix,
    pub n: PolyMatrix,
}

impl Problem {
    pub fn space(&self) -> VarSpace {
        self.a.space()
    }
}

pub fn problem_to_json(p: &Problem) -> ProblemJson {
    let space = p.space();
    ProblemJson {
        mode: space.mode(),
        p: space.p(),
        a: matrix_to_json(&p.a),
        m: matrix_to_json(&p.m),
        n: matrix_to_json(&p.n),
    }
}

pub fn problem_from_json(p: &ProblemJson) -> Result<Problem> {
    let space = space_of(p.mode, p.p)?;
    let read = |name: &str, m: &MatrixJson| -> Result<PolyMatrix> {
        if (m.mode, m.p) != (p.mode, p.p) {
            return Err(schema(format!("matrix {name} is over a different variable set than the problem")));
        }
        matrix_from_json(m).map_err(|e| match e {
            WmpError::Schema(msg) => schema(format!("matrix {name}: {msg}")),
            other => schema(format!("matrix {name}: {other}")),
        })
    };
    let (a, m, n) = (read("A", &p.a)?, read("M", &p.m)?, read("N", &p.n)?);
    if m.rows() != a.rows() || m.cols() != a.rows() {
        return Err(schema(format!("M must be {0}x{0}, got {1}x{2}", a.rows(), m.rows(), m.cols())));
    }
    if n.rows() != a.cols() || n.cols() != a.cols() {
        return Err(schema(format!("N must be {0}x{0}, got {1}x{2}", a.cols(), n.rows(), n.cols())));
    }
    debug_assert_eq!(a.space(), space);
    Ok(Problem { a, m, n })
}

pub fn result_to_json(r: &PinvResult, algorithm: &str, verified: bool, with_x: bool) -> ResultJson {
    ResultJson {
        z: matrix_to_json(&r.z),
        y: poly_to_json(&r.y),
        x: with_x.then(|| rat_matrix_to_json(&r.x)),
        algorithm: algorithm.to_string(),
        verified,
    }
}

/// `(Z, Y)` of a result file.
pub fn result_from_json(r: &ResultJson) -> Result<(PolyMatrix, Poly)> {
    let z = matrix_from_json(&r.z)?;
    let y = poly_from_json(z.space(), &r.y)?;
    if y.is_zero() {
        return Err(schema("Y is the zero polynomial"));
    }
    Ok((z, y))
}

pub fn ninv_to_json(space: VarSpace, traces: &[NInvTrace]) -> NInvJson {
    NInvJson {
        mode: space.mode(),
        p: space.p(),
        steps: traces
            .iter()
            .enumerate()
            .map(|(k, t)| NInvStepJson {
                k: k + 1,
                n_over: matrix_to_json(&t.n_over),
                n_under: poly_to_json(&t.n_under),
            })
            .collect(),
    }
}

/// Candidate inverse from either a result file (`Z`, `Y`) or a bare rational matrix.
pub fn candidate_from_str(text: &str) -> Result<RatMatrix> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    if value.get("Z").is_some() {
        let r: ResultJson = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
        let (z, y) = result_from_json(&r)?;
        return RatMatrix::from_quotient(&z, &y);
    }
    let m: RatMatrixJson = serde_json::from_value(value).map_err(|e| schema(e.to_string()))?;
    rat_matrix_from_json(&m)
}

pub fn problem_from_str(text: &str) -> Result<Problem> {
    let p: ProblemJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    problem_from_json(&p)
}

pub fn matrix_from_str(text: &str) -> Result<PolyMatrix> {
    let m: MatrixJson = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    matrix_from_json(&m)
}

pub fn to_pretty_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}
