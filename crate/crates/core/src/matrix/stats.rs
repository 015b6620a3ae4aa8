use serde::Serialize;

use super::eff::EffPrimeMatrix;
use super::ef::PolyMatrix;

/// Size counts of a polynomial matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureStats {
    /// `e_A`: number of distinct monomials (nonzero coefficient matrices).
    pub e: usize,
    /// `ef_A`: number of nonzero scalar coefficients over all entries.
    pub ef: usize,
    /// `s_{A_J}` for every index `J` in graded-lex order.
    pub s_per_coeff: Vec<(Vec<u32>, usize)>,
    /// `row(A, k)`: sum of entry term counts in row `k`.
    pub row_sums: Vec<usize>,
    /// `col(A, k)`: sum of entry term counts in column `k`.
    pub col_sums: Vec<usize>,
}

pub fn structure_stats(a: &PolyMatrix) -> StructureStats {
    let eff = EffPrimeMatrix::from_poly_matrix(a);
    let mut row_sums = vec![0; a.rows()];
    let mut col_sums = vec![0; a.cols()];
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let t = a.get(i, j).num_terms();
            row_sums[i] += t;
            col_sums[j] += t;
        }
    }
    StructureStats {
        e: eff.e(),
        ef: a.ef(),
        s_per_coeff: eff
            .s_per_coeff()
            .into_iter()
            .map(|(k, s)| (k.exponents().to_vec(), s))
            .collect(),
        row_sums,
        col_sums,
    }
}
