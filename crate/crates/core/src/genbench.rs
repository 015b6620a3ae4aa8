//! Random instances with target sparsity, and the timing harness.

use std::io::Write;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithm::Algorithm;
use crate::error::{Result, WmpError};
use crate::matrix::PolyMatrix;
use crate::ring::{GaussianRational, GcdBudget, Mode, MultiIndex, Poly, VarSpace};

/// Absolute tolerance on the achieved `sp2`.
pub const SP2_TOLERANCE: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub m: usize,
    pub n: usize,
    /// Degree in each independent variable.
    pub d: u32,
    pub p: usize,
    pub mode: Mode,
    pub target_sp1: f64,
    pub target_sp2: f64,
    pub coeff_range: i64,
    pub seed: u64,
}

impl GenSpec {
    pub fn space(&self) -> VarSpace {
        match self.mode {
            Mode::Complex => VarSpace::complex(self.p),
            Mode::Real => VarSpace::real(self.p),
        }
    }

    fn validate(&self) -> Result<()> {
        let unit = |v: f64| v > 0.0 && v <= 1.0;
        if !unit(self.target_sp1) || !unit(self.target_sp2) {
            return Err(WmpError::Spec("sparsity targets must lie in (0, 1]".into()));
        }
        if self.m == 0 || self.n == 0 || self.p == 0 {
            return Err(WmpError::Spec("dimensions and variable count must be positive".into()));
        }
        if self.coeff_range < 1 {
            return Err(WmpError::Spec("coefficient range must be at least 1".into()));
        }
        Ok(())
    }
}

/// Exponent vectors with every variable (conjugates included) of degree at most
/// `d`. The last one is `(d, ..., d)`.
fn monomials(space: VarSpace, d: u32) -> Vec<MultiIndex> {
    let mut out = vec![vec![0u32; space.total_vars()]];
    for v in 0..space.total_vars() {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..=d).map(move |k| {
                    let mut e = e.clone();
                    e[v] = k;
                    e
                })
            })
            .collect();
    }
    out.iter().map(|e| MultiIndex::from_slice(e)).collect()
}

fn coefficient(rng: &mut ChaCha8Rng, range: i64) -> GaussianRational {
    let mut v = 0;
    while v == 0 {
        v = rng.gen_range(-range..=range);
    }
    GaussianRational::from_int(v)
}

/// Random polynomial matrix hitting the sparsity
/// targets: `sp1` exactly up to rounding of `sp1 * m * n`, `sp2` within [`SP2_TOLERANCE`].
pub fn gen_matrix(spec: &GenSpec) -> Result<PolyMatrix> {
    spec.validate()?;
    let space = spec.space();
    let cells = spec.m * spec.n;
    let monos = monomials(space, spec.d);
    let per_entry = monos.len();
    let slots = cells * per_entry;

    let k1 = ((spec.target_sp1 * cells as f64).round() as usize).clamp(1, cells);
    let k2 = (spec.target_sp2 * slots as f64).round() as usize;
    let k2 = k2.clamp(k1, k1 * per_entry);
    let achieved = k2 as f64 / slots as f64;
    if (achieved - spec.target_sp2).abs() > SP2_TOLERANCE {
        return Err(WmpError::Spec(format!(
            "sp2 = {} is infeasible with sp1 = {} (closest reachable {achieved:.3})",
            spec.target_sp2, spec.target_sp1
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut cell_ids: Vec<usize> = (0..cells).collect();
    cell_ids.shuffle(&mut rng);
    let mut chosen: Vec<usize> = cell_ids[..k1].to_vec();
    chosen.sort_unstable();

    // One term per chosen entry; the first carries the full-degree monomial so
    // every variable reaches degree d.
    let mut picked: Vec<(usize, usize)> = Vec::with_capacity(k2);
    for (t, &c) in chosen.iter().enumerate() {
        let mono = if t == 0 { per_entry - 1 } else { rng.gen_range(0..per_entry) };
        picked.push((c, mono));
    }
    let mut pool: Vec<(usize, usize)> = chosen
        .iter()
        .flat_map(|&c| (0..per_entry).map(move |k| (c, k)))
        .filter(|pair| !picked.contains(pair))
        .collect();
    pool.shuffle(&mut rng);
    picked.extend(pool.into_iter().take(k2 - k1));
    picked.sort_unstable();

    let mut entries = vec![Vec::new(); cells];
    for (c, k) in picked {
        entries[c].push((monos[k].clone(), coefficient(&mut rng, spec.coeff_range)));
    }
    let polys: Result<Vec<Poly>> = entries.into_iter().map(|t| Poly::from_terms(space, t)).collect();
    PolyMatrix::new(space, spec.m, spec.n, polys?)
}

/// `B* B + I` for `B = gen_matrix(spec)`; requires `m = n`.
pub fn gen_pd_matrix(spec: &GenSpec) -> Result<PolyMatrix> {
    if spec.m != spec.n {
        return Err(WmpError::Spec(format!("weight must be square, got {}x{}", spec.m, spec.n)));
    }
    let b = gen_matrix(spec)?;
    b.conj_transpose().mul(&b)?.add(&PolyMatrix::identity(b.space(), spec.n))
}

/// `B* B + I` for a given `B`.
pub fn pd_from(b: &PolyMatrix) -> Result<PolyMatrix> {
    b.conj_transpose().mul(b)?.add(&PolyMatrix::identity(b.space(), b.cols()))
}

/// Deterministic child seed from a master seed and a path of tags.
pub fn derive_seed(master: u64, tags: &[u64]) -> u64 {
    let mix = |mut z: u64| {
        z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    tags.iter().fold(mix(master), |acc, &t| mix(acc ^ mix(t)))
}

/// One problem `(A, M, N)`.
#[derive(Clone, Debug)]
pub struct Instance {
    pub a: PolyMatrix,
    pub m: PolyMatrix,
    pub n: PolyMatrix,
}

/// `A` from `spec`, and weights `B* B + I` whose factors `B` share `A`'s sparsity profile and degree.
pub fn gen_instance(spec: &GenSpec) -> Result<Instance> {
    let a = gen_matrix(spec)?;
    let weight = |k: usize, tag: u64| {
        gen_pd_matrix(&GenSpec {
            m: k,
            n: k,
            seed: derive_seed(spec.seed, &[tag]),
            ..spec.clone()
        })
    };
    Ok(Instance {
        a,
        m: weight(spec.m, 1)?,
        n: weight(spec.n, 2)?,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BenchConfig {
    /// Cells `(m, n, d)`.
    pub grid: Vec<(usize, usize, u32)>,
    /// Sparsity profiles `(sp1, sp2)`.
    pub profiles: Vec<(f64, f64)>,
    pub algorithms: Vec<Algorithm>,
    pub trials: usize,
    pub master_seed: u64,
    pub p: usize,
    pub mode: Mode,
    pub coeff_range: i64,
    /// Worker threads for trials; 1 runs them sequentially.
    pub threads: usize,
    pub budget: GcdBudget,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            grid: vec![(2, 2, 1)],
            profiles: vec![(0.9, 0.9)],
            algorithms: vec![Algorithm::Ef],
            trials: 1,
            master_seed: 1,
            p: 1,
            mode: Mode::Complex,
            coeff_range: 9,
            threads: 1,
            budget: GcdBudget::UNLIMITED,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub m: usize,
    pub n: usize,
    pub d: u32,
    pub sp1: f64,
    pub sp2: f64,
    pub algorithm: Algorithm,
    pub mean_seconds: f64,
    pub trials: usize,
    /// Number of trials whose solver returned an error.
    pub errors: usize,
}

impl BenchRow {
    pub fn complete(&self) -> bool {
        self.errors == 0
    }
}

/// Times every algorithm on the same instances of every cell and profile.
pub fn bench_run(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.trials == 0 {
        return Err(WmpError::Spec("at least one trial is required".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
        .map_err(|e| WmpError::Spec(e.to_string()))?;
    let mut rows = Vec::new();
    for (ci, &(m, n, d)) in cfg.grid.iter().enumerate() {
        for (pi, &(sp1, sp2)) in cfg.profiles.iter().enumerate() {
            let instances: Result<Vec<Instance>> = (0..cfg.trials)
                .map(|t| {
                    gen_instance(&GenSpec {
                        m,
                        n,
                        d,
                        p: cfg.p,
                        mode: cfg.mode,
                        target_sp1: sp1,
                        target_sp2: sp2,
                        coeff_range: cfg.coeff_range,
                        seed: derive_seed(cfg.master_seed, &[ci as u64, pi as u64, t as u64]),
                    })
                })
                .collect();
            let instances = instances?;
            for &alg in &cfg.algorithms {
                let time_one = |inst: &Instance| {
                    let start = Instant::now();
                    let ok = alg.solve(&inst.a, &inst.m, &inst.n, cfg.budget).is_ok();
                    (start.elapsed().as_secs_f64(), ok)
                };
                let timings: Vec<(f64, bool)> = if cfg.threads > 1 {
                    pool.install(|| instances.par_iter().map(time_one).collect())
                } else {
                    instances.iter().map(time_one).collect()
                };
                let total: f64 = timings.iter().map(|t| t.0).sum();
                rows.push(BenchRow {
                    m,
                    n,
                    d,
                    sp1,
                    sp2,
                    algorithm: alg,
                    mean_seconds: total / cfg.trials as f64,
                    trials: cfg.trials,
                    errors: timings.iter().filter(|t| !t.1).count(),
                });
            }
        }
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| WmpError::Schema(e.to_string());
    w.write_record(["m", "n", "d", "sp1", "sp2", "algorithm", "mean_seconds", "trials", "errors"])
        .map_err(err)?;
    for r in rows {
        w.write_record([
            r.m.to_string(),
            r.n.to_string(),
            r.d.to_string(),
            r.sp1.to_string(),
            r.sp2.to_string(),
            r.algorithm.as_str().to_string(),
            format!("{:.6}", r.mean_seconds),
            r.trials.to_string(),
            r.errors.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| WmpError::Schema(e.to_string()))?;
    Ok(())
}
