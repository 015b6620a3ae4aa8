use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wmp_core::algorithm::Algorithm;
use wmp_core::genbench::{bench_run, derive_seed, gen_instance, gen_pd_matrix, BenchConfig, GenSpec, Instance};
use wmp_core::matrix::{CoeffMatrix, ConstMatrix, DensePolyMatrix, EffMatrix, EffPrimeMatrix, PolyMatrix, PolyStructure};
use wmp_core::polynomial::{cancel_common, ninv_polynomial, PinvResult};
use wmp_core::rational::{ninv_rational, RatMatrix};
use wmp_core::ring::{GaussianRational, GcdBudget, Mode, MultiIndex, Poly, VarSpace};
use wmp_core::sample;
use wmp_core::verify::{numeric_oracle, penrose_check_zy, random_point, relative_error, sparsity, to_numeric};

const SAMPLE_PATH_LIMIT: Duration = Duration::from_secs(10 * 60);
const SAMPLE_POINTS: usize = 10;
const INSTANCES: usize = 50;
const ORACLE_POINTS: usize = 3;
const ORACLE_REL_TOL: f64 = 1e-8;
const ORACLE_LIMIT: Duration = Duration::from_secs(15 * 60);
const NINV_MATRICES: usize = 20;
const TREND_TRIALS: usize = 15;
const TREND_PROFILES: [(f64, f64); 4] = [(0.9, 0.9), (0.7, 0.5), (1.0, 0.2), (0.2, 0.2)];
const PROPERTY_CASES: u32 = 200;
const SEED: u64 = 20_240_917;

struct Outcome {
    label: &'static str,
    pass: bool,
    detail: String,
}

fn line(o: &Outcome) {
    println!("[{}] {}: {}", if o.pass { "PASS" } else { "FAIL" }, o.label, o.detail);
}

/// A point at which `den` does not vanish.
fn usable_point(space: VarSpace, den: &Poly, rng: &mut ChaCha8Rng) -> Vec<GaussianRational> {
    loop {
        let pt = random_point(space, rng);
        if !den.eval(&pt).expect("full point").is_zero() {
            return pt;
        }
    }
}

/// Conjugate-consistent point with real and imaginary parts `a / b`, `|a| <= b <= 7`,
/// keeping the floating-point reference well conditioned.
fn small_point(space: VarSpace, den: &Poly, rng: &mut ChaCha8Rng) -> Vec<GaussianRational> {
    let part = |rng: &mut ChaCha8Rng| {
        let b = rng.gen_range(1..=7);
        GaussianRational::from_frac(rng.gen_range(-b..=b), b)
    };
    loop {
        let values: Vec<GaussianRational> = (0..space.p())
            .map(|_| {
                let re = part(rng);
                match space.mode() {
                    Mode::Real => re,
                    Mode::Complex => &re + &(&GaussianRational::i() * &part(rng)),
                }
            })
            .collect();
        let pt = space.conjugate_consistent_point(&values).expect("p values");
        if !den.eval(&pt).expect("full point").is_zero() {
            return pt;
        }
    }
}

fn sample_solutions() -> Vec<(Algorithm, Result<PinvResult, String>, Duration)> {
    let (a, m, n) = (sample::a(), sample::m(), sample::n());
    Algorithm::ALL
        .into_iter()
        .map(|alg| {
            let t = Instant::now();
            let r = alg.solve(&a, &m, &n, GcdBudget::UNLIMITED).map_err(|e| e.to_string());
            (alg, r, t.elapsed())
        })
        .collect()
}

fn criterion_1a(sols: &[(Algorithm, Result<PinvResult, String>, Duration)]) -> Outcome {
    let (a, m, n) = (sample::a(), sample::m(), sample::n());
    let mut pass = true;
    let mut parts = Vec::new();
    for (alg, r, t) in sols {
        let ok = match r {
            Ok(r) => penrose_check_zy(&a, &m, &n, &r.z, &r.y).map(|rep| rep.all()).unwrap_or(false),
            Err(_) => false,
        };
        let in_time = *t <= SAMPLE_PATH_LIMIT;
        pass &= ok && in_time;
        parts.push(format!("{alg} {} {:.1}s", if ok { "ok" } else { "violated" }, t.as_secs_f64()));
    }
    Outcome {
        label: "1a worked example, four Penrose equations on every path",
        pass,
        detail: parts.join(", "),
    }
}

fn criterion_1b(sols: &[(Algorithm, Result<PinvResult, String>, Duration)]) -> Outcome {
    let printed = RatMatrix::from_quotient(&sample::printed_z(), &sample::printed_y()).expect("nonzero Y");
    let source = sample::printed_x_source();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut den = sample::printed_y();
    for (_, r, _) in sols {
        if let Ok(r) = r {
            den = &den * &r.y;
        }
    }
    let points: Vec<_> = (0..SAMPLE_POINTS).map(|_| usable_point(sample::space(), &den, &mut rng)).collect();
    let printed_vals: Vec<ConstMatrix> = points.iter().map(|p| printed.eval(p).expect("nonzero")).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for (alg, r, _) in sols {
        let agree = match r {
            Ok(r) => points
                .iter()
                .zip(&printed_vals)
                .filter(|(p, v)| r.x.eval(p).map(|x| &x == *v).unwrap_or(false))
                .count(),
            Err(_) => 0,
        };
        pass &= agree == points.len();
        parts.push(format!("{alg} {agree}/{}", points.len()));
    }
    let inverse_of_b = points
        .iter()
        .zip(&printed_vals)
        .filter(|(p, v)| {
            let b = source.eval(p).expect("full point");
            b.mul(v) == ConstMatrix::identity(b.rows())
        })
        .count();
    Outcome {
        label: "1b worked example, equality with the printed X",
        pass,
        detail: format!(
            "points agreeing: {}; printed X equals inv(B) for the matrix B of sample::printed_x_source at {inverse_of_b}/{} points",
            parts.join(", "),
            points.len()
        ),
    }
}

fn random_instances() -> Vec<(GenSpec, Instance)> {
    let mut out = Vec::new();
    let mut k = 0u64;
    while out.len() < INSTANCES {
        k += 1;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(SEED, &[k]));
        let mode = if out.len() % 2 == 0 { Mode::Complex } else { Mode::Real };
        let sp1 = [0.5, 0.75, 1.0][rng.gen_range(0..3)];
        let spec = GenSpec {
            m: rng.gen_range(1..=4),
            n: rng.gen_range(1..=4),
            d: rng.gen_range(1..=2),
            p: 1,
            mode,
            target_sp1: sp1,
            target_sp2: sp1 * rng.gen_range(0.2..=1.0),
            coeff_range: 5,
            seed: derive_seed(SEED, &[k, 1]),
        };
        if let Ok(inst) = gen_instance(&spec) {
            out.push((spec, inst));
        }
    }
    out
}

fn criterion_2(instances: &[(GenSpec, Instance)]) -> (Outcome, Vec<Option<PinvResult>>) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 2);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    let mut results = Vec::new();
    for (k, (_, inst)) in instances.iter().enumerate() {
        let r = match Algorithm::Ef.solve(&inst.a, &inst.m, &inst.n, GcdBudget::UNLIMITED) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("#{k}: {e}"));
                results.push(None);
                continue;
            }
        };
        for _ in 0..ORACLE_POINTS {
            let pt = small_point(inst.a.space(), &r.y, &mut rng);
            let x = to_numeric(&r.x.eval(&pt).expect("Y nonzero"));
            match numeric_oracle(&inst.a, &inst.m, &inst.n, &pt) {
                Ok(o) => {
                    let err = relative_error(&x, &o);
                    worst = worst.max(err);
                    if err.is_nan() || err > ORACLE_REL_TOL {
                        failures.push(format!("#{k}: relative error {err:.3e}"));
                    }
                }
                Err(e) => failures.push(format!("#{k}: {e}")),
            }
        }
        results.push(Some(r));
    }
    let elapsed = start.elapsed();
    let in_time = elapsed <= ORACLE_LIMIT;
    let outcome = Outcome {
        label: "2 numeric oracle on random instances",
        pass: failures.is_empty() && in_time,
        detail: format!(
            "{} instances x {ORACLE_POINTS} points, worst relative error {worst:.2e} (tolerance {ORACLE_REL_TOL:e}), {:.0}s of {}s allowed{}",
            instances.len(),
            elapsed.as_secs_f64(),
            ORACLE_LIMIT.as_secs(),
            if failures.is_empty() { String::new() } else { format!("; failures: {}", failures.join("; ")) }
        ),
    };
    (outcome, results)
}

fn criterion_3(instances: &[(GenSpec, Instance)], reference: &[Option<PinvResult>]) -> Outcome {
    let start = Instant::now();
    let mut mismatches = Vec::new();
    for (k, ((_, inst), ef)) in instances.iter().zip(reference).enumerate() {
        let Some(ef) = ef else {
            mismatches.push(format!("#{k}: ef failed"));
            continue;
        };
        for alg in Algorithm::ALL.into_iter().filter(|a| *a != Algorithm::Ef) {
            match alg.solve(&inst.a, &inst.m, &inst.n, GcdBudget::UNLIMITED) {
                Ok(r) if r.z == ef.z && r.y == ef.y => {}
                Ok(_) => mismatches.push(format!("#{k}: {alg} differs")),
                Err(e) => mismatches.push(format!("#{k}: {alg}: {e}")),
            }
        }
    }
    Outcome {
        label: "3 identical normalized X on all five paths",
        pass: mismatches.is_empty(),
        detail: format!(
            "{} instances, {:.0}s{}",
            instances.len(),
            start.elapsed().as_secs_f64(),
            if mismatches.is_empty() { String::new() } else { format!("; {}", mismatches.join("; ")) }
        ),
    }
}

/// Laplace expansion along the first row.
fn det(a: &PolyMatrix) -> Poly {
    let n = a.rows();
    if n == 1 {
        return a.get(0, 0).clone();
    }
    let mut acc = Poly::zero(a.space());
    for j in 0..n {
        let keep: Vec<usize> = (0..n).filter(|&c| c != j).collect();
        let minor = PolyMatrix::from_fn(a.space(), n - 1, n - 1, |r, c| a.get(r + 1, keep[c]).clone());
        let term = a.get(0, j) * &det(&minor);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn ninv_fraction_free<S: PolyStructure>(n: &PolyMatrix) -> Result<(), String> {
    let traces = ninv_polynomial(&S::from_poly_matrix(n)).map_err(|e| e.to_string())?;
    for (k, t) in traces.iter().enumerate() {
        let nk = n.block(0..k + 1, 0..k + 1).expect("in range");
        let lhs = nk.mul(&t.n_over).expect("square");
        if lhs != PolyMatrix::identity(n.space(), k + 1).scale(&t.n_under).expect("scalar") {
            return Err(format!("N_k N_bar_k != N_under_k I at k = {}", k + 1));
        }
        if t.n_under != det(&nk) {
            return Err(format!("N_under_k != det N_k at k = {}", k + 1));
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 4);
    let mut problems = Vec::new();
    let mut shapes = Vec::new();
    let mut attempt = 0u64;
    for k in 0..NINV_MATRICES {
        let size = if k < 2 { 5 } else { rng.gen_range(1..=5) };
        let n = loop {
            attempt += 1;
            let sp1 = [0.5, 0.75, 1.0][rng.gen_range(0..3)];
            let spec = GenSpec {
                m: size,
                n: size,
                d: 1,
                p: 1,
                mode: if k % 2 == 0 { Mode::Complex } else { Mode::Real },
                target_sp1: sp1,
                target_sp2: sp1 * rng.gen_range(0.3..=1.0),
                coeff_range: 4,
                seed: derive_seed(SEED, &[4, attempt]),
            };
            if let Ok(n) = gen_pd_matrix(&spec) {
                break n;
            }
        };
        shapes.push(format!("{size}x{size}/d{}", n.degree_vector().into_iter().max().unwrap_or(0)));
        let rat = RatMatrix::from_poly_matrix(&n);
        match ninv_rational(&rat) {
            Ok(invs) => {
                for (j, inv) in invs.iter().enumerate() {
                    let nk = rat.block(0..j + 1, 0..j + 1).expect("in range");
                    if nk.mul(inv).expect("square") != RatMatrix::identity(n.space(), j + 1) {
                        problems.push(format!("#{k}: rational inverse wrong at k = {}", j + 1));
                    }
                }
            }
            Err(e) => problems.push(format!("#{k}: {e}")),
        }
        for (name, res) in [
            ("ef", ninv_fraction_free::<PolyMatrix>(&n)),
            ("dense", ninv_fraction_free::<DensePolyMatrix>(&n)),
            ("eff", ninv_fraction_free::<EffMatrix>(&n)),
            ("eff-prime", ninv_fraction_free::<EffPrimeMatrix>(&n)),
        ] {
            if let Err(e) = res {
                problems.push(format!("#{k} {name}: {e}"));
            }
        }
    }
    Outcome {
        label: "4 leading principal inverses of random positive definite N",
        pass: problems.is_empty(),
        detail: format!(
            "{NINV_MATRICES} matrices ({}), rational and fraction-free in four structures{}",
            shapes.join(" "),
            if problems.is_empty() { String::new() } else { format!("; {}", problems.join("; ")) }
        ),
    }
}

fn criterion_5() -> Outcome {
    let cfg = BenchConfig {
        grid: vec![(3, 3, 2)],
        profiles: TREND_PROFILES.to_vec(),
        algorithms: vec![Algorithm::Ef],
        trials: TREND_TRIALS,
        master_seed: SEED,
        p: 1,
        mode: Mode::Complex,
        coeff_range: 9,
        threads: 1,
        budget: GcdBudget::UNLIMITED,
    };
    match bench_run(&cfg) {
        Ok(rows) => {
            let means: Vec<f64> = rows.iter().map(|r| r.mean_seconds).collect();
            let errors: usize = rows.iter().map(|r| r.errors).sum();
            let monotone = means.windows(2).all(|w| w[1] <= w[0]);
            let shown: Vec<String> = rows
                .iter()
                .map(|r| format!("({}, {}) {:.2}s", r.sp1, r.sp2, r.mean_seconds))
                .collect();
            Outcome {
                label: "5 ef runtime non-increasing as sparsity grows",
                pass: monotone && errors == 0,
                detail: format!("3x3, d = 2, {TREND_TRIALS} trials: {}; solver errors {errors}", shown.join(" >= ")),
            }
        }
        Err(e) => Outcome {
            label: "5 ef runtime non-increasing as sparsity grows",
            pass: false,
            detail: e.to_string(),
        },
    }
}

fn space_strategy() -> impl Strategy<Value = VarSpace> {
    prop_oneof![Just(VarSpace::complex(1)), Just(VarSpace::real(2)), Just(VarSpace::complex(2))]
}

fn poly_in(space: VarSpace) -> impl Strategy<Value = Poly> {
    let vars = space.total_vars();
    let complex = space.mode() == Mode::Complex;
    prop::collection::vec(
        (prop::collection::vec(0u32..3, vars), -6i64..=6, -6i64..=6, 1i64..=3),
        0..5,
    )
    .prop_map(move |terms| {
        let terms = terms.into_iter().map(|(e, re, im, den)| {
            let im = if complex { im } else { 0 };
            let c = &GaussianRational::from_ints(re, im) * &GaussianRational::from_frac(1, den);
            (MultiIndex::from_slice(&e), c)
        });
        Poly::from_terms(space, terms).expect("valid terms")
    })
}

fn poly_triple() -> impl Strategy<Value = (Poly, Poly, Poly)> {
    space_strategy().prop_flat_map(|s| (poly_in(s), poly_in(s), poly_in(s)))
}

fn matrix_in(space: VarSpace, rows: usize, cols: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(poly_in(space), rows * cols)
        .prop_map(move |e| PolyMatrix::new(space, rows, cols, e).expect("shape"))
}

fn property(name: &str, cases: u32, run: impl FnOnce(&mut TestRunner) -> Result<(), String>) -> (String, bool) {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    match run(&mut runner) {
        Ok(()) => (format!("{name} {cases}/{cases}"), true),
        Err(e) => (format!("{name} failed: {e}"), false),
    }
}

fn criterion_6() -> Outcome {
    let n = PROPERTY_CASES;
    let checks = vec![
        property("ring axioms", n, |r| {
            r.run(&poly_triple(), |(a, b, c)| {
                let one = Poly::one(a.space());
                let zero = Poly::zero(a.space());
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a + &zero, a.clone());
                prop_assert_eq!(&a * &one, a.clone());
                prop_assert!((&a - &a).is_zero());
                Ok(())
            })
            .map_err(|e| e.to_string())
        }),
        property("conjugation", n, |r| {
            let strat = space_strategy().prop_flat_map(|s| (poly_in(s), poly_in(s), matrix_in(s, 2, 3), matrix_in(s, 3, 2)));
            r.run(&strat, |(a, b, x, y)| {
                prop_assert_eq!(a.conj().conj(), a.clone());
                prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
                prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
                prop_assert_eq!(x.mul(&y).unwrap().conj_transpose(), y.conj_transpose().mul(&x.conj_transpose()).unwrap());
                prop_assert_eq!(x.conj_transpose().conj_transpose(), x.clone());
                Ok(())
            })
            .map_err(|e| e.to_string())
        }),
        property("evaluation homomorphism", n, |r| {
            let strat = space_strategy().prop_flat_map(|s| (poly_in(s), poly_in(s), any::<u64>()));
            r.run(&strat, |(a, b, seed)| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pt = random_point(a.space(), &mut rng);
                let (ea, eb) = (a.eval(&pt).unwrap(), b.eval(&pt).unwrap());
                prop_assert_eq!((&a + &b).eval(&pt).unwrap(), &ea + &eb);
                prop_assert_eq!((&a * &b).eval(&pt).unwrap(), &ea * &eb);
                prop_assert_eq!(a.conj().eval(&pt).unwrap(), ea.conj());
                Ok(())
            })
            .map_err(|e| e.to_string())
        }),
        property("cancel_common preserves Z/Y", n, |r| {
            let strat = space_strategy().prop_flat_map(|s| (matrix_in(s, 2, 2), poly_in(s), poly_in(s)));
            r.run(&strat, |(z, y, f)| {
                prop_assume!(!y.is_zero() && !f.is_zero());
                let (zf, yf) = (z.scale(&f).unwrap(), &y * &f);
                let (z2, y2, complete) = cancel_common(&zf, &yf, GcdBudget::UNLIMITED).unwrap();
                prop_assert!(complete);
                prop_assert_eq!(z2.scale(&yf).unwrap(), zf.scale(&y2).unwrap());
                prop_assert!(y2.total_degree() <= y.total_degree());
                Ok(())
            })
            .map_err(|e| e.to_string())
        }),
        property("sp1 and sp2 in [0, 1]", n, |r| {
            let strat = space_strategy().prop_flat_map(|s| (1usize..4, 1usize..4).prop_flat_map(move |(m, k)| matrix_in(s, m, k)));
            r.run(&strat, |a| {
                let rep = sparsity(&a);
                prop_assert!((0.0..=1.0).contains(&rep.sp1_f64()));
                prop_assert!((0.0..=1.0).contains(&rep.sp2_f64()));
                Ok(())
            })
            .map_err(|e| e.to_string())
        }),
    ];
    Outcome {
        label: "6 randomized property suites",
        pass: checks.iter().all(|(_, ok)| *ok),
        detail: checks.into_iter().map(|(s, _)| s).collect::<Vec<_>>().join(", "),
    }
}

fn main() -> ExitCode {
    let mut outcomes = Vec::new();
    let mut record = |o: Outcome| {
        line(&o);
        outcomes.push(o.pass);
    };

    let sols = sample_solutions();
    record(criterion_1a(&sols));
    record(criterion_1b(&sols));

    let instances = random_instances();
    let (c2, reference) = criterion_2(&instances);
    record(c2);
    record(criterion_3(&instances, &reference));

    record(criterion_4());
    record(criterion_5());
    record(criterion_6());

    let failed = outcomes.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", outcomes.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
