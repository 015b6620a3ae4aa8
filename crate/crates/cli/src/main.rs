use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wmp_core::algorithm::Algorithm;
use wmp_core::genbench::{bench_run, gen_instance, write_csv, BenchConfig, GenSpec};
use wmp_core::io::{self, PointError, Problem, VerifyJson};
use wmp_core::matrix::PolyMatrix;
use wmp_core::polynomial::ninv_polynomial;
use wmp_core::ring::{format_rational, GcdBudget, Mode};
use wmp_core::verify::{self, penrose_check, penrose_check_zy};
use wmp_core::WmpError;

const EXIT_FAILURE: u8 = 1;
const EXIT_SCHEMA: u8 = 2;
const EXIT_WEIGHT: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "wmpinv", version, about = "Exact weighted Moore-Penrose inverses of polynomial matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute A^+_{M,N} for a problem file.
    Wpinv(WpinvArgs),
    /// Inverses of the leading principal blocks of N.
    Ninv(NinvArgs),
    /// Sparsity numbers of a matrix (or of A in a problem file).
    Sparsity(SparsityArgs),
    /// Generate a random problem.
    Gen(GenArgs),
    /// Time solvers over a grid of random problems.
    Bench(BenchArgs),
    /// Check a candidate inverse against a problem.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BudgetArg {
    /// GCD work budget; past it only monomial factors are cancelled.
    #[arg(long, env = "WMP_GCD_BUDGET")]
    budget: Option<u64>,
}

impl BudgetArg {
    fn budget(&self) -> GcdBudget {
        GcdBudget { max_work: self.budget }
    }
}

#[derive(Args)]
struct WpinvArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value = "ef")]
    algorithm: Algorithm,
    /// Check all four Penrose equations; exit 4 if any fails.
    #[arg(long)]
    verify: bool,
    /// Print Z and Y in readable form.
    #[arg(long)]
    pretty: bool,
    /// Leave the entry-wise quotient X out of the result file.
    #[arg(long)]
    omit_x: bool,
    /// Warn when M or N is not positive definite at this many random points.
    #[arg(long, default_value_t = 0)]
    pd_points: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    budget: BudgetArg,
}

#[derive(Args)]
struct NinvArgs {
    /// Problem file (its N is used) or a bare matrix file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    pretty: bool,
}

#[derive(Args)]
struct SparsityArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    d: u32,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value = "complex")]
    mode: Mode,
    #[arg(long, default_value_t = 1.0)]
    sp1: f64,
    #[arg(long, default_value_t = 1.0)]
    sp2: f64,
    #[arg(long, default_value_t = 9)]
    coeff_range: i64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    /// CSV destination; the configuration is echoed to `<output>.json`.
    #[arg(long)]
    output: PathBuf,
    /// Cells as `MxNxD`, comma separated.
    #[arg(long, default_value = "2x2x1", value_delimiter = ',')]
    grid: Vec<String>,
    /// First sparse numbers, paired with `--sp2`.
    #[arg(long, default_value = "0.9", value_delimiter = ',')]
    sp1: Vec<f64>,
    #[arg(long, default_value = "0.9", value_delimiter = ',')]
    sp2: Vec<f64>,
    #[arg(long, default_value = "ef", value_delimiter = ',')]
    algorithm: Vec<Algorithm>,
    #[arg(long, default_value_t = 15)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    p: usize,
    #[arg(long, default_value = "complex")]
    mode: Mode,
    #[arg(long, default_value_t = 9)]
    coeff_range: i64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[command(flatten)]
    budget: BudgetArg,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Result file or rational matrix file holding X.
    #[arg(long)]
    candidate: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Random conjugate-consistent points for the numeric oracle.
    #[arg(long, default_value_t = 5)]
    points: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_problem(path: &Path) -> Result<Problem> {
    Ok(io::problem_from_str(&read(path)?)?)
}

/// A problem's `A` (or `N` when `weight`), or a bare matrix file.
fn load_matrix(path: &Path, weight: bool) -> Result<PolyMatrix> {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| WmpError::Schema(e.to_string()))?;
    if value.get("A").is_some() {
        let p = io::problem_from_str(&text)?;
        Ok(if weight { p.n } else { p.a })
    } else {
        Ok(io::matrix_from_str(&text)?)
    }
}

fn check_weights(p: &Problem) -> Result<(), WmpError> {
    for (name, w) in [("M", &p.m), ("N", &p.n)] {
        if let Some((row, col)) = w.hermitian_violation() {
            return Err(WmpError::NotHermitian {
                name: name.into(),
                row,
                col,
            });
        }
    }
    Ok(())
}

fn wpinv(args: &WpinvArgs) -> Result<u8> {
    let problem = load_problem(&args.input)?;
    check_weights(&problem)?;
    if args.pd_points > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        for (name, w) in [("M", &problem.m), ("N", &problem.n)] {
            for warning in verify::weight_spot_check(name, w, args.pd_points, &mut rng) {
                eprintln!("warning: {warning}");
            }
        }
    }
    let result = args.algorithm.solve(&problem.a, &problem.m, &problem.n, args.budget.budget())?;
    let verified = if args.verify {
        penrose_check_zy(&problem.a, &problem.m, &problem.n, &result.z, &result.y)?.all()
    } else {
        false
    };
    let json = io::result_to_json(&result, args.algorithm.as_str(), verified, !args.omit_x);
    if args.pretty {
        println!("Y = {}", result.y.pretty());
        println!("Z =");
        print!("{}", result.z);
    }
    if args.output.is_some() || !args.pretty {
        emit(args.output.as_deref(), &io::to_pretty_json(&json))?;
    }
    if args.verify && !verified {
        eprintln!("verification failed: the result does not satisfy all four Penrose equations");
        return Ok(EXIT_VERIFY);
    }
    Ok(0)
}

fn ninv(args: &NinvArgs) -> Result<u8> {
    let n = load_matrix(&args.input, true)?;
    if !n.is_square() {
        return Err(WmpError::Schema(format!("N is {}x{}, not square", n.rows(), n.cols())).into());
    }
    if let Some((row, col)) = n.hermitian_violation() {
        return Err(WmpError::NotHermitian {
            name: "N".into(),
            row,
            col,
        }
        .into());
    }
    let traces = ninv_polynomial(&n)?;
    if args.pretty {
        for (k, t) in traces.iter().enumerate() {
            println!("k = {}: N_under = {}", k + 1, t.n_under.pretty());
            print!("{}", t.n_over);
        }
    }
    if args.output.is_some() || !args.pretty {
        emit(args.output.as_deref(), &io::to_pretty_json(&io::ninv_to_json(n.space(), &traces)))?;
    }
    Ok(0)
}

fn sparsity(args: &SparsityArgs) -> Result<u8> {
    let a = load_matrix(&args.input, false)?;
    let rep = verify::sparsity(&a);
    println!("sp1={}/{} ({})", rep.nonzero_entries, rep.cells, format_rational(&rep.sp1));
    println!(
        "sp2={}/{} ({})",
        rep.nonzero_coefficients,
        rep.coefficient_slots,
        format_rational(&rep.sp2)
    );
    if let Some(out) = &args.output {
        emit(Some(out), &io::to_pretty_json(&rep))?;
    }
    Ok(0)
}

fn gen(args: &GenArgs) -> Result<u8> {
    let spec = GenSpec {
        m: args.m,
        n: args.n,
        d: args.d,
        p: args.p,
        mode: args.mode,
        target_sp1: args.sp1,
        target_sp2: args.sp2,
        coeff_range: args.coeff_range,
        seed: args.seed,
    };
    let inst = gen_instance(&spec)?;
    let problem = Problem {
        a: inst.a,
        m: inst.m,
        n: inst.n,
    };
    emit(Some(&args.output), &io::to_pretty_json(&io::problem_to_json(&problem)))?;
    Ok(0)
}

fn parse_cell(s: &str) -> Result<(usize, usize, u32), WmpError> {
    let parts: Vec<&str> = s.trim().split('x').collect();
    let bad = || WmpError::Schema(format!("grid cell `{s}` is not of the form MxNxD"));
    if parts.len() != 3 {
        return Err(bad());
    }
    Ok((
        parts[0].parse().map_err(|_| bad())?,
        parts[1].parse().map_err(|_| bad())?,
        parts[2].parse().map_err(|_| bad())?,
    ))
}

fn bench(args: &BenchArgs) -> Result<u8> {
    if args.sp1.len() != args.sp2.len() {
        return Err(WmpError::Schema("--sp1 and --sp2 need the same number of values".into()).into());
    }
    let grid: Result<Vec<_>, _> = args.grid.iter().map(|c| parse_cell(c)).collect();
    let cfg = BenchConfig {
        grid: grid?,
        profiles: args.sp1.iter().copied().zip(args.sp2.iter().copied()).collect(),
        algorithms: args.algorithm.clone(),
        trials: args.trials,
        master_seed: args.seed,
        p: args.p,
        mode: args.mode,
        coeff_range: args.coeff_range,
        threads: args.threads,
        budget: args.budget.budget(),
    };
    let rows = bench_run(&cfg)?;
    let file = std::fs::File::create(&args.output).with_context(|| format!("cannot write {}", args.output.display()))?;
    write_csv(&rows, file)?;
    let mut sidecar = args.output.clone().into_os_string();
    sidecar.push(".json");
    emit(Some(Path::new(&sidecar)), &io::to_pretty_json(&cfg))?;
    let incomplete = rows.iter().filter(|r| !r.complete()).count();
    if incomplete > 0 {
        eprintln!("warning: {incomplete} cell(s) had solver errors");
    }
    Ok(0)
}

fn verify_cmd(args: &VerifyArgs) -> Result<u8> {
    let problem = load_problem(&args.input)?;
    let x = io::candidate_from_str(&read(&args.candidate)?)?;
    let report = penrose_check(&problem.a, &problem.m, &problem.n, &x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut points = Vec::new();
    for _ in 0..args.points {
        let pt = verify::random_point(problem.space(), &mut rng);
        let err = match verify::numeric_oracle(&problem.a, &problem.m, &problem.n, &pt) {
            Ok(oracle) => match x.eval(&pt) {
                Ok(val) => Some(verify::relative_error(&verify::to_numeric(&val), &oracle)),
                Err(_) => None,
            },
            Err(WmpError::OracleUnavailable(_)) => None,
            Err(e) => return Err(e.into()),
        };
        points.push(PointError {
            point: pt.iter().map(io::ValueJson::from).collect(),
            max_rel_err: err,
        });
    }
    emit(args.output.as_deref(), &io::to_pretty_json(&VerifyJson::new(report, points)))?;
    if !report.all() {
        eprintln!("verification failed: {report:?}");
        return Ok(EXIT_VERIFY);
    }
    Ok(0)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<WmpError>() {
        Some(WmpError::Schema(_) | WmpError::Dimension(_) | WmpError::VarSpace { .. } | WmpError::Spec(_)) => EXIT_SCHEMA,
        Some(WmpError::NotHermitian { .. } | WmpError::WeightNotPositiveDefinite(_) | WmpError::ZeroDenominator) => {
            EXIT_WEIGHT
        }
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Wpinv(a) => wpinv(a),
        Command::Ninv(a) => ninv(a),
        Command::Sparsity(a) => sparsity(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench(a),
        Command::Verify(a) => verify_cmd(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
