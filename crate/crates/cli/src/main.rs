//! `pi2`: expansion coefficients, asymptotic evaluation, the boundary-value
//! solver, identity checks and regularized integrals from the command line.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pi2_core::asym::{Asymptotics, Evaluation};
use pi2_core::branch::{AdmissibleMu, Branch};
use pi2_core::expansion::shared_table;
use pi2_core::integrals::{total_integral, Quantity};
use pi2_core::reproduce::{run_suite, Suite};
use pi2_core::solver::{read_csv, solve_bvp, verify_identities, write_csv, BoundaryKind, SolverConfig};
use pi2_core::tolerances::{IntegralBudgets, IDENTITY_MAX};

#[derive(Parser)]
#[command(name = "pi2", version, about = "Tritronquee solution of the second Painleve I equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalQuantity {
    U,
    Ux,
    H1,
    H2,
}

#[derive(Clone, Copy, ValueEnum)]
enum IntegralQuantity {
    U,
    H1,
    U2,
    Xu,
}

impl From<IntegralQuantity> for Quantity {
    fn from(q: IntegralQuantity) -> Self {
        match q {
            IntegralQuantity::U => Quantity::U,
            IntegralQuantity::H1 => Quantity::H1,
            IntegralQuantity::U2 => Quantity::U2,
            IntegralQuantity::Xu => Quantity::Xu,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Pinned,
    Projected,
}

impl From<BoundaryArg> for BoundaryKind {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Pinned => BoundaryKind::Pinned,
            BoundaryArg::Projected => BoundaryKind::Projected,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Thm21,
    Cor21,
    Thm22,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Thm21 => Suite::Thm21,
            SuiteArg::Cor21 => Suite::Cor21,
            SuiteArg::Thm22 => Suite::Thm22,
        }
    }
}

/// Grid options shared by `solve`, `verify` and `integrate`.
#[derive(clap::Args)]
struct GridArgs {
    /// Grid points (odd, at least 401).
    #[arg(long, default_value_t = 4001)]
    n: usize,
    /// Newton tolerance on the max-norm residual.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Boundary conditions.
    #[arg(long, value_enum, default_value_t = BoundaryArg::Projected)]
    boundary: BoundaryArg,
}

impl GridArgs {
    fn config(&self, t: f64, half_width: f64) -> SolverConfig {
        SolverConfig { n: self.n, newton_tol: self.tol, boundary: self.boundary.into(), ..SolverConfig::at(t, half_width) }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Expansion coefficients e_k as exact rational functions of z, or
    /// evaluated at a given mu.
    Coeffs {
        #[arg(long, value_enum, default_value_t = BranchArg::Plus)]
        branch: BranchArg,
        #[arg(long, default_value_t = 1)]
        kmax: usize,
        /// Largest accepted kmax.
        #[arg(long, default_value_t = 6)]
        kmax_cap: usize,
        /// Evaluate at this mu instead of printing exact coefficients.
        #[arg(long, allow_hyphen_values = true)]
        mu: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Truncated large-|x| expansion at (x, t).
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 2)]
        kmax: usize,
        #[arg(long, value_enum, default_value_t = EvalQuantity::U)]
        quantity: EvalQuantity,
    },
    /// Solve the boundary-value problem and write the grid as CSV.
    Solve {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        /// Half-width of the interval.
        #[arg(long = "L", default_value_t = 12.0)]
        half_width: f64,
        #[command(flatten)]
        grid: GridArgs,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Residuals of the differential identities and KdV at time t.
    Verify {
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        /// Time step of the central differences.
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long = "L", default_value_t = 12.0)]
        half_width: f64,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Regularized total integral of u, H1, u^2 or x u.
    Integrate {
        #[arg(long, value_enum)]
        quantity: IntegralQuantity,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        /// Half-width used when solving; ignored with --sol.
        #[arg(long = "L", default_value_t = 16.0)]
        half_width: f64,
        /// Number of e_k terms in the tail correction (default: 0 for H1, 1 otherwise).
        #[arg(long)]
        tail_order: Option<usize>,
        /// Previously written solution grid.
        #[arg(long)]
        sol: Option<PathBuf>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Run one suite of reproduction checks.
    Reproduce {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn main() -> ExitCode {
    precision_warning();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn precision_warning() {
    if let Ok(bits) = std::env::var("PI2_PRECISION_BITS") {
        match bits.trim().parse::<u32>() {
            Ok(b) if b <= 64 => {}
            Ok(b) => eprintln!("warning: PI2_PRECISION_BITS={b} requested; numeric evaluation uses 64-bit floats"),
            Err(_) => eprintln!("warning: ignoring PI2_PRECISION_BITS={bits:?}"),
        }
    }
}

fn print_json(v: &Value) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

/// Returns `Ok(false)` when a budgeted check failed.
fn run(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Coeffs { branch, kmax, kmax_cap, mu, format } => {
            if kmax == 0 || kmax > kmax_cap {
                bail!("kmax must lie in 1..={kmax_cap}");
            }
            coeffs(branch.into(), kmax, mu, format)?;
            Ok(true)
        }
        Command::Eval { x, t, kmax, quantity } => {
            let asym = Asymptotics::new(kmax)?;
            let ev = match quantity {
                EvalQuantity::U => asym.u_terms(x, t)?,
                EvalQuantity::Ux => {
                    let value = asym.ux_full(x, t)?;
                    Evaluation { point: asym.point(x, t)?, value, terms: vec![value] }
                }
                EvalQuantity::H1 => asym.h1(x, t)?,
                EvalQuantity::H2 => asym.h2(x, t)?,
            };
            print_json(&serde_json::to_value(ev)?)?;
            Ok(true)
        }
        Command::Solve { t, half_width, grid, out } => {
            let sol = solve_bvp(&grid.config(t, half_width))?;
            match out {
                Some(path) => {
                    let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_csv(&sol, BufWriter::new(file))?;
                }
                None => write_csv(&sol, io::stdout().lock())?,
            }
            eprintln!(
                "solved t={t} on [-{half_width}, {half_width}] with {} nodes, {} Newton iterations, max residual {:.3e}",
                sol.len(),
                sol.newton_iterations,
                sol.max_residual()
            );
            Ok(true)
        }
        Command::Verify { t, dt, half_width, grid } => {
            let report = verify_identities(&grid.config(t, half_width), dt)?;
            let passed = report.max() <= IDENTITY_MAX;
            let mut v = serde_json::to_value(&report)?;
            v["budget"] = json!(IDENTITY_MAX);
            v["passed"] = json!(passed);
            print_json(&v)?;
            Ok(passed)
        }
        Command::Integrate { quantity, t, half_width, tail_order, sol, grid } => {
            let quantity: Quantity = quantity.into();
            let solution = match sol {
                Some(path) => {
                    let file = File::open(&path).with_context(|| format!("opening {}", path.display()))?;
                    read_csv(BufReader::new(file), t)?
                }
                None => solve_bvp(&grid.config(t, half_width))?,
            };
            let k = tail_order.unwrap_or_else(|| quantity.default_tail_order());
            let report = total_integral(quantity, t, &solution, k)?;
            let budgets = IntegralBudgets::default();
            let passed = match quantity {
                Quantity::H1 => {
                    report.total.abs() <= report.error_estimate && report.error_estimate <= budgets.h1_estimate
                }
                q => report.total.abs() <= budgets.for_quantity(q),
            };
            let mut v = serde_json::to_value(&report)?;
            v["budget"] = json!(budgets.for_quantity(quantity));
            v["passed"] = json!(passed);
            print_json(&v)?;
            Ok(passed)
        }
        Command::Reproduce { suite, format } => {
            let outcomes = run_suite(suite.into());
            let passed = outcomes.iter().all(|o| o.passed);
            match format {
                Format::Json => print_json(&serde_json::to_value(&outcomes)?)?,
                Format::Text => {
                    for o in &outcomes {
                        println!("{} criterion {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.title);
                        for c in &o.checks {
                            println!("    [{}] {} = {} (budget {})", if c.passed { "ok" } else { "x" }, c.name, c.measured, c.budget);
                        }
                    }
                }
            }
            Ok(passed)
        }
    }
}

fn coeffs(branch: Branch, kmax: usize, mu: Option<f64>, format: Format) -> Result<()> {
    let table = shared_table(branch, kmax)?;
    match mu {
        Some(mu) => {
            let z = branch.root(&AdmissibleMu::new(mu)?);
            let values = (1..=kmax).map(|k| Ok(table.e(k)?.eval_f64(z)?)).collect::<Result<Vec<f64>>>()?;
            match format {
                Format::Json => print_json(&json!({ "branch": branch, "mu": mu, "z": z, "e": values }))?,
                Format::Text => {
                    let name = if branch == Branch::Plus { "plus" } else { "minus" };
                    println!("branch {name} mu {mu} z {z:.17e}");
                    for (k, v) in values.iter().enumerate() {
                        println!("e{} = {v:.17e}", k + 1);
                    }
                }
            }
        }
        None => match format {
            Format::Json => print_json(&table.to_json())?,
            Format::Text => {
                for k in 1..=kmax {
                    println!("e{k} = {}", table.e(k)?);
                }
            }
        },
    }
    Ok(())
}
