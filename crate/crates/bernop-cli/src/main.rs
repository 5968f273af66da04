//! Thin command front-end over the bernop library: ingest a problem config,
//! run the requested computation, print a human summary, and emit CSV
//! artifacts. Exit code 1 means the configuration was rejected before any
//! numerics ran; exit code 2 means the numerics themselves failed.

mod config;
mod report;

use bernop::expr::IntegrableFunction;
use bernop::oracle::{error_report, eval_exact, rk_solve, uniform_grid};
use bernop::solver::{convergence_study, solve, IVProblem, Reference, SpectralSolution};
use bernop::{build_theta, gram_schmidt_basis, parse, project, ProductMode};
use clap::{Parser, Subcommand, ValueEnum};
use config::{check_order, load_config, ConfigError, ProblemConfig};
use report::{write_csv, CsvTarget};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "bernop",
    version,
    about = "Spectral solver for linear second-order initial value problems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// How product matrices treat a variable coefficient; `paper` truncates the
/// multiplier to the basis first (matching published reference solves),
/// `direct` integrates the products without pre-truncation.
#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum ProductModeArg {
    #[default]
    Paper,
    Direct,
}

impl From<ProductModeArg> for ProductMode {
    fn from(arg: ProductModeArg) -> ProductMode {
        match arg {
            ProductModeArg::Paper => ProductMode::Truncating,
            ProductModeArg::Direct => ProductMode::Direct,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve an initial value problem described by a config file
    Solve {
        /// Problem config (TOML with a [problem] table)
        #[arg(long)]
        config: PathBuf,
        /// Override the truncation order from the config
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        product_mode: ProductModeArg,
        /// Sample points for the output CSV
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Tolerance for the reference integrator used when no exact
        /// solution is configured
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Write the sample CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Project an expression onto the basis and report the approximation
    Approx {
        /// Expression in the variable x
        #[arg(long)]
        f: String,
        /// Truncation order
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the orthonormal basis polynomials up to order n
    Basis {
        #[arg(long)]
        n: usize,
    },
    /// Print the integration operational matrix as CSV
    Opmat {
        #[arg(long)]
        n: usize,
    },
    /// Integrate the problem with the adaptive Runge-Kutta reference
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve at several orders and tabulate residual and error decay
    Study {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated ascending orders, e.g. 4,6,8
        #[arg(long, value_delimiter = ',', required = true)]
        n_list: Vec<usize>,
        #[arg(long, value_enum, default_value_t)]
        product_mode: ProductModeArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    /// Rejected before numerics: bad config file, bad flag values.
    Config(String),
    /// Numerics or artifact emission failed.
    Runtime(String),
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.message)
    }
}

fn main() -> ExitCode {
    // die quietly when a downstream pipe closes, like any filter would
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), CliError> {
    match cmd {
        Cmd::Solve {
            config,
            n,
            product_mode,
            grid,
            tol,
            out,
        } => cmd_solve(&config, n, product_mode.into(), grid, tol, out.as_deref()),
        Cmd::Approx { f, n, grid, out } => cmd_approx(&f, n, grid, out.as_deref()),
        Cmd::Basis { n } => cmd_basis(n),
        Cmd::Opmat { n } => cmd_opmat(n),
        Cmd::Oracle {
            config,
            tol,
            grid,
            out,
        } => cmd_oracle(&config, tol, grid, out.as_deref()),
        Cmd::Study {
            config,
            n_list,
            product_mode,
            tol,
            out,
        } => cmd_study(&config, &n_list, product_mode.into(), tol, out.as_deref()),
    }
}

fn checked_grid(grid: usize) -> Result<usize, CliError> {
    if grid < 2 {
        return Err(CliError::Config(format!(
            "key 'grid': need at least 2 sample points, got {grid}"
        )));
    }
    Ok(grid)
}

fn load_problem(
    path: &std::path::Path,
    n_override: Option<usize>,
) -> Result<ProblemConfig, CliError> {
    let mut cfg = load_config(path)?;
    if let Some(n) = n_override {
        check_order(n)?;
        cfg.problem.n = n;
    }
    Ok(cfg)
}

fn cmd_solve(
    config: &std::path::Path,
    n_override: Option<usize>,
    mode: ProductMode,
    grid: usize,
    tol: f64,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let grid = checked_grid(grid)?;
    let cfg = load_problem(config, n_override)?;
    let problem = &cfg.problem;
    let sol = solve(problem, mode).map_err(|e| CliError::Runtime(e.to_string()))?;

    let (a, b) = problem.domain;
    let xs = uniform_grid(a, b, grid);

    // reference column: configured exact solution, else the RK integrator;
    // a failed integration degrades to no reference rather than killing the
    // solve output
    let (ref_label, reference) = match &cfg.exact {
        Some(e) => match eval_exact(e, &xs) {
            Ok(o) => ("y_exact", Some(o)),
            Err(e) => {
                eprintln!("warning: exact solution not evaluable ({e}); omitting error column");
                ("", None)
            }
        },
        None => match rk_solve(problem, tol, grid) {
            Ok(o) => ("y_oracle", Some(o)),
            Err(e) => {
                eprintln!("warning: reference integration failed ({e}); omitting error column");
                ("", None)
            }
        },
    };

    let mut header: Vec<&str> = vec!["x", "y_approx"];
    if reference.is_some() {
        header.push(ref_label);
        header.push("abs_error");
    }
    header.push("residual");
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let y = sol.eval(x);
        let mut row = vec![x, y];
        if let Some(r) = &reference {
            let yr = r.samples()[i].y;
            row.push(yr);
            row.push((y - yr).abs());
        }
        row.push(sol.residual_at(x));
        rows.push(row);
    }
    write_csv(CsvTarget::from(out), &header, &rows)?;

    print_solution_summary(problem, &sol);
    if let Some(r) = &reference {
        let rep = error_report(
            &sol.sample(&xs)
                .map_err(|e| CliError::Runtime(e.to_string()))?,
            r,
        )
        .map_err(|e| CliError::Runtime(e.to_string()))?;
        let what = if cfg.exact.is_some() {
            "exact solution".to_string()
        } else {
            format!("RK reference (tol {tol:e})")
        };
        println!(
            "error vs {what}: L_inf = {:.5e}, L2 = {:.5e}",
            rep.linf, rep.l2
        );
    }
    if let Some(path) = out {
        println!("samples written to {}", path.display());
    }
    Ok(())
}

fn print_solution_summary(problem: &IVProblem, sol: &SpectralSolution) {
    let (a, b) = problem.domain;
    println!("order n = {} on [{a}, {b}]", problem.n);
    let c = sol.coefficients().values();
    println!("coefficients of y'' in the orthonormal basis:");
    println!("  full:    {c:?}");
    let display: Vec<String> = c.iter().map(|v| format!("{v:.5}")).collect();
    println!("  display: [{}]", display.join(", "));
    println!("y(x)   = {}", sol.y_poly().display_decimals(5));
    println!("y'(x)  = {}", sol.dy_poly().display_decimals(5));
    println!(
        "residual L_inf (201-point sweep) = {:.5e}",
        sol.residual_linf()
    );
}

fn cmd_approx(
    f_src: &str,
    n: usize,
    grid: usize,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let grid = checked_grid(grid)?;
    check_order(n)?;
    let e = parse(f_src).map_err(|pe| {
        CliError::Config(format!(
            "key 'f': parse error at position {}: {}",
            pe.position, pe.message
        ))
    })?;
    let f = IntegrableFunction::from_expr(e);
    let basis = gram_schmidt_basis(n).map_err(|e| CliError::Config(e.to_string()))?;
    let coeffs = project(&f, &basis).map_err(|e| CliError::Runtime(e.to_string()))?;

    println!("order n = {n}");
    println!("coefficients: {:?}", coeffs.values());
    let display: Vec<String> = coeffs.values().iter().map(|v| format!("{v:.5}")).collect();
    println!("display:      [{}]", display.join(", "));

    let mut rows = Vec::with_capacity(grid);
    for x in uniform_grid(0.0, 1.0, grid) {
        let fx = f.eval(x);
        let fhat = bernop::projection::reconstruct(&coeffs, &basis, x);
        rows.push(vec![x, fx, fhat, (fx - fhat).abs()]);
    }
    write_csv(
        CsvTarget::from(out),
        &["x", "f", "f_hat", "abs_error"],
        &rows,
    )?;
    if let Some(path) = out {
        println!("samples written to {}", path.display());
    }
    Ok(())
}

fn cmd_basis(n: usize) -> Result<(), CliError> {
    check_order(n)?;
    let basis = gram_schmidt_basis(n).map_err(|e| CliError::Config(e.to_string()))?;
    for k in 0..=n {
        let m = basis.member(k);
        match m.integer_coeffs() {
            Some(ints) => {
                let list: Vec<String> = ints.iter().map(|c| c.to_string()).collect();
                println!("phi_{k} = sqrt({}) * [{}]", m.radicand(), list.join(", "));
            }
            None => println!("phi_{k} = {m}"),
        }
    }
    println!();
    println!("float coefficients (ascending powers):");
    for k in 0..=n {
        let list: Vec<String> = basis
            .float_coeffs(k)
            .iter()
            .map(|c| format!("{c}"))
            .collect();
        println!("phi_{k} = [{}]", list.join(", "));
    }
    Ok(())
}

fn cmd_opmat(n: usize) -> Result<(), CliError> {
    check_order(n)?;
    let theta = build_theta(n);
    let rows: Vec<Vec<f64>> = (0..=n)
        .map(|i| (0..=n).map(|j| theta.entries().get(i, j)).collect())
        .collect();
    let header: Vec<String> = (0..=n).map(|j| format!("c{j}")).collect();
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    write_csv(CsvTarget::Stdout, &header_refs, &rows)?;
    Ok(())
}

fn cmd_oracle(
    config: &std::path::Path,
    tol: f64,
    grid: usize,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let grid = checked_grid(grid)?;
    let cfg = load_problem(config, None)?;
    let sol = rk_solve(&cfg.problem, tol, grid).map_err(|e| CliError::Runtime(e.to_string()))?;
    let rows: Vec<Vec<f64>> = sol.samples().iter().map(|s| vec![s.x, s.y, s.dy]).collect();
    write_csv(CsvTarget::from(out), &["x", "y", "dy"], &rows)?;
    println!(
        "method {} at tol {:e}, {} samples on [{}, {}]",
        sol.method(),
        sol.tol(),
        sol.samples().len(),
        cfg.problem.domain.0,
        cfg.problem.domain.1
    );
    if let Some(path) = out {
        println!("samples written to {}", path.display());
    }
    Ok(())
}

fn cmd_study(
    config: &std::path::Path,
    n_list: &[usize],
    mode: ProductMode,
    tol: f64,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    if n_list.is_empty() || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Config(
            "key 'n-list': orders must be strictly ascending".to_string(),
        ));
    }
    for &n in n_list {
        check_order(n)?;
    }
    let cfg = load_problem(config, None)?;
    let reference = match &cfg.exact {
        Some(e) => Reference::Exact(e.clone()),
        None => Reference::RkOracle { tol },
    };
    let rows = convergence_study(&cfg.problem, n_list, Some(&reference), mode)
        .map_err(|e| CliError::Runtime(e.to_string()))?;

    let what = if cfg.exact.is_some() {
        "exact".to_string()
    } else {
        format!("oracle tol {tol:e}")
    };
    println!("{:>4}  {:>14}  {:>14}", "n", "residual_linf", "err_linf");
    for row in &rows {
        let err = row
            .err_linf
            .map_or_else(|| "-".to_string(), |e| format!("{e:.5e}"));
        println!("{:>4}  {:>14.5e}  {:>14}", row.n, row.residual_linf, err);
    }
    println!("error column measured against {what}");

    let csv_rows: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![r.n as f64, r.residual_linf];
            if let Some(e) = r.err_linf {
                v.push(e);
            }
            v
        })
        .collect();
    if let Some(path) = out {
        write_csv(
            CsvTarget::File(path),
            &["n", "residual_linf", "err_linf"],
            &csv_rows,
        )?;
        println!("study written to {}", path.display());
    }
    Ok(())
}
