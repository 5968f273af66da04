//! Runs the built-in adaptive Runge-Kutta reference integrator on
//!
//!     y'' + y = 0,   y(0) = 0,  y'(0) = 1   on [0, pi],
//!
//! whose solution is sin(x), then solves the same problem spectrally and
//! compares the two with an error report. The non-unit domain is mapped to
//! [0, 1] internally; callers never see the change of variable.
//!
//!     cargo run --example reference_oracle

use bernop::expr::IntegrableFunction;
use bernop::opmat::ProductMode;
use bernop::oracle::error_report;
use bernop::solver::IVProblem;
use bernop::{rk_solve, solve, uniform_grid};
use std::f64::consts::PI;

fn main() {
    let problem = IVProblem {
        p: IntegrableFunction::Constant(0.0),
        q: IntegrableFunction::Constant(1.0),
        r: IntegrableFunction::Constant(0.0),
        alpha: 0.0,
        beta: 1.0,
        domain: (0.0, PI),
        n: 10,
    };

    let oracle = rk_solve(&problem, 1e-12, 9).unwrap();
    println!(
        "oracle: {} at tolerance {:.0e}",
        oracle.method(),
        oracle.tol()
    );
    println!("  x          y              y'             sin(x)");
    for s in oracle.samples() {
        println!(
            "  {:<9.6} {:>13.10} {:>13.10}  {:>13.10}",
            s.x,
            s.y,
            s.dy,
            s.x.sin()
        );
    }

    let sol = solve(&problem, ProductMode::default()).unwrap();
    let grid = uniform_grid(0.0, PI, 201);
    let spectral = sol.sample(&grid).unwrap();
    let reference = rk_solve(&problem, 1e-12, 201).unwrap();
    let report = error_report(&spectral, &reference).unwrap();
    println!();
    println!(
        "degree-12 spectral solution vs oracle: L_inf = {:.3e}, L2 = {:.3e}",
        report.linf, report.l2
    );
}
