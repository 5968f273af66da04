//! Solves a variable-coefficient problem,
//!
//!     y'' + tan(x) y' + 2 cos(x)^2 y = 2 cos(x)^4,   y(0) = 0,  y'(0) = 0,
//!
//! where the coefficient functions enter through product operational
//! matrices. The result is checked against an adaptive Runge-Kutta
//! integration of the same equation.
//!
//!     cargo run --example variable_coefficients

use bernop::expr::IntegrableFunction;
use bernop::opmat::ProductMode;
use bernop::solver::IVProblem;
use bernop::{parse, rk_solve, solve, uniform_grid};

fn main() {
    let problem = IVProblem {
        p: IntegrableFunction::from_expr(parse("tan(x)").unwrap()),
        q: IntegrableFunction::from_expr(parse("2*cos(x)^2").unwrap()),
        r: IntegrableFunction::from_expr(parse("2*cos(x)^4").unwrap()),
        alpha: 0.0,
        beta: 0.0,
        domain: (0.0, 1.0),
        n: 6,
    };

    // the two product-matrix constructions agree on smooth data; Truncating
    // projects the coefficient functions first, Direct integrates against
    // each basis product adaptively
    for mode in [ProductMode::Truncating, ProductMode::Direct] {
        let sol = solve(&problem, mode).unwrap();
        let oracle = rk_solve(&problem, 1e-10, 201).unwrap();
        let grid = uniform_grid(0.0, 1.0, 201);
        let linf = sol
            .sample(&grid)
            .unwrap()
            .samples()
            .iter()
            .zip(oracle.samples())
            .map(|(a, b)| (a.y - b.y).abs())
            .fold(0.0, f64::max);
        println!("{mode:?} mode: L_inf vs Runge-Kutta reference = {linf:.3e}");
    }

    println!();
    let sol = solve(&problem, ProductMode::default()).unwrap();
    println!("y(x) = {}", sol.y_poly().display_decimals(5));
    println!();
    println!("  x      y approx      y'");
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("  {x:<5} {:>12.9} {:>12.9}", sol.eval(x), sol.eval_dy(x));
    }
}
