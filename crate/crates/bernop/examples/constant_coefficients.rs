//! Solves a constant-coefficient problem with a known closed form,
//!
//!     y'' + 5 y' + 3 y = exp(-x),   y(0) = 0,  y'(0) = 0,
//!
//! and prints the polynomial solution, the expansion coefficients of y'',
//! and the pointwise error against the closed form.
//!
//!     cargo run --example constant_coefficients

use bernop::expr::IntegrableFunction;
use bernop::opmat::ProductMode;
use bernop::solver::IVProblem;
use bernop::{parse, solve, uniform_grid};

fn exact(x: f64) -> f64 {
    let s13 = 13f64.sqrt();
    (-2.5 * x).exp() * ((s13 / 2.0 * x).cosh() + 3.0 / s13 * (s13 / 2.0 * x).sinh()) - (-x).exp()
}

fn main() {
    let problem = IVProblem {
        p: IntegrableFunction::Constant(5.0),
        q: IntegrableFunction::Constant(3.0),
        r: IntegrableFunction::from_expr(parse("exp(-x)").unwrap()),
        alpha: 0.0,
        beta: 0.0,
        domain: (0.0, 1.0),
        n: 6,
    };
    let sol = solve(&problem, ProductMode::default()).unwrap();

    println!(
        "y''-expansion coefficients: {:?}",
        sol.coefficients().values()
    );
    println!("y(x)  = {}", sol.y_poly().display_decimals(5));
    println!("y'(x) = {}", sol.dy_poly().display_decimals(5));
    println!();

    println!("  x      approx        exact         |error|");
    for x in [0.0, 0.2, 0.4, 0.6, 0.8, 1.0] {
        let y = sol.eval(x);
        let e = exact(x);
        println!("  {x:<5} {y:>12.9} {e:>12.9}  {:.3e}", (y - e).abs());
    }

    let linf = uniform_grid(0.0, 1.0, 201)
        .into_iter()
        .map(|x| (sol.eval(x) - exact(x)).abs())
        .fold(0.0, f64::max);
    println!();
    println!("L_inf over 201 points = {linf:.3e}");
    println!("equation residual L_inf = {:.3e}", sol.residual_linf());
}
