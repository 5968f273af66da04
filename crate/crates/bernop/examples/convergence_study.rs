//! Sweeps the expansion order and tabulates both the equation residual and
//! the true error against a closed-form solution, showing spectral
//! (geometric) convergence until the useful orders are exhausted.
//!
//!     cargo run --example convergence_study

use bernop::expr::IntegrableFunction;
use bernop::opmat::ProductMode;
use bernop::solver::{IVProblem, Reference};
use bernop::{convergence_study, parse};

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
    let closed_form =
        parse("exp(-5*x/2)*(cosh(sqrt(13)/2*x) + 3/sqrt(13)*sinh(sqrt(13)/2*x)) - exp(-x)")
            .unwrap();

    let rows = convergence_study(
        &problem,
        &[2, 4, 6, 8, 10, 12],
        Some(&Reference::Exact(closed_form)),
        ProductMode::default(),
    )
    .unwrap();

    println!("   n   residual L_inf   error L_inf");
    for row in &rows {
        println!(
            "  {:>2}   {:>14.5e}   {:>11.5e}",
            row.n,
            row.residual_linf,
            row.err_linf.unwrap()
        );
    }
    println!();
    println!("each extra pair of basis functions buys roughly two digits");
}
