//! Expands a smooth function in the orthonormal basis and tabulates the
//! reconstruction error on [0, 1]. Spectral coefficient decay means a handful
//! of terms already give near machine-precision agreement.
//!
//!     cargo run --example approximate_function

use bernop::expr::IntegrableFunction;
use bernop::projection::reconstruct;
use bernop::{gram_schmidt_basis, parse, project, uniform_grid};

fn main() {
    let f = IntegrableFunction::from_expr(parse("exp(-x)*sin(3*x)").unwrap());

    for n in [4usize, 8, 12] {
        let basis = gram_schmidt_basis(n).unwrap();
        let coeffs = project(&f, &basis).unwrap();

        let linf = uniform_grid(0.0, 1.0, 201)
            .into_iter()
            .map(|x| (reconstruct(&coeffs, &basis, x) - f.eval(x)).abs())
            .fold(0.0, f64::max);
        println!("n = {n:>2}: L_inf reconstruction error = {linf:.3e}");
    }

    println!();
    let basis = gram_schmidt_basis(8).unwrap();
    let coeffs = project(&f, &basis).unwrap();
    println!("coefficients at n = 8 (note the geometric decay):");
    for (k, c) in coeffs.values().iter().enumerate() {
        println!("  c_{k} = {c:>13.6e}");
    }

    println!();
    println!("  x      f(x)        reconstruction");
    for x in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!(
            "  {x:<5} {:>11.8} {:>11.8}",
            f.eval(x),
            reconstruct(&coeffs, &basis, x)
        );
    }
}
