//! Builds the integration operational matrix Theta and demonstrates the two
//! properties the solver depends on: row k expands the antiderivative of
//! phi_k in the basis, and Theta + Theta^T collapses to the (0,0) unit.
//!
//!     cargo run --example integration_matrix

use bernop::{build_theta, gram_schmidt_basis, verify_theta_identity};

fn main() {
    let n = 6;
    let basis = gram_schmidt_basis(n).unwrap();
    let theta = build_theta(n);

    println!("Theta for n = {n} (tridiagonal, row by row):");
    for i in 0..=n {
        let row: Vec<String> = (0..=n)
            .map(|j| format!("{:>9.5}", theta.entries().get(i, j)))
            .collect();
        println!("  [{}]", row.join(", "));
    }

    // antiderivative check at a few points: integral of phi_2 from 0 to x
    // against the row-2 expansion sum_j Theta[2][j] phi_j(x)
    println!();
    println!("integral of phi_2 vs its Theta-row expansion:");
    let member = basis.member(2).rational_part();
    let radicand_sqrt = basis.member(2).sqrt_radicand_f64();
    let antiderivative = member.integrate_from_zero();
    for x in [0.1, 0.35, 0.8] {
        let direct = radicand_sqrt * antiderivative.eval_f64(x);
        let phis = basis.eval_basis(x);
        let expanded: f64 = (0..=n).map(|j| theta.entries().get(2, j) * phis[j]).sum();
        println!("  x = {x:<4}  direct = {direct:>12.8}  expanded = {expanded:>12.8}");
    }

    let check = verify_theta_identity(&basis, &theta).unwrap();
    println!();
    println!(
        "rows 0..{} expand exactly (defect of the last row is the unavoidable \
         degree-{} tail, squared norm {:.3e})",
        n - 1,
        n + 1,
        check.tail_defect()
    );
    println!(
        "max |Theta + Theta^T - e0 e0^T| entry = {:.3e}",
        check.max_entry_deviation()
    );
}
