//! Builds the orthonormal polynomial basis on [0, 1] and prints each member
//! in exact form (square root scale times an integer-coefficient polynomial)
//! alongside its floating-point coefficients.
//!
//!     cargo run --example basis_table

use bernop::gram_schmidt_basis;
use bernop::poly::Rat;
use num_traits::{One, Zero};

fn main() {
    let n = 9;
    let basis = gram_schmidt_basis(n).expect("order within supported range");

    println!("exact form, coefficients by ascending power:");
    for (k, member) in basis.members().iter().enumerate() {
        match member.integer_coeffs() {
            Some(ints) => {
                let list: Vec<String> = ints.iter().map(|c| c.to_string()).collect();
                println!(
                    "  phi_{k} = sqrt({}) * [{}]",
                    member.radicand(),
                    list.join(", ")
                );
            }
            None => println!("  phi_{k} = {member}"),
        }
    }

    println!();
    println!("floating-point coefficients:");
    for (k, member) in basis.members().iter().enumerate() {
        let list: Vec<String> = member
            .to_f64_coeffs()
            .iter()
            .map(|c| format!("{c:.6}"))
            .collect();
        println!("  phi_{k} = [{}]", list.join(", "));
    }

    // orthonormality holds exactly in rational arithmetic, not just to
    // rounding error: s_i <v_i, v_i> = 1 and <v_i, v_j> = 0
    let mut checked = 0;
    for i in 0..=n {
        for j in 0..=i {
            let ip = basis
                .member(i)
                .rational_part()
                .inner_product(basis.member(j).rational_part());
            let ok = if i == j {
                (Rat::from(basis.member(i).radicand().clone()) * ip).is_one()
            } else {
                ip.is_zero()
            };
            assert!(ok, "<phi_{i}, phi_{j}> not exact");
            checked += 1;
        }
    }
    println!();
    println!("verified <phi_i, phi_j> = delta_ij exactly for {checked} pairs");
}
