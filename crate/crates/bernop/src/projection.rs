//! Best-approximation coefficients c_k = <f, phi_k> over [0,1].
//!
//! Polynomial and constant inputs go through exact rational inner products;
//! only the final coefficients round to f64. Everything else is integrated by
//! Gauss-Legendre, doubling the node count until two successive coefficient
//! vectors agree to 1e-13 in max norm (cap 1024, with a warning: smoothness,
//! not the cap, is the working assumption).

use crate::basis::OrthonormalBasis;
use crate::expr::IntegrableFunction;
use crate::poly::{PowerPoly, Rat, RatPoly};
use crate::quadrature::{gauss_legendre_01, QuadratureRule};
use num_traits::ToPrimitive;
use std::fmt;

/// Coordinates of a function in the orthonormal family of order `basis_n`.
/// The order is carried so downstream consumers can detect basis mixups;
/// bases are deterministic, so the order identifies the basis completely.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    basis_n: usize,
    values: Vec<f64>,
}

impl CoeffVector {
    pub fn new(basis_n: usize, values: Vec<f64>) -> CoeffVector {
        assert_eq!(values.len(), basis_n + 1, "coefficient count must be n + 1");
        assert!(
            values.iter().all(|v| v.is_finite()),
            "non-finite coefficient"
        );
        CoeffVector { basis_n, values }
    }

    pub fn order(&self) -> usize {
        self.basis_n
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionError {
    /// The integrand produced NaN or an infinity at a quadrature node.
    NonFiniteSample { x: f64 },
}

impl fmt::Display for ProjectionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjectionError::NonFiniteSample { x } => {
                write!(f, "function is not finite at sample point x = {x}")
            }
        }
    }
}

impl std::error::Error for ProjectionError {}

/// Rational inner products <p, v_k> against the radical-free parts of the
/// basis members. The k-th coefficient of p is sqrt(s_k) times this.
pub(crate) fn exact_rational_coordinates(p: &RatPoly, basis: &OrthonormalBasis) -> Vec<Rat> {
    basis
        .members()
        .iter()
        .map(|m| p.inner_product(m.rational_part()))
        .collect()
}

fn quadrature_coordinates(
    f: &IntegrableFunction,
    basis: &OrthonormalBasis,
    rule: &QuadratureRule,
) -> Result<Vec<f64>, ProjectionError> {
    let mut coords = vec![0.0; basis.len()];
    for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
        let fx = f.eval(x);
        if !fx.is_finite() {
            return Err(ProjectionError::NonFiniteSample { x });
        }
        for (c, phi) in coords.iter_mut().zip(basis.eval_basis(x)) {
            *c += w * fx * phi;
        }
    }
    Ok(coords)
}

/// c_k = integral of f * phi_k over [0,1], exact for constants and
/// polynomials, adaptive Gauss-Legendre otherwise.
pub fn project(
    f: &IntegrableFunction,
    basis: &OrthonormalBasis,
) -> Result<CoeffVector, ProjectionError> {
    let values = match f {
        IntegrableFunction::Constant(c) => {
            if !c.is_finite() {
                return Err(ProjectionError::NonFiniteSample { x: 0.0 });
            }
            // phi_0 = 1 and every other member integrates to zero
            let mut v = vec![0.0; basis.len()];
            v[0] = *c;
            v
        }
        IntegrableFunction::Polynomial(p) => exact_rational_coordinates(p, basis)
            .iter()
            .zip(basis.members())
            .map(|(q, m)| q.to_f64().unwrap() * m.sqrt_radicand_f64())
            .collect(),
        IntegrableFunction::Closure(_) => {
            let mut prev: Option<Vec<f64>> = None;
            let mut nodes = 64;
            loop {
                let coords = quadrature_coordinates(f, basis, &gauss_legendre_01(nodes))?;
                if let Some(p) = prev {
                    let diff = p
                        .iter()
                        .zip(&coords)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max);
                    if diff < 1e-13 || nodes == 1024 {
                        if nodes == 1024 && diff >= 1e-13 {
                            eprintln!(
                                "warning: projection quadrature hit the 1024-node cap \
                                 with successive coefficients still {diff:.2e} apart"
                            );
                        }
                        break coords;
                    }
                }
                prev = Some(coords);
                nodes *= 2;
            }
        }
    };
    Ok(CoeffVector::new(basis.order(), values))
}

/// Evaluates sum c_k phi_k(x).
pub fn reconstruct(c: &CoeffVector, basis: &OrthonormalBasis, x: f64) -> f64 {
    assert_eq!(
        c.order(),
        basis.order(),
        "coefficients from a different basis"
    );
    c.values()
        .iter()
        .zip(basis.eval_basis(x))
        .map(|(ck, phik)| ck * phik)
        .sum()
}

/// Power-basis coefficients of sum c_k phi_k.
pub fn coeffs_to_power_basis(c: &CoeffVector, basis: &OrthonormalBasis) -> PowerPoly {
    assert_eq!(
        c.order(),
        basis.order(),
        "coefficients from a different basis"
    );
    let mut out = PowerPoly::zero();
    for (ck, k) in c.values().iter().zip(0..basis.len()) {
        out.add_scaled(*ck, basis.float_coeffs(k));
    }
    out
}
