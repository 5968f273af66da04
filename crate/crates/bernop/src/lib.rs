//! Closed-form polynomial solutions of linear second-order initial value
//! problems by an operational-matrix spectral method.
//!
//! The pipeline: build an orthonormal polynomial basis on [0, 1] by exact
//! rational Gram-Schmidt ([`basis`]), express integration of the basis vector
//! as a matrix ([`opmat`]), expand the unknown's second derivative in the
//! basis, and solve the small dense linear system that the differential
//! equation becomes ([`solver`]). Projections and quadrature live in
//! [`projection`] and [`quadrature`]; coefficient functions are parsed by a
//! small expression language ([`expr`]); accuracy claims are checked against
//! independent references ([`oracle`]).

pub mod basis;
pub mod expr;
pub mod linalg;
pub mod opmat;
pub mod oracle;
pub mod poly;
pub mod projection;
pub mod quadrature;
pub mod solver;

pub use basis::{gram_schmidt_basis, OrthonormalBasis};
pub use expr::{parse, Expr, IntegrableFunction};
pub use opmat::{build_product_matrix, build_theta, verify_theta_identity, ProductMode};
pub use oracle::{error_report, eval_exact, rk_solve, uniform_grid, OracleSolution};
pub use projection::{project, CoeffVector};
pub use solver::{
    convergence_study, normalize_domain, residual_norm, solve, solve_constant, solve_variable,
    IVProblem, Reference, SolveError, SpectralSolution,
};
