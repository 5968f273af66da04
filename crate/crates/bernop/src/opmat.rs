//! Operational matrices over the orthonormal basis: the integration matrix
//! Theta, which represents the map f -> integral of f from 0 to x in
//! coordinates, and product-linearization matrices representing f -> g*f.
//!
//! Theta is built from its closed form. Because a transcription slip there
//! would poison every solve, `verify_theta_identity` rederives each row by
//! exact rational projection and reports defects; rows below the truncation
//! order must come back identically zero.

use crate::basis::OrthonormalBasis;
use crate::expr::IntegrableFunction;
use crate::linalg::Matrix;
use crate::poly::Rat;
use crate::projection::{project, ProjectionError};
use crate::quadrature::gauss_legendre_01;
use num_traits::{ToPrimitive, Zero};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Integration,
    ProductLinearization,
}

/// A dense operator in basis coordinates, row i holding the expansion
/// coefficients of the operator applied to phi_i.
#[derive(Debug, Clone)]
pub struct OpMatrix {
    n: usize,
    kind: MatrixKind,
    entries: Matrix,
}

impl OpMatrix {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }
}

/// The integration matrix of order n + 1: tridiagonal with
/// entry(0,0) = 1/2, entry(i, i+1) = 1/(2 sqrt((2i+1)(2i+3))) and
/// entry(i+1, i) its negation.
pub fn build_theta(n: usize) -> OpMatrix {
    let mut entries = Matrix::zeros(n + 1, n + 1);
    entries.set(0, 0, 0.5);
    for i in 0..n {
        let v = 0.5 / (((2 * i + 1) * (2 * i + 3)) as f64).sqrt();
        entries.set(i, i + 1, v);
        entries.set(i + 1, i, -v);
    }
    OpMatrix {
        n,
        kind: MatrixKind::Integration,
        entries,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpMatrixError {
    DimensionMismatch { basis_n: usize, matrix_n: usize },
}

impl fmt::Display for OpMatrixError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OpMatrixError::DimensionMismatch { basis_n, matrix_n } => write!(
                f,
                "basis order {basis_n} does not match matrix order {matrix_n}"
            ),
        }
    }
}

impl std::error::Error for OpMatrixError {}

/// Outcome of checking Theta row by row against exact integration.
///
/// Row i of the check expands the antiderivative of phi_i in the basis by
/// exact rational inner products and subtracts the reconstruction; the
/// squared L2 norm of what remains is rational and stored verbatim. The last
/// row necessarily keeps a tail: the antiderivative of phi_n has degree
/// n + 1 and its leading part falls outside the family.
#[derive(Debug, Clone)]
pub struct ThetaVerification {
    row_defect_norms_sq: Vec<Rat>,
    max_entry_deviation: f64,
}

impl ThetaVerification {
    /// Exact squared defect of row i, in the orthonormal scaling.
    pub fn row_defect_sq(&self, i: usize) -> &Rat {
        &self.row_defect_norms_sq[i]
    }

    /// True when every row below the truncation order reproduced its
    /// antiderivative with literally zero remainder.
    pub fn rows_below_tail_are_exact(&self) -> bool {
        let last = self.row_defect_norms_sq.len() - 1;
        self.row_defect_norms_sq[..last].iter().all(|d| d.is_zero())
    }

    /// Max defect norm over rows below the truncation order.
    pub fn max_defect(&self) -> f64 {
        let last = self.row_defect_norms_sq.len() - 1;
        self.row_defect_norms_sq[..last]
            .iter()
            .map(|d| d.to_f64().unwrap().sqrt())
            .fold(0.0, f64::max)
    }

    /// Defect norm of the final row, the unavoidable truncation tail.
    pub fn tail_defect(&self) -> f64 {
        self.row_defect_norms_sq
            .last()
            .unwrap()
            .to_f64()
            .unwrap()
            .sqrt()
    }

    /// Largest |closed-form entry - exactly projected coordinate|.
    pub fn max_entry_deviation(&self) -> f64 {
        self.max_entry_deviation
    }
}

/// Checks a built Theta against exact antiderivative expansions.
pub fn verify_theta_identity(
    basis: &OrthonormalBasis,
    theta: &OpMatrix,
) -> Result<ThetaVerification, OpMatrixError> {
    if basis.order() != theta.order() {
        return Err(OpMatrixError::DimensionMismatch {
            basis_n: basis.order(),
            matrix_n: theta.order(),
        });
    }
    let n = basis.order();
    let mut row_defect_norms_sq = Vec::with_capacity(n + 1);
    let mut max_entry_deviation = 0.0f64;
    for i in 0..=n {
        let vi = basis.member(i).rational_part();
        let si = Rat::from_integer(basis.member(i).radicand().clone());
        let anti = vi.integrate_from_zero();
        // coordinates of the antiderivative of phi_i: entry j is
        // sqrt(s_i s_j) <anti, v_j>, rational except for the radical
        let mut defect = anti.clone();
        for j in 0..=n {
            let vj = basis.member(j).rational_part();
            let sj = Rat::from_integer(basis.member(j).radicand().clone());
            let q = anti.inner_product(vj);
            defect = &defect - &vj.scale(&(&sj * &q));
            let exact_entry = (&si * &sj).to_f64().unwrap().sqrt() * q.to_f64().unwrap();
            max_entry_deviation =
                max_entry_deviation.max((theta.entries().get(i, j) - exact_entry).abs());
        }
        row_defect_norms_sq.push(&si * defect.inner_product(&defect));
    }
    Ok(ThetaVerification {
        row_defect_norms_sq,
        max_entry_deviation,
    })
}

/// How a product matrix treats the multiplier function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProductMode {
    /// Replace f by its degree-n projection first, then expand the exact
    /// products phi_i * f_hat. This reproduces published reference solves
    /// and is the default.
    #[default]
    Truncating,
    /// Integrate <phi_i * f, phi_j> without pre-truncation; usually a bit
    /// more accurate, kept as a documented experiment.
    Direct,
}

/// The matrix M with row i the expansion of phi_i * f (with f first
/// projected to the basis in Truncating mode).
pub fn build_product_matrix(
    basis: &OrthonormalBasis,
    f: &IntegrableFunction,
    mode: ProductMode,
) -> Result<OpMatrix, ProjectionError> {
    let n = basis.order();
    let entries = match mode {
        ProductMode::Truncating => {
            let a = project(f, basis)?;
            // M_ij = sum_k a_k <phi_i phi_k, phi_j>, the triple products
            // exact up to one radical
            let mut m = Matrix::zeros(n + 1, n + 1);
            for i in 0..=n {
                let vi = basis.member(i).rational_part();
                for k in 0..=n {
                    let ak = a.values()[k];
                    if ak == 0.0 {
                        continue;
                    }
                    let prod = vi * basis.member(k).rational_part();
                    let radicand = basis.member(i).radicand() * basis.member(k).radicand();
                    for j in 0..=n {
                        let q = prod.inner_product(basis.member(j).rational_part());
                        if q.is_zero() {
                            continue;
                        }
                        let scale = (&radicand * basis.member(j).radicand())
                            .to_f64()
                            .unwrap()
                            .sqrt();
                        m.set(i, j, m.get(i, j) + ak * q.to_f64().unwrap() * scale);
                    }
                }
            }
            m
        }
        ProductMode::Direct => match f {
            IntegrableFunction::Constant(c) => Matrix::identity(n + 1).scale(*c),
            IntegrableFunction::Polynomial(p) => {
                let mut m = Matrix::zeros(n + 1, n + 1);
                for i in 0..=n {
                    let prod = basis.member(i).rational_part() * p;
                    for j in 0..=n {
                        let q = prod.inner_product(basis.member(j).rational_part());
                        let scale = (basis.member(i).radicand() * basis.member(j).radicand())
                            .to_f64()
                            .unwrap()
                            .sqrt();
                        m.set(i, j, q.to_f64().unwrap() * scale);
                    }
                }
                m
            }
            IntegrableFunction::Closure(_) => direct_matrix_by_quadrature(basis, f)?,
        },
    };
    Ok(OpMatrix {
        n,
        kind: MatrixKind::ProductLinearization,
        entries,
    })
}

#[allow(clippy::needless_range_loop)]
fn direct_matrix_by_quadrature(
    basis: &OrthonormalBasis,
    f: &IntegrableFunction,
) -> Result<Matrix, ProjectionError> {
    let n = basis.order();
    let mut prev: Option<Matrix> = None;
    let mut nodes = 64;
    loop {
        let rule = gauss_legendre_01(nodes);
        let mut m = Matrix::zeros(n + 1, n + 1);
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            let fx = f.eval(x);
            if !fx.is_finite() {
                return Err(ProjectionError::NonFiniteSample { x });
            }
            let phi = basis.eval_basis(x);
            for i in 0..=n {
                let wi = w * fx * phi[i];
                for j in 0..=n {
                    m.set(i, j, m.get(i, j) + wi * phi[j]);
                }
            }
        }
        if let Some(p) = prev {
            let diff = (&p - &m).max_abs();
            if diff < 1e-13 || nodes == 1024 {
                if nodes == 1024 && diff >= 1e-13 {
                    eprintln!(
                        "warning: product matrix quadrature hit the 1024-node cap \
                         with successive entries still {diff:.2e} apart"
                    );
                }
                return Ok(m);
            }
        }
        prev = Some(m);
        nodes *= 2;
    }
}
