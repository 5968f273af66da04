//! Bernoulli numbers and polynomials, and the orthonormal polynomial basis
//! built from them by Gram-Schmidt under the L2[0,1] inner product.
//!
//! Everything here runs in exact rational arithmetic. Each basis member is kept
//! symbolically as sqrt(s) times a rational polynomial with s squarefree, so
//! orthonormality can be checked exactly: cross inner products reduce to a
//! rational that must vanish, and the squared norm to a rational that must be 1.
//! Floating point enters only through the cached evaluation coefficients.

use crate::poly::{Rat, RatPoly};
use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Largest accepted truncation order. Coefficients grow combinatorially with
/// the order; this bound keeps construction instant and covers every order the
/// solver meaningfully resolves in f64.
pub const MAX_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisError {
    OrderTooLarge { requested: usize, max: usize },
}

impl fmt::Display for BasisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisError::OrderTooLarge { requested, max } => write!(
                f,
                "order {requested} too large: coefficient growth is combinatorial, max supported is {max}"
            ),
        }
    }
}

impl std::error::Error for BasisError {}

/// Bernoulli numbers B_0(0) ... B_n(0) by Kronecker's formula,
///
///   B_n(0) = -sum_{j=1}^{n+1} ((-1)^j / j) C(n+1, j) sum_{k=0}^{j-1} k^n
///
/// with 0^0 read as 1. The inner sum must run over k = 0..j-1: extending it to
/// k = j shifts B_1 to +1/2 and breaks the vanishing integrals of eq-style
/// identities downstream; the value required here is B_1 = -1/2.
pub fn bernoulli_numbers(n_max: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut s = Rat::zero();
        for j in 1..=(n + 1) {
            let mut inner = BigInt::zero();
            for k in 0..j {
                if k == 0 {
                    if n == 0 {
                        inner += 1;
                    }
                } else {
                    inner += BigInt::from(k).pow(n as u32);
                }
            }
            let c = binomial(BigInt::from(n + 1), BigInt::from(j));
            let sign = if j % 2 == 0 { 1 } else { -1 };
            s += Rat::new(sign * c * inner, BigInt::from(j));
        }
        out.push(-s);
    }
    out
}

/// The monic Bernoulli polynomial B_n(x) = sum_j C(n, j) B_j(0) x^(n-j).
pub fn bernoulli_polynomial(n: usize) -> RatPoly {
    let numbers = bernoulli_numbers(n);
    let mut coeffs = vec![Rat::zero(); n + 1];
    for (j, bj) in numbers.iter().enumerate() {
        let c = binomial(BigInt::from(n), BigInt::from(j));
        coeffs[n - j] = bj * Rat::from_integer(c);
    }
    RatPoly::from_coeffs(coeffs)
}

/// A polynomial of the form sqrt(radicand) * rational_part(x), with the
/// radicand squarefree (sqrt(12) normalizes to 2*sqrt(3) folded into the
/// rational part).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtScaled {
    radicand: BigInt,
    rational_part: RatPoly,
}

impl SqrtScaled {
    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn rational_part(&self) -> &RatPoly {
        &self.rational_part
    }

    pub fn sqrt_radicand_f64(&self) -> f64 {
        self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
    }

    /// Power-basis coefficients with the radical multiplied through.
    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        let s = self.sqrt_radicand_f64();
        self.rational_part
            .to_f64_coeffs()
            .into_iter()
            .map(|c| c * s)
            .collect()
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.sqrt_radicand_f64() * self.rational_part.eval_f64(x)
    }

    /// Integer coefficient list when the rational part happens to be integral,
    /// which holds for every basis member this crate constructs.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        if !self.rational_part.is_integer() {
            return None;
        }
        Some(
            self.rational_part
                .coeffs()
                .iter()
                .map(|c| c.to_integer())
                .collect(),
        )
    }
}

impl fmt::Display for SqrtScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sqrt({}) * [", self.radicand)?;
        for (i, c) in self.rational_part.coeffs().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// The orthonormal family phi_0 .. phi_n, with cached float coefficients for
/// evaluation. deg(phi_k) = k and every leading coefficient is positive.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    n: usize,
    members: Vec<SqrtScaled>,
    float_members: Vec<Vec<f64>>,
}

impl OrthonormalBasis {
    /// Truncation order n; the basis has n + 1 members.
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn members(&self) -> &[SqrtScaled] {
        &self.members
    }

    pub fn member(&self, k: usize) -> &SqrtScaled {
        &self.members[k]
    }

    /// Cached power-basis coefficients of phi_k with the radical folded in.
    pub fn float_coeffs(&self, k: usize) -> &[f64] {
        &self.float_members[k]
    }

    /// [phi_0(x) ... phi_n(x)]. Values outside [0,1] are legal (diagnostic
    /// extrapolation); the basis is only orthonormal over [0,1].
    pub fn eval_basis(&self, x: f64) -> Vec<f64> {
        self.float_members
            .iter()
            .map(|coeffs| {
                let mut y = 0.0;
                for a in coeffs.iter().rev() {
                    y = y * x + a;
                }
                y
            })
            .collect()
    }
}

/// Splits n > 0 as s * m^2 with s squarefree, returning (s, m).
///
/// Trial division suffices: the numbers reaching here are norms of the
/// Gram-Schmidt family, whose prime factors are bounded by 2*MAX_ORDER + 1.
/// A perfect-square check mops up any cofactor past the trial bound.
fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(n.is_positive(), "squarefree split of non-positive number");
    let mut rest = n.clone();
    let mut s = BigInt::one();
    let mut m = BigInt::one();
    let mut d = BigInt::from(2);
    let bound = BigInt::from(1000);
    while &d * &d <= rest && d <= bound {
        let mut count = 0u32;
        while (&rest % &d).is_zero() {
            rest /= &d;
            count += 1;
        }
        if count % 2 == 1 {
            s *= &d;
        }
        for _ in 0..count / 2 {
            m *= &d;
        }
        d += 1;
    }
    if rest > BigInt::one() {
        let root = rest.sqrt();
        if &root * &root == rest {
            m *= root;
        } else {
            s *= rest;
        }
    }
    (s, m)
}

/// Classical Gram-Schmidt on B_0 .. B_n in exact rational arithmetic, followed
/// by symbolic normalization. Exactness removes the usual motive for the
/// modified variant: there is no rounding to re-orthogonalize against.
pub fn gram_schmidt_basis(n: usize) -> Result<OrthonormalBasis, BasisError> {
    if n > MAX_ORDER {
        return Err(BasisError::OrderTooLarge {
            requested: n,
            max: MAX_ORDER,
        });
    }
    let mut orthogonal: Vec<RatPoly> = Vec::with_capacity(n + 1);
    let mut norms: Vec<Rat> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut u = bernoulli_polynomial(k);
        for (v, nv) in orthogonal.iter().zip(&norms) {
            let c = u.inner_product(v) / nv;
            u = &u - &v.scale(&c);
        }
        norms.push(u.inner_product(&u));
        orthogonal.push(u);
    }

    let mut members = Vec::with_capacity(n + 1);
    for (u, norm_sq) in orthogonal.iter().zip(&norms) {
        // norm_sq = p/q > 0; the normalizer sqrt(q/p) splits into the
        // squarefree radical of p*q and the rational m/p
        let p = norm_sq.numer().clone();
        let q = norm_sq.denom().clone();
        let (s, m) = squarefree_split(&(&p * &q));
        let mut rational_part = u.scale(&Rat::new(m, p));
        let leading_negative = rational_part
            .coeffs()
            .last()
            .is_some_and(|c| c.is_negative());
        if leading_negative {
            rational_part = -&rational_part;
        }
        members.push(SqrtScaled {
            radicand: s,
            rational_part,
        });
    }
    let float_members = members.iter().map(|m| m.to_f64_coeffs()).collect();
    Ok(OrthonormalBasis {
        n,
        members,
        float_members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn basis9() -> OrthonormalBasis {
        gram_schmidt_basis(9).unwrap()
    }

    #[test]
    fn first_bernoulli_numbers() {
        let b = bernoulli_numbers(4);
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
    }

    #[test]
    fn bernoulli_polynomials_low_order() {
        assert_eq!(bernoulli_polynomial(0), RatPoly::constant(rat(1, 1)));
        assert_eq!(
            bernoulli_polynomial(2),
            RatPoly::from_coeffs(vec![rat(1, 6), rat(-1, 1), rat(1, 1)])
        );
        assert_eq!(
            bernoulli_polynomial(3),
            RatPoly::from_coeffs(vec![rat(0, 1), rat(1, 2), rat(-3, 2), rat(1, 1)])
        );
    }

    #[test]
    fn bernoulli_polynomials_are_monic() {
        for n in 0..=9 {
            let b = bernoulli_polynomial(n);
            assert_eq!(b.degree(), Some(n));
            assert_eq!(b.coeff(n), rat(1, 1));
        }
    }

    #[test]
    fn vanishing_integrals_seed_orthogonality() {
        // integral of B_n over [0,1] is zero for n >= 1, i.e. <B_n, B_0> = 0
        for n in 1..=9 {
            assert!(bernoulli_polynomial(n).definite_integral_01().is_zero());
        }
    }

    #[test]
    fn difference_relation_at_zero() {
        // B_n(1) - B_n(0) = n * 0^(n-1): zero for n >= 2, one for n = 1
        for n in 2..=9usize {
            let b = bernoulli_polynomial(n);
            assert_eq!(b.eval_rat(&rat(1, 1)), b.eval_rat(&rat(0, 1)));
        }
        let b1 = bernoulli_polynomial(1);
        assert_eq!(b1.eval_rat(&rat(1, 1)) - b1.eval_rat(&rat(0, 1)), rat(1, 1));
    }

    #[test]
    fn squarefree_split_cases() {
        let (s, m) = squarefree_split(&BigInt::from(12));
        assert_eq!((s, m), (BigInt::from(3), BigInt::from(2)));
        let (s, m) = squarefree_split(&BigInt::from(9));
        assert_eq!((s, m), (BigInt::from(1), BigInt::from(3)));
        let (s, m) = squarefree_split(&BigInt::from(7));
        assert_eq!((s, m), (BigInt::from(7), BigInt::from(1)));
    }

    #[test]
    fn low_order_members() {
        let basis = gram_schmidt_basis(2).unwrap();
        assert_eq!(basis.member(0).radicand(), &BigInt::from(1));
        assert_eq!(
            basis.member(0).rational_part(),
            &RatPoly::constant(rat(1, 1))
        );
        // phi_1 = sqrt(3) (-1 + 2x)
        assert_eq!(basis.member(1).radicand(), &BigInt::from(3));
        assert_eq!(
            basis.member(1).rational_part(),
            &RatPoly::from_coeffs(vec![rat(-1, 1), rat(2, 1)])
        );
        // phi_2 = sqrt(5) (1 - 6x + 6x^2)
        assert_eq!(basis.member(2).radicand(), &BigInt::from(5));
        assert_eq!(
            basis.member(2).rational_part(),
            &RatPoly::from_coeffs(vec![rat(1, 1), rat(-6, 1), rat(6, 1)])
        );
    }

    #[test]
    fn orthonormality_is_exact() {
        let basis = basis9();
        for i in 0..=9 {
            for j in 0..=9 {
                let vi = basis.member(i).rational_part();
                let vj = basis.member(j).rational_part();
                let cross = vi.inner_product(vj);
                if i == j {
                    // s * <v, v> must equal exactly 1
                    let s = Rat::from_integer(basis.member(i).radicand().clone());
                    assert!((s * cross).is_one(), "norm of member {i} is not exactly 1");
                } else {
                    assert!(cross.is_zero(), "members {i},{j} not orthogonal");
                }
            }
        }
    }

    #[test]
    fn degrees_and_leading_signs() {
        let basis = basis9();
        for k in 0..=9 {
            let rp = basis.member(k).rational_part();
            assert_eq!(rp.degree(), Some(k));
            assert!(rp.coeffs().last().unwrap().is_positive());
        }
    }

    #[test]
    fn eval_basis_endpoint_values() {
        let basis = gram_schmidt_basis(2).unwrap();
        let at0 = basis.eval_basis(0.0);
        assert_eq!(at0[0], 1.0);
        assert!((at0[1] + 3f64.sqrt()).abs() < 1e-15);
        let at_half = basis.eval_basis(0.5);
        assert!(at_half[1].abs() < 1e-15);
        let at1 = basis.eval_basis(1.0);
        assert!((at1[1] - 3f64.sqrt()).abs() < 1e-15);
        assert!((at1[2] - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn completeness_on_polynomials() {
        // projecting any degree <= n polynomial and resumming returns it exactly
        let basis = gram_schmidt_basis(5).unwrap();
        let p = RatPoly::from_coeffs(vec![
            rat(3, 7),
            rat(-1, 2),
            rat(0, 1),
            rat(5, 3),
            rat(-4, 1),
            rat(1, 6),
        ]);
        let mut resum = RatPoly::zero();
        for member in basis.members() {
            let v = member.rational_part();
            let s = Rat::from_integer(member.radicand().clone());
            // c_k = sqrt(s) <p, v>; c_k phi_k = s <p, v> v
            let coord = p.inner_product(v);
            resum = &resum + &v.scale(&(s * coord));
        }
        assert_eq!(resum, p);
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(matches!(
            gram_schmidt_basis(MAX_ORDER + 1),
            Err(BasisError::OrderTooLarge { .. })
        ));
        assert!(gram_schmidt_basis(MAX_ORDER).is_ok());
    }
}
