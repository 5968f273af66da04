//! Exact univariate polynomial arithmetic over arbitrary-precision rationals,
//! plus a small floating-point polynomial for solver output.
//!
//! Coefficients are dense, ascending by power. A nonzero polynomial never stores
//! a zero leading coefficient; the zero polynomial is the empty list. Basis
//! construction depends on this arithmetic being exact: Gram-Schmidt over f64
//! loses orthogonality well before order 9, and coefficient-list equality is
//! only a meaningful test when every value is canonical.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = BigRational;

/// Rational from an integer pair. Panics if `den` is zero.
pub fn rat(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

/// Dense univariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// Lifts float coefficients into exact rationals. Every finite f64 is a
    /// dyadic rational, so this loses nothing; NaN or infinity panics.
    pub fn from_f64_coeffs(coeffs: &[f64]) -> Self {
        Self::from_coeffs(
            coeffs
                .iter()
                .map(|&c| Rat::from_float(c).expect("non-finite coefficient"))
                .collect(),
        )
    }

    /// The monomial x^k.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = Rat::from_integer(BigInt::from(1));
        RatPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of x^k; zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, a)| a * Rat::from_integer(BigInt::from(i as i64 + 1)))
            .collect();
        RatPoly { coeffs }
    }

    /// Antiderivative vanishing at zero: result(x) = integral of self from 0 to x.
    pub fn integrate_from_zero(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rat::zero());
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a / Rat::from_integer(BigInt::from(i as i64 + 1)));
        }
        RatPoly { coeffs }
    }

    /// Exact value of the integral over [0, 1].
    pub fn definite_integral_01(&self) -> Rat {
        let mut total = Rat::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            total += a / Rat::from_integer(BigInt::from(i as i64 + 1));
        }
        total
    }

    /// L2[0,1] inner product: integral of self * other over [0, 1].
    pub fn inner_product(&self, other: &Self) -> Rat {
        (self * other).definite_integral_01()
    }

    /// Exact Horner evaluation.
    pub fn eval_rat(&self, x: &Rat) -> Rat {
        let mut y = Rat::zero();
        for a in self.coeffs.iter().rev() {
            y = y * x + a;
        }
        y
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut y = 0.0;
        for a in self.coeffs.iter().rev() {
            y = y * x + a.to_f64().unwrap_or(f64::NAN);
        }
        y
    }

    /// Exact composition with an affine argument: result(x) = self(a + h*x).
    pub fn compose_affine(&self, a: &Rat, h: &Rat) -> Self {
        let arg = RatPoly::from_coeffs(vec![a.clone(), h.clone()]);
        let mut result = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            result = &(&result * &arg) + &RatPoly::constant(c.clone());
        }
        result
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|a| a.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// True when every coefficient has denominator 1.
    pub fn is_integer(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        // the leading product of two nonzero leading coefficients is nonzero
        RatPoly { coeffs }
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Floating-point polynomial in the power basis, ascending coefficients.
/// Carried by solver output; exactness is not promised, but the integration
/// and affine-composition routines introduce only rounding error.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerPoly {
    coeffs: Vec<f64>,
}

impl PowerPoly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        PowerPoly { coeffs }
    }

    pub fn zero() -> Self {
        PowerPoly { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut y = 0.0;
        for a in self.coeffs.iter().rev() {
            y = y * x + a;
        }
        y
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        PowerPoly {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, a)| a * (i as f64 + 1.0))
                .collect(),
        }
    }

    /// Antiderivative vanishing at zero.
    pub fn integrate_from_zero(&self) -> Self {
        if self.coeffs.is_empty() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        for (i, a) in self.coeffs.iter().enumerate() {
            coeffs.push(a / (i as f64 + 1.0));
        }
        PowerPoly { coeffs }
    }

    pub fn add_scaled(&mut self, s: f64, other: &[f64]) {
        if self.coeffs.len() < other.len() {
            self.coeffs.resize(other.len(), 0.0);
        }
        for (i, b) in other.iter().enumerate() {
            self.coeffs[i] += s * b;
        }
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
    }

    /// result(x) = self(c0 + c1*x), by Horner over the affine argument.
    pub fn compose_affine(&self, c0: f64, c1: f64) -> Self {
        let mut result: Vec<f64> = Vec::new();
        for &c in self.coeffs.iter().rev() {
            // result = result * (c0 + c1 x) + c
            let mut next = vec![0.0; result.len() + 1];
            for (i, &a) in result.iter().enumerate() {
                next[i] += a * c0;
                next[i + 1] += a * c1;
            }
            if next.is_empty() {
                next.push(c);
            } else {
                next[0] += c;
            }
            result = next;
        }
        PowerPoly { coeffs: result }
    }

    pub fn scale(&self, s: f64) -> Self {
        PowerPoly {
            coeffs: self.coeffs.iter().map(|a| a * s).collect(),
        }
    }

    /// Rounded display form, e.g. "0.50000*x^2 - 0.33333*x^3". The zero
    /// polynomial prints as "0".
    pub fn display_decimals(&self, decimals: usize) -> String {
        let mut out = String::new();
        for (k, &a) in self.coeffs.iter().enumerate() {
            let rounded = format!("{:.*}", decimals, a.abs());
            if rounded.trim_matches(|c| c == '0' || c == '.').is_empty() && a == 0.0 {
                continue;
            }
            let sign = if a < 0.0 { "-" } else { "+" };
            if out.is_empty() {
                if a < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            out.push_str(&rounded);
            match k {
                0 => {}
                1 => out.push_str("*x"),
                _ => out.push_str(&format!("*x^{k}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Full-precision display form with one coefficient per line.
    pub fn display_full(&self) -> String {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, a)| format!("  x^{k}: {a:e}"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(coeffs: &[(i64, i64)]) -> RatPoly {
        RatPoly::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn additive_inverse_cancels_to_empty() {
        let p = poly(&[(1, 1), (1, 1)]);
        let q = poly(&[(-1, 1), (-1, 1)]);
        let sum = &p + &q;
        assert!(sum.is_zero());
        assert!(sum.coeffs().is_empty());
    }

    #[test]
    fn disjoint_degree_merge() {
        let p = RatPoly::monomial(2);
        let q = RatPoly::monomial(1);
        assert_eq!(&p + &q, poly(&[(0, 1), (1, 1), (1, 1)]));
    }

    #[test]
    fn b1_plus_b1() {
        // B1 = x - 1/2; doubling gives 2x - 1
        let b1 = poly(&[(-1, 2), (1, 1)]);
        assert_eq!(&b1 + &b1, poly(&[(-1, 1), (2, 1)]));
    }

    #[test]
    fn b1_squared() {
        let b1 = poly(&[(-1, 2), (1, 1)]);
        assert_eq!(&b1 * &b1, poly(&[(1, 4), (-1, 1), (1, 1)]));
    }

    #[test]
    fn mul_by_zero_annihilates() {
        let p = poly(&[(3, 1), (0, 1), (7, 2)]);
        assert!((&p * &RatPoly::zero()).is_zero());
    }

    #[test]
    fn phi1_rational_part_squared() {
        // (2x - 1)^2 = 4x^2 - 4x + 1; with the sqrt(3) factors multiplied out,
        // 3*(2x-1)^2 = 12x^2 - 12x + 3
        let v1 = poly(&[(-1, 1), (2, 1)]);
        let sq = (&v1 * &v1).scale(&rat(3, 1));
        assert_eq!(sq, poly(&[(3, 1), (-12, 1), (12, 1)]));
    }

    #[test]
    fn integrate_constant_gives_x() {
        assert_eq!(
            RatPoly::constant(rat(1, 1)).integrate_from_zero(),
            RatPoly::monomial(1)
        );
    }

    #[test]
    fn integrate_b2_gives_b3_over_3() {
        let b2 = poly(&[(1, 6), (-1, 1), (1, 1)]);
        let b3_over_3 = poly(&[(0, 1), (1, 6), (-1, 2), (1, 3)]);
        assert_eq!(b2.integrate_from_zero(), b3_over_3);
    }

    #[test]
    fn integrate_zero_is_zero() {
        assert!(RatPoly::zero().integrate_from_zero().is_zero());
    }

    #[test]
    fn definite_integrals() {
        let b1 = poly(&[(-1, 2), (1, 1)]);
        assert!(b1.definite_integral_01().is_zero());
        let b4 = poly(&[(-1, 30), (0, 1), (1, 1), (-2, 1), (1, 1)]);
        assert!(b4.definite_integral_01().is_zero());
        assert_eq!(RatPoly::monomial(2).definite_integral_01(), rat(1, 3));
    }

    #[test]
    fn eval_cases() {
        let b2 = poly(&[(1, 6), (-1, 1), (1, 1)]);
        assert_eq!(b2.eval_f64(1.0) - b2.eval_f64(0.0), 0.0);
        assert_eq!(b2.eval_rat(&rat(1, 2)), rat(-1, 12));
        assert_eq!(RatPoly::zero().eval_f64(7.0), 0.0);
    }

    #[test]
    fn derivative_inverts_integration() {
        let p = poly(&[(5, 3), (-2, 7), (0, 1), (11, 4)]);
        assert_eq!(p.integrate_from_zero().derivative(), p);
    }

    #[test]
    fn compose_affine_shifts_argument() {
        // p(x) = x^2; p(1 + 2x) = 1 + 4x + 4x^2
        let p = RatPoly::monomial(2);
        assert_eq!(
            p.compose_affine(&rat(1, 1), &rat(2, 1)),
            poly(&[(1, 1), (4, 1), (4, 1)])
        );
    }

    #[test]
    fn power_poly_roundtrip() {
        let p = PowerPoly::new(vec![1.0, -2.0, 0.5]);
        assert_eq!(p.derivative().coeffs(), &[-2.0, 1.0]);
        assert_eq!(
            p.integrate_from_zero().coeffs(),
            &[0.0, 1.0, -1.0, 0.5 / 3.0]
        );
        let shifted = p.compose_affine(1.0, 1.0); // p(1 + x) = -0.5 - x + 0.5 x^2
        assert!((shifted.eval(0.0) - p.eval(1.0)).abs() < 1e-15);
        assert!((shifted.eval(2.5) - p.eval(3.5)).abs() < 1e-12);
    }

    #[test]
    fn display_decimals_matches_expected_shape() {
        let p = PowerPoly::new(vec![0.0, -0.000093, 0.250571]);
        assert_eq!(p.display_decimals(5), "-0.00009*x + 0.25057*x^2");
        assert_eq!(PowerPoly::zero().display_decimals(5), "0");
    }

    fn arb_poly() -> impl Strategy<Value = RatPoly> {
        prop::collection::vec((-20i64..=20, 1i64..=8), 0..6)
            .prop_map(|cs| RatPoly::from_coeffs(cs.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn add_commutes(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(&p + &q, &q + &p);
        }

        #[test]
        fn mul_commutes(p in arb_poly(), q in arb_poly()) {
            prop_assert_eq!(&p * &q, &q * &p);
        }

        #[test]
        fn mul_associates(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        }

        #[test]
        fn mul_distributes(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        }

        #[test]
        fn degree_of_product_adds(p in arb_poly(), q in arb_poly()) {
            prop_assume!(!p.is_zero() && !q.is_zero());
            prop_assert_eq!(
                (&p * &q).degree().unwrap(),
                p.degree().unwrap() + q.degree().unwrap()
            );
        }

        #[test]
        fn derivative_undoes_integrate(p in arb_poly()) {
            prop_assert_eq!(p.integrate_from_zero().derivative(), p);
        }
    }
}
