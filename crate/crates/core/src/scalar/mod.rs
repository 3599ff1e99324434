//! Exact arithmetic in the field Q(q) of rational functions in one variable.

mod laurent;
mod parse;
mod poly;

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::{BigInt, BigRational, Zero};
use thiserror::Error;

pub use laurent::LaurentPoly;
pub use parse::parse_scalar;

/// Exact rational number, the coefficient ring of [`LaurentPoly`].
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot evaluate at q = 0")]
    ZeroEvaluationPoint,
    #[error("denominator vanishes at q = {0}")]
    VanishingDenominator(Rational),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// An element of Q(q), always stored in canonical form: numerator and
/// denominator are coprime, the denominator's lowest exponent is 0 and its
/// lowest coefficient is 1. Derived equality is therefore field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Scalar { num: p, den: LaurentPoly::one() }
    }

    /// The formal variable `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    pub fn q_pow(k: i32) -> Self {
        Self::from_poly(LaurentPoly::q_pow(k))
    }

    /// `num / den` in canonical form.
    pub fn from_fraction(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Total number of stored terms; used as a cost measure for pivoting.
    pub fn term_count(&self) -> usize {
        self.num.term_count() + self.den.term_count()
    }

    fn reduce(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        let ln = num.lowest_exponent().unwrap();
        let ld = den.lowest_exponent().unwrap();
        let shift = ln - ld;
        if den.term_count() == 1 {
            let c = den.lowest_coefficient().unwrap().recip();
            return Scalar { num: num.scale(&c).shift(-ld), den: LaurentPoly::one() };
        }
        let (_, n) = num.to_dense();
        let (_, d) = den.to_dense();
        let g = poly::gcd(&n, &d);
        let (n, d) = if g.len() > 1 {
            (poly::div_exact(&n, &g), poly::div_exact(&d, &g))
        } else {
            (n, d)
        };
        let c = d[0].recip();
        let n = LaurentPoly::from_dense(shift, n).scale(&c);
        let d = LaurentPoly::from_dense(0, d).scale(&c);
        Scalar { num: n, den: d }
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Self, ScalarError> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents invert (panics on `0^-k`).
    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inv().expect("zero to a negative power") } else { self.clone() };
        let mut acc = Scalar::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            k >>= 1;
            if k > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Exact value at `q = q0`.
    pub fn eval_at(&self, q0: &Rational) -> Result<Rational, ScalarError> {
        if q0.is_zero() {
            return Err(ScalarError::ZeroEvaluationPoint);
        }
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(ScalarError::VanishingDenominator(q0.clone()));
        }
        Ok(self.num.eval(q0) / d)
    }

    /// Rational constant, if this scalar does not depend on `q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() && self.num.is_constant() {
            Some(self.num.coefficient(0))
        } else {
            None
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<LaurentPoly> for Scalar {
    fn from(p: LaurentPoly) -> Self {
        Scalar::from_poly(p)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return Scalar::reduce(&self.num + &rhs.num, self.den.clone());
        }
        Scalar::reduce(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return Scalar::from_poly(&self.num * &rhs.num);
        }
        Scalar::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

/// Panics on division by zero; use [`Scalar::checked_div`] for a `Result`.
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The q-integer `(n)_nu = 1 + nu + ... + nu^(n-1)`; equals `n` when `nu = 1`.
pub fn q_int(n: u32, nu: &Scalar) -> Scalar {
    if nu.is_one() {
        return Scalar::from_int(n as i64);
    }
    let mut acc = Scalar::zero();
    let mut p = Scalar::one();
    for _ in 0..n {
        acc += &p;
        p = &p * nu;
    }
    acc
}

/// `(n)_nu! = (1)_nu (2)_nu ... (n)_nu`, with `(0)_nu! = 1`.
pub fn q_factorial(n: u32, nu: &Scalar) -> Scalar {
    (1..=n).map(|k| q_int(k, nu)).product()
}

/// Gaussian binomial `(n)! / ((k)! (n-k)!)`; zero outside `0 <= k <= n`.
pub fn q_binomial(n: i64, k: i64, nu: &Scalar) -> Scalar {
    if k < 0 || n < 0 || k > n {
        return Scalar::zero();
    }
    let (n, k) = (n as u32, k as u32);
    let den = &q_factorial(k, nu) * &q_factorial(n - k, nu);
    &q_factorial(n, nu) / &den
}

/// `(-1)^k` as a scalar.
pub fn sign(k: i64) -> Scalar {
    if k.rem_euclid(2) == 0 {
        Scalar::one()
    } else {
        Scalar::from_int(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn s(x: &str) -> Scalar {
        x.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn basic_arithmetic() {
        assert_eq!(Scalar::q() + Scalar::q(), s("2*q"));
        assert_eq!(s("1 - q^2").checked_div(&s("1 - q")).unwrap(), s("1 + q"));
        assert_eq!(Scalar::q_pow(-1) * Scalar::q(), Scalar::one());
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn canonical_denominator() {
        let x = s("(2 + 2*q)/(4*q^3 - 4*q^5)");
        assert_eq!(x.denominator().lowest_exponent(), Some(0));
        assert!(x.denominator().lowest_coefficient().unwrap().is_one());
        assert_eq!(x, s("(1/2)*q^-3/(1 - q)"));
    }

    #[test]
    fn q_integers() {
        let q = Scalar::q();
        assert_eq!(q_int(0, &q), Scalar::zero());
        assert_eq!(q_int(2, &q), s("1 + q"));
        assert_eq!(q_int(3, &Scalar::q_pow(-2)), s("1 + q^-2 + q^-4"));
        assert_eq!(q_int(5, &Scalar::one()), Scalar::from_int(5));
        assert_eq!(q_factorial(0, &q), Scalar::one());
        assert_eq!(q_factorial(2, &q), s("1 + q"));
        assert_eq!(q_factorial(3, &q), s("(1 + q)*(1 + q + q^2)"));
    }

    #[test]
    fn q_binomials() {
        let q = Scalar::q();
        assert_eq!(q_binomial(2, 1, &q), s("1 + q"));
        assert_eq!(q_binomial(5, 5, &q), Scalar::one());
        let b = q_binomial(4, 2, &q);
        assert_eq!(b, s("(1 + q^2)*(1 + q + q^2)"));
        assert!(b.is_laurent());
        assert_eq!(q_binomial(3, 4, &q), Scalar::zero());
        assert_eq!(q_binomial(3, -1, &q), Scalar::zero());
    }

    #[test]
    fn pascal_recurrence() {
        for nu in [Scalar::q(), Scalar::q_pow(-2), s("2*q + 1")] {
            for n in 2..=8i64 {
                for k in 1..n {
                    let lhs = q_binomial(n, k, &nu);
                    let rhs = q_binomial(n - 1, k - 1, &nu) + nu.pow(k as i32) * q_binomial(n - 1, k, &nu);
                    assert_eq!(lhs, rhs, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn gauss_alternating_sum_vanishes() {
        let nu = Scalar::q_pow(-2);
        for p in 1..=8i64 {
            let total: Scalar = (0..=p)
                .map(|k| sign(k) * nu.pow((k * (k - 1) / 2) as i32) * q_binomial(p, k, &nu))
                .sum();
            assert!(total.is_zero(), "p={p}");
        }
    }

    #[test]
    fn evaluation() {
        assert_eq!(s("1 + q").eval_at(&rat(2, 1)).unwrap(), rat(3, 1));
        assert_eq!(q_int(2, &Scalar::q_pow(-2)).eval_at(&rat(2, 1)).unwrap(), rat(5, 4));
        assert_eq!(
            s("1/(1 - q)").eval_at(&rat(1, 1)),
            Err(ScalarError::VanishingDenominator(rat(1, 1)))
        );
        assert_eq!(s("q").eval_at(&rat(0, 1)), Err(ScalarError::ZeroEvaluationPoint));
    }

    #[test]
    fn display_is_highest_exponent_first() {
        assert_eq!(s("q^-4 + q^-2 + 1").to_string(), "1 + q^-2 + q^-4");
        assert_eq!(s("3/2*q - q^2").to_string(), "-q^2 + 3/2*q");
        assert_eq!(s("1/(1 + q)").to_string(), "(1)/(q + 1)");
        assert_eq!(Scalar::zero().to_string(), "0");
    }
}
