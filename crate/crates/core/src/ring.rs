//! Exact Laurent polynomials in `q` over arbitrary-precision rationals.
//!
//! [`LaurentPoly`] is the value type of every symbolic computation in the
//! crate. Terms live in a sorted map from exponent to a nonzero coefficient,
//! so the zero polynomial is the empty map and equality is term-wise.
//!
//! The canonical text form lists terms by ascending exponent:
//!
//! ```
//! use permajones::ring::LaurentPoly;
//!
//! let p: LaurentPoly = "-1/2*q^-1 + 1 + 3*q^2".parse().unwrap();
//! assert_eq!(p.to_string(), "-1/2*q^-1 + 1 + 3*q^2");
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;
pub type ComplexValue = Complex64;

/// `n/d` as an exact rational. Panics if `d == 0`.
pub fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The operations the permanent engines need from their scalars.
pub trait RingElement: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign_ref(&mut self, other: &Self);
    fn sub_assign_ref(&mut self, other: &Self);
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0)
    }

    /// The variable `q`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^exp`.
    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(Rational::one(), exp)
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(coeff: Rational, exp: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// Sums the given terms; repeated exponents are combined.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in terms {
            out.add_term(e, c);
        }
        out
    }

    /// Convenience constructor from `(exponent, integer coefficient)` pairs.
    pub fn from_int_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        Self::from_terms(terms.into_iter().map(|(e, c)| (e, Rational::from_integer(c.into()))))
    }

    fn add_term(&mut self, exp: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// If `self` is a single term `c*q^e`, returns `(e, c)`.
    pub fn as_monomial(&self) -> Option<(i64, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// The substitution `q -> q^-1`.
    pub fn invert_variable(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Rebuilds the term map, dropping zero coefficients.
    pub fn normalized(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone())))
    }

    /// Complex evaluation; nonnegative and negative exponents are each
    /// summed by Horner's rule (in `z` and `1/z` respectively).
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let Some(min) = self.min_exp() else {
            return Ok(Complex64::new(0.0, 0.0));
        };
        let max = self.max_exp().unwrap_or(0);
        if min < 0 && z == Complex64::new(0.0, 0.0) {
            return Err(Error::ZeroEvaluation);
        }
        let c = |e: i64| self.terms.get(&e).map_or(0.0, |r| r.to_f64().unwrap_or(f64::NAN));

        let mut pos = Complex64::new(0.0, 0.0);
        if max >= 0 {
            for e in (0..=max).rev() {
                pos = pos * z + c(e);
            }
        }
        let mut neg = Complex64::new(0.0, 0.0);
        if min < 0 {
            let w = z.inv();
            for k in (1..=-min).rev() {
                neg = neg * w + c(-k);
            }
            neg *= w;
        }
        Ok(pos + neg)
    }

    /// Exact evaluation at a rational point.
    pub fn eval_rational(&self, x: &Rational) -> Result<Rational> {
        if x.is_zero() && self.min_exp().is_some_and(|m| m < 0) {
            return Err(Error::ZeroEvaluation);
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                num_traits::pow(x.clone(), *e as usize)
            } else {
                num_traits::pow(x.recip(), (-e) as usize)
            };
            acc += c * p;
        }
        Ok(acc)
    }
}

impl RingElement for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn one() -> Self {
        LaurentPoly::one()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl RingElement for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl RingElement for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_assign_ref(&mut self, other: &Self) {
        *self -= other;
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl From<Rational> for LaurentPoly {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }
}

impl<'a> AddAssign<&'a LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &'a LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl<'a> SubAssign<&'a LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &'a LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl SubAssign for LaurentPoly {
    fn sub_assign(&mut self, rhs: LaurentPoly) {
        *self -= &rhs;
    }
}

impl<'a> MulAssign<&'a LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &'a LaurentPoly) {
        *self = &*self * rhs;
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += rhs;
        self
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        // monomial fast paths dominate in the permanent engines
        if let Some((e, c)) = rhs.as_monomial() {
            if c.is_one() {
                return self.shift(e);
            }
        }
        if let Some((e, c)) = self.as_monomial() {
            if c.is_one() {
                return rhs.shift(e);
            }
        }
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut acc = LaurentPoly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

impl<'a> Sum<&'a LaurentPoly> for LaurentPoly {
    fn sum<I: Iterator<Item = &'a LaurentPoly>>(iter: I) -> Self {
        let mut acc = LaurentPoly::zero();
        for p in iter {
            acc += p;
        }
        acc
    }
}

impl Product for LaurentPoly {
    fn product<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut acc = LaurentPoly::one();
        for p in iter {
            acc = &acc * &p;
        }
        acc
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mono = match e {
                0 => String::new(),
                1 => "q".to_string(),
                e => format!("q^{e}"),
            };
            if *e == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolyParser {
            src: s.as_bytes(),
            pos: 0,
        }
        .parse()
    }
}

struct PolyParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PolyParser<'_> {
    fn err<T>(&self, message: &str) -> Result<T> {
        Err(Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn parse(mut self) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero();
        self.skip_ws();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        while self.peek().is_some() {
            let mut negative = false;
            if !first {
                match self.peek() {
                    Some(b'+') => self.pos += 1,
                    Some(b'-') => {
                        negative = true;
                        self.pos += 1;
                    }
                    _ => return self.err("expected '+' or '-'"),
                }
                self.skip_ws();
            }
            if self.peek() == Some(b'-') {
                negative = !negative;
                self.pos += 1;
                self.skip_ws();
            }
            let (c, e) = self.term()?;
            acc.add_term(e, if negative { -c } else { c });
            first = false;
            self.skip_ws();
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<(Rational, i64)> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let c = self.coefficient()?;
                self.skip_ws();
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    Ok((c, self.monomial()?))
                } else {
                    Ok((c, 0))
                }
            }
            Some(b'q') => Ok((Rational::one(), self.monomial()?)),
            _ => self.err("expected a coefficient or 'q'"),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected digits");
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("ascii digits parse"))
    }

    fn coefficient(&mut self) -> Result<Rational> {
        let num = self.digits()?;
        self.skip_ws();
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den = self.digits()?;
            if den.is_zero() {
                return self.err("zero denominator");
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn monomial(&mut self) -> Result<i64> {
        if self.peek() != Some(b'q') {
            return self.err("expected 'q'");
        }
        self.pos += 1;
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let e = self.digits()?;
        let Some(e) = e.to_i64() else {
            self.pos = at;
            return self.err("exponent out of range");
        };
        Ok(if negative { -e } else { e })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverses() {
        assert!((LaurentPoly::q() + -LaurentPoly::q()).is_zero());
        let a = p("q - q^-1");
        let w = p("q^-1 - q");
        assert!((&a + &w).is_zero());
        let b = p("1/2*q^-1 + 1/2*q");
        assert_eq!(&b + &b, p("q^-1 + q"));
    }

    #[test]
    fn products() {
        let x = p("q^2 - 3 + 5/7*q^-4");
        assert_eq!(&LaurentPoly::one() * &x, x);
        let a = p("q - q^-1");
        let e = LaurentPoly::constant(rational(1, 2));
        assert_eq!(&a * &e, p("-1/2*q^-1 + 1/2*q"));
        let d = LaurentPoly::q();
        let c = p("-1/2*q");
        assert!((&(&d * &e) + &c).is_zero());
    }

    #[test]
    fn evaluation() {
        let two_cos = p("q^-1 + q");
        assert_eq!(
            two_cos.eval(Complex64::new(1.0, 0.0)).unwrap(),
            Complex64::new(2.0, 0.0)
        );
        let z = Complex64::from_polar(1.0, std::f64::consts::PI / 5.0);
        let v = two_cos.eval(z).unwrap();
        assert!((v.re - 1.618_033_988_7).abs() < 1e-9);
        assert!(v.im.abs() < 1e-12);
        let v = p("q - q^-1").eval(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(p("q^-1").eval(Complex64::new(0.0, 0.0)), Err(Error::ZeroEvaluation));
        assert_eq!(
            p("3 + q").eval(Complex64::new(0.0, 0.0)).unwrap(),
            Complex64::new(3.0, 0.0)
        );
        assert_eq!(p("3/4 - q^-2").eval_rational(&rational(2, 1)).unwrap(), rational(1, 2));
    }

    #[test]
    fn canonical_text() {
        for s in [
            "0",
            "1",
            "-1",
            "q",
            "-q",
            "q^-1 + q",
            "-1/2*q^-1 + 1 + 3*q^2",
            "q^-9 - q^-5 - 2*q",
        ] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("  q^2+  1 -q^-1 + -2 ").to_string(), "-q^-1 - 1 + q^2");
        assert_eq!(p("2/4*q"), p("1/2*q"));
        assert_eq!(p("q - q"), LaurentPoly::zero());
    }

    #[test]
    fn parse_errors() {
        for s in ["", "q^", "1/0", "2 q", "q + ", "x", "3*"] {
            assert!(matches!(s.parse::<LaurentPoly>(), Err(Error::Syntax { .. })), "{s:?}");
        }
        let Err(Error::Syntax { position, .. }) = "1 + x".parse::<LaurentPoly>() else {
            panic!()
        };
        assert_eq!(position, 4);
    }

    #[test]
    fn mirror_and_shift() {
        let x = p("q^-3 + 2 - q^5");
        assert_eq!(x.invert_variable(), p("-q^-5 + 2 + q^3"));
        assert_eq!(x.shift(3), p("1 + 2*q^3 - q^8"));
        assert_eq!(p("q + q^-1").pow(2), p("q^-2 + 2 + q^2"));
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-10i64..=10, -10i64..=10, 1i64..=4), 0..6)
            .prop_map(|ts| LaurentPoly::from_terms(ts.into_iter().map(|(e, n, d)| (e, rational(n, d)))))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn eval_is_a_homomorphism(a in small_poly(), b in small_poly(), re in -1.5f64..1.5, im in -1.5f64..1.5) {
            let z = Complex64::new(re, im);
            prop_assume!(z.norm() > 0.3);
            let prod = &a * &b;
            let lhs = prod.eval(z).unwrap();
            let rhs = a.eval(z).unwrap() * b.eval(z).unwrap();
            // relative to the magnitude of the summed terms
            let term_scale = |p: &LaurentPoly| -> f64 {
                p.terms().map(|(e, c)| c.to_f64().unwrap().abs() * z.norm().powi(e as i32)).sum()
            };
            let scale = term_scale(&prod).max(term_scale(&a) * term_scale(&b)).max(f64::MIN_POSITIVE);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * scale, "{} vs {}", lhs, rhs);
        }

        #[test]
        fn normalization_idempotent(a in small_poly()) {
            prop_assert_eq!(a.normalized(), a.clone());
            prop_assert!(a.terms().all(|(_, c)| !c.is_zero()));
        }

        #[test]
        fn text_round_trip(a in small_poly()) {
            let s = a.to_string();
            let back: LaurentPoly = s.parse().unwrap();
            prop_assert_eq!(&back, &a);
            prop_assert_eq!(back.to_string(), s);
        }
    }
}
