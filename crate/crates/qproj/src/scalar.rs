//! Exact coefficient fields.
//!
//! Two fields are provided behind the [`Coeff`] trait: [`Scalar`], the rational
//! function field `Q(t)` in canonical reduced form, and [`Q`], the rationals,
//! used when the deformation parameter is specialised to a rational value.
//! The parameter `q` is always `t^N`, so every weight pairing `(λ, μ)` with
//! `N·(λ, μ) ∈ Z` exponentiates to an integral power of `t`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

/// Rational numbers.
pub type Q = BigRational;

/// Value of the invariant bilinear form; always has denominator dividing `N`.
pub type Pairing = Ratio<i64>;

/// Errors raised by the scalar layer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("pairing value {value} times dimension {dim} is not an integer")]
    NonIntegralPairing { value: String, dim: usize },
    #[error("evaluation at t = {t0} hits a zero of the denominator {den}")]
    Pole { t0: String, den: String },
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Operations every coefficient field of the engine supports.
pub trait Coeff: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(v: &Q) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;
    /// Integral power of this element, negative exponents allowed for nonzero elements.
    fn powi(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
    fn add_assign(&mut self, o: &Self) {
        *self = self.add(o);
    }
}

impl Coeff for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(v: &Q) -> Self {
        v.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o;
    }
}

/// Dense integer polynomial in `t`, lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    c: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }
    pub fn constant(v: BigInt) -> Self {
        Poly::from_coeffs(vec![v])
    }
    /// The monomial `a·t^k`.
    pub fn monomial(a: BigInt, k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = a;
        Poly::from_coeffs(c)
    }
    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }
    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }
    fn lead(&self) -> &BigInt {
        self.c.last().expect("leading coefficient of zero polynomial")
    }
    /// Lowest exponent with a nonzero coefficient.
    fn valuation(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }
    fn term_count(&self) -> usize {
        self.c.iter().filter(|x| !x.is_zero()).count()
    }
    fn shift_down(&self, k: usize) -> Poly {
        Poly { c: self.c[k..].to_vec() }
    }
    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.c.get(i);
            let b = o.c.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(c)
    }
    pub fn neg(&self) -> Poly {
        Poly { c: self.c.iter().map(|x| -x).collect() }
    }
    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }
    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Poly::from_coeffs(c)
    }
    fn scale(&self, k: &BigInt) -> Poly {
        Poly::from_coeffs(self.c.iter().map(|x| x * k).collect())
    }
    fn div_scalar_exact(&self, k: &BigInt) -> Poly {
        Poly { c: self.c.iter().map(|x| x / k).collect() }
    }
    /// Gcd of the coefficients, positive.
    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }
    fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut p = self.div_scalar_exact(&self.content());
        if p.lead().is_negative() {
            p = p.neg();
        }
        p
    }
    /// Pseudo-remainder of `self` by `d`.
    fn prem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let ld = d.lead().clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let lr = r.lead().clone();
            let shifted = Poly::monomial(lr, rd - dd).mul(d);
            r = r.scale(&ld).sub(&shifted);
        }
        r
    }
    /// Primitive gcd with positive leading coefficient.
    fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = o.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = r.primitive();
        }
        a
    }
    /// Exact division, `d` must divide `self` over the integers.
    fn div_exact(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let mut qc = vec![BigInt::zero(); self.c.len().saturating_sub(dd).max(1)];
        let ld = d.lead();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let (quo, rem) = r.lead().div_rem(ld);
            debug_assert!(rem.is_zero(), "inexact polynomial division");
            qc[rd - dd] = quo.clone();
            r = r.sub(&Poly::monomial(quo, rd - dd).mul(d));
        }
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Poly::from_coeffs(qc)
    }
    /// Value at a rational point.
    pub fn eval(&self, t0: &Q) -> Q {
        let mut acc = <Q as Zero>::zero();
        for a in self.c.iter().rev() {
            acc = acc * t0 + Q::from_integer(a.clone());
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match (k, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{k}")?,
                (_, false) => write!(f, "{mag}*t^{k}")?,
            }
        }
        Ok(())
    }
}

/// Element of `Q(t)` in canonical form: numerator and denominator are integer
/// polynomials, coprime over `Q[t]`, jointly primitive, with positive leading
/// coefficient in the denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    /// Builds `num/den` and brings it to canonical form.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar { num, den: Poly::constant(BigInt::one()) };
        }
        let v = num.valuation().min(den.valuation());
        let (mut num, mut den) = (num.shift_down(v), den.shift_down(v));
        if num.term_count() > 1 && den.term_count() > 1 {
            let g = num.gcd(&den);
            if g.degree().unwrap_or(0) > 0 {
                num = num.div_exact(&g);
                den = den.div_exact(&g);
            }
        }
        let g = num.content().gcd(&den.content());
        let g = if den.lead().is_negative() { -g } else { g };
        if !g.is_one() {
            num = num.div_scalar_exact(&g);
            den = den.div_scalar_exact(&g);
        }
        Scalar { num, den }
    }
    /// The parameter `t` itself.
    pub fn t() -> Self {
        Scalar::t_pow(1)
    }
    /// The Laurent monomial `t^e`.
    pub fn t_pow(e: i64) -> Self {
        let k = e.unsigned_abs() as usize;
        let m = Poly::monomial(BigInt::one(), k);
        let one = Poly::constant(BigInt::one());
        if e >= 0 {
            Scalar { num: m, den: one }
        } else {
            Scalar { num: one, den: m }
        }
    }
    pub fn numerator(&self) -> &Poly {
        &self.num
    }
    pub fn denominator(&self) -> &Poly {
        &self.den
    }
    /// Exact value at `t = t0`.
    pub fn eval_at(&self, t0: &Q) -> Result<Q, ScalarError> {
        let d = self.den.eval(t0);
        if Zero::is_zero(&d) {
            return Err(ScalarError::Pole { t0: t0.to_string(), den: self.den.to_string() });
        }
        Ok(self.num.eval(t0) / d)
    }
    /// Parses the canonical text form produced by `Display`.
    pub fn parse(s: &str) -> Result<Self, ScalarError> {
        let err = || ScalarError::Parse(s.to_string());
        let s = s.trim();
        let (n, d) = split_fraction(s).ok_or_else(err)?;
        let num = parse_poly(n).ok_or_else(err)?;
        let den = match d {
            Some(d) => parse_poly(d).ok_or_else(err)?,
            None => Poly::constant(BigInt::one()),
        };
        if den.is_zero() {
            return Err(err());
        }
        Ok(Scalar::new(num, den))
    }
}

fn split_fraction(s: &str) -> Option<(&str, Option<&str>)> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '/' if depth == 0 => return Some((strip_parens(&s[..i]), Some(strip_parens(&s[i + 1..])))),
            _ => {}
        }
    }
    Some((strip_parens(s), None))
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s)
}

fn parse_poly(s: &str) -> Option<Poly> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let mut acc = Poly::zero();
    let mut terms = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        if (ch == '+' || ch == '-') && i > 0 {
            terms.push(&s[start..i]);
            start = i;
        }
    }
    terms.push(&s[start..]);
    for term in terms {
        let (sign, body) = match term.as_bytes().first()? {
            b'-' => (-1, &term[1..]),
            b'+' => (1, &term[1..]),
            _ => (1, term),
        };
        let (coef, var) = match body.split_once('*') {
            Some((c, v)) => (c.parse::<BigInt>().ok()?, Some(v)),
            None if body.starts_with('t') => (BigInt::one(), Some(body)),
            None => (body.parse::<BigInt>().ok()?, None),
        };
        let k = match var {
            None => 0,
            Some("t") => 1,
            Some(v) => v.strip_prefix("t^")?.parse::<usize>().ok()?,
        };
        acc = acc.add(&Poly::monomial(coef * sign, k));
    }
    Some(acc)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Poly| {
            if p.term_count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.degree() == Some(0) && self.den.lead().is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::constant(BigInt::one()) }
    }
    fn one() -> Self {
        Scalar::from_i64(1)
    }
    fn from_i64(v: i64) -> Self {
        Scalar::new(Poly::constant(BigInt::from(v)), Poly::constant(BigInt::one()))
    }
    fn from_rational(v: &Q) -> Self {
        Scalar::new(Poly::constant(v.numer().clone()), Poly::constant(v.denom().clone()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Scalar::new(self.num.add(&o.num), self.den.clone());
        }
        Scalar::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        Scalar::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
    fn neg(&self) -> Self {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar::new(self.den.clone(), self.num.clone()))
        }
    }
    fn powi(&self, e: i64) -> Self {
        if self.num.term_count() == 1
            && self.den.term_count() == 1
            && self.num.lead().is_one()
            && self.den.lead().is_one()
        {
            let k = self.num.degree().unwrap_or(0) as i64 - self.den.degree().unwrap_or(0) as i64;
            return Scalar::t_pow(k * e);
        }
        let mut base = if e < 0 { self.inv().expect("negative power of zero") } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Scalar::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// The value of the deformation parameter and the rank data it is used with.
#[derive(Clone, Debug)]
pub struct Param<F: Coeff> {
    /// Dimension `N` of the defining representation.
    pub n: usize,
    /// The parameter `t`, with `q = t^N`.
    pub t: F,
}

impl<F: Coeff> Param<F> {
    pub fn new(n: usize, t: F) -> Self {
        Param { n, t }
    }
    /// `q^p = t^{N·p}`.
    pub fn qpow(&self, p: Pairing) -> F {
        self.t.powi(integral_exponent(p, self.n).expect("pairing not in (1/N)Z"))
    }
}

impl Param<Scalar> {
    pub fn symbolic(n: usize) -> Self {
        Param::new(n, Scalar::t())
    }
}

impl Param<Q> {
    pub fn rational(n: usize, t0: Q) -> Self {
        Param::new(n, t0)
    }
}

fn integral_exponent(p: Pairing, n: usize) -> Option<i64> {
    let e = p * Pairing::from_integer(n as i64);
    e.is_integer().then(|| e.to_integer())
}

/// `q^p = t^{N·p}` as a canonical [`Scalar`].
pub fn qpow(p: Pairing, n: usize) -> Result<Scalar, ScalarError> {
    integral_exponent(p, n)
        .map(Scalar::t_pow)
        .ok_or_else(|| ScalarError::NonIntegralPairing { value: p.to_string(), dim: n })
}

/// Parses `NUM/DEN` or an integer into a rational.
pub fn parse_rational(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            (!b.is_zero()).then(|| Q::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

/// Small helper used in diagnostics: value of a rational as `f64`.
pub fn approx(q: &Q) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn qpow_examples() {
        assert_eq!(qpow(Pairing::from_integer(0), 2).unwrap(), Scalar::one());
        assert_eq!(qpow(Pairing::new(1, 2), 2).unwrap(), Scalar::t());
        assert_eq!(qpow(Pairing::from_integer(2), 2).unwrap(), Scalar::t_pow(4));
        assert!(qpow(Pairing::new(1, 3), 2).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Scalar::t().eval_at(&q(1, 2)).unwrap(), q(1, 2));
        let s = Scalar::new(
            Poly::from_coeffs(vec![(-1).into(), 0.into(), 1.into()]),
            Poly::from_coeffs(vec![(-1).into(), 1.into()]),
        );
        assert_eq!(s.eval_at(&q(1, 1)).unwrap(), q(2, 1));
        assert_eq!(Scalar::t_pow(-4).eval_at(&q(2, 1)).unwrap(), q(1, 16));
        let pole = Scalar::new(Poly::constant(1.into()), Poly::from_coeffs(vec![(-1).into(), 1.into()]));
        assert!(matches!(pole.eval_at(&q(1, 1)), Err(ScalarError::Pole { .. })));
    }

    #[test]
    fn display_parse_round_trip() {
        let a = Scalar::t_pow(3).add(&Scalar::from_i64(-2)).mul(&Scalar::t_pow(-2).add(&Scalar::one()).inv().unwrap());
        let s = a.to_string();
        assert_eq!(Scalar::parse(&s).unwrap(), a);
        assert_eq!(Scalar::t_pow(-2).to_string(), "1/t^2");
    }
}
