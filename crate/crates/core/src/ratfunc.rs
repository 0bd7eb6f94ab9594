//! Rational functions in `s = q^{1/2}` with rational coefficients.
//!
//! This field lets rewriting systems and matrix elements be computed once,
//! for a formal `q`, and specialised afterwards.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Signed;

use crate::poly::UPoly;
use crate::scalar::Scalar;

type P = UPoly<BigRational>;

/// `num / den` with coprime integer-coefficient parts, no common integer
/// content and a positive leading coefficient in the denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunc {
    num: P,
    den: P,
}

impl RatFunc {
    pub fn new(num: P, den: P) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc {
                num,
                den: P::constant(BigRational::one()),
            };
        }
        let g = num.gcd(&den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let mut l = BigInt::from(1);
        let mut content = BigInt::from(0);
        for c in n.coeffs().iter().chain(d.coeffs()) {
            l = l.lcm(c.denom());
        }
        for c in n.coeffs().iter().chain(d.coeffs()) {
            content = content.gcd(&(c * &l).to_integer());
        }
        let mut f = BigRational::new(l, content);
        if d.lead().is_negative() {
            f = -f;
        }
        RatFunc {
            num: n.scale(&f),
            den: d.scale(&f),
        }
    }

    pub fn from_poly(num: P) -> Self {
        RatFunc::new(num, P::constant(BigRational::one()))
    }

    /// The generator `s`.
    pub fn s() -> Self {
        Self::from_poly(P::x())
    }

    /// `q = s^2`.
    pub fn q() -> Self {
        Self::s_pow(2)
    }

    /// `s^k` for any integer `k`.
    pub fn s_pow(k: i64) -> Self {
        let m = P::monomial(BigRational::one(), k.unsigned_abs() as usize);
        if k >= 0 {
            Self::from_poly(m)
        } else {
            RatFunc::new(P::constant(BigRational::one()), m)
        }
    }

    pub fn numer(&self) -> &P {
        &self.num
    }

    pub fn denom(&self) -> &P {
        &self.den
    }

    /// Rational value, if this is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0) {
            Some(self.num.coeff(0) / self.den.coeff(0))
        } else {
            None
        }
    }

    /// Substitute a value for `s`. Returns `None` when the denominator vanishes.
    pub fn eval<G: Scalar>(&self, s: &G) -> Option<G> {
        let d = self.den.eval_with(s, G::from_rational);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_with(s, G::from_rational) / d)
    }

    /// Returns `(c, k)` if the denominator is `c s^k`.
    fn monomial_den(&self) -> Option<(BigRational, usize)> {
        let k = self.den.degree()?;
        if self.den.coeffs()[..k].iter().all(|c| c.is_zero()) {
            Some((self.den.lead(), k))
        } else {
            None
        }
    }
}

fn fmt_q_power(e: i64) -> String {
    if e == 0 {
        String::new()
    } else if e == 2 {
        "q".to_string()
    } else if e % 2 == 0 && e > 0 {
        format!("q^{}", e / 2)
    } else if e % 2 == 0 {
        format!("q^({})", e / 2)
    } else {
        format!("q^({}/2)", e)
    }
}

/// Writes `sum c_k s^{k - shift}` in the text format read by the parser.
fn fmt_laurent(p: &P, shift: i64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = k as i64 - shift;
        let neg = c.is_negative();
        let a = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        let qp = fmt_q_power(e);
        let coef = if a.is_integer() {
            format!("{}", a)
        } else {
            format!("({})", a)
        };
        match (a.is_one(), qp.is_empty()) {
            (_, true) => write!(f, "{coef}")?,
            (true, false) => write!(f, "{qp}")?,
            (false, false) => write!(f, "{coef}*{qp}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((c, k)) = self.monomial_den() {
            return fmt_laurent(&self.num.scale(&c.inv()), k as i64, f);
        }
        write!(f, "(")?;
        fmt_laurent(&self.num, 0, f)?;
        write!(f, ")/(")?;
        fmt_laurent(&self.den, 0, f)?;
        write!(f, ")")
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, o: Self) -> Self {
        if self.den == o.den {
            return RatFunc::new(self.num + o.num, self.den);
        }
        RatFunc::new(
            self.num * o.den.clone() + o.num * self.den.clone(),
            self.den * o.den,
        )
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, o: Self) -> Self {
        RatFunc::new(self.num * o.num, self.den * o.den)
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, o: Self) -> Self {
        assert!(!o.num.is_zero(), "rational function division by zero");
        RatFunc::new(self.num * o.den, self.den * o.num)
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> Self {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

impl Scalar for RatFunc {
    const EXACT: bool = true;
    fn zero() -> Self {
        RatFunc::from_poly(P::zero())
    }
    fn one() -> Self {
        RatFunc::from_poly(P::constant(BigRational::one()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        RatFunc::from_poly(P::constant(<BigRational as Scalar>::from_i64(n)))
    }
    fn from_rational(r: &BigRational) -> Self {
        RatFunc::from_poly(P::constant(r.clone()))
    }
    fn approx(&self) -> Option<Complex64> {
        self.as_constant().and_then(|c| c.approx())
    }
    fn powf(&self, x: f64) -> Option<Self> {
        if x.fract() == 0.0 && x.abs() < 1e9 {
            Some(self.pow_i(x as i64))
        } else {
            None
        }
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(|r| Self::from_rational(&r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, QuadExt};

    #[test]
    fn field_axioms_smoke() {
        let q = RatFunc::q();
        let x = (q.clone() - RatFunc::one()) / (q.clone() + RatFunc::one());
        let y = x.clone() * x.inv();
        assert_eq!(y, RatFunc::one());
        assert_eq!(q.clone() * q.inv(), RatFunc::one());
    }

    #[test]
    fn display_laurent() {
        let x = RatFunc::q() - RatFunc::q().inv();
        assert_eq!(x.to_string(), "q - q^(-1)");
        assert_eq!(RatFunc::s().to_string(), "q^(1/2)");
    }

    #[test]
    fn specialise_to_quadratic_field() {
        let x = RatFunc::s() + RatFunc::q();
        let s = QuadExt::sqrt_of(rat(1, 2));
        let v = x.eval(&s).unwrap();
        assert_eq!(v, s + QuadExt::from_rational(&rat(1, 2)));
    }
}
