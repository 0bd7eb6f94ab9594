//! Coefficient fields.
//!
//! Every routine in the crate is generic over [`Scalar`], so the same code
//! runs in `f64`, `Complex64`, exact rationals, the quadratic extension
//! `Q(sqrt r)` and the rational function field `Q(s)` with `s^2 = q`.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic is exact and equality is meaningful.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(n: i64) -> Self;
    fn from_rational(r: &BigRational) -> Self;

    /// Numerical value, if the element has one.
    fn approx(&self) -> Option<Complex64>;

    /// Real power. Exact fields only accept integral exponents.
    fn powf(&self, x: f64) -> Option<Self>;

    fn from_f64(x: f64) -> Option<Self>;

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn magnitude(&self) -> Option<f64> {
        self.approx().map(|z| z.norm())
    }

    fn pow_i(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inv() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_rational(r: &BigRational) -> Self {
        rat_to_f64(r)
    }
    fn approx(&self) -> Option<Complex64> {
        Some(Complex64::new(*self, 0.0))
    }
    fn powf(&self, x: f64) -> Option<Self> {
        Some(f64::powf(*self, x))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }
    fn pow_i(&self, n: i64) -> Self {
        if n.unsigned_abs() <= i32::MAX as u64 {
            self.powi(n as i32)
        } else {
            f64::powf(*self, n as f64)
        }
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(rat_to_f64(r), 0.0)
    }
    fn approx(&self) -> Option<Complex64> {
        Some(*self)
    }
    fn powf(&self, x: f64) -> Option<Self> {
        Some(Complex64::powf(*self, x))
    }
    fn from_f64(x: f64) -> Option<Self> {
        Some(Complex64::new(x, 0.0))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
    fn approx(&self) -> Option<Complex64> {
        Some(Complex64::new(rat_to_f64(self), 0.0))
    }
    fn powf(&self, x: f64) -> Option<Self> {
        if x.fract() == 0.0 && x.abs() < 1e9 {
            Some(self.pow_i(x as i64))
        } else {
            None
        }
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
}

/// Element `a + b*sqrt(r)` of a quadratic extension of the rationals.
///
/// `r` is only recorded once a nonzero irrational part appears, so `zero()`
/// and `one()` need not know the field.
#[derive(Clone, Debug)]
pub struct QuadExt {
    pub a: BigRational,
    pub b: BigRational,
    pub r: Option<BigRational>,
}

impl QuadExt {
    pub fn rational(a: BigRational) -> Self {
        QuadExt {
            a,
            b: BigRational::zero(),
            r: None,
        }
    }

    /// The generator `sqrt(r)`.
    pub fn sqrt_of(r: BigRational) -> Self {
        QuadExt {
            a: BigRational::zero(),
            b: BigRational::one(),
            r: Some(r),
        }
    }

    fn normalized(mut self) -> Self {
        if self.b.is_zero() {
            self.r = None;
        }
        self
    }

    fn join(x: &Option<BigRational>, y: &Option<BigRational>) -> Option<BigRational> {
        match (x, y) {
            (Some(u), Some(v)) => {
                assert!(u == v, "mixing quadratic extensions sqrt({u}) and sqrt({v})");
                Some(u.clone())
            }
            (Some(u), None) | (None, Some(u)) => Some(u.clone()),
            (None, None) => None,
        }
    }

    fn conj(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -self.b.clone(),
            r: self.r.clone(),
        }
    }

    fn norm(&self) -> BigRational {
        let r = self.r.clone().unwrap_or_else(BigRational::zero);
        &self.a * &self.a - &self.b * &self.b * r
    }
}

impl PartialEq for QuadExt {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a
            && self.b == other.b
            && (self.b.is_zero() || self.r == other.r)
    }
}

impl Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.r {
            None => write!(f, "{}", self.a),
            Some(r) => {
                if self.a.is_zero() {
                    write!(f, "{}*sqrt({})", self.b, r)
                } else if self.b.is_negative() {
                    write!(f, "{} - {}*sqrt({})", self.a, -self.b.clone(), r)
                } else {
                    write!(f, "{} + {}*sqrt({})", self.a, self.b, r)
                }
            }
        }
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, o: QuadExt) -> QuadExt {
        QuadExt {
            r: QuadExt::join(&self.r, &o.r),
            a: self.a + o.a,
            b: self.b + o.b,
        }
        .normalized()
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, o: QuadExt) -> QuadExt {
        QuadExt {
            r: QuadExt::join(&self.r, &o.r),
            a: self.a - o.a,
            b: self.b - o.b,
        }
        .normalized()
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, o: QuadExt) -> QuadExt {
        let r = QuadExt::join(&self.r, &o.r);
        let bb = &self.b * &o.b;
        let a = &self.a * &o.a
            + match &r {
                Some(r) => bb * r,
                None => BigRational::zero(),
            };
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadExt { a, b, r }.normalized()
    }
}

impl Div for QuadExt {
    type Output = QuadExt;
    fn div(self, o: QuadExt) -> QuadExt {
        let n = o.norm();
        assert!(!n.is_zero(), "division by zero in quadratic extension");
        let num = self * o.conj();
        QuadExt {
            a: num.a / n.clone(),
            b: num.b / n,
            r: num.r,
        }
        .normalized()
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            a: -self.a,
            b: -self.b,
            r: self.r,
        }
    }
}

impl Scalar for QuadExt {
    const EXACT: bool = true;
    fn zero() -> Self {
        QuadExt::rational(BigRational::zero())
    }
    fn one() -> Self {
        QuadExt::rational(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn from_i64(n: i64) -> Self {
        QuadExt::rational(BigRational::from_integer(BigInt::from(n)))
    }
    fn from_rational(r: &BigRational) -> Self {
        QuadExt::rational(r.clone())
    }
    fn approx(&self) -> Option<Complex64> {
        let a = rat_to_f64(&self.a);
        match &self.r {
            None => Some(Complex64::new(a, 0.0)),
            Some(r) => {
                let rf = rat_to_f64(r);
                let b = rat_to_f64(&self.b);
                if rf >= 0.0 {
                    Some(Complex64::new(a + b * rf.sqrt(), 0.0))
                } else {
                    Some(Complex64::new(a, b * (-rf).sqrt()))
                }
            }
        }
    }
    fn powf(&self, x: f64) -> Option<Self> {
        if x.fract() == 0.0 && x.abs() < 1e9 {
            Some(self.pow_i(x as i64))
        } else {
            None
        }
    }
    fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(QuadExt::rational)
    }
}
