//! The deformation parameter together with tolerances and truncation limits.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{QError, Result};
use crate::ratfunc::RatFunc;
use crate::scalar::{QuadExt, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// `q` in `(0, 1)`, its square root `s` when available, and numerical policy.
#[derive(Clone, Debug)]
pub struct QContext<F> {
    q: F,
    s: Option<F>,
    pub eps: f64,
    pub max_terms: usize,
}

pub const DEFAULT_EPS: f64 = 1e-12;
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Exact square root of a rational, if it is a perfect square.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r < &<BigRational as Scalar>::zero() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

impl<F: Scalar> QContext<F> {
    /// Builds a context, checking `0 < q < 1` and `s^2 = q` where these can be decided.
    pub fn new(q: F, s: Option<F>) -> Result<Self> {
        if let Some(v) = q.approx() {
            if v.im != 0.0 || !(v.re > 0.0 && v.re < 1.0) {
                return Err(QError::param("q", format!("{q} is not in (0, 1)")));
            }
        }
        if let Some(s) = &s {
            if F::EXACT && s.clone() * s.clone() != q {
                return Err(QError::param("s", "s^2 differs from q"));
            }
            if let Some(v) = s.approx() {
                if v.re <= 0.0 {
                    return Err(QError::param("s", "s must be positive"));
                }
            }
        }
        Ok(QContext {
            q,
            s,
            eps: DEFAULT_EPS,
            max_terms: DEFAULT_MAX_TERMS,
        })
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_max_terms(mut self, n: usize) -> Self {
        self.max_terms = n;
        self
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn s(&self) -> Result<&F> {
        self.s.as_ref().ok_or(QError::NoSqrt)
    }

    pub fn mode(&self) -> Mode {
        if F::EXACT {
            Mode::Exact
        } else {
            Mode::Float
        }
    }

    /// `q^k`
    pub fn qp(&self, k: i64) -> F {
        self.q.pow_i(k)
    }

    /// `s^k = q^{k/2}`
    pub fn sp(&self, k: i64) -> Result<F> {
        if k % 2 == 0 {
            Ok(self.qp(k / 2))
        } else {
            Ok(self.s()?.pow_i(k))
        }
    }

    /// Numerical value of `q`, if known.
    pub fn q_f64(&self) -> Option<f64> {
        self.q.approx().map(|z| z.re)
    }

    /// Maps the context into another field.
    pub fn lift<G: Scalar>(&self, f: impl Fn(&F) -> G) -> QContext<G> {
        QContext {
            q: f(&self.q),
            s: self.s.as_ref().map(f),
            eps: self.eps,
            max_terms: self.max_terms,
        }
    }
}

impl QContext<f64> {
    pub fn float(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QError::param("q", format!("{q} is not in (0, 1)")));
        }
        QContext::new(q, Some(q.sqrt()))
    }

    pub fn complexified(&self) -> QContext<Complex64> {
        self.lift(|x| Complex64::new(*x, 0.0))
    }
}

impl QContext<Complex64> {
    pub fn float_c(q: f64) -> Result<Self> {
        Ok(QContext::float(q)?.complexified())
    }
}

impl QContext<BigRational> {
    /// Exact rational context. `s` is present only when `q` is a perfect square.
    pub fn exact(q: BigRational) -> Result<Self> {
        let s = rational_sqrt(&q);
        QContext::new(q, s)
    }
}

impl QContext<QuadExt> {
    /// Exact context over `Q(sqrt q)`.
    pub fn adjoin(q: BigRational) -> Result<Self> {
        let s = match rational_sqrt(&q) {
            Some(r) => QuadExt::rational(r),
            None => QuadExt::sqrt_of(q.clone()),
        };
        QContext::new(QuadExt::rational(q), Some(s))
    }
}

impl QContext<RatFunc> {
    /// Formal context over `Q(s)`.
    pub fn formal() -> Self {
        QContext {
            q: RatFunc::q(),
            s: Some(RatFunc::s()),
            eps: DEFAULT_EPS,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

/// Parses `p/q`, an integer, or a decimal literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || QError::param("q", format!("cannot parse `{text}` as a rational"));
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{}{}", if ip.is_empty() { "0" } else { ip }, fp)
        .parse()
        .map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), fp.len());
    let r = BigRational::new(digits, den);
    Ok(if neg { -r } else { r })
}

impl Default for QContext<f64> {
    fn default() -> Self {
        QContext::float(0.5).expect("q = 1/2 is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn rejects_bad_q() {
        assert!(QContext::float(1.0).is_err());
        assert!(QContext::float(0.0).is_err());
        assert!(QContext::exact(rat(3, 2)).is_err());
    }

    #[test]
    fn sqrt_handling() {
        let c = QContext::exact(rat(1, 4)).unwrap();
        assert_eq!(c.s().unwrap(), &rat(1, 2));
        let c = QContext::exact(rat(1, 2)).unwrap();
        assert_eq!(c.s(), Err(QError::NoSqrt));
        let c = QContext::adjoin(rat(1, 2)).unwrap();
        let s = c.s().unwrap().clone();
        assert_eq!(s.clone() * s, QuadExt::rational(rat(1, 2)));
    }

    #[test]
    fn decimal_parse_is_exact() {
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("3/8").unwrap(), rat(3, 8));
        assert_eq!(parse_rational(".25").unwrap(), rat(1, 4));
        assert!(parse_rational("1e-3").is_err());
    }
}
