//! Dense univariate polynomials over a [`Scalar`] field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Coefficients stored lowest degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct UPoly<F> {
    c: Vec<F>,
}

impl<F: Scalar> UPoly<F> {
    pub fn zero() -> Self {
        UPoly { c: Vec::new() }
    }

    pub fn constant(a: F) -> Self {
        Self::from_coeffs(vec![a])
    }

    /// `a * x^k`
    pub fn monomial(a: F, k: usize) -> Self {
        let mut c = vec![F::zero(); k + 1];
        c[k] = a;
        Self::from_coeffs(c)
    }

    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn from_coeffs(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        UPoly { c }
    }

    pub fn coeffs(&self) -> &[F] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> F {
        self.c.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> F {
        self.c.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, a: &F) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x.clone() * a.clone()).collect())
    }

    /// Horner evaluation in any field that the coefficients map into.
    pub fn eval_with<G: Scalar>(&self, x: &G, map: impl Fn(&F) -> G) -> G {
        let mut acc = G::zero();
        for a in self.c.iter().rev() {
            acc = acc * x.clone() + map(a);
        }
        acc
    }

    pub fn eval(&self, x: &F) -> F {
        self.eval_with(x, |a| a.clone())
    }

    /// Polynomial `p(a x)`.
    pub fn dilate(&self, a: &F) -> Self {
        let mut pw = F::one();
        let mut out = Vec::with_capacity(self.c.len());
        for c in &self.c {
            out.push(c.clone() * pw.clone());
            pw = pw * a.clone();
        }
        Self::from_coeffs(out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("polynomial division by zero");
        let lead = d.lead();
        let mut r = self.c.clone();
        let n = self.c.len();
        if n <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); n - dd];
        for k in (0..n - dd).rev() {
            let top = r[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let f = top / lead.clone();
            for (i, dc) in d.c.iter().enumerate() {
                r[k + i] = r[k + i].clone() - f.clone() * dc.clone();
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    /// Monic greatest common divisor (zero if both inputs vanish).
    pub fn gcd(&self, o: &Self) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead();
        a.scale(&l.inv())
    }
}

impl<F: Scalar> Add for UPoly<F> {
    type Output = UPoly<F>;
    fn add(self, o: Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) + o.coeff(i)).collect();
        UPoly::from_coeffs(c)
    }
}

impl<F: Scalar> Sub for UPoly<F> {
    type Output = UPoly<F>;
    fn sub(self, o: Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n).map(|i| self.coeff(i) - o.coeff(i)).collect();
        UPoly::from_coeffs(c)
    }
}

impl<F: Scalar> Neg for UPoly<F> {
    type Output = UPoly<F>;
    fn neg(self) -> Self {
        UPoly {
            c: self.c.into_iter().map(|x| -x).collect(),
        }
    }
}

impl<F: Scalar> Mul for UPoly<F> {
    type Output = UPoly<F>;
    fn mul(self, o: Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut c = vec![F::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = c[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::from_coeffs(c)
    }
}

impl<F: Scalar> fmt::Display for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{a}")?,
                1 => write!(f, "({a})*y")?,
                _ => write!(f, "({a})*y^{k}")?,
            }
        }
        Ok(())
    }
}
