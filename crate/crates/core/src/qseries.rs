//! q-Pochhammer symbols, basic hypergeometric series, Jackson calculus,
//! q-Gamma/Beta and the two q-exponentials.
//!
//! Infinite products and series stop once a geometric tail bound drops below
//! `ctx.eps`; the bound is returned alongside the value in [`Truncated`].

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::poly::UPoly;
use crate::scalar::Scalar;

/// A value together with the tail bound that justified stopping.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated<F> {
    pub value: F,
    pub bound: f64,
    pub terms: usize,
}

impl<F> Truncated<F> {
    fn exact(value: F, terms: usize) -> Self {
        Truncated {
            value,
            bound: 0.0,
            terms,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PochIndex {
    Finite(usize),
    Infinite,
    /// `(a; b)_x = (a; b)_inf / (a b^x; b)_inf` on the principal branch.
    Real(f64),
}

/// Finite product `(a; b)_n = (1-a)(1-ab)...(1-ab^{n-1})`.
pub fn poch<F: Scalar>(a: &F, b: &F, n: usize) -> F {
    let mut acc = F::one();
    let mut ak = a.clone();
    for _ in 0..n {
        acc = acc * (F::one() - ak.clone());
        ak = ak * b.clone();
    }
    acc
}

/// Product of several finite symbols `(a_1, ..., a_m; b)_n`.
pub fn poch_multi<F: Scalar>(a: &[F], b: &F, n: usize) -> F {
    a.iter().fold(F::one(), |acc, x| acc * poch(x, b, n))
}

/// Stopping threshold: a safety margin below the requested tolerance.
fn cut<F>(ctx: &QContext<F>) -> f64 {
    ctx.eps * 1e-3
}

fn base_modulus<F: Scalar>(b: &F) -> Result<f64> {
    let m = b
        .magnitude()
        .ok_or_else(|| QError::ExactUnsupported("base has no numerical value".into()))?;
    if m >= 1.0 {
        return Err(QError::Divergent(format!("infinite product with |base| = {m} >= 1")));
    }
    Ok(m)
}

/// `(a; b)_inf` with the tail bound `|a||b|^K / (1 - |b|)`.
pub fn poch_inf_bounded<F: Scalar>(ctx: &QContext<F>, a: &F, b: &F) -> Result<Truncated<F>> {
    if F::EXACT {
        return Err(QError::ExactUnsupported("infinite q-Pochhammer symbol".into()));
    }
    let bm = base_modulus(b)?;
    let am = a.magnitude().unwrap_or(f64::INFINITY);
    let mut acc = F::one();
    let mut ak = a.clone();
    let mut tail = am;
    for k in 0..ctx.max_terms {
        let bound = tail / (1.0 - bm);
        if bound < cut(ctx) {
            return Ok(Truncated {
                value: acc,
                bound,
                terms: k,
            });
        }
        acc = acc * (F::one() - ak.clone());
        ak = ak * b.clone();
        tail *= bm;
    }
    Err(QError::NonConvergent {
        terms: ctx.max_terms,
        bound: tail / (1.0 - bm),
    })
}

pub fn poch_inf<F: Scalar>(ctx: &QContext<F>, a: &F, b: &F) -> Result<F> {
    Ok(poch_inf_bounded(ctx, a, b)?.value)
}

/// q-Pochhammer symbol with finite, infinite or real index.
pub fn q_pochhammer<F: Scalar>(ctx: &QContext<F>, a: &F, b: &F, n: PochIndex) -> Result<Truncated<F>> {
    match n {
        PochIndex::Finite(n) => Ok(Truncated::exact(poch(a, b, n), n)),
        PochIndex::Infinite => poch_inf_bounded(ctx, a, b),
        PochIndex::Real(x) => {
            if F::EXACT {
                return Err(QError::ExactUnsupported("real-index q-Pochhammer symbol".into()));
            }
            base_modulus(b)?;
            let bx = b
                .powf(x)
                .ok_or_else(|| QError::param("n", "base power unavailable"))?;
            let num = poch_inf_bounded(ctx, a, b)?;
            let den = poch_inf_bounded(ctx, &(a.clone() * bx), b)?;
            if den.value.magnitude().unwrap_or(0.0) < 1e-300 {
                return Err(QError::Pole("denominator symbol vanishes".into()));
            }
            Ok(Truncated {
                value: num.value / den.value,
                bound: num.bound + den.bound,
                terms: num.terms.max(den.terms),
            })
        }
    }
}

/// Symmetric q-number `[λ]_q = (q^λ - q^{-λ}) / (q - q^{-1})`.
///
/// Integer and half-integer `λ` stay exact through `s = q^{1/2}`.
pub fn q_number<F: Scalar>(ctx: &QContext<F>, lambda: f64) -> Result<F> {
    let two = 2.0 * lambda;
    let ql = if two.fract() == 0.0 && two.abs() < 1e9 {
        ctx.sp(two as i64)?
    } else {
        ctx.q()
            .powf(lambda)
            .ok_or_else(|| QError::ExactUnsupported("irrational power of q".into()))?
    };
    let q = ctx.q().clone();
    Ok((ql.clone() - ql.inv()) / (q.clone() - q.inv()))
}

/// Gaussian binomial `[n choose k]_q` as a polynomial in `q` with integer coefficients.
pub fn gauss_binomial(n: usize, k: usize) -> Result<UPoly<BigRational>> {
    if k > n {
        return Err(QError::param("k", format!("k = {k} exceeds n = {n}")));
    }
    // row[j] = [m choose j]_q
    let one = UPoly::constant(BigRational::from_integer(BigInt::from(1)));
    let mut row: Vec<UPoly<BigRational>> = vec![one.clone()];
    for m in 1..=n {
        let mut next = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let left = if j >= 1 { row[j - 1].clone() } else { UPoly::zero() };
            let right = if j < m {
                let mut c = vec![BigRational::from_integer(BigInt::from(0)); j];
                c.extend(row[j].coeffs().iter().cloned());
                UPoly::from_coeffs(c)
            } else {
                UPoly::zero()
            };
            next.push(left + right);
        }
        row = next;
    }
    Ok(row[k].clone())
}

/// q-Gamma for a complex argument, `(q;q)_inf / (q^x;q)_inf * (1-q)^{1-x}`.
pub fn q_gamma_c(ctx: &QContext<f64>, x: Complex64) -> Result<Complex64> {
    let q = *ctx.q();
    if x.im == 0.0 && x.re <= 0.0 && x.re.fract() == 0.0 {
        return Err(QError::Pole(format!("q-Gamma at {}", x.re)));
    }
    let cctx = ctx.complexified();
    let qc = Complex64::new(q, 0.0);
    let qx = (x * q.ln()).exp();
    let num = poch_inf(&cctx, &qc, &qc)?;
    let den = poch_inf(&cctx, &qx, &qc)?;
    if den.norm() < 1e-300 {
        return Err(QError::Pole("q-Gamma denominator vanishes".into()));
    }
    let pref = ((Complex64::new(1.0, 0.0) - x) * (1.0 - q).ln()).exp();
    Ok(num / den * pref)
}

pub fn q_gamma(ctx: &QContext<f64>, x: f64) -> Result<f64> {
    Ok(q_gamma_c(ctx, Complex64::new(x, 0.0))?.re)
}

/// `Γ_q(n)` for a positive integer `n`, exact in exact fields.
pub fn q_gamma_int<F: Scalar>(ctx: &QContext<F>, n: usize) -> Result<F> {
    if n == 0 {
        return Err(QError::Pole("q-Gamma at 0".into()));
    }
    let q = ctx.q();
    let m = (n - 1) as i64;
    Ok(poch(q, q, n - 1) / (F::one() - q.clone()).pow_i(m))
}

pub fn q_beta(ctx: &QContext<f64>, x: f64, y: f64) -> Result<f64> {
    Ok(q_gamma(ctx, x)? * q_gamma(ctx, y)? / q_gamma(ctx, x + y)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `a(1-b) Σ_k f(a b^k) b^k`
    ZeroToA,
    /// `(b^{-1} - 1) Σ_{m<terms} f(b^{-m}) b^{-m}`, for finitely supported `f`.
    OneToInfinity { terms: usize },
}

/// Jackson integral with base `b`.
pub fn jackson_integral<F: Scalar>(
    ctx: &QContext<F>,
    f: impl Fn(&F) -> F,
    a: &F,
    b: &F,
    orientation: Orientation,
) -> Result<Truncated<F>> {
    match orientation {
        Orientation::OneToInfinity { terms } => {
            let binv = b.inv();
            let mut x = F::one();
            let mut acc = F::zero();
            for _ in 0..terms {
                acc = acc + f(&x) * x.clone();
                x = x * binv.clone();
            }
            Ok(Truncated::exact((binv - F::one()) * acc, terms))
        }
        Orientation::ZeroToA => {
            if F::EXACT {
                return Err(QError::ExactUnsupported(
                    "nonterminating Jackson integral; use jackson_poly".into(),
                ));
            }
            let bm = base_modulus(b)?;
            let mut acc = F::zero();
            let mut x = a.clone();
            let mut bk = F::one();
            let mut quiet = 0;
            for k in 0..ctx.max_terms {
                let t = f(&x) * bk.clone();
                let tm = t.magnitude().unwrap_or(f64::INFINITY);
                acc = acc + t;
                let bound = tm * bm / (1.0 - bm);
                let scale = acc.magnitude().unwrap_or(1.0).max(1.0);
                if bound < cut(ctx) * scale {
                    quiet += 1;
                    if quiet >= 3 {
                        return Ok(Truncated {
                            value: a.clone() * (F::one() - b.clone()) * acc,
                            bound,
                            terms: k + 1,
                        });
                    }
                } else {
                    quiet = 0;
                }
                x = x * b.clone();
                bk = bk * b.clone();
            }
            Err(QError::NonConvergent {
                terms: ctx.max_terms,
                bound: f64::NAN,
            })
        }
    }
}

/// Exact Jackson integral of a polynomial over `[0, a]`:
/// `∫_0^a x^n d_b x = a^{n+1} (1-b) / (1-b^{n+1})`.
pub fn jackson_poly<F: Scalar>(p: &UPoly<F>, a: &F, b: &F) -> F {
    let mut acc = F::zero();
    for (n, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let k = n as i64 + 1;
        acc = acc + c.clone() * a.pow_i(k) * (F::one() - b.clone()) / (F::one() - b.pow_i(k));
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperSpec<F> {
    pub upper: Vec<F>,
    pub lower: Vec<F>,
    pub base: F,
    pub arg: F,
}

impl<F: Scalar> HyperSpec<F> {
    pub fn new(upper: Vec<F>, lower: Vec<F>, base: F, arg: F) -> Self {
        HyperSpec {
            upper,
            lower,
            base,
            arg,
        }
    }
}

fn near_zero<F: Scalar>(x: &F) -> bool {
    if F::EXACT {
        x.is_zero()
    } else {
        x.magnitude().is_some_and(|m| m < 1e-14)
    }
}

/// Smallest `k` with `a b^k = 1`, if one exists within `limit` steps.
fn unit_index<F: Scalar>(a: &F, b: &F, limit: usize) -> Option<usize> {
    let bm = b.magnitude();
    let mut ak = a.clone();
    for k in 0..limit {
        if near_zero(&(F::one() - ak.clone())) {
            return Some(k);
        }
        if let (Some(m), Some(bm)) = (ak.magnitude(), bm) {
            if bm < 1.0 && m < 0.5 {
                return None;
            }
        }
        ak = ak * b.clone();
    }
    None
}

/// Basic hypergeometric series `_rφ_s(a; b; base, z)` with the factor
/// `[(-1)^k base^{k(k-1)/2}]^{1+s-r}` in every term.
///
/// Terminating series are summed exactly; otherwise summation stops at a
/// ratio-based tail bound below `eps`, or after `trunc` terms.
pub fn basic_hyper<F: Scalar>(ctx: &QContext<F>, spec: &HyperSpec<F>, trunc: Option<usize>) -> Result<Truncated<F>> {
    let b = &spec.base;
    let r = spec.upper.len() as i64;
    let s = spec.lower.len() as i64;
    let extra = 1 + s - r;
    let limit = if b.magnitude().is_some() { ctx.max_terms } else { 512 };

    let term_n = spec
        .upper
        .iter()
        .filter_map(|a| unit_index(a, b, limit))
        .min();
    for (j, lo) in spec.lower.iter().enumerate() {
        if let Some(kb) = unit_index(lo, b, limit) {
            if term_n.is_none_or(|n| kb < n) {
                return Err(QError::param(
                    "lower",
                    format!("lower parameter {j} lies in base^(-Z+) and is reached by the sum"),
                ));
            }
        }
    }

    if term_n.is_none() {
        if F::EXACT {
            return Err(QError::ExactUnsupported("nonterminating basic hypergeometric series".into()));
        }
        let zm = spec.arg.magnitude().unwrap_or(f64::INFINITY);
        if extra < 0 {
            return Err(QError::Divergent("r > s + 1 and the series does not terminate".into()));
        }
        if extra == 0 && zm >= 1.0 {
            return Err(QError::Divergent(format!("|z| = {zm} >= 1 for r = s + 1")));
        }
    }

    let cap = match (term_n, trunc) {
        (Some(n), _) => n + 1,
        (None, Some(t)) => t,
        (None, None) => ctx.max_terms,
    };

    let mut sum = F::zero();
    let mut term = F::one();
    let mut bk = F::one();
    let mut last_ratio = f64::INFINITY;
    let mut bound = f64::INFINITY;
    for k in 0..cap {
        sum = sum + term.clone();
        if term_n == Some(k) {
            return Ok(Truncated::exact(sum, k + 1));
        }
        let mut ratio = spec.arg.clone();
        for a in &spec.upper {
            ratio = ratio * (F::one() - a.clone() * bk.clone());
        }
        let mut den = F::one() - bk.clone() * b.clone();
        for lo in &spec.lower {
            den = den * (F::one() - lo.clone() * bk.clone());
        }
        if extra != 0 {
            ratio = ratio * (-bk.clone()).pow_i(extra);
        }
        let next = term.clone() * ratio / den;
        if term_n.is_none() {
            let tm = term.magnitude().unwrap_or(f64::INFINITY);
            let nm = next.magnitude().unwrap_or(f64::INFINITY);
            let rho = if tm > 0.0 { nm / tm } else { 0.0 };
            let rr = if last_ratio.is_finite() { rho.max(last_ratio) } else { rho };
            last_ratio = rho;
            if rr < 1.0 {
                bound = nm / (1.0 - rr);
                let scale = sum.magnitude().unwrap_or(1.0).max(1.0);
                if bound < cut(ctx) * scale {
                    return Ok(Truncated {
                        value: sum,
                        bound,
                        terms: k + 1,
                    });
                }
            }
        }
        term = next;
        bk = bk * b.clone();
    }
    if trunc.is_some() {
        return Ok(Truncated {
            value: sum,
            bound,
            terms: cap,
        });
    }
    Err(QError::NonConvergent { terms: cap, bound })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpKind {
    /// `e_q(z) = Σ z^k / (q;q)_k = 1 / (z;q)_inf`
    SmallE,
    /// `E_q(z) = Σ q^{k(k-1)/2} z^k / (q;q)_k = (-z;q)_inf`
    BigE,
}

pub fn q_exp<F: Scalar>(ctx: &QContext<F>, z: &F, kind: ExpKind) -> Result<F> {
    let q = ctx.q().clone();
    let spec = match kind {
        ExpKind::SmallE => {
            if z.magnitude().is_some_and(|m| m >= 1.0) {
                return Err(QError::param("z", "e_q requires |z| < 1"));
            }
            HyperSpec::new(vec![F::zero()], vec![], q, z.clone())
        }
        ExpKind::BigE => HyperSpec::new(vec![], vec![], q, -z.clone()),
    };
    if z.is_zero() {
        return Ok(F::one());
    }
    Ok(basic_hyper(ctx, &spec, None)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffVariant {
    /// `(f(x) - f(qx)) / (x - qx)`
    Minus,
    /// `(f(q^{-1}x) - f(x)) / (x - qx)`
    Plus,
    /// `(f(q^{-1}x) - f(qx)) / (q^{-1}x - qx)`
    Symmetric,
}

pub fn q_diff<F: Scalar>(ctx: &QContext<F>, f: impl Fn(&F) -> F, x: &F, variant: DiffVariant) -> Result<F> {
    if x.is_zero() {
        return Err(QError::param("x", "q-difference quotient is singular at 0"));
    }
    let q = ctx.q().clone();
    let qx = q.clone() * x.clone();
    let qix = x.clone() / q;
    Ok(match variant {
        DiffVariant::Minus => (f(x) - f(&qx)) / (x.clone() - qx),
        DiffVariant::Plus => (f(&qix) - f(x)) / (x.clone() - qx),
        DiffVariant::Symmetric => (f(&qix) - f(&qx)) / (qix - qx),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn finite_poch_examples() {
        let q = rat(1, 2);
        let q2 = &q * &q;
        assert_eq!(poch(&q2, &q2, 2), rat(45, 64));
        assert_eq!(poch(&rat(1, 1), &q, 3), rat(0, 1));
        assert_eq!(poch(&rat(7, 3), &q, 0), rat(1, 1));
    }

    #[test]
    fn exact_mode_rejects_infinite_index() {
        let ctx = QContext::exact(rat(1, 4)).unwrap();
        let q = ctx.q().clone();
        let r = q_pochhammer(&ctx, &q, &q, PochIndex::Infinite);
        assert!(matches!(r, Err(QError::ExactUnsupported(_))));
    }

    #[test]
    fn divergent_base() {
        let ctx = QContext::float(0.5).unwrap();
        assert!(matches!(poch_inf(&ctx, &0.5, &1.5), Err(QError::Divergent(_))));
    }
}
