//! Askey-Wilson type q-orthogonal polynomial families.
//!
//! Each family is available through its explicit terminating hypergeometric
//! sum and through its three-term recurrence. The trigonometric families take
//! `x = cos θ` as their variable; the factors `(a e^{iθ}, a e^{-iθ}; q)_k` are
//! expanded as `Π (1 - 2 a x q^j + a^2 q^{2j})`, so everything stays
//! polynomial in `x` and works in exact fields.

use num_complex::Complex64;

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::qseries::{poch, poch_inf, poch_multi, Truncated};
use crate::quad::adaptive_simpson;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec<F> {
    AskeyWilson { a: F, b: F, c: F, d: F },
    AlSalamChihara { a: F, b: F },
    ContDualQHahn { a: F, b: F, c: F },
    LittleQJacobi { a: F, b: F },
    QHahn { alpha: F, beta: F, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalMode {
    Explicit,
    Recurrence,
}

/// Where to evaluate a weight: a value of `x` for the continuous families, a
/// grid index for the discrete ones (`x = q^k` for little q-Jacobi, `q^{-k}`
/// for q-Hahn).
#[derive(Clone, Debug, PartialEq)]
pub enum OrthPoint<F> {
    Value(F),
    Index(usize),
}

fn real_part<F: Scalar>(x: &F) -> Option<f64> {
    x.approx().map(|z| z.re)
}

impl<F: Scalar> FamilySpec<F> {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::AskeyWilson { .. } => "askey_wilson",
            FamilySpec::AlSalamChihara { .. } => "al_salam_chihara",
            FamilySpec::ContDualQHahn { .. } => "cont_dual_q_hahn",
            FamilySpec::LittleQJacobi { .. } => "little_q_jacobi",
            FamilySpec::QHahn { .. } => "q_hahn",
        }
    }

    /// Checks the parameter domain on which the family is orthogonal.
    /// Formal parameters without a numerical value are accepted.
    pub fn validate(&self, ctx: &QContext<F>) -> Result<()> {
        let q = ctx.q_f64();
        match self {
            FamilySpec::AlSalamChihara { a, b } => check_trig_params(&[a, b]),
            FamilySpec::ContDualQHahn { a, b, c } => check_trig_params(&[a, b, c]),
            FamilySpec::AskeyWilson { a, .. } => {
                if a.is_zero() {
                    return Err(QError::param("a", "must be nonzero"));
                }
                Ok(())
            }
            FamilySpec::LittleQJacobi { a, b } => {
                if let (Some(q), Some(a), Some(b)) = (q, real_part(a), real_part(b)) {
                    if !(a > 0.0 && a < 1.0 / q) {
                        return Err(QError::param("a", format!("{a} not in (0, 1/q)")));
                    }
                    if b >= 1.0 / q {
                        return Err(QError::param("b", format!("{b} must be below 1/q")));
                    }
                }
                Ok(())
            }
            FamilySpec::QHahn { alpha, beta, n } => {
                if *n == 0 {
                    return Err(QError::param("N", "must be a positive integer"));
                }
                if let (Some(q), Some(al), Some(be)) = (q, real_part(alpha), real_part(beta)) {
                    let small = al > 0.0 && al < 1.0 / q && be > 0.0 && be < 1.0 / q;
                    let qn = q.powi(-(*n as i32));
                    let large = al > qn && be > qn;
                    if !(small || large) {
                        return Err(QError::param(
                            "alpha",
                            "need 0 < alpha, beta < 1/q or alpha, beta > q^(-N)",
                        ));
                    }
                }
                Ok(())
            }
        }
    }
}

fn check_trig_params<F: Scalar>(ps: &[&F]) -> Result<()> {
    let vals: Vec<Complex64> = ps.iter().filter_map(|p| p.approx()).collect();
    if vals.len() != ps.len() {
        return Ok(());
    }
    for (i, v) in vals.iter().enumerate() {
        if v.norm() >= 1.0 {
            return Err(QError::param("a", format!("parameter {i} has modulus >= 1")));
        }
        if v.im.abs() > 1e-14 {
            let paired = vals
                .iter()
                .enumerate()
                .any(|(j, w)| j != i && (w - v.conj()).norm() < 1e-12);
            if !paired {
                return Err(QError::param("a", format!("complex parameter {i} lacks a conjugate partner")));
            }
        }
    }
    Ok(())
}

/// `(a e^{iθ}, a e^{-iθ}; q)_k` as a polynomial expression in `x = cos θ`.
fn trig_poch<F: Scalar>(a: &F, x: &F, q: &F, k: usize) -> F {
    let two = F::from_i64(2);
    let mut acc = F::one();
    let mut qj = F::one();
    for _ in 0..k {
        let aq = a.clone() * qj.clone();
        acc = acc * (F::one() - two.clone() * aq.clone() * x.clone() + aq.clone() * aq);
        qj = qj * q.clone();
    }
    acc
}

pub fn orth_eval<F: Scalar>(ctx: &QContext<F>, spec: &FamilySpec<F>, n: usize, x: &F, mode: EvalMode) -> Result<F> {
    if let FamilySpec::QHahn { n: big_n, .. } = spec {
        if n > *big_n {
            return Err(QError::param("n", format!("degree {n} exceeds N = {big_n}")));
        }
    }
    match mode {
        EvalMode::Explicit => explicit(ctx, spec, n, x),
        EvalMode::Recurrence => recurrence(ctx, spec, n, x),
    }
}

fn explicit<F: Scalar>(ctx: &QContext<F>, spec: &FamilySpec<F>, n: usize, x: &F) -> Result<F> {
    let q = ctx.q().clone();
    let qn_inv = q.pow_i(-(n as i64));
    match spec {
        FamilySpec::AlSalamChihara { a, b } => {
            trig_sum(&q, n, a, x, &[], &[a.clone() * b.clone()])
        }
        FamilySpec::ContDualQHahn { a, b, c } => trig_sum(
            &q,
            n,
            a,
            x,
            &[],
            &[a.clone() * b.clone(), a.clone() * c.clone()],
        ),
        FamilySpec::AskeyWilson { a, b, c, d } => {
            let abcd = a.clone() * b.clone() * c.clone() * d.clone();
            trig_sum(
                &q,
                n,
                a,
                x,
                &[abcd * q.pow_i(n as i64 - 1)],
                &[a.clone() * b.clone(), a.clone() * c.clone(), a.clone() * d.clone()],
            )
        }
        FamilySpec::LittleQJacobi { a, b } => {
            let up = a.clone() * b.clone() * q.pow_i(n as i64 + 1);
            let lo = a.clone() * q.clone();
            let z = q.clone() * x.clone();
            let mut sum = F::zero();
            for k in 0..=n {
                let t = poch(&qn_inv, &q, k) * poch(&up, &q, k) / (poch(&lo, &q, k) * poch(&q, &q, k))
                    * z.pow_i(k as i64);
                sum = sum + t;
            }
            Ok(sum)
        }
        FamilySpec::QHahn { alpha, beta, n: big_n } => {
            let up = alpha.clone() * beta.clone() * q.pow_i(n as i64 + 1);
            let aq = alpha.clone() * q.clone();
            let qmn = q.pow_i(-(*big_n as i64));
            let mut sum = F::zero();
            for k in 0..=n {
                let den = poch(&aq, &q, k) * poch(&qmn, &q, k) * poch(&q, &q, k);
                if den.is_zero() {
                    return Err(QError::Pole("q-Hahn lower parameter".into()));
                }
                let t = poch(&qn_inv, &q, k) * poch(&up, &q, k) * poch(x, &q, k) / den * q.pow_i(k as i64);
                sum = sum + t;
            }
            Ok(sum)
        }
    }
}

/// `(lower_0, ...; q)_n / a^n * Σ_k (q^{-n}, upper...; q)_k (ae^{iθ}, ae^{-iθ}; q)_k / (lower..., q; q)_k q^k`
fn trig_sum<F: Scalar>(q: &F, n: usize, a: &F, x: &F, upper: &[F], lower: &[F]) -> Result<F> {
    if a.is_zero() {
        return Err(QError::param("a", "explicit form needs a != 0; use the recurrence"));
    }
    let qn_inv = q.pow_i(-(n as i64));
    let mut sum = F::zero();
    for k in 0..=n {
        let den = poch_multi(lower, q, k) * poch(q, q, k);
        if den.is_zero() {
            return Err(QError::Pole("lower parameter in q^(-Z+)".into()));
        }
        let t = poch(&qn_inv, q, k) * poch_multi(upper, q, k) * trig_poch(a, x, q, k) / den * q.pow_i(k as i64);
        sum = sum + t;
    }
    Ok(poch_multi(lower, q, n) / a.pow_i(n as i64) * sum)
}

/// Three-term recurrence for the normalised sum `p̃_n` used by the Askey-Wilson
/// and continuous dual q-Hahn families:
/// `2x p̃_n = A_n p̃_{n+1} + [a + a^{-1} - (A_n + C_n)] p̃_n + C_n p̃_{n-1}`.
fn normalized_trig_recurrence<F: Scalar>(
    n: usize,
    a: &F,
    x: &F,
    coeffs: impl Fn(usize) -> (F, F),
) -> Result<F> {
    let two = F::from_i64(2);
    let mut prev = F::zero();
    let mut cur = F::one();
    for k in 0..n {
        let (ak, ck) = coeffs(k);
        if ak.is_zero() {
            return Err(QError::Pole("vanishing recurrence coefficient".into()));
        }
        let mid = a.clone() + a.inv() - (ak.clone() + ck.clone());
        let next = (two.clone() * x.clone() * cur.clone() - mid * cur.clone() - ck * prev) / ak;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn recurrence<F: Scalar>(ctx: &QContext<F>, spec: &FamilySpec<F>, n: usize, x: &F) -> Result<F> {
    let q = ctx.q().clone();
    let one = || F::one();
    let qp = |k: i64| q.pow_i(k);
    match spec {
        FamilySpec::AlSalamChihara { a, b } => {
            let two = F::from_i64(2);
            let ab = a.clone() * b.clone();
            let mut prev = F::zero();
            let mut cur = F::one();
            for k in 0..n {
                let kk = k as i64;
                let c = if k == 0 {
                    F::zero()
                } else {
                    (one() - qp(kk)) * (one() - ab.clone() * qp(kk - 1))
                };
                let next = (two.clone() * x.clone() - (a.clone() + b.clone()) * qp(kk)) * cur.clone() - c * prev;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
        FamilySpec::ContDualQHahn { a, b, c } => {
            if a.is_zero() {
                return Err(QError::param("a", "must be nonzero"));
            }
            let ab = a.clone() * b.clone();
            let ac = a.clone() * c.clone();
            let bc = b.clone() * c.clone();
            let pt = normalized_trig_recurrence(n, a, x, |k| {
                let kk = k as i64;
                let ak = a.inv() * (one() - ab.clone() * qp(kk)) * (one() - ac.clone() * qp(kk));
                let ck = if k == 0 {
                    F::zero()
                } else {
                    a.clone() * (one() - qp(kk)) * (one() - bc.clone() * qp(kk - 1))
                };
                (ak, ck)
            })?;
            Ok(poch(&ab, &q, n) * poch(&ac, &q, n) / a.pow_i(n as i64) * pt)
        }
        FamilySpec::AskeyWilson { a, b, c, d } => {
            if a.is_zero() {
                return Err(QError::param("a", "must be nonzero"));
            }
            let ab = a.clone() * b.clone();
            let ac = a.clone() * c.clone();
            let ad = a.clone() * d.clone();
            let bc = b.clone() * c.clone();
            let bd = b.clone() * d.clone();
            let cd = c.clone() * d.clone();
            let abcd = ab.clone() * cd.clone();
            let pt = normalized_trig_recurrence(n, a, x, |k| {
                let kk = k as i64;
                let ak = (one() - ab.clone() * qp(kk))
                    * (one() - ac.clone() * qp(kk))
                    * (one() - ad.clone() * qp(kk))
                    * (one() - abcd.clone() * qp(kk - 1))
                    / (a.clone()
                        * (one() - abcd.clone() * qp(2 * kk - 1))
                        * (one() - abcd.clone() * qp(2 * kk)));
                let ck = if k == 0 {
                    F::zero()
                } else {
                    a.clone()
                        * (one() - qp(kk))
                        * (one() - bc.clone() * qp(kk - 1))
                        * (one() - bd.clone() * qp(kk - 1))
                        * (one() - cd.clone() * qp(kk - 1))
                        / ((one() - abcd.clone() * qp(2 * kk - 2)) * (one() - abcd.clone() * qp(2 * kk - 1)))
                };
                (ak, ck)
            })?;
            Ok(poch(&ab, &q, n) * poch(&ac, &q, n) * poch(&ad, &q, n) / a.pow_i(n as i64) * pt)
        }
        FamilySpec::LittleQJacobi { a, b } => {
            let ab = a.clone() * b.clone();
            let mut prev = F::zero();
            let mut cur = F::one();
            for k in 0..n {
                let kk = k as i64;
                let ak = qp(kk) * (one() - a.clone() * qp(kk + 1)) * (one() - ab.clone() * qp(kk + 1))
                    / ((one() - ab.clone() * qp(2 * kk + 1)) * (one() - ab.clone() * qp(2 * kk + 2)));
                let ck = if k == 0 {
                    F::zero()
                } else {
                    a.clone() * qp(kk) * (one() - qp(kk)) * (one() - b.clone() * qp(kk))
                        / ((one() - ab.clone() * qp(2 * kk)) * (one() - ab.clone() * qp(2 * kk + 1)))
                };
                let next = ((ak.clone() + ck.clone() - x.clone()) * cur.clone() - ck * prev) / ak;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
        FamilySpec::QHahn { alpha, beta, n: big_n } => {
            let ab = alpha.clone() * beta.clone();
            let bn = *big_n as i64;
            let mut prev = F::zero();
            let mut cur = F::one();
            for k in 0..n {
                let kk = k as i64;
                let ak = (one() - qp(kk - bn)) * (one() - alpha.clone() * qp(kk + 1)) * (one() - ab.clone() * qp(kk + 1))
                    / ((one() - ab.clone() * qp(2 * kk + 1)) * (one() - ab.clone() * qp(2 * kk + 2)));
                let ck = if k == 0 {
                    F::zero()
                } else {
                    -(alpha.clone() * qp(kk - bn) * (one() - qp(kk)) * (one() - ab.clone() * qp(kk + bn + 1))
                        * (one() - beta.clone() * qp(kk)))
                        / ((one() - ab.clone() * qp(2 * kk)) * (one() - ab.clone() * qp(2 * kk + 1)))
                };
                if ak.is_zero() {
                    return Err(QError::Pole("q-Hahn recurrence coefficient vanishes".into()));
                }
                let lhs = -(one() - x.clone()) * cur.clone();
                let next = (lhs + (ak.clone() + ck.clone()) * cur.clone() - ck * prev) / ak;
                prev = cur;
                cur = next;
            }
            Ok(cur)
        }
    }
}

/// `h(x, α) = Π_k (1 - 2αx q^k + α^2 q^{2k})`, truncated by a geometric tail bound.
pub fn h_product<F: Scalar>(ctx: &QContext<F>, x: &F, alpha: &F) -> Result<F> {
    if F::EXACT {
        return Err(QError::ExactUnsupported("infinite product h(x, alpha)".into()));
    }
    let q = ctx.q().clone();
    let qm = q.magnitude().unwrap_or(1.0);
    let am = alpha.magnitude().unwrap_or(f64::INFINITY);
    let xm = x.magnitude().unwrap_or(f64::INFINITY);
    let two = F::from_i64(2);
    let mut acc = F::one();
    let mut qk = F::one();
    let mut tail = 2.0 * am * xm + am * am;
    for _ in 0..ctx.max_terms {
        if tail / (1.0 - qm) < ctx.eps * 1e-3 {
            return Ok(acc);
        }
        let aq = alpha.clone() * qk.clone();
        acc = acc * (F::one() - two.clone() * aq.clone() * x.clone() + aq.clone() * aq);
        qk = qk * q.clone();
        tail *= qm;
    }
    Err(QError::NonConvergent {
        terms: ctx.max_terms,
        bound: tail,
    })
}

fn trig_params<F: Clone>(spec: &FamilySpec<F>) -> Option<Vec<F>> {
    match spec {
        FamilySpec::AlSalamChihara { a, b } => Some(vec![a.clone(), b.clone()]),
        FamilySpec::ContDualQHahn { a, b, c } => Some(vec![a.clone(), b.clone(), c.clone()]),
        FamilySpec::AskeyWilson { a, b, c, d } => Some(vec![a.clone(), b.clone(), c.clone(), d.clone()]),
        _ => None,
    }
}

pub fn orth_weight<F: Scalar>(ctx: &QContext<F>, spec: &FamilySpec<F>, point: &OrthPoint<F>) -> Result<F> {
    let q = ctx.q().clone();
    if let Some(ps) = trig_params(spec) {
        let x = match point {
            OrthPoint::Value(x) => x,
            OrthPoint::Index(_) => return Err(QError::param("point", "continuous family needs a value of x")),
        };
        if let Some(v) = x.approx() {
            if v.im != 0.0 || v.re.abs() > 1.0 {
                return Err(QError::param("x", format!("{x} outside [-1, 1]")));
            }
        }
        let s = ctx.s()?.clone();
        let mut num = F::one();
        for al in [F::one(), -F::one(), s.clone(), -s] {
            num = num * h_product(ctx, x, &al)?;
        }
        let mut den = F::one();
        for p in &ps {
            den = den * h_product(ctx, x, p)?;
        }
        return Ok(num / den);
    }
    let k = match point {
        OrthPoint::Index(k) => *k,
        OrthPoint::Value(_) => return Err(QError::param("point", "discrete family needs a grid index")),
    };
    match spec {
        FamilySpec::LittleQJacobi { a, b } => {
            let aq = a.clone() * q.clone();
            Ok(poch(&(b.clone() * q.clone()), &q, k) / poch(&q, &q, k) * aq.pow_i(k as i64))
        }
        FamilySpec::QHahn { alpha, beta, n } => {
            if k > *n {
                return Err(QError::param("x", format!("grid index {k} exceeds N = {n}")));
            }
            let qmn = q.pow_i(-(*n as i64));
            let num = poch(&(alpha.clone() * q.clone()), &q, k) * poch(&qmn, &q, k);
            let den = poch(&q, &q, k) * poch(&(beta.inv() * qmn), &q, k);
            let abq = alpha.clone() * beta.clone() * q.clone();
            Ok(num / den * abq.pow_i(-(k as i64)))
        }
        _ => unreachable!("continuous families handled above"),
    }
}

pub fn orth_norm<F: Scalar>(ctx: &QContext<F>, spec: &FamilySpec<F>, n: usize) -> Result<F> {
    let q = ctx.q().clone();
    let qp = |k: i64| q.pow_i(k);
    let one = F::one();
    let nn = n as i64;
    match spec {
        FamilySpec::AskeyWilson { .. } => Err(QError::NotImplemented(
            "Askey-Wilson norms depend on a measure with a discrete part".into(),
        )),
        FamilySpec::AlSalamChihara { a, b } => {
            let ab = a.clone() * b.clone();
            Ok(one / (poch_inf(ctx, &qp(nn + 1), &q)? * poch_inf(ctx, &(ab * qp(nn)), &q)?))
        }
        FamilySpec::ContDualQHahn { a, b, c } => {
            let mut den = poch_inf(ctx, &qp(nn + 1), &q)?;
            for p in [a.clone() * b.clone(), a.clone() * c.clone(), b.clone() * c.clone()] {
                den = den * poch_inf(ctx, &(p * qp(nn)), &q)?;
            }
            Ok(one / den)
        }
        FamilySpec::LittleQJacobi { a, b } => {
            let ab = a.clone() * b.clone();
            let aq = a.clone() * q.clone();
            let num = poch_inf(ctx, &(ab.clone() * qp(2)), &q)? * (one.clone() - ab.clone() * q.clone()) * aq.pow_i(nn);
            let den = poch_inf(ctx, &aq, &q)? * (one - ab.clone() * qp(2 * nn + 1));
            let fin = poch(&q, &q, n) * poch(&(b.clone() * q.clone()), &q, n)
                / (poch(&aq, &q, n) * poch(&(ab * q.clone()), &q, n));
            Ok(num / den * fin)
        }
        FamilySpec::QHahn { alpha, beta, n: big_n } => {
            if n > *big_n {
                return Err(QError::param("n", format!("degree {n} exceeds N = {big_n}")));
            }
            let bn = *big_n as i64;
            let ab = alpha.clone() * beta.clone();
            let aq = alpha.clone() * q.clone();
            let bq = beta.clone() * q.clone();
            let first = poch(&(ab.clone() * qp(2)), &q, *big_n) / (poch(&bq, &q, *big_n) * aq.pow_i(bn));
            let second = poch(&q, &q, n) * poch(&(ab.clone() * qp(bn + 2)), &q, n) * poch(&bq, &q, n)
                / (poch(&aq, &q, n) * poch(&(ab.clone() * q.clone()), &q, n) * poch(&qp(-bn), &q, n));
            let third = (one.clone() - ab.clone() * q.clone()) * (-aq).pow_i(nn) / (one - ab * qp(2 * nn + 1));
            Ok(first * second * third * qp(nn * (nn - 1) / 2 - bn * nn))
        }
    }
}

/// `(1/2π) ∫_0^π p_m p_n w dθ` for the continuous families, by adaptive Simpson.
pub fn orth_inner_continuous(ctx: &QContext<f64>, spec: &FamilySpec<f64>, m: usize, n: usize, tol: f64) -> Result<f64> {
    if trig_params(spec).is_none() {
        return Err(QError::param("family", "not a continuous family"));
    }
    let err = std::cell::RefCell::new(None);
    let f = |th: f64| {
        let x = th.cos();
        let r = (|| -> Result<f64> {
            let pm = orth_eval(ctx, spec, m, &x, EvalMode::Recurrence)?;
            let pn = orth_eval(ctx, spec, n, &x, EvalMode::Recurrence)?;
            let w = orth_weight(ctx, spec, &OrthPoint::Value(x))?;
            Ok(pm * pn * w)
        })();
        match r {
            Ok(v) => v,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let v = adaptive_simpson(f, 0.0, std::f64::consts::PI, tol, 40)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(v / (2.0 * std::f64::consts::PI))
}

/// Weighted discrete sum `Σ_k w(k) p_m p_n` for the discrete families.
///
/// q-Hahn sums are finite and exact. Little q-Jacobi sums are truncated once the
/// ratio-based tail estimate falls below `eps`.
pub fn orth_inner_discrete<F: Scalar>(ctx: &QContext<F>, spec: &FamilySpec<F>, m: usize, n: usize) -> Result<Truncated<F>> {
    let q = ctx.q().clone();
    match spec {
        FamilySpec::QHahn { n: big_n, .. } => {
            let mut sum = F::zero();
            for k in 0..=*big_n {
                let x = q.pow_i(-(k as i64));
                let w = orth_weight(ctx, spec, &OrthPoint::Index(k))?;
                sum = sum
                    + w * orth_eval(ctx, spec, m, &x, EvalMode::Explicit)?
                        * orth_eval(ctx, spec, n, &x, EvalMode::Explicit)?;
            }
            Ok(Truncated {
                value: sum,
                bound: 0.0,
                terms: big_n + 1,
            })
        }
        FamilySpec::LittleQJacobi { .. } => {
            if F::EXACT {
                return Err(QError::ExactUnsupported("infinite little q-Jacobi sum".into()));
            }
            let mut sum = F::zero();
            let mut last = f64::INFINITY;
            let mut x = F::one();
            for k in 0..ctx.max_terms {
                let t = orth_weight(ctx, spec, &OrthPoint::Index(k))?
                    * orth_eval(ctx, spec, m, &x, EvalMode::Recurrence)?
                    * orth_eval(ctx, spec, n, &x, EvalMode::Recurrence)?;
                let tm = t.magnitude().unwrap_or(f64::INFINITY);
                sum = sum + t;
                if k > 2 && last.is_finite() && last > 0.0 {
                    let rho = tm / last;
                    if rho < 1.0 {
                        let bound = tm * rho / (1.0 - rho);
                        if bound < ctx.eps * 1e-3 {
                            return Ok(Truncated {
                                value: sum,
                                bound,
                                terms: k + 1,
                            });
                        }
                    }
                }
                last = tm;
                x = x * q.clone();
            }
            Err(QError::NonConvergent {
                terms: ctx.max_terms,
                bound: f64::NAN,
            })
        }
        _ => Err(QError::param("family", "not a discrete family")),
    }
}

/// Residual of the second-order q-difference equation satisfied by the
/// degree-`n` polynomial of a discrete family, at grid index `k`.
///
/// Little q-Jacobi is evaluated at `x = q^k`, q-Hahn at `q^{-k}`.
pub fn difference_residual<F: Scalar>(ctx: &QContext<F>, spec: &FamilySpec<F>, n: usize, k: usize) -> Result<F> {
    let q = ctx.q().clone();
    let one = F::one();
    let nn = n as i64;
    match spec {
        FamilySpec::LittleQJacobi { a, b } => {
            let x = q.pow_i(k as i64);
            let y = |v: &F| orth_eval(ctx, spec, n, v, EvalMode::Explicit);
            let bx = a.clone() * (b.clone() * q.clone() * x.clone() - one.clone());
            let dx = x.clone() - one.clone();
            let lhs = q.pow_i(-nn) * (one.clone() - q.pow_i(nn)) * (one - a.clone() * b.clone() * q.pow_i(nn + 1)) * x.clone() * y(&x)?;
            let rhs = bx.clone() * y(&(q.clone() * x.clone()))? - (bx + dx.clone()) * y(&x)? + dx * y(&(x.clone() / q.clone()))?;
            Ok(lhs - rhs)
        }
        FamilySpec::QHahn { alpha, beta, n: big_n } => {
            let bn = *big_n as i64;
            let kk = k as i64;
            let y = |j: i64| orth_eval(ctx, spec, n, &q.pow_i(-j), EvalMode::Explicit);
            let bx = (one.clone() - q.pow_i(kk - bn)) * (one.clone() - alpha.clone() * q.pow_i(kk + 1));
            let dx = alpha.clone() * q.clone() * (one.clone() - q.pow_i(kk)) * (beta.clone() - q.pow_i(kk - bn - 1));
            let lhs = q.pow_i(-nn) * (one.clone() - q.pow_i(nn)) * (one - alpha.clone() * beta.clone() * q.pow_i(nn + 1)) * y(kk)?;
            let rhs = bx.clone() * y(kk + 1)? - (bx + dx.clone()) * y(kk)? + dx * y(kk - 1)?;
            Ok(lhs - rhs)
        }
        _ => Err(QError::param("family", "use aw_difference_residual for continuous families")),
    }
}

fn weight_t(ctx: &QContext<Complex64>, t: Complex64, params: &[Complex64]) -> Result<Complex64> {
    let q = *ctx.q();
    let mut num = poch_inf(ctx, &(t * t), &q)? * poch_inf(ctx, &(t * t).inv(), &q)?;
    for p in params {
        num /= poch_inf(ctx, &(p * t), &q)? * poch_inf(ctx, &(p / t), &q)?;
    }
    // divide by sin θ continued analytically to complex t
    let sin = (t - t.inv()) / Complex64::new(0.0, 2.0);
    Ok(num / sin)
}

/// Residual of the Askey-Wilson type q-difference equation
/// `(1-q)^2 D_q[w̃(q^{1/2} params) D_q y] + 4 q^{1-n} (1-q^n)(1 - abcd q^{n-1}) w̃(params) y = 0`
/// at `x = cos θ`, where `D_q` divides by differences of `x(t) = (t + 1/t)/2`.
/// The `abcd` factor is only present for Askey-Wilson.
pub fn aw_difference_residual(ctx: &QContext<f64>, spec: &FamilySpec<f64>, n: usize, theta: f64) -> Result<f64> {
    let params = trig_params(spec).ok_or_else(|| QError::param("family", "not a continuous family"))?;
    let cctx = ctx.complexified();
    let q = *ctx.q();
    let s = q.sqrt();
    let pc: Vec<Complex64> = params.iter().map(|p| Complex64::new(*p, 0.0)).collect();
    let ps: Vec<Complex64> = pc.iter().map(|p| p * s).collect();
    let spec_c = match spec {
        FamilySpec::AlSalamChihara { a, b } => FamilySpec::AlSalamChihara {
            a: Complex64::new(*a, 0.0),
            b: Complex64::new(*b, 0.0),
        },
        FamilySpec::ContDualQHahn { a, b, c } => FamilySpec::ContDualQHahn {
            a: Complex64::new(*a, 0.0),
            b: Complex64::new(*b, 0.0),
            c: Complex64::new(*c, 0.0),
        },
        FamilySpec::AskeyWilson { a, b, c, d } => FamilySpec::AskeyWilson {
            a: Complex64::new(*a, 0.0),
            b: Complex64::new(*b, 0.0),
            c: Complex64::new(*c, 0.0),
            d: Complex64::new(*d, 0.0),
        },
        _ => unreachable!(),
    };
    let xt = |t: Complex64| (t + t.inv()) * 0.5;
    let y = |t: Complex64| orth_eval(&cctx, &spec_c, n, &xt(t), EvalMode::Recurrence);
    let dq = |f: &dyn Fn(Complex64) -> Result<Complex64>, t: Complex64| -> Result<Complex64> {
        let (u, v) = (t * s, t / s);
        Ok((f(u)? - f(v)?) / (xt(u) - xt(v)))
    };
    let inner = |t: Complex64| -> Result<Complex64> { Ok(weight_t(&cctx, t, &ps)? * dq(&y, t)?) };
    let t0 = Complex64::from_polar(1.0, theta);
    let nn = n as i32;
    let prod: f64 = if params.len() == 4 { params.iter().product() } else { 0.0 };
    let lam = 4.0 * q.powi(1 - nn) * (1.0 - q.powi(nn)) * (1.0 - prod * q.powi(nn - 1));
    let r = (1.0 - q).powi(2) * dq(&inner, t0)? + weight_t(&cctx, t0, &pc)? * y(t0)? * lam;
    Ok(r.norm())
}

/// Left-hand side coefficients `c_0..c_nmax` of the generating function in `t`,
/// for comparison with the normalised polynomials on the right.
///
/// * Al-Salam-Chihara: `(at, bt; q)_inf / (e^{iθ}t, e^{-iθ}t; q)_inf`, coefficient
///   should equal `Q_n / (q;q)_n`. Needs a numerical field.
/// * little q-Jacobi: `0φ1(-; aq; q, aqxt) 2φ1(x^{-1}, 0; bq; q, xt)`, coefficient
///   should equal `(-1)^n q^{n(n-1)/2} p_n / (bq, q; q)_n`.
/// * q-Hahn at `x = q^{-k}`: `1φ1(q^{-k}; αq; q, αqt) 2φ1(q^{k-N}, 0; βq; q, q^{-k}t)`,
///   coefficient should equal `(q^{-N};q)_n Q_n / (βq, q; q)_n`.
pub fn generating_coeffs<F: Scalar>(ctx: &QContext<F>, spec: &FamilySpec<F>, point: &OrthPoint<F>, nmax: usize) -> Result<Vec<F>> {
    let q = ctx.q().clone();
    let qq = |k: usize| poch(&q, &q, k);
    let conv = |u: &[F], v: &[F]| -> Vec<F> {
        (0..=nmax)
            .map(|n| (0..=n).fold(F::zero(), |acc, i| acc + u[i].clone() * v[n - i].clone()))
            .collect()
    };
    let tri = |k: usize| q.pow_i((k * k.saturating_sub(1) / 2) as i64);
    let sgn = |k: usize| if k % 2 == 0 { F::one() } else { -F::one() };
    match (spec, point) {
        (FamilySpec::AlSalamChihara { a, b }, OrthPoint::Value(x)) => {
            if F::EXACT {
                return Err(QError::ExactUnsupported("trigonometric generating function".into()));
            }
            let xr = real_part(x).ok_or_else(|| QError::param("x", "needs a numerical value"))?;
            let th = xr.clamp(-1.0, 1.0).acos();
            let cheb = |m: f64| F::from_f64((m * th).cos()).expect("float field");
            // E_q(-at) E_q(-bt) e_q(e^{iθ}t) e_q(e^{-iθ}t)
            let ea: Vec<F> = (0..=nmax).map(|k| sgn(k) * a.pow_i(k as i64) * tri(k) / qq(k)).collect();
            let eb: Vec<F> = (0..=nmax).map(|k| sgn(k) * b.pow_i(k as i64) * tri(k) / qq(k)).collect();
            let ex: Vec<F> = (0..=nmax)
                .map(|n| {
                    (0..=n).fold(F::zero(), |acc, j| {
                        acc + cheb(2.0 * j as f64 - n as f64) / (qq(j) * qq(n - j))
                    })
                })
                .collect();
            Ok(conv(&conv(&ea, &eb), &ex))
        }
        (FamilySpec::LittleQJacobi { a, b }, OrthPoint::Value(x)) => {
            let aq = a.clone() * q.clone();
            let bq = b.clone() * q.clone();
            let u: Vec<F> = (0..=nmax)
                .map(|k| tri(k) * tri(k) * (aq.clone() * x.clone()).pow_i(k as i64) / (poch(&aq, &q, k) * qq(k)))
                .collect();
            let v: Vec<F> = (0..=nmax)
                .map(|k| {
                    let mut p = F::one();
                    for j in 0..k {
                        p = p * (x.clone() - q.pow_i(j as i64));
                    }
                    p / (poch(&bq, &q, k) * qq(k))
                })
                .collect();
            Ok(conv(&u, &v))
        }
        (FamilySpec::QHahn { alpha, beta, n }, OrthPoint::Index(k)) => {
            if k > n {
                return Err(QError::param("x", format!("grid index {k} exceeds N = {n}")));
            }
            let kk = *k as i64;
            let nn = *n as i64;
            let aq = alpha.clone() * q.clone();
            let bq = beta.clone() * q.clone();
            let xk = q.pow_i(-kk);
            let u: Vec<F> = (0..=nmax)
                .map(|j| sgn(j) * tri(j) * poch(&xk, &q, j) * aq.pow_i(j as i64) / (poch(&aq, &q, j) * qq(j)))
                .collect();
            let v: Vec<F> = (0..=nmax)
                .map(|j| poch(&q.pow_i(kk - nn), &q, j) * xk.pow_i(j as i64) / (poch(&bq, &q, j) * qq(j)))
                .collect();
            Ok(conv(&u, &v))
        }
        _ => Err(QError::param("family", "no generating function for this family and point")),
    }
}
