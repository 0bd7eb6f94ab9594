//! Weighted Bergman spaces, Toeplitz operators, the Berezin transform and
//! the Berezin star product.
//!
//! The weight enters only through `t = q^{2(lambda-1)}`, so `q^{2 lambda} = t q^2`.

use std::collections::{BTreeMap, HashMap};

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::matrix::Mat;
use crate::poly::UPoly;
use crate::qdisc::{laplacian_apply, laplacian_radial_apply, pol_multiply, PolElement, Radial, RadialFunction};
use crate::qseries::{poch, Truncated};
use crate::scalar::Scalar;

/// A weighted Bergman space, described by `t = q^{2(lambda-1)}` in `(0, 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSpace<F> {
    pub t: F,
    pub lambda: Option<f64>,
}

impl<F: Scalar> WeightedSpace<F> {
    pub fn from_t(t: F) -> Result<Self> {
        if let Some(v) = t.approx() {
            if v.im != 0.0 || !(v.re > 0.0 && v.re < 1.0) {
                return Err(QError::param("t", "must lie in (0, 1), i.e. lambda > 1"));
            }
        }
        Ok(WeightedSpace { t, lambda: None })
    }

    /// Integral weight, exact in every field.
    pub fn integral(ctx: &QContext<F>, lambda: i64) -> Result<Self> {
        if lambda <= 1 {
            return Err(QError::param("lambda", format!("{lambda} is not > 1")));
        }
        Ok(WeightedSpace {
            t: ctx.qp(2 * (lambda - 1)),
            lambda: Some(lambda as f64),
        })
    }

    /// `q^{2 lambda}`
    pub fn q2lambda(&self, ctx: &QContext<F>) -> F {
        self.t.clone() * ctx.qp(2)
    }
}

impl WeightedSpace<f64> {
    pub fn new(ctx: &QContext<f64>, lambda: f64) -> Result<Self> {
        if !(lambda > 1.0) {
            return Err(QError::param("lambda", format!("{lambda} is not > 1")));
        }
        Ok(WeightedSpace {
            t: f64::powf(*ctx.q(), 2.0 * (lambda - 1.0)),
            lambda: Some(lambda),
        })
    }
}

/// `||z^n||^2 = (q^2;q^2)_n / (q^{2 lambda};q^2)_n`
pub fn monomial_norm<F: Scalar>(ctx: &QContext<F>, space: &WeightedSpace<F>, n: usize) -> F {
    let b = ctx.qp(2);
    poch(&b, &b, n) / poch(&space.q2lambda(ctx), &b, n)
}

/// Coefficient of `(z ⊗ zeta*)^m` in the Bergman kernel.
pub fn bergman_kernel_coeff<F: Scalar>(ctx: &QContext<F>, space: &WeightedSpace<F>, m: usize) -> F {
    let b = ctx.qp(2);
    poch(&space.q2lambda(ctx), &b, m) / poch(&b, &b, m)
}

/// Symbols with closed-form Toeplitz matrices.
#[derive(Clone, Debug, PartialEq)]
pub enum Symbol<F> {
    Z,
    ZStar,
    /// `y^k`
    YPow(usize),
    /// polynomial in `y`
    Poly(UPoly<F>),
}

/// Eigenvalue of the Toeplitz operator with symbol `y^k` on `z^n`.
fn ypow_eigen<F: Scalar>(ctx: &QContext<F>, space: &WeightedSpace<F>, k: usize, n: usize) -> F {
    let b = ctx.qp(2);
    let t = &space.t;
    ctx.qp(2 * (k * n) as i64) * poch(t, &b, k) / poch(&(t.clone() * ctx.qp(2 * (n as i64 + 1))), &b, k)
}

/// `N x N` Toeplitz matrix in the monomial basis `{z^n}`; column `n` is the image of `z^n`.
pub fn toeplitz_matrix<F: Scalar>(ctx: &QContext<F>, space: &WeightedSpace<F>, symbol: &Symbol<F>, n: usize) -> Result<Mat<F>> {
    if n < 2 {
        return Err(QError::param("N", "must be at least 2"));
    }
    let mut m = Mat::zeros(n, n);
    match symbol {
        Symbol::Z => {
            for k in 0..n - 1 {
                m.set(k + 1, k, F::one());
            }
        }
        Symbol::ZStar => {
            for k in 1..n {
                let qk = ctx.qp(2 * k as i64);
                let v = (F::one() - qk.clone()) / (F::one() - space.t.clone() * qk);
                m.set(k - 1, k, v);
            }
        }
        Symbol::YPow(p) => {
            for k in 0..n {
                m.set(k, k, ypow_eigen(ctx, space, *p, k));
            }
        }
        Symbol::Poly(p) => {
            for k in 0..n {
                let v = p
                    .coeffs()
                    .iter()
                    .enumerate()
                    .fold(F::zero(), |acc, (i, c)| acc + c.clone() * ypow_eigen(ctx, space, i, k));
                m.set(k, k, v);
            }
        }
    }
    Ok(m)
}

/// Diagonal of the Toeplitz operator with a radial symbol `f(y)`, by the Jackson-integral quotient.
pub fn toeplitz_radial(
    ctx: &QContext<f64>,
    space: &WeightedSpace<f64>,
    f: impl Fn(f64) -> f64,
    n: usize,
) -> Result<Vec<Truncated<f64>>> {
    let q2 = ctx.q() * ctx.q();
    let t = space.t;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut num, mut den) = (0.0, 0.0);
        let mut terms = 0;
        let mut tk = 1.0;
        loop {
            if terms >= ctx.max_terms {
                return Err(QError::NonConvergent { terms, bound: tk });
            }
            let w = poch(&q2.powi(terms as i32 + 1), &q2, k) * tk;
            num += f(q2.powi((k + terms) as i32)) * w;
            den += w;
            terms += 1;
            tk *= t;
            // weights are at most 1 and the remaining mass is bounded by t^k / (1 - t)
            if tk / (1.0 - t) < ctx.eps * 1e-3 * den {
                break;
            }
        }
        out.push(Truncated {
            value: num / den,
            bound: tk / (1.0 - t) / den,
            terms,
        });
    }
    Ok(out)
}

/// Matrix of `sum a_ij zhat^i zhat*^j` from the closed formula for its entries.
pub fn covariant_symbol_matrix<F: Scalar>(
    ctx: &QContext<F>,
    space: &WeightedSpace<F>,
    table: &BTreeMap<(usize, usize), F>,
    n: usize,
) -> Mat<F> {
    let b = ctx.qp(-2);
    let mut m = Mat::zeros(n, n);
    for col in 0..n {
        let top = ctx.qp(2 * col as i64);
        let topt = space.t.clone() * top.clone();
        for row in 0..n {
            let mut acc = F::zero();
            for j in 0..=col {
                if row + j < col {
                    continue;
                }
                if let Some(a) = table.get(&(row + j - col, j)) {
                    acc = acc + poch(&top, &b, j) / poch(&topt, &b, j) * a.clone();
                }
            }
            m.set(row, col, acc);
        }
    }
    m
}

/// Left side of the finite identity behind the Toeplitz operator of `f_0`; equals `δ_{j,0}`.
pub fn f0_hat_sum<F: Scalar>(ctx: &QContext<F>, space: &WeightedSpace<F>, j: usize) -> F {
    let b = ctx.qp(2);
    let bi = ctx.qp(-2);
    let ql = space.q2lambda(ctx);
    let top = ctx.qp(2 * j as i64);
    let topt = space.t.clone() * top.clone();
    (0..=j).fold(F::zero(), |acc, k| {
        let term = poch(&ql.inv(), &b, k) / poch(&b, &b, k) * poch(&top, &bi, k) / poch(&topt, &bi, k);
        acc + term * ql.pow_i(k as i64)
    })
}

/// Grid values of the partial sum `sum_{k<=K} (q^{-2 lambda};q^2)_k/(q^2;q^2)_k q^{2 lambda k} z^k z*^k`.
///
/// At `y = q^{2j}` the terms with `k > j` vanish, so the sum is exact for `K >= j`.
pub fn y_lambda_partial<F: Scalar>(ctx: &QContext<F>, space: &WeightedSpace<F>, kmax: usize, n: usize) -> RadialFunction<F> {
    let b = ctx.qp(2);
    let bi = ctx.qp(-2);
    let ql = space.q2lambda(ctx);
    let coeffs: Vec<F> = (0..=kmax)
        .map(|k| poch(&ql.inv(), &b, k) / poch(&b, &b, k) * ql.pow_i(k as i64))
        .collect();
    let mut rf = RadialFunction::from_fn(n, |j| {
        let y = ctx.qp(2 * j as i64);
        coeffs
            .iter()
            .enumerate()
            .take(j + 1)
            .fold(F::zero(), |acc, (k, c)| acc + c.clone() * poch(&y, &bi, k))
    });
    rf.exact_len = rf.exact_len.min(kmax + 1);
    rf
}

/// `z^a z*^b` in canonical form.
pub fn zzs_element<F: Scalar>(ctx: &QContext<F>, a: usize, b: usize) -> PolElement<F> {
    let k = a.min(b);
    let r = Radial::constant(F::one()).lmul(ctx.q(), k);
    PolElement::term(a as i64 - b as i64, r)
}

/// Partial sum `sum_{j<=J} (-1)^j q^{j(j-1)}/(q^2;q^2)_j z^j z*^j` of the expansion of `f_0`.
pub fn f0_expansion<F: Scalar>(ctx: &QContext<F>, jmax: usize) -> PolElement<F> {
    let b = ctx.qp(2);
    (0..=jmax).fold(PolElement::zero(), |acc, j| {
        let sign = if j % 2 == 0 { F::one() } else { -F::one() };
        let c = sign * ctx.qp((j * j.saturating_sub(1)) as i64) / poch(&b, &b, j);
        acc.add(&zzs_element(ctx, j, j).scale(&c))
    })
}

/// Coefficients `c_{ab}` with `f = sum c_{ab} z^a z*^b`, for polynomial `f`.
pub fn zzs_decompose<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>) -> Result<BTreeMap<(usize, usize), F>> {
    if !f.is_polynomial() {
        return Err(QError::param("f", "expected a polynomial element"));
    }
    let q = ctx.q();
    let mut out = BTreeMap::new();
    for (m, psi) in f.coeffs() {
        let mut rest = psi.poly.clone();
        while let Some(d) = rest.degree() {
            let basis = Radial::constant(F::one()).lmul(q, d).poly;
            let c = rest.lead() / basis.lead();
            rest = rest - basis.scale(&c);
            let key = if *m >= 0 {
                (*m as usize + d, d)
            } else {
                (d, d + (-*m) as usize)
            };
            out.insert(key, c);
        }
    }
    Ok(out)
}

/// Coefficients of `p_j` as a polynomial in `x`.
///
/// The coefficients alternate and grow quickly, so evaluate in exact arithmetic for large `j`.
pub fn p_poly<F: Scalar>(ctx: &QContext<F>, j: usize) -> UPoly<F> {
    let b = ctx.qp(2);
    let one = F::one();
    let lin = (one.clone() - b.clone()).pow_i(2);
    let top = ctx.qp(-2 * j as i64);
    let mut acc = UPoly::zero();
    let mut prod = UPoly::constant(one.clone());
    for k in 0..=j {
        let c = poch(&top, &b, k) / poch(&b, &b, k).pow_i(2) * b.pow_i(k as i64);
        acc = acc + prod.scale(&c);
        let bi = b.pow_i(k as i64);
        let alpha = one.clone() - bi.clone() * (one.clone() + b.clone()) + bi.pow_i(2) * b.clone();
        prod = prod * UPoly::from_coeffs(vec![alpha, bi * lin.clone()]);
    }
    acc
}

/// `p(L) psi` on grid samples, via repeated radial Laplacians.
pub fn apply_radial_poly<F: Scalar>(ctx: &QContext<F>, p: &UPoly<F>, psi: &RadialFunction<F>) -> Result<RadialFunction<F>> {
    let mut acc = RadialFunction {
        values: vec![F::zero(); psi.len()],
        exact_len: psi.exact_len,
    };
    let mut power = psi.clone();
    for (i, c) in p.coeffs().iter().enumerate() {
        if i > 0 {
            power = laplacian_radial_apply(ctx, &power)?;
        }
        for (a, v) in acc.values.iter_mut().zip(&power.values) {
            *a = a.clone() + c.clone() * v.clone();
        }
        acc.exact_len = acc.exact_len.min(power.exact_len);
    }
    Ok(acc)
}

/// `max |p_j(x)|` over `x` sampled on the spectrum of the Laplacian, for `j <= jmax`.
pub fn p_spectral_sup(q: f64, jmax: usize) -> Vec<f64> {
    let d = (1.0 - q * q).powi(2);
    let mut sup = vec![0.0f64; jmax + 1];
    let samples = 256;
    for i in 0..=samples {
        let theta = std::f64::consts::PI * i as f64 / samples as f64;
        let x = (1.0 - 2.0 * q * theta.cos() + q * q) / d;
        let (mut prev, mut cur) = (0.0, 1.0);
        for (j, s) in sup.iter_mut().enumerate() {
            *s = s.max(f64::abs(cur));
            let up = (1.0 - q.powi(2 * (j as i32 + 1))) / d;
            let a = (1.0 + q * q - 2.0 * q.powi(2 * (j as i32 + 1))) / d;
            let c = q * q * (1.0 - q.powi(2 * j as i32)) / d;
            let next = ((a - x) * cur - c * prev) / up;
            prev = cur;
            cur = next;
        }
    }
    sup
}

/// Berezin transform of a finitely supported radial function, on `n` grid points.
///
/// The `j`-sum stops once `t^j sup|p_j| ||f||_2 / sqrt(q^{-2} - 1)` is below `eps`,
/// with `sup|p_j|` sampled on the spectrum; the reported bound is that term over `1 - t`.
pub fn berezin_radial(
    ctx: &QContext<f64>,
    space: &WeightedSpace<f64>,
    f: &RadialFunction<f64>,
    n: usize,
) -> Result<Truncated<RadialFunction<f64>>> {
    let q = *ctx.q();
    let t = space.t;
    let norm2: f64 = f
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| v * v * q.powi(-2 * j as i32))
        .sum::<f64>()
        * (q.powi(-2) - 1.0);
    let scale = norm2.sqrt() / (q.powi(-2) - 1.0).sqrt();
    let mut cap = 64;
    let (jmax, tail) = loop {
        let sup = p_spectral_sup(q, cap);
        let hit = (1..=cap).find(|&j| t.powi(j as i32) * sup[j] * scale < ctx.eps * (1.0 - t));
        if let Some(j) = hit {
            break (j - 1, t.powi(j as i32) * sup[j] * scale / (1.0 - t));
        }
        if cap >= ctx.max_terms {
            return Err(QError::NonConvergent {
                terms: cap,
                bound: t.powi(cap as i32) * sup[cap] * scale,
            });
        }
        cap = (cap * 2).min(ctx.max_terms);
    };
    let width = n.max(f.len()) + jmax + 2;
    let mut padded = f.values.clone();
    padded.resize(width, 0.0);
    let mut cur = RadialFunction::new(padded);
    let mut prev = RadialFunction::new(vec![0.0; width]);
    let mut acc = vec![0.0; width];
    // three-term recurrence for p_j(L) f
    for j in 0..=jmax {
        let tj = t.powi(j as i32);
        for (a, v) in acc.iter_mut().zip(&cur.values) {
            *a += (1.0 - t) * tj * v;
        }
        let lcur = laplacian_radial_apply(ctx, &cur)?;
        let d = (1.0 - q * q).powi(2);
        let up = (1.0 - q.powi(2 * (j as i32 + 1))) / d;
        let a = (1.0 + q * q - 2.0 * q.powi(2 * (j as i32 + 1))) / d;
        let c = q * q * (1.0 - q.powi(2 * j as i32)) / d;
        let next: Vec<f64> = (0..width)
            .map(|i| ((a * cur.values[i] - lcur.values[i]) - c * prev.values[i]) / up)
            .collect();
        prev = cur;
        cur = RadialFunction::new(next);
    }
    acc.truncate(n);
    Ok(Truncated {
        value: RadialFunction::new(acc),
        bound: tail,
        terms: jmax + 1,
    })
}

/// Symmetric q-number `[x]_q = (q^x - q^{-x}) / (q - q^{-1})`.
pub fn q_bracket(q: f64, x: f64) -> f64 {
    (q.powf(x) - q.powf(-x)) / (q - 1.0 / q)
}

/// `prod_{j<M} (1 + q / ([lambda+j][lambda+j-1]) L)^{-1} f` on a grid of `n` points.
pub fn berezin_product_formula(
    ctx: &QContext<f64>,
    lambda: f64,
    f: &RadialFunction<f64>,
    factors: usize,
    n: usize,
) -> Result<RadialFunction<f64>> {
    if !(lambda > 1.0) {
        return Err(QError::param("lambda", format!("{lambda} is not > 1")));
    }
    let q = *ctx.q();
    let d = (1.0 - q * q).powi(2);
    let mut u = f.values.clone();
    u.resize(n, 0.0);
    for j in 0..factors {
        let lj = lambda + j as f64;
        let c = q / (q_bracket(q, lj) * q_bracket(q, lj - 1.0));
        // (I + cL) v = u, tridiagonal with psi_n = 0
        let sub: Vec<f64> = (0..n).map(|i| -c * q * q * (1.0 - q.powi(2 * i as i32)) / d).collect();
        let diag: Vec<f64> = (0..n)
            .map(|i| 1.0 + c * (1.0 + q * q - 2.0 * q.powi(2 * (i as i32 + 1))) / d)
            .collect();
        let sup: Vec<f64> = (0..n).map(|i| -c * (1.0 - q.powi(2 * (i as i32 + 1))) / d).collect();
        u = thomas(&sub, &diag, &sup, &u);
    }
    Ok(RadialFunction::new(u))
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / m;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn laplacian_powers<F: Scalar>(ctx: &QContext<F>, h: &PolElement<F>, n: usize) -> Result<Vec<PolElement<F>>> {
    let mut powers = vec![h.clone()];
    for i in 0..n {
        let next = laplacian_apply(ctx, &powers[i])?;
        powers.push(next);
    }
    Ok(powers)
}

fn combine<F: Scalar>(p: &UPoly<F>, powers: &[PolElement<F>]) -> PolElement<F> {
    p.coeffs()
        .iter()
        .zip(powers)
        .fold(PolElement::zero(), |acc, (c, e)| acc.add(&e.scale(c)))
}

/// `p(□) h` for an element of the disc.
pub fn apply_laplacian_poly<F: Scalar>(ctx: &QContext<F>, p: &UPoly<F>, h: &PolElement<F>) -> Result<PolElement<F>> {
    let powers = laplacian_powers(ctx, h, p.degree().unwrap_or(0))?;
    Ok(combine(p, &powers))
}

/// Truncated formal series `sum_{k<=K} t^k c_k` with coefficients in the disc.
#[derive(Clone, Debug, PartialEq)]
pub struct StarSeries<F> {
    pub coeffs: Vec<PolElement<F>>,
}

impl<F: Scalar> StarSeries<F> {
    pub fn constant(f: PolElement<F>, order: usize) -> Self {
        let mut coeffs = vec![PolElement::zero(); order + 1];
        coeffs[0] = f;
        StarSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// Memoised `m_k(z*^b z^c) = (p_k(□) - p_{k-1}(□))(z*^b z^c)`.
struct Middle<'a, F> {
    ctx: &'a QContext<F>,
    order: usize,
    polys: Vec<UPoly<F>>,
    cache: HashMap<(usize, usize), Vec<PolElement<F>>>,
}

impl<'a, F: Scalar> Middle<'a, F> {
    fn new(ctx: &'a QContext<F>, order: usize) -> Self {
        Middle {
            ctx,
            order,
            polys: (0..=order).map(|j| p_poly(ctx, j)).collect(),
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, b: usize, c: usize) -> Result<&Vec<PolElement<F>>> {
        if !self.cache.contains_key(&(b, c)) {
            let ctx = self.ctx;
            let h = pol_multiply(ctx, &zzs_element(ctx, 0, b), &zzs_element(ctx, c, 0));
            let powers = laplacian_powers(ctx, &h, self.order)?;
            let vals: Vec<PolElement<F>> = self.polys.iter().map(|p| combine(p, &powers)).collect();
            let mut m = vec![vals[0].clone()];
            for k in 1..vals.len() {
                m.push(vals[k].sub(&vals[k - 1]));
            }
            self.cache.insert((b, c), m);
        }
        Ok(&self.cache[&(b, c)])
    }
}

fn star_terms<F: Scalar>(
    mid: &mut Middle<'_, F>,
    f: &PolElement<F>,
    g: &PolElement<F>,
    shift: usize,
    out: &mut [PolElement<F>],
) -> Result<()> {
    let ctx = mid.ctx;
    let fd = zzs_decompose(ctx, f)?;
    let gd = zzs_decompose(ctx, g)?;
    for ((a, b), cf) in &fd {
        for ((c, d), cg) in &gd {
            let left = zzs_element(ctx, *a, 0);
            let right = zzs_element(ctx, 0, *d);
            let coeff = cf.clone() * cg.clone();
            let ms = mid.get(*b, *c)?.clone();
            for (k, m) in ms.iter().enumerate() {
                if k + shift >= out.len() {
                    break;
                }
                let p = pol_multiply(ctx, &pol_multiply(ctx, &left, m), &right);
                out[k + shift] = out[k + shift].add(&p.scale(&coeff));
            }
        }
    }
    Ok(())
}

/// `f *_t g` through order `t^K`, for polynomial `f`, `g`.
pub fn star_product<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>, g: &PolElement<F>, order: usize) -> Result<StarSeries<F>> {
    star_series_product(ctx, &StarSeries::constant(f.clone(), order), &StarSeries::constant(g.clone(), order), order)
}

/// Product of two truncated series through order `t^K`.
pub fn star_series_product<F: Scalar>(
    ctx: &QContext<F>,
    a: &StarSeries<F>,
    b: &StarSeries<F>,
    order: usize,
) -> Result<StarSeries<F>> {
    let mut mid = Middle::new(ctx, order);
    let mut out = vec![PolElement::zero(); order + 1];
    for (i, fa) in a.coeffs.iter().enumerate() {
        for (j, gb) in b.coeffs.iter().enumerate() {
            if i + j > order || fa.is_zero() || gb.is_zero() {
                continue;
            }
            star_terms(&mut mid, fa, gb, i + j, &mut out)?;
        }
    }
    Ok(StarSeries { coeffs: out })
}

/// Matrix of `Q(f) = sum c_ab zhat^a zhat*^b` on the first `n` monomials, as a series in a formal `t`.
///
/// Entry `k` of the result is the coefficient of `t^k`, for `k <= order`.
pub fn toeplitz_series<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>, n: usize, order: usize) -> Result<Vec<Mat<F>>> {
    let decomp = zzs_decompose(ctx, f)?;
    let mut out = vec![Mat::zeros(n, n); order + 1];
    for ((a, b), c) in &decomp {
        for col in *b..n {
            let row = col - b + a;
            if row >= n {
                continue;
            }
            // prod_{k<b} (1 - x_k) / (1 - t x_k), x_k = q^{2(col-k)}
            let mut series = vec![F::zero(); order + 1];
            series[0] = c.clone();
            for k in 0..*b {
                let x = ctx.qp(2 * (col - k) as i64);
                for i in 0..=order {
                    series[i] = series[i].clone() * (F::one() - x.clone());
                }
                for i in 1..=order {
                    series[i] = series[i].clone() + x.clone() * series[i - 1].clone();
                }
            }
            for (i, v) in series.into_iter().enumerate() {
                out[i].add_to(row, col, v);
            }
        }
    }
    Ok(out)
}
