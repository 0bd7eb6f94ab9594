//! The quantum disc.
//!
//! Elements of the polynomial algebra and of the algebra of finite functions
//! are stored in the canonical form `sum_m z^m psi_m(y)` (weights `m > 0`),
//! `psi_0(y)` and `psi_m(y) z*^{|m|}` (weights `m < 0`), where
//! `y = 1 - z z*` and every `psi_m` is a polynomial plus a finitely
//! supported function on the grid `y = q^{2j}`.
//!
//! Throughout, `s = q^{1/2}` and `S` denotes the shift `psi(y) -> psi(q^2 y)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::context::QContext;
use crate::error::{QError, Result};
use crate::matrix::Mat;
use crate::ncgroebner::{Alphabet, NCPoly, Word};
use crate::poly::UPoly;
use crate::qseries::{poch, poch_inf, q_gamma_c};
use crate::quad::adaptive_simpson;
use crate::scalar::Scalar;

/// A radial coefficient `psi(y)`: polynomial part plus finite grid part.
///
/// The grid part maps `j` to the extra value at `y = q^{2j}`. Zero values
/// are never stored, so equality is structural.
#[derive(Clone, Debug, PartialEq)]
pub struct Radial<F> {
    pub poly: UPoly<F>,
    pub grid: BTreeMap<usize, F>,
}

impl<F: Scalar> Radial<F> {
    pub fn zero() -> Self {
        Radial {
            poly: UPoly::zero(),
            grid: BTreeMap::new(),
        }
    }

    pub fn from_poly(poly: UPoly<F>) -> Self {
        Radial {
            poly,
            grid: BTreeMap::new(),
        }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(UPoly::constant(c))
    }

    /// Finite function with the given grid values.
    pub fn from_grid(values: impl IntoIterator<Item = (usize, F)>) -> Self {
        let mut r = Self::zero();
        for (j, v) in values {
            r.add_grid(j, v);
        }
        r
    }

    /// Indicator of the grid point `y = q^{2j}`.
    pub fn delta(j: usize) -> Self {
        Self::from_grid([(j, F::one())])
    }

    fn add_grid(&mut self, j: usize, v: F) {
        if v.is_zero() {
            return;
        }
        let e = self.grid.entry(j).or_insert_with(F::zero);
        *e = e.clone() + v;
        if e.is_zero() {
            self.grid.remove(&j);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero() && self.grid.is_empty()
    }

    /// True when the polynomial part vanishes.
    pub fn is_finite(&self) -> bool {
        self.poly.is_zero()
    }

    /// Largest grid index carrying a value.
    pub fn support_end(&self) -> Option<usize> {
        self.grid.keys().next_back().copied()
    }

    /// `psi(q^{2j})`
    pub fn at(&self, q: &F, j: usize) -> F {
        let y = q.pow_i(2 * j as i64);
        let g = self.grid.get(&j).cloned().unwrap_or_else(F::zero);
        self.poly.eval(&y) + g
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Radial {
            poly: self.poly.scale(c),
            grid: self.grid.iter().map(|(j, v)| (*j, v.clone() * c.clone())).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = Radial {
            poly: self.poly.clone() + o.poly.clone(),
            grid: self.grid.clone(),
        };
        for (j, v) in &o.grid {
            r.add_grid(*j, v.clone());
        }
        r
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    /// Pointwise product.
    pub fn mul(&self, q: &F, o: &Self) -> Self {
        let mut r = Self::from_poly(self.poly.clone() * o.poly.clone());
        let keys: Vec<usize> = self.grid.keys().chain(o.grid.keys()).copied().collect();
        for j in keys {
            if r.grid.contains_key(&j) {
                continue;
            }
            let y = q.pow_i(2 * j as i64);
            let (pa, pb) = (self.poly.eval(&y), o.poly.eval(&y));
            let ga = self.grid.get(&j).cloned().unwrap_or_else(F::zero);
            let gb = o.grid.get(&j).cloned().unwrap_or_else(F::zero);
            let v = ga.clone() * gb.clone() + pa * gb + ga * pb;
            // mark visited even when zero
            r.grid.insert(j, v);
        }
        r.grid.retain(|_, v| !v.is_zero());
        r
    }

    /// `S^k psi`, that is `psi(q^{2k} y)`.
    pub fn shift(&self, q: &F, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        Radial {
            poly: self.poly.dilate(&q.pow_i(2 * k as i64)),
            grid: self
                .grid
                .iter()
                .filter(|(j, _)| **j >= k)
                .map(|(j, v)| (j - k, v.clone()))
                .collect(),
        }
    }

    /// `L^b psi` where `L psi = z psi z* = (1 - y) psi(q^{-2} y)`.
    pub fn lmul(&self, q: &F, b: usize) -> Self {
        let one_minus_y = UPoly::from_coeffs(vec![F::one(), -F::one()]);
        let qm2 = q.pow_i(-2);
        let mut r = self.clone();
        for _ in 0..b {
            let mut next = Self::from_poly(one_minus_y.clone() * r.poly.dilate(&qm2));
            for (j, v) in &r.grid {
                let w = F::one() - q.pow_i(2 * (*j as i64 + 1));
                next.add_grid(j + 1, v.clone() * w);
            }
            r = next;
        }
        r
    }
}

/// `(q^2 y; q^2)_c` as a polynomial in `y`.
fn rho<F: Scalar>(q: &F, c: usize) -> UPoly<F> {
    let mut p = UPoly::constant(F::one());
    for i in 1..=c {
        p = p * UPoly::from_coeffs(vec![F::one(), -q.pow_i(2 * i as i64)]);
    }
    p
}

/// An element of the quantum disc in canonical form, keyed by weight.
#[derive(Clone, Debug, PartialEq)]
pub struct PolElement<F> {
    coeffs: BTreeMap<i64, Radial<F>>,
}

impl<F: Scalar> PolElement<F> {
    pub fn zero() -> Self {
        PolElement {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::radial(Radial::constant(F::one()))
    }

    /// `z^m psi` for `m >= 0`, `psi z*^{|m|}` for `m < 0`.
    pub fn term(weight: i64, psi: Radial<F>) -> Self {
        let mut e = Self::zero();
        e.push(weight, psi);
        e
    }

    pub fn radial(psi: Radial<F>) -> Self {
        Self::term(0, psi)
    }

    pub fn z() -> Self {
        Self::term(1, Radial::constant(F::one()))
    }

    pub fn zs() -> Self {
        Self::term(-1, Radial::constant(F::one()))
    }

    /// `y = 1 - z z*`
    pub fn y() -> Self {
        Self::radial(Radial::from_poly(UPoly::x()))
    }

    /// `f_j`, the indicator of the grid point `y = q^{2j}`; `f_0` is the vacuum projector.
    pub fn f(j: usize) -> Self {
        Self::radial(Radial::delta(j))
    }

    fn push(&mut self, weight: i64, psi: Radial<F>) {
        if psi.is_zero() {
            return;
        }
        let r = match self.coeffs.remove(&weight) {
            Some(old) => old.add(&psi),
            None => psi,
        };
        if !r.is_zero() {
            self.coeffs.insert(weight, r);
        }
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Radial<F>> {
        &self.coeffs
    }

    pub fn coeff(&self, weight: i64) -> Radial<F> {
        self.coeffs.get(&weight).cloned().unwrap_or_else(Radial::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when every radial coefficient is finitely supported.
    pub fn is_finite(&self) -> bool {
        self.coeffs.values().all(Radial::is_finite)
    }

    /// True when no coefficient has a grid part.
    pub fn is_polynomial(&self) -> bool {
        self.coeffs.values().all(|r| r.grid.is_empty())
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut e = Self::zero();
        for (m, r) in &self.coeffs {
            e.push(*m, r.scale(c));
        }
        e
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut e = self.clone();
        for (m, r) in &o.coeffs {
            e.push(*m, r.clone());
        }
        e
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-F::one()))
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> PolElement<G> {
        let mut e = PolElement::zero();
        for (m, r) in &self.coeffs {
            let poly = UPoly::from_coeffs(r.poly.coeffs().iter().map(&f).collect());
            let mut rr = Radial::from_poly(poly);
            for (j, v) in &r.grid {
                rr.add_grid(*j, f(v));
            }
            e.push(*m, rr);
        }
        e
    }
}

impl<F: Scalar> fmt::Display for PolElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, r) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if !r.poly.is_zero() {
                parts.push(format!("({})", r.poly.to_string().replace('x', "y")));
            }
            for (j, v) in &r.grid {
                parts.push(format!("({v})f{j}"));
            }
            let psi = parts.join(" + ");
            match m.cmp(&0) {
                std::cmp::Ordering::Greater => write!(f, "z^{m}[{psi}]")?,
                std::cmp::Ordering::Equal => write!(f, "[{psi}]")?,
                std::cmp::Ordering::Less => write!(f, "[{psi}]z*^{}", -m)?,
            }
        }
        Ok(())
    }
}

fn split(weight: i64) -> (usize, usize) {
    if weight >= 0 {
        (weight as usize, 0)
    } else {
        (0, (-weight) as usize)
    }
}

/// `z^a chi z*^b` in canonical form.
fn normalize<F: Scalar>(q: &F, a: usize, chi: Radial<F>, b: usize) -> (i64, Radial<F>) {
    if a >= b {
        ((a - b) as i64, chi.lmul(q, b))
    } else {
        (-((b - a) as i64), chi.lmul(q, a))
    }
}

/// Product of two canonical elements.
pub fn pol_multiply<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>, g: &PolElement<F>) -> PolElement<F> {
    let q = ctx.q();
    let mut out = PolElement::zero();
    for (m1, psi) in &f.coeffs {
        let (a, b) = split(*m1);
        for (m2, phi) in &g.coeffs {
            let (c, d) = split(*m2);
            let (big_a, chi, big_b) = if b >= c {
                let inner = Radial::from_poly(rho(q, c)).mul(q, phi).shift(q, b - c);
                (a, psi.mul(q, &inner), b - c + d)
            } else {
                let inner = psi.mul(q, &Radial::from_poly(rho(q, b))).shift(q, c - b);
                (a + c - b, inner.mul(q, phi), d)
            };
            let (w, r) = normalize(q, big_a, chi, big_b);
            out.push(w, r);
        }
    }
    out
}

/// Canonical form of a noncommutative polynomial in the letters `z` and `z*`.
pub fn pol_normal_form<F: Scalar>(ctx: &QContext<F>, alphabet: &Alphabet, expr: &NCPoly<F>) -> Result<PolElement<F>> {
    let zc = alphabet.code("z");
    let zsc = alphabet.code("z*");
    if alphabet.len() != 2 || zc.is_none() || zsc.is_none() {
        return Err(QError::param("alphabet", "expected the letters z and z*"));
    }
    let zc = zc.unwrap_or_default();
    let mut out = PolElement::zero();
    for (w, c) in expr.terms() {
        let mut acc = PolElement::one();
        for &l in &w.0 {
            let g = if l == zc { PolElement::z() } else { PolElement::zs() };
            acc = pol_multiply(ctx, &acc, &g);
        }
        out = out.add(&acc.scale(c));
    }
    Ok(out)
}

/// Expands a polynomial element into words in `z`, `z*` using `y = 1 - z z*`.
pub fn to_ncpoly<F: Scalar>(alphabet: &Alphabet, f: &PolElement<F>) -> Result<NCPoly<F>> {
    if !f.is_polynomial() {
        return Err(QError::NotFinite("finite functions have no word expansion".into()));
    }
    let z = alphabet.word(&["z"])?;
    let zs = alphabet.word(&["z*"])?;
    let y = NCPoly::constant(F::one()) - NCPoly::word(z.concat(&zs));
    let mut out = NCPoly::zero();
    for (m, r) in &f.coeffs {
        let mut psi = NCPoly::zero();
        let mut ypow = NCPoly::constant(F::one());
        for c in r.poly.coeffs() {
            psi = psi + ypow.scale(c);
            ypow = ypow * y.clone();
        }
        let (a, b) = split(*m);
        let left = Word(z.0.repeat(a));
        let right = Word(zs.0.repeat(b));
        out = out + psi.sandwich(&left, &right);
    }
    Ok(out)
}

/// Generators of `U_q sl_2` acting on the disc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    K,
    Kinv,
    E,
    F,
}

pub fn act_generator<F: Scalar>(ctx: &QContext<F>, gen: Generator, f: &PolElement<F>) -> Result<PolElement<F>> {
    let q = ctx.q();
    let s = ctx.s()?.clone();
    let one = F::one();
    let inv1mq2 = (one.clone() - ctx.qp(2)).inv();
    let mut out = PolElement::zero();
    for (m, psi) in &f.coeffs {
        let m = *m;
        match gen {
            Generator::K => out.push(m, psi.scale(&ctx.qp(2 * m))),
            Generator::Kinv => out.push(m, psi.scale(&ctx.qp(-2 * m))),
            Generator::E => {
                if m >= 0 {
                    let d = psi.sub(&psi.shift(q, 1).scale(&ctx.qp(2 * m)));
                    out.push(m + 1, d.scale(&(-s.clone() * inv1mq2.clone())));
                } else {
                    let k = -m;
                    let cm = (0..k).fold(F::zero(), |acc, i| acc + ctx.qp(-2 * i));
                    let l = psi.sub(&psi.shift(q, 1)).lmul(q, 1).scale(&(-s.clone() * inv1mq2.clone()));
                    out.push(m + 1, l.add(&psi.scale(&(s.pow_i(-3) * cm))));
                }
            }
            Generator::F => {
                if m >= 1 {
                    let dm = s.clone() * (ctx.qp(-2 * m) - one.clone()) / (ctx.qp(-2) - one.clone());
                    let l = psi.sub(&psi.shift(q, 1)).lmul(q, 1).scale(&(s.pow_i(5) * inv1mq2.clone()));
                    out.push(m - 1, psi.scale(&dm).sub(&l));
                } else {
                    let k = -m;
                    let d = psi.sub(&psi.shift(q, 1).scale(&ctx.qp(2 * k)));
                    out.push(m - 1, d.scale(&(-s.pow_i(5) * inv1mq2.clone())));
                }
            }
        }
    }
    Ok(out)
}

/// Casimir element `EF + (q^{-1}K + qK^{-1} - (q^{-1}+q)) / (q^{-1}-q)^2`.
pub fn casimir_apply<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>) -> Result<PolElement<F>> {
    let ef = act_generator(ctx, Generator::E, &act_generator(ctx, Generator::F, f)?)?;
    let qi = ctx.qp(-1);
    let q = ctx.q().clone();
    let mut rest = act_generator(ctx, Generator::K, f)?.scale(&qi);
    rest = rest.add(&act_generator(ctx, Generator::Kinv, f)?.scale(&q));
    rest = rest.sub(&f.scale(&(qi.clone() + q.clone())));
    let den = (qi - q).pow_i(2);
    Ok(ef.add(&rest.scale(&den.inv())))
}

/// Invariant Laplacian `-q^{-1} C`.
pub fn laplacian_apply<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>) -> Result<PolElement<F>> {
    Ok(casimir_apply(ctx, f)?.scale(&-ctx.qp(-1)))
}

/// `(1 - q^2) sum_j psi_0(q^{2j}) q^{-2j}` for finite elements.
pub fn invariant_integral<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>) -> Result<F> {
    if !f.is_finite() {
        return Err(QError::NotFinite("integral needs finitely supported coefficients".into()));
    }
    let psi = f.coeff(0);
    let sum = psi
        .grid
        .iter()
        .fold(F::zero(), |acc, (j, v)| acc + v.clone() * ctx.qp(-2 * *j as i64));
    Ok((F::one() - ctx.qp(2)) * sum)
}

/// Fock matrix in the basis `v_n = z^n e_0`, where every entry lies in the coefficient field.
///
/// Column `n` is the image of `v_n`; `||v_n||^2 = (q^2;q^2)_n`.
pub fn fock_matrix_gauge<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>, n: usize) -> Mat<F> {
    let q = ctx.q();
    let mut m = Mat::zeros(n, n);
    for (w, psi) in &f.coeffs {
        let (a, b) = split(*w);
        for col in 0..n {
            if a > 0 || b == 0 {
                if col + a < n {
                    m.add_to(col + a, col, psi.at(q, col));
                }
            } else if col >= b {
                let pre = (0..b).fold(F::one(), |acc, i| acc * (F::one() - q.pow_i(2 * (col - i) as i64)));
                m.add_to(col - b, col, pre * psi.at(q, col - b));
            }
        }
    }
    m
}

/// Fock matrix in the orthonormal basis `e_n`.
pub fn fock_matrix<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>, n: usize) -> Result<Mat<f64>> {
    if n == 0 {
        return Err(QError::param("N", "must be at least 1"));
    }
    let q = ctx.q_f64().ok_or_else(|| QError::param("q", "no numerical value"))?;
    let mut norms = vec![1.0f64; n];
    for k in 1..n {
        norms[k] = norms[k - 1] * (1.0 - q.powi(2 * k as i32));
    }
    let g = fock_matrix_gauge(ctx, f, n);
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let v = match g.get(i, j).approx() {
                Some(z) if z.im == 0.0 => z.re,
                _ => return Err(QError::param("f", "coefficients have no real value")),
            };
            m.set(i, j, v * (norms[i] / norms[j]).sqrt());
        }
    }
    Ok(m)
}

/// Samples `psi(x_j)` on the grid `x_j = q^{-2j}`, `j = 0..N-1`.
///
/// Entries from `exact_len` on are affected by truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialFunction<F> {
    pub values: Vec<F>,
    pub exact_len: usize,
}

impl<F: Scalar> RadialFunction<F> {
    pub fn new(values: Vec<F>) -> Self {
        let exact_len = values.len();
        RadialFunction { values, exact_len }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> F) -> Self {
        Self::new((0..n).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Weight-0 grid part of a finite element, sampled on `n` points.
    pub fn from_element(f: &PolElement<F>, n: usize) -> Result<Self> {
        if f.coeffs.keys().any(|m| *m != 0) || !f.is_finite() {
            return Err(QError::param("f", "expected a finite radial element"));
        }
        let psi = f.coeff(0);
        Ok(Self::from_fn(n, |j| psi.grid.get(&j).cloned().unwrap_or_else(F::zero)))
    }

    pub fn to_element(&self) -> PolElement<F> {
        PolElement::radial(Radial::from_grid(self.values.iter().cloned().enumerate()))
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal<F> {
    pub diag: Vec<F>,
    pub off: Vec<F>,
}

impl SymTridiagonal<f64> {
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.diag.len();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.diag[i];
        }
        for (i, b) in self.off.iter().enumerate() {
            m[(i, i + 1)] = *b;
            m[(i + 1, i)] = *b;
        }
        m
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.to_dense()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Diagonal coefficient `a_j`.
pub fn radial_a<F: Scalar>(ctx: &QContext<F>, j: usize) -> F {
    let one = F::one();
    let d = (one.clone() - ctx.qp(2)).pow_i(2);
    (one.clone() + ctx.qp(2) - F::from_i64(2) * ctx.qp(2 * (j as i64 + 1))) / d
}

/// Off-diagonal coefficient `b_j` of the symmetrised operator.
pub fn radial_b<F: Scalar>(ctx: &QContext<F>, j: usize) -> F {
    let one = F::one();
    let d = (one.clone() - ctx.qp(2)).pow_i(2);
    -ctx.q().clone() * (one - ctx.qp(2 * (j as i64 + 1))) / d
}

/// Radial Laplacian in the orthonormal basis, truncated to `N x N`.
pub fn laplacian_radial_matrix<F: Scalar>(ctx: &QContext<F>, n: usize) -> Result<SymTridiagonal<F>> {
    if n < 2 {
        return Err(QError::param("N", "must be at least 2"));
    }
    Ok(SymTridiagonal {
        diag: (0..n).map(|j| radial_a(ctx, j)).collect(),
        off: (0..n - 1).map(|j| radial_b(ctx, j)).collect(),
    })
}

/// Coefficients `(up, mid, down)` of `(L psi)_i = up psi_{i+1} + mid psi_i + down psi_{i-1}`.
fn radial_stencil<F: Scalar>(ctx: &QContext<F>, i: usize) -> (F, F, F) {
    let one = F::one();
    let d = (one.clone() - ctx.qp(2)).pow_i(2);
    let up = -(one.clone() - ctx.qp(2 * (i as i64 + 1))) / d.clone();
    let down = -ctx.qp(2) * (one - ctx.qp(2 * i as i64)) / d;
    (up, radial_a(ctx, i), down)
}

/// Applies the radial Laplacian to grid samples. The last entry treats `psi_N` as zero.
pub fn laplacian_radial_apply<F: Scalar>(ctx: &QContext<F>, psi: &RadialFunction<F>) -> Result<RadialFunction<F>> {
    let n = psi.len();
    if n < 2 {
        return Err(QError::param("N", "must be at least 2"));
    }
    let v = &psi.values;
    let values = (0..n)
        .map(|i| {
            let (up, mid, down) = radial_stencil(ctx, i);
            let mut acc = mid * v[i].clone();
            if i + 1 < n {
                acc = acc + up * v[i + 1].clone();
            }
            if i > 0 {
                acc = acc + down * v[i - 1].clone();
            }
            acc
        })
        .collect();
    Ok(RadialFunction {
        values,
        exact_len: psi.exact_len.min(n - 1),
    })
}

/// Spectral parameter: a complex `l`, or `rho` on the principal series `l = -1/2 + i rho`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralParam {
    L(Complex64),
    Rho(f64),
}

/// Right end `pi / (2 ln q^{-1})` of the spectral interval.
pub fn spectral_bound(q: f64) -> f64 {
    PI / (2.0 * (1.0 / q).ln())
}

impl SpectralParam {
    pub fn l(&self) -> Complex64 {
        match self {
            SpectralParam::L(l) => *l,
            SpectralParam::Rho(r) => Complex64::new(-0.5, *r),
        }
    }

    pub fn validate(&self, q: f64) -> Result<()> {
        let r = spectral_bound(q);
        match self {
            SpectralParam::L(l) if l.im.abs() > r + 1e-12 => {
                Err(QError::param("l", format!("|Im l| exceeds {r}")))
            }
            SpectralParam::Rho(rho) if !(*rho >= 0.0 && *rho <= r + 1e-12) => {
                Err(QError::param("rho", format!("outside [0, {r}]")))
            }
            _ => Ok(()),
        }
    }
}

fn qpow(q: f64, w: Complex64) -> Complex64 {
    (w * q.ln()).exp()
}

fn cpoch(a: Complex64, b: f64, n: usize) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, i| acc * (1.0 - a * b.powi(i as i32)))
}

/// `lambda(l) = (1 - q^{-2l})(1 - q^{2l+2}) / (1 - q^2)^2`.
pub fn lambda_of(q: f64, l: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    (one - qpow(q, -2.0 * l)) * (one - qpow(q, 2.0 * l + 2.0)) / (1.0 - q * q).powi(2)
}

/// `lambda` on the principal series, `(1 - 2q cos(2 rho ln q^{-1}) + q^2) / (1 - q^2)^2`.
pub fn lambda_rho(q: f64, rho: f64) -> f64 {
    (1.0 - 2.0 * q * (2.0 * (1.0 / q).ln() * rho).cos() + q * q) / (1.0 - q * q).powi(2)
}

/// Terminating sum for `Phi_l(q^{-2j})` with `u = q^{-2l}`, in any field.
pub fn phi_l_exact<F: Scalar>(ctx: &QContext<F>, u: &F, j: usize) -> F {
    let b = ctx.qp(2);
    let x = ctx.qp(-2 * j as i64);
    let v = b.clone() / u.clone();
    let mut sum = F::zero();
    for k in 0..=j {
        let num = poch(&x, &b, k) * poch(u, &b, k) * poch(&v, &b, k);
        let den = poch(&b, &b, k).pow_i(2);
        sum = sum + num / den * b.pow_i(k as i64);
    }
    sum
}

/// Values `Phi_l(x_j)` for `j < n` from the three-term recurrence.
fn phi_recurrence(ctx: &QContext<f64>, l: Complex64, n: usize) -> Vec<Complex64> {
    let lam = lambda_of(*ctx.q(), l);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let v = match i {
            0 => Complex64::new(1.0, 0.0),
            _ => {
                let (up, mid, down) = radial_stencil(ctx, i - 1);
                let prev2 = if i >= 2 { out[i - 2] } else { Complex64::new(0.0, 0.0) };
                -((mid - lam) * out[i - 1] + down * prev2) / up
            }
        };
        out.push(v);
    }
    out
}

/// `Phi_l(q^{-2n})` through the equivalent `2phi1` whose terms stay bounded.
fn phi_transformed(q: f64, l: Complex64, n: usize) -> Option<Complex64> {
    let b = q * q;
    let a = Complex64::new(q.powi(-2 * n as i32), 0.0);
    let c = qpow(q, -2.0 * l - 2.0 * n as f64);
    let u = qpow(q, -2.0 * l);
    let z = qpow(q, 2.0 * l + 2.0);
    let pre_den = cpoch(a, b, n);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    for k in 0..=n {
        sum += term;
        let bk = b.powi(k as i32);
        let den = (1.0 - b * bk) * (1.0 - c * bk);
        if den.norm() < 1e-13 {
            return None;
        }
        term = term * (1.0 - a * bk) * (1.0 - u * bk) / den * z;
    }
    let pre = cpoch(c, b, n) / pre_den;
    let v = pre * sum;
    v.is_finite().then_some(v)
}

fn phi_float(ctx: &QContext<f64>, l: Complex64, j: usize) -> Complex64 {
    // transformed terms grow for Re l < -1/2
    if l.re < -0.5 {
        return phi_recurrence(ctx, l, j + 1)[j];
    }
    match phi_transformed(*ctx.q(), l, j) {
        Some(v) => v,
        None => phi_recurrence(ctx, l, j + 1)[j],
    }
}

/// Spherical function `Phi_l(x_j)`.
pub fn phi_l(ctx: &QContext<f64>, l: SpectralParam, j: usize) -> Result<Complex64> {
    l.validate(*ctx.q())?;
    Ok(phi_float(ctx, l.l(), j))
}

/// `Phi_l` on the first `n` grid points.
pub fn phi_l_values(ctx: &QContext<f64>, l: SpectralParam, n: usize) -> Result<RadialFunction<Complex64>> {
    l.validate(*ctx.q())?;
    Ok(RadialFunction::from_fn(n, |j| phi_float(ctx, l.l(), j)))
}

/// `c(l) = Gamma_{q^2}(2l+1) / Gamma_{q^2}(l+1)^2`.
pub fn c_function(ctx: &QContext<f64>, l: Complex64) -> Result<Complex64> {
    let q = *ctx.q();
    let c2 = QContext::float(q * q)?.with_eps(ctx.eps);
    let num = q_gamma_c(&c2, 2.0 * l + 1.0)?;
    match q_gamma_c(&c2, l + 1.0) {
        Ok(g) => Ok(num / (g * g)),
        Err(QError::Pole(_)) => Ok(Complex64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// `1 / c(l)` from the infinite products, finite at the poles of `c`.
pub fn c_function_reciprocal(ctx: &QContext<f64>, l: Complex64) -> Result<Complex64> {
    let q = *ctx.q();
    let cctx = ctx.complexified();
    let b = Complex64::new(q * q, 0.0);
    let num = poch_inf(&cctx, &b, &b)? * poch_inf(&cctx, &qpow(q, 2.0 * (2.0 * l + 1.0)), &b)?;
    let den = poch_inf(&cctx, &qpow(q, 2.0 * (l + 1.0)), &b)?;
    if den.norm() < 1e-300 {
        return Err(QError::Pole(format!("1/c at l = {l}")));
    }
    Ok(num / (den * den))
}

/// Plancherel density `ln(q^{-1}) / (pi (q^{-2} - 1) |c(-1/2 + i rho)|^2)`.
pub fn sigma_density(ctx: &QContext<f64>, rho: f64) -> Result<f64> {
    let q = *ctx.q();
    SpectralParam::Rho(rho).validate(q)?;
    let ic = c_function_reciprocal(ctx, Complex64::new(-0.5, rho))?;
    Ok((1.0 / q).ln() / (PI * (q.powi(-2) - 1.0)) * ic.norm_sqr())
}

/// `U psi (rho) = (q^{-2} - 1) sum_j psi(x_j) Phi_{-1/2+i rho}(x_j) x_j`.
pub fn fourier_forward(ctx: &QContext<f64>, psi: &RadialFunction<f64>, rho: f64) -> Result<f64> {
    let q = *ctx.q();
    SpectralParam::Rho(rho).validate(q)?;
    let l = Complex64::new(-0.5, rho);
    let mut acc = 0.0;
    for (j, v) in psi.values.iter().enumerate() {
        if *v != 0.0 {
            acc += v * phi_float(ctx, l, j).re * q.powi(-2 * j as i32);
        }
    }
    Ok((q.powi(-2) - 1.0) * acc)
}

/// Inverse transform of `fhat` sampled on the first `n` grid points.
pub fn fourier_inverse(
    ctx: &QContext<f64>,
    fhat: impl Fn(f64) -> f64,
    n: usize,
    tol: f64,
) -> Result<RadialFunction<f64>> {
    let r = spectral_bound(*ctx.q());
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let err = std::cell::RefCell::new(None);
        let integrand = |rho: f64| {
            let rho = rho.clamp(0.0, r);
            match sigma_density(ctx, rho) {
                Ok(d) => fhat(rho) * phi_float(ctx, Complex64::new(-0.5, rho), j).re * d,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        };
        let v = adaptive_simpson(integrand, 0.0, r, tol, 40)?;
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        values.push(v);
    }
    Ok(RadialFunction::new(values))
}

/// Coefficient `(q^{-2} - 1) / (q^{-2m} - 1)` of the Green series.
pub fn green_coeff<F: Scalar>(ctx: &QContext<F>, m: usize) -> F {
    let one = F::one();
    (ctx.qp(-2) - one.clone()) / (ctx.qp(-2 * m as i64) - one)
}

/// Partial Green function `(1 - q^2) sum_{m<=M} c_m x_j^{-m}` on `n` grid points.
pub fn green_f0<F: Scalar>(ctx: &QContext<F>, m: usize, n: usize) -> Result<RadialFunction<F>> {
    if m == 0 {
        return Err(QError::param("M", "must be at least 1"));
    }
    let coeffs: Vec<F> = (1..=m).map(|k| green_coeff(ctx, k)).collect();
    let pre = F::one() - ctx.qp(2);
    Ok(RadialFunction::from_fn(n, |j| {
        let xinv = ctx.qp(2 * j as i64);
        let mut acc = F::zero();
        let mut p = F::one();
        for c in &coeffs {
            p = p * xinv.clone();
            acc = acc + c.clone() * p.clone();
        }
        pre.clone() * acc
    }))
}

/// Eigenvalue factor `a(l, n)` of the intertwining operator on `z^n`.
pub fn intertwining_a(q: f64, l: Complex64, n: i64) -> Result<Complex64> {
    let p = |w: Complex64| qpow(q, w);
    let one = Complex64::new(1.0, 0.0);
    let nf = n as f64;
    let mut acc = p(-(2.0 * l + one) * nf);
    for j in 0..n.unsigned_abs() {
        let jf = j as f64;
        let (num_e, den_e) = if n > 0 {
            (nf - l - jf - 1.0, nf + l - jf)
        } else {
            (nf + l + jf + 1.0, nf - l + jf)
        };
        let den = p(-den_e) - p(den_e);
        if den.norm() < 1e-14 {
            return Err(QError::Pole(format!("a({l}, {n})")));
        }
        acc *= (p(-num_e) - p(num_e)) / den;
    }
    Ok(acc)
}

/// `a(l, n)` for half-integral `l = two_l / 2`, exact when `s = q^{1/2}` is available.
pub fn intertwining_a_exact<F: Scalar>(ctx: &QContext<F>, two_l: i64, n: i64) -> Result<F> {
    // every exponent is a multiple of 1/2, written as a power of s
    let sp = |k: i64| ctx.sp(k);
    let mut acc = sp(-2 * (two_l + 1) * n)?;
    for j in 0..n.abs() {
        let (num_e, den_e) = if n > 0 {
            (2 * (n - j - 1) - two_l, 2 * (n - j) + two_l)
        } else {
            (2 * (n + j + 1) + two_l, 2 * (n + j) - two_l)
        };
        let den = sp(-den_e)? - sp(den_e)?;
        if den.is_zero() {
            return Err(QError::Pole(format!("a({two_l}/2, {n})")));
        }
        acc = acc * (sp(-num_e)? - sp(num_e)?) / den;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use num_rational::BigRational;

    #[test]
    fn shift_and_l_on_grid() {
        let q = rat(1, 2);
        let d = Radial::<BigRational>::delta(2);
        assert_eq!(d.shift(&q, 1), Radial::delta(1));
        assert!(d.shift(&q, 3).is_zero());
        let l = d.lmul(&q, 1);
        assert_eq!(l, Radial::from_grid([(3, BigRational::from_integer(1.into()) - q.pow_i(6))]));
    }
}
