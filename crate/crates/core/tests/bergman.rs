use std::collections::BTreeMap;

use num_rational::BigRational;
use proptest::prelude::*;
use qharm::bergman::*;
use qharm::matrix::Mat;
use qharm::qdisc::{phi_l_exact, PolElement, Radial, RadialFunction};
use qharm::{rat, QContext, QuadExt, RatFunc, Scalar, UPoly};

fn exact() -> QContext<BigRational> {
    QContext::exact(rat(1, 2)).unwrap()
}

fn half() -> QContext<QuadExt> {
    QContext::adjoin(rat(1, 2)).unwrap()
}

#[test]
fn norms_and_kernel() {
    let ctx = exact();
    let sp = WeightedSpace::integral(&ctx, 2).unwrap();
    assert_eq!(monomial_norm(&ctx, &sp, 0), rat(1, 1));
    assert_eq!(monomial_norm(&ctx, &sp, 1), rat(4, 5));
    for n in 0..10 {
        assert_eq!(monomial_norm(&ctx, &sp, n) * bergman_kernel_coeff(&ctx, &sp, n), rat(1, 1));
    }
    assert!(WeightedSpace::integral(&ctx, 1).is_err());
    assert!(WeightedSpace::from_t(rat(3, 2)).is_err());
    assert!(WeightedSpace::new(&QContext::float(0.5).unwrap(), 0.9).is_err());
}

#[test]
fn toeplitz_examples() {
    let ctx = exact();
    let sp = WeightedSpace::integral(&ctx, 2).unwrap();
    let zs = toeplitz_matrix(&ctx, &sp, &Symbol::ZStar, 6).unwrap();
    assert_eq!(zs.get(0, 1), &rat(4, 5));
    let y = toeplitz_matrix(&ctx, &sp, &Symbol::YPow(1), 6).unwrap();
    assert_eq!(y.get(0, 0), &rat(4, 5));
    let p = UPoly::from_coeffs(vec![rat(2, 1), rat(-3, 1), rat(1, 1)]);
    let poly = toeplitz_matrix(&ctx, &sp, &Symbol::Poly(p), 6).unwrap();
    for k in 0..6 {
        let y2 = toeplitz_matrix(&ctx, &sp, &Symbol::YPow(2), 6).unwrap();
        assert_eq!(poly.get(k, k).clone(), rat(2, 1) - rat(3, 1) * y.get(k, k).clone() + y2.get(k, k).clone());
    }
}

#[test]
fn commutation_identity() {
    let ctx = exact();
    let sp = WeightedSpace::integral(&ctx, 2).unwrap();
    let n = 30;
    let z = toeplitz_matrix(&ctx, &sp, &Symbol::Z, n).unwrap();
    let zs = toeplitz_matrix(&ctx, &sp, &Symbol::ZStar, n).unwrap();
    let i = Mat::identity(n);
    let q2 = ctx.qp(2);
    let one = rat(1, 1);
    let t = sp.t.clone();
    let c = t.clone() * (one.clone() - q2.clone()) / (one.clone() - t);
    let lhs = zs
        .mul(&z)
        .sub(&z.mul(&zs).scale(&q2))
        .sub(&i.scale(&(one - q2)))
        .sub(&i.sub(&z.mul(&zs)).mul(&i.sub(&zs.mul(&z))).scale(&c));
    assert_eq!(lhs.leading(n - 1), Mat::zeros(n - 1, n - 1));
}

#[test]
fn radial_symbols() {
    let ctx = QContext::float(0.5).unwrap();
    let sp = WeightedSpace::new(&ctx, 2.5).unwrap();
    let diag = toeplitz_matrix(&ctx, &sp, &Symbol::YPow(2), 8).unwrap();
    let got = toeplitz_radial(&ctx, &sp, |y| y * y, 8).unwrap();
    for k in 0..8 {
        assert!((got[k].value - diag.get(k, k)).abs() < 1e-12);
        assert!(got[k].bound < 1e-12);
    }
    let one = toeplitz_radial(&ctx, &sp, |_| 1.0, 4).unwrap();
    assert!(one.iter().all(|v| (v.value - 1.0).abs() < 1e-14));
}

#[test]
fn f0_identities() {
    let ctx = exact();
    for l in 2..5 {
        let sp = WeightedSpace::integral(&ctx, l).unwrap();
        for j in 0..=8 {
            let expect = if j == 0 { rat(1, 1) } else { rat(0, 1) };
            assert_eq!(f0_hat_sum(&ctx, &sp, j), expect, "lambda {l} j {j}");
        }
        let y = y_lambda_partial(&ctx, &sp, 10, 12);
        assert_eq!(y.exact_len, 11);
        for j in 0..=10 {
            assert_eq!(y.values[j], ctx.qp(2 * l * j as i64));
        }
    }
    let fl = QContext::float(0.3).unwrap();
    let sp = WeightedSpace::new(&fl, 2.7).unwrap();
    let y = y_lambda_partial(&fl, &sp, 12, 12);
    for j in 0..12 {
        assert!((y.values[j] - 0.3f64.powf(2.0 * 2.7 * j as f64)).abs() < 1e-12);
    }
    let f0 = f0_expansion(&half(), 8);
    let fock = qharm::qdisc::fock_matrix_gauge(&half(), &f0, 9);
    for n in 0..9 {
        let expect = if n == 0 { QuadExt::one() } else { QuadExt::zero() };
        assert_eq!(fock.get(n, n), &expect);
    }
}

#[test]
fn p_polynomials() {
    let ctx = half();
    let q2 = ctx.qp(2);
    let one = QuadExt::one();
    assert_eq!(p_poly(&ctx, 0), UPoly::constant(one.clone()));
    assert_eq!(p_poly(&ctx, 1), UPoly::from_coeffs(vec![one.clone(), q2.clone() - one.clone()]));
    // p_j(lambda(l)) = Phi_l(q^{-2j})
    let u = QuadExt::from_rational(&rat(7, 3));
    let lam = (one.clone() - u.clone()) * (one.clone() - q2.clone() / u.clone()) / (one.clone() - q2.clone()).pow_i(2);
    for j in 0..6 {
        assert_eq!(p_poly(&ctx, j).eval(&lam), phi_l_exact(&ctx, &u, j), "j {j}");
    }
    for j in 0..=6 {
        let p = p_poly(&ctx, j);
        let got = apply_laplacian_poly(&ctx, &p, &PolElement::f(0)).unwrap();
        assert_eq!(got, PolElement::f(j).scale(&ctx.qp(2 * j as i64)), "j {j}");
        let mut delta = vec![QuadExt::zero(); 10];
        delta[0] = one.clone();
        let r = apply_radial_poly(&ctx, &p, &RadialFunction::new(delta)).unwrap();
        for (i, v) in r.values.iter().enumerate().take(r.exact_len) {
            let expect = if i == j { ctx.qp(2 * j as i64) } else { QuadExt::zero() };
            assert_eq!(v, &expect);
        }
    }
}

#[test]
fn spectral_sup_of_p() {
    let q = 0.5f64;
    let sup = p_spectral_sup(q, 20);
    assert_eq!(sup[0], 1.0);
    // p_1 = 1 - (1 - q^2) x peaks at the top of the spectrum
    assert!((sup[1] - 2.0 * q / (1.0 - q)).abs() < 1e-12);
    let ex = exact();
    for j in 0..=12 {
        let p = p_poly(&ex, j);
        for i in 0..=40 {
            // x runs over the spectrum [4/9, 4]
            let x = rat(4, 9) + rat(32, 9) * rat(i, 40);
            let v = p.eval(&x).approx().unwrap().re.abs();
            assert!(v <= sup[j] * (1.0 + 1e-9) + 1e-12, "j {j} x {x}");
        }
    }
}

#[test]
fn berezin_transform() {
    let ctx = QContext::float(0.5).unwrap();
    for &l in &[2.0, 3.0, 4.5] {
        let sp = WeightedSpace::new(&ctx, l).unwrap();
        let f0 = RadialFunction::new(vec![1.0]);
        let b = berezin_radial(&ctx, &sp, &f0, 20).unwrap();
        assert!(b.bound < 1e-12);
        for j in 0..20 {
            let expect = (1.0 - sp.t) * 0.5f64.powf(2.0 * l * j as f64);
            assert!((b.value.values[j] - expect).abs() < 1e-12, "lambda {l} j {j}");
        }
    }
    let sp = WeightedSpace::new(&ctx, 3.0).unwrap();
    let f0 = RadialFunction::new(vec![1.0]);
    let direct = berezin_radial(&ctx, &sp, &f0, 20).unwrap().value;
    let prod = berezin_product_formula(&ctx, 3.0, &f0, 40, 80).unwrap();
    for j in 0..20 {
        assert!((direct.values[j] - prod.values[j]).abs() < 1e-8, "j {j}");
    }
}

fn rf(v: i64) -> RatFunc {
    RatFunc::from_i64(v)
}

fn pm(ctx: &QContext<RatFunc>, a: &PolElement<RatFunc>, b: &PolElement<RatFunc>) -> PolElement<RatFunc> {
    qharm::qdisc::pol_multiply(ctx, a, b)
}

/// `Q(f *_t g) = Q(f) Q(g)` through `t^K` on the leading block.
fn assert_multiplicative<F: Scalar>(ctx: &QContext<F>, f: &PolElement<F>, g: &PolElement<F>, s: &StarSeries<F>) {
    let (n, order) = (10, s.order());
    let qf = toeplitz_series(ctx, f, n, order).unwrap();
    let qg = toeplitz_series(ctx, g, n, order).unwrap();
    let mut lhs = vec![Mat::zeros(n, n); order + 1];
    for (i, c) in s.coeffs.iter().enumerate() {
        for (j, m) in toeplitz_series(ctx, c, n, order).unwrap().into_iter().enumerate() {
            if i + j <= order {
                lhs[i + j] = lhs[i + j].add(&m);
            }
        }
    }
    for k in 0..=order {
        let rhs = (0..=k).fold(Mat::zeros(n, n), |acc, i| acc.add(&qf[i].mul(&qg[k - i])));
        assert_eq!(lhs[k].leading(n - 4), rhs.leading(n - 4), "t^{k}");
    }
}

#[test]
fn star_of_generators() {
    let ctx = QContext::formal();
    let q2 = ctx.qp(2);
    let z = PolElement::z();
    let zs = PolElement::zs();
    let s = star_product(&ctx, &zs, &z, 4).unwrap();
    let zzs = pm(&ctx, &z, &zs);
    let szz = pm(&ctx, &zs, &z);
    let lead = zzs.scale(&q2).add(&PolElement::one().scale(&(rf(1) - q2.clone())));
    assert_eq!(s.coeffs[0], lead);
    let tail = pm(&ctx, &PolElement::one().sub(&szz), &PolElement::one().sub(&zzs));
    assert_eq!(s.coeffs[1], tail.scale(&(rf(1) - q2.clone())));
    // from t^2 on the coefficients leave the span of y^2
    assert!(s.coeffs[2].coeff(0).poly.degree() == Some(3));
    assert_multiplicative(&ctx, &zs, &z, &s);
    // z *_t z* is the ordinary product
    let s = star_product(&ctx, &z, &zs, 3).unwrap();
    assert_eq!(s.coeffs[0], zzs);
    assert!(s.coeffs[1..].iter().all(|c| c.is_zero()));
}

#[test]
fn star_matches_operator_products() {
    let ctx = half();
    let e = |a, b| zzs_element(&ctx, a, b);
    let pairs = [(e(0, 2), e(1, 0)), (e(1, 1), e(2, 1)), (e(0, 1).add(&e(2, 2)), e(1, 1).sub(&e(1, 0)))];
    for (f, g) in &pairs {
        let s = star_product(&ctx, f, g, 4).unwrap();
        assert_multiplicative(&ctx, f, g, &s);
    }
}

#[test]
fn star_unit() {
    let ctx = QContext::formal();
    let one = PolElement::one();
    let f = zzs_element(&ctx, 2, 1).add(&zzs_element(&ctx, 0, 3).scale(&rf(5)));
    for (l, r) in [(&one, &f), (&f, &one)] {
        let s = star_product(&ctx, l, r, 3).unwrap();
        assert_eq!(s.coeffs[0], f);
        assert!(s.coeffs[1..].iter().all(|c| c.is_zero()));
    }
}

#[test]
fn star_associativity() {
    let ctx = QContext::formal();
    let e = |a, b| zzs_element(&ctx, a, b);
    let order = 3;
    for a in [e(0, 1), e(0, 2)] {
        for b in [e(1, 0), e(1, 1)] {
            for c in [e(1, 0), e(2, 0)] {
                let ab = star_product(&ctx, &a, &b, order).unwrap();
                let left = star_series_product(&ctx, &ab, &StarSeries::constant(c.clone(), order), order).unwrap();
                let bc = star_product(&ctx, &b, &c, order).unwrap();
                let right = star_series_product(&ctx, &StarSeries::constant(a.clone(), order), &bc, order).unwrap();
                assert_eq!(left, right);
            }
        }
    }
}

#[test]
fn decomposition_round_trip() {
    let ctx = half();
    let f = PolElement::term(2, Radial::from_poly(UPoly::from_coeffs(vec![QuadExt::from_i64(3), QuadExt::from_i64(-1), QuadExt::one()])))
        .add(&PolElement::term(-1, Radial::from_poly(UPoly::from_coeffs(vec![QuadExt::zero(), QuadExt::from_i64(2)]))));
    let d = zzs_decompose(&ctx, &f).unwrap();
    let back = d.iter().fold(PolElement::zero(), |acc, ((a, b), c)| acc.add(&zzs_element(&ctx, *a, *b).scale(c)));
    assert_eq!(back, f);
    assert!(zzs_decompose(&ctx, &PolElement::f(0)).is_err());
}

fn table(entries: &[(usize, usize, i64)]) -> BTreeMap<(usize, usize), BigRational> {
    entries.iter().map(|(i, j, v)| ((*i, *j), rat(*v, 1))).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn covariant_symbols_match_products(
        entries in prop::collection::vec((0usize..4, 0usize..4, -5i64..6), 1..6),
        l in 2i64..4,
    ) {
        let ctx = exact();
        let sp = WeightedSpace::integral(&ctx, l).unwrap();
        let n = 12;
        let z = toeplitz_matrix(&ctx, &sp, &Symbol::Z, n).unwrap();
        let zs = toeplitz_matrix(&ctx, &sp, &Symbol::ZStar, n).unwrap();
        let t = table(&entries);
        let mut expect = Mat::zeros(n, n);
        for ((i, j), a) in &t {
            let mut m = Mat::identity(n);
            for _ in 0..*i { m = z.mul(&m); }
            let mut r = Mat::identity(n);
            for _ in 0..*j { r = zs.mul(&r); }
            expect = expect.add(&m.mul(&r).scale(a));
        }
        let got = covariant_symbol_matrix(&ctx, &sp, &t, n);
        prop_assert_eq!(got, expect);
    }
}
