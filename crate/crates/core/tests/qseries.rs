use num_rational::BigRational;
use proptest::prelude::*;
use qharm::qseries::*;
use qharm::{rat, QContext, QError, Scalar, UPoly};

fn fctx() -> QContext<f64> {
    QContext::float(0.5).unwrap()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn pochhammer_examples() {
    let ctx = QContext::exact(rat(1, 2)).unwrap();
    let q = ctx.q().clone();
    let q2 = &q * &q;
    let r = q_pochhammer(&ctx, &q2, &q2, PochIndex::Finite(2)).unwrap();
    assert_eq!(r.value, rat(45, 64));
    assert_eq!(poch(&rat(1, 1), &q, 3), rat(0, 1));
    assert_eq!(poch(&rat(5, 7), &q, 0), rat(1, 1));
}

#[test]
fn real_index_reduces_to_finite() {
    let ctx = fctx();
    let a = 0.3;
    let r = q_pochhammer(&ctx, &a, &0.5, PochIndex::Real(4.0)).unwrap();
    assert!(close(r.value, poch(&a, &0.5, 4), 1e-13));
    assert!(r.bound < 1e-11);
}

#[test]
fn infinite_product_reports_bound() {
    let ctx = fctx();
    let r = q_pochhammer(&ctx, &0.5, &0.5, PochIndex::Infinite).unwrap();
    assert!(r.bound < ctx.eps);
    // (1/2;1/2)_inf, independent value
    assert!(close(r.value, 0.288_788_095_086_602_4, 1e-12));
}

#[test]
fn q_numbers_and_binomials() {
    let ctx = QContext::exact(rat(1, 2)).unwrap();
    assert_eq!(q_number(&ctx, 1.0).unwrap(), rat(1, 1));
    assert_eq!(q_number(&ctx, 2.0).unwrap(), rat(5, 2));
    let b = gauss_binomial(2, 1).unwrap();
    assert_eq!(b, UPoly::from_coeffs(vec![rat(1, 1), rat(1, 1)]));
    assert!(matches!(gauss_binomial(2, 3), Err(QError::InvalidParameter { .. })));
    let q = rat(1, 2);
    for n in 0..9 {
        for k in 0..=n {
            let g = gauss_binomial(n, k).unwrap();
            assert!(g.coeffs().iter().all(|c| c >= &rat(0, 1) && c.is_integer()));
            let direct = poch(&q, &q, n) / (poch(&q, &q, k) * poch(&q, &q, n - k));
            assert_eq!(g.eval(&q), direct);
        }
    }
}

#[test]
fn q_gamma_examples() {
    let ctx = fctx();
    assert!(close(q_gamma(&ctx, 1.0).unwrap(), 1.0, 1e-13));
    assert!(close(q_gamma(&ctx, 3.0).unwrap(), 1.5, 1e-13));
    assert!(close(q_beta(&ctx, 1.0, 1.0).unwrap(), 1.0, 1e-13));
    assert!(matches!(q_gamma(&ctx, -2.0), Err(QError::Pole(_))));
}

#[test]
fn q_gamma_exact_matches_product_of_q_integers() {
    let ctx = QContext::exact(rat(1, 2)).unwrap();
    let q = ctx.q().clone();
    for n in 0..=8usize {
        let mut prod = rat(1, 1);
        for k in 1..=n {
            let mut s = rat(0, 1);
            for i in 0..k {
                s = s + q.pow_i(i as i64);
            }
            prod = prod * s;
        }
        assert_eq!(q_gamma_int(&ctx, n + 1).unwrap(), prod);
    }
}

#[test]
fn jackson_examples() {
    let ctx = fctx();
    let one = jackson_integral(&ctx, |_| 1.0, &1.0, &0.5, Orientation::ZeroToA).unwrap();
    assert!(close(one.value, 1.0, 1e-12));
    let t = jackson_integral(&ctx, |x| *x, &1.0, &0.5, Orientation::ZeroToA).unwrap();
    assert!(close(t.value, 2.0 / 3.0, 1e-12));
    let ectx = QContext::exact(rat(1, 2)).unwrap();
    let f0 = |x: &BigRational| if *x == rat(1, 1) { rat(1, 1) } else { rat(0, 1) };
    let v = jackson_integral(&ectx, f0, &rat(1, 1), &rat(1, 4), Orientation::OneToInfinity { terms: 5 }).unwrap();
    assert_eq!(v.value, rat(3, 1));
    let p = UPoly::from_coeffs(vec![rat(0, 1), rat(1, 1)]);
    assert_eq!(jackson_poly(&p, &rat(1, 1), &rat(1, 2)), rat(2, 3));
}

#[test]
fn hyper_examples() {
    let ctx = fctx();
    let q = 0.5f64;
    let s = HyperSpec::new(vec![1.0, 0.3], vec![0.7], q, 0.4);
    assert_eq!(basic_hyper(&ctx, &s, None).unwrap().value, 1.0);

    let s = HyperSpec::new(vec![q, q], vec![q * q * q], q, q);
    let lhs = basic_hyper(&ctx, &s, None).unwrap().value;
    let rhs = poch_inf(&ctx, &(q * q), &q).unwrap().powi(2)
        / (poch_inf(&ctx, &(q * q * q), &q).unwrap() * poch_inf(&ctx, &q, &q).unwrap());
    assert!(close(lhs, rhs, 1e-12));

    let ectx = QContext::exact(rat(1, 2)).unwrap();
    let q = rat(1, 2);
    let q2 = &q * &q;
    let s = HyperSpec::new(
        vec![q2.inv(), rat(1, 1), q2.clone()],
        vec![q2.clone(), rat(0, 1)],
        q2.clone(),
        q2.clone(),
    );
    assert_eq!(basic_hyper(&ectx, &s, None).unwrap().value, rat(1, 1));
}

#[test]
fn hyper_domain_errors() {
    let ctx = fctx();
    let s = HyperSpec::new(vec![0.3, 0.2], vec![0.7], 0.5, 1.2);
    assert!(matches!(basic_hyper(&ctx, &s, None), Err(QError::Divergent(_))));
    let ectx = QContext::exact(rat(1, 2)).unwrap();
    let s = HyperSpec::new(vec![rat(1, 3)], vec![], rat(1, 2), rat(1, 3));
    assert!(matches!(basic_hyper(&ectx, &s, None), Err(QError::ExactUnsupported(_))));
    // a lower parameter reached before termination
    let s = HyperSpec::new(vec![rat(8, 1)], vec![rat(2, 1)], rat(1, 2), rat(1, 3));
    assert!(matches!(basic_hyper(&ectx, &s, None), Err(QError::InvalidParameter { .. })));
}

#[test]
fn q_exp_examples() {
    let ctx = fctx();
    assert_eq!(q_exp(&ctx, &0.0, ExpKind::SmallE).unwrap(), 1.0);
    assert_eq!(q_exp(&ctx, &0.0, ExpKind::BigE).unwrap(), 1.0);
    let e = q_exp(&ctx, &0.3, ExpKind::SmallE).unwrap();
    let big = q_exp(&ctx, &-0.3, ExpKind::BigE).unwrap();
    assert!((e * big - 1.0).abs() < 1e-12);
    assert!(close(e, 1.0 / poch_inf(&ctx, &0.3, &0.5).unwrap(), 1e-12));
    assert!(q_exp(&ctx, &1.5, ExpKind::SmallE).is_err());
}

#[test]
fn q_diff_examples() {
    let ctx = QContext::exact(rat(1, 2)).unwrap();
    let x = rat(3, 5);
    let q = rat(1, 2);
    assert_eq!(q_diff(&ctx, |t| t.clone(), &x, DiffVariant::Minus).unwrap(), rat(1, 1));
    assert_eq!(
        q_diff(&ctx, |t| t * t, &x, DiffVariant::Minus).unwrap(),
        (rat(1, 1) + &q) * &x
    );
    assert_eq!(
        q_diff(&ctx, |t| t * t, &x, DiffVariant::Symmetric).unwrap(),
        (q.inv() + &q) * &x
    );
    assert!(q_diff(&ctx, |t| t.clone(), &rat(0, 1), DiffVariant::Plus).is_err());
}

fn exact_poly(c: &[i64]) -> UPoly<BigRational> {
    UPoly::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn q_binomial_theorem(a in -0.9f64..0.9, z in -0.9f64..0.9) {
        let ctx = fctx();
        let s = HyperSpec::new(vec![a], vec![], 0.5, z);
        let lhs = basic_hyper(&ctx, &s, None).unwrap().value * poch_inf(&ctx, &z, &0.5).unwrap();
        let rhs = poch_inf(&ctx, &(a * z), &0.5).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-11);
    }

    #[test]
    fn q_gauss(a in 1.2f64..3.0, b in 0.1f64..0.9, c in 0.05f64..0.9) {
        let ctx = fctx();
        let z = c / (a * b);
        prop_assume!(z.abs() < 0.95);
        let s = HyperSpec::new(vec![a, b], vec![c], 0.5, z);
        let lhs = basic_hyper(&ctx, &s, None).unwrap().value;
        let p = |x: f64| poch_inf(&ctx, &x, &0.5).unwrap();
        let rhs = p(c / a) * p(c / b) / (p(c) * p(z));
        prop_assert!((lhs - rhs).abs() < 1e-11 * rhs.abs().max(1.0));
    }

    #[test]
    fn heine_transform(a in -0.8f64..0.8, b in -0.8f64..0.8, c in -0.8f64..0.8, z in -0.8f64..0.8) {
        let ctx = fctx();
        prop_assume!(b.abs() > 1e-3);
        let p = |x: f64| poch_inf(&ctx, &x, &0.5).unwrap();
        let lhs = basic_hyper(&ctx, &HyperSpec::new(vec![a, b], vec![c], 0.5, z), None).unwrap().value;
        let inner = basic_hyper(&ctx, &HyperSpec::new(vec![c / b, z], vec![a * z], 0.5, b), None).unwrap().value;
        let rhs = p(b) * p(a * z) / (p(c) * p(z)) * inner;
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.abs().max(1.0));
    }

    #[test]
    fn pfaff_saalschutz(n in 0usize..=6, an in 1i64..9, ad in 2i64..9, bn in 1i64..9, cn in 1i64..9) {
        let ctx = QContext::exact(rat(1, 2)).unwrap();
        let q = rat(1, 2);
        let a = rat(an, ad);
        let b = rat(bn, 3);
        let c = rat(cn, 11);
        let qn = q.pow_i(-(n as i64));
        let e = &a * &b / &c * q.pow_i(1 - n as i64);
        // skip draws where a lower parameter meets the terminating index
        prop_assume!((0..n).all(|k| (&c * q.pow_i(k as i64)) != rat(1, 1) && (&e * q.pow_i(k as i64)) != rat(1, 1)));
        let spec = HyperSpec::new(vec![a.clone(), b.clone(), qn], vec![c.clone(), e], q.clone(), q.clone());
        let lhs = basic_hyper(&ctx, &spec, None).unwrap().value;
        let den = poch(&c, &q, n) * poch(&(&c / (&a * &b)), &q, n);
        prop_assume!(!Scalar::is_zero(&den));
        let rhs = poch(&(&c / &a), &q, n) * poch(&(&c / &b), &q, n) / den;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn integration_by_parts(u in proptest::collection::vec(-5i64..5, 1..5), v in proptest::collection::vec(-5i64..5, 1..5), an in 1i64..5) {
        let ctx = QContext::exact(rat(1, 3)).unwrap();
        let q = ctx.q().clone();
        let a = rat(an, 2);
        let up = exact_poly(&u);
        let vp = exact_poly(&v);
        // D^- and D^+ of polynomials, coefficientwise
        let dm = |p: &UPoly<BigRational>| {
            let c: Vec<BigRational> = (1..p.coeffs().len())
                .map(|n| p.coeffs()[n].clone() * (rat(1, 1) - q.pow_i(n as i64)) / (rat(1, 1) - q.clone()))
                .collect();
            UPoly::from_coeffs(c)
        };
        let dp = |p: &UPoly<BigRational>| {
            let c: Vec<BigRational> = (1..p.coeffs().len())
                .map(|n| p.coeffs()[n].clone() * q.pow_i(-(n as i64)) * (rat(1, 1) - q.pow_i(n as i64)) / (rat(1, 1) - q.clone()))
                .collect();
            UPoly::from_coeffs(c)
        };
        // cross-check the coefficient formulas against the difference quotients
        let x0 = rat(2, 7);
        prop_assert_eq!(dm(&up).eval(&x0), q_diff(&ctx, |t| up.eval(t), &x0, DiffVariant::Minus).unwrap());
        prop_assert_eq!(dp(&vp).eval(&x0), q_diff(&ctx, |t| vp.eval(t), &x0, DiffVariant::Plus).unwrap());
        let lhs = jackson_poly(&(dm(&up) * vp.clone()), &a, &q);
        let rhs = up.eval(&a) * vp.eval(&(a.clone() / q.clone())) - up.eval(&rat(0, 1)) * vp.eval(&rat(0, 1))
            - jackson_poly(&(up.clone() * dp(&vp)), &a, &q);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn q_gamma_functional_equation(x in 0.1f64..6.0) {
        let ctx = fctx();
        let r = q_gamma(&ctx, x + 1.0).unwrap() / q_gamma(&ctx, x).unwrap();
        let want = (1.0 - 0.5f64.powf(x)) / 0.5;
        prop_assert!((r - want).abs() < 1e-12);
    }
}
