use std::cmp::Ordering;

use num_rational::BigRational;
use proptest::prelude::*;
use qharm::ncgroebner::*;
use qharm::{rat, QError, QuadExt, RatFunc, Scalar};

fn formal(name: &str) -> RewriteSystem<RatFunc> {
    let (a, rels) = preset_algebra(name).unwrap();
    complete_or_err(&a, &rels, None, DEFAULT_ITER_CAP).unwrap()
}

fn at_half(name: &str) -> RewriteSystem<BigRational> {
    let (a, rels) = preset_algebra(name).unwrap();
    let q = rat(1, 2);
    let rels: Vec<NCPoly<BigRational>> = rels.iter().map(|p| p.try_map(|c| specialize_rational(c, &q)).unwrap()).collect();
    complete_or_err(&a, &rels, None, DEFAULT_ITER_CAP).unwrap()
}

fn words(a: &Alphabet, ws: &[&[&str]]) -> Vec<Word> {
    let mut v: Vec<Word> = ws.iter().map(|w| a.word(w).unwrap()).collect();
    v.sort();
    v
}

#[test]
fn deglex_examples() {
    let a = Alphabet::new(["x", "y"]).unwrap();
    let w = |s: &[&str]| a.word(s).unwrap();
    assert_eq!(deglex_compare(&a, &Word::empty(), &w(&["x"])).unwrap(), Ordering::Less);
    assert_eq!(deglex_compare(&a, &w(&["x", "y"]), &w(&["y", "x"])).unwrap(), Ordering::Greater);
    assert_eq!(deglex_compare(&a, &w(&["x", "x"]), &w(&["y"])).unwrap(), Ordering::Greater);
    assert!(deglex_compare(&a, &Word(vec![5]), &w(&["x"])).is_err());
}

#[test]
fn anick_example_basis() {
    let sys = formal("anick_example");
    assert!(sys.complete);
    assert_eq!(sys.to_string(), "x*x -> -y*y\nx*y*y -> y*y*x\n");
    assert!(sys.diamond_check());

    let a = sys.alphabet.clone();
    let p = parse_poly(&a, "x^2 + y^2", 1).unwrap();
    assert!(sys.reduce(&p).is_zero());
    let c = NCPoly::constant(RatFunc::from_i64(7));
    assert_eq!(sys.reduce(&c), c);

    let mut partial = sys.clone();
    partial.rules.truncate(1);
    assert!(!partial.diamond_check());
    let empty: RewriteSystem<RatFunc> = RewriteSystem::new(a.clone(), vec![]);
    assert!(empty.diamond_check());

    for d in 0..=7 {
        let mut expect: Vec<Vec<&str>> = Vec::new();
        for k in 0..=d / 2 {
            let mut w = vec!["y"; d - 2 * k];
            for _ in 0..k {
                w.extend(["x", "y"]);
            }
            expect.push(w);
            if d >= 2 * k + 1 {
                let mut w = vec!["y"; d - 2 * k - 1];
                for _ in 0..k {
                    w.extend(["x", "y"]);
                }
                w.push("x");
                expect.push(w);
            }
        }
        let refs: Vec<&[&str]> = expect.iter().map(|v| v.as_slice()).collect();
        assert_eq!(sys.normal_words(d).unwrap(), words(&a, &refs), "degree {d}");
    }
}

#[test]
fn quantum_plane_and_disc() {
    let sys = formal("quantum_plane");
    assert_eq!(sys.rules.len(), 1);
    assert_eq!(sys.to_string(), "t2*t1 -> q*t1*t2\n");

    let sys = formal("pol_disc");
    assert_eq!(sys.rules.len(), 1);
    let a = sys.alphabet.clone();
    let lhs = parse_poly(&a, "z*z", 1).unwrap();
    let expect = parse_poly(&a, "q^2 z z* + (1 - q^2)", 1).unwrap();
    assert_eq!(sys.reduce(&lhs), expect);
    assert_eq!(sys.normal_words(2).unwrap(), words(&a, &[&["z", "z"], &["z", "z*"], &["z*", "z*"]]));
    // z^j z*^k only
    for d in 0..6 {
        assert_eq!(sys.normal_words(d).unwrap().len(), d + 1);
    }
}

#[test]
fn mat2q_dimensions() {
    let sys = formal("mat2q");
    assert_eq!(sys.hilbert_dims(4).unwrap(), vec![1, 4, 10, 20, 35]);
    assert!(sys.diamond_check());
}

#[test]
fn sl2q_normal_word_counts_match_monomial_basis() {
    let sys = formal("sl2q");
    assert!(sys.diamond_check());
    for d in 0..=5 {
        // t11^a t12^b t21^c with a + b + c = d, and t12^b t21^c t22^e with e >= 1
        let basis: usize = (0..=d).map(|a| (d - a + 1) * if a > 0 { 2 } else { 1 }).sum();
        let got = sys.normal_words(d).unwrap();
        assert_eq!(got.len(), basis, "degree {d}");
        assert_eq!(got.len(), (d + 1) * (d + 1));
    }
}

#[test]
fn incomplete_systems_refuse_enumeration() {
    let a = Alphabet::new(["x", "y"]).unwrap();
    let rel = parse_poly(&a, "x y x - y x y", 1).unwrap();
    let sys = complete(&a, &[rel.clone()], Some(5), DEFAULT_ITER_CAP).unwrap();
    assert!(!sys.complete);
    assert!(sys.stop_reason.is_some());
    assert_eq!(sys.normal_words(2), Err(QError::Incomplete));
    assert!(matches!(complete_or_err(&a, &[rel], Some(5), DEFAULT_ITER_CAP), Err(QError::CapExceeded(_))));
}

#[test]
fn formal_completion_specializes() {
    let q = rat(1, 2);
    for name in PRESETS {
        let f = formal(name);
        let direct = {
            let (a, rels) = preset_algebra(name).unwrap();
            let rels: Vec<NCPoly<QuadExt>> = rels.iter().map(|p| p.try_map(|c| specialize(c, &q)).unwrap()).collect();
            complete_or_err(&a, &rels, None, DEFAULT_ITER_CAP).unwrap()
        };
        let sub = f.try_map(|c| specialize(c, &q)).unwrap();
        assert_eq!(sub.rules, direct.rules, "{name}");
        assert_eq!(at_half(name).rules.len(), f.rules.len());
    }
}

#[test]
fn relation_files_round_trip() {
    for name in PRESETS {
        let (a, rels) = preset_algebra(name).unwrap();
        let text = format_relations(&a, &rels);
        let (b, back) = parse_relations(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(rels, back, "{name}:\n{text}");
        let sys = formal(name);
        let polys: Vec<NCPoly<RatFunc>> = sys.rules.iter().map(|r| r.poly()).collect();
        let text = format_relations(&a, &polys);
        assert_eq!(parse_relations(&text).unwrap().1, polys, "{name}:\n{text}");
    }
}

#[test]
fn parse_errors_have_line_numbers() {
    let err = parse_relations("alphabet: x > y\nx*y - y*x\nx + w\n").unwrap_err();
    assert!(matches!(err, QError::Parse { line: 3, .. }), "{err:?}");
    assert!(parse_relations("x*y\n").is_err());
    assert!(parse_relations("alphabet: x > q\n").is_err());
    let a = Alphabet::new(["x", "y"]).unwrap();
    assert!(parse_poly(&a, "x / y", 1).is_err());
    assert!(parse_poly(&a, "x^(1/2)", 1).is_err());
    let p = parse_poly(&a, "q^(1/2) x - q^(-1) y / 2", 1).unwrap();
    assert_eq!(p.coeff(&a.word(&["x"]).unwrap()), RatFunc::s());
    assert_eq!(p.coeff(&a.word(&["y"]).unwrap()), -RatFunc::s_pow(-2) / RatFunc::from_i64(2));
}

fn random_poly(a: &Alphabet, spec: &[(i64, Vec<u16>)]) -> NCPoly<BigRational> {
    let n = a.len() as u16;
    spec.iter().fold(NCPoly::zero(), |acc, (c, w)| {
        acc + NCPoly::term(rat(*c, 1), Word(w.iter().map(|x| x % n).collect()))
    })
}

fn arb_poly() -> impl Strategy<Value = Vec<(i64, Vec<u16>)>> {
    prop::collection::vec((-5i64..6, prop::collection::vec(0u16..4, 0..4)), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn normal_form_is_idempotent(spec in arb_poly(), which in 0usize..3) {
        let sys = at_half(["sl2q", "pol_disc", "anick_example"][which]);
        let p = random_poly(&sys.alphabet, &spec);
        let nf = sys.reduce(&p);
        prop_assert_eq!(sys.reduce(&nf), nf.clone());
        for (w, _) in nf.terms() {
            prop_assert!(sys.rules.iter().all(|r| !w.contains(&r.lead)));
        }
    }

    #[test]
    fn ideal_members_reduce_to_zero(
        parts in prop::collection::vec((arb_poly(), arb_poly(), 0usize..7), 1..3),
        which in 0usize..3,
    ) {
        let name = ["sl2q", "mat2q", "pol_disc"][which];
        let sys = at_half(name);
        let (_, rels) = preset_algebra(name).unwrap();
        let q = rat(1, 2);
        let mut member = NCPoly::zero();
        for (l, r, k) in &parts {
            let rel = rels[k % rels.len()].try_map(|c| specialize_rational(c, &q)).unwrap();
            member = member + random_poly(&sys.alphabet, l) * rel * random_poly(&sys.alphabet, r);
        }
        prop_assert!(sys.reduce(&member).is_zero());
    }

    #[test]
    fn direct_sum_decomposition(spec in arb_poly(), which in 0usize..2) {
        let sys = at_half(["sl2q", "anick_example"][which]);
        let p = random_poly(&sys.alphabet, &spec);
        let (nf, steps) = sys.reduce_traced(&p);
        prop_assert_eq!(nf + sys.ideal_member(&steps), p);
    }
}
