//! `verify`: seeded runs of the library's invariant checks.

use clap::Args;
use qharm::bergman::{self, Symbol, WeightedSpace};
use qharm::matrix::Mat;
use qharm::ncgroebner::{self, DEFAULT_ITER_CAP, PRESETS};
use qharm::qdisc::{self, Generator, PolElement, Radial};
use qharm::qseries::{self, HyperSpec};
use qharm::{rat, QContext, QuadExt, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::Config;
use crate::table::{Cell, Table};
use crate::CliResult;

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// random cases per randomised property
    #[arg(long, default_value_t = 10)]
    pub cases: usize,
}

type Check = (&'static str, &'static str, fn(&mut ChaCha8Rng, usize) -> bool);

const CHECKS: &[Check] = &[
    ("q-gauss", "2phi1(a, b; c; q, c/(ab)) = (c/a, c/b; q)_inf / (c, c/(ab); q)_inf", q_gauss),
    ("groebner-diamond", "completed presets resolve every ambiguity", groebner_diamond),
    ("hopf-relations", "KE = q^2 EK, KF = q^-2 FK, [E, F] = (K - K^-1)/(q - q^-1) on finite elements", hopf_relations),
    ("integral-invariance", "integral of Ef and Ff vanishes, integral of Kf equals integral of f", integral_invariance),
    ("fock-homomorphism", "Fock matrix of a product equals the product of Fock matrices", fock_homomorphism),
    ("phi-symmetry", "Phi_l = Phi_(-1-l) exactly", phi_symmetry),
    ("toeplitz-commutation", "commutation relation of the Toeplitz operators zhat, zhat* at lambda = 2", toeplitz_commutation),
    ("berezin-oracle", "p_j(L) f_0 = q^(2j) f_j", berezin_oracle),
    ("star-unit", "1 *_t f = f *_t 1 = f", star_unit),
];

pub fn run(cfg: &Config, args: &VerifyArgs) -> CliResult<Table> {
    let mut t = Table::new("verify");
    t.param("seed", cfg.global.seed);
    t.param("cases", args.cases);
    t.param("q", "1/2");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.global.seed);
    for (name, desc, check) in CHECKS {
        t.tag(name, desc);
        let ok = check(&mut rng, args.cases);
        t.row(name, vec![("property", Cell::Text(name.to_string())), ("passed", Cell::Bool(ok))]);
    }
    Ok(t)
}

/// Number of failed rows in a `verify` table.
pub fn failures(t: &Table) -> usize {
    if t.command != "verify" {
        return 0;
    }
    t.rows
        .iter()
        .filter(|r| r.iter().any(|(k, v)| k == "passed" && *v == Cell::Bool(false)))
        .count()
}

fn half() -> QContext<QuadExt> {
    QContext::adjoin(rat(1, 2)).expect("q = 1/2 is admissible")
}

fn qi(n: i64) -> QuadExt {
    QuadExt::from_i64(n)
}

fn random_finite(rng: &mut ChaCha8Rng) -> PolElement<QuadExt> {
    let terms = rng.gen_range(1..4);
    (0..terms).fold(PolElement::zero(), |acc, _| {
        let w = rng.gen_range(-3..=3);
        let grid: Vec<(usize, QuadExt)> = (0..rng.gen_range(1..4)).map(|_| (rng.gen_range(0..6), qi(rng.gen_range(-3..=3)))).collect();
        acc.add(&PolElement::term(w, Radial::from_grid(grid)))
    })
}

fn q_gauss(rng: &mut ChaCha8Rng, cases: usize) -> bool {
    let ctx = QContext::float(0.5).expect("q = 1/2 is admissible");
    (0..cases).all(|_| {
        let a: f64 = rng.gen_range(0.1..0.9);
        let b: f64 = rng.gen_range(0.1..0.9);
        let c: f64 = rng.gen_range(0.01..0.9) * a * b;
        let spec = HyperSpec::new(vec![a, b], vec![c], 0.5, c / (a * b));
        let lhs = match qseries::basic_hyper(&ctx, &spec, None) {
            Ok(v) => v.value,
            Err(_) => return false,
        };
        let p = |x: f64| qseries::poch_inf(&ctx, &x, &0.5).unwrap_or(f64::NAN);
        let rhs = p(c / a) * p(c / b) / (p(c) * p(c / (a * b)));
        (lhs - rhs).abs() < 1e-12
    })
}

fn groebner_diamond(_: &mut ChaCha8Rng, _: usize) -> bool {
    PRESETS.iter().all(|name| {
        ncgroebner::preset_algebra(name)
            .and_then(|(a, rels)| ncgroebner::complete_or_err(&a, &rels, None, DEFAULT_ITER_CAP))
            .is_ok_and(|sys| sys.diamond_check())
    })
}

fn hopf_relations(rng: &mut ChaCha8Rng, cases: usize) -> bool {
    let ctx = half();
    let q2 = ctx.qp(2);
    let kk = (ctx.q().clone() - ctx.qp(-1)).inv();
    let act = |g, f: &PolElement<QuadExt>| qdisc::act_generator(&ctx, g, f);
    (0..cases).all(|_| {
        let f = random_finite(rng);
        let run = || -> qharm::Result<bool> {
            let (ef, ff) = (act(Generator::E, &f)?, act(Generator::F, &f)?);
            let ke = act(Generator::K, &ef)? == act(Generator::E, &act(Generator::K, &f)?)?.scale(&q2);
            let kf = act(Generator::K, &ff)? == act(Generator::F, &act(Generator::K, &f)?)?.scale(&q2.inv());
            let lhs = act(Generator::E, &ff)?.sub(&act(Generator::F, &ef)?);
            let rhs = act(Generator::K, &f)?.sub(&act(Generator::Kinv, &f)?).scale(&kk);
            Ok(ke && kf && lhs == rhs)
        };
        run().unwrap_or(false)
    })
}

fn integral_invariance(rng: &mut ChaCha8Rng, cases: usize) -> bool {
    let ctx = half();
    (0..cases).all(|_| {
        let f = random_finite(rng);
        let run = || -> qharm::Result<bool> {
            let int = |g: &PolElement<QuadExt>| qdisc::invariant_integral(&ctx, g);
            Ok(int(&qdisc::act_generator(&ctx, Generator::E, &f)?)?.is_zero()
                && int(&qdisc::act_generator(&ctx, Generator::F, &f)?)?.is_zero()
                && int(&qdisc::act_generator(&ctx, Generator::K, &f)?)? == int(&f)?)
        };
        run().unwrap_or(false)
    })
}

fn fock_homomorphism(rng: &mut ChaCha8Rng, cases: usize) -> bool {
    let ctx = half();
    let n = 20;
    (0..cases).all(|_| {
        let (f, g) = (random_finite(rng), random_finite(rng));
        let lhs = qdisc::fock_matrix_gauge(&ctx, &qdisc::pol_multiply(&ctx, &f, &g), n);
        lhs == qdisc::fock_matrix_gauge(&ctx, &f, n).mul(&qdisc::fock_matrix_gauge(&ctx, &g, n))
    })
}

fn phi_symmetry(rng: &mut ChaCha8Rng, cases: usize) -> bool {
    let ctx = half();
    (0..cases).all(|_| {
        let u = QuadExt::from_rational(&rat(rng.gen_range(1..20), rng.gen_range(1..20)));
        let v = ctx.qp(2) / u.clone();
        (0..8).all(|j| qdisc::phi_l_exact(&ctx, &u, j) == qdisc::phi_l_exact(&ctx, &v, j))
    })
}

fn toeplitz_commutation(_: &mut ChaCha8Rng, _: usize) -> bool {
    let ctx = QContext::exact(rat(1, 2)).expect("q = 1/2 is admissible");
    let n = 30;
    let run = || -> qharm::Result<bool> {
        let sp = WeightedSpace::integral(&ctx, 2)?;
        let z = bergman::toeplitz_matrix(&ctx, &sp, &Symbol::Z, n)?;
        let zs = bergman::toeplitz_matrix(&ctx, &sp, &Symbol::ZStar, n)?;
        let i = Mat::identity(n);
        let (q2, one) = (ctx.qp(2), rat(1, 1));
        let c = sp.t.clone() * (one.clone() - q2.clone()) / (one.clone() - sp.t.clone());
        let lhs = zs
            .mul(&z)
            .sub(&z.mul(&zs).scale(&q2))
            .sub(&i.scale(&(one - q2)))
            .sub(&i.sub(&z.mul(&zs)).mul(&i.sub(&zs.mul(&z))).scale(&c));
        Ok(lhs.leading(n - 1) == Mat::zeros(n - 1, n - 1))
    };
    run().unwrap_or(false)
}

fn berezin_oracle(_: &mut ChaCha8Rng, _: usize) -> bool {
    let ctx = half();
    (0..=6).all(|j| {
        bergman::apply_laplacian_poly(&ctx, &bergman::p_poly(&ctx, j), &PolElement::f(0))
            .is_ok_and(|v| v == PolElement::f(j).scale(&ctx.qp(2 * j as i64)))
    })
}

fn star_unit(_: &mut ChaCha8Rng, _: usize) -> bool {
    let ctx = half();
    let f = bergman::zzs_element(&ctx, 2, 1).add(&bergman::zzs_element(&ctx, 0, 2).scale(&qi(3)));
    let one = PolElement::one();
    [(&one, &f), (&f, &one)].iter().all(|(a, b)| {
        bergman::star_product(&ctx, a, b, 2).is_ok_and(|s| s.coeffs[0] == f && s.coeffs[1..].iter().all(|c| c.is_zero()))
    })
}
