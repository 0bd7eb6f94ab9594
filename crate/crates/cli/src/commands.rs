//! Subcommand implementations. Each returns a [`Table`].

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use num_complex::Complex64;
use qharm::bergman::{self, Symbol, WeightedSpace};
use qharm::context::parse_rational;
use qharm::ncgroebner::{self, Alphabet, NCPoly, DEFAULT_ITER_CAP};
use qharm::qdisc::{self, PolElement, SpectralParam};
use qharm::qorth::{self, EvalMode, FamilySpec};
use qharm::qseries::{self, ExpKind, HyperSpec, PochIndex};
use qharm::{QContext, QError, QuadExt, RatFunc, Scalar, UPoly};

use crate::table::{Cell, Table};
use crate::{verify, Cli, CliError, CliResult, Command, Global};

const DEFAULT_Q: &str = "1/2";

/// Scalars the CLI can parse and print.
pub trait Num: Scalar {
    fn parse_arg(name: &str, text: &str) -> CliResult<Self>;
    fn cell(&self) -> Cell;
}

impl Num for QuadExt {
    fn parse_arg(name: &str, text: &str) -> CliResult<Self> {
        parse_rational(text.trim())
            .map(QuadExt::rational)
            .map_err(|_| CliError::invalid(name, format!("`{text}` is not an exact rational")))
    }

    fn cell(&self) -> Cell {
        match (&self.r, self.a.is_integer()) {
            (None, true) => match self.a.numer().to_string().parse::<i64>() {
                Ok(v) => Cell::Int(v),
                Err(_) => Cell::Exact(self.to_string()),
            },
            _ => Cell::Exact(self.to_string()),
        }
    }
}

impl Num for f64 {
    fn parse_arg(name: &str, text: &str) -> CliResult<Self> {
        let t = text.trim();
        if let Ok(v) = t.parse::<f64>() {
            return Ok(v);
        }
        parse_rational(t)
            .ok()
            .and_then(|r| r.approx())
            .map(|z| z.re)
            .ok_or_else(|| CliError::invalid(name, format!("`{text}` is not a number")))
    }

    fn cell(&self) -> Cell {
        Cell::Float(*self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// Resolved global configuration.
pub struct Config<'a> {
    pub global: &'a Global,
    pub q_text: String,
}

impl<'a> Config<'a> {
    fn new(global: &'a Global) -> Self {
        Config {
            global,
            q_text: global.q.clone().unwrap_or_else(|| DEFAULT_Q.to_string()),
        }
    }

    /// Exact unless `--float`; float-only operations reject an explicit `--exact`.
    pub fn mode(&self, exact_ok: bool) -> CliResult<Mode> {
        match (self.global.exact, self.global.float, exact_ok) {
            (_, true, _) => Ok(Mode::Float),
            (true, _, false) => Err(CliError::invalid("mode", "this operation is only available with --float")),
            (_, _, true) => Ok(Mode::Exact),
            _ => Ok(Mode::Float),
        }
    }

    fn q_rational(&self) -> CliResult<num_rational::BigRational> {
        parse_rational(self.q_text.trim()).map_err(|e| CliError::invalid("q", e.to_string()))
    }

    fn tune<F: Scalar>(&self, ctx: QContext<F>) -> QContext<F> {
        let ctx = ctx.with_eps(self.global.tol);
        match self.global.trunc {
            Some(n) => ctx.with_max_terms(n),
            None => ctx,
        }
    }

    pub fn exact_ctx(&self) -> CliResult<QContext<QuadExt>> {
        let q = self.q_rational()?;
        Ok(self.tune(QContext::adjoin(q)?))
    }

    pub fn float_ctx(&self) -> CliResult<QContext<f64>> {
        let q = f64::parse_arg("q", &self.q_text)?;
        Ok(self.tune(QContext::float(q)?))
    }

    fn start(&self, command: &str, mode: Mode) -> Table {
        let mut t = Table::new(command);
        t.param("q", &self.q_text);
        t.param("mode", if mode == Mode::Exact { "exact" } else { "float" });
        t.param("tol", format!("{:e}", self.global.tol));
        if let Some(n) = self.global.trunc {
            t.param("trunc", n);
        }
        t
    }
}

pub fn run(cli: &Cli) -> CliResult<Table> {
    let cfg = Config::new(&cli.global);
    match &cli.command {
        Command::Qseries { op } => qseries_cmd(&cfg, op),
        Command::Orth { op } => orth_cmd(&cfg, op),
        Command::Groebner(args) => groebner_cmd(&cfg, args),
        Command::Disc { op } => disc_cmd(&cfg, op),
        Command::Bergman { op } => bergman_cmd(&cfg, op),
        Command::Star(args) => star_cmd(&cfg, args),
        Command::Verify(args) => verify::run(&cfg, args),
    }
}

fn list<F: Num>(name: &str, text: &str) -> CliResult<Vec<F>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| F::parse_arg(name, s)).collect()
}

fn complex_cols(z: Complex64) -> Vec<(&'static str, Cell)> {
    vec![("re", Cell::Float(z.re)), ("im", Cell::Float(z.im))]
}

// ---------------------------------------------------------------- qseries

#[derive(Debug, Subcommand)]
pub enum QseriesOp {
    /// q-Gamma function
    Gamma {
        #[arg(long)]
        x: String,
    },
    /// (a; q)_n, with `--n inf` for the infinite product
    Poch {
        #[arg(long)]
        a: String,
        #[arg(long)]
        n: String,
    },
    /// Gaussian binomial coefficient as a polynomial in q
    Binom {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// symmetric q-number [x]_q
    Qnum {
        #[arg(long)]
        x: f64,
    },
    /// basic hypergeometric series r_phi_s(upper; lower; q, z)
    Hyper {
        #[arg(long, default_value = "")]
        upper: String,
        #[arg(long, default_value = "")]
        lower: String,
        #[arg(long)]
        z: String,
    },
    /// q-exponentials e_q and E_q
    Exp {
        #[arg(long)]
        z: String,
        #[arg(long, value_enum, default_value_t = ExpArg::Small)]
        kind: ExpArg,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ExpArg {
    Small,
    Big,
}

fn qseries_cmd(cfg: &Config, op: &QseriesOp) -> CliResult<Table> {
    let exact_ok = match op {
        QseriesOp::Gamma { x } => QuadExt::parse_arg("x", x).is_ok_and(|v| v.a.is_integer() && v.a > num_rational::BigRational::from_integer(0.into())),
        QseriesOp::Qnum { x } => (2.0 * x).fract() == 0.0,
        _ => true,
    };
    let mode = cfg.mode(exact_ok)?;
    if mode == Mode::Exact {
        let mut t = cfg.start("qseries", mode);
        match qseries_generic(&cfg.exact_ctx()?, op, &mut t) {
            // nonterminating series fall back to floating point unless --exact was given
            Err(CliError::Lib(QError::ExactUnsupported(_))) if !cfg.global.exact => {}
            r => return r.map(|_| t),
        }
    }
    let mut t = cfg.start("qseries", Mode::Float);
    qseries_generic(&cfg.float_ctx()?, op, &mut t)?;
    Ok(t)
}

fn qseries_generic<F: Num>(ctx: &QContext<F>, op: &QseriesOp, t: &mut Table) -> CliResult<()> {
    let q = ctx.q().clone();
    match op {
        QseriesOp::Gamma { x } => {
            t.param("x", x);
            t.tag("q-gamma", "Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^(1-x)");
            let xv = F::parse_arg("x", x)?;
            let value = if F::EXACT {
                let n = xv.approx().map(|z| z.re as usize).unwrap_or(0);
                qseries::q_gamma_int(ctx, n)?
            } else {
                let fctx = QContext::float(ctx.q_f64().unwrap_or(0.5))?;
                let re = xv.approx().map(|z| z.re).unwrap_or(f64::NAN);
                F::from_f64(qseries::q_gamma(&fctx, re)?).ok_or_else(|| CliError::invalid("x", "not representable"))?
            };
            t.row("q-gamma", vec![("x", xv.cell()), ("value", value.cell())]);
        }
        QseriesOp::Poch { a, n } => {
            t.param("a", a);
            t.param("n", n);
            t.tag("q-pochhammer", "(a;q)_n = prod_{k<n} (1 - a q^k)");
            let av = F::parse_arg("a", a)?;
            let idx = if n == "inf" {
                PochIndex::Infinite
            } else {
                PochIndex::Finite(n.parse().map_err(|_| CliError::invalid("n", "expected a non-negative integer or `inf`"))?)
            };
            let r = qseries::q_pochhammer(ctx, &av, &q, idx)?;
            t.row(
                "q-pochhammer",
                vec![("a", av.cell()), ("n", Cell::Text(n.clone())), ("value", r.value.cell()), ("bound", Cell::Float(r.bound)), ("terms", Cell::Int(r.terms as i64))],
            );
        }
        QseriesOp::Binom { n, k } => {
            t.param("n", n);
            t.param("k", k);
            t.tag("gauss-binomial", "[n k]_q = (q;q)_n / ((q;q)_k (q;q)_{n-k}) as a polynomial in q");
            let p = qseries::gauss_binomial(*n, *k)?;
            for (i, c) in p.coeffs().iter().enumerate() {
                t.row("gauss-binomial", vec![("power", Cell::Int(i as i64)), ("coeff", QuadExt::rational(c.clone()).cell())]);
            }
            let at_q = p.coeffs().iter().enumerate().fold(F::zero(), |acc, (i, c)| acc + F::from_rational(c) * q.pow_i(i as i64));
            t.row("gauss-binomial", vec![("power", Cell::Text("value".into())), ("coeff", at_q.cell())]);
        }
        QseriesOp::Qnum { x } => {
            t.param("x", x);
            t.tag("q-number", "[x]_q = (q^x - q^-x) / (q - q^-1)");
            let v = qseries::q_number(ctx, *x)?;
            t.row("q-number", vec![("x", Cell::Float(*x)), ("value", v.cell())]);
        }
        QseriesOp::Hyper { upper, lower, z } => {
            t.param("upper", upper);
            t.param("lower", lower);
            t.param("z", z);
            t.tag("basic-hypergeometric", "r_phi_s(a; b; q, z) with the (-1)^k q^(k(k-1)/2) balancing factor");
            let spec = HyperSpec::new(list::<F>("upper", upper)?, list::<F>("lower", lower)?, q, F::parse_arg("z", z)?);
            let r = qseries::basic_hyper(ctx, &spec, None)?;
            t.row("basic-hypergeometric", vec![("value", r.value.cell()), ("bound", Cell::Float(r.bound)), ("terms", Cell::Int(r.terms as i64))]);
        }
        QseriesOp::Exp { z, kind } => {
            t.param("z", z);
            let (k, tag) = match kind {
                ExpArg::Small => (ExpKind::SmallE, "q-exp-small"),
                ExpArg::Big => (ExpKind::BigE, "q-exp-big"),
            };
            t.param("kind", tag);
            t.tag("q-exp-small", "e_q(z) = sum z^k / (q;q)_k = 1 / (z;q)_inf");
            t.tag("q-exp-big", "E_q(z) = sum q^(k(k-1)/2) z^k / (q;q)_k = (-z;q)_inf");
            t.provenance.retain(|(name, _)| name == tag);
            let zv = F::parse_arg("z", z)?;
            let v = qseries::q_exp(ctx, &zv, k)?;
            t.row(tag, vec![("z", zv.cell()), ("value", v.cell())]);
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- orth

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    AskeyWilson,
    AlSalamChihara,
    ContDualQHahn,
    LittleQJacobi,
    QHahn,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub c: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// size parameter N of the q-Hahn family
    #[arg(long = "big-n")]
    pub big_n: Option<usize>,
}

impl FamilyArgs {
    fn spec<F: Num>(&self) -> CliResult<FamilySpec<F>> {
        let get = |name: &str, v: &Option<String>| -> CliResult<F> {
            let text = v.as_deref().ok_or_else(|| CliError::invalid(name, "required for this family"))?;
            F::parse_arg(name, text)
        };
        Ok(match self.family {
            FamilyName::AskeyWilson => FamilySpec::AskeyWilson {
                a: get("a", &self.a)?,
                b: get("b", &self.b)?,
                c: get("c", &self.c)?,
                d: get("d", &self.d)?,
            },
            FamilyName::AlSalamChihara => FamilySpec::AlSalamChihara {
                a: get("a", &self.a)?,
                b: get("b", &self.b)?,
            },
            FamilyName::ContDualQHahn => FamilySpec::ContDualQHahn {
                a: get("a", &self.a)?,
                b: get("b", &self.b)?,
                c: get("c", &self.c)?,
            },
            FamilyName::LittleQJacobi => FamilySpec::LittleQJacobi {
                a: get("a", &self.a)?,
                b: get("b", &self.b)?,
            },
            FamilyName::QHahn => FamilySpec::QHahn {
                alpha: get("alpha", &self.alpha)?,
                beta: get("beta", &self.beta)?,
                n: self.big_n.ok_or_else(|| CliError::invalid("big-n", "required for q_hahn"))?,
            },
        })
    }

    fn record(&self, t: &mut Table) {
        for (k, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d), ("alpha", &self.alpha), ("beta", &self.beta)] {
            if let Some(v) = v {
                t.param(k, v);
            }
        }
        if let Some(n) = self.big_n {
            t.param("big_n", n);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Explicit,
    Recurrence,
}

#[derive(Debug, Subcommand)]
pub enum OrthOp {
    /// p_k(x) for k = 0..=n
    Eval {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Explicit)]
        method: MethodArg,
    },
    /// squared norms h_k for k = 0..=n
    Norm {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        n: usize,
    },
}

fn orth_cmd(cfg: &Config, op: &OrthOp) -> CliResult<Table> {
    let exact_ok = match op {
        OrthOp::Norm { family, .. } => matches!(family.family, FamilyName::QHahn | FamilyName::LittleQJacobi),
        OrthOp::Eval { .. } => true,
    };
    let mode = cfg.mode(exact_ok)?;
    let mut t = cfg.start("orth", mode);
    match mode {
        Mode::Exact => orth_generic(&cfg.exact_ctx()?, op, &mut t)?,
        Mode::Float => orth_generic(&cfg.float_ctx()?, op, &mut t)?,
    }
    Ok(t)
}

fn orth_generic<F: Num>(ctx: &QContext<F>, op: &OrthOp, t: &mut Table) -> CliResult<()> {
    match op {
        OrthOp::Eval { family, n, x, method } => {
            family.record(t);
            t.param("n", n);
            t.param("x", x);
            let spec = family.spec::<F>()?;
            spec.validate(ctx)?;
            t.param("family", spec.name());
            let tag = format!("{}-{}", spec.name(), if *method == MethodArg::Explicit { "explicit" } else { "recurrence" });
            t.tag(&tag, "family polynomial from its terminating basic hypergeometric form or three-term recurrence");
            let xv = F::parse_arg("x", x)?;
            let m = if *method == MethodArg::Explicit { EvalMode::Explicit } else { EvalMode::Recurrence };
            for k in 0..=*n {
                let v = qorth::orth_eval(ctx, &spec, k, &xv, m)?;
                t.row(&tag, vec![("k", Cell::Int(k as i64)), ("value", v.cell())]);
            }
        }
        OrthOp::Norm { family, n } => {
            family.record(t);
            t.param("n", n);
            let spec = family.spec::<F>()?;
            spec.validate(ctx)?;
            t.param("family", spec.name());
            let tag = format!("{}-norm", spec.name());
            t.tag(&tag, "squared norm of the k-th polynomial under the orthogonality measure");
            for k in 0..=*n {
                let v = qorth::orth_norm(ctx, &spec, k)?;
                t.row(&tag, vec![("k", Cell::Int(k as i64)), ("value", v.cell())]);
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- groebner

#[derive(Debug, Args)]
pub struct GroebnerArgs {
    /// one of quantum_plane, pol_disc, sl2q, mat2q, anick_example
    #[arg(long, conflicts_with = "file")]
    pub preset: Option<String>,
    /// relation file
    #[arg(long)]
    pub file: Option<PathBuf>,
    #[arg(long)]
    pub degree_cap: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_ITER_CAP)]
    pub iter_cap: usize,
    /// also list normal words up to this degree
    #[arg(long)]
    pub words: Option<usize>,
}

fn groebner_cmd(cfg: &Config, args: &GroebnerArgs) -> CliResult<Table> {
    cfg.mode(true)?;
    if cfg.global.float {
        return Err(CliError::invalid("mode", "Groebner bases are computed exactly"));
    }
    let (alphabet, rels) = match (&args.preset, &args.file) {
        (Some(p), _) => ncgroebner::preset_algebra(p)?,
        (None, Some(f)) => {
            let text = std::fs::read_to_string(f).map_err(|e| CliError::Io(format!("{}: {e}", f.display())))?;
            ncgroebner::parse_relations(&text)?
        }
        (None, None) => return Err(CliError::invalid("preset", "give --preset or --file")),
    };
    let mut t = Table::new("groebner");
    if let Some(p) = &args.preset {
        t.param("preset", p);
    }
    if let Some(f) = &args.file {
        t.param("file", f.display());
    }
    t.param("iter_cap", args.iter_cap);
    match &cfg.global.q {
        // coefficients in Q(q^(1/2)) unless q is fixed
        None => {
            t.param("q", "formal");
            groebner_generic::<RatFunc>(&alphabet, &rels, args, &mut t)?;
        }
        Some(q) => {
            t.param("q", q);
            let qv = cfg.q_rational()?;
            let rels: Vec<NCPoly<QuadExt>> = rels.iter().map(|p| p.try_map(|c| ncgroebner::specialize(c, &qv))).collect::<Result<_, _>>()?;
            groebner_generic(&alphabet, &rels, args, &mut t)?;
        }
    }
    Ok(t)
}

fn groebner_generic<F: Scalar + std::fmt::Display>(alphabet: &Alphabet, rels: &[NCPoly<F>], args: &GroebnerArgs, t: &mut Table) -> CliResult<()> {
    let sys = ncgroebner::complete_or_err(alphabet, rels, args.degree_cap, args.iter_cap)?;
    t.param("degree_cap", sys.degree_cap);
    t.tag("rewrite-rule", "reduced Groebner basis in deg-lex order, written as lead -> tail");
    t.tag("normal-words", "words avoiding every leading word, by degree");
    t.tag("diamond-check", "every ambiguity of the rewriting system resolves");
    for (i, r) in sys.rules.iter().enumerate() {
        t.row(
            "rewrite-rule",
            vec![
                ("index", Cell::Int(i as i64)),
                ("lhs", Cell::Text(alphabet.fmt_word(&r.lead))),
                ("rhs", Cell::Text(alphabet.fmt_poly(&r.tail))),
            ],
        );
    }
    if let Some(d) = args.words {
        for deg in 0..=d {
            let words = sys.normal_words(deg)?;
            let text: Vec<String> = words.iter().map(|w| alphabet.fmt_word(w)).collect();
            t.row(
                "normal-words",
                vec![("degree", Cell::Int(deg as i64)), ("count", Cell::Int(words.len() as i64)), ("words", Cell::Text(text.join(" ")))],
            );
        }
        t.row("diamond-check", vec![("passed", Cell::Bool(sys.diamond_check()))]);
    } else {
        t.provenance.retain(|(k, _)| k == "rewrite-rule");
    }
    Ok(())
}

// ---------------------------------------------------------------- disc

#[derive(Debug, Subcommand)]
pub enum DiscOp {
    /// canonical form of a polynomial in z, z* (write z* as `z*`, e.g. "z* z - q^2 z z*")
    Normal {
        #[arg(long)]
        expr: String,
    },
    /// invariant Laplacian of a polynomial element
    Laplacian {
        #[arg(long)]
        expr: String,
    },
    /// nonzero entries of the Fock matrix of a polynomial element
    Fock {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// eigenvalue lambda(l) of the Laplacian
    Lambda {
        #[arg(long)]
        l: String,
    },
    /// spherical function Phi_l on grid points j < n
    Phi {
        #[arg(long, conflicts_with = "rho")]
        l: Option<String>,
        /// principal series l = -1/2 + i rho
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 10)]
        n: usize,
    },
    /// Plancherel density on [0, rho_max] as (rho, density) plot data
    Density {
        #[arg(long, default_value_t = 33)]
        points: usize,
    },
    /// symmetric tridiagonal form of the radial Laplacian, N x N
    Radial {
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// eigenvalues of the truncated radial Laplacian
    Eigen {
        #[arg(long, default_value_t = 40)]
        n: usize,
    },
    /// Green function applied to f_0, truncated at m terms, on grid points j < n
    Green {
        #[arg(long, default_value_t = 60)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Harish-Chandra c-function c(l)
    Cfun {
        #[arg(long)]
        l: f64,
    },
}

/// Parses a polynomial in `z`, `z*` (coefficients may use `q`) and maps it to canonical form.
pub fn parse_element<F: Num>(ctx: &QContext<F>, q: &num_rational::BigRational, text: &str, name: &str) -> CliResult<PolElement<F>> {
    let (a, _) = ncgroebner::preset_algebra("pol_disc")?;
    let p = ncgroebner::parse_poly(&a, text, 1).map_err(|e| CliError::invalid(name, e.to_string()))?;
    let p: NCPoly<QuadExt> = p.try_map(|c| ncgroebner::specialize(c, q))?;
    let root = ctx.s()?.clone();
    let p: NCPoly<F> = p.map(|c| F::from_rational(&c.a) + F::from_rational(&c.b) * root.clone());
    Ok(qdisc::pol_normal_form(ctx, &a, &p)?)
}

fn element_rows<F: Num>(t: &mut Table, tag: &str, f: &PolElement<F>) {
    t.row(tag, vec![("element", Cell::Text(f.to_string()))]);
}

fn disc_cmd(cfg: &Config, op: &DiscOp) -> CliResult<Table> {
    let exact_ok = match op {
        DiscOp::Density { .. } | DiscOp::Eigen { .. } | DiscOp::Cfun { .. } => false,
        DiscOp::Phi { l, .. } => l.as_deref().is_some_and(|l| is_half_integer(l)),
        DiscOp::Lambda { l } => is_half_integer(l),
        _ => true,
    };
    let mode = cfg.mode(exact_ok)?;
    let mut t = cfg.start("disc", mode);
    match mode {
        Mode::Exact => disc_generic(cfg, &cfg.exact_ctx()?, op, &mut t)?,
        Mode::Float => {
            let ctx = cfg.float_ctx()?;
            if !disc_float_only(&ctx, op, &mut t)? {
                disc_generic(cfg, &ctx, op, &mut t)?;
            }
        }
    }
    Ok(t)
}

fn is_half_integer(text: &str) -> bool {
    QuadExt::parse_arg("l", text).is_ok_and(|v| (v.a.clone() * num_rational::BigRational::from_integer(2.into())).is_integer())
}

fn disc_generic<F: Num>(cfg: &Config, ctx: &QContext<F>, op: &DiscOp, t: &mut Table) -> CliResult<()> {
    let q = cfg.q_rational()?;
    match op {
        DiscOp::Normal { expr } => {
            t.param("expr", expr);
            t.tag("canonical-form", "sum over weights of z^m psi(y) or psi(y) z*^m, y = 1 - z z*");
            let f = parse_element(ctx, &q, expr, "expr")?;
            element_rows(t, "canonical-form", &f);
        }
        DiscOp::Laplacian { expr } => {
            t.param("expr", expr);
            t.tag("invariant-laplacian", "Casimir action on the quantum disc");
            let f = parse_element(ctx, &q, expr, "expr")?;
            element_rows(t, "invariant-laplacian", &qdisc::laplacian_apply(ctx, &f)?);
        }
        DiscOp::Fock { expr, n } => {
            t.param("expr", expr);
            t.param("n", n);
            t.tag("fock-matrix", "matrix of the element in the Fock representation, gauge with z e_k = e_(k+1)");
            let f = parse_element(ctx, &q, expr, "expr")?;
            let m = qdisc::fock_matrix_gauge(ctx, &f, *n);
            for i in 0..*n {
                for j in 0..*n {
                    let v = m.get(i, j);
                    if !v.is_zero() {
                        t.row("fock-matrix", vec![("i", Cell::Int(i as i64)), ("j", Cell::Int(j as i64)), ("value", v.cell())]);
                    }
                }
            }
        }
        DiscOp::Lambda { l } => {
            t.param("l", l);
            t.tag("laplacian-eigenvalue", "lambda(l) = (1 - q^(-2l)) (1 - q^(2l+2)) / (1 - q^2)^2");
            let lv = F::parse_arg("l", l)?;
            let value = if F::EXACT {
                let two_l = two_l_of(l)?;
                let one = F::one();
                (one.clone() - ctx.qp(-two_l)) * (one.clone() - ctx.qp(two_l + 2)) / (one - ctx.qp(2)).pow_i(2)
            } else {
                let lr = lv.approx().map(|z| z.re).unwrap_or(f64::NAN);
                F::from_f64(qdisc::lambda_of(ctx.q_f64().unwrap_or(f64::NAN), Complex64::new(lr, 0.0)).re).unwrap_or_else(F::zero)
            };
            t.row("laplacian-eigenvalue", vec![("l", lv.cell()), ("lambda", value.cell())]);
        }
        DiscOp::Phi { l: Some(l), n, .. } if F::EXACT => {
            t.param("l", l);
            t.param("n", n);
            t.tag("spherical-function", "Phi_l(q^(-2j)) as a terminating 3phi2 with u = q^(-2l)");
            let u = ctx.qp(-two_l_of(l)?);
            for j in 0..*n {
                t.row("spherical-function", vec![("j", Cell::Int(j as i64)), ("value", qdisc::phi_l_exact(ctx, &u, j).cell())]);
            }
        }
        DiscOp::Radial { n } => {
            t.param("n", n);
            t.tag("radial-laplacian", "symmetric Jacobi form of the Laplacian on radial functions");
            let m = qdisc::laplacian_radial_matrix(ctx, *n)?;
            for i in 0..*n {
                let mut row = vec![("i", Cell::Int(i as i64)), ("diag", m.diag[i].cell())];
                if let Some(o) = m.off.get(i) {
                    row.push(("off", o.cell()));
                }
                t.row("radial-laplacian", row);
            }
        }
        DiscOp::Green { m, n } => {
            t.param("m", m);
            t.param("n", n);
            t.tag("green-function", "truncated Green function series applied to f_0");
            let g = qdisc::green_f0(ctx, *m, *n)?;
            for (j, v) in g.values.iter().enumerate() {
                t.row("green-function", vec![("j", Cell::Int(j as i64)), ("value", v.cell())]);
            }
        }
        _ => return Err(CliError::invalid("mode", "this operation is only available with --float")),
    }
    Ok(())
}

fn two_l_of(l: &str) -> CliResult<i64> {
    let v = QuadExt::parse_arg("l", l)?;
    let two = v.a * num_rational::BigRational::from_integer(2.into());
    if !two.is_integer() {
        return Err(CliError::invalid("l", "exact mode needs 2l to be an integer"));
    }
    two.numer().to_string().parse().map_err(|_| CliError::invalid("l", "too large"))
}

/// Handles the float-only operations; returns false for the generic ones.
fn disc_float_only(ctx: &QContext<f64>, op: &DiscOp, t: &mut Table) -> CliResult<bool> {
    let q = *ctx.q();
    match op {
        DiscOp::Phi { l, rho, n } => {
            let param = match (l, rho) {
                (Some(l), _) => {
                    t.param("l", l);
                    SpectralParam::L(Complex64::new(f64::parse_arg("l", l)?, 0.0))
                }
                (None, Some(r)) => {
                    t.param("rho", r);
                    SpectralParam::Rho(*r)
                }
                (None, None) => return Err(CliError::invalid("l", "give --l or --rho")),
            };
            t.param("n", n);
            t.tag("spherical-function", "Phi_l(q^(-2j)), eigenfunction of the radial Laplacian with Phi_l(1) = 1");
            let vals = qdisc::phi_l_values(ctx, param, *n)?;
            for (j, v) in vals.values.iter().enumerate() {
                let mut row = vec![("j", Cell::Int(j as i64))];
                row.extend(complex_cols(*v));
                t.row("spherical-function", row);
            }
        }
        DiscOp::Density { points } => {
            if *points < 2 {
                return Err(CliError::invalid("points", "need at least 2"));
            }
            t.param("points", points);
            t.tag("plancherel-density", "density of the spectral measure in rho on [0, pi / (2 ln(1/q))]");
            let r = qdisc::spectral_bound(q);
            for i in 0..*points {
                let rho = r * i as f64 / (*points - 1) as f64;
                t.row("plancherel-density", vec![("rho", Cell::Float(rho)), ("density", Cell::Float(qdisc::sigma_density(ctx, rho)?))]);
            }
        }
        DiscOp::Eigen { n } => {
            t.param("n", n);
            t.tag("radial-spectrum", "eigenvalues of the N x N truncation of the radial Laplacian");
            let m = qdisc::laplacian_radial_matrix(ctx, *n)?;
            let mut ev = m.eigenvalues();
            ev.sort_by(f64::total_cmp);
            for (k, v) in ev.iter().enumerate() {
                t.row("radial-spectrum", vec![("k", Cell::Int(k as i64)), ("value", Cell::Float(*v))]);
            }
        }
        DiscOp::Cfun { l } => {
            t.param("l", l);
            t.tag("c-function", "c(l) as a quotient of q^2-Gamma functions");
            let c = qdisc::c_function(ctx, Complex64::new(*l, 0.0))?;
            let mut row = vec![("l", Cell::Float(*l))];
            row.extend(complex_cols(c));
            t.row("c-function", row);
        }
        _ => return Ok(false),
    }
    Ok(true)
}

// ---------------------------------------------------------------- bergman

#[derive(Debug, Subcommand)]
pub enum BergmanOp {
    /// monomial norms ||z^k||^2 and kernel coefficients for k < n
    Norm {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// nonzero entries of an N x N Toeplitz matrix; symbol is z, zs, y^k or poly:c0,c1,...
    Toeplitz {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 8)]
        n: usize,
    },
    /// Berezin transform of f_0 on grid points j < n
    Berezin {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
    },
    /// Berezin transform of f_0 from the resolvent product
    Product {
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 40)]
        factors: usize,
        #[arg(long, default_value_t = 20)]
        n: usize,
        /// grid size for the tridiagonal solves
        #[arg(long, default_value_t = 80)]
        grid: usize,
    },
    /// coefficients of p_j
    Ppoly {
        #[arg(long)]
        j: usize,
    },
}

fn bergman_cmd(cfg: &Config, op: &BergmanOp) -> CliResult<Table> {
    let exact_ok = match op {
        BergmanOp::Berezin { .. } | BergmanOp::Product { .. } => false,
        BergmanOp::Norm { lambda, .. } | BergmanOp::Toeplitz { lambda, .. } => QuadExt::parse_arg("lambda", lambda).is_ok_and(|v| v.a.is_integer()),
        BergmanOp::Ppoly { .. } => true,
    };
    let mode = cfg.mode(exact_ok)?;
    let mut t = cfg.start("bergman", mode);
    match mode {
        Mode::Exact => {
            let ctx = cfg.exact_ctx()?;
            bergman_generic(&ctx, op, &mut t, |l| {
                let v = QuadExt::parse_arg("lambda", l)?;
                let n: i64 = v.a.numer().to_string().parse().map_err(|_| CliError::invalid("lambda", "expected an integer"))?;
                Ok(WeightedSpace::integral(&ctx, n)?)
            })?
        }
        Mode::Float => {
            let ctx = cfg.float_ctx()?;
            if !bergman_float_only(&ctx, op, &mut t)? {
                bergman_generic(&ctx, op, &mut t, |l| Ok(WeightedSpace::new(&ctx, f64::parse_arg("lambda", l)?)?))?;
            }
        }
    }
    Ok(t)
}

fn parse_symbol<F: Num>(text: &str) -> CliResult<Symbol<F>> {
    let s = text.trim();
    match s {
        "z" => Ok(Symbol::Z),
        "zs" | "z*" => Ok(Symbol::ZStar),
        "y" => Ok(Symbol::YPow(1)),
        _ => {
            if let Some(k) = s.strip_prefix("y^") {
                return k.parse().map(Symbol::YPow).map_err(|_| CliError::invalid("symbol", "bad power of y"));
            }
            if let Some(c) = s.strip_prefix("poly:") {
                return Ok(Symbol::Poly(UPoly::from_coeffs(list::<F>("symbol", c)?)));
            }
            Err(CliError::invalid("symbol", format!("unknown symbol `{s}`")))
        }
    }
}

fn bergman_generic<F: Num>(
    ctx: &QContext<F>,
    op: &BergmanOp,
    t: &mut Table,
    space: impl Fn(&str) -> CliResult<WeightedSpace<F>>,
) -> CliResult<()> {
    match op {
        BergmanOp::Norm { lambda, n } => {
            t.param("lambda", lambda);
            t.param("n", n);
            t.tag("monomial-norm", "||z^k||^2 = (q^2;q^2)_k / (q^(2 lambda);q^2)_k");
            t.tag("kernel-coefficient", "reciprocal of the monomial norm");
            let sp = space(lambda)?;
            for k in 0..*n {
                t.row(
                    "monomial-norm",
                    vec![
                        ("k", Cell::Int(k as i64)),
                        ("norm", bergman::monomial_norm(ctx, &sp, k).cell()),
                        ("kernel", bergman::bergman_kernel_coeff(ctx, &sp, k).cell()),
                    ],
                );
            }
        }
        BergmanOp::Toeplitz { lambda, symbol, n } => {
            t.param("lambda", lambda);
            t.param("symbol", symbol);
            t.param("n", n);
            t.tag("toeplitz-matrix", "Toeplitz operator on monomials z^j; column j is the image of z^j");
            let sp = space(lambda)?;
            let m = bergman::toeplitz_matrix(ctx, &sp, &parse_symbol(symbol)?, *n)?;
            for i in 0..*n {
                for j in 0..*n {
                    let v = m.get(i, j);
                    if !v.is_zero() {
                        t.row("toeplitz-matrix", vec![("i", Cell::Int(i as i64)), ("j", Cell::Int(j as i64)), ("value", v.cell())]);
                    }
                }
            }
        }
        BergmanOp::Ppoly { j } => {
            t.param("j", j);
            t.tag("berezin-polynomial", "p_j(x), with p_j(lambda(l)) = Phi_l(q^(-2j))");
            let p = bergman::p_poly(ctx, *j);
            for (i, c) in p.coeffs().iter().enumerate() {
                t.row("berezin-polynomial", vec![("power", Cell::Int(i as i64)), ("coeff", c.cell())]);
            }
        }
        _ => return Err(CliError::invalid("mode", "this operation is only available with --float")),
    }
    Ok(())
}

fn bergman_float_only(ctx: &QContext<f64>, op: &BergmanOp, t: &mut Table) -> CliResult<bool> {
    let f0 = qdisc::RadialFunction::new(vec![1.0]);
    match op {
        BergmanOp::Berezin { lambda, n } => {
            t.param("lambda", lambda);
            t.param("n", n);
            t.tag("berezin-transform", "(1 - t) sum_j t^j p_j(L) f_0, t = q^(2(lambda-1))");
            let sp = WeightedSpace::new(ctx, f64::parse_arg("lambda", lambda)?)?;
            let b = bergman::berezin_radial(ctx, &sp, &f0, *n)?;
            t.param("terms", b.terms);
            t.param("bound", format!("{:e}", b.bound));
            for (j, v) in b.value.values.iter().enumerate() {
                t.row("berezin-transform", vec![("j", Cell::Int(j as i64)), ("value", Cell::Float(*v))]);
            }
        }
        BergmanOp::Product { lambda, factors, n, grid } => {
            t.param("lambda", lambda);
            t.param("factors", factors);
            t.param("n", n);
            t.param("grid", grid);
            t.tag("berezin-product", "product of (1 + q / ([lambda+j]_q [lambda+j-1]_q) L)^(-1) applied to f_0");
            if grid < n {
                return Err(CliError::invalid("grid", "must be at least n"));
            }
            let r = bergman::berezin_product_formula(ctx, f64::parse_arg("lambda", lambda)?, &f0, *factors, *grid)?;
            for (j, v) in r.values.iter().take(*n).enumerate() {
                t.row("berezin-product", vec![("j", Cell::Int(j as i64)), ("value", Cell::Float(*v))]);
            }
        }
        _ => return Ok(false),
    }
    Ok(true)
}

// ---------------------------------------------------------------- star

#[derive(Debug, Args)]
pub struct StarArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub g: String,
    /// highest power of t
    #[arg(long, default_value_t = 3)]
    pub order: usize,
}

fn star_cmd(cfg: &Config, args: &StarArgs) -> CliResult<Table> {
    let mode = cfg.mode(true)?;
    let mut t = cfg.start("star", mode);
    t.param("f", &args.f);
    t.param("g", &args.g);
    t.param("order", args.order);
    match mode {
        Mode::Exact => star_generic(cfg, &cfg.exact_ctx()?, args, &mut t)?,
        Mode::Float => star_generic(cfg, &cfg.float_ctx()?, args, &mut t)?,
    }
    Ok(t)
}

fn star_generic<F: Num>(cfg: &Config, ctx: &QContext<F>, args: &StarArgs, t: &mut Table) -> CliResult<()> {
    let q = cfg.q_rational()?;
    let f = parse_element(ctx, &q, &args.f, "f")?;
    let g = parse_element(ctx, &q, &args.g, "g")?;
    t.tag("star-coefficient", "coefficient of t^k in f *_t g = (1-t) sum_j t^j f1 p_j(box)(f2 g1) g2");
    let s = bergman::star_product(ctx, &f, &g, args.order)?;
    for (k, c) in s.coeffs.iter().enumerate() {
        t.row("star-coefficient", vec![("k", Cell::Int(k as i64)), ("coefficient", Cell::Text(c.to_string()))]);
    }
    Ok(())
}
