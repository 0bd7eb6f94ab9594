//! Noncommutative Gröbner bases in the free algebra `K<X>`.
//!
//! Words are ordered deglex. A [`RewriteSystem`] stores monic rules
//! `lead -> tail`; completion adds reduced compositions of overlapping leads
//! until every ambiguity resolves (the diamond lemma), or a cap is hit.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_rational::BigRational;

use crate::error::{QError, Result};
use crate::ratfunc::RatFunc;
use crate::scalar::{QuadExt, Scalar};

/// Ordered finite alphabet. Letters are listed from greatest to smallest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<String>,
}

const RESERVED: &[char] = &['+', '-', '(', ')', '/', '^', ',', ';', '>', '<', '='];

impl Alphabet {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        if letters.is_empty() {
            return Err(QError::param("alphabet", "empty alphabet"));
        }
        if letters.len() > u16::MAX as usize {
            return Err(QError::param("alphabet", "too many letters"));
        }
        for (i, l) in letters.iter().enumerate() {
            let bad_start = l.starts_with(|c: char| c.is_ascii_digit() || c == '*' || c == '.');
            if l.is_empty()
                || bad_start
                || l == "q"
                || l.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c))
            {
                return Err(QError::param("alphabet", format!("invalid letter `{l}`")));
            }
            if letters[..i].contains(l) {
                return Err(QError::param("alphabet", format!("duplicate letter `{l}`")));
            }
        }
        Ok(Alphabet { letters })
    }

    /// Letters from greatest to smallest.
    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Internal code of a letter; greater letters have larger codes.
    pub fn code(&self, name: &str) -> Option<u16> {
        let pos = self.letters.iter().position(|l| l == name)?;
        Some((self.letters.len() - 1 - pos) as u16)
    }

    pub fn name(&self, code: u16) -> &str {
        &self.letters[self.letters.len() - 1 - code as usize]
    }

    pub fn word(&self, names: &[&str]) -> Result<Word> {
        names
            .iter()
            .map(|n| self.code(n).ok_or_else(|| QError::param("word", format!("unknown letter `{n}`"))))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    fn separator(&self) -> &'static str {
        if self.letters.iter().any(|l| l.contains('*')) {
            " "
        } else {
            "*"
        }
    }

    pub fn fmt_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter().map(|&c| self.name(c)).collect::<Vec<_>>().join(self.separator())
    }

    pub fn fmt_poly<F: Scalar>(&self, p: &NCPoly<F>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (w, c) in p.terms.iter().rev() {
            let cs = c.to_string();
            let simple = is_simple_factor(cs.strip_prefix('-').unwrap_or(&cs));
            let (neg, body) = if c.is_one() {
                (false, String::new())
            } else if (-c.clone()).is_one() {
                (true, String::new())
            } else if simple {
                match cs.strip_prefix('-') {
                    Some(r) => (true, r.to_string()),
                    None => (false, cs.clone()),
                }
            } else {
                (false, format!("({cs})"))
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (body.is_empty(), w.is_empty()) {
                (true, true) => out.push('1'),
                (true, false) => out.push_str(&self.fmt_word(w)),
                (false, true) => out.push_str(&body),
                (false, false) => {
                    out.push_str(&body);
                    out.push('*');
                    out.push_str(&self.fmt_word(w));
                }
            }
        }
        out
    }

    /// Header line of the relation file format.
    pub fn header(&self) -> String {
        format!("alphabet: {}", self.letters.join(" > "))
    }
}

/// No spaces, and no `+`, `-` or `/` outside parentheses.
fn is_simple_factor(s: &str) -> bool {
    let mut depth = 0i32;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ' ' => return false,
            '+' | '-' | '/' if depth == 0 => return false,
            _ => {}
        }
    }
    true
}

/// Word in the free monoid; letters are alphabet codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u16>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    fn slice(&self, a: usize, b: usize) -> Word {
        Word(self.0[a..b].to_vec())
    }

    /// Position of the first occurrence of `sub`.
    pub fn find(&self, sub: &Word) -> Option<usize> {
        if sub.len() > self.len() {
            return None;
        }
        (0..=self.len() - sub.len()).find(|&i| self.0[i..i + sub.len()] == sub.0[..])
    }

    pub fn contains(&self, sub: &Word) -> bool {
        self.find(sub).is_some()
    }
}

impl Ord for Word {
    fn cmp(&self, o: &Self) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub fn deglex_compare(alphabet: &Alphabet, w1: &Word, w2: &Word) -> Result<Ordering> {
    let n = alphabet.len() as u16;
    if w1.0.iter().chain(&w2.0).any(|&c| c >= n) {
        return Err(QError::param("word", "letter outside the alphabet"));
    }
    Ok(w1.cmp(w2))
}

/// Element of the free algebra: finite map from words to nonzero coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct NCPoly<F> {
    terms: BTreeMap<Word, F>,
}

impl<F: Scalar> NCPoly<F> {
    pub fn zero() -> Self {
        NCPoly { terms: BTreeMap::new() }
    }

    pub fn term(c: F, w: Word) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn constant(c: F) -> Self {
        Self::term(c, Word::empty())
    }

    pub fn word(w: Word) -> Self {
        Self::term(F::one(), w)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &Word) -> F {
        self.terms.get(w).cloned().unwrap_or_else(F::zero)
    }

    /// Deglex-greatest word with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &F)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> Option<usize> {
        self.leading().map(|(w, _)| w.len())
    }

    pub fn as_constant(&self) -> Option<F> {
        match self.terms.len() {
            0 => Some(F::zero()),
            1 => self.terms.get(&Word::empty()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, w: Word, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NCPoly {
            terms: self.terms.iter().map(|(w, a)| (w.clone(), a.clone() * c.clone())).collect(),
        }
    }

    /// `u * self * v`
    pub fn sandwich(&self, u: &Word, v: &Word) -> Self {
        NCPoly {
            terms: self.terms.iter().map(|(w, a)| (u.concat(w).concat(v), a.clone())).collect(),
        }
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> NCPoly<G> {
        let mut p = NCPoly::zero();
        for (w, c) in &self.terms {
            p.add_term(w.clone(), f(c));
        }
        p
    }

    pub fn try_map<G: Scalar>(&self, f: impl Fn(&F) -> Result<G>) -> Result<NCPoly<G>> {
        let mut p = NCPoly::zero();
        for (w, c) in &self.terms {
            p.add_term(w.clone(), f(c)?);
        }
        Ok(p)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv()),
            None => Self::zero(),
        }
    }
}

impl<F: Scalar> std::ops::Add for NCPoly<F> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (w, c) in o.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<F: Scalar> std::ops::Neg for NCPoly<F> {
    type Output = Self;
    fn neg(self) -> Self {
        NCPoly {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl<F: Scalar> std::ops::Sub for NCPoly<F> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<F: Scalar> std::ops::Mul for NCPoly<F> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut p = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &o.terms {
                p.add_term(u.concat(v), a.clone() * b.clone());
            }
        }
        p
    }
}

/// Monic rewriting rule `lead -> tail`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule<F> {
    pub lead: Word,
    pub tail: NCPoly<F>,
}

impl<F: Scalar> Rule<F> {
    /// The relation `lead - tail`.
    pub fn poly(&self) -> NCPoly<F> {
        NCPoly::word(self.lead.clone()) - self.tail.clone()
    }
}

#[derive(Clone, Debug)]
pub struct RewriteSystem<F> {
    pub alphabet: Alphabet,
    pub rules: Vec<Rule<F>>,
    pub degree_cap: usize,
    pub complete: bool,
    /// Why completion stopped early, if it did.
    pub stop_reason: Option<String>,
}

/// One rewriting step `c * u * (lead - tail) * v` of a traced reduction.
#[derive(Clone, Debug)]
pub struct Step<F> {
    pub coeff: F,
    pub left: Word,
    pub rule: usize,
    pub right: Word,
}

fn first_match<'a, F>(rules: impl Iterator<Item = (usize, &'a Rule<F>)>, w: &Word) -> Option<(usize, usize)>
where
    F: 'a,
{
    for (i, r) in rules {
        if let Some(pos) = w.find(&r.lead) {
            return Some((i, pos));
        }
    }
    None
}

fn reduce_by<'a, F: Scalar + 'a>(
    p: &NCPoly<F>,
    rules: impl Iterator<Item = (usize, &'a Rule<F>)> + Clone,
    mut trace: Option<&mut Vec<Step<F>>>,
) -> NCPoly<F> {
    let mut pending = p.clone();
    let mut done = NCPoly::zero();
    while let Some((w, c)) = pending.terms.pop_last() {
        match first_match(rules.clone(), &w) {
            None => done.add_term(w, c),
            Some((i, pos)) => {
                let rule = rules.clone().find(|(j, _)| *j == i).map(|(_, r)| r).expect("matched rule");
                let u = w.slice(0, pos);
                let v = w.slice(pos + rule.lead.len(), w.len());
                let repl = rule.tail.sandwich(&u, &v).scale(&c);
                if let Some(t) = trace.as_deref_mut() {
                    t.push(Step {
                        coeff: c,
                        left: u,
                        rule: i,
                        right: v,
                    });
                }
                pending = pending + repl;
            }
        }
    }
    done
}

impl<F: Scalar> RewriteSystem<F> {
    pub fn new(alphabet: Alphabet, rules: Vec<Rule<F>>) -> Self {
        let degree_cap = rules.iter().map(|r| r.lead.len()).max().unwrap_or(0);
        RewriteSystem {
            alphabet,
            rules,
            degree_cap,
            complete: false,
            stop_reason: None,
        }
    }

    fn indexed(&self) -> impl Iterator<Item = (usize, &Rule<F>)> + Clone {
        self.rules.iter().enumerate()
    }

    /// Normal form with respect to the rules.
    pub fn reduce(&self, p: &NCPoly<F>) -> NCPoly<F> {
        reduce_by(p, self.indexed(), None)
    }

    /// Normal form together with the rewriting steps, so that
    /// `p = nf + Σ c u (lead - tail) v`.
    pub fn reduce_traced(&self, p: &NCPoly<F>) -> (NCPoly<F>, Vec<Step<F>>) {
        let mut steps = Vec::new();
        let nf = reduce_by(p, self.indexed(), Some(&mut steps));
        (nf, steps)
    }

    /// The ideal member `Σ c u (lead - tail) v` described by a trace.
    pub fn ideal_member(&self, steps: &[Step<F>]) -> NCPoly<F> {
        steps.iter().fold(NCPoly::zero(), |acc, s| {
            acc + self.rules[s.rule].poly().sandwich(&s.left, &s.right).scale(&s.coeff)
        })
    }

    pub fn leads(&self) -> Vec<&Word> {
        self.rules.iter().map(|r| &r.lead).collect()
    }

    pub fn require_complete(&self) -> Result<()> {
        if self.complete {
            Ok(())
        } else {
            Err(QError::Incomplete)
        }
    }

    /// Words of the given length avoiding every lead as a subword.
    pub fn normal_words(&self, degree: usize) -> Result<Vec<Word>> {
        self.require_complete()?;
        let n = self.alphabet.len() as u16;
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(degree);
        self.extend_normal(&mut cur, degree, n, &mut out);
        out.sort();
        Ok(out)
    }

    fn extend_normal(&self, cur: &mut Vec<u16>, degree: usize, n: u16, out: &mut Vec<Word>) {
        if cur.len() == degree {
            out.push(Word(cur.clone()));
            return;
        }
        for c in (0..n).rev() {
            cur.push(c);
            let bad = self.rules.iter().any(|r| cur.ends_with(&r.lead.0));
            if !bad {
                self.extend_normal(cur, degree, n, out);
            }
            cur.pop();
        }
    }

    pub fn hilbert_dims(&self, dmax: usize) -> Result<Vec<usize>> {
        (0..=dmax).map(|d| self.normal_words(d).map(|v| v.len())).collect()
    }

    /// All ambiguities: overlaps `lead_i = u o`, `lead_j = o v`, and inclusions
    /// `lead_i = u lead_j v`, with their composition results.
    fn compositions(&self) -> Vec<(Word, NCPoly<F>)> {
        let mut out = Vec::new();
        for (i, a) in self.rules.iter().enumerate() {
            for (j, b) in self.rules.iter().enumerate() {
                for (w, c) in overlaps(a, b) {
                    out.push((w, c));
                }
                if i != j {
                    if let Some(pos) = a.lead.find(&b.lead) {
                        let u = a.lead.slice(0, pos);
                        let v = a.lead.slice(pos + b.lead.len(), a.lead.len());
                        out.push((a.lead.clone(), b.tail.sandwich(&u, &v) - a.tail.clone()));
                    }
                }
            }
        }
        out
    }

    /// True iff every composition reduces to zero.
    pub fn diamond_check(&self) -> bool {
        self.compositions().iter().all(|(_, c)| self.reduce(c).is_zero())
    }

    /// Substitutes coefficients into another field.
    pub fn try_map<G: Scalar>(&self, f: impl Fn(&F) -> Result<G>) -> Result<RewriteSystem<G>> {
        Ok(RewriteSystem {
            alphabet: self.alphabet.clone(),
            rules: self
                .rules
                .iter()
                .map(|r| {
                    Ok(Rule {
                        lead: r.lead.clone(),
                        tail: r.tail.try_map(&f)?,
                    })
                })
                .collect::<Result<_>>()?,
            degree_cap: self.degree_cap,
            complete: self.complete,
            stop_reason: self.stop_reason.clone(),
        })
    }
}

/// Overlap compositions `u tail_b - tail_a v` for `lead_a = u o`, `lead_b = o v`.
fn overlaps<F: Scalar>(a: &Rule<F>, b: &Rule<F>) -> Vec<(Word, NCPoly<F>)> {
    let (la, lb) = (a.lead.len(), b.lead.len());
    let mut out = Vec::new();
    for k in 1..la.min(lb) {
        if a.lead.0[la - k..] == b.lead.0[..k] {
            let u = a.lead.slice(0, la - k);
            let v = b.lead.slice(k, lb);
            let w = a.lead.concat(&v);
            out.push((w, b.tail.sandwich(&u, &Word::empty()) - a.tail.sandwich(&Word::empty(), &v)));
        }
    }
    out
}

impl<F: Scalar> fmt::Display for RewriteSystem<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{} -> {}", self.alphabet.fmt_word(&r.lead), self.alphabet.fmt_poly(&r.tail))?;
        }
        Ok(())
    }
}

/// Default degree cap `2 * (max relation degree) + 4`.
pub fn default_degree_cap<F: Scalar>(relations: &[NCPoly<F>]) -> usize {
    2 * relations.iter().filter_map(|p| p.degree()).max().unwrap_or(0) + 4
}

pub const DEFAULT_ITER_CAP: usize = 100_000;

struct Completion<F> {
    rules: BTreeMap<usize, Rule<F>>,
    next_id: usize,
    queue: BTreeSet<(Word, usize, usize, usize)>,
    pending: Vec<NCPoly<F>>,
    degree_cap: usize,
}

impl<F: Scalar> Completion<F> {
    fn reduce(&self, p: &NCPoly<F>) -> NCPoly<F> {
        reduce_by(p, self.rules.iter().map(|(i, r)| (*i, r)), None)
    }

    /// Inserts a reduced relation as a new rule and interreduces.
    fn insert(&mut self, p: NCPoly<F>) -> std::result::Result<(), String> {
        let p = self.reduce(&p);
        let Some((lead, _)) = p.leading() else {
            return Ok(());
        };
        let lead = lead.clone();
        if lead.is_empty() {
            // a nonzero constant lies in the ideal
            self.rules.clear();
            self.queue.clear();
            self.pending.clear();
        }
        if lead.len() > self.degree_cap {
            return Err(format!("rule of degree {} exceeds the degree cap {}", lead.len(), self.degree_cap));
        }
        let m = p.monic();
        let tail = NCPoly::word(lead.clone()) - m;
        let rule = Rule { lead: lead.clone(), tail };
        let id = self.next_id;
        self.next_id += 1;

        let stale: Vec<usize> = self.rules.iter().filter(|(_, r)| r.lead.contains(&lead)).map(|(i, _)| *i).collect();
        for i in stale {
            let r = self.rules.remove(&i).expect("present");
            self.pending.push(r.poly());
        }
        self.rules.insert(id, rule);
        let ids: Vec<usize> = self.rules.keys().copied().collect();
        for i in &ids {
            if *i == id {
                continue;
            }
            let tail = self.rules[i].tail.clone();
            let t = self.reduce(&tail);
            self.rules.get_mut(i).expect("present").tail = t;
        }
        for i in ids {
            let (a, b) = (&self.rules[&id], &self.rules[&i]);
            for k in overlap_offsets(&a.lead, &b.lead) {
                self.queue.insert((a.lead.concat(&b.lead.slice(k, b.lead.len())), id, i, k));
            }
            if i != id {
                for k in overlap_offsets(&b.lead, &a.lead) {
                    self.queue.insert((b.lead.concat(&a.lead.slice(k, a.lead.len())), i, id, k));
                }
            }
        }
        Ok(())
    }

    fn drain_pending(&mut self) -> std::result::Result<(), String> {
        while let Some(p) = self.pending.pop() {
            self.insert(p)?;
        }
        Ok(())
    }

    fn snapshot(&self, alphabet: &Alphabet) -> RewriteSystem<F> {
        let mut rules: Vec<Rule<F>> = self.rules.values().cloned().collect();
        rules.sort_by(|a, b| a.lead.cmp(&b.lead));
        RewriteSystem {
            alphabet: alphabet.clone(),
            rules,
            degree_cap: self.degree_cap,
            complete: false,
            stop_reason: None,
        }
    }
}

fn overlap_offsets(a: &Word, b: &Word) -> Vec<usize> {
    let (la, lb) = (a.len(), b.len());
    (1..la.min(lb)).filter(|&k| a.0[la - k..] == b.0[..k]).collect()
}

/// Completes a relation set to a reduced Gröbner basis.
///
/// Stops with `complete = false` when a rule or an unresolved overlap exceeds
/// `degree_cap`, or after `iter_cap` compositions.
pub fn complete<F: Scalar>(
    alphabet: &Alphabet,
    relations: &[NCPoly<F>],
    degree_cap: Option<usize>,
    iter_cap: usize,
) -> Result<RewriteSystem<F>> {
    if relations.iter().any(|p| p.is_zero()) {
        return Err(QError::param("relations", "zero relation"));
    }
    let n = alphabet.len() as u16;
    if relations.iter().any(|p| p.terms().any(|(w, _)| w.0.iter().any(|&c| c >= n))) {
        return Err(QError::param("relations", "letter outside the alphabet"));
    }
    let max_deg = relations.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    let degree_cap = degree_cap.unwrap_or_else(|| default_degree_cap(relations));
    if degree_cap < max_deg {
        return Err(QError::param("degree_cap", format!("{degree_cap} is below the relation degree {max_deg}")));
    }
    let mut st = Completion {
        rules: BTreeMap::new(),
        next_id: 0,
        queue: BTreeSet::new(),
        pending: relations.iter().rev().cloned().collect(),
        degree_cap,
    };
    let mut iters = 0usize;
    let stop = loop {
        if let Err(e) = st.drain_pending() {
            break Some(e);
        }
        let Some(entry) = st.queue.pop_first() else {
            // final diamond pass over the interreduced system
            let sys = st.snapshot(alphabet);
            let bad: Vec<NCPoly<F>> = sys
                .compositions()
                .into_iter()
                .map(|(_, c)| sys.reduce(&c))
                .filter(|c| !c.is_zero())
                .collect();
            if bad.is_empty() {
                break None;
            }
            st.pending.extend(bad);
            continue;
        };
        let (w, i, j, k) = entry;
        if w.len() > degree_cap {
            break Some(format!("unresolved overlap of degree {} exceeds the degree cap {}", w.len(), degree_cap));
        }
        iters += 1;
        if iters > iter_cap {
            break Some(format!("iteration cap {iter_cap} reached"));
        }
        let (Some(a), Some(b)) = (st.rules.get(&i), st.rules.get(&j)) else {
            continue;
        };
        let u = a.lead.slice(0, a.lead.len() - k);
        let v = b.lead.slice(k, b.lead.len());
        let comp = b.tail.sandwich(&u, &Word::empty()) - a.tail.sandwich(&Word::empty(), &v);
        let r = st.reduce(&comp);
        if !r.is_zero() {
            st.pending.push(r);
        }
    };
    let mut sys = st.snapshot(alphabet);
    // final interreduction of tails
    for i in 0..sys.rules.len() {
        let others: Vec<(usize, &Rule<F>)> = sys.rules.iter().enumerate().filter(|(j, _)| *j != i).collect();
        let t = reduce_by(&sys.rules[i].tail, others.into_iter(), None);
        sys.rules[i].tail = t;
    }
    sys.complete = stop.is_none();
    sys.stop_reason = stop;
    Ok(sys)
}

/// Fails with `CapExceeded` unless completion finished.
pub fn complete_or_err<F: Scalar>(
    alphabet: &Alphabet,
    relations: &[NCPoly<F>],
    degree_cap: Option<usize>,
    iter_cap: usize,
) -> Result<RewriteSystem<F>> {
    let sys = complete(alphabet, relations, degree_cap, iter_cap)?;
    match &sys.stop_reason {
        None => Ok(sys),
        Some(r) => Err(QError::CapExceeded(r.clone())),
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Q,
    Letter(u16),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(alphabet: &Alphabet, line: &str, lineno: usize) -> Result<Vec<Tok>> {
    let err = |msg: String| QError::Parse { line: lineno, msg };
    let mut by_len: Vec<(usize, &String)> = alphabet.letters().iter().enumerate().collect();
    by_len.sort_by(|a, b| b.1.len().cmp(&a.1.len()));
    let mut out = Vec::new();
    let mut rest = line;
    while let Some(c) = rest.chars().next() {
        if c.is_whitespace() {
            rest = &rest[c.len_utf8()..];
            continue;
        }
        if let Some((_, l)) = by_len.iter().find(|(_, l)| rest.starts_with(l.as_str())) {
            out.push(Tok::Letter(alphabet.code(l).expect("known letter")));
            rest = &rest[l.len()..];
            continue;
        }
        if c.is_ascii_digit() {
            let end = rest.find(|ch: char| !(ch.is_ascii_digit() || ch == '.')).unwrap_or(rest.len());
            let v = crate::context::parse_rational(&rest[..end]).map_err(|_| err(format!("bad number `{}`", &rest[..end])))?;
            out.push(Tok::Num(v));
            rest = &rest[end..];
            continue;
        }
        let t = match c {
            'q' => Tok::Q,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(err(format!("unexpected `{}`", rest.chars().take(12).collect::<String>()))),
        };
        out.push(t);
        rest = &rest[c.len_utf8()..];
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
}

type P = NCPoly<RatFunc>;

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(QError::Parse {
            line: self.line,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<P> {
        let mut acc = if self.eat(&Tok::Minus) {
            -self.term()?
        } else {
            self.eat(&Tok::Plus);
            self.term()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                acc = acc + self.term()?;
            } else if self.eat(&Tok::Minus) {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<P> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    match d.as_constant() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.inv()),
                        _ => return self.err("division by a non-scalar or zero"),
                    }
                }
                Some(Tok::Num(_) | Tok::Q | Tok::Letter(_) | Tok::LParen) => {
                    acc = acc * self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<P> {
        if self.eat(&Tok::Minus) {
            return Ok(-self.unary()?);
        }
        self.power()
    }

    /// Exponent as a multiple of 1/2.
    fn exponent(&mut self) -> Result<i64> {
        let int = |p: &mut Self| -> Result<BigRational> {
            match p.peek().cloned() {
                Some(Tok::Num(v)) => {
                    p.pos += 1;
                    Ok(v)
                }
                _ => p.err("expected a number in the exponent"),
            }
        };
        let v = if self.eat(&Tok::LParen) {
            let neg = self.eat(&Tok::Minus);
            let mut v = int(self)?;
            if self.eat(&Tok::Slash) {
                v = v / int(self)?;
            }
            if !self.eat(&Tok::RParen) {
                return self.err("expected `)` in the exponent");
            }
            if neg {
                -v
            } else {
                v
            }
        } else if self.eat(&Tok::Minus) {
            -int(self)?
        } else {
            int(self)?
        };
        let twice = v * BigRational::from_integer(2.into());
        if !twice.is_integer() {
            return self.err("exponents must be multiples of 1/2");
        }
        let n: i64 = twice.to_integer().try_into().map_err(|_| QError::Parse {
            line: self.line,
            msg: "exponent too large".into(),
        })?;
        Ok(n)
    }

    fn power(&mut self) -> Result<P> {
        let is_q = self.peek() == Some(&Tok::Q);
        let base = self.atom()?;
        if !self.eat(&Tok::Caret) {
            return Ok(base);
        }
        let e2 = self.exponent()?;
        if is_q {
            return Ok(P::constant(RatFunc::s_pow(e2)));
        }
        if e2 % 2 != 0 {
            return self.err("half-integer powers are only allowed for q");
        }
        let e = e2 / 2;
        if e < 0 {
            return match base.as_constant() {
                Some(c) if !c.is_zero() => Ok(P::constant(c.pow_i(e))),
                _ => self.err("negative powers are only allowed for nonzero scalars"),
            };
        }
        let mut acc = P::constant(RatFunc::one());
        for _ in 0..e {
            acc = acc * base.clone();
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<P> {
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(P::constant(RatFunc::from_rational(&v)))
            }
            Some(Tok::Q) => {
                self.pos += 1;
                Ok(P::constant(RatFunc::q()))
            }
            Some(Tok::Letter(c)) => {
                self.pos += 1;
                Ok(P::word(Word(vec![c])))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses one polynomial. An optional `lhs = rhs` is read as `lhs - rhs`.
pub fn parse_poly(alphabet: &Alphabet, text: &str, lineno: usize) -> Result<NCPoly<RatFunc>> {
    let (lhs, rhs) = match text.split_once('=') {
        Some((a, b)) => (a, Some(b)),
        None => (text, None),
    };
    let one = |s: &str| -> Result<P> {
        let toks = tokenize(alphabet, s, lineno)?;
        let mut p = Parser {
            toks: &toks,
            pos: 0,
            line: lineno,
        };
        let v = p.expr()?;
        if p.pos != toks.len() {
            return p.err("trailing input");
        }
        Ok(v)
    };
    let l = one(lhs)?;
    match rhs {
        Some(r) => Ok(l - one(r)?),
        None => Ok(l),
    }
}

/// Reads the relation file format: `alphabet: a > b > c` followed by one
/// polynomial per line. Blank lines and lines starting with `#` are skipped.
pub fn parse_relations(text: &str) -> Result<(Alphabet, Vec<NCPoly<RatFunc>>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, head) = lines.next().ok_or(QError::Parse {
        line: 1,
        msg: "missing alphabet line".into(),
    })?;
    let body = head.strip_prefix("alphabet:").ok_or(QError::Parse {
        line: ln,
        msg: "first line must be `alphabet: a > b > ...`".into(),
    })?;
    let alphabet = Alphabet::new(body.split('>').map(|s| s.trim().to_string())).map_err(|e| QError::Parse {
        line: ln,
        msg: e.to_string(),
    })?;
    let mut rels = Vec::new();
    for (ln, l) in lines {
        let p = parse_poly(&alphabet, l, ln)?;
        if p.is_zero() {
            return Err(QError::Parse {
                line: ln,
                msg: "relation is zero".into(),
            });
        }
        rels.push(p);
    }
    Ok((alphabet, rels))
}

/// Writes the relation file format read by [`parse_relations`].
pub fn format_relations(alphabet: &Alphabet, relations: &[NCPoly<RatFunc>]) -> String {
    let mut s = alphabet.header();
    s.push('\n');
    for r in relations {
        s.push_str(&alphabet.fmt_poly(r));
        s.push('\n');
    }
    s
}

// ---------------------------------------------------------------- presets

pub const PRESETS: &[&str] = &["quantum_plane", "pol_disc", "sl2q", "mat2q", "anick_example"];

fn preset_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "quantum_plane" => "alphabet: t2 > t1\nt2*t1 - q*t1*t2\n",
        "pol_disc" => "alphabet: z* > z\nz*z - q^2 z z* - (1 - q^2)\n",
        "sl2q" => concat!(
            "alphabet: t11 > t12 > t21 > t22\n",
            "t11*t12 - q*t12*t11\n",
            "t11*t21 - q*t21*t11\n",
            "t12*t22 - q*t22*t12\n",
            "t21*t22 - q*t22*t21\n",
            "t12*t21 - t21*t12\n",
            "t11*t22 - t22*t11 - (q - q^(-1))*t12*t21\n",
            "t11*t22 - q*t12*t21 - 1\n",
        ),
        // z_a^alpha is written z{a}{alpha}
        "mat2q" => concat!(
            "alphabet: z11 > z12 > z21 > z22\n",
            "z11*z12 - q*z12*z11\n",
            "z21*z22 - q*z22*z21\n",
            "z11*z21 - q*z21*z11\n",
            "z12*z22 - q*z22*z12\n",
            "z12*z21 - z21*z12\n",
            "z11*z22 - z22*z11 - (q - q^(-1))*z12*z21\n",
        ),
        "anick_example" => "alphabet: x > y\nx^2 + y^2\n",
        _ => return None,
    })
}

/// Alphabet and relations of a named preset, over `Q(s)`.
pub fn preset_algebra(name: &str) -> Result<(Alphabet, Vec<NCPoly<RatFunc>>)> {
    let text = preset_text(name).ok_or_else(|| QError::param("preset", format!("unknown preset `{name}`")))?;
    parse_relations(text)
}

/// Value of a formal coefficient at a rational `q`, in `Q(sqrt q)`.
pub fn specialize(c: &RatFunc, q: &BigRational) -> Result<QuadExt> {
    let s = match crate::context::rational_sqrt(q) {
        Some(r) => QuadExt::rational(r),
        None => QuadExt::sqrt_of(q.clone()),
    };
    c.eval(&s).ok_or_else(|| QError::Pole(format!("coefficient {c} has a pole at q = {q}")))
}

/// Value of a formal coefficient at a rational `q`, which must be rational.
pub fn specialize_rational(c: &RatFunc, q: &BigRational) -> Result<BigRational> {
    let v = specialize(c, q)?;
    if !v.b.is_zero() {
        return Err(QError::param("q", format!("coefficient {c} is irrational at q = {q}")));
    }
    Ok(v.a)
}
