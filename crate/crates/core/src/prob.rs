//! Probabilistic evaluation.
//!
//! Basic events fail independently, so a probability vector `ρ̄` induces a
//! product distribution over status vectors. The probability of a layer-one
//! formula is computed in one memoized pass over its BDD:
//! `value(w) = (1 - ρ_i) · value(low) + ρ_i · value(high)`.
//!
//! Queries that assign to an intermediate event are evaluated on the derived
//! tree in which that module is a basic event. Probability vectors are always
//! given over the *original* tree; the derived entry of a module defaults to
//! the probability of its subtree, which is exact because the module shares
//! no basic events with the rest of the tree.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::bdd::{Bdd, BddError, BddManager, FrozenManager, Var};
use crate::fault_tree::{FaultTree, FaultTreeError, ProbVector, StatusVector};
use crate::logic::{well_formed, AnyFormula, Cmp, Connectives, Formula1, Formula2, Formula3, LogicError};
use crate::translate::{TranslateError, Translator};

/// Conditions with probability below this are treated as zero.
pub const ZERO_TOLERANCE: f64 = 1e-300;

pub const DEFAULT_EQ_TOLERANCE: f64 = 1e-9;

/// Default cap on the number of monomials of an extracted polynomial.
pub const DEFAULT_MONOMIAL_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbError {
    #[error("BDD mentions primed variable {0}")]
    PrimedVariablePresent(Var),
    #[error("probability vector has {got} entries but the tree has {expected} basic events")]
    LengthMismatch { expected: usize, got: usize },
    #[error("`{0}` is undefined: its condition has probability 0")]
    UndefinedConditional(String),
    #[error("polynomial has more than {0} monomials")]
    PolynomialTooLarge(usize),
    #[error(transparent)]
    Logic(#[from] LogicError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Tree(#[from] FaultTreeError),
    #[error(transparent)]
    Bdd(#[from] BddError),
}

/// A probability, or `Undefined` when the condition has probability zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalResult {
    Value(f64),
    Undefined,
}

impl EvalResult {
    pub fn value(self) -> Option<f64> {
        match self {
            EvalResult::Value(v) => Some(v),
            EvalResult::Undefined => None,
        }
    }
}

fn reject_primed(mgr: &BddManager, a: Bdd) -> Result<(), ProbError> {
    match mgr.support(a).into_iter().find(|v| v.is_primed()) {
        Some(v) => Err(ProbError::PrimedVariablePresent(v)),
        None => Ok(()),
    }
}

/// Probability that `a` holds when plain variable `i` is true with
/// probability `rho[i]`.
pub fn bdd_probability(mgr: &BddManager, a: Bdd, rho: &[f64]) -> Result<f64, ProbError> {
    reject_primed(mgr, a)?;
    if let Some(v) = mgr.support(a).into_iter().find(|v| v.be_index() >= rho.len()) {
        return Err(BddError::MissingAssignment(v).into());
    }
    Ok(probability_unchecked(mgr, a, rho))
}

fn probability_unchecked(mgr: &BddManager, a: Bdd, rho: &[f64]) -> f64 {
    fn rec(mgr: &BddManager, a: Bdd, rho: &[f64], memo: &mut HashMap<usize, f64>) -> f64 {
        let Some((x, low, high)) = mgr.branches(a) else {
            return if a.is_true() { 1.0 } else { 0.0 };
        };
        if let Some(&v) = memo.get(&a.node_index()) {
            return v;
        }
        let p = rho[x.be_index()];
        let v = (1.0 - p) * rec(mgr, low, rho, memo) + p * rec(mgr, high, rho, memo);
        memo.insert(a.node_index(), v);
        v
    }
    rec(mgr, a, rho, &mut HashMap::new())
}

/// Multilinear polynomial in the basic-event probabilities. A monomial is the
/// sorted list of its variable indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Vec<usize>, f64>,
}

impl Polynomial {
    pub fn constant(c: f64) -> Self {
        let mut p = Polynomial::default();
        p.add_term(Vec::new(), c);
        p
    }

    pub fn var(i: usize) -> Self {
        let mut p = Polynomial::default();
        p.add_term(vec![i], 1.0);
        p
    }

    fn add_term(&mut self, mono: Vec<usize>, c: f64) {
        let entry = self.terms.entry(mono).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.retain(|_, c| *c != 0.0);
        }
    }

    /// Monomials in lexicographic order of their index lists.
    pub fn terms(&self) -> impl Iterator<Item = (&[usize], f64)> {
        self.terms.iter().map(|(m, &c)| (m.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn eval(&self, rho: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| m.iter().fold(*c, |acc, &i| acc * rho[i]))
            .sum()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    /// Substitute the constant `c` for `x_i`.
    pub fn fix(&self, i: usize, c: f64) -> Polynomial {
        let mut out = Polynomial::default();
        for (m, &coef) in &self.terms {
            match m.iter().position(|&j| j == i) {
                Some(pos) => {
                    let mut mono = m.clone();
                    mono.remove(pos);
                    out.add_term(mono, coef * c);
                }
                None => out.add_term(m.clone(), coef),
            }
        }
        out
    }

    pub fn vars(&self) -> std::collections::BTreeSet<usize> {
        self.terms.keys().flatten().copied().collect()
    }

    /// Multiply by `x_i`, which must not occur in `self`.
    fn times_var(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::default();
        for (m, &c) in &self.terms {
            debug_assert!(!m.contains(&i));
            let mut mono = m.clone();
            let pos = mono.partition_point(|&j| j < i);
            mono.insert(pos, i);
            out.terms.insert(mono, c);
        }
        out
    }
}

/// The polynomial that [`bdd_probability`] evaluates, with the default
/// monomial cap.
pub fn symbolic_polynomial(mgr: &BddManager, a: Bdd) -> Result<Polynomial, ProbError> {
    symbolic_polynomial_capped(mgr, a, DEFAULT_MONOMIAL_CAP)
}

pub fn symbolic_polynomial_capped(mgr: &BddManager, a: Bdd, cap: usize) -> Result<Polynomial, ProbError> {
    reject_primed(mgr, a)?;
    fn rec(
        mgr: &BddManager,
        a: Bdd,
        cap: usize,
        memo: &mut HashMap<usize, Polynomial>,
    ) -> Result<Polynomial, ProbError> {
        let Some((x, low, high)) = mgr.branches(a) else {
            return Ok(if a.is_true() {
                Polynomial::constant(1.0)
            } else {
                Polynomial::default()
            });
        };
        if let Some(p) = memo.get(&a.node_index()) {
            return Ok(p.clone());
        }
        let l = rec(mgr, low, cap, memo)?;
        let h = rec(mgr, high, cap, memo)?;
        // (1 - x)·L + x·H = L + x·(H - L); x is above every variable of L, H
        let p = l.add(&h.sub(&l).times_var(x.be_index()));
        if p.len() > cap {
            return Err(ProbError::PolynomialTooLarge(cap));
        }
        memo.insert(a.node_index(), p.clone());
        Ok(p)
    }
    rec(mgr, a, cap, &mut HashMap::new())
}

/// Where the probability of a derived basic event comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// Entry `i` of the original probability vector.
    Basic(usize),
    /// A pruned module: the probability of its subtree, `bdd` living in the
    /// original tree's manager, over the listed original basic events.
    Module { bdd: Bdd, basics: Vec<usize> },
}

/// Original tree, derived tree, and the translated BDDs of one query.
#[derive(Debug, Clone)]
pub struct Model {
    original: FaultTree,
    derived: FaultTree,
    mgr: FrozenManager,
    orig_mgr: Option<FrozenManager>,
    sources: Vec<Source>,
}

impl Model {
    fn build<T>(
        ft: &FaultTree,
        formula: &AnyFormula,
        compile: impl FnOnce(&mut Translator) -> Result<T, ProbError>,
    ) -> Result<(Model, T), ProbError> {
        let rewrite = well_formed(formula, ft)?;
        let derived = rewrite.apply(ft)?;
        let mut tr = Translator::new(derived.clone());
        let out = compile(&mut tr)?;
        let mut orig = (!rewrite.is_identity()).then(|| Translator::new(ft.clone()));
        let mut sources = Vec::with_capacity(derived.num_basic());
        for &e in derived.basic_events() {
            let name = derived.name(e);
            match (&mut orig, rewrite.modules().iter().any(|m| m == name)) {
                (Some(otr), true) => {
                    let id = ft.require(name)?;
                    let mut basics: Vec<usize> =
                        ft.descendants(id).into_iter().filter_map(|d| ft.be_index(d)).collect();
                    basics.sort_unstable();
                    sources.push(Source::Module {
                        bdd: otr.translate_event(name)?,
                        basics,
                    });
                }
                _ => sources.push(Source::Basic(ft.be_index_of(name).expect("surviving basic event"))),
            }
        }
        let model = Model {
            original: ft.clone(),
            derived,
            mgr: tr.into_manager().freeze(),
            orig_mgr: orig.map(|t| t.into_manager().freeze()),
            sources,
        };
        Ok((model, out))
    }

    pub fn original(&self) -> &FaultTree {
        &self.original
    }

    /// The tree the query's BDDs are built over.
    pub fn derived(&self) -> &FaultTree {
        &self.derived
    }

    pub fn manager(&self) -> &BddManager {
        &self.mgr
    }

    /// Manager of the original tree's module BDDs, if any module was pruned.
    pub fn original_manager(&self) -> Option<&BddManager> {
        self.orig_mgr.as_deref()
    }

    pub fn sources(&self) -> &[Source] {
        &self.sources
    }

    /// Original basic events a derived variable depends on.
    pub fn original_dims(&self, derived_index: usize) -> Vec<usize> {
        match &self.sources[derived_index] {
            Source::Basic(i) => vec![*i],
            Source::Module { basics, .. } => basics.clone(),
        }
    }

    fn check_len(&self, got: usize) -> Result<(), ProbError> {
        let expected = self.original.num_basic();
        if got != expected {
            return Err(ProbError::LengthMismatch { expected, got });
        }
        Ok(())
    }

    /// Probabilities of the derived tree's basic events.
    pub fn derived_rho(&self, rho: &[f64]) -> Result<Vec<f64>, ProbError> {
        self.check_len(rho.len())?;
        Ok(self.derived_rho_unchecked(rho))
    }

    pub(crate) fn derived_rho_unchecked(&self, rho: &[f64]) -> Vec<f64> {
        self.sources
            .iter()
            .map(|s| match s {
                Source::Basic(i) => rho[*i],
                Source::Module { bdd, .. } => {
                    probability_unchecked(self.orig_mgr.as_ref().expect("module manager"), *bdd, rho)
                }
            })
            .collect()
    }

    /// Status of the derived tree's basic events; a module's bit is the value
    /// of its subtree.
    pub fn derived_bits(&self, b: &StatusVector) -> Result<StatusVector, ProbError> {
        self.check_len(b.len())?;
        let mut out = Vec::with_capacity(self.sources.len());
        for s in &self.sources {
            out.push(match s {
                Source::Basic(i) => b.get(*i),
                Source::Module { bdd, .. } => {
                    self.orig_mgr.as_ref().expect("module manager").eval_vector(*bdd, b)?
                }
            });
        }
        Ok(StatusVector(out))
    }

    pub fn probability(&self, a: Bdd, rho_derived: &[f64]) -> f64 {
        probability_unchecked(&self.mgr, a, rho_derived)
    }

    /// `P(num) / P(den)`, undefined for a zero denominator.
    pub fn ratio(&self, num: Bdd, den: Bdd, rho_derived: &[f64]) -> EvalResult {
        let d = self.probability(den, rho_derived);
        if d < ZERO_TOLERANCE {
            return EvalResult::Undefined;
        }
        EvalResult::Value(self.probability(num, rho_derived) / d)
    }
}

fn ratio_bdds(tr: &mut Translator, phi: &Formula1, cond: &Option<Formula1>) -> Result<(Bdd, Bdd), ProbError> {
    match cond {
        None => Ok((tr.translate_formula(phi)?, tr.manager().one())),
        Some(c) => {
            let num = tr.translate_formula(&phi.clone().and(c.clone()))?;
            Ok((num, tr.translate_formula(c)?))
        }
    }
}

fn derived_index(tr: &Translator, e: &str) -> Result<usize, ProbError> {
    tr.tree()
        .be_index_of(e)
        .ok_or_else(|| TranslateError::NotBasic(e.to_string()).into())
}

/// Layer-two formula with its probability atoms compiled to BDDs. Assignment
/// targets are indices into the derived tree's basic events.
#[derive(Debug, Clone, PartialEq)]
pub enum Prog2 {
    Not(Box<Prog2>),
    And(Box<Prog2>, Box<Prog2>),
    Pr {
        cmp: Cmp,
        p: f64,
        num: Bdd,
        den: Bdd,
        text: String,
    },
    SetP(Box<Prog2>, usize, f64),
    Idp {
        joint: Bdd,
        left: Bdd,
        right: Bdd,
    },
}

fn compile2(tr: &mut Translator, psi: &Formula2) -> Result<Prog2, ProbError> {
    Ok(match psi {
        Formula2::Not(a) => Prog2::Not(Box::new(compile2(tr, a)?)),
        Formula2::And(a, b) => Prog2::And(Box::new(compile2(tr, a)?), Box::new(compile2(tr, b)?)),
        Formula2::PrCmp { cmp, p, phi, cond } => {
            let (num, den) = ratio_bdds(tr, phi, cond)?;
            Prog2::Pr {
                cmp: *cmp,
                p: *p,
                num,
                den,
                text: psi.to_string(),
            }
        }
        Formula2::SetP(a, e, q) => Prog2::SetP(Box::new(compile2(tr, a)?), derived_index(tr, e)?, *q),
        Formula2::Idp(a, b) => Prog2::Idp {
            joint: tr.translate_formula(&a.clone().and(b.clone()))?,
            left: tr.translate_formula(a)?,
            right: tr.translate_formula(b)?,
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prog3 {
    Pr { num: Bdd, den: Bdd },
    SetP(Box<Prog3>, usize, f64),
}

fn compile3(tr: &mut Translator, xi: &Formula3) -> Result<Prog3, ProbError> {
    Ok(match xi {
        Formula3::PrVal { phi, cond } => {
            let (num, den) = ratio_bdds(tr, phi, cond)?;
            Prog3::Pr { num, den }
        }
        Formula3::SetP(a, e, q) => Prog3::SetP(Box::new(compile3(tr, a)?), derived_index(tr, e)?, *q),
    })
}

/// A compiled layer-one formula.
#[derive(Debug, Clone)]
pub struct Layer1 {
    model: Model,
    bdd: Bdd,
}

impl Layer1 {
    pub fn compile(ft: &FaultTree, phi: &Formula1) -> Result<Self, ProbError> {
        let (model, bdd) = Model::build(ft, &phi.clone().into(), |tr| Ok(tr.translate_formula(phi)?))?;
        Ok(Layer1 { model, bdd })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn bdd(&self) -> Bdd {
        self.bdd
    }

    /// `b̄ ⊨ φ` for a status vector over the original tree.
    pub fn check(&self, b: &StatusVector) -> Result<bool, ProbError> {
        let bits = self.model.derived_bits(b)?;
        Ok(self.model.manager().eval_vector(self.bdd, &bits)?)
    }

    /// All satisfying status vectors over the derived tree's basic events,
    /// in lexicographic order.
    pub fn satisfaction_set(&self) -> Result<Vec<StatusVector>, ProbError> {
        let vars: Vec<Var> = (0..self.model.derived().num_basic()).map(Var::plain).collect();
        let sats = self.model.manager().all_sat(self.bdd, &vars)?;
        Ok(sats.into_iter().map(StatusVector).collect())
    }
}

/// A compiled layer-two formula.
#[derive(Debug, Clone)]
pub struct Layer2 {
    model: Model,
    prog: Prog2,
}

impl Layer2 {
    pub fn compile(ft: &FaultTree, psi: &Formula2) -> Result<Self, ProbError> {
        let (model, prog) = Model::build(ft, &psi.clone().into(), |tr| compile2(tr, psi))?;
        Ok(Layer2 { model, prog })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn prog(&self) -> &Prog2 {
        &self.prog
    }

    /// `ρ̄ ⊨ ψ`. Equalities and independence hold up to `eq_tol`.
    pub fn check(&self, rho: &ProbVector, eq_tol: f64) -> Result<bool, ProbError> {
        let mut r = self.model.derived_rho(rho.as_slice())?;
        self.eval(&self.prog, &mut r, eq_tol)
    }

    fn eval(&self, prog: &Prog2, rho: &mut Vec<f64>, tol: f64) -> Result<bool, ProbError> {
        Ok(match prog {
            Prog2::Not(a) => !self.eval(a, rho, tol)?,
            Prog2::And(a, b) => self.eval(a, rho, tol)? && self.eval(b, rho, tol)?,
            Prog2::Pr { cmp, p, num, den, text } => match self.model.ratio(*num, *den, rho) {
                EvalResult::Value(v) => cmp.holds(v, *p, tol),
                EvalResult::Undefined => return Err(ProbError::UndefinedConditional(text.clone())),
            },
            Prog2::SetP(a, i, q) => {
                let old = std::mem::replace(&mut rho[*i], *q);
                let r = self.eval(a, rho, tol);
                rho[*i] = old;
                r?
            }
            Prog2::Idp { joint, left, right } => {
                let m = &self.model;
                let lhs = m.probability(*joint, rho);
                let rhs = m.probability(*left, rho) * m.probability(*right, rho);
                (lhs - rhs).abs() <= tol
            }
        })
    }
}

/// A compiled layer-three formula.
#[derive(Debug, Clone)]
pub struct Layer3 {
    model: Model,
    prog: Prog3,
}

impl Layer3 {
    pub fn compile(ft: &FaultTree, xi: &Formula3) -> Result<Self, ProbError> {
        let (model, prog) = Model::build(ft, &xi.clone().into(), |tr| compile3(tr, xi))?;
        Ok(Layer3 { model, prog })
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn value(&self, rho: &ProbVector) -> Result<EvalResult, ProbError> {
        let mut r = self.model.derived_rho(rho.as_slice())?;
        let mut prog = &self.prog;
        while let Prog3::SetP(inner, i, q) = prog {
            // the innermost assignment to an index wins
            r[*i] = *q;
            prog = inner;
        }
        let Prog3::Pr { num, den } = prog else { unreachable!() };
        Ok(self.model.ratio(*num, *den, &r))
    }
}

/// `Pr(φ | cond)` at `ρ̄`; no condition means the always-true one.
pub fn conditional_probability(
    ft: &FaultTree,
    phi: &Formula1,
    cond: Option<&Formula1>,
    rho: &ProbVector,
) -> Result<EvalResult, ProbError> {
    let xi = Formula3::PrVal {
        phi: phi.clone(),
        cond: cond.cloned(),
    };
    Layer3::compile(ft, &xi)?.value(rho)
}

pub fn check_layer1(ft: &FaultTree, phi: &Formula1, b: &StatusVector) -> Result<bool, ProbError> {
    Layer1::compile(ft, phi)?.check(b)
}

pub fn satisfaction_set(ft: &FaultTree, phi: &Formula1) -> Result<Vec<StatusVector>, ProbError> {
    Layer1::compile(ft, phi)?.satisfaction_set()
}

pub fn check_layer2(ft: &FaultTree, psi: &Formula2, rho: &ProbVector, eq_tol: f64) -> Result<bool, ProbError> {
    Layer2::compile(ft, psi)?.check(rho, eq_tol)
}

pub fn eval_layer3(ft: &FaultTree, xi: &Formula3, rho: &ProbVector) -> Result<EvalResult, ProbError> {
    Layer3::compile(ft, xi)?.value(rho)
}
