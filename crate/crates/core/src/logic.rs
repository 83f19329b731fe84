//! Abstract syntax of the three formula layers.
//!
//! * [`Formula1`] talks about status vectors: atoms, negation, conjunction,
//!   fixing an event to 0 or 1, and minimal cut sets.
//! * [`Formula2`] talks about probability vectors: probability thresholds,
//!   independence and probability assignments.
//! * [`Formula3`] denotes a single probability value.
//!
//! Events are referenced by name. [`well_formed`] resolves names against a
//! tree and decides which intermediate events have to be pruned into basic
//! events before translation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::fault_tree::{FaultTree, FaultTreeError};

/// Largest operand count accepted by [`sugar_vot`].
pub const VOT_MAX_ARITY: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IllegalReason {
    NotAModule,
    DescendantPresent(String),
}

impl fmt::Display for IllegalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IllegalReason::NotAModule => f.write_str("it is not a module"),
            IllegalReason::DescendantPresent(d) => write!(f, "its descendant `{d}` occurs in the formula"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogicError {
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("cannot assign a value to `{event}`: {reason}")]
    IllegalAssignment { event: String, reason: IllegalReason },
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("`{0}` is assigned twice in one mapping")]
    RepeatedTarget(String),
    #[error("operands belong to different layers ({0} and {1})")]
    LayerMismatch(u8, u8),
    #[error("voting operator needs 1 to {max} operands and k <= N (got k={k}, N={n})", max = VOT_MAX_ARITY)]
    ArityError { k: usize, n: usize },
}

/// Comparison operator of a probability threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    /// `lhs ⋈ rhs`, with `=` read up to `tol`.
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => (lhs - rhs).abs() <= tol,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Layer one: properties of a status vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula1 {
    Atom(String),
    Not(Box<Formula1>),
    And(Box<Formula1>, Box<Formula1>),
    /// `φ[e ↦ 0]`
    Set0(Box<Formula1>, String),
    /// `φ[e ↦ 1]`
    Set1(Box<Formula1>, String),
    Mcs(Box<Formula1>),
}

/// Layer two: properties of a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula2 {
    Not(Box<Formula2>),
    And(Box<Formula2>, Box<Formula2>),
    /// `Pr_{cmp p}(φ | cond)`; no condition means the always-true one.
    PrCmp {
        cmp: Cmp,
        p: f64,
        phi: Formula1,
        cond: Option<Formula1>,
    },
    /// `ψ[e ↦ q]`
    SetP(Box<Formula2>, String, f64),
    Idp(Formula1, Formula1),
}

/// Layer three: a probability value.
#[derive(Debug, Clone, PartialEq)]
pub enum Formula3 {
    PrVal { phi: Formula1, cond: Option<Formula1> },
    SetP(Box<Formula3>, String, f64),
}

/// Formula of any layer, for code that handles all three uniformly.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyFormula {
    L1(Formula1),
    L2(Formula2),
    L3(Formula3),
}

impl AnyFormula {
    pub fn layer(&self) -> u8 {
        match self {
            AnyFormula::L1(_) => 1,
            AnyFormula::L2(_) => 2,
            AnyFormula::L3(_) => 3,
        }
    }
}

impl From<Formula1> for AnyFormula {
    fn from(f: Formula1) -> Self {
        AnyFormula::L1(f)
    }
}

impl From<Formula2> for AnyFormula {
    fn from(f: Formula2) -> Self {
        AnyFormula::L2(f)
    }
}

impl From<Formula3> for AnyFormula {
    fn from(f: Formula3) -> Self {
        AnyFormula::L3(f)
    }
}

/// Boolean connectives shared by layers one and two. The derived ones expand
/// into negation and conjunction only.
pub trait Connectives: Sized + Clone {
    fn not(self) -> Self;
    fn and(self, other: Self) -> Self;

    fn or(self, other: Self) -> Self {
        self.not().and(other.not()).not()
    }

    fn implies(self, other: Self) -> Self {
        self.and(other.not()).not()
    }

    fn iff(self, other: Self) -> Self {
        self.clone().implies(other.clone()).and(other.implies(self))
    }

    fn xor(self, other: Self) -> Self {
        self.iff(other).not()
    }
}

impl Connectives for Formula1 {
    fn not(self) -> Self {
        Formula1::Not(Box::new(self))
    }

    fn and(self, other: Self) -> Self {
        Formula1::And(Box::new(self), Box::new(other))
    }
}

impl Connectives for Formula2 {
    fn not(self) -> Self {
        Formula2::Not(Box::new(self))
    }

    fn and(self, other: Self) -> Self {
        Formula2::And(Box::new(self), Box::new(other))
    }
}

impl Formula1 {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula1::Atom(name.into())
    }

    pub fn set0(self, e: impl Into<String>) -> Self {
        Formula1::Set0(Box::new(self), e.into())
    }

    pub fn set1(self, e: impl Into<String>) -> Self {
        Formula1::Set1(Box::new(self), e.into())
    }

    pub fn set(self, e: impl Into<String>, value: bool) -> Self {
        if value {
            self.set1(e)
        } else {
            self.set0(e)
        }
    }

    pub fn mcs(self) -> Self {
        Formula1::Mcs(Box::new(self))
    }

    /// Apply several Boolean assignments, left to right. Targets must differ.
    pub fn with_mappings(self, mappings: &[(String, bool)]) -> Result<Self, LogicError> {
        distinct_targets(mappings.iter().map(|(e, _)| e))?;
        Ok(mappings.iter().fold(self, |f, (e, v)| f.set(e.clone(), *v)))
    }

    fn collect(&self, names: &mut Names) {
        match self {
            Formula1::Atom(e) => names.mention(e),
            Formula1::Not(a) | Formula1::Mcs(a) => a.collect(names),
            Formula1::And(a, b) => {
                a.collect(names);
                b.collect(names);
            }
            Formula1::Set0(a, e) | Formula1::Set1(a, e) => {
                a.collect(names);
                names.target(e);
            }
        }
    }
}

impl Formula2 {
    pub fn pr(cmp: Cmp, p: f64, phi: Formula1) -> Self {
        Formula2::PrCmp {
            cmp,
            p,
            phi,
            cond: None,
        }
    }

    pub fn pr_given(cmp: Cmp, p: f64, phi: Formula1, cond: Formula1) -> Self {
        Formula2::PrCmp {
            cmp,
            p,
            phi,
            cond: Some(cond),
        }
    }

    pub fn idp(a: Formula1, b: Formula1) -> Self {
        Formula2::Idp(a, b)
    }

    pub fn setp(self, e: impl Into<String>, q: f64) -> Self {
        Formula2::SetP(Box::new(self), e.into(), q)
    }

    /// `ψ[e1 ↦ q1, e2 ↦ q2, ...]` as nested assignments, left to right.
    pub fn with_mappings(self, mappings: &[(String, f64)]) -> Result<Self, LogicError> {
        distinct_targets(mappings.iter().map(|(e, _)| e))?;
        Ok(mappings.iter().fold(self, |f, (e, q)| f.setp(e.clone(), *q)))
    }

    fn collect(&self, names: &mut Names) {
        match self {
            Formula2::Not(a) => a.collect(names),
            Formula2::And(a, b) => {
                a.collect(names);
                b.collect(names);
            }
            Formula2::PrCmp { p, phi, cond, .. } => {
                names.prob(*p);
                phi.collect(names);
                if let Some(c) = cond {
                    c.collect(names);
                }
            }
            Formula2::SetP(a, e, q) => {
                a.collect(names);
                names.target(e);
                names.prob(*q);
            }
            Formula2::Idp(a, b) => {
                a.collect(names);
                b.collect(names);
            }
        }
    }
}

impl Formula3 {
    pub fn pr(phi: Formula1) -> Self {
        Formula3::PrVal { phi, cond: None }
    }

    pub fn pr_given(phi: Formula1, cond: Formula1) -> Self {
        Formula3::PrVal {
            phi,
            cond: Some(cond),
        }
    }

    pub fn setp(self, e: impl Into<String>, q: f64) -> Self {
        Formula3::SetP(Box::new(self), e.into(), q)
    }

    pub fn with_mappings(self, mappings: &[(String, f64)]) -> Result<Self, LogicError> {
        distinct_targets(mappings.iter().map(|(e, _)| e))?;
        Ok(mappings.iter().fold(self, |f, (e, q)| f.setp(e.clone(), *q)))
    }

    fn collect(&self, names: &mut Names) {
        match self {
            Formula3::PrVal { phi, cond } => {
                phi.collect(names);
                if let Some(c) = cond {
                    c.collect(names);
                }
            }
            Formula3::SetP(a, e, q) => {
                a.collect(names);
                names.target(e);
                names.prob(*q);
            }
        }
    }
}

fn distinct_targets<'a>(targets: impl Iterator<Item = &'a String>) -> Result<(), LogicError> {
    let mut seen = BTreeSet::new();
    for t in targets {
        if !seen.insert(t) {
            return Err(LogicError::RepeatedTarget(t.clone()));
        }
    }
    Ok(())
}

/// `θ1 ∨ θ2` for two formulae of the same layer.
pub fn sugar_or(a: AnyFormula, b: AnyFormula) -> Result<AnyFormula, LogicError> {
    binary(a, b, Connectives::or, Connectives::or)
}

pub fn sugar_implies(a: AnyFormula, b: AnyFormula) -> Result<AnyFormula, LogicError> {
    binary(a, b, Connectives::implies, Connectives::implies)
}

pub fn sugar_iff(a: AnyFormula, b: AnyFormula) -> Result<AnyFormula, LogicError> {
    binary(a, b, Connectives::iff, Connectives::iff)
}

pub fn sugar_xor(a: AnyFormula, b: AnyFormula) -> Result<AnyFormula, LogicError> {
    binary(a, b, Connectives::xor, Connectives::xor)
}

fn binary(
    a: AnyFormula,
    b: AnyFormula,
    f1: fn(Formula1, Formula1) -> Formula1,
    f2: fn(Formula2, Formula2) -> Formula2,
) -> Result<AnyFormula, LogicError> {
    match (a, b) {
        (AnyFormula::L1(a), AnyFormula::L1(b)) => Ok(AnyFormula::L1(f1(a, b))),
        (AnyFormula::L2(a), AnyFormula::L2(b)) => Ok(AnyFormula::L2(f2(a, b))),
        (a, b) => Err(LogicError::LayerMismatch(a.layer(), b.layer())),
    }
}

/// Minimal path sets: `MCS(¬φ)`.
pub fn sugar_mps(phi: Formula1) -> Formula1 {
    phi.not().mcs()
}

/// Superfluousness: `IDP(e, top)`.
pub fn sugar_sup(e: &str, ft: &FaultTree) -> Result<Formula2, LogicError> {
    if ft.event(e).is_none() {
        return Err(LogicError::UnknownEvent(e.to_string()));
    }
    Ok(Formula2::idp(Formula1::atom(e), Formula1::atom(ft.name(ft.top()))))
}

/// `Vot_{cmp k}(φ1, …, φN)`: the disjunction, over every index set `U` with
/// `|U| cmp k`, of the conjunction of `φu` for `u ∈ U` and `¬φu` otherwise.
/// An empty family is false.
pub fn sugar_vot(cmp: Cmp, k: usize, phis: &[Formula1]) -> Result<Formula1, LogicError> {
    let n = phis.len();
    if n == 0 || k > n || n > VOT_MAX_ARITY {
        return Err(LogicError::ArityError { k, n });
    }
    let terms: Vec<Formula1> = (0u32..1 << n)
        .filter(|u| cmp.holds(u.count_ones() as f64, k as f64, 0.0))
        .map(|u| {
            let lits: Vec<Formula1> = phis
                .iter()
                .enumerate()
                .map(|(i, phi)| {
                    if u >> i & 1 == 1 {
                        phi.clone()
                    } else {
                        phi.clone().not()
                    }
                })
                .collect();
            balanced(lits, Connectives::and)
        })
        .collect();
    if terms.is_empty() {
        let phi = phis[0].clone();
        return Ok(phi.clone().and(phi.not()));
    }
    Ok(balanced(terms, Connectives::or))
}

/// Fold pairwise into a balanced tree, keeping nesting depth logarithmic.
fn balanced(mut items: Vec<Formula1>, op: fn(Formula1, Formula1) -> Formula1) -> Formula1 {
    while items.len() > 1 {
        let mut next = Vec::with_capacity(items.len().div_ceil(2));
        let mut it = items.into_iter();
        while let Some(a) = it.next() {
            next.push(match it.next() {
                Some(b) => op(a, b),
                None => a,
            });
        }
        items = next;
    }
    items.pop().expect("non-empty")
}

#[derive(Default)]
struct Names {
    mentioned: Vec<String>,
    targets: Vec<String>,
    probs: Vec<f64>,
}

impl Names {
    fn mention(&mut self, e: &str) {
        self.mentioned.push(e.to_string());
    }

    fn target(&mut self, e: &str) {
        self.mentioned.push(e.to_string());
        self.targets.push(e.to_string());
    }

    fn prob(&mut self, p: f64) {
        self.probs.push(p);
    }
}

/// Intermediate events that a well-formed formula assigns to and that must be
/// pruned into basic events before translation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Rewrite {
    modules: Vec<String>,
}

impl Rewrite {
    pub fn modules(&self) -> &[String] {
        &self.modules
    }

    pub fn is_identity(&self) -> bool {
        self.modules.is_empty()
    }

    /// The derived tree with every recorded module pruned. The input tree is
    /// left unchanged.
    pub fn apply(&self, ft: &FaultTree) -> Result<FaultTree, FaultTreeError> {
        let mut derived = ft.clone();
        for m in &self.modules {
            let e = derived.require(m)?;
            derived = derived.prune_module(e)?;
        }
        Ok(derived)
    }
}

/// Check a formula against `ft`: every name exists, every probability lies
/// in `[0, 1]`, and every assignment target is a basic event or a module
/// none of whose descendants is mentioned anywhere in the formula.
pub fn well_formed(formula: &AnyFormula, ft: &FaultTree) -> Result<Rewrite, LogicError> {
    let mut names = Names::default();
    match formula {
        AnyFormula::L1(f) => f.collect(&mut names),
        AnyFormula::L2(f) => f.collect(&mut names),
        AnyFormula::L3(f) => f.collect(&mut names),
    }
    for e in &names.mentioned {
        if ft.event(e).is_none() {
            return Err(LogicError::UnknownEvent(e.clone()));
        }
    }
    if let Some(&p) = names.probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(LogicError::ProbabilityOutOfRange(p));
    }
    let mentioned: BTreeSet<_> = names.mentioned.iter().filter_map(|n| ft.event(n)).collect();
    let mut rewrite = Rewrite::default();
    for t in &names.targets {
        let e = ft.event(t).expect("checked above");
        if ft.is_basic(e) || rewrite.modules.contains(t) {
            continue;
        }
        let illegal = |reason| LogicError::IllegalAssignment {
            event: t.clone(),
            reason,
        };
        if !ft.is_module(e) {
            return Err(illegal(IllegalReason::NotAModule));
        }
        if let Some(&d) = ft.descendants(e).intersection(&mentioned).next() {
            return Err(illegal(IllegalReason::DescendantPresent(ft.name(d).to_string())));
        }
        rewrite.modules.push(t.clone());
    }
    Ok(rewrite)
}

fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    let plain = !name.is_empty()
        && name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '/')
        && !matches!(
            name,
            "and" | "or" | "not" | "MCS" | "MPS" | "IDP" | "SUP" | "P" | "true" | "false"
        );
    if plain {
        f.write_str(name)
    } else {
        write!(f, "\"{name}\"")
    }
}

impl fmt::Display for Formula1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula1::Atom(e) => write_name(f, e),
            Formula1::Not(a) => write!(f, "not {a}"),
            Formula1::And(a, b) => write!(f, "({a} and {b})"),
            Formula1::Set0(a, e) => {
                write!(f, "({a})[")?;
                write_name(f, e)?;
                f.write_str(" -> 0]")
            }
            Formula1::Set1(a, e) => {
                write!(f, "({a})[")?;
                write_name(f, e)?;
                f.write_str(" -> 1]")
            }
            Formula1::Mcs(a) => write!(f, "MCS[{a}]"),
        }
    }
}

fn write_pr(f: &mut fmt::Formatter<'_>, phi: &Formula1, cond: &Option<Formula1>) -> fmt::Result {
    match cond {
        Some(c) => write!(f, "P[{phi} | {c}]"),
        None => write!(f, "P[{phi}]"),
    }
}

impl fmt::Display for Formula2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula2::Not(a) => write!(f, "not {a}"),
            Formula2::And(a, b) => write!(f, "({a} and {b})"),
            Formula2::PrCmp { cmp, p, phi, cond } => {
                write_pr(f, phi, cond)?;
                write!(f, " {cmp} {p}")
            }
            Formula2::SetP(a, e, q) => {
                write!(f, "({a})[")?;
                write_name(f, e)?;
                write!(f, " -> {q}]")
            }
            Formula2::Idp(a, b) => write!(f, "IDP[{a}, {b}]"),
        }
    }
}

impl fmt::Display for Formula3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula3::PrVal { phi, cond } => write_pr(f, phi, cond),
            Formula3::SetP(a, e, q) => {
                write!(f, "({a})[")?;
                write_name(f, e)?;
                write!(f, " -> {q}]")
            }
        }
    }
}

impl fmt::Display for AnyFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyFormula::L1(a) => a.fmt(f),
            AnyFormula::L2(a) => a.fmt(f),
            AnyFormula::L3(a) => a.fmt(f),
        }
    }
}
