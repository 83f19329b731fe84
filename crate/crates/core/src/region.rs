//! Parameter-space analysis of layer-two formulae.
//!
//! A conditional probability `P(φ ∧ φ′) / P(φ′)` is a ratio of multilinear
//! polynomials, so on an axis-aligned box it attains its extrema at the
//! box's vertices. [`Partitioner`] uses this to classify boxes of the unit
//! cube as satisfying (`yes`), violating (`no`) or undecided (`maybe`),
//! splitting undecided boxes at their midpoints until the undecided volume
//! drops below `ε`.
//!
//! Only the dimensions the query depends on are varied. Every other basic
//! event is irrelevant to the result and is reported with the filler value
//! [`FILLER`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::bdd::Bdd;
use crate::fault_tree::{FaultTree, ProbVector};
use crate::logic::{Cmp, Formula1, Formula2};
use crate::prob::{symbolic_polynomial_capped, EvalResult, Layer2, Model, Polynomial, ProbError, Prog2, Source};

pub const DEFAULT_EPSILON: f64 = 0.01;
pub const DEFAULT_DIM_CAP: usize = 20;
pub const DEFAULT_MAX_BOXES: usize = 1_000_000;
/// Boxes narrower than this are not split any further.
pub const DEFAULT_MIN_WIDTH: f64 = 1.0 / (1u64 << 20) as f64;
/// Value reported for basic events the query does not depend on.
pub const FILLER: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("query depends on {dims} basic events, more than the cap of {cap}")]
    DimensionLimit { dims: usize, cap: usize },
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),
    #[error("box gives no interval for `{0}`")]
    UnboundedDimension(String),
    #[error("invalid interval [{0}, {1}]")]
    InvalidInterval(f64, f64),
    #[error(transparent)]
    Prob(#[from] ProbError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionConfig {
    pub epsilon: f64,
    pub eq_tolerance: f64,
    pub dim_cap: usize,
    pub max_boxes: usize,
    pub min_width: f64,
}

impl Default for RegionConfig {
    fn default() -> Self {
        RegionConfig {
            epsilon: DEFAULT_EPSILON,
            eq_tolerance: crate::prob::DEFAULT_EQ_TOLERANCE,
            dim_cap: DEFAULT_DIM_CAP,
            max_boxes: DEFAULT_MAX_BOXES,
            min_width: DEFAULT_MIN_WIDTH,
        }
    }
}

impl RegionConfig {
    pub fn with_epsilon(epsilon: f64) -> Self {
        RegionConfig {
            epsilon,
            ..RegionConfig::default()
        }
    }
}

/// Closed axis-aligned box over the dimensions of a [`RegionQuery`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParamBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl ParamBox {
    pub fn unit(d: usize) -> Self {
        ParamBox {
            lower: vec![0.0; d],
            upper: vec![1.0; d],
        }
    }

    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, RegionError> {
        assert_eq!(lower.len(), upper.len());
        for (&l, &u) in lower.iter().zip(&upper) {
            if !(0.0 <= l && l <= u && u <= 1.0) {
                return Err(RegionError::InvalidInterval(l, u));
            }
        }
        Ok(ParamBox { lower, upper })
    }

    pub fn dims(&self) -> usize {
        self.lower.len()
    }

    pub fn volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).product()
    }

    pub fn max_width(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).fold(0.0, f64::max)
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(x, (l, u))| l <= x && x <= u)
    }

    /// Vertex selected by the bits of `mask` (bit `i` set: upper bound).
    pub fn vertex(&self, mask: u64) -> Vec<f64> {
        (0..self.dims())
            .map(|i| if mask >> i & 1 == 1 { self.upper[i] } else { self.lower[i] })
            .collect()
    }

    /// The `2^d` children obtained by halving every dimension.
    pub fn split(&self) -> Vec<ParamBox> {
        let d = self.dims();
        let mid: Vec<f64> = self.lower.iter().zip(&self.upper).map(|(l, u)| (l + u) / 2.0).collect();
        (0..1u64 << d)
            .map(|mask| {
                let mut lower = Vec::with_capacity(d);
                let mut upper = Vec::with_capacity(d);
                for (i, &m) in mid.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        lower.push(m);
                        upper.push(self.upper[i]);
                    } else {
                        lower.push(self.lower[i]);
                        upper.push(m);
                    }
                }
                ParamBox { lower, upper }
            })
            .collect()
    }
}

/// Three-valued classification of a box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    /// `undefined` is set when some vertex has a zero-probability condition.
    Maybe { undefined: bool },
}

impl Verdict {
    fn not(self) -> Verdict {
        match self {
            Verdict::Yes => Verdict::No,
            Verdict::No => Verdict::Yes,
            m => m,
        }
    }

    fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::No, _) | (_, Verdict::No) => Verdict::No,
            (Verdict::Yes, Verdict::Yes) => Verdict::Yes,
            (a, b) => Verdict::Maybe {
                undefined: matches!(a, Verdict::Maybe { undefined: true })
                    || matches!(b, Verdict::Maybe { undefined: true }),
            },
        }
    }
}

#[derive(Debug, Clone)]
enum AtomKind {
    Pr { cmp: Cmp, p: f64, num: Bdd, den: Bdd },
    Idp { joint: Bdd, left: Bdd, right: Bdd },
}

#[derive(Debug, Clone)]
struct Atom {
    kind: AtomKind,
    /// Assignments in scope, outermost first.
    overrides: Vec<(usize, f64)>,
    /// Positions in the query's dimension list this atom depends on.
    dims: Vec<usize>,
}

#[derive(Debug, Clone)]
enum Shape {
    Not(Box<Shape>),
    And(Box<Shape>, Box<Shape>),
    Atom(usize),
}

/// A layer-two formula prepared for box classification.
#[derive(Debug, Clone)]
pub struct RegionQuery {
    layer2: Layer2,
    dims: Vec<usize>,
    dim_names: Vec<String>,
    atoms: Vec<Atom>,
    shape: Shape,
    eq_tolerance: f64,
    opaque_equalities: bool,
}

impl RegionQuery {
    pub fn new(ft: &FaultTree, psi: &Formula2, cfg: &RegionConfig) -> Result<Self, RegionError> {
        let layer2 = Layer2::compile(ft, psi)?;
        let mut raw = Vec::new();
        let shape = flatten(layer2.prog(), &mut Vec::new(), &mut raw);
        let model = layer2.model();
        let atom_dims: Vec<BTreeSet<usize>> = raw
            .iter()
            .map(|(kind, overrides): &(AtomKind, Vec<(usize, f64)>)| {
                let bdds = match kind {
                    AtomKind::Pr { num, den, .. } => vec![*num, *den],
                    AtomKind::Idp { joint, left, right } => vec![*joint, *left, *right],
                };
                let mut out = BTreeSet::new();
                for b in bdds {
                    for v in model.manager().support(b) {
                        let i = v.be_index();
                        if !overrides.iter().any(|&(j, _)| j == i) {
                            out.extend(model.original_dims(i));
                        }
                    }
                }
                out
            })
            .collect();
        let dims: Vec<usize> = atom_dims.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if dims.len() > cfg.dim_cap {
            return Err(RegionError::DimensionLimit {
                dims: dims.len(),
                cap: cfg.dim_cap,
            });
        }
        let atoms = raw
            .into_iter()
            .zip(atom_dims)
            .map(|((kind, overrides), ds)| Atom {
                kind,
                overrides,
                dims: ds.iter().map(|d| dims.binary_search(d).expect("dimension listed")).collect(),
            })
            .collect();
        let ft = model.original();
        let dim_names = dims.iter().map(|&i| ft.name(ft.basic_events()[i]).to_string()).collect();
        Ok(RegionQuery {
            layer2,
            dims,
            dim_names,
            atoms,
            shape,
            eq_tolerance: cfg.eq_tolerance,
            opaque_equalities: false,
        })
    }

    /// `Pr_{cmp p}(φ | cond)` as a region query.
    pub fn conditional(
        ft: &FaultTree,
        phi: &Formula1,
        cond: Option<&Formula1>,
        cmp: Cmp,
        p: f64,
        cfg: &RegionConfig,
    ) -> Result<Self, RegionError> {
        let psi = Formula2::PrCmp {
            cmp,
            p,
            phi: phi.clone(),
            cond: cond.cloned(),
        };
        RegionQuery::new(ft, &psi, cfg)
    }

    /// Original basic-event indices of the varied dimensions, ascending.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim_names(&self) -> &[String] {
        &self.dim_names
    }

    pub fn layer2(&self) -> &Layer2 {
        &self.layer2
    }

    fn model(&self) -> &Model {
        self.layer2.model()
    }

    /// Full probability vector with the varied dimensions set to `coords`.
    pub fn point(&self, coords: &[f64]) -> ProbVector {
        let mut v = vec![FILLER; self.model().original().num_basic()];
        for (&d, &x) in self.dims.iter().zip(coords) {
            v[d] = x;
        }
        ProbVector::new(v).expect("coordinates lie in the unit cube")
    }

    /// Check `ψ` at a point of the varied dimensions.
    pub fn check_point(&self, coords: &[f64]) -> Result<bool, RegionError> {
        Ok(self.layer2.check(&self.point(coords), self.eq_tolerance)?)
    }

    fn derived_at(&self, atom: &Atom, base: &mut [f64], bx: &ParamBox, mask: u64) -> Vec<f64> {
        for (bit, &pos) in atom.dims.iter().enumerate() {
            base[self.dims[pos]] = if mask >> bit & 1 == 1 { bx.upper[pos] } else { bx.lower[pos] };
        }
        let mut r = self.model().derived_rho_unchecked(base);
        for &(i, q) in &atom.overrides {
            r[i] = q;
        }
        r
    }

    /// Vertex extrema of the atom's value, `None` if a vertex is undefined.
    fn atom_extrema(&self, atom: &Atom, bx: &ParamBox, f: impl Fn(&[f64]) -> EvalResult) -> Option<(f64, f64)> {
        let mut base = vec![FILLER; self.model().original().num_basic()];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for mask in 0..1u64 << atom.dims.len() {
            let r = self.derived_at(atom, &mut base, bx, mask);
            let v = f(&r).value()?;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Some((lo, hi))
    }

    /// Minimum and maximum of the first probability atom over `bx`; `None`
    /// when some vertex has a zero-probability condition.
    pub fn extrema(&self, bx: &ParamBox) -> Option<(f64, f64)> {
        let atom = self
            .atoms
            .iter()
            .find(|a| matches!(a.kind, AtomKind::Pr { .. }))
            .expect("query has a probability atom");
        let AtomKind::Pr { num, den, .. } = atom.kind else { unreachable!() };
        self.atom_extrema(atom, bx, |r| self.model().ratio(num, den, r))
    }

    fn classify_atom(&self, atom: &Atom, bx: &ParamBox) -> Verdict {
        let tol = self.eq_tolerance;
        let m = self.model();
        match atom.kind {
            AtomKind::Pr { cmp, p, num, den } => {
                if cmp == Cmp::Eq && self.opaque_equalities {
                    return Verdict::Maybe { undefined: false };
                }
                let Some((lo, hi)) = self.atom_extrema(atom, bx, |r| m.ratio(num, den, r)) else {
                    return Verdict::Maybe { undefined: true };
                };
                let (yes, no) = match cmp {
                    Cmp::Ge => (p <= lo, p > hi),
                    Cmp::Gt => (p < lo, p >= hi),
                    Cmp::Le => (hi <= p, lo > p),
                    Cmp::Lt => (hi < p, lo >= p),
                    Cmp::Eq => (false, p < lo - tol || p > hi + tol),
                };
                if yes {
                    Verdict::Yes
                } else if no {
                    Verdict::No
                } else {
                    Verdict::Maybe { undefined: false }
                }
            }
            AtomKind::Idp { joint, left, right } => {
                if self.opaque_equalities {
                    return Verdict::Maybe { undefined: false };
                }
                let range = |b: Bdd| {
                    self.atom_extrema(atom, bx, |r| EvalResult::Value(m.probability(b, r)))
                        .expect("unconditional probabilities are defined")
                };
                let (j, l, r) = (range(joint), range(left), range(right));
                // interval bounds on P(joint) - P(left)·P(right)
                let lo = j.0 - l.1 * r.1;
                let hi = j.1 - l.0 * r.0;
                if 0.0 < lo - tol || 0.0 > hi + tol {
                    Verdict::No
                } else {
                    Verdict::Maybe { undefined: false }
                }
            }
        }
    }

    pub fn classify(&self, bx: &ParamBox) -> Verdict {
        self.classify_shape(&self.shape, bx)
    }

    fn classify_shape(&self, shape: &Shape, bx: &ParamBox) -> Verdict {
        match shape {
            Shape::Not(a) => self.classify_shape(a, bx).not(),
            Shape::And(a, b) => {
                let va = self.classify_shape(a, bx);
                if va == Verdict::No {
                    return va;
                }
                va.and(self.classify_shape(b, bx))
            }
            Shape::Atom(i) => self.classify_atom(&self.atoms[*i], bx),
        }
    }

    fn all_atoms_opaque(&self) -> bool {
        self.opaque_equalities
            && self.atoms.iter().all(|a| match a.kind {
                AtomKind::Pr { cmp, .. } => cmp == Cmp::Eq,
                AtomKind::Idp { .. } => true,
            })
    }
}

fn flatten(prog: &Prog2, scope: &mut Vec<(usize, f64)>, atoms: &mut Vec<(AtomKind, Vec<(usize, f64)>)>) -> Shape {
    match prog {
        Prog2::Not(a) => Shape::Not(Box::new(flatten(a, scope, atoms))),
        Prog2::And(a, b) => {
            let a = flatten(a, scope, atoms);
            Shape::And(Box::new(a), Box::new(flatten(b, scope, atoms)))
        }
        Prog2::SetP(a, i, q) => {
            scope.push((*i, *q));
            let s = flatten(a, scope, atoms);
            scope.pop();
            s
        }
        Prog2::Pr { cmp, p, num, den, .. } => {
            atoms.push((
                AtomKind::Pr {
                    cmp: *cmp,
                    p: *p,
                    num: *num,
                    den: *den,
                },
                scope.clone(),
            ));
            Shape::Atom(atoms.len() - 1)
        }
        Prog2::Idp { joint, left, right } => {
            atoms.push((
                AtomKind::Idp {
                    joint: *joint,
                    left: *left,
                    right: *right,
                },
                scope.clone(),
            ));
            Shape::Atom(atoms.len() - 1)
        }
    }
}

/// `Pr(φ | cond)` extrema over a box given as `(name, lower, upper)` per
/// basic event. Every event the query depends on needs an interval.
pub fn box_extrema(
    ft: &FaultTree,
    phi: &Formula1,
    cond: Option<&Formula1>,
    bounds: &[(&str, f64, f64)],
    dim_cap: usize,
) -> Result<Option<(f64, f64)>, RegionError> {
    let cfg = RegionConfig {
        dim_cap,
        ..RegionConfig::default()
    };
    let q = RegionQuery::conditional(ft, phi, cond, Cmp::Ge, 0.0, &cfg)?;
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for name in q.dim_names() {
        let &(_, l, u) = bounds
            .iter()
            .find(|(n, _, _)| n == name)
            .ok_or_else(|| RegionError::UnboundedDimension(name.clone()))?;
        lower.push(l);
        upper.push(u);
    }
    let bx = ParamBox::new(lower, upper)?;
    Ok(q.extrema(&bx))
}

/// Result of a partition run. Boxes range over [`Partition::dim_names`].
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub dim_names: Vec<String>,
    pub epsilon: f64,
    pub yes: Vec<ParamBox>,
    pub no: Vec<ParamBox>,
    pub maybe: Vec<ParamBox>,
    /// Undecided boxes at the minimum width with a zero-probability condition
    /// at some vertex. They are also listed in `maybe`.
    pub undefined_boxes: Vec<ParamBox>,
    pub vol_yes: f64,
    pub vol_no: f64,
    pub vol_maybe: f64,
    /// False if the box budget ran out or undecided volume above `ε` could not
    /// be split any further.
    pub complete: bool,
}

#[derive(Debug, Clone)]
struct Entry {
    vol: f64,
    bx: ParamBox,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // largest volume first, then the lexicographically smallest lower corner
    fn cmp(&self, other: &Self) -> Ordering {
        self.vol.total_cmp(&other.vol).then_with(|| {
            other
                .bx
                .lower
                .iter()
                .zip(&self.bx.lower)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    }
}

/// Incremental midpoint-splitting partitioner.
#[derive(Debug)]
pub struct Partitioner<'q> {
    query: &'q RegionQuery,
    cfg: RegionConfig,
    working: BinaryHeap<Entry>,
    parked: Vec<ParamBox>,
    undefined: Vec<ParamBox>,
    yes: Vec<ParamBox>,
    no: Vec<ParamBox>,
    v_maybe: f64,
    classified: usize,
}

impl<'q> Partitioner<'q> {
    pub fn new(query: &'q RegionQuery, cfg: RegionConfig) -> Result<Self, RegionError> {
        if !(cfg.epsilon > 0.0 && cfg.epsilon <= 1.0) {
            return Err(RegionError::InvalidEpsilon(cfg.epsilon));
        }
        let mut p = Partitioner {
            query,
            cfg,
            working: BinaryHeap::new(),
            parked: Vec::new(),
            undefined: Vec::new(),
            yes: Vec::new(),
            no: Vec::new(),
            v_maybe: 0.0,
            classified: 0,
        };
        let unit = ParamBox::unit(query.dims().len());
        if unit.dims() == 0 {
            // a point: nothing to split
            match query.classify(&unit) {
                Verdict::Yes => p.yes.push(unit),
                Verdict::No => p.no.push(unit),
                Verdict::Maybe { undefined } => {
                    if undefined {
                        p.undefined.push(unit.clone());
                    }
                    p.v_maybe = 1.0;
                    p.parked.push(unit);
                }
            }
            p.classified = 1;
        } else {
            p.insert(unit);
        }
        Ok(p)
    }

    fn insert(&mut self, bx: ParamBox) {
        self.classified += 1;
        match self.query.classify(&bx) {
            Verdict::Yes => self.yes.push(bx),
            Verdict::No => self.no.push(bx),
            Verdict::Maybe { undefined } => {
                let vol = bx.volume();
                self.v_maybe += vol;
                if bx.max_width() / 2.0 < self.cfg.min_width {
                    if undefined {
                        self.undefined.push(bx.clone());
                    }
                    self.parked.push(bx);
                } else {
                    self.working.push(Entry { vol, bx });
                }
            }
        }
    }

    /// Whether the undecided volume is within `ε`.
    pub fn is_done(&self) -> bool {
        self.v_maybe <= self.cfg.epsilon
    }

    /// Split the largest undecided box. Returns false once nothing is left
    /// to do: the target is met, the budget is spent, or no box can be split.
    pub fn step(&mut self) -> bool {
        if self.is_done() || self.classified >= self.cfg.max_boxes {
            return false;
        }
        let Some(Entry { vol, bx }) = self.working.pop() else {
            return false;
        };
        self.v_maybe -= vol;
        for child in bx.split() {
            self.insert(child);
        }
        true
    }

    /// Tracked undecided volume.
    pub fn maybe_volume(&self) -> f64 {
        self.v_maybe
    }

    /// Undecided volume recomputed from the boxes themselves.
    pub fn maybe_volume_recomputed(&self) -> f64 {
        self.working.iter().map(|e| e.bx.volume()).sum::<f64>() + self.parked.iter().map(ParamBox::volume).sum::<f64>()
    }

    pub fn yes_boxes(&self) -> &[ParamBox] {
        &self.yes
    }

    pub fn no_boxes(&self) -> &[ParamBox] {
        &self.no
    }

    pub fn finish(self) -> Partition {
        let complete = self.is_done();
        let mut maybe: Vec<ParamBox> = self.working.into_sorted_vec().into_iter().rev().map(|e| e.bx).collect();
        maybe.extend(self.parked);
        // `sum` of an empty f64 iterator is -0.0.
        let vol = |bs: &[ParamBox]| bs.iter().map(ParamBox::volume).fold(0.0, |a, b| a + b);
        Partition {
            dim_names: self.query.dim_names().to_vec(),
            epsilon: self.cfg.epsilon,
            vol_yes: vol(&self.yes),
            vol_no: vol(&self.no),
            vol_maybe: vol(&maybe),
            yes: self.yes,
            no: self.no,
            maybe,
            undefined_boxes: self.undefined,
            complete,
        }
    }
}

/// Partition the parameter space of `ψ` into yes/no/maybe boxes.
pub fn partition(ft: &FaultTree, psi: &Formula2, cfg: &RegionConfig) -> Result<Partition, RegionError> {
    let q = RegionQuery::new(ft, psi, cfg)?;
    let mut p = Partitioner::new(&q, *cfg)?;
    while p.step() {}
    Ok(p.finish())
}

/// ε-partition for the single threshold `Pr_{cmp p}(φ | cond)`.
pub fn epsilon_partition(
    ft: &FaultTree,
    phi: &Formula1,
    cond: Option<&Formula1>,
    p: f64,
    cmp: Cmp,
    cfg: &RegionConfig,
) -> Result<Partition, RegionError> {
    let psi = Formula2::PrCmp {
        cmp,
        p,
        phi: phi.clone(),
        cond: cond.cloned(),
    };
    partition(ft, &psi, cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Forall {
    Valid,
    /// A probability vector violating the formula, re-checked pointwise.
    Counterexample(ProbVector),
    Unknown { maybe_volume: f64 },
}

/// Does `ψ` hold for every probability vector?
///
/// Partitions the space for `¬ψ`. Equality and independence atoms are
/// treated as undecidable on boxes, so a formula built only from them is
/// reported as unknown.
pub fn check_forall(ft: &FaultTree, psi: &Formula2, cfg: &RegionConfig) -> Result<Forall, RegionError> {
    let negated = Formula2::Not(Box::new(psi.clone()));
    let mut q = RegionQuery::new(ft, &negated, cfg)?;
    q.opaque_equalities = true;
    if q.all_atoms_opaque() {
        return Ok(Forall::Unknown { maybe_volume: 1.0 });
    }
    let mut p = Partitioner::new(&q, *cfg)?;
    let mut checked = 0;
    loop {
        for bx in &p.yes_boxes()[checked..] {
            for mask in 0..1u64 << bx.dims() {
                let coords = bx.vertex(mask);
                if let Ok(true) = q.check_point(&coords) {
                    return Ok(Forall::Counterexample(q.point(&coords)));
                }
            }
        }
        checked = p.yes_boxes().len();
        if !p.step() {
            break;
        }
    }
    let part = p.finish();
    if part.maybe.is_empty() && part.yes.is_empty() {
        return Ok(Forall::Valid);
    }
    Ok(Forall::Unknown {
        maybe_volume: part.vol_maybe,
    })
}

fn real(x: f64) -> String {
    let s = format!("{}", x.abs());
    let s = if s.contains('.') { s } else { format!("{s}.0") };
    if x < 0.0 {
        format!("(- {s})")
    } else {
        s
    }
}

fn symbol(name: &str) -> String {
    format!("|{name}|")
}

fn poly_term(p: &Polynomial, names: &dyn Fn(usize) -> String) -> String {
    let terms: Vec<String> = p
        .terms()
        .map(|(mono, c)| {
            if mono.is_empty() {
                return real(c);
            }
            let vars: Vec<String> = mono.iter().map(|&i| names(i)).collect();
            if c == 1.0 {
                if vars.len() == 1 {
                    vars[0].clone()
                } else {
                    format!("(* {})", vars.join(" "))
                }
            } else {
                format!("(* {} {})", real(c), vars.join(" "))
            }
        })
        .collect();
    match terms.len() {
        0 => "0.0".into(),
        1 => terms[0].clone(),
        _ => format!("(+ {})", terms.join(" ")),
    }
}

struct SmtWriter<'a> {
    model: &'a Model,
    cap: usize,
    used: BTreeSet<usize>,
    side: Vec<String>,
}

impl SmtWriter<'_> {
    fn poly(&mut self, b: Bdd, overrides: &[(usize, f64)]) -> Result<String, RegionError> {
        let mut p = symbolic_polynomial_capped(self.model.manager(), b, self.cap)?;
        // later assignments are the inner ones and take precedence
        let mut fixed = BTreeMap::new();
        for &(i, q) in overrides {
            fixed.insert(i, q);
        }
        for (&i, &q) in &fixed {
            p = p.fix(i, q);
        }
        self.used.extend(p.vars());
        let derived = self.model.derived();
        Ok(poly_term(&p, &|i| symbol(derived.name(derived.basic_events()[i]))))
    }

    fn encode(&mut self, shape: &Shape, atoms: &[Atom]) -> Result<String, RegionError> {
        Ok(match shape {
            Shape::Not(a) => format!("(not {})", self.encode(a, atoms)?),
            Shape::And(a, b) => format!("(and {} {})", self.encode(a, atoms)?, self.encode(b, atoms)?),
            Shape::Atom(i) => {
                let atom = &atoms[*i];
                match atom.kind {
                    AtomKind::Pr { cmp, p, num, den } => {
                        let n = self.poly(num, &atom.overrides)?;
                        if den.is_true() {
                            format!("({} {} {})", cmp.symbol(), n, real(p))
                        } else {
                            let d = self.poly(den, &atom.overrides)?;
                            self.side.push(format!("(> {d} 0.0)"));
                            format!("({} {} (* {} {}))", cmp.symbol(), n, real(p), d)
                        }
                    }
                    AtomKind::Idp { joint, left, right } => {
                        let j = self.poly(joint, &atom.overrides)?;
                        let l = self.poly(left, &atom.overrides)?;
                        let r = self.poly(right, &atom.overrides)?;
                        format!("(= {j} (* {l} {r}))")
                    }
                }
            }
        })
    }
}

/// SMT-LIB2 problem over nonlinear real arithmetic asserting `¬ψ`: `sat`
/// yields a counterexample, `unsat` means `ψ` holds everywhere.
pub fn export_smt(ft: &FaultTree, psi: &Formula2, monomial_cap: usize) -> Result<String, RegionError> {
    let cfg = RegionConfig {
        dim_cap: usize::MAX,
        ..RegionConfig::default()
    };
    let q = RegionQuery::new(ft, psi, &cfg)?;
    let model = q.model();
    let mut w = SmtWriter {
        model,
        cap: monomial_cap,
        used: BTreeSet::new(),
        side: Vec::new(),
    };
    let body = w.encode(&q.shape, &q.atoms)?;
    let derived = model.derived();
    let original = model.original();
    let mut out = String::new();
    let _ = writeln!(out, "; satisfiable iff some probability vector violates: {psi}");
    out.push_str("(set-logic QF_NRA)\n");
    let declare = |out: &mut String, name: &str| {
        let s = symbol(name);
        let _ = writeln!(out, "(declare-fun {s} () Real)");
        let _ = writeln!(out, "(assert (and (<= 0.0 {s}) (<= {s} 1.0)))");
    };
    let mut modules = Vec::new();
    for &i in &w.used {
        let name = derived.name(derived.basic_events()[i]);
        declare(&mut out, name);
        if let Source::Module { bdd, .. } = &model.sources()[i] {
            modules.push((name, *bdd));
        }
    }
    for (name, bdd) in modules {
        let omgr = model.original_manager().expect("module manager");
        let p = symbolic_polynomial_capped(omgr, bdd, monomial_cap)?;
        for v in p.vars() {
            declare(&mut out, original.name(original.basic_events()[v]));
        }
        let term = poly_term(&p, &|i| symbol(original.name(original.basic_events()[i])));
        let _ = writeln!(out, "(assert (= {} {}))", symbol(name), term);
    }
    for s in &w.side {
        let _ = writeln!(out, "(assert {s})");
    }
    let _ = writeln!(out, "(assert (not {body}))");
    out.push_str("(check-sat)\n(get-model)\n");
    Ok(out)
}

/// Text rendering: a summary header, then one box per line as
/// `yes|no|maybe  dim=NAME:[l,u] ...  volume=V`.
pub fn write_partition(p: &Partition) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# epsilon={} complete={} dims={} yes={} no={} maybe={} undefined={}",
        p.epsilon,
        p.complete,
        p.dim_names.len(),
        p.yes.len(),
        p.no.len(),
        p.maybe.len(),
        p.undefined_boxes.len()
    );
    let _ = writeln!(out, "# vol_yes={} vol_no={} vol_maybe={}", p.vol_yes, p.vol_no, p.vol_maybe);
    for (label, boxes) in [("yes", &p.yes), ("no", &p.no), ("maybe", &p.maybe)] {
        for b in boxes {
            out.push_str(label);
            out.push(' ');
            for (i, name) in p.dim_names.iter().enumerate() {
                let _ = write!(out, " dim={}:[{},{}]", name, b.lower[i], b.upper[i]);
            }
            let _ = writeln!(out, "  volume={}", b.volume());
        }
    }
    out
}
