//! Static fault trees: data model, a Galileo-style text format, the structure
//! function and module detection/pruning.
//!
//! The text format is line oriented. Each statement ends with `;`:
//!
//! ```text
//! // comments run to the end of the line
//! toplevel MeC;
//! MeC and WW AcM;
//! AcM or H2S O2 CO2;
//! Vote 2of3 A B C;
//! ```
//!
//! Events never defined on the left-hand side of a gate line are basic
//! events. Without a `toplevel` line the first defined event is the top.
//! Basic events are indexed in order of first appearance in the source.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

/// Index of an event inside one [`FaultTree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EventId(usize);

impl EventId {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Gate type of an event. Leaves are [`Gate::Basic`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    And,
    Or,
    /// Fails when at least `k` of its `n` children fail.
    Vot { k: usize, n: usize },
    Basic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("cycle through event `{0}`")]
    Cycle(String),
    #[error("multiple roots: {0:?}")]
    MultipleRoots(Vec<String>),
    #[error("top event `{0}` has a parent")]
    TopHasParent(String),
    #[error("gate `{0}` has no children")]
    LeafWithGate(String),
    #[error("voting gate `{name}` is {k}of{n} but has {children} children")]
    VotArity {
        name: String,
        k: usize,
        n: usize,
        children: usize,
    },
    #[error("top event `{0}` is never defined or referenced")]
    DanglingReference(String),
    #[error("event `{0}` is defined more than once")]
    DuplicateDefinition(String),
    #[error("gate `{gate}` lists child `{child}` more than once")]
    DuplicateChild { gate: String, child: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FaultTreeError {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid fault tree: {0}")]
    Validation(#[from] ValidationError),
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("`{0}` is not a module")]
    NotAModule(String),
    #[error("`{0}` is already a basic event")]
    AlreadyBasic(String),
    #[error("vector has length {got}, tree has {expected} basic events")]
    LengthMismatch { expected: usize, got: usize },
}

/// Boolean status of every basic event, indexed like
/// [`FaultTree::basic_events`]. `true` means failed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StatusVector(pub Vec<bool>);

impl StatusVector {
    pub fn zeros(n: usize) -> Self {
        StatusVector(vec![false; n])
    }

    /// The `i`-th vector of the `2^n` ordering where bit `j` of `i` is entry `j`.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        StatusVector((0..n).map(|j| bits >> j & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }
}

/// Independent failure probability of every basic event.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector(Vec<f64>);

#[derive(Debug, Clone, PartialEq, Error)]
#[error("probability {value} at index {index} is outside [0, 1]")]
pub struct ProbabilityRangeError {
    pub index: usize,
    pub value: f64,
}

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self, ProbabilityRangeError> {
        for (index, &value) in probs.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(ProbabilityRangeError { index, value });
            }
        }
        Ok(ProbVector(probs))
    }

    pub fn uniform(n: usize, p: f64) -> Self {
        ProbVector(vec![p.clamp(0.0, 1.0); n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }

    /// Copy of `self` with entry `i` replaced by `q`.
    pub fn with(&self, i: usize, q: f64) -> Self {
        let mut v = self.0.clone();
        v[i] = q.clamp(0.0, 1.0);
        ProbVector(v)
    }
}

/// A static fault tree: a rooted DAG of events whose leaves are basic events.
///
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct FaultTree {
    names: Vec<String>,
    gates: Vec<Gate>,
    children: Vec<Vec<EventId>>,
    parents: Vec<Vec<EventId>>,
    top: EventId,
    basic_events: Vec<EventId>,
    be_index: Vec<Option<usize>>,
    lookup: HashMap<String, EventId>,
    /// Gates in the order their definitions should be written out.
    definition_order: Vec<EventId>,
}

impl FaultTree {
    /// Parse and validate fault-tree source text.
    pub fn parse(text: &str) -> Result<Self, FaultTreeError> {
        let statements = parse_statements(text)?;
        build_from_statements(statements)
    }

    /// Build a tree from gate definitions, in order. The first entry is the top.
    pub fn from_gates<S: AsRef<str>>(
        gates: &[(S, Gate, Vec<S>)],
    ) -> Result<Self, FaultTreeError> {
        let statements = gates
            .iter()
            .map(|(name, gate, children)| Statement::Gate {
                name: name.as_ref().to_string(),
                gate: *gate,
                children: children.iter().map(|c| c.as_ref().to_string()).collect(),
            })
            .collect();
        build_from_statements(statements)
    }

    /// A tree consisting of one basic event.
    pub fn single(name: &str) -> Self {
        build_from_statements(vec![Statement::Top {
            name: name.to_string(),
        }])
        .expect("single basic event is always valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn events(&self) -> impl Iterator<Item = EventId> + '_ {
        (0..self.names.len()).map(EventId)
    }

    pub fn top(&self) -> EventId {
        self.top
    }

    pub fn name(&self, e: EventId) -> &str {
        &self.names[e.0]
    }

    pub fn gate(&self, e: EventId) -> Gate {
        self.gates[e.0]
    }

    pub fn children(&self, e: EventId) -> &[EventId] {
        &self.children[e.0]
    }

    pub fn parents(&self, e: EventId) -> &[EventId] {
        &self.parents[e.0]
    }

    pub fn is_basic(&self, e: EventId) -> bool {
        self.gates[e.0] == Gate::Basic
    }

    pub fn event(&self, name: &str) -> Option<EventId> {
        self.lookup.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<EventId, FaultTreeError> {
        self.event(name)
            .ok_or_else(|| FaultTreeError::UnknownEvent(name.to_string()))
    }

    /// Number of basic events `n`.
    pub fn num_basic(&self) -> usize {
        self.basic_events.len()
    }

    pub fn basic_events(&self) -> &[EventId] {
        &self.basic_events
    }

    pub fn basic_event_names(&self) -> Vec<&str> {
        self.basic_events.iter().map(|&e| self.name(e)).collect()
    }

    /// Position of `e` in the basic-event order, if it is a basic event.
    pub fn be_index(&self, e: EventId) -> Option<usize> {
        self.be_index[e.0]
    }

    pub fn be_index_of(&self, name: &str) -> Option<usize> {
        self.event(name).and_then(|e| self.be_index(e))
    }

    /// Strict descendants of `e`.
    pub fn descendants(&self, e: EventId) -> BTreeSet<EventId> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<EventId> = self.children(e).to_vec();
        while let Some(d) = stack.pop() {
            if seen.insert(d) {
                stack.extend_from_slice(self.children(d));
            }
        }
        seen
    }

    /// Value of the structure function at event `e` for status vector `b`.
    pub fn structure_function(&self, b: &StatusVector, e: EventId) -> Result<bool, FaultTreeError> {
        if e.0 >= self.len() {
            return Err(FaultTreeError::UnknownEvent(format!("#{}", e.0)));
        }
        self.check_len(b.len())?;
        let mut memo = vec![None; self.len()];
        Ok(self.eval_memo(b, e, &mut memo))
    }

    /// [`structure_function`](Self::structure_function) by event name.
    pub fn evaluate(&self, b: &StatusVector, name: &str) -> Result<bool, FaultTreeError> {
        self.structure_function(b, self.require(name)?)
    }

    fn eval_memo(&self, b: &StatusVector, e: EventId, memo: &mut [Option<bool>]) -> bool {
        if let Some(v) = memo[e.0] {
            return v;
        }
        let v = match self.gates[e.0] {
            Gate::Basic => b.get(self.be_index[e.0].unwrap()),
            Gate::Or => self.children[e.0]
                .iter()
                .any(|&c| self.eval_memo(b, c, memo)),
            Gate::And => self.children[e.0]
                .iter()
                .all(|&c| self.eval_memo(b, c, memo)),
            Gate::Vot { k, .. } => {
                let mut failed = 0;
                for &c in &self.children[e.0] {
                    if self.eval_memo(b, c, memo) {
                        failed += 1;
                    }
                }
                failed >= k
            }
        };
        memo[e.0] = Some(v);
        v
    }

    pub(crate) fn check_len(&self, got: usize) -> Result<(), FaultTreeError> {
        if got != self.num_basic() {
            return Err(FaultTreeError::LengthMismatch {
                expected: self.num_basic(),
                got,
            });
        }
        Ok(())
    }

    /// True iff every edge entering the strict descendants of `e` comes from
    /// `e` or from another descendant. Basic events are trivially modules.
    pub fn is_module(&self, e: EventId) -> bool {
        let desc = self.descendants(e);
        desc.iter()
            .all(|d| self.parents(*d).iter().all(|p| *p == e || desc.contains(p)))
    }

    /// Replace the module `e` by a fresh basic event of the same name and drop
    /// its descendants. The new basic event takes the index of the first
    /// removed basic event; the others keep their relative order.
    pub fn prune_module(&self, e: EventId) -> Result<FaultTree, FaultTreeError> {
        if self.is_basic(e) {
            return Err(FaultTreeError::AlreadyBasic(self.name(e).to_string()));
        }
        if !self.is_module(e) {
            return Err(FaultTreeError::NotAModule(self.name(e).to_string()));
        }
        let removed = self.descendants(e);
        let kept: Vec<EventId> = self.events().filter(|x| !removed.contains(x)).collect();
        let mut remap = vec![None; self.len()];
        for (new, old) in kept.iter().enumerate() {
            remap[old.0] = Some(EventId(new));
        }
        let map = |x: EventId| remap[x.0].unwrap();

        let names = kept.iter().map(|&x| self.names[x.0].clone()).collect();
        let gates = kept
            .iter()
            .map(|&x| if x == e { Gate::Basic } else { self.gates[x.0] })
            .collect();
        let children = kept
            .iter()
            .map(|&x| {
                if x == e {
                    Vec::new()
                } else {
                    self.children[x.0].iter().map(|&c| map(c)).collect()
                }
            })
            .collect();

        let mut bes = Vec::with_capacity(self.num_basic());
        let mut placed = false;
        for &b in &self.basic_events {
            if removed.contains(&b) {
                if !placed {
                    bes.push(map(e));
                    placed = true;
                }
            } else {
                bes.push(map(b));
            }
        }
        let definition_order = self
            .definition_order
            .iter()
            .filter(|&&x| x != e && !removed.contains(&x))
            .map(|&x| map(x))
            .collect();
        Ok(FaultTree::from_parts(
            names,
            gates,
            children,
            map(self.top),
            bes,
            definition_order,
        ))
    }

    fn from_parts(
        names: Vec<String>,
        gates: Vec<Gate>,
        children: Vec<Vec<EventId>>,
        top: EventId,
        basic_events: Vec<EventId>,
        definition_order: Vec<EventId>,
    ) -> Self {
        let mut parents = vec![Vec::new(); names.len()];
        for (p, cs) in children.iter().enumerate() {
            for c in cs {
                parents[c.0].push(EventId(p));
            }
        }
        let mut be_index = vec![None; names.len()];
        for (i, b) in basic_events.iter().enumerate() {
            be_index[b.0] = Some(i);
        }
        let lookup = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), EventId(i)))
            .collect();
        FaultTree {
            names,
            gates,
            children,
            parents,
            top,
            basic_events,
            be_index,
            lookup,
            definition_order,
        }
    }

    /// Events of the sub-DAG rooted at `e`, children before parents.
    pub fn post_order(&self, e: EventId) -> Vec<EventId> {
        let mut out = Vec::new();
        let mut seen = vec![false; self.len()];
        let mut stack = vec![(e, false)];
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                out.push(x);
                continue;
            }
            if seen[x.0] {
                continue;
            }
            seen[x.0] = true;
            stack.push((x, true));
            for &c in self.children(x).iter().rev() {
                if !seen[c.0] {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Render the tree in the text format accepted by [`FaultTree::parse`].
    pub fn to_source(&self) -> String {
        let mut out = format!("toplevel {};\n", quote_name(self.name(self.top)));
        for &g in &self.definition_order {
            let gate = match self.gates[g.0] {
                Gate::And => "and".to_string(),
                Gate::Or => "or".to_string(),
                Gate::Vot { k, n } => format!("{k}of{n}"),
                Gate::Basic => unreachable!("definitions are gates"),
            };
            out.push_str(&quote_name(self.name(g)));
            out.push(' ');
            out.push_str(&gate);
            for &c in self.children(g) {
                out.push(' ');
                out.push_str(&quote_name(self.name(c)));
            }
            out.push_str(";\n");
        }
        out
    }
}

impl fmt::Display for FaultTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_source())
    }
}

impl std::str::FromStr for FaultTree {
    type Err = FaultTreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FaultTree::parse(s)
    }
}

const KEYWORDS: [&str; 4] = ["toplevel", "and", "or", "of"];

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '/'
}

fn parse_vot(word: &str) -> Option<(usize, usize)> {
    let (k, n) = word.split_once("of")?;
    if k.is_empty() || n.is_empty() {
        return None;
    }
    Some((k.parse().ok()?, n.parse().ok()?))
}

fn quote_name(name: &str) -> String {
    let plain = !name.is_empty()
        && name.chars().all(is_ident_char)
        && !KEYWORDS.contains(&name)
        && parse_vot(name).is_none()
        && !name.chars().all(|c| c.is_ascii_digit());
    if plain {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Quoted(String),
    Semi,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, FaultTreeError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let at = |tok| Spanned {
                tok,
                line: li + 1,
                column,
            };
            if c.is_whitespace() {
                i += 1;
            } else if c == '/' && chars.get(i + 1) == Some(&'/') {
                break;
            } else if c == ';' {
                out.push(at(Tok::Semi));
                i += 1;
            } else if c == '"' {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j] != '"' {
                    j += 1;
                }
                if j == chars.len() {
                    return Err(FaultTreeError::Parse {
                        line: li + 1,
                        column,
                        message: "unterminated quoted name".into(),
                    });
                }
                out.push(at(Tok::Quoted(chars[start..j].iter().collect())));
                i = j + 1;
            } else if is_ident_char(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    // a `//` inside a word still starts a comment
                    if chars[i] == '/' && chars.get(i + 1) == Some(&'/') {
                        break;
                    }
                    i += 1;
                }
                out.push(at(Tok::Word(chars[start..i].iter().collect())));
            } else {
                return Err(FaultTreeError::Parse {
                    line: li + 1,
                    column,
                    message: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug)]
enum Statement {
    Top {
        name: String,
    },
    Gate {
        name: String,
        gate: Gate,
        children: Vec<String>,
    },
}

fn parse_statements(text: &str) -> Result<Vec<Statement>, FaultTreeError> {
    let tokens = lex(text)?;
    let mut statements = Vec::new();
    let mut current: Vec<Spanned> = Vec::new();
    for t in tokens {
        if t.tok == Tok::Semi {
            if current.is_empty() {
                return Err(FaultTreeError::Parse {
                    line: t.line,
                    column: t.column,
                    message: "empty statement".into(),
                });
            }
            let first_statement = statements.is_empty();
            statements.push(parse_statement(std::mem::take(&mut current), first_statement)?);
        } else {
            current.push(t);
        }
    }
    if let Some(t) = current.first() {
        return Err(FaultTreeError::Parse {
            line: t.line,
            column: t.column,
            message: "statement is missing its terminating `;`".into(),
        });
    }
    if statements.is_empty() {
        return Err(FaultTreeError::Parse {
            line: 1,
            column: 1,
            message: "no events defined".into(),
        });
    }
    Ok(statements)
}

fn name_of(t: &Spanned) -> Result<String, FaultTreeError> {
    match &t.tok {
        Tok::Quoted(s) => Ok(s.clone()),
        Tok::Word(w) if KEYWORDS.contains(&w.as_str()) || parse_vot(w).is_some() => {
            Err(FaultTreeError::Parse {
                line: t.line,
                column: t.column,
                message: format!("keyword `{w}` used as a name; quote it"),
            })
        }
        Tok::Word(w) => Ok(w.clone()),
        Tok::Semi => unreachable!(),
    }
}

fn parse_statement(toks: Vec<Spanned>, first: bool) -> Result<Statement, FaultTreeError> {
    let err = |t: &Spanned, message: String| FaultTreeError::Parse {
        line: t.line,
        column: t.column,
        message,
    };
    let head = &toks[0];
    if head.tok == Tok::Word("toplevel".into()) {
        if !first {
            return Err(err(head, "`toplevel` must be the first statement".into()));
        }
        if toks.len() != 2 {
            return Err(err(head, "expected `toplevel NAME;`".into()));
        }
        return Ok(Statement::Top {
            name: name_of(&toks[1])?,
        });
    }
    let name = name_of(head)?;
    let Some(gate_tok) = toks.get(1) else {
        return Err(err(head, format!("expected a gate after `{name}`")));
    };
    let (gate, rest) = match &gate_tok.tok {
        Tok::Word(w) if w == "and" => (Gate::And, 2),
        Tok::Word(w) if w == "or" => (Gate::Or, 2),
        Tok::Word(w) => {
            if let Some((k, n)) = parse_vot(w) {
                (Gate::Vot { k, n }, 2)
            } else if let (Ok(k), Some(Tok::Word(of)), Some(Tok::Word(nw))) = (
                w.parse::<usize>(),
                toks.get(2).map(|t| &t.tok),
                toks.get(3).map(|t| &t.tok),
            ) {
                match (of.as_str(), nw.parse::<usize>()) {
                    ("of", Ok(n)) => (Gate::Vot { k, n }, 4),
                    _ => return Err(err(gate_tok, format!("malformed voting gate `{w} {of} {nw}`"))),
                }
            } else {
                return Err(err(gate_tok, format!("unknown gate `{w}`")));
            }
        }
        _ => return Err(err(gate_tok, "expected a gate type".into())),
    };
    let children = toks[rest..].iter().map(name_of).collect::<Result<Vec<_>, _>>()?;
    Ok(Statement::Gate {
        name,
        gate,
        children,
    })
}

fn build_from_statements(statements: Vec<Statement>) -> Result<FaultTree, FaultTreeError> {
    let mut ids: HashMap<String, EventId> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut intern = |n: &str, names: &mut Vec<String>| -> EventId {
        *ids.entry(n.to_string()).or_insert_with(|| {
            names.push(n.to_string());
            EventId(names.len() - 1)
        })
    };

    let mut declared_top = None;
    let mut defs: Vec<(EventId, Gate, Vec<EventId>)> = Vec::new();
    for s in &statements {
        match s {
            Statement::Top { name } => declared_top = Some(intern(name, &mut names)),
            Statement::Gate {
                name,
                gate,
                children,
            } => {
                let id = intern(name, &mut names);
                let cs = children.iter().map(|c| intern(c, &mut names)).collect();
                defs.push((id, *gate, cs));
            }
        }
    }
    let mut gates = vec![Gate::Basic; names.len()];
    let mut children = vec![Vec::new(); names.len()];
    let mut defined = vec![false; names.len()];
    for (id, gate, cs) in &defs {
        let name = &names[id.0];
        if defined[id.0] {
            return Err(ValidationError::DuplicateDefinition(name.clone()).into());
        }
        defined[id.0] = true;
        if cs.is_empty() {
            return Err(ValidationError::LeafWithGate(name.clone()).into());
        }
        let mut seen = BTreeSet::new();
        for c in cs {
            if !seen.insert(*c) {
                return Err(ValidationError::DuplicateChild {
                    gate: name.clone(),
                    child: names[c.0].clone(),
                }
                .into());
            }
        }
        if let Gate::Vot { k, n } = gate {
            if *n != cs.len() || *k < 1 || *k > *n {
                return Err(ValidationError::VotArity {
                    name: name.clone(),
                    k: *k,
                    n: *n,
                    children: cs.len(),
                }
                .into());
            }
        }
        gates[id.0] = *gate;
        children[id.0] = cs.clone();
    }

    let top = match declared_top {
        Some(t) => {
            let referenced = defs
                .iter()
                .any(|(id, _, cs)| *id == t || cs.contains(&t));
            if !defs.is_empty() && !referenced {
                return Err(ValidationError::DanglingReference(names[t.0].clone()).into());
            }
            t
        }
        None => defs[0].0,
    };

    // cycle detection: iterative three-colour DFS
    let mut colour = vec![0u8; names.len()];
    for start in 0..names.len() {
        if colour[start] != 0 {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        colour[start] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if *next < children[node].len() {
                let c = children[node][*next].0;
                *next += 1;
                match colour[c] {
                    0 => {
                        colour[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => return Err(ValidationError::Cycle(names[c].clone()).into()),
                    _ => {}
                }
            } else {
                colour[node] = 2;
                stack.pop();
            }
        }
    }

    let mut has_parent = vec![false; names.len()];
    for cs in &children {
        for c in cs {
            has_parent[c.0] = true;
        }
    }
    if has_parent[top.0] {
        return Err(ValidationError::TopHasParent(names[top.0].clone()).into());
    }
    let roots: Vec<String> = (0..names.len())
        .filter(|&i| !has_parent[i])
        .map(|i| names[i].clone())
        .collect();
    if roots.len() > 1 {
        return Err(ValidationError::MultipleRoots(roots).into());
    }

    let basic_events = (0..names.len())
        .filter(|&i| gates[i] == Gate::Basic)
        .map(EventId)
        .collect();
    let definition_order = defs.iter().map(|(id, _, _)| *id).collect();
    Ok(FaultTree::from_parts(
        names,
        gates,
        children,
        top,
        basic_events,
        definition_order,
    ))
}
