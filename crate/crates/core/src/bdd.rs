//! Reduced ordered binary decision diagrams over plain and primed basic-event
//! variables.
//!
//! Variables are interleaved: `v1 < v1' < v2 < v2' < ...`, so a variable's
//! level is `2i` for the plain copy of basic event `i` and `2i + 1` for its
//! primed copy. Every node is created through the unique table, which keeps
//! the diagram reduced and canonical: two functions are equal iff their
//! [`Bdd`] handles are equal. No complemented edges are used.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::ops::Deref;
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::fault_tree::StatusVector;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BddError {
    #[error("variable {0} is not managed by this manager")]
    UnknownVariable(Var),
    #[error("BDD handle belongs to a different manager")]
    ManagerMismatch,
    #[error("renaming onto {0}, which already occurs in the BDD")]
    RenameCollision(Var),
    #[error("no value given for variable {0}")]
    MissingAssignment(Var),
    #[error("variable {0} occurs in the BDD but not in the enumeration list")]
    VariableNotCovered(Var),
    #[error("variable lists have different lengths ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("node on {0} would not be above its children")]
    OrderViolation(Var),
}

/// A BDD variable, identified by its level in the global order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    /// Plain variable of basic event `i`.
    pub fn plain(i: usize) -> Var {
        Var(2 * i as u32)
    }

    /// Primed copy of basic event `i`.
    pub fn primed(i: usize) -> Var {
        Var(2 * i as u32 + 1)
    }

    pub fn from_level(level: u32) -> Var {
        Var(level)
    }

    pub fn level(self) -> u32 {
        self.0
    }

    pub fn be_index(self) -> usize {
        (self.0 / 2) as usize
    }

    pub fn is_primed(self) -> bool {
        self.0 % 2 == 1
    }

    /// The other copy (plain <-> primed) of the same basic event.
    pub fn twin(self) -> Var {
        Var(self.0 ^ 1)
    }
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_primed() {
            write!(f, "x{}'", self.be_index())
        } else {
            write!(f, "x{}", self.be_index())
        }
    }
}

/// Handle to a canonical node inside a [`BddManager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bdd {
    manager: u32,
    root: u32,
}

impl Bdd {
    /// `Some(v)` if this is the terminal `v`.
    pub fn as_const(self) -> Option<bool> {
        match self.root {
            0 => Some(false),
            1 => Some(true),
            _ => None,
        }
    }

    pub fn is_false(self) -> bool {
        self.root == 0
    }

    pub fn is_true(self) -> bool {
        self.root == 1
    }

    /// Dense index of the root node, stable for the life of the manager.
    /// Useful as a memo key for traversals.
    pub fn node_index(self) -> usize {
        self.root as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BinOp {
    And,
    Or,
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    low: u32,
    high: u32,
}

const TERMINAL_LEVEL: u32 = u32::MAX;

static NEXT_MANAGER: AtomicU32 = AtomicU32::new(1);

/// Owner of all BDD nodes. Construction operations need `&mut self`;
/// traversals need only `&self`, so a frozen manager can be shared.
#[derive(Debug)]
pub struct BddManager {
    id: u32,
    num_levels: u32,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
    apply_cache: HashMap<(BinOp, u32, u32), u32>,
    not_cache: HashMap<u32, u32>,
    restrict_cache: HashMap<(u32, u32, bool), u32>,
}

impl BddManager {
    /// Manager for `num_basic` basic events, i.e. `2 * num_basic` variables.
    pub fn new(num_basic: usize) -> Self {
        let terminal = |v| Node {
            var: TERMINAL_LEVEL,
            low: v,
            high: v,
        };
        BddManager {
            id: NEXT_MANAGER.fetch_add(1, Ordering::Relaxed),
            num_levels: 2 * num_basic as u32,
            nodes: vec![terminal(0), terminal(1)],
            unique: HashMap::new(),
            apply_cache: HashMap::new(),
            not_cache: HashMap::new(),
            restrict_cache: HashMap::new(),
        }
    }

    pub fn num_basic(&self) -> usize {
        (self.num_levels / 2) as usize
    }

    /// Total nodes ever created, terminals included.
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    fn handle(&self, root: u32) -> Bdd {
        Bdd {
            manager: self.id,
            root,
        }
    }

    fn own(&self, f: Bdd) -> Result<u32, BddError> {
        if f.manager != self.id {
            return Err(BddError::ManagerMismatch);
        }
        Ok(f.root)
    }

    fn check_var(&self, x: Var) -> Result<(), BddError> {
        if x.0 >= self.num_levels {
            return Err(BddError::UnknownVariable(x));
        }
        Ok(())
    }

    fn level(&self, n: u32) -> u32 {
        self.nodes[n as usize].var
    }

    fn mk(&mut self, var: u32, low: u32, high: u32) -> u32 {
        if low == high {
            return low;
        }
        let node = Node { var, low, high };
        if let Some(&n) = self.unique.get(&node) {
            return n;
        }
        let n = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, n);
        n
    }

    pub fn constant(&self, v: bool) -> Bdd {
        self.handle(v as u32)
    }

    pub fn zero(&self) -> Bdd {
        self.constant(false)
    }

    pub fn one(&self) -> Bdd {
        self.constant(true)
    }

    /// Single-node BDD with low edge 0 and high edge 1.
    pub fn var(&mut self, x: Var) -> Result<Bdd, BddError> {
        self.check_var(x)?;
        let n = self.mk(x.0, 0, 1);
        Ok(self.handle(n))
    }

    /// Reduced node `if x then high else low`. `x` must be strictly above the
    /// top variables of both children.
    pub fn node(&mut self, x: Var, low: Bdd, high: Bdd) -> Result<Bdd, BddError> {
        self.check_var(x)?;
        let (l, h) = (self.own(low)?, self.own(high)?);
        if x.0 >= self.level(l) || x.0 >= self.level(h) {
            return Err(BddError::OrderViolation(x));
        }
        let n = self.mk(x.0, l, h);
        Ok(self.handle(n))
    }

    /// Top variable and cofactors `(x, low, high)`, or `None` for terminals.
    pub fn branches(&self, f: Bdd) -> Option<(Var, Bdd, Bdd)> {
        let node = self.nodes[f.root as usize];
        if node.var == TERMINAL_LEVEL {
            return None;
        }
        Some((Var(node.var), self.handle(node.low), self.handle(node.high)))
    }

    pub fn apply(&mut self, op: BinOp, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        let (a, b) = (self.own(a)?, self.own(b)?);
        let r = self.apply_rec(op, a, b);
        Ok(self.handle(r))
    }

    pub fn and(&mut self, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        self.apply(BinOp::And, a, b)
    }

    pub fn or(&mut self, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        self.apply(BinOp::Or, a, b)
    }

    pub fn xor(&mut self, a: Bdd, b: Bdd) -> Result<Bdd, BddError> {
        self.apply(BinOp::Xor, a, b)
    }

    fn apply_rec(&mut self, op: BinOp, a: u32, b: u32) -> u32 {
        match op {
            BinOp::And => {
                if a == 0 || b == 0 {
                    return 0;
                }
                if a == 1 || a == b {
                    return b;
                }
                if b == 1 {
                    return a;
                }
            }
            BinOp::Or => {
                if a == 1 || b == 1 {
                    return 1;
                }
                if a == 0 || a == b {
                    return b;
                }
                if b == 0 {
                    return a;
                }
            }
            BinOp::Xor => {
                if a == b {
                    return 0;
                }
                if a == 0 {
                    return b;
                }
                if b == 0 {
                    return a;
                }
                if a == 1 {
                    return self.not_rec(b);
                }
                if b == 1 {
                    return self.not_rec(a);
                }
            }
        }
        // all three operators are commutative
        let key = (op, a.min(b), a.max(b));
        if let Some(&r) = self.apply_cache.get(&key) {
            return r;
        }
        let (na, nb) = (self.nodes[a as usize], self.nodes[b as usize]);
        let var = na.var.min(nb.var);
        let (a0, a1) = if na.var == var { (na.low, na.high) } else { (a, a) };
        let (b0, b1) = if nb.var == var { (nb.low, nb.high) } else { (b, b) };
        let low = self.apply_rec(op, a0, b0);
        let high = self.apply_rec(op, a1, b1);
        let r = self.mk(var, low, high);
        self.apply_cache.insert(key, r);
        r
    }

    pub fn negate(&mut self, a: Bdd) -> Result<Bdd, BddError> {
        let a = self.own(a)?;
        let r = self.not_rec(a);
        Ok(self.handle(r))
    }

    fn not_rec(&mut self, a: u32) -> u32 {
        if a <= 1 {
            return 1 - a;
        }
        if let Some(&r) = self.not_cache.get(&a) {
            return r;
        }
        let n = self.nodes[a as usize];
        let low = self.not_rec(n.low);
        let high = self.not_rec(n.high);
        let r = self.mk(n.var, low, high);
        self.not_cache.insert(a, r);
        r
    }

    /// `if f then g else h`.
    pub fn ite(&mut self, f: Bdd, g: Bdd, h: Bdd) -> Result<Bdd, BddError> {
        let then = self.and(f, g)?;
        let nf = self.negate(f)?;
        let other = self.and(nf, h)?;
        self.or(then, other)
    }

    /// Cofactor of `a` with `x` fixed to `value`.
    pub fn restrict(&mut self, a: Bdd, x: Var, value: bool) -> Result<Bdd, BddError> {
        self.check_var(x)?;
        let a = self.own(a)?;
        let r = self.restrict_rec(a, x.0, value);
        Ok(self.handle(r))
    }

    fn restrict_rec(&mut self, a: u32, x: u32, value: bool) -> u32 {
        let n = self.nodes[a as usize];
        if n.var > x {
            return a;
        }
        if n.var == x {
            return if value { n.high } else { n.low };
        }
        let key = (a, x, value);
        if let Some(&r) = self.restrict_cache.get(&key) {
            return r;
        }
        let low = self.restrict_rec(n.low, x, value);
        let high = self.restrict_rec(n.high, x, value);
        let r = self.mk(n.var, low, high);
        self.restrict_cache.insert(key, r);
        r
    }

    /// `∃ xs. a`: the disjunction of both cofactors for every variable in `xs`.
    pub fn exists(&mut self, a: Bdd, xs: &[Var]) -> Result<Bdd, BddError> {
        for &x in xs {
            self.check_var(x)?;
        }
        let a = self.own(a)?;
        let set: HashSet<u32> = xs.iter().map(|x| x.0).collect();
        let mut memo = HashMap::new();
        let r = self.exists_rec(a, &set, &mut memo);
        Ok(self.handle(r))
    }

    fn exists_rec(&mut self, a: u32, set: &HashSet<u32>, memo: &mut HashMap<u32, u32>) -> u32 {
        if a <= 1 {
            return a;
        }
        if let Some(&r) = memo.get(&a) {
            return r;
        }
        let n = self.nodes[a as usize];
        let low = self.exists_rec(n.low, set, memo);
        let high = self.exists_rec(n.high, set, memo);
        let r = if set.contains(&n.var) {
            self.apply_rec(BinOp::Or, low, high)
        } else {
            self.mk(n.var, low, high)
        };
        memo.insert(a, r);
        r
    }

    /// Rename variables of `a` according to `map` (an injective partial map).
    /// Targets must not already occur in `a` unless they are renamed away too.
    pub fn rename(&mut self, a: Bdd, map: &[(Var, Var)]) -> Result<Bdd, BddError> {
        let root = self.own(a)?;
        let mut table = HashMap::new();
        let mut targets = HashSet::new();
        for &(from, to) in map {
            self.check_var(from)?;
            self.check_var(to)?;
            if table.insert(from.0, to.0).is_some() || !targets.insert(to.0) {
                return Err(BddError::RenameCollision(to));
            }
        }
        let support = self.support(a);
        for &(_, to) in map {
            if support.contains(&to) && !table.contains_key(&to.0) {
                return Err(BddError::RenameCollision(to));
            }
        }
        let mut memo = HashMap::new();
        let r = self.rename_rec(root, &table, &mut memo);
        Ok(self.handle(r))
    }

    fn rename_rec(&mut self, a: u32, table: &HashMap<u32, u32>, memo: &mut HashMap<u32, u32>) -> u32 {
        if a <= 1 {
            return a;
        }
        if let Some(&r) = memo.get(&a) {
            return r;
        }
        let n = self.nodes[a as usize];
        let low = self.rename_rec(n.low, table, memo);
        let high = self.rename_rec(n.high, table, memo);
        let var = table.get(&n.var).copied().unwrap_or(n.var);
        // The renamed variable may land below the cofactors' top variables,
        // so rebuild by Shannon composition instead of a direct node.
        let x = self.mk(var, 0, 1);
        let nx = self.mk(var, 1, 0);
        let t = self.apply_rec(BinOp::And, x, high);
        let e = self.apply_rec(BinOp::And, nx, low);
        let r = self.apply_rec(BinOp::Or, t, e);
        memo.insert(a, r);
        r
    }

    /// Follow the low edge on 0 and the high edge on 1 until a terminal.
    pub fn eval(&self, a: Bdd, assignment: impl Fn(Var) -> Option<bool>) -> Result<bool, BddError> {
        let mut n = self.own(a)?;
        while n > 1 {
            let node = self.nodes[n as usize];
            let x = Var(node.var);
            n = if assignment(x).ok_or(BddError::MissingAssignment(x))? {
                node.high
            } else {
                node.low
            };
        }
        Ok(n == 1)
    }

    /// Evaluate on a status vector. Plain variable `i` reads entry `i`;
    /// primed variables are unassigned.
    pub fn eval_vector(&self, a: Bdd, b: &StatusVector) -> Result<bool, BddError> {
        self.eval(a, |x| {
            if x.is_primed() {
                None
            } else {
                b.0.get(x.be_index()).copied()
            }
        })
    }

    /// Variables occurring in `a`.
    pub fn support(&self, a: Bdd) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(a, |node| {
            out.insert(Var(node.var));
        });
        out
    }

    fn visit(&self, a: Bdd, mut f: impl FnMut(&Node)) {
        let mut seen = HashSet::new();
        let mut stack = vec![a.root];
        while let Some(n) = stack.pop() {
            if n <= 1 || !seen.insert(n) {
                continue;
            }
            let node = &self.nodes[n as usize];
            f(node);
            stack.push(node.low);
            stack.push(node.high);
        }
    }

    /// Number of non-terminal nodes reachable from `a`.
    pub fn node_count(&self, a: Bdd) -> usize {
        let mut count = 0;
        self.visit(a, |_| count += 1);
        count
    }

    /// Every satisfying total assignment over `over`, vectors indexed like
    /// `over`, sorted lexicographically with `false < true`.
    pub fn all_sat(&self, a: Bdd, over: &[Var]) -> Result<Vec<Vec<bool>>, BddError> {
        let root = self.own(a)?;
        let covered: HashSet<Var> = over.iter().copied().collect();
        if let Some(&x) = self.support(a).iter().find(|x| !covered.contains(x)) {
            return Err(BddError::VariableNotCovered(x));
        }
        let mut order: Vec<usize> = (0..over.len()).collect();
        order.sort_by_key(|&i| over[i]);
        let mut out = Vec::new();
        let mut current = vec![false; over.len()];
        self.all_sat_rec(root, 0, &order, over, &mut current, &mut out);
        out.sort();
        Ok(out)
    }

    fn all_sat_rec(
        &self,
        n: u32,
        depth: usize,
        order: &[usize],
        over: &[Var],
        current: &mut Vec<bool>,
        out: &mut Vec<Vec<bool>>,
    ) {
        if n == 0 {
            return;
        }
        if depth == order.len() {
            debug_assert_eq!(n, 1);
            out.push(current.clone());
            return;
        }
        let pos = order[depth];
        let node = self.nodes[n as usize];
        let (low, high) = if node.var == over[pos].0 {
            (node.low, node.high)
        } else {
            (n, n)
        };
        current[pos] = false;
        self.all_sat_rec(low, depth + 1, order, over, current, out);
        current[pos] = true;
        self.all_sat_rec(high, depth + 1, order, over, current, out);
        current[pos] = false;
    }

    /// Number of satisfying assignments over the first `num_levels` levels.
    pub fn sat_count(&self, a: Bdd, num_levels: u32) -> f64 {
        let mut memo: HashMap<u32, f64> = HashMap::new();
        fn rec(m: &BddManager, n: u32, memo: &mut HashMap<u32, f64>) -> f64 {
            // fraction of assignments reaching 1
            if n <= 1 {
                return n as f64;
            }
            if let Some(&v) = memo.get(&n) {
                return v;
            }
            let node = m.nodes[n as usize];
            let v = 0.5 * rec(m, node.low, memo) + 0.5 * rec(m, node.high, memo);
            memo.insert(n, v);
            v
        }
        rec(self, a.root, &mut memo) * 2f64.powi(num_levels as i32)
    }

    /// Check ordering, reducedness and uniqueness for every node reachable
    /// from `a`. Returns a description of the first violation.
    pub fn audit(&self, a: Bdd) -> Result<(), String> {
        let mut seen_triples = HashSet::new();
        let mut err = None;
        let mut idx_of = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate().skip(2) {
            idx_of.entry(*n).or_insert(i);
        }
        self.visit(a, |node| {
            if err.is_some() {
                return;
            }
            let (l, h) = (self.nodes[node.low as usize], self.nodes[node.high as usize]);
            if node.var >= l.var || node.var >= h.var {
                err = Some(format!("node on level {} is not above its children", node.var));
            } else if node.low == node.high {
                err = Some(format!("node on level {} has identical children", node.var));
            } else if !seen_triples.insert(*node) {
                err = Some(format!("duplicate node on level {}", node.var));
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        // the unique table must hold exactly one index per triple
        if idx_of.len() != self.nodes.len() - 2 {
            return Err("two stored nodes share label and children".into());
        }
        Ok(())
    }

    /// Graphviz rendering: dashed 0-edges, solid 1-edges.
    pub fn to_dot(&self, a: Bdd, label: impl Fn(Var) -> String) -> String {
        let mut out = String::from("digraph bdd {\n");
        let mut nodes = Vec::new();
        self.visit(a, |node| nodes.push(*node));
        let idx = |node: &Node| self.unique[node];
        let mut terminals = BTreeSet::new();
        if a.root <= 1 {
            terminals.insert(a.root);
        }
        for node in &nodes {
            let _ = writeln!(out, "  n{} [label=\"{}\"];", idx(node), label(Var(node.var)));
            for (child, style) in [(node.low, "dashed"), (node.high, "solid")] {
                if child <= 1 {
                    terminals.insert(child);
                }
                let _ = writeln!(out, "  n{} -> n{} [style={}];", idx(node), child, style);
            }
        }
        for t in terminals {
            let _ = writeln!(out, "  n{t} [label=\"{t}\", shape=box];");
        }
        out.push_str("}\n");
        out
    }

    /// Drop memo caches. Nodes are kept.
    pub fn clear_caches(&mut self) {
        self.apply_cache.clear();
        self.not_cache.clear();
        self.restrict_cache.clear();
    }

    /// Compact the node store to what `roots` reach. All other handles from
    /// this manager become invalid (they report [`BddError::ManagerMismatch`]);
    /// the returned handles replace `roots` in order.
    pub fn gc(&mut self, roots: &[Bdd]) -> Result<Vec<Bdd>, BddError> {
        let old_roots = roots.iter().map(|&r| self.own(r)).collect::<Result<Vec<_>, _>>()?;
        let old_nodes = std::mem::take(&mut self.nodes);
        self.nodes = old_nodes[..2].to_vec();
        self.unique.clear();
        self.clear_caches();
        let mut remap: HashMap<u32, u32> = HashMap::from([(0, 0), (1, 1)]);
        fn copy(m: &mut BddManager, old: &[Node], n: u32, remap: &mut HashMap<u32, u32>) -> u32 {
            if let Some(&r) = remap.get(&n) {
                return r;
            }
            let node = old[n as usize];
            let low = copy(m, old, node.low, remap);
            let high = copy(m, old, node.high, remap);
            let r = m.mk(node.var, low, high);
            remap.insert(n, r);
            r
        }
        let new_roots: Vec<u32> = old_roots
            .iter()
            .map(|&r| copy(self, &old_nodes, r, &mut remap))
            .collect();
        self.id = NEXT_MANAGER.fetch_add(1, Ordering::Relaxed);
        Ok(new_roots.into_iter().map(|r| self.handle(r)).collect())
    }

    /// Make the manager read-only and shareable across threads.
    pub fn freeze(self) -> FrozenManager {
        FrozenManager(Arc::new(self))
    }
}

/// Read-only, cheaply clonable view of a finished [`BddManager`].
#[derive(Clone, Debug)]
pub struct FrozenManager(Arc<BddManager>);

impl Deref for FrozenManager {
    type Target = BddManager;

    fn deref(&self) -> &BddManager {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn truth_table(m: &BddManager, f: Bdd, vars: &[Var]) -> Vec<bool> {
        (0..1u32 << vars.len())
            .map(|bits| {
                m.eval(f, |x| {
                    vars.iter().position(|&v| v == x).map(|i| bits >> i & 1 == 1)
                })
                .unwrap()
            })
            .collect()
    }

    /// Build a BDD from a truth table by Shannon expansion on `node`.
    fn from_table(m: &mut BddManager, table: &[bool], vars: &[Var]) -> Bdd {
        fn rec(m: &mut BddManager, table: &[bool], vars: &[Var], depth: usize, offset: usize) -> Bdd {
            if depth == vars.len() {
                return m.constant(table[offset]);
            }
            // bit `depth` of the row index selects vars[depth]
            let lo = rec(m, table, vars, depth + 1, offset);
            let hi = rec(m, table, vars, depth + 1, offset | 1 << depth);
            let x = m.var(vars[depth]).unwrap();
            m.ite(x, hi, lo).unwrap()
        }
        rec(m, table, vars, 0, 0)
    }

    #[test]
    fn constants_and_variables() {
        let mut m = BddManager::new(2);
        let x = m.var(Var::plain(0)).unwrap();
        assert!(m.eval(x, |_| Some(true)).unwrap());
        assert_eq!(m.node_count(m.zero()), 0);
        assert_eq!(m.node_count(x), 1);
        assert_eq!(m.var(Var::plain(2)), Err(BddError::UnknownVariable(Var::plain(2))));
    }

    #[test]
    fn apply_identities() {
        let mut m = BddManager::new(2);
        let x = m.var(Var::plain(0)).unwrap();
        let y = m.var(Var::plain(1)).unwrap();
        let f = m.xor(x, y).unwrap();
        let one = m.one();
        assert_eq!(m.and(f, one).unwrap(), f);
        let nf = m.negate(f).unwrap();
        assert_eq!(m.or(f, nf).unwrap(), one);
        let other = BddManager::new(2);
        assert_eq!(m.and(f, other.one()), Err(BddError::ManagerMismatch));
    }

    #[test]
    fn restrict_examples() {
        let mut m = BddManager::new(2);
        let x = m.var(Var::plain(0)).unwrap();
        let y = m.var(Var::plain(1)).unwrap();
        assert_eq!(m.restrict(x, Var::plain(0), true).unwrap(), m.one());
        assert_eq!(m.restrict(y, Var::plain(0), true).unwrap(), y);
        let nx = m.negate(x).unwrap();
        // (not x)[x -> 0] is true, unlike (not x) and (not x)
        assert_eq!(m.restrict(nx, Var::plain(0), false).unwrap(), m.one());
    }

    #[test]
    fn exists_examples() {
        let mut m = BddManager::new(2);
        let x = m.var(Var::plain(0)).unwrap();
        let y = m.var(Var::plain(1)).unwrap();
        assert_eq!(m.exists(x, &[Var::plain(0)]).unwrap(), m.one());
        let xy = m.and(x, y).unwrap();
        assert_eq!(m.exists(xy, &[Var::plain(1)]).unwrap(), x);
    }

    #[test]
    fn rename_examples() {
        let mut m = BddManager::new(2);
        let v = m.var(Var::plain(0)).unwrap();
        let vp = m.var(Var::primed(0)).unwrap();
        assert_eq!(m.rename(v, &[(Var::plain(0), Var::primed(0))]).unwrap(), vp);
        let y = m.var(Var::plain(1)).unwrap();
        let f = m.or(v, y).unwrap();
        let g = m.rename(f, &[(Var::plain(0), Var::primed(0)), (Var::plain(1), Var::primed(1))]).unwrap();
        let back = m.rename(g, &[(Var::primed(0), Var::plain(0)), (Var::primed(1), Var::plain(1))]).unwrap();
        assert_eq!(back, f);
        let both = m.and(v, vp).unwrap();
        assert_eq!(
            m.rename(both, &[(Var::plain(0), Var::primed(0))]),
            Err(BddError::RenameCollision(Var::primed(0)))
        );
        // swapping is fine
        let sw = m.rename(f, &[(Var::plain(0), Var::plain(1)), (Var::plain(1), Var::plain(0))]).unwrap();
        assert_eq!(sw, f);
    }

    #[test]
    fn rename_can_move_variable_below_others() {
        let mut m = BddManager::new(3);
        let a = m.var(Var::plain(0)).unwrap();
        let c = m.var(Var::plain(2)).unwrap();
        let na = m.negate(a).unwrap();
        let f = m.and(na, c).unwrap();
        let g = m.rename(f, &[(Var::plain(0), Var::primed(2))]).unwrap();
        m.audit(g).unwrap();
        let vars = [Var::plain(2), Var::primed(2)];
        assert_eq!(truth_table(&m, g, &vars), vec![false, true, false, false]);
    }

    #[test]
    fn eval_and_all_sat() {
        let mut m = BddManager::new(2);
        let x = m.var(Var::plain(0)).unwrap();
        let y = m.var(Var::plain(1)).unwrap();
        let xy = m.and(x, y).unwrap();
        let over = [Var::plain(0), Var::plain(1)];
        assert_eq!(m.all_sat(xy, &over).unwrap(), vec![vec![true, true]]);
        assert_eq!(m.all_sat(m.one(), &over).unwrap().len(), 4);
        assert_eq!(
            m.all_sat(xy, &over[..1]),
            Err(BddError::VariableNotCovered(Var::plain(1)))
        );
        let xp = m.var(Var::primed(0)).unwrap();
        assert_eq!(
            m.eval_vector(xp, &StatusVector(vec![true, true])),
            Err(BddError::MissingAssignment(Var::primed(0)))
        );
        assert!(!m.eval_vector(m.zero(), &StatusVector(vec![true, true])).unwrap());
    }

    #[test]
    fn all_sat_respects_caller_order() {
        let mut m = BddManager::new(2);
        let x = m.var(Var::plain(0)).unwrap();
        let y = m.var(Var::plain(1)).unwrap();
        let ny = m.negate(y).unwrap();
        let f = m.and(x, ny).unwrap();
        // vectors are indexed like `over`, here (y, x)
        assert_eq!(
            m.all_sat(f, &[Var::plain(1), Var::plain(0)]).unwrap(),
            vec![vec![false, true]]
        );
    }

    #[test]
    fn dot_output_marks_edges() {
        let mut m = BddManager::new(1);
        let x = m.var(Var::plain(0)).unwrap();
        let dot = m.to_dot(x, |v| v.to_string());
        assert!(dot.contains("style=dashed"));
        assert!(dot.contains("style=solid"));
        assert!(dot.contains("label=\"x0\""));
    }

    #[test]
    fn gc_keeps_functions_and_invalidates_old_handles() {
        let mut m = BddManager::new(3);
        let vars: Vec<Var> = (0..3).map(Var::plain).collect();
        let a = m.var(vars[0]).unwrap();
        let b = m.var(vars[1]).unwrap();
        let c = m.var(vars[2]).unwrap();
        let ab = m.and(a, b).unwrap();
        let f = m.or(ab, c).unwrap();
        let _junk = m.xor(a, c).unwrap();
        let before = truth_table(&m, f, &vars);
        let roots = m.gc(&[f]).unwrap();
        assert_eq!(truth_table(&m, roots[0], &vars), before);
        assert_eq!(m.node_count(roots[0]), m.num_nodes() - 2);
        assert_eq!(m.negate(f), Err(BddError::ManagerMismatch));
    }

    #[test]
    fn frozen_manager_supports_parallel_reads() {
        let mut m = BddManager::new(4);
        let vars: Vec<Var> = (0..4).map(Var::plain).collect();
        let mut f = m.zero();
        for &v in &vars {
            let x = m.var(v).unwrap();
            f = m.xor(f, x).unwrap();
        }
        let frozen = m.freeze();
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..4)
                .map(|t| {
                    let fm = frozen.clone();
                    let vars = vars.clone();
                    s.spawn(move || {
                        (0..16u32)
                            .filter(|bits| (bits + t) % 4 == 0)
                            .all(|bits| {
                                let want = bits.count_ones() % 2 == 1;
                                fm.eval(f, |x| vars.iter().position(|&v| v == x).map(|i| bits >> i & 1 == 1))
                                    .unwrap()
                                    == want
                            })
                    })
                })
                .collect();
            assert!(handles.into_iter().all(|h| h.join().unwrap()));
        });
    }

    #[test]
    fn sat_count_matches_all_sat() {
        let mut m = BddManager::new(3);
        let vars: Vec<Var> = (0..3).map(Var::plain).collect();
        let a = m.var(vars[0]).unwrap();
        let c = m.var(vars[2]).unwrap();
        let f = m.or(a, c).unwrap();
        // over 3 plain variables only: levels 0..5 include primed ones, so
        // count over the plain ones explicitly
        assert_eq!(m.all_sat(f, &vars).unwrap().len(), 6);
        assert_eq!(m.sat_count(f, 6), 48.0);
    }

    #[test]
    fn shannon_and_minterm_constructions_share_roots() {
        let mut m = BddManager::new(3);
        let vars: Vec<Var> = (0..3).map(Var::plain).collect();
        for f in 0..256u32 {
            let table: Vec<bool> = (0..8).map(|r| f >> r & 1 == 1).collect();
            let a = from_table(&mut m, &table, &vars);
            let mut b = m.zero();
            for (row, &set) in table.iter().enumerate() {
                if set {
                    let mut cube = m.one();
                    for (i, &v) in vars.iter().enumerate() {
                        let x = m.var(v).unwrap();
                        let lit = if row >> i & 1 == 1 { x } else { m.negate(x).unwrap() };
                        cube = m.and(cube, lit).unwrap();
                    }
                    b = m.or(b, cube).unwrap();
                }
            }
            assert_eq!(a, b, "function {f:#010b}");
            m.audit(a).unwrap();
        }
    }

    fn arb_table(vars: usize) -> impl Strategy<Value = Vec<bool>> {
        proptest::collection::vec(any::<bool>(), 1 << vars)
    }

    proptest! {
        #[test]
        fn apply_matches_truth_tables(ta in arb_table(8), tb in arb_table(8)) {
            let mut m = BddManager::new(8);
            let vars: Vec<Var> = (0..8).map(Var::plain).collect();
            let a = from_table(&mut m, &ta, &vars);
            let b = from_table(&mut m, &tb, &vars);
            for (op, f) in [(BinOp::And, (|x: bool, y: bool| x && y) as fn(bool, bool) -> bool),
                            (BinOp::Or, |x, y| x || y), (BinOp::Xor, |x, y| x ^ y)] {
                let r = m.apply(op, a, b).unwrap();
                let want: Vec<bool> = ta.iter().zip(&tb).map(|(&x, &y)| f(x, y)).collect();
                prop_assert_eq!(truth_table(&m, r, &vars), want);
                prop_assert!(m.audit(r).is_ok());
            }
        }

        #[test]
        fn exists_matches_projection(t in arb_table(6), mask in 0u32..64) {
            let mut m = BddManager::new(6);
            let vars: Vec<Var> = (0..6).map(Var::plain).collect();
            let a = from_table(&mut m, &t, &vars);
            let qs: Vec<Var> = (0..6).filter(|i| mask >> i & 1 == 1).map(Var::plain).collect();
            let r = m.exists(a, &qs).unwrap();
            let want: Vec<bool> = (0..64usize).map(|row| {
                let free = row & !(mask as usize);
                (0..64usize).filter(|s| s & !(mask as usize) == 0).any(|s| t[free | s])
            }).collect();
            prop_assert_eq!(truth_table(&m, r, &vars), want);
        }

        #[test]
        fn restrict_matches_cofactor(t in arb_table(6), i in 0usize..6, v: bool) {
            let mut m = BddManager::new(6);
            let vars: Vec<Var> = (0..6).map(Var::plain).collect();
            let a = from_table(&mut m, &t, &vars);
            let r = m.restrict(a, vars[i], v).unwrap();
            prop_assert!(!m.support(r).contains(&vars[i]));
            let want: Vec<bool> = (0..64usize).map(|row| {
                let fixed = if v { row | 1 << i } else { row & !(1 << i) };
                t[fixed]
            }).collect();
            prop_assert_eq!(truth_table(&m, r, &vars), want);
        }

        #[test]
        fn rename_distributes_over_apply(ta in arb_table(3), tb in arb_table(3)) {
            let mut m = BddManager::new(3);
            let plain: Vec<Var> = (0..3).map(Var::plain).collect();
            let map: Vec<(Var, Var)> = (0..3).map(|i| (Var::plain(i), Var::primed(i))).collect();
            let a = from_table(&mut m, &ta, &plain);
            let b = from_table(&mut m, &tb, &plain);
            let ab = m.and(a, b).unwrap();
            let lhs = m.rename(ab, &map).unwrap();
            let ra = m.rename(a, &map).unwrap();
            let rb = m.rename(b, &map).unwrap();
            let rhs = m.and(ra, rb).unwrap();
            prop_assert_eq!(lhs, rhs);
            let primed: Vec<Var> = (0..3).map(Var::primed).collect();
            let want: Vec<bool> = ta.iter().zip(&tb).map(|(&x, &y)| x && y).collect();
            prop_assert_eq!(truth_table(&m, lhs, &primed), want);
        }

        #[test]
        fn all_sat_count_matches_brute_force(t in arb_table(10)) {
            let mut m = BddManager::new(10);
            let vars: Vec<Var> = (0..10).map(Var::plain).collect();
            let a = from_table(&mut m, &t, &vars);
            let sats = m.all_sat(a, &vars).unwrap();
            prop_assert_eq!(sats.len(), t.iter().filter(|&&b| b).count());
            for s in &sats {
                let row: usize = s.iter().enumerate().map(|(i, &b)| (b as usize) << i).sum();
                prop_assert!(t[row]);
            }
        }

        #[test]
        fn node_store_never_shrinks(ta in arb_table(4), tb in arb_table(4)) {
            let mut m = BddManager::new(4);
            let vars: Vec<Var> = (0..4).map(Var::plain).collect();
            let mut last = m.num_nodes();
            let a = from_table(&mut m, &ta, &vars);
            prop_assert!(m.num_nodes() >= last);
            last = m.num_nodes();
            let b = from_table(&mut m, &tb, &vars);
            prop_assert!(m.num_nodes() >= last);
            last = m.num_nodes();
            let r = m.xor(a, b).unwrap();
            prop_assert!(m.num_nodes() >= last);
            last = m.num_nodes();
            m.clear_caches();
            let _ = m.exists(r, &vars[..2]).unwrap();
            prop_assert!(m.num_nodes() >= last);
        }
    }
}
