//! Compilation of fault-tree events and layer-one formulae into BDDs.
//!
//! Basic event `i` of the tree becomes the plain variable [`Var::plain`]`(i)`.
//! Primed copies are only used transiently by the minimal-cut-set encoding,
//! so every BDD returned here mentions plain variables only.

use std::collections::HashMap;

use thiserror::Error;

use crate::bdd::{Bdd, BddError, BddManager, Var};
use crate::fault_tree::{EventId, FaultTree, Gate};
use crate::logic::Formula1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("`{0}` is not a basic event of this tree; prune the module first")]
    NotBasic(String),
    #[error(transparent)]
    Bdd(#[from] BddError),
}

/// `b̄′ ⊂ b̄`: every primed bit implies its plain twin and at least one pair
/// differs. `v` holds the larger vector's variables, `v_sub` the smaller's.
pub fn subset_constraint(mgr: &mut BddManager, v: &[Var], v_sub: &[Var]) -> Result<Bdd, BddError> {
    if v.len() != v_sub.len() {
        return Err(BddError::ArityMismatch(v.len(), v_sub.len()));
    }
    let mut included = mgr.one();
    let mut differs = mgr.zero();
    for (&x, &xs) in v.iter().zip(v_sub) {
        let big = mgr.var(x)?;
        let small = mgr.var(xs)?;
        let not_small = mgr.negate(small)?;
        let imp = mgr.or(not_small, big)?;
        included = mgr.and(included, imp)?;
        let ne = mgr.xor(big, small)?;
        differs = mgr.or(differs, ne)?;
    }
    mgr.and(included, differs)
}

/// Owns a tree and a manager and memoizes event and formula translations.
#[derive(Debug)]
pub struct Translator {
    ft: FaultTree,
    mgr: BddManager,
    events: HashMap<EventId, Bdd>,
    formulas: HashMap<Formula1, Bdd>,
    subset: Option<Bdd>,
}

impl Translator {
    pub fn new(ft: FaultTree) -> Self {
        let mgr = BddManager::new(ft.num_basic());
        Translator {
            ft,
            mgr,
            events: HashMap::new(),
            formulas: HashMap::new(),
            subset: None,
        }
    }

    pub fn tree(&self) -> &FaultTree {
        &self.ft
    }

    pub fn manager(&self) -> &BddManager {
        &self.mgr
    }

    pub fn manager_mut(&mut self) -> &mut BddManager {
        &mut self.mgr
    }

    pub fn into_manager(self) -> BddManager {
        self.mgr
    }

    /// Plain variables of all basic events, in index order.
    pub fn plain_vars(&self) -> Vec<Var> {
        (0..self.ft.num_basic()).map(Var::plain).collect()
    }

    /// Forget cached translations; the node store is kept.
    pub fn clear_cache(&mut self) {
        self.events.clear();
        self.formulas.clear();
        self.subset = None;
    }

    fn require(&self, name: &str) -> Result<EventId, TranslateError> {
        self.ft
            .event(name)
            .ok_or_else(|| TranslateError::UnknownEvent(name.to_string()))
    }

    pub fn translate_event(&mut self, name: &str) -> Result<Bdd, TranslateError> {
        let e = self.require(name)?;
        self.event_bdd(e)
    }

    fn event_bdd(&mut self, e: EventId) -> Result<Bdd, TranslateError> {
        if let Some(&b) = self.events.get(&e) {
            return Ok(b);
        }
        for x in self.ft.post_order(e) {
            if self.events.contains_key(&x) {
                continue;
            }
            let kids: Vec<Bdd> = self.ft.children(x).iter().map(|c| self.events[c]).collect();
            let b = match self.ft.gate(x) {
                Gate::Basic => {
                    let i = self.ft.be_index(x).expect("leaf has an index");
                    self.mgr.var(Var::plain(i))?
                }
                Gate::And => kids.iter().try_fold(self.mgr.one(), |acc, &k| self.mgr.and(acc, k))?,
                Gate::Or => kids.iter().try_fold(self.mgr.zero(), |acc, &k| self.mgr.or(acc, k))?,
                Gate::Vot { k, .. } => self.threshold(&kids, k)?,
            };
            self.events.insert(x, b);
        }
        Ok(self.events[&e])
    }

    /// At least `k` of `kids` hold: `T(j, k) = ite(c_j, T(j+1, k-1), T(j+1, k))`.
    fn threshold(&mut self, kids: &[Bdd], k: usize) -> Result<Bdd, BddError> {
        let n = kids.len();
        // row[r] = T(j, r) for the current j, built from j = n down to 0
        let mut row: Vec<Bdd> = (0..=k).map(|r| self.mgr.constant(r == 0)).collect();
        for j in (0..n).rev() {
            let mut next = Vec::with_capacity(k + 1);
            next.push(self.mgr.one());
            for r in 1..=k {
                next.push(if n - j < r {
                    self.mgr.zero()
                } else {
                    self.mgr.ite(kids[j], row[r - 1], row[r])?
                });
            }
            row = next;
        }
        Ok(row[k])
    }

    fn be_var(&self, name: &str) -> Result<Var, TranslateError> {
        let e = self.require(name)?;
        match self.ft.be_index(e) {
            Some(i) => Ok(Var::plain(i)),
            None => Err(TranslateError::NotBasic(name.to_string())),
        }
    }

    fn subset(&mut self) -> Result<Bdd, BddError> {
        if let Some(s) = self.subset {
            return Ok(s);
        }
        let n = self.ft.num_basic();
        let v: Vec<Var> = (0..n).map(Var::plain).collect();
        let vp: Vec<Var> = (0..n).map(Var::primed).collect();
        let s = subset_constraint(&mut self.mgr, &v, &vp)?;
        self.subset = Some(s);
        Ok(s)
    }

    /// Assignment targets must already be basic events; intermediate targets
    /// are handled by pruning the tree first.
    pub fn translate_formula(&mut self, phi: &Formula1) -> Result<Bdd, TranslateError> {
        if let Some(&b) = self.formulas.get(phi) {
            return Ok(b);
        }
        let b = match phi {
            Formula1::Atom(e) => self.translate_event(e)?,
            Formula1::Not(a) => {
                let a = self.translate_formula(a)?;
                self.mgr.negate(a)?
            }
            Formula1::And(a, b) => {
                let a = self.translate_formula(a)?;
                let b = self.translate_formula(b)?;
                self.mgr.and(a, b)?
            }
            Formula1::Set0(a, e) | Formula1::Set1(a, e) => {
                let x = self.be_var(e)?;
                let a = self.translate_formula(a)?;
                self.mgr.restrict(a, x, matches!(phi, Formula1::Set1(..)))?
            }
            Formula1::Mcs(a) => {
                // B ∧ ¬∃V′. (V′ ⊂ V ∧ B[V ↷ V′])
                let inner = self.translate_formula(a)?;
                let n = self.ft.num_basic();
                let map: Vec<(Var, Var)> = (0..n).map(|i| (Var::plain(i), Var::primed(i))).collect();
                let primed: Vec<Var> = map.iter().map(|&(_, p)| p).collect();
                let shifted = self.mgr.rename(inner, &map)?;
                let s = self.subset()?;
                let smaller = self.mgr.and(s, shifted)?;
                let exists = self.mgr.exists(smaller, &primed)?;
                let not_exists = self.mgr.negate(exists)?;
                self.mgr.and(inner, not_exists)?
            }
        };
        self.formulas.insert(phi.clone(), b);
        Ok(b)
    }
}
