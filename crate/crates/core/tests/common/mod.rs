//! Test oracles that share nothing with the library beyond its formula AST.
//!
//! Trees are generated here as gate lists and handed to the library as
//! text, so the oracle's gate evaluation never touches the parser output.
//! Satisfaction is computed as a truth table over all `2^n` status vectors,
//! following the recursive semantics literally: `MCS` enumerates strict
//! submasks, `[e ↦ v]` rewrites the vector.

#![allow(dead_code)]

use std::collections::HashMap;

use pfl::fault_tree::{FaultTree, StatusVector};
use pfl::logic::{sugar_mps, Connectives, Formula1};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    And,
    Or,
    Vot(usize),
}

#[derive(Debug, Clone)]
pub struct GenGate {
    pub name: String,
    pub kind: Kind,
    pub children: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct GenTree {
    pub text: String,
    pub top: String,
    pub gates: Vec<GenGate>,
    pub basics: Vec<String>,
}

impl GenTree {
    pub fn tree(&self) -> FaultTree {
        FaultTree::parse(&self.text).unwrap_or_else(|e| panic!("{e}\n{}", self.text))
    }

    pub fn events(&self) -> Vec<String> {
        self.gates.iter().map(|g| g.name.clone()).chain(self.basics.iter().cloned()).collect()
    }

    /// Status of `name` with failed basic events given by `failed`.
    pub fn eval(&self, name: &str, failed: &HashMap<String, bool>) -> bool {
        if let Some(&b) = failed.get(name) {
            return b;
        }
        let g = self.gates.iter().find(|g| g.name == name).expect("known event");
        let count = g.children.iter().filter(|c| self.eval(c, failed)).count();
        match g.kind {
            Kind::And => count == g.children.len(),
            Kind::Or => count >= 1,
            Kind::Vot(k) => count >= k,
        }
    }
}

/// Random DAG-shaped tree with at most `max_be` basic events and gate depth
/// at most `max_depth`. Finished gates are reused to create sharing.
pub fn random_tree(rng: &mut StdRng, max_be: usize, max_depth: usize) -> GenTree {
    let pool: Vec<String> = (0..rng.gen_range(1..=max_be)).map(|i| format!("b{i}")).collect();
    if pool.len() == 1 && rng.gen_bool(0.5) {
        return GenTree {
            text: "toplevel b0;".into(),
            top: "b0".into(),
            gates: Vec::new(),
            basics: pool,
        };
    }
    let mut gates: Vec<GenGate> = Vec::new();
    let top = build_gate(rng, &pool, &mut gates, 0, max_depth);
    // Hang unused events off random gates so the tree has the whole pool.
    for b in &pool {
        if !gates.iter().any(|g| g.children.contains(b)) {
            let i = rng.gen_range(0..gates.len());
            gates[i].children.push(b.clone());
        }
    }
    let mut used: Vec<String> = Vec::new();
    for g in &gates {
        for c in &g.children {
            if pool.contains(c) && !used.contains(c) {
                used.push(c.clone());
            }
        }
    }
    let mut text = format!("toplevel {top};\n");
    for g in &gates {
        let kind = match g.kind {
            Kind::And => "and".to_string(),
            Kind::Or => "or".to_string(),
            Kind::Vot(k) => format!("{k}of{}", g.children.len()),
        };
        text.push_str(&format!("{} {} {};\n", g.name, kind, g.children.join(" ")));
    }
    GenTree {
        text,
        top,
        gates,
        basics: used,
    }
}

fn build_gate(rng: &mut StdRng, pool: &[String], gates: &mut Vec<GenGate>, depth: usize, max_depth: usize) -> String {
    let name = format!("g{}", gates.len());
    // Gates still under construction have no children yet; reusing one would close a cycle.
    let finished: Vec<String> = gates.iter().filter(|g| !g.children.is_empty()).map(|g| g.name.clone()).collect();
    gates.push(GenGate {
        name: name.clone(),
        kind: Kind::Or,
        children: Vec::new(),
    });
    let slot = gates.len() - 1;
    let arity = rng.gen_range(1..=4usize).min(pool.len() + finished.len() + 1).max(1);
    let mut children: Vec<String> = Vec::new();
    let mut attempts = 0;
    while children.len() < arity && attempts < 20 {
        attempts += 1;
        let roll: f64 = rng.gen();
        let child = if depth + 1 < max_depth && roll < 0.3 {
            build_gate(rng, pool, gates, depth + 1, max_depth)
        } else if roll < 0.45 && !finished.is_empty() {
            finished.choose(rng).unwrap().clone()
        } else {
            pool.choose(rng).unwrap().clone()
        };
        if !children.contains(&child) {
            children.push(child);
        }
    }
    let kind = match rng.gen_range(0..3) {
        0 => Kind::And,
        1 => Kind::Or,
        _ => Kind::Vot(rng.gen_range(1..=children.len())),
    };
    gates[slot].kind = kind;
    gates[slot].children = children;
    name
}

/// Random layer-one formula of the given depth over `events`; `[e ↦ v]`
/// targets are drawn from `basics`.
pub fn random_formula(rng: &mut StdRng, events: &[String], basics: &[String], depth: usize) -> Formula1 {
    if depth == 0 || rng.gen_bool(0.2) {
        return Formula1::atom(events.choose(rng).unwrap().clone());
    }
    let sub = |rng: &mut StdRng| random_formula(rng, events, basics, depth - 1);
    match rng.gen_range(0..8) {
        0 => sub(rng).not(),
        1 => sub(rng).and(sub(rng)),
        2 => sub(rng).or(sub(rng)),
        3 => sub(rng).set0(basics.choose(rng).unwrap().clone()),
        4 => sub(rng).set1(basics.choose(rng).unwrap().clone()),
        5 => sub(rng).mcs(),
        6 => sugar_mps(sub(rng)),
        _ => sub(rng).iff(sub(rng)),
    }
}

/// Truth table of `phi` over vectors indexed like `order`: entry `m` has
/// basic event `order[i]` failed iff bit `i` of `m` is set.
pub fn truth_table(gt: &GenTree, order: &[String], phi: &Formula1) -> Vec<bool> {
    let n = order.len();
    let size = 1usize << n;
    let index = |e: &str| order.iter().position(|o| o == e);
    match phi {
        Formula1::Atom(e) => (0..size)
            .map(|m| {
                let failed: HashMap<String, bool> =
                    order.iter().enumerate().map(|(i, o)| (o.clone(), m >> i & 1 == 1)).collect();
                gt.eval(e, &failed)
            })
            .collect(),
        Formula1::Not(a) => truth_table(gt, order, a).into_iter().map(|b| !b).collect(),
        Formula1::And(a, b) => {
            let (x, y) = (truth_table(gt, order, a), truth_table(gt, order, b));
            x.iter().zip(&y).map(|(p, q)| *p && *q).collect()
        }
        Formula1::Set0(a, e) | Formula1::Set1(a, e) => {
            let t = truth_table(gt, order, a);
            let i = index(e).expect("assignments target basic events");
            let one = matches!(phi, Formula1::Set1(..));
            (0..size)
                .map(|m| t[if one { m | 1 << i } else { m & !(1 << i) }])
                .collect()
        }
        Formula1::Mcs(a) => {
            let t = truth_table(gt, order, a);
            (0..size)
                .map(|m| {
                    if !t[m] {
                        return false;
                    }
                    let mut s = m;
                    while s != 0 {
                        s = (s - 1) & m;
                        if t[s] {
                            return false;
                        }
                    }
                    true
                })
                .collect()
        }
    }
}

pub fn vector(m: usize, n: usize) -> StatusVector {
    StatusVector((0..n).map(|i| m >> i & 1 == 1).collect())
}

/// Minimal cut sets: failing vectors with no failing strict subvector.
pub fn minimal_cut_sets(gt: &GenTree, order: &[String]) -> Vec<StatusVector> {
    minimal_where(gt, order, true)
}

/// Path sets read literally: operational vectors all of whose strict
/// subvectors fail.
pub fn minimal_path_sets(gt: &GenTree, order: &[String]) -> Vec<StatusVector> {
    minimal_where(gt, order, false)
}

fn minimal_where(gt: &GenTree, order: &[String], top_value: bool) -> Vec<StatusVector> {
    let n = order.len();
    let top_at = |m: usize| {
        let failed: HashMap<String, bool> =
            order.iter().enumerate().map(|(i, o)| (o.clone(), m >> i & 1 == 1)).collect();
        gt.eval(&gt.top, &failed)
    };
    let mut out: Vec<StatusVector> = (0..1usize << n)
        .filter(|&m| {
            top_at(m) == top_value
                && (0..1usize << n).filter(|&s| s != m && s & m == s).all(|s| top_at(s) != top_value)
        })
        .map(|m| vector(m, n))
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// `Σ_b μ_ρ(b) · t[b]`.
pub fn direct_sum(table: &[bool], rho: &[f64]) -> f64 {
    table
        .iter()
        .enumerate()
        .filter(|(_, &t)| t)
        .map(|(m, _)| {
            rho.iter()
                .enumerate()
                .map(|(i, &p)| if m >> i & 1 == 1 { p } else { 1.0 - p })
                .product::<f64>()
        })
        .sum()
}

/// Library basic-event order as owned strings.
pub fn order_of(ft: &FaultTree) -> Vec<String> {
    ft.basic_event_names().iter().map(|s| s.to_string()).collect()
}

/// `P(a ∧ b) / P(b)` by direct summation, `None` when `P(b) = 0`.
pub fn conditional(gt: &GenTree, order: &[String], phi: &Formula1, cond: &Formula1, rho: &[f64]) -> Option<f64> {
    let den = direct_sum(&truth_table(gt, order, cond), rho);
    if den == 0.0 {
        return None;
    }
    let num = direct_sum(&truth_table(gt, order, &phi.clone().and(cond.clone())), rho);
    Some(num / den)
}
