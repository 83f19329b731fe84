//! Template query language.
//!
//! ```text
//! query      := ("assume:" statement*)? task
//! task       := ("check:" | "compute:" | "computeall:") expr
//! statement  := ("set" NAME "=" ("0" | "1") | "setp" NAME "=" NUMBER | expr) ";"?
//! expr       := impl ("iff" impl)*
//! impl       := or ("impl" impl)?
//! or         := and ("or" and)*
//! and        := unary ("and" unary)*
//! unary      := "not" unary | primary
//! primary    := NAME | "(" expr ")" | "MCS" "[" expr "]" | "MPS" "[" expr "]"
//!             | "IDP" "[" expr "," expr "]"
//!             | "P" "[" expr ("|" expr)? "]" (CMP NUMBER)?
//! CMP        := "<" | "<=" | "=" | ">=" | ">" | "≤" | "≥" | "\leq" | "\geq"
//! ```
//!
//! Names follow the fault-tree lexicon (letters, digits, `_`, `/`); reserved
//! words and names starting with a digit must be double-quoted. `//` starts
//! a comment. Newlines and `;` between statements are optional.
//!
//! Lowering wraps the task formula as follows: premises become the
//! antecedent of an implication, `set` fixes events inside every layer-one
//! subformula, and `setp` assignments wrap the result in the listed order.

use std::fmt::Write as _;

use thiserror::Error;

use crate::fault_tree::{FaultTree, StatusVector};
use crate::logic::{
    sugar_mps, well_formed, AnyFormula, Cmp, Connectives, Formula1, Formula2, Formula3, LogicError,
};
use crate::prob::EvalResult;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LangError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: second `{block}` block")]
    DuplicateBlock {
        line: usize,
        column: usize,
        block: String,
    },
    #[error("query has no check, compute or computeall block")]
    MissingTask,
    #[error("probability operators cannot be nested: {0}")]
    NestingDisallowed(String),
    #[error("{0}")]
    LayerMismatch(String),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Untyped expression as written.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Name(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Impl(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Mcs(Box<Expr>),
    Mps(Box<Expr>),
    Idp(Box<Expr>, Box<Expr>),
    /// `P[φ | cond]`, optionally compared against a threshold.
    Prob {
        phi: Box<Expr>,
        cond: Option<Box<Expr>>,
        threshold: Option<(Cmp, f64)>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Assumption {
    SetBool(String, bool),
    SetProb(String, f64),
    Premise(Expr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Check,
    Compute,
    ComputeAll,
}

impl TaskKind {
    pub fn keyword(self) -> &'static str {
        match self {
            TaskKind::Check => "check",
            TaskKind::Compute => "compute",
            TaskKind::ComputeAll => "computeall",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub assumptions: Vec<Assumption>,
    pub kind: TaskKind,
    pub task: Expr,
    /// Line and column of the task keyword.
    pub task_pos: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Num(f64),
    Block(String),
    Cmp(Cmp),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Bar,
    Comma,
    Semi,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    quoted: bool,
    line: usize,
    column: usize,
}

const RESERVED: &[&str] = &["not", "and", "or", "impl", "iff", "set", "setp", "MCS", "MPS", "IDP", "P"];
const BLOCKS: &[&str] = &["assume", "check", "compute", "computeall"];

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '/'
}

fn lex(text: &str) -> Result<(Vec<Token>, (usize, usize)), LangError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, column, message: String| LangError::Parse { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok, quoted, len: usize, i: &mut usize, col: &mut usize| {
            toks.push(Token {
                tok,
                quoted,
                line: l0,
                column: c0,
            });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '/' if chars.get(i + 1) == Some(&'/') => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '[' => push(Tok::LBrack, false, 1, &mut i, &mut col),
            ']' => push(Tok::RBrack, false, 1, &mut i, &mut col),
            '(' => push(Tok::LParen, false, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, false, 1, &mut i, &mut col),
            '|' => push(Tok::Bar, false, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, false, 1, &mut i, &mut col),
            ';' => push(Tok::Semi, false, 1, &mut i, &mut col),
            '≤' => push(Tok::Cmp(Cmp::Le), false, 1, &mut i, &mut col),
            '≥' => push(Tok::Cmp(Cmp::Ge), false, 1, &mut i, &mut col),
            '=' => push(Tok::Cmp(Cmp::Eq), false, 1, &mut i, &mut col),
            '<' | '>' => {
                let eq = chars.get(i + 1) == Some(&'=');
                let cmp = match (c, eq) {
                    ('<', true) => Cmp::Le,
                    ('<', false) => Cmp::Lt,
                    ('>', true) => Cmp::Ge,
                    _ => Cmp::Gt,
                };
                push(Tok::Cmp(cmp), false, 1 + eq as usize, &mut i, &mut col);
            }
            '\\' => {
                let word: String = chars[i + 1..].iter().take_while(|c| c.is_alphabetic()).collect();
                let cmp = match word.as_str() {
                    "leq" | "le" => Cmp::Le,
                    "geq" | "ge" => Cmp::Ge,
                    "lt" => Cmp::Lt,
                    "gt" => Cmp::Gt,
                    _ => return Err(err(l0, c0, format!("unknown operator `\\{word}`"))),
                };
                push(Tok::Cmp(cmp), false, 1 + word.len(), &mut i, &mut col);
            }
            '"' => {
                let end = chars[i + 1..]
                    .iter()
                    .position(|&c| c == '"' || c == '\n')
                    .filter(|&p| chars[i + 1 + p] == '"')
                    .ok_or_else(|| err(l0, c0, "unterminated quoted name".into()))?;
                let name: String = chars[i + 1..i + 1 + end].iter().collect();
                if name.is_empty() {
                    return Err(err(l0, c0, "empty quoted name".into()));
                }
                push(Tok::Name(name), true, end + 2, &mut i, &mut col);
            }
            c if c.is_ascii_digit() || c == '.' => {
                let mut j = i;
                while j < chars.len()
                    && (chars[j].is_ascii_digit()
                        || chars[j] == '.'
                        || ((chars[j] == 'e' || chars[j] == 'E') && j > i)
                        || ((chars[j] == '-' || chars[j] == '+') && matches!(chars[j - 1], 'e' | 'E')))
                {
                    j += 1;
                }
                let s: String = chars[i..j].iter().collect();
                if j < chars.len() && is_ident(chars[j]) {
                    return Err(err(l0, c0, "names starting with a digit must be quoted".into()));
                }
                let v: f64 = s.parse().map_err(|_| err(l0, c0, format!("malformed number `{s}`")))?;
                push(Tok::Num(v), false, j - i, &mut i, &mut col);
            }
            c if is_ident(c) => {
                let mut j = i;
                while j < chars.len() && is_ident(chars[j]) {
                    j += 1;
                }
                let word: String = chars[i..j].iter().collect();
                if chars.get(j) == Some(&':') && BLOCKS.contains(&word.as_str()) {
                    push(Tok::Block(word), false, j - i + 1, &mut i, &mut col);
                } else {
                    push(Tok::Name(word), false, j - i, &mut i, &mut col);
                }
            }
            other => return Err(err(l0, c0, format!("unexpected character `{other}`"))),
        }
    }
    Ok((toks, (line, col)))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek().map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn error(&self, message: impl Into<String>) -> LangError {
        let (line, column) = self.here();
        LangError::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Name(n), quoted: false, .. }) if n == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let hit = self.is_word(w);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        let hit = self.peek().is_some_and(|t| &t.tok == tok);
        if hit {
            self.pos += 1;
        }
        hit
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), LangError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn name(&mut self) -> Result<String, LangError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Name(n),
                quoted,
                ..
            }) if *quoted || !RESERVED.contains(&n.as_str()) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected an event name")),
        }
    }

    fn number(&mut self) -> Result<f64, LangError> {
        match self.peek() {
            Some(Token { tok: Tok::Num(v), .. }) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error("expected a number")),
        }
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.implication()?;
        while self.eat_word("iff") {
            let rhs = self.implication()?;
            lhs = Expr::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Expr, LangError> {
        let lhs = self.disjunction()?;
        if self.eat_word("impl") {
            let rhs = self.implication()?;
            return Ok(Expr::Impl(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.conjunction()?;
        while self.eat_word("or") {
            let rhs = self.conjunction()?;
            lhs = Expr::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Expr, LangError> {
        let mut lhs = self.unary()?;
        while self.eat_word("and") {
            let rhs = self.unary()?;
            lhs = Expr::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, LangError> {
        if self.eat_word("not") {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.primary()
    }

    fn bracketed(&mut self) -> Result<Expr, LangError> {
        self.expect(Tok::LBrack, "`[`")?;
        let e = self.expr()?;
        self.expect(Tok::RBrack, "`]`")?;
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr, LangError> {
        if self.eat(&Tok::LParen) {
            let e = self.expr()?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(e);
        }
        if self.eat_word("MCS") {
            return Ok(Expr::Mcs(Box::new(self.bracketed()?)));
        }
        if self.eat_word("MPS") {
            return Ok(Expr::Mps(Box::new(self.bracketed()?)));
        }
        if self.eat_word("IDP") {
            self.expect(Tok::LBrack, "`[`")?;
            let a = self.expr()?;
            self.expect(Tok::Comma, "`,`")?;
            let b = self.expr()?;
            self.expect(Tok::RBrack, "`]`")?;
            return Ok(Expr::Idp(Box::new(a), Box::new(b)));
        }
        if self.eat_word("P") {
            self.expect(Tok::LBrack, "`[`")?;
            let phi = Box::new(self.expr()?);
            let cond = if self.eat(&Tok::Bar) {
                Some(Box::new(self.expr()?))
            } else {
                None
            };
            self.expect(Tok::RBrack, "`]`")?;
            let threshold = match self.peek() {
                Some(Token { tok: Tok::Cmp(c), .. }) => {
                    let c = *c;
                    self.pos += 1;
                    Some((c, self.number()?))
                }
                _ => None,
            };
            return Ok(Expr::Prob { phi, cond, threshold });
        }
        Ok(Expr::Name(self.name()?))
    }

    fn statement(&mut self) -> Result<Assumption, LangError> {
        for (word, boolean) in [("set", true), ("setp", false)] {
            if self.eat_word(word) {
                let name = self.name()?;
                self.expect(Tok::Cmp(Cmp::Eq), "`=`")?;
                let at = self.here();
                let v = self.number()?;
                let bad = |message: String| LangError::Parse {
                    line: at.0,
                    column: at.1,
                    message,
                };
                return if boolean {
                    match v {
                        0.0 => Ok(Assumption::SetBool(name, false)),
                        1.0 => Ok(Assumption::SetBool(name, true)),
                        _ => Err(bad(format!("`set` takes 0 or 1, got {v}"))),
                    }
                } else if (0.0..=1.0).contains(&v) {
                    Ok(Assumption::SetProb(name, v))
                } else {
                    Err(bad(format!("probability {v} is outside [0, 1]")))
                };
            }
        }
        Ok(Assumption::Premise(self.expr()?))
    }

    fn query(&mut self) -> Result<Query, LangError> {
        let mut assumptions = Vec::new();
        let mut assumed = false;
        let mut task: Option<Query> = None;
        while let Some(t) = self.peek().cloned() {
            let Tok::Block(block) = &t.tok else {
                return Err(self.error("expected `assume:`, `check:`, `compute:` or `computeall:`"));
            };
            self.pos += 1;
            let duplicate = || LangError::DuplicateBlock {
                line: t.line,
                column: t.column,
                block: block.clone(),
            };
            if block == "assume" {
                if assumed {
                    return Err(duplicate());
                }
                if task.is_some() {
                    return Err(LangError::Parse {
                        line: t.line,
                        column: t.column,
                        message: "`assume:` must come before the task".into(),
                    });
                }
                assumed = true;
                while !matches!(self.peek(), None | Some(Token { tok: Tok::Block(_), .. })) {
                    if self.eat(&Tok::Semi) {
                        continue;
                    }
                    assumptions.push(self.statement()?);
                }
                continue;
            }
            if task.is_some() {
                return Err(duplicate());
            }
            let kind = match block.as_str() {
                "check" => TaskKind::Check,
                "compute" => TaskKind::Compute,
                _ => TaskKind::ComputeAll,
            };
            let expr = self.expr()?;
            while self.eat(&Tok::Semi) {}
            if let Some(t) = self.peek() {
                if !matches!(t.tok, Tok::Block(_)) {
                    return Err(self.error("unexpected input after the task expression"));
                }
            }
            task = Some(Query {
                assumptions: Vec::new(),
                kind,
                task: expr,
                task_pos: (t.line, t.column),
            });
        }
        let mut q = task.ok_or(LangError::MissingTask)?;
        q.assumptions = assumptions;
        Ok(q)
    }
}

pub fn parse_query(text: &str) -> Result<Query, LangError> {
    let (toks, end) = lex(text)?;
    Parser { toks, pos: 0, end }.query()
}

/// What to do with a lowered query.
#[derive(Debug, Clone, PartialEq)]
pub enum Lowered {
    Check(Formula2),
    Compute(Formula3),
    ComputeAll(Formula1),
}

impl Lowered {
    pub fn kind(&self) -> TaskKind {
        match self {
            Lowered::Check(_) => TaskKind::Check,
            Lowered::Compute(_) => TaskKind::Compute,
            Lowered::ComputeAll(_) => TaskKind::ComputeAll,
        }
    }

    pub fn formula(&self) -> AnyFormula {
        match self {
            Lowered::Check(f) => f.clone().into(),
            Lowered::Compute(f) => f.clone().into(),
            Lowered::ComputeAll(f) => f.clone().into(),
        }
    }
}

fn layer_name(l: u8) -> &'static str {
    match l {
        1 => "a status-vector formula",
        2 => "a probability assertion",
        _ => "a probability value",
    }
}

fn mismatch(context: &str, want: u8, got: &AnyFormula) -> LangError {
    LangError::LayerMismatch(format!(
        "{context} needs {}, found {} `{got}`",
        layer_name(want),
        layer_name(got.layer())
    ))
}

fn layer1(e: &Expr, context: &str) -> Result<Formula1, LangError> {
    match lower_expr(e)? {
        AnyFormula::L1(f) => Ok(f),
        other => Err(LangError::NestingDisallowed(format!("{context} contains `{other}`"))),
    }
}

fn lower_expr(e: &Expr) -> Result<AnyFormula, LangError> {
    let bin = |a: &Expr, b: &Expr, f: fn(AnyFormula, AnyFormula) -> Result<AnyFormula, LogicError>| {
        let (a, b) = (lower_expr(a)?, lower_expr(b)?);
        if a.layer() == 3 || b.layer() == 3 {
            let v = if a.layer() == 3 { a } else { b };
            return Err(LangError::LayerMismatch(format!(
                "Boolean operators cannot combine the probability value `{v}`; add a comparison"
            )));
        }
        f(a, b).map_err(|err| match err {
            LogicError::LayerMismatch(..) => LangError::LayerMismatch(
                "Boolean operators cannot mix status-vector formulas with probability assertions".into(),
            ),
            other => other.into(),
        })
    };
    Ok(match e {
        Expr::Name(n) => Formula1::atom(n.clone()).into(),
        Expr::Not(a) => match lower_expr(a)? {
            AnyFormula::L1(f) => f.not().into(),
            AnyFormula::L2(f) => f.not().into(),
            v @ AnyFormula::L3(_) => {
                return Err(LangError::LayerMismatch(format!("`not` cannot apply to the probability value `{v}`")))
            }
        },
        Expr::And(a, b) => bin(a, b, |x, y| match (x, y) {
            (AnyFormula::L1(x), AnyFormula::L1(y)) => Ok(x.and(y).into()),
            (AnyFormula::L2(x), AnyFormula::L2(y)) => Ok(x.and(y).into()),
            (x, y) => Err(LogicError::LayerMismatch(x.layer(), y.layer())),
        })?,
        Expr::Or(a, b) => bin(a, b, crate::logic::sugar_or)?,
        Expr::Impl(a, b) => bin(a, b, crate::logic::sugar_implies)?,
        Expr::Iff(a, b) => bin(a, b, crate::logic::sugar_iff)?,
        Expr::Mcs(a) => layer1(a, "MCS[...]")?.mcs().into(),
        Expr::Mps(a) => sugar_mps(layer1(a, "MPS[...]")?).into(),
        Expr::Idp(a, b) => Formula2::idp(layer1(a, "IDP[...]")?, layer1(b, "IDP[...]")?).into(),
        Expr::Prob { phi, cond, threshold } => {
            let phi = layer1(phi, "P[...]")?;
            let cond = cond.as_deref().map(|c| layer1(c, "P[...]")).transpose()?;
            match threshold {
                Some((cmp, p)) => Formula2::PrCmp {
                    cmp: *cmp,
                    p: *p,
                    phi,
                    cond,
                }
                .into(),
                None => Formula3::PrVal { phi, cond }.into(),
            }
        }
    })
}

fn set_bools1(f: Formula1, sets: &[(String, bool)]) -> Formula1 {
    sets.iter().fold(f, |f, (e, v)| f.set(e.clone(), *v))
}

fn set_bools2(f: Formula2, sets: &[(String, bool)]) -> Formula2 {
    match f {
        Formula2::Not(a) => set_bools2(*a, sets).not(),
        Formula2::And(a, b) => set_bools2(*a, sets).and(set_bools2(*b, sets)),
        Formula2::PrCmp { cmp, p, phi, cond } => Formula2::PrCmp {
            cmp,
            p,
            phi: set_bools1(phi, sets),
            cond: cond.map(|c| set_bools1(c, sets)),
        },
        Formula2::SetP(a, e, q) => set_bools2(*a, sets).setp(e, q),
        Formula2::Idp(a, b) => Formula2::idp(set_bools1(a, sets), set_bools1(b, sets)),
    }
}

fn set_bools3(f: Formula3, sets: &[(String, bool)]) -> Formula3 {
    match f {
        Formula3::PrVal { phi, cond } => Formula3::PrVal {
            phi: set_bools1(phi, sets),
            cond: cond.map(|c| set_bools1(c, sets)),
        },
        Formula3::SetP(a, e, q) => set_bools3(*a, sets).setp(e, q),
    }
}

/// Lower a parsed query to a formula and check it against `ft`.
pub fn lower_query(q: &Query, ft: &FaultTree) -> Result<Lowered, LangError> {
    let task = lower_expr(&q.task)?;
    let mut bools = Vec::new();
    let mut probs = Vec::new();
    let mut premises = Vec::new();
    for a in &q.assumptions {
        match a {
            Assumption::SetBool(e, v) => bools.push((e.clone(), *v)),
            Assumption::SetProb(e, p) => probs.push((e.clone(), *p)),
            Assumption::Premise(e) => premises.push(lower_expr(e)?),
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for e in bools.iter().map(|(e, _)| e).chain(probs.iter().map(|(e, _)| e)) {
        if !seen.insert(e) {
            return Err(LogicError::RepeatedTarget(e.clone()).into());
        }
    }
    let lowered = match (q.kind, task) {
        (TaskKind::Check, AnyFormula::L2(psi)) => {
            let mut body = psi;
            if let Some(premise) = conjoin2(premises)? {
                body = premise.implies(body);
            }
            Lowered::Check(set_bools2(body, &bools).with_mappings(&probs)?)
        }
        (TaskKind::Compute, AnyFormula::L3(xi)) => {
            if !premises.is_empty() {
                return Err(LangError::LayerMismatch(
                    "`compute:` takes no premises; only `set` and `setp` assumptions apply to a value".into(),
                ));
            }
            Lowered::Compute(set_bools3(xi, &bools).with_mappings(&probs)?)
        }
        (TaskKind::ComputeAll, AnyFormula::L1(phi)) => {
            if !probs.is_empty() {
                return Err(LangError::LayerMismatch(
                    "`setp` does not apply to `computeall:`, which enumerates status vectors".into(),
                ));
            }
            let mut body = phi;
            if let Some(premise) = conjoin1(premises)? {
                body = premise.implies(body);
            }
            Lowered::ComputeAll(set_bools1(body, &bools))
        }
        (kind, other) => {
            let want = match kind {
                TaskKind::Check => 2,
                TaskKind::Compute => 3,
                TaskKind::ComputeAll => 1,
            };
            return Err(mismatch(&format!("`{}:`", kind.keyword()), want, &other));
        }
    };
    well_formed(&lowered.formula(), ft)?;
    Ok(lowered)
}

fn conjoin2(premises: Vec<AnyFormula>) -> Result<Option<Formula2>, LangError> {
    let mut acc: Option<Formula2> = None;
    for p in premises {
        let AnyFormula::L2(f) = p else {
            return Err(mismatch("a premise of `check:`", 2, &p));
        };
        acc = Some(match acc {
            Some(a) => a.and(f),
            None => f,
        });
    }
    Ok(acc)
}

fn conjoin1(premises: Vec<AnyFormula>) -> Result<Option<Formula1>, LangError> {
    let mut acc: Option<Formula1> = None;
    for p in premises {
        let AnyFormula::L1(f) = p else {
            return Err(mismatch("a premise of `computeall:`", 1, &p));
        };
        acc = Some(match acc {
            Some(a) => a.and(f),
            None => f,
        });
    }
    Ok(acc)
}

/// Result of running a lowered query.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Check(bool),
    Compute(EvalResult),
    /// Satisfying vectors, indexed like `names`.
    ComputeAll { names: Vec<String>, vectors: Vec<StatusVector> },
}

/// `v` with six significant digits, in positional notation.
pub fn six_significant(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let exp = v.abs().log10().floor() as i32;
    let decimals = (5 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

/// One failed-event set per line, e.g. `{WW,H2S}`.
pub fn format_vector(names: &[String], b: &StatusVector) -> String {
    let failed: Vec<&str> = names
        .iter()
        .zip(&b.0)
        .filter(|(_, &bit)| bit)
        .map(|(n, _)| n.as_str())
        .collect();
    format!("{{{}}}", failed.join(","))
}

/// Human-readable rendering: `true|false`; a value with six significant
/// digits followed by a full-precision line; or one failed-event set per
/// line.
pub fn format_result(outcome: &Outcome) -> String {
    match outcome {
        Outcome::Check(b) => b.to_string(),
        Outcome::Compute(EvalResult::Value(v)) => format!("{}\nfull={v:e}", six_significant(*v)),
        Outcome::Compute(EvalResult::Undefined) => "undefined".into(),
        Outcome::ComputeAll { names, vectors } => {
            let mut out = String::new();
            for (i, v) in vectors.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = write!(out, "{}", format_vector(names, v));
            }
            out
        }
    }
}
