//! Abstract syntax for programs, expectations, predicates and domains.
//!
//! A single expression type [`Expr`] is shared by program right-hand sides,
//! probability annotations and expectations; constructs that make no sense in
//! a given position (e.g. `inf` on the right of an assignment) are rejected
//! at evaluation time rather than by a separate grammar.

use num::BigRational;
use std::collections::BTreeMap;

/// Exact rational scalar used throughout the crate.
pub type Rat = BigRational;

/// Program variable name.
pub type Var = String;

/// Comparison operators permitted in predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }
}

/// Boolean guard over program states.
///
/// Comparison operands are restricted to linear arithmetic (plus `% literal`)
/// by the parser; see [`super::parser`].
#[derive(Debug, Clone, PartialEq)]
pub enum Pred {
    Bool(bool),
    Cmp(CmpOp, Expr, Expr),
    And(Box<Pred>, Box<Pred>),
    Or(Box<Pred>, Box<Pred>),
    Not(Box<Pred>),
}

/// Arithmetic / expectation expression.
///
/// Literals are non-negative rationals; negative values can only arise
/// through subtraction, which is permitted in intermediate positions (the
/// evaluator rejects negative final values).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Rat),
    Infinity,
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    /// Exponentiation. Integer exponents are evaluated exactly; fractional
    /// exponents fall back to floating point.
    Pow(Box<Expr>, Box<Expr>),
    /// Remainder; both operands must evaluate to integers.
    Mod(Box<Expr>, Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Abs(Box<Expr>),
    /// Iverson bracket `[pred]`: 1 where the predicate holds, 0 elsewhere.
    Iverson(Box<Pred>),
    /// `harm(e)`: the e-th harmonic number, 0 for e <= 0.
    Harm(Box<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Const(Rat::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn is_zero_literal(&self) -> bool {
        matches!(self, Expr::Const(c) if c == &Rat::from_integer(0.into()))
    }

    /// Free variables of the expression, in sorted order.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = std::collections::BTreeSet::new();
        collect_expr_vars(self, &mut out);
        out.into_iter().collect()
    }
}

fn collect_expr_vars(e: &Expr, out: &mut std::collections::BTreeSet<Var>) {
    match e {
        Expr::Const(_) | Expr::Infinity => {}
        Expr::Var(v) => {
            out.insert(v.clone());
        }
        Expr::Add(a, b)
        | Expr::Sub(a, b)
        | Expr::Mul(a, b)
        | Expr::Div(a, b)
        | Expr::Pow(a, b)
        | Expr::Mod(a, b)
        | Expr::Min(a, b)
        | Expr::Max(a, b) => {
            collect_expr_vars(a, out);
            collect_expr_vars(b, out);
        }
        Expr::Abs(a) | Expr::Harm(a) => collect_expr_vars(a, out),
        Expr::Iverson(p) => collect_pred_vars(p, out),
    }
}

fn collect_pred_vars(p: &Pred, out: &mut std::collections::BTreeSet<Var>) {
    match p {
        Pred::Bool(_) => {}
        Pred::Cmp(_, a, b) => {
            collect_expr_vars(a, out);
            collect_expr_vars(b, out);
        }
        Pred::And(a, b) | Pred::Or(a, b) => {
            collect_pred_vars(a, out);
            collect_pred_vars(b, out);
        }
        Pred::Not(a) => collect_pred_vars(a, out),
    }
}

impl Pred {
    pub fn free_vars(&self) -> Vec<Var> {
        let mut out = std::collections::BTreeSet::new();
        collect_pred_vars(self, &mut out);
        out.into_iter().collect()
    }
}

/// Program statement.
#[derive(Debug, Clone, PartialEq)]
pub enum Stmt {
    Skip,
    Assign(Var, Expr),
    /// `v := unif(lo..hi)` — uniform draw from the integers lo..=hi.
    UnifAssign(Var, Expr, Expr),
    Seq(Box<Stmt>, Box<Stmt>),
    Ite(Pred, Box<Stmt>, Box<Stmt>),
    /// `{ left } [p] { right }` — run `left` with probability p, else `right`.
    /// The probability may depend on the state; it must evaluate into [0,1].
    PChoice(Box<Stmt>, Expr, Box<Stmt>),
    While(Pred, Box<Stmt>),
}

impl Stmt {
    pub fn seq(stmts: Vec<Stmt>) -> Stmt {
        let mut it = stmts.into_iter().rev();
        let last = it.next().unwrap_or(Stmt::Skip);
        it.fold(last, |acc, s| Stmt::Seq(Box::new(s), Box::new(acc)))
    }

    /// True when the statement contains no `while` loop.
    pub fn is_loop_free(&self) -> bool {
        match self {
            Stmt::Skip | Stmt::Assign(..) | Stmt::UnifAssign(..) => true,
            Stmt::Seq(a, b) => a.is_loop_free() && b.is_loop_free(),
            Stmt::Ite(_, a, b) | Stmt::PChoice(a, _, b) => {
                a.is_loop_free() && b.is_loop_free()
            }
            Stmt::While(..) => false,
        }
    }

    /// Variables read or written anywhere in the statement, sorted.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = std::collections::BTreeSet::new();
        collect_stmt_vars(self, &mut out);
        out.into_iter().collect()
    }
}

fn collect_stmt_vars(s: &Stmt, out: &mut std::collections::BTreeSet<Var>) {
    match s {
        Stmt::Skip => {}
        Stmt::Assign(v, e) => {
            out.insert(v.clone());
            collect_expr_vars(e, out);
        }
        Stmt::UnifAssign(v, lo, hi) => {
            out.insert(v.clone());
            collect_expr_vars(lo, out);
            collect_expr_vars(hi, out);
        }
        Stmt::Seq(a, b) => {
            collect_stmt_vars(a, out);
            collect_stmt_vars(b, out);
        }
        Stmt::Ite(p, a, b) => {
            collect_pred_vars(p, out);
            collect_stmt_vars(a, out);
            collect_stmt_vars(b, out);
        }
        Stmt::PChoice(a, p, b) => {
            collect_stmt_vars(a, out);
            collect_expr_vars(p, out);
            collect_stmt_vars(b, out);
        }
        Stmt::While(p, b) => {
            collect_pred_vars(p, out);
            collect_stmt_vars(b, out);
        }
    }
}

/// A program state: finite map from variables to rationals.
///
/// States may be partial; reading a variable that was never assigned is an
/// evaluation error. Ordering and equality are structural, which keeps state
/// sets deterministic.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct State(pub BTreeMap<Var, Rat>);

impl State {
    pub fn new() -> State {
        State(BTreeMap::new())
    }

    pub fn bind(mut self, var: &str, value: i64) -> State {
        self.0.insert(var.to_string(), Rat::from_integer(value.into()));
        self
    }

    pub fn get(&self, var: &str) -> Option<&Rat> {
        self.0.get(var)
    }

    pub fn set(&mut self, var: &str, value: Rat) {
        self.0.insert(var.to_string(), value);
    }

    pub fn with(&self, var: &str, value: Rat) -> State {
        let mut next = self.clone();
        next.set(var, value);
        next
    }
}

impl std::fmt::Display for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (k, v) in &self.0 {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}={}", k, v)?;
        }
        Ok(())
    }
}

/// Values a domain assigns to one variable.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainValues {
    /// Inclusive integer range `lo..hi`.
    Range(i64, i64),
    /// Explicit finite set `{a, b, c}`, kept sorted ascending.
    Set(Vec<Rat>),
}

impl DomainValues {
    pub fn len(&self) -> usize {
        match self {
            DomainValues::Range(lo, hi) => (hi - lo + 1) as usize,
            DomainValues::Set(vs) => vs.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = Rat> + '_> {
        match self {
            DomainValues::Range(lo, hi) => {
                Box::new((*lo..=*hi).map(|n| Rat::from_integer(n.into())))
            }
            DomainValues::Set(vs) => Box::new(vs.iter().cloned()),
        }
    }
}

/// A finite set of states: the cartesian product of per-variable value sets.
///
/// Enumeration order is lexicographic by variable name, then ascending by
/// value, so reports and witnesses are deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDomain {
    /// Sorted by variable name; no duplicates.
    pub entries: Vec<(Var, DomainValues)>,
}

impl StateDomain {
    pub fn size(&self) -> usize {
        self.entries.iter().map(|(_, vs)| vs.len()).product()
    }

    pub fn vars(&self) -> Vec<Var> {
        self.entries.iter().map(|(v, _)| v.clone()).collect()
    }

    /// All states of the domain in lexicographic order.
    pub fn enumerate(&self) -> Vec<State> {
        let mut states = vec![State::new()];
        for (var, vals) in &self.entries {
            let mut next = Vec::with_capacity(states.len() * vals.len());
            for s in &states {
                for v in vals.iter() {
                    next.push(s.with(var, v));
                }
            }
            states = next;
        }
        states
    }

    /// Per-variable bounds (min, max) of the domain.
    pub fn bounds(&self) -> BTreeMap<Var, (Rat, Rat)> {
        let mut out = BTreeMap::new();
        for (var, vals) in &self.entries {
            let (lo, hi) = match vals {
                DomainValues::Range(lo, hi) => {
                    (Rat::from_integer((*lo).into()), Rat::from_integer((*hi).into()))
                }
                DomainValues::Set(vs) => (
                    vs.first().expect("nonempty domain").clone(),
                    vs.last().expect("nonempty domain").clone(),
                ),
            };
            out.insert(var.clone(), (lo, hi));
        }
        out
    }
}
