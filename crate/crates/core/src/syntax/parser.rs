//! Recursive-descent parsers for programs, expectations, domains and states.

use super::ast::*;
use super::lexer::{lex, Span, SpannedTok, Tok};
use super::ParseError;
use num::{BigRational, Zero};

struct Parser {
    tokens: Vec<SpannedTok>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Parser, ParseError> {
        Ok(Parser { tokens: lex(src)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn next(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<(), ParseError> {
        if self.peek() == &tok {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        ParseError::UnexpectedToken {
            found: self.peek().describe(),
            expected: expected.to_string(),
            span: self.span(),
        }
    }

    fn expect_ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.next();
                Ok(name)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    // ---- programs ----

    fn stmt_seq(&mut self) -> Result<Stmt, ParseError> {
        let mut stmts = vec![self.stmt()?];
        loop {
            if self.eat(&Tok::Semi) {
                if self.starts_stmt() {
                    stmts.push(self.stmt()?);
                } else {
                    break; // trailing separator
                }
            } else if self.starts_stmt() {
                // `;` may be omitted after a `}`-terminated statement
                stmts.push(self.stmt()?);
            } else {
                break;
            }
        }
        Ok(Stmt::seq(stmts))
    }

    fn starts_stmt(&self) -> bool {
        matches!(
            self.peek(),
            Tok::Skip | Tok::If | Tok::While | Tok::LBrace | Tok::Ident(_)
        )
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match self.peek().clone() {
            Tok::Skip => {
                self.next();
                Ok(Stmt::Skip)
            }
            Tok::If => {
                self.next();
                self.expect(Tok::LParen, "`(` after `if`")?;
                let guard = self.pred()?;
                self.expect(Tok::RParen, "`)` closing the guard")?;
                let then = self.block()?;
                let els = if self.eat(&Tok::Else) { self.block()? } else { Stmt::Skip };
                Ok(Stmt::Ite(guard, Box::new(then), Box::new(els)))
            }
            Tok::While => {
                self.next();
                self.expect(Tok::LParen, "`(` after `while`")?;
                let guard = self.pred()?;
                self.expect(Tok::RParen, "`)` closing the guard")?;
                let body = self.block()?;
                Ok(Stmt::While(guard, Box::new(body)))
            }
            Tok::LBrace => {
                // probabilistic choice: { left } [p] { right }
                let left = self.block()?;
                let span = self.span();
                self.expect(Tok::LBracket, "`[` with the branch probability")?;
                let prob = self.expr()?;
                self.expect(Tok::RBracket, "`]` closing the probability")?;
                // Constant probabilities (`1/2`, `1 - 1/4`) are validated
                // here; state-dependent ones at evaluation time.
                if prob.free_vars().is_empty() {
                    if let Ok(v) = crate::algebra::eval_signed(&prob, &State::new()) {
                        if v.is_negative()
                            || !v.leq_with_tol(&crate::algebra::ExtReal::one(), 0.0)
                        {
                            return Err(ParseError::InvalidProbability {
                                prob: v.to_string(),
                                span,
                            });
                        }
                    }
                }
                let right = self.block()?;
                Ok(Stmt::PChoice(Box::new(left), prob, Box::new(right)))
            }
            Tok::Ident(name) => {
                self.next();
                self.expect(Tok::Assign, "`:=` after the variable")?;
                if self.eat(&Tok::Unif) {
                    self.expect(Tok::LParen, "`(` after `unif`")?;
                    let lo = self.expr()?;
                    self.expect(Tok::DotDot, "`..` separating the uniform bounds")?;
                    let hi = self.expr()?;
                    self.expect(Tok::RParen, "`)` closing the uniform range")?;
                    Ok(Stmt::UnifAssign(name, lo, hi))
                } else {
                    let rhs = self.expr()?;
                    Ok(Stmt::Assign(name, rhs))
                }
            }
            _ => Err(self.unexpected("a statement")),
        }
    }

    fn block(&mut self) -> Result<Stmt, ParseError> {
        self.expect(Tok::LBrace, "`{` opening a block")?;
        if self.eat(&Tok::RBrace) {
            return Ok(Stmt::Skip); // empty block
        }
        let body = self.stmt_seq()?;
        self.expect(Tok::RBrace, "`}` closing the block")?;
        Ok(body)
    }

    // ---- predicates ----

    fn pred(&mut self) -> Result<Pred, ParseError> {
        let mut lhs = self.pred_and()?;
        while self.eat(&Tok::Or) {
            let rhs = self.pred_and()?;
            lhs = Pred::Or(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn pred_and(&mut self) -> Result<Pred, ParseError> {
        let mut lhs = self.pred_atom()?;
        while self.eat(&Tok::And) {
            let rhs = self.pred_atom()?;
            lhs = Pred::And(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn pred_atom(&mut self) -> Result<Pred, ParseError> {
        match self.peek() {
            Tok::Not => {
                self.next();
                Ok(Pred::Not(Box::new(self.pred_atom()?)))
            }
            Tok::True => {
                self.next();
                Ok(Pred::Bool(true))
            }
            Tok::False => {
                self.next();
                Ok(Pred::Bool(false))
            }
            Tok::LParen => {
                // Either a parenthesised predicate or the left side of a
                // comparison; try the predicate reading first and backtrack.
                let save = self.pos;
                self.next();
                if let Ok(inner) = self.pred() {
                    if self.eat(&Tok::RParen) && !self.peek_is_cmp() {
                        return Ok(inner);
                    }
                }
                self.pos = save;
                self.comparison()
            }
            _ => self.comparison(),
        }
    }

    fn peek_is_cmp(&self) -> bool {
        matches!(self.peek(), Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge | Tok::Eq | Tok::Ne)
    }

    fn comparison(&mut self) -> Result<Pred, ParseError> {
        let span = self.span();
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            _ => return Err(self.unexpected("a comparison operator")),
        };
        self.next();
        let rhs = self.expr()?;
        for side in [&lhs, &rhs] {
            if !is_linear(side) {
                return Err(ParseError::NonlinearPredicate { span });
            }
        }
        Ok(Pred::Cmp(op, lhs, rhs))
    }

    // ---- expressions ----

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.term()?;
                lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Minus) {
                let rhs = self.term()?;
                lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.power()?;
        loop {
            if self.eat(&Tok::Star) {
                let rhs = self.power()?;
                lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Slash) {
                let rhs = self.power()?;
                lhs = Expr::Div(Box::new(lhs), Box::new(rhs));
            } else if self.eat(&Tok::Percent) {
                let rhs = self.power()?;
                lhs = Expr::Mod(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let exp = self.power()?; // right-associative
            Ok(Expr::Pow(Box::new(base), Box::new(exp)))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Number(n) => {
                self.next();
                Ok(Expr::Const(n))
            }
            Tok::Inf => {
                self.next();
                Ok(Expr::Infinity)
            }
            Tok::Ident(name) => {
                self.next();
                Ok(Expr::Var(name))
            }
            Tok::LParen => {
                self.next();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::LBracket => {
                self.next();
                let p = self.pred()?;
                self.expect(Tok::RBracket, "`]` closing the Iverson bracket")?;
                Ok(Expr::Iverson(Box::new(p)))
            }
            Tok::Min => {
                self.next();
                let (a, b) = self.two_args("min")?;
                Ok(Expr::Min(Box::new(a), Box::new(b)))
            }
            Tok::Max => {
                self.next();
                let (a, b) = self.two_args("max")?;
                Ok(Expr::Max(Box::new(a), Box::new(b)))
            }
            Tok::Abs => {
                self.next();
                self.expect(Tok::LParen, "`(` after `abs`")?;
                let a = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Abs(Box::new(a)))
            }
            Tok::Harm => {
                self.next();
                self.expect(Tok::LParen, "`(` after `harm`")?;
                let a = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::Harm(Box::new(a)))
            }
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn two_args(&mut self, what: &str) -> Result<(Expr, Expr), ParseError> {
        self.expect(Tok::LParen, &format!("`(` after `{}`", what))?;
        let a = self.expr()?;
        self.expect(Tok::Comma, "`,` between the arguments")?;
        let b = self.expr()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok((a, b))
    }

    // ---- domains & states ----

    fn domain(&mut self) -> Result<StateDomain, ParseError> {
        let mut entries: Vec<(Var, DomainValues)> = Vec::new();
        loop {
            let span = self.span();
            let var = self.expect_ident("a variable name")?;
            if entries.iter().any(|(v, _)| v == &var) {
                return Err(ParseError::DuplicateDomainVar { var, span });
            }
            self.expect(Tok::In, "`in`")?;
            let vals = self.domain_values(&var)?;
            entries.push((var, vals));
            if !self.eat(&Tok::Semi) {
                break;
            }
            if self.peek() == &Tok::Eof {
                break; // trailing separator
            }
        }
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(StateDomain { entries })
    }

    fn domain_values(&mut self, var: &str) -> Result<DomainValues, ParseError> {
        if self.eat(&Tok::LBrace) {
            let mut vals = vec![self.rational_literal()?];
            while self.eat(&Tok::Comma) {
                vals.push(self.rational_literal()?);
            }
            let span = self.span();
            self.expect(Tok::RBrace, "`}` closing the value set")?;
            vals.sort();
            vals.dedup();
            if vals.is_empty() {
                return Err(ParseError::EmptyDomain { var: var.to_string(), span });
            }
            Ok(DomainValues::Set(vals))
        } else {
            let span = self.span();
            let lo = self.integer_literal()?;
            self.expect(Tok::DotDot, "`..` in the range")?;
            let hi = self.integer_literal()?;
            if lo > hi {
                return Err(ParseError::EmptyDomain { var: var.to_string(), span });
            }
            Ok(DomainValues::Range(lo, hi))
        }
    }

    fn rational_literal(&mut self) -> Result<BigRational, ParseError> {
        let neg = self.eat(&Tok::Minus);
        let n = match self.peek().clone() {
            Tok::Number(n) => {
                self.next();
                n
            }
            _ => return Err(self.unexpected("a number")),
        };
        let n = if self.eat(&Tok::Slash) {
            match self.peek().clone() {
                Tok::Number(d) if !d.is_zero() => {
                    self.next();
                    n / d
                }
                _ => return Err(self.unexpected("a nonzero denominator")),
            }
        } else {
            n
        };
        Ok(if neg { -n } else { n })
    }

    fn integer_literal(&mut self) -> Result<i64, ParseError> {
        let span = self.span();
        let r = self.rational_literal()?;
        if !r.is_integer() {
            return Err(ParseError::UnexpectedToken {
                found: format!("non-integer `{}`", r),
                expected: "an integer range endpoint".to_string(),
                span,
            });
        }
        i64::try_from(r.to_integer()).map_err(|_| ParseError::UnexpectedToken {
            found: format!("out-of-range integer `{}`", r),
            expected: "a 64-bit range endpoint".to_string(),
            span,
        })
    }

    fn state(&mut self) -> Result<State, ParseError> {
        let mut s = State::new();
        loop {
            let var = self.expect_ident("a variable name")?;
            self.expect(Tok::Eq, "`=`")?;
            let val = self.rational_literal()?;
            s.set(&var, val);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(s)
    }

    fn finish<T>(mut self, value: T) -> Result<T, ParseError> {
        self.expect(Tok::Eof, "end of input")?;
        Ok(value)
    }
}

/// Comparison operands must be linear in the program variables; `e % c` and
/// `e / c` with a constant c are allowed as piecewise-linear escapes.
fn is_linear(e: &Expr) -> bool {
    match e {
        Expr::Const(_) | Expr::Var(_) => true,
        Expr::Add(a, b) | Expr::Sub(a, b) => is_linear(a) && is_linear(b),
        Expr::Mul(a, b) => {
            (is_constant(a) && is_linear(b)) || (is_linear(a) && is_constant(b))
        }
        Expr::Div(a, b) | Expr::Mod(a, b) => is_linear(a) && is_constant(b),
        _ => false,
    }
}

fn is_constant(e: &Expr) -> bool {
    match e {
        Expr::Const(_) => true,
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            is_constant(a) && is_constant(b)
        }
        _ => false,
    }
}

/// Parse a program in the pGCL dialect.
pub fn parse_program(src: &str) -> Result<Stmt, ParseError> {
    let mut p = Parser::new(src)?;
    let body = p.stmt_seq()?;
    p.finish(body)
}

/// Parse an expectation (or plain arithmetic) expression.
pub fn parse_expectation(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.finish(e)
}

/// Parse a predicate on its own, e.g. for guard annotations.
pub fn parse_predicate(src: &str) -> Result<Pred, ParseError> {
    let mut p = Parser::new(src)?;
    let pred = p.pred()?;
    p.finish(pred)
}

/// Parse a domain description like `a in {0,1}; b in 0..20`.
pub fn parse_domain(src: &str) -> Result<StateDomain, ParseError> {
    let mut p = Parser::new(src)?;
    let d = p.domain()?;
    p.finish(d)
}

/// Parse a state literal like `a=1, b=0` (values may be rationals, `3/2`).
pub fn parse_state(src: &str) -> Result<State, ParseError> {
    let mut p = Parser::new(src)?;
    let s = p.state()?;
    p.finish(s)
}
