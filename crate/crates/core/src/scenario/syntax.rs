//! Text syntax for equation bodies, causal formulas and rational
//! expressions.
//!
//! Formulas:
//!
//! ```text
//! cformula := '[' iv (',' iv)* ']' bexpr | bexpr
//! iv       := IDENT '<-' VALUE
//! bexpr    := bterm (('&' | '|') bterm)*      ! binds tighter than &, & tighter than |
//! bterm    := '!' bterm | '(' bexpr ')' | IDENT '=' VALUE | 'true' | 'false'
//! ```
//!
//! Equation bodies:
//!
//! ```text
//! expr  := 'if' expr 'then' expr 'else' expr | or
//! or    := and ('|' and)*
//! and   := cmp ('&' cmp)*
//! cmp   := sum (('==' | '=' | '!=' | '<' | '<=' | '>' | '>=') sum)?
//! sum   := prod (('+' | '-') prod)*
//! prod  := unary ('*' unary)*
//! unary := '-' unary | '!' unary | atom
//! atom  := INT | STRING | 'true' | 'false' | IDENT | '(' expr ')'
//! ```
//!
//! Strings take single or double quotes. `&&` and `||` are accepted for
//! `&` and `|`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::rational::{self, Rational};
use crate::scm::{BinOp, Expr, Formula, NamedEvent, ParsedFormula, Signature};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    /// Character offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (at character {})", self.message, self.offset + 1)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    Str(String),
    Punct(&'static str),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(s) => write!(f, "`{s}`"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::Punct(p) => write!(f, "`{p}`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

const PUNCT: [&str; 21] = [
    "<-", "==", "!=", "<=", ">=", "&&", "||", "[", "]", "(", ")", ",", "=", "<", ">", "&", "|", "!",
    "+", "-", "*",
];

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push((start, Tok::Int(chars[start..i].iter().collect())));
        } else if c == '"' || c == '\'' {
            i += 1;
            let mut s = String::new();
            loop {
                match chars.get(i) {
                    None => {
                        return Err(SyntaxError {
                            offset: start,
                            message: "unterminated string".into(),
                        })
                    }
                    Some(&q) if q == c => break,
                    Some('\\') => {
                        i += 1;
                        match chars.get(i) {
                            Some(&e) => s.push(e),
                            None => {
                                return Err(SyntaxError {
                                    offset: start,
                                    message: "unterminated string".into(),
                                })
                            }
                        }
                    }
                    Some(&ch) => s.push(ch),
                }
                i += 1;
            }
            i += 1;
            out.push((start, Tok::Str(s)));
        } else if c == '/' {
            i += 1;
            out.push((start, Tok::Punct("/")));
        } else {
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    i += p.chars().count();
                    out.push((start, Tok::Punct(p)));
                }
                None => {
                    return Err(SyntaxError {
                        offset: start,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        }
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

/// Nesting limit so hostile input cannot exhaust the stack.
const MAX_DEPTH: usize = 200;

impl Parser {
    fn new(text: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, SyntaxError> {
        self.error(format!("expected {wanted}, found {}", self.peek()))
    }

    fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Tok::Punct(q) if *q == p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Tok::Ident(s) if s == kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), SyntaxError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.unexpected(&format!("`{p}`"))
        }
    }

    fn finish(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => self.unexpected("end of input"),
        }
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("a variable name"),
        }
    }

    /// A range value: identifier, optionally signed integer, or string.
    fn value(&mut self) -> Result<String, SyntaxError> {
        let negative = self.eat("-");
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(if negative { format!("-{n}") } else { n })
            }
            Tok::Ident(s) if !negative => {
                self.bump();
                Ok(s)
            }
            Tok::Str(s) if !negative => {
                self.bump();
                Ok(s)
            }
            _ => self.unexpected("a value"),
        }
    }

    fn check_depth(&self, depth: usize) -> Result<(), SyntaxError> {
        if depth > MAX_DEPTH {
            self.error("nesting too deep")
        } else {
            Ok(())
        }
    }

    // Formulas.

    fn bexpr(&mut self, depth: usize) -> Result<Formula<NamedEvent>, SyntaxError> {
        self.check_depth(depth)?;
        let mut left = self.band(depth)?;
        while self.eat("|") || self.eat("||") {
            let right = self.band(depth)?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn band(&mut self, depth: usize) -> Result<Formula<NamedEvent>, SyntaxError> {
        let mut left = self.bterm(depth)?;
        while self.eat("&") || self.eat("&&") {
            let right = self.bterm(depth)?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn bterm(&mut self, depth: usize) -> Result<Formula<NamedEvent>, SyntaxError> {
        self.check_depth(depth)?;
        if self.eat("!") {
            return Ok(Formula::not(self.bterm(depth + 1)?));
        }
        if self.eat("(") {
            let inner = self.bexpr(depth + 1)?;
            self.expect(")")?;
            return Ok(inner);
        }
        if matches!(self.peek(), Tok::Punct("[")) {
            return self.error("interventions may only appear once, at the start of a formula");
        }
        if self.eat_keyword("true") {
            return Ok(Formula::True);
        }
        if self.eat_keyword("false") {
            return Ok(Formula::False);
        }
        let var = self.ident()?;
        if !(self.eat("=") || self.eat("==")) {
            return self.unexpected("`=`");
        }
        let value = self.value()?;
        Ok(Formula::Event(NamedEvent { var, value }))
    }

    // Equation bodies.

    fn expr(&mut self, depth: usize) -> Result<Expr<NamedRef>, SyntaxError> {
        self.check_depth(depth)?;
        if self.eat_keyword("if") {
            let c = self.expr(depth + 1)?;
            if !self.eat_keyword("then") {
                return self.unexpected("`then`");
            }
            let t = self.expr(depth + 1)?;
            if !self.eat_keyword("else") {
                return self.unexpected("`else`");
            }
            let e = self.expr(depth + 1)?;
            return Ok(Expr::If(Box::new(c), Box::new(t), Box::new(e)));
        }
        let mut left = self.and_expr(depth)?;
        while self.eat("|") || self.eat("||") {
            let right = self.and_expr(depth)?;
            left = bin(BinOp::Or, left, right);
        }
        Ok(left)
    }

    fn and_expr(&mut self, depth: usize) -> Result<Expr<NamedRef>, SyntaxError> {
        let mut left = self.cmp(depth)?;
        while self.eat("&") || self.eat("&&") {
            let right = self.cmp(depth)?;
            left = bin(BinOp::And, left, right);
        }
        Ok(left)
    }

    fn cmp(&mut self, depth: usize) -> Result<Expr<NamedRef>, SyntaxError> {
        let left = self.sum(depth)?;
        let op = match self.peek() {
            Tok::Punct("==") | Tok::Punct("=") => BinOp::Eq,
            Tok::Punct("!=") => BinOp::Ne,
            Tok::Punct("<") => BinOp::Lt,
            Tok::Punct("<=") => BinOp::Le,
            Tok::Punct(">") => BinOp::Gt,
            Tok::Punct(">=") => BinOp::Ge,
            _ => return Ok(left),
        };
        self.bump();
        let right = self.sum(depth)?;
        Ok(bin(op, left, right))
    }

    fn sum(&mut self, depth: usize) -> Result<Expr<NamedRef>, SyntaxError> {
        let mut left = self.prod(depth)?;
        loop {
            let op = if self.eat("+") {
                BinOp::Add
            } else if self.eat("-") {
                BinOp::Sub
            } else {
                return Ok(left);
            };
            let right = self.prod(depth)?;
            left = bin(op, left, right);
        }
    }

    fn prod(&mut self, depth: usize) -> Result<Expr<NamedRef>, SyntaxError> {
        let mut left = self.unary(depth)?;
        while self.eat("*") {
            let right = self.unary(depth)?;
            left = bin(BinOp::Mul, left, right);
        }
        Ok(left)
    }

    fn unary(&mut self, depth: usize) -> Result<Expr<NamedRef>, SyntaxError> {
        self.check_depth(depth)?;
        if self.eat("-") {
            return Ok(Expr::Neg(Box::new(self.unary(depth + 1)?)));
        }
        if self.eat("!") {
            return Ok(Expr::Not(Box::new(self.unary(depth + 1)?)));
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                let offset = self.offset();
                self.bump();
                n.parse::<i64>().map(Expr::Int).map_err(|_| SyntaxError {
                    offset,
                    message: format!("integer `{n}` is too large"),
                })
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::Sym(s))
            }
            Tok::Ident(s) if s == "true" || s == "false" => {
                self.bump();
                Ok(Expr::Bool(s == "true"))
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                let offset = self.offset();
                self.bump();
                Ok(Expr::Var(NamedRef { name: s, offset }))
            }
            Tok::Punct("(") => {
                self.bump();
                let inner = self.expr(depth + 1)?;
                self.expect(")")?;
                Ok(inner)
            }
            _ => self.unexpected("an expression"),
        }
    }

    // Rational expressions.

    fn rsum(&mut self, params: &BTreeMap<String, Rational>, depth: usize) -> Result<Rational, SyntaxError> {
        self.check_depth(depth)?;
        let mut acc = self.rprod(params, depth)?;
        loop {
            if self.eat("+") {
                acc += self.rprod(params, depth)?;
            } else if self.eat("-") {
                acc -= self.rprod(params, depth)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn rprod(&mut self, params: &BTreeMap<String, Rational>, depth: usize) -> Result<Rational, SyntaxError> {
        let mut acc = self.runary(params, depth)?;
        loop {
            if self.eat("*") {
                acc *= self.runary(params, depth)?;
            } else if matches!(self.peek(), Tok::Punct("/")) {
                self.bump();
                let offset = self.offset();
                let d = self.runary(params, depth)?;
                if d.is_zero() {
                    return Err(SyntaxError {
                        offset,
                        message: "division by zero".into(),
                    });
                }
                acc /= d;
            } else {
                return Ok(acc);
            }
        }
    }

    fn runary(&mut self, params: &BTreeMap<String, Rational>, depth: usize) -> Result<Rational, SyntaxError> {
        self.check_depth(depth)?;
        if self.eat("-") {
            return Ok(-self.runary(params, depth + 1)?);
        }
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(rational::parse(&n).expect("digits parse"))
            }
            Tok::Ident(name) => match params.get(&name) {
                Some(v) => {
                    self.bump();
                    Ok(v.clone())
                }
                None => self.error(format!("unknown parameter `{name}`")),
            },
            Tok::Punct("(") => {
                self.bump();
                let v = self.rsum(params, depth + 1)?;
                self.expect(")")?;
                Ok(v)
            }
            _ => self.unexpected("a number or parameter"),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "if" | "then" | "else" | "true" | "false")
}

fn bin(op: BinOp, l: Expr<NamedRef>, r: Expr<NamedRef>) -> Expr<NamedRef> {
    Expr::Binary(op, Box::new(l), Box::new(r))
}

/// A variable name in an unbound expression, with its offset.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamedRef {
    pub name: String,
    pub offset: usize,
}

/// Parses a causal formula.
pub fn parse_formula(text: &str) -> Result<ParsedFormula, SyntaxError> {
    let mut p = Parser::new(text)?;
    let mut intervention = Vec::new();
    if p.eat("[") {
        loop {
            let var = p.ident()?;
            p.expect("<-")?;
            let value = p.value()?;
            intervention.push(NamedEvent { var, value });
            if p.eat("]") {
                break;
            }
            p.expect(",")?;
        }
    }
    let body = p.bexpr(0)?;
    p.finish()?;
    Ok(ParsedFormula { intervention, body })
}

/// Parses `X=x, Y=y` (or `X=x & Y=y`) into events.
pub fn parse_assignments(text: &str) -> Result<Vec<NamedEvent>, SyntaxError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    loop {
        let var = p.ident()?;
        if !(p.eat("=") || p.eat("==")) {
            return p.unexpected("`=`");
        }
        let value = p.value()?;
        out.push(NamedEvent { var, value });
        if matches!(p.peek(), Tok::End) {
            return Ok(out);
        }
        if !(p.eat(",") || p.eat("&") || p.eat("&&")) {
            return p.unexpected("`,`");
        }
    }
}

/// Parses an equation body with names still unresolved.
pub fn parse_expr(text: &str) -> Result<Expr<NamedRef>, SyntaxError> {
    let mut p = Parser::new(text)?;
    let e = p.expr(0)?;
    p.finish()?;
    Ok(e)
}

/// Parses a rational expression over named parameters.
pub fn parse_rational(text: &str, params: &BTreeMap<String, Rational>) -> Result<Rational, SyntaxError> {
    let mut p = Parser::new(text)?;
    let v = p.rsum(params, 0)?;
    p.finish()?;
    Ok(v)
}

/// Resolves variable names against `sig`. Errors carry the name and offset
/// of the first unknown variable.
pub fn bind_expr(e: &Expr<NamedRef>, sig: &Signature) -> Result<Expr, NamedRef> {
    e.try_map_vars(&mut |r| sig.lookup(&r.name).ok_or_else(|| r.clone()))
}
