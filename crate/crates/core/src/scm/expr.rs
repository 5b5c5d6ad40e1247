//! Equation bodies: a small finite-domain expression language.
//!
//! Integers support `+ - *` and ordering; symbolic values support only
//! equality. Boolean connectives accept booleans and the integers 0 and 1,
//! and a boolean result stored into a 0/1 variable becomes 0 or 1.

use std::collections::BTreeSet;
use std::fmt;

use super::{Endo, Exo, Signature, VarRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Eq => "==",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "&",
            BinOp::Or => "|",
        }
    }
}

/// Expression tree; `V` is a resolved [`VarRef`] or, before binding, a name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr<V = VarRef> {
    Int(i64),
    Bool(bool),
    Sym(String),
    Var(V),
    Neg(Box<Expr<V>>),
    Not(Box<Expr<V>>),
    Binary(BinOp, Box<Expr<V>>, Box<Expr<V>>),
    If(Box<Expr<V>>, Box<Expr<V>>, Box<Expr<V>>),
}

/// Runtime value of an expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scalar<'a> {
    Int(i64),
    Bool(bool),
    Sym(&'a str),
}

impl fmt::Display for Scalar<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(n) => write!(f, "{n}"),
            Scalar::Bool(b) => write!(f, "{b}"),
            Scalar::Sym(s) => write!(f, "{s}"),
        }
    }
}

impl Scalar<'_> {
    fn as_int(self) -> Result<i64, String> {
        match self {
            Scalar::Int(n) => Ok(n),
            Scalar::Bool(b) => Ok(b as i64),
            Scalar::Sym(s) => Err(format!("arithmetic on symbolic value `{s}`")),
        }
    }

    fn as_bool(self) -> Result<bool, String> {
        match self {
            Scalar::Bool(b) => Ok(b),
            Scalar::Int(0) => Ok(false),
            Scalar::Int(1) => Ok(true),
            Scalar::Int(n) => Err(format!("integer {n} used as a truth value")),
            Scalar::Sym(s) => Err(format!("symbolic value `{s}` used as a truth value")),
        }
    }
}

fn equal(l: Scalar<'_>, r: Scalar<'_>) -> Result<bool, String> {
    match (l, r) {
        (Scalar::Sym(a), Scalar::Sym(b)) => Ok(a == b),
        (Scalar::Sym(s), _) | (_, Scalar::Sym(s)) => {
            Err(format!("symbolic value `{s}` compared with a number"))
        }
        (a, b) => Ok(a.as_int()? == b.as_int()?),
    }
}

impl<V> Expr<V> {
    pub fn binary(op: BinOp, l: Self, r: Self) -> Self {
        Expr::Binary(op, Box::new(l), Box::new(r))
    }

    pub fn ite(c: Self, t: Self, e: Self) -> Self {
        Expr::If(Box::new(c), Box::new(t), Box::new(e))
    }

    /// Rebuilds the tree with each variable replaced by `f`.
    pub fn try_map_vars<W, E>(&self, f: &mut impl FnMut(&V) -> Result<W, E>) -> Result<Expr<W>, E> {
        Ok(match self {
            Expr::Int(n) => Expr::Int(*n),
            Expr::Bool(b) => Expr::Bool(*b),
            Expr::Sym(s) => Expr::Sym(s.clone()),
            Expr::Var(v) => Expr::Var(f(v)?),
            Expr::Neg(e) => Expr::Neg(Box::new(e.try_map_vars(f)?)),
            Expr::Not(e) => Expr::Not(Box::new(e.try_map_vars(f)?)),
            Expr::Binary(op, l, r) => Expr::Binary(*op, Box::new(l.try_map_vars(f)?), Box::new(r.try_map_vars(f)?)),
            Expr::If(c, t, e) => Expr::If(
                Box::new(c.try_map_vars(f)?),
                Box::new(t.try_map_vars(f)?),
                Box::new(e.try_map_vars(f)?),
            ),
        })
    }
}

impl Expr {

    /// Variables read by this expression.
    pub fn references(&self) -> BTreeSet<VarRef> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs(&self, out: &mut BTreeSet<VarRef>) {
        match self {
            Expr::Int(_) | Expr::Bool(_) | Expr::Sym(_) => {}
            Expr::Var(v) => {
                out.insert(*v);
            }
            Expr::Neg(e) | Expr::Not(e) => e.collect_refs(out),
            Expr::Binary(_, l, r) => {
                l.collect_refs(out);
                r.collect_refs(out);
            }
            Expr::If(c, t, e) => {
                c.collect_refs(out);
                t.collect_refs(out);
                e.collect_refs(out);
            }
        }
    }

    pub fn eval<'a>(
        &'a self,
        sig: &'a Signature,
        exo: &[usize],
        endo: &[usize],
    ) -> Result<Scalar<'a>, String> {
        Ok(match self {
            Expr::Int(n) => Scalar::Int(*n),
            Expr::Bool(b) => Scalar::Bool(*b),
            Expr::Sym(s) => Scalar::Sym(s),
            Expr::Var(VarRef::Exo(Exo(i))) => sig.exogenous()[*i].scalar(exo[*i]),
            Expr::Var(VarRef::Endo(Endo(i))) => sig.endogenous()[*i].scalar(endo[*i]),
            Expr::Neg(e) => Scalar::Int(
                e.eval(sig, exo, endo)?
                    .as_int()?
                    .checked_neg()
                    .ok_or("integer overflow")?,
            ),
            Expr::Not(e) => Scalar::Bool(!e.eval(sig, exo, endo)?.as_bool()?),
            Expr::If(c, t, e) => {
                if c.eval(sig, exo, endo)?.as_bool()? {
                    t.eval(sig, exo, endo)?
                } else {
                    e.eval(sig, exo, endo)?
                }
            }
            Expr::Binary(op, l, r) => {
                let l = l.eval(sig, exo, endo)?;
                let r = r.eval(sig, exo, endo)?;
                match op {
                    BinOp::Add | BinOp::Sub | BinOp::Mul => {
                        let (a, b) = (l.as_int()?, r.as_int()?);
                        let v = match op {
                            BinOp::Add => a.checked_add(b),
                            BinOp::Sub => a.checked_sub(b),
                            _ => a.checked_mul(b),
                        };
                        Scalar::Int(v.ok_or("integer overflow")?)
                    }
                    BinOp::Eq => Scalar::Bool(equal(l, r)?),
                    BinOp::Ne => Scalar::Bool(!equal(l, r)?),
                    BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => {
                        let (a, b) = (l.as_int()?, r.as_int()?);
                        Scalar::Bool(match op {
                            BinOp::Lt => a < b,
                            BinOp::Le => a <= b,
                            BinOp::Gt => a > b,
                            _ => a >= b,
                        })
                    }
                    BinOp::And => Scalar::Bool(l.as_bool()? & r.as_bool()?),
                    BinOp::Or => Scalar::Bool(l.as_bool()? | r.as_bool()?),
                }
            }
        })
    }

    /// Renders the expression with variable names from `sig`.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        ExprDisplay { expr: self, sig }
    }
}

struct ExprDisplay<'a> {
    expr: &'a Expr,
    sig: &'a Signature,
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |e: &'_ Expr| ExprDisplay { expr: e, sig: self.sig }.to_string();
        match self.expr {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Bool(b) => write!(f, "{b}"),
            Expr::Sym(s) => write!(f, "{s:?}"),
            Expr::Var(v) => write!(f, "{}", self.sig.name_of(*v)),
            Expr::Neg(e) => write!(f, "-({})", sub(e)),
            Expr::Not(e) => write!(f, "!({})", sub(e)),
            Expr::Binary(op, l, r) => write!(f, "({} {} {})", sub(l), op.symbol(), sub(r)),
            Expr::If(c, t, e) => write!(f, "(if {} then {} else {})", sub(c), sub(t), sub(e)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scm::{Signature, Variable};

    fn sig() -> Signature {
        Signature::new(
            vec![Variable::new("U", ["0", "1"])],
            vec![
                Variable::new("A", ["0", "1"]),
                Variable::new("O", ["died", "cured"]),
                Variable::new("N", ["-3", "0", "7"]),
            ],
            "A",
        )
        .unwrap()
    }

    fn var(sig: &Signature, name: &str) -> Expr {
        Expr::Var(sig.lookup(name).unwrap())
    }

    #[test]
    fn arithmetic_and_booleans_mix_on_zero_one() {
        let s = sig();
        // 1 - A with A = 1
        let e = Expr::binary(BinOp::Sub, Expr::Int(1), var(&s, "A"));
        assert_eq!(e.eval(&s, &[0], &[1, 0, 0]), Ok(Scalar::Int(0)));
        // U | A
        let e = Expr::binary(BinOp::Or, var(&s, "U"), var(&s, "A"));
        assert_eq!(e.eval(&s, &[0], &[1, 0, 0]), Ok(Scalar::Bool(true)));
        // (A == 1) + U
        let e = Expr::binary(
            BinOp::Add,
            Expr::binary(BinOp::Eq, var(&s, "A"), Expr::Int(1)),
            var(&s, "U"),
        );
        assert_eq!(e.eval(&s, &[1], &[1, 0, 0]), Ok(Scalar::Int(2)));
    }

    #[test]
    fn symbolic_values_only_compare_for_equality() {
        let s = sig();
        let eq = Expr::binary(BinOp::Eq, var(&s, "O"), Expr::Sym("cured".into()));
        assert_eq!(eq.eval(&s, &[0], &[0, 1, 0]), Ok(Scalar::Bool(true)));
        let add = Expr::binary(BinOp::Add, var(&s, "O"), Expr::Int(1));
        assert!(add.eval(&s, &[0], &[0, 1, 0]).is_err());
        let cmp = Expr::binary(BinOp::Eq, var(&s, "O"), Expr::Int(1));
        assert!(cmp.eval(&s, &[0], &[0, 1, 0]).is_err());
    }

    #[test]
    fn non_binary_integers_are_not_truth_values() {
        let s = sig();
        let e = Expr::Not(Box::new(var(&s, "N")));
        assert!(e.eval(&s, &[0], &[0, 0, 2]).is_err());
        assert_eq!(e.eval(&s, &[0], &[0, 0, 1]), Ok(Scalar::Bool(true)));
    }

    #[test]
    fn overflow_is_reported() {
        let s = sig();
        let e = Expr::binary(BinOp::Mul, Expr::Int(i64::MAX), Expr::Int(2));
        assert!(e.eval(&s, &[0], &[0, 0, 0]).is_err());
    }

    #[test]
    fn references_lists_each_variable_once() {
        let s = sig();
        let e = Expr::ite(
            var(&s, "U"),
            Expr::binary(BinOp::Add, var(&s, "A"), var(&s, "A")),
            Expr::Int(0),
        );
        let refs: Vec<_> = e.references().into_iter().collect();
        assert_eq!(refs, vec![s.lookup("U").unwrap(), s.lookup("A").unwrap()]);
    }
}
