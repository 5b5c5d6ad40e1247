//! Causal formulas: Boolean combinations of primitive events `X = x`,
//! optionally under a single outermost intervention `[Y <- y]`.

use std::collections::BTreeSet;

use super::{Endo, Intervention, Signature, World};
use crate::error::{Error, Result};

/// Primitive event `X = x` with `x` a range index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub var: Endo,
    pub value: usize,
}

/// An event by name, before binding to a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NamedEvent {
    pub var: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula<E = Event> {
    True,
    False,
    Event(E),
    Not(Box<Formula<E>>),
    And(Box<Formula<E>>, Box<Formula<E>>),
    Or(Box<Formula<E>>, Box<Formula<E>>),
}

impl<E> Formula<E> {
    pub fn not(f: Self) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Self, r: Self) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Self, r: Self) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    /// Left-nested conjunction; `True` when empty.
    pub fn all(items: impl IntoIterator<Item = Self>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    pub(crate) fn events<'a>(&'a self, out: &mut Vec<&'a E>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Event(e) => out.push(e),
            Formula::Not(f) => f.events(out),
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.events(out);
                r.events(out);
            }
        }
    }

    fn flatten_and<'a>(&'a self, out: &mut Vec<&'a E>) -> bool {
        match self {
            Formula::Event(e) => {
                out.push(e);
                true
            }
            Formula::And(l, r) => l.flatten_and(out) && r.flatten_and(out),
            _ => false,
        }
    }
}

impl Formula<Event> {
    pub fn event(var: Endo, value: usize) -> Self {
        Formula::Event(Event { var, value })
    }

    pub fn eval(&self, world: &World) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Event(e) => world.satisfies(e),
            Formula::Not(f) => !f.eval(world),
            Formula::And(l, r) => l.eval(world) && r.eval(world),
            Formula::Or(l, r) => l.eval(world) || r.eval(world),
        }
    }

    /// Endogenous variables mentioned.
    pub fn vars(&self) -> BTreeSet<Endo> {
        let mut out = Vec::new();
        self.events(&mut out);
        out.into_iter().map(|e| e.var).collect()
    }

    /// The events of a conjunction `X1=x1 & ... & Xk=xk`, sorted by variable.
    /// A repeated event is kept once; conflicting values are rejected.
    pub fn conjuncts(&self) -> Result<Vec<Event>> {
        let mut out = Vec::new();
        if !self.flatten_and(&mut out) {
            return Err(Error::NotAConjunction);
        }
        let mut events: Vec<Event> = out.into_iter().copied().collect();
        events.sort();
        events.dedup();
        if events.windows(2).any(|w| w[0].var == w[1].var) {
            return Err(Error::NotAConjunction);
        }
        Ok(events)
    }

    pub fn conjunction(events: &[Event]) -> Self {
        Formula::all(events.iter().map(|e| Formula::Event(*e)))
    }

    /// Text form accepted back by the formula parser.
    pub fn display(&self, sig: &Signature) -> String {
        self.render(sig, 0)
    }

    // Precedence levels: 0 = or, 1 = and, 2 = unary/atom.
    fn render(&self, sig: &Signature, level: u8) -> String {
        match self {
            Formula::True => "true".into(),
            Formula::False => "false".into(),
            Formula::Event(e) => format!(
                "{}={}",
                sig.name(e.var),
                value_text(sig.value_name(e.var, e.value))
            ),
            Formula::Not(f) => format!("!{}", f.render(sig, 2)),
            Formula::And(l, r) => {
                let s = format!("{} & {}", l.render(sig, 1), r.render(sig, 2));
                if level > 1 {
                    format!("({s})")
                } else {
                    s
                }
            }
            Formula::Or(l, r) => {
                let s = format!("{} | {}", l.render(sig, 0), r.render(sig, 1));
                if level > 0 {
                    format!("({s})")
                } else {
                    s
                }
            }
        }
    }
}

/// Writes a value bare when it lexes as an identifier or integer, else quoted.
pub fn value_text(value: &str) -> String {
    let ident = value
        .chars()
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && value.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && value != "true"
        && value != "false";
    let integer = value.parse::<i64>().is_ok() && !value.starts_with('+');
    if ident || integer {
        value.to_string()
    } else {
        serde_json::to_string(value).expect("strings serialize")
    }
}

impl Formula<NamedEvent> {
    pub fn bind(&self, sig: &Signature) -> Result<Formula> {
        Ok(match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Event(e) => Formula::Event(sig.event(&e.var, &e.value)?),
            Formula::Not(f) => Formula::not(f.bind(sig)?),
            Formula::And(l, r) => Formula::and(l.bind(sig)?, r.bind(sig)?),
            Formula::Or(l, r) => Formula::or(l.bind(sig)?, r.bind(sig)?),
        })
    }
}

/// `[Y <- y] phi`, with an empty intervention meaning plain `phi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CausalFormula {
    pub intervention: Intervention,
    pub body: Formula,
}

impl CausalFormula {
    pub fn plain(body: Formula) -> Self {
        CausalFormula {
            intervention: Intervention::empty(),
            body,
        }
    }

    pub fn under(intervention: Intervention, body: Formula) -> Self {
        CausalFormula { intervention, body }
    }

    pub fn display(&self, sig: &Signature) -> String {
        if self.intervention.is_empty() {
            self.body.display(sig)
        } else {
            let ivs: Vec<String> = self
                .intervention
                .iter()
                .map(|(v, i)| format!("{} <- {}", sig.name(v), value_text(sig.value_name(v, i))))
                .collect();
            format!("[{}] ({})", ivs.join(", "), self.body.display(sig))
        }
    }
}

/// A parsed formula whose names are not yet checked against a signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedFormula {
    pub intervention: Vec<NamedEvent>,
    pub body: Formula<NamedEvent>,
}

impl ParsedFormula {
    pub fn bind(&self, sig: &Signature) -> Result<CausalFormula> {
        let iv = Intervention::from_names(
            sig,
            self.intervention
                .iter()
                .map(|e| (e.var.as_str(), e.value.as_str())),
        )?;
        Ok(CausalFormula::under(iv, self.body.bind(sig)?))
    }

    /// Names of all variables mentioned, intervention first.
    pub fn mentioned(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.body.events(&mut out);
        self.intervention
            .iter()
            .chain(out)
            .map(|e| e.var.as_str())
            .collect()
    }
}
